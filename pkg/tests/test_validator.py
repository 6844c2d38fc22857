"""Violation detection on tampered schedules, plus the fairness index."""

import copy

import pytest

import helpers
from backhaulopt.errors import AllZeroDemands
from backhaulopt.formulations import parse_setting, solve_equal_demand
from backhaulopt.scheduler import Schedule, build_schedule
from backhaulopt.validator import jain_index, validate_schedule


def _solved(topo, setting_name="MI-ER"):
    sol = solve_equal_demand(topo, parse_setting(setting_name)[0])
    return sol, build_schedule(topo, sol.p_first)


def _kinds(report):
    return {v.kind for v in report.violations}


def test_clean_schedule_reports_ok():
    topo = helpers.chain(hops=(2, 1))
    sol, sched = _solved(topo)
    report = validate_schedule(topo, sched, p_first=sol.p_first, demands=sol.per_bs)
    assert report.ok
    assert report.realized_equal_demand == pytest.approx(sol.d_b_gbps, abs=1e-9)
    assert report.realized_rates[1] == pytest.approx(6.65, abs=1e-6)


def test_footprint_tamper_detected():
    topo = helpers.chain(hops=(2, 1))
    sol, sched = _solved(topo)
    bad = copy.deepcopy(sched)
    s, e = bad.links[1].footprint[0]
    bad.links[1].footprint[0] = (s, e - 0.05)
    report = validate_schedule(topo, bad, p_first=sol.p_first)
    assert "FootprintMismatch" in _kinds(report)


def test_active_outside_footprint_detected():
    topo = helpers.star(2, hop=2)
    sol, sched = _solved(topo)
    bad = copy.deepcopy(sched)
    chain, s, e = bad.links[1].parent_side[0]
    shift = 0.9 - s
    bad.links[1].parent_side[0] = (chain, s + shift, e + shift)
    report = validate_schedule(topo, bad)
    assert "ActiveOutsideFootprint" in _kinds(report)


def test_chain_overlap_detected():
    topo = helpers.star(2, hop=1, chains={0: 1})
    sol, sched = _solved(topo, "MI-LR")
    bad = copy.deepcopy(sched)
    other = bad.links[2].parent_side[0]
    # drop link 2 onto link 1's slot on the same macro chain
    bad.links[2].parent_side[0] = bad.links[1].parent_side[0]
    bad.links[2].footprint = [tuple(bad.links[1].footprint[0])]
    bad.links[2].child_side = [bad.links[1].child_side[0]]
    report = validate_schedule(topo, bad)
    assert "ChainOverlap" in _kinds(report)
    assert other not in bad.links[2].parent_side


def test_bad_chain_index_detected():
    topo = helpers.star(2, hop=1)
    sol, sched = _solved(topo)
    bad = copy.deepcopy(sched)
    _, s, e = bad.links[1].parent_side[0]
    bad.links[1].parent_side[0] = (7, s, e)
    report = validate_schedule(topo, bad)
    assert "ChainOverlap" in _kinds(report)


def test_endpoint_overlap_detected():
    topo = helpers.chain(hops=(2,))
    sched = build_schedule(topo, {1: 0.5})
    bad = copy.deepcopy(sched)
    bad.links[1].child_side = list(bad.links[1].parent_side)  # relay can't do both
    report = validate_schedule(topo, bad)
    assert "EndpointOverlap" in _kinds(report)


def test_interference_overlap_detected():
    topo = helpers.star(2, hop=2, pairs=[(1, 2)])
    sol, sched = _solved(topo, "LI-ER")
    bad = copy.deepcopy(sched)
    bad.links[2] = copy.deepcopy(bad.links[1])  # identical timing on a partner
    bad.links[2].link_id = 2
    report = validate_schedule(topo, bad)
    assert "InterferenceOverlap" in _kinds(report)


def test_ratio_tamper_detected():
    topo = helpers.chain(hops=(2,))
    sched = build_schedule(topo, {1: 0.4})
    bad = copy.deepcopy(sched)
    chain, s, e = bad.links[1].child_side[0]
    bad.links[1].child_side[0] = (chain, s, e - 0.1)  # last link shortchanged
    report = validate_schedule(topo, bad)
    assert "RatioMismatch" in _kinds(report)


def test_solution_disagreement_detected():
    topo = helpers.star(2, hop=1)
    sol, sched = _solved(topo)
    report = validate_schedule(topo, sched, p_first={1: 0.3, 2: sol.p_first[2]})
    assert "RatioMismatch" in _kinds(report)


def test_capacity_shortfall_detected():
    topo = helpers.chain(hops=(2, 1))
    sol, sched = _solved(topo)
    doubled = {b: 2 * v for b, v in sol.per_bs.items()}
    report = validate_schedule(topo, sched, demands=doubled)
    assert "CapacityShortfall" in _kinds(report)


def test_missing_and_unknown_links_reported():
    topo = helpers.star(2, hop=1)
    report = validate_schedule(topo, Schedule(links={}, per_bs_chains={}))
    assert _kinds(report) == {"MissingLink"}
    sol, sched = _solved(topo)
    extra = copy.deepcopy(sched)
    stray = copy.deepcopy(extra.links[1])
    stray.link_id = 9
    extra.links[9] = stray
    report = validate_schedule(topo, extra)
    assert "UnknownLink" in _kinds(report)


def test_report_collects_multiple_violations():
    topo = helpers.chain(hops=(2, 1))
    sol, sched = _solved(topo)
    bad = copy.deepcopy(sched)
    del bad.links[2]
    s, e = bad.links[1].footprint[0]
    bad.links[1].footprint[0] = (s, e - 0.3)
    report = validate_schedule(topo, bad)
    assert len(report.violations) >= 2


def test_jain_index_values():
    assert jain_index([1.0, 1.0, 1.0, 1.0]) == 1.0  # exact, not approx
    assert jain_index([5.0, 0.0, 0.0, 0.0]) == pytest.approx(0.25, abs=1e-12)
    assert jain_index([2.0, 1.0]) == pytest.approx(0.9, abs=1e-12)
    assert jain_index({1: 3.3, 2: 3.3, 3: 3.3}) == 1.0
    with pytest.raises(AllZeroDemands):
        jain_index([])
    with pytest.raises(AllZeroDemands):
        jain_index([0.0, 0.0])
