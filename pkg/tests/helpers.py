"""Small topology builders shared across test modules."""

from __future__ import annotations

import random

from backhaulopt.generator import GeneratorConfig, generate_topology
from backhaulopt.model import MACRO, SMALL, BaseStation, NetworkTopology, make_link

RATE = 13.3  # round numbers make the frozen expectations exact decimals


def topology(links, pairs=(), chains=None):
    """Assemble a topology; radio chains default to the attached-link count."""
    ids = {0} | {l.child for l in links}
    attached = dict.fromkeys(ids, 0)
    for l in links:
        attached[l.parent] += 1
        attached[l.child] += 1
    chains = chains or {}
    stations = [
        BaseStation(b, MACRO if b == 0 else SMALL, chains.get(b, max(1, attached[b])))
        for b in sorted(ids)
    ]
    return NetworkTopology(stations, links, pairs)


def chain(hops=(2, 3), rate=RATE, chains=None, pairs=()):
    """M -> B1 -> B2 -> ... with one hop count per link."""
    links = [
        make_link(i + 1, i, i + 1, h, phy_rate_gbps=rate) for i, h in enumerate(hops)
    ]
    return topology(links, pairs, chains)


def star(n=2, hop=1, rate=RATE, chains=None, pairs=()):
    """Macro with n direct children, all with the same hop count."""
    links = [make_link(b, 0, b, hop, phy_rate_gbps=rate) for b in range(1, n + 1)]
    return topology(links, pairs, chains)


def random_small(seed, max_links=6, max_pairs=2, rate=RATE):
    """A generated topology with at most max_links links, sized by the seed."""
    rng = random.Random(seed * 7919 + 11)
    n = rng.randint(1, max_links)
    return generate_topology(
        GeneratorConfig(
            seed=seed,
            num_small_bs=n,
            macro_degree=rng.randint(1, n),
            max_small_children=rng.randint(1, 3),
            interference_pair_budget=rng.randint(0, max_pairs),
            phy_rate_gbps=rate,
        )
    )
