"""Linear program container and solution types.

Maximization over nonnegative variables with optional per-variable bounds
and <=, >=, = row constraints. Small and dense on purpose: every LP in this
package has at most a few hundred rows.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from backhaulopt.errors import DimensionMismatch, NonPositiveInput


class Relation(enum.Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class Constraint:
    coeffs: np.ndarray
    relation: Relation
    rhs: float


class LinearProgram:
    """maximize c.x subject to row constraints and lower <= x <= upper."""

    def __init__(self, num_vars: int, names: list[str] | None = None):
        if num_vars < 1:
            raise NonPositiveInput(f"num_vars must be >= 1, got {num_vars}")
        if names is not None and len(names) != num_vars:
            raise DimensionMismatch(f"{len(names)} names for {num_vars} variables")
        self.num_vars = num_vars
        self.names = list(names) if names is not None else [f"x{i}" for i in range(num_vars)]
        self.objective = np.zeros(num_vars)
        self.constraints: list[Constraint] = []
        self.lower = np.zeros(num_vars)
        self.upper = np.full(num_vars, np.inf)

    def set_objective(self, coeffs) -> None:
        c = np.asarray(coeffs, dtype=float)
        if c.shape != (self.num_vars,):
            raise DimensionMismatch(f"objective length {c.size} != {self.num_vars} variables")
        self.objective = c

    def add_constraint(self, coeffs, relation: Relation, rhs: float) -> None:
        a = np.asarray(coeffs, dtype=float)
        if a.shape != (self.num_vars,):
            raise DimensionMismatch(f"constraint length {a.size} != {self.num_vars} variables")
        self.constraints.append(Constraint(a, relation, float(rhs)))

    def set_bounds(self, index: int, lower: float = 0.0, upper: float = np.inf) -> None:
        if not 0 <= index < self.num_vars:
            raise DimensionMismatch(f"variable index {index} out of range")
        if lower < 0:
            raise NonPositiveInput(f"lower bound of {self.names[index]} must be >= 0")
        if upper < lower:
            raise NonPositiveInput(f"empty bound interval for {self.names[index]}")
        self.lower[index] = float(lower)
        self.upper[index] = float(upper)

    def dump(self) -> str:
        """Human-readable rendering, one constraint per line."""

        def terms(coeffs):
            parts = []
            for c, name in zip(coeffs, self.names):
                if c == 0:
                    continue
                sign = "-" if c < 0 else ("+" if parts else "")
                mag = abs(c)
                parts.append(f"{sign} {mag:g} {name}" if parts else f"{sign}{mag:g} {name}")
            return " ".join(parts) if parts else "0"

        lines = [f"maximize {terms(self.objective)}", "subject to"]
        for con in self.constraints:
            lines.append(f"  {terms(con.coeffs)} {con.relation.value} {con.rhs:g}")
        for i in range(self.num_vars):
            hi = "inf" if np.isinf(self.upper[i]) else f"{self.upper[i]:g}"
            lines.append(f"  {self.lower[i]:g} <= {self.names[i]} <= {hi}")
        return "\n".join(lines)


@dataclass
class LpSolution:
    status: LpStatus
    objective_value: float | None = None
    assignment: np.ndarray | None = None
    iterations: int = 0
    variables: dict[str, float] = field(default_factory=dict)
    residual: float = 0.0  # worst constraint violation of the returned point

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL
