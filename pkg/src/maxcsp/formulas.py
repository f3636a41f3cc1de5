"""Weighted constraint systems (formulas) and their algebra.

A formula is a set of weighted constraint applications over variables
1..nvars, tagged with a weight range ("Z" or "N"), a decision threshold, and
an optional declared weight exponent c asserting ||phi|| <= nvars**c.
Applications are kept in canonical sorted order; duplicate (constraint,
tuple) pairs are merged only by formula_sum, never implicitly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .constraints import Constraint, ConstraintLanguage
from .errors import FormatError

RANGE_Z = "Z"
RANGE_N = "N"


@dataclass(frozen=True)
class Application:
    constraint: Constraint
    indices: tuple[int, ...]
    weight: int

    def __post_init__(self):
        if len(self.indices) != self.constraint.arity:
            raise FormatError(
                f"{self.constraint.name} has arity {self.constraint.arity}, "
                f"got indices {self.indices}")

    def sort_key(self):
        return (self.constraint.name, self.indices, self.weight)

    def satisfied_by(self, bits: Sequence[int]) -> int:
        row = 0
        for i in self.indices:
            row = (row << 1) | bits[i - 1]
        return self.constraint.table[row]


@dataclass(frozen=True)
class Formula:
    nvars: int
    applications: tuple[Application, ...]
    weight_range: str = RANGE_N
    threshold: int = 0
    declared_weight_exponent: int | None = None

    def __post_init__(self):
        if self.nvars < 1:
            raise FormatError("formula needs at least one variable")
        if self.weight_range not in (RANGE_Z, RANGE_N):
            raise FormatError(f"weight range must be Z or N, got {self.weight_range!r}")
        for app in self.applications:
            for i in app.indices:
                if not 1 <= i <= self.nvars:
                    raise FormatError(
                        f"index {i} out of range 1..{self.nvars} "
                        f"in application of {app.constraint.name}")
            if self.weight_range == RANGE_N and app.weight < 0:
                raise FormatError(
                    f"weight range violation: negative weight {app.weight} "
                    f"under N for {app.constraint.name}{app.indices}")
        object.__setattr__(self, "applications",
                           tuple(sorted(self.applications, key=Application.sort_key)))
        if self.declared_weight_exponent is not None:
            if self.total_weight > self.nvars ** self.declared_weight_exponent:
                raise FormatError(
                    f"||phi|| = {self.total_weight} exceeds declared bound "
                    f"n**{self.declared_weight_exponent}")

    @property
    def size(self) -> int:
        """|phi|: number of applications."""
        return len(self.applications)

    @property
    def total_weight(self) -> int:
        """||phi||: sum of absolute weights."""
        return sum(abs(a.weight) for a in self.applications)

    def value(self, bits: Sequence[int]) -> int:
        """phi(x): total weight of applications satisfied by the assignment."""
        if len(bits) != self.nvars:
            raise FormatError(f"assignment has {len(bits)} bits, need {self.nvars}")
        return sum(a.weight for a in self.applications if a.satisfied_by(bits))

    def constraints_used(self) -> tuple[Constraint, ...]:
        seen: dict[str, Constraint] = {}
        for a in self.applications:
            seen.setdefault(a.constraint.name, a.constraint)
        return tuple(seen[k] for k in sorted(seen))

    def replace(self, **kwargs) -> "Formula":
        data = {
            "nvars": self.nvars,
            "applications": self.applications,
            "weight_range": self.weight_range,
            "threshold": self.threshold,
            "declared_weight_exponent": self.declared_weight_exponent,
        }
        data.update(kwargs)
        return Formula(**data)


def formula_sum(a: Formula, b: Formula) -> Formula:
    """Union of the applications, merging pairs that share the same
    constraint and the same index tuple by adding weights.

    The variable universe is the union; the thresholds add (callers in the
    reduction pipeline always set the threshold explicitly afterwards).
    """
    merged: dict[tuple, tuple[Constraint, tuple[int, ...], int]] = {}
    for app in a.applications + b.applications:
        key = (app.constraint.name, app.constraint.signature(), app.indices)
        if key in merged:
            c, idx, w = merged[key]
            merged[key] = (c, idx, w + app.weight)
        else:
            merged[key] = (app.constraint, app.indices, app.weight)
    apps = tuple(Application(c, idx, w) for c, idx, w in merged.values())
    weight_range = RANGE_N if (a.weight_range == RANGE_N and b.weight_range == RANGE_N) else RANGE_Z
    return Formula(max(a.nvars, b.nvars), apps, weight_range,
                   a.threshold + b.threshold)


def scalar_mul(alpha: int, phi: Formula) -> Formula:
    """Multiply every weight (and the threshold) by an integer."""
    apps = tuple(Application(a.constraint, a.indices, alpha * a.weight)
                 for a in phi.applications)
    weight_range = RANGE_N if (phi.weight_range == RANGE_N and alpha >= 0) else RANGE_Z
    return Formula(phi.nvars, apps, weight_range, alpha * phi.threshold)


def empty_formula(nvars: int = 1, weight_range: str = RANGE_N,
                  threshold: int = 0) -> Formula:
    return Formula(nvars, (), weight_range, threshold)


def random_formula(language: ConstraintLanguage, nvars: int, napps: int,
                   weight_range: str = RANGE_N, max_weight: int = 8,
                   seed: int | random.Random = 0,
                   threshold: int | None = None) -> Formula:
    """Seed-parameterized random instance generator used by the test suite.

    Constraints are drawn uniformly from the language (arity-0 members are
    skipped), indices uniformly with repetition, weights uniformly from
    [0, max_weight] under N and [-max_weight, max_weight] under Z.  When no
    threshold is given, one is drawn from [-||phi||-1, ||phi||+1] so yes and
    no instances both occur.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    members = [c for c in language if c.arity >= 1]
    if not members:
        raise FormatError(f"language {language.name!r} has no applicable constraints")
    apps = []
    for _ in range(napps):
        c = rng.choice(members)
        idx = tuple(rng.randint(1, nvars) for _ in range(c.arity))
        if weight_range == RANGE_N:
            w = rng.randint(0, max_weight)
        else:
            w = rng.randint(-max_weight, max_weight)
        apps.append(Application(c, idx, w))
    phi = Formula(nvars, tuple(apps), weight_range, 0)
    if threshold is None:
        bound = phi.total_weight + 1
        threshold = rng.randint(-bound, bound)
    return phi.replace(threshold=threshold)
