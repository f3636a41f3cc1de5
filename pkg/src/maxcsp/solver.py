"""Exact exponential-time reference solver.

This is the ground-truth oracle for every transformation check: it
enumerates all 2**n assignments and evaluates the formula as the weighted
sum of satisfied applications, straight from the truth tables.  It never
goes through the polynomial machinery it is used to validate.

Two engines share the same semantics: a plain-Python sweep for small n and
a vectorized numpy sweep for larger n.  The numpy engine precomputes, per
distinct index tuple, the weighted sum of the truth tables applied to it,
so each tuple costs one gather per assignment block.  The witness tie-break
is the lexicographically smallest maximizer (assignment bits read x1 first,
which matches ascending numeric order of the assignment index).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraints import row_to_bits
from .errors import CapExceededError
from .formulas import Formula

ORACLE_CAP = 24
_NUMPY_MIN_VARS = 12
_CHUNK_BITS = 20
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class SolveResult:
    optimum: int
    witness: tuple[int, ...]

    def decision(self, t: int) -> bool:
        return self.optimum >= t


@dataclass(frozen=True)
class _Sweep:
    optimum: int
    witness_index: int
    exact_hit: bool


def _sweep_python(phi: Formula, t_exact) -> _Sweep:
    n = phi.nvars
    apps = [(a.constraint.table,
             tuple(n - i for i in a.indices),  # bit position of each index
             a.weight)
            for a in phi.applications]
    best = None
    best_idx = 0
    exact_hit = False
    for m in range(1 << n):
        v = 0
        for table, shifts, w in apps:
            r = 0
            for s in shifts:
                r = (r << 1) | ((m >> s) & 1)
            if table[r]:
                v += w
        if best is None or v > best:
            best, best_idx = v, m
        if t_exact is not None and v == t_exact:
            exact_hit = True
    return _Sweep(best if best is not None else 0, best_idx, exact_hit)


def _grouped_tables(phi: Formula) -> list[tuple[tuple[int, ...], np.ndarray]]:
    groups: dict[tuple[int, ...], np.ndarray] = {}
    for a in phi.applications:
        wt = groups.get(a.indices)
        if wt is None:
            wt = np.zeros(1 << len(a.indices), dtype=np.int64)
            groups[a.indices] = wt
        wt += a.weight * np.asarray(a.constraint.table, dtype=np.int64)
    return sorted(groups.items())


def _sweep_numpy(phi: Formula, t_exact) -> _Sweep:
    n = phi.nvars
    groups = _grouped_tables(phi)
    best = None
    best_idx = 0
    exact_hit = False
    chunk = 1 << min(n, _CHUNK_BITS)
    for start in range(0, 1 << n, chunk):
        base = np.arange(start, start + chunk, dtype=np.int64)
        values = np.zeros(chunk, dtype=np.int64)
        for indices, wtable in groups:
            if indices:
                r = np.zeros(chunk, dtype=np.int64)
                for i in indices:
                    np.left_shift(r, 1, out=r)
                    np.bitwise_or(r, (base >> (n - i)) & 1, out=r)
                values += wtable[r]
            else:
                values += wtable[0]
        local_best = int(values.max()) if len(values) else 0
        if best is None or local_best > best:
            best = local_best
            best_idx = start + int(values.argmax())
        if t_exact is not None and not exact_hit:
            exact_hit = bool((values == t_exact).any())
    return _Sweep(best if best is not None else 0, best_idx, exact_hit)


def _sweep(phi: Formula, t_exact=None, cap: int = ORACLE_CAP) -> _Sweep:
    if phi.nvars > cap:
        raise CapExceededError(
            f"oracle: {phi.nvars} variables exceeds cap {cap}")
    if not phi.applications:
        return _Sweep(0, 0, t_exact == 0 if t_exact is not None else False)
    if phi.nvars >= _NUMPY_MIN_VARS and phi.total_weight < _INT64_SAFE:
        return _sweep_numpy(phi, t_exact)
    return _sweep_python(phi, t_exact)


def brute_force(phi: Formula, cap: int = ORACLE_CAP) -> SolveResult:
    """Exhaustive optimum with deterministic (lex-smallest) witness."""
    s = _sweep(phi, None, cap)
    return SolveResult(s.optimum, row_to_bits(s.witness_index, phi.nvars))


def decisions(phi: Formula, t: int | None = None,
              cap: int = ORACLE_CAP) -> tuple[bool, bool]:
    """Both decision modes from one enumeration: (exists phi(x) >= t,
    exists phi(x) = t)."""
    t = phi.threshold if t is None else t
    exact_possible = abs(t) <= phi.total_weight
    s = _sweep(phi, t if exact_possible else None, cap)
    return s.optimum >= t, s.exact_hit if exact_possible else False


def decide(phi: Formula, t: int | None = None, cap: int = ORACLE_CAP) -> bool:
    """Is there an assignment with phi(x) >= t?"""
    t = phi.threshold if t is None else t
    return _sweep(phi, None, cap).optimum >= t


def decide_exact(phi: Formula, t: int | None = None, cap: int = ORACLE_CAP) -> bool:
    """Is there an assignment with phi(x) = t exactly?"""
    t = phi.threshold if t is None else t
    if abs(t) > phi.total_weight:
        return False
    return _sweep(phi, t, cap).exact_hit


def check_equivalence(phi1: Formula, t1: int | None, phi2: Formula,
                      t2: int | None, mode: str = "geq",
                      cap: int = ORACLE_CAP) -> bool:
    """Do the two thresholded instances agree, as in the transformation
    conditions: mode "geq" compares the >= decisions, "eq" the = decisions."""
    t1 = phi1.threshold if t1 is None else t1
    t2 = phi2.threshold if t2 is None else t2
    if mode == "geq":
        return decide(phi1, t1, cap) == decide(phi2, t2, cap)
    if mode == "eq":
        return decide_exact(phi1, t1, cap) == decide_exact(phi2, t2, cap)
    raise ValueError(f"unknown equivalence mode {mode!r}")
