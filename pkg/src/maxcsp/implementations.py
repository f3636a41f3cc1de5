"""Strict alpha-implementations: verification, bounded search, composition.

An implementation of a target constraint is a collection of unit-weight
applications over primary variables 1..p and auxiliary variables
p+1..p+q such that the maximum number of simultaneously satisfied
applications is exactly alpha when the target holds (for some auxiliary
setting) and at most alpha - 1 otherwise; strict if alpha - 1 is attained
for every unsatisfying primary assignment.

The searcher trusts nothing: every candidate, including the built-in
catalog entries, goes through the exhaustive verifier over all 2**(p+q)
assignments before being returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .constraints import (Constraint, ConstraintLanguage, dicut_constraint,
                          ex_constraint, nae_constraint, or_constraint,
                          xor_constraint, T, F, literal_variant)
from .errors import FormatError, MaxCspError, PreconditionError

DEFAULT_MAX_AUX = 2
DEFAULT_MAX_APPS = 4


@dataclass(frozen=True)
class Implementation:
    target: Constraint
    primary_arity: int
    aux_count: int
    applications: tuple[tuple[Constraint, tuple[int, ...]], ...]
    alpha: int
    strict: bool


@dataclass(frozen=True)
class VerifyResult:
    valid: bool
    alpha: int
    strict: bool


def _satisfied_counts(p: int, q: int,
                      applications) -> list[int]:
    """Per primary assignment, the max satisfied count over aux settings,
    plus (second list) whether each per-x count level is attained."""
    tot = p + q
    per_x_max = [0] * (1 << p)
    for m in range(1 << tot):
        count = 0
        for c, idx in applications:
            r = 0
            for i in idx:
                r = (r << 1) | ((m >> (tot - i)) & 1)
            count += c.table[r]
        x = m >> q
        if count > per_x_max[x]:
            per_x_max[x] = count
    return per_x_max


def verify_implementation(candidate: Implementation) -> VerifyResult:
    """Recompute alpha as the global maximum and check the three
    implementation conditions (plus strictness) exhaustively."""
    p, q = candidate.primary_arity, candidate.aux_count
    if candidate.target.arity != p:
        raise FormatError("primary arity does not match the target's arity")
    tot = p + q
    for c, idx in candidate.applications:
        if len(idx) != c.arity or any(not 1 <= i <= tot for i in idx):
            raise FormatError(f"application {c.name}{idx} out of range 1..{tot}")
    per_x_max = _satisfied_counts(p, q, candidate.applications)
    alpha = max(per_x_max)
    valid = alpha >= 1
    strict = True
    for x in range(1 << p):
        if candidate.target.table[x]:
            valid = valid and per_x_max[x] == alpha
        else:
            valid = valid and per_x_max[x] <= alpha - 1
            strict = strict and per_x_max[x] == alpha - 1
    return VerifyResult(valid, alpha, valid and strict)


def checked_implementation(target: Constraint, primary_arity: int,
                           aux_count: int, applications) -> Implementation:
    """Build an Implementation whose alpha/strict fields come from the
    verifier; raises if the candidate is not a valid implementation."""
    apps = tuple((c, tuple(idx)) for c, idx in applications)
    probe = Implementation(target, primary_arity, aux_count, apps, 1, False)
    res = verify_implementation(probe)
    if not res.valid:
        raise MaxCspError(f"not an implementation of {target.name}: {apps}")
    return Implementation(target, primary_arity, aux_count, apps,
                          res.alpha, res.strict)


def identity_implementation(c: Constraint) -> Implementation:
    return checked_implementation(c, c.arity, 0,
                                  ((c, tuple(range(1, c.arity + 1))),))


# ---------------------------------------------------------------------------
# Catalog of known implementations, re-verified on first use.


@dataclass(frozen=True)
class _CatalogEntry:
    label: str
    target: Constraint
    primary_arity: int
    aux_count: int
    applications: tuple[tuple[Constraint, tuple[int, ...]], ...]


def _entry(label, target, p, q, apps):
    return _CatalogEntry(label, target, p, q,
                         tuple((c, tuple(idx)) for c, idx in apps))


@lru_cache(maxsize=1)
def catalog() -> tuple[Implementation, ...]:
    """Known strict implementations of XOR, T, F; each is re-verified here
    before it is ever served."""
    xor = xor_constraint(2)
    or2 = or_constraint(2)
    or2nn = literal_variant(or2, {1, 2})      # ~x OR ~y
    nae3 = nae_constraint(3)
    ex3 = ex_constraint(3)
    dicut = dicut_constraint()
    entries = (
        _entry("xor-from-2sat", xor, 2, 0, [(or2, (1, 2)), (or2nn, (1, 2))]),
        _entry("xor-from-nae3", xor, 2, 0, [(nae3, (1, 2, 2))]),
        _entry("xor-from-ex3", xor, 2, 2, [(ex3, (1, 2, 3)), (ex3, (3, 3, 4))]),
        _entry("xor-from-xor", xor, 2, 0, [(xor, (1, 2))]),
        _entry("xor-from-dicut", xor, 2, 0, [(dicut, (1, 2)), (dicut, (2, 1))]),
        _entry("t-from-or2", T, 1, 0, [(or2, (1, 1))]),
        _entry("t-from-ex3", T, 1, 1, [(ex3, (1, 2, 2))]),
        _entry("t-from-dicut", T, 1, 1, [(dicut, (1, 2))]),
        _entry("f-from-or2nn", F, 1, 0, [(or2nn, (1, 1))]),
        _entry("f-from-ex3", F, 1, 1, [(ex3, (1, 1, 2))]),
        _entry("f-from-dicut", F, 1, 1, [(dicut, (2, 1))]),
    )
    verified = []
    for e in entries:
        impl = checked_implementation(e.target, e.primary_arity, e.aux_count,
                                      e.applications)
        if not impl.strict:
            raise MaxCspError(f"catalog entry {e.label} is not strict")
        verified.append(impl)
    return tuple(verified)


def _remap_to_language(impl: Implementation,
                       language: ConstraintLanguage) -> Implementation | None:
    """Rebind an implementation's constraints to same-table members of the
    language; None if some table is missing."""
    apps = []
    for c, idx in impl.applications:
        member = language.by_table(c.arity, c.table)
        if member is None:
            return None
        apps.append((member, idx))
    return checked_implementation(impl.target, impl.primary_arity,
                                  impl.aux_count, apps)


def search_implementation(language: ConstraintLanguage, target: Constraint,
                          max_aux: int = DEFAULT_MAX_AUX,
                          max_apps: int = DEFAULT_MAX_APPS,
                          use_catalog: bool = True) -> Implementation | None:
    """First verified strict implementation in canonical enumeration order
    (catalog first, then exhaustive search over application multisets);
    None when the caps are too small."""
    direct = language.by_table(target.arity, target.table)
    if direct is not None:
        return identity_implementation(direct)
    if use_catalog:
        for entry in catalog():
            if entry.target.signature() != target.signature():
                continue
            remapped = _remap_to_language(entry, language)
            if remapped is not None and remapped.strict:
                return remapped
    p = target.arity
    members = [c for c in sorted(language, key=lambda c: c.name) if c.arity >= 1]
    for q in range(max_aux + 1):
        tot = p + q
        space = [(c, idx) for c in members
                 for idx in itertools.product(range(1, tot + 1), repeat=c.arity)]
        for m in range(1, max_apps + 1):
            for combo in itertools.combinations_with_replacement(space, m):
                per_x_max = _satisfied_counts(p, q, combo)
                alpha = max(per_x_max)
                if alpha < 1:
                    continue
                ok = strict = True
                for x in range(1 << p):
                    if target.table[x]:
                        ok = ok and per_x_max[x] == alpha
                    else:
                        ok = ok and per_x_max[x] <= alpha - 1
                        strict = strict and per_x_max[x] == alpha - 1
                    if not ok:
                        break
                if ok and strict:
                    return Implementation(target, p, q, tuple(combo), alpha, True)
    return None


def compose_implementations(outer: Implementation,
                            bindings: dict[Constraint, Implementation]
                            ) -> Implementation:
    """Substitute inner implementations for the outer applications, giving
    each substitution fresh auxiliary variables; constraints without a
    binding are kept as-is.  All pieces must be strict; the composite is
    re-verified from scratch."""
    if not outer.strict:
        raise PreconditionError("outer implementation must be strict")
    for c, impl in bindings.items():
        if not impl.strict:
            raise PreconditionError(f"binding for {c.name} must be strict")
        if impl.target.signature() != c.signature():
            raise PreconditionError(
                f"binding target {impl.target.name} does not match {c.name}")
    apps: list[tuple[Constraint, tuple[int, ...]]] = []
    next_fresh = outer.primary_arity + outer.aux_count
    for c, idx in outer.applications:
        inner = bindings.get(c)
        if inner is None:
            apps.append((c, idx))
            continue
        aux_base = next_fresh
        next_fresh += inner.aux_count
        mapping = list(idx) + [aux_base + j + 1 for j in range(inner.aux_count)]
        for ic, iidx in inner.applications:
            apps.append((ic, tuple(mapping[v - 1] for v in iidx)))
    composite = checked_implementation(
        outer.target, outer.primary_arity,
        next_fresh - outer.primary_arity, apps)
    if not composite.strict:
        raise MaxCspError("composition lost strictness")
    return composite
