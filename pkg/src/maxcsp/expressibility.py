"""Constructive expressibility: representing low-degree polynomials as
rational combinations of constraints expressible from one constraint with
constants.

Two pieces:

* degree witnesses: for every 1 <= d <= deg(f) a constants-only pattern
  turning f into a d-ary constraint whose characteristic polynomial has
  degree exactly d (nonzero leading coefficient), built by the inductive
  descent: start from a nonzero top-degree monomial with the other
  positions zeroed, then repeatedly either zero out the variable missing
  from a nonzero next-degree monomial or substitute 1 into the last
  position when all next-degree coefficients vanish.

* decompose: peel the target polynomial degree by degree, subtracting
  (alpha_S / beta_d) * P_{f_d} per nonzero top monomial, and emit the final
  constant through a satisfying assignment of f.  The result is a formal
  term-map identity, which is re-checked by full expansion before return.

Tie-breaking is canonical everywhere (monomials scanned degree-descending
then lexicographically; the zero-out branch is tried before substitute-1)
so the output is deterministic and golden-testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .constraints import (MODE_CONSTANTS, Constraint, ConstraintLanguage,
                          SubstitutionPattern, apply_pattern, identity_pattern,
                          row_to_bits)
from .errors import MaxCspError, PreconditionError
from .polynomials import (MultilinearPolynomial, ZERO, characteristic_polynomial,
                          degree_of_constraint, monomial_key)


@dataclass(frozen=True)
class DegreeWitness:
    degree: int
    pattern: SubstitutionPattern
    constraint: Constraint
    leading_coefficient: Fraction


@dataclass(frozen=True)
class CombinationTerm:
    pattern: SubstitutionPattern          # constants-only pattern over the base
    constraint: Constraint                # apply_pattern(base, pattern)
    indices: tuple[int, ...]              # variables the term is applied to
    coefficient: Fraction

    def polynomial(self) -> MultilinearPolynomial:
        poly = characteristic_polynomial(self.constraint)
        return poly.compose_at(self.indices).scale(self.coefficient)


@dataclass(frozen=True)
class LinearCombination:
    base: Constraint
    nvars: int
    terms: tuple[CombinationTerm, ...]

    def expand(self) -> MultilinearPolynomial:
        acc = ZERO
        for t in self.terms:
            acc = acc + t.polynomial()
        return acc

    def evaluate(self, bits) -> Fraction:
        """Pointwise value using the constraints themselves, not their
        polynomials (the Proposition-level consequence)."""
        total = Fraction(0)
        for t in self.terms:
            args = [bits[i - 1] for i in t.indices]
            total += t.coefficient * t.constraint.value(args)
        return total


def _compose_steps(k: int, steps) -> SubstitutionPattern:
    """Flatten a chain of per-level substitutions into one pattern over f."""
    slots: list = list(range(1, k + 1))
    for step in steps:
        slots = [step[s - 1] if isinstance(s, int) else s for s in slots]
    arity = max((s for s in slots if isinstance(s, int)), default=0)
    return SubstitutionPattern(arity, tuple(slots), MODE_CONSTANTS)


_witness_cache: dict[tuple[Constraint, int], DegreeWitness] = {}


def find_degree_witness(f: Constraint, d: int) -> DegreeWitness:
    """A d-ary constraint expressible by f with constants whose polynomial
    has degree exactly d, for any 1 <= d <= deg(f)."""
    if f.is_trivial():
        raise PreconditionError(f"{f.name} is trivial")
    deg_f = degree_of_constraint(f)
    if not 1 <= d <= deg_f:
        raise PreconditionError(
            f"requested degree {d} outside 1..deg({f.name}) = {deg_f}")
    key = (f, d)
    if key in _witness_cache:
        return _witness_cache[key]

    # Base level: keep a nonzero top-degree monomial, zero the rest.
    poly = characteristic_polynomial(f)
    top = sorted((m for m in poly.terms if len(m) == deg_f), key=monomial_key)[0]
    positions = sorted(top)
    base_step = ["0"] * f.arity
    for new, j in enumerate(positions, start=1):
        base_step[j - 1] = new
    steps = [base_step]

    level = deg_f
    while True:
        pattern = _compose_steps(f.arity, steps)
        constraint = apply_pattern(f, pattern)
        cpoly = characteristic_polynomial(constraint)
        lead = cpoly.coefficient(range(1, level + 1))
        if cpoly.degree != level or not lead:
            raise MaxCspError(
                f"witness construction failed for ({f.name}, {level})")
        witness = DegreeWitness(level, pattern, constraint, lead)
        _witness_cache.setdefault((f, level), witness)
        if level == d:
            return witness

        # Descent: prefer zeroing the variable missing from a nonzero
        # (level-1)-degree monomial; otherwise set the last position to 1.
        lower = sorted((m for m in cpoly.terms if len(m) == level - 1),
                       key=monomial_key)
        step: list = [None] * level
        if lower:
            missing = (set(range(1, level + 1)) - lower[0]).pop()
            for u in range(1, level + 1):
                step[u - 1] = "0" if u == missing else (u if u < missing else u - 1)
        else:
            step = list(range(1, level)) + ["1"]
        steps.append(step)
        level -= 1


def decompose(target: MultilinearPolynomial, f: Constraint) -> LinearCombination:
    """Write the target as sum alpha_i * P_{g_i}(x_{j...}) with every g_i
    expressible by f with constants; a formal identity, verified by full
    expansion before returning."""
    if f.is_trivial():
        raise PreconditionError(f"{f.name} is trivial")
    deg_f = degree_of_constraint(f)
    if target.degree > deg_f:
        raise PreconditionError(
            f"target degree {target.degree} exceeds deg({f.name}) = {deg_f}")
    nvars = target.max_index()

    terms: list[CombinationTerm] = []
    if target == characteristic_polynomial(f):
        # Self-decomposition: one identity term.
        terms.append(CombinationTerm(identity_pattern(f.arity), f,
                                     tuple(range(1, f.arity + 1)), Fraction(1)))
        residual = ZERO
    else:
        residual = target
        for d in range(target.degree, 0, -1):
            level = sorted((m for m in residual.terms if len(m) == d),
                           key=monomial_key)
            if not level:
                continue
            witness = find_degree_witness(f, d)
            for mono in level:
                alpha = residual.coefficient(mono) / witness.leading_coefficient
                idx = tuple(sorted(mono))
                term = CombinationTerm(witness.pattern, witness.constraint,
                                       idx, alpha)
                terms.append(term)
                residual = residual - term.polynomial()
        const = residual.coefficient(())
        if const:
            sat = f.satisfying_rows()[0]
            slots = tuple(str(b) for b in row_to_bits(sat, f.arity))
            pattern = SubstitutionPattern(0, slots, MODE_CONSTANTS)
            constraint = apply_pattern(f, pattern)
            term = CombinationTerm(pattern, constraint, (), const)
            terms.append(term)
            residual = residual - term.polynomial()

    combo = LinearCombination(f, nvars, tuple(terms))
    if combo.expand() != target:
        raise MaxCspError(f"decomposition of degree-{target.degree} target "
                          f"over {f.name} failed its identity check")
    return combo


def max_degree_member(language: ConstraintLanguage) -> Constraint:
    """The name-first constraint of maximum degree; must be non-trivial."""
    candidates = [c for c in language.non_trivial()]
    if not candidates:
        raise PreconditionError(f"language {language.name!r} is trivial")
    best = max(degree_of_constraint(c) for c in candidates)
    return sorted((c for c in candidates if degree_of_constraint(c) == best),
                  key=lambda c: c.name)[0]


def language_denominator(source: ConstraintLanguage, f: Constraint
                         ) -> tuple[int, dict[str, LinearCombination]]:
    """The common denominator beta and, per source constraint g, the
    combination rescaled to integer coefficients representing beta * g."""
    combos = {}
    denominators = [1]
    for g in sorted(source, key=lambda c: c.name):
        combo = decompose(characteristic_polynomial(g), f)
        combos[g.name] = combo
        denominators.extend(t.coefficient.denominator for t in combo.terms)
    beta = lcm(*denominators)
    scaled = {}
    for name, combo in combos.items():
        scaled[name] = LinearCombination(
            combo.base, combo.nvars,
            tuple(CombinationTerm(t.pattern, t.constraint, t.indices,
                                  t.coefficient * beta)
                  for t in combo.terms))
    return beta, scaled
