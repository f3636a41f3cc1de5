"""Characteristic polynomials, degrees, symmetric families, serialization."""

import random
from fractions import Fraction

import pytest

from maxcsp.constraints import (MODE_LIT, MODE_NEG, MODE_TF, Constraint,
                                ConstraintLanguage, and_constraint, closure,
                                ex_constraint, nae_constraint, or_constraint,
                                recursive_nae, xor_constraint,
                                SubstitutionPattern, MODE_LITERALS,
                                apply_pattern)
from maxcsp.errors import CapExceededError
from maxcsp.io_formats import emit_polynomial, parse_polynomial
from maxcsp.polynomials import (characteristic_polynomial,
                                characteristic_polynomial_by_expansion,
                                degree_of_constraint, degree_of_language,
                                from_terms, symmetric_formula)


def poly(*pairs):
    return from_terms((frozenset(m), c) for m, c in pairs)


def test_or2_golden():
    assert characteristic_polynomial(or_constraint(2)) == poly(
        ([1], 1), ([2], 1), ([1, 2], -1))


def test_nae3_golden():
    assert characteristic_polynomial(nae_constraint(3)) == poly(
        ([1], 1), ([2], 1), ([3], 1), ([1, 2], -1), ([1, 3], -1), ([2, 3], -1))


def test_ex3_golden():
    assert characteristic_polynomial(ex_constraint(3)) == poly(
        ([1], 1), ([2], 1), ([3], 1),
        ([1, 2], -2), ([1, 3], -2), ([2, 3], -2), ([1, 2, 3], 3))


def test_or3_substituted_golden():
    g = apply_pattern(or_constraint(3), SubstitutionPattern(3, (1, 2, -3), MODE_LITERALS))
    assert characteristic_polynomial(g) == poly(
        ([], 1), ([3], -1), ([1, 3], 1), ([2, 3], 1), ([1, 2, 3], -1))


def test_substitute_negation_matches_worked_example():
    # replacing x3 by 1 - x3 in P_OR3 gives the substituted polynomial
    p = characteristic_polynomial(or_constraint(3)).substitute_negation(3)
    assert p == poly(([], 1), ([3], -1), ([1, 3], 1), ([2, 3], 1), ([1, 2, 3], -1))


def test_constant_zero_constraint():
    zero = Constraint("z", 2, (0, 0, 0, 0))
    p = characteristic_polynomial(zero)
    assert p.is_zero() and p.degree == 0


def test_add_scale_basics():
    x1 = poly(([1], 1))
    assert (x1 + x1.scale(-1)).is_zero()
    p = poly(([1], 1), ([2], 1), ([1, 2], -2))
    assert p.scale(5) == poly(([1], 5), ([2], 5), ([1, 2], -10))


def test_evaluate():
    nae = characteristic_polynomial(nae_constraint(3))
    assert nae.evaluate((1, 1, 1)) == 0
    assert characteristic_polynomial(or_constraint(2)).evaluate((1, 0)) == 1
    xor = poly(([1], 1), ([2], 1), ([1, 2], -2))
    assert xor.evaluate((1, 1)) == 0
    with pytest.raises(ValueError):
        xor.evaluate((1,))


def test_agreement_with_truth_table_exhaustive():
    rng = random.Random(3)
    cases = [or_constraint(2), nae_constraint(3), ex_constraint(3),
             xor_constraint(5), nae_constraint(6), and_constraint(4)]
    cases += [Constraint("r", k, tuple(rng.randint(0, 1) for _ in range(1 << k)))
              for k in (1, 2, 3, 4, 5, 6) for _ in range(6)]
    for c in cases:
        p = characteristic_polynomial(c)
        assert p.is_integral()
        for row in range(1 << c.arity):
            bits = [(row >> (c.arity - 1 - i)) & 1 for i in range(c.arity)]
            assert p.evaluate(bits) == c.value(bits)


def test_moebius_equals_expansion():
    rng = random.Random(5)
    cases = [nae_constraint(4), ex_constraint(4), xor_constraint(4),
             or_constraint(3)]
    cases += [Constraint("r", k, tuple(rng.randint(0, 1) for _ in range(1 << k)))
              for k in (1, 2, 3, 4, 5, 6) for _ in range(4)]
    for c in cases:
        assert characteristic_polynomial(c) == characteristic_polynomial_by_expansion(c)


def test_arity_cap():
    with pytest.raises(CapExceededError):
        characteristic_polynomial(and_constraint(5), cap=4)


@pytest.mark.parametrize("kind,builder", [
    ("NAE", nae_constraint), ("XOR", xor_constraint), ("EX", ex_constraint)])
def test_symmetric_formula_matches_tables(kind, builder):
    lo = 2 if kind == "NAE" else 1
    for k in range(lo, 7):
        assert symmetric_formula(kind, k) == characteristic_polynomial(builder(k))


def test_symmetric_formula_goldens():
    assert symmetric_formula("XOR", 2) == poly(([1], 1), ([2], 1), ([1, 2], -2))
    assert symmetric_formula("NAE", 3) == poly(
        ([1], 1), ([2], 1), ([3], 1), ([1, 2], -1), ([1, 3], -1), ([2, 3], -1))
    assert symmetric_formula("EX", 1) == poly(([1], 1))


def test_degree_table():
    for k in range(2, 7):
        assert degree_of_constraint(nae_constraint(k)) == (k - 1 if k % 2 else k)
        assert degree_of_constraint(xor_constraint(k)) == k
        assert degree_of_constraint(ex_constraint(k)) == k
        assert degree_of_constraint(and_constraint(k)) == k


def test_recursive_nae_degree():
    f2 = recursive_nae(2)
    assert f2.arity == 9
    assert degree_of_constraint(f2) == 4


@pytest.mark.parametrize("mode", [MODE_TF, MODE_LIT, MODE_NEG])
@pytest.mark.parametrize("key", ["xor", "nae3", "ex3", "or2", "dicut", "eq"])
def test_closure_preserves_degree(key, mode):
    from maxcsp.languages import builtin_language
    lang = builtin_language(key)
    assert degree_of_language(closure(lang, mode)) == degree_of_language(lang)


def test_closure_preserves_degree_larger_arity():
    for c in (nae_constraint(4), xor_constraint(4)):
        lang = ConstraintLanguage("t", (c,))
        for mode in (MODE_TF, MODE_LIT, MODE_NEG):
            assert degree_of_language(closure(lang, mode)) == degree_of_constraint(c)


def test_serialization_round_trip():
    p = poly(([], Fraction(1, 3)), ([2], -2), ([1, 3], 5))
    text = emit_polynomial(p, 3)
    assert text == "poly 3 3\n1/3 -\n-2 2\n5 1 3\n"
    parsed, nvars = parse_polynomial(text)
    assert parsed == p and nvars == 3
