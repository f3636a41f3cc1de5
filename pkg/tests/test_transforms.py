"""Lemma-level transforms, chains, kernelization, the VC gadget."""

import random

import pytest

from maxcsp.constraints import MODE_LIT, MODE_TF, closure, xor_constraint
from maxcsp.errors import FormatError, PreconditionError
from maxcsp.formulas import Application, Formula, random_formula
from maxcsp.languages import builtin_language, gamma_d_sat
from maxcsp.polynomials import from_terms
from maxcsp.solver import brute_force, check_equivalence, decide
from maxcsp.transforms import (apply_poly, chain, chain_stages,
                               compress_to_polynomial, exp_cycle,
                               formula_polynomial, implement_lit, implement_tf,
                               kernelize, neg_to_base, signed_to_unsigned_neg,
                               unsigned_lit, vc_reduce, verify_transform)

XOR = xor_constraint(2)
XORL = builtin_language("xor")
E2LIN = builtin_language("e2lin")


def assert_equivalent(phi1, phi2, cert=None):
    assert check_equivalence(phi1, None, phi2, None, "geq")
    assert check_equivalence(phi1, None, phi2, None, "eq")
    if cert is not None:
        report = verify_transform(phi1, phi2, cert)
        failed = [c.name for c in report.checks if c.passed is False]
        assert not failed, failed


def random_cases(language, count, nvars, napps, weight_range, seed, max_weight=None):
    rng = random.Random(seed)
    cap = max_weight if max_weight is not None else nvars ** 3
    for _ in range(count):
        yield random_formula(language, nvars, napps, weight_range,
                             max_weight=cap, seed=rng.randrange(10 ** 9))


# -- signed reductions ------------------------------------------------------

def test_neg_to_base_golden():
    neq = E2LIN.get("~XOR")
    phi = Formula(2, (Application(neq, (1, 2), 4),), "Z", 4)
    phi2, cert = neg_to_base(phi, XORL)
    assert phi2.applications == (Application(XOR, (1, 2), -4),)
    assert phi2.threshold == 0
    assert cert.value_map == ("affine", 1, -4)
    assert_equivalent(phi, phi2, cert)


def test_neg_to_base_identity_when_clean():
    phi = Formula(2, (Application(XOR, (1, 2), 2),), "Z", 1)
    phi2, cert = neg_to_base(phi, XORL)
    assert phi2.applications == phi.applications and phi2.threshold == 1


def test_neg_to_base_mixed_shift():
    neq = E2LIN.get("~XOR")
    phi = Formula(2, (Application(XOR, (1, 2), 2), Application(neq, (1, 2), 3)),
                  "Z", 1)
    phi2, cert = neg_to_base(phi, XORL)
    assert cert.value_map == ("affine", 1, -3)
    assert_equivalent(phi, phi2, cert)


def test_signed_to_unsigned_golden():
    phi = Formula(2, (Application(XOR, (1, 2), -4),), "Z", 0)
    phi2, cert = signed_to_unsigned_neg(phi, E2LIN)
    assert phi2.weight_range == "N" and phi2.threshold == 4
    assert phi2.applications[0].constraint.table == (1, 0, 0, 1)
    assert_equivalent(phi, phi2, cert)


def test_signed_to_unsigned_identity_and_double_flip():
    phi = Formula(2, (Application(XOR, (1, 2), 3),), "Z", 1)
    phi2, _ = signed_to_unsigned_neg(phi, E2LIN)
    assert phi2.threshold == 1 and phi2.total_weight == 3

    neq = E2LIN.get("~XOR")
    phi = Formula(2, (Application(XOR, (1, 2), -1), Application(neq, (1, 2), -1)),
                  "Z", 0)
    phi2, cert = signed_to_unsigned_neg(phi, E2LIN)
    assert phi2.threshold == 2
    assert_equivalent(phi, phi2, cert)


# -- apply_poly --------------------------------------------------------------

def test_apply_poly_or2_over_xor():
    src = builtin_language("or2")
    phi = Formula(2, (Application(src.get("OR2"), (1, 2), 1),), "Z", 1)
    phi2, cert = apply_poly(phi, src, XORL)
    assert phi2.threshold == 2 and cert.value_map == ("affine", 2, 0)
    assert phi2.nvars == phi.nvars
    assert_equivalent(phi, phi2, cert)


def test_apply_poly_identity_language():
    nae = builtin_language("nae3")
    phi = Formula(3, (Application(nae.get("NAE3"), (1, 2, 3), 5),), "Z", 4)
    phi2, cert = apply_poly(phi, nae, nae)
    assert cert.value_map == ("affine", 1, 0)
    assert phi2.applications == phi.applications


def test_apply_poly_degree_violation():
    with pytest.raises(PreconditionError):
        apply_poly(Formula(3, (), "Z", 0), builtin_language("3sat"), XORL)


@pytest.mark.parametrize("src_key,dst_key", [
    ("2sat", "xor"), ("2sat", "nae3"), ("xor", "ex3"), ("and2", "nae3")])
def test_apply_poly_random_equivalence(src_key, dst_key):
    src, dst = builtin_language(src_key), builtin_language(dst_key)
    for phi in random_cases(src, 25, 6, 8, "Z", seed=hash((src_key, dst_key)) & 0xffff):
        phi2, cert = apply_poly(phi, src, dst)
        assert_equivalent(phi, phi2, cert)


# -- implement_tf -------------------------------------------------------------

def test_implement_tf_c_closed_golden():
    tf = closure(XORL, MODE_TF)
    notx = tf.by_table(1, (1, 0))  # XOR(x, 1)
    phi = Formula(1, (Application(notx, (1,), 2),), "Z", 2)
    phi2, cert = implement_tf(phi, XORL)
    assert phi2.nvars == 3 and phi2.threshold == 7  # alpha*W + t = 5 + 2
    by_key = {(a.constraint.name, a.indices): a.weight for a in phi2.applications}
    assert by_key[("XOR", (1, 2))] == 2 and by_key[("XOR", (2, 3))] == 5
    assert_equivalent(phi, phi2, cert)


def test_implement_tf_empty_formula():
    phi = Formula(2, (), "Z", 0)
    phi2, cert = implement_tf(phi, XORL)
    assert_equivalent(phi, phi2, cert)


def test_implement_tf_degenerate_low_threshold():
    phi = Formula(2, (Application(XOR, (1, 2), 1),), "Z", -5)
    phi2, cert = implement_tf(phi, XORL)
    assert phi2.size == 0 and phi2.nvars == 1 and phi2.threshold == -1
    assert_equivalent(phi, phi2, cert)


def test_implement_tf_rejects_valid_languages():
    with pytest.raises(PreconditionError):
        implement_tf(Formula(2, (), "Z", 0), builtin_language("or2"))


@pytest.mark.parametrize("key", ["xor", "nae3", "ex3", "2sat"])
def test_implement_tf_random_equivalence(key):
    base = builtin_language(key)
    tf = closure(base, MODE_TF)
    for phi in random_cases(tf, 25, 5, 7, "Z", seed=hash(key) & 0xffff):
        phi2, cert = implement_tf(phi, base)
        assert_equivalent(phi, phi2, cert)


# -- unsigned_lit -------------------------------------------------------------

def test_unsigned_lit_golden():
    phi = Formula(2, (Application(XOR, (1, 2), -3),), "Z", -1)
    phi2, cert = unsigned_lit(phi, XORL)
    assert phi2.threshold == 5 and phi2.weight_range == "N"
    assert all(a.weight >= 0 for a in phi2.applications)
    assert cert.value_map == ("affine", 1, 6)
    assert_equivalent(phi, phi2, cert)


def test_unsigned_lit_identity_when_nonnegative():
    phi = Formula(2, (Application(XOR, (1, 2), 3),), "Z", 1)
    phi2, cert = unsigned_lit(phi, XORL)
    assert phi2.applications == phi.applications
    assert phi2.weight_range == "N" and cert.value_map == ("affine", 1, 0)


def test_unsigned_lit_shift_counts_tuples():
    or2 = builtin_language("or2").get("OR2")
    phi = Formula(3, (Application(or2, (1, 2), -1), Application(or2, (2, 3), 4)),
                  "Z", 0)
    phi2, cert = unsigned_lit(phi, builtin_language("or2"))
    # W = 1, two tuples, |OR2| = 3
    assert phi2.threshold == 0 + 1 * 2 * 3
    assert_equivalent(phi, phi2, cert)


@pytest.mark.parametrize("key", ["xor", "nae3", "ex3", "2sat"])
def test_unsigned_lit_random_equivalence(key):
    base = builtin_language(key)
    for phi in random_cases(base, 25, 6, 8, "Z", seed=hash(("ul", key)) & 0xffff):
        phi2, cert = unsigned_lit(phi, base)
        assert phi2.weight_range == "N"
        assert_equivalent(phi, phi2, cert)


# -- implement_lit ------------------------------------------------------------

def test_implement_lit_golden():
    lit = closure(XORL, MODE_LIT)
    eqv = lit.by_table(2, (1, 0, 0, 1))  # XOR with one negated slot
    phi = Formula(2, (Application(eqv, (1, 2), 1),), "N", 1)
    phi2, cert = implement_lit(phi, XORL)
    assert phi2.nvars == 4 and phi2.threshold == 5  # n*alpha*W + t = 2*1*2 + 1
    assert cert.kind == "linear"
    assert_equivalent(phi, phi2, cert)


def test_implement_lit_without_negations_still_links():
    phi = Formula(2, (Application(XOR, (1, 2), 2),), "N", 2)
    phi2, cert = implement_lit(phi, XORL)
    assert phi2.nvars == 4
    assert_equivalent(phi, phi2, cert)


def test_implement_lit_empty():
    phi = Formula(2, (), "N", 0)
    phi2, cert = implement_lit(phi, XORL)
    assert_equivalent(phi, phi2, cert)


def test_implement_lit_rejects_two_monotone_and_signed():
    with pytest.raises(PreconditionError):
        implement_lit(Formula(2, (), "N", 0), builtin_language("and2t"))
    with pytest.raises(PreconditionError):
        implement_lit(Formula(2, (), "Z", 0), XORL)


@pytest.mark.parametrize("key,nvars", [("xor", 7), ("nae3", 7), ("ex3", 4)])
def test_implement_lit_random_equivalence(key, nvars):
    base = builtin_language(key)
    lit = closure(base, MODE_LIT)
    for phi in random_cases(lit, 25, nvars, 8, "N", seed=hash(("il", key)) & 0xffff):
        phi2, cert = implement_lit(phi, base)
        assert_equivalent(phi, phi2, cert)


# -- chains -------------------------------------------------------------------

def test_chain_rejects_with_named_condition():
    with pytest.raises(PreconditionError, match="1-valid"):
        chain(Formula(2, (), "Z", 0), XORL, builtin_language("or2"))
    # {T, F} is 2-monotone yet neither 0-valid nor 1-valid: the additive
    # chain accepts it but the linear one must name the failing condition
    tf = builtin_language("tf")
    with pytest.raises(PreconditionError, match="2-monotone"):
        chain(Formula(2, (), "Z", 0), tf, tf, "N")


def test_chain_accepts_and2_to_nae3():
    src = builtin_language("and2")
    for phi in random_cases(src, 10, 5, 6, "Z", seed=5):
        out, cert = chain(phi, src, builtin_language("nae3"), "N")
        assert out.weight_range == "N"
        assert_equivalent(phi, out, cert)


def test_chain_additive_certificates_compose():
    src = gamma_d_sat(2)
    phi = next(iter(random_cases(src, 1, 6, 8, "Z", seed=77)))
    stages = chain_stages(phi, src, XORL, "Z")
    # re-verify each stage certificate independently
    cur = phi
    for label, out, cert in stages:
        report = verify_transform(cur, out, cert)
        assert report.all_passed, label
        cur = out
    out, cert = chain(phi, src, XORL, "Z")
    assert cert.kind == "additive"
    assert out.nvars - phi.nvars <= cert.var_bound
    assert_equivalent(phi, out, cert)


@pytest.mark.parametrize("src_key,dst_key", [("2sat", "xor"), ("2sat", "nae3")])
def test_chain_linear_random_equivalence(src_key, dst_key):
    src, dst = builtin_language(src_key), builtin_language(dst_key)
    for phi in random_cases(src, 15, 6, 8, "Z", seed=hash((src_key, dst_key, "n")) & 0xffff):
        out, cert = chain(phi, src, dst, "N")
        assert out.weight_range == "N" and out.nvars <= 20
        assert_equivalent(phi, out, cert)


# -- exp cycle ----------------------------------------------------------------

def test_exp_cycle_preserves_decisions_with_additive_growth():
    dsat = gamma_d_sat(2)
    for phi in random_cases(dsat, 8, 6, 8, "Z", seed=123):
        stages = exp_cycle(phi, XORL)
        cur = phi
        for label, out, cert in stages:
            assert cert.kind == "additive"
            assert_equivalent(cur, out, cert)
            cur = out
        assert_equivalent(phi, cur)
        growth = [f.nvars - phi.nvars for _, f, _ in stages]
        assert max(growth) <= 6  # constant, not n-dependent


def test_exp_cycle_needs_degree_two():
    with pytest.raises(PreconditionError):
        exp_cycle(Formula(2, (), "Z", 0), builtin_language("tf"))  # degree 1


# -- kernelize / compress -----------------------------------------------------

def test_kernelize_max_cut_example():
    phi = Formula(3, (Application(XOR, (1, 2), 3), Application(XOR, (2, 1), 2),
                      Application(XOR, (1, 3), 1)), "N", 5)
    poly = formula_polynomial(phi)
    assert poly == from_terms([
        (frozenset([1]), 6), (frozenset([2]), 5), (frozenset([3]), 1),
        (frozenset([1, 2]), -10), (frozenset([1, 3]), -2)])
    res = kernelize(phi, XORL)
    assert res.formula.weight_range == "N"
    assert_equivalent(phi, res.formula, res.certificate)
    assert brute_force(phi).optimum == 6 and decide(phi)


def test_kernelize_duplicate_heavy_instance():
    one = (Application(XOR, (1, 2), 1),)
    small = Formula(3, one * 1, "N", 1)
    big = Formula(3, tuple(Application(XOR, (1, 2), 1) for _ in range(100)), "N", 1)
    rs, rb = kernelize(small, XORL), kernelize(big, XORL)
    assert rs.formula.size == rb.formula.size
    assert rs.report.monomials == rb.report.monomials
    assert_equivalent(big, rb.formula, rb.certificate)


def test_kernelize_polynomial_time_languages():
    # 0-valid, 1-valid, and 2-monotone languages get solved kernels
    for key, range_ in (("eq", "N"), ("or2", "N"), ("and2t", "N"), ("eq", "Z")):
        lang = builtin_language(key)
        for phi in random_cases(lang, 8, 5, 6, range_, seed=hash((key, range_)) & 0xffff):
            res = kernelize(phi, lang)
            assert res.formula.size == 0
            assert_equivalent(phi, res.formula, res.certificate)


def test_kernelize_constant_instance():
    # XOR(x, x) is identically 0: the summed polynomial vanishes
    phi = Formula(2, (Application(XOR, (1, 1), 7),), "N", 0)
    res = kernelize(phi, XORL)
    assert res.formula.size == 0
    assert_equivalent(phi, res.formula, res.certificate)


def test_compress_single_or2():
    or2 = builtin_language("or2").get("OR2")
    phi = Formula(2, (Application(or2, (1, 2), 9),), "N", 4)
    res = compress_to_polynomial(phi)
    assert res.polynomial == from_terms([
        (frozenset([1]), 9), (frozenset([2]), 9), (frozenset([1, 2]), -9)])
    assert res.threshold == 4


def test_compress_empty():
    res = compress_to_polynomial(Formula(3, (), "N", 2))
    assert res.polynomial.is_zero() and res.threshold == 2


def test_compress_preserves_values_pointwise():
    from maxcsp.constraints import row_to_bits
    for phi in random_cases(builtin_language("nae3lit"), 10, 5, 12, "N", seed=41):
        res = compress_to_polynomial(phi)
        shift = phi.threshold - res.threshold
        for row in range(1 << phi.nvars):
            bits = row_to_bits(row, phi.nvars)
            assert res.polynomial.evaluate(bits) + shift == phi.value(bits)


def test_kernel_app_count_bound_holds_with_recorded_constant():
    for seed in (1, 2, 3):
        phi = random_formula(builtin_language("nae3"), 8, 60, "N",
                             max_weight=64, seed=seed)
        phi = phi.replace(threshold=brute_force(phi).optimum)
        res = kernelize(phi, builtin_language("nae3"))
        c = res.report.app_bound_constant
        assert res.formula.size <= c * (res.report.monomial_bound + phi.nvars)


# -- vertex cover -------------------------------------------------------------

def test_vc_reduce_triangle():
    phi = vc_reduce(3, [(1, 2), (2, 3), (1, 3)], 2)
    assert phi.size == 6 and phi.threshold == 19
    assert decide(phi)
    assert not decide(vc_reduce(3, [(1, 2), (2, 3), (1, 3)], 1))


def test_vc_reduce_edgeless():
    phi = vc_reduce(4, [], 0)
    assert phi.threshold == 4 and brute_force(phi).optimum == 4


def test_vc_reduce_validation():
    with pytest.raises(FormatError):
        vc_reduce(3, [(1, 1)], 1)
    with pytest.raises(FormatError):
        vc_reduce(3, [(1, 2), (2, 1)], 1)
    with pytest.raises(FormatError):
        vc_reduce(3, [], 4)
