"""Reductions between weighted constraint systems.

The five lemma-level transforms (negation removal, sign removal, polynomial
re-expression, constant elimination, literal elimination), their additive
and linear compositions, the kernelization pipeline that re-encodes an
instance through its monomials, and the Vertex-Cover gadget.

Every transform returns the rewritten formula together with a
TransformCertificate recording the variable/size/weight accounting and the
value map (an affine relation where one exists, otherwise an existential
correspondence of the threshold queries).  Certificates are oracle-checkable
via verify_transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .constraints import (MODE_LIT, MODE_NEG, MODE_TF, VERDICT_POLY, Constraint,
                          ConstraintLanguage, classify_language, closure,
                          literal_variant, recover_pattern, row_to_bits,
                          xor_constraint, T, F)
from .errors import FormatError, PreconditionError
from .expressibility import language_denominator, max_degree_member
from .formulas import RANGE_N, RANGE_Z, Application, Formula, empty_formula
from .implementations import (DEFAULT_MAX_APPS, DEFAULT_MAX_AUX,
                              Implementation, search_implementation)
from .languages import gamma_d_and, gamma_d_sat
from .polynomials import (MultilinearPolynomial, ZERO, characteristic_polynomial,
                          degree_of_language)
from .solver import ORACLE_CAP, decide, decide_exact

AFFINE = "affine"
EXISTENTIAL = "existential"
KIND_ADDITIVE = "additive"
KIND_LINEAR = "linear"


@dataclass(frozen=True)
class TransformCertificate:
    """Accounting record for one transformation instance.

    Checked inequalities (see verify_transform):
      additive:  n_out <= n_in + var_bound
      linear:    n_out <= var_bound * n_in
      always:    size_out <= size_factor * (size_in + n_in)
                 weight_out <= weight_factor * (weight_in + 1) * n_in**weight_exponent
    An affine value map (a, b) asserts phi2(x) = a * phi1(x) + b pointwise
    whenever the transform preserves the variable set.
    """

    label: str
    kind: str
    n_in: int
    n_out: int
    size_in: int
    size_out: int
    weight_in: int
    weight_out: int
    t_in: int
    t_out: int
    value_map: tuple
    var_bound: int
    size_factor: int
    weight_factor: int
    weight_exponent: int
    stages: tuple = ()

    def is_affine(self) -> bool:
        return self.value_map[0] == AFFINE


def _certificate(label, kind, phi1, phi2, value_map, var_bound, size_factor,
                 weight_factor, weight_exponent, stages=()):
    return TransformCertificate(
        label=label, kind=kind,
        n_in=phi1.nvars, n_out=phi2.nvars,
        size_in=phi1.size, size_out=phi2.size,
        weight_in=phi1.total_weight, weight_out=phi2.total_weight,
        t_in=phi1.threshold, t_out=phi2.threshold,
        value_map=value_map, var_bound=var_bound, size_factor=size_factor,
        weight_factor=weight_factor, weight_exponent=weight_exponent,
        stages=tuple(stages))


def _measured_certificate(label, kind, phi1, phi2, value_map, stages):
    """Certificate for a composed transform, with measured constants (the
    per-transform constants compose, but the measured values are what the
    accounting conditions are checked against)."""
    n_in, n_out = phi1.nvars, phi2.nvars
    if kind == KIND_ADDITIVE:
        var_bound = max(0, n_out - n_in)
    else:
        var_bound = max(1, -(-n_out // n_in))
    size_factor = max(1, -(-phi2.size // (phi1.size + n_in)))
    weight_exponent = max((s.weight_exponent for s in stages), default=0)
    denom = (phi1.total_weight + 1) * n_in ** weight_exponent
    weight_factor = max(1, -(-phi2.total_weight // denom))
    return _certificate(label, kind, phi1, phi2, value_map, var_bound,
                        size_factor, weight_factor, weight_exponent, stages)


def compose_value_maps(maps) -> tuple:
    a, b = Fraction(1), Fraction(0)
    for m in maps:
        if m[0] != AFFINE:
            return (EXISTENTIAL,)
        a2, b2 = Fraction(m[1]), Fraction(m[2])
        a, b = a2 * a, a2 * b + b2
    return (AFFINE, a, b)


def _merge(apps) -> tuple[Application, ...]:
    merged: dict[tuple, list] = {}
    for app in apps:
        key = (app.constraint.name, app.constraint.signature(), app.indices)
        if key in merged:
            merged[key][2] += app.weight
        else:
            merged[key] = [app.constraint, app.indices, app.weight]
    return tuple(Application(c, i, w) for c, i, w in merged.values())


def _degenerate(label, phi, geq_yes: bool, eq_yes: bool, kind=KIND_ADDITIVE):
    """Constant-size instance with the same answers: the empty formula has
    the single value 0, so t' = 0 keeps both queries yes, t' = -1 keeps only
    the >= query yes, and t' = 1 makes both no."""
    if eq_yes and not geq_yes:
        raise FormatError("an exact hit implies the threshold is reachable")
    t2 = 0 if eq_yes else (-1 if geq_yes else 1)
    phi2 = empty_formula(1, RANGE_N, t2)
    cert = _certificate(label, kind, phi, phi2, (EXISTENTIAL,),
                        var_bound=1, size_factor=1, weight_factor=1,
                        weight_exponent=0)
    return phi2, cert


# ---------------------------------------------------------------------------
# Signed reductions (negation-wise closure vs. negative weights)


def neg_to_base(phi: Formula, base: ConstraintLanguage):
    """Rewrite a formula over Gamma^NEG as one over Gamma with integer
    weights: each application of a negated constraint flips to the base
    constraint with opposite weight, shifting the threshold."""
    apps = []
    shift = 0
    for a in phi.applications:
        member = base.by_table(a.constraint.arity, a.constraint.table)
        if member is not None:
            apps.append(Application(member, a.indices, a.weight))
            continue
        comp = tuple(1 - v for v in a.constraint.table)
        member = base.by_table(a.constraint.arity, comp)
        if member is None:
            raise PreconditionError(
                f"{a.constraint.name} is neither in {base.name!r} nor a negation "
                f"of one of its members")
        apps.append(Application(member, a.indices, -a.weight))
        shift -= a.weight
    phi2 = Formula(phi.nvars, tuple(apps), RANGE_Z, phi.threshold + shift)
    cert = _certificate("neg-to-base", KIND_ADDITIVE, phi, phi2,
                        (AFFINE, 1, shift), var_bound=0, size_factor=1,
                        weight_factor=1, weight_exponent=0)
    return phi2, cert


def signed_to_unsigned_neg(phi: Formula, neg_language: ConstraintLanguage):
    """Erase negative weights over a negation-closed language: a negative
    application flips to its pointwise negation with positive weight."""
    apps = []
    shift = 0
    for a in phi.applications:
        if a.weight >= 0:
            member = neg_language.by_table(a.constraint.arity, a.constraint.table)
            if member is None:
                raise PreconditionError(
                    f"{a.constraint.name} not in {neg_language.name!r}")
            apps.append(Application(member, a.indices, a.weight))
            continue
        comp = tuple(1 - v for v in a.constraint.table)
        member = neg_language.by_table(a.constraint.arity, comp)
        if member is None:
            raise PreconditionError(
                f"language {neg_language.name!r} is not negation-closed: "
                f"missing the negation of {a.constraint.name}")
        apps.append(Application(member, a.indices, -a.weight))
        shift += -a.weight
    phi2 = Formula(phi.nvars, tuple(apps), RANGE_N, phi.threshold + shift)
    cert = _certificate("signed-to-unsigned", KIND_ADDITIVE, phi, phi2,
                        (AFFINE, 1, shift), var_bound=0, size_factor=1,
                        weight_factor=1, weight_exponent=0)
    return phi2, cert


# ---------------------------------------------------------------------------
# Polynomial re-expression


def apply_poly(phi: Formula, source: ConstraintLanguage,
               target: ConstraintLanguage):
    """Replace every application of g in the source language by the
    integerized combination realizing beta * g over constraints expressible
    with constants from the target's maximum-degree member; the new value is
    exactly beta times the old one."""
    f = max_degree_member(target)
    deg_f = characteristic_polynomial(f).degree
    if degree_of_language(source) > deg_f:
        raise PreconditionError(
            f"deg({source.name}) = {degree_of_language(source)} exceeds "
            f"deg({target.name}) = {deg_f}")
    beta, combos = language_denominator(source, f)
    tf = closure(target, MODE_TF)
    apps = []
    for a in phi.applications:
        if (a.constraint.name not in combos
                or source.get(a.constraint.name).table != a.constraint.table):
            raise PreconditionError(
                f"{a.constraint.name} is not in source language {source.name!r}")
        for term in combos[a.constraint.name].terms:
            coeff = term.coefficient
            if coeff.denominator != 1:
                raise FormatError("integerized combination has a fraction left")
            member = tf.by_table(term.constraint.arity, term.constraint.table)
            mapped = tuple(a.indices[j - 1] for j in term.indices)
            apps.append(Application(member, mapped, a.weight * coeff.numerator))
    phi2 = Formula(phi.nvars, _merge(apps), RANGE_Z, beta * phi.threshold)
    size_factor = max([len(c.terms) for c in combos.values()] + [1])
    weight_factor = max(
        [sum(abs(int(t.coefficient)) for t in c.terms) for c in combos.values()]
        + [1])
    cert = _certificate("apply-poly", KIND_ADDITIVE, phi, phi2,
                        (AFFINE, beta, 0), var_bound=0,
                        size_factor=size_factor, weight_factor=weight_factor,
                        weight_exponent=0)
    return phi2, cert


# ---------------------------------------------------------------------------
# Constant and literal elimination via implementations


def _impl_applications(impl: Implementation, primaries: tuple[int, ...],
                       aux_start: int, weight: int) -> list[Application]:
    mapping = list(primaries) + [aux_start + j for j in range(1, impl.aux_count + 1)]
    return [Application(c, tuple(mapping[v - 1] for v in idx), weight)
            for c, idx in impl.applications]


def _require_implementation(language, target, max_aux, max_apps) -> Implementation:
    impl = search_implementation(language, target, max_aux, max_apps)
    if impl is None:
        raise PreconditionError(
            f"no strict implementation of {target.name} from {language.name!r} "
            f"within caps (aux<={max_aux}, apps<={max_apps})")
    return impl


def implement_tf(phi: Formula, base: ConstraintLanguage,
                 max_aux: int = DEFAULT_MAX_AUX,
                 max_apps: int = DEFAULT_MAX_APPS):
    """Eliminate constants from a formula over Gamma^{T,F}: constants become
    the fresh variables x_T, x_F, pinned by weight-scaled implementations
    (T and F separately, or XOR of the pair when the language is
    complementation-closed)."""
    report = classify_language(base)
    for cond, msg in ((report.trivial, "trivial"),
                      (report.zero_valid, "0-valid"),
                      (report.one_valid, "1-valid")):
        if cond:
            raise PreconditionError(f"implement-tf: language {base.name!r} is {msg}")
    if phi.threshold < -phi.total_weight:
        return _degenerate("implement-tf", phi, True, False)

    n = phi.nvars
    xt, xf = n + 1, n + 2
    apps = []
    for a in phi.applications:
        f, pattern = recover_pattern(base, a.constraint, MODE_TF)
        idx = tuple(xt if s == "1" else xf if s == "0" else a.indices[s - 1]
                    for s in pattern.slots)
        apps.append(Application(f, idx, a.weight))

    big_w = 2 * phi.total_weight + 1
    gadget: list[Application] = []
    if report.c_closed:
        impl = _require_implementation(base, xor_constraint(2), max_aux, max_apps)
        gadget += _impl_applications(impl, (xt, xf), n + 2, big_w)
        aux = impl.aux_count
        alpha = impl.alpha
    else:
        t_impl = _require_implementation(base, T, max_aux, max_apps)
        f_impl = _require_implementation(base, F, max_aux, max_apps)
        gadget += _impl_applications(t_impl, (xt,), n + 2, big_w)
        gadget += _impl_applications(f_impl, (xf,), n + 2 + t_impl.aux_count, big_w)
        aux = t_impl.aux_count + f_impl.aux_count
        alpha = t_impl.alpha + f_impl.alpha

    phi2 = Formula(n + 2 + aux, _merge(apps + gadget), RANGE_Z,
                   alpha * big_w + phi.threshold)
    m = len(gadget)
    cert = _certificate("implement-tf", KIND_ADDITIVE, phi, phi2,
                        (EXISTENTIAL,), var_bound=2 + aux, size_factor=m + 1,
                        weight_factor=2 * m + 1, weight_exponent=0)
    return phi2, cert


def unsigned_lit(phi: Formula, base: ConstraintLanguage):
    """Erase negative weights by drowning them in constant-valued bundles of
    literal variants: for every applied tuple of f, all 2^k variants f^S are
    added at the magnitude of the most negative weight, which contributes
    the same |J_f| * |f| to every assignment."""
    lit = closure(base, MODE_LIT)
    for a in phi.applications:
        if base.by_table(a.constraint.arity, a.constraint.table) is None:
            raise PreconditionError(
                f"{a.constraint.name} not in base language {base.name!r}")
    # A formula is a set of applications; merge repeats first so the most
    # negative weight is measured on the merged instance.
    base_apps = _merge(phi.applications)
    big_w = max((-a.weight for a in base_apps if a.weight < 0), default=0)
    if big_w == 0:
        phi2 = Formula(phi.nvars, base_apps, RANGE_N, phi.threshold)
        cert = _certificate("unsigned-lit", KIND_ADDITIVE, phi, phi2,
                            (AFFINE, 1, 0), var_bound=0, size_factor=1,
                            weight_factor=1, weight_exponent=0)
        return phi2, cert

    tuples: dict[Constraint, set] = {}
    for a in base_apps:
        tuples.setdefault(a.constraint, set()).add(a.indices)
    apps = list(base_apps)
    shift = 0
    total_tuples = 0
    for c in sorted(tuples, key=lambda c: c.name):
        js = sorted(tuples[c])
        total_tuples += len(js)
        shift += big_w * len(js) * c.satisfying_count()
        variants = [lit.by_table(c.arity, literal_variant(c, frozenset(
            i + 1 for i in range(c.arity) if mask >> i & 1)).table)
            for mask in range(1 << c.arity)]
        for idx in js:
            for v in variants:
                apps.append(Application(v, idx, big_w))
    merged = _merge(apps)
    if any(a.weight < 0 for a in merged):
        raise FormatError("unsigned-lit left a negative weight")
    phi2 = Formula(phi.nvars, merged, RANGE_N, phi.threshold + shift)
    kmax = max(c.arity for c in tuples)
    cert = _certificate("unsigned-lit", KIND_ADDITIVE, phi, phi2,
                        (AFFINE, 1, shift), var_bound=0,
                        size_factor=1 + (1 << kmax),
                        weight_factor=1 + (1 << kmax) * total_tuples,
                        weight_exponent=0)
    return phi2, cert


def implement_lit(phi: Formula, base: ConstraintLanguage,
                  max_aux: int = DEFAULT_MAX_AUX,
                  max_apps: int = DEFAULT_MAX_APPS):
    """Eliminate literals from a nonnegative formula over Gamma^{LIT}: every
    variable gets a negation-copy, negated slots are rewired to the copies,
    and weight-scaled XOR implementations link each pair."""
    report = classify_language(base)
    for cond, msg in ((report.trivial, "trivial"),
                      (report.zero_valid, "0-valid"),
                      (report.one_valid, "1-valid"),
                      (report.two_monotone, "2-monotone")):
        if cond:
            raise PreconditionError(f"implement-lit: language {base.name!r} is {msg}")
    if phi.weight_range != RANGE_N:
        raise PreconditionError("implement-lit needs nonnegative weights")
    if phi.threshold < 0:
        return _degenerate("implement-lit", phi, True, False, KIND_LINEAR)

    n = phi.nvars
    apps = []
    for a in phi.applications:
        f, pattern = recover_pattern(base, a.constraint, MODE_LIT)
        idx = tuple(a.indices[s - 1] if s > 0 else n + a.indices[-s - 1]
                    for s in pattern.slots)
        apps.append(Application(f, idx, a.weight))

    impl = _require_implementation(base, xor_constraint(2), max_aux, max_apps)
    q = impl.aux_count
    big_w = phi.total_weight + 1
    gadget = []
    for i in range(1, n + 1):
        gadget += _impl_applications(impl, (i, n + i), 2 * n + (i - 1) * q, big_w)
    phi2 = Formula(n * (2 + q), _merge(apps + gadget), RANGE_N,
                   n * impl.alpha * big_w + phi.threshold)
    m = len(impl.applications)
    cert = _certificate("implement-lit", KIND_LINEAR, phi, phi2,
                        (EXISTENTIAL,), var_bound=2 + q, size_factor=m + 1,
                        weight_factor=impl.alpha * m + 1, weight_exponent=1)
    return phi2, cert


# ---------------------------------------------------------------------------
# Composed corollary chains


def chain_stages(phi: Formula, source: ConstraintLanguage,
                 target: ConstraintLanguage, mode: str = RANGE_Z,
                 max_aux: int = DEFAULT_MAX_AUX, max_apps: int = DEFAULT_MAX_APPS):
    """The composed reduction from CS(source, Z) into CS(target, Z) (mode
    "Z": polynomial re-expression then constant elimination) or CS(target,
    N) (mode "N": continuing with sign and literal elimination).  Returns
    the list of (label, formula, certificate) triples."""
    report = classify_language(target)
    if report.trivial:
        raise PreconditionError(f"chain: target {target.name!r} is trivial")
    if report.zero_valid:
        raise PreconditionError(f"chain: target {target.name!r} is 0-valid")
    if report.one_valid:
        raise PreconditionError(f"chain: target {target.name!r} is 1-valid")
    if mode == RANGE_N and report.two_monotone:
        raise PreconditionError(f"chain: target {target.name!r} is 2-monotone")
    if degree_of_language(source) > degree_of_language(target):
        raise PreconditionError(
            f"chain: deg({source.name}) > deg({target.name})")

    stages = []
    cur, cert = apply_poly(phi, source, target)
    stages.append(("apply-poly", cur, cert))
    cur, cert = implement_tf(cur, target, max_aux, max_apps)
    stages.append(("implement-tf", cur, cert))
    if mode == RANGE_N:
        cur, cert = unsigned_lit(cur, target)
        stages.append(("unsigned-lit", cur, cert))
        cur, cert = implement_lit(cur, target, max_aux, max_apps)
        stages.append(("implement-lit", cur, cert))
    return stages


def chain(phi: Formula, source: ConstraintLanguage,
          target: ConstraintLanguage, mode: str = RANGE_Z,
          max_aux: int = DEFAULT_MAX_AUX, max_apps: int = DEFAULT_MAX_APPS):
    stages = chain_stages(phi, source, target, mode, max_aux, max_apps)
    final = stages[-1][1]
    certs = tuple(c for _, _, c in stages)
    kind = KIND_ADDITIVE if all(c.kind == KIND_ADDITIVE for c in certs) else KIND_LINEAR
    value_map = compose_value_maps([c.value_map for c in certs])
    label = "chain-additive" if mode == RANGE_Z else "chain-linear"
    cert = _measured_certificate(label, kind, phi, final, value_map, certs)
    return final, cert


def exp_cycle(phi: Formula, gamma: ConstraintLanguage,
              max_aux: int = DEFAULT_MAX_AUX, max_apps: int = DEFAULT_MAX_APPS):
    """The reduction cycle tying CS(Gamma_dsat, *) and CS(Gamma, Z) together
    for d = deg(Gamma): signs out via literal variants, across to
    Gamma^NEG, negations folded into signed weights, and back to d-SAT.
    Input is a formula over Gamma_dsat with integer weights."""
    d = degree_of_language(gamma)
    if d < 2:
        raise PreconditionError(f"exp-cycle needs deg({gamma.name}) >= 2, got {d}")
    dsat = gamma_d_sat(d)
    neg = closure(gamma, MODE_NEG)
    stages = []
    cur, cert = unsigned_lit(phi, dsat)
    stages.append(("unsigned-lit", cur, cert))
    cur, cert = chain(cur, dsat, neg, RANGE_Z, max_aux, max_apps)
    stages.append(("chain-to-neg", cur, cert))
    cur, cert = neg_to_base(cur, gamma)
    stages.append(("neg-to-base", cur, cert))
    cur, cert = chain(cur, gamma, dsat, RANGE_Z, max_aux, max_apps)
    stages.append(("chain-to-dsat", cur, cert))
    return stages


# ---------------------------------------------------------------------------
# Kernelization


@dataclass(frozen=True)
class KernelReport:
    degree: int
    monomials: int                # terms of the summed polynomial, constant included
    monomial_bound: int           # sum_{i<=d} C(n, i)
    kernel_apps: int
    kernel_nvars: int
    app_bound_constant: int       # least C with apps <= C * (bound + n)
    encoded_bits: int


@dataclass(frozen=True)
class KernelResult:
    formula: Formula
    certificate: TransformCertificate
    report: KernelReport


@dataclass(frozen=True)
class CompressResult:
    polynomial: MultilinearPolynomial
    threshold: int
    nvars: int
    monomials: int


def formula_polynomial(phi: Formula) -> MultilinearPolynomial:
    """phi as a single multilinear polynomial: the weighted sum of the
    characteristic polynomials of its applications."""
    acc = ZERO
    for a in phi.applications:
        poly = characteristic_polynomial(a.constraint)
        acc = acc + poly.compose_at(a.indices).scale(a.weight)
    return acc


def compress_to_polynomial(phi: Formula) -> CompressResult:
    """The pure compression: fold the formula into monomial coefficients,
    absorbing the constant term into the threshold."""
    poly = formula_polynomial(phi)
    const = poly.coefficient(())
    reduced = poly - MultilinearPolynomial({frozenset(): const})
    if not reduced.is_integral():
        raise FormatError("characteristic polynomials must have integer coefficients")
    return CompressResult(reduced, phi.threshold - int(const), phi.nvars,
                          len(poly.terms))


def formula_from_polynomial(poly: MultilinearPolynomial, nvars: int,
                            threshold: int) -> Formula:
    """Re-read monomials as AND_k applications (the d-AND language)."""
    d = max(1, poly.degree)
    lang = gamma_d_and(d)
    apps = []
    for mono, coeff in poly.sorted_terms():
        if not mono:
            raise FormatError("constant term must be folded before re-encoding")
        and_k = lang.get(f"AND{len(mono)}")
        apps.append(Application(and_k, tuple(sorted(mono)), int(coeff)))
    return Formula(nvars, tuple(apps), RANGE_Z, threshold)


def encoded_bits(phi: Formula) -> int:
    """Size of a straightforward binary encoding: constraint id, indices in
    ceil(log2(n+1)) bits each, weights in sign+magnitude."""
    id_bits = max(1, math.ceil(math.log2(len(phi.constraints_used()) + 1)))
    index_bits = max(1, math.ceil(math.log2(phi.nvars + 1)))
    total = abs(phi.threshold).bit_length() + 1
    for a in phi.applications:
        total += id_bits + len(a.indices) * index_bits + abs(a.weight).bit_length() + 1
    return total


def _solved_kernel(label, phi, report, oracle_cap):
    """Constant-size equivalent instance for a polynomial-time language.
    The >= decision for 0-valid/1-valid languages under N weights is read
    off the constant assignment; everything else (and the = decision) comes
    from the oracle at desk scale."""
    if report.trivial or (phi.weight_range == RANGE_N
                          and (report.zero_valid or report.one_valid)):
        bits = [1] * phi.nvars if report.one_valid and not report.trivial else [0] * phi.nvars
        optimum = phi.value(bits)
        geq_yes = optimum >= phi.threshold
    else:
        geq_yes = decide(phi, cap=oracle_cap)
    eq_yes = decide_exact(phi, cap=oracle_cap)
    return _degenerate(label, phi, geq_yes, eq_yes)


def kernelize(phi: Formula, language: ConstraintLanguage,
              oracle_cap: int = ORACLE_CAP,
              max_aux: int = DEFAULT_MAX_AUX,
              max_apps: int = DEFAULT_MAX_APPS) -> KernelResult:
    """Compress the instance to its monomial coefficients, then re-express
    the resulting d-AND formula back over the original language with
    nonnegative weights; for polynomial-time languages the kernel is the
    solved constant-size instance."""
    report = classify_language(language)
    d = degree_of_language(language)
    n = phi.nvars
    bound = sum(math.comb(n, i) for i in range(d + 1))

    def finish(formula, cert, monomials):
        rep = KernelReport(
            degree=d, monomials=monomials, monomial_bound=bound,
            kernel_apps=formula.size, kernel_nvars=formula.nvars,
            app_bound_constant=max(1, -(-formula.size // (bound + n))),
            encoded_bits=encoded_bits(formula))
        return KernelResult(formula, cert, rep)

    if report.verdict == VERDICT_POLY:
        phi2, cert = _solved_kernel("kernelize-solved", phi, report, oracle_cap)
        return finish(phi2, cert, 0)

    compact = compress_to_polynomial(phi)
    poly, t_folded = compact.polynomial, compact.threshold

    if poly.is_zero():
        # The instance is a constant function; decide it outright.
        geq_yes = 0 >= t_folded
        eq_yes = 0 == t_folded
        phi2, cert = _degenerate("kernelize-constant", phi, geq_yes, eq_yes)
        return finish(phi2, cert, compact.monomials)

    phi_poly = formula_from_polynomial(poly, n, t_folded)
    const_cert = _certificate("fold-constant", KIND_ADDITIVE, phi, phi_poly,
                              (AFFINE, 1, t_folded - phi.threshold),
                              var_bound=0,
                              size_factor=max(1, -(-phi_poly.size // (phi.size + n))),
                              weight_factor=max(1, -(-phi_poly.total_weight
                                                     // (phi.total_weight + 1))),
                              weight_exponent=0)
    stages = [const_cert]
    final, chain_cert = chain(phi_poly, gamma_d_and(poly.degree), language,
                              RANGE_N, max_aux, max_apps)
    stages.append(chain_cert)
    cert = _measured_certificate(
        "kernelize", chain_cert.kind, phi, final,
        compose_value_maps([c.value_map for c in stages]), tuple(stages))
    return finish(final, cert, compact.monomials)


# ---------------------------------------------------------------------------
# Vertex Cover gadget


def vc_reduce(nvertices: int, edges, k: int) -> Formula:
    """The Vertex-Cover instance as weighted 2-SAT: a unit application
    ~x_v OR ~x_v per vertex and a weight-2n application x_u OR x_v per edge;
    with t = 2n|E| + (n - k) the instance is a yes iff the graph has a
    vertex cover of size at most k."""
    if nvertices < 1:
        raise FormatError("graph needs at least one vertex")
    if not 0 <= k <= nvertices:
        raise FormatError(f"cover size {k} out of range 0..{nvertices}")
    seen = set()
    for u, v in edges:
        if u == v:
            raise FormatError(f"loop at vertex {u}")
        if not (1 <= u <= nvertices and 1 <= v <= nvertices):
            raise FormatError(f"edge ({u},{v}) out of range")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"duplicate edge ({u},{v})")
        seen.add(key)
    lang = gamma_d_sat(2)
    or2 = lang.by_table(2, (0, 1, 1, 1))
    or2nn = lang.by_table(2, (1, 1, 1, 0))
    apps = [Application(or2nn, (v, v), 1) for v in range(1, nvertices + 1)]
    apps += [Application(or2, e, 2 * nvertices) for e in sorted(seen)]
    t = 2 * nvertices * len(seen) + (nvertices - k)
    return Formula(nvertices, tuple(apps), RANGE_N, t)


# ---------------------------------------------------------------------------
# Certificate verification


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool | None           # None = skipped (cap)
    detail: str = ""


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[ConditionCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)


def verify_transform(phi1: Formula, phi2: Formula, cert: TransformCertificate,
                     oracle_cap: int = ORACLE_CAP,
                     pointwise_cap: int = 14) -> VerifyReport:
    """Oracle-check a transformation certificate: endpoint bookkeeping, the
    accounting inequalities, both decision equivalences, and the pointwise
    affine relation where one is claimed."""
    checks = []

    endpoint_ok = (cert.n_in == phi1.nvars and cert.n_out == phi2.nvars
                   and cert.size_in == phi1.size and cert.size_out == phi2.size
                   and cert.weight_in == phi1.total_weight
                   and cert.weight_out == phi2.total_weight
                   and cert.t_in == phi1.threshold
                   and cert.t_out == phi2.threshold)
    checks.append(ConditionCheck("endpoints", endpoint_ok))

    if cert.kind == KIND_ADDITIVE:
        checks.append(ConditionCheck(
            "vars-additive", phi2.nvars <= phi1.nvars + cert.var_bound,
            f"{phi2.nvars} <= {phi1.nvars} + {cert.var_bound}"))
    else:
        checks.append(ConditionCheck(
            "vars-linear", phi2.nvars <= cert.var_bound * phi1.nvars,
            f"{phi2.nvars} <= {cert.var_bound} * {phi1.nvars}"))
    checks.append(ConditionCheck(
        "size", phi2.size <= cert.size_factor * (phi1.size + phi1.nvars)))
    weight_bound = (cert.weight_factor * (phi1.total_weight + 1)
                    * phi1.nvars ** cert.weight_exponent)
    checks.append(ConditionCheck(
        "weight", phi2.total_weight <= weight_bound))

    if max(phi1.nvars, phi2.nvars) <= oracle_cap:
        geq = decide(phi1, cap=oracle_cap) == decide(phi2, cap=oracle_cap)
        eq = decide_exact(phi1, cap=oracle_cap) == decide_exact(phi2, cap=oracle_cap)
        checks.append(ConditionCheck("equivalence-geq", geq))
        checks.append(ConditionCheck("equivalence-eq", eq))
    else:
        checks.append(ConditionCheck("equivalence-geq", None, "beyond oracle cap"))
        checks.append(ConditionCheck("equivalence-eq", None, "beyond oracle cap"))

    if cert.is_affine() and phi1.nvars == phi2.nvars:
        if phi1.nvars <= pointwise_cap:
            a, b = Fraction(cert.value_map[1]), Fraction(cert.value_map[2])
            ok = True
            for m in range(1 << phi1.nvars):
                bits = row_to_bits(m, phi1.nvars)
                if Fraction(phi2.value(bits)) != a * phi1.value(bits) + b:
                    ok = False
                    break
            checks.append(ConditionCheck("affine-pointwise", ok))
        else:
            checks.append(ConditionCheck("affine-pointwise", None,
                                         "beyond pointwise cap"))
    return VerifyReport(tuple(checks))
