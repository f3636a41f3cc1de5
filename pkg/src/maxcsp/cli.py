"""Command-line interface.

Every command is a pure function of its input bytes and options: canonical
sorted output, no timestamps, so identical invocations are byte-identical.
See the README for the file formats.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io_formats as io
from .constraints import classify_language, standard_constraint
from .errors import MaxCspError
from .expressibility import decompose
from .formulas import RANGE_N, RANGE_Z, random_formula
from .implementations import (DEFAULT_MAX_APPS, DEFAULT_MAX_AUX,
                              search_implementation, verify_implementation)
from .polynomials import characteristic_polynomial, degree_of_constraint, \
    degree_of_language
from .solver import ORACLE_CAP, brute_force, decide_exact
from .transforms import (apply_poly, chain, compress_to_polynomial,
                         implement_lit, implement_tf, kernelize, neg_to_base,
                         signed_to_unsigned_neg, unsigned_lit, verify_transform,
                         vc_reduce)


def _write(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    return Path(path).read_text()


def _target_constraint(args, language=None):
    if language is not None:
        try:
            return language.get(args.target)
        except KeyError:
            pass
    return standard_constraint(args.target)


def cmd_classify(args) -> int:
    language = io.resolve_language_spec(args.language)
    report = classify_language(language)
    out = []
    for name, flags in report.per_constraint:
        props = [p for p in ("trivial", "zero_valid", "one_valid",
                             "two_monotone", "c_closed", "symmetric")
                 if getattr(flags, p)]
        out.append(f"{name}: {' '.join(props) if props else '-'}")
    if report.verdict == "np_hard":
        out.append(f"np_hard ({', '.join(report.failing_conditions())})")
    else:
        reasons = [p for p in ("trivial", "zero_valid", "one_valid",
                               "two_monotone") if getattr(report, p)]
        out.append(f"poly_time_solvable ({', '.join(reasons)})")
    _write(args, "\n".join(out) + "\n")
    return 0


def cmd_degree(args) -> int:
    language = io.resolve_language_spec(args.language)
    out = []
    if args.per_constraint:
        out += [f"{c.name} {degree_of_constraint(c)}" for c in language]
    out.append(str(degree_of_language(language)))
    _write(args, "\n".join(out) + "\n")
    return 0


def cmd_poly(args) -> int:
    language = io.resolve_language_spec(args.language) if args.language else None
    c = _target_constraint(args, language)
    _write(args, io.emit_polynomial(characteristic_polynomial(c), c.arity))
    return 0


def cmd_decompose(args) -> int:
    language = io.resolve_language_spec(args.language) if args.language else None
    base = (language.get(args.base) if language and _has(language, args.base)
            else standard_constraint(args.base))
    if args.target_poly:
        target, _ = io.parse_polynomial(_read(args.target_poly))
    else:
        target = characteristic_polynomial(standard_constraint(args.target))
    combo = decompose(target, base)
    _write(args, io.emit_decomposition(combo))
    return 0


def _has(language, name: str) -> bool:
    try:
        language.get(name)
        return True
    except KeyError:
        return False


def cmd_implement(args) -> int:
    language = io.resolve_language_spec(args.language)
    target = _target_constraint(args)
    impl = search_implementation(language, target, args.max_aux, args.max_apps)
    if impl is None:
        _write(args, "not-found\n")
        return 0
    _write(args, io.emit_implementation(impl))
    return 0


_TRANSFORM_OPS = ("neg-to-base", "unsign-neg", "apply-poly", "implement-tf",
                  "unsigned-lit", "implement-lit", "chain-z", "chain-n")


def _run_transform(args, language, target_language, phi):
    op = args.op
    if op == "neg-to-base":
        return neg_to_base(phi, language)
    if op == "unsign-neg":
        return signed_to_unsigned_neg(phi, io.closure(language, io.MODE_NEG))
    if op == "apply-poly":
        return apply_poly(phi, language, target_language)
    if op == "implement-tf":
        return implement_tf(phi, language, args.max_aux, args.max_apps)
    if op == "unsigned-lit":
        return unsigned_lit(phi, language)
    if op == "implement-lit":
        return implement_lit(phi, language, args.max_aux, args.max_apps)
    mode = RANGE_Z if op == "chain-z" else RANGE_N
    return chain(phi, language, target_language, mode, args.max_aux, args.max_apps)


def _parse_language_for_op(op: str, language):
    if op in ("neg-to-base", "unsign-neg"):
        return io.closure(language, io.MODE_NEG)
    if op == "implement-tf":
        return io.closure(language, io.MODE_TF)
    if op == "implement-lit":
        return io.closure(language, io.MODE_LIT)
    return language


def cmd_transform(args) -> int:
    language = io.resolve_language_spec(args.language)
    target_language = (io.resolve_language_spec(args.target_language)
                       if args.target_language else None)
    if args.op in ("apply-poly", "chain-z", "chain-n") and target_language is None:
        raise MaxCspError(f"--target-language is required for {args.op}")
    phi, _ = io.parse_instance(_read(args.instance),
                               _parse_language_for_op(args.op, language))
    phi2, cert = _run_transform(args, language, target_language, phi)
    _write(args, io.emit_instance(phi2, cert))
    if args.verify:
        report = verify_transform(phi, phi2, cert, args.oracle_cap)
        _print_report(report)
        return 0 if report.all_passed else 1
    return 0


def _print_report(report) -> None:
    for check in report.checks:
        status = "SKIP" if check.passed is None else ("PASS" if check.passed else "FAIL")
        detail = f"  ({check.detail})" if check.detail else ""
        sys.stderr.write(f"{status} {check.name}{detail}\n")


def cmd_kernelize(args) -> int:
    language = io.resolve_language_spec(args.language)
    phi, _ = io.parse_instance(_read(args.instance), language)
    result = kernelize(phi, language, args.oracle_cap, args.max_aux, args.max_apps)
    rep = result.report
    text = io.emit_instance(result.formula, result.certificate)
    text += (f"# kernel degree={rep.degree} monomials={rep.monomials}"
             f" bound={rep.monomial_bound} apps={rep.kernel_apps}"
             f" nvars={rep.kernel_nvars} constant={rep.app_bound_constant}"
             f" bits={rep.encoded_bits}\n")
    _write(args, text)
    if args.verify:
        report = verify_transform(phi, result.formula, result.certificate,
                                  args.oracle_cap)
        _print_report(report)
        return 0 if report.all_passed else 1
    return 0


def cmd_compress(args) -> int:
    language = io.resolve_language_spec(args.language)
    phi, _ = io.parse_instance(_read(args.instance), language)
    result = compress_to_polynomial(phi)
    text = f"compress {result.nvars} {result.threshold}\n"
    text += io.emit_polynomial(result.polynomial, result.nvars)
    _write(args, text)
    return 0


def cmd_solve(args) -> int:
    language = io.resolve_language_spec(args.language)
    phi, _ = io.parse_instance(_read(args.instance), language)
    res = brute_force(phi, args.oracle_cap)
    out = [f"optimum {res.optimum}",
           "witness " + "".join(str(b) for b in res.witness),
           f"decision {'yes' if res.optimum >= phi.threshold else 'no'}"]
    if args.exact:
        hit = decide_exact(phi, cap=args.oracle_cap)
        out.append(f"exact {'yes' if hit else 'no'}")
    _write(args, "\n".join(out) + "\n")
    return 0


def cmd_verify(args) -> int:
    if args.kind == "transform":
        language = io.resolve_language_spec(args.language)
        out_language = (io.resolve_language_spec(args.out_language)
                        if args.out_language else language)
        phi1, _ = io.parse_instance(_read(args.paths[0]), language)
        phi2, cert = io.parse_instance(_read(args.paths[1]), out_language)
        if cert is None:
            raise MaxCspError(f"{args.paths[1]} carries no certificate block")
        report = verify_transform(phi1, phi2, cert, args.oracle_cap)
        _print_report(report)
        return 0 if report.all_passed else 1
    if args.kind == "decomposition":
        base = standard_constraint(args.base)
        combo = io.parse_decomposition(_read(args.paths[0]), base)
        if args.target_poly:
            target, _ = io.parse_polynomial(_read(args.target_poly))
        else:
            target = characteristic_polynomial(standard_constraint(args.target))
        ok = combo.expand() == target
        sys.stderr.write(("PASS" if ok else "FAIL") + " formal-identity\n")
        return 0 if ok else 1
    # implementation
    language = io.resolve_language_spec(args.language)
    target = standard_constraint(args.target)
    impl = io.parse_implementation(_read(args.paths[0]), language, target)
    res = verify_implementation(impl)
    sys.stderr.write(f"valid={int(res.valid)} alpha={res.alpha} "
                     f"strict={int(res.strict)}\n")
    return 0 if res.valid else 1


def cmd_vc_reduce(args) -> int:
    n, edges = io.parse_graph(_read(args.graph))
    phi = vc_reduce(n, edges, args.k)
    _write(args, io.emit_instance(phi))
    return 0


def cmd_random(args) -> int:
    language = io.resolve_language_spec(args.language)
    phi = random_formula(language, args.nvars, args.napps, args.weight_range,
                         args.max_weight, args.seed, args.threshold)
    _write(args, io.emit_instance(phi))
    return 0


def _add_common(p, language=True, instance=False, caps=False, verify=False):
    if language:
        p.add_argument("--language", help="builtin key, tf:/lit:/neg: closure, or file")
    if instance:
        p.add_argument("--instance", required=True)
    if caps:
        p.add_argument("--max-aux", type=int, default=DEFAULT_MAX_AUX)
        p.add_argument("--max-apps", type=int, default=DEFAULT_MAX_APPS)
    if verify:
        p.add_argument("--verify", action="store_true")
    p.add_argument("--oracle-cap", type=int, default=ORACLE_CAP)
    p.add_argument("-o", "--output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxcsp",
        description="Constraint-language analysis, reductions, and "
                    "kernelization for weighted Boolean Max CSP.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="dichotomy classification of a language")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("degree", help="characteristic-polynomial degree")
    _add_common(p)
    p.add_argument("--per-constraint", action="store_true")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("poly", help="characteristic polynomial of a constraint")
    _add_common(p)
    p.add_argument("--constraint", dest="target", required=True)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("decompose", help="rational combination over {f}^(T,F)")
    _add_common(p)
    p.add_argument("--base", required=True)
    p.add_argument("--target")
    p.add_argument("--target-poly")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("implement", help="search a strict implementation")
    _add_common(p, caps=True)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_implement)

    p = sub.add_parser("transform", help="apply one reduction step or chain")
    _add_common(p, instance=True, caps=True, verify=True)
    p.add_argument("--op", choices=_TRANSFORM_OPS, required=True)
    p.add_argument("--target-language")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("kernelize", help="full kernelization pipeline")
    _add_common(p, instance=True, caps=True, verify=True)
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("compress", help="monomial-coefficient compression")
    _add_common(p, instance=True)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("solve", help="exhaustive reference solver")
    _add_common(p, instance=True)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="re-check transforms, decompositions, "
                                      "implementations against the oracle")
    p.add_argument("kind", choices=("transform", "decomposition", "implementation"))
    p.add_argument("paths", nargs="+")
    p.add_argument("--language")
    p.add_argument("--out-language")
    p.add_argument("--base")
    p.add_argument("--target")
    p.add_argument("--target-poly")
    p.add_argument("--oracle-cap", type=int, default=ORACLE_CAP)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("vc-reduce", help="Vertex Cover to weighted Max 2-SAT")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_vc_reduce)

    p = sub.add_parser("random", help="seeded random instance (test utility)")
    _add_common(p)
    p.add_argument("--nvars", type=int, required=True)
    p.add_argument("--napps", type=int, required=True)
    p.add_argument("--weight-range", choices=(RANGE_Z, RANGE_N), default=RANGE_N)
    p.add_argument("--max-weight", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=int, default=None)
    p.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MaxCspError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
