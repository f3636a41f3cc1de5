"""Text formats: languages, instances, polynomials, implementations,
decompositions, certificates, graphs.

All emitters produce canonical, newline-terminated ASCII so identical
inputs give byte-identical outputs.  Parsers report the offending line
number.  The '#' character starts a comment anywhere a line begins.

Language files:     constraint <name> <arity> / one satisfying row per
                    line as a bit string ('-' for the empty row of an
                    arity-0 closure artifact) / end
Instance files:     maxcsp <n> <m> <Z|N> <t> followed by m lines
                    <name> <weight> <i1> ... <ik>, then an optional
                    certificate block.
Polynomials:        poly <nvars> <nterms>, then <coeff> <i1> <i2> ...
                    per term with '-' marking the constant term.
Graphs:             graph <n> <e> followed by e lines <u> <v>.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .constraints import (MODE_CONSTANTS, Constraint, ConstraintLanguage,
                          MODE_LIT, MODE_NEG, MODE_TF, apply_pattern, closure,
                          make_constraint, parse_pattern, render_pattern)
from .errors import FormatError
from .expressibility import CombinationTerm, LinearCombination
from .formulas import RANGE_N, RANGE_Z, Application, Formula
from .implementations import Implementation, checked_implementation
from .languages import builtin_language
from .polynomials import MultilinearPolynomial
from .transforms import AFFINE, EXISTENTIAL, TransformCertificate


def _lines(text: str):
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield num, line


def _fail(num: int, msg: str):
    raise FormatError(f"line {num}: {msg}")


# ---------------------------------------------------------------------------
# Languages


def parse_language(text: str, name: str = "language",
                   allow_constants: bool = False) -> ConstraintLanguage:
    constraints = []
    current: tuple[str, int] | None = None
    rows: list = []
    for num, line in _lines(text):
        parts = line.split()
        if current is None:
            if parts[0] != "constraint" or len(parts) != 3:
                _fail(num, f"expected 'constraint <name> <arity>', got {line!r}")
            try:
                arity = int(parts[2])
            except ValueError:
                _fail(num, f"bad arity {parts[2]!r}")
            if arity == 0 and not allow_constants:
                _fail(num, "arity-0 constraints are closure artifacts and are "
                           "rejected in user-supplied languages")
            current = (parts[1], arity)
            rows = []
        elif line == "end":
            try:
                constraints.append(make_constraint(current[0], current[1], rows))
            except FormatError as exc:
                _fail(num, str(exc))
            current = None
        else:
            if len(parts) != 1:
                _fail(num, f"expected one satisfying row, got {line!r}")
            row = "" if line == "-" else line
            if len(row) != current[1] or any(ch not in "01" for ch in row):
                _fail(num, f"bad row {line!r} for arity {current[1]}")
            rows.append(row)
    if current is not None:
        raise FormatError(f"constraint {current[0]!r} not terminated by 'end'")
    if not constraints:
        raise FormatError("language file defines no constraints")
    return ConstraintLanguage(name, tuple(constraints))


def emit_language(language: ConstraintLanguage) -> str:
    out = []
    for c in language:
        out.append(f"constraint {c.name} {c.arity}")
        for row in c.satisfying_rows():
            out.append(format(row, f"0{c.arity}b") if c.arity else "-")
        out.append("end")
    return "\n".join(out) + "\n"


def resolve_language_spec(spec: str) -> ConstraintLanguage:
    """A language argument: a builtin key ('xor'), a closure of one
    ('tf:xor', 'lit:nae3', 'neg:xor'), or a path to a language file."""
    prefix, _, rest = spec.partition(":")
    modes = {"tf": MODE_TF, "lit": MODE_LIT, "neg": MODE_NEG}
    if rest and prefix in modes:
        return closure(resolve_language_spec(rest), modes[prefix])
    try:
        return builtin_language(spec)
    except KeyError:
        pass
    path = Path(spec)
    if not path.exists():
        raise FormatError(f"{spec!r} is neither a builtin language nor a file")
    return parse_language(path.read_text(), name=path.stem,
                          allow_constants=True)


# ---------------------------------------------------------------------------
# Instances (with optional appended certificate block)


def parse_instance(text: str, language: ConstraintLanguage
                   ) -> tuple[Formula, TransformCertificate | None]:
    header = None
    apps: list[Application] = []
    cert_lines: list[tuple[int, str]] = []
    in_cert = False
    for num, line in _lines(text):
        parts = line.split()
        if header is None:
            if parts[0] != "maxcsp" or len(parts) != 5:
                _fail(num, f"expected 'maxcsp <n> <m> <Z|N> <t>', got {line!r}")
            try:
                n, m, t = int(parts[1]), int(parts[2]), int(parts[4])
            except ValueError:
                _fail(num, "bad instance header numbers")
            if parts[3] not in (RANGE_Z, RANGE_N):
                _fail(num, f"weight range must be Z or N, got {parts[3]!r}")
            header = (n, m, parts[3], t)
        elif in_cert or parts[0] == "certificate":
            in_cert = True
            cert_lines.append((num, line))
        else:
            if len(parts) < 2:
                _fail(num, f"expected '<name> <weight> <indices...>', got {line!r}")
            try:
                c = language.get(parts[0])
            except KeyError as exc:
                _fail(num, str(exc))
            try:
                weight = int(parts[1])
                idx = tuple(int(p) for p in parts[2:])
            except ValueError:
                _fail(num, f"bad numbers in {line!r}")
            if len(idx) != c.arity:
                _fail(num, f"{c.name} has arity {c.arity}, got {len(idx)} indices")
            try:
                apps.append(Application(c, idx, weight))
            except FormatError as exc:
                _fail(num, str(exc))
    if header is None:
        raise FormatError("missing 'maxcsp' header")
    n, m, weight_range, t = header
    if len(apps) != m:
        raise FormatError(f"header declares {m} applications, found {len(apps)}")
    phi = Formula(n, tuple(apps), weight_range, t)
    cert = _parse_certificate_lines(cert_lines) if cert_lines else None
    return phi, cert


def emit_instance(phi: Formula, cert: TransformCertificate | None = None) -> str:
    out = [f"maxcsp {phi.nvars} {phi.size} {phi.weight_range} {phi.threshold}"]
    for a in phi.applications:
        idx = " ".join(str(i) for i in a.indices)
        out.append(f"{a.constraint.name} {a.weight}" + (f" {idx}" if idx else ""))
    text = "\n".join(out) + "\n"
    if cert is not None:
        text += emit_certificate(cert)
    return text


# ---------------------------------------------------------------------------
# Certificates


def emit_certificate(cert: TransformCertificate) -> str:
    out = [f"certificate {cert.label}",
           f"kind {cert.kind}",
           f"vars {cert.n_in} {cert.n_out}",
           f"sizes {cert.size_in} {cert.size_out}",
           f"weights {cert.weight_in} {cert.weight_out}",
           f"thresholds {cert.t_in} {cert.t_out}"]
    if cert.value_map[0] == AFFINE:
        out.append(f"value_map affine {cert.value_map[1]} {cert.value_map[2]}")
    else:
        out.append("value_map existential")
    out.append(f"bounds {cert.var_bound} {cert.size_factor} "
               f"{cert.weight_factor} {cert.weight_exponent}")
    if cert.stages:
        out.append("stages " + ",".join(s.label for s in cert.stages))
    out.append("end")
    return "\n".join(out) + "\n"


def _parse_certificate_lines(lines) -> TransformCertificate:
    fields: dict = {}
    label = None
    for num, line in lines:
        parts = line.split()
        if parts[0] == "certificate":
            if len(parts) != 2:
                _fail(num, "expected 'certificate <label>'")
            label = parts[1]
        elif parts[0] == "end":
            break
        elif parts[0] == "stages":
            continue
        else:
            fields[parts[0]] = parts[1:]
    if label is None:
        raise FormatError("certificate block missing its header")
    try:
        kind = fields["kind"][0]
        n_in, n_out = map(int, fields["vars"])
        size_in, size_out = map(int, fields["sizes"])
        weight_in, weight_out = map(int, fields["weights"])
        t_in, t_out = map(int, fields["thresholds"])
        vm = fields["value_map"]
        value_map = ((AFFINE, Fraction(vm[1]), Fraction(vm[2]))
                     if vm[0] == "affine" else (EXISTENTIAL,))
        var_bound, size_factor, weight_factor, weight_exponent = map(
            int, fields["bounds"])
    except (KeyError, ValueError, IndexError) as exc:
        raise FormatError(f"malformed certificate block: {exc}")
    return TransformCertificate(
        label=label, kind=kind, n_in=n_in, n_out=n_out, size_in=size_in,
        size_out=size_out, weight_in=weight_in, weight_out=weight_out,
        t_in=t_in, t_out=t_out, value_map=value_map, var_bound=var_bound,
        size_factor=size_factor, weight_factor=weight_factor,
        weight_exponent=weight_exponent)


def parse_certificate(text: str) -> TransformCertificate:
    return _parse_certificate_lines(list(_lines(text)))


# ---------------------------------------------------------------------------
# Polynomials


def emit_polynomial(poly: MultilinearPolynomial, nvars: int | None = None) -> str:
    n = poly.max_index() if nvars is None else nvars
    out = [f"poly {n} {len(poly.terms)}"]
    for mono, coeff in poly.sorted_terms():
        body = " ".join(str(i) for i in sorted(mono)) if mono else "-"
        out.append(f"{coeff} {body}")
    return "\n".join(out) + "\n"


def parse_polynomial(text: str) -> tuple[MultilinearPolynomial, int]:
    header = None
    terms = {}
    for num, line in _lines(text):
        parts = line.split()
        if header is None:
            if parts[0] != "poly" or len(parts) != 3:
                _fail(num, f"expected 'poly <nvars> <nterms>', got {line!r}")
            header = (int(parts[1]), int(parts[2]))
        else:
            try:
                coeff = Fraction(parts[0])
                mono = (frozenset() if parts[1:] == ["-"]
                        else frozenset(int(p) for p in parts[1:]))
            except (ValueError, ZeroDivisionError):
                _fail(num, f"bad term {line!r}")
            if mono in terms:
                _fail(num, f"duplicate monomial in {line!r}")
            terms[mono] = coeff
    if header is None:
        raise FormatError("missing 'poly' header")
    if len(terms) != header[1]:
        raise FormatError(f"header declares {header[1]} terms, found {len(terms)}")
    return MultilinearPolynomial(terms), header[0]


# ---------------------------------------------------------------------------
# Implementations


def emit_implementation(impl: Implementation) -> str:
    out = [f"impl {impl.target.name} p={impl.primary_arity} q={impl.aux_count} "
           f"alpha={impl.alpha} strict={int(impl.strict)}"]
    for c, idx in impl.applications:
        out.append(f"{c.name} " + " ".join(str(i) for i in idx))
    out.append("end")
    return "\n".join(out) + "\n"


def parse_implementation(text: str, language: ConstraintLanguage,
                         target: Constraint) -> Implementation:
    header = None
    apps = []
    for num, line in _lines(text):
        parts = line.split()
        if header is None:
            if parts[0] != "impl":
                _fail(num, f"expected 'impl ...', got {line!r}")
            kv = dict(p.split("=", 1) for p in parts[2:])
            header = (int(kv["p"]), int(kv["q"]))
            if parts[1] != target.name:
                _fail(num, f"implementation targets {parts[1]!r}, not {target.name!r}")
        elif line == "end":
            break
        else:
            try:
                c = language.get(parts[0])
            except KeyError as exc:
                _fail(num, str(exc))
            apps.append((c, tuple(int(p) for p in parts[1:])))
    if header is None:
        raise FormatError("missing 'impl' header")
    return checked_implementation(target, header[0], header[1], apps)


# ---------------------------------------------------------------------------
# Decompositions


def emit_decomposition(combo: LinearCombination) -> str:
    out = [f"decomposition {combo.base.name} {combo.nvars} {len(combo.terms)}"]
    for t in combo.terms:
        idx = ",".join(str(i) for i in t.indices) if t.indices else "-"
        out.append(f"{t.coefficient} {render_pattern(t.pattern)} {idx}")
    out.append("end")
    return "\n".join(out) + "\n"


def parse_decomposition(text: str, base: Constraint) -> LinearCombination:
    header = None
    terms = []
    for num, line in _lines(text):
        parts = line.split()
        if header is None:
            if parts[0] != "decomposition" or len(parts) != 4:
                _fail(num, f"expected decomposition header, got {line!r}")
            if parts[1] != base.name:
                _fail(num, f"decomposition is over {parts[1]!r}, not {base.name!r}")
            header = (int(parts[2]), int(parts[3]))
        elif line == "end":
            break
        else:
            if len(parts) != 3:
                _fail(num, f"expected '<alpha> <pattern> <indices>', got {line!r}")
            try:
                coeff = Fraction(parts[0])
                indices = (() if parts[2] == "-"
                           else tuple(int(p) for p in parts[2].split(",")))
                pattern = parse_pattern(parts[1], len(indices), MODE_CONSTANTS)
                constraint = apply_pattern(base, pattern)
            except (ValueError, ZeroDivisionError) as exc:
                _fail(num, f"bad decomposition term: {exc}")
            terms.append(CombinationTerm(pattern, constraint, indices, coeff))
    if header is None:
        raise FormatError("missing decomposition header")
    return LinearCombination(base, header[0], tuple(terms))


# ---------------------------------------------------------------------------
# Graphs


def parse_graph(text: str) -> tuple[int, list[tuple[int, int]]]:
    header = None
    edges = []
    for num, line in _lines(text):
        parts = line.split()
        if header is None:
            if parts[0] != "graph" or len(parts) != 3:
                _fail(num, f"expected 'graph <n> <e>', got {line!r}")
            header = (int(parts[1]), int(parts[2]))
        else:
            if len(parts) != 2:
                _fail(num, f"expected '<u> <v>', got {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
    if header is None:
        raise FormatError("missing 'graph' header")
    if len(edges) != header[1]:
        raise FormatError(f"header declares {header[1]} edges, found {len(edges)}")
    return header[0], edges
