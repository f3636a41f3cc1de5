"""Boolean constraints as truth tables, languages, classification, closures.

Truth-table convention used everywhere in this package: the table of a k-ary
constraint has 2**k entries, indexed by the assignment read as a k-bit
integer with variable 1 in the most significant position.  OR2 therefore has
table (0, 1, 1, 1) for the rows 00, 01, 10, 11.

Substitution slots are encoded as: positive int i = variable x_i, negative
int -i = negated variable, the one-character strings "0"/"1" = constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import CapExceededError, FormatError, PreconditionError

# Materialized closures refuse member constraints above this arity: the
# pattern space is exponential in the arity and nothing downstream needs
# closures of large constraints, only patterns on demand.
CLOSURE_ARITY_CAP = 8

MODE_CONSTANTS = "constants"   # slots are variables or constants 0/1
MODE_LITERALS = "literals"     # slots are variables or negated variables
MODE_ANY = "any"

VERDICT_POLY = "poly_time_solvable"
VERDICT_NP_HARD = "np_hard"


def bits_to_row(bits: Sequence[int]) -> int:
    row = 0
    for b in bits:
        if b not in (0, 1):
            raise FormatError(f"assignment bit must be 0 or 1, got {b!r}")
        row = (row << 1) | b
    return row


def row_to_bits(row: int, arity: int) -> tuple[int, ...]:
    return tuple((row >> (arity - 1 - i)) & 1 for i in range(arity))


@dataclass(frozen=True)
class Constraint:
    """A Boolean function of fixed arity stored as a full truth table."""

    name: str
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.arity < 0:
            raise FormatError(f"negative arity {self.arity}")
        if not self.name or any(c.isspace() for c in self.name):
            raise FormatError(f"constraint name must be a non-empty token: {self.name!r}")
        if len(self.table) != 1 << self.arity:
            raise FormatError(
                f"{self.name}: table length {len(self.table)} != 2**{self.arity}")
        if any(v not in (0, 1) for v in self.table):
            raise FormatError(f"{self.name}: table entries must be 0/1")

    def value(self, bits: Sequence[int]) -> int:
        if len(bits) != self.arity:
            raise FormatError(
                f"{self.name}: expected {self.arity} arguments, got {len(bits)}")
        return self.table[bits_to_row(bits)]

    def satisfying_count(self) -> int:
        """|f| = number of satisfying rows."""
        return sum(self.table)

    def satisfying_rows(self) -> list[int]:
        return [r for r, v in enumerate(self.table) if v]

    def is_trivial(self) -> bool:
        return all(v == self.table[0] for v in self.table)

    def negation(self, name: str | None = None) -> "Constraint":
        return Constraint(name or f"~{self.name}", self.arity,
                          tuple(1 - v for v in self.table))

    def signature(self) -> tuple[int, tuple[int, ...]]:
        return (self.arity, self.table)


def make_constraint(name: str, arity: int, satisfying_rows: Iterable) -> Constraint:
    """Build a constraint from its satisfying assignments.

    Rows may be given as bit strings ("01"), sequences of 0/1, or row
    indices.  Duplicates are idempotent; a row of the wrong width is a
    format error.
    """
    table = [0] * (1 << arity)
    for row in satisfying_rows:
        if isinstance(row, str):
            if len(row) != arity or any(c not in "01" for c in row):
                raise FormatError(f"{name}: bad row {row!r} for arity {arity}")
            idx = int(row, 2) if arity else 0
        elif isinstance(row, int):
            idx = row
            if not 0 <= idx < len(table):
                raise FormatError(f"{name}: row index {row} out of range")
        else:
            bits = tuple(row)
            if len(bits) != arity:
                raise FormatError(f"{name}: bad row width {len(bits)}, want {arity}")
            idx = bits_to_row(bits)
        table[idx] = 1
    return Constraint(name, arity, tuple(table))


@dataclass(frozen=True)
class ConstraintLanguage:
    """A finite, non-empty set of named constraints."""

    name: str
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if not self.constraints:
            raise FormatError(f"language {self.name!r} is empty")
        names = [c.name for c in self.constraints]
        if len(set(names)) != len(names):
            raise FormatError(f"language {self.name!r} has duplicate constraint names")
        object.__setattr__(self, "constraints",
                           tuple(sorted(self.constraints, key=lambda c: c.name)))

    def __iter__(self):
        return iter(self.constraints)

    def get(self, name: str) -> Constraint:
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(f"no constraint named {name!r} in language {self.name!r}")

    def by_table(self, arity: int, table: tuple[int, ...]) -> Constraint | None:
        for c in self.constraints:
            if c.arity == arity and c.table == table:
                return c
        return None

    def signatures(self) -> frozenset:
        return frozenset(c.signature() for c in self.constraints)

    def non_trivial(self) -> tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if not c.is_trivial())

    def max_arity(self) -> int:
        return max(c.arity for c in self.constraints)


# ---------------------------------------------------------------------------
# Substitution patterns


@dataclass(frozen=True)
class SubstitutionPattern:
    """Slots substituted into a constraint to express a lower-arity one.

    ``slots`` has one entry per argument of the base constraint; each slot
    refers to one of the ``target_arity`` fresh variables (possibly negated)
    or to a constant.
    """

    target_arity: int
    slots: tuple
    mode: str = MODE_ANY

    def __post_init__(self):
        if self.target_arity < 0:
            raise FormatError("pattern target arity must be >= 0")
        for s in self.slots:
            if isinstance(s, str):
                if s not in ("0", "1"):
                    raise FormatError(f"bad constant slot {s!r}")
                if self.mode == MODE_LITERALS:
                    raise FormatError("constant slot in literals-only pattern")
            elif isinstance(s, int) and s != 0:
                if abs(s) > self.target_arity:
                    raise FormatError(
                        f"slot {s} references variable beyond arity {self.target_arity}")
                if s < 0 and self.mode == MODE_CONSTANTS:
                    raise FormatError("negated slot in constants-only pattern")
            else:
                raise FormatError(f"bad slot {s!r}")

    def used_variables(self) -> set[int]:
        return {abs(s) for s in self.slots if isinstance(s, int)}


def render_slot(slot) -> str:
    if isinstance(slot, str):
        return slot
    return f"x{slot}" if slot > 0 else f"~x{-slot}"


def parse_slot(text: str):
    if text in ("0", "1"):
        return text
    neg = text.startswith("~")
    body = text[1:] if neg else text
    if not body.startswith("x") or not body[1:].isdigit():
        raise FormatError(f"bad slot token {text!r}")
    i = int(body[1:])
    if i < 1:
        raise FormatError(f"bad slot token {text!r}")
    return -i if neg else i


def render_pattern(p: SubstitutionPattern) -> str:
    return ",".join(render_slot(s) for s in p.slots) if p.slots else "-"


def parse_pattern(text: str, target_arity: int, mode: str = MODE_ANY) -> SubstitutionPattern:
    slots = () if text == "-" else tuple(parse_slot(t) for t in text.split(","))
    return SubstitutionPattern(target_arity, slots, mode)


def identity_pattern(arity: int) -> SubstitutionPattern:
    return SubstitutionPattern(arity, tuple(range(1, arity + 1)), MODE_CONSTANTS)


def apply_pattern(f: Constraint, p: SubstitutionPattern,
                  name: str | None = None) -> Constraint:
    """Evaluate f under the substitution, yielding a target_arity-ary constraint."""
    if len(p.slots) != f.arity:
        raise FormatError(
            f"pattern has {len(p.slots)} slots but {f.name} has arity {f.arity}")
    d = p.target_arity
    table = []
    for row in range(1 << d):
        bits = row_to_bits(row, d)
        fr = 0
        for s in p.slots:
            if s == "0":
                b = 0
            elif s == "1":
                b = 1
            elif s > 0:
                b = bits[s - 1]
            else:
                b = 1 - bits[-s - 1]
            fr = (fr << 1) | b
        table.append(f.table[fr])
    return Constraint(name or f"{f.name}|{render_pattern(p)}", d, tuple(table))


def literal_variant(f: Constraint, negated: frozenset[int] | set[int]) -> Constraint:
    """f^S: the literals-only variant negating argument positions in S."""
    slots = tuple(-i if i in negated else i for i in range(1, f.arity + 1))
    return apply_pattern(f, SubstitutionPattern(f.arity, slots, MODE_LITERALS))


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class ConstraintFlags:
    trivial: bool
    zero_valid: bool
    one_valid: bool
    two_monotone: bool
    c_closed: bool
    symmetric: bool
    two_monotone_witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def _two_monotone_witness(arity: int, table: tuple[int, ...]):
    """Search index sets P, Q with f == (AND_P x) OR (AND_Q ~x).

    The sets may overlap; an empty set means that term is absent, and at
    least one term must be present.  Bit b of a mask corresponds to the
    variable arity - b (matching the row encoding).
    """
    rows = 1 << arity
    fmask = 0
    for r, v in enumerate(table):
        if v:
            fmask |= 1 << r
    pos = [0] * rows
    neg = [0] * rows
    for m in range(rows):
        pm = nm = 0
        for r in range(rows):
            if r & m == m:
                pm |= 1 << r
            if r & m == 0:
                nm |= 1 << r
        pos[m] = pm
        neg[m] = nm

    def vars_of(mask: int) -> tuple[int, ...]:
        return tuple(arity - b for b in range(arity - 1, -1, -1) if mask >> b & 1)

    for pmask in range(rows):
        base = pos[pmask] if pmask else 0
        if pmask and base == fmask:
            return (vars_of(pmask), ())
        for qmask in range(1, rows):
            if base | neg[qmask] == fmask:
                return (vars_of(pmask), vars_of(qmask))
    return None


def classify(f: Constraint) -> ConstraintFlags:
    """Structural flags of a single constraint, decided exhaustively."""
    rows = 1 << f.arity
    full = rows - 1
    trivial = f.is_trivial()
    witness = _two_monotone_witness(f.arity, f.table)
    by_popcount: dict[int, set[int]] = {}
    for r, v in enumerate(f.table):
        by_popcount.setdefault(bin(r).count("1"), set()).add(v)
    return ConstraintFlags(
        trivial=trivial,
        zero_valid=f.table[0] == 1,
        one_valid=f.table[full] == 1,
        two_monotone=witness is not None,
        c_closed=all(f.table[r] == f.table[full ^ r] for r in range(rows)),
        symmetric=all(len(vals) == 1 for vals in by_popcount.values()),
        two_monotone_witness=witness,
    )


@dataclass(frozen=True)
class ClassificationReport:
    """Language-level classification; each flag holds iff every non-trivial
    member satisfies the property."""

    language: str
    per_constraint: tuple[tuple[str, ConstraintFlags], ...]
    trivial: bool
    zero_valid: bool
    one_valid: bool
    two_monotone: bool
    c_closed: bool
    symmetric: bool
    verdict: str

    def failing_conditions(self) -> tuple[str, ...]:
        out = []
        if not self.zero_valid:
            out.append("not 0-valid")
        if not self.one_valid:
            out.append("not 1-valid")
        if not self.two_monotone:
            out.append("not 2-monotone")
        return tuple(out)


def classify_language(language: ConstraintLanguage) -> ClassificationReport:
    per = tuple((c.name, classify(c)) for c in language)
    nontrivial = [flags for _, flags in per if not flags.trivial]
    trivial = not nontrivial

    def every(attr: str) -> bool:
        return all(getattr(flags, attr) for flags in nontrivial)

    zero_valid = every("zero_valid")
    one_valid = every("one_valid")
    two_monotone = every("two_monotone")
    poly = trivial or zero_valid or one_valid or two_monotone
    return ClassificationReport(
        language=language.name,
        per_constraint=per,
        trivial=trivial,
        zero_valid=zero_valid,
        one_valid=one_valid,
        two_monotone=two_monotone,
        c_closed=every("c_closed"),
        symmetric=every("symmetric"),
        verdict=VERDICT_POLY if poly else VERDICT_NP_HARD,
    )


# ---------------------------------------------------------------------------
# Closures

MODE_TF = "TF"
MODE_LIT = "LIT"
MODE_NEG = "NEG"


def _pattern_alphabet(d: int, mode: str) -> list:
    if mode == MODE_TF:
        return list(range(1, d + 1)) + ["0", "1"]
    return list(range(1, d + 1)) + [-i for i in range(1, d + 1)]


def _closure_patterns(f: Constraint, mode: str):
    """All surjective patterns over f, smallest target arity first.

    Surjective = every target variable appears in some slot; this keeps the
    closure finite (no padding with unused variables) while staying closed
    under composition, so the closures are idempotent.
    """
    k = f.arity
    lo = 0 if mode == MODE_TF else 1
    for d in range(lo, k + 1):
        pmode = MODE_CONSTANTS if mode == MODE_TF else MODE_LITERALS
        for slots in itertools.product(_pattern_alphabet(d, mode), repeat=k):
            used = {abs(s) for s in slots if isinstance(s, int)}
            if len(used) == d:
                yield SubstitutionPattern(d, slots, pmode)


@lru_cache(maxsize=None)
def closure(language: ConstraintLanguage, mode: str) -> ConstraintLanguage:
    """Materialize Gamma^{T,F}, Gamma^{LIT}, or Gamma^{NEG}.

    Results are deduplicated by (arity, table); the first constraint found
    in canonical enumeration order names each table, with the original
    members always kept under their own names.
    """
    if mode not in (MODE_TF, MODE_LIT, MODE_NEG):
        raise FormatError(f"unknown closure mode {mode!r}")
    seen: dict[tuple, Constraint] = {}
    for c in language:
        seen.setdefault(c.signature(), c)
    if mode == MODE_NEG:
        for c in sorted(language, key=lambda c: c.name):
            neg = c.negation()
            seen.setdefault(neg.signature(), neg)
    else:
        for c in sorted(language, key=lambda c: c.name):
            if c.arity > CLOSURE_ARITY_CAP:
                raise CapExceededError(
                    f"cannot materialize closure of {c.name}: arity {c.arity} "
                    f"exceeds cap {CLOSURE_ARITY_CAP}")
            for pattern in _closure_patterns(c, mode):
                g = apply_pattern(c, pattern)
                seen.setdefault(g.signature(), g)
    return ConstraintLanguage(f"{language.name}^{mode}", tuple(seen.values()))


@lru_cache(maxsize=None)
def recover_pattern(language: ConstraintLanguage, target: Constraint,
                    mode: str) -> tuple[Constraint, SubstitutionPattern]:
    """Find f in the language and a pattern with apply_pattern(f, p) == target.

    Used to rewire closure members whose provenance was lost (e.g. parsed
    from a file).  Deterministic: first match over name-sorted members and
    canonical pattern order.
    """
    direct = language.by_table(target.arity, target.table)
    if direct is not None:
        return direct, identity_pattern(target.arity)
    for f in sorted(language, key=lambda c: c.name):
        for pattern in _closure_patterns(f, mode):
            if pattern.target_arity != target.arity:
                continue
            if apply_pattern(f, pattern).table == target.table:
                return f, pattern
    raise PreconditionError(
        f"{target.name} is not expressible from language {language.name!r} "
        f"in mode {mode}")


# ---------------------------------------------------------------------------
# Standard constraints

T = make_constraint("T", 1, ["1"])
F = make_constraint("F", 1, ["0"])


def or_constraint(k: int) -> Constraint:
    return Constraint(f"OR{k}", k, tuple(0 if r == 0 else 1 for r in range(1 << k)))


def and_constraint(k: int) -> Constraint:
    return Constraint(f"AND{k}", k,
                      tuple(1 if r == (1 << k) - 1 else 0 for r in range(1 << k)))


def nae_constraint(k: int) -> Constraint:
    full = (1 << k) - 1
    return Constraint(f"NAE{k}", k,
                      tuple(0 if r in (0, full) else 1 for r in range(1 << k)))


def xor_constraint(k: int) -> Constraint:
    name = "XOR" if k == 2 else f"XOR{k}"
    return Constraint(name, k,
                      tuple(bin(r).count("1") & 1 for r in range(1 << k)))


def ex_constraint(k: int) -> Constraint:
    """Exactly-one constraint."""
    return Constraint(f"EX{k}", k,
                      tuple(1 if bin(r).count("1") == 1 else 0 for r in range(1 << k)))


def eq_constraint() -> Constraint:
    return Constraint("EQ", 2, (1, 0, 0, 1))


def dicut_constraint() -> Constraint:
    """f(x, y) = x AND NOT y, the Max DiCut constraint."""
    return Constraint("DICUT", 2, (0, 0, 1, 0))


def recursive_nae(depth: int) -> Constraint:
    """The 3**depth-ary composition: level 0 is the identity, level j wraps
    three level-(j-1) blocks in a ternary not-all-equal."""
    arity = 3 ** depth
    if arity > 16:
        raise CapExceededError(f"recursive NAE of depth {depth} has arity {arity}")
    nae3 = nae_constraint(3)

    def value(bits: tuple[int, ...]) -> int:
        if len(bits) == 1:
            return bits[0]
        third = len(bits) // 3
        parts = [value(bits[i * third:(i + 1) * third]) for i in range(3)]
        return nae3.value(parts)

    table = tuple(value(row_to_bits(r, arity)) for r in range(1 << arity))
    return Constraint(f"RNAE{depth}", arity, table)


def standard_constraint(name: str) -> Constraint:
    """Look up a catalog constraint by its conventional name."""
    fixed = {"T": T, "F": F, "XOR": xor_constraint(2), "EQ": eq_constraint(),
             "DICUT": dicut_constraint()}
    if name in fixed:
        return fixed[name]
    for prefix, builder in (("OR", or_constraint), ("AND", and_constraint),
                            ("NAE", nae_constraint), ("XOR", xor_constraint),
                            ("EX", ex_constraint), ("RNAE", recursive_nae)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return builder(int(name[len(prefix):]))
    raise KeyError(f"unknown standard constraint {name!r}")
