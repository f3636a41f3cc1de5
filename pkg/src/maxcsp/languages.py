"""Built-in constraint languages used throughout the tests and the CLI.

Keys accepted by :func:`builtin_language`:

    2sat, 3sat  -- {OR_d}^LIT, the d-CNF languages
    xor / cut   -- {XOR}, Max Cut
    e2lin       -- {XOR}^NEG, Max E2-Lin
    nae3        -- {NAE_3}
    nae3lit     -- {NAE_3}^LIT, Max 3-NAE-SAT
    ex3         -- {EX_3}, Max 3-Exact-SAT core
    dicut       -- {x AND NOT y}, Max DiCut
    or2         -- {OR_2} alone (1-valid, polynomial-time)
    and2t       -- {AND_2, T} (2-monotone, polynomial-time)
    eq          -- {EQ} (0-valid, polynomial-time)
    and2 / and3 -- {AND_k : k <= d}, the monomial re-encoding languages
"""

from __future__ import annotations

from functools import lru_cache

from .constraints import (MODE_LIT, MODE_NEG, ConstraintLanguage,
                          T, F, and_constraint, closure, dicut_constraint,
                          eq_constraint, nae_constraint, or_constraint,
                          xor_constraint, ex_constraint)


@lru_cache(maxsize=None)
def gamma_d_sat(d: int) -> ConstraintLanguage:
    """{OR_d}^LIT: clauses of width exactly d plus their identifications."""
    lang = closure(ConstraintLanguage(f"{d}sat-base", (or_constraint(d),)), MODE_LIT)
    return ConstraintLanguage(f"{d}sat", lang.constraints)


@lru_cache(maxsize=None)
def gamma_d_and(d: int) -> ConstraintLanguage:
    """{AND_k : k <= d}: the language monomials are re-read into."""
    return ConstraintLanguage(f"{d}and", tuple(and_constraint(k) for k in range(1, d + 1)))


@lru_cache(maxsize=None)
def builtin_language(key: str) -> ConstraintLanguage:
    key = key.lower()
    if key in ("2sat", "3sat"):
        return gamma_d_sat(int(key[0]))
    if key in ("and2", "and3"):
        return gamma_d_and(int(key[-1]))
    if key in ("xor", "cut"):
        return ConstraintLanguage("xor", (xor_constraint(2),))
    if key == "e2lin":
        lang = closure(ConstraintLanguage("e2lin-base", (xor_constraint(2),)), MODE_NEG)
        return ConstraintLanguage("e2lin", lang.constraints)
    if key == "nae3":
        return ConstraintLanguage("nae3", (nae_constraint(3),))
    if key == "nae3lit":
        lang = closure(ConstraintLanguage("nae3lit-base", (nae_constraint(3),)), MODE_LIT)
        return ConstraintLanguage("nae3lit", lang.constraints)
    if key == "ex3":
        return ConstraintLanguage("ex3", (ex_constraint(3),))
    if key == "dicut":
        return ConstraintLanguage("dicut", (dicut_constraint(),))
    if key == "or2":
        return ConstraintLanguage("or2", (or_constraint(2),))
    if key == "and2t":
        return ConstraintLanguage("and2t", (and_constraint(2), T))
    if key == "eq":
        return ConstraintLanguage("eq", (eq_constraint(),))
    if key == "tf":
        # 2-monotone but neither 0-valid nor 1-valid
        return ConstraintLanguage("tf", (T, F))
    raise KeyError(f"unknown builtin language {key!r}")


#: Every language the test suite treats as "the catalog".
CATALOG_LANGUAGE_KEYS = ("2sat", "3sat", "xor", "e2lin", "nae3", "nae3lit",
                         "ex3", "dicut", "or2", "and2t", "eq", "and2", "tf")

#: The NP-hard members of the catalog per the dichotomy.
NP_HARD_LANGUAGE_KEYS = ("2sat", "3sat", "xor", "e2lin", "nae3", "nae3lit",
                         "ex3", "dicut")
