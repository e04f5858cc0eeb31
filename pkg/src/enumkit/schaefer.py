"""Enumeration for Gamma-formulas: the dichotomy path and constants elimination."""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

from .engine import EReduction, SolutionStream, flasher, sat_extension, tau_from
from .model import IMP, BoolRelation, CnfFormula, GammaFormula
from .oracles.sat import SatOracle
from .oracles.schaefer import SchaeferOracle
from .relations import classify_language

GADGET_CONSTRAINT_CAP = 3
GADGET_BUDGET = 200_000


class SearchCapExceeded(RuntimeError):
    """The gadget search hit its budget before finishing; not the same as 'none exists'."""


def gamma_to_cnf(f: GammaFormula) -> CnfFormula:
    """Each constraint becomes the maxterms of its relation's complement."""
    clauses = []
    for name, vs in f.constraints:
        rel = f.language[name]
        for t in product((0, 1), repeat=rel.arity):
            if t not in rel.tuples:
                clauses.append(tuple(-v if b else v for v, b in zip(vs, t)))
    return CnfFormula(f.num_vars, clauses)


def enum_sat_gamma(f: GammaFormula, sat_oracle: SatOracle | None = None) -> SolutionStream:
    """Models in lex order; polynomial deciders when the language allows it."""
    used = {name for name, _ in f.constraints}
    cls = classify_language([f.language[n] for n in sorted(used)]).chosen()
    if cls is not None:
        oracle = SchaeferOracle(cls)
        return flasher(f.num_vars, lambda p: oracle.decide(f, p), [oracle.stats], f"gamma-{cls}")
    sat_oracle = sat_oracle or SatOracle()
    g = gamma_to_cnf(f)
    return flasher(f.num_vars, sat_extension(g, sat_oracle), [sat_oracle.stats], "gamma-np")


# -- Imp gadgets ---------------------------------------------------------------


def _gadget_masks(gamma: dict[str, BoolRelation], nv: int):
    """Distinct model masks of single constraints over ``nv`` variables."""
    rows = list(product((0, 1), repeat=nv))
    seen: dict[int, tuple[str, tuple[int, ...]]] = {}
    for name in sorted(gamma):
        rel = gamma[name]
        for vs in product(range(1, nv + 1), repeat=rel.arity):
            mask = 0
            for i, r in enumerate(rows):
                if tuple(r[v - 1] for v in vs) in rel.tuples:
                    mask |= 1 << i
            seen.setdefault(mask, (name, vs))
    return seen


def _is_imp_gadget(mask: int, nv: int) -> bool:
    aux = nv - 2
    for x, y in product((0, 1), repeat=2):
        base = (x << (nv - 1) | y << (nv - 2)) if nv >= 2 else 0
        count = sum(1 for a in range(1 << aux) if mask >> (base | a) & 1)
        if count != (0 if (x, y) == (1, 0) else 1):
            return False
    return True


def imp_gadget_search(
    gamma: dict[str, BoolRelation],
    max_aux: int = 2,
    max_constraints: int = GADGET_CONSTRAINT_CAP,
    budget: int = GADGET_BUDGET,
) -> GammaFormula | None:
    """Smallest Gamma-formula expressing Imp(1, 2), auxiliaries uniquely determined.

    Variables 1 and 2 play x and y; auxiliaries are 3 and 4.  Returns None when
    the exhaustive search up to ``max_constraints`` constraints finds nothing.
    """
    if not 0 <= max_aux <= 2:
        raise ValueError("max_aux must be 0, 1 or 2")
    checked = 0
    for aux in range(max_aux + 1):
        nv = 2 + aux
        masks = _gadget_masks(gamma, nv)
        full = (1 << (1 << nv)) - 1
        keys = sorted(masks, key=lambda m: masks[m])
        for size in range(1, max_constraints + 1):
            for combo in combinations(keys, size):
                checked += 1
                if checked > budget:
                    raise SearchCapExceeded(f"gadget search exceeded {budget} candidates")
                m = full
                for k in combo:
                    m &= k
                if _is_imp_gadget(m, nv):
                    return GammaFormula(dict(gamma), [masks[k] for k in combo], nv)
    return None


# -- constants elimination ------------------------------------------------------


def _constant_kind(rel: BoolRelation) -> int | None:
    if rel.arity == 1 and len(rel.tuples) == 1:
        return next(iter(rel.tuples))[0]
    return None


def _plan(f: GammaFormula):
    """Variable classes and the renumbering shared by sigma and tau."""
    ones, zeros = set(), set()
    for name, vs in f.constraints:
        kind = _constant_kind(f.language[name])
        if kind == 1:
            ones.add(vs[0])
        elif kind == 0:
            zeros.add(vs[0])
    rest = [v for v in range(1, f.num_vars + 1) if v not in ones and v not in zeros]
    index = {v: i for i, v in enumerate(rest, 1)}
    fv, tv = len(rest) + 1, len(rest) + 2
    # a variable forced both ways is sent to f, and Imp(t, f) makes the result empty
    for v in zeros:
        index[v] = fv
    for v in ones - zeros:
        index[v] = tv
    return rest, index, fv, tv, bool(ones & zeros)


def _imp_name(language: dict[str, BoolRelation]) -> str:
    for name, rel in sorted(language.items()):
        if rel == IMP:
            return name
    name = "Imp"
    while name in language:
        name += "_"
    return name


def constants_sigma(f: GammaFormula, gadget: GammaFormula | None = None) -> GammaFormula:
    rest, index, fv, tv, contradictory = _plan(f)
    language = {n: r for n, r in f.language.items() if _constant_kind(r) is None}
    imp = _imp_name(language)
    imps = [(v, tv) for v in range(1, len(rest) + 1)]
    imps += [(fv, v) for v in range(1, len(rest) + 1)]
    imps.append((fv, tv))
    if contradictory:
        imps.append((tv, fv))
    constraints = [
        (n, tuple(index[v] for v in vs)) for n, vs in f.constraints if _constant_kind(f.language[n]) is None
    ]
    num_vars = len(rest) + 2
    if gadget is None:
        language[imp] = IMP
        constraints += [(imp, pair) for pair in imps]
    else:
        for n, rel in gadget.language.items():
            if language.setdefault(n, rel) != rel:
                raise ValueError(f"gadget relation {n} clashes with the formula's language")
        for a, b in imps:
            mapping = {1: a, 2: b}
            for k in range(3, gadget.num_vars + 1):
                num_vars += 1
                mapping[k] = num_vars
            constraints += [(n, tuple(mapping[v] for v in vs)) for n, vs in gadget.constraints]
    return GammaFormula(language, constraints, num_vars)


def constants_tau(f: GammaFormula, y: Sequence[int]) -> list[tuple[int, ...]]:
    rest, index, fv, tv, _ = _plan(f)
    if y[fv - 1] != 0 or y[tv - 1] != 1:
        return []
    return [tuple(y[index[v] - 1] for v in range(1, f.num_vars + 1))]


def constants_elimination(f: GammaFormula, gadget: GammaFormula | None = None) -> EReduction:
    """Reduction removing unary constants, at the price of Imp and two fresh variables."""
    target_formula = constants_sigma(f, gadget)
    return EReduction(
        sigma=lambda x: target_formula if x is f else constants_sigma(x, gadget),
        tau_stream=tau_from(constants_tau),
        bound=lambda s: 1,
        name="constants-elimination",
        size=lambda x: x.num_vars,
        target=enum_sat_gamma,
    )
