"""Definitional brute-force enumerators, coded independently of the engines.

Each function evaluates a problem's defining condition on every candidate,
using truth tables or direct structure walks, never the SAT oracle or any
encoding the engines rely on.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

import numpy as np

from .engine import BRUTE_FORCE_CAP, brute_force_enumerate, brute_force_models, cnf_mask, truth_table
from .logic import qbf_value
from .model import (
    AbductionInstance,
    CnfFormula,
    DatabaseInstance,
    DiagnosisInstance,
    Egd,
    GammaFormula,
    Graph,
    Hypergraph,
    QbfInstance,
    is_variable,
)


class BruteForceCapExceeded(ValueError):
    pass


def _cap(n: int) -> None:
    if n > BRUTE_FORCE_CAP:
        raise BruteForceCapExceeded(f"{n} variables exceed the brute-force cap {BRUTE_FORCE_CAP}")


def _satisfiable(clauses: Sequence[Sequence[int]], n: int) -> bool:
    _cap(n)
    return bool(cnf_mask(CnfFormula(n, list(clauses)), truth_table(n)).any())


def sat_all(f: CnfFormula) -> list[tuple[int, ...]]:
    return brute_force_models(f, "all")


def circumscription(f: CnfFormula) -> list[tuple[int, ...]]:
    return brute_force_models(f, "subset_minimal")


def cardmin(f: CnfFormula) -> list[tuple[int, ...]]:
    return brute_force_models(f, "card_minimal")


def qbf(inst: QbfInstance) -> list[tuple[int, ...]]:
    return [b for b in product((0, 1), repeat=len(inst.free_vars)) if qbf_value(inst, b)]


def gamma(f: GammaFormula) -> list[tuple[int, ...]]:
    return [b for b in product((0, 1), repeat=f.num_vars) if f.satisfied_by(b)]


def diagnosis(inst: DiagnosisInstance) -> list[tuple[int, ...]]:
    n = inst.num_vars
    k = len(inst.components)

    def consistent(sel) -> bool:
        clauses = list(inst.mu.clauses)
        for b, comp in zip(sel, inst.components):
            if b:
                clauses += comp.clauses
        return _satisfiable(clauses, n)

    return list(brute_force_enumerate(k, consistent, "card_maximal"))


def abduction(inst: AbductionInstance) -> list[tuple[int, ...]]:
    n = inst.gamma.num_vars
    _cap(n)
    table = truth_table(n)
    base = cnf_mask(inst.gamma, table)
    out = []
    for sel in product((0, 1), repeat=len(inst.hypotheses)):
        mask = base.copy()
        for b, h in zip(sel, inst.hypotheses):
            if b:
                mask &= table[:, abs(h) - 1] == (1 if h > 0 else 0)
        if mask.any() and not (mask & (table[:, inst.q - 1] == 0)).any():
            out.append(sel)
    return out


def egd_holds(atoms: Sequence, egds: Sequence[Egd]) -> bool:
    """Direct EGD evaluation: try every assignment of body atoms to database atoms."""
    for egd in egds:
        for image in product(atoms, repeat=len(egd.body)):
            binding: dict[str, str] = {}
            ok = True
            for (pred, terms), (p2, args) in zip(egd.body, image):
                if pred != p2 or len(terms) != len(args):
                    ok = False
                    break
                for t, c in zip(terms, args):
                    if is_variable(t):
                        if binding.setdefault(t, c) != c:
                            ok = False
                            break
                    elif t != c:
                        ok = False
                        break
                if not ok:
                    break
            if ok and binding[egd.lhs_var] != binding[egd.rhs_var]:
                return False
    return True


def violating_images(atoms: Sequence, egds: Sequence[Egd]) -> list[frozenset[int]]:
    """Atom-index images of all body homomorphisms that break their equation."""
    out: set[frozenset[int]] = set()
    for egd in egds:

        def rec(k, binding, used):
            if k == len(egd.body):
                if binding[egd.lhs_var] != binding[egd.rhs_var]:
                    out.add(frozenset(used))
                return
            pred, terms = egd.body[k]
            for i, (p2, args) in enumerate(atoms):
                if p2 != pred or len(args) != len(terms):
                    continue
                trial = dict(binding)
                if all(
                    (trial.setdefault(t, c) == c) if is_variable(t) else t == c for t, c in zip(terms, args)
                ):
                    rec(k + 1, trial, used + [i])

        rec(0, {}, [])
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def repairs(d: DatabaseInstance, egds: Sequence[Egd]) -> list[tuple[int, ...]]:
    """Maximal subsets into which no violating body image fits, lex order."""
    n = len(d.atoms)
    _cap(n)
    images = violating_images(d.atoms, egds)
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)

    def consistent(table):
        idx = table.astype(np.int64) @ weights
        ok = np.ones(len(table), dtype=bool)
        for img in images:
            m = int(sum(1 << (n - 1 - i) for i in img))
            ok &= (idx & m) != m
        return ok

    return list(brute_force_enumerate(n, filter="subset_maximal", vectorized=consistent))


def transversals(h: Hypergraph) -> list[tuple[int, ...]]:
    def hits(bits) -> bool:
        return all(any(bits[v - 1] for v in e) for e in h.edges)

    return list(brute_force_enumerate(h.num_vertices, hits, "subset_minimal"))


def dominating_sets(g: Graph) -> list[tuple[int, ...]]:
    nb = {v: g.neighbours(v) for v in range(1, g.num_vertices + 1)}

    def dominates(bits) -> bool:
        return all(bits[v - 1] or any(bits[u - 1] for u in nb[v]) for v in nb)

    return list(brute_force_enumerate(g.num_vertices, dominates, "subset_minimal"))


def colourings(g: Graph, k: int = 3) -> list[tuple[int, ...]]:
    edges = [tuple(e) for e in g.edges]
    return [c for c in product(range(k), repeat=g.num_vertices) if all(c[u - 1] != c[v - 1] for u, v in edges)]


def is_antichain(sets: Sequence[Sequence[int]]) -> bool:
    ss = [frozenset(i for i, b in enumerate(s) if b) for s in sets]
    return not any(a < b or b < a for a, b in combinations(ss, 2))


__all__ = [
    "BruteForceCapExceeded",
    "sat_all",
    "circumscription",
    "cardmin",
    "qbf",
    "gamma",
    "diagnosis",
    "abduction",
    "egd_holds",
    "violating_images",
    "repairs",
    "transversals",
    "dominating_sets",
    "colourings",
    "is_antichain",
]
