"""Polynomial-time extension deciders for the four tractable classes."""

from __future__ import annotations

import heapq
from collections import defaultdict
from typing import Sequence

import networkx as nx

from ..model import GammaFormula, normalize_clause
from ..relations import TARGETS, ClassMismatch, classify_relation, relation_to_clausal_form
from .sat import OracleStats


def _instantiate_clauses(f: GammaFormula, target: str) -> list[tuple[int, ...]]:
    out = []
    for name, vs in f.constraints:
        for c in relation_to_clausal_form(f.language[name], target):
            clause = normalize_clause(vs[abs(l) - 1] * (1 if l > 0 else -1) for l in c)
            if clause is not None:
                out.append(clause)
    return out


def _instantiate_equations(f: GammaFormula) -> list[tuple[int, int]]:
    """Equations as (bitmask over variables, rhs); bit v-1 stands for variable v."""
    out = []
    for name, vs in f.constraints:
        for positions, rhs in relation_to_clausal_form(f.language[name], "affine_system"):
            mask = 0
            for p in positions:
                mask ^= 1 << (vs[p - 1] - 1)
            out.append((mask, rhs))
    return out


def horn_sat(clauses: Sequence[Sequence[int]]) -> bool:
    """Forward chaining from the all-false assignment; every clause has <= 1 positive literal."""
    true: set[int] = set()
    missing = []
    watchers: dict[int, list[int]] = defaultdict(list)
    queue: list[int] = []
    for i, c in enumerate(clauses):
        body = {-l for l in c if l < 0}
        heads = [l for l in c if l > 0]
        missing.append(len(body))
        for v in body:
            watchers[v].append(i)
        if not body:
            if not heads:
                return False
            queue.append(i)
    heads_of = [next((l for l in c if l > 0), None) for c in clauses]
    heapq.heapify(queue)
    while queue:
        i = heapq.heappop(queue)
        head = heads_of[i]
        if head is None:
            return False
        if head in true:
            continue
        true.add(head)
        for j in watchers[head]:
            missing[j] -= 1
            if missing[j] == 0:
                heapq.heappush(queue, j)
    return True


def two_sat(clauses: Sequence[Sequence[int]]) -> bool:
    g = nx.DiGraph()
    for c in clauses:
        if not c:
            return False
        a, b = (c[0], c[0]) if len(c) == 1 else c
        g.add_edge(-a, b)
        g.add_edge(-b, a)
    for comp in nx.strongly_connected_components(g):
        if any(-l in comp for l in comp):
            return False
    return True


def gf2_consistent(equations: Sequence[tuple[int, int]]) -> bool:
    """Gaussian elimination over GF(2) on int bitsets."""
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in equations:
        while mask:
            top = mask.bit_length() - 1
            if top not in pivots:
                pivots[top] = (mask, rhs)
                break
            pm, pr = pivots[top]
            mask ^= pm
            rhs ^= pr
        else:
            if rhs:
                return False
    return True


class SchaeferOracle:
    """Extension oracle for Gamma-formulas whose relations share one tractable class."""

    def __init__(self, cls: str):
        if cls not in TARGETS:
            raise ValueError(f"unknown class {cls!r}")
        self.cls = cls
        self.stats = OracleStats()
        self._cache: dict[int, tuple] = {}

    def _compiled(self, f: GammaFormula):
        key = id(f)
        hit = self._cache.get(key)
        if hit is not None and hit[0] is f:
            return hit[1]
        for name in {n for n, _ in f.constraints}:
            if not getattr(classify_relation(f.language[name]), self.cls):
                raise ClassMismatch(f"relation {name} is not {self.cls}")
        if self.cls == "affine":
            form = _instantiate_equations(f)
        else:
            form = _instantiate_clauses(f, TARGETS[self.cls])
        self._cache[key] = (f, form)
        return form

    def decide(self, f: GammaFormula, partial: Sequence[int] = ()) -> bool:
        """Does the prefix ``partial`` (values of variables 1, 2, ...) extend to a model?"""
        form = self._compiled(f)
        if self.cls == "affine":
            self.stats.record(sum(bin(m).count("1") + 1 for m, _ in form) + len(partial))
            units = [(1 << i, b) for i, b in enumerate(partial)]
            return gf2_consistent(list(form) + units)
        self.stats.record(sum(len(c) + 1 for c in form) + len(partial))
        units = [(v if b else -v,) for v, b in enumerate(partial, 1)]
        clauses = list(form) + units
        if self.cls == "horn":
            return horn_sat(clauses)
        if self.cls == "dualhorn":
            return horn_sat([tuple(-l for l in c) for c in clauses])
        return two_sat(clauses)


def schaefer_decide(f: GammaFormula, partial: Sequence[int], cls: str, oracle: SchaeferOracle | None = None) -> bool:
    oracle = oracle or SchaeferOracle(cls)
    if oracle.cls != cls:
        raise ValueError("oracle class differs from the requested class")
    return oracle.decide(f, partial)
