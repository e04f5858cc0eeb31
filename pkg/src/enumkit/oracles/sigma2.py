"""Exists-forall oracle driven by counterexample-guided refinement."""

from __future__ import annotations

from itertools import product
from typing import Sequence

from ..model import Assignment, CnfFormula, clause_tokens, normalize_clause
from .sat import OracleStats, ResourceLimitExceeded, SatOracle

MAX_ITERATIONS = 10_000
EXHAUSTIVE_FORALL_LIMIT = 12


def _restrict(rows: Sequence[Sequence[int]], kind: str, fixed: dict[int, int]):
    """Simplify a matrix under a partial assignment.

    Returns ``True``/``False`` when the matrix became constant, else the list of
    remaining rows with fixed literals removed.
    """
    out = []
    for row in rows:
        row = normalize_clause(row) if kind == "cnf" else _normalize_term(row)
        if row is None:
            # tautological clause or contradictory term: drop it
            continue
        rest = []
        decided = None
        for lit in row:
            v = fixed.get(abs(lit))
            if v is None:
                rest.append(lit)
            elif (v == 1) == (lit > 0):
                if kind == "cnf":
                    decided = True
                    break
            else:
                if kind == "dnf":
                    decided = False
                    break
        if decided is not None:
            continue
        if not rest:
            # cnf: clause falsified; dnf: term satisfied
            return kind == "dnf"
        out.append(tuple(rest))
    if not out:
        return kind == "cnf"
    return out


def _normalize_term(term: Sequence[int]):
    seen: dict[int, None] = {}
    for lit in term:
        if -lit in seen:
            return None
        seen.setdefault(lit, None)
    return tuple(seen)


class Sigma2Oracle:
    """Decides ``exists X forall Y. M`` for a CNF or DNF matrix ``M``.

    The candidate side is a SAT instance over the existential variables that
    only ever grows by blocking clauses.  Each refuted candidate is blocked on
    the variables of the matrix part its counterexample left unsatisfied, which
    refutes every candidate sharing that restriction at once.
    """

    def __init__(
        self,
        conflict_budget: int | None = None,
        max_iterations: int = MAX_ITERATIONS,
        universal: str = "sat",
    ):
        if universal not in ("sat", "exhaustive"):
            raise ValueError("universal must be 'sat' or 'exhaustive'")
        self.stats = OracleStats()
        self.candidates = SatOracle(conflict_budget)
        self.verifier = SatOracle(conflict_budget)
        self.max_iterations = max_iterations
        self.universal = universal
        self.iterations = 0

    def decide(
        self,
        exists_vars: Sequence[int],
        forall_vars: Sequence[int],
        matrix: Sequence[Sequence[int]],
        kind: str = "dnf",
        assumptions: Sequence[int] = (),
        side_clauses: Sequence[Sequence[int]] = (),
        want_model: bool = False,
    ) -> tuple[bool, dict[int, int] | None]:
        """Answer the query; the witness maps existential variables to bits."""
        exists_vars = list(exists_vars)
        forall_vars = list(forall_vars)
        self.stats.record(clause_tokens(matrix) + clause_tokens(side_clauses) + len(assumptions))
        fixed = {abs(l): int(l > 0) for l in assumptions}
        restricted = _restrict(matrix, kind, fixed)
        free_e = [v for v in exists_vars if v not in fixed]
        free_a = [v for v in forall_vars if v not in fixed]
        if restricted is False:
            return False, None

        # candidate formula over a compact renumbering of the free existentials
        index = {v: i for i, v in enumerate(free_e, 1)}
        side = []
        for c in side_clauses:
            reduced = []
            sat = False
            for lit in c:
                v = fixed.get(abs(lit))
                if v is None:
                    reduced.append(index[abs(lit)] * (1 if lit > 0 else -1))
                elif (v == 1) == (lit > 0):
                    sat = True
                    break
            if not sat:
                side.append(tuple(reduced))
        cand = CnfFormula(len(free_e), side)

        rounds = 0
        while True:
            rounds += 1
            self.iterations += 1
            if rounds > self.max_iterations:
                raise ResourceLimitExceeded(f"CEGAR iteration cap {self.max_iterations} exceeded")
            res = self.candidates.decide(cand, want_model=True)
            if not res:
                return False, None
            cand_bits = {v: res.model[i - 1] for v, i in index.items()}
            if restricted is True:
                return True, self._witness(fixed, exists_vars, cand_bits, want_model)
            counter = self._counterexample(restricted, kind, cand_bits, free_a)
            if counter is None:
                return True, self._witness(fixed, exists_vars, cand_bits, want_model)
            block_vars = self._obligation_vars(restricted, kind, counter, cand_bits)
            block = tuple(-index[v] if cand_bits[v] else index[v] for v in sorted(block_vars))
            cand = cand.extended([block])

    @staticmethod
    def _witness(fixed, exists_vars, cand_bits, want_model):
        if not want_model:
            return None
        return {v: fixed.get(v, cand_bits.get(v, 0)) for v in exists_vars}

    def _counterexample(self, rows, kind, cand_bits, free_a) -> dict[int, int] | None:
        """A universal assignment falsifying the matrix under the candidate."""
        inner = _restrict(rows, kind, cand_bits)
        if inner is True:
            return None
        if inner is False:
            return {v: 0 for v in free_a}
        if self.universal == "exhaustive" and len(free_a) <= EXHAUSTIVE_FORALL_LIMIT:
            for bits in product((0, 1), repeat=len(free_a)):
                y = dict(zip(free_a, bits))
                if _restrict(inner, kind, y) is False:
                    return y
            return None
        if kind == "cnf":
            # negation is a DNF: any clause over Y alone can be falsified
            for c in inner:
                y = {v: 0 for v in free_a}
                y.update({abs(l): int(l < 0) for l in c})
                return y
            return None
        # negation of a DNF over Y is a CNF: one clause per term
        index = {v: i for i, v in enumerate(free_a, 1)}
        neg = CnfFormula(
            len(free_a), [tuple(-index[l] if l > 0 else index[-l] for l in t) for t in inner]
        )
        res = self.verifier.decide(neg, want_model=True)
        if not res:
            return None
        return {v: res.model[i - 1] for v, i in index.items()}

    @staticmethod
    def _obligation_vars(rows, kind, counter, cand_bits) -> set[int]:
        """Existential variables of the matrix part left unsatisfied by ``counter``."""
        out: set[int] = set()
        for row in rows:
            row = normalize_clause(row) if kind == "cnf" else _normalize_term(row)
            if row is None:
                continue
            ylits = [l for l in row if abs(l) in counter]
            if kind == "cnf":
                if any((counter[abs(l)] == 1) == (l > 0) for l in ylits):
                    continue
            else:
                if not all((counter[abs(l)] == 1) == (l > 0) for l in ylits):
                    continue
            out.update(abs(l) for l in row if abs(l) in cand_bits)
        return out


def sigma2_decide(
    exists_vars: Sequence[int],
    forall_vars: Sequence[int],
    matrix: Sequence[Sequence[int]],
    kind: str = "dnf",
    assumptions: Sequence[int] = (),
    oracle: Sigma2Oracle | None = None,
) -> bool:
    return (oracle or Sigma2Oracle()).decide(exists_vars, forall_vars, matrix, kind, assumptions)[0]


def eval_exists_forall(exists_vars, forall_vars, matrix, kind, assumptions=()) -> bool:
    """Nested truth-table evaluation; the independent reference for tests."""
    fixed = {abs(l): int(l > 0) for l in assumptions}
    ev = [v for v in exists_vars if v not in fixed]
    av = [v for v in forall_vars if v not in fixed]

    def holds(val):
        def t(l):
            return (val[abs(l)] == 1) == (l > 0)

        if kind == "cnf":
            return all(any(t(l) for l in c) for c in matrix)
        return any(all(t(l) for l in r) for r in matrix)

    for xb in product((0, 1), repeat=len(ev)):
        val = dict(fixed)
        val.update(zip(ev, xb))
        if all(holds({**val, **dict(zip(av, yb))}) for yb in product((0, 1), repeat=len(av))):
            return True
    return False


__all__ = ["Sigma2Oracle", "sigma2_decide", "eval_exists_forall", "Assignment"]
