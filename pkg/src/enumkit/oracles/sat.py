"""Propositional satisfiability oracle with assumptions.

A plain DPLL: two watched literals for unit propagation, chronological
backtracking, lowest-index-first decisions trying the 0 branch first.  No
clause learning, so every call starts from the queried formula alone and the
recorded input size is exactly what the caller handed over.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from ..model import Assignment, CnfFormula, clause_tokens


class OracleError(RuntimeError):
    """Base class for oracle failures that are not a yes/no answer."""


class ResourceLimitExceeded(OracleError):
    """The configured conflict budget or iteration cap ran out."""


class Status(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass
class SatResult:
    status: Status
    model: Assignment | None = None

    def __bool__(self) -> bool:
        return self.status is Status.SAT


@dataclass
class OracleStats:
    calls: int = 0
    max_input_size: int = 0
    per_call_sizes: list[int] | None = field(default_factory=list)

    def record(self, size: int) -> None:
        self.calls += 1
        self.max_input_size = max(self.max_input_size, size)
        if self.per_call_sizes is not None:
            self.per_call_sizes.append(size)

    def snapshot(self) -> tuple[int, int]:
        return self.calls, self.max_input_size


def _dpll(num_vars: int, clauses: Sequence[Sequence[int]], assumptions: Sequence[int], budget: int | None):
    """Return a model list (index 0 unused) or None; raise on budget exhaustion."""
    assign = [0] * (num_vars + 1)
    trail: list[int] = []
    off = num_vars
    watches: list[list[list[int]]] = [[] for _ in range(2 * num_vars + 1)]
    units: list[int] = []
    for c in clauses:
        if not c:
            return None
        if len(c) == 1:
            units.append(c[0])
        else:
            cl = list(c)
            watches[cl[0] + off].append(cl)
            watches[cl[1] + off].append(cl)

    def enqueue(lit: int) -> bool:
        v = abs(lit)
        cur = assign[v]
        want = 1 if lit > 0 else -1
        if cur:
            return cur == want
        assign[v] = want
        trail.append(lit)
        return True

    def propagate(head: int) -> bool:
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            ws = watches[false_lit + off]
            i = 0
            while i < len(ws):
                cl = ws[i]
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], cl[0]
                other = cl[0]
                ov = assign[abs(other)]
                if ov and (ov > 0) == (other > 0):
                    i += 1
                    continue
                for k in range(2, len(cl)):
                    lit = cl[k]
                    lv = assign[abs(lit)]
                    if not lv or (lv > 0) == (lit > 0):
                        cl[1], cl[k] = lit, cl[1]
                        watches[lit + off].append(cl)
                        ws[i] = ws[-1]
                        ws.pop()
                        break
                else:
                    if not enqueue(other):
                        return False
                    i += 1
        return True

    for lit in list(assumptions) + units:
        if not enqueue(lit):
            return None
    if not propagate(0):
        return None

    # decision stack entries: (trail position, literal, already flipped)
    decisions: list[tuple[int, int, bool]] = []
    conflicts = 0
    next_var = 1
    while True:
        while next_var <= num_vars and assign[next_var]:
            next_var += 1
        if next_var > num_vars:
            return assign
        pos = len(trail)
        decisions.append((pos, -next_var, False))
        enqueue(-next_var)
        ok = propagate(pos)
        while not ok:
            conflicts += 1
            if budget is not None and conflicts > budget:
                raise ResourceLimitExceeded(f"conflict budget {budget} exhausted")
            while decisions and decisions[-1][2]:
                decisions.pop()
            if not decisions:
                return None
            pos, lit, _ = decisions.pop()
            for l in trail[pos:]:
                assign[abs(l)] = 0
            del trail[pos:]
            decisions.append((pos, -lit, True))
            enqueue(-lit)
            ok = propagate(pos)
        next_var = 1


class SatOracle:
    """Stateful front end: counts calls and records input sizes."""

    def __init__(self, conflict_budget: int | None = None, record_sizes: bool = True):
        self.conflict_budget = conflict_budget
        self.stats = OracleStats(per_call_sizes=[] if record_sizes else None)

    def decide(self, f: CnfFormula, assumptions: Sequence[int] = (), want_model: bool = False) -> SatResult:
        for lit in assumptions:
            if lit == 0 or abs(lit) > f.num_vars:
                raise ValueError(f"assumption {lit} outside the formula's variables")
        self.stats.record(clause_tokens(f.clauses) + len(assumptions))
        model = _dpll(f.num_vars, f.clauses, assumptions, self.conflict_budget)
        if model is None:
            return SatResult(Status.UNSAT)
        if not want_model:
            return SatResult(Status.SAT)
        return SatResult(Status.SAT, tuple(1 if model[v] > 0 else 0 for v in range(1, f.num_vars + 1)))

    __call__ = decide


def sat_decide(
    f: CnfFormula,
    assumptions: Sequence[int] = (),
    want_model: bool = False,
    oracle: SatOracle | None = None,
) -> SatResult:
    return (oracle or SatOracle()).decide(f, assumptions, want_model)


def model_via_decisions(f: CnfFormula, oracle: SatOracle | None = None) -> Assignment | None:
    """Build the lex-least model from yes/no answers only.

    One initial call, then one call per variable: when the 0 extension is
    refused the 1 extension is implied by the previous yes.
    """
    oracle = oracle or SatOracle()
    if not oracle.decide(f):
        return None
    prefix: list[int] = []
    for v in range(1, f.num_vars + 1):
        if oracle.decide(f, [*_lits(prefix), -v]):
            prefix.append(0)
        else:
            prefix.append(1)
    return tuple(prefix)


def _lits(prefix: Sequence[int]) -> list[int]:
    return [i if b else -i for i, b in enumerate(prefix, 1)]
