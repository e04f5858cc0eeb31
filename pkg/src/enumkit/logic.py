"""Enumerators for the SAT family of problems."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .engine import SolutionStream, blocking_enumerate, flasher, sat_extension
from .model import CnfFormula, QbfInstance, prefix_literals
from .oracles.sat import SatOracle
from .oracles.sigma2 import Sigma2Oracle

EXHAUSTIVE_VAR_LIMIT = 20
EXHAUSTIVE_DEPTH_LIMIT = 4


class UnsupportedInstance(ValueError):
    pass


# -- cardinality constraints ---------------------------------------------------


@dataclass
class CardinalityConstraint:
    vars: list[int]
    bound: int
    sense: str = "at_most"

    def __post_init__(self) -> None:
        if self.sense not in ("at_most", "at_least", "exactly"):
            raise ValueError(f"unknown sense {self.sense!r}")
        if not 0 <= self.bound <= len(self.vars):
            raise ValueError("bound must lie in 0..len(vars)")


def encode_cardinality(c: CardinalityConstraint, fresh_var_base: int) -> CnfFormula:
    """Sequential counter with full equivalences.

    Register ``s[i][j]`` is true iff at least ``j`` of the first ``i`` variables
    are true, so every auxiliary variable is a function of ``c.vars`` and the
    encoding preserves model counts.  Auxiliaries start at ``fresh_var_base``.
    """
    n = len(c.vars)
    k = c.bound
    width = min(n, k if c.sense == "at_least" else k + 1)
    clauses: list[tuple[int, ...]] = []
    nxt = fresh_var_base

    prev: list = [True] + [False] * width
    for x in c.vars:
        cur: list = [True]
        for j in range(1, width + 1):
            a, b = prev[j], prev[j - 1]
            if a is True:
                cur.append(True)
            elif b is False:
                cur.append(a)
            elif a is False and b is True:
                cur.append(x)
            else:
                s = nxt
                nxt += 1
                # s <-> a | (x & b)
                clauses.append(tuple([-s, x] + ([a] if a is not False else [])))
                if b is not True:
                    clauses.append(tuple([-s, b] + ([a] if a is not False else [])))
                if a is not False:
                    clauses.append((-a, s))
                clauses.append(tuple([-x, s] + ([-b] if b is not True else [])))
                cur.append(s)
        prev = cur

    def require(value, positive: bool) -> None:
        if value is True or value is False:
            if value != positive:
                clauses.append(())
            return
        clauses.append((value if positive else -value,))

    if c.sense in ("at_most", "exactly") and k + 1 <= width:
        require(prev[k + 1], False)
    if c.sense in ("at_least", "exactly") and k >= 1:
        require(prev[k], True)
    top = max([fresh_var_base - 1, nxt - 1] + [abs(v) for v in c.vars])
    return CnfFormula(top, clauses)


def with_cardinality(f: CnfFormula, vars: Sequence[int], bound: int, sense: str) -> CnfFormula:
    frag = encode_cardinality(CardinalityConstraint(list(vars), bound, sense), f.num_vars + 1)
    return f.extended(frag.clauses, frag.num_vars)


def tseitin_dnf(terms: Sequence[Sequence[int]], num_vars: int) -> CnfFormula:
    """Equisatisfiable CNF for a DNF; one selector per term after ``num_vars``."""
    clauses = []
    selectors = []
    for i, t in enumerate(terms, 1):
        s = num_vars + i
        selectors.append(s)
        clauses += [(-s, l) for l in t]
    clauses.append(tuple(selectors))
    return CnfFormula(num_vars + len(selectors), clauses)


# -- AllSAT --------------------------------------------------------------------


def allsat(f: CnfFormula, mode: str = "blocking", oracle: SatOracle | None = None) -> SolutionStream:
    oracle = oracle or SatOracle()
    if mode == "blocking":
        return blocking_enumerate(f, None, oracle)
    if mode == "lex":
        return flasher(f.num_vars, sat_extension(f, oracle), [oracle.stats], "allsat-lex")
    raise ValueError(f"unknown mode {mode!r}")


# -- quantified formulas with free variables ---------------------------------


def _matrix_cnf(inst: QbfInstance) -> CnfFormula:
    if inst.kind == "cnf":
        return CnfFormula(inst.num_vars, list(inst.matrix))
    return tseitin_dnf(inst.matrix, inst.num_vars)


def qbf_value(inst: QbfInstance, free_bits: Sequence[int]) -> bool:
    """Nested truth-table evaluation of the formula for one free assignment."""
    val = dict(zip(inst.free_vars, free_bits))

    def rec(depth: int) -> bool:
        if depth == len(inst.blocks):
            return inst.matrix_value(val)
        q, vs = inst.blocks[depth]
        for bits in product((0, 1), repeat=len(vs)):
            val.update(zip(vs, bits))
            r = rec(depth + 1)
            if q == "e" and r:
                return True
            if q == "a" and not r:
                return False
        return q == "a"

    return rec(0)


def _exhaustive_stream(inst: QbfInstance) -> SolutionStream:
    if inst.num_vars > EXHAUSTIVE_VAR_LIMIT or len(inst.blocks) > EXHAUSTIVE_DEPTH_LIMIT:
        raise UnsupportedInstance(
            f"exhaustive evaluation is limited to {EXHAUSTIVE_VAR_LIMIT} variables "
            f"and quantifier depth {EXHAUSTIVE_DEPTH_LIMIT}"
        )

    def gen(st):
        for bits in product((0, 1), repeat=len(inst.free_vars)):
            st.tick()
            if qbf_value(inst, bits):
                yield bits

    return SolutionStream(gen, label="qbf-exhaustive")


def qbf_enum(
    inst: QbfInstance,
    mode: str = "oracle",
    conflict_budget: int | None = None,
) -> SolutionStream:
    """All free-variable assignments making the formula true, in lex order."""
    if mode == "exhaustive":
        return _exhaustive_stream(inst)
    if mode != "oracle":
        raise ValueError(f"unknown mode {mode!r}")
    prefix = inst.prefix
    n = len(inst.free_vars)
    if prefix in ("", "e"):
        f = _matrix_cnf(inst)
        oracle = SatOracle(conflict_budget)
        return flasher(n, sat_extension(f, oracle, inst.free_vars), [oracle.stats], "qbf-sigma1")
    if prefix in ("a", "ea"):
        exists = list(inst.free_vars) + (inst.blocks[0][1] if prefix == "ea" else [])
        forall = inst.blocks[-1][1]
        s2 = Sigma2Oracle(conflict_budget)

        def ext(p):
            return s2.decide(exists, forall, inst.matrix, inst.kind, prefix_literals(p, inst.free_vars))[0]

        return flasher(n, ext, [s2.stats], f"qbf-{'pi1' if prefix == 'a' else 'sigma2'}")
    return _exhaustive_stream(inst)


def pi_to_sigma_blocking(inst: QbfInstance, conflict_budget: int | None = None) -> SolutionStream:
    """Enumerate an exists-led formula through repeated next-output queries.

    Each query asks the inner oracle for one solution ``(x, y0)`` of the
    formula with the outer block made free, outputs ``x``, and extends the
    oracle input by the clause ``x != x_out``.  The input is never shrunk.
    """
    prefix = inst.prefix
    if prefix not in ("", "e", "a", "ea"):
        raise UnsupportedInstance(f"quantifier prefix {prefix!r} is deeper than exists-forall")
    free = list(inst.free_vars)
    y0 = inst.blocks[0][1] if prefix.startswith("e") else []
    forall = inst.blocks[-1][1] if prefix.endswith("a") else []

    def gen(st: SolutionStream):
        side: list[tuple[int, ...]] = []
        if forall:
            oracle = Sigma2Oracle(conflict_budget)
            st.stats.append(oracle.stats)
            while True:
                st.tick()
                ok, wit = oracle.decide(free + y0, forall, inst.matrix, inst.kind, side_clauses=side, want_model=True)
                if not ok:
                    return
                x = tuple(wit[v] for v in free)
                yield x
                side.append(tuple(-v if b else v for v, b in zip(free, x)))
        else:
            oracle = SatOracle(conflict_budget)
            st.stats.append(oracle.stats)
            base = _matrix_cnf(inst)
            current = CnfFormula(base.num_vars, list(base.clauses))
            while True:
                st.tick()
                res = oracle.decide(current, want_model=True)
                if not res:
                    return
                x = tuple(res.model[v - 1] for v in free)
                yield x
                current.clauses.append(tuple(-v if b else v for v, b in zip(free, x)))

    return SolutionStream(gen, label="pi-sigma")


# -- minimal models ------------------------------------------------------------


def _greedy_minimize(f: CnfFormula, model: Sequence[int], oracle: SatOracle, st: SolutionStream):
    """Descend to a subset-minimal model below ``model`` with yes/no calls."""
    fixed = [-v for v in range(1, f.num_vars + 1) if not model[v - 1]]
    result = list(model)
    for v in range(1, f.num_vars + 1):
        if not model[v - 1]:
            continue
        st.tick()
        if oracle.decide(f, fixed + [-v]):
            fixed.append(-v)
            result[v - 1] = 0
        else:
            fixed.append(v)
    return tuple(result)


def exclusion_clause(m: Sequence[int]) -> tuple[int, ...]:
    """Some variable set in ``m`` must drop to 0: excludes ``m`` and every superset."""
    return tuple(-v for v, b in enumerate(m, 1) if b)


def circumscription_enum(f: CnfFormula, order: str = "discovery", oracle: SatOracle | None = None) -> SolutionStream:
    """Subset-minimal models: greedy descent, then exclude the model's up-set."""
    oracle = oracle or SatOracle()

    def gen(st: SolutionStream):
        current = CnfFormula(f.num_vars, list(f.clauses))
        while True:
            st.tick()
            res = oracle.decide(current, want_model=True)
            if not res:
                return
            m = _greedy_minimize(current, res.model, oracle, st)
            yield m
            current.clauses.append(exclusion_clause(m))

    stream = SolutionStream(gen, [oracle.stats], "circumscription")
    if order == "lex":

        def lex_gen(st: SolutionStream):
            yield from sorted(st.adopt(stream))

        return SolutionStream(lex_gen, label="circumscription-lex")
    if order != "discovery":
        raise ValueError(f"unknown order {order!r}")
    return stream


def min_model_weight(f: CnfFormula, oracle: SatOracle) -> int | None:
    if not oracle.decide(f):
        return None
    for k in range(f.num_vars + 1):
        if oracle.decide(with_cardinality(f, range(1, f.num_vars + 1), k, "at_most")):
            return k
    raise AssertionError("a satisfiable formula has a model of weight <= num_vars")


def cardmin_enum(f: CnfFormula, oracle: SatOracle | None = None) -> SolutionStream:
    """Cardinality-minimal models in lex order."""
    oracle = oracle or SatOracle()

    def gen(st: SolutionStream):
        k = min_model_weight(f, oracle)
        st.tick(f.num_vars + 1)
        if k is None:
            return
        g = with_cardinality(f, range(1, f.num_vars + 1), k, "exactly")
        inner = st.adopt(flasher(f.num_vars, sat_extension(g, oracle, range(1, f.num_vars + 1)), [], "cardmin-lex"))
        yield from inner

    return SolutionStream(gen, [oracle.stats], "cardmin")
