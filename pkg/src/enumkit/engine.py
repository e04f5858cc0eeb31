"""Generic enumeration machinery.

Every enumerator in the package returns a :class:`SolutionStream`.  Streams
count abstract work units (``steps``) and expose the statistics objects of the
oracles they drive, so :func:`delay_profile` can attribute work and oracle
calls to the gap before each output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .model import Assignment, CnfFormula
from .oracles.sat import OracleStats, SatOracle

BRUTE_FORCE_CAP = 24


class SolutionStream:
    """Single-consumer cursor; ``next()`` returns None once exhausted."""

    def __init__(
        self,
        source: Callable[["SolutionStream"], Iterable],
        stats: Iterable[OracleStats] = (),
        label: str = "",
    ):
        self.steps = 0
        self.ext_calls = 0
        self.stats: list[OracleStats] = list(stats)
        self.children: list[SolutionStream] = []
        self.label = label
        self.emitted = 0
        self._done = False
        self._it: Iterator = iter(source(self))

    def tick(self, n: int = 1) -> None:
        self.steps += n

    def adopt(self, child: "SolutionStream") -> "SolutionStream":
        self.children.append(child)
        return child

    def next(self):
        if self._done:
            return None
        try:
            sol = next(self._it)
        except StopIteration:
            self._done = True
            return None
        self.emitted += 1
        return sol

    def __iter__(self):
        while (sol := self.next()) is not None:
            yield sol

    @property
    def exhausted(self) -> bool:
        return self._done

    def total_steps(self) -> int:
        return self.steps + sum(c.total_steps() for c in self.children)

    def total_ext_calls(self) -> int:
        return self.ext_calls + sum(c.total_ext_calls() for c in self.children)

    def all_stats(self) -> list[OracleStats]:
        seen: dict[int, OracleStats] = {}
        for s in self.stats:
            seen.setdefault(id(s), s)
        for c in self.children:
            for s in c.all_stats():
                seen.setdefault(id(s), s)
        return list(seen.values())

    @classmethod
    def of(cls, items: Iterable, label: str = "list") -> "SolutionStream":
        def gen(st):
            for x in items:
                st.tick()
                yield x

        return cls(gen, label=label)


# -- profiling ---------------------------------------------------------------


@dataclass
class DelayProfile:
    per_output_steps: list[int] = field(default_factory=list)
    per_output_oracle_calls: list[int] = field(default_factory=list)
    per_output_ext_calls: list[int] = field(default_factory=list)
    per_output_max_input: list[int] = field(default_factory=list)
    max_oracle_input_size: int = 0

    @property
    def outputs(self) -> int:
        return len(self.per_output_steps) - 1

    def to_dict(self) -> dict:
        return {
            "outputs": self.outputs,
            "gaps": self.per_output_steps,
            "oracle_calls": self.per_output_oracle_calls,
            "max_oracle_input": self.max_oracle_input_size,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class Profiler:
    """Wraps a fresh stream and records one gap per ``next()``."""

    def __init__(self, stream: SolutionStream):
        self.stream = stream
        self.profile = DelayProfile()
        self._steps = stream.total_steps()
        self._ext = stream.total_ext_calls()
        self._calls = self._snapshot()

    def _snapshot(self) -> dict[int, int]:
        return {id(s): s.calls for s in self.stream.all_stats()}

    def next(self):
        sol = self.stream.next()
        stats = self.stream.all_stats()
        steps, ext = self.stream.total_steps(), self.stream.total_ext_calls()
        calls = 0
        gap_max = 0
        for s in stats:
            start = self._calls.get(id(s), 0)
            calls += s.calls - start
            if s.per_call_sizes:
                gap_max = max([gap_max] + s.per_call_sizes[start:])
        p = self.profile
        p.per_output_steps.append(steps - self._steps)
        p.per_output_oracle_calls.append(calls)
        p.per_output_ext_calls.append(ext - self._ext)
        p.per_output_max_input.append(gap_max)
        p.max_oracle_input_size = max([p.max_oracle_input_size] + [s.max_input_size for s in stats])
        self._steps, self._ext, self._calls = steps, ext, self._snapshot()
        return sol

    def close(self) -> DelayProfile:
        """Finish a truncated run: the unrequested tail counts as an empty gap."""
        if not self.stream.exhausted:
            for lst in (
                self.profile.per_output_steps,
                self.profile.per_output_oracle_calls,
                self.profile.per_output_ext_calls,
                self.profile.per_output_max_input,
            ):
                lst.append(0)
        return self.profile


def delay_profile(stream: SolutionStream) -> tuple[list, DelayProfile]:
    prof = Profiler(stream)
    sols = []
    while (sol := prof.next()) is not None:
        sols.append(sol)
    return sols, prof.profile


# -- flasher -----------------------------------------------------------------


def flasher(
    n: int,
    ext: Callable[[tuple[int, ...]], bool],
    stats: Iterable[OracleStats] = (),
    label: str = "flasher",
) -> SolutionStream:
    """Prefix-extension backtracking in lexicographic order.

    ``ext(prefix)`` must be true iff some total extension of ``prefix`` is a
    solution.  The 0 child is queried first; when it is refused the 1 child is
    taken without asking, because its parent was accepted.  Between two outputs
    this costs at most one query per level on the way up and one per level on
    the way down.
    """

    def gen(st: SolutionStream):
        def ask(prefix):
            st.ext_calls += 1
            st.tick()
            return ext(tuple(prefix))

        if not ask(()):
            return
        prefix: list[int] = []
        # open[i] is True while the 1-branch at depth i is still unexplored
        open_: list[bool] = []
        while True:
            while len(prefix) < n:
                st.tick()
                if ask(prefix + [0]):
                    prefix.append(0)
                    open_.append(True)
                else:
                    prefix.append(1)
                    open_.append(False)
            yield tuple(prefix)
            while True:
                while open_ and not open_[-1]:
                    prefix.pop()
                    open_.pop()
                    st.tick()
                if not open_:
                    return
                prefix[-1] = 1
                open_[-1] = False
                if ask(prefix):
                    break

    return SolutionStream(gen, stats, label)


def sat_extension(f: CnfFormula, oracle: SatOracle, variables: Sequence[int] | None = None):
    """Extension oracle: does ``f`` have a model agreeing with the prefix?"""
    variables = list(variables) if variables is not None else list(range(1, f.num_vars + 1))

    def ext(prefix):
        return bool(oracle.decide(f, [v if b else -v for v, b in zip(variables, prefix)]))

    return ext


# -- blocking ----------------------------------------------------------------


def blocking_enumerate(
    f: CnfFormula,
    projection_vars: Sequence[int] | None = None,
    oracle: SatOracle | None = None,
) -> SolutionStream:
    """Solve, emit the projection, append its negation, repeat."""
    proj = list(projection_vars) if projection_vars is not None else list(range(1, f.num_vars + 1))
    if any(not 1 <= v <= f.num_vars for v in proj):
        raise ValueError("projection variables must belong to the formula")
    oracle = oracle or SatOracle()

    def gen(st: SolutionStream):
        current = CnfFormula(f.num_vars, list(f.clauses))
        while True:
            st.tick()
            res = oracle.decide(current, want_model=True)
            if not res:
                return
            sol = tuple(res.model[v - 1] for v in proj)
            yield sol
            block = tuple(-v if b else v for v, b in zip(proj, sol))
            current.clauses.append(block)

    return SolutionStream(gen, [oracle.stats], "blocking")


# -- e-reductions --------------------------------------------------------------


def _default_size(x: Any) -> int:
    for attr in ("size", "num_vars", "num_vertices"):
        v = getattr(x, attr, None)
        if isinstance(v, int):
            return v
    try:
        return len(x)
    except TypeError:
        return 1


@dataclass
class EReduction:
    """An instance map plus a per-solution back-translation.

    ``tau_stream(x, y)`` enumerates the source solutions attached to target
    solution ``y``; ``bound(size(x))`` caps how many target solutions may map to
    one source solution, and sets how many elements are pulled per round.
    """

    sigma: Callable[[Any], Any]
    tau_stream: Callable[[Any, Any], SolutionStream]
    bound: Callable[[int], int]
    name: str = ""
    size: Callable[[Any], int] = _default_size
    target: Callable[[Any], SolutionStream] | None = None

    def run(self, x: Any, inner: SolutionStream | None = None) -> SolutionStream:
        if inner is None:
            if self.target is None:
                raise ValueError(f"reduction {self.name!r} has no registered target enumerator")
            inner = self.target(self.sigma(x))
        return ereduce_execute(self, x, inner)


def tau_from(fn: Callable[[Any, Any], Iterable]) -> Callable[[Any, Any], SolutionStream]:
    """Lift a function returning a finite collection into a tau stream."""
    return lambda x, y: SolutionStream.of(fn(x, y), label="tau")


def ereduce_execute(red: EReduction, x: Any, inner: SolutionStream) -> SolutionStream:
    """Deduplicating queue schedule for enumerating through a reduction.

    Each round pulls up to ``bound`` elements from the tau streams (advancing
    the inner stream whenever the current tau stream runs dry), then emits the
    lowest-index queue element not yet emitted.  Queue elements are never
    removed, which is what suppresses duplicates.  A partially consumed tau
    stream carries over to the next round instead of being dropped.
    """
    per_round = max(1, red.bound(red.size(x)))

    def gen(st: SolutionStream):
        st.adopt(inner)
        queue: dict[Hashable, None] = {}
        order: list[Hashable] = []
        i = 0
        tau: SolutionStream | None = None
        inner_done = False

        def advance() -> bool:
            nonlocal tau, inner_done
            y = inner.next()
            st.tick()
            if y is None:
                inner_done = True
                tau = None
                return False
            tau = st.adopt(red.tau_stream(x, y))
            return True

        if not advance():
            return
        while True:
            pulled = 0
            while pulled < per_round and not inner_done:
                z = tau.next()
                st.tick()
                if z is None:
                    advance()
                    continue
                if z not in queue:
                    queue[z] = None
                    order.append(z)
                pulled += 1
            if inner_done:
                while i < len(order):
                    st.tick()
                    yield order[i]
                    i += 1
                return
            if i < len(order):
                yield order[i]
                i += 1

    return SolutionStream(gen, label=f"ereduce:{red.name}")


def ereduce_compose(r12: EReduction, r23: EReduction) -> EReduction:
    """Chain two reductions; the composite tau runs the queue schedule nested."""

    def sigma(x):
        return r23.sigma(r12.sigma(x))

    def tau_stream(x, y):
        return ereduce_execute(r12, x, r23.tau_stream(r12.sigma(x), y))

    def bound(s):
        return r12.bound(r23.bound(s))

    return EReduction(
        sigma,
        tau_stream,
        bound,
        name=f"{r12.name}+{r23.name}",
        size=r12.size,
        target=r23.target,
    )


def identity_reduction(target: Callable[[Any], SolutionStream] | None = None) -> EReduction:
    return EReduction(
        lambda x: x,
        tau_from(lambda x, y: [y]),
        lambda s: 1,
        name="identity",
        target=target,
    )


# -- AnotherSolExt adapter -----------------------------------------------------


def another_sol_ext(make_stream: Callable[[], SolutionStream], emitted: int, prefix: Sequence[int]) -> bool:
    """Is ``prefix`` a prefix of the (emitted+1)-th output of a fresh run?"""
    stream = make_stream()
    sol = None
    for _ in range(emitted + 1):
        sol = stream.next()
        if sol is None:
            return False
    return tuple(sol[: len(prefix)]) == tuple(prefix)


def prefix_cursor(make_stream: Callable[[], SolutionStream], n: int) -> SolutionStream:
    """Rebuild an incremental enumerator's outputs bit by bit from yes/no answers.

    Each output is spelled out by asking, for the next bit, whether the current
    prefix extended by 0 is a prefix of the next solution in the wrapped
    enumerator's order; the wrapped order is reproduced exactly.
    """

    def gen(st: SolutionStream):
        k = 0
        while True:
            st.ext_calls += 1
            if not another_sol_ext(make_stream, k, ()):
                return
            prefix: list[int] = []
            for _ in range(n):
                st.ext_calls += 1
                st.tick()
                prefix.append(0 if another_sol_ext(make_stream, k, prefix + [0]) else 1)
            yield tuple(prefix)
            k += 1

    return SolutionStream(gen, label="prefix-cursor")


# -- brute force ---------------------------------------------------------------

FILTERS = ("all", "subset_minimal", "subset_maximal", "card_minimal", "card_maximal")


def truth_table(n: int) -> np.ndarray:
    """All bit vectors of length n in lex order, variable 1 in column 0."""
    idx = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def _has_proper_subset(accepted: np.ndarray, n: int) -> np.ndarray:
    # g[m] = some accepted set is a subset of m (zeta transform over subsets)
    g = accepted.copy()
    for b in range(n):
        bit = 1 << b
        view = g.reshape(-1, 2, bit)
        view[:, 1, :] |= view[:, 0, :]
    res = np.zeros_like(accepted)
    idx = np.arange(1 << n)
    for b in range(n):
        bit = 1 << b
        has = (idx & bit) != 0
        res[has] |= g[idx[has] ^ bit]
    return res


def brute_force_enumerate(
    n: int,
    check: Callable[[Assignment], bool] | None = None,
    filter: str = "all",
    vectorized: Callable[[np.ndarray], np.ndarray] | None = None,
) -> SolutionStream:
    """Exhaustive reference enumerator over {0,1}^n in lex order.

    ``check`` takes one assignment tuple; ``vectorized`` takes the whole
    truth table and returns a boolean mask.  Exactly one must be given.
    """
    if n > BRUTE_FORCE_CAP:
        raise ValueError(f"brute force is capped at {BRUTE_FORCE_CAP} variables")
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}")
    if (check is None) == (vectorized is None):
        raise ValueError("give exactly one of check / vectorized")

    def gen(st: SolutionStream):
        table = truth_table(n)
        if vectorized is not None:
            acc = np.asarray(vectorized(table), dtype=bool)
        else:
            acc = np.fromiter((bool(check(tuple(int(b) for b in row))) for row in table), bool, len(table))
        st.tick(len(table))
        if filter in ("subset_minimal", "subset_maximal"):
            base = acc if filter == "subset_minimal" else acc[::-1].copy()
            keep = base & ~_has_proper_subset(base, n)
            acc = keep if filter == "subset_minimal" else keep[::-1]
        elif filter in ("card_minimal", "card_maximal") and acc.any():
            weight = table.sum(axis=1)
            target = weight[acc].min() if filter == "card_minimal" else weight[acc].max()
            acc = acc & (weight == target)
        for row in table[acc]:
            yield tuple(int(b) for b in row)

    return SolutionStream(gen, label=f"brute:{filter}")


def cnf_mask(f: CnfFormula, table: np.ndarray) -> np.ndarray:
    """Vectorized model test of a CNF against a truth table."""
    ok = np.ones(len(table), dtype=bool)
    for c in f.clauses:
        sat = np.zeros(len(table), dtype=bool)
        for lit in c:
            col = table[:, abs(lit) - 1]
            sat |= (col == 1) if lit > 0 else (col == 0)
        ok &= sat
    return ok


def brute_force_models(f: CnfFormula, filter: str = "all") -> list[Assignment]:
    return list(brute_force_enumerate(f.num_vars, filter=filter, vectorized=lambda t: cnf_mask(f, t)))


__all__ = [
    "SolutionStream",
    "DelayProfile",
    "Profiler",
    "delay_profile",
    "flasher",
    "sat_extension",
    "blocking_enumerate",
    "EReduction",
    "tau_from",
    "ereduce_execute",
    "ereduce_compose",
    "identity_reduction",
    "another_sol_ext",
    "prefix_cursor",
    "brute_force_enumerate",
    "brute_force_models",
    "truth_table",
    "cnf_mask",
]
