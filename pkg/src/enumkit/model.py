"""Domain types shared by every oracle and enumerator.

Literals follow the DIMACS convention: a nonzero int whose absolute value is
the 1-based variable index and whose sign is the polarity.  Assignments are
tuples of 0/1 ints indexed from variable 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

Clause = tuple[int, ...]
Assignment = tuple[int, ...]

MAX_ARITY = 8


class ModelError(ValueError):
    """Raised when a value violates a domain-type invariant."""


def normalize_clause(lits: Iterable[int]) -> Clause | None:
    """Drop repeated literals; return None for a tautology.

    Literal order of first occurrence is kept, so normalizing twice is a no-op.
    """
    seen: dict[int, None] = {}
    for lit in lits:
        if lit == 0:
            raise ModelError("literal 0 is not allowed")
        if -lit in seen:
            return None
        seen.setdefault(lit, None)
    return tuple(seen)


def clause_tokens(clauses: Iterable[Sequence[int]]) -> int:
    """Encoded size of a clause list: one token per literal plus a terminator."""
    return sum(len(c) + 1 for c in clauses)


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[Clause] = field(default_factory=list)

    def __post_init__(self) -> None:
        normalized = []
        for c in self.clauses:
            nc = normalize_clause(c)
            if nc is None:
                continue
            for lit in nc:
                if abs(lit) > self.num_vars:
                    raise ModelError(f"variable {abs(lit)} exceeds num_vars={self.num_vars}")
            normalized.append(nc)
        self.clauses = normalized

    @property
    def size(self) -> int:
        return clause_tokens(self.clauses)

    def satisfied_by(self, bits: Sequence[int]) -> bool:
        return all(any((bits[abs(l) - 1] == 1) == (l > 0) for l in c) for c in self.clauses)

    def extended(self, clauses: Iterable[Sequence[int]], num_vars: int | None = None) -> "CnfFormula":
        return CnfFormula(max(self.num_vars, num_vars or 0), self.clauses + [tuple(c) for c in clauses])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return self.num_vars == other.num_vars and self.clauses == other.clauses


def lex_compare(a: Sequence[int], b: Sequence[int]) -> int:
    """Return -1, 0 or 1; the 0-bit precedes the 1-bit at the first difference."""
    if len(a) != len(b):
        raise ModelError(f"length mismatch: {len(a)} vs {len(b)}")
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return 0


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def str_to_bits(s: str) -> Assignment:
    return tuple(int(ch) for ch in s)


def prefix_literals(prefix: Sequence[int], variables: Sequence[int] | None = None) -> list[int]:
    """Assumption literals fixing ``variables[i]`` to ``prefix[i]``."""
    if variables is None:
        variables = range(1, len(prefix) + 1)
    return [v if b else -v for v, b in zip(variables, prefix)]


@dataclass
class QbfInstance:
    """A prenex QBF with a free block.

    ``blocks`` lists ``(quantifier, variables)`` pairs from the outermost inwards,
    with quantifier ``"a"`` (forall) or ``"e"`` (exists).  ``matrix`` holds CNF
    clauses or DNF terms according to ``kind``; terms are stored verbatim so
    padded implicants such as ``(x1, y1, y1)`` survive.
    """

    num_vars: int
    free_vars: list[int]
    blocks: list[tuple[str, list[int]]]
    matrix: list[Clause]
    kind: str = "cnf"

    def __post_init__(self) -> None:
        if self.kind not in ("cnf", "dnf"):
            raise ModelError(f"unknown matrix kind {self.kind!r}")
        seen = list(self.free_vars) + [v for _, vs in self.blocks for v in vs]
        if len(set(seen)) != len(seen):
            raise ModelError("free and quantified blocks overlap")
        if set(seen) != set(range(1, self.num_vars + 1)):
            raise ModelError("free and quantified blocks must partition 1..num_vars")
        for (q1, _), (q2, _) in zip(self.blocks, self.blocks[1:]):
            if q1 == q2:
                raise ModelError("quantifier blocks must alternate")
        for q, _ in self.blocks:
            if q not in ("a", "e"):
                raise ModelError(f"unknown quantifier {q!r}")
        for row in self.matrix:
            for lit in row:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ModelError(f"literal {lit} out of range")
        self.matrix = [tuple(r) for r in self.matrix]

    @property
    def prefix(self) -> str:
        return "".join(q for q, _ in self.blocks)

    def matrix_value(self, value: dict[int, int] | Sequence[int]) -> bool:
        get = value.__getitem__ if isinstance(value, dict) else (lambda v: value[v - 1])

        def lit_true(l: int) -> bool:
            return (get(abs(l)) == 1) == (l > 0)

        if self.kind == "cnf":
            return all(any(lit_true(l) for l in c) for c in self.matrix)
        return any(all(lit_true(l) for l in t) for t in self.matrix)


@dataclass(frozen=True)
class BoolRelation:
    arity: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        if not 0 < self.arity <= MAX_ARITY:
            raise ModelError(f"arity must be in 1..{MAX_ARITY}")
        if not self.tuples:
            raise ModelError("relation must be nonempty")
        for t in self.tuples:
            if len(t) != self.arity or any(b not in (0, 1) for b in t):
                raise ModelError(f"bad tuple {t} for arity {self.arity}")

    @classmethod
    def of(cls, *rows: str) -> "BoolRelation":
        tuples = frozenset(str_to_bits(r) for r in rows)
        return cls(len(rows[0]), tuples)


IMP = BoolRelation.of("00", "01", "11")
TRUE_REL = BoolRelation.of("1")
FALSE_REL = BoolRelation.of("0")


@dataclass
class GammaFormula:
    language: dict[str, BoolRelation]
    constraints: list[tuple[str, tuple[int, ...]]]
    num_vars: int

    def __post_init__(self) -> None:
        self.constraints = [(name, tuple(vs)) for name, vs in self.constraints]
        for name, vs in self.constraints:
            if name not in self.language:
                raise ModelError(f"undefined relation {name!r}")
            if len(vs) != self.language[name].arity:
                raise ModelError(
                    f"arity mismatch: {name} has arity {self.language[name].arity}, got {len(vs)}"
                )
            for v in vs:
                if not 1 <= v <= self.num_vars:
                    raise ModelError(f"variable {v} out of range 1..{self.num_vars}")

    def satisfied_by(self, bits: Sequence[int]) -> bool:
        return all(
            tuple(bits[v - 1] for v in vs) in self.language[name].tuples
            for name, vs in self.constraints
        )


@dataclass
class Graph:
    num_vertices: int
    edges: set[frozenset[int]] = field(default_factory=set)

    def __post_init__(self) -> None:
        edges = set()
        for e in self.edges:
            e = frozenset(e)
            if len(e) != 2:
                raise ModelError(f"edge {sorted(e)} must join two distinct vertices")
            if not all(1 <= v <= self.num_vertices for v in e):
                raise ModelError(f"edge {sorted(e)} references a missing vertex")
            edges.add(e)
        self.edges = edges

    def neighbours(self, v: int) -> set[int]:
        return {u for e in self.edges if v in e for u in e if u != v}


@dataclass
class Hypergraph:
    num_vertices: int
    edges: list[frozenset[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        edges: list[frozenset[int]] = []
        for e in self.edges:
            e = frozenset(e)
            if not e:
                raise ModelError("empty hyperedge")
            if not all(1 <= v <= self.num_vertices for v in e):
                raise ModelError(f"hyperedge {sorted(e)} references a missing vertex")
            if e not in edges:
                edges.append(e)
        self.edges = edges


Atom = tuple[str, tuple[str, ...]]


def is_variable(term: str) -> bool:
    return term[:1].isupper()


@dataclass
class DatabaseInstance:
    domain: list[str]
    atoms: list[Atom]

    def __post_init__(self) -> None:
        seen: dict[Atom, None] = {}
        for pred, args in self.atoms:
            for c in args:
                if c not in self.domain:
                    raise ModelError(f"constant {c!r} not in declared domain")
            seen.setdefault((pred, tuple(args)), None)
        self.atoms = list(seen)

    def __len__(self) -> int:
        return len(self.atoms)


@dataclass
class Egd:
    body: list[Atom]
    lhs_var: str
    rhs_var: str

    def __post_init__(self) -> None:
        self.body = [(p, tuple(args)) for p, args in self.body]
        body_vars = {t for _, args in self.body for t in args if is_variable(t)}
        for v in (self.lhs_var, self.rhs_var):
            if not is_variable(v):
                raise ModelError(f"equation side {v!r} is not a variable")
            if v not in body_vars:
                raise ModelError(f"equation variable {v} does not occur in the body")


@dataclass
class AbductionInstance:
    gamma: CnfFormula
    hypotheses: list[int]
    q: int

    def __post_init__(self) -> None:
        if any(abs(h) == self.q for h in self.hypotheses):
            raise ModelError("manifestation variable occurs in the hypotheses")
        if not 1 <= self.q <= self.gamma.num_vars:
            raise ModelError("manifestation variable out of range")
        for h in self.hypotheses:
            if h == 0 or abs(h) > self.gamma.num_vars:
                raise ModelError(f"hypothesis literal {h} out of range")


@dataclass
class DiagnosisInstance:
    components: list[CnfFormula]
    mu: CnfFormula

    @property
    def num_vars(self) -> int:
        return max([self.mu.num_vars] + [c.num_vars for c in self.components])
