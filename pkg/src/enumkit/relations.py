"""Closure-based classification of Boolean relations and their compiled forms."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import combinations, product

from .model import MAX_ARITY, BoolRelation

CLASSES = ("horn", "dualhorn", "bijunctive", "affine")
TARGETS = {"horn": "horn", "dualhorn": "dualhorn", "bijunctive": "two_cnf", "affine": "affine_system"}


class CompileError(AssertionError):
    """A compiled form disagrees with its relation: the classifier is wrong."""


class ClassMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SchaeferClass:
    horn: bool
    dualhorn: bool
    bijunctive: bool
    affine: bool
    zero_valid: bool
    one_valid: bool

    @property
    def is_schaefer(self) -> bool:
        return self.horn or self.dualhorn or self.bijunctive or self.affine

    def chosen(self) -> str | None:
        """Decider used for this class, by priority horn > dualhorn > bijunctive > affine."""
        return next((c for c in CLASSES if getattr(self, c)), None)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["is_schaefer"] = self.is_schaefer
        return d

    def __and__(self, other: "SchaeferClass") -> "SchaeferClass":
        return SchaeferClass(*(a and b for a, b in zip(astuple_(self), astuple_(other))))


def astuple_(c: SchaeferClass) -> tuple[bool, ...]:
    return (c.horn, c.dualhorn, c.bijunctive, c.affine, c.zero_valid, c.one_valid)


def _as_int(t) -> int:
    return int("".join(map(str, t)), 2)


def _closed2(ts: list[int], members: set[int], op) -> bool:
    return all(op(a, b) in members for i, a in enumerate(ts) for b in ts[i + 1 :])


def _closed3(ts: list[int], members: set[int], op) -> bool:
    n = len(ts)
    return all(
        op(ts[i], ts[j], ts[k]) in members for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)
    )


@lru_cache(maxsize=None)
def classify_relation(r: BoolRelation) -> SchaeferClass:
    """Closure tests on tuples packed into ints.

    The operations are symmetric and idempotent (majority and xor of three
    return one argument when two coincide), so only sets of distinct tuples
    need checking.
    """
    if r.arity > MAX_ARITY:
        raise ValueError(f"arity {r.arity} exceeds {MAX_ARITY}")
    ts = sorted(_as_int(t) for t in r.tuples)
    members = set(ts)
    return SchaeferClass(
        horn=_closed2(ts, members, lambda a, b: a & b),
        dualhorn=_closed2(ts, members, lambda a, b: a | b),
        bijunctive=_closed3(ts, members, lambda a, b, c: (a & b) | (b & c) | (a & c)),
        affine=_closed3(ts, members, lambda a, b, c: a ^ b ^ c),
        zero_valid=0 in members,
        one_valid=(1 << r.arity) - 1 in members,
    )


def classify_language(language) -> SchaeferClass:
    """Flags shared by every relation of the language."""
    out = SchaeferClass(True, True, True, True, True, True)
    for rel in language.values() if isinstance(language, dict) else language:
        out = out & classify_relation(rel)
    return out


# -- compiled forms ----------------------------------------------------------


def _clause_holds(clause, tup) -> bool:
    return any((tup[abs(l) - 1] == 1) == (l > 0) for l in clause)


def _implied_clauses(r: BoolRelation, allowed) -> list[tuple[int, ...]]:
    """Subsumption-minimal clauses of the given shape satisfied by every tuple."""
    k = r.arity
    found: list[tuple[int, ...]] = []
    for width in range(1, k + 1):
        for positions in combinations(range(1, k + 1), width):
            for signs in product((1, -1), repeat=width):
                clause = tuple(p * s for p, s in zip(positions, signs))
                if not allowed(clause):
                    continue
                if any(set(c) <= set(clause) for c in found):
                    continue
                if all(_clause_holds(clause, t) for t in r.tuples):
                    found.append(clause)
    return found


def _gf2_rref(rows: list[int], width: int) -> list[int]:
    rows = [r for r in rows if r]
    basis: list[int] = []
    for bit in range(width - 1, -1, -1):
        mask = 1 << bit
        pivot = next((r for r in rows if r & mask), None)
        if pivot is None:
            continue
        rows.remove(pivot)
        rows = [r ^ pivot if r & mask else r for r in rows]
        basis = [b ^ pivot if b & mask else b for b in basis]
        basis.append(pivot)
    return basis


def _as_mask(t) -> int:
    return sum(1 << i for i, b in enumerate(t) if b)


def _affine_system(r: BoolRelation) -> list[tuple[tuple[int, ...], int]]:
    """Equations ``xor of positions == rhs`` whose solution set is the relation."""
    k = r.arity
    base = min(r.tuples)
    b0 = _as_mask(base)
    basis = _gf2_rref([_as_mask(t) ^ b0 for t in r.tuples], k)
    equations = []
    for a in range(1, 1 << k):
        if all(bin(a & d).count("1") % 2 == 0 for d in basis):
            equations.append(a)
    # a basis of the annihilator is enough
    eq_basis = sorted(_gf2_rref(equations, k))
    out = []
    for a in eq_basis:
        positions = tuple(i + 1 for i in range(k) if a >> i & 1)
        out.append((positions, bin(a & b0).count("1") % 2))
    return out


def _models(k: int, form, target: str) -> set[tuple[int, ...]]:
    out = set()
    for t in product((0, 1), repeat=k):
        if target == "affine_system":
            ok = all(sum(t[p - 1] for p in pos) % 2 == rhs for pos, rhs in form)
        else:
            ok = all(_clause_holds(c, t) for c in form)
        if ok:
            out.add(t)
    return out


_SHAPES = {
    "horn": lambda c: sum(l > 0 for l in c) <= 1,
    "dualhorn": lambda c: sum(l < 0 for l in c) <= 1,
    "two_cnf": lambda c: len(c) <= 2,
}
_FLAG = {"horn": "horn", "dualhorn": "dualhorn", "two_cnf": "bijunctive", "affine_system": "affine"}


@lru_cache(maxsize=None)
def relation_to_clausal_form(r: BoolRelation, target: str):
    """Clauses (over positions 1..arity) or GF(2) equations defining ``r`` exactly."""
    if target not in _FLAG:
        raise ValueError(f"unknown target {target!r}")
    if not getattr(classify_relation(r), _FLAG[target]):
        raise ClassMismatch(f"relation is not {_FLAG[target]}")
    if target == "affine_system":
        form = tuple(_affine_system(r))
    else:
        form = tuple(_implied_clauses(r, _SHAPES[target]))
    if _models(r.arity, form, target) != set(r.tuples):
        raise CompileError(f"compiled {target} form does not match the relation")
    return form
