"""Hypergraph, graph and database enumerators and the reductions between them."""

from __future__ import annotations

from collections import defaultdict
from itertools import product
from typing import Sequence

from .engine import EReduction, SolutionStream, flasher, sat_extension, tau_from
from .model import CnfFormula, DatabaseInstance, Egd, Graph, Hypergraph, QbfInstance, is_variable
from .oracles.sat import SatOracle

# -- EGD grounding -------------------------------------------------------------


def egd_matches(d: DatabaseInstance, egd: Egd):
    """Yield (binding, atom indices) for every homomorphism of the body into ``d``."""
    by_pred: dict[tuple[str, int], list[int]] = defaultdict(list)
    for i, (p, args) in enumerate(d.atoms):
        by_pred[p, len(args)].append(i)
    body = egd.body

    def rec(k: int, binding: dict[str, str], used: list[int]):
        if k == len(body):
            yield dict(binding), list(used)
            return
        pred, terms = body[k]
        for i in by_pred.get((pred, len(terms)), ()):
            args = d.atoms[i][1]
            added = []
            ok = True
            for t, c in zip(terms, args):
                if is_variable(t):
                    bound = binding.get(t)
                    if bound is None:
                        binding[t] = c
                        added.append(t)
                    elif bound != c:
                        ok = False
                        break
                elif t != c:
                    ok = False
                    break
            if ok:
                used.append(i)
                yield from rec(k + 1, binding, used)
                used.pop()
            for t in added:
                del binding[t]

    yield from rec(0, {}, [])


def ground_egds(d: DatabaseInstance, egds: Sequence[Egd]) -> list[frozenset[int]]:
    """Minimal sets of atom indices that together violate some EGD."""
    found: set[frozenset[int]] = set()
    for egd in egds:
        for binding, used in egd_matches(d, egd):
            if binding[egd.lhs_var] != binding[egd.rhs_var]:
                found.add(frozenset(used))
    ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
    minimal: list[frozenset[int]] = []
    for s in ordered:
        if not any(m <= s for m in minimal):
            minimal.append(s)
    return minimal


def _maximal_independent_encoding(n: int, sets: Sequence[frozenset[int]]) -> CnfFormula:
    """Bit i (1-based) kept; no set fully kept; every dropped bit is needed.

    A dropped element is needed when some set containing it has all its other
    elements kept.  One auxiliary per (element, set) pair records that.
    """
    clauses: list[tuple[int, ...]] = [tuple(-(i + 1) for i in sorted(s)) for s in sets]
    nxt = n
    for i in range(n):
        containing = [s for s in sets if i in s]
        if any(len(s) == 1 for s in containing):
            continue
        witnesses = []
        for s in containing:
            nxt += 1
            witnesses.append(nxt)
            clauses += [(-nxt, j + 1) for j in sorted(s) if j != i]
        clauses.append((i + 1, *witnesses))
    return CnfFormula(nxt, clauses)


def repair_encoding(d: DatabaseInstance, egds: Sequence[Egd]) -> CnfFormula:
    return _maximal_independent_encoding(len(d.atoms), ground_egds(d, egds))


def repair_enum(d: DatabaseInstance, egds: Sequence[Egd], oracle: SatOracle | None = None) -> SolutionStream:
    """Repairs as keep/delete bit vectors over the atoms, lex order."""
    oracle = oracle or SatOracle()
    n = len(d.atoms)
    if not ground_egds(d, egds):
        return SolutionStream.of([(1,) * n], label="repair-consistent")
    enc = repair_encoding(d, egds)
    return flasher(n, sat_extension(enc, oracle, range(1, n + 1)), [oracle.stats], "repair")


# -- transversals and dominating sets -------------------------------------------------


def transversal_enum(h: Hypergraph, oracle: SatOracle | None = None) -> SolutionStream:
    """Minimal transversals as vertex bit vectors, lex order."""
    oracle = oracle or SatOracle()
    n = h.num_vertices
    # every chosen vertex needs a private edge: no other chosen vertex in it
    clauses: list[tuple[int, ...]] = [tuple(sorted(e)) for e in h.edges]
    nxt = n
    for v in range(1, n + 1):
        containing = [e for e in h.edges if v in e]
        if any(len(e) == 1 for e in containing):
            continue
        private = []
        for e in containing:
            nxt += 1
            private.append(nxt)
            clauses += [(-nxt, -u) for u in sorted(e) if u != v]
        clauses.append((-v, *private))
    enc = CnfFormula(nxt, clauses)
    return flasher(n, sat_extension(enc, oracle, range(1, n + 1)), [oracle.stats], "transversal")


def closed_neighbourhoods(g: Graph) -> Hypergraph:
    return Hypergraph(g.num_vertices, [frozenset(g.neighbours(v) | {v}) for v in range(1, g.num_vertices + 1)])


def domset_enum(g: Graph, oracle: SatOracle | None = None) -> SolutionStream:
    """Minimal dominating sets: minimal transversals of the closed neighbourhoods."""
    return transversal_enum(closed_neighbourhoods(g), oracle)


def trans_to_dom_sigma(h: Hypergraph) -> Graph:
    if h.num_vertices < 1 or not h.edges:
        raise ValueError("the hypergraph needs at least one vertex and one edge")
    n, m = h.num_vertices, len(h.edges)
    ys = range(n + 1, n + m + 1)
    apex = n + m + 1
    edges = {frozenset((x, y)) for x in range(1, n + 1) for y in range(x + 1, n + 1)}
    edges |= {frozenset((y, z)) for y in ys for z in ys if y < z}
    edges |= {frozenset((x, n + j)) for j, e in enumerate(h.edges, 1) for x in e}
    edges |= {frozenset((apex, x)) for x in range(1, n + 1)}
    return Graph(apex, edges)


def trans_to_dom(oracle: SatOracle | None = None) -> EReduction:
    """Minimal transversals through minimal dominating sets of the incidence graph.

    Dominating sets that leave the original vertices (an incidence pair
    {x, y_e}, or the apex with some y_e) carry no transversal and map to nothing.
    """
    def tau(x: Hypergraph, dset):
        n = x.num_vertices
        if any(dset[n:]):
            return []
        return [tuple(dset[:n])]

    return EReduction(
        sigma=trans_to_dom_sigma,
        tau_stream=tau_from(tau),
        bound=lambda s: s + 1,
        name="trans-dom",
        size=lambda x: x.num_vertices * len(x.edges) + len(x.edges),
        target=lambda g: domset_enum(g, oracle),
    )


def dom_to_trans(oracle: SatOracle | None = None) -> EReduction:
    """The converse direction: closed neighbourhoods, identity on solutions."""
    return EReduction(
        sigma=closed_neighbourhoods,
        tau_stream=tau_from(lambda x, y: [y]),
        bound=lambda s: 1,
        name="dom-trans",
        size=lambda x: x.num_vertices,
        target=lambda h: transversal_enum(h, oracle),
    )


# -- colourings ----------------------------------------------------------------


def coloring_encoding(g: Graph, k: int) -> CnfFormula:
    """One-hot colours; within a vertex's block colour c sits at offset k-1-c.

    With that layout the lex order of the bit vectors is the lex order of the
    colour sequences, so a lex flasher emits colourings in ascending order.
    """
    n = g.num_vertices

    def var(v: int, c: int) -> int:
        return (v - 1) * k + (k - 1 - c) + 1

    clauses = []
    for v in range(1, n + 1):
        clauses.append(tuple(var(v, c) for c in range(k)))
        for c in range(k):
            for c2 in range(c + 1, k):
                clauses.append((-var(v, c), -var(v, c2)))
    for e in sorted(tuple(sorted(e)) for e in g.edges):
        u, w = e
        for c in range(k):
            clauses.append((-var(u, c), -var(w, c)))
    return CnfFormula(n * k, clauses)


def coloring_enum(g: Graph, k: int = 3, oracle: SatOracle | None = None) -> SolutionStream:
    """Proper k-colourings as colour tuples (colours 0..k-1), lex order."""
    if k < 1:
        raise ValueError("need at least one colour")
    oracle = oracle or SatOracle()
    n = g.num_vertices
    enc = coloring_encoding(g, k)
    bits = flasher(n * k, sat_extension(enc, oracle), [], "coloring-bits")

    def gen(st: SolutionStream):
        st.adopt(bits)
        for b in bits:
            yield tuple(k - 1 - b[(v - 1) * k : v * k].index(1) for v in range(1, n + 1))

    return SolutionStream(gen, [oracle.stats], f"{k}-coloring")


def threecol_to_fourcol_sigma(g: Graph) -> Graph:
    apex = g.num_vertices + 1
    return Graph(apex, set(g.edges) | {frozenset((v, apex)) for v in range(1, apex)})


def _swap_tau(x: Graph, c4):
    a = c4[-1]
    swap = {a: 3, 3: a}
    return [tuple(swap.get(c, c) for c in c4[:-1])]


def threecol_to_fourcol(oracle: SatOracle | None = None) -> EReduction:
    """3-colourings via 4-colourings of the graph plus an apex vertex."""
    return EReduction(
        sigma=threecol_to_fourcol_sigma,
        tau_stream=tau_from(_swap_tau),
        bound=lambda s: 4,
        name="3col-4col",
        size=lambda x: x.num_vertices,
        target=lambda h: coloring_enum(h, 4, oracle),
    )


# -- universally quantified 3-DNF to repairs -------------------------------------


def _check_pi1_3dnf(psi: QbfInstance) -> None:
    if psi.prefix not in ("a", ""):
        raise ValueError(f"expected a single universal block, got prefix {psi.prefix!r}")
    if psi.kind != "dnf":
        raise ValueError("the matrix must be a DNF")
    if not psi.free_vars:
        raise ValueError("at least one free variable is required")
    for t in psi.matrix:
        if len(t) != 3:
            raise ValueError(f"implicant {t} does not have exactly 3 literals")


def pi1sat_to_repair_sigma(psi: QbfInstance) -> tuple[DatabaseInstance, list[Egd]]:
    _check_pi1_3dnf(psi)
    k = len(psi.free_vars)
    ys = psi.blocks[0][1] if psi.blocks else []
    x_index = {v: i for i, v in enumerate(psi.free_vars, 1)}
    y_index = {v: j for j, v in enumerate(ys, 1)}

    atoms = []
    for i in range(1, k + 1):
        atoms += [(f"p{i}", ("0", "1")), (f"p{i}", ("1", "0"))]
    atoms += [("q", ("0", "1")), ("q", ("1", "0"))]
    atoms += [("a", t) for t in product("01", repeat=3) if t != ("1", "1", "1")]
    atoms += [("b0", ("0",)), ("b1", ("1",))]
    db = DatabaseInstance(["0", "1"], atoms)

    chi = [("b0", ("V0",)), ("b1", ("V1",)), ("q", ("V0", "V1")), ("q", ("V1", "V0"))]
    chi += [("a", tuple("V" + b for b in t)) for t in product("01", repeat=3) if t != ("1", "1", "1")]
    pi = [(f"p{i}", (f"W{i}", f"Wp{i}")) for i in range(1, k + 1)]

    def star(lit: int) -> str:
        v = abs(lit)
        if v in x_index:
            name = f"X{x_index[v]}"
        elif v in y_index:
            name = f"Y{y_index[v]}"
        else:
            raise ValueError(f"variable {v} is neither free nor universal")
        return name if lit > 0 else name.replace("X", "Xp", 1).replace("Y", "Yp", 1)

    egds = [Egd(chi + pi + [(f"p{i}", ("X", "Xp")), (f"p{i}", ("Xp", "X"))], "X", "Xp") for i in range(1, k + 1)]
    c2 = chi + pi
    c2 += [(f"p{i}", (f"X{i}", f"Xp{i}")) for i in range(1, k + 1)]
    c2 += [("q", (f"Y{j}", f"Yp{j}")) for j in range(1, len(ys) + 1)]
    c2 += [("a", tuple(star(l) for l in t)) for t in psi.matrix]
    egds.append(Egd(c2, "X1", "Xp1"))
    return db, egds


def pi1sat_to_repair_tau(psi: QbfInstance, keep: Sequence[int]) -> list[tuple[int, ...]]:
    k = len(psi.free_vars)
    if not all(keep[2 * k :]):
        return []
    pairs = [(keep[2 * i], keep[2 * i + 1]) for i in range(k)]
    if any(a + b != 1 for a, b in pairs):
        return []
    return [tuple(b for _, b in pairs)]


def pi1sat_to_repair(oracle: SatOracle | None = None) -> EReduction:
    """Models of a universally quantified 3-DNF through database repairs."""
    return EReduction(
        sigma=pi1sat_to_repair_sigma,
        tau_stream=tau_from(pi1sat_to_repair_tau),
        bound=lambda k: k + 12,
        name="pi1sat-repair",
        size=lambda x: len(x.free_vars),
        target=lambda de: repair_enum(de[0], de[1], oracle),
    )
