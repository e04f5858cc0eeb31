"""Seeded random instances for tests and the cross-check harness."""

from __future__ import annotations

import random
from importlib import resources
from itertools import product

from .model import (
    AbductionInstance,
    BoolRelation,
    CnfFormula,
    DatabaseInstance,
    DiagnosisInstance,
    Egd,
    GammaFormula,
    Graph,
    Hypergraph,
    QbfInstance,
)


def _lit(rng: random.Random, v: int) -> int:
    return v if rng.random() < 0.5 else -v


def random_cnf(rng: random.Random, n: int, m: int, width: int = 3, min_width: int = 1) -> CnfFormula:
    clauses = []
    for _ in range(m):
        w = rng.randint(min(min_width, n), min(width, n))
        clauses.append(tuple(_lit(rng, v) for v in rng.sample(range(1, n + 1), w)))
    return CnfFormula(n, clauses)


def random_qbf(
    rng: random.Random, n_free: int, n_exists: int, n_forall: int, rows: int, kind: str = "dnf", width: int = 3
) -> QbfInstance:
    """``free; exists; forall`` in that variable order; empty blocks are dropped."""
    n = n_free + n_exists + n_forall
    free = list(range(1, n_free + 1))
    ex = list(range(n_free + 1, n_free + n_exists + 1))
    fa = list(range(n_free + n_exists + 1, n + 1))
    blocks = [(q, vs) for q, vs in (("e", ex), ("a", fa)) if vs]
    matrix = []
    for _ in range(rows):
        w = rng.randint(1, min(width, n))
        matrix.append(tuple(_lit(rng, v) for v in rng.sample(range(1, n + 1), w)))
    return QbfInstance(n, free, blocks, matrix, kind)


def random_pi1_3dnf(rng: random.Random, k: int, l: int, m: int) -> QbfInstance:
    """Universal block over 3-literal implicants; repeats pad tiny variable pools."""
    n = k + l
    matrix = []
    for _ in range(m):
        matrix.append(tuple(_lit(rng, rng.randint(1, n)) for _ in range(3)))
    blocks = [("a", list(range(k + 1, n + 1)))] if l else []
    return QbfInstance(n, list(range(1, k + 1)), blocks, matrix, "dnf")


def random_relation(rng: random.Random, arity: int, density: float = 0.5) -> BoolRelation:
    rows = [t for t in product((0, 1), repeat=arity) if rng.random() < density]
    if not rows:
        rows = [tuple(rng.randint(0, 1) for _ in range(arity))]
    return BoolRelation(arity, frozenset(rows))


def random_gamma(rng: random.Random, n: int, m: int, n_rel: int = 2, max_arity: int = 3) -> GammaFormula:
    language = {f"R{i}": random_relation(rng, rng.randint(1, max_arity)) for i in range(n_rel)}
    constraints = []
    for _ in range(m):
        name = rng.choice(sorted(language))
        ar = language[name].arity
        constraints.append((name, tuple(rng.randint(1, n) for _ in range(ar))))
    return GammaFormula(language, constraints, n)


def random_graph(rng: random.Random, n: int, p: float = 0.4) -> Graph:
    edges = {frozenset((u, v)) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p}
    return Graph(n, edges)


def random_hypergraph(rng: random.Random, n: int, m: int, max_edge: int = 3) -> Hypergraph:
    edges = [frozenset(rng.sample(range(1, n + 1), rng.randint(1, min(max_edge, n)))) for _ in range(m)]
    return Hypergraph(n, edges)


EGD_POOL = (
    Egd([("r", ("X", "Y")), ("r", ("X", "Z"))], "Y", "Z"),
    Egd([("r", ("X", "Y")), ("s", ("X",)), ("s", ("Z",))], "X", "Z"),
    Egd([("r", ("X", "Y")), ("r", ("Y", "X"))], "X", "Y"),
)


def random_database(
    rng: random.Random, n_atoms: int, domain_size: int = 3, n_egds: int | None = None
) -> tuple[DatabaseInstance, list[Egd]]:
    """Binary ``r`` and unary ``s`` facts under 1 to 3 dependencies from a fixed pool."""
    dom = [str(i) for i in range(domain_size)]
    # only d*d binary and d unary facts exist
    want = min(n_atoms, domain_size * domain_size + domain_size)
    atoms: dict = {}
    while len(atoms) < want:
        if rng.random() < 0.7:
            atoms[("r", (rng.choice(dom), rng.choice(dom)))] = None
        else:
            atoms[("s", (rng.choice(dom),))] = None
    k = n_egds if n_egds is not None else rng.randint(1, len(EGD_POOL))
    egds = rng.sample(list(EGD_POOL), k)
    return DatabaseInstance(dom, list(atoms)), egds


def random_diagnosis(rng: random.Random, n: int, n_comp: int, tries: int = 200) -> DiagnosisInstance | None:
    """Rejection-sample an instance with B consistent, mu satisfiable, B and mu inconsistent."""
    from .kr import InvalidInstance, validate_diagnosis

    for _ in range(tries):
        comps = [random_cnf(rng, n, rng.randint(1, 2), 2) for _ in range(n_comp)]
        mu = random_cnf(rng, n, rng.randint(1, 3), 2)
        inst = DiagnosisInstance(comps, mu)
        try:
            validate_diagnosis(inst)
        except InvalidInstance:
            continue
        return inst
    return None


def random_abduction(rng: random.Random, n: int, n_hyp: int, m: int) -> AbductionInstance:
    """Redraws the theory until it is satisfiable; the query is the last variable."""
    from .oracles.sat import SatOracle

    q = n
    hyps = [_lit(rng, v) for v in rng.sample(range(1, n), min(n_hyp, n - 1))]
    oracle = SatOracle(record_sizes=False)
    while not oracle.decide(gamma := random_cnf(rng, n, m, 3)):
        pass
    return AbductionInstance(gamma, hyps, q)


def corpus() -> list[tuple[str, CnfFormula]]:
    """The bundled CNF corpus (all at most 14 variables), sorted by file name."""
    from .formats import parse_dimacs

    root = resources.files("enumkit") / "data" / "corpus"
    files = sorted((p for p in root.iterdir() if p.name.endswith(".cnf")), key=lambda p: p.name)
    return [(p.name, parse_dimacs(p.read_text(encoding="utf-8"))) for p in files]
