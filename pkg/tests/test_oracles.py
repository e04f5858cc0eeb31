import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from enumkit.brute import sat_all
from enumkit.generators import random_cnf, random_qbf
from enumkit.model import IMP, BoolRelation, CnfFormula, GammaFormula
from enumkit.oracles.sat import ResourceLimitExceeded, SatOracle, Status, model_via_decisions, sat_decide
from enumkit.oracles.schaefer import SchaeferOracle, gf2_consistent, horn_sat, schaefer_decide, two_sat
from enumkit.oracles.sigma2 import Sigma2Oracle, eval_exists_forall, sigma2_decide

from conftest import cnf

XOR1 = BoolRelation.of("01", "10")


def test_sat_examples():
    assert sat_decide(cnf(1, (1,), (-1,))).status is Status.UNSAT
    res = sat_decide(cnf(2, (1, 2)), [-1], want_model=True)
    assert res.status is Status.SAT and res.model == (0, 1)


def test_random_3cnf_matches_truth_table():
    rng = random.Random(5)
    oracle = SatOracle()
    for _ in range(50):
        f = random_cnf(rng, 8, 30, 3)
        assert bool(oracle.decide(f)) == bool(sat_all(f))


def test_returned_models_satisfy():
    rng = random.Random(6)
    oracle = SatOracle()
    for _ in range(100):
        f = random_cnf(rng, 10, 25, 3)
        a = [rng.choice((1, -1)) * v for v in rng.sample(range(1, 11), 3)]
        res = oracle.decide(f, a, want_model=True)
        if res:
            assert f.satisfied_by(res.model)
            assert all(res.model[abs(l) - 1] == (l > 0) for l in a)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_assumption_monotonicity(seed):
    rng = random.Random(seed)
    f = random_cnf(rng, 7, 20, 3)
    oracle = SatOracle()
    lits = [rng.choice((1, -1)) * v for v in rng.sample(range(1, 8), 4)]
    for k in range(len(lits)):
        if not oracle.decide(f, lits[:k]):
            assert not oracle.decide(f, lits[: k + 1])


def test_stats():
    oracle = SatOracle()
    f = cnf(2, (1, 2))
    oracle.decide(f)
    oracle.decide(f, [-1, -2])
    assert oracle.stats.calls == 2
    assert oracle.stats.per_call_sizes == [3, 5]
    assert oracle.stats.max_input_size == max(oracle.stats.per_call_sizes)


def test_conflict_budget_is_not_unsat():
    pigeons = 7
    var = lambda p, h: p * (pigeons - 1) + h + 1
    clauses = [tuple(var(p, h) for h in range(pigeons - 1)) for p in range(pigeons)]
    clauses += [(-var(p, h), -var(q, h)) for h in range(pigeons - 1) for p in range(pigeons) for q in range(p)]
    f = CnfFormula(pigeons * (pigeons - 1), clauses)
    with pytest.raises(ResourceLimitExceeded):
        SatOracle(conflict_budget=5).decide(f)


def test_model_via_decisions():
    assert model_via_decisions(cnf(2, (1, 2))) == (0, 1)
    assert model_via_decisions(cnf(2, (1,), (2,))) == (1, 1)
    assert model_via_decisions(cnf(1, (1,), (-1,))) is None
    rng = random.Random(7)
    for _ in range(40):
        f = random_cnf(rng, 9, 20, 3)
        oracle = SatOracle()
        m = model_via_decisions(f, oracle)
        models = sat_all(f)
        assert m == (min(models) if models else None)
        assert oracle.stats.calls <= 2 * f.num_vars + 1


def test_sigma2_examples():
    assert sigma2_decide([1], [2], [(1, 2), (1, -2)], "dnf")
    assert not sigma2_decide([1], [2], [(1, 2)], "dnf")


@pytest.mark.parametrize("universal", ["sat", "exhaustive"])
def test_sigma2_random(universal):
    rng = random.Random(11)
    for _ in range(60):
        kind = rng.choice(("cnf", "dnf"))
        inst = random_qbf(rng, 0, rng.randint(1, 5), rng.randint(1, 5), rng.randint(1, 8), kind)
        (_, ex), (_, fa) = inst.blocks
        oracle = Sigma2Oracle(universal=universal)
        assert oracle.decide(ex, fa, inst.matrix, kind)[0] == eval_exists_forall(ex, fa, inst.matrix, kind)


def test_sigma2_witness():
    ok, wit = Sigma2Oracle().decide([1, 2], [3], [(1, 3), (1, -3), (2, 3, -2)], "dnf", want_model=True)
    assert ok and wit[1] == 1


def test_schaefer_decide_examples():
    f = GammaFormula({"IMP": IMP}, [("IMP", (1, 2)), ("IMP", (2, 3))], 3)
    assert schaefer_decide(f, [1], "horn")
    g = GammaFormula({"X": XOR1}, [("X", (1, 2))], 2)
    assert not schaefer_decide(g, [1, 1], "affine")
    assert schaefer_decide(g, [], "affine")
    assert schaefer_decide(g, [], "bijunctive")


def test_schaefer_oracle_agrees_with_brute_force():
    rels = {"IMP": IMP, "X": XOR1, "NAND": BoolRelation.of("00", "01", "10")}
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 6)
        names = ("IMP", "NAND") if rng.random() < 0.5 else ("X",)
        lang = {k: rels[k] for k in names}
        cons = [(rng.choice(names), (rng.randint(1, n), rng.randint(1, n))) for _ in range(rng.randint(0, 6))]
        f = GammaFormula(lang, cons, n)
        partial = [rng.randint(0, 1) for _ in range(rng.randint(0, n))]
        expect = any(f.satisfied_by(tuple(partial) + rest) for rest in product((0, 1), repeat=n - len(partial)))
        cls = "horn" if "IMP" in names else "affine"
        assert SchaeferOracle(cls).decide(f, partial) == expect


def test_polytime_solvers():
    assert horn_sat([(1,), (-1, 2), (-2,)]) is False
    assert horn_sat([(-1, 2), (-2, 3)]) is True
    assert two_sat([(1, 2), (-1, 2), (1, -2), (-1, -2)]) is False
    assert two_sat([(1, 2), (-1, -2)]) is True
    assert gf2_consistent([(0b11, 1), (0b01, 1), (0b10, 1)]) is False
    assert gf2_consistent([(0b11, 1), (0b01, 1)]) is True
