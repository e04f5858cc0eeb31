"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import random
import time
from itertools import product

import numpy as np
import pytest

from enumkit import brute
from enumkit.engine import (
    SolutionStream,
    blocking_enumerate,
    cnf_mask,
    delay_profile,
    ereduce_execute,
    flasher,
    sat_extension,
    truth_table,
)
from enumkit.generators import (
    corpus,
    random_abduction,
    random_cnf,
    random_database,
    random_diagnosis,
    random_gamma,
    random_graph,
    random_hypergraph,
    random_pi1_3dnf,
    random_qbf,
)
from enumkit.kr import abduction_enum, cardmin_to_mbd, diagnosis_enum, is_explanation
from enumkit.logic import allsat, cardmin_enum, circumscription_enum, exclusion_clause, pi_to_sigma_blocking, qbf_enum
from enumkit.model import FALSE_REL, TRUE_REL, BoolRelation, DatabaseInstance, GammaFormula
from enumkit.oracles.sat import SatOracle, model_via_decisions
from enumkit.oracles.sigma2 import Sigma2Oracle, eval_exists_forall
from enumkit.relations import classify_language, classify_relation
from enumkit.schaefer import constants_elimination, constants_tau, enum_sat_gamma
from enumkit.structures import (
    pi1sat_to_repair,
    pi1sat_to_repair_tau,
    repair_enum,
    threecol_to_fourcol,
    trans_to_dom,
)

TIME_LIMIT = 60.0


@pytest.fixture
def report(capsys):
    """Print one verdict line per criterion and fail the test on a violation."""
    start = time.perf_counter()

    def done(label: str, failures: list, detail: str = "") -> None:
        elapsed = time.perf_counter() - start
        ok = not failures and elapsed < TIME_LIMIT
        with capsys.disabled():
            extra = f" ({detail})" if detail else ""
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}{extra} {elapsed:.1f}s")
            for f in failures[:5]:
                print(f"    {f}")
        assert not failures, failures[:5]
        assert elapsed < TIME_LIMIT

    return done


def test_c01_oracle_soundness(report):
    rng = random.Random(101)
    failures = []
    oracle = SatOracle(record_sizes=False)
    tables = {}
    n_sat = 0
    for i in range(1000):
        n = rng.randint(1, 14)
        f = random_cnf(rng, n, rng.randint(0, min(60, 6 * n)), 3, 3)
        table = tables.setdefault(n, truth_table(n))
        got = bool(oracle.decide(f))
        n_sat += got
        if got != bool(cnf_mask(f, table).any()):
            failures.append(f"cnf #{i}")
    for i in range(300):
        n_ex, n_fa = rng.randint(1, 7), rng.randint(1, 7)
        kind = rng.choice(("cnf", "dnf"))
        inst = random_qbf(rng, 0, n_ex, n_fa, rng.randint(1, 12), kind)
        (_, ex), (_, fa) = inst.blocks
        got = Sigma2Oracle().decide(ex, fa, inst.matrix, kind)[0]
        if got != eval_exists_forall(ex, fa, inst.matrix, kind):
            failures.append(f"exists-forall #{i}")
    report("C1 oracle soundness", failures, f"1000 CNFs of which {n_sat} satisfiable, 300 exists-forall instances")


def test_c02_engine_equivalence(report):
    failures = []
    for name, f in corpus():
        lex = list(allsat(f, "lex"))
        blk = list(allsat(f, "blocking"))
        ref = brute.sat_all(f)
        if set(lex) != set(ref) or set(blk) != set(ref):
            failures.append(f"{name}: solution sets differ")
        if any(a >= b for a, b in zip(lex, lex[1:])):
            failures.append(f"{name}: lex output not strictly increasing")
        if len(set(lex)) != len(lex) or len(set(blk)) != len(blk):
            failures.append(f"{name}: duplicates")
    report("C2 engine equivalence", failures, f"{len(corpus())} corpus files")


def test_c03_class_signatures(report):
    failures = []
    growing = 0
    for name, f in corpus():
        oracle = SatOracle()
        list(allsat(f, "lex", oracle))
        if oracle.stats.max_input_size > f.size + f.num_vars:
            failures.append(f"{name}: flasher input {oracle.stats.max_input_size} > {f.size + f.num_vars}")
        oracle = SatOracle()
        sols = list(blocking_enumerate(f, oracle=oracle))
        if len(sols) >= 3:
            growing += 1
            sizes = oracle.stats.per_call_sizes
            if any(a >= b for a, b in zip(sizes, sizes[1:])):
                failures.append(f"{name}: blocking input sizes not strictly growing")
    report("C3 class-signature instrumentation", failures, f"{growing} instances with >= 3 outputs")


def test_c04_flasher_delay(report):
    failures = []
    worst = 0.0
    for name, f in corpus():
        n = f.num_vars
        _, prof = delay_profile(flasher(n, sat_extension(f, SatOracle())))
        gap = max(prof.per_output_ext_calls)
        worst = max(worst, gap / (4 * n + 4))
        if gap > 4 * n + 4:
            failures.append(f"{name}: {gap} extension calls in one gap, budget {4 * n + 4}")
        oracle = SatOracle()
        model_via_decisions(f, oracle)
        if oracle.stats.calls > 2 * n + 1:
            failures.append(f"{name}: model_via_decisions used {oracle.stats.calls} calls")
    report("C4 flasher delay budget", failures, f"worst gap at {worst:.0%} of 4n+4")


def test_c05_circumscription(report):
    rng = random.Random(105)
    failures = []
    n_sat = 0
    for i in range(300):
        n = rng.randint(1, 12)
        f = random_cnf(rng, n, rng.randint(1, min(40, 5 * n)), 3, 3)
        sols = list(circumscription_enum(f))
        n_sat += bool(sols)
        if sorted(sols) != brute.circumscription(f):
            failures.append(f"#{i}: differs from brute force")
        if not brute.is_antichain(sols):
            failures.append(f"#{i}: not an antichain")
        # after excluding every emitted model's up-set, no emitted model is admitted again
        blocked = f.extended([exclusion_clause(m) for m in sols])
        oracle = SatOracle()
        for m in sols:
            if oracle.decide(blocked, [v if b else -v for v, b in enumerate(m, 1)]):
                failures.append(f"#{i}: {m} re-admitted")
        if oracle.decide(blocked):
            failures.append(f"#{i}: a model outside the emitted up-sets remains")
    report("C5 circumscription", failures, f"300 CNFs of which {n_sat} satisfiable")


def test_c06_cardmin_and_diagnosis(report):
    rng = random.Random(106)
    failures = []
    n_sat = 0
    for i in range(200):
        n = rng.randint(1, 12)
        f = random_cnf(rng, n, rng.randint(1, min(40, 5 * n)), 3, 3)
        sols = list(cardmin_enum(f))
        n_sat += bool(sols)
        if sols != brute.cardmin(f):
            failures.append(f"cardmin #{i}: differs from brute force")
        if len({sum(s) for s in sols}) > 1 or sols != sorted(sols):
            failures.append(f"cardmin #{i}: weight or order")
    count = 0
    while count < 100:
        inst = random_diagnosis(rng, rng.randint(1, 6), rng.randint(1, 10))
        if inst is None:
            continue
        count += 1
        sols = list(diagnosis_enum(inst))
        if sols != brute.diagnosis(inst):
            failures.append(f"diagnosis #{count}: differs from brute force")
        if len({sum(s) for s in sols}) > 1 or sols != sorted(sols):
            failures.append(f"diagnosis #{count}: weight or order")
    report("C6 cardmin and diagnosis", failures, f"200 CNFs of which {n_sat} satisfiable, 100 diagnosis instances")


def test_c07_abduction(report):
    rng = random.Random(107)
    failures = []
    for i in range(200):
        n = rng.randint(2, 11)
        inst = random_abduction(rng, n, rng.randint(0, 10), rng.randint(1, 12))
        sols = list(abduction_enum(inst))
        if sols != brute.abduction(inst):
            failures.append(f"#{i}: differs from brute force")
        fresh = SatOracle()
        for e in sols:
            if not is_explanation(inst, e, fresh):
                failures.append(f"#{i}: {e} fails an explanation check")
    report("C7 abduction", failures, "200 instances")


# -- independent closure recomputation over all small relations -----------------


def _closure_flags(arity: int) -> dict[str, np.ndarray]:
    """Flags for every non-empty relation of the arity, indexed by its tuple mask."""
    k = 1 << arity
    masks = np.arange(1, 1 << k, dtype=np.int64)
    member = ((masks[:, None] >> np.arange(k)) & 1).astype(bool)
    idx = np.arange(k)
    out = {}
    for name, op in (("horn", np.bitwise_and), ("dualhorn", np.bitwise_or)):
        ok = np.ones(len(masks), bool)
        for a in idx:
            for b in idx:
                ok &= ~(member[:, a] & member[:, b]) | member[:, op(a, b)]
        out[name] = ok
    maj = np.ones(len(masks), bool)
    aff = np.ones(len(masks), bool)
    for a in idx:
        for b in idx:
            both = member[:, a] & member[:, b]
            for c in idx:
                present = both & member[:, c]
                maj &= ~present | member[:, (a & b) | (a & c) | (b & c)]
                aff &= ~present | member[:, a ^ b ^ c]
    out["bijunctive"] = maj
    out["affine"] = aff
    return masks, member, out


def test_c08_schaefer_dichotomy(report):
    rng = random.Random(108)
    failures = []
    schaefer_runs = 0
    while schaefer_runs < 150:
        f = random_gamma(rng, rng.randint(1, 9), rng.randint(1, 8), rng.randint(1, 2), 3)
        used = {name: f.language[name] for name, _ in f.constraints}
        if not classify_language(used).is_schaefer:
            continue
        schaefer_runs += 1
        sat = SatOracle()
        if list(enum_sat_gamma(f, sat)) != brute.gamma(f):
            failures.append(f"Schaefer #{schaefer_runs}: differs from brute force")
        if sat.stats.calls:
            failures.append(f"Schaefer #{schaefer_runs}: {sat.stats.calls} NP calls")
    one_in_three = BoolRelation.of("100", "010", "001")
    for i in range(50):
        n = rng.randint(3, 9)
        cons = [("R", tuple(rng.sample(range(1, n + 1), 3))) for _ in range(rng.randint(1, 4))]
        f = GammaFormula({"R": one_in_three}, cons, n)
        sat = SatOracle()
        if list(enum_sat_gamma(f, sat)) != brute.gamma(f):
            failures.append(f"1-in-3 #{i}: differs from brute force")
        if sat.stats.calls == 0:
            failures.append(f"1-in-3 #{i}: NP path not taken")
    checked = 0
    for arity in range(1, 5):
        masks, member, flags = _closure_flags(arity)
        rows = list(product((0, 1), repeat=arity))
        # tuple index i has variable 1 as its most significant bit
        for m, mem, *fl in zip(masks, member, *(flags[k] for k in ("horn", "dualhorn", "bijunctive", "affine"))):
            r = BoolRelation(arity, frozenset(rows[i] for i in np.flatnonzero(mem)))
            c = classify_relation(r)
            if (c.horn, c.dualhorn, c.bijunctive, c.affine) != tuple(bool(x) for x in fl):
                failures.append(f"arity {arity} relation mask {m}: classifier disagrees")
            if c.zero_valid != bool(mem[0]) or c.one_valid != bool(mem[-1]):
                failures.append(f"arity {arity} relation mask {m}: constant flags disagree")
            checked += 1
    report("C8 Schaefer dichotomy", failures, f"{schaefer_runs} Schaefer runs, {checked} relations classified")


# -- reductions ------------------------------------------------------------------


def _through(red, x):
    """Run the reduction once, keeping the inner solutions for the tau census."""
    inner = list(red.target(red.sigma(x)))
    return sorted(ereduce_execute(red, x, SolutionStream.of(inner))), inner


def test_c09_reduction_fidelity(report):
    rng = random.Random(109)
    failures = []
    counts = {}

    red = threecol_to_fourcol()
    for i in range(120):
        g = random_graph(rng, rng.randint(1, 8), 0.7)
        out, inner = _through(red, g)
        if out != brute.colourings(g):
            failures.append(f"3col-4col #{i}: differs")
        if sorted(inner) != brute.colourings(red.sigma(g), 4):
            failures.append(f"3col-4col #{i}: inner stream differs")
        if any(not red.tau_stream(g, y).next() for y in inner):
            failures.append(f"3col-4col #{i}: empty image")
    counts["3col-4col"] = 120

    red = trans_to_dom()
    over_nm = 0
    for i in range(120):
        h = random_hypergraph(rng, rng.randint(1, 5), rng.randint(1, 3))
        out, inner = _through(red, h)
        if out != brute.transversals(h):
            failures.append(f"trans-dom #{i}: differs")
        empty = sum(1 for y in inner if any(y[h.num_vertices :]))
        nm = h.num_vertices * len(h.edges)
        # the apex pairs {apex, y_e} add up to |E| empty images beyond |V||E|
        over_nm += empty > nm
        if empty > nm + len(h.edges):
            failures.append(f"trans-dom #{i}: {empty} empty images > |V||E| + |E|")
    counts["trans-dom"] = 120

    done = 0
    while done < 120:
        f = random_cnf(rng, rng.randint(1, 8), rng.randint(1, 12), 3)
        if f.satisfied_by((0,) * f.num_vars):
            continue
        done += 1
        red = cardmin_to_mbd(f)
        out, inner = _through(red, f)
        if out != brute.cardmin(f):
            failures.append(f"cardmin-mbd #{done}: differs")
        empty = sum(1 for y in inner if not red.tau_stream(f, y).next())
        if empty > 1:
            failures.append(f"cardmin-mbd #{done}: {empty} empty images")
    counts["cardmin-mbd"] = done

    for i in range(120):
        base = random_gamma(rng, rng.randint(1, 6), rng.randint(0, 5))
        extra = [(rng.choice("TF"), (rng.randint(1, base.num_vars),)) for _ in range(rng.randint(0, 2))]
        f = GammaFormula({**base.language, "T": TRUE_REL, "F": FALSE_REL}, base.constraints + extra, base.num_vars)
        red = constants_elimination(f)
        out, inner = _through(red, f)
        if out != brute.gamma(f):
            failures.append(f"const-elim #{i}: differs")
        empty = sum(1 for y in inner if not constants_tau(f, y))
        if empty > 2:
            failures.append(f"const-elim #{i}: {empty} empty images > 2")
    counts["const-elim"] = 120

    red = pi1sat_to_repair()
    worst = 0
    for i in range(100):
        k = rng.randint(1, 3)
        l = rng.randint(0, 5 - k)
        psi = random_pi1_3dnf(rng, k, l, rng.randint(1, 4))
        out, inner = _through(red, psi)
        if out != brute.qbf(psi):
            failures.append(f"pi1sat-repair #{i}: differs")
        empty = sum(1 for y in inner if not pi1sat_to_repair_tau(psi, y))
        worst = max(worst, empty - k)
        if empty > k + 11:
            failures.append(f"pi1sat-repair #{i}: {empty} empty images > k+11 = {k + 11}")
    counts["pi1sat-repair"] = 100
    detail = ", ".join(f"{n}={c}" for n, c in counts.items())
    detail += f"; trans-dom above |V||E| on {over_nm}, pi1sat worst empty-k = {worst}"
    report("C9 reduction fidelity", failures, detail)


def test_c10_repair_semantics(report):
    rng = random.Random(110)
    failures = []
    consistent = 0
    for i in range(200):
        d, egds = random_database(rng, rng.randint(1, 12), domain_size=rng.randint(2, 4), n_egds=rng.randint(1, 3))
        sols = list(repair_enum(d, egds))
        if sols != brute.repairs(d, egds):
            failures.append(f"#{i}: differs from brute force")
        # D satisfying the dependencies is its own unique repair; so is every repair
        candidates = [d] if brute.egd_holds(d.atoms, egds) else []
        candidates.append(DatabaseInstance(d.domain, [a for a, b in zip(d.atoms, sols[0]) if b]))
        for c in candidates:
            if not c.atoms:
                continue
            consistent += 1
            if list(repair_enum(c, egds)) != [(1,) * len(c.atoms)]:
                failures.append(f"#{i}: a consistent database is not its own unique repair")
    report("C10 repair semantics", failures, f"200 databases, {consistent} consistent databases checked")


def test_c11_pi_to_sigma(report):
    rng = random.Random(111)
    failures = []
    for i in range(100):
        nf = rng.randint(1, 4)
        ne, na = rng.randint(0, 4), rng.randint(0, 4)
        inst = random_qbf(rng, nf, ne, na, rng.randint(1, 8), rng.choice(("cnf", "dnf")))
        stream = pi_to_sigma_blocking(inst)
        sols = list(stream)
        if sorted(sols) != list(qbf_enum(inst)) or len(set(sols)) != len(sols):
            failures.append(f"#{i}: differs from qbf_enum")
        sizes = stream.all_stats()[0].per_call_sizes
        if len(sizes) != len(sols) + 1:
            failures.append(f"#{i}: {len(sizes)} calls for {len(sols)} outputs")
        if any(b - a != nf + 1 for a, b in zip(sizes, sizes[1:])):
            failures.append(f"#{i}: input growth {[b - a for a, b in zip(sizes, sizes[1:])]} != {nf + 1}")
    report("C11 Pi-to-Sigma blocking loop", failures, "100 instances")
