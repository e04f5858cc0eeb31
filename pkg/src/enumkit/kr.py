"""Model-based diagnosis, abduction and the CardMinSAT to diagnosis reduction."""

from __future__ import annotations

from itertools import product
from typing import Sequence

from .engine import EReduction, SolutionStream, flasher, sat_extension, tau_from
from .logic import with_cardinality
from .model import AbductionInstance, CnfFormula, DiagnosisInstance
from .oracles.sat import ResourceLimitExceeded, SatOracle

ABDUCTION_MAX_ITERATIONS = 10_000


class InvalidInstance(ValueError):
    pass


# -- diagnosis -----------------------------------------------------------------


def selector_encoding(inst: DiagnosisInstance) -> tuple[CnfFormula, list[int]]:
    """Component i is enforced iff selector ``num_vars + i`` is true; mu always."""
    n = inst.num_vars
    sels = [n + i for i in range(1, len(inst.components) + 1)]
    clauses = list(inst.mu.clauses)
    for s, comp in zip(sels, inst.components):
        clauses += [(-s, *c) for c in comp.clauses]
    return CnfFormula(n + len(sels), clauses), sels


def validate_diagnosis(inst: DiagnosisInstance, oracle: SatOracle | None = None) -> None:
    oracle = oracle or SatOracle()
    n = inst.num_vars
    b = CnfFormula(n, [c for comp in inst.components for c in comp.clauses])
    if not oracle.decide(CnfFormula(n, list(inst.mu.clauses))):
        raise InvalidInstance("the observation mu is unsatisfiable")
    if not oracle.decide(b):
        raise InvalidInstance("the system description B is inconsistent")
    if oracle.decide(b.extended(inst.mu.clauses)):
        raise InvalidInstance("B is consistent with mu: there is nothing to diagnose")


def diagnosis_enum(inst: DiagnosisInstance, oracle: SatOracle | None = None, validate: bool = True) -> SolutionStream:
    """Cardinality-maximal component subsets consistent with mu, in lex order."""
    oracle = oracle or SatOracle()
    if validate:
        validate_diagnosis(inst, SatOracle())
    enc, sels = selector_encoding(inst)
    k = len(sels)

    def gen(st: SolutionStream):
        for c in range(k, -1, -1):
            st.tick()
            g = with_cardinality(enc, sels, c, "exactly")
            if oracle.decide(g):
                break
        else:
            return
        yield from st.adopt(flasher(k, sat_extension(g, oracle, sels), [], "diagnosis-lex"))

    return SolutionStream(gen, [oracle.stats], "diagnosis")


def cardmin_to_mbd_sigma(f: CnfFormula) -> DiagnosisInstance:
    x0 = f.num_vars + 1
    weakened = [c + (x0,) for c in f.clauses]
    comps = [CnfFormula(x0, weakened + [(-i, x0)]) for i in range(1, f.num_vars + 1)]
    return DiagnosisInstance(comps, CnfFormula(x0, [(-x0,)]))


def _complement_model(f: CnfFormula, s: Sequence[int]) -> list[tuple[int, ...]]:
    # for an unsatisfiable formula the empty retained set is a spurious diagnosis
    m = tuple(1 - b for b in s)
    return [m] if f.satisfied_by(m) else []


def cardmin_to_mbd(f: CnfFormula, oracle: SatOracle | None = None) -> EReduction:
    """Reduction to diagnosis; the retained-set vector is the complement of the model."""
    if f.satisfied_by((0,) * f.num_vars):
        raise InvalidInstance("the formula is satisfied by the all-zero assignment")
    return EReduction(
        sigma=cardmin_to_mbd_sigma,
        tau_stream=tau_from(_complement_model),
        bound=lambda s: 1,
        name="cardmin-mbd",
        size=lambda x: x.num_vars,
        target=lambda d: diagnosis_enum(d, oracle),
    )


# -- abduction -----------------------------------------------------------------


def _unit(lit: int) -> tuple[int]:
    return (lit,)


def is_explanation(inst: AbductionInstance, bits: Sequence[int], oracle: SatOracle) -> bool:
    units = [_unit(h) for h, b in zip(inst.hypotheses, bits) if b]
    with_e = inst.gamma.extended(units)
    return bool(oracle.decide(with_e)) and not oracle.decide(with_e, [-inst.q])


def abduction_extsol(
    inst: AbductionInstance,
    decided: Sequence[int],
    oracle: SatOracle | None = None,
    method: str = "cegar",
    max_iterations: int = ABDUCTION_MAX_ITERATIONS,
) -> bool:
    """Can the decided prefix over the hypotheses be completed to an explanation?"""
    oracle = oracle or SatOracle()
    hyps = list(inst.hypotheses)
    d = len(decided)
    included = [_unit(h) for h, b in zip(hyps, decided) if b]
    free = hyps[d:]
    if method == "exhaustive":
        return any(is_explanation(inst, tuple(decided) + rest, oracle) for rest in product((0, 1), repeat=len(free)))
    if method != "cegar":
        raise ValueError(f"unknown method {method!r}")

    n = inst.gamma.num_vars
    sel = [n + j for j in range(1, len(free) + 1)]
    base = inst.gamma.extended(included + [(-t, h) for t, h in zip(sel, free)], n + len(free))
    cand = base
    for _ in range(max_iterations):
        res = oracle.decide(cand, want_model=True)
        if not res:
            return False
        chosen = [h for t, h in zip(sel, free) if res.model[t - 1]]
        check = inst.gamma.extended(included + [_unit(h) for h in chosen])
        counter = oracle.decide(check, [-inst.q], want_model=True)
        if not counter:
            return True
        m = counter.model
        # some newly selected hypothesis must be false in the countermodel
        block = tuple(t for t, h in zip(sel, free) if (m[abs(h) - 1] == 1) != (h > 0))
        cand = cand.extended([block])
    raise ResourceLimitExceeded(f"abduction refinement exceeded {max_iterations} iterations")


def validate_abduction(inst: AbductionInstance, oracle: SatOracle | None = None) -> None:
    if not (oracle or SatOracle()).decide(inst.gamma):
        raise InvalidInstance("the background theory is unsatisfiable")


def abduction_enum(
    inst: AbductionInstance, oracle: SatOracle | None = None, method: str = "cegar", validate: bool = True
) -> SolutionStream:
    """All explanations (not only minimal ones) as characteristic vectors, lex order."""
    oracle = oracle or SatOracle()
    if validate:
        validate_abduction(inst)

    def ext(prefix):
        return abduction_extsol(inst, prefix, oracle, method)

    return flasher(len(inst.hypotheses), ext, [oracle.stats], "abduction")
