import pytest

from enumkit.engine import (
    EReduction,
    Profiler,
    SolutionStream,
    blocking_enumerate,
    brute_force_enumerate,
    delay_profile,
    ereduce_compose,
    ereduce_execute,
    flasher,
    identity_reduction,
    prefix_cursor,
    sat_extension,
    tau_from,
)
from enumkit.oracles.sat import SatOracle

from conftest import cnf

OR2 = cnf(2, (1, 2))


def test_flasher_examples():
    oracle = SatOracle()
    assert list(flasher(2, sat_extension(OR2, oracle))) == [(0, 1), (1, 0), (1, 1)]
    assert list(flasher(3, lambda p: False)) == []
    assert list(flasher(1, lambda p: p in ((), (1,)))) == [(1,)]


def test_flasher_gap_budget():
    sols, prof = delay_profile(flasher(2, sat_extension(OR2, SatOracle())))
    assert len(sols) == 3
    assert max(prof.per_output_ext_calls) <= 4 * 2 + 4


def test_blocking_examples():
    oracle = SatOracle()
    sols, prof = delay_profile(blocking_enumerate(OR2, oracle=oracle))
    assert set(sols) == {(0, 1), (1, 0), (1, 1)}
    assert prof.per_output_oracle_calls == [1, 1, 1, 1]
    assert oracle.stats.per_call_sizes == [3, 6, 9, 12]
    oracle = SatOracle()
    assert list(blocking_enumerate(cnf(1, (1,), (-1,)), oracle=oracle)) == []
    assert oracle.stats.calls == 1


def test_blocking_projection():
    f = cnf(3, (1, 2), (3, -3))
    sols = list(blocking_enumerate(f, [1, 2]))
    assert sorted(sols) == [(0, 1), (1, 0), (1, 1)]
    with pytest.raises(ValueError):
        blocking_enumerate(f, [4])


def test_profile_shapes():
    _, prof = delay_profile(SolutionStream.of([]))
    assert prof.outputs == 0 and len(prof.per_output_steps) == 1
    assert len(prof.per_output_oracle_calls) == 1
    _, prof = delay_profile(SolutionStream.of([(0,), (1,)]))
    assert prof.outputs == 2 and len(prof.per_output_steps) == 3
    d = prof.to_dict()
    assert set(d) == {"outputs", "gaps", "oracle_calls", "max_oracle_input"}


def test_profiler_truncated_close():
    p = Profiler(flasher(2, sat_extension(OR2, SatOracle())))
    p.next()
    prof = p.close()
    assert prof.outputs == 1 and len(prof.per_output_steps) == 2


def test_identity_and_empty_tau():
    stream = lambda: SolutionStream.of([(0, 1), (1, 0)])
    ident = identity_reduction()
    assert list(ereduce_execute(ident, None, stream())) == [(0, 1), (1, 0)]
    empty = EReduction(lambda x: x, tau_from(lambda x, y: []), lambda s: 1, "empty")
    assert list(ereduce_execute(empty, None, stream())) == []


def test_compose_identity():
    both = ereduce_compose(identity_reduction(), identity_reduction())
    items = [(0, 0), (1, 1), (0, 1)]
    assert list(ereduce_execute(both, None, SolutionStream.of(items))) == items


def test_execute_suppresses_duplicates():
    # every target solution maps to the same pair of source solutions
    red = EReduction(lambda x: x, tau_from(lambda x, y: [(0,), (1,)]), lambda s: 2, "dup")
    out = list(ereduce_execute(red, None, SolutionStream.of([(0,)] * 5)))
    assert out == [(0,), (1,)]


def test_execute_without_target():
    red = EReduction(lambda x: x, tau_from(lambda x, y: [y]), lambda s: 1, "no-target")
    with pytest.raises(ValueError):
        red.run(None)


def test_prefix_cursor_reproduces_order():
    make = lambda: blocking_enumerate(cnf(3, (1, 2, 3)))
    assert list(prefix_cursor(make, 3)) == list(make())


def test_brute_force_filters():
    or2 = lambda b: b[0] or b[1]
    assert list(brute_force_enumerate(2, or2, "subset_minimal")) == [(0, 1), (1, 0)]
    chk = lambda b: (b[0] or b[1]) and (b[1] or b[2])
    assert list(brute_force_enumerate(3, chk, "card_minimal")) == [(0, 1, 0)]
    assert list(brute_force_enumerate(2, lambda b: True, "card_maximal")) == [(1, 1)]
    with pytest.raises(ValueError):
        brute_force_enumerate(2, or2, "nope")
    with pytest.raises(ValueError):
        brute_force_enumerate(30, or2)
