import numpy as np
import pytest

from oraclesim import algorithms as al
from oraclesim import families as fam
from oraclesim import histories as hs
from oraclesim import reference as ref
from oraclesim.hilbert import BlockState, apply_oracle, state_distance

G2 = fam.grover_family(2)


@pytest.fixture(scope="module")
def bag():
    return hs.enumerate_histories(G2)


def test_counts(bag):
    assert set(bag.per_advice.values()) == {8}
    assert len(bag.per_advice) == 6
    assert len(bag.histories) == 48
    assert len(bag.distinct_transitions) == 32


def test_multiplicity_pattern(bag):
    for (src, _), count in bag.multiplicity.items():
        k, x, _ = src
        assert count == (3 if k == x else 1)


def test_histories_follow_the_oracle(bag):
    for h in bag.histories:
        assert h.out_v == h.v_init ^ G2.value(h.k, h.query_x)


def test_transition_set_equals_oracle_action(bag):
    lay = al.layout_for(G2)
    want = set()
    for i, k in enumerate(lay.k_labels):
        for x in range(lay.x_dim):
            for v in range(lay.v_dim):
                a = np.zeros((4, 4, 2))
                a[i, x, v] = 1
                out = apply_oracle(BlockState(lay, a), G2)
                _, _, w = np.argwhere(np.abs(out.amps) > 0.5)[0]
                want.add(((k, fam.bits(x, 2), v), (k, fam.bits(x, 2), int(w))))
    assert set(bag.distinct_transitions) == want


def test_phased_sum_rebuilds_queried_state(bag):
    assert state_distance(hs.phased_sum(bag, ref.grover_initial()), ref.grover_queried()) < 1e-10


def test_weighted_sum_differs(bag):
    weighted = hs.phased_sum(bag, ref.grover_initial(), weighted=True)
    assert state_distance(weighted, ref.grover_queried()) > 1e-3


def test_incomplete_history_set(bag):
    partial = hs.HistoryBag(bag.histories[:8])
    with pytest.raises(ValueError, match="incomplete"):
        hs.phased_sum(partial, ref.grover_initial())


def test_branching_through_diffusion(bag):
    r = hs.branch_through_rotation(bag, al.diffusion_unitary(2), ref.grover_initial())
    assert r.branches_per_history == {4}
    assert r.max_deviation < 1e-10
    assert state_distance(r.interference, ref.grover_rotated()) < 1e-10
    assert len(r.dump().splitlines()) == 32 * 4


def test_identity_rotation_does_not_branch(bag):
    r = hs.branch_through_rotation(bag, np.eye(4), ref.grover_initial())
    assert r.branches_per_history == {1}


def test_rotation_dimension_checked(bag):
    with pytest.raises(ValueError):
        hs.branch_through_rotation(bag, np.eye(2), ref.grover_initial())


def test_dj_histories():
    d = fam.dj_family()
    bag = hs.enumerate_histories(d)
    # twelve distinct good half tables, eight histories each
    assert len(bag.per_advice) == 12 and set(bag.per_advice.values()) == {8}
    assert state_distance(hs.phased_sum(bag, ref.dj_initial()), ref.dj_queried()) < 1e-10
    lines = bag.dump().splitlines()
    assert lines[:4] == [
        "{00=0,01=0}, 10, 0000, 0, 0",
        "{00=0,01=0}, 10, 0000, 1, 1",
        "{00=0,01=0}, 10, 0011, 0, 1",
        "{00=0,01=0}, 10, 0011, 1, 0",
    ]


def test_simon_histories_rebuild_queried_state():
    s = fam.simon_family()
    bag = hs.enumerate_histories(s)
    assert state_distance(hs.phased_sum(bag, ref.simon_initial()), ref.simon_queried()) < 1e-10


def test_admissible_queries_skip_revealed_rows():
    adv = fam.AdviceSet.of(G2, "00", ["10", "11"])
    assert hs.admissible_queries(G2, adv) == ["00", "01"]


def test_only_two_bit_arguments():
    with pytest.raises(ValueError):
        hs.enumerate_histories(fam.grover_family(4))
