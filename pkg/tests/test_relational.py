import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oraclesim import families as fam
from oraclesim import reference as ref
from oraclesim import relational as rel
from oraclesim.algorithms import uniform_extended
from oraclesim.hilbert import DensityEnsemble, Projector, apply_local_unitary, apply_oracle, project, state_distance

ALICE, ORACLE = rel.Perspective.ALICE, rel.Perspective.ORACLE
G2 = fam.grover_family(2)
FIRST, SECOND, PARITY = fam.grover_splits()

phase_maps = st.fixed_dictionaries({k: st.floats(0, 2 * np.pi) for k in G2.labels})


def test_perspective_swap():
    assert ALICE.swap() is ORACLE and ORACLE.swap() is ALICE
    assert ALICE.identity_register == "K" and ORACLE.identity_register == "X"


def test_relational_initial_is_diagonal_in_ignored_register():
    a = rel.relational_initial(ALICE, G2)
    assert len(a.members) == 4
    assert rel.observer_entropy(ALICE, a) == pytest.approx(2)
    o = rel.relational_initial(ORACLE, G2)
    assert rel.observer_entropy(ORACLE, o) == pytest.approx(2)


def test_half_observable_projectors():
    obs = rel.HalfObservable("K", FIRST)
    assert obs.projector(0) == Projector("K", {"00", "01"})
    assert obs.on("X").projector(1) == Projector("X", {"10", "11"})
    with pytest.raises(ValueError):
        rel.HalfObservable("V", FIRST)


@settings(max_examples=25, deadline=None)
@given(phase_maps)
def test_alice_projection_and_backdating_match_expansions(phases):
    s = rel.phase_realization(ALICE, G2, phases)
    assert state_distance(s, ref.alice_input(phases)) < 1e-10
    out = rel.forward(ALICE, s, G2)
    assert state_distance(out, ref.alice_output(phases)) < 1e-10
    _, half = project(out, rel.HalfObservable("K", FIRST).projector(0))
    assert state_distance(half, ref.first_bit_projected(phases)) < 1e-10
    assert state_distance(rel.backward(ALICE, half, G2), ref.first_bit_backdated(phases)) < 1e-10
    _, full = project(out, Projector("K", {"00"}))
    assert state_distance(full, ref.solution_projected()) < 1e-10


@settings(max_examples=25, deadline=None)
@given(phase_maps)
def test_oracle_projection_and_backdating_match_expansions(phases):
    s = rel.phase_realization(ORACLE, G2, phases)
    assert state_distance(s, ref.oracle_input(phases)) < 1e-10
    _, half = project(rel.forward(ORACLE, s, G2), rel.HalfObservable("X", SECOND).projector(0))
    assert state_distance(half, ref.second_bit_projected(phases)) < 1e-10
    assert state_distance(rel.backward(ORACLE, half, G2), ref.second_bit_backdated(phases)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(phase_maps)
def test_swap_conjugates_the_two_perspectives(phases):
    a = rel.phase_realization(ALICE, G2, phases)
    o = rel.phase_realization(ORACLE, G2, phases)
    assert state_distance(rel.swap_registers(a), o) < 1e-12
    # the oracle is symmetric in k and x for search, so each stage maps over
    a_q, o_q = apply_oracle(a, G2), apply_oracle(o, G2)
    assert state_distance(rel.swap_registers(a_q), o_q) < 1e-12
    assert state_distance(rel.swap_registers(rel.forward(ALICE, a, G2)), rel.forward(ORACLE, o, G2)) < 1e-12


def test_swap_is_an_involution_and_needs_matching_labels():
    s = rel.phase_realization(ALICE, G2, {"01": 1.0})
    assert state_distance(rel.swap_registers(rel.swap_registers(s)), s) == 0
    d = fam.dj_family()
    with pytest.raises(ValueError, match="dimension mismatch"):
        rel.swap_registers(uniform_extended(d))


def test_apply_k_unitary_rejects_bad_input():
    s = rel.phase_realization(ALICE, G2)
    with pytest.raises(ValueError):
        rel.apply_k_unitary(s, np.ones((4, 4)))


@pytest.mark.parametrize("perspective", [ALICE, ORACLE])
@pytest.mark.parametrize("split", [FIRST, SECOND, PARITY], ids=lambda s: s.name)
@pytest.mark.parametrize("outcome", [0, 1])
def test_backdating_exactness(perspective, split, outcome):
    b = rel.backdate(perspective, rel.HalfObservable(perspective.identity_register, split), outcome, G2)
    assert b.commutation_error < 1e-10
    assert b.probability == pytest.approx(0.5)
    initial, ledger = b
    assert ledger.values() == pytest.approx([2, 1], abs=1e-9)
    assert len(initial.members) == 2


def test_backdate_without_measurement_keeps_entropy():
    b = rel.backdate(ALICE, None, 0, G2)
    assert b.ledger.values() == pytest.approx([2, 2])


def test_backdate_partner_observable_uses_its_mirror():
    b = rel.backdate(ALICE, rel.HalfObservable("X", FIRST), 0, G2)
    assert b.ledger.values() == pytest.approx([2, 1], abs=1e-9)


def test_backdate_chain_grover4():
    g4 = fam.grover_family(4)
    b = rel.backdate_chain(ALICE, rel.first_bits_chain("K", 4, "01"), g4)
    assert b.ledger.values() == pytest.approx([4, 2], abs=1e-9)
    assert b.commutation_error < 1e-10


def test_entropy_ledger_two_one_zero():
    led = rel.alice_entropy_ledger(G2, (rel.HalfObservable("K", FIRST), 0), (rel.HalfObservable("K", SECOND), 1))
    assert [s for s, _ in led.entries] == ["initial", "oracle", "rotation", "half", "full"]
    assert led.values() == pytest.approx([2, 2, 2, 1, 0], abs=1e-9)
    assert led.export().splitlines()[3] == "half, 1.000000000"


def test_entropy_ledger_rejects_out_of_range():
    led = rel.EntropyLedger(max_bits=2)
    with pytest.raises(ValueError):
        led.add("x", -0.1)
    with pytest.raises(ValueError):
        led.add("x", 2.5)


def test_even_share_check():
    r = rel.even_share_check()
    assert r.passed
    assert len(r.halved_projections) == 6
    assert len(r.compositions) == 24
    assert len(r.rejected_pairs) == 3
    assert all(v == pytest.approx(1) for v in r.half_entropy.values())


def test_even_share_check_needs_two_bit_search():
    with pytest.raises(ValueError):
        rel.even_share_check(fam.grover_family(4))


def test_alice_entropy_unchanged_by_unitary_part():
    e = rel.relational_initial(ALICE, G2)
    before = rel.observer_entropy(ALICE, e)
    e = e.map(lambda s: apply_oracle(s, G2))
    e = e.map(lambda s: apply_local_unitary(s, "X", np.eye(4)))
    assert isinstance(e, DensityEnsemble)
    assert rel.observer_entropy(ALICE, e) == pytest.approx(before)
