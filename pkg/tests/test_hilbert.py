import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from oraclesim import families as fam
from oraclesim.hilbert import (
    BlockState,
    DensityEnsemble,
    Projector,
    RegisterLayout,
    apply_local_unitary,
    apply_oracle,
    bits,
    dump_amplitudes,
    entropy_bits,
    kickback,
    parse_amplitudes,
    project,
    project_ensemble,
    reduced_density,
    reduced_density_K,
    state_distance,
    states_equal,
    tensor_init,
    uniform,
)

GROVER = RegisterLayout(("00", "01", "10", "11"), 2, 1)


def random_state(layout, seed):
    rng = np.random.default_rng(seed)
    shape = (len(layout.k_labels), layout.x_dim, layout.v_dim)
    a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return BlockState(layout, a / np.linalg.norm(a))


seeds = st.integers(0, 2**32 - 1)


def test_layout_sorts_and_validates():
    lay = RegisterLayout(("11", "00", "10", "01"), 2, 1)
    assert lay.k_labels == ("00", "01", "10", "11")
    assert lay.keys_are_x_basis()
    with pytest.raises(ValueError):
        RegisterLayout(("00", "00"), 2, 1)
    with pytest.raises(ValueError):
        RegisterLayout((), 2, 1)
    with pytest.raises(KeyError):
        lay.index("111")


def test_bits_is_msb_first():
    assert bits(1, 2) == "01"
    assert bits(2, 3) == "010"


def test_tensor_init_uniform_search_state():
    s = tensor_init(GROVER, np.ones(4), np.ones(4), np.array([1, -1]))
    assert s.amps.shape == (4, 4, 2)
    assert np.allclose(np.abs(s.amps), 1 / np.sqrt(32))
    assert s.amps[0, 0, 1] == pytest.approx(-1 / np.sqrt(32))


def test_tensor_init_rejects_zero_vector():
    with pytest.raises(ValueError, match="degenerate"):
        tensor_init(GROVER, np.zeros(4), np.ones(4), np.ones(2))


def test_unnormalized_amplitudes_rejected():
    with pytest.raises(ValueError):
        BlockState(GROVER, np.ones((4, 4, 2)))


def test_oracle_marks_the_chosen_item():
    g = fam.grover_family(2)
    s = tensor_init(GROVER, np.ones(4), np.ones(4), kickback())
    out = apply_oracle(s, g)
    for i, k in enumerate(GROVER.k_labels):
        signs = np.sign(out.amps[i, :, 0].real)
        want = np.ones(4)
        want[int(k, 2)] = -1
        assert np.array_equal(signs, want)


def test_oracle_rejects_mismatched_family():
    lay = RegisterLayout(("0", "1"), 1, 1)
    s = tensor_init(lay, np.ones(2), np.ones(2), np.ones(2))
    with pytest.raises(ValueError):
        apply_oracle(s, fam.grover_family(2))


def test_non_unitary_rejected():
    s = random_state(GROVER, 0)
    with pytest.raises(ValueError):
        apply_local_unitary(s, "X", np.ones((4, 4)))
    with pytest.raises(ValueError):
        apply_local_unitary(s, "K", np.eye(4))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_norm_preserved_and_blocks_untouched(seed):
    s = random_state(GROVER, seed)
    g = fam.grover_family(2)
    u = unitary_group.rvs(4, random_state=seed % 2**31)
    w = unitary_group.rvs(2, random_state=(seed + 1) % 2**31)
    for out in (apply_oracle(s, g), apply_local_unitary(s, "X", u), apply_local_unitary(s, "V", w)):
        assert abs(out.norm() - 1) < 1e-12
        before, after = s.block_weights(), out.block_weights()
        assert all(abs(before[k] - after[k]) < 1e-12 for k in before)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["grover", "dj", "simon", "perm"]))
def test_oracle_is_an_involution(seed, name):
    f = fam.get_family(name)
    lay = RegisterLayout(f.labels, f.n, f.m)
    s = random_state(lay, seed)
    twice = apply_oracle(apply_oracle(s, f), f)
    assert np.allclose(twice.amps, s.amps, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["K", "X"]), st.sets(st.sampled_from(["00", "01", "10", "11"]), min_size=1, max_size=3))
def test_projection_idempotent_and_complete(seed, register, subset):
    s = random_state(GROVER, seed)
    p = Projector(register, subset)
    q = Projector(register, {"00", "01", "10", "11"} - subset)
    p1, s1 = project(s, p)
    p2, s2 = project(s1, p)
    assert abs(p2 - 1) < 1e-10 and states_equal(s1, s2)
    assert abs(p1 + project(s, q)[0] - 1) < 1e-10


def test_zero_probability_outcome():
    s = tensor_init(GROVER, {"00": 1}, np.ones(4), kickback())
    assert project(s, Projector("K", {"11"})) == (0.0, None)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["X", "V"]))
def test_k_entropy_invariant_under_local_unitaries(seed, register):
    s = random_state(GROVER, seed)
    dim = 4 if register == "X" else 2
    u = unitary_group.rvs(dim, random_state=seed % 2**31)
    before = entropy_bits(reduced_density_K(s))
    after = entropy_bits(reduced_density_K(apply_local_unitary(s, register, u)))
    assert abs(before - after) < 1e-9


def test_entropy_of_simple_states():
    assert entropy_bits(np.eye(4) / 4) == pytest.approx(2)
    assert entropy_bits(np.diag([1, 0])) == 0
    ent = tensor_init(GROVER, np.ones(4), np.ones(4), kickback())
    assert entropy_bits(reduced_density_K(ent)) == pytest.approx(0, abs=1e-12)


def test_ensemble_reduced_density_is_average():
    a = tensor_init(GROVER, {"00": 1}, uniform(4), kickback())
    b = tensor_init(GROVER, {"11": 1}, uniform(4), kickback())
    e = DensityEnsemble(((0.5, a), (0.5, b)))
    assert np.allclose(reduced_density(e, "K"), np.diag([0.5, 0, 0, 0.5]))
    prob, post = project_ensemble(e, Projector("K", {"00"}))
    assert prob == pytest.approx(0.5) and len(post.members) == 1


def test_ensemble_validation():
    a = tensor_init(GROVER, {"00": 1}, uniform(4), kickback())
    with pytest.raises(ValueError):
        DensityEnsemble(((0.7, a), (0.7, a)))
    with pytest.raises(ValueError):
        DensityEnsemble(())


def test_distance_ignores_global_phase():
    s = random_state(GROVER, 3)
    t = BlockState(GROVER, np.exp(0.7j) * s.amps)
    assert state_distance(s, t) < 1e-12
    assert not states_equal(s, random_state(GROVER, 4))


def test_dump_format_and_round_trip():
    s = tensor_init(GROVER, {"01": 1}, np.eye(4)[2], np.array([1, -1]))
    text = dump_amplitudes(s)
    assert text.splitlines() == ["01\t10\t0\t0.707106781187\t0", "01\t10\t1\t-0.707106781187\t0"]
    back = parse_amplitudes(text, GROVER)
    assert np.allclose(back.amps, s.amps, atol=1e-11)


def test_amplitudes_are_read_only():
    s = random_state(GROVER, 1)
    with pytest.raises(ValueError):
        s.amps[0, 0, 0] = 1
