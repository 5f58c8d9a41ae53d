import numpy as np
import pytest

from oraclesim import algorithms as al
from oraclesim import families as fam
from oraclesim.hilbert import BlockState, RegisterLayout, apply_local_unitary, is_unitary, tensor_init, uniform


def _classes(state):
    return al.x_outcome_classes(state)


def test_search_rotation_is_diffusion_up_to_row_phases():
    post = al.grover_n4().state("queried")
    u, info = al.synthesize_rotation(post)
    assert is_unitary(u)
    assert info == pytest.approx(2, abs=1e-9)
    d = al.diffusion_unitary(2)
    ratio = u / d
    assert np.allclose(np.abs(ratio), 1)
    # each row differs from the diffusion row by a single phase
    assert np.allclose(ratio, ratio[:, :1])
    assert _classes(apply_local_unitary(post, "X", u)) == {k: frozenset({k}) for k in ("00", "01", "10", "11")}


def test_dj_rotation_reproduces_hadamard_classes():
    t = al.dj_kernel()
    post = t.state("queried")
    with pytest.raises(ValueError, match="indistinguishable"):
        al.synthesize_rotation(post)
    u, info = al.synthesize_rotation(post, merge_duplicates=True)
    assert info == pytest.approx(2, abs=1e-9)
    got = _classes(apply_local_unitary(post, "X", u))
    assert sorted(got.values(), key=sorted) == sorted(t.extras["classes"].values(), key=sorted)


def test_simon_post_oracle_is_not_readable():
    post = al.simon_kernel(0)[0].state("queried")
    with pytest.raises(ValueError, match="entangled"):
        al.synthesize_rotation(post)


def test_single_class_rejected():
    lay = RegisterLayout(("a", "b"), 2, 1)
    s = tensor_init(lay, np.ones(2), uniform(4), np.array([1, -1]))
    with pytest.raises(ValueError, match="indistinguishable"):
        al.synthesize_rotation(s)


def test_non_orthogonal_rays_use_symmetric_frame():
    lay = RegisterLayout(("a", "b"), 1, 1)
    a = np.zeros((2, 2, 2), dtype=complex)
    a[0, :, 0] = [1, 0]
    a[1, :, 0] = [np.cos(0.3), np.sin(0.3)]
    u, info = al.synthesize_rotation(BlockState(lay, a / np.linalg.norm(a)))
    assert is_unitary(u)
    assert 0 < info < 1
