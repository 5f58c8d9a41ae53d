"""Query-algorithm kernels run on the extended (K, X, V) state."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import families as fam
from .hilbert import (
    BlockState,
    RegisterLayout,
    apply_local_unitary,
    apply_oracle,
    bits,
    dump_amplitudes,
    kickback,
    tensor_init,
    uniform,
)


class OracleCounter:
    """Applies the oracle of ``family`` and counts every application."""

    def __init__(self, family: fam.FunctionFamily):
        self.family = family
        self.calls = 0

    def __call__(self, state: BlockState) -> BlockState:
        self.calls += 1
        return apply_oracle(state, self.family)


@dataclass
class AlgorithmTrace:
    name: str
    stages: list[tuple[str, BlockState]]
    oracle_calls: int
    iterations: int
    success: dict[str, float]
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iteration count must be >= 1")
        for stage, s in self.stages:
            if abs(s.norm() - 1) > 1e-10:
                raise ValueError(f"stage {stage} is not normalized")
        if any(not -1e-12 <= p <= 1 + 1e-12 for p in self.success.values()):
            raise ValueError("success probabilities must lie in [0, 1]")

    def state(self, name: str) -> BlockState:
        for stage, s in self.stages:
            if stage == name:
                return s
        raise KeyError(name)

    @property
    def final(self) -> BlockState:
        return self.stages[-1][1]

    def summary_line(self) -> str:
        ps = list(self.success.values())
        return f"{self.name}, {self.oracle_calls}, {min(ps):.12g}, {max(ps):.12g}"

    def export(self) -> str:
        parts = [f"# stage {stage}\n{dump_amplitudes(s)}" for stage, s in self.stages]
        return "".join(parts) + self.summary_line() + "\n"


def hadamard(n: int) -> np.ndarray:
    h1 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, h1)
    return out


def diffusion_unitary(n: int) -> np.ndarray:
    """Inversion about the mean, ``2|s><s| - I`` with ``s`` uniform over n qubits."""
    if not 1 <= n <= 8:
        raise ValueError("diffusion_unitary supports 1 <= n <= 8")
    dim = 2**n
    return np.full((dim, dim), 2 / dim, dtype=complex) - np.eye(dim)


def layout_for(family: fam.FunctionFamily) -> RegisterLayout:
    return RegisterLayout(family.labels, family.n, family.m)


def uniform_extended(family: fam.FunctionFamily, v_amps=None) -> BlockState:
    lay = layout_for(family)
    if v_amps is None:
        v_amps = kickback(family.m)
    return tensor_init(lay, np.ones(len(lay.k_labels)), uniform(lay.x_dim), v_amps)


def _grover_success(state: BlockState) -> dict[str, float]:
    return {k: float(state.x_distribution(k)[int(k, 2)]) for k in state.layout.k_labels}


def grover_n4() -> AlgorithmTrace:
    family = fam.grover_family(2)
    oracle = OracleCounter(family)
    initial = uniform_extended(family)
    post = oracle(initial)
    final = apply_local_unitary(post, "X", diffusion_unitary(2))
    return AlgorithmTrace(
        "grover",
        [("initial", initial), ("queried", post), ("rotated", final)],
        oracle.calls,
        1,
        _grover_success(final),
    )


def grover_iterations(n: int) -> int:
    """Optimal single-marked-item schedule ``floor(pi / (4 asin(2**(-n/2))))``.

    Agrees with ``round(pi/4 * 2**(n/2))`` except at n = 2, where the latter
    overshoots to 2 iterations, and at n = 8 (12 instead of 13).
    """
    return math.floor(math.pi / (4 * math.asin(2 ** (-n / 2))))


def grover_success_closed_form(n: int, iterations: int | None = None) -> float:
    t = grover_iterations(n) if iterations is None else iterations
    return math.sin((2 * t + 1) * math.asin(2 ** (-n / 2))) ** 2


def perfect_correlation(n: int) -> BlockState:
    """Perfect correlation ``sum_k |k>|k>`` with V in the kickback state."""
    lay = RegisterLayout(tuple(bits(k, n) for k in range(2**n)), n, 1)
    a = np.zeros((2**n, 2**n, 2), dtype=complex)
    idx = np.arange(2**n)
    a[idx, idx, :] = kickback(1) / np.sqrt(2**n)
    return BlockState(lay, a)


def grover_kernel(n: int, record_all: bool = False) -> AlgorithmTrace:
    """Iterate oracle + diffusion ``grover_iterations(n)`` times on the extended state."""
    if n % 2 or not 2 <= n <= 8:
        raise ValueError("grover_kernel needs an even n with 2 <= n <= 8")
    family = fam.grover_family(n)
    oracle = OracleCounter(family)
    d = diffusion_unitary(n)
    t = grover_iterations(n)
    state = uniform_extended(family)
    stages = [("initial", state)]
    for i in range(1, t + 1):
        state = oracle(state)
        if record_all or i == 1:
            stages.append((f"queried_{i}", state))
        state = apply_local_unitary(state, "X", d)
        if record_all:
            stages.append((f"rotated_{i}", state))
    if not record_all:
        stages.append(("final", state))
    target = perfect_correlation(n)
    fidelity = abs(np.vdot(target.amps, state.amps)) ** 2
    return AlgorithmTrace(
        f"grover{n}",
        stages,
        oracle.calls,
        t,
        _grover_success(state),
        extras={"fidelity_correlated": float(fidelity), "closed_form": grover_success_closed_form(n, t)},
    )


def x_outcome_classes(state: BlockState, tol: float = 1e-10) -> dict[str, frozenset]:
    """Group k-labels by their X outcome, requiring each outcome to be certain."""
    classes: dict[str, set] = {}
    for k in state.layout.k_labels:
        p = state.x_distribution(k)
        x = int(np.argmax(p))
        if abs(p[x] - 1) > tol:
            raise ValueError(f"X outcome for k={k} is not deterministic")
        classes.setdefault(bits(x, state.layout.x_bits), set()).add(k)
    return {x: frozenset(ks) for x, ks in sorted(classes.items())}


def dj_kernel() -> AlgorithmTrace:
    family = fam.dj_family()
    oracle = OracleCounter(family)
    initial = uniform_extended(family)
    post = oracle(initial)
    final = apply_local_unitary(post, "X", hadamard(2))
    # success: the X = 00 verdict agrees with the member's class
    success = {}
    for k in family.labels:
        p00 = float(final.x_distribution(k)[0])
        success[k] = p00 if family.solution[k] == "constant" else 1 - p00
    return AlgorithmTrace(
        "dj",
        [("initial", initial), ("queried", post), ("rotated", final)],
        oracle.calls,
        1,
        success,
        extras={"classes": x_outcome_classes(final)},
    )


def _simon_right_part(family: fam.FunctionFamily, k: str, oracle: OracleCounter) -> np.ndarray:
    lay = RegisterLayout((k,), family.n, family.m)
    s = tensor_init(lay, [1], uniform(lay.x_dim), np.eye(lay.v_dim)[0])
    s = oracle(s)
    s = apply_local_unitary(s, "X", hadamard(family.n))
    return s.x_distribution(k)


def simon_samples(k: str, size: int, rng: np.random.Generator, family: fam.FunctionFamily | None = None) -> list[str]:
    """X outcomes of ``size`` independent runs of the fixed-k right part."""
    family = family or fam.simon_family()
    oracle = OracleCounter(family)
    p = _simon_right_part(family, k, oracle)
    draws = rng.choice(len(p), size=size, p=p)
    return [bits(int(x), family.n) for x in draws]


def simon_kernel(seed: int = 0) -> tuple[AlgorithmTrace, dict[str, str]]:
    """Run the Simon kernel, then recover the period of every member by sampling.

    K is fixed to each member in turn; the right part (prepare X and V, query,
    Hadamard, measure X) is repeated until the nonzero outcomes span ``n - 1``
    dimensions, and the period is solved over GF(2).
    """
    rng = np.random.default_rng(seed)
    family = fam.simon_family()
    oracle = OracleCounter(family)
    v0 = np.eye(2**family.m)[0]
    initial = uniform_extended(family, v0)
    post = oracle(initial)
    final = apply_local_unitary(post, "X", hadamard(family.n))
    kernel_calls = oracle.calls

    recovered, iterations, success = {}, {}, {}
    for k in family.labels:
        right = OracleCounter(family)
        p = _simon_right_part(family, k, right)
        strings: list[str] = []
        while True:
            s = bits(int(rng.choice(len(p), p=p)), family.n)
            if int(s, 2) and fam.gf2_rank([int(t, 2) for t in strings + [s]]) > len(strings):
                strings.append(s)
            if len(strings) == family.n - 1:
                break
            p = _simon_right_part(family, k, right)
        recovered[k] = fam.gf2_solve(strings)
        iterations[k] = right.calls
        orth = set(fam.orthogonal_strings(family.period[k]))
        dist = final.x_distribution(k)
        success[k] = float(sum(dist[int(s, 2)] for s in orth))
    trace = AlgorithmTrace(
        "simon",
        [("initial", initial), ("queried", post), ("rotated", final)],
        kernel_calls,
        1,
        success,
        extras={"iterations": iterations},
    )
    return trace, recovered


def perm_partition() -> tuple[AlgorithmTrace, dict[str, str]]:
    family = fam.perm_family()
    oracle = OracleCounter(family)
    initial = uniform_extended(family)
    post = oracle(initial)
    final = apply_local_unitary(post, "X", hadamard(2))
    classes = x_outcome_classes(final)
    partition = {k: x for x, ks in classes.items() for k in ks}
    success = {k: float(final.x_distribution(k)[int(partition[k], 2)]) for k in family.labels}
    trace = AlgorithmTrace(
        "perm",
        [("initial", initial), ("queried", post), ("rotated", final)],
        oracle.calls,
        1,
        success,
        extras={"classes": classes},
    )
    return trace, partition


def _x_factor(block: np.ndarray, label: str) -> np.ndarray:
    u, s, _ = np.linalg.svd(block)
    if s[0] == 0:
        raise ValueError(f"block {label} is empty")
    if len(s) > 1 and s[1] > 1e-9 * s[0]:
        raise ValueError(f"block {label} is entangled with V; no X-only readout exists")
    return u[:, 0]


def _mutual_information(joint: np.ndarray) -> float:
    joint = joint / joint.sum()
    pk = joint.sum(axis=1, keepdims=True)
    pj = joint.sum(axis=0, keepdims=True)
    mask = joint > 1e-15
    return float(np.sum(joint[mask] * np.log2(joint[mask] / (pk @ pj)[mask])))


def synthesize_rotation(post_oracle: BlockState, merge_duplicates: bool = False) -> tuple[np.ndarray, float]:
    """Choose an X rotation maximizing the information about k readable in X.

    The per-k X states (V must factor out) are grouped into rays. Mutually
    orthogonal rays are sent to distinct computational basis states, in order
    of first appearance. Otherwise the rays are symmetrically orthonormalized
    and the resulting projective measurement is used. The returned information
    is the mutual information between K (weighted by block norms) and the X
    outcome, in bits.

    Rays shared by several labels are an error unless ``merge_duplicates``.
    """
    lay = post_oracle.layout
    weights = post_oracle.block_weights()
    labels = [k for k in lay.k_labels if weights[k] > 0]
    vecs = {k: _x_factor(post_oracle.amps[lay.index(k)], k) for k in labels}

    reps: list[np.ndarray] = []
    cls_of: dict[str, int] = {}
    for k in labels:
        for i, r in enumerate(reps):
            if abs(np.vdot(r, vecs[k])) > 1 - 1e-9:
                cls_of[k] = i
                break
        else:
            cls_of[k] = len(reps)
            reps.append(vecs[k])
    if len(reps) < 2 or (len(reps) < len(labels) and not merge_duplicates):
        raise ValueError("indistinguishable oracle choices")
    dim = lay.x_dim
    if len(reps) > dim:
        raise ValueError("more distinguishable classes than X basis states")

    a = np.column_stack(reps)
    gram = a.conj().T @ a
    if np.linalg.norm(gram - np.eye(len(reps))) <= 1e-9:
        b = a
    else:
        if np.linalg.matrix_rank(gram, tol=1e-9) < len(reps):
            raise ValueError("per-k states are linearly dependent")
        b = a @ scipy.linalg.inv(scipy.linalg.sqrtm(gram))
    complement = scipy.linalg.null_space(b.conj().T)
    frame = np.column_stack([b, complement]) if complement.size else b
    u = frame.conj().T

    joint = np.array([[weights[k] * abs(u[j] @ vecs[k]) ** 2 for j in range(dim)] for k in labels])
    return u, _mutual_information(joint)
