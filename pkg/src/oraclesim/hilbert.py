"""Amplitude machinery for the three labeled registers K, X and V.

K holds the oracle's choice as a finite set of labels, X the query argument
(``x_bits`` qubits) and V the result (``v_bits`` qubits). A joint state is
stored as one X⊗V amplitude vector per K label; the vector is indexed by
``x * 2**v_bits + v`` (x major), and bit strings are read with the first
character as the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence, Union

import numpy as np

if TYPE_CHECKING:
    from .families import FunctionFamily

NORM_TOL = 1e-12
STATE_TOL = 1e-10


def bits(value: int, width: int) -> str:
    return format(value, f"0{width}b")


@dataclass(frozen=True)
class RegisterLayout:
    k_labels: tuple[str, ...]
    x_bits: int
    v_bits: int
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(sorted(self.k_labels))
        if not labels:
            raise ValueError("k_labels must be non-empty")
        if len(set(labels)) != len(labels):
            raise ValueError("k_labels must be distinct")
        if self.x_bits < 1 or self.v_bits < 1:
            raise ValueError("x_bits and v_bits must be >= 1")
        object.__setattr__(self, "k_labels", labels)
        object.__setattr__(self, "_index", {k: i for i, k in enumerate(labels)})

    @property
    def x_dim(self) -> int:
        return 2**self.x_bits

    @property
    def v_dim(self) -> int:
        return 2**self.v_bits

    @property
    def block_dim(self) -> int:
        return self.x_dim * self.v_dim

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown k-label {label!r}") from None

    def x_labels(self) -> list[str]:
        return [bits(x, self.x_bits) for x in range(self.x_dim)]

    def keys_are_x_basis(self) -> bool:
        """True when the K labels are exactly the X basis strings."""
        return list(self.k_labels) == self.x_labels()


class BlockState:
    """A pure joint state ``sum_k |k> (x) psi_k(X, V)``.

    Amplitudes are held in a read-only array of shape ``(#k, 2**x_bits, 2**v_bits)``.
    """

    __slots__ = ("layout", "amps")

    def __init__(self, layout: RegisterLayout, amps, *, check: bool = True):
        a = np.array(amps, dtype=complex)
        shape = (len(layout.k_labels), layout.x_dim, layout.v_dim)
        if a.size != np.prod(shape):
            raise ValueError(f"amplitude array of size {a.size} does not fit layout {shape}")
        a = a.reshape(shape)
        if check:
            norm2 = float(np.vdot(a, a).real)
            if abs(norm2 - 1.0) > STATE_TOL:
                raise ValueError(f"state not normalized (squared norm {norm2!r})")
        a.setflags(write=False)
        self.layout = layout
        self.amps = a

    @classmethod
    def from_blocks(cls, layout: RegisterLayout, blocks: Mapping[str, Sequence[complex]], *, normalize=False):
        a = np.zeros((len(layout.k_labels), layout.block_dim), dtype=complex)
        for k, vec in blocks.items():
            a[layout.index(k)] = np.asarray(vec, dtype=complex)
        if normalize:
            a = _normalized(a)
        return cls(layout, a)

    @property
    def blocks(self) -> dict[str, np.ndarray]:
        """Nonzero blocks keyed by k-label, each a flat X⊗V vector."""
        flat = self.amps.reshape(len(self.layout.k_labels), -1)
        return {k: flat[i] for i, k in enumerate(self.layout.k_labels) if np.any(flat[i] != 0)}

    def block(self, label: str) -> np.ndarray:
        return self.amps[self.layout.index(label)].reshape(-1)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))

    def block_weights(self) -> dict[str, float]:
        w = np.sum(np.abs(self.amps) ** 2, axis=(1, 2))
        return dict(zip(self.layout.k_labels, w.tolist()))

    def x_distribution(self, label: str) -> np.ndarray:
        """Born probabilities of the X outcomes conditioned on K = label."""
        blk = self.amps[self.layout.index(label)]
        p = np.sum(np.abs(blk) ** 2, axis=1)
        total = p.sum()
        if total == 0:
            raise ValueError(f"block {label!r} is empty")
        return p / total

    def __repr__(self):
        return f"BlockState(k={len(self.layout.k_labels)}, x_bits={self.layout.x_bits}, v_bits={self.layout.v_bits})"


def _normalized(a: np.ndarray) -> np.ndarray:
    norm = np.sqrt(np.vdot(a, a).real)
    if norm < NORM_TOL:
        raise ValueError("degenerate state")
    return a / norm


def tensor_init(layout: RegisterLayout, k_amps, x_amps, v_amps) -> BlockState:
    """Normalized product state ``sum_k c_k |k> (x) x_amps (x) v_amps``.

    ``k_amps`` is either a mapping label -> amplitude or a sequence ordered
    like ``layout.k_labels``.
    """
    if isinstance(k_amps, Mapping):
        c = np.zeros(len(layout.k_labels), dtype=complex)
        for k, amp in k_amps.items():
            c[layout.index(k)] = amp
    else:
        c = np.asarray(k_amps, dtype=complex)
    x = np.asarray(x_amps, dtype=complex)
    v = np.asarray(v_amps, dtype=complex)
    if c.shape != (len(layout.k_labels),) or x.shape != (layout.x_dim,) or v.shape != (layout.v_dim,):
        raise ValueError("component vectors do not match the layout")
    a = np.einsum("k,x,v->kxv", c, x, v)
    return BlockState(layout, _normalized(a))


def oracle_tables(family: "FunctionFamily", layout: RegisterLayout) -> np.ndarray:
    if family.n != layout.x_bits or family.m != layout.v_bits:
        raise ValueError("family/layout mismatch")
    missing = set(layout.k_labels) - set(family.members)
    if missing:
        raise ValueError(f"family/layout mismatch: no member for {sorted(missing)}")
    return np.array([family.members[k] for k in layout.k_labels], dtype=np.int64)


def apply_oracle(state: BlockState, family: "FunctionFamily") -> BlockState:
    """Apply ``|k, x, v> -> |k, x, v XOR f_k(x)>``."""
    tables = oracle_tables(family, state.layout)
    v = np.arange(state.layout.v_dim)
    # XOR is an involution, so out[k, x, w] = in[k, x, w ^ f_k(x)].
    idx = v[None, None, :] ^ tables[:, :, None]
    out = np.take_along_axis(state.amps, idx, axis=2)
    return BlockState(state.layout, out, check=False)


def is_unitary(u: np.ndarray, tol: float = STATE_TOL) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.linalg.norm(u.conj().T @ u - np.eye(len(u))) <= tol


def apply_local_unitary(state: BlockState, register: str, u) -> BlockState:
    """Apply ``u`` to register X or V inside every k-block."""
    u = np.asarray(u, dtype=complex)
    dim = {"X": state.layout.x_dim, "V": state.layout.v_dim}.get(register)
    if dim is None:
        raise ValueError(f"local unitaries act on X or V, not {register!r}")
    if u.shape != (dim, dim):
        raise ValueError(f"unitary of shape {u.shape} does not match register {register} (dim {dim})")
    if not is_unitary(u):
        raise ValueError("matrix is not unitary")
    if register == "X":
        out = np.einsum("yx,kxv->kyv", u, state.amps)
    else:
        out = np.einsum("wv,kxv->kxw", u, state.amps)
    return BlockState(state.layout, out, check=False)


@dataclass(frozen=True)
class Projector:
    register: str
    label_subset: frozenset

    def __post_init__(self):
        if self.register not in ("K", "X"):
            raise ValueError("projectors act on K or X")
        object.__setattr__(self, "label_subset", frozenset(self.label_subset))
        if not self.label_subset:
            raise ValueError("projector must retain at least one label")

    def mask(self, layout: RegisterLayout) -> np.ndarray:
        basis = layout.k_labels if self.register == "K" else layout.x_labels()
        unknown = self.label_subset - set(basis)
        if unknown:
            raise ValueError(f"labels {sorted(unknown)} not in the {self.register} basis")
        return np.array([b in self.label_subset for b in basis])


def _project_amps(state: BlockState, p: Projector) -> np.ndarray:
    m = p.mask(state.layout)
    if p.register == "K":
        return state.amps * m[:, None, None]
    return state.amps * m[None, :, None]


def project(state: BlockState, p: Projector) -> tuple[float, BlockState | None]:
    """Born probability and renormalized post-measurement state.

    A zero-probability outcome returns ``(0.0, None)``.
    """
    a = _project_amps(state, p)
    prob = float(np.vdot(a, a).real)
    if prob <= NORM_TOL**2:
        return 0.0, None
    return prob, BlockState(state.layout, a / np.sqrt(prob), check=False)


@dataclass(frozen=True)
class DensityEnsemble:
    members: tuple

    def __post_init__(self):
        members = tuple((float(p), s) for p, s in self.members)
        if not members:
            raise ValueError("ensemble must have at least one member")
        if any(p <= 0 for p, _ in members):
            raise ValueError("ensemble probabilities must be strictly positive")
        if abs(sum(p for p, _ in members) - 1.0) > STATE_TOL:
            raise ValueError("ensemble probabilities must sum to 1")
        layout = members[0][1].layout
        if any(s.layout != layout for _, s in members):
            raise ValueError("ensemble members must share one layout")
        object.__setattr__(self, "members", members)

    @classmethod
    def pure(cls, state: BlockState) -> "DensityEnsemble":
        return cls(((1.0, state),))

    @property
    def layout(self) -> RegisterLayout:
        return self.members[0][1].layout

    def map(self, fn) -> "DensityEnsemble":
        return DensityEnsemble(tuple((p, fn(s)) for p, s in self.members))


StateLike = Union[BlockState, DensityEnsemble]


def _as_ensemble(e: StateLike) -> DensityEnsemble:
    return DensityEnsemble.pure(e) if isinstance(e, BlockState) else e


def project_ensemble(e: DensityEnsemble, p: Projector) -> tuple[float, DensityEnsemble | None]:
    parts = []
    for w, s in e.members:
        prob, post = project(s, p)
        if post is not None:
            parts.append((w * prob, post))
    total = sum(w for w, _ in parts)
    if total <= NORM_TOL:
        return 0.0, None
    return total, DensityEnsemble(tuple((w / total, s) for w, s in parts))


def reduced_density(e: StateLike, register: str) -> np.ndarray:
    """Partial trace of the ensemble average onto register K or X."""
    rho = None
    for w, s in _as_ensemble(e).members:
        a = s.amps
        if register == "K":
            r = np.einsum("kxv,lxv->kl", a, a.conj())
        elif register == "X":
            r = np.einsum("kxv,kyv->xy", a, a.conj())
        else:
            raise ValueError(f"cannot reduce onto register {register!r}")
        rho = w * r if rho is None else rho + w * r
    return rho


def reduced_density_K(e: StateLike) -> np.ndarray:
    return reduced_density(e, "K")


def entropy_bits(rho) -> float:
    """Von Neumann entropy in bits."""
    evals = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    evals = evals[evals > 1e-14]
    h = float(-np.sum(evals * np.log2(evals)))
    return max(h, 0.0)


def overlap(a: BlockState, b: BlockState) -> complex:
    if a.layout != b.layout:
        raise ValueError("layout mismatch")
    return complex(np.vdot(b.amps, a.amps))


def state_distance(a: BlockState, b: BlockState) -> float:
    """``min_theta ||a - exp(i theta) b||``."""
    ov = overlap(a, b)
    # align the phase and measure the difference directly; expanding the norm
    # loses half the digits to cancellation
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(a.amps - phase * b.amps))


def states_equal(a: BlockState, b: BlockState, tol: float = STATE_TOL) -> bool:
    return state_distance(a, b) <= tol


def _fmt(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def dump_amplitudes(state: BlockState, zero_tol: float = 1e-15) -> str:
    """Tab-separated ``k x v re im`` lines for every nonzero amplitude."""
    lay = state.layout
    lines = []
    for i, k in enumerate(lay.k_labels):
        for x in range(lay.x_dim):
            for v in range(lay.v_dim):
                amp = state.amps[i, x, v]
                if abs(amp) > zero_tol:
                    lines.append("\t".join((k, bits(x, lay.x_bits), bits(v, lay.v_bits), _fmt(amp.real), _fmt(amp.imag))))
    return "\n".join(lines) + "\n"


def parse_amplitudes(text: str, layout: RegisterLayout) -> BlockState:
    a = np.zeros((len(layout.k_labels), layout.x_dim, layout.v_dim), dtype=complex)
    for line in text.splitlines():
        if not line.strip():
            continue
        k, x, v, re, im = line.split("\t")
        a[layout.index(k), int(x, 2), int(v, 2)] = complex(float(re), float(im))
    return BlockState(layout, a)


def uniform(dim: int) -> np.ndarray:
    return np.full(dim, 1 / np.sqrt(dim), dtype=complex)


def kickback(v_bits: int = 1) -> np.ndarray:
    """``(|0> - |1>)`` on every V qubit, normalized."""
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    out = np.ones(1, dtype=complex)
    for _ in range(v_bits):
        out = np.kron(out, minus)
    return out


def basis_vector(dim: int, index: int) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[index] = 1
    return e


def labels_for(strings: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(strings))
