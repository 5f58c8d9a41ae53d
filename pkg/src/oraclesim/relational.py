"""Observer-relative views of the search kernel and backdated projections.

Alice controls X and is ignorant of K; the oracle controls K and is ignorant
of X. The two views are exchanged by relabeling K and X. Random relative
phases on the ignored register are averaged analytically, which leaves an
ensemble that is diagonal in that register.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import families as fam
from .algorithms import diffusion_unitary
from .hilbert import (
    BlockState,
    DensityEnsemble,
    Projector,
    RegisterLayout,
    StateLike,
    apply_local_unitary,
    apply_oracle,
    basis_vector,
    entropy_bits,
    is_unitary,
    kickback,
    project,
    project_ensemble,
    reduced_density,
    state_distance,
    tensor_init,
    uniform,
)


class Perspective(enum.Enum):
    ALICE = "alice"
    ORACLE = "oracle"

    def swap(self) -> "Perspective":
        return Perspective.ORACLE if self is Perspective.ALICE else Perspective.ALICE

    @property
    def identity_register(self) -> str:
        """The register on which this observer's unitary acts as the identity."""
        return "K" if self is Perspective.ALICE else "X"

    @property
    def ignorant_register(self) -> str:
        return self.identity_register


@dataclass(frozen=True)
class HalfObservable:
    register: str
    split: fam.Split

    def __post_init__(self):
        if self.register not in ("K", "X"):
            raise ValueError("half observables act on K or X")

    def projector(self, outcome: int) -> Projector:
        return Projector(self.register, self.split.block(outcome))

    def on(self, register: str) -> "HalfObservable":
        return HalfObservable(register, self.split)

    @property
    def name(self) -> str:
        return f"[{self.register}{self.split.name}]"


def half_observables(register: str) -> list[HalfObservable]:
    return [HalfObservable(register, s) for s in fam.grover_splits()]


@dataclass
class EntropyLedger:
    entries: list[tuple[str, float]] = field(default_factory=list)
    max_bits: float | None = None

    def add(self, stage: str, value: float) -> None:
        if value < -1e-12:
            raise ValueError("entropy must be non-negative")
        if self.max_bits is not None and value > self.max_bits + 1e-9:
            raise ValueError("entropy exceeds log2 of the label count")
        self.entries.append((stage, max(value, 0.0)))

    def values(self) -> list[float]:
        return [v for _, v in self.entries]

    def export(self) -> str:
        return "".join(f"{stage}, {value:.9f}\n" for stage, value in self.entries)


def _require_symmetric(family: fam.FunctionFamily) -> RegisterLayout:
    lay = RegisterLayout(family.labels, family.n, family.m)
    if not lay.keys_are_x_basis():
        raise ValueError("perspective swap needs k-labels equal to the X basis strings")
    return lay


def phase_realization(perspective: Perspective, family: fam.FunctionFamily, phases: Mapping[str, float] | None = None) -> BlockState:
    """One random-phase sample of the initial state, phases keyed by basis label."""
    lay = _require_symmetric(family)
    phases = phases or {}
    ph = np.exp(1j * np.array([phases.get(k, 0.0) for k in lay.k_labels]))
    v = kickback(family.m)
    if perspective is Perspective.ALICE:
        return tensor_init(lay, ph, uniform(lay.x_dim), v)
    return tensor_init(lay, np.ones(len(lay.k_labels)), ph, v)


def relational_initial(perspective: Perspective, family: fam.FunctionFamily) -> DensityEnsemble:
    """Phase-averaged initial state: diagonal in the register the observer ignores."""
    v = kickback(family.m)
    if perspective is Perspective.ALICE:
        lay = RegisterLayout(family.labels, family.n, family.m)
        w = 1 / len(lay.k_labels)
        members = [(w, tensor_init(lay, {k: 1}, uniform(lay.x_dim), v)) for k in lay.k_labels]
    else:
        lay = _require_symmetric(family)
        w = 1 / lay.x_dim
        members = [
            (w, tensor_init(lay, np.ones(len(lay.k_labels)), basis_vector(lay.x_dim, x), v))
            for x in range(lay.x_dim)
        ]
    return DensityEnsemble(tuple(members))


def swap_registers(state: StateLike) -> StateLike:
    """Relabel ``|k>|x> -> |x>|k>``."""
    if isinstance(state, DensityEnsemble):
        return state.map(swap_registers)
    lay = state.layout
    if not lay.keys_are_x_basis():
        raise ValueError("dimension mismatch: k-labels must equal the X basis strings")
    return BlockState(lay, np.transpose(state.amps, (1, 0, 2)), check=False)


def apply_k_unitary(state: BlockState, u) -> BlockState:
    """Rotate register K, mixing k-blocks (requires K to be a full qubit basis)."""
    lay = state.layout
    if not lay.keys_are_x_basis():
        raise ValueError("K rotations need k-labels forming a full basis")
    u = np.asarray(u, dtype=complex)
    if u.shape != (len(lay.k_labels),) * 2 or not is_unitary(u):
        raise ValueError("K rotation must be a unitary of matching dimension")
    return BlockState(lay, np.einsum("lk,kxv->lxv", u, state.amps), check=False)


def forward(perspective: Perspective, state: StateLike, family: fam.FunctionFamily) -> StateLike:
    """Oracle query, then the observer's rotation (X for Alice, K for the oracle)."""
    if isinstance(state, DensityEnsemble):
        return state.map(lambda s: forward(perspective, s, family))
    d = diffusion_unitary(family.n)
    s = apply_oracle(state, family)
    if perspective is Perspective.ALICE:
        return apply_local_unitary(s, "X", d)
    return apply_k_unitary(s, d)


def backward(perspective: Perspective, state: StateLike, family: fam.FunctionFamily) -> StateLike:
    if isinstance(state, DensityEnsemble):
        return state.map(lambda s: backward(perspective, s, family))
    d = diffusion_unitary(family.n).conj().T
    if perspective is Perspective.ALICE:
        s = apply_local_unitary(state, "X", d)
    else:
        s = apply_k_unitary(state, d)
    return apply_oracle(s, family)


def observer_entropy(perspective: Perspective, state: StateLike) -> float:
    return entropy_bits(reduced_density(state, perspective.ignorant_register))


def _ensemble_distance(a: DensityEnsemble, b: DensityEnsemble) -> float:
    if len(a.members) != len(b.members):
        return float("inf")
    return max(abs(pa - pb) + state_distance(sa, sb) for (pa, sa), (pb, sb) in zip(a.members, b.members))


@dataclass
class Backdated:
    initial: DensityEnsemble | None
    ledger: EntropyLedger
    probability: float
    commutation_error: float

    def __iter__(self):
        return iter((self.initial, self.ledger))

    @property
    def zero_probability(self) -> bool:
        return self.initial is None


def _identity_projector(perspective, observable, outcome, output: DensityEnsemble) -> Projector:
    p = observable.projector(outcome)
    if observable.register == perspective.identity_register:
        return p
    # an observable on the partner register is accepted only when it acts on
    # the output exactly like its mirror on the identity register
    mirror = observable.on(perspective.identity_register).projector(outcome)
    for _, s in output.members:
        pa, sa = project(s, p)
        pb, sb = project(s, mirror)
        if abs(pa - pb) > 1e-10 or (sa is None) != (sb is None) or (sa is not None and state_distance(sa, sb) > 1e-10):
            raise ValueError(f"{observable.name} is not perfectly correlated with its mirror in the output state")
    return mirror


def backdate_chain(
    perspective: Perspective,
    chain: Sequence[tuple[HalfObservable, int]],
    family: fam.FunctionFamily,
) -> Backdated:
    """Backdate successive half projections of the output to the initial state."""
    initial = relational_initial(perspective, family)
    output = forward(perspective, initial, family)
    ledger = EntropyLedger(max_bits=np.log2(len(family.labels)))
    ledger.add("before", observer_entropy(perspective, initial))
    out, init, prob, err = output, initial, 1.0, 0.0
    for observable, outcome in chain:
        p = _identity_projector(perspective, observable, outcome, out)
        q_out, out = project_ensemble(out, p)
        q_in, init = project_ensemble(init, p)
        if out is None or init is None:
            ledger.add("after", observer_entropy(perspective, initial))
            return Backdated(None, ledger, 0.0, err)
        prob *= q_out
        err = max(err, abs(q_out - q_in), _ensemble_distance(backward(perspective, out, family), init))
    ledger.add("after", observer_entropy(perspective, init))
    return Backdated(init, ledger, prob, err)


def backdate(
    perspective: Perspective,
    observable: HalfObservable | None,
    outcome: int,
    family: fam.FunctionFamily,
) -> Backdated:
    chain = [] if observable is None else [(observable, outcome)]
    return backdate_chain(perspective, chain, family)


def first_bits_chain(register: str, n: int, outcome_bits: str) -> list[tuple[HalfObservable, int]]:
    """Half observables reading the first ``len(outcome_bits)`` bits of an n-bit register."""
    chain = []
    for i, b in enumerate(outcome_bits):
        mask = "".join("1" if j == i else "0" for j in range(n))
        chain.append((HalfObservable(register, fam.parity_split(mask, str(i))), int(b)))
    return chain


def alice_entropy_ledger(
    family: fam.FunctionFamily,
    first: tuple[HalfObservable, int],
    second: tuple[HalfObservable, int],
) -> EntropyLedger:
    """Alice's K entropy across the unitary part and two successive half projections."""
    ledger = EntropyLedger(max_bits=np.log2(len(family.labels)))
    e = relational_initial(Perspective.ALICE, family)
    ledger.add("initial", observer_entropy(Perspective.ALICE, e))
    e = e.map(lambda s: apply_oracle(s, family))
    ledger.add("oracle", observer_entropy(Perspective.ALICE, e))
    e = e.map(lambda s: apply_local_unitary(s, "X", diffusion_unitary(family.n)))
    ledger.add("rotation", observer_entropy(Perspective.ALICE, e))
    for stage, (obs, outcome) in (("half", first), ("full", second)):
        _, e = project_ensemble(e, obs.projector(outcome))
        if e is None:
            raise ValueError(f"{obs.name}={outcome} has zero probability")
        ledger.add(stage, observer_entropy(Perspective.ALICE, e))
    return ledger


@dataclass
class EvenShareReport:
    halved_projections: list[tuple[str, int]]
    half_entropy: dict[tuple[str, int], float]
    compositions: list[dict]
    rejected_pairs: list[tuple[str, str]]
    full_leaves_trivial: bool
    commutation_error: float

    @property
    def passed(self) -> bool:
        return (
            len(self.halved_projections) == 6
            and all(abs(h - 1) < 1e-9 for h in self.half_entropy.values())
            and all(c["full_projector"] and c["even_share"] for c in self.compositions)
            and self.full_leaves_trivial
            and self.commutation_error <= 1e-10
        )


def even_share_check(family: fam.FunctionFamily | None = None) -> EvenShareReport:
    """Enumerate the halved projections of the two-bit search and how they combine."""
    family = family or fam.grover_family(2)
    if family.n != 2 or not RegisterLayout(family.labels, family.n, family.m).keys_are_x_basis():
        raise ValueError("even_share_check needs the two-bit search configuration")
    splits = fam.grover_splits()
    out_pure = forward(Perspective.ALICE, phase_realization(Perspective.ALICE, family), family)
    alice_out = forward(Perspective.ALICE, relational_initial(Perspective.ALICE, family), family)
    oracle_out = forward(Perspective.ORACLE, relational_initial(Perspective.ORACLE, family), family)

    halved, half_entropy, err = [], {}, 0.0
    for s in splits:
        for b in (0, 1):
            halved.append((s.name, b))
            _, e = project_ensemble(alice_out, HalfObservable("K", s).projector(b))
            half_entropy[(s.name, b)] = observer_entropy(Perspective.ALICE, e)
            for p in (Perspective.ALICE, Perspective.ORACLE):
                err = max(err, backdate(p, HalfObservable(p.identity_register, s), b, family).commutation_error)

    compositions, rejected = [], []
    for sa, so in itertools.product(splits, repeat=2):
        if sa is so:
            # the second half repeats the first: zero added information
            _, st = project(out_pure, HalfObservable("K", sa).projector(0))
            q, st2 = project(st, HalfObservable("X", so).projector(0))
            if abs(q - 1) < 1e-10 and state_distance(st, st2) < 1e-10:
                rejected.append((sa.name, so.name))
            continue
        for a, b in itertools.product((0, 1), repeat=2):
            target = next(iter(sa.block(a) & so.block(b)))
            _, st = project(out_pure, HalfObservable("K", sa).projector(a))
            _, st = project(st, HalfObservable("X", so).projector(b))
            _, full = project(out_pure, Projector("K", {target}))
            _, e_a = project_ensemble(alice_out, HalfObservable("K", sa).projector(a))
            _, e_o = project_ensemble(oracle_out, HalfObservable("X", so).projector(b))
            drop_a = observer_entropy(Perspective.ALICE, alice_out) - observer_entropy(Perspective.ALICE, e_a)
            drop_o = observer_entropy(Perspective.ORACLE, oracle_out) - observer_entropy(Perspective.ORACLE, e_o)
            compositions.append(
                {
                    "alice": (sa.name, a),
                    "oracle": (so.name, b),
                    "solution": target,
                    "full_projector": st is not None and state_distance(st, full) < 1e-10,
                    "even_share": abs(drop_a - 1) < 1e-9 and abs(drop_o - 1) < 1e-9,
                }
            )

    trivial = True
    for k in family.labels:
        _, full = project(out_pure, Projector("K", {k}))
        for s in splits:
            q, after = project(full, HalfObservable("X", s).projector(s.outcome_of(k)))
            trivial &= abs(q - 1) < 1e-10 and state_distance(after, full) < 1e-10

    return EvenShareReport(halved, half_entropy, compositions, rejected, trivial, err)
