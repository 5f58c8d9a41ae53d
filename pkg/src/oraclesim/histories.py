"""Classical computation histories of the advice-assisted solver.

Each history is one basis-state transition ``|k, x, v> -> |k, x, v ^ f_k(x)>``
produced by a single query made under some advice. Summing the distinct
transitions with phases inherited from an input superposition rebuilds the
quantum query stage.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import families as fam
from .hilbert import BlockState, RegisterLayout, _fmt, apply_local_unitary, bits

Transition = tuple[tuple[str, str, int], tuple[str, str, int]]


@dataclass(frozen=True)
class History:
    advice: str
    query_x: str
    k: str
    v_init: int
    out_v: int

    @property
    def transition(self) -> Transition:
        return (self.k, self.query_x, self.v_init), (self.k, self.query_x, self.out_v)


@dataclass
class HistoryBag:
    histories: list[History]
    per_advice: dict[str, int] = field(default_factory=dict)

    @property
    def multiplicity(self) -> Counter:
        return Counter(h.transition for h in self.histories)

    @property
    def distinct_transitions(self) -> list[Transition]:
        return sorted(self.multiplicity)

    def dump(self) -> str:
        return "".join(f"{h.advice}, {h.query_x}, {h.k}, {h.v_init}, {h.out_v}\n" for h in self.histories)


def default_advices(family: fam.FunctionFamily) -> list:
    """Halved projections for two-bit search; every good half table for the others."""
    if family.kind == "grover":
        return fam.halved_projections()
    seen, out = set(), []
    for k in family.labels:
        for adv in fam.good_half_tables(family, k):
            if adv not in seen:
                seen.add(adv)
                out.append(adv)
    return out


def admissible_queries(family: fam.FunctionFamily, advice) -> list[str]:
    """Arguments whose answer the advice does not already fix."""
    ks = fam.consistent_members(family, advice)
    return [x for x in family.x_labels() if len({family.value(k, x) for k in ks}) > 1]


def enumerate_histories(family: fam.FunctionFamily, advices=None) -> HistoryBag:
    if family.n != 2:
        raise ValueError("history enumeration covers two-bit arguments only")
    advices = default_advices(family) if advices is None else advices
    found, per_advice = [], {}
    for adv in advices:
        name = adv.describe()
        ks = sorted(fam.consistent_members(family, adv))
        count = 0
        for x in admissible_queries(family, adv):
            for k in ks:
                f = family.value(k, x)
                for v in range(2**family.m):
                    found.append(History(name, x, k, v, v ^ f))
                    count += 1
        per_advice[name] = count
    return HistoryBag(found, per_advice)


def _coordinates(layout: RegisterLayout, basis: tuple[str, str, int]) -> tuple[int, int, int]:
    k, x, v = basis
    return layout.index(k), int(x, 2), v


def history_weights(bag: HistoryBag, input_state: BlockState, weighted: bool = False) -> dict[Transition, complex]:
    """Phase of each distinct transition: the input amplitude of its initial basis state.

    With ``weighted`` the multiplicity of each transition scales its weight.
    """
    lay = input_state.layout
    mult = bag.multiplicity
    covered = {t[0] for t in mult}
    a = input_state.amps
    for i, k in enumerate(lay.k_labels):
        for x in range(lay.x_dim):
            for v in range(lay.v_dim):
                if abs(a[i, x, v]) > 1e-15 and (k, bits(x, lay.x_bits), v) not in covered:
                    raise ValueError("history set incomplete")
    return {t: a[_coordinates(lay, t[0])] * (mult[t] if weighted else 1) for t in bag.distinct_transitions}


def phased_sum(bag: HistoryBag, input_state: BlockState, weighted: bool = False) -> BlockState:
    lay = input_state.layout
    out = np.zeros_like(input_state.amps)
    for t, w in history_weights(bag, input_state, weighted).items():
        out[_coordinates(lay, t[1])] += w
    norm = np.sqrt(np.vdot(out, out).real)
    return BlockState(lay, out / norm)


@dataclass
class BranchReport:
    branches: dict[Transition, list[tuple[str, complex]]]
    interference: BlockState
    quantum: BlockState
    max_deviation: float

    @property
    def branches_per_history(self) -> set[int]:
        return {sum(abs(a) > 1e-12 for _, a in b) for b in self.branches.values()}

    def dump(self) -> str:
        lines = []
        for (src, dst), bs in self.branches.items():
            head = f"{src[0]} {src[1]} {src[2]} -> {dst[2]}"
            for x, amp in bs:
                lines.append(f"{head}\t{x}\t{_fmt(amp.real)}\t{_fmt(amp.imag)}")
        return "\n".join(lines) + "\n"


def branch_through_rotation(bag: HistoryBag, rotation, input_state: BlockState) -> BranchReport:
    """Send each history's output X state through ``rotation`` and re-sum the branches."""
    lay = input_state.layout
    u = np.asarray(rotation, dtype=complex)
    if u.shape != (lay.x_dim, lay.x_dim):
        raise ValueError("rotation dimension must be 2**n")
    weights = history_weights(bag, input_state)
    scale = 1 / np.sqrt(sum(abs(w) ** 2 for w in weights.values()))
    out = np.zeros_like(input_state.amps)
    branches = {}
    for t, w in weights.items():
        i, x, v = _coordinates(lay, t[1])
        col = w * scale * u[:, x]
        out[i, :, v] += col
        branches[t] = [(bits(y, lay.x_bits), complex(col[y])) for y in range(lay.x_dim)]
    interference = BlockState(lay, out)
    quantum = apply_local_unitary(phased_sum(bag, input_state), "X", u)
    deviation = float(np.max(np.abs(interference.amps - quantum.amps)))
    return BranchReport(branches, interference, quantum, deviation)
