"""Hand-transcribed reference states for the kernels, built term by term.

Nothing here calls the oracle, the rotations or the projectors; each state is
written out from its explicit ket expansion and normalized. Random relative
phases are passed in as a mapping from basis label to angle.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Mapping

import numpy as np

from .hilbert import BlockState, RegisterLayout

TWO = ("00", "01", "10", "11")
GROVER = RegisterLayout(TWO, 2, 1)
DJ = RegisterLayout(("0000", "1111", "0011", "1100", "0101", "1010", "0110", "1001"), 2, 1)
SIMON = RegisterLayout(("0011", "1100", "0101", "1010", "0110", "1001"), 2, 1)

MINUS = {"0": 1, "1": -1}
ZERO = {"0": 1}
X_ALL = {x: 1 for x in TWO}


def _sum(layout: RegisterLayout, *products) -> BlockState:
    """Normalized sum of ``(k_terms, x_terms, v_terms)`` tensor products."""
    a = np.zeros((len(layout.k_labels), layout.x_dim, layout.v_dim), dtype=complex)
    for ks, xs, vs in products:
        for (k, ck), (x, cx), (v, cv) in product(ks.items(), xs.items(), vs.items()):
            a[layout.index(k), int(x, 2), int(v, 2)] += ck * cx * cv
    return BlockState(layout, a / np.linalg.norm(a))


def _phased(labels, phases: Mapping[str, float] | None) -> dict[str, complex]:
    phases = phases or {}
    return {k: np.exp(1j * phases.get(k, 0.0)) for k in labels}


# --- search, two bits -------------------------------------------------------

QUERIED_ROWS = {
    "00": (-1, 1, 1, 1),
    "01": (1, -1, 1, 1),
    "10": (1, 1, -1, 1),
    "11": (1, 1, 1, -1),
}


def grover_initial() -> BlockState:
    return _sum(GROVER, ({k: 1 for k in TWO}, X_ALL, MINUS))


def grover_queried() -> BlockState:
    return _sum(GROVER, *(({k: 1}, dict(zip(TWO, row)), MINUS) for k, row in QUERIED_ROWS.items()))


def grover_rotated() -> BlockState:
    return _sum(GROVER, *(({k: 1}, {k: 1}, MINUS) for k in TWO))


def alice_input(phases=None) -> BlockState:
    return _sum(GROVER, (_phased(TWO, phases), X_ALL, MINUS))


def alice_output(phases=None) -> BlockState:
    return _sum(GROVER, *(({k: c}, {k: 1}, MINUS) for k, c in _phased(TWO, phases).items()))


def solution_projected() -> BlockState:
    return _sum(GROVER, ({"00": 1}, {"00": 1}, MINUS))


def first_bit_projected(phases=None) -> BlockState:
    c = _phased(TWO, phases)
    return _sum(GROVER, ({"00": c["00"]}, {"00": 1}, MINUS), ({"01": c["01"]}, {"01": 1}, MINUS))


def first_bit_backdated(phases=None) -> BlockState:
    c = _phased(TWO, phases)
    return _sum(GROVER, ({"00": c["00"], "01": c["01"]}, X_ALL, MINUS))


def second_bit_projected(phases=None) -> BlockState:
    c = _phased(TWO, phases)
    return _sum(GROVER, ({"00": c["00"]}, {"00": 1}, MINUS), ({"10": c["10"]}, {"10": 1}, MINUS))


def oracle_input(phases=None) -> BlockState:
    return _sum(GROVER, ({k: 1 for k in TWO}, _phased(TWO, phases), MINUS))


def second_bit_backdated(phases=None) -> BlockState:
    c = _phased(TWO, phases)
    return _sum(GROVER, ({k: 1 for k in TWO}, {"00": c["00"], "10": c["10"]}, MINUS))


# --- Deutsch-Jozsa -----------------------------------------------------------

# (-1)^f_k(x) for x = 00, 01, 10, 11
DJ_QUERIED_ROWS = {
    "0000": (1, 1, 1, 1),
    "1111": (-1, -1, -1, -1),
    "0011": (1, 1, -1, -1),
    "1100": (-1, -1, 1, 1),
    "0101": (1, -1, 1, -1),
    "1010": (-1, 1, -1, 1),
    "0110": (1, -1, -1, 1),
    "1001": (-1, 1, 1, -1),
}

DJ_ROTATED_TERMS = {
    "0000": ("00", 1),
    "1111": ("00", -1),
    "0011": ("10", 1),
    "1100": ("10", -1),
    "0101": ("01", 1),
    "1010": ("01", -1),
    "0110": ("11", 1),
    "1001": ("11", -1),
}


def dj_initial() -> BlockState:
    return _sum(DJ, ({k: 1 for k in DJ.k_labels}, X_ALL, MINUS))


def dj_queried() -> BlockState:
    return _sum(DJ, *(({k: 1}, dict(zip(TWO, row)), MINUS) for k, row in DJ_QUERIED_ROWS.items()))


def dj_rotated() -> BlockState:
    return _sum(DJ, *(({k: c}, {x: 1}, MINUS) for k, (x, c) in DJ_ROTATED_TERMS.items()))


# --- Simon -------------------------------------------------------------------

# arguments with f = 0 and with f = 1
SIMON_QUERIED_SUPPORT = {
    "0011": (("00", "01"), ("10", "11")),
    "1100": (("10", "11"), ("00", "01")),
    "0101": (("00", "10"), ("01", "11")),
    "1010": (("01", "11"), ("00", "10")),
    "0110": (("00", "11"), ("01", "10")),
    "1001": (("01", "10"), ("00", "11")),
}

# X terms paired with V = 0 and with V = 1 after the Hadamard
SIMON_ROTATED_TERMS = {
    "0011": ({"00": 1, "10": 1}, {"00": 1, "10": -1}),
    "1100": ({"00": 1, "10": -1}, {"00": 1, "10": 1}),
    "0101": ({"00": 1, "01": 1}, {"00": 1, "01": -1}),
    "1010": ({"00": 1, "01": -1}, {"00": 1, "01": 1}),
    "0110": ({"00": 1, "11": 1}, {"00": 1, "11": -1}),
    "1001": ({"00": 1, "11": -1}, {"00": 1, "11": 1}),
}


def simon_initial() -> BlockState:
    return _sum(SIMON, ({k: 1 for k in SIMON.k_labels}, X_ALL, ZERO))


def simon_queried() -> BlockState:
    terms = []
    for k, (zeros, ones) in SIMON_QUERIED_SUPPORT.items():
        terms.append(({k: 1}, {x: 1 for x in zeros}, {"0": 1}))
        terms.append(({k: 1}, {x: 1 for x in ones}, {"1": 1}))
    return _sum(SIMON, *terms)


def simon_rotated() -> BlockState:
    terms = []
    for k, (v0, v1) in SIMON_ROTATED_TERMS.items():
        terms.append(({k: 1}, v0, {"0": 1}))
        terms.append(({k: 1}, v1, {"1": 1}))
    return _sum(SIMON, *terms)


# --- permutations ------------------------------------------------------------

PERM_LABELS = tuple("".join(p) for p in permutations(TWO))
PERM = RegisterLayout(PERM_LABELS, 2, 2)
MINUS2 = {"00": 1, "01": -1, "10": -1, "11": 1}

# the three members written out explicitly, each with coefficient +1
PERM_PRINTED = {"00011110": "01", "00110110": "10", "00011011": "11"}


def _perm_outcome(label: str) -> tuple[str, int]:
    """Brute-force Walsh analysis of the value parities: (outcome, sign)."""
    values = [label[i : i + 2] for i in range(0, 8, 2)]
    signs = np.array([(-1) ** v.count("1") for v in values])
    for s in TWO:
        chars = np.array([(-1) ** (bin(int(s, 2) & int(x, 2)).count("1")) for x in TWO])
        overlap = int(signs @ chars)
        if abs(overlap) == 4:
            return s, overlap // 4
    raise ValueError(label)


def perm_initial() -> BlockState:
    return _sum(PERM, ({k: 1 for k in PERM_LABELS}, X_ALL, MINUS2))


def perm_rotated() -> BlockState:
    terms = []
    for k in PERM_LABELS:
        x, sign = _perm_outcome(k)
        terms.append(({k: sign}, {x: 1}, MINUS2))
    return _sum(PERM, *terms)
