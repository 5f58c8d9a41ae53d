"""Oracle function families, half-table advice and GF(2) helpers.

A family is a finite set of functions ``f_k: {0,1}^n -> {0,1}^m``. Each
member carries a *solution token*: the answer a solver must pin down (the
label itself for search, ``constant``/``balanced`` for Deutsch-Jozsa, the
period for Simon, the partition class for permutations).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .hilbert import bits


@dataclass(frozen=True)
class FunctionFamily:
    id: str
    n: int
    m: int
    members: Mapping[str, tuple[int, ...]]
    solution: Mapping[str, str]
    kind: str = "custom"
    period: Mapping[str, str] | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "members", {k: tuple(int(v) for v in t) for k, t in self.members.items()})
        object.__setattr__(self, "solution", dict(self.solution))
        if not self.members:
            raise ValueError("family has no members")
        for k, table in self.members.items():
            if len(table) != 2**self.n:
                raise ValueError(f"member {k}: table has {len(table)} rows, expected {2**self.n}")
            if any(not 0 <= v < 2**self.m for v in table):
                raise ValueError(f"member {k}: values must fit in {self.m} bits")
        if set(self.solution) != set(self.members):
            raise ValueError("solution must be defined for every member")
        _structural_check(self)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(self.members))

    def x_labels(self) -> list[str]:
        return [bits(x, self.n) for x in range(2**self.n)]

    def value(self, k: str, x: str | int) -> int:
        xi = int(x, 2) if isinstance(x, str) else x
        return self.members[k][xi]

    def table_name(self, k: str) -> str:
        """Concatenated table, e.g. ``1000`` for the marked item ``00``."""
        return "".join(bits(v, self.m) for v in self.members[k])

    def restrict(self, labels: Iterable[str]) -> "FunctionFamily":
        keep = set(labels)
        return FunctionFamily(
            id=f"{self.id}|restricted",
            n=self.n,
            m=self.m,
            members={k: t for k, t in self.members.items() if k in keep},
            solution={k: s for k, s in self.solution.items() if k in keep},
            kind="custom",
        )


def _structural_check(f: FunctionFamily) -> None:
    if f.kind == "grover":
        for k, t in f.members.items():
            if sum(t) != 1 or t[int(k, 2)] != 1:
                raise ValueError(f"grover member {k} is not a delta function")
    elif f.kind == "dj":
        half = 2 ** (f.n - 1)
        for k, t in f.members.items():
            if f.m != 1 or sum(t) not in (0, half, 2**f.n):
                raise ValueError(f"dj member {k} is neither constant nor balanced")
    elif f.kind == "simon":
        for k, t in f.members.items():
            h = int(f.period[k], 2)
            if h == 0:
                raise ValueError(f"simon member {k} has zero period")
            for x in range(2**f.n):
                for y in range(2**f.n):
                    if (t[x] == t[y]) != (x == y or x == y ^ h):
                        raise ValueError(f"simon member {k} is not two-to-one with period {f.period[k]}")
    elif f.kind == "perm":
        for k, t in f.members.items():
            if sorted(t) != list(range(2**f.n)):
                raise ValueError(f"perm member {k} is not a bijection")


def grover_family(n: int) -> FunctionFamily:
    if not 1 <= n <= 8:
        raise ValueError("grover_family supports 1 <= n <= 8")
    members, solution = {}, {}
    for k in range(2**n):
        label = bits(k, n)
        members[label] = tuple(int(x == k) for x in range(2**n))
        solution[label] = label
    return FunctionFamily(f"grover{n}", n, 1, members, solution, kind="grover")


def dj_family() -> FunctionFamily:
    members, solution = {}, {}
    for table in itertools.product((0, 1), repeat=4):
        w = sum(table)
        if w in (0, 2, 4):
            label = "".join(map(str, table))
            members[label] = table
            solution[label] = "constant" if w in (0, 4) else "balanced"
    return FunctionFamily("dj", 2, 1, members, solution, kind="dj")


def simon_family() -> FunctionFamily:
    members, solution, period = {}, {}, {}
    n = 2
    for table in itertools.product((0, 1), repeat=4):
        if sum(table) != 2:
            continue
        # the partner of x = 0 fixes the period
        h = next(x for x in range(1, 4) if table[x] == table[0])
        label = "".join(map(str, table))
        members[label] = table
        period[label] = solution[label] = bits(h, n)
    return FunctionFamily("simon", n, 1, members, solution, kind="simon", period=period)


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


def walsh_class(table: tuple[int, ...], n: int) -> str:
    """The nonzero string ``s`` with ``parity(f(x)) = parity(f(0)) XOR s.x`` for all x.

    Raises ValueError when the parity pattern of the table is not affine.
    """
    base = _parity(table[0])
    for s in range(1, 2**n):
        if all(_parity(table[x]) ^ base == _parity(s & x) for x in range(2**n)):
            return bits(s, n)
    raise ValueError("parity pattern is not a nonzero affine function")


def perm_family() -> FunctionFamily:
    members, solution = {}, {}
    for perm in itertools.permutations(range(4)):
        label = "".join(bits(v, 2) for v in perm)
        members[label] = perm
        solution[label] = walsh_class(perm, 2)
    return FunctionFamily("perm", 2, 2, members, solution, kind="perm")


FAMILIES = {
    "grover": grover_family,
    "dj": dj_family,
    "simon": simon_family,
    "perm": perm_family,
}


def get_family(name: str, n: int = 2) -> FunctionFamily:
    if name == "grover":
        return grover_family(n)
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}")
    return FAMILIES[name]()


# ---------------------------------------------------------------------------
# advice


@dataclass(frozen=True)
class AdviceSet:
    """A revealed half of a function table: ``(x, value)`` rows."""

    n: int
    revealed: frozenset

    def __post_init__(self):
        rows = frozenset((str(x), int(v)) for x, v in self.revealed)
        xs = [x for x, _ in rows]
        if len(set(xs)) != len(xs):
            raise ValueError("advice x values must be distinct")
        if len(rows) != 2 ** (self.n - 1):
            raise ValueError(f"advice must reveal exactly {2 ** (self.n - 1)} rows")
        object.__setattr__(self, "revealed", rows)

    @classmethod
    def of(cls, family: FunctionFamily, k: str, xs: Iterable[str]) -> "AdviceSet":
        return cls(family.n, frozenset((x, family.value(k, x)) for x in xs))

    def as_dict(self) -> dict[str, int]:
        return dict(self.revealed)

    def describe(self) -> str:
        return "{" + ",".join(f"{x}={v}" for x, v in sorted(self.revealed)) + "}"


@dataclass(frozen=True)
class Split:
    """A balanced two-block partition of a label set (a binary observable)."""

    name: str
    zero: frozenset
    one: frozenset

    def __post_init__(self):
        object.__setattr__(self, "zero", frozenset(self.zero))
        object.__setattr__(self, "one", frozenset(self.one))
        if self.zero & self.one:
            raise ValueError("split blocks must be disjoint")
        if len(self.zero) != len(self.one) or not self.zero:
            raise ValueError("split blocks must have equal, nonzero size")

    @property
    def universe(self) -> frozenset:
        return self.zero | self.one

    def block(self, outcome: int) -> frozenset:
        return self.one if outcome else self.zero

    def outcome_of(self, label: str) -> int:
        return int(label in self.one)


def parity_split(mask: str, name: str | None = None) -> Split:
    n = len(mask)
    s = int(mask, 2)
    labels = [bits(k, n) for k in range(2**n)]
    zero = {k for k in labels if not _parity(s & int(k, 2))}
    return Split(name or f"parity[{mask}]", zero, set(labels) - zero)


def grover_splits() -> tuple[Split, Split, Split]:
    """The three binary observables on two-bit labels: first bit, second bit, parity."""
    return parity_split("10", "0"), parity_split("01", "1"), parity_split("11", "+")


@dataclass(frozen=True)
class BitAdvice:
    """A chain of ``(split, outcome)`` constraints over k-labels."""

    constraints: tuple

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple((s, int(b)) for s, b in self.constraints))
        if not self.constraints:
            raise ValueError("bit advice needs at least one constraint")

    def allowed(self, labels: Iterable[str]) -> frozenset:
        universe = frozenset(labels)
        keep = universe
        for split, outcome in self.constraints:
            if split.universe != universe:
                raise ValueError(f"split {split.name} does not partition the label set")
            keep &= split.block(outcome)
        return keep

    def describe(self) -> str:
        return ",".join(f"[{s.name}]={b}" for s, b in self.constraints)


def halved_projections() -> list[BitAdvice]:
    """The six one-bit advices for two-bit search labels."""
    return [BitAdvice(((s, b),)) for s in grover_splits() for b in (0, 1)]


def grover_bit_advices(n: int) -> list[BitAdvice]:
    """Every chain of ``n/2`` independent parity constraints, deduplicated by retained set."""
    if n % 2:
        raise ValueError("bit advice is defined for even n only")
    if n == 2:
        return halved_projections()
    masks = range(1, 2**n)
    seen, out = set(), []
    for combo in itertools.combinations(masks, n // 2):
        if gf2_rank(list(combo)) != n // 2:
            continue
        splits = [parity_split(bits(s, n)) for s in combo]
        for outcomes in itertools.product((0, 1), repeat=n // 2):
            adv = BitAdvice(tuple(zip(splits, outcomes)))
            key = adv.allowed(bits(k, n) for k in range(2**n))
            if key not in seen:
                seen.add(key)
                out.append(adv)
    return out


def consistent_members(family: FunctionFamily, advice) -> frozenset:
    """Members compatible with the advice (AdviceSet, BitAdvice, row mapping or None)."""
    if advice is None:
        return frozenset(family.members)
    if isinstance(advice, BitAdvice):
        return advice.allowed(family.members)
    rows = advice.as_dict() if isinstance(advice, AdviceSet) else dict(advice)
    for x in rows:
        if not 0 <= int(x, 2) < 2**family.n or len(x) != family.n:
            raise ValueError(f"advice row {x!r} out of range")
    return frozenset(k for k in family.members if all(family.value(k, x) == v for x, v in rows.items()))


def solution_determined(family: FunctionFamily, advice) -> bool:
    ks = consistent_members(family, advice)
    return len({family.solution[k] for k in ks}) <= 1


def is_good_half_table(family: FunctionFamily, k: str, advice: AdviceSet) -> bool:
    """Whether the half table leaves the solution of member ``k`` undetermined."""
    if k not in consistent_members(family, advice):
        raise ValueError(f"advice {advice.describe()} is inconsistent with member {k}")
    values = [v for _, v in advice.revealed]
    if family.kind == "grover" and family.n >= 2:
        return 1 not in values
    if family.kind == "dj":
        return len(set(values)) == 1
    if family.kind == "simon":
        return len(set(values)) == len(values)
    return not solution_determined(family, advice)


def good_half_tables(family: FunctionFamily, k: str) -> list[AdviceSet]:
    xs = family.x_labels()
    out = []
    for rows in itertools.combinations(xs, 2 ** (family.n - 1)):
        adv = AdviceSet.of(family, k, rows)
        if is_good_half_table(family, k, adv):
            out.append(adv)
    return out


# ---------------------------------------------------------------------------
# GF(2)


def dot2(a: str | int, b: str | int) -> int:
    ai = int(a, 2) if isinstance(a, str) else a
    bi = int(b, 2) if isinstance(b, str) else b
    return _parity(ai & bi)


def orthogonal_strings(h: str) -> list[str]:
    """All ``s`` with ``s.h = 0 (mod 2)``, in increasing order."""
    n = len(h)
    if int(h, 2) == 0:
        raise ValueError("h must be nonzero")
    return [bits(s, n) for s in range(2**n) if dot2(s, h) == 0]


def gf2_reduce(rows: list[int]) -> list[int]:
    """Row-reduced basis (pivot on highest set bit) of the span of ``rows``."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis = [min(b, b ^ r) for b in basis]
            basis.append(r)
    return sorted(basis, reverse=True)


def gf2_rank(rows: list[int]) -> int:
    return len(gf2_reduce(rows))


def gf2_solve(strings: Iterable[str]) -> str:
    """The unique nonzero ``h`` orthogonal to every string.

    The strings must span an ``(n-1)``-dimensional subspace of GF(2)^n.
    """
    strings = list(strings)
    if not strings:
        raise ValueError("insufficient strings")
    n = len(strings[0])
    if any(len(s) != n for s in strings):
        raise ValueError("strings must share one length")
    basis = gf2_reduce([int(s, 2) for s in strings])
    if len(basis) != n - 1:
        raise ValueError("insufficient strings" if len(basis) < n - 1 else "strings span the full space")
    pivots = [b.bit_length() - 1 for b in basis]
    free = next(c for c in range(n) if c not in pivots)
    # reduced rows have pivot bits unique to them, so each pivot bit of h is
    # fixed by the row's overlap with the single free bit
    h = 1 << free
    for b, p in zip(basis, pivots):
        if (b >> free) & 1:
            h |= 1 << p
    return bits(h, n)


# ---------------------------------------------------------------------------
# table files


def write_table(family: FunctionFamily) -> str:
    labels = family.labels
    lines = ["\t".join(["x", *labels])]
    for x, xl in enumerate(family.x_labels()):
        lines.append("\t".join([xl, *(bits(family.members[k][x], family.m) for k in labels)]))
    return "\n".join(lines) + "\n"


def read_table(text: str, id: str = "custom", solution: Mapping[str, str] | None = None) -> FunctionFamily:
    """Parse a tab-separated table file; tokens default to the labels themselves."""
    rows = [line.split("\t") for line in text.splitlines() if line.strip()]
    header, body = rows[0], rows[1:]
    if header[0] != "x":
        raise ValueError("table header must start with 'x'")
    labels = header[1:]
    n = len(body[0][0])
    if len(body) != 2**n:
        raise ValueError(f"expected {2**n} rows for {n}-bit arguments, got {len(body)}")
    m = len(body[0][1])
    members = {k: [0] * 2**n for k in labels}
    for row in body:
        if len(row) != len(header):
            raise ValueError("ragged table row")
        x = int(row[0], 2)
        for k, v in zip(labels, row[1:]):
            if len(v) != m:
                raise ValueError("inconsistent value width")
            members[k][x] = int(v, 2)
    return FunctionFamily(id, n, m, members, solution or {k: k for k in labels})
