"""Exhaustive classical query strategies, with and without advice.

A strategy stops as soon as the solution token is constant over the members
still consistent with the advice and the answers seen so far; the token may
be deduced without being queried. Expected counts are exact rationals under a
uniform prior over the consistent members.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import families as fam

MAX_MEMBERS = 64
MAX_ARGUMENTS = 16


@dataclass
class StrategyNode:
    consistent: frozenset
    query: str | None = None
    token: str | None = None
    children: dict[int, "StrategyNode"] = field(default_factory=dict)

    @property
    def is_stop(self) -> bool:
        return self.query is None


@dataclass(frozen=True)
class QueryStats:
    worst: int
    expected: Fraction

    def __post_init__(self):
        if self.worst < 0 or self.expected < 0 or self.expected > self.worst:
            raise ValueError("inconsistent query statistics")


class _Encoded:
    """Members as bit positions; answers and tokens as member bitmasks."""

    def __init__(self, family: fam.FunctionFamily):
        self.labels = family.labels
        self.index = {k: i for i, k in enumerate(self.labels)}
        self.xs = family.x_labels()
        self.answer_masks = []
        for x in self.xs:
            masks: dict[int, int] = {}
            for i, k in enumerate(self.labels):
                masks[family.value(k, x)] = masks.get(family.value(k, x), 0) | (1 << i)
            self.answer_masks.append(sorted(masks.items()))
        tokens: dict[str, int] = {}
        for i, k in enumerate(self.labels):
            tokens[family.solution[k]] = tokens.get(family.solution[k], 0) | (1 << i)
        self.token_masks = list(tokens.values())

    def encode(self, members) -> int:
        return sum(1 << self.index[k] for k in members)

    def decode(self, mask: int) -> frozenset:
        return frozenset(k for i, k in enumerate(self.labels) if mask >> i & 1)

    def determined(self, s: int) -> bool:
        return any(s & t == s for t in self.token_masks)

    def parts(self, s: int, xi: int) -> list[tuple[int, int]]:
        return [(v, s & m) for v, m in self.answer_masks[xi] if s & m]


def _check_budget(family: fam.FunctionFamily) -> None:
    if len(family.members) > MAX_MEMBERS or 2**family.n > MAX_ARGUMENTS:
        raise ValueError(
            f"search budget exceeded: {len(family.members)} members, {2**family.n} arguments "
            f"(limits {MAX_MEMBERS}, {MAX_ARGUMENTS})"
        )


def optimal_strategy(family: fam.FunctionFamily, advice=None, objective: str = "worst") -> tuple[StrategyNode, QueryStats]:
    """Optimal adaptive strategy for the worst-case or expected query count.

    Ties between queries are broken towards the lexicographically smallest x.
    """
    if objective not in ("worst", "expected"):
        raise ValueError("objective must be 'worst' or 'expected'")
    _check_budget(family)
    members = fam.consistent_members(family, advice)
    if not members:
        raise ValueError("advice is inconsistent with every member")
    enc = _Encoded(family)

    # total = sum over members of queries issued; minimizing it minimizes the mean
    @lru_cache(maxsize=None)
    def best(s: int):
        if enc.determined(s):
            return (0, 0), None
        size = bin(s).count("1")
        choice = None
        for xi in range(len(enc.xs)):
            parts = enc.parts(s, xi)
            if len(parts) < 2:
                continue
            sub = [best(p)[0] for _, p in parts]
            worst = 1 + max(w for w, _ in sub)
            total = size + sum(t for _, t in sub)
            score = (worst, total) if objective == "worst" else (total, worst)
            if choice is None or score < choice[0]:
                choice = (score, xi, (worst, total))
        # not determined, so some query separates two tokens
        return choice[2], choice[1]

    def build(s: int) -> StrategyNode:
        _, xi = best(s)
        if xi is None:
            return StrategyNode(enc.decode(s), token=family.solution[enc.labels[(s & -s).bit_length() - 1]])
        node = StrategyNode(enc.decode(s), query=enc.xs[xi])
        for v, part in enc.parts(s, xi):
            node.children[v] = build(part)
        return node

    tree = build(enc.encode(members))
    return tree, strategy_stats(tree)


def strategy_stats(tree: StrategyNode) -> QueryStats:
    total = Fraction(0)
    worst = 0

    def walk(node: StrategyNode, depth: int):
        nonlocal total, worst
        if node.is_stop:
            total += depth * len(node.consistent)
            worst = max(worst, depth)
            return
        for child in node.children.values():
            walk(child, depth + 1)

    walk(tree, 0)
    return QueryStats(worst, total / len(tree.consistent))


def replay(tree: StrategyNode, family: fam.FunctionFamily, k: str) -> tuple[str, int]:
    """Run the strategy against member ``k``; returns (token, queries issued)."""
    node, count = tree, 0
    while not node.is_stop:
        node = node.children[family.value(k, node.query)]
        count += 1
    return node.token, count


def adversary_bound(family: fam.FunctionFamily, advice=None) -> int:
    """Worst-case query count forced by an adversary choosing every answer.

    Independent of :func:`optimal_strategy`: it tracks the asked arguments and
    allows any unasked query, informative or not.
    """
    _check_budget(family)
    start = fam.consistent_members(family, advice)
    known = frozenset(advice.as_dict()) if isinstance(advice, fam.AdviceSet) else frozenset()
    xs = family.x_labels()
    labels = family.labels
    answers = {(k, x): family.value(k, x) for k in labels for x in xs}

    @lru_cache(maxsize=None)
    def game(s: frozenset, asked: frozenset) -> int:
        if len({family.solution[k] for k in s}) == 1:
            return 0
        best = None
        for x in xs:
            if x in asked:
                continue
            groups: dict[int, list] = {}
            for k in s:
                groups.setdefault(answers[(k, x)], []).append(k)
            value = 1 + max(game(frozenset(g), asked | {x}) for g in groups.values())
            best = value if best is None else min(best, value)
            if best == 1:
                break
        if best is None:
            raise ValueError("all arguments asked yet the solution is undetermined")
        return best

    return game(start, known)


def export_strategy(tree: StrategyNode) -> str:
    lines: list[str] = []

    def walk(node: StrategyNode, indent: str, prefix: str):
        if node.is_stop:
            lines.append(f"{indent}{prefix}STOP({node.token})")
            return
        lines.append(f"{indent}{prefix}query {node.query} →")
        for v, child in node.children.items():
            walk(child, indent + "  ", f"[value {v}: ")
            lines[-1] += "]"

    walk(tree, "", "")
    return "\n".join(lines) + "\n"


def default_advices(family: fam.FunctionFamily, k: str) -> list:
    """Good advice for member ``k``: one-bit chains for search, good half tables otherwise."""
    if family.kind == "grover":
        return [a for a in fam.grover_bit_advices(family.n) if k in a.allowed(family.labels)]
    return fam.good_half_tables(family, k)


def _describe(advice) -> str:
    return advice.describe()


@dataclass
class AdviceComplexity:
    worst: int
    witnesses: dict[tuple[str, str], int]


def advice_complexity(family: fam.FunctionFamily) -> AdviceComplexity:
    """Maximum, over members and their good advice, of the optimal worst-case count."""
    witnesses = {}
    cache: dict = {}
    for k in family.labels:
        for adv in default_advices(family, k):
            key = fam.consistent_members(family, adv)
            if key not in cache:
                cache[key] = optimal_strategy(family, adv, "worst")[1].worst
            witnesses[(k, _describe(adv))] = cache[key]
    if not witnesses:
        raise ValueError(f"family {family.id} has no good advice")
    return AdviceComplexity(max(witnesses.values()), witnesses)


def no_advice_complexity(family: fam.FunctionFamily) -> QueryStats:
    return optimal_strategy(family, None, "worst")[1]


@dataclass
class FiftyRuleReport:
    family: str
    quantum_calls: int
    advice_calls: int
    no_advice_calls: int
    ratio: float
    rule: str
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def fifty_rule_report(family: fam.FunctionFamily, quantum_calls: int) -> FiftyRuleReport:
    """Compare quantum oracle calls with the advice-assisted classical optimum."""
    adv = advice_complexity(family).worst
    none = no_advice_complexity(family).worst
    ratio = quantum_calls / adv
    if family.kind == "grover" and family.n > 2:
        rule, ok = "ratio in [0.5, 1.5]", 0.5 <= ratio <= 1.5
    else:
        rule, ok = "exact", quantum_calls == adv
    return FiftyRuleReport(family.id, quantum_calls, adv, none, ratio, rule, "PASS" if ok else "FAIL")
