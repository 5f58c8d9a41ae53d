"""Verification suites: named checks with expected and actual values."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import algorithms as al
from . import classical as cl
from . import families as fam
from . import histories as hs
from . import reference as ref
from . import relational as rel
from .hilbert import Projector, project, state_distance

STATE_TOL = 1e-10
ENTROPY_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    id: str
    expected: Any
    actual: Any
    tolerance: float | None
    anchor: str

    @property
    def verdict(self) -> str:
        if self.tolerance is None:
            ok = self.expected == self.actual
        else:
            ok = abs(self.actual - self.expected) <= self.tolerance
        return "PASS" if ok else "FAIL"

    def record(self, suite: str) -> dict:
        return {
            "suite": suite,
            "check": self.id,
            "expected": _plain(self.expected),
            "actual": _plain(self.actual),
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "anchor": self.anchor,
        }


def _plain(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (frozenset, set)):
        return sorted(_plain(x) for x in v)
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in sorted(v.items())}
    return v


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)

    def add(self, id: str, expected, actual, tolerance: float | None = None, anchor: str = "") -> None:
        self.checks.append(Check(f"{self.suite}.{id}", expected, actual, tolerance, anchor))

    @property
    def passed(self) -> bool:
        return all(c.verdict == "PASS" for c in self.checks)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if c.verdict == "FAIL"), None)


# --- algorithms ---------------------------------------------------------------


def grover_suite(n: int = 2) -> Report:
    r = Report(f"grover{n}")
    t = al.grover_iterations(n)
    trace = al.grover_n4() if n == 2 else al.grover_kernel(n)
    r.add("iterations", t, trace.iterations, anchor="optimal single-marked-item schedule")
    r.add("oracle_calls", t, trace.oracle_calls, anchor="one query per iteration")
    closed = al.grover_success_closed_form(n, t)
    r.add("success_min", closed, min(trace.success.values()), 1e-9, "closed-form success sin^2((2T+1) asin 2^(-n/2))")
    r.add("success_max", closed, max(trace.success.values()), 1e-9, "closed-form success sin^2((2T+1) asin 2^(-n/2))")
    ratio = t / (2 ** (n / 2) - 1)
    r.add("ratio_in_band", True, 0.5 <= ratio <= 1.5, anchor="T / (2^(n/2) - 1) within [0.5, 1.5]")
    if n == 2:
        r.add("success", 1.0, min(trace.success.values()), 1e-12, "two-bit search succeeds with certainty after one query")
    return r


def dj_suite() -> Report:
    r = Report("dj")
    trace = al.dj_kernel()
    family = fam.dj_family()
    r.add("oracle_calls", 1, trace.oracle_calls, anchor="one query decides constant vs balanced")
    for k in family.labels:
        p00 = float(trace.final.x_distribution(k)[0])
        expected = 1.0 if family.solution[k] == "constant" else 0.0
        r.add(f"p00[{k}]", expected, p00, 1e-12, "X = 00 exactly for constant members")
    for k in family.labels:
        if family.solution[k] == "balanced":
            r.add(f"good_half_tables[{k}]", 2, len(fam.good_half_tables(family, k)), anchor="two good half tables per balanced member")
    return r


def simon_suite(seed: int = 0, samples: int = 10_000) -> Report:
    r = Report("simon")
    trace, recovered = al.simon_kernel(seed)
    family = fam.simon_family()
    r.add("oracle_calls", 1, trace.oracle_calls, anchor="one query in the kernel")
    rng = np.random.default_rng(seed)
    for k in family.labels:
        h = family.period[k]
        r.add(f"recovered[{k}]", h, recovered[k], anchor="period solved over GF(2)")
        draws = al.simon_samples(k, samples, rng, family)
        r.add(f"orthogonality_violations[{k}]", 0, sum(fam.dot2(s, h) for s in draws), anchor="every outcome is orthogonal to the period")
    r.add("orthogonal_count", 2 ** (family.n - 1), len(fam.orthogonal_strings("01")), anchor="2^(n-1) strings orthogonal to the period")
    return r


def perm_suite() -> Report:
    r = Report("perm")
    trace, partition = al.perm_partition()
    family = fam.perm_family()
    r.add("oracle_calls", 1, trace.oracle_calls, anchor="one query partitions the permutations")
    r.add("deterministic", 1.0, min(trace.success.values()), 1e-12, "X outcome certain for every member")
    sizes = {x: sum(1 for v in partition.values() if v == x) for x in ("00", "01", "10", "11")}
    r.add("partition_sizes", {"00": 0, "01": 8, "10": 8, "11": 8}, sizes, anchor="three classes of eight, never 00")
    r.add("matches_token", True, all(partition[k] == family.solution[k] for k in family.labels), anchor="outcome equals the Walsh class of the member")
    return r


# --- states -------------------------------------------------------------------


def _projected(state, projector):
    _, s = project(state, projector)
    return s


def state_pairs(seed: int = 0) -> list[tuple[str, object, object]]:
    """(name, simulated, reference) for every hand-transcribed state."""
    g = fam.grover_family(2)
    rng = np.random.default_rng(seed)
    phases = {k: float(v) for k, v in zip(g.labels, rng.uniform(0, 2 * np.pi, len(g.labels)))}
    grover = al.grover_n4()
    dj = al.dj_kernel()
    simon, _ = al.simon_kernel(seed)
    perm, _ = al.perm_partition()

    first = rel.HalfObservable("K", fam.grover_splits()[0]).projector(0)
    second = rel.HalfObservable("X", fam.grover_splits()[1]).projector(0)
    a_out = rel.forward(rel.Perspective.ALICE, rel.phase_realization(rel.Perspective.ALICE, g, phases), g)
    a_half = _projected(a_out, first)
    o_out = rel.forward(rel.Perspective.ORACLE, rel.phase_realization(rel.Perspective.ORACLE, g, phases), g)
    o_half = _projected(o_out, second)
    return [
        ("search_initial", grover.state("initial"), ref.grover_initial()),
        ("search_queried", grover.state("queried"), ref.grover_queried()),
        ("search_rotated", grover.state("rotated"), ref.grover_rotated()),
        ("alice_output", a_out, ref.alice_output(phases)),
        ("solution_projected", _projected(a_out, Projector("K", {"00"})), ref.solution_projected()),
        ("alice_first_bit", a_half, ref.first_bit_projected(phases)),
        ("alice_backdated", rel.backward(rel.Perspective.ALICE, a_half, g), ref.first_bit_backdated(phases)),
        ("oracle_second_bit", o_half, ref.second_bit_projected(phases)),
        ("oracle_backdated", rel.backward(rel.Perspective.ORACLE, o_half, g), ref.second_bit_backdated(phases)),
        ("dj_initial", dj.state("initial"), ref.dj_initial()),
        ("dj_queried", dj.state("queried"), ref.dj_queried()),
        ("dj_rotated", dj.state("rotated"), ref.dj_rotated()),
        ("simon_initial", simon.state("initial"), ref.simon_initial()),
        ("simon_queried", simon.state("queried"), ref.simon_queried()),
        ("simon_rotated", simon.state("rotated"), ref.simon_rotated()),
        ("perm_initial", perm.state("initial"), ref.perm_initial()),
        ("perm_rotated", perm.state("rotated"), ref.perm_rotated()),
    ]


def states_suite(seed: int = 0) -> Report:
    r = Report("states")
    for name, sim, want in state_pairs(seed):
        r.add(name, 0.0, state_distance(sim, want), STATE_TOL, "explicit ket expansion")
    return r


# --- relational ---------------------------------------------------------------


def entropy_suite() -> Report:
    r = Report("entropy")
    g = fam.grover_family(2)
    obs = rel.half_observables("K")
    for i, first in enumerate(obs):
        for j, second in enumerate(obs):
            if i == j:
                continue
            ledger = rel.alice_entropy_ledger(g, (first, 0), (second, 0))
            got = dict(ledger.entries)
            tag = f"{first.split.name}{second.split.name}"
            for stage, want in (("initial", 2.0), ("oracle", 2.0), ("rotation", 2.0), ("half", 1.0), ("full", 0.0)):
                r.add(f"{tag}.{stage}", want, got[stage], ENTROPY_TOL, "K entropy drops from two bits to one per half projection")
    for p in rel.Perspective:
        b = rel.backdate(p, rel.HalfObservable(p.identity_register, fam.grover_splits()[0]), 0, g)
        r.add(f"backdate_{p.value}.before", 2.0, b.ledger.values()[0], ENTROPY_TOL, "backdated entropy before")
        r.add(f"backdate_{p.value}.after", 1.0, b.ledger.values()[-1], ENTROPY_TOL, "backdated entropy after one half")
        r.add(f"backdate_{p.value}.commutation", 0.0, b.commutation_error, STATE_TOL, "projector commutes with the unitary")
    none = rel.backdate(rel.Perspective.ALICE, None, 0, g)
    r.add("no_measurement", [2.0, 2.0], none.ledger.values(), None, "no projection leaves the entropy unchanged")
    es = rel.even_share_check(g)
    r.add("halved_projections", 6, len(es.halved_projections), anchor="six halved projections")
    r.add("compositions", 24, sum(c["full_projector"] and c["even_share"] for c in es.compositions), anchor="one half from each perspective gives the full projector")
    r.add("rejected_same_pairs", 3, len(es.rejected_pairs), anchor="repeating the same half adds nothing")
    r.add("full_leaves_trivial", True, es.full_leaves_trivial, anchor="after the full projection nothing is left to learn")
    r.add("commutation_error", 0.0, es.commutation_error, STATE_TOL, "backdating exactness")
    chain = rel.backdate_chain(rel.Perspective.ALICE, rel.first_bits_chain("K", 4, "01"), fam.grover_family(4))
    r.add("grover4_chain", [4.0, 2.0], [round(v, 9) for v in chain.ledger.values()], None, "each half bit removes one bit of entropy")
    return r


# --- histories ----------------------------------------------------------------


def histories_suite() -> Report:
    r = Report("histories")
    g = fam.grover_family(2)
    bag = hs.enumerate_histories(g)
    r.add("distinct_transitions", 32, len(bag.distinct_transitions), anchor="distinct basis transitions")
    r.add("per_projection", {a.describe(): 8 for a in fam.halved_projections()}, bag.per_advice, anchor="eight histories per halved projection")
    r.add("total", 48, sum(bag.multiplicity.values()), anchor="histories counted with multiplicity")
    r.add("phased_sum", 0.0, state_distance(hs.phased_sum(bag, ref.grover_initial()), ref.grover_queried()), STATE_TOL, "phased histories rebuild the queried state")
    br = hs.branch_through_rotation(bag, al.diffusion_unitary(2), ref.grover_initial())
    r.add("interference", 0.0, state_distance(br.interference, ref.grover_rotated()), STATE_TOL, "branch interference rebuilds the output")
    r.add("branch_deviation", 0.0, br.max_deviation, STATE_TOL, "interference equals the quantum rotation")
    r.add("branches_per_history", [4], sorted(br.branches_per_history), None, "each history branches into four")
    d = fam.dj_family()
    dbag = hs.enumerate_histories(d)
    r.add("dj_phased_sum", 0.0, state_distance(hs.phased_sum(dbag, ref.dj_initial()), ref.dj_queried()), STATE_TOL, "phased histories rebuild the evaluation state")
    return r


# --- fifty-percent rule -------------------------------------------------------


def quantum_calls(family: fam.FunctionFamily) -> int:
    if family.kind == "grover":
        return (al.grover_n4() if family.n == 2 else al.grover_kernel(family.n)).oracle_calls
    if family.kind == "dj":
        return al.dj_kernel().oracle_calls
    if family.kind == "simon":
        return al.simon_kernel(0)[0].oracle_calls
    if family.kind == "perm":
        return al.perm_partition()[0].oracle_calls
    raise ValueError(f"no quantum kernel for family {family.id}")


def fifty_suite(name: str, n: int = 2) -> Report:
    family = fam.get_family(name, n)
    r = Report(f"fifty.{family.id}")
    q = quantum_calls(family)
    rep = cl.fifty_rule_report(family, q)
    r.add("quantum", al.grover_iterations(n) if family.kind == "grover" else 1, q, anchor="quantum oracle calls")
    r.add("no_advice", 2**family.n - 1, rep.no_advice_calls, anchor="exhaustive game tree without advice")
    # half the solution bits leave 2^(n/2) candidates for search, one token otherwise
    want = 2 ** (family.n // 2) - 1 if family.kind == "grover" else 1
    r.add("advice", want, rep.advice_calls, anchor="advice-assisted optimum")
    r.add("rule", "PASS", rep.verdict, anchor=f"quantum vs advice-assisted calls, {rep.rule}")
    if family.kind == "grover" and family.n == 2:
        stats = cl.optimal_strategy(family, None, "expected")[1]
        r.add("no_advice_expected", Fraction(9, 4), stats.expected, None, "classical mean of 2.25 queries")
    return r


SUITES = ("grover", "dj", "simon", "perm", "verify-states", "verify-entropy", "verify-histories", "verify-50")


def verify_all(seed: int = 0) -> list[Report]:
    reports = [grover_suite(2), grover_suite(8), dj_suite(), simon_suite(seed), perm_suite()]
    reports += [states_suite(seed), entropy_suite(), histories_suite()]
    reports += [fifty_suite("grover", 2), fifty_suite("dj"), fifty_suite("simon"), fifty_suite("perm")]
    return reports
