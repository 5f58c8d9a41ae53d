import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oraclesim import algorithms as al
from oraclesim import families as fam


def test_grover_tables():
    g = fam.grover_family(2)
    assert g.labels == ("00", "01", "10", "11")
    assert g.table_name("00") == "1000"
    assert [g.value("10", x) for x in g.x_labels()] == [0, 0, 1, 0]
    assert all(g.solution[k] == k for k in g.labels)


def test_dj_family_shape():
    d = fam.dj_family()
    assert len(d.labels) == 8
    assert sum(d.solution[k] == "constant" for k in d.labels) == 2
    assert d.solution["0110"] == "balanced"


def test_simon_family_periods():
    s = fam.simon_family()
    assert len(s.labels) == 6
    for k in s.labels:
        h = int(s.period[k], 2)
        t = s.members[k]
        assert h and all(t[x] == t[x ^ h] for x in range(4))
    assert s.period["0011"] == "01" and s.period["0110"] == "11"


def test_perm_tokens_are_walsh_classes():
    p = fam.perm_family()
    assert len(p.labels) == 24
    assert p.solution["00011110"] == "01"
    assert p.solution["00110110"] == "10"
    assert p.solution["00011011"] == "11"
    assert "00" not in set(p.solution.values())


def test_perm_tokens_match_simulated_partition():
    _, partition = al.perm_partition()
    p = fam.perm_family()
    assert partition == dict(p.solution)


def test_structural_checks():
    with pytest.raises(ValueError):
        fam.FunctionFamily("bad", 2, 1, {"00": (1, 1, 0, 0)}, {"00": "00"}, kind="grover")
    with pytest.raises(ValueError):
        fam.FunctionFamily("bad", 2, 1, {"a": (1, 0, 0, 0)}, {"a": "x"}, kind="dj")
    with pytest.raises(ValueError):
        fam.FunctionFamily("bad", 2, 1, {"a": (1, 0, 0)}, {"a": "x"})
    with pytest.raises(ValueError):
        fam.get_family("nope")


def test_consistent_members_with_rows():
    g = fam.grover_family(2)
    assert fam.consistent_members(g, {"00": 0, "01": 0}) == {"10", "11"}
    assert fam.consistent_members(g, None) == set(g.labels)
    with pytest.raises(ValueError):
        fam.consistent_members(g, {"000": 0})


def test_advice_set_validation():
    with pytest.raises(ValueError):
        fam.AdviceSet(2, frozenset({("00", 0)}))
    with pytest.raises(ValueError):
        fam.AdviceSet(2, frozenset({("00", 0), ("00", 1)}))


def test_grover_good_half_tables():
    g = fam.grover_family(2)
    # member 00: only the half tables avoiding x = 00 are good
    good = fam.good_half_tables(g, "00")
    assert {frozenset(a.as_dict()) for a in good} == {frozenset({"01", "10"}), frozenset({"01", "11"}), frozenset({"10", "11"})}


def test_dj_two_good_half_tables_per_balanced_member():
    d = fam.dj_family()
    for k in d.labels:
        n_good = len(fam.good_half_tables(d, k))
        assert n_good == (2 if d.solution[k] == "balanced" else 6)


def test_inconsistent_advice_raises():
    g = fam.grover_family(2)
    adv = fam.AdviceSet.of(g, "00", ["00", "01"])
    with pytest.raises(ValueError):
        fam.is_good_half_table(g, "01", adv)


@pytest.mark.parametrize("name", ["grover", "dj", "simon"])
def test_good_half_table_sufficiency(name):
    f = fam.get_family(name)
    for k in f.labels:
        for adv in fam.good_half_tables(f, k):
            assert not fam.solution_determined(f, adv)
            ks = fam.consistent_members(f, adv)
            for x in set(f.x_labels()) - set(adv.as_dict()):
                same = {j for j in ks if f.value(j, x) == f.value(k, x)}
                assert {f.solution[j] for j in same} == {f.solution[k]}


@pytest.mark.parametrize("name", ["dj", "simon"])
def test_advice_saturation(name):
    f = fam.get_family(name)
    for k in f.labels:
        for xs in itertools.combinations(f.x_labels(), 2 ** (f.n - 1) + 1):
            rows = {x: f.value(k, x) for x in xs}
            assert fam.solution_determined(f, rows)


def test_halved_projections_and_bit_advice():
    adv = fam.halved_projections()
    assert len(adv) == 6
    labels = fam.grover_family(2).labels
    assert all(len(a.allowed(labels)) == 2 for a in adv)
    four = fam.grover_bit_advices(4)
    assert all(len(a.allowed(fam.grover_family(4).labels)) == 4 for a in four)
    assert len({a.allowed(fam.grover_family(4).labels) for a in four}) == len(four)
    with pytest.raises(ValueError):
        fam.grover_bit_advices(3)


def test_split_must_match_universe():
    a = fam.BitAdvice(((fam.parity_split("10"), 0),))
    with pytest.raises(ValueError):
        a.allowed(fam.grover_family(4).labels)


def test_orthogonal_strings():
    assert fam.orthogonal_strings("01") == ["00", "10"]
    assert fam.orthogonal_strings("11") == ["00", "11"]
    assert len(fam.orthogonal_strings("1011")) == 8
    with pytest.raises(ValueError):
        fam.orthogonal_strings("00")


def _brute_period(strings, n):
    hits = [h for h in range(1, 2**n) if all(fam.dot2(s, h) == 0 for s in strings)]
    return hits


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, 2**n - 1), st.randoms())))
def test_gf2_solve_recovers_period(args):
    n, h, rnd = args
    pool = [s for s in fam.orthogonal_strings(fam.bits(h, n)) if int(s, 2)]
    rnd.shuffle(pool)
    chosen = []
    for s in pool:
        if fam.gf2_rank([int(t, 2) for t in chosen + [s]]) > len(chosen):
            chosen.append(s)
    assert len(chosen) == n - 1
    assert _brute_period(chosen, n) == [h]
    assert fam.gf2_solve(chosen) == fam.bits(h, n)


def test_gf2_solve_errors():
    with pytest.raises(ValueError, match="insufficient"):
        fam.gf2_solve(["100", "100"])
    with pytest.raises(ValueError, match="full space"):
        fam.gf2_solve(["10", "01"])
    with pytest.raises(ValueError):
        fam.gf2_solve([])


def test_gf2_rank():
    assert fam.gf2_rank([0b11, 0b01, 0b10]) == 2
    assert fam.gf2_rank([0]) == 0


@pytest.mark.parametrize("name", ["grover", "dj", "simon", "perm"])
def test_table_round_trip(name):
    f = fam.get_family(name)
    text = fam.write_table(f)
    assert text.splitlines()[0].split("\t")[0] == "x"
    back = fam.read_table(text, f.id, f.solution)
    assert back.members == f.members and back.n == f.n and back.m == f.m


def test_read_table_rejects_ragged_input():
    with pytest.raises(ValueError):
        fam.read_table("x\ta\n00\t1\n01\t0\n")
