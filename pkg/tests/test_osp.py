from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from permblades.osp import (
    OSP, NoSuchDiagonal, PolygonTriangulation, TooLarge, all_subset_osps, catalan,
    cyclic_normal_form, cyclic_rotations, enumerate_osps, enumerate_standard_osps,
    enumerate_triangulations, flip, is_cyclic_subword, is_standard, is_two_standard,
    lex_compare, lex_sequence, necklace, set_partitions, stirling1, stirling2,
)

P = OSP.parse


def test_parse_and_print_round_trip():
    s = P("1,5|2|9|3|6,7")
    assert len(s) == 5
    assert str(s) == "1,5|2|9|3|6,7"
    assert s.support == frozenset({1, 2, 3, 5, 6, 7, 9})


@pytest.mark.parametrize("bad", ["1|1", "0|1", "", "1||2", "a|2", "1,1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        P(bad)


def test_standard():
    assert is_standard(P("1|2|3"))
    assert not is_standard(P("3|4|5|1|2"))
    assert is_standard(P("1,5|2|4|3"))


def test_two_standard():
    assert is_two_standard(P("1|2|4|3|5"))
    assert is_two_standard(P("1,5|2|4|3"))
    assert not is_two_standard(P("1,2,5|4|3"))
    assert is_two_standard(P("1"))


def test_rotations():
    rots = cyclic_rotations(P("1|2|3"))
    assert set(rots) == {P("1|2|3"), P("2|3|1"), P("3|1|2")}
    assert cyclic_normal_form(P("2|3|1")) == P("1|2|3")
    assert cyclic_normal_form(P("3|4|5|1|2")) == P("1|2|3|4|5")
    assert len(cyclic_rotations(P("1,4|2|3,5|6"))) == 4


def _brute_subword(w: OSP, u: OSP) -> bool:
    # any block injection, order-preserving in some rotation, with containment
    k = len(u)
    for r in range(k):
        ub = u.rotate(r).blocks
        for img in permutations(range(k), len(w)):
            if list(img) != sorted(img):
                continue
            if all(set(b) <= set(ub[i]) for b, i in zip(w.blocks, img)):
                return True
    return False


def test_cyclic_subword_examples():
    assert is_cyclic_subword(P("1|2|3"), P("1|2|4|3|5"))
    assert is_cyclic_subword(P("1|4|5"), P("1|2,4|3,5"))
    assert not is_cyclic_subword(P("1|4|5"), P("1|2|3|4,5"))
    assert not _brute_subword(P("1|4|5"), P("1|2|3|4,5"))


def test_cyclic_subword_matches_brute_force():
    us = list(enumerate_osps(5))
    ws = [w for w in all_subset_osps(5) if len(w) <= 3]
    for u in us[::7]:
        for w in ws[::5]:
            if w.support <= u.support:
                assert is_cyclic_subword(w, u) == _brute_subword(w, u), (w, u)


def test_lex():
    assert lex_sequence(P("1|2|3")) == (1, 2, 3)
    assert lex_sequence(P("1,2|3")) == (1, 1, 2)
    assert lex_compare(P("1,2|3"), P("1|2|3")) < 0
    assert lex_compare(P("1|2|3"), P("1|2|3")) == 0
    assert lex_compare(P("1|2,3"), P("1|2|3")) < 0
    with pytest.raises(ValueError):
        lex_compare(P("1|2"), P("1|3"))


def _brute_stirling2(n, k):
    return sum(1 for p in set_partitions(range(1, n + 1)) if len(p) == k)


def test_counts():
    assert necklace(4) == 26
    assert [necklace(n) for n in range(1, 7)] == [1, 2, 6, 26, 150, 1082]
    assert stirling2(4, 2) == 7 == _brute_stirling2(4, 2)
    for n in range(1, 7):
        for k in range(1, n + 1):
            assert stirling2(n, k) == _brute_stirling2(n, k)


def test_stirling1_counts_cycles():
    for n in range(1, 6):
        counts = [0] * (n + 1)
        for perm in permutations(range(n)):
            seen, c = set(), 0
            for i in range(n):
                if i not in seen:
                    c += 1
                    while i not in seen:
                        seen.add(i)
                        i = perm[i]
            counts[c] += 1
        assert [stirling1(n, k) for k in range(1, n + 1)] == counts[1:]


def test_enumeration_guard():
    with pytest.raises(TooLarge):
        next(enumerate_osps(10))


@pytest.mark.parametrize("n", range(1, 7))
def test_standard_count_is_necklace(n):
    std = enumerate_standard_osps(n)
    assert len(std) == necklace(n)
    assert all(is_standard(s) for s in std)
    assert len(set(std)) == len(std)


def test_standard_count_is_necklace_n7():
    assert sum(1 for _ in enumerate_osps(7, is_standard)) == necklace(7)


def test_triangulations():
    t4 = enumerate_triangulations(4)
    assert set(t4) == {PolygonTriangulation(4, [(1, 2, 3), (1, 3, 4)]),
                       PolygonTriangulation(4, [(1, 2, 4), (2, 3, 4)])}
    assert len(enumerate_triangulations(3)) == 1
    assert len(enumerate_triangulations(6)) == 14
    for k in range(3, 10):
        assert len(enumerate_triangulations(k)) == catalan(k - 2)


def test_flip():
    a = PolygonTriangulation(4, [(1, 2, 3), (1, 3, 4)])
    b = flip(a, (1, 3))
    assert b == PolygonTriangulation(4, [(1, 2, 4), (2, 3, 4)])
    assert flip(b, (2, 4)) == a
    with pytest.raises(NoSuchDiagonal):
        flip(a, (1, 2))


def test_flip_involution_everywhere():
    for k in range(4, 8):
        for t in enumerate_triangulations(k):
            for d in t.diagonals():
                t2 = flip(t, d)
                new = next(e for e in t2.diagonals() if e not in t.diagonals())
                assert flip(t2, new) == t


def test_bad_triangle_orientation():
    with pytest.raises(ValueError):
        PolygonTriangulation(4, [(2, 1, 3), (1, 3, 4)])


@st.composite
def osps(draw, n=6):
    perm = draw(st.permutations(list(range(1, n + 1))))
    cuts = draw(st.lists(st.booleans(), min_size=n - 1, max_size=n - 1))
    blocks, cur = [], [perm[0]]
    for x, cut in zip(perm[1:], cuts):
        if cut:
            blocks.append(cur)
            cur = []
        cur.append(x)
    blocks.append(cur)
    return OSP(blocks)


@settings(max_examples=100, deadline=None)
@given(osps())
def test_exactly_one_standard_rotation(s):
    assert sum(is_standard(r) for r in cyclic_rotations(s)) == 1


@settings(max_examples=100, deadline=None)
@given(osps(), osps(), st.integers(0, 5))
def test_subword_rotation_invariant(w0, u, j):
    w = OSP(w0.blocks[:3])
    assert is_cyclic_subword(w, u) == is_cyclic_subword(w, u.rotate(j))


@settings(max_examples=100, deadline=None)
@given(osps())
def test_print_parse_round_trip(s):
    assert P(str(s)) == s
