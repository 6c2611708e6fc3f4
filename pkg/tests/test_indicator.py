import json
import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from permblades.cone import NotInV0, contains_point, dualize, intersect, whole_space
from permblades.indicator import (
    ConeFunction, convolve, dualize_fn, elementary_symmetric, euler_characteristic,
    eval_at, find_difference, functions_equal, functions_equal_mod_codim1, is_zero,
    pointwise_product,
)
from permblades.blades import blade_as_difference, blade_char_fn, blade_indicator, flag_product
from permblades.osp import all_subset_osps
from permblades.plates import mu, plate, plate_cone, subspace, tripod
from permblades.canonical import graduated_fn

from oracles import random_v0_point


def pl(s, n=3):
    return plate(s, n)


def test_cyclic_pair_convolution_is_everything():
    f = convolve(pl("1|2"), pl("2|3"), pl("3|1"))
    assert functions_equal(f, ConeFunction.everything(3))
    assert functions_equal(f, subspace((1, 2, 3), 3))


def test_convolution_units_and_bilinearity():
    f = pl("1|2|3") + pl("2|1") * Fraction(1, 2)
    assert convolve(f, ConeFunction.one(3)) == f
    assert is_zero(convolve(pl("1|2") - pl("1|2"), f))


def test_pointwise_product_of_two_plates():
    p = pointwise_product(pl("1|2|3"), pl("1|3|2"))
    c = intersect(plate_cone("1|2|3", 3), plate_cone("1|3|2", 3))
    assert p == ConeFunction.atom(c)
    f = pl("1|2|3") - pl("2|3")
    assert functions_equal(pointwise_product(f, ConeFunction.everything(3)), f)


def test_dualize_fn():
    assert dualize_fn(ConeFunction.zero(4)) == ConeFunction.zero(4)
    d = dualize_fn(pl("1|2"))
    # {x : x_1 >= x_2} inside V0^3
    rng = random.Random(1)
    for _ in range(100):
        x = random_v0_point(3, rng)
        assert eval_at(d, x) == (1 if x[0] >= x[1] else 0)
    f = pl("1|2|3") * 3 - pl("2|1") + mu(1, 3, 3)
    assert dualize_fn(dualize_fn(f)) == f


def test_euler_characteristic():
    assert euler_characteristic(pl("1|2|3")) == 1
    assert euler_characteristic(mu(1, 2, 3)) == 0
    assert euler_characteristic(tripod(1, 2, 3, 3)) == 1
    assert euler_characteristic(blade_char_fn("1|2|3", 3)) == 1


def test_eval_at():
    assert eval_at(pl("1|2|3"), (1, -1, 0)) == 1
    assert eval_at(mu(1, 2, 3), (0, 0, 0)) == 0
    assert eval_at(mu(1, 2, 3), (1, -1, 0)) == 1
    assert eval_at(graduated_fn("1|2|3", 3), (0, 0, 0)) == 3
    with pytest.raises(NotInV0):
        eval_at(pl("1|2|3"), (1, 0, 0))


def test_tripod_several_ways():
    g = tripod(1, 2, 3, 3)
    mus = [mu(1, 2, 3), mu(2, 3, 3), mu(3, 1, 3)]
    sym = ConeFunction.one(3) + elementary_symmetric(mus, 1, 3)
    others = [sym, flag_product("1|2|3", 3), blade_indicator("1|2|3", 3),
              blade_as_difference("1|2|3", 3)]
    for f in others:
        assert functions_equal(g, f)
    rng = random.Random(2)
    for _ in range(1000):
        x = random_v0_point(3, rng)
        v = eval_at(g, x)
        assert v in (0, 1)
        assert all(eval_at(f, x) == v for f in others)


def test_cyclic_rotation_sum_vs_everything():
    rot = pl("1|2|3") + pl("2|3|1") + pl("3|1|2")
    whole = ConeFunction.everything(3)
    assert not functions_equal(rot, whole)
    assert functions_equal_mod_codim1(rot, whole)
    diff = find_difference(rot, whole)
    assert diff is not None


def test_functions_equal_reflexive():
    f = blade_char_fn("1|2|3|4", 4)
    assert functions_equal(f, f)


def test_json_is_canonical():
    f = pl("1|2|3") + pl("3|1")
    g = pl("3|1") + pl("1|2|3")
    assert json.dumps(f.to_json()) == json.dumps(g.to_json())
    assert f.to_json()["terms"][0]["coeff"] == "1"


def _sample_fns(n):
    labels = [s for s in all_subset_osps(n) if len(s) >= 2]
    rng = random.Random(n)
    return [plate(s, n) for s in rng.sample(labels, min(12, len(labels)))] + [
        mu(1, 2, n), subspace((1, 2), n)]


@pytest.mark.parametrize("n", [3, 4])
def test_convolution_commutative_associative(n):
    fs = _sample_fns(n)
    rng = random.Random(9)
    for _ in range(25):
        a, b, c = rng.sample(fs, 3)
        assert functions_equal(convolve(a, b), convolve(b, a))
        assert functions_equal(convolve(convolve(a, b), c), convolve(a, convolve(b, c)))


@pytest.mark.parametrize("n", [3, 4])
def test_duality_exchange_all_pairs(n):
    fs = [plate(s, n) for s in all_subset_osps(n)]
    fs += [subspace(t, n) for r in range(2, n + 1) for t in combinations(range(1, n + 1), r)]
    seen = set()
    for f, g in combinations(fs, 2):
        key = frozenset([next(iter(f.terms)), next(iter(g.terms))])
        if key in seen:
            continue
        seen.add(key)
        assert functions_equal(dualize_fn(convolve(f, g)),
                               pointwise_product(dualize_fn(f), dualize_fn(g)))


def test_duality_exchange_random_plate_products():
    rng = random.Random(4)
    for i in range(50):
        n = 3 + i % 2
        labels = [s for s in all_subset_osps(n) if len(s) >= 2]
        f = sum((plate(s, n) for s in rng.sample(labels, 2)), ConeFunction.zero(n))
        g = plate(rng.choice(labels), n)
        assert functions_equal(dualize_fn(convolve(f, g)),
                               pointwise_product(dualize_fn(f), dualize_fn(g)))


def test_eval_at_relint_of_atoms():
    for s in all_subset_osps(4):
        c = plate_cone(s, 4)
        assert eval_at(ConeFunction.atom(c), c.relint_point()) == 1
        d = dualize(c)
        assert eval_at(ConeFunction.atom(d), d.relint_point()) == 1


def test_functions_equal_cross_validated():
    rng = random.Random(12)
    cases = [
        (flag_product("1|2|3|4", 4), blade_char_fn("1|2|3|4", 4)),
        (convolve(mu(1, 2, 4), mu(2, 1, 4)), ConeFunction.zero(4)),
        (convolve(mu(1, 3, 4), mu(1, 3, 4)), -mu(1, 3, 4)),
    ]
    for f, g in cases:
        assert functions_equal(f, g)
        for _ in range(1000):
            x = random_v0_point(4, rng)
            assert eval_at(f, x) == eval_at(g, x)


def test_functions_unequal_detected():
    f = blade_char_fn("1|2|3|4", 4)
    g = blade_char_fn("1|2|4|3", 4)
    assert not functions_equal(f, g)
    x = find_difference(f, g)
    assert eval_at(f, x) != eval_at(g, x)
