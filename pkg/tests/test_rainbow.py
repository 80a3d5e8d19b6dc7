import itertools
import random
from fractions import Fraction

import pytest

from rainbowlab.errors import InputError
from rainbowlab.instances import instance_to_dict, to_text
from rainbowlab.matroids import (
    GroundSet,
    Hypergraph,
    PartitionMatroid,
    UniformMatroid,
    elements_of,
    mask_of,
    star_matroids,
)
from rainbowlab.polytopes import IntersectionSystem, hypergraph_nu_star, in_system, is_common_independent
from rainbowlab.rainbow import (
    RainbowInstance,
    canonical_instances,
    find_integral_rainbow,
    find_rainbow,
    kz_rainbow,
    random_instance,
    validate_instance,
)
from oracles import matchings, popcount

CATALOG = canonical_instances()


def _is_rainbow(result, supports):
    js = [j for j, _ in result.choice]
    xs = [x for _, x in result.choice]
    return (len(set(js)) == len(js) and len(set(xs)) == len(xs)
            and all(supports[j] >> x & 1 for j, x in result.choice) and mask_of(xs) == result.R)


def test_catalog_contents():
    cube = CATALOG["cube-2x2x2"]
    assert cube.n == 8 and len(cube.sets) == 4
    assert all(popcount(s) == 2 and cube.hypergraph.is_matching(s) for s in cube.sets)
    d2 = CATALOG["drisko-k2"]
    assert len(d2.sets) == 3 and all(popcount(s) == 2 and d2.hypergraph.is_matching(s) for s in d2.sets)
    d3 = CATALOG["drisko-k3"]
    assert len(d3.sets) == 5 and all(popcount(s) == 3 for s in d3.sets)
    for name, k in (("kz-k2", 2), ("kz-k3", 3)):
        inst = CATALOG[name]
        assert len(inst.sets) == 2 * k - 1
        assert all(popcount(s) == k and is_common_independent(s, inst.matroids) for s in inst.sets)
    for inst in CATALOG.values():
        if inst.functions:
            assert validate_instance(inst.rainbow_instance())


def test_validation_flags():
    sys = IntersectionSystem([UniformMatroid(3, 2)])
    short = RainbowInstance(sys, 2, [[1, 1, 0]])
    rep = validate_instance(short)
    assert not rep and "insufficient" in rep.problems[0]
    bad = RainbowInstance(sys, 2, [[1, 1, 1], [1, 1, 0]])
    rep = validate_instance(bad)
    assert not rep and "A=[0, 1, 2]" in rep.problems[0]
    small = RainbowInstance(sys, 2, [[1, 0, 0], [1, 1, 0]])
    assert any("< k" in p for p in validate_instance(small).problems)
    with pytest.raises(InputError):
        find_rainbow(short)


def test_identical_functions():
    sys = IntersectionSystem([UniformMatroid(3, 2)])
    inst = RainbowInstance(sys, 2, [[1, 1, 0], [1, 1, 0]])
    res = find_rainbow(inst)
    assert res.R == 0b011 and res.value == 2


def test_cube_gap():
    cube = CATALOG["cube-2x2x2"]
    assert find_integral_rainbow(cube.hypergraph, cube.sets, 2) is None
    # brute force: no pair of edges from different matchings forms a matching
    for (i, a), (j, b) in itertools.combinations(enumerate(cube.sets), 2):
        for e in elements_of(a):
            for f in elements_of(b):
                assert e == f or not cube.hypergraph.is_matching(1 << e | 1 << f)
    inst = cube.rainbow_instance()
    res = find_rainbow(inst)
    assert hypergraph_nu_star(cube.hypergraph, res.R) == 2 == res.value
    assert _is_rainbow(res, inst.supports)
    assert in_system(res.f, inst.sys)


def test_drisko_fractional_and_integral():
    d2 = CATALOG["drisko-k2"]
    res = find_rainbow(d2.rainbow_instance())
    assert res.value >= 2
    integral = find_integral_rainbow(d2.hypergraph, d2.sets, 2)
    assert integral is not None and popcount(integral.R) == 2
    assert d2.hypergraph.is_matching(integral.R)


def test_drisko_one_short_has_no_rainbow_matching():
    # k-1 copies of each perfect matching of the 2k-cycle: no rainbow perfect matching
    for k in (2, 3):
        inst = CATALOG[f"drisko-k{k}"]
        sets = [s for s in inst.sets]
        fewer = sets[1:]
        assert find_integral_rainbow(inst.hypergraph, fewer, k) is None


def test_integral_single_matching():
    hg = Hypergraph([(0, 0), (1, 1)])
    res = find_integral_rainbow(hg, [[1]], 1)
    assert res.R == 0b10


def test_kz_examples():
    m1, m2 = star_matroids(Hypergraph([(0, 0)]))
    assert kz_rainbow([[0]], m1, m2).R == 1
    k22 = [(0, 0), (0, 1), (1, 0), (1, 1)]
    m1, m2 = star_matroids(k22)
    res = kz_rainbow([0b1001, 0b0110, 0b1001], m1, m2)
    assert popcount(res.R) == 2 and is_common_independent(res.R, (m1, m2))
    assert res.R in matchings(k22)


def _random_two_matroid_sets(rng, n, k):
    g = GroundSet(n)
    while True:
        ms = []
        for _ in range(2):
            labels = [rng.randrange(k + 1) for _ in range(n)]
            parts = [mask_of(v for v in range(n) if labels[v] == p) for p in range(k + 1)]
            ms.append(PartitionMatroid(g, [p for p in parts if p]))
        common = [s for s in range(1 << n) if popcount(s) == k and is_common_independent(s, ms)]
        if common:
            return ms, [rng.choice(common) for _ in range(2 * k - 1)]


def test_kz_random_k3():
    rng = random.Random(11)
    for _ in range(10):
        (m1, m2), sets = _random_two_matroid_sets(rng, 8, 3)
        res = kz_rainbow(sets, m1, m2)
        assert popcount(res.R) == 3 and is_common_independent(res.R, (m1, m2))
        assert _is_rainbow(res, sets)


def test_kz_rejects_bad_input():
    m1, m2 = star_matroids([(0, 0), (0, 1)])
    with pytest.raises(InputError):
        kz_rainbow([0b11], m1, m2)  # not a matching
    m1, m2 = star_matroids([(0, 0), (1, 1), (0, 1)])
    with pytest.raises(InputError):
        kz_rainbow([0b011, 0b100], m1, m2)  # sizes differ
    with pytest.raises(InputError):
        kz_rainbow([0b011, 0b011], m1, m2)  # needs 2k-1 = 3 sets


def test_random_instance_deterministic():
    a = random_instance(5, 2, 2, 6)
    b = random_instance(5, 2, 2, 6)
    assert a.functions == b.functions
    assert [m.rank_table for m in a.sys.matroids] == [m.rank_table for m in b.sys.matroids]


def test_random_instance_unsatisfiable():
    with pytest.raises(InputError):
        random_instance(0, 2, 2, 1)


def test_random_r2_k2_n6_hundred_seeds():
    done, seed = 0, 0
    while done < 100:
        try:
            inst = random_instance(seed, 2, 2, 6)
        except InputError:
            seed += 1
            continue
        assert validate_instance(inst)
        res = find_rainbow(inst)
        assert res.value >= 2 and in_system(res.f, inst.sys)
        assert _is_rainbow(res, inst.supports)
        done += 1
        seed += 1
