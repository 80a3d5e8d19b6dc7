import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rainbowlab.chains import Chain, SetFamily, close_family, extract_chain, span_dimension, verify_chain
from rainbowlab.errors import InputError
from oracles import popcount


def test_close_family_examples():
    assert close_family([0b011, 0b110]).members == (0b010, 0b011, 0b110, 0b111)
    chain = [0b001, 0b011, 0b111]
    assert close_family(chain).members == tuple(chain)
    assert close_family([1, 2, 4]).members == tuple(range(1, 8))


def test_span_examples():
    assert span_dimension([0b001, 0b011, 0b111]) == 3
    assert span_dimension([0b011, 0b110, 0b010, 0b111]) == 3
    assert span_dimension([0b101]) == 1


def test_extract_examples():
    assert extract_chain(SetFamily.of([0b01, 0b11])).sets == (0b01, 0b11)
    fam = close_family([0b011, 0b110])
    chain = extract_chain(fam)
    assert len(chain) == 3 and verify_chain(chain, fam)


def test_extract_rejects_open_family():
    with pytest.raises(InputError):
        extract_chain(SetFamily.of([0b011, 0b110]))


def test_verify_chain_examples():
    fam = close_family([0b011, 0b110])
    assert verify_chain(Chain((0b010, 0b011, 0b111)), fam)
    assert not verify_chain([0b010, 0b010], fam)
    assert not verify_chain([0b001, 0b011], fam)
    assert not verify_chain([0b011, 0b010], fam)


def _rank_oracle(members, n):
    # rank over GF(large prime) equals rational rank for 0/1 matrices of this size
    p = 2_147_483_647
    rows = [[m >> v & 1 for v in range(n)] for m in members]
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                q = rows[i][col] * inv % p
                rows[i] = [(x - q * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@given(st.integers(1, 8), st.lists(st.integers(1, 255), min_size=1, max_size=5))
def test_chain_length_equals_span(n, seeds):
    members = [s & ((1 << n) - 1) or 1 for s in seeds]
    fam = close_family(members)
    assert fam.closed
    chain = extract_chain(fam)
    assert verify_chain(chain, fam)
    assert len(chain) == span_dimension(fam) == _rank_oracle(fam.members, n)
    assert span_dimension(fam) <= n
    assert close_family(fam.members) == fam


def test_exhaustive_small_families():
    # every closed family on a 3-element set
    nonempty = range(1, 8)
    for r in range(1, 8):
        for combo in itertools.combinations(nonempty, r):
            fam = SetFamily.of(combo)
            if fam.closed:
                assert len(extract_chain(fam)) == span_dimension(fam)


def test_full_span_iff_n():
    fam = close_family([1 << v for v in range(4)])
    assert span_dimension(fam) == 4
    fam = close_family([0b0011, 0b1100])
    assert span_dimension(fam) == 2 < 4


def test_random_families_n10():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(1, 10)
        members = [rng.randrange(1, 1 << n) for _ in range(rng.randint(1, 4))]
        fam = close_family(members)
        assert len(extract_chain(fam)) == span_dimension(fam) == _rank_oracle(fam.members, n)
        assert all(popcount(m) for m in fam.members)
