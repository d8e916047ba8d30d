"""Permutation arithmetic, the Hamming metric, and the byte encoding."""

import random

import pytest

from sdzkp.perm import (
    Permutation,
    compose,
    hamming,
    identity,
    inverse,
    random_perm,
    random_support_perm,
)


def test_compose_applies_right_factor_first():
    a = Permutation((1, 0, 2))
    b = Permutation((2, 1, 0))
    # (a∘b)(i) = a(b(i)): hand-evaluated
    assert compose(a, b).images == (2, 0, 1)


def test_compose_identity_neutral():
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randrange(1, 20)
        p = random_perm(n, rng)
        e = identity(n)
        assert compose(p, e) == p
        assert compose(e, p) == p


def test_inverse_hand_value():
    assert inverse(Permutation((1, 2, 0))).images == (2, 0, 1)


def test_inverse_law():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randrange(1, 40)
        p = random_perm(n, rng)
        assert compose(p, inverse(p)) == identity(n)
        assert compose(inverse(p), p) == identity(n)
        assert inverse(inverse(p)) == p


def test_associativity():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randrange(1, 30)
        a, b, c = (random_perm(n, rng) for _ in range(3))
        assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_rejects_non_bijections():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    with pytest.raises(ValueError):
        Permutation((0, 3, 1))
    with pytest.raises(ValueError):
        Permutation(())


def test_degree_mismatch_raises():
    a = Permutation((0, 1))
    b = Permutation((0, 1, 2))
    with pytest.raises(ValueError):
        compose(a, b)
    with pytest.raises(ValueError):
        hamming(a, b)


def test_hamming_basics():
    a = Permutation((0, 1, 2, 3))
    assert hamming(a, a) == 0
    assert hamming(a, Permutation((1, 0, 2, 3))) == 2
    assert hamming(a, Permutation((1, 2, 3, 0))) == 4


def test_hamming_never_one():
    rng = random.Random(4)
    for _ in range(2000):
        n = rng.randrange(2, 16)
        assert hamming(random_perm(n, rng), random_perm(n, rng)) != 1


def test_hamming_left_invariant():
    rng = random.Random(5)
    for _ in range(500):
        n = rng.randrange(2, 32)
        u, h, g = (random_perm(n, rng) for _ in range(3))
        assert hamming(compose(u, h), compose(u, g)) == hamming(h, g)


def test_hamming_right_invariant():
    rng = random.Random(6)
    for _ in range(500):
        n = rng.randrange(2, 32)
        u, h, g = (random_perm(n, rng) for _ in range(3))
        assert hamming(compose(h, u), compose(g, u)) == hamming(h, g)


def test_random_support_perm_moves_exactly_m():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randrange(2, 40)
        m = rng.choice([0] + list(range(2, n + 1)))
        tau = random_support_perm(n, m, rng)
        assert len(tau.support()) == m


def test_random_support_perm_edge_cases():
    rng = random.Random(8)
    assert random_support_perm(5, 0, rng) == identity(5)
    with pytest.raises(ValueError):
        random_support_perm(5, 1, rng)
    with pytest.raises(ValueError):
        random_support_perm(5, 6, rng)
    with pytest.raises(ValueError):
        random_support_perm(5, -2, rng)


def test_random_support_perm_composition_distance():
    # d(tau∘g, g) == |support(tau)| by right-invariance
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randrange(4, 32)
        m = rng.choice([0] + list(range(2, n + 1)))
        g = random_perm(n, rng)
        tau = random_support_perm(n, m, rng)
        assert hamming(compose(tau, g), g) == m


def test_bytes_round_trip():
    rng = random.Random(10)
    for _ in range(100):
        n = rng.randrange(1, 50)
        p = random_perm(n, rng)
        data = p.to_bytes()
        assert len(data) == 4 + 4 * n
        assert Permutation.from_bytes(data) == p


def test_bytes_encoding_layout():
    p = Permutation((1, 0, 2))
    assert p.to_bytes() == bytes([3, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0])


def test_bytes_rejects_malformed():
    good = Permutation((1, 0, 2)).to_bytes()
    with pytest.raises(ValueError):
        Permutation.from_bytes(good[:-1])
    with pytest.raises(ValueError):
        Permutation.from_bytes(good + b"\x00")
    with pytest.raises(ValueError):
        Permutation.from_bytes(b"")
    # image out of range
    bad = bytearray(good)
    bad[4] = 9
    with pytest.raises(ValueError):
        Permutation.from_bytes(bytes(bad))


def test_random_perm_uniform_smoke():
    # all 6 permutations of 3 points should show up at sane frequencies
    rng = random.Random(11)
    counts = {}
    for _ in range(6000):
        p = random_perm(3, rng)
        counts[p.images] = counts.get(p.images, 0) + 1
    assert len(counts) == 6
    assert all(800 < c < 1200 for c in counts.values())


def test_call_and_support():
    p = Permutation((2, 1, 0))
    assert p(0) == 2 and p(1) == 1 and p(2) == 0
    assert p.support() == (0, 2)
    assert identity(4).is_identity()
