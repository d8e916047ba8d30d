"""Commitments, mask expansion, and tuple arithmetic."""

import random

import pytest

from sdzkp.crypto import (
    COMMIT_TAGS,
    DIGEST_BYTES,
    OPENING_BYTES,
    SEED_BYTES,
    commit,
    decode_tuple,
    encode_tuple,
    expand_mask,
    fresh_seed,
    tuple_add,
    tuple_sub,
    verify_commitment,
    weight,
)


def test_commit_verify_round_trip():
    rng = random.Random(30)
    for tag in COMMIT_TAGS:
        digest, opening = commit(b"payload", tag, rng)
        assert len(digest) == DIGEST_BYTES
        assert len(opening) == OPENING_BYTES
        assert verify_commitment(digest, b"payload", tag, opening)


def test_commit_rejects_any_tamper():
    rng = random.Random(31)
    digest, opening = commit(b"payload", "C1", rng)
    assert not verify_commitment(digest, b"payloae", "C1", opening)
    assert not verify_commitment(digest, b"payload", "C2", opening)
    other = bytes(b ^ 1 for b in opening)
    assert not verify_commitment(digest, b"payload", "C1", other)
    wrong = bytes(b ^ 0x80 for b in digest)
    assert not verify_commitment(wrong, b"payload", "C1", opening)


def test_verify_commitment_is_total():
    # malformed inputs must return False, never raise
    assert not verify_commitment(b"short", b"", "C1", b"\x00" * OPENING_BYTES)
    assert not verify_commitment(b"\x00" * DIGEST_BYTES, b"", "C1", b"short")
    assert not verify_commitment(None, b"", "C1", b"\x00" * OPENING_BYTES)
    assert not verify_commitment(b"\x00" * DIGEST_BYTES, b"", "C1", None)
    assert not verify_commitment(b"\x00" * DIGEST_BYTES, b"", "C9", b"\x00" * OPENING_BYTES)


def test_commit_randomized():
    rng = random.Random(32)
    d1, o1 = commit(b"m", "C1", rng)
    d2, o2 = commit(b"m", "C1", rng)
    assert d1 != d2 and o1 != o2


def test_expand_mask_deterministic_and_prefix_stable():
    seed = bytes(range(32))
    m1 = expand_mask(seed, 16)
    m2 = expand_mask(seed, 16)
    assert m1 == m2
    assert len(m1) == 16
    assert all(0 <= w < 2**32 for w in m1)
    # longer expansion of the same seed extends the shorter one
    assert expand_mask(seed, 32)[:16] == m1
    assert expand_mask(bytes(32), 16) != m1


def test_expand_mask_validates_seed():
    with pytest.raises(ValueError):
        expand_mask(b"short", 4)


def test_mask_cancellation():
    rng = random.Random(33)
    seed = fresh_seed(rng)
    mask = expand_mask(seed, 8)
    data = tuple(rng.randrange(2**32) for _ in range(8))
    assert tuple_sub(tuple_add(data, mask), mask) == data


def test_tuple_arithmetic_wraps_mod_2_32():
    assert tuple_add((2**32 - 1,), (1,)) == (0,)
    assert tuple_sub((0,), (1,)) == (2**32 - 1,)
    with pytest.raises(ValueError):
        tuple_add((1, 2), (1,))
    with pytest.raises(ValueError):
        tuple_sub((1,), (1, 2))


def test_weight():
    assert weight(()) == 0
    assert weight((0, 0, 0)) == 0
    assert weight((0, 5, 0, 1)) == 2


def test_tuple_codec_round_trip():
    rng = random.Random(34)
    for _ in range(50):
        n = rng.randrange(1, 20)
        t = tuple(rng.randrange(2**32) for _ in range(n))
        data = encode_tuple(t)
        assert len(data) == 4 + 4 * n
        assert decode_tuple(data) == t


def test_tuple_codec_rejects_malformed():
    good = encode_tuple((1, 2, 3))
    with pytest.raises(ValueError):
        decode_tuple(good[:-2])
    with pytest.raises(ValueError):
        decode_tuple(good + b"\x00")
    with pytest.raises(ValueError):
        decode_tuple(b"")
    # zero-length and absurd lengths are rejected on untrusted input
    with pytest.raises(ValueError):
        decode_tuple(encode_tuple(()))
    with pytest.raises(ValueError):
        decode_tuple(b"\xff\xff\xff\xff")


def test_fresh_seed_length_and_variety():
    rng = random.Random(35)
    seeds = {fresh_seed(rng) for _ in range(100)}
    assert len(seeds) == 100
    assert all(len(s) == SEED_BYTES for s in seeds)


def test_mask_words_look_uniform():
    # chi-square on the low byte of the first mask word across many seeds
    rng = random.Random(36)
    counts = [0] * 256
    samples = 20000
    for _ in range(samples):
        word = expand_mask(fresh_seed(rng), 1)[0]
        counts[word & 0xFF] += 1
    expected = samples / 256
    chi2 = sum((c - expected) ** 2 / expected for c in counts)
    # 255 degrees of freedom: mean 255, std ~22.6; 400 is > 6 sigma
    assert chi2 < 400
