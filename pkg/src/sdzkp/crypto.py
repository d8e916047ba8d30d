"""Hash-based commitments and the seeded masking used to blind image tuples.

Commitments are SHA3-256 over (ASCII tag || 32-byte opening || message);
the tag separates the three commitment slots of a round.  Masks are drawn
from SHAKE-256 keyed by a 32-byte seed and consumed as little-endian u32
words, so masked tuples live in (Z / 2^32)^n.
"""

from __future__ import annotations

import hashlib
import hmac
import struct
from random import Random

SEED_BYTES = 32
OPENING_BYTES = 32
DIGEST_BYTES = 32
COMMIT_TAGS = ("C1", "C2", "C3")

_WORD_MASK = 0xFFFFFFFF


def _commit_digest(tag: str, opening: bytes, message: bytes) -> bytes:
    return hashlib.sha3_256(tag.encode("ascii") + opening + message).digest()


def commit(message: bytes, tag: str, rng: Random) -> tuple[bytes, bytes]:
    """Commit to message under the given slot tag; returns (digest, opening)."""
    if tag not in COMMIT_TAGS:
        raise ValueError(f"unknown commitment tag {tag!r}")
    opening = rng.randbytes(OPENING_BYTES)
    return _commit_digest(tag, opening, message), opening


def verify_commitment(digest: bytes, message: bytes, tag: str, opening: bytes) -> bool:
    """Check an opened commitment.  Total: never raises on malformed input."""
    if tag not in COMMIT_TAGS:
        return False
    if not isinstance(digest, bytes) or not isinstance(opening, bytes) or not isinstance(message, bytes):
        return False
    if len(digest) != DIGEST_BYTES or len(opening) != OPENING_BYTES:
        return False
    return hmac.compare_digest(digest, _commit_digest(tag, opening, message))


def expand_mask(seed: bytes, n: int) -> tuple[int, ...]:
    """First 4n bytes of SHAKE-256(seed) as n little-endian u32 words."""
    if len(seed) != SEED_BYTES:
        raise ValueError(f"seed must be {SEED_BYTES} bytes, got {len(seed)}")
    if n < 1:
        raise ValueError("mask length must be positive")
    stream = hashlib.shake_256(seed).digest(4 * n)
    return struct.unpack(f"<{n}I", stream)


def tuple_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Componentwise sum mod 2^32."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple((x + y) & _WORD_MASK for x, y in zip(a, b))


def tuple_sub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Componentwise difference mod 2^32."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple((x - y) & _WORD_MASK for x, y in zip(a, b))


def weight(t: tuple[int, ...]) -> int:
    """Number of nonzero entries."""
    return sum(1 for x in t if x != 0)


def encode_tuple(t: tuple[int, ...]) -> bytes:
    """Length-prefixed canonical encoding: count u32 LE, then entries u32 LE."""
    n = len(t)
    return struct.pack(f"<I{n}I", n, *t)


def decode_tuple_from(data: bytes, offset: int = 0) -> tuple[tuple[int, ...], int]:
    """Decode one length-prefixed tuple; returns (tuple, next offset)."""
    if len(data) - offset < 4:
        raise ValueError("truncated tuple: missing length")
    (n,) = struct.unpack_from("<I", data, offset)
    offset += 4
    if n == 0 or n > (1 << 24):
        raise ValueError(f"unreasonable tuple length {n}")
    end = offset + 4 * n
    if len(data) < end:
        raise ValueError("truncated tuple: missing entries")
    return struct.unpack_from(f"<{n}I", data, offset), end


def decode_tuple(data: bytes) -> tuple[int, ...]:
    t, end = decode_tuple_from(data, 0)
    if end != len(data):
        raise ValueError("trailing bytes after tuple")
    return t


def fresh_seed(rng: Random) -> bytes:
    return rng.randbytes(SEED_BYTES)
