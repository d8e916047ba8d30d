"""Permutations of {0, .., n-1} in one-line notation, with the Hamming metric.

The one-line form of a permutation p is the tuple (p(0), .., p(n-1)).
Composition is function composition: compose(a, b) applies b first, then a.
The Hamming distance between two permutations of the same degree counts the
positions where their one-line forms differ; it is bi-invariant and never 1.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from random import Random

# Degrees are serialized as u32; anything near that bound is nonsense for
# this codebase, so parsers cap the degree they will allocate for.
MAX_DEGREE = 1 << 20


def compose_images(a, b):
    """One-line form of a∘b for raw image tuples (b applied first)."""
    return tuple(map(a.__getitem__, b))


def invert_images(a):
    """One-line form of a^-1 for a raw image tuple."""
    inv = [0] * len(a)
    for i, v in enumerate(a):
        inv[v] = i
    return tuple(inv)


@dataclass(frozen=True)
class Permutation:
    """An immutable permutation stored as its one-line image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        n = len(images)
        if n == 0:
            raise ValueError("permutation degree must be at least 1")
        seen = bytearray(n)
        for v in images:
            if not isinstance(v, int) or not 0 <= v < n:
                raise ValueError(f"image {v!r} out of range for degree {n}")
            if seen[v]:
                raise ValueError(f"image {v} repeated; not a bijection")
            seen[v] = 1

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def support(self) -> tuple[int, ...]:
        """Points moved by this permutation."""
        return tuple(i for i, v in enumerate(self.images) if v != i)

    def to_bytes(self) -> bytes:
        """Canonical encoding: degree as u32 LE, then each image as u32 LE."""
        n = len(self.images)
        return struct.pack(f"<I{n}I", n, *self.images)

    @classmethod
    def unpack_from(cls, data: bytes, offset: int = 0) -> tuple["Permutation", int]:
        """Decode one permutation starting at offset; returns (perm, next offset)."""
        if len(data) - offset < 4:
            raise ValueError("truncated permutation: missing degree")
        (n,) = struct.unpack_from("<I", data, offset)
        offset += 4
        if n == 0 or n > MAX_DEGREE:
            raise ValueError(f"unreasonable permutation degree {n}")
        end = offset + 4 * n
        if len(data) < end:
            raise ValueError("truncated permutation: missing images")
        images = struct.unpack_from(f"<{n}I", data, offset)
        return cls(images), end

    @classmethod
    def from_bytes(cls, data: bytes) -> "Permutation":
        perm, end = cls.unpack_from(data, 0)
        if end != len(data):
            raise ValueError("trailing bytes after permutation")
        return perm


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def _check_same_degree(a: Permutation, b: Permutation) -> None:
    if a.n != b.n:
        raise ValueError(f"degree mismatch: {a.n} vs {b.n}")


def compose(a: Permutation, b: Permutation) -> Permutation:
    """a∘b, i.e. i -> a(b(i)). Degrees must match."""
    _check_same_degree(a, b)
    return Permutation(compose_images(a.images, b.images))


def inverse(a: Permutation) -> Permutation:
    return Permutation(invert_images(a.images))


def hamming(a: Permutation, b: Permutation) -> int:
    """Number of points where the one-line forms differ. Never equals 1."""
    _check_same_degree(a, b)
    return sum(1 for x, y in zip(a.images, b.images) if x != y)


def random_perm(n: int, rng: Random) -> Permutation:
    """Uniformly random permutation of degree n."""
    if n < 1:
        raise ValueError("degree must be at least 1")
    images = list(range(n))
    rng.shuffle(images)
    return Permutation(tuple(images))


def random_support_perm(n: int, m: int, rng: Random) -> Permutation:
    """Uniformly random permutation of degree n moving exactly m points.

    m == 0 yields the identity.  m == 1 is impossible (a bijection cannot
    move a single point) and raises ValueError, as does m > n or m < 0.
    The moved points are a uniform m-subset and the action on them is a
    uniform derangement, found by rejection (about e tries on average).
    """
    if m == 0:
        return identity(n)
    if m == 1:
        raise ValueError("no permutation moves exactly one point")
    if m < 0 or m > n:
        raise ValueError(f"support size {m} out of range for degree {n}")
    points = rng.sample(range(n), m)
    values = points[:]
    while True:
        rng.shuffle(values)
        if all(p != v for p, v in zip(points, values)):
            break
    images = list(range(n))
    for p, v in zip(points, values):
        images[p] = v
    return Permutation(tuple(images))
