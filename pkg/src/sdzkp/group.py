"""Stabilizer chains for permutation subgroups given by generators.

Implements the deterministic Schreier-Sims algorithm.  A BSGS (base and
strong generating set) supports exact membership tests, the group order,
uniform random sampling, and bounded enumeration.  All of this is exact
group theory; nothing here is probabilistic unless a caller passes an rng
for the optional random-word self-check.

Intended for desk-scale degrees (up to a few hundred points).  For degree
at most 256 the chain stores permutations as 256-byte translation tables
(identity beyond the degree) so composition is bytes.translate.
"""

from __future__ import annotations

from functools import cached_property
from math import prod
from random import Random
from typing import Sequence

from .perm import Permutation, compose_images, invert_images

_BYTES_IDENT = bytes(range(256))


class _ByteOps:
    """Permutations as padded 256-byte tables; compose via C-level translate."""

    __slots__ = ("degree", "ident")

    def __init__(self, degree: int):
        self.degree = degree
        self.ident = _BYTES_IDENT

    def encode(self, images):
        return bytes(images) + _BYTES_IDENT[self.degree:]

    def decode(self, raw):
        return tuple(raw[: self.degree])

    @staticmethod
    def mul(a, b):
        return b.translate(a)

    @staticmethod
    def inv(a):
        out = bytearray(256)
        for i, v in enumerate(a):
            out[v] = i
        return bytes(out)


class _TupleOps:
    """Plain image tuples, for degrees past the byte-table limit."""

    __slots__ = ("degree", "ident")

    def __init__(self, degree: int):
        self.degree = degree
        self.ident = tuple(range(degree))

    def encode(self, images):
        return tuple(images)

    def decode(self, raw):
        return raw

    @staticmethod
    def mul(a, b):
        return compose_images(a, b)

    @staticmethod
    def inv(a):
        return invert_images(a)


def _make_ops(degree: int):
    return _ByteOps(degree) if degree <= 256 else _TupleOps(degree)


class _Level:
    """One level of the chain: a base point with its orbit data.

    gens generate the subgroup fixing all base points of earlier levels.
    transversal maps each orbit point y to a representative u with
    u(point) == y; inv_transversal holds the inverses.  verified remembers
    Schreier generators already sifted to identity; orbits only ever extend
    and representatives never change, so that fact stays true as deeper
    levels grow.
    """

    __slots__ = ("point", "gens", "gen_set", "transversal", "inv_transversal", "verified", "reps")

    def __init__(self, point: int):
        self.point = point
        self.gens = []
        self.gen_set = set()
        self.transversal = {}
        self.inv_transversal = {}
        self.verified = set()
        self.reps = None

    def add_gen(self, g) -> None:
        if g not in self.gen_set:
            self.gens.append(g)
            self.gen_set.add(g)


class _ChainBuilder:
    def __init__(self, ops):
        self.ops = ops
        self.degree = ops.degree
        self.levels: list[_Level] = []

    def _new_level_for(self, g) -> None:
        point = next(i for i in range(self.degree) if g[i] != i)
        self.levels.append(_Level(point))

    def place_generator(self, g) -> None:
        """Insert an input generator at every level whose base prefix it fixes."""
        j = 0
        while True:
            if j == len(self.levels):
                self._new_level_for(g)
            level = self.levels[j]
            level.add_gen(g)
            if g[level.point] != level.point:
                return
            j += 1

    def extend_orbit(self, level: _Level) -> None:
        """Grow the orbit closure under the current generators.

        Existing representatives are kept untouched so earlier Schreier
        checks against them remain valid."""
        ops = self.ops
        t = level.transversal
        if not t:
            t[level.point] = ops.ident
            level.inv_transversal[level.point] = ops.ident
        queue = list(t)
        while queue:
            y = queue.pop()
            u_y = t[y]
            for g in level.gens:
                z = g[y]
                if z not in t:
                    u_z = ops.mul(g, u_y)
                    t[z] = u_z
                    level.inv_transversal[z] = ops.inv(u_z)
                    queue.append(z)

    def sift(self, p, start: int = 0):
        """Strip p through the chain; returns (residue, level index reached)."""
        mul = self.ops.mul
        for idx in range(start, len(self.levels)):
            level = self.levels[idx]
            y = p[level.point]
            if y == level.point:
                continue
            u_inv = level.inv_transversal.get(y)
            if u_inv is None:
                return p, idx
            p = mul(u_inv, p)
        return p, len(self.levels)

    def complete_level(self, i: int) -> None:
        """Make level i satisfy the strong generating property.

        Precondition: all deeper levels already satisfy it.  Every Schreier
        generator of level i is sifted through the deeper chain; a nontrivial
        residue is a new strong generator for the deeper levels, which are
        then re-completed before continuing.
        """
        level = self.levels[i]
        self.extend_orbit(level)
        mul = self.ops.mul
        ident = self.ops.ident
        verified = level.verified
        # level.gens and hence this orbit never change inside this call;
        # new generators only ever land at deeper levels.  A pair once
        # handled stays handled: its Schreier generator is a member of the
        # deeper group from then on (the residue was added as a generator),
        # and deeper groups only grow.
        for y in list(level.transversal):
            u_y = level.transversal[y]
            for g in level.gens:
                key = (y, g)
                if key in verified:
                    continue
                verified.add(key)
                w = mul(g, u_y)
                z = g[y]
                if w == level.transversal[z]:
                    continue
                sgen = mul(level.inv_transversal[z], w)
                residue, j = self.sift(sgen, i + 1)
                if residue == ident:
                    continue
                if j == len(self.levels):
                    self._new_level_for(residue)
                for l in range(i + 1, j + 1):
                    self.levels[l].add_gen(residue)
                for l in range(j, i, -1):
                    self.complete_level(l)

    def run(self, gens) -> list[_Level]:
        for g in gens:
            self.place_generator(g)
        for i in reversed(range(len(self.levels))):
            self.complete_level(i)
        for level in self.levels:
            level.reps = [level.transversal[y] for y in sorted(level.transversal)]
        return self.levels


class BSGS:
    """Base and strong generating set for the subgroup the generators span.

    Construct via build_bsgs().  Immutable once built, so instances are safe
    to share across threads.
    """

    def __init__(self, ops, generators: tuple[Permutation, ...], levels: list[_Level]):
        self._ops = ops
        self._generators = generators
        self._levels = levels
        self._order = prod(len(level.transversal) for level in levels)

    @property
    def degree(self) -> int:
        return self._ops.degree

    @property
    def generators(self) -> tuple[Permutation, ...]:
        """The normalized input generators (identity dropped, duplicates merged)."""
        return self._generators

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(level.point for level in self._levels)

    @cached_property
    def strong_generators(self) -> tuple[Permutation, ...]:
        seen = {}
        for level in self._levels:
            for g in level.gens:
                seen.setdefault(g, Permutation(self._ops.decode(g)))
        return tuple(seen.values())

    @cached_property
    def transversals(self) -> tuple[dict[int, Permutation], ...]:
        """Per level, the map from orbit point to its coset representative."""
        return tuple(
            {y: Permutation(self._ops.decode(u)) for y, u in sorted(level.transversal.items())}
            for level in self._levels
        )

    def _sift_raw(self, p):
        mul = self._ops.mul
        for level in self._levels:
            y = p[level.point]
            if y == level.point:
                continue
            u_inv = level.inv_transversal.get(y)
            if u_inv is None:
                return None
            p = mul(u_inv, p)
        return p

    def contains(self, p: Permutation) -> bool:
        """Exact membership test by sifting through the chain."""
        if p.n != self.degree:
            raise ValueError(f"degree mismatch: group acts on {self.degree} points, element on {p.n}")
        residue = self._sift_raw(self._ops.encode(p.images))
        return residue == self._ops.ident

    def order(self) -> int:
        """|H|, the product of the orbit sizes along the chain."""
        return self._order

    def sample_uniform(self, rng: Random) -> Permutation:
        """Uniformly random element: one uniform coset representative per level."""
        mul = self._ops.mul
        acc = None
        for level in self._levels:
            rep = level.reps[rng.randrange(len(level.reps))]
            acc = rep if acc is None else mul(acc, rep)
        return Permutation(self._ops.decode(acc if acc is not None else self._ops.ident))

    def elements(self, limit: int) -> list[Permutation]:
        """All group elements, in a fixed deterministic order.

        Raises ValueError if the group order exceeds limit; call sites must
        opt in to the exponential cost explicitly.
        """
        if self._order > limit:
            raise ValueError(f"group order {self._order} exceeds enumeration limit {limit}")
        mul = self._ops.mul
        elems = [self._ops.ident]
        for level in reversed(self._levels):
            elems = [mul(u, e) for u in level.reps for e in elems]
        return [Permutation(self._ops.decode(e)) for e in elems]


def _normalize(generators: Sequence[Permutation]) -> tuple[int, tuple[Permutation, ...]]:
    if not generators:
        raise ValueError("at least one generator is required")
    for g in generators:
        if not isinstance(g, Permutation):
            raise TypeError(f"expected Permutation, got {type(g).__name__}")
    degree = generators[0].n
    seen = set()
    kept = []
    for g in generators:
        if g.n != degree:
            raise ValueError(f"generator degree mismatch: {g.n} vs {degree}")
        if g.images == tuple(range(degree)) or g.images in seen:
            continue
        seen.add(g.images)
        kept.append(g)
    return degree, tuple(kept)


def build_bsgs(generators: Sequence[Permutation], rng: Random | None = None) -> BSGS:
    """Build a stabilizer chain for the subgroup generated by `generators`.

    Deterministic given the generator list.  Identity generators are ignored
    and duplicates are merged; an all-identity list yields the trivial group.
    If rng is given, an extra randomized self-check sifts random generator
    words through the finished chain.
    """
    degree, gens = _normalize(generators)
    ops = _make_ops(degree)
    builder = _ChainBuilder(ops)
    levels = builder.run([ops.encode(g.images) for g in gens])
    chain = BSGS(ops, gens, levels)

    # The chain invariant: every strong generator strips to the identity.
    for level in levels:
        for g in level.gens:
            if chain._sift_raw(g) != ops.ident:
                raise RuntimeError("stabilizer chain failed self-check")
    if rng is not None and gens:
        raw = [ops.encode(g.images) for g in gens]
        for _ in range(32):
            word = ops.ident
            for _ in range(rng.randrange(1, 16)):
                word = ops.mul(word, raw[rng.randrange(len(raw))])
            if chain._sift_raw(word) != ops.ident:
                raise RuntimeError("stabilizer chain rejected a generator word")
    return chain
