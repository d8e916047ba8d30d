"""Planted subgroup-distance instances, witness checks, brute-force oracle.

An instance is a permutation subgroup H (given by generators), a target
permutation g of the same degree, and a distance bound k.  A witness is an
element h of H with Hamming distance at most k from g.  Planted instances
are built backwards from a uniform h in H, so the planted witness sits at
distance exactly k.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from random import Random

from .group import BSGS, build_bsgs
from .perm import Permutation, compose, hamming, random_perm, random_support_perm

INSTANCE_MAGIC = b"SDZ1"
WITNESS_MAGIC = b"SDW1"

PRESETS = ("general", "abelian2")

# Generator counts are sanity-capped on parse so a corrupt header cannot
# drive allocation; real instances use a handful of generators.
_MAX_GENS = 1 << 16


@dataclass(frozen=True)
class SDPInstance:
    """Public statement: find h in H = <generators> with d(h, target) <= max_distance."""

    degree: int
    max_distance: int
    target: Permutation
    generators: tuple[Permutation, ...]
    group: BSGS = field(compare=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.max_distance <= self.degree:
            raise ValueError(f"distance bound {self.max_distance} out of range for degree {self.degree}")
        if self.max_distance == 1:
            raise ValueError("distance bound 1 is unsatisfiable for permutations")
        if self.target.n != self.degree:
            raise ValueError("target degree mismatch")
        for g in self.generators:
            if g.n != self.degree:
                raise ValueError("generator degree mismatch")
        if self.group.degree != self.degree:
            raise ValueError("group degree mismatch")


@dataclass(frozen=True)
class Witness:
    element: Permutation


def make_instance(target: Permutation, generators, max_distance: int) -> SDPInstance:
    """Assemble an instance from explicit parts, building the stabilizer chain."""
    gens = tuple(generators)
    group = build_bsgs(gens)
    return SDPInstance(
        degree=target.n,
        max_distance=max_distance,
        target=target,
        generators=gens,
        group=group,
    )


def _abelian2_generators(n: int, num_gens: int, rng: Random) -> list[Permutation]:
    """Commuting involutions: products of random subsets of one fixed
    set of disjoint transpositions, so the group is elementary abelian
    of exponent 2."""
    if n < 2:
        raise ValueError("abelian2 preset needs degree at least 2")
    points = list(range(n))
    rng.shuffle(points)
    pairs = [(points[2 * i], points[2 * i + 1]) for i in range(n // 2)]
    gens = []
    for _ in range(num_gens):
        while True:
            chosen = [p for p in pairs if rng.random() < 0.5]
            if chosen:
                break
        images = list(range(n))
        for a, b in chosen:
            images[a], images[b] = images[b], images[a]
        gens.append(Permutation(tuple(images)))
    return gens


def plant_instance(
    n: int,
    num_gens: int,
    k: int,
    rng: Random,
    preset: str = "general",
) -> tuple[SDPInstance, Witness]:
    """Sample an instance with a known witness at distance exactly k.

    h is uniform in H and the target is tau∘h for a random permutation tau
    moving exactly k points, so d(h, target) == k by left-invariance.
    k == 0 plants the trivial statement (target in H, allowed for testing);
    k == 1 is rejected, as is k > n.  num_gens must be at least 1.
    """
    if num_gens < 1:
        raise ValueError("need at least one generator")
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; expected one of {PRESETS}")
    if k == 1 or not 0 <= k <= n:
        raise ValueError(f"distance {k} is not plantable at degree {n}")

    if preset == "general":
        gens = [random_perm(n, rng) for _ in range(num_gens)]
    else:
        gens = _abelian2_generators(n, num_gens, rng)
    group = build_bsgs(gens)
    h = group.sample_uniform(rng)
    tau = random_support_perm(n, k, rng)
    target = compose(tau, h)
    inst = SDPInstance(
        degree=n,
        max_distance=k,
        target=target,
        generators=tuple(gens),
        group=group,
    )
    wit = Witness(element=h)
    assert hamming(h, target) == k
    return inst, wit


def validate_witness(inst: SDPInstance, h: Permutation) -> bool:
    """True iff h is in H and within the distance bound of the target."""
    if h.n != inst.degree:
        raise ValueError(f"witness degree {h.n} does not match instance degree {inst.degree}")
    return inst.group.contains(h) and hamming(h, inst.target) <= inst.max_distance


def brute_force_distance(inst: SDPInstance, limit: int = 1 << 20) -> tuple[int, Permutation]:
    """Exhaustive minimum of d(h, target) over H; the independent oracle.

    Returns (distance, minimizer); ties broken by the group's fixed
    enumeration order.  Raises ValueError when |H| exceeds limit.
    """
    best = None
    best_elem = None
    for h in inst.group.elements(limit):
        d = hamming(h, inst.target)
        if best is None or d < best:
            best, best_elem = d, h
    return best, best_elem


def instance_to_bytes(inst: SDPInstance) -> bytes:
    parts = [
        INSTANCE_MAGIC,
        struct.pack("<II", inst.degree, inst.max_distance),
        inst.target.to_bytes(),
        struct.pack("<I", len(inst.generators)),
    ]
    parts.extend(g.to_bytes() for g in inst.generators)
    return b"".join(parts)


def instance_from_bytes(data: bytes) -> SDPInstance:
    if data[:4] != INSTANCE_MAGIC:
        raise ValueError("bad instance magic")
    if len(data) < 12:
        raise ValueError("truncated instance header")
    n, k = struct.unpack_from("<II", data, 4)
    target, offset = Permutation.unpack_from(data, 12)
    if len(data) - offset < 4:
        raise ValueError("truncated generator count")
    (count,) = struct.unpack_from("<I", data, offset)
    offset += 4
    if count == 0 or count > _MAX_GENS:
        raise ValueError(f"unreasonable generator count {count}")
    gens = []
    for _ in range(count):
        g, offset = Permutation.unpack_from(data, offset)
        if g.n != n:
            raise ValueError("generator degree does not match header")
        gens.append(g)
    if offset != len(data):
        raise ValueError("trailing bytes after instance")
    if target.n != n:
        raise ValueError("target degree does not match header")
    return make_instance(target, gens, k)


def witness_to_bytes(wit: Witness) -> bytes:
    return WITNESS_MAGIC + wit.element.to_bytes()


def witness_from_bytes(data: bytes) -> Witness:
    if data[:4] != WITNESS_MAGIC:
        raise ValueError("bad witness magic")
    return Witness(element=Permutation.from_bytes(data[4:]))


def save_instance(inst: SDPInstance, path) -> None:
    with open(path, "wb") as f:
        f.write(instance_to_bytes(inst))


def load_instance(path) -> SDPInstance:
    with open(path, "rb") as f:
        return instance_from_bytes(f.read())


def save_witness(wit: Witness, path) -> None:
    with open(path, "wb") as f:
        f.write(witness_to_bytes(wit))


def load_witness(path) -> Witness:
    with open(path, "rb") as f:
        return witness_from_bytes(f.read())


def instance_digest(inst: SDPInstance) -> bytes:
    """Binding digest of the public statement, used for challenge derivation."""
    return hashlib.sha3_256(b"SDZKP-inst-v1" + instance_to_bytes(inst)).digest()
