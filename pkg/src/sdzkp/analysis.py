"""Security-analysis harness: extraction, cheating provers, simulation.

Everything here treats the protocol as an object of study.  The tools are:

* rewindable provers: a frozen coin tape that answers any challenge, so a
  single committed state can be probed on all of {0, 1, 2};
* a witness extractor that turns three accepting answers (one per
  challenge) under one commitment into an element of H within the bound;
* cheating provers that pass exactly two chosen challenges per state,
  realizing the 2/3 single-round soundness error;
* a rewinding simulator that produces accepting transcripts without the
  witness, and a distribution test comparing them to real ones.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from random import Random
from typing import Callable

from .crypto import commit, encode_tuple, expand_mask, fresh_seed, tuple_add, tuple_sub, weight
from .group import BSGS
from .instance import SDPInstance, Witness
from .perm import Permutation, compose, hamming, inverse, random_support_perm
from .protocol import (
    CommitmentMsg,
    Response,
    Transcript,
    prover_commit,
    prover_respond,
    verifier_challenge,
    verify_round,
)

VerifierOracle = Callable[[CommitmentMsg], int]

_RESAMPLE_BOUND = 64


class ExtractionError(Exception):
    """Raised when three transcripts do not admit extraction."""


class RewindableProver:
    """A prover with its per-round coins frozen.

    commitment is fixed at construction; respond(ch) is a pure function of
    the tape, so callers may query any subset of challenges in any order.
    """

    def __init__(self, commitment: CommitmentMsg, responder: Callable[[int], Response]):
        self.commitment = commitment
        self._responder = responder

    def respond(self, challenge: int) -> Response:
        if challenge not in (0, 1, 2):
            raise ValueError(f"challenge must be 0, 1 or 2, got {challenge!r}")
        return self._responder(challenge)


def honest_rewindable_prover(inst: SDPInstance, wit: Witness, rng: Random) -> RewindableProver:
    state, msg = prover_commit(inst, wit, rng)
    return RewindableProver(msg, lambda ch: prover_respond(state, ch))


def accepted_challenges(inst: SDPInstance, prover: RewindableProver) -> set[int]:
    """Which challenges this committed state would survive."""
    return {
        ch for ch in (0, 1, 2)
        if verify_round(inst, prover.commitment, ch, prover.respond(ch))
    }


def transcript_for(inst: SDPInstance, prover: RewindableProver, challenge: int) -> Transcript:
    return Transcript(prover.commitment, challenge, prover.respond(challenge))


# --- extraction ---

def extract_witness(inst: SDPInstance, t0: Transcript, t1: Transcript, t2: Transcript) -> Permutation:
    """Witness from three accepting transcripts sharing one commitment.

    The transcripts must carry challenges {0, 1, 2} in any order.  Unmasking
    the challenge-0 reply gives u∘h, the challenge-1 reply gives u∘g; then
    h = (u∘g ∘ g^-1)^-1 ∘ (u∘h).  Inconsistencies that the commitment scheme
    is supposed to rule out (diverging seeds or masked tuples under equal
    digests) are reported loudly rather than silently tolerated.
    """
    transcripts = (t0, t1, t2)
    by_ch = {t.challenge: t for t in transcripts}
    if set(by_ch) != {0, 1, 2}:
        raise ExtractionError(f"need one transcript per challenge, got {sorted(t.challenge for t in transcripts)}")
    com = transcripts[0].commitment
    if any(t.commitment != com for t in transcripts):
        raise ExtractionError("transcripts do not share a commitment")
    for ch, t in sorted(by_ch.items()):
        if not verify_round(inst, com, ch, t.response):
            raise ExtractionError(f"transcript for challenge {ch} does not verify")

    r0, r1, r2 = by_ch[0].response, by_ch[1].response, by_ch[2].response
    if r0.seed != r1.seed:
        raise ExtractionError("binding violation: one seed commitment opened to two seeds")
    if r0.masked_witness != r2.masked_witness:
        raise ExtractionError("binding violation: two openings of the masked witness differ")
    if r1.masked_target != r2.masked_target:
        raise ExtractionError("binding violation: two openings of the masked target differ")

    mask = expand_mask(r0.seed, inst.degree)
    shuffled_witness = Permutation(tuple_sub(r0.masked_witness, mask))
    shuffled_target = Permutation(tuple_sub(r1.masked_target, mask))
    shuffle = compose(shuffled_target, inverse(inst.target))
    return compose(inverse(shuffle), shuffled_witness)


# --- cheating provers ---

def _commit_tuples(inst, z1, z2, seed, rng):
    c1, o1 = commit(encode_tuple(z1), "C1", rng)
    c2, o2 = commit(encode_tuple(z2), "C2", rng)
    c3, o3 = commit(seed, "C3", rng)
    msg = CommitmentMsg(c1, c2, c3)

    def responder(ch: int) -> Response:
        if ch == 0:
            return Response(kind=0, masked_witness=z1, seed=seed, open_witness=o1, open_seed=o3)
        if ch == 1:
            return Response(kind=1, masked_target=z2, seed=seed, open_target=o2, open_seed=o3)
        return Response(kind=2, masked_witness=z1, masked_target=z2, open_witness=o1, open_target=o2)

    return RewindableProver(msg, responder)


def _noise_tuple(n: int, k: int, rng: Random) -> tuple[int, ...]:
    """A length-n tuple with exactly k nonzero u32 entries at random positions."""
    noise = [0] * n
    for pos in rng.sample(range(n), k):
        noise[pos] = rng.randrange(1, 1 << 32)
    return tuple(noise)


def make_cheating_prover(inst: SDPInstance, targets: frozenset[int] | set[int], rng: Random) -> RewindableProver:
    """A witness-less prover whose state passes exactly the two challenges
    in `targets`.

    {0,1}: commit honestly but with a fake witness drawn from H; both
    membership challenges pass, and the distance challenge fails as long as
    the fake sits further than the bound from the target (resampled until
    it does).  {0,2} / {1,2}: put a real group element behind the covered
    membership challenge and derive the other masked tuple by adding noise
    of weight exactly k, so the distance challenge passes while the
    uncovered membership challenge unmasks to garbage.

    Raises ValueError if, after bounded resampling, some state refuses to
    fail its third challenge (possible only for tiny or degenerate groups).
    """
    targets = frozenset(targets)
    if targets not in (frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})):
        raise ValueError(f"targets must be two distinct challenges, got {sorted(targets)}")
    n, k = inst.degree, inst.max_distance
    group: BSGS = inst.group

    for _ in range(_RESAMPLE_BOUND):
        seed = fresh_seed(rng)
        mask = expand_mask(seed, n)
        if targets == frozenset({0, 1}):
            fake = group.sample_uniform(rng)
            if hamming(fake, inst.target) <= k:
                continue
            shuffle = group.sample_uniform(rng)
            z1 = tuple_add(compose(shuffle, fake).images, mask)
            z2 = tuple_add(compose(shuffle, inst.target).images, mask)
        elif targets == frozenset({0, 2}):
            member = group.sample_uniform(rng)
            z1 = tuple_add(member.images, mask)
            z2 = tuple_add(z1, _noise_tuple(n, k, rng))
        else:
            member = group.sample_uniform(rng)
            z2 = tuple_add(compose(member, inst.target).images, mask)
            z1 = tuple_add(z2, _noise_tuple(n, k, rng))
        prover = _commit_tuples(inst, z1, z2, seed, rng)
        if accepted_challenges(inst, prover) == targets:
            return prover
    raise ValueError(f"could not build a cheating state for {sorted(targets)} on this instance")


def cheating_acceptance_rate(inst: SDPInstance, targets, rounds: int, rng: Random) -> float:
    """Fraction of uniformly-challenged rounds a fresh cheating state survives."""
    hits = 0
    for _ in range(rounds):
        prover = make_cheating_prover(inst, targets, rng)
        ch = verifier_challenge(rng)
        if verify_round(inst, prover.commitment, ch, prover.respond(ch)):
            hits += 1
    return hits / rounds


def amplified_cheating_accepts(inst: SDPInstance, targets, rounds: int, trials: int, rng: Random) -> int:
    """How many of `trials` sequential sessions of `rounds` rounds a cheater wins.

    Each round uses a fresh cheating state; a session is won only if every
    round verifies, so the expected win rate is (2/3)^rounds."""
    wins = 0
    for _ in range(trials):
        for _ in range(rounds):
            prover = make_cheating_prover(inst, targets, rng)
            ch = verifier_challenge(rng)
            if not verify_round(inst, prover.commitment, ch, prover.respond(ch)):
                break
        else:
            wins += 1
    return wins


# --- simulation ---

def honest_verifier(rng: Random) -> VerifierOracle:
    """Oracle that ignores the commitment and challenges uniformly."""
    return lambda _msg: verifier_challenge(rng)


def _simulated_state(inst: SDPInstance, guess: int, rng: Random, vary_distance: bool):
    """Fake tuple pair for one attempt.  guess in {0,1} plants a uniform
    group element (both membership challenges will verify); guess 2 plants
    a pair at Hamming distance k' <= k (the distance challenge verifies)."""
    if guess < 2:
        fake = inst.group.sample_uniform(rng)
        left = fake
        right = compose(fake, inst.target)
    else:
        k = inst.max_distance
        if vary_distance:
            choices = [0] + list(range(2, k + 1))
            k = choices[rng.randrange(len(choices))]
        left = compose(random_support_perm(inst.degree, k, rng), inst.target)
        right = inst.target
    seed = fresh_seed(rng)
    mask = expand_mask(seed, inst.degree)
    z1 = tuple_add(left.images, mask)
    z2 = tuple_add(right.images, mask)
    return _commit_tuples(inst, z1, z2, seed, rng)


def simulate(
    inst: SDPInstance,
    verifier: VerifierOracle,
    max_rewinds: int,
    rng: Random,
    vary_distance: bool = False,
) -> Transcript | None:
    """Produce an accepting transcript against `verifier` without a witness.

    Guess which kind of challenge is coming, prepare a state that survives
    it, and query the verifier; on a bad guess, rewind and retry.  A guess
    in {0,1} covers both membership challenges, so each attempt succeeds
    with probability 5/9 against an honest verifier, and all attempts
    failing (probability at most (4/9)^max_rewinds) yields None.
    """
    if max_rewinds < 1:
        raise ValueError("need at least one attempt")
    for _ in range(max_rewinds):
        guess = rng.randrange(3)
        prover = _simulated_state(inst, guess, rng, vary_distance)
        ch = verifier(prover.commitment)
        if ch not in (0, 1, 2):
            raise ValueError(f"verifier oracle returned invalid challenge {ch!r}")
        if (guess < 2 and ch < 2) or (guess == 2 and ch == 2):
            return Transcript(prover.commitment, ch, prover.respond(ch))
    return None


def simulator_attempt_success_rate(inst: SDPInstance, attempts: int, rng: Random) -> float:
    """Empirical per-attempt success probability against an honest verifier."""
    verifier = honest_verifier(rng)
    hits = sum(1 for _ in range(attempts) if simulate(inst, verifier, 1, rng) is not None)
    return hits / attempts


def simulator_abort_rate(inst: SDPInstance, max_rewinds: int, runs: int, rng: Random) -> float:
    verifier = honest_verifier(rng)
    aborts = sum(1 for _ in range(runs) if simulate(inst, verifier, max_rewinds, rng) is None)
    return aborts / runs


# --- distribution comparison ---

@dataclass
class DistributionReport:
    """Real-versus-simulated transcript statistics.

    The headline statistic is the chi-square comparison of the unmasked
    challenge-0 permutation over H.  Challenge marginals are reported for
    information: a rewinding simulator's surviving attempts are biased
    toward the challenges its guess covers, so against an honest verifier
    the simulated marginal is (2/5, 2/5, 1/5), not uniform; this is a
    property of the rewinding strategy, visible here by design.
    """

    group_order: int
    samples_real: int
    samples_simulated: int
    statistic: float
    p_value: float
    passed: bool
    challenge_counts_real: dict[int, int] = field(default_factory=dict)
    challenge_counts_simulated: dict[int, int] = field(default_factory=dict)
    acceptance_rate_real: float = 1.0
    acceptance_rate_simulated: float = 1.0
    distance_weights_real: dict[int, int] = field(default_factory=dict)
    distance_weights_simulated: dict[int, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "experiment": "distribution",
            "samples": self.samples_real,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "pass": self.passed,
            "details": {
                "group_order": self.group_order,
                "samples_simulated": self.samples_simulated,
                "challenge_counts_real": self.challenge_counts_real,
                "challenge_counts_simulated": self.challenge_counts_simulated,
                "acceptance_rate_real": self.acceptance_rate_real,
                "acceptance_rate_simulated": self.acceptance_rate_simulated,
                "distance_weights_real": self.distance_weights_real,
                "distance_weights_simulated": self.distance_weights_simulated,
            },
        }


def _unmasked_challenge0(inst: SDPInstance, t: Transcript) -> Permutation:
    mask = expand_mask(t.response.seed, inst.degree)
    return Permutation(tuple_sub(t.response.masked_witness, mask))


def transcript_distribution_test(
    inst: SDPInstance,
    wit: Witness,
    samples: int,
    rng: Random,
    max_order: int = 120,
    alpha: float = 0.001,
) -> DistributionReport:
    """Compare real and simulated transcripts on a small group.

    Draws `samples` transcripts per side (real: honest prover and verifier;
    simulated: rewinding simulator with enough attempts that aborts are
    negligible), then chi-square-tests whether the unmasked challenge-0
    permutation is identically distributed over H on both sides.
    """
    from scipy.stats import chi2_contingency

    order = inst.group.order()
    if order > max_order:
        raise ValueError(f"group order {order} exceeds the test bound {max_order}")
    if samples < 10 * order:
        raise ValueError("too few samples for a meaningful comparison")

    index = {p.images: i for i, p in enumerate(inst.group.elements(max_order))}
    real_counts = [0] * order
    sim_counts = [0] * order
    real_ch = Counter()
    sim_ch = Counter()
    real_weights = Counter()
    sim_weights = Counter()
    real_ok = 0
    sim_ok = 0

    for _ in range(samples):
        state, com = prover_commit(inst, wit, rng)
        ch = verifier_challenge(rng)
        t = Transcript(com, ch, prover_respond(state, ch))
        real_ch[ch] += 1
        if verify_round(inst, com, ch, t.response):
            real_ok += 1
        if ch == 0:
            real_counts[index[_unmasked_challenge0(inst, t).images]] += 1
        elif ch == 2:
            real_weights[weight(tuple_sub(t.response.masked_witness, t.response.masked_target))] += 1

    verifier = honest_verifier(rng)
    produced = 0
    while produced < samples:
        t = simulate(inst, verifier, 64, rng)
        if t is None:
            continue
        produced += 1
        sim_ch[t.challenge] += 1
        if verify_round(inst, t.commitment, t.challenge, t.response):
            sim_ok += 1
        if t.challenge == 0:
            sim_counts[index[_unmasked_challenge0(inst, t).images]] += 1
        elif t.challenge == 2:
            sim_weights[weight(tuple_sub(t.response.masked_witness, t.response.masked_target))] += 1

    # Drop cells empty on both sides (possible only for tiny samples).
    table = [
        [real_counts[i] for i in range(order) if real_counts[i] + sim_counts[i] > 0],
        [sim_counts[i] for i in range(order) if real_counts[i] + sim_counts[i] > 0],
    ]
    stat, p_value, _, _ = chi2_contingency(table)

    return DistributionReport(
        group_order=order,
        samples_real=samples,
        samples_simulated=produced,
        statistic=float(stat),
        p_value=float(p_value),
        passed=bool(p_value > alpha),
        challenge_counts_real=dict(sorted(real_ch.items())),
        challenge_counts_simulated=dict(sorted(sim_ch.items())),
        acceptance_rate_real=real_ok / samples,
        acceptance_rate_simulated=sim_ok / produced,
        distance_weights_real=dict(sorted(real_weights.items())),
        distance_weights_simulated=dict(sorted(sim_weights.items())),
    )


def uniformity_pvalue(counts: dict | Counter, total_categories: int) -> float:
    """One-sample chi-square p-value of counts against the uniform law."""
    from scipy.stats import chisquare

    observed = [counts.get(i, 0) for i in range(total_categories)]
    _, p = chisquare(observed)
    return float(p)


def binomial_two_sided_pvalue(hits: int, trials: int, p: float) -> float:
    """Normal-approximation two-sided p-value for an observed hit count."""
    from scipy.stats import norm

    sd = math.sqrt(p * (1 - p) / trials)
    z = (hits / trials - p) / sd
    return float(2 * norm.sf(abs(z)))
