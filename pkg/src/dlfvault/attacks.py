"""Attack analysis: the published success-probability formulas, an exact
combinatorial oracle, a Monte Carlo estimator, a brute-force unlock
harness, and a baby-step giant-step discrete-log solver for desk-scale
parameters.

The published formulas are reproduced exactly as printed, including the
regime where they exceed 1 and stop being probabilities; reports flag
that in their notes next to the exact value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import BadArguments, NotInGroup
from .field import PrimeField
from .vault import DEFAULT_MAX_SUBSETS, Vault, _subset_search

_MASK64 = (1 << 64) - 1

CSV_HEADER = "r,t,n,paper_eq30,exact,empirical,stderr,trials"


def published_point_ratio(r: int, t: int) -> float:
    """The printed per-point ratio r / (r - t); above 1 whenever chaff exists."""
    if r == t:
        raise ZeroDivisionError("published ratio is undefined at r = t")
    return r / (r - t)


def published_poly_prob(r: int, t: int, n: int) -> float:
    """The printed polynomial-recovery figure (r / (r - t)) ** n.

    Not a probability: it grows past 1 as soon as chaff is scarce.
    Compare against exact_success_prob for the real chance.
    """
    if r == t:
        raise ZeroDivisionError("published formula is undefined at r = t")
    return (r / (r - t)) ** n


def exact_success_prob(r: int, t: int, n: int) -> Fraction:
    """Probability that n points drawn uniformly without replacement from
    r vault points are all among the t genuine ones: C(t,n) / C(r,n)."""
    if not 0 <= n <= t <= r:
        raise BadArguments(f"need 0 <= n <= t <= r, got r={r} t={t} n={n}")
    return Fraction(math.comb(t, n), math.comb(r, n))


def _splitmix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def _draw(seed: int, index: int, bound: int) -> int:
    # pure function of (seed, index): trials are independent of iteration
    # order and can be recomputed or partitioned freely
    z = _splitmix64(((seed & _MASK64) * 0xD1342543DE82EF95 + index + 1) & _MASK64)
    return z % bound


def _sample_distinct(seed: int, trial: int, n: int, r: int) -> set[int]:
    # Floyd's uniform n-subset of range(r); at most 2^16 draws per trial
    base = trial << 16
    taken = set()
    for step, j in enumerate(range(r - n, r)):
        x = _draw(seed, base + step, j + 1)
        if x in taken:
            x = j
        taken.add(x)
    return taken


def monte_carlo_rate(r: int, t: int, n: int, trials: int, seed: int) -> tuple[float, float]:
    """Estimate exact_success_prob empirically; returns (rate, standard error).

    Treats the genuine points as indices 0..t-1, which costs no
    generality under uniform sampling. Each trial is a pure function of
    (seed, trial index).
    """
    if not 0 <= n <= t <= r:
        raise BadArguments(f"need 0 <= n <= t <= r, got r={r} t={t} n={n}")
    if trials <= 0:
        raise BadArguments("trials must be positive")
    if n.bit_length() > 16:
        raise BadArguments("subset size does not fit the per-trial draw budget")
    successes = 0
    for trial in range(trials):
        if max(_sample_distinct(seed, trial, n, r), default=-1) < t:
            successes += 1
    rate = successes / trials
    stderr = math.sqrt(rate * (1.0 - rate) / trials)
    return rate, stderr


@dataclass
class AttackReport:
    """One (r, t, n) analysis: published figures, exact oracle, empirical rate."""

    r: int
    t: int
    n: int
    published_point_ratio: float
    published_poly_prob: float
    exact_prob: Fraction
    empirical_rate: float
    empirical_stderr: float
    trials: int
    notes: list[str] = dc_field(default_factory=list)

    def to_text(self) -> str:
        lines = [
            f"r={self.r}",
            f"t={self.t}",
            f"n={self.n}",
            f"point_ratio={self.published_point_ratio!r}",
            f"paper_eq30={self.published_poly_prob!r}",
            f"exact={self.exact_prob}",
            f"empirical={self.empirical_rate!r}",
            f"stderr={self.empirical_stderr!r}",
            f"trials={self.trials}",
        ]
        lines.extend(f"note={note}" for note in self.notes)
        return "\n".join(lines) + "\n"

    def to_csv_row(self) -> str:
        return (f"{self.r},{self.t},{self.n},{self.published_poly_prob!r},"
                f"{self.exact_prob},{self.empirical_rate!r},"
                f"{self.empirical_stderr!r},{self.trials}")


def attack_report(r: int, t: int, n: int, trials: int, seed: int) -> AttackReport:
    """Run every analysis route at one parameter point."""
    if not 0 <= n <= t < r:
        raise BadArguments(f"need 0 <= n <= t < r, got r={r} t={t} n={n}")
    ratio = published_point_ratio(r, t)
    poly = published_poly_prob(r, t, n)
    exact = exact_success_prob(r, t, n)
    rate, stderr = monte_carlo_rate(r, t, n, trials, seed)
    notes = []
    if ratio > 1.0:
        notes.append(f"point ratio {ratio!r} exceeds 1; reported as printed, not a probability")
    if poly > 1.0:
        notes.append(f"paper_eq30 {poly!r} exceeds 1; the exact probability is {float(exact)!r}")
    return AttackReport(r=r, t=t, n=n, published_point_ratio=ratio,
                        published_poly_prob=poly, exact_prob=exact,
                        empirical_rate=rate, empirical_stderr=stderr,
                        trials=trials, notes=notes)


def sweep_csv(reports: list[AttackReport]) -> str:
    """The pinned CSV layout, one row per report."""
    return "\n".join([CSV_HEADER] + [rep.to_csv_row() for rep in reports]) + "\n"


@dataclass
class BruteForceResult:
    succeeded: bool
    subsets_tried: int
    message: bytes | None = None


def brute_force_unlock_attack(vault: Vault, key_file=None,
                              max_subsets: int = DEFAULT_MAX_SUBSETS) -> BruteForceResult:
    """Attempt to open a vault with no unlocking set at all.

    Every vault point is a candidate, so this walks subsets in
    lexicographic x order until the framing digest verifies or the
    budget runs out. Without the key file, coefficients are read as raw
    segments, which can only succeed against classical vaults; with it,
    this measures how little the chaff alone protects.
    """
    candidates = sorted(vault.points)
    message, tried = _subset_search(vault, candidates, key_file, max_subsets)
    return BruteForceResult(succeeded=message is not None, subsets_tried=tried,
                            message=message)


def solve_dlog_bsgs(target: int, params: PrimeField) -> int:
    """Smallest k with alpha^k = target in F_p, by baby-step giant-step.

    O(sqrt(p)) time and memory; refuses p above 2^40 where the baby
    table stops being a desk-scale object.
    """
    if params.p > 1 << 40:
        raise BadArguments("p above 2^40 is out of range for the table-based solver")
    if target % params.p == 0:
        raise NotInGroup("0 is outside the multiplicative group")
    target %= params.p
    order = params.p - 1
    m = math.isqrt(order - 1) + 1 if order > 1 else 1
    baby = {}
    acc = 1
    for j in range(m):
        baby.setdefault(acc, j)
        acc = params.mul(acc, params.alpha)
    # acc is now alpha^m
    giant = params.inv(acc)
    gamma = target
    for i in range(m):
        j = baby.get(gamma)
        if j is not None:
            return i * m + j
        gamma = params.mul(gamma, giant)
    raise NotInGroup(f"{target} is not a power of alpha")
