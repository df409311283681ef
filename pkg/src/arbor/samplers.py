"""Samplers for random plane trees and their spine functionals.

Three families live here:

* size-biased degree machinery: draw the degree multiset in size-biased
  order and stop at accept/reject thresholds.  `sample_mark_height` returns
  the depth of a uniform mark in a uniform tree without ever building the
  tree; `sample_stopping_index` is the strict-threshold variant whose tail
  dominates the mark height.
* a Poisson-process reformulation of the stopping index
  (`sample_stopping_index_poissonized`): degrees become subintervals of
  [0, 1), arrivals of a rate-one process hit them, and the index is read off
  the record structure at the first "repeat" arrival.
* direct tree construction: uniform trees with fixed degree statistics via
  shuffle-and-rotate, and conditioned branching-process trees via rejection
  on the degree sum.

Each sampler has an exact-law oracle in `enumeration` (or a closed form) and
the tests compare the two; the `_batch` variants are vectorised re-
implementations used for large Monte Carlo runs and are tested against both
the sequential versions and the exact laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import zeta as _hurwitz

from .errors import (AttemptsExhausted, InvalidDistribution, InvalidStatistics,
                     ZeroPartition)
from .rng import RngStream
from .trees import DegreeStatistics, MarkedTree, PlaneTree, build_tree

_STRETCHED_CUTOFF = 20_000  # exp(-sqrt(k)) is below 1e-60 past this


# ---------------------------------------------------------------------------
# size-biased degree order and threshold samplers
# ---------------------------------------------------------------------------

class _Urn:
    """Degree buckets drawn with probability proportional to degree * count."""

    def __init__(self, stats: DegreeStatistics):
        self.buckets = [[c, k] for c, k in stats.sorted_items() if c > 0]
        self.weight = sum(c * k for c, k in self.buckets)

    def draw(self, gen: np.random.Generator) -> int:
        """Next size-biased degree; 0 once every positive degree is used."""
        if self.weight == 0:
            return 0
        u = gen.uniform(0.0, self.weight)
        acc = 0.0
        for bucket in self.buckets:
            acc += bucket[0] * bucket[1]
            if u < acc or bucket is self.buckets[-1]:
                if bucket[1] == 0:
                    continue
                bucket[1] -= 1
                self.weight -= bucket[0]
                return bucket[0]
        raise AssertionError("unreachable")


def sample_size_biased_order(stats: DegreeStatistics, rng: RngStream) -> tuple[int, ...]:
    """The degree multiset in size-biased random order.

    Step k picks degree d with probability d * (remaining count of d) divided
    by the remaining edge total; once that total hits zero only zeroes are
    left and they are appended in place.
    """
    urn = _Urn(stats)
    n = stats.n
    out: list[int] = []
    while len(out) < n and urn.weight > 0:
        out.append(urn.draw(rng.gen))
    out.extend([0] * (n - len(out)))
    return tuple(out)


def sample_mark_height(stats: DegreeStatistics, rng: RngStream) -> int:
    """Depth of a uniform mark in a uniform tree with these statistics.

    Walks the size-biased degrees D_1, D_2, ... and accepts index i with
    probability (1 + sum_{j<i} (D_j - 1)) / (n + 1 - i); the returned height
    is one less than the first accepted index.  Ties (U equal to the
    threshold) count as accepted.
    """
    if stats.a != 1:
        raise InvalidStatistics("mark height needs single-tree statistics")
    gen = rng.gen
    urn = _Urn(stats)
    n = stats.n
    s = 0
    for i in range(1, n + 1):
        if gen.uniform() <= (1 + s) / (n + 1 - i):
            return i - 1
        s += urn.draw(gen) - 1
    return n - 1  # unreachable: the threshold at i = n equals one


def sample_stopping_index(stats: DegreeStatistics, rng: RngStream) -> int:
    """Strict-threshold stopping index; stochastically dominates M = height+1.

    Index i fires with probability sum_{j<i} (D_j - 1) / (n - i) for
    i = 1..n-1.  For path statistics no threshold can ever fire and the
    sentinel value n is returned (the distributional point at infinity).
    """
    if stats.a != 1:
        raise InvalidStatistics("stopping index needs single-tree statistics")
    gen = rng.gen
    urn = _Urn(stats)
    n = stats.n
    s = 0
    for i in range(1, n):
        if gen.uniform() <= s / (n - i):
            return i
        s += urn.draw(gen) - 1
    return n


def _positive_degree_items(stats: DegreeStatistics) -> np.ndarray:
    items = []
    for c, k in stats.sorted_items():
        if c > 0:
            items.extend([c] * k)
    return np.array(items, dtype=np.int64)


def _size_biased_matrix(stats: DegreeStatistics, gen: np.random.Generator,
                        rows: int) -> np.ndarray:
    """rows x n matrix of independent size-biased degree orders.

    Size-biased sampling without replacement is an exponential race: item i
    finishes at Exp(1) / weight_i and the finish order is the sample order.
    Zero-weight items never finish, matching the all-zeroes suffix.
    """
    n = stats.n
    pos = _positive_degree_items(stats)
    m = len(pos)
    out = np.zeros((rows, n), dtype=np.int64)
    if m:
        keys = gen.exponential(size=(rows, m)) / pos
        order = np.argsort(keys, axis=1)
        out[:, :m] = pos[order]
    return out


def _batch_rows(n: int) -> int:
    return max(1, 2_000_000 // max(n, 1))


def sample_mark_height_batch(stats: DegreeStatistics, rng: RngStream,
                             reps: int) -> np.ndarray:
    """Vectorised `sample_mark_height`; returns an int array of length reps."""
    if stats.a != 1:
        raise InvalidStatistics("mark height needs single-tree statistics")
    gen = rng.gen
    n = stats.n
    idx = np.arange(1, n + 1)
    out = np.empty(reps, dtype=np.int64)
    done = 0
    while done < reps:
        rows = min(_batch_rows(n), reps - done)
        d = _size_biased_matrix(stats, gen, rows)
        prev = np.cumsum(d - 1, axis=1) - (d - 1)  # sum over j < i
        thr = (1.0 + prev) / (n + 1 - idx)
        accept = gen.uniform(size=(rows, n)) <= thr
        out[done:done + rows] = accept.argmax(axis=1)  # first accept, minus 1
        done += rows
    return out


def sample_stopping_index_batch(stats: DegreeStatistics, rng: RngStream,
                                reps: int) -> np.ndarray:
    """Vectorised `sample_stopping_index` (sentinel n when nothing fires)."""
    if stats.a != 1:
        raise InvalidStatistics("stopping index needs single-tree statistics")
    gen = rng.gen
    n = stats.n
    out = np.full(reps, n, dtype=np.int64)
    if n == 1:
        return out
    idx = np.arange(1, n)
    done = 0
    while done < reps:
        rows = min(_batch_rows(n), reps - done)
        d = _size_biased_matrix(stats, gen, rows)[:, :n - 1]
        prev = np.cumsum(d - 1, axis=1) - (d - 1)
        thr = prev / (n - idx)
        fired = gen.uniform(size=(rows, n - 1)) <= thr
        any_fire = fired.any(axis=1)
        first = fired.argmax(axis=1) + 1
        chunk = np.full(rows, n, dtype=np.int64)
        chunk[any_fire] = first[any_fire]
        out[done:done + rows] = chunk
        done += rows
    return out


# ---------------------------------------------------------------------------
# Poisson-process reformulation of the stopping index
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoissonRun:
    """Transcript of one Poissonised stopping-index draw.

    arrivals: (time, position) pairs actually generated, in order
    interval_ids: 1-based index of the interval containing each position
    records: arrival indices that hit a previously untouched interval
    tau: first arrival index landing in the left part of an occupied
         interval, or None when no such arrival can exist (path statistics)
    sigma: 1 + number of records before tau; equals the stopping index law
    """

    arrivals: tuple[tuple[float, float], ...]
    interval_ids: tuple[int, ...]
    records: tuple[int, ...]
    tau: int | None
    sigma: int


def _interval_layout(stats: DegreeStatistics):
    """Sorted-degree interval boundaries and left-part ends on [0, 1).

    Interval i (1-based) has length d_i / (n - 1) with the degrees in
    non-decreasing order; its left part is the first (d_i - 1) / (n - 1).
    """
    degrees = []
    for c, k in stats.sorted_items():
        degrees.extend([c] * k)
    d = np.array(sorted(degrees), dtype=np.int64)
    n = len(d)
    if n < 2:
        raise InvalidStatistics("need at least two nodes for the interval layout")
    cums = np.concatenate([[0], np.cumsum(d)])
    bounds = cums / (n - 1)
    left_end = (cums[:-1] + np.maximum(d - 1, 0)) / (n - 1)
    return d, bounds, left_end


def sample_stopping_index_poissonized(stats: DegreeStatistics,
                                      rng: RngStream) -> PoissonRun:
    """One stopping-index draw through the Poisson interval construction.

    Atoms are generated lazily and the walk stops at the first repeat
    arrival (tau).  The sigma field has the same law as
    `sample_stopping_index`; for path statistics tau is unreachable and the
    walk stops once every positive-length interval has been hit, giving the
    same sentinel value n.
    """
    if stats.a != 1:
        raise InvalidStatistics("stopping index needs single-tree statistics")
    gen = rng.gen
    d, bounds, left_end = _interval_layout(stats)
    m = int(np.count_nonzero(d))
    no_left_parts = stats.max_degree <= 1
    arrivals: list[tuple[float, float]] = []
    interval_ids: list[int] = []
    records: list[int] = []
    hit: set[int] = set()
    time = 0.0
    tau: int | None = None
    for ell in range(1, 10_000_001):
        time += gen.exponential()
        u = gen.uniform()
        arrivals.append((time, u))
        j = int(np.searchsorted(bounds, u, side="right"))
        interval_ids.append(j)
        if j in hit:
            if u < left_end[j - 1]:
                tau = ell
                break
        else:
            hit.add(j)
            records.append(ell)
            if no_left_parts and len(hit) == m:
                break
    else:
        raise RuntimeError("poisson walk failed to terminate")
    return PoissonRun(tuple(arrivals), tuple(interval_ids), tuple(records),
                      tau, 1 + len(records))


def sample_stopping_index_poissonized_batch(
        stats: DegreeStatistics, rng: RngStream,
        reps: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised Poissonised draws.

    Returns (sigma, tau) arrays; tau is np.inf where no repeat arrival can
    occur.  Only the uniform positions matter for these two functionals, so
    no arrival times are generated.
    """
    if stats.a != 1:
        raise InvalidStatistics("stopping index needs single-tree statistics")
    gen = rng.gen
    d, bounds, left_end = _interval_layout(stats)
    n = len(d)
    m = int(np.count_nonzero(d))
    no_left_parts = stats.max_degree <= 1
    sigma = np.zeros(reps, dtype=np.int64)
    tau = np.full(reps, np.inf)
    hit = np.zeros((reps, n + 1), dtype=bool)
    nrec = np.zeros(reps, dtype=np.int64)
    alive = np.arange(reps)
    for step in range(1, 1_000_001):
        if alive.size == 0:
            return sigma, tau
        u = gen.uniform(size=alive.size)
        j = np.searchsorted(bounds, u, side="right")
        was_hit = hit[alive, j]
        fires = was_hit & (u < left_end[j - 1])
        new = ~was_hit
        hit[alive[new], j[new]] = True
        nrec[alive[new]] += 1
        sigma[alive[fires]] = nrec[alive[fires]] + 1
        tau[alive[fires]] = step
        retire = fires
        if no_left_parts:
            full = nrec[alive] == m
            sigma[alive[full]] = m + 1
            retire = retire | full
        alive = alive[~retire]
    raise RuntimeError("poisson walk failed to terminate")


# ---------------------------------------------------------------------------
# direct tree construction
# ---------------------------------------------------------------------------

def rotate_to_valid_word(degrees: Sequence[int]) -> tuple[int, ...]:
    """The unique cyclic rotation of a degree multiset arrangement that is a
    valid preorder degree word (cycle lemma, single-tree case)."""
    d = np.asarray(degrees, dtype=np.int64)
    walk = np.cumsum(d - 1)
    j = int(np.argmin(walk))  # first position attaining the minimum
    rotated = np.concatenate([d[j + 1:], d[:j + 1]])
    return tuple(int(x) for x in rotated)


def sample_uniform_tree(stats: DegreeStatistics, rng: RngStream) -> PlaneTree:
    """Uniform plane tree with the given degree statistics: shuffle the
    degree multiset, then rotate to the valid word."""
    if stats.a != 1:
        raise InvalidStatistics("uniform tree sampling needs a = 1")
    degrees = []
    for c, k in stats.sorted_items():
        degrees.extend([c] * k)
    perm = rng.gen.permutation(np.array(degrees, dtype=np.int64))
    return build_tree(rotate_to_valid_word(perm))


def sample_uniform_marked_tree(stats: DegreeStatistics, rng: RngStream) -> MarkedTree:
    """Uniform tree plus an independent uniform mark."""
    tree = sample_uniform_tree(stats, rng)
    mark = int(rng.gen.integers(0, tree.n))
    return MarkedTree(tree, mark)


# ---------------------------------------------------------------------------
# offspring distributions and conditioned branching-process trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OffspringDistribution:
    """A probability law on {0, 1, 2, ...} used as an offspring distribution.

    Either explicit masses (kind "explicit") or a parametric family with an
    infinite tail evaluated by formula.  Instances are plain data and pickle
    cleanly, so they can cross process boundaries in parallel runs.
    """

    kind: str
    params: tuple
    masses: tuple[float, ...] | None = None
    label: str = ""

    @classmethod
    def from_masses(cls, masses, label: str = "explicit",
                    renormalize: bool = False) -> "OffspringDistribution":
        if isinstance(masses, dict):
            top = max(int(k) for k in masses)
            vec = [0.0] * (top + 1)
            for k, v in masses.items():
                vec[int(k)] = float(v)
        else:
            vec = [float(v) for v in masses]
        if any(v < 0 for v in vec):
            raise InvalidDistribution("negative offspring mass")
        total = sum(vec)
        if renormalize:
            if total <= 0:
                raise InvalidDistribution("offspring masses sum to zero")
            vec = [v / total for v in vec]
        elif abs(total - 1.0) > 1e-12:
            raise InvalidDistribution(f"offspring masses sum to {total!r}")
        if not vec or vec[0] <= 0:
            raise InvalidDistribution("offspring law needs positive mass at zero")
        return cls("explicit", (), tuple(vec), label)

    @classmethod
    def geometric(cls, p: float) -> "OffspringDistribution":
        if not 0 < p <= 1:
            raise InvalidDistribution("geometric parameter must be in (0, 1]")
        return cls("geometric", (float(p),), None, f"geometric({p})")

    @classmethod
    def power_law(cls, alpha: float, mean: float,
                  start: int = 1) -> "OffspringDistribution":
        """mu(k) = coef * k^-alpha for k >= start, remainder at zero.

        coef is set so the mean is exactly `mean`; requires alpha > 2.
        """
        if alpha <= 2:
            raise InvalidDistribution("power-law mean diverges for alpha <= 2")
        coef = mean / float(_hurwitz(alpha - 1, start))
        mass = coef * float(_hurwitz(alpha, start))
        if mass >= 1:
            raise InvalidDistribution("power-law tail mass reaches one")
        return cls("power_law", (float(alpha), float(coef), int(start), float(mean)),
                   None, f"power_law(alpha={alpha}, mean={mean}, start={start})")

    @classmethod
    def stretched_exp(cls, mean: float) -> "OffspringDistribution":
        """mu(k) = coef * exp(-sqrt(k)) for k >= 1: every exponential moment
        is infinite, which is the heavier-than-exponential tail class."""
        k = np.arange(1, _STRETCHED_CUTOFF)
        w = np.exp(-np.sqrt(k))
        coef = mean / float(np.dot(k, w))
        mass = coef * float(np.sum(w))
        if mass >= 1:
            raise InvalidDistribution("stretched tail mass reaches one")
        return cls("stretched", (float(coef), float(mean)), None,
                   f"stretched_exp(mean={mean})")

    @classmethod
    def anchored_heavy(cls, anchor: int, anchor_mass: float, tail_start: int,
                       tail_mean: float, alpha: float = 2.5) -> "OffspringDistribution":
        """An atom at `anchor` plus a k^-alpha tail from `tail_start` on.

        The atom supplies most of the mean and a guaranteed second-moment
        floor at moderate n; the tail makes the second moment infinite, so
        the law stays in the infinite-variance class.
        """
        coef = tail_mean / float(_hurwitz(alpha - 1, tail_start))
        tail_mass = coef * float(_hurwitz(alpha, tail_start))
        if anchor_mass + tail_mass >= 1:
            raise InvalidDistribution("anchored tail leaves no mass at zero")
        return cls("anchored", (int(anchor), float(anchor_mass), int(tail_start),
                                float(coef), float(alpha), float(tail_mean)),
                   None, f"anchored(anchor={anchor}, tail_start={tail_start})")

    @classmethod
    def near_path(cls, eps: float) -> "OffspringDistribution":
        """mu(1) = 1 - eps, mu(0) = mu(2) = eps / 2: critical, variance eps."""
        if not 0 < eps <= 1:
            raise InvalidDistribution("eps must lie in (0, 1]")
        return cls.from_masses([eps / 2, 1 - eps, eps / 2],
                               label=f"near_path(eps={eps})")

    def masses_upto(self, top: int) -> np.ndarray:
        """Masses mu(0..top) as a float vector (not renormalised)."""
        k = np.arange(top + 1)
        if self.kind == "explicit":
            out = np.zeros(top + 1)
            upto = min(top + 1, len(self.masses))
            out[:upto] = self.masses[:upto]
            return out
        if self.kind == "geometric":
            p = self.params[0]
            return p * (1 - p) ** k
        if self.kind == "power_law":
            alpha, coef, start, _ = self.params
            out = np.zeros(top + 1)
            out[start:] = coef * np.arange(start, top + 1, dtype=float) ** -alpha
            out[0] = max(0.0, 1.0 - coef * float(_hurwitz(alpha, start)))
            return out
        if self.kind == "stretched":
            coef, _ = self.params
            out = np.zeros(top + 1)
            out[1:] = coef * np.exp(-np.sqrt(k[1:]))
            out[0] = 1.0 - coef * float(np.sum(
                np.exp(-np.sqrt(np.arange(1, _STRETCHED_CUTOFF)))))
            return out
        if self.kind == "anchored":
            anchor, anchor_mass, tail_start, coef, alpha, _ = self.params
            out = np.zeros(top + 1)
            if tail_start <= top:
                out[tail_start:] = coef * np.arange(
                    tail_start, top + 1, dtype=float) ** -alpha
            if anchor <= top:
                out[anchor] += anchor_mass
            out[0] = 1.0 - anchor_mass - coef * float(_hurwitz(alpha, tail_start))
            return out
        raise ValueError(f"unknown offspring kind {self.kind}")

    def mass(self, k: int) -> float:
        return float(self.masses_upto(k)[k])

    def mean(self) -> float:
        if self.kind == "explicit":
            return float(sum(i * m for i, m in enumerate(self.masses)))
        if self.kind == "geometric":
            p = self.params[0]
            return (1 - p) / p
        if self.kind == "power_law":
            return self.params[3]
        if self.kind == "stretched":
            return self.params[1]
        if self.kind == "anchored":
            anchor, anchor_mass, _, _, _, tail_mean = self.params
            return anchor * anchor_mass + tail_mean
        raise ValueError(f"unknown offspring kind {self.kind}")

    def to_jsonable(self) -> dict:
        if self.kind == "explicit":
            return {str(i): m for i, m in enumerate(self.masses) if m}
        return {"family": self.kind, "params": list(self.params),
                "label": self.label}

    @classmethod
    def from_jsonable(cls, obj, renormalize: bool = False) -> "OffspringDistribution":
        """Rebuild a law from to_jsonable output.

        A plain object of degree -> mass is read as explicit masses; an
        object with a "family" key is routed to the matching constructor.
        """
        if not isinstance(obj, dict):
            raise InvalidDistribution("expected a JSON object")
        if "family" not in obj:
            masses = {int(k): float(v) for k, v in obj.items()}
            return cls.from_masses(masses, renormalize=renormalize)
        family = obj["family"]
        params = list(obj.get("params", []))
        if family == "geometric":
            return cls.geometric(params[0])
        if family == "power_law":
            alpha, _, start, mean = params
            return cls.power_law(alpha, mean, int(start))
        if family == "stretched":
            return cls.stretched_exp(params[1])
        if family == "anchored":
            anchor, anchor_mass, tail_start, _, alpha, tail_mean = params
            return cls.anchored_heavy(int(anchor), anchor_mass, int(tail_start),
                                      tail_mean, alpha)
        raise InvalidDistribution(f"unknown offspring family {family!r}")


def sample_conditioned_bienayme(mu: OffspringDistribution, n: int,
                                rng: RngStream,
                                max_attempts: int = 10_000_000) -> PlaneTree:
    """Branching-process tree with offspring law mu conditioned on n nodes.

    Rejection on the degree sum: draw n i.i.d. degrees, accept when they sum
    to n - 1, then rotate into the valid word (every degree sequence has
    exactly one valid rotation and all rotations are equally likely, so the
    accepted tree law is proportional to prod mu(deg)).  Degrees above n - 1
    cannot occur in an n-node tree, so the proposal is truncated there and
    renormalised; that leaves the conditioned law unchanged and only raises
    the acceptance rate.
    """
    if n < 1:
        raise ValueError("need at least one node")
    p = mu.masses_upto(n - 1)
    total = p.sum()
    if total <= 0 or p[0] <= 0:
        raise InvalidDistribution("offspring law has no usable mass below n")
    q = p / total
    gen = rng.gen
    target = n - 1
    attempts = 0
    rows = max(16, min(65_536 // max(n, 1), max_attempts))
    while attempts < max_attempts:
        take = min(rows, max_attempts - attempts)
        draws = gen.choice(len(q), size=(take, n), p=q)
        hits = np.nonzero(draws.sum(axis=1) == target)[0]
        if hits.size:
            return build_tree(rotate_to_valid_word(draws[hits[0]]))
        attempts += take
    raise AttemptsExhausted(
        f"no degree sequence summed to {target} in {max_attempts} attempts"
    )


def conditional_sum_table(mu: OffspringDistribution, n: int) -> np.ndarray:
    """Row m is the law of a sum of m i.i.d. mu-draws on 0..n-1, renormalised.

    Entries above n - 1 are dropped; degrees are nonnegative, so truncation
    never leaks back into the retained range and the kept entries are exact
    up to rounding.  Each row is rescaled to sum to one, which is harmless
    because the sequential sampler only ever uses within-row ratios.
    """
    if n < 1:
        raise ValueError("need at least one node")
    masses = mu.masses_upto(n - 1)
    total = masses.sum()
    if total <= 0 or masses[0] <= 0:
        raise InvalidDistribution("offspring law has no usable mass below n")
    masses = masses / total
    table = np.zeros((n, n))
    table[0, 0] = 1.0
    for m in range(1, n):
        row = np.convolve(table[m - 1], masses)[:n]
        np.clip(row, 0.0, None, out=row)
        table[m] = row / row.sum()
    return table


def sample_conditioned_bienayme_sequential(
        mu: OffspringDistribution, n: int, rng: RngStream,
        table: np.ndarray | None = None) -> PlaneTree:
    """Same law as sample_conditioned_bienayme, built degree by degree.

    Draw D_1, then D_2 given the remaining sum, and so on, each from
    P(D = d) proportional to mu(d) * P(sum of the remaining draws = rest - d).
    Rejection stalls when the conditioned sum sits far in the proposal's
    tail (subcritical heavy-tailed laws at large n, where acceptance decays
    polynomially); this route costs O(n^2) per tree regardless of how
    atypical the total is.  Pass a precomputed `table` from
    conditional_sum_table when drawing many trees at one (mu, n).

    Raises ZeroPartition when no degree sequence can reach the target sum,
    a case the rejection sampler can only burn attempts on.
    """
    if n < 1:
        raise ValueError("need at least one node")
    if n == 1:
        return build_tree((0,))
    if table is None:
        table = conditional_sum_table(mu, n)
    masses = mu.masses_upto(n - 1)
    masses = masses / masses.sum()
    gen = rng.gen
    degrees = np.zeros(n, dtype=np.int64)
    rest = n - 1
    for i in range(n):
        remaining = n - 1 - i
        w = masses[: rest + 1] * table[remaining, rest::-1]
        total = w.sum()
        if total <= 0:
            raise ZeroPartition(
                f"sum {n - 1} is unreachable with this offspring law"
            )
        cdf = np.cumsum(w)
        d = int(np.searchsorted(cdf, gen.uniform() * total, side="right"))
        d = min(d, rest)
        degrees[i] = d
        rest -= d
    return build_tree(rotate_to_valid_word(degrees))
