"""Exact counting and enumeration oracles for plane trees.

Everything here is integer or rational arithmetic; nothing is sampled.  These
routines are deliberately independent of the samplers so they can serve as
ground truth: brute-force enumeration on one side, closed-form counting on the
other, and the tests insist the two agree.

Counting facts used throughout (a = number of trees, n = number of nodes):

* forests with degree statistics n(.):   (a / n) * n! / prod_c n(c)!
* forests with a marked first tree:      n! / prod_c n(c)!
* marked trees whose spine starts with degrees d = (d_1..d_k):
      prod_i d_i * multinomial(n - k; n(.) - usage(d))
  where usage(d, c) counts occurrences of c in d.

The law of the threshold sampler index admits a closed form: the probability
that the first k size-biased degrees are all accepted is
    k! * [z^k] prod_{c>=1} (1 + c z)^{n(c)} / falling(n, k),
which is the usage-vector recursion summed in closed form (each usage vector
w contributes multinomial(k; w) * prod c^{w(c)} * prod falling(n(c), w(c)),
i.e. the z^k coefficient of the product of binomials).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .errors import InvalidStatistics, TooLarge, UsageExceeded
from .trees import DegreeStatistics, MarkedTree, PlaneTree

ENUMERATION_CAP = 12


@dataclass(frozen=True)
class ExactDistribution:
    """A probability law on integers with exact rational masses."""

    support: tuple[int, ...]
    mass: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.support) != len(self.mass):
            raise ValueError("support and mass lengths differ")
        if any(m < 0 for m in self.mass):
            raise ValueError("negative mass")
        if sum(self.mass, Fraction(0)) != 1:
            raise ValueError("masses do not sum to one")
        if list(self.support) != sorted(set(self.support)):
            raise ValueError("support must be strictly increasing")

    def pmf(self) -> dict[int, Fraction]:
        return dict(zip(self.support, self.mass))

    def prob(self, value: int) -> Fraction:
        return self.pmf().get(value, Fraction(0))

    def survival(self, threshold) -> Fraction:
        """P(X > threshold); accepts non-integer thresholds."""
        return sum(
            (m for x, m in zip(self.support, self.mass) if x > threshold),
            Fraction(0),
        )

    def tail_geq(self, threshold) -> Fraction:
        """P(X >= threshold)."""
        return sum(
            (m for x, m in zip(self.support, self.mass) if x >= threshold),
            Fraction(0),
        )

    def mean(self) -> Fraction:
        return sum((Fraction(x) * m for x, m in zip(self.support, self.mass)),
                   Fraction(0))

    def to_json(self) -> str:
        return json.dumps({
            "support": list(self.support),
            "num": [m.numerator for m in self.mass],
            "den": [m.denominator for m in self.mass],
        })

    @classmethod
    def from_json(cls, text: str) -> "ExactDistribution":
        raw = json.loads(text)
        mass = tuple(Fraction(p, q) for p, q in zip(raw["num"], raw["den"]))
        return cls(tuple(int(x) for x in raw["support"]), mass)

    @classmethod
    def from_pmf(cls, pmf: Mapping[int, Fraction]) -> "ExactDistribution":
        items = sorted((x, m) for x, m in pmf.items() if m != 0)
        return cls(tuple(x for x, _ in items), tuple(m for _, m in items))


def multinomial(total: int, parts: Sequence[int]) -> int:
    """total! / prod(part!) with a consistency check on the part sum."""
    if sum(parts) != total:
        raise ValueError(f"parts sum to {sum(parts)}, expected {total}")
    out = math.factorial(total)
    for p in parts:
        out //= math.factorial(p)
    return out


def falling(n: int, k: int) -> int:
    """Falling factorial n (n-1) ... (n-k+1); zero once k exceeds n."""
    out = 1
    for j in range(k):
        out *= n - j
    return out


def count_forests(stats: DegreeStatistics) -> int:
    """Number of forests of `stats.a` plane trees with the given statistics."""
    n = stats.n
    num = stats.a * math.factorial(n - 1)
    den = 1
    for _, k in stats.sorted_items():
        den *= math.factorial(k)
    q, r = divmod(num, den)
    if r:
        raise InvalidStatistics(f"count formula not integral for {stats.counts}")
    return q


def count_marked_first_tree(stats: DegreeStatistics) -> int:
    """Forests as above with a marked node in the first tree: the plain
    multinomial coefficient of the degree counts."""
    return multinomial(stats.n, [k for _, k in stats.sorted_items()])


def usage_vector(degrees: Sequence[int]) -> Counter:
    """How many times each degree value appears in a spine prefix."""
    return Counter(int(d) for d in degrees)


def count_spine_class(stats: DegreeStatistics, degrees: Sequence[int]) -> int:
    """Marked trees whose root-to-mark path starts with the given degrees.

    The mark must sit at depth >= len(degrees); entry j of `degrees` is the
    out-degree of the depth-j node on the path.
    """
    if stats.a != 1:
        raise InvalidStatistics("spine counting needs single-tree statistics")
    usage = usage_vector(degrees)
    for c, used in usage.items():
        if used > stats.count(c):
            raise UsageExceeded(
                f"degree {c} used {used} times, statistics allow {stats.count(c)}"
            )
    k = len(degrees)
    prod = 1
    for d in degrees:
        prod *= d
    if prod == 0:
        return 0
    remaining = [stats.count(c) - usage.get(c, 0)
                 for c in sorted(set(stats.counts) | set(usage))]
    return prod * multinomial(stats.n - k, remaining)


def spine_probability(stats: DegreeStatistics, degrees: Sequence[int]) -> Fraction:
    """P(mark depth >= k and the spine degrees equal `degrees`) for a uniform
    marked tree, as an exact rational.

    Closed form: prod_i d_i * prod_c falling(n(c), w(c)) / falling(n, k).
    """
    if stats.a != 1:
        raise InvalidStatistics("spine probability needs single-tree statistics")
    usage = usage_vector(degrees)
    for c, used in usage.items():
        if used > stats.count(c):
            raise UsageExceeded(
                f"degree {c} used {used} times, statistics allow {stats.count(c)}"
            )
    k = len(degrees)
    num = 1
    for d in degrees:
        num *= d
    for c, used in usage.items():
        num *= falling(stats.count(c), used)
    return Fraction(num, falling(stats.n, k))


def enumerate_degree_statistics(max_nodes: int) -> Iterator[DegreeStatistics]:
    """All single-tree degree statistics with at most max_nodes nodes.

    Internal degrees of an n-node tree form a partition of n - 1 into parts
    >= 1; leaves fill the remainder.  Yielded in increasing node count, then
    lexicographic partition order.
    """
    yield DegreeStatistics({0: 1})
    for n in range(2, max_nodes + 1):
        for partition in _partitions(n - 1):
            counts = Counter(partition)
            counts[0] = n - len(partition)
            if counts[0] >= 1:
                yield DegreeStatistics(counts)


def _partitions(total: int, smallest: int = 1) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for part in range(smallest, total + 1):
        for rest in _partitions(total - part, part):
            yield (part,) + rest


def enumerate_trees(stats: DegreeStatistics,
                    cap: int = ENUMERATION_CAP) -> Iterator[PlaneTree]:
    """All plane trees with the given degree statistics, in lexicographic
    order of their degree words.  Raises TooLarge above the node cap."""
    if stats.a != 1:
        raise InvalidStatistics("enumeration covers single trees only")
    if stats.n > cap:
        raise TooLarge(f"{stats.n} nodes exceeds enumeration cap {cap}")
    n = stats.n
    remaining = dict(stats.sorted_items())
    word: list[int] = []

    def extend(prefix_sum: int) -> Iterator[PlaneTree]:
        pos = len(word)
        if pos == n:
            yield PlaneTree(tuple(word))
            return
        for c in sorted(remaining):
            if remaining[c] == 0:
                continue
            s = prefix_sum + c - 1
            # proper prefixes must stay >= 0; the last entry must land on -1
            if pos < n - 1 and s < 0:
                continue
            if pos == n - 1 and s != -1:
                continue
            remaining[c] -= 1
            word.append(c)
            yield from extend(s)
            word.pop()
            remaining[c] += 1

    yield from extend(0)


def enumerate_trees_of_size(n: int,
                            cap: int = ENUMERATION_CAP) -> Iterator[PlaneTree]:
    """All plane trees on exactly n nodes (every degree statistics)."""
    if n > cap:
        raise TooLarge(f"{n} nodes exceeds enumeration cap {cap}")
    for stats in enumerate_degree_statistics(n):
        if stats.n == n:
            yield from enumerate_trees(stats, cap=cap)


def exact_mark_height_distribution(stats: DegreeStatistics,
                                   cap: int = ENUMERATION_CAP) -> ExactDistribution:
    """Law of the depth of a uniform mark in a uniform tree, by enumerating
    every (tree, node) pair."""
    depth_counts: Counter = Counter()
    trees = 0
    for tree in enumerate_trees(stats, cap=cap):
        trees += 1
        for d in tree.depths:
            depth_counts[d] += 1
    denom = trees * stats.n
    return ExactDistribution.from_pmf(
        {d: Fraction(c, denom) for d, c in depth_counts.items()}
    )


def _degree_polynomial(stats: DegreeStatistics) -> list[int]:
    """Coefficients of prod_{c>=1} (1 + c z)^{n(c)} as exact integers."""
    poly = [1]
    for c, k in stats.sorted_items():
        if c == 0:
            continue
        for _ in range(k):
            nxt = [0] * (len(poly) + 1)
            for i, coef in enumerate(poly):
                nxt[i] += coef
                nxt[i + 1] += coef * c
            poly = nxt
    return poly


def exact_threshold_sampler_distribution(stats: DegreeStatistics) -> ExactDistribution:
    """Law of the mark height produced by the accept-threshold sampler.

    Survival form: P(first k degrees all rejected) = k! q_k / falling(n, k)
    with q_k the z^k coefficient of prod (1 + c z)^{n(c)}.  Differencing the
    survival sequence gives the pmf of the returned height (index - 1).
    """
    if stats.a != 1:
        raise InvalidStatistics("threshold sampler law needs a single tree")
    n = stats.n
    poly = _degree_polynomial(stats)
    survival = []
    for k in range(n + 1):
        q_k = poly[k] if k < len(poly) else 0
        survival.append(Fraction(math.factorial(k) * q_k, falling(n, k)))
    pmf = {}
    for k in range(n):
        mass = survival[k] - survival[k + 1]
        if mass:
            pmf[k] = mass
    return ExactDistribution.from_pmf(pmf)


def exact_stopping_index_distribution(stats: DegreeStatistics) -> ExactDistribution:
    """Law of the strict-threshold stopping index.

    Same polynomial as the mark-height law but with denominators
    falling(n - 1, k): P(index >= k + 1) = k! q_k / falling(n - 1, k).
    The per-step survival factor (n - 1 - sum of drawn degrees) cancels the
    size-biasing denominator, which is what makes the closed form exact.
    When no threshold ever fires the index is reported as n (path statistics).
    """
    if stats.a != 1:
        raise InvalidStatistics("stopping index law needs a single tree")
    n = stats.n
    poly = _degree_polynomial(stats)
    survival = []  # survival[k] = P(index >= k + 1)
    for k in range(n):
        q_k = poly[k] if k < len(poly) else 0
        survival.append(Fraction(math.factorial(k) * q_k, falling(n - 1, k)))
    pmf = {}
    for k in range(n - 1):
        mass = survival[k] - survival[k + 1]
        if mass:
            pmf[k + 1] = mass
    if survival[n - 1]:
        pmf[n] = survival[n - 1]
    return ExactDistribution.from_pmf(pmf)
