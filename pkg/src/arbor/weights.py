"""Weight sequences for simply generated trees.

A weight sequence w assigns a non-negative weight w_k to each branching
degree k, with w_0 > 0.  A simply generated tree of size n picks a plane
tree with probability proportional to prod_v w_{deg(v)}.  This module holds
the generating-series analytics (phi, psi, radius rho, criticality nu,
variance sigma_sq, limit degree law), the partition numbers Z_n, exact and
tilted sampling, and the degree-concentration surgery used to compare tree
counts before and after bundling small degrees.

Exact arithmetic is kept wherever the inputs are rational: explicit rational
weights give Fraction-valued Z_n and exact tilt-invariance checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Sequence

from .enumeration import (ENUMERATION_CAP, count_forests,
                          enumerate_degree_statistics)
from .errors import (Diverged, InvalidStatistics, OutOfDomain, PhiDiverges,
                     RhoUnknown, TooLarge, BadParameters, ZeroPartition)
from .rng import RngStream
from .samplers import OffspringDistribution, sample_conditioned_bienayme, \
    sample_uniform_tree
from .trees import DegreeStatistics, PlaneTree, build_tree

_REL_TOL = 1e-14
_SERIES_CAP = 1_000_000
_OVERFLOW = 1e300


def _is_exact(x) -> bool:
    return isinstance(x, Rational)


@dataclass(frozen=True)
class WeightSequence:
    """Either an explicit finite weight list or a generator k -> w_k.

    The generator form carries a truncation cap for series evaluation and an
    optional rho_hint giving the radius of convergence of sum w_k z^k.
    Explicit finite sequences have infinite radius and need no hint.
    """

    explicit: tuple | None = None
    generator: Callable[[int], float] | None = None
    cap: int = 100_000
    rho_hint: float | Fraction | None = None

    def __post_init__(self):
        if (self.explicit is None) == (self.generator is None):
            raise ValueError("give exactly one of explicit weights or a generator")
        if self.explicit is not None:
            vec = tuple(self.explicit)
            while len(vec) > 1 and vec[-1] == 0:
                vec = vec[:-1]
            if not vec or vec[0] <= 0:
                raise ValueError("w_0 must be positive")
            if any(v < 0 for v in vec):
                raise ValueError("weights must be non-negative")
            object.__setattr__(self, "explicit", vec)
        else:
            if self.generator(0) <= 0:
                raise ValueError("w_0 must be positive")
            if self.generator(1) < 0 or self.generator(2) < 0:
                raise ValueError("weights must be non-negative")

    @staticmethod
    def from_list(weights: Sequence, rho_hint=None) -> "WeightSequence":
        return WeightSequence(explicit=tuple(weights), rho_hint=rho_hint)

    @staticmethod
    def from_generator(fn: Callable[[int], float], cap: int = 100_000,
                       rho_hint=None) -> "WeightSequence":
        return WeightSequence(generator=fn, cap=cap, rho_hint=rho_hint)

    @property
    def finite_support(self) -> bool:
        return self.explicit is not None

    def weight(self, k: int):
        if self.explicit is not None:
            return self.explicit[k] if k < len(self.explicit) else 0
        return self.generator(k)

    @property
    def max_degree(self) -> int | None:
        """Largest degree with positive weight, or None for generator form."""
        if self.explicit is None:
            return None
        return max(k for k, v in enumerate(self.explicit) if v > 0)

    def resolve_rho(self) -> tuple[float, bool]:
        """(radius of convergence, estimated?).

        Finite support means infinite radius.  A rho_hint is trusted as
        given.  Otherwise the radius is estimated from w_k^{1/k} over the
        top of the truncation window; the True flag marks the value as a
        heuristic.  Estimation cannot distinguish rho = 0 from a tiny
        positive radius, so factorial-type weights need rho_hint = 0.
        """
        if self.rho_hint is not None:
            return float(self.rho_hint), False
        if self.finite_support:
            return math.inf, False
        window = range(max(10, self.cap - 200), self.cap + 1)
        best = None
        for k in window:
            wk = self.generator(k)
            if wk > 0:
                lw = _log_value(wk)
                best = lw / k if best is None else max(best, lw / k)
        if best is None:
            raise RhoUnknown("no positive weights near the truncation cap; "
                             "supply rho_hint")
        return math.exp(-best), True

    def is_rational(self) -> bool:
        return self.explicit is not None and all(_is_exact(v) or isinstance(v, int)
                                                 for v in self.explicit)

    def to_json(self) -> dict:
        if self.explicit is None:
            raise ValueError("generator-backed weight sequences do not serialise")
        rho, _ = self.resolve_rho()
        out_rho = "infinity" if math.isinf(rho) else (
            None if self.rho_hint is None else _num_out(self.rho_hint))
        return {"weights": [_num_out(v) for v in self.explicit], "rho": out_rho}

    @staticmethod
    def from_json(obj: dict) -> "WeightSequence":
        weights = [_num_in(v) for v in obj["weights"]]
        rho = obj.get("rho")
        hint = None if rho in (None, "infinity") else _num_in(rho)
        return WeightSequence.from_list(weights, rho_hint=hint)


def _num_out(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


def _num_in(v):
    if isinstance(v, str):
        num, _, den = v.partition("/")
        return Fraction(int(num), int(den)) if den else Fraction(int(num))
    return v


def _log_value(x) -> float:
    if isinstance(x, Fraction):
        return _log_value(x.numerator) - _log_value(x.denominator)
    if isinstance(x, int):
        return math.log(x)
    return math.log(float(x))


# ---------------------------------------------------------------------------
# series evaluation
# ---------------------------------------------------------------------------

def _series_sum(w: WeightSequence, t, power: int) -> tuple[float, bool]:
    """(sum_k k^power w_k t^k, converged flag).

    Explicit sequences are summed completely (flag True, exact arithmetic
    preserved when possible).  Generator sums stop once the recent terms
    drop below 1e-14 of the partial sum.  If the cap is reached first, a
    power-law fit to the terms estimates the remaining tail; an estimated
    tail below 1e-10 of the partial sum is folded into the value and
    counts as converged, anything else is flagged False.
    """
    if t < 0:
        raise OutOfDomain("series defined for t >= 0 only")
    if w.explicit is not None:
        total = 0
        for k, wk in enumerate(w.explicit):
            if wk:
                total += (k ** power if power else 1) * wk * t ** k
        return total, True
    total = 0.0
    tf = float(t)
    quiet = 0
    marks: list[tuple[int, float]] = []  # (index, term) checkpoints for the tail fit
    for k in range(w.cap + 1):
        wk = w.generator(k)
        try:
            term = (k ** power if power else 1) * float(wk) * tf ** k
        except OverflowError:
            raise Diverged(f"series term overflowed at k={k}")
        total += term
        if total > _OVERFLOW or math.isinf(total):
            raise Diverged(f"series exceeded overflow threshold at k={k}")
        if term > 0 and k >= 1 and (not marks or k >= marks[-1][0] * 2
                                    or k == w.cap):
            marks.append((k, term))
        if k >= 5:
            quiet = quiet + 1 if term <= _REL_TOL * max(total, 1e-300) else 0
            if quiet >= 5:
                return total, True
    if len(marks) < 3:
        return total, False
    # terms look like k^{-alpha}: integral-test tail from the fitted slope,
    # accepted when the slope is stable and the estimate error (drift plus
    # next Euler-Maclaurin order) is negligible against the partial sum
    (k0, t0), (k1, t1), (k2, t2) = marks[-3:]
    a_prev = math.log(t0 / t1) / math.log(k1 / k0)
    a_fit = math.log(t1 / t2) / math.log(k2 / k1)
    if a_fit <= 1.05:
        return total, False
    tail = t2 * k2 / (a_fit - 1) + t2 / 2
    err = tail * (abs(a_fit - a_prev) * math.log(k2) + 1.0 / k2)
    if err < 1e-10 * max(total, 1e-300):
        return total + tail, True
    return total, False


def phi(w: WeightSequence, t):
    """Phi(t) = sum w_k t^k; Diverged when the series fails to converge."""
    value, ok = _series_sum(w, t, 0)
    if not ok:
        raise Diverged("Phi series did not converge within the cap")
    return value


def psi(w: WeightSequence, t):
    """Psi(t) = t Phi'(t) / Phi(t) = sum k w_k t^k / sum w_k t^k."""
    num, ok1 = _series_sum(w, t, 1)
    den, ok2 = _series_sum(w, t, 0)
    if not (ok1 and ok2):
        raise Diverged("Psi series did not converge within the cap")
    if den == 0:
        raise OutOfDomain("Phi(t) = 0")
    if _is_exact(num) and _is_exact(den):
        return Fraction(num, den) if den else Fraction(0)
    return num / den


def phi_psi(w: WeightSequence, t) -> tuple[float, float]:
    if t == 0:
        return w.weight(0), 0.0
    return phi(w, t), psi(w, t)


def nu_sigma_sq(w: WeightSequence) -> tuple[float, float]:
    """(nu, sigma_sq): the criticality parameter Psi at rho, and the
    variance of the limit degree law.

    nu = 0 exactly when rho = 0.  Finite support gives nu = max supported
    degree (Psi(t) increases to it) and sigma_sq = 0, the limit of
    t Psi'(t).  At a finite positive rho, nu is Psi(rho) when the series
    converge there, otherwise the monotone limit of Psi(t) as t increases
    to rho; sigma_sq is the pi-variance, reported as math.inf when the
    second-moment series diverges at rho.
    """
    rho, _ = w.resolve_rho()
    if rho == 0:
        return 0.0, 0.0
    if math.isinf(rho):
        top = w.max_degree
        return float(top), 0.0
    m0, ok0 = _series_sum(w, rho, 0)
    m1, ok1 = _series_sum(w, rho, 1)
    if ok0 and ok1:
        nu = m1 / m0
        m2, ok2 = _series_sum(w, rho, 2)
        sigma_sq = m2 / m0 - nu * nu if ok2 else math.inf
        return float(nu), sigma_sq
    # boundary divergence: chase the monotone limit from below
    last = 0.0
    for j in range(1, 50):
        t = rho * (1 - 2.0 ** -j)
        try:
            value = psi(w, t)
        except Diverged:
            break
        if value - last < 1e-9 and j > 5:
            return float(value), math.inf
        last = value
    return float(last), math.inf


def limit_degree_law(w: WeightSequence, top: int | None = None) -> OffspringDistribution:
    """The probability law pi(k) = w_k rho^k / Phi(rho).

    rho = 0 degenerates to the point mass at zero.  Finite support (rho
    infinite) and boundary-divergent Phi both raise PhiDiverges; callers
    should tilt below rho instead.  `top` forces the mass vector to extend
    at least that far (the remainder is renormalised away).
    """
    rho, _ = w.resolve_rho()
    if rho == 0:
        return OffspringDistribution.from_masses([1.0], label="limit_law(rho=0)")
    if math.isinf(rho):
        raise PhiDiverges("Phi(rho) is infinite for finite-support weights")
    try:
        total = phi(w, rho)
    except Diverged as exc:
        raise PhiDiverges(f"Phi diverges at rho={rho}") from exc
    masses = []
    partial = 0.0
    k = 0
    hi = _SERIES_CAP if top is None else max(top, 64)
    while k <= hi:
        m = float(w.weight(k)) * rho ** k / float(total)
        masses.append(m)
        partial += m
        if (top is None or k >= top) and k >= 8 and 1.0 - partial < 1e-12:
            break
        k += 1
    return OffspringDistribution.from_masses(masses, label="limit_law",
                                             renormalize=True)


def tilted_law(w: WeightSequence, t, top: int) -> OffspringDistribution:
    """Offspring law proportional to w_k t^k on k <= top."""
    if t <= 0:
        raise OutOfDomain("tilt must be positive")
    masses = [float(w.weight(k)) * float(t) ** k for k in range(top + 1)]
    if not all(math.isfinite(m) for m in masses):
        raise Diverged("tilted masses overflow; use a smaller tilt")
    return OffspringDistribution.from_masses(masses, label=f"tilt({t})",
                                             renormalize=True)


# ---------------------------------------------------------------------------
# partition numbers
# ---------------------------------------------------------------------------

def _poly_mul(a: list, b: list, trunc: int) -> list:
    out = [0] * min(trunc + 1, len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        top = min(len(b), len(out) - i)
        for j in range(top):
            if b[j]:
                out[i + j] += ai * b[j]
    return out


def partition_function(w: WeightSequence, n: int):
    """Z_n, the total weight of all n-node plane trees.

    Computed as (1/n) [z^{n-1}] Phi(z)^n with the series truncated at
    degree n - 1 (Lagrange inversion); exact Fractions for rational
    weights, floating point otherwise.  Cross-checked against direct tree
    enumeration for small n in the tests.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    exact = w.is_rational()
    coeffs = []
    for k in range(n):
        v = w.weight(k)
        coeffs.append(Fraction(v) if exact else float(v))
    result = [Fraction(1)] if exact else [1.0]
    base = coeffs
    e = n
    while e:
        if e & 1:
            result = _poly_mul(result, base, n - 1)
        e >>= 1
        if e:
            base = _poly_mul(base, base, n - 1)
    coef = result[n - 1] if len(result) > n - 1 else (Fraction(0) if exact else 0.0)
    if exact:
        out = Fraction(coef, n)
        return int(out) if out.denominator == 1 else out
    return coef / n


def statistics_weight(w: WeightSequence, stats: DegreeStatistics):
    """prod_c w_c^{n(c)}, the common weight of every tree with these
    statistics."""
    out = 1
    for c, k in stats.sorted_items():
        out = out * (w.weight(c) ** k)
    return out


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _reachable_sum(coins: Sequence[int], target: int) -> bool:
    """Can `target` be written as a sum of the given positive integers,
    with repetition?  Bitset dynamic programming."""
    if target == 0:
        return True
    reach = 1
    mask = (1 << (target + 1)) - 1
    for c in sorted(set(coins)):
        if c <= 0 or c > target:
            continue
        prev = -1
        while prev != reach:
            prev = reach
            reach = (reach | (reach << c)) & mask
        if (reach >> target) & 1:
            return True
    return bool((reach >> target) & 1)


def _support_upto(w: WeightSequence, top: int) -> list[int]:
    return [k for k in range(1, top + 1) if w.weight(k) > 0]


def solve_critical_tilt(w: WeightSequence) -> float:
    """The tilt t* with Psi(t*) = 1 when reachable, else rho itself.

    Psi is strictly increasing, so bisection applies.  Used to turn a
    simply generated model into a conditioned branching process with the
    best acceptance rate; any positive tilt gives the same conditioned law,
    so the choice only affects efficiency.
    """
    rho, _ = w.resolve_rho()
    if rho == 0:
        raise OutOfDomain("no positive tilt exists for rho = 0")
    if math.isinf(rho):
        hi = 1.0
        while psi(w, hi) < 1.0:
            hi *= 2.0
            if hi > 1e12:
                return hi  # support in {0, 1}: Psi < 1 everywhere
        lo = 0.0
    else:
        # Probe the boundary itself: at t slightly below rho the terms decay
        # polynomially times an imperceptibly subgeometric factor, which is
        # the one regime the series accelerator cannot certify.  At t = rho
        # the terms are cleanly polynomial and extrapolation either converges
        # or raises honestly.
        edge = _psi_or_inf(w, rho)
        if edge <= 1.0:
            return float(rho)
        lo, hi = 0.0, float(rho)
    for _ in range(200):
        mid = (lo + hi) / 2
        # An uncertifiable evaluation this close to the crossing is treated
        # as >= 1; any positive tilt yields the same conditioned law, so a
        # conservative bracket costs acceptance rate only, never correctness.
        if _psi_or_inf(w, mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _psi_or_inf(w: WeightSequence, t) -> float:
    try:
        return psi(w, t)
    except Diverged:
        return math.inf


def sample_simply_generated(w: WeightSequence, n: int, rng: RngStream,
                            max_attempts: int = 10_000_000,
                            enumeration_cap: int = ENUMERATION_CAP) -> PlaneTree:
    """A tree with P(t) = w(t) / Z_n among n-node plane trees.

    Positive radius: tilt the weights into an offspring law (the tilt
    cancels in the conditioned law) and run the conditioned
    branching-process sampler.  Zero radius: no tilt exists, so sample the
    degree-statistics class exactly by enumeration (class weight is
    tree-count times the common product weight) and then a uniform tree in
    the class; this path is capped at `enumeration_cap` nodes.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n == 1:
        return build_tree((0,))
    if not _reachable_sum(_support_upto(w, n - 1), n - 1):
        raise ZeroPartition(f"Z_{n} = 0 for these weights")
    rho, _ = w.resolve_rho()
    if rho == 0:
        return _sample_by_enumeration(w, n, rng, enumeration_cap)
    support = _support_upto(w, n - 1)
    if max(support) == 1:
        return build_tree((1,) * (n - 1) + (0,))  # the path is the only tree
    tilt = solve_critical_tilt(w)
    mu = tilted_law(w, tilt, n - 1)
    return sample_conditioned_bienayme(mu, n, rng, max_attempts=max_attempts)


def _sample_by_enumeration(w: WeightSequence, n: int, rng: RngStream,
                           cap: int) -> PlaneTree:
    if n > cap:
        raise TooLarge(f"zero-radius sampling is exact enumeration, capped at {cap}")
    classes = []
    weights = []
    for stats in enumerate_degree_statistics(n):
        if stats.n != n:
            continue
        wt = count_forests(stats) * statistics_weight(w, stats)
        if wt > 0:
            classes.append(stats)
            weights.append(wt)
    if not classes:
        raise ZeroPartition(f"Z_{n} = 0 for these weights")
    total = sum(weights)
    u = rng.gen.uniform() * float(total)
    acc = 0.0
    choice = classes[-1]
    for stats, wt in zip(classes, weights):
        acc += float(wt)
        if u < acc:
            choice = stats
            break
    return sample_uniform_tree(choice, rng)


def exact_tree_law(w: WeightSequence, n: int) -> dict[DegreeStatistics, Fraction]:
    """Exact class probabilities P(statistics of the tree = s) for rational
    weights, by enumeration.  Small n only."""
    if n > ENUMERATION_CAP:
        raise TooLarge(f"exact law needs n <= {ENUMERATION_CAP}")
    if not all(_is_exact(w.weight(k)) or isinstance(w.weight(k), int)
               for k in range(n)):
        raise OutOfDomain("exact law needs rational weights")
    table = {}
    for stats in enumerate_degree_statistics(n):
        if stats.n != n:
            continue
        wt = count_forests(stats) * Fraction(statistics_weight(w, stats))
        if wt:
            table[stats] = wt
    total = sum(table.values())
    if not total:
        raise ZeroPartition(f"Z_{n} = 0 for these weights")
    return {s: v / total for s, v in table.items()}


def tilt_invariance_check(w: WeightSequence, t1, t2, n: int) -> bool:
    """True when tilting the weights by t1 and by t2 gives identical
    conditioned n-node tree laws (exact rational comparison).

    The class weight under tilt t is count * prod (w_c t^c)^{n(c)} =
    (count * prod w_c^{n(c)}) * t^{n-1}, so the laws agree identically;
    this check exists to guard the sampling shortcut against regressions.
    """
    if n > ENUMERATION_CAP:
        raise TooLarge(f"tilt invariance check needs n <= {ENUMERATION_CAP}")
    if t1 <= 0 or t2 <= 0:
        raise OutOfDomain("tilts must be positive")
    t1, t2 = Fraction(t1), Fraction(t2)
    laws = []
    for t in (t1, t2):
        table = {}
        for stats in enumerate_degree_statistics(n):
            if stats.n != n:
                continue
            wt = count_forests(stats) * Fraction(1)
            for c, k in stats.sorted_items():
                wt *= (Fraction(w.weight(c)) * t ** c) ** k
            if wt:
                table[stats] = wt
        total = sum(table.values())
        if not total:
            raise ZeroPartition(f"Z_{n} = 0 for these weights")
        laws.append({s: v / total for s, v in table.items()})
    return laws[0] == laws[1]


# ---------------------------------------------------------------------------
# degree concentration surgery
# ---------------------------------------------------------------------------

def concentrate_degrees(stats: DegreeStatistics, small_max: int,
                        bundle_degree: int) -> DegreeStatistics:
    """Bundle degrees: for each 0 < c <= small_max, convert groups of
    `bundle_degree` same-degree nodes into one bundle_degree-node plus
    leaves.

    With m(c) = floor(n(c) / bundle_degree), the result moves M*m(c) nodes
    of degree c (M = bundle_degree) into c*m(c) nodes of degree M and
    (M - c)*m(c) extra leaves.  Node and edge totals are preserved, so the
    output is again valid tree statistics.  Requires small_max > 2 and
    bundle_degree > 2 * small_max.
    """
    if small_max <= 2:
        raise BadParameters("small_max must exceed 2")
    if bundle_degree <= 2 * small_max:
        raise BadParameters("bundle_degree must exceed 2 * small_max")
    counts = dict(stats.counts)
    extra_leaves = 0
    extra_bundles = 0
    for c in range(1, small_max + 1):
        m = counts.get(c, 0) // bundle_degree
        if m:
            counts[c] -= bundle_degree * m
            extra_leaves += (bundle_degree - c) * m
            extra_bundles += c * m
    counts[0] = counts.get(0, 0) + extra_leaves
    counts[bundle_degree] = counts.get(bundle_degree, 0) + extra_bundles
    return DegreeStatistics(counts)


def concentration_count_ratio_ok(stats: DegreeStatistics, small_max: int,
                                 bundle_degree: int) -> bool:
    """Exact big-integer check that the tree count drops by at most a factor
    ((bundle_degree - 1)!)^small_max * (small_max + 1)^n under
    concentrate_degrees."""
    hat = concentrate_degrees(stats, small_max, bundle_degree)
    lhs = count_forests(stats)
    factor = (math.factorial(bundle_degree - 1) ** small_max
              * (small_max + 1) ** stats.n)
    rhs = factor * count_forests(hat)
    return lhs <= rhs


def concentration_weight_ratio(w: WeightSequence, stats: DegreeStatistics,
                               small_max: int, bundle_degree: int):
    """w(hat stats) / w(stats) in closed form: with M = bundle_degree and
    m(c) = floor(n(c)/M), the ratio is prod_{0<c<=small_max}
    (w_M^c w_0^{M-c} / w_c^M)^{m(c)}.

    For w_0 = 1 this is the familiar product over bundled classes; the
    w_0^{M-c} factor accounts for the extra leaves the surgery creates.
    Exact for rational weights.  Undefined (OutOfDomain) when a bundled
    class has zero weight.
    """
    if small_max <= 2 or bundle_degree <= 2 * small_max:
        raise BadParameters("invalid (small_max, bundle_degree)")
    w_m = w.weight(bundle_degree)
    w_0 = w.weight(0)
    exact = _is_exact(w_m) and _is_exact(w_0)
    out = Fraction(1) if exact else 1.0
    for c in range(1, small_max + 1):
        m = stats.count(c) // bundle_degree
        if m:
            w_c = w.weight(c)
            if w_c == 0:
                raise OutOfDomain("weight ratio undefined: w_c = 0 in a bundled class")
            num = w_m ** c * w_0 ** (bundle_degree - c)
            den = w_c ** bundle_degree
            ratio = Fraction(num, den) if exact and _is_exact(den) else num / den
            out = out * ratio ** m
    return out
