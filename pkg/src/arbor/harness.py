"""Experiment engine: equivalence suites, tail sweeps, scaling ladders, and
concentration batteries, reported as JSON plus a flat CSV of verdict cells.

Every runner returns an ExperimentReport whose JSON form depends only on the
configuration and seed: replications draw from RNG substreams keyed by
replication index, so ARBOR_THREADS changes wall-clock time and nothing
else, and rerunning a report reproduces it byte for byte apart from the
wall_clock_seconds field.
"""

from __future__ import annotations

import json
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import __version__
from .bounds import (BoundInput, height_tail_bound, height_tail_bound_no_ones,
                     height_threshold, repeat_threshold, repeat_time_tail_bound,
                     stopping_tail_bound_no_ones)
from .enumeration import (count_forests, enumerate_degree_statistics,
                          enumerate_trees, exact_mark_height_distribution,
                          exact_threshold_sampler_distribution,
                          spine_probability)
from .errors import BadParameters
from .rng import RngStream
from .samplers import (OffspringDistribution, conditional_sum_table,
                       sample_conditioned_bienayme,
                       sample_conditioned_bienayme_sequential,
                       sample_mark_height_batch, sample_stopping_index_batch,
                       sample_stopping_index_poissonized_batch)
from .stats import wilson_interval
from .trees import DegreeStatistics, MarkedTree
from .weights import (WeightSequence, exact_tree_law, limit_degree_law,
                      solve_critical_tilt, tilted_law)

CSV_COLUMNS = ("experiment", "n", "grid_value", "empirical",
               "ci_lo", "ci_hi", "bound", "verdict")
DEFAULT_BETAS = (80.0, 125.0, 216.0, 343.0)
CONCENTRATION_CLASSES = ("second-moment", "stretched", "branching",
                         "census", "leaf")

_POISSON_CHUNK = 20_000


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def thread_count() -> int:
    """Worker-process cap from the ARBOR_THREADS variable (default 1)."""
    raw = os.environ.get("ARBOR_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise BadParameters(f"ARBOR_THREADS must be an integer, got {raw!r}")
    return max(1, value)


def _run_tasks(worker, tasks):
    # Results are collected in task order, never completion order, so the
    # report is identical at any worker count.
    workers = thread_count()
    if workers == 1 or len(tasks) < 2:
        return [worker(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, tasks, chunksize=chunk))


@dataclass(frozen=True)
class Cell:
    """One report row: an empirical quantity against its reference value.

    For Monte Carlo tails, empirical is the hit fraction, the interval is a
    95% Wilson interval, and the verdict is ci_hi <= bound.  Identity and
    trend cells reuse the same shape with degenerate intervals; the
    grid_value label says which comparison the row makes.
    """

    experiment: str
    n: int
    grid_value: Any
    empirical: float
    ci_lo: float
    ci_hi: float
    bound: float | None
    verdict: bool

    def csv_row(self) -> list[str]:
        return [self.experiment, str(self.n), _plain(self.grid_value),
                _plain(self.empirical), _plain(self.ci_lo), _plain(self.ci_hi),
                "" if self.bound is None else _plain(self.bound),
                "pass" if self.verdict else "fail"]


def _plain(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class ExperimentConfig:
    kind: str
    seed: int = 0
    replications: int = 1
    sizes: tuple[int, ...] = ()
    grid: tuple[float, ...] = ()
    target: dict | None = None
    family: str = ""
    threshold: float | None = None
    out: str | None = None

    def to_jsonable(self) -> dict:
        d = asdict(self)
        d["sizes"] = list(self.sizes)
        d["grid"] = list(self.grid)
        return d


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    cells: list[Cell]
    version: str
    wall_clock_seconds: float

    @property
    def passed(self) -> bool:
        return all(c.verdict for c in self.cells)

    def to_jsonable(self) -> dict:
        return {"config": self.config.to_jsonable(),
                "cells": [asdict(c) for c in self.cells],
                "passed": self.passed,
                "version": self.version,
                "wall_clock_seconds": self.wall_clock_seconds}

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True, indent=2) + "\n"

    def csv_text(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        lines.extend(",".join(c.csv_row()) for c in self.cells)
        return "\n".join(lines) + "\n"

    def write(self, base: str) -> tuple[str, str]:
        """Write <base>.json and <base>.csv, returning the two paths."""
        if base.endswith(".json"):
            base = base[:-5]
        json_path, csv_path = base + ".json", base + ".csv"
        with open(json_path, "w") as fh:
            fh.write(self.to_json())
        with open(csv_path, "w") as fh:
            fh.write(self.csv_text())
        return json_path, csv_path


def _finish(config: ExperimentConfig, cells: list[Cell],
            start: float) -> ExperimentReport:
    return ExperimentReport(config=config, cells=cells, version=__version__,
                            wall_clock_seconds=time.perf_counter() - start)


def _tail_cell(experiment: str, n: int, label: str, hits: int, reps: int,
               bound: float) -> Cell:
    lo, hi = wilson_interval(hits, reps)
    return Cell(experiment, n, label, hits / reps, lo, hi, bound,
                hi <= bound + 1e-12)


def _value_cell(experiment: str, n: int, label: str, value: float,
                se: float = 0.0) -> Cell:
    return Cell(experiment, n, label, value, value - 1.96 * se,
                value + 1.96 * se, None, True)


def _num(x: float) -> str:
    return format(x, "g")


# ---------------------------------------------------------------------------
# reference statistics used by sweeps and scripts
# ---------------------------------------------------------------------------

def full_binary_statistics(n: int) -> DegreeStatistics:
    """The {0: (n+1)/2, 2: (n-1)/2} census; n must be odd."""
    if n < 1 or n % 2 == 0:
        raise BadParameters("a tree with only leaves and degree-2 nodes "
                            "has an odd node count")
    if n == 1:
        return DegreeStatistics({0: 1})
    return DegreeStatistics({0: (n + 1) // 2, 2: (n - 1) // 2})


def heavy_tailed_statistics(n: int) -> DegreeStatistics:
    """A leafless-free heavy census on n nodes: degree counts shaped like
    c^(-5/2) for c >= 2 plus one large remainder degree, no degree-1 nodes.

    Deterministic in n, so sweeps over it are reproducible without an RNG.
    """
    if n < 4:
        raise BadParameters("heavy census needs at least 4 nodes")
    counts: dict[int, int] = {}
    used = 0
    for c in range(2, n):
        k = int(0.35 * n * c ** -2.5)
        if k == 0:
            break
        if used + c * k > n - 1:
            k = (n - 1 - used) // c
        if k <= 0:
            break
        counts[c] = k
        used += c * k
    rest = (n - 1) - used
    if rest == 1:
        counts[2] -= 1
        if counts[2] == 0:
            del counts[2]
        used -= 2
        rest = 3
    if rest >= 2:
        counts[rest] = counts.get(rest, 0) + 1
        used += rest
    internal = sum(counts.values())
    counts[0] = n - internal
    if counts[0] < 1:
        raise BadParameters(f"heavy census infeasible at n = {n}")
    return DegreeStatistics(counts)


# ---------------------------------------------------------------------------
# equivalence suite
# ---------------------------------------------------------------------------

def run_equivalence_suite(max_n: int = 8, seed: int = 0) -> ExperimentReport:
    """Exhaustive small-n agreement between enumeration and closed forms.

    For every single-tree degree statistics with at most max_n nodes:
      count:     enumerated tree count vs the (a/n)-multinomial formula.
      threshold: threshold-sampler law vs mark-height law, exact rationals.
      histogram: mark-height law vs the enumeration depth histogram.
      spine:     closed-form spine-prefix probabilities (lengths <= 4) vs
                 enumeration ratios over all (tree, mark) pairs, including
                 the total-mass check that nothing is unaccounted for.

    Discrepancy cells record the worst absolute difference as a float; the
    verdict requires the exact rational difference to be zero.  max_n above
    10 is refused since the suite walks every tree.
    """
    if not 1 <= max_n <= 10:
        raise BadParameters("equivalence suite runs at 1 <= max_n <= 10")
    start = time.perf_counter()
    cells: list[Cell] = []
    for stats in enumerate_degree_statistics(max_n):
        n = stats.n
        label = _stats_label(stats)
        trees = list(enumerate_trees(stats))
        formula = count_forests(stats)
        cells.append(Cell("equivalence", n, f"count {label}",
                          float(len(trees)), float(len(trees)),
                          float(len(trees)), float(formula),
                          len(trees) == formula))
        height_law = exact_mark_height_distribution(stats)
        threshold_law = exact_threshold_sampler_distribution(stats)
        tv = _total_variation(height_law.pmf(), threshold_law.pmf())
        cells.append(_discrepancy_cell(n, f"threshold-vs-height {label}", tv))
        hist: Counter = Counter()
        for tree in trees:
            for depth in tree.depths:
                hist[depth] += 1
        total = n * len(trees)
        observed = {d: Fraction(c, total) for d, c in hist.items()}
        tv2 = _total_variation(height_law.pmf(), observed)
        cells.append(_discrepancy_cell(n, f"histogram-vs-height {label}", tv2))
        cells.append(_discrepancy_cell(n, f"spine {label}",
                                       _spine_discrepancy(stats, trees)))
    config = ExperimentConfig(kind="equivalence", seed=seed, replications=1,
                              sizes=(max_n,))
    return _finish(config, cells, start)


def _stats_label(stats: DegreeStatistics) -> str:
    return "+".join(f"{c}x{k}" for c, k in stats.sorted_items())


def _total_variation(a: dict, b: dict) -> Fraction:
    keys = set(a) | set(b)
    diff = sum((abs(a.get(k, Fraction(0)) - b.get(k, Fraction(0)))
                for k in keys), Fraction(0))
    return diff / 2


def _discrepancy_cell(n: int, label: str, disc: Fraction) -> Cell:
    v = float(disc)
    return Cell("equivalence", n, label, v, v, v, 0.0, disc == 0)


def _spine_discrepancy(stats: DegreeStatistics, trees) -> Fraction:
    n = stats.n
    total = n * len(trees)
    worst = Fraction(0)
    for k in range(1, min(4, n - 1) + 1):
        seen: Counter = Counter()
        deep = 0
        for tree in trees:
            for mark in range(n):
                mt = MarkedTree(tree, mark)
                if mt.mark_depth >= k:
                    deep += 1
                    seen[mt.spinal_degrees(k)] += 1
        mass = Fraction(0)
        for vec, cnt in seen.items():
            closed = spine_probability(stats, vec)
            worst = max(worst, abs(closed - Fraction(cnt, total)))
            mass += closed
        # closed-form masses over the seen classes must account for the
        # whole deep-mark event, otherwise some class went missing
        worst = max(worst, abs(mass - Fraction(deep, total)))
    return worst


# ---------------------------------------------------------------------------
# tail sweep
# ---------------------------------------------------------------------------

def run_tail_sweep(stats: DegreeStatistics,
                   betas: Sequence[float] = DEFAULT_BETAS,
                   replications: int = 100_000,
                   seed: int = 0) -> ExperimentReport:
    """Monte Carlo mark-height, stopping-index, and repeat-time tails
    against their closed-form bounds.

    Cells emitted:
      height>beta=B:  P(depth of mark > B * p1 / sqrt(p2sq - n1)) vs the
                      two-term bound (trivially 1.0 below the beta floor).
      height>=ell=L / sigma>ell=L:  the leafless sub-Gaussian bounds; only
                      emitted while the bound stays above ten times the
                      zero-success Wilson ceiling.  Below that the interval
                      cannot resolve the comparison at this many
                      replications: near-tight bounds would fail on sheer
                      Poisson noise in the last few hit counts.  With the
                      factor-ten margin the chance of any spurious failure
                      across a full sweep is a few parts in ten thousand
                      (checked against the exact laws); the exact oracles
                      cover the excluded range without noise.
      tau>beta=B:     Poissonised repeat-time tails vs the two-term bound;
                      skipped when no degree exceeds 1 (a repeat arrival is
                      impossible and the bound is zero).

    A verdict passes when the upper 95% Wilson end sits at or below the
    bound.  The bounds hold for every n, so a failing cell indicates an
    implementation bug rather than an unlucky seed; that is also why cells
    are reported individually and never pooled.  Raises PathDegenerate for
    path statistics, where the beta threshold divides by zero spread.
    """
    if stats.a != 1:
        raise BadParameters("tail sweep needs single-tree statistics")
    if replications < 1:
        raise BadParameters("need at least one replication")
    start = time.perf_counter()
    n = stats.n
    norms = stats.norms()
    inp = BoundInput.from_stats(stats)
    inp.branch_scale  # raises PathDegenerate before any sampling
    cells: list[Cell] = []
    heights = sample_mark_height_batch(stats, RngStream(seed, 0), replications)
    sigmas = sample_stopping_index_batch(stats, RngStream(seed, 1), replications)
    for beta in betas:
        thr = height_threshold(inp, beta)
        hits = int(np.count_nonzero(heights > thr))
        cells.append(_tail_cell("tail_sweep", n, f"height>beta={_num(beta)}",
                                hits, replications,
                                height_tail_bound(inp, beta)))
    floor = 10.0 * wilson_interval(0, replications)[1]
    if norms.n1 == 0 and n >= 2:
        for ell in range(1, n + 1):
            bound = height_tail_bound_no_ones(inp, ell)
            if bound < floor:
                break
            hits = int(np.count_nonzero(heights >= ell))
            cells.append(_tail_cell("tail_sweep", n, f"height>=ell={ell}",
                                    hits, replications, bound))
        for ell in range(1, n + 1):
            bound = stopping_tail_bound_no_ones(inp, ell)
            if bound < floor:
                break
            hits = int(np.count_nonzero(sigmas > ell))
            cells.append(_tail_cell("tail_sweep", n, f"sigma>ell={ell}",
                                    hits, replications, bound))
    if stats.max_degree >= 2:
        taus = _poissonized_taus(stats, seed, replications)
        for beta in betas:
            thr = repeat_threshold(inp, beta)
            hits = int(np.count_nonzero(taus > thr))
            cells.append(_tail_cell("tail_sweep", n, f"tau>beta={_num(beta)}",
                                    hits, replications,
                                    repeat_time_tail_bound(inp, beta)))
    config = ExperimentConfig(kind="tail_sweep", seed=seed,
                              replications=replications, sizes=(n,),
                              grid=tuple(float(b) for b in betas),
                              target=json.loads(stats.to_json()))
    return _finish(config, cells, start)


def _poissonized_taus(stats: DegreeStatistics, seed: int,
                      replications: int) -> np.ndarray:
    # chunked so the per-row interval bitmap stays small at n ~ 1000
    base = RngStream(seed, 2)
    parts = []
    done = 0
    idx = 0
    while done < replications:
        m = min(_POISSON_CHUNK, replications - done)
        _, taus = sample_stopping_index_poissonized_batch(
            stats, base.substream(idx), m)
        parts.append(taus)
        done += m
        idx += 1
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# convergence ladders
# ---------------------------------------------------------------------------

def _ladder_worker(task):
    mu, n, seed, cell_stream, rep = task
    rng = RngStream(seed, cell_stream).substream(rep)
    tree = sample_conditioned_bienayme(mu, n, rng)
    return (tree.height, tree.width, float(np.mean(tree.depths)))


def run_convergence(mu: OffspringDistribution | None = None,
                    sizes: Sequence[int] | None = None,
                    replications: int = 200,
                    seed: int = 0,
                    family: str = "heavy",
                    grid: Sequence[float] | None = None) -> ExperimentReport:
    """Scaling ladder for width, height, and mean mark depth.

    family picks the verdicts, since the limit statements only make sense
    relative to a hypothesis class:

      "heavy":    default mu(k) proportional to k^(-5/2) with mean 0.95
                  (subcritical, infinite variance).  Verdict cells require
                  mean wid/sqrt(n) strictly increasing across the ladder and
                  mean ht/(sqrt(n) * log^3 n) strictly decreasing (natural
                  log).  Default sizes (200, 800, 3200).
      "control":  default mu = {0: 1/2, 2: 1/2} on odd sizes
                  (201, 801, 3201); the verdict asks that wid/sqrt(n) does
                  NOT double across the ladder, the finite-variance
                  stability check.
      "near-path": mu(1) = 1 - eps, mu(0) = mu(2) = eps/2 across the eps
                  grid (default 0.5, 0.2, 0.1) at a single size (default
                  2000).  Reports Chat = mean_depth * sqrt(eps) / sqrt(n)
                  per eps and passes when max/min < 2.

    Per size, mean cells carry a normal-approximation 95% interval and
    median cells a degenerate one; trend cells compare the means.
    """
    if replications < 2:
        raise BadParameters("ladder needs at least two replications")
    start = time.perf_counter()
    cells: list[Cell] = []
    if family == "near-path":
        eps_grid = tuple(float(e) for e in (grid or (0.5, 0.2, 0.1)))
        n = int(sizes[0]) if sizes else 2000
        chats = []
        for j, eps in enumerate(eps_grid):
            law = OffspringDistribution.near_path(eps)
            tasks = [(law, n, seed, j, r) for r in range(replications)]
            res = _run_tasks(_ladder_worker, tasks)
            deps = np.array([r[2] for r in res], dtype=float)
            scale = math.sqrt(eps) / math.sqrt(n)
            chat = float(deps.mean()) * scale
            se = float(deps.std(ddof=1) / math.sqrt(len(deps))) * scale
            chats.append(chat)
            cells.append(_value_cell("convergence", n,
                                     f"chat eps={_num(eps)}", chat, se))
        spread = max(chats) / min(chats)
        cells.append(Cell("convergence", n, "chat-spread", spread, spread,
                          spread, 2.0, spread < 2.0))
        config = ExperimentConfig(kind="convergence", seed=seed,
                                  replications=replications, sizes=(n,),
                                  grid=eps_grid, family=family)
        return _finish(config, cells, start)
    if family == "heavy":
        mu = mu or OffspringDistribution.power_law(2.5, 0.95)
        sizes = tuple(int(s) for s in (sizes or (200, 800, 3200)))
    elif family == "control":
        mu = mu or OffspringDistribution.from_masses({0: 0.5, 2: 0.5})
        sizes = tuple(int(s) for s in (sizes or (201, 801, 3201)))
    else:
        raise BadParameters(f"unknown convergence family {family!r}")
    if len(sizes) < 2:
        raise BadParameters("a ladder needs at least two sizes")
    wid_means, ht_means = [], []
    for j, n in enumerate(sizes):
        tasks = [(mu, n, seed, j, r) for r in range(replications)]
        res = _run_tasks(_ladder_worker, tasks)
        hts = np.array([r[0] for r in res], dtype=float)
        wids = np.array([r[1] for r in res], dtype=float)
        deps = np.array([r[2] for r in res], dtype=float)
        root = math.sqrt(n)
        log3 = math.log(n) ** 3
        for name, arr in (("wid/sqrt(n)", wids / root),
                          ("ht/(sqrt(n)log^3n)", hts / (root * log3)),
                          ("depth/sqrt(n)", deps / root)):
            mean = float(arr.mean())
            se = float(arr.std(ddof=1) / math.sqrt(len(arr)))
            cells.append(_value_cell("convergence", n, name + " mean",
                                     mean, se))
            cells.append(_value_cell("convergence", n, name + " median",
                                     float(np.median(arr))))
        wid_means.append(float((wids / root).mean()))
        ht_means.append(float((hts / (root * log3)).mean()))
    last = sizes[-1]
    if family == "heavy":
        ratio_min = min(b / a for a, b in zip(wid_means, wid_means[1:]))
        cells.append(Cell("convergence", last, "wid-trend-min-ratio",
                          ratio_min, ratio_min, ratio_min, 1.0,
                          ratio_min > 1.0))
        ratio_max = max(b / a for a, b in zip(ht_means, ht_means[1:]))
        cells.append(Cell("convergence", last, "ht-trend-max-ratio",
                          ratio_max, ratio_max, ratio_max, 1.0,
                          ratio_max < 1.0))
    else:
        span = wid_means[-1] / wid_means[0]
        cells.append(Cell("convergence", last, "wid-span-ratio", span, span,
                          span, 2.0, span < 2.0))
    config = ExperimentConfig(kind="convergence", seed=seed,
                              replications=replications, sizes=sizes,
                              target=mu.to_jsonable(), family=family)
    return _finish(config, cells, start)


# ---------------------------------------------------------------------------
# concentration batteries
# ---------------------------------------------------------------------------

def _concentration_worker(task):
    check, mu, n, seed, cell_stream, rep, params = task
    rng = RngStream(seed, cell_stream).substream(rep)
    tree = sample_conditioned_bienayme(mu, n, rng)
    norms = tree.degree_statistics().norms()
    if check == "second-moment":
        return norms.p2sq >= params["factor"] * norms.p1
    if check == "branching":
        return norms.p2sq - norms.n1 >= params["floor"] * norms.p1
    raise BadParameters(f"unknown concentration check {check!r}")


def _census_weights() -> WeightSequence:
    return WeightSequence.from_generator(
        lambda k: 1.0 if k == 0 else float(k) ** -3.0, rho_hint=1.0)


def _factorial_squared_weights() -> WeightSequence:
    return WeightSequence.from_generator(
        lambda k: Fraction(math.factorial(k)) ** 2, rho_hint=0.0)


def run_concentration(class_name: str,
                      mu: OffspringDistribution | None = None,
                      n: int = 2000,
                      replications: int = 200,
                      seed: int = 0,
                      threshold: float = 0.99,
                      factor: float = 10.0,
                      eps: float = 0.1,
                      tolerance: float = 0.04) -> ExperimentReport:
    """Per-replication degree-profile inequality checks.

    Classes and their events (pass fraction over replications is compared
    to `threshold`, default 0.99):

      second-moment: infinite-variance offspring law; event
          p2sq >= factor * p1.  Default mu: atom at 18 with mass 0.05 plus a
          k^(-5/2) tail from 40 with mean 0.1, subcritical overall.
      stretched: every exponential moment infinite, still subcritical; same
          event.  Default mu(k) proportional to exp(-sqrt(k)), mean 0.95.
      branching: mu(0) + mu(1) < 1; event
          p2sq - n1 >= 4 * (1 - mu(0) - mu(1) - eps) * p1.  Default mu
          {0: 0.4, 1: 0.2, 2: 0.4} with eps 0.1.
      census: simply generated with w_k = k^(-3); event
          max over k <= 3 of |n(k)/n - pi(k)| < tolerance, pi the boundary
          degree law.  Sampling runs through the sequential-conditional
          route, since rejection stalls in this condensation regime.
      leaf: factorial-squared weights (zero radius); exact expected leaf
          fraction strictly increasing over n = 6..12.  Deterministic, no
          Monte Carlo, replications ignored.

    The degenerate case mu(0) + mu(1) = 1 is rejected for the branching
    class: the event's floor would be vacuous and the class hypothesis
    requires genuine branching.
    """
    if class_name not in CONCENTRATION_CLASSES:
        raise BadParameters(f"unknown concentration class {class_name!r}; "
                            f"choices: {', '.join(CONCENTRATION_CLASSES)}")
    start = time.perf_counter()
    cells: list[Cell] = []
    if class_name == "leaf":
        ladder = range(6, 13)
        fractions = []
        for size in ladder:
            law = exact_tree_law(_factorial_squared_weights(), size)
            frac = sum((p * Fraction(s.count(0), size)
                        for s, p in law.items()), Fraction(0))
            fractions.append(frac)
            cells.append(_value_cell("concentration", size,
                                     "leaf-fraction", float(frac)))
        increasing = all(b > a for a, b in zip(fractions, fractions[1:]))
        worst = min(float(b - a) for a, b in zip(fractions, fractions[1:]))
        cells.append(Cell("concentration", max(ladder), "leaf-trend-min-step",
                          worst, worst, worst, 0.0, increasing))
        config = ExperimentConfig(kind="concentration", seed=seed,
                                  replications=1,
                                  sizes=tuple(ladder),
                                  target={"weights": "(k!)^2"},
                                  family=class_name, threshold=threshold)
        return _finish(config, cells, start)
    if replications < 1:
        raise BadParameters("need at least one replication")
    if class_name == "census":
        weights = _census_weights()
        tilt = solve_critical_tilt(weights)
        law = tilted_law(weights, tilt, n - 1)
        pi = limit_degree_law(weights)
        pis = [pi.mass(k) for k in range(4)]
        table = conditional_sum_table(law, n)
        base = RngStream(seed, 0)
        hits = 0
        for rep in range(replications):
            tree = sample_conditioned_bienayme_sequential(
                law, n, base.substream(rep), table)
            stats = tree.degree_statistics()
            if max(abs(stats.count(k) / n - pis[k]) for k in range(4)) < tolerance:
                hits += 1
        target = {"weights": "k^-3", "pi": pis, "tolerance": tolerance}
    else:
        if class_name == "second-moment":
            mu = mu or OffspringDistribution.anchored_heavy(18, 0.05, 40, 0.1)
            params = {"factor": factor}
            check = "second-moment"
        elif class_name == "stretched":
            mu = mu or OffspringDistribution.stretched_exp(0.95)
            params = {"factor": factor}
            check = "second-moment"
        else:
            mu = mu or OffspringDistribution.from_masses({0: 0.4, 1: 0.2, 2: 0.4})
            mu0, mu1 = mu.mass(0), mu.mass(1)
            if mu0 + mu1 >= 1.0 - 1e-12:
                raise BadParameters("branching class requires mu(0) + mu(1) < 1")
            params = {"floor": 4.0 * (1.0 - mu0 - mu1 - eps)}
            check = "branching"
        if mu.mean() > 1.0 + 1e-9:
            raise BadParameters("concentration classes are subcritical or "
                                f"critical; mean is {mu.mean():.4f}")
        tasks = [(check, mu, n, seed, 0, rep, params)
                 for rep in range(replications)]
        hits = sum(bool(ok) for ok in _run_tasks(_concentration_worker, tasks))
        target = mu.to_jsonable()
        target["event"] = dict(params)
    frac = hits / replications
    lo, hi = wilson_interval(hits, replications)
    cells.append(Cell("concentration", n, f"{class_name} pass-fraction",
                      frac, lo, hi, threshold, frac >= threshold))
    config = ExperimentConfig(kind="concentration", seed=seed,
                              replications=replications, sizes=(n,),
                              target=target, family=class_name,
                              threshold=threshold)
    return _finish(config, cells, start)
