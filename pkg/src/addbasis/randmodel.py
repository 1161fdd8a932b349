"""Random sequences with prescribed density: the space (S, (alpha_n)).

Each integer n >= n0 enters a random sequence independently with probability
alpha_n = min(1, K * f'(n)), the natural assignment when the target counting
function is f.  The module provides seeded samplers with counter-split
per-trial seeds, exact expectation formulas for s and r_2, Monte Carlo
estimation of E(r_d), the Chernoff rate delta(eps), the concentration
experiment behind Theta(f)-regular 2-bases, and the regularity propagation
check for d above the base order.

Exact expectations are the oracle chain: E s(x) = sum alpha_n, and

    E r_2(n) = 2 * sum_{k < n/2} alpha_k alpha_{n-k} + [n even] alpha_{n/2},

the diagonal term entering linearly because an indicator squares to itself.
For d >= 3 expectations are estimated by Monte Carlo only.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .growth import GrowthFn, classify
from .representations import BudgetError, build_table
from .sequences import Sequence

__all__ = [
    "AlphaSpec",
    "SampleRun",
    "McExpectation",
    "ConcentrationReport",
    "RegularityReport",
    "trial_generator",
    "sample_sequence",
    "exact_expectation_s",
    "exact_expectation_r2",
    "expectation_r2_from_alphas",
    "expectation_rho2_profile",
    "mc_expectation_rd",
    "chernoff_delta",
    "chernoff_ceiling",
    "concentration_experiment",
    "regularity_propagation_check",
]


@dataclass(frozen=True)
class AlphaSpec:
    """Probability assignment alpha_n = min(1, gain * f'(n)) for n >= n0, else 0."""

    f: GrowthFn
    gain: float = 1.0
    n0: int = 2

    def __post_init__(self):
        if self.gain < 1.0:
            raise ValueError("gain must be >= 1")
        if self.n0 < 0:
            raise ValueError("n0 must be nonnegative")

    @classmethod
    def from_growth(cls, f: GrowthFn, gain: float = 1.0, n0: int | None = None):
        if n0 is None:
            n0 = math.ceil(f.threshold)
        return cls(f=f, gain=gain, n0=n0)

    def alphas(self, horizon: int) -> np.ndarray:
        """alpha_0..alpha_horizon as a float vector (cached per spec)."""
        return _alpha_table(self, horizon)

    def describe(self) -> dict:
        return {"f": self.f.spec_string(), "gain": self.gain, "n0": self.n0}


@lru_cache(maxsize=16)
def _alpha_table(spec: AlphaSpec, horizon: int) -> np.ndarray:
    out = np.zeros(horizon + 1)
    if horizon >= spec.n0:
        # below the growth threshold f' is frozen at its threshold value,
        # which the min() clamp almost always sends to 1 anyway
        ns = np.maximum(
            np.arange(spec.n0, horizon + 1, dtype=np.float64), spec.f.threshold
        )
        out[spec.n0 :] = np.minimum(1.0, spec.gain * spec.f.eval(ns, 1))
    out.setflags(write=False)
    return out


def trial_generator(master_seed: int, trial: int) -> np.random.Generator:
    """Per-trial RNG split deterministically from the master seed.

    Uses SeedSequence spawn keys, so trial streams are reproducible
    independently of scheduling or thread count.
    """
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(trial,))
    )


def sample_sequence(spec: AlphaSpec, horizon: int, rng) -> Sequence:
    """Draw one random truncation: n is included iff u_n < alpha_n.

    The shared-uniform construction gives monotone coupling in the gain:
    raising K with the same seed never removes an element.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    if horizon < spec.n0:
        raise ValueError(f"horizon {horizon} below start index {spec.n0}")
    draws = rng.random(horizon + 1)
    members = draws < spec.alphas(horizon)
    prefix = np.cumsum(members, dtype=np.int64)
    return Sequence(
        horizon=horizon, members=members, prefix=prefix,
        label=f"omega[{spec.f.spec_string()},K={spec.gain:g}]",
    )


def exact_expectation_s(spec: AlphaSpec, x: int, horizon: int | None = None) -> float:
    """E s(x) = sum_{n <= x} alpha_n, exactly."""
    if horizon is None:
        horizon = x
    if x > horizon:
        raise ValueError("x exceeds the tabulated horizon")
    return float(spec.alphas(horizon)[: x + 1].sum())


def expectation_r2_from_alphas(alphas: np.ndarray, n: int) -> float:
    """E r_2(n) for an arbitrary probability vector.

    Off-diagonal ordered pairs contribute 2 alpha_k alpha_{n-k} for k < n/2;
    the diagonal contributes alpha_{n/2} (not squared) when n is even.
    """
    if n >= len(alphas):
        raise ValueError("n exceeds the alpha table")
    half = (n + 1) // 2  # k = 0 .. ceil(n/2)-1, i.e. all k < n/2
    head = alphas[:half]
    tail = alphas[n - half + 1 : n + 1][::-1] if half else alphas[:0]
    total = 2.0 * float(np.dot(head, tail))
    if n % 2 == 0:
        total += float(alphas[n // 2])
    return total


def exact_expectation_r2(spec: AlphaSpec, n: int, horizon: int | None = None) -> float:
    if horizon is None:
        horizon = n
    return expectation_r2_from_alphas(spec.alphas(horizon), n)


def expectation_rho2_profile(spec: AlphaSpec, horizon: int) -> np.ndarray:
    """E rho_2(n) = sum_{k < n/2} alpha_k alpha_{n-k} for every n <= horizon.

    Computed through one real FFT self-convolution of the alpha vector;
    expectations are floats, so no exactness contract applies here.
    """
    alphas = spec.alphas(horizon)
    size = 1
    while size < 2 * (horizon + 1):
        size *= 2
    spec_fft = np.fft.rfft(alphas, size)
    full = np.fft.irfft(spec_fft * spec_fft, size)[: horizon + 1]
    ns = np.arange(horizon + 1)
    diag = np.zeros(horizon + 1)
    even = ns % 2 == 0
    diag[even] = alphas[ns[even] // 2] ** 2
    return np.maximum((full - diag) / 2.0, 0.0)


@dataclass(frozen=True)
class SampleRun:
    """Seeded Monte Carlo campaign description."""

    master_seed: int
    trials: int
    horizon: int
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def describe(self) -> dict:
        return {
            "master_seed": self.master_seed,
            "trials": self.trials,
            "horizon": self.horizon,
        }


def _map_trials(run: SampleRun, worker):
    """Apply worker(trial_index, rng) across trials; results in trial order."""
    if run.threads == 1:
        return [worker(i, trial_generator(run.master_seed, i)) for i in range(run.trials)]
    results = [None] * run.trials
    with ThreadPoolExecutor(max_workers=run.threads) as pool:
        futures = {
            pool.submit(worker, i, trial_generator(run.master_seed, i)): i
            for i in range(run.trials)
        }
        for fut, i in futures.items():
            results[i] = fut.result()
    return results


def _probe_r_d(omega: Sequence, d: int, probe_ns: np.ndarray) -> np.ndarray:
    """Exact r_d(n; omega) at the probes via the convolution recursion.

    r_d(n) = sum_k r_{d-1}(k) r_1(n-k); for d = 2 the inner table is the
    indicator itself, for d >= 3 one exact (d-1)-table is built per trial.
    """
    ind = omega.indicator()
    top = int(probe_ns.max())
    if d == 2:
        lower = ind
    else:
        lower = build_table(omega, d - 1, top, method="fast").counts
    out = np.empty(probe_ns.size, dtype=np.int64)
    for j, n in enumerate(probe_ns):
        n = int(n)
        out[j] = int(np.dot(lower[: n + 1], ind[n::-1]))
    return out


@dataclass(frozen=True)
class McExpectation:
    """Per-probe Monte Carlo estimates of E r_d with normalization."""

    d: int
    probe_ns: tuple
    mean: tuple
    variance: tuple
    stderr: tuple
    normalized: tuple  # mean / (f'(n) f(n)^(d-1))
    trials: int

    def rows(self):
        for i, n in enumerate(self.probe_ns):
            yield (n, self.d, self.mean[i], self.variance[i], self.stderr[i],
                   self.normalized[i])


def mc_expectation_rd(
    spec: AlphaSpec, d: int, probe_ns, run: SampleRun, work_budget: int = 10**10
) -> McExpectation:
    """Sample mean/variance of r_d at the probes over the campaign's trials.

    ``work_budget`` caps trials x horizon x (table levels), guarding against
    accidentally astronomical campaigns.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    probes = np.array(sorted(int(n) for n in probe_ns), dtype=np.int64)
    if probes.size == 0:
        raise ValueError("need at least one probe")
    if probes.max() > run.horizon:
        raise ValueError("probe beyond the run horizon")
    work = run.trials * (run.horizon + 1) * (1 if d == 2 else 8 * (d - 1))
    if work > work_budget:
        raise BudgetError(
            f"campaign needs ~{work} units of work, over budget {work_budget}"
        )

    def worker(_i, rng):
        omega = sample_sequence(spec, run.horizon, rng)
        return _probe_r_d(omega, d, probes)

    samples = np.stack(_map_trials(run, worker))
    mean = samples.mean(axis=0)
    var = samples.var(axis=0, ddof=1) if run.trials > 1 else np.zeros(probes.size)
    stderr = np.sqrt(var / run.trials)
    ns = probes.astype(np.float64)
    scale = spec.f.eval(ns, 1) * spec.f.eval(ns) ** (d - 1)
    return McExpectation(
        d=d,
        probe_ns=tuple(int(n) for n in probes),
        mean=tuple(mean.tolist()),
        variance=tuple(var.tolist()),
        stderr=tuple(stderr.tolist()),
        normalized=tuple((mean / scale).tolist()),
        trials=run.trials,
    )


def chernoff_delta(epsilon: float) -> float:
    """delta(eps) = min((1+eps) log(1+eps) - eps, eps^2 / 2)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    entropy = (1 + epsilon) * math.log1p(epsilon) - epsilon
    return min(entropy, epsilon * epsilon / 2.0)


def chernoff_ceiling(epsilon: float, expectation) -> np.ndarray | float:
    """Two-sided tail ceiling 2 exp(-delta(eps) * E)."""
    return 2.0 * np.exp(-chernoff_delta(epsilon) * np.asarray(expectation, dtype=float))


@dataclass(frozen=True, eq=False)
class ConcentrationReport:
    """Exceedance statistics of rho_2 against its Chernoff ceiling."""

    epsilon: float
    delta: float
    n_threshold: int
    horizon: int
    trials: int
    ns: np.ndarray
    expected_rho2: np.ndarray
    exceed_freq: np.ndarray
    ceiling: np.ndarray
    min_r2_per_trial: np.ndarray
    frac_trials_all_positive: float

    def ceiling_violations(self, sigmas: float = 3.0) -> int:
        """Number of n whose observed exceedance count is inconsistent with
        the ceiling beyond the given binomial noise allowance."""
        T = self.trials
        allowance = self.ceiling + sigmas * np.sqrt(
            self.ceiling * (1.0 - np.minimum(self.ceiling, 1.0)) / T
        )
        return int(np.count_nonzero(self.exceed_freq > allowance))


def concentration_experiment(
    spec: AlphaSpec,
    epsilon: float,
    run: SampleRun,
    n_threshold: int,
    trend_floor: float = 0.75,
) -> ConcentrationReport:
    """Trial-by-trial test of |rho_2/E rho_2 - 1| > eps for all n >= threshold.

    Refuses unless f is type-2 and f'(x) f(x) / log(x) shows no decay trend
    (value at the top of the range at least ``trend_floor`` times the value
    at the geometric midpoint, which skips the small-x transient); below
    that regime the exponential-bound method is out of its depth and the
    experiment would be uninformative.

    Per trial the exact r_2 table gives rho_2(n) = (r_2(n) - [n even] r(n/2))/2,
    the exceedance indicators, and min r_2 over [threshold, horizon] (the
    basis-emergence statistic).
    """
    if not 0 < epsilon:
        raise ValueError("epsilon must be positive")
    if not spec.n0 <= n_threshold <= run.horizon:
        raise ValueError("n_threshold must lie in [n0, horizon]")

    verdict = classify(spec.f, (spec.f.threshold, float(run.horizon)))
    if not verdict.is_type2:
        raise ValueError(
            f"f={spec.f.spec_string()} is not type-2 on the range; refusing"
        )
    lo = max(spec.f.threshold, 2.0)
    xs = np.geomspace(lo * 1.01, run.horizon, 64)
    guide = spec.f.eval(xs, 1) * spec.f.eval(xs) / np.log(xs)
    mid = guide[guide.size // 2]
    if guide[-1] < trend_floor * mid:
        raise ValueError(
            "precondition f'(x)f(x) >> log(x) fails (decay trend "
            f"{guide[-1]:.4g} at the top vs {mid:.4g} at the midpoint); the "
            "exponential-bound method does not reach this regime"
        )

    ns = np.arange(n_threshold, run.horizon + 1)
    e_rho = expectation_rho2_profile(spec, run.horizon)[n_threshold:]
    if np.any(e_rho <= 0):
        raise ValueError("E rho_2 vanishes above the threshold; raise n_threshold")
    delta = chernoff_delta(epsilon)

    def worker(_i, rng):
        omega = sample_sequence(spec, run.horizon, rng)
        r2 = build_table(omega, 2, run.horizon, method="fast").counts
        diag = np.zeros(run.horizon + 1, dtype=np.int64)
        evens = np.arange(0, run.horizon + 1, 2)
        diag[evens] = omega.members[evens // 2]
        rho2 = (r2 - diag) // 2
        window = rho2[n_threshold:]
        exceed = np.abs(window / e_rho - 1.0) > epsilon
        return exceed, int(r2[n_threshold:].min())

    results = _map_trials(run, worker)
    exceed_counts = np.zeros(ns.size, dtype=np.int64)
    mins = np.empty(run.trials, dtype=np.int64)
    for i, (exceed, mn) in enumerate(results):
        exceed_counts += exceed
        mins[i] = mn
    return ConcentrationReport(
        epsilon=epsilon,
        delta=delta,
        n_threshold=n_threshold,
        horizon=run.horizon,
        trials=run.trials,
        ns=ns,
        expected_rho2=e_rho,
        exceed_freq=exceed_counts / run.trials,
        ceiling=np.asarray(chernoff_ceiling(epsilon, e_rho)),
        min_r2_per_trial=mins,
        frac_trials_all_positive=float(np.mean(mins > 0)),
    )


@dataclass(frozen=True)
class RegularityReport:
    """Band widths of r_d(n) / (f'(n) f(n)^(d-1)) over the top of the horizon."""

    h: int
    d_max: int
    bands: dict  # d -> (inf, sup, sup/inf)
    band_factor: float

    @property
    def passed(self) -> bool:
        return all(width <= self.band_factor for _, _, width in self.bands.values())


def regularity_propagation_check(
    omega: Sequence,
    f: GrowthFn,
    h: int,
    d_max: int,
    band_factor: float = 4.0,
    top_fraction: float = 0.5,
) -> RegularityReport:
    """Measure sup/inf of the normalized representation counts for d = h..d_max.

    If r_h is within a constant band of f' f^(h-1), the recursion propagates
    the band upward; this check reports each band and passes when every
    width sup/inf stays below ``band_factor``.
    """
    if not 2 <= h <= d_max:
        raise ValueError("need 2 <= h <= d_max")
    lo_n = max(int(omega.horizon * (1 - top_fraction)), math.ceil(f.threshold) + 1)
    ns = np.arange(lo_n, omega.horizon + 1, dtype=np.float64)
    scale_base = f.eval(ns, 1)
    bands = {}
    for d in range(h, d_max + 1):
        counts = build_table(omega, d, omega.horizon, method="fast").counts
        window = counts[lo_n:].astype(np.float64)
        ratios = window / (scale_base * f.eval(ns) ** (d - 1))
        lo, hi = float(ratios.min()), float(ratios.max())
        width = math.inf if lo == 0 else hi / lo
        bands[d] = (lo, hi, width)
    return RegularityReport(h=h, d_max=d_max, bands=bands, band_factor=band_factor)
