"""The parametric growth family c * x^a * log(x)^b.

Every density profile the workbench needs (x^(1/h) log(x)^(1/h), x/log x,
x^(1/2), ...) lives in this family, which keeps f, f' and f'' in closed form
and serializable.  Iterated logarithms are a documented extension point, not
implemented.

Classification is numeric: monotonicity and variation ratios f(lambda x)/f(x)
are sampled on a log grid, and "f' bounded" / "f divergent" are operationalized
as top-decade trend tests, since limits cannot be observed on a finite range.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["GrowthFn", "ClassifyReport", "growth_fn", "parse_growth", "classify"]

# Scan grid for locating the validity threshold alpha.  Starts just above 1
# because log(x)^b needs log x > 0; for pure powers the threshold is then the
# first grid point.
_ALPHA_SCAN_LO = 1.01
_ALPHA_SCAN_POINTS = 4096


@dataclass(frozen=True)
class GrowthFn:
    """f(x) = coefficient * x**exponent * log(x)**log_exponent for x >= threshold."""

    coefficient: float
    exponent: float
    log_exponent: float
    threshold: float

    def __post_init__(self):
        if self.coefficient <= 0:
            raise ValueError("coefficient must be positive")
        if self.threshold <= 1 and self.log_exponent != 0:
            raise ValueError("threshold must exceed 1 when log factors are present")
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")

    def __call__(self, x, order: int = 0):
        return self.eval(x, order)

    def eval(self, x, order: int = 0):
        """Closed-form f, f' or f''.  Accepts scalars or numpy arrays.

        With L = log x:
            f   = c x^a L^b
            f'  = c x^(a-1) (a L^b + b L^(b-1))
            f'' = c x^(a-2) (a(a-1) L^b + b(2a-1) L^(b-1) + b(b-1) L^(b-2))
        """
        arr = np.asarray(x, dtype=np.float64)
        if np.any(arr < self.threshold * (1 - 1e-9)):
            bad = np.min(arr)
            raise ValueError(f"x={bad} below threshold {self.threshold}")
        arr = np.maximum(arr, self.threshold)  # absorb endpoint roundoff
        c, a, b = self.coefficient, self.exponent, self.log_exponent
        L = np.log(arr)
        if order == 0:
            out = c * arr**a * L**b
        elif order == 1:
            out = c * arr ** (a - 1) * (a * L**b + b * L ** (b - 1))
        elif order == 2:
            out = c * arr ** (a - 2) * (
                a * (a - 1) * L**b
                + b * (2 * a - 1) * L ** (b - 1)
                + b * (b - 1) * L ** (b - 2)
            )
        else:
            raise ValueError("order must be 0, 1 or 2")
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def spec_string(self) -> str:
        """Round-trippable text form ``c*x^a*log(x)^b``."""
        return (
            f"{self.coefficient:g}*x^{self.exponent:g}*log(x)^{self.log_exponent:g}"
        )


def _scan_threshold(c: float, a: float, b: float, x_max: float) -> float:
    """Smallest scan-grid point > 1 from which f and f' are positive and
    f' keeps one sign of slope, up to x_max."""
    probe = GrowthFn(c, a, b, threshold=min(_ALPHA_SCAN_LO, 1.01))
    xs = np.geomspace(_ALPHA_SCAN_LO, x_max, _ALPHA_SCAN_POINTS)
    f = probe.eval(xs, 0)
    fp = probe.eval(xs, 1)
    ok = (f > 0) & (fp > 0)
    d = np.diff(fp)
    slope = np.sign(d)
    slope[np.abs(d) <= 1e-12 * np.abs(fp[:-1])] = 0  # dead zone near critical points
    # f' monotone from index i onward: all later slope signs agree (0 allowed)
    nonzero = slope != 0
    last_sign = slope[nonzero][-1] if nonzero.any() else 0.0
    mono_from = np.ones(xs.size, dtype=bool)
    bad_slope = nonzero & (slope != last_sign)
    if bad_slope.any():
        last_bad = np.flatnonzero(bad_slope)[-1]
        mono_from[: last_bad + 1] = False
    if (~ok).any():
        last_bad = np.flatnonzero(~ok)[-1]
        mono_from[: last_bad + 1] = False
    candidates = np.flatnonzero(mono_from)
    if candidates.size == 0:
        raise ValueError(
            f"no validity threshold found for c={c}, a={a}, b={b} on (1, {x_max}]"
        )
    return float(xs[candidates[0]])


def growth_fn(
    coefficient: float = 1.0,
    exponent: float = 1.0,
    log_exponent: float = 0.0,
    threshold: float | None = None,
    x_max: float = 1e9,
) -> GrowthFn:
    """Construct a family member, scanning for the threshold when not given."""
    if threshold is None:
        threshold = _scan_threshold(coefficient, exponent, log_exponent, x_max)
    return GrowthFn(coefficient, exponent, log_exponent, threshold)


_NUM = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+(?:\.\d*)?)?"
_SPEC_RE = re.compile(
    rf"^\s*(?:({_NUM})\s*\*\s*)?x(?:\^({_NUM}))?(?:\s*\*\s*log\(x\)\^({_NUM}))?\s*$"
)


def _parse_num(text: str) -> float:
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def parse_growth(spec: str, x_max: float = 1e9) -> GrowthFn:
    """Parse ``c*x^a*log(x)^b`` (c and the log factor optional; a defaults to 1).

    Exponents accept plain numbers or simple fractions, e.g. ``x^1/2`` or
    ``x^0.5*log(x)^0.5``.
    """
    m = _SPEC_RE.match(spec)
    if not m:
        raise ValueError(f"malformed growth spec {spec!r}; expected c*x^a*log(x)^b")
    c = _parse_num(m.group(1)) if m.group(1) else 1.0
    a = _parse_num(m.group(2)) if m.group(2) else 1.0
    b = _parse_num(m.group(3)) if m.group(3) else 0.0
    return growth_fn(c, a, b, x_max=x_max)


@dataclass(frozen=True)
class ClassifyReport:
    """Numeric type-1 / type-2 verdicts over a finite test range."""

    is_type1: bool
    is_type2: bool
    f_positive: bool
    f_monotone: bool
    fp_positive: bool
    fp_monotone: bool
    fp_bounded: bool
    f_divergent: bool
    variation_bounds: dict

    def __str__(self):
        t = "type-1" if self.is_type1 else "not type-1"
        t2 = ", type-2" if self.is_type2 else ", not type-2"
        return f"<{t}{t2} variation={self.variation_bounds}>"


def _monotone(values: np.ndarray, rel_tol: float = 1e-12) -> bool:
    d = np.diff(values)
    scale = np.abs(values[:-1]) + 1e-300
    up = d >= -rel_tol * scale
    down = d <= rel_tol * scale
    return bool(up.all() or down.all())


def classify(
    f: GrowthFn,
    test_range: tuple[float, float] | None = None,
    lambdas=(0.5, 2.0, 10.0),
    grid_points: int = 512,
    divergence_factor: float = 2.0,
    bounded_tol: float = 0.05,
) -> ClassifyReport:
    """Sample f and f' on a log grid and issue type-1/type-2 verdicts.

    Type-1 requires f positive and monotone (O-regular variation is reported
    via per-lambda sup/inf of f(lambda x)/f(x), which is finite for every
    member of this family).  Type-2 additionally requires f' positive,
    monotone and bounded, and f divergent; "bounded" means f' grows by at
    most ``bounded_tol`` across the top decade, "divergent" means f grows by
    at least ``divergence_factor`` across the range.
    """
    lo, hi = test_range if test_range is not None else (f.threshold, 1e9)
    lo = max(lo, f.threshold)
    lam_max = max(max(lambdas), 1.0)
    if hi / lam_max <= lo:
        raise ValueError("test range too small for requested lambdas")
    xs = np.geomspace(lo, hi, grid_points)
    fv = f.eval(xs, 0)
    fpv = f.eval(xs, 1)

    f_positive = bool((fv > 0).all())
    f_monotone = _monotone(fv)
    fp_positive = bool((fpv > 0).all())
    fp_monotone = _monotone(fpv)

    variation = {}
    for lam in lambdas:
        base = xs[(xs * lam >= lo) & (xs * lam <= hi)]
        if base.size == 0:
            raise ValueError(f"grid empty for lambda={lam}")
        ratio = f.eval(base * lam, 0) / f.eval(base, 0)
        variation[lam] = (float(ratio.min()), float(ratio.max()))

    top = xs >= hi / 10.0
    fp_top = fpv[top]
    # bounded = no growth across the top decade (decay is fine)
    fp_bounded = bool(fp_top[-1] <= fp_top[0] * (1.0 + bounded_tol))
    f_divergent = bool(fv[-1] >= divergence_factor * fv[0])

    is_type1 = f_positive and f_monotone
    is_type2 = (
        f_positive
        and f_monotone
        and fp_positive
        and fp_monotone
        and fp_bounded
        and f_divergent
    )
    return ClassifyReport(
        is_type1=is_type1,
        is_type2=is_type2,
        f_positive=f_positive,
        f_monotone=f_monotone,
        fp_positive=fp_positive,
        fp_monotone=fp_monotone,
        fp_bounded=fp_bounded,
        f_divergent=f_divergent,
        variation_bounds=variation,
    )
