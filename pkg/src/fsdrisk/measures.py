"""Closed-form risk functionals on step CDFs.

Everything here evaluates a DiscreteDist to an extended real using exact
breakpoint arithmetic, no grids and no root finding.  The quantile-style
measures (var, benchmark_loss_var, lambda_quantile) are the ones stable
under the dominance lattice; expected_shortfall is included as the
standard functional that is consistent with the dominance order but not
max- or min-stable, which the axiom harness demonstrates by witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .dist import DiscreteDist
from .steps import DEC, MonotoneStep

INF = math.inf


@dataclass(frozen=True)
class RiskMeasure:
    """A named distribution functional.

    ``fn`` maps a DiscreteDist to an extended real and must be pure;
    ``params`` carries the defining parameters as ordered pairs so that
    measures remain immutable, printable values.
    """

    name: str
    fn: Callable[[DiscreteDist], float]
    params: tuple[tuple[str, object], ...] = ()

    def __call__(self, F: DiscreteDist) -> float:
        return self.fn(F)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self.params)
        return f"RiskMeasure({self.name}, {inner})" if inner else f"RiskMeasure({self.name})"


def _check_level_curve(lam: MonotoneStep, positive: bool) -> None:
    if lam.direction != DEC:
        raise ValueError("level curve must be decreasing")
    if lam.at_one is not None:
        raise ValueError("level curve takes real arguments, at_one does not apply")
    for v in lam.values:
        if not 0.0 <= v <= 1.0 or (positive and v <= 0.0):
            band = "(0, 1]" if positive else "[0, 1]"
            raise ValueError(f"level curve values must lie in {band}, got {v}")


def var(F: DiscreteDist, a: float) -> float:
    """Left quantile of F at level a, a in (0, 1) strictly.

    Equals sup{x : F(x) < a} for step CDFs.
    """
    if not 0.0 < a < 1.0:
        raise ValueError(f"level must lie strictly in (0, 1), got {a}")
    return F.left_quantile(a)


def benchmark_loss_var(F: DiscreteDist, h: Callable[[float], float]) -> float:
    """Largest gap between a quantile and the benchmark curve h.

    ``h`` is increasing on [0, 1] with h(1) = +inf (anything finite
    there is rejected); it may be a MonotoneStep or a plain callable.
    For a step CDF the sup over levels collapses to a max over atoms:
    the i-th atom contributes x_i - h(P_{i-1}), with P_0 = 0, because
    the quantile sits at x_i exactly on the level interval left of P_i
    and h is evaluated at that interval's lower end.
    """
    if h(1.0) != INF:
        raise ValueError("benchmark curve must be +inf at 1")
    best = -INF
    prev = 0.0
    for x, lev in zip(F.xs, F.cum):
        hp = h(prev)
        if hp != INF:
            term = x - hp
            if term > best:
                best = term
        prev = lev
    return best


def lambda_quantile(F: DiscreteDist, lam: MonotoneStep) -> float:
    """sup{x : F(x) < lam(x)} for a decreasing level curve into [0, 1].

    The difference F - lam is increasing, so the strict sublevel set is
    a left ray; the scan below finds its endpoint among the merged
    breakpoints.  Returns -inf when the set is empty.
    """
    _check_level_curve(lam, positive=False)
    bs = sorted(set(F.xs).union(lam.breakpoints))
    best = bs[0] if lam.values[0] > 0.0 else -INF
    for i, b in enumerate(bs):
        if F.cdf(b) < lam(b):
            best = bs[i + 1] if i + 1 < len(bs) else INF
    return best


def lambda_quantile_dual(F: DiscreteDist, lam: MonotoneStep) -> tuple[float, float]:
    """The two one-sided closed forms of the curve-indexed quantile.

    Returns (sup over x of min(Q(lam(x)), x), inf over x of
    max(Q(lam(x)), x)) where Q is the left quantile of F.  Both agree
    with lambda_quantile; the curve must stay in (0, 1] so that Q is
    defined at every level the curve takes.  Each form is evaluated
    piecewise: on an interval where the curve is constant the inner
    expression is monotone in x, so only interval endpoints matter.
    """
    _check_level_curve(lam, positive=True)
    qs = [F.left_quantile(v) for v in lam.values]
    ends = list(lam.breakpoints) + [INF]
    lefts = [-INF] + list(lam.breakpoints)
    sup_form = max(min(q, e) for q, e in zip(qs, ends))
    inf_form = min(max(q, l) for q, l in zip(qs, lefts))
    return sup_form, inf_form


def expected_shortfall(F: DiscreteDist, a: float) -> float:
    """Average of the left quantile over levels above a, a in (0, 1)."""
    if not 0.0 < a < 1.0:
        raise ValueError(f"level must lie strictly in (0, 1), got {a}")
    terms = []
    lo = 0.0
    for x, hi in zip(F.xs, F.cum):
        if hi > a:
            terms.append(x * (hi - max(lo, a)))
        lo = hi
    return math.fsum(terms) / (1.0 - a)


def transform_measure(rho: RiskMeasure, f: Callable[[float], float]) -> RiskMeasure:
    """Compose a measure with a strictly increasing real map.

    Monotonicity of ``f`` is probed on a coarse grid and a failure is
    rejected; infinite measure values pass through untouched.
    """
    probes = [-64.0 + 0.5 * k for k in range(257)]
    vals = [float(f(t)) for t in probes]
    for v in vals:
        if math.isnan(v) or math.isinf(v):
            raise ValueError("transform must be finite on the probe grid")
    if any(vals[i] >= vals[i + 1] for i in range(256)):
        raise ValueError("transform is not strictly increasing on the probe grid")

    def evaluate(F: DiscreteDist, _rho: RiskMeasure = rho, _f: Callable[[float], float] = f) -> float:
        v = _rho(F)
        if v == INF or v == -INF:
            return v
        return float(_f(v))

    return RiskMeasure(
        name=f"transformed({rho.name})",
        fn=evaluate,
        params=rho.params + (("transformed", True),),
    )


def affine_benchmark(slope: float, intercept: float = 0.0) -> Callable[[float], float]:
    """Benchmark curve slope * p + intercept on [0, 1), +inf at 1."""
    if not slope >= 0.0:
        raise ValueError(f"benchmark slope must be nonnegative, got {slope}")

    def h(p: float) -> float:
        return INF if p >= 1.0 else slope * p + intercept

    return h


# -- measure values for the harness, engine and CLI ----------------------


def var_measure(a: float) -> RiskMeasure:
    if not 0.0 < a < 1.0:
        raise ValueError(f"level must lie strictly in (0, 1), got {a}")
    return RiskMeasure("var", lambda F, _a=a: var(F, _a), (("alpha", a),))


def benchmark_loss_measure(h: Callable[[float], float]) -> RiskMeasure:
    if h(1.0) != INF:
        raise ValueError("benchmark curve must be +inf at 1")
    return RiskMeasure("benchmark_loss_var", lambda F, _h=h: benchmark_loss_var(F, _h), (("h", h),))


def lambda_quantile_measure(lam: MonotoneStep) -> RiskMeasure:
    _check_level_curve(lam, positive=False)
    return RiskMeasure("lambda_quantile", lambda F, _l=lam: lambda_quantile(F, _l), (("level_curve", lam),))


def expected_shortfall_measure(a: float) -> RiskMeasure:
    if not 0.0 < a < 1.0:
        raise ValueError(f"level must lie strictly in (0, 1), got {a}")
    return RiskMeasure("expected_shortfall", lambda F, _a=a: expected_shortfall(F, _a), (("alpha", a),))


def pinned_measure(x0: float, g: MonotoneStep) -> RiskMeasure:
    """g(F(x0)): constant on point masses away from x0, hence degenerate."""
    if not math.isfinite(x0):
        raise ValueError(f"pin location must be finite, got {x0}")
    if g.direction != DEC:
        raise ValueError("pinned value curve must be decreasing")
    return RiskMeasure("pinned", lambda F, _x=x0, _g=g: _g(F.cdf(_x)), (("x0", x0), ("g", g)))
