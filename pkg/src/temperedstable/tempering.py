"""Completely monotone tempering functions and their ratio diagnostics.

A tempering function q is a completely monotone survival function on
(0, inf) with q(0+) = 1 and q(inf) = 0, represented (Bernstein) as the
Laplace transform of a probability measure Q on [0, inf).  The infimum of
the support of Q is the exponential tail index ``gamma``: translation
ratios q(x+y)/q(x) increase monotonically to e^{-gamma y}.

Four kinds are implemented: plain exponential tilting, the incomplete
gamma family (``KRTempering``), exponential times Mittag-Leffler
(``GTGSTempering``), and direct Bernstein measures (atoms or a density).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import comb, gammaln, logsumexp

from .special import (
    DomainError,
    log_upper_incomplete_gamma,
    mittag_leffler,
    upper_incomplete_gamma,
)

__all__ = [
    "BernsteinMeasure",
    "TemperingFunction",
    "ExponentialTempering",
    "KRTempering",
    "GTGSTempering",
    "BernsteinTempering",
    "NotCompletelyMonotone",
    "NotProper",
    "UnderflowSignal",
    "MonotoneRatioReport",
    "CompleteMonotonicityReport",
    "class_l_ratio",
    "check_monotone_ratio",
    "check_complete_monotonicity",
    "tilted_moment",
    "tilt_limit",
    "tail_index",
    "tempering_eval",
    "tempering_from_survival",
]


class NotProper(ValueError):
    """Tempering function does not satisfy q(0+) = 1."""


class NotCompletelyMonotone(ValueError):
    """Callable failed the complete-monotonicity screen."""


class UnderflowSignal(ArithmeticError):
    """Raw evaluation below the representable range; use log_eval."""


PROPERNESS_TOL = 1e-4
# five log-spaced probes; a single Aitken stage on three probes cannot
# separate mixed powers like eps^{0.8} + eps and mis-rejects proper inputs
_PROPERNESS_EPS = tuple(10.0 ** (-2.0 - 0.5 * k) for k in range(5))


def _aitken(seq):
    out = []
    for a, b, c in zip(seq, seq[1:], seq[2:]):
        d = c - 2.0 * b + a
        out.append(c - (c - b) ** 2 / d if abs(d) > 1e-15 else c)
    return out


def _extrapolate_to_zero(values) -> float:
    stage1 = _aitken(list(values))
    stage2 = _aitken(stage1) if len(stage1) >= 3 else stage1
    seq = stage2 if stage2 and all(math.isfinite(v) for v in stage2) else stage1
    return seq[-1] if seq else values[-1]


# ---------------------------------------------------------------------------
# Bernstein representing measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BernsteinMeasure:
    """Positive measure Q on [0, inf) with q(x) = int e^{-s x} Q(ds).

    Exactly one of ``atoms`` / ``density`` is set, or neither for kinds
    whose measure is known to exist but is not evaluated ("implicit").
    ``gamma`` is the infimum of the support and ``total_mass`` equals
    q(0+); the proper case is total_mass == 1.
    """

    gamma: float
    total_mass: float
    atoms: tuple[tuple[float, float], ...] | None = None
    density: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.atoms is not None and self.density is not None:
            raise ValueError("atoms and density are mutually exclusive")
        if self.atoms is not None:
            if not self.atoms:
                raise ValueError("empty atom list")
            if any(s < 0 or w <= 0 for s, w in self.atoms):
                raise ValueError("atoms need locations >= 0 and positive masses")
            lo = min(s for s, _ in self.atoms)
            if abs(lo - self.gamma) > 1e-12 * max(1.0, lo):
                raise ValueError(f"gamma must equal the smallest atom location {lo}")

    @property
    def representation(self) -> str:
        if self.atoms is not None:
            return "atoms"
        if self.density is not None:
            return "density"
        return "implicit"


# ---------------------------------------------------------------------------
# Tempering kinds
# ---------------------------------------------------------------------------

class TemperingFunction:
    """Base class; subclasses implement log_eval on scalars/arrays."""

    kind: str = "abstract"

    def log_eval(self, x):
        raise NotImplementedError

    def eval(self, x):
        """q(x) for x > 0 (scalar or ndarray)."""
        return np.exp(self.log_eval(x))

    @property
    def gamma(self) -> float:
        """Exponential tail index: inf of the Bernstein support."""
        raise NotImplementedError

    @property
    def bernstein_measure(self) -> BernsteinMeasure:
        raise NotImplementedError

    def tilt_limit(self) -> float:
        """c = lim_{x->inf} e^{gamma x} q(x), the mass Q({gamma})."""
        raise NotImplementedError

    def _validate_proper(self):
        qs = [float(self.eval(e)) for e in _PROPERNESS_EPS]
        limit = _extrapolate_to_zero(qs)
        if not math.isfinite(limit) or abs(limit - 1.0) > PROPERNESS_TOL:
            raise NotProper(
                f"{self.kind} tempering: q(0+) extrapolates to {limit!r}, not 1")

    def __repr__(self):  # pragma: no cover
        pairs = ", ".join(f"{k}={v!r}" for k, v in vars(self).items())
        return f"{type(self).__name__}({pairs})"


def _check_positive_x(x):
    if np.any(np.asarray(x) <= 0.0):
        raise DomainError("tempering functions are evaluated on x > 0")


class ExponentialTempering(TemperingFunction):
    """q(x) = e^{-theta x}, theta > 0."""

    kind = "exponential"

    def __init__(self, theta: float):
        if theta <= 0:
            raise ValueError("theta must be positive")
        self.theta = float(theta)
        self._validate_proper()

    def log_eval(self, x):
        _check_positive_x(x)
        return -self.theta * np.asarray(x, dtype=float)

    @property
    def gamma(self):
        return self.theta

    @property
    def bernstein_measure(self):
        return BernsteinMeasure(gamma=self.theta, total_mass=1.0,
                                atoms=((self.theta, 1.0),))

    def tilt_limit(self):
        return 1.0


class KRTempering(TemperingFunction):
    """q(x) = (alpha+p) (x/r)^{alpha+p} Gamma(-(alpha+p), x/r).

    Equivalently (alpha+p) Gamma(-alpha-p) GammaStar(-alpha-p, x/r); the
    Bernstein measure is the density (alpha+p) r^{-(alpha+p)} u^{-alpha-p-1}
    on [1/r, inf), hence gamma = 1/r and total mass 1.
    """

    kind = "kr"

    def __init__(self, alpha: float, p: float, r: float):
        if not 0.0 < alpha < 2.0:
            raise ValueError("alpha must lie in (0, 2)")
        if p <= -alpha:
            raise ValueError("p must exceed -alpha")
        if r <= 0:
            raise ValueError("r must be positive")
        self.alpha = float(alpha)
        self.p = float(p)
        self.r = float(r)
        self._ap = self.alpha + self.p
        self._validate_proper()

    def _log_scalar(self, x: float) -> float:
        w = x / self.r
        return math.log(self._ap) + self._ap * math.log(w) + log_upper_incomplete_gamma(-self._ap, w)

    def log_eval(self, x):
        _check_positive_x(x)
        if np.isscalar(x):
            return self._log_scalar(float(x))
        xa = np.asarray(x, dtype=float)
        out = np.empty(xa.shape)
        flat = xa.ravel()
        res = out.ravel()
        for i, v in enumerate(flat):
            res[i] = self._log_scalar(float(v))
        return out

    @property
    def gamma(self):
        return 1.0 / self.r

    @property
    def bernstein_measure(self):
        ap, r = self._ap, self.r

        def rho(u):
            u = np.asarray(u, dtype=float)
            return np.where(u >= 1.0 / r, ap * r ** (-ap) * u ** (-ap - 1.0), 0.0)

        return BernsteinMeasure(gamma=1.0 / r, total_mass=1.0, density=rho)

    def tilt_limit(self):
        return 0.0


class GTGSTempering(TemperingFunction):
    """q(x) = e^{-theta x} E_g(-lam x^g) with g in (0,1), lam > 0, theta >= 0.

    Product of completely monotone factors; heavy-tailed iff theta == 0,
    and gamma = theta in all cases.
    """

    kind = "gtgs"

    def __init__(self, theta: float, lam: float, gamma_ml: float):
        if theta < 0:
            raise ValueError("theta must be non-negative")
        if lam <= 0:
            raise ValueError("lam must be positive")
        if not 0.0 < gamma_ml < 1.0:
            raise ValueError("gamma_ml must lie in (0, 1)")
        self.theta = float(theta)
        self.lam = float(lam)
        self.gamma_ml = float(gamma_ml)
        self._ml_cache = {}
        self._validate_proper()

    def _ml(self, z: float) -> float:
        r = self._ml_cache.get(z)
        if r is None:
            r = mittag_leffler(self.gamma_ml, -z).value
            if len(self._ml_cache) < 1 << 16:
                self._ml_cache[z] = r
        return r

    def log_eval(self, x):
        _check_positive_x(x)
        if np.isscalar(x):
            x = float(x)
            return -self.theta * x + math.log(self._ml(self.lam * x ** self.gamma_ml))
        xa = np.asarray(x, dtype=float)
        out = np.empty(xa.shape)
        flat, res = xa.ravel(), out.ravel()
        for i, v in enumerate(flat):
            res[i] = -self.theta * v + math.log(self._ml(self.lam * v ** self.gamma_ml))
        return out

    @property
    def gamma(self):
        return self.theta

    @property
    def bernstein_measure(self):
        return BernsteinMeasure(gamma=self.theta, total_mass=1.0)

    def tilt_limit(self):
        return 0.0


class BernsteinTempering(TemperingFunction):
    """q as the Laplace transform of an explicit Bernstein measure."""

    kind = "bernstein"

    def __init__(self, measure: BernsteinMeasure):
        if measure.representation == "implicit":
            raise ValueError("measure must have atoms or a density")
        self.measure = measure
        self._validate_proper()

    def log_eval(self, x):
        _check_positive_x(x)
        g = self.measure.gamma
        if self.measure.atoms is not None:
            locs = np.array([s for s, _ in self.measure.atoms])
            logw = np.log([w for _, w in self.measure.atoms])
            xa = np.asarray(x, dtype=float)
            expo = -np.multiply.outer(xa, locs) + logw
            return logsumexp(expo, axis=-1) if expo.ndim > 1 else logsumexp(expo)

        rho = self.measure.density

        def log_scalar(xv: float) -> float:
            # shifted transform: q(x) = e^{-g x} int_0^inf e^{-t x} rho(g+t) dt;
            # the exponential factor truncates effectively at t ~ 40/x, also
            # passed as a breakpoint hint
            f = lambda t: math.exp(-t * xv) * float(rho(g + t))
            split = min(max(1.0, 40.0 / xv), 1e6)
            inner = integrate.quad(f, 0.0, split, limit=300,
                                   epsabs=1e-300, epsrel=1e-11)[0]
            inner += integrate.quad(f, split, np.inf, limit=300,
                                    epsabs=1e-15, epsrel=1e-11)[0]
            if inner <= 0.0:
                raise UnderflowSignal(f"Laplace transform underflow at x={xv}")
            return -g * xv + math.log(inner)

        if np.isscalar(x):
            return log_scalar(float(x))
        xa = np.asarray(x, dtype=float)
        out = np.empty(xa.shape)
        flat, res = xa.ravel(), out.ravel()
        for i, v in enumerate(flat):
            res[i] = log_scalar(float(v))
        return out

    @property
    def gamma(self):
        return self.measure.gamma

    @property
    def bernstein_measure(self):
        return self.measure

    def tilt_limit(self):
        if self.measure.atoms is not None:
            g = self.measure.gamma
            return sum(w for s, w in self.measure.atoms if abs(s - g) <= 1e-12 * max(1.0, g))
        return 0.0


class _CallableTempering(TemperingFunction):
    """Raw survival callable accepted by tempering_from_survival."""

    kind = "callable"

    def __init__(self, f: Callable, gamma: float):
        self._f = f
        self._gamma = float(gamma)

    def log_eval(self, x):
        _check_positive_x(x)
        if np.isscalar(x):
            v = float(self._f(float(x)))
            if v <= 0.0:
                raise UnderflowSignal("survival callable returned a non-positive value")
            return math.log(v)
        xa = np.asarray(x, dtype=float)
        v = np.array([float(self._f(float(t))) for t in xa.ravel()]).reshape(xa.shape)
        if np.any(v <= 0.0):
            raise UnderflowSignal("survival callable returned a non-positive value")
        return np.log(v)

    @property
    def gamma(self):
        return self._gamma

    @property
    def bernstein_measure(self):
        return BernsteinMeasure(gamma=self._gamma, total_mass=1.0)

    def tilt_limit(self):
        lx = self.log_eval(np.array([200.0, 400.0]))
        return float(np.exp(self._gamma * 400.0 + lx[1])) if np.isfinite(lx[1]) else 0.0


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def tempering_eval(q: TemperingFunction, x):
    """q(x); domain error for x <= 0."""
    return q.eval(x)


def tail_index(q: TemperingFunction) -> float:
    return q.gamma


def class_l_ratio(q: TemperingFunction, x: float, y: float) -> float:
    """Translation ratio q(x+y)/q(x), computed through logs.

    Bounded above by e^{-gamma y} and monotone increasing in x toward that
    limit.  y = 0 gives exactly 1.
    """
    if y < 0:
        raise DomainError("y must be non-negative")
    if y == 0:
        _check_positive_x(x)
        return 1.0
    la = q.log_eval(x + y)
    lb = q.log_eval(x)
    if not np.all(np.isfinite(lb)):
        raise UnderflowSignal(f"q underflows in log space at x={x}")
    return float(np.exp(la - lb))


@dataclass(frozen=True)
class MonotoneRatioReport:
    passed: bool
    first_violation_index: int | None
    ratios: np.ndarray = field(repr=False)


def check_monotone_ratio(q, y: float, xs: Sequence[float],
                         slack: float = 1e-12) -> MonotoneRatioReport:
    """Is x -> q(x+y)/q(x) non-decreasing along the ascending grid xs?

    True for every completely monotone q (log-convexity); fails for e.g.
    the Weibull survival function with shape > 1.  ``q`` may be a
    TemperingFunction or a raw positive callable.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or len(xs) < 2 or np.any(np.diff(xs) <= 0) or xs[0] <= 0:
        raise ValueError("xs must be a strictly ascending positive grid")
    if isinstance(q, TemperingFunction):
        lr = q.log_eval(xs + y) - q.log_eval(xs)
        ratios = np.exp(lr)
    else:
        fx = np.asarray([q(float(v)) for v in xs], dtype=float)
        fxy = np.asarray([q(float(v) + y) for v in xs], dtype=float)
        ratios = fxy / fx
    bad = np.nonzero(np.diff(ratios) < -slack)[0]
    if len(bad):
        return MonotoneRatioReport(False, int(bad[0] + 1), ratios)
    return MonotoneRatioReport(True, None, ratios)


@dataclass(frozen=True)
class CompleteMonotonicityReport:
    passed: bool
    worst_margin_by_order: dict[int, float]
    failed_orders: tuple[int, ...]


def check_complete_monotonicity(q, xs: Sequence[float], max_order: int = 8,
                                h: float = 0.1, tol: float | None = None) -> CompleteMonotonicityReport:
    """Finite-difference screen for (-1)^n d^n q / dx^n >= 0, n <= max_order.

    For completely monotone q the forward differences satisfy
    (-1)^n Delta_h^n q(x) >= 0 exactly; we allow a roundoff margin that
    grows as 2^n eps.  A necessary-condition screen, not a proof; orders
    above 8 are rejected because difference amplification swamps the signal
    in double precision.
    """
    if not 1 <= max_order <= 8:
        raise ValueError("max_order must be between 1 and 8")
    xs = np.asarray(xs, dtype=float)
    f = (lambda v: np.exp(q.log_eval(v))) if isinstance(q, TemperingFunction) \
        else (lambda v: np.asarray([q(float(t)) for t in np.atleast_1d(v)]))
    margins: dict[int, float] = {}
    failed = []
    for n in range(1, max_order + 1):
        js = np.arange(n + 1)
        coef = ((-1.0) ** (n - js)) * comb(n, js)
        vals = np.stack([np.asarray(f(xs + j * h), dtype=float) for j in js])
        delta = np.tensordot(coef, vals, axes=(0, 0))
        signed = ((-1.0) ** n) * delta
        scale = np.abs(vals).max(axis=0)
        thresh = (tol if tol is not None else 0.0) + 64.0 * 2.0 ** n * np.finfo(float).eps * scale
        margins[n] = float(np.min(signed))
        if np.any(signed < -thresh):
            failed.append(n)
    return CompleteMonotonicityReport(not failed, margins, tuple(failed))


def _log_integrand_decays(logf: Callable[[float], float],
                          x_probe: Sequence[float]) -> bool:
    """Decide whether exp(logf) is integrable on (X0, inf) from decay probes.

    Integrable when logf eventually decreases faster than -(1+margin) ln x;
    used to detect moment-generating-function divergence without symbolic
    reasoning about the tempering kind.
    """
    xs = np.asarray(x_probe, dtype=float)
    ls = np.array([logf(float(v)) for v in xs])
    if np.any(~np.isfinite(ls)):
        return bool(np.all(ls[~np.isfinite(ls)] == -np.inf))
    # growing tail: divergent
    if ls[-1] > ls[-3] + 1e-9:
        return False
    # algebraic decay exponent from the last probes
    slope = (ls[-1] - ls[-3]) / (math.log(xs[-1]) - math.log(xs[-3]))
    return slope < -1.0 - 1e-3


_MGF_PROBE = (50.0, 100.0, 200.0, 400.0, 800.0, 1600.0, 3200.0, 6400.0, 12800.0)


def tilted_moment(q: TemperingFunction, s: float) -> float:
    """Moment generating function of the law with survival function q.

    Evaluates 1 + s int_0^inf e^{s x} q(x) dx when the integral converges
    and returns +inf otherwise (always the case for s > gamma; at s = gamma
    finiteness depends on the tilted integrand's decay, probed numerically).
    s = 0 gives exactly 1.
    """
    if s == 0.0:
        return 1.0
    if s < 0.0 or s < q.gamma:
        val, _ = integrate.quad(
            lambda x: math.exp(s * x + float(q.log_eval(x))), 0.0, np.inf,
            limit=400, epsabs=1e-13, epsrel=1e-12)
        return 1.0 + s * val
    if not _log_integrand_decays(lambda x: s * x + float(q.log_eval(x)), _MGF_PROBE):
        return math.inf
    val, _ = integrate.quad(
        lambda x: math.exp(s * x + float(q.log_eval(x))), 0.0, np.inf,
        limit=400, epsabs=1e-13, epsrel=1e-12)
    return 1.0 + s * val


def tilt_limit(q: TemperingFunction) -> float:
    """c = lim e^{gamma x} q(x) >= 0 (the mass of Q at its support infimum)."""
    return q.tilt_limit()


def tempering_from_survival(f: Callable, gamma: float,
                            xs: Sequence[float] | None = None,
                            max_order: int = 6) -> TemperingFunction:
    """Wrap a raw survival callable after screening it.

    Rejects callables failing the properness extrapolation or the
    complete-monotonicity finite-difference screen (necessary conditions
    only).  ``gamma`` must be supplied by the caller; recovering it from a
    raw callable is out of scope.
    """
    if xs is None:
        xs = np.geomspace(0.05, 20.0, 80)
    wrapped = _CallableTempering(f, gamma)
    limit = _extrapolate_to_zero([float(f(e)) for e in _PROPERNESS_EPS])
    if not math.isfinite(limit) or abs(limit - 1.0) > PROPERNESS_TOL:
        raise NotProper(f"survival callable: q(0+) extrapolates to {limit!r}")
    report = check_complete_monotonicity(wrapped, xs, max_order=max_order)
    if not report.passed:
        raise NotCompletelyMonotone(
            f"finite-difference screen failed at orders {report.failed_orders}")
    return wrapped
