"""Integrals along vertical lines.

The generic engine is a globally adaptive Gauss-Kronrod scheme: the panel
with the largest ``|K - G|`` is bisected until the sum of the estimates meets
the tolerance.  Panels are summed in left-endpoint order, so results are
bit-identical for identical inputs.

Truncation of the half-line integrals uses a calibrated decay envelope
``C t^a exp(-pi t / 4)`` for the integrand; see :func:`tail_bound`.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .context import EvalResult, PrecisionContext, as_real
from .errors import (
    CalibrationError,
    MaxPanelsExceeded,
    NearPoleOnContour,
    NearZeroDivisor,
    NonFiniteIntegrand,
    PreconditionError,
    RhxiError,
)
from .gauss_kronrod import gauss_kronrod
from .special_functions import f_ratio, log_gamma, xi

__all__ = [
    "ContourSpec",
    "IntegralResult",
    "IntegrationOptions",
    "RatioIntegrand",
    "integrate_vertical",
    "i_of_eps",
    "reference_value",
    "j_of_eps",
    "closed_form_j",
    "tail_bound",
    "xi_tail_bound",
    "f_envelope",
    "xi_envelope",
    "choose_T",
    "calibrate_tail_model",
]

T_CAP = 200.0
DEFAULT_RULE = 15
DEFAULT_PANEL_WIDTH = 2.0

# Envelope constants: max over sigma in {0.6, 1.0, 1.5}, t in [10, 60] of
# |f| (sigma - 1/2) / (t^a exp(-pi t/4)) was 1.52 (resp. 1.31 for |xi|);
# 4x margin, rounded up.
F_TAIL_C = 6.5
XI_TAIL_C = 5.5
CALIBRATION_SIGMAS = (0.6, 1.0, 1.5)


def f_exponent(sigma: float) -> float:
    return sigma / 2 + 0.5


def xi_exponent(sigma: float) -> float:
    return (3 + sigma) / 2 + 0.25


def f_envelope(sigma: float, t: float) -> float:
    """Calibrated pointwise bound for ``|f(sigma + it)|``, ``t >= 10``."""
    return F_TAIL_C / (sigma - 0.5) * t ** f_exponent(sigma) * math.exp(-math.pi * t / 4)


def xi_envelope(sigma: float, t: float) -> float:
    """Calibrated pointwise bound for ``|xi(sigma + it)|``, ``t >= 10``."""
    return XI_TAIL_C * t ** xi_exponent(sigma) * math.exp(-math.pi * t / 4)


def _integrated(envelope_at_T: float, a: float, T: float) -> float:
    # int_T^inf t^a e^{-pi t/4} dt <= T^a e^{-pi T/4} (4/pi) / (1 - 4a/(pi T))
    return envelope_at_T * (4 / math.pi) / (1 - 4 * a / (math.pi * T))


def tail_bound(sigma, T, ctx: PrecisionContext | None = None) -> float:
    """Bound on ``|int_T^inf Re f(sigma + it) dt|`` from the calibrated envelope.

    Of the form ``C e^(-pi T/4) T^a``; valid for ``T >= 10`` and
    ``1/2 < sigma <= 2``.  The envelope is calibrated, not proven.
    """
    sigma, T = float(sigma), float(T)
    if T < 10:
        raise PreconditionError(f"tail_bound needs T >= 10, got {T:g}")
    if not 0.5 < sigma <= 2:
        raise PreconditionError(f"tail_bound needs 1/2 < sigma <= 2, got {sigma:g}")
    return _integrated(f_envelope(sigma, T), f_exponent(sigma), T)


def xi_tail_bound(sigma, T) -> float:
    """Bound on ``|int_T^inf Re xi(sigma + it) dt|`` for ``sigma >= 1/2``."""
    sigma, T = float(sigma), float(T)
    if T < 10:
        raise PreconditionError(f"xi_tail_bound needs T >= 10, got {T:g}")
    if not 0.5 <= sigma <= 2:
        raise PreconditionError(f"xi_tail_bound needs 1/2 <= sigma <= 2, got {sigma:g}")
    return _integrated(xi_envelope(sigma, T), xi_exponent(sigma), T)


def choose_T(bound, target: float, cap: float = T_CAP) -> float:
    """Smallest ``T >= 10`` (to 1/8) with ``bound(T) <= target``, capped at ``cap``."""
    if bound(10.0) <= target:
        return 10.0
    lo, hi = 10.0, 20.0
    while bound(hi) > target:
        lo, hi = hi, 2 * hi
        if hi >= cap:
            hi = cap
            break
    if bound(hi) > target:
        return cap
    while hi - lo > 0.125:
        mid = (lo + hi) / 2
        if bound(mid) <= target:
            hi = mid
        else:
            lo = mid
    return math.ceil(hi * 8) / 8


def calibrate_tail_model(ctx: PrecisionContext | None = None, sigmas=CALIBRATION_SIGMAS,
                         t_grid=None) -> float:
    """Sample ``|f|`` against :func:`f_envelope`; return the largest ratio seen.

    Raises :class:`CalibrationError` if any sample exceeds the envelope.
    """
    if ctx is None:
        ctx = PrecisionContext(precision_bits=128, target_tol=1e-10)
    if t_grid is None:
        t_grid = [10 + 0.25 * k for k in range(201)]
    m = ctx.mp
    worst = 0.0
    for sigma in sigmas:
        for t in t_grid:
            val = float(abs(f_ratio(m.mpc(sigma, t), ctx).value))
            ratio = val / f_envelope(sigma, t)
            worst = max(worst, ratio)
            if ratio > 1:
                raise CalibrationError(
                    f"|f({sigma}+{t}i)| = {val:.3g} exceeds the envelope by {ratio:.3g}x")
    return worst


@dataclass(frozen=True)
class ContourSpec:
    """Integration of a function of ``t`` over ``[0, T]`` on the line ``Re s = sigma``."""

    sigma: float
    T: float
    tol: float
    max_panels: int = 5000

    def __post_init__(self):
        if not 0.5 < float(self.sigma) <= 2:
            raise PreconditionError(f"sigma must lie in (1/2, 2], got {self.sigma}")
        if not float(self.T) > 0:
            raise PreconditionError(f"T must be positive, got {self.T}")
        if not float(self.tol) > 0:
            raise PreconditionError(f"tol must be positive, got {self.tol}")
        if int(self.max_panels) < 1:
            raise PreconditionError("max_panels must be positive")


@dataclass(frozen=True)
class IntegralResult:
    value: object
    quad_err: float
    tail_err: float
    T_used: float
    panels: int
    imag_residual: float | None = None

    def __post_init__(self):
        for name in ("quad_err", "tail_err"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be finite and non-negative, got {v}")

    @property
    def total_err(self) -> float:
        return self.quad_err + self.tail_err


# ---------------------------------------------------------------------------
# adaptive engine
# ---------------------------------------------------------------------------

@dataclass
class _Panel:
    a: object
    b: object
    kronrod: object
    err: float


def _apply_rule(rule, fn, a, b):
    c = (a + b) / 2
    h = (b - a) / 2
    vals = [fn(c + h * x) for x in rule.nodes]
    K = h * sum(w * v for w, v in zip(rule.kronrod_weights, vals))
    G = h * sum(w * vals[i] for w, i in zip(rule.gauss_weights, rule.gauss_index))
    return K, float(abs(K - G))


def adaptive_integrate(fn, breakpoints, tol: float, ctx: PrecisionContext,
                       max_panels: int = 5000, rule_n: int = DEFAULT_RULE):
    """Globally adaptive Gauss-Kronrod integration of ``fn`` over the span of
    ``breakpoints`` (sorted, at least two).  ``fn`` may be real or complex.

    Returns ``(value, err_estimate, panel_count)``.
    """
    m = ctx.mp
    rule = gauss_kronrod(rule_n, ctx.precision_bits)
    pts = sorted(set(m.mpf(p) for p in breakpoints))
    if len(pts) < 2:
        raise PreconditionError("need at least two distinct breakpoints")
    min_width = m.mpf(2) ** (-ctx.precision_bits // 2) * max(1, abs(pts[-1] - pts[0]))
    heap = []
    total = 0.0
    serial = 0
    panels = {}
    for a, b in zip(pts, pts[1:]):
        K, e = _apply_rule(rule, fn, a, b)
        panels[serial] = _Panel(a, b, K, e)
        heapq.heappush(heap, (-e, a, serial))
        serial += 1
        total += e
    # the running total drifts by ~1e-16 of its largest value; resum exactly
    # whenever it has fallen far enough for that drift to matter
    resync_below = total * 2.0 ** -30
    while True:
        if total <= tol or total < resync_below:
            total = math.fsum(q.err for q in panels.values())
            resync_below = total * 2.0 ** -30
            if total <= tol:
                break
        if len(panels) >= max_panels:
            raise MaxPanelsExceeded(
                f"{len(panels)} panels, error estimate {total:.3g} > tol {tol:.3g}")
        _, _, key = heapq.heappop(heap)
        p = panels.pop(key)
        if p.b - p.a < min_width:
            raise MaxPanelsExceeded(f"panel at {m.nstr(p.a, 12)} cannot be split further")
        mid = (p.a + p.b) / 2
        total -= p.err
        for a, b in ((p.a, mid), (mid, p.b)):
            K, e = _apply_rule(rule, fn, a, b)
            panels[serial] = _Panel(a, b, K, e)
            heapq.heappush(heap, (-e, a, serial))
            serial += 1
            total += e
    ordered = sorted(panels.values(), key=lambda q: q.a)
    value = m.fsum(q.kronrod for q in ordered)
    err = math.fsum(q.err for q in ordered)
    return value, err, len(ordered)


class _Evaluator:
    """Wraps an EvalResult-returning callable: records the worst error bound
    and converts failures into :class:`NonFiniteIntegrand`."""

    def __init__(self, func, m, part="real"):
        self.func = func
        self.m = m
        self.part = part
        self.max_err = 0.0

    def __call__(self, t):
        try:
            r = self.func(t)
        except RhxiError as exc:
            raise NonFiniteIntegrand(f"integrand failed at t={self.m.nstr(t, 12)}: {exc}") from exc
        if isinstance(r, EvalResult):
            v, e = r.value, r.err_bound
        else:
            v, e = r, 0.0
        if self.part == "real":
            v = self.m.re(v)
        if not self.m.isfinite(v) if self.part == "real" else not (
                self.m.isfinite(self.m.re(v)) and self.m.isfinite(self.m.im(v))):
            raise NonFiniteIntegrand(f"non-finite integrand at t={self.m.nstr(t, 12)}")
        if e > self.max_err:
            self.max_err = e
        return v


def integrate_vertical(integrand, spec: ContourSpec, ctx: PrecisionContext,
                       breakpoints=None, rule_n: int = DEFAULT_RULE) -> IntegralResult:
    """``int_0^T integrand(t) dt`` for a real-valued integrand of ``t``.

    ``integrand`` may return a plain number or an :class:`EvalResult`; in the
    latter case the worst evaluation error times ``T`` is added to
    ``quad_err``.  ``breakpoints`` seed the initial panels (default: width
    :data:`DEFAULT_PANEL_WIDTH`).  ``tail_err`` is zero: the truncation is the
    caller's business.
    """
    m = ctx.mp
    T = as_real(spec.T, ctx)
    pts = _uniform_breaks(T, DEFAULT_PANEL_WIDTH)
    if breakpoints:
        pts += [m.mpf(b) for b in breakpoints if 0 < b < T]
    ev = _Evaluator(integrand, m)
    try:
        value, err, n = adaptive_integrate(ev, pts, float(spec.tol), ctx, spec.max_panels, rule_n)
    except NonFiniteIntegrand:
        raise
    quad_err = err + ev.max_err * float(T)
    return IntegralResult(value, quad_err, 0.0, float(T), n)


def _uniform_breaks(T, width):
    n = max(1, math.ceil(float(T) / width))
    return [T * k / n for k in range(n + 1)]


def _graded_breaks(center: float, scale: float, lo: float, hi: float, width: float):
    # panels adjacent to `center` are scale/2 wide, doubling outward up to `width`
    out = []
    h = scale / 2
    while h < width:
        for p in (center - h, center + h):
            if lo < p < hi:
                out.append(p)
        h *= 2
    if lo < center < hi:
        out.append(center)
    return out


# ---------------------------------------------------------------------------
# integrands on vertical lines
# ---------------------------------------------------------------------------

class RatioIntegrand:
    """``f(s) = xi(2s) / xi(s)`` as an integrand on vertical lines.

    ``zeros`` (a ZeroList or sequence of ordinates) locates the poles on the
    critical line for panel grading; when omitted they are scanned on first
    use and kept on the instance.
    """

    def __init__(self, zeros=None):
        self._zeros = None if zeros is None else [float(g) for g in zeros]
        self._zeros_t = math.inf if zeros is not None else 0.0

    def evaluate(self, s, ctx: PrecisionContext) -> EvalResult:
        return f_ratio(s, ctx)

    def pole_ordinates(self, sigma: float, t_max: float, ctx: PrecisionContext):
        """(ordinate, scale) pairs of nearby singularities for panel grading."""
        if sigma - 0.5 >= DEFAULT_PANEL_WIDTH:
            return []
        if self._zeros_t < t_max:
            from .zeros import scan_zeros

            zl = scan_zeros(min(t_max, T_CAP), 0.25, ctx.with_tol(max(ctx.target_tol, 1e-12)),
                            resolution=1e-8)
            self._zeros = [float(g) for g in zl.ordinates]
            self._zeros_t = t_max
        return [(g, sigma - 0.5) for g in self._zeros if g <= t_max + 1]

    def exact_tail(self, sigma: float, T: float, ctx: PrecisionContext):
        return ctx.mp.zero

    def tail_bound(self, sigma: float, T: float, ctx: PrecisionContext) -> float:
        return tail_bound(sigma, T, ctx)


@dataclass(frozen=True)
class IntegrationOptions:
    """Knobs for :func:`i_of_eps`, :func:`reference_value` and :func:`j_of_eps`.

    ``tol`` defaults to ``ctx.target_tol``; ``T`` to the smallest height whose
    tail bound is below ``tol/2``; ``two_sided`` integrates the complex
    integrand over ``[-T, T]`` instead of using conjugate symmetry.
    """

    tol: float | None = None
    T: float | None = None
    max_panels: int = 5000
    eps_guard: float = 0.01
    integrand: object = None
    rule_n: int = DEFAULT_RULE
    two_sided: bool = False
    t_cap: float = T_CAP
    extra: dict = field(default_factory=dict)


def _line_integral(sigma, ctx: PrecisionContext, opts: IntegrationOptions, integrand):
    """``(1/pi) int_0^inf Re g(sigma + it) dt`` for an integrand object ``g``."""
    m = ctx.mp
    tol = float(opts.tol if opts.tol is not None else ctx.target_tol)
    sig = float(sigma)
    if opts.T is None:
        T = choose_T(lambda T: integrand.tail_bound(sig, T, ctx) / math.pi, tol / 2, opts.t_cap)
    else:
        T = float(opts.T)
    tail_err = integrand.tail_bound(sig, max(T, 10.0), ctx) / math.pi if T >= 10 else math.inf
    if not math.isfinite(tail_err):
        raise PreconditionError("truncation height must be at least 10")
    Tm = m.mpf(T)
    # evaluation error integrated over [0, T] is kept below tol/8
    ectx = ctx.tightened(min(1.0, tol * math.pi / (8 * max(T, 1.0)) / ctx.target_tol))
    sig_m = m.mpf(sigma)
    pts = _uniform_breaks(Tm, DEFAULT_PANEL_WIDTH)
    for g, scale in integrand.pole_ordinates(sig, T, ctx):
        pts += _graded_breaks(g, scale, 0.0, T, DEFAULT_PANEL_WIDTH)
    if opts.two_sided:
        pts = sorted(set([-p for p in pts] + pts))
        ev = _Evaluator(lambda t: integrand.evaluate(m.mpc(sig_m, t), ectx), m, part="complex")
        quad_tol = tol / 4 * 2 * math.pi
    else:
        ev = _Evaluator(lambda t: integrand.evaluate(m.mpc(sig_m, t), ectx), m)
        quad_tol = tol / 4 * math.pi
    value, err, n = adaptive_integrate(ev, pts, quad_tol, ctx, opts.max_panels, opts.rule_n)
    span = 2 * T if opts.two_sided else T
    imag_residual = None
    if opts.two_sided:
        value, imag = value.real / (2 * m.pi), value.imag / (2 * m.pi)
        imag_residual = float(abs(imag))
        quad_err = (err + ev.max_err * span) / (2 * math.pi)
    else:
        value = value / m.pi
        quad_err = (err + ev.max_err * span) / math.pi
    value += integrand.exact_tail(sig, T, ctx) / m.pi
    return IntegralResult(value, quad_err, tail_err, T, n, imag_residual)


def i_of_eps(eps, ctx: PrecisionContext, opts: IntegrationOptions | None = None) -> IntegralResult:
    """``I(eps) = (1/pi) int_0^inf Re f(1/2 + eps + it) dt``.

    Requires ``eps_guard <= eps <= 1``.  Raises :class:`NearPoleOnContour`
    if the line passes within the near-zero radius of a zero of xi.
    """
    opts = opts or IntegrationOptions()
    e = float(eps)
    if not (0 < e <= 1):
        raise PreconditionError(f"eps must lie in (0, 1], got {eps}")
    if e < opts.eps_guard:
        raise PreconditionError(f"eps={e:g} below the guard {opts.eps_guard:g}")
    integrand = opts.integrand if opts.integrand is not None else RatioIntegrand()
    sigma = ctx.mp.mpf(1) / 2 + as_real(eps, ctx)
    try:
        return _line_integral(sigma, ctx, opts, integrand)
    except NonFiniteIntegrand as exc:
        if isinstance(exc.__cause__, NearZeroDivisor):
            raise NearPoleOnContour(f"line Re s = 1/2 + {e:g} meets a zero of xi: {exc.__cause__}") from exc
        raise


def reference_value(ctx: PrecisionContext, opts: IntegrationOptions | None = None) -> IntegralResult:
    """``(1/pi) int_0^inf Re f(3/2 + it) dt``; the line is free of poles."""
    opts = opts or IntegrationOptions()
    integrand = opts.integrand if opts.integrand is not None else RatioIntegrand()
    return _line_integral(ctx.mp.mpf(3) / 2, ctx, opts, integrand)


class _XiIntegrand:
    def evaluate(self, s, ctx):
        return xi(s, ctx)

    def pole_ordinates(self, sigma, t_max, ctx):
        return []

    def exact_tail(self, sigma, T, ctx):
        return ctx.mp.zero

    def tail_bound(self, sigma, T, ctx):
        return xi_tail_bound(sigma, T)


def j_of_eps(eps, ctx: PrecisionContext, opts: IntegrationOptions | None = None) -> IntegralResult:
    """``int_{-inf}^{inf} xi(1/2 + eps + it) dt``, as ``2 int_0^inf Re xi``.

    With ``opts.two_sided`` the complex integrand is integrated over
    ``[-T, T]`` directly and the imaginary residue is reported.
    """
    opts = opts or IntegrationOptions()
    e = float(eps)
    if not 0 <= e <= 1.5:
        raise PreconditionError(f"eps must lie in [0, 1.5], got {eps}")
    tol = float(opts.tol if opts.tol is not None else ctx.target_tol)
    # _line_integral works in units of 1/pi (or 1/(2 pi)); J = 2 pi * that
    inner = IntegrationOptions(tol=tol / (2 * math.pi), T=opts.T, max_panels=opts.max_panels,
                               rule_n=opts.rule_n, two_sided=opts.two_sided, t_cap=opts.t_cap)
    sigma = ctx.mp.mpf(1) / 2 + as_real(eps, ctx)
    r = _line_integral(sigma, ctx, inner, _XiIntegrand())
    scale = 2 * math.pi
    return IntegralResult(
        r.value * 2 * ctx.mp.pi,
        r.quad_err * scale,
        r.tail_err * scale,
        r.T_used,
        r.panels,
        None if r.imag_residual is None else r.imag_residual * scale,
    )


def closed_form_j(ctx: PrecisionContext):
    """``pi^(1/4) / sqrt(32) * Gamma(1/4) * (Gamma(1/4)^8 / (32 pi^4) - 3)``."""
    m = ctx.mp
    # full working precision, independent of target_tol
    g = m.exp(log_gamma(m.mpf(1) / 4, ctx.tightened(0.0)).value.real)
    return m.pi ** (m.mpf(1) / 4) / m.sqrt(32) * g * (g ** 8 / (32 * m.pi ** 4) - 3)
