"""Sweeps of I(eps) over a grid, jump detection and residue estimation.

Bookkeeping used throughout: moving the line Re s = 1/2 + eps to Re s = 3/2
picks up every pole rho strictly between the two lines, in both half planes.
Residues at conjugate poles are conjugate, so

    I(eps) = I(3/2) - 2 Re S(eps),

with S(eps) the sum of residues at poles with Im rho > 0.  Crossing a single
pole as eps increases therefore raises I by 2 Re Res, i.e. the jump
``delta = I(eps_lo) - I(eps_hi)`` equals ``-2 Re Res``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .context import EvalResult, PrecisionContext, as_complex
from .errors import (
    CircleContainsMultipleZeros,
    DomainError,
    NearPoleOnContour,
    NearZeroDivisor,
    PreconditionError,
    RhxiError,
)
from .quadrature import (
    IntegralResult,
    IntegrationOptions,
    RatioIntegrand,
    adaptive_integrate,
    i_of_eps,
    reference_value,
)
from .special_functions import f_ratio, near_zero_radius, xi

__all__ = [
    "SweepResult",
    "SweepOptions",
    "JumpFlag",
    "ResidueEstimate",
    "ResidueMethod",
    "InjectedIntegrand",
    "default_eps_grid",
    "sweep",
    "detect_jumps",
    "residue_from_jump",
    "residue_at",
    "winding_number",
    "inject_pole",
]

DEFAULT_THRESHOLD = 5.0


def default_eps_grid(eps_min: float = 0.02, eps_max: float = 0.48, steps: int = 24):
    """Evenly spaced grid, rounded to 12 decimals so the values print cleanly."""
    if steps == 1:
        return (round(eps_min, 12),)
    h = (eps_max - eps_min) / (steps - 1)
    return tuple(round(eps_min + k * h, 12) for k in range(steps))


@dataclass(frozen=True)
class JumpFlag:
    eps_lo: float
    eps_hi: float
    delta: object
    significance: float


@dataclass(frozen=True)
class SweepResult:
    """I(eps) on a grid; ``values[i]`` is None where the point failed."""

    eps_grid: tuple
    values: tuple
    err_bounds: tuple
    reference: object = None
    reference_err: float = 0.0
    t_used: tuple = ()
    failed: tuple = ()
    jumps: tuple = ()

    def __post_init__(self):
        n = len(self.eps_grid)
        if len(self.values) != n or len(self.err_bounds) != n:
            raise ValueError("eps_grid, values and err_bounds must have equal length")
        if self.t_used and len(self.t_used) != n:
            raise ValueError("t_used has the wrong length")
        if self.failed and len(self.failed) != n:
            raise ValueError("failed has the wrong length")
        for e in self.eps_grid:
            if not 0 < float(e) < 1:
                raise ValueError(f"grid point {e} outside (0, 1)")
        for a, b in zip(self.eps_grid, self.eps_grid[1:]):
            if not float(a) < float(b):
                raise ValueError("eps_grid must be strictly increasing")

    def is_failed(self, i: int) -> bool:
        return self.values[i] is None or (bool(self.failed) and self.failed[i])

    def max_reference_deviation(self):
        """``max_i |I(eps_i) - reference| / (err_i + reference_err)`` over good points."""
        worst = 0.0
        for i, v in enumerate(self.values):
            if self.is_failed(i) or self.reference is None:
                continue
            d = float(abs(v - self.reference))
            bound = self.err_bounds[i] + self.reference_err
            worst = max(worst, d / bound if bound else math.inf)
        return worst


class ResidueMethod(enum.Enum):
    CONTOUR_CIRCLE = "CONTOUR_CIRCLE"
    JUMP_DELTA = "JUMP_DELTA"


@dataclass(frozen=True)
class ResidueEstimate:
    """A residue of f.  ``location`` is None for jump-based estimates, whose
    ordinate is unresolved; ``sigma_bracket`` then brackets the real part."""

    location: object
    residue: object
    method: ResidueMethod
    err: float = 0.0
    sigma_bracket: tuple | None = None
    cross_check: object = None
    winding: int | None = None

    def __post_init__(self):
        if not abs(self.residue) > 0:
            raise ValueError("reported residues must be non-zero")


# ---------------------------------------------------------------------------
# synthetic poles
# ---------------------------------------------------------------------------

class InjectedIntegrand:
    """``f(s) + sum_k [c_k / (s - s_k) + conj(c_k) / (s - conj(s_k))]``.

    The mirrored partner keeps ``g(conj s) = conj g(s)``, so the half-line
    real-part integral still equals the two-sided line integral.  The added
    terms decay only like ``1/t^2``; their contribution beyond the truncation
    height is integrated in closed form (:meth:`exact_tail`).
    """

    def __init__(self, base, poles):
        self.base = base
        self.poles = tuple(poles)
        self._cache = {}

    def _poles_in(self, ctx):
        key = ctx.precision_bits
        if key not in self._cache:
            self._cache[key] = [(as_complex(c, ctx), as_complex(s0, ctx)) for c, s0 in self.poles]
        return self._cache[key]

    def evaluate(self, s, ctx: PrecisionContext) -> EvalResult:
        m = ctx.mp
        r = self.base.evaluate(s, ctx)
        extra = m.zero
        radius = near_zero_radius(ctx)
        for c, s0 in self._poles_in(ctx):
            d1, d2 = s - s0, s - m.conj(s0)
            if float(abs(d1)) < radius or float(abs(d2)) < radius:
                raise NearZeroDivisor(f"s={s} sits on the injected pole {s0}", s=s)
            extra += c / d1 + m.conj(c) / d2
        return EvalResult(r.value + extra, r.err_bound + 8 * ctx.eps * float(abs(extra)), r.flags)

    def pole_ordinates(self, sigma, t_max, ctx):
        out = list(self.base.pole_ordinates(sigma, t_max, ctx))
        for c, s0 in self.poles:
            s0 = complex(s0) if not isinstance(s0, str) else complex(s0.replace("i", "j"))
            out.append((s0.imag, max(abs(sigma - s0.real), 1e-6)))
        return out

    def exact_tail(self, sigma, T, ctx: PrecisionContext):
        """``int_T^inf Re[added terms](sigma + it) dt`` in closed form."""
        m = ctx.mp
        total = m.zero
        sig = m.mpf(sigma)
        T = m.mpf(T)
        for c, s0 in self._poles_in(ctx):
            a = sig - s0.real
            b = s0.imag
            cr, ci = c.real, c.imag
            if a != 0:
                sgn = 1 if a > 0 else -1
                total += cr * (m.pi * sgn - m.atan((T - b) / a) - m.atan((T + b) / a))
            total -= ci / 2 * m.ln((a * a + (T - b) ** 2) / (a * a + (T + b) ** 2))
        return total + self.base.exact_tail(sigma, T, ctx)

    def tail_bound(self, sigma, T, ctx):
        return self.base.tail_bound(sigma, T, ctx)


def inject_pole(c, s0, base=None) -> InjectedIntegrand:
    """Add a synthetic simple pole with residue ``c`` at ``s0`` (and its mirror).

    ``s0`` must lie in the open strip ``1/2 < Re s0 < 1`` with ``Im s0 > 0``.
    ``base`` may itself be an injected integrand; poles accumulate.
    """
    z = complex(s0.replace("i", "j").replace(" ", "")) if isinstance(s0, str) else complex(s0)
    if not (0.5 < z.real < 1 and z.imag > 0):
        raise DomainError(f"injected pole {s0} must satisfy 1/2 < Re s0 < 1, Im s0 > 0")
    if base is None:
        base = RatioIntegrand()
    if isinstance(base, InjectedIntegrand):
        return InjectedIntegrand(base.base, base.poles + ((c, s0),))
    return InjectedIntegrand(base, ((c, s0),))


# ---------------------------------------------------------------------------
# sweep and jumps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepOptions:
    tol: float | None = None
    threshold: float = DEFAULT_THRESHOLD
    integrand: object = None
    eps_guard: float = 0.01
    T: float | None = None
    max_panels: int = 5000
    t_cap: float = 200.0
    progress: object = None
    extra: dict = field(default_factory=dict)


def sweep(eps_grid, ctx: PrecisionContext, opts: SweepOptions | None = None) -> SweepResult:
    """I(eps) at every grid point plus the reference line, then jump detection.

    A point whose line meets a zero of xi is recorded as failed; the sweep
    carries on with the next point.
    """
    opts = opts or SweepOptions()
    grid = tuple(float(e) for e in eps_grid)
    # validates the grid before any expensive work
    SweepResult(grid, (None,) * len(grid), (0.0,) * len(grid))
    integrand = opts.integrand if opts.integrand is not None else RatioIntegrand()
    iopts = IntegrationOptions(tol=opts.tol, T=opts.T, max_panels=opts.max_panels,
                               eps_guard=opts.eps_guard, integrand=integrand, t_cap=opts.t_cap)
    ref = reference_value(ctx, iopts)
    values, errs, ts, failed = [], [], [], []
    for e in grid:
        try:
            r: IntegralResult = i_of_eps(e, ctx, iopts)
        except (NearPoleOnContour, RhxiError) as exc:
            if isinstance(exc, PreconditionError):
                raise
            values.append(None)
            errs.append(0.0)
            ts.append(0.0)
            failed.append(True)
        else:
            values.append(r.value)
            errs.append(r.total_err)
            ts.append(r.T_used)
            failed.append(False)
        if opts.progress is not None:
            opts.progress(e, values[-1])
    result = SweepResult(grid, tuple(values), tuple(errs), ref.value, ref.total_err,
                         tuple(ts), tuple(failed))
    jumps = detect_jumps(result, opts.threshold)
    return SweepResult(grid, tuple(values), tuple(errs), ref.value, ref.total_err,
                       tuple(ts), tuple(failed), tuple(jumps))


def detect_jumps(result: SweepResult, threshold: float = DEFAULT_THRESHOLD) -> list:
    """Flag adjacent (non-failed) grid points whose values differ by more than
    ``threshold`` times the sum of their error bounds."""
    flags = []
    good = [i for i in range(len(result.eps_grid)) if not result.is_failed(i)]
    for i, j in zip(good, good[1:]):
        delta = result.values[i] - result.values[j]
        combined = result.err_bounds[i] + result.err_bounds[j]
        mag = float(abs(delta))
        if mag > threshold * combined:
            sig = mag / combined if combined else math.inf
            flags.append(JumpFlag(result.eps_grid[i], result.eps_grid[j], delta, sig))
    return flags


def residue_from_jump(flag: JumpFlag, result: SweepResult) -> ResidueEstimate:
    """Real part of the residue sum crossed inside ``flag``'s bracket.

    ``Re Res = -delta / 2`` (see the module docstring); the imaginary part and
    the pole ordinate are not resolved by a sweep.
    """
    i = result.eps_grid.index(flag.eps_lo)
    j = result.eps_grid.index(flag.eps_hi)
    err = (result.err_bounds[i] + result.err_bounds[j]) / 2
    delta = flag.delta
    try:
        res = -delta / 2
    except TypeError:
        res = -float(delta) / 2
    return ResidueEstimate(
        location=None,
        residue=res,
        method=ResidueMethod.JUMP_DELTA,
        err=err,
        sigma_bracket=(0.5 + flag.eps_lo, 0.5 + flag.eps_hi),
    )


# ---------------------------------------------------------------------------
# residues by contour circles
# ---------------------------------------------------------------------------

def winding_number(func, center, radius, ctx: PrecisionContext, samples: int = 64) -> int:
    """Winding number of ``func`` (EvalResult-valued) around a circle.

    The sampling is doubled until every phase increment is below pi/4.
    """
    m = ctx.mp
    center = as_complex(center, ctx)
    radius = m.mpf(radius)
    while True:
        pts = [center + radius * m.expjpi(m.mpf(2 * k) / samples) for k in range(samples)]
        vals = [func(p).value for p in pts]
        if any(v == 0 for v in vals):
            raise CircleContainsMultipleZeros("function vanishes on the circle")
        total = m.zero
        worst = 0.0
        for k in range(samples):
            step = m.arg(vals[(k + 1) % samples] / vals[k])
            worst = max(worst, abs(float(step)))
            total += step
        if worst < math.pi / 4 or samples >= 1 << 14:
            break
        samples *= 2
    return int(round(float(total / (2 * m.pi))))


def _circle_integral(func, center, radius, ctx, tol, power=0):
    """``(1/(2 pi i)) oint func(s) / (s - center)^power ds`` over the circle
    ``|s - center| = radius``, with its error estimate."""
    m = ctx.mp
    worst = [0.0]

    def integrand(theta):
        z = radius * m.expj(theta)
        r = func(center + z)
        worst[0] = max(worst[0], r.err_bound)
        return r.value * z ** (1 - power)

    breaks = [2 * m.pi * k / 8 for k in range(9)]
    value, err, _ = adaptive_integrate(integrand, breaks, tol * 2 * math.pi, ctx)
    scale = float(radius) ** (1 - power)
    return value / (2 * m.pi), err / (2 * math.pi) + worst[0] * scale


def residue_at(rho, ctx: PrecisionContext, radius: float | None = None, zeros=None) -> ResidueEstimate:
    """Residue of f at a zero ``rho`` of xi from a contour circle.

    The circle radius defaults to ``min(0.05, half the distance to the
    nearest other known zero)``.  Before any integral, the winding number of
    xi around the circle must be exactly one.  ``cross_check`` carries
    ``xi(2 rho) / xi'(rho)`` with the derivative from the same circle.
    """
    m = ctx.mp
    rho = as_complex(rho, ctx)
    if radius is None:
        if zeros is None:
            from .zeros import scan_zeros

            top = min(200.0, abs(float(rho.imag)) + 2.0)
            zeros = scan_zeros(top, 0.25, ctx, resolution=1e-8).ordinates if top > 0 else ()
        others = [abs(float(g) - abs(float(rho.imag))) for g in zeros]
        others = [d for d in others if d > 1e-6]
        radius = min([0.05] + [d / 2 for d in others])
    r = m.mpf(radius)
    w = winding_number(lambda s: xi(s, ctx), rho, r, ctx)
    if w != 1:
        raise CircleContainsMultipleZeros(
            f"xi winds {w} times around the circle of radius {float(r):g} at {m.nstr(rho, 12)}")
    tol = ctx.target_tol
    res, err_res = _circle_integral(lambda s: f_ratio(s, ctx), rho, r, ctx, tol, power=0)
    dxi, err_d = _circle_integral(lambda s: xi(s, ctx), rho, r, ctx, tol, power=2)
    num = xi(2 * rho, ctx).value
    cross = num / dxi
    return ResidueEstimate(
        location=rho,
        residue=res,
        method=ResidueMethod.CONTOUR_CIRCLE,
        err=err_res,
        cross_check=cross,
        winding=w,
    )
