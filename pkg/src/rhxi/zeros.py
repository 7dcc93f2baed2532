"""Zeros of xi on the critical line.

``Xi(t) = xi(1/2 + it)`` is real for real ``t``; its sign changes on a grid
are bracketed and refined with an Illinois/bisection hybrid.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

from .context import EvalResult, PrecisionContext, as_real
from .errors import NoSignChange, PreconditionError, StepTooCoarse
from .special_functions import xi

__all__ = ["ZeroList", "hardy_xi", "scan_zeros", "refine_zero", "zero_count_estimate"]

T_MAX_CAP = 200.0


@dataclass(frozen=True)
class ZeroList:
    """Ordinates of critical-line zeros with enclosure half-widths."""

    ordinates: tuple
    radii: tuple
    t_max: float

    def __post_init__(self):
        if len(self.ordinates) != len(self.radii):
            raise ValueError("ordinates and radii differ in length")
        for a, b in zip(self.ordinates, self.ordinates[1:]):
            if not a < b:
                raise ValueError("ordinates must be strictly increasing")

    def __len__(self):
        return len(self.ordinates)

    def __iter__(self):
        return iter(self.ordinates)

    def to_csv(self, digits: int = 30) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "gamma", "radius"])
        for n, (g, r) in enumerate(zip(self.ordinates, self.radii), start=1):
            w.writerow([n, _fmt(g, digits), f"{float(r):.6e}"])
        return buf.getvalue()


def _fmt(x, digits):
    from mpmath import nstr

    return nstr(x, digits, min_fixed=-3, max_fixed=8)


def hardy_xi(t, ctx: PrecisionContext) -> EvalResult:
    """``Xi(t) = xi(1/2 + it)``; the value is real, the discarded imaginary
    part is folded into the error bound."""
    m = ctx.mp
    t = as_real(t, ctx)
    r = xi(m.mpc(m.mpf(1) / 2, t), ctx)
    return EvalResult(r.value.real, r.err_bound + float(abs(r.value.imag)), r.flags)


def zero_count_estimate(T: float) -> float:
    """Riemann-von Mangoldt main term for the number of zeros with 0 < t <= T."""
    if T <= 2 * math.pi:
        return 0.0
    theta = T / 2 * math.log(T / (2 * math.pi)) - T / 2 - math.pi / 8
    return theta / math.pi + 1


def _sign(r: EvalResult) -> int:
    if abs(r.value) <= r.err_bound:
        return 0
    return 1 if r.value > 0 else -1


def _refine_ctx(ctx, resolution):
    return ctx.tightened(min(1.0, resolution * 2.0 ** -10 / ctx.target_tol))


def refine_zero(lo, hi, ctx: PrecisionContext, resolution: float | None = None):
    """Shrink a sign-change bracket of Xi to half-width ``resolution``.

    Default resolution is ``2**(-precision_bits/4)``.  Returns
    ``(gamma, radius)``: the bracket midpoint and half-width.  The final bracket
    endpoints are certified to have opposite signs (at working accuracy); if
    the sign becomes undecidable first, the last certified bracket is returned.
    """
    m = ctx.mp
    if resolution is None:
        resolution = 2.0 ** (-ctx.precision_bits / 4)
    rctx = _refine_ctx(ctx, resolution)
    lo, hi = as_real(lo, ctx), as_real(hi, ctx)
    if not lo < hi:
        raise PreconditionError("refine_zero needs lo < hi")
    flo = hardy_xi(lo, rctx)
    fhi = hardy_xi(hi, rctx)
    slo, shi = _sign(flo), _sign(fhi)
    if slo * shi >= 0:
        raise NoSignChange(f"Xi does not change sign on [{m.nstr(lo, 10)}, {m.nstr(hi, 10)}]")
    ylo, yhi = flo.value, fhi.value
    res = m.mpf(resolution)
    side = 0
    widths = [hi - lo]
    for _ in range(400):
        width = hi - lo
        if width <= 2 * res:
            break
        stalled = len(widths) >= 3 and widths[-1] > widths[-3] / 2
        if stalled:
            x = (lo + hi) / 2
            widths.clear()
        else:
            x = (lo * yhi - hi * ylo) / (yhi - ylo)
            # step just past the estimate so the far endpoint moves too
            if x - lo < res:
                x = lo + res
            elif hi - x < res:
                x = hi - res
        r = hardy_xi(x, rctx)
        sx = _sign(r)
        if sx == 0:
            # landed on the root to working accuracy: close the bracket around x
            h = res
            while x - h > lo and x + h < hi:
                a, b = hardy_xi(x - h, rctx), hardy_xi(x + h, rctx)
                if _sign(a) * _sign(b) < 0:
                    lo, hi = x - h, x + h
                    break
                h *= 4
            break
        if sx == slo:
            lo, ylo = x, r.value
            if side == -1:
                yhi /= 2
            side = -1
        else:
            hi, yhi = x, r.value
            if side == 1:
                ylo /= 2
            side = 1
        widths.append(hi - lo)
    return (lo + hi) / 2, (hi - lo) / 2


def scan_zeros(t_max, step: float = 0.25, ctx: PrecisionContext | None = None,
               resolution: float | None = None) -> ZeroList:
    """All sign changes of Xi on ``[0, t_max]`` at grid spacing ``step``.

    Emits a :class:`StepTooCoarse` warning when the count falls short of the
    Riemann-von Mangoldt estimate or two zeros lie closer than ``2 * step``.
    """
    if ctx is None:
        ctx = PrecisionContext()
    t_max = float(t_max)
    step = float(step)
    if not 0 < t_max <= T_MAX_CAP:
        raise PreconditionError(f"t_max must lie in (0, {T_MAX_CAP:g}], got {t_max:g}")
    if not 0 < step <= 0.5:
        raise PreconditionError(f"step must lie in (0, 0.5], got {step:g}")
    m = ctx.mp
    count = int(math.floor(t_max / step + 1e-9))
    grid = [m.mpf(step) * k for k in range(count + 1)]
    if grid[-1] < t_max:
        grid.append(m.mpf(t_max))
    signs = []
    for t in grid:
        s = _sign(hardy_xi(t, ctx))
        if s == 0:
            # nudge off an (improbable) exact grid hit
            s = _sign(hardy_xi(t + m.mpf(step) / 64, ctx))
        signs.append(s)
    ordinates, radii = [], []
    for (a, sa), (b, sb) in zip(zip(grid, signs), zip(grid[1:], signs[1:])):
        if sa * sb < 0:
            g, r = refine_zero(a, b, ctx, resolution)
            ordinates.append(g)
            radii.append(r)
    expected = zero_count_estimate(t_max)
    close = any(b - a < 2 * step for a, b in zip(ordinates, ordinates[1:]))
    if len(ordinates) < round(expected) - 1 or close:
        warnings.warn(
            f"scan found {len(ordinates)} zeros below {t_max:g} (estimate {expected:.1f}); "
            f"step {step:g} may be too coarse", StepTooCoarse, stacklevel=2)
    return ZeroList(tuple(ordinates), tuple(radii), t_max)
