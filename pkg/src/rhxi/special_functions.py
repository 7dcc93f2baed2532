"""Arbitrary-precision log-Gamma, zeta, the completed xi function and the ratio
``f(s) = xi(2s) / xi(s)``.

All routines take a :class:`~rhxi.context.PrecisionContext` and return an
:class:`~rhxi.context.EvalResult` whose ``err_bound`` is a first-order
propagated estimate (truncation bound plus a rounding allowance).

The zeta function is evaluated by Euler-Maclaurin summation with the
Backlund remainder bound; log-Gamma by the Stirling series after shifting the
argument to the right.  ``xi`` is formed from the fused product
``(s - 1) * zeta(s)`` so that it stays accurate through ``s = 1``.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .context import EvalResult, Flag, PrecisionContext, as_complex
from .errors import NearZeroDivisor, PoleError, PrecisionError

__all__ = [
    "log_gamma",
    "zeta",
    "xi",
    "f_ratio",
    "xi_symmetry_residual",
    "near_zero_radius",
]

_LOG_2PI = math.log(2 * math.pi)
_MAX_TERMS = 4000

# Rectangle on which xi is evaluated directly; left of it the functional
# equation xi(s) = xi(1 - s) is used instead.
XI_DIRECT_MIN_RE = -1.0


def near_zero_radius(ctx: PrecisionContext) -> float:
    """Distance to a zero of xi below which the ratio refuses to divide."""
    return 2.0 ** (-ctx.precision_bits / 8)


def _log_abs_bernoulli(k: int) -> float:
    # upper bound for log|B_{2k}| from |B_2k| = 2 (2k)! zeta(2k) / (2 pi)^{2k}
    return math.log(2.0) + math.lgamma(2 * k + 1) - 2 * k * _LOG_2PI - math.log1p(-2.0 ** (1 - 2 * k))


@lru_cache(maxsize=64)
def _stirling_coefficients(bits: int, count: int):
    # B_{2k} / (2k (2k - 1)),  k = 1 .. count
    from .context import _mp_for

    m = _mp_for(bits)
    return tuple(m.bernoulli(2 * k) / (2 * k * (2 * k - 1)) for k in range(1, count + 1))


@lru_cache(maxsize=64)
def _em_coefficients(bits: int, count: int):
    # B_{2k} / (2k)!,  k = 1 .. count
    from .context import _mp_for

    m = _mp_for(bits)
    return tuple(m.bernoulli(2 * k) / m.factorial(2 * k) for k in range(1, count + 1))


@lru_cache(maxsize=64)
def _logs(bits: int, count: int):
    from .context import _mp_for

    m = _mp_for(bits)
    return tuple(m.ln(n) if n > 1 else m.zero for n in range(0, count + 1))


# ---------------------------------------------------------------------------
# log Gamma
# ---------------------------------------------------------------------------

def _stirling_terms(absw: float, half_arg: float, log_tol: float):
    """Number of Stirling terms reaching ``log_tol`` at ``|w|``, or None."""
    lsec = -math.log(math.cos(half_arg))
    lw = math.log(absw)
    prev = math.inf
    for K in range(1, 400):
        lb = (_log_abs_bernoulli(K + 1) - math.log((2 * K + 2) * (2 * K + 1))
              - (2 * K + 1) * lw + (2 * K + 2) * lsec)
        if lb <= log_tol:
            return K, math.exp(lb)
        if lb > prev:
            return None
        prev = lb
    return None


def _log_gamma(m, z, tol: float, eps: float):
    x, y = float(z.real), float(z.imag)
    log_tol = math.log(tol)
    # smallest radius at which the optimally truncated series reaches tol
    r_need = max(1.0, -log_tol / (2 * math.pi) + 1.0)
    n = 0 if x >= 1 else math.ceil(1 - x)
    if math.hypot(x + n, y) < r_need:
        n = max(n, math.ceil(math.sqrt(max(r_need ** 2 - y * y, 0.0)) - x))
    while True:
        wx = x + n
        plan = _stirling_terms(math.hypot(wx, y), 0.5 * math.atan2(abs(y), wx), log_tol)
        if plan is not None:
            break
        n += 1
    K, trunc = plan
    w = z + n
    lw = m.ln(w)
    acc = (w - 0.5) * lw - w + m.ln(2 * m.pi) / 2
    coeffs = _stirling_coefficients(m.prec, max(K, 8))
    winv = 1 / w
    winv2 = winv * winv
    p = winv
    for k in range(K):
        acc += coeffs[k] * p
        p *= winv2
    for k in range(n):
        acc -= m.ln(z + k)
    scale = max(1.0, float(abs(acc)), float(abs(lw)) * (abs(wx) + abs(y) + 1))
    rounding = 8.0 * (n + K + 4) * eps * scale
    return acc, trunc + rounding


def log_gamma(z, ctx: PrecisionContext) -> EvalResult:
    """Principal branch of ``log Gamma(z)``.

    The argument is shifted right by ``n`` until the Stirling series converges
    to the requested tolerance; the shift is undone with a sum of principal
    logarithms, which keeps the branch continuous off the negative real axis.

    Raises :class:`PoleError` within ``2**(-precision_bits/2)`` of a
    non-positive integer.
    """
    m = ctx.mp
    z = as_complex(z, ctx)
    _check_gamma_pole(z, ctx)
    val, err = _log_gamma(m, z, ctx.target_tol / 16, ctx.eps)
    flags = frozenset() if err <= ctx.target_tol else frozenset({Flag.CANCELLATION})
    return EvalResult(val, err, flags)


def _check_gamma_pole(z, ctx):
    x = float(z.real)
    if x > 0.5:
        return
    k = round(x)
    if k <= 0 and float(abs(z - k)) < 2.0 ** (-ctx.precision_bits / 2):
        raise PoleError(f"Gamma has a pole at {k}")


# ---------------------------------------------------------------------------
# zeta by Euler-Maclaurin
# ---------------------------------------------------------------------------

_N_CANDIDATES = tuple(sorted({max(2, int(round(2 ** (j / 4)))) for j in range(0, 60)}))


@lru_cache(maxsize=4096)
def _em_plan(sig_lo: float, sig_hi: float, t_hi: float, log_tol: float):
    """Choose (N, M) for every s with sig_lo <= Re s <= sig_hi, |Im s| <= t_hi.

    Uses the Backlund bound |R_M| <= |s + 2M + 1| / (Re s + 2M + 1) |T_{M+1}|,
    with T_k = B_2k / (2k)! * s (s+1) ... (s+2k-2) * N^(-s-2k+1), evaluated on
    the worst case of the box.
    """

    def absmax(j):
        return math.hypot(max(abs(sig_lo + j), abs(sig_hi + j)), t_hi)

    # log prod_{j=0}^{2k-2} |s + j|, k = 1..
    logprod = [0.0]
    best = None
    for N in _N_CANDIDATES:
        if best is not None and N >= best[2]:
            break
        lN = math.log(N)
        prev = math.inf
        for k in range(1, 2000):
            while len(logprod) <= k:
                kk = len(logprod)
                lp = logprod[-1]
                for j in ((0,) if kk == 1 else (2 * kk - 3, 2 * kk - 2)):
                    lp += math.log(max(absmax(j), 1e-300))
                logprod.append(lp)
            # bound after M = k - 1 correction terms
            M = k - 1
            denom = sig_lo + 2 * M + 1
            if denom <= 0.5:
                continue
            lT = _log_abs_bernoulli(k) - math.lgamma(2 * k + 1) + logprod[k] - (sig_lo + 2 * k - 1) * lN
            lb = lT + math.log(absmax(2 * M + 1) / denom)
            if lb <= log_tol:
                cost = N + 0.5 * M
                if best is None or cost < best[2]:
                    best = (N, M, cost, math.exp(lb))
                break
            if lb > prev and k > 3:
                break
            prev = lb
    if best is None:
        raise PrecisionError("Euler-Maclaurin parameters cannot reach the requested tolerance")
    return best[0], best[1], best[3]


def _box(s):
    # conservative parameter box: Re s to 1/16, |Im s| to the next integer
    x, y = float(s.real), abs(float(s.imag))
    lo = math.floor(x * 16) / 16
    return lo, lo + 1 / 16, math.floor(y) + 1.0


def _zeta_em(m, s, tol: float, eps: float, fused: bool):
    """zeta(s) (or (s - 1) zeta(s) when ``fused``) and its error estimate."""
    sig_lo, sig_hi, t_hi = _box(s)
    N, M, trunc = _em_plan(sig_lo, sig_hi, t_hi, math.floor(math.log2(tol)) * math.log(2))
    logs = _logs(m.prec, N)
    acc = m.fsum(m.exp(-s * logs[n]) for n in range(2, N)) + 1
    NN = m.exp(-s * logs[N])
    coeffs = _em_coefficients(m.prec, max(M, 8))
    corr = m.zero
    if M:
        x = NN / N
        poch = s
        inv_n2 = m.one / (N * N)
        corr = coeffs[0] * poch * x
        for k in range(2, M + 1):
            poch *= (s + (2 * k - 3)) * (s + (2 * k - 2))
            x *= inv_n2
            corr += coeffs[k - 1] * poch * x
    sm1 = s - 1
    head = acc + NN / 2 + corr
    sig = float(s.real)
    mag = max(1.0, N ** (1 - sig))
    if fused:
        val = sm1 * head + N * NN
        scale = mag * (1.0 + float(abs(sm1)))
        err = float(abs(sm1)) * trunc
    else:
        val = head + N * NN / sm1
        scale = mag * (1.0 + 1.0 / float(abs(sm1)))
        err = trunc
    err += 16.0 * (N + M + 4) * eps * scale
    return val, err


def zeta(s, ctx: PrecisionContext) -> EvalResult:
    """Riemann zeta by Euler-Maclaurin summation.

    Valid on the rectangle ``-1 <= Re s <= 4`` used by this package (and well
    beyond it, at growing cost).  ``PoleError`` at ``s = 1``.
    """
    m = ctx.mp
    s = as_complex(s, ctx)
    if float(abs(s - 1)) < 2.0 ** (-ctx.precision_bits / 2):
        raise PoleError("zeta has a pole at s = 1")
    val, err = _zeta_em(m, s, ctx.target_tol / 16, ctx.eps, fused=False)
    flags = set()
    if err > ctx.target_tol:
        flags.add(Flag.CANCELLATION)
    if float(abs(s - 1)) < 2.0 ** (-ctx.precision_bits / 4):
        flags.add(Flag.NEAR_POLE)
    return EvalResult(val, err, frozenset(flags))


# ---------------------------------------------------------------------------
# xi and the ratio
# ---------------------------------------------------------------------------

def _xi_parts(m, s, tol_log: float, tol_fused: float, eps: float):
    """log of the prefactor pi^(-s/2) Gamma(1 + s/2), the fused (s-1) zeta(s),
    and their absolute errors.  Points left of the direct rectangle are
    reflected to 1 - s first."""
    if float(s.real) < XI_DIRECT_MIN_RE:
        s = 1 - s
    lg, err_lg = _log_gamma(m, 1 + s / 2, tol_log, eps)
    L = lg - s / 2 * m.ln(m.pi)
    err_L = err_lg + 4 * eps * float(abs(L))
    F, err_F = _zeta_em(m, s, tol_fused, eps, fused=True)
    return L, err_L, F, err_F


def xi(s, ctx: PrecisionContext) -> EvalResult:
    """Completed xi function ``(s - 1) pi^(-s/2) Gamma(1 + s/2) zeta(s)``.

    Entire; ``s = 1`` is handled by the fused ``(s - 1) zeta(s)``.  The
    result carries ``NEAR_POLE`` when the value cannot be distinguished from
    zero at its own error, i.e. ``s`` sits on a zero of xi to working accuracy.
    """
    m = ctx.mp
    s = as_complex(s, ctx)
    tol = ctx.target_tol
    # size of the prefactor decides how accurately the zeta part is needed
    probe = float(abs(m.exp(_log_gamma(m, 1 + s / 2, 1e-6, ctx.eps)[0] - s / 2 * m.ln(m.pi))))
    L, err_L, F, err_F = _xi_parts(m, s, tol / 16, tol / (16 * max(1.0, probe)), ctx.eps)
    pref = m.exp(L)
    val = pref * F
    aval = float(abs(val))
    err = float(abs(pref)) * err_F + aval * 1.01 * err_L + 4 * ctx.eps * aval
    flags = set()
    if float(abs(F)) <= 4 * err_F:
        flags.add(Flag.NEAR_POLE)
    if err > tol:
        flags.add(Flag.CANCELLATION)
    return EvalResult(val, err, frozenset(flags))


def _distance_to_zero(m, s, F, tol: float, eps: float) -> float:
    # Newton distance |F / F'| with F' from a central difference
    h = 2.0 ** -10
    Fp, _ = _zeta_em(m, s + h, tol, eps, fused=True)
    Fm, _ = _zeta_em(m, s - h, tol, eps, fused=True)
    dF = (Fp - Fm) / (2 * h)
    adF = float(abs(dF))
    if adF == 0:
        return 0.0
    return float(abs(F)) / adF


def f_ratio(s, ctx: PrecisionContext) -> EvalResult:
    """The ratio ``f(s) = xi(2s) / xi(s)``.

    Computed as ``exp(L(2s) - L(s)) * F(2s) / F(s)`` with ``L`` the log of
    the Gamma/pi prefactor and ``F(s) = (s - 1) zeta(s)``, so no intermediate
    underflows at large heights.  Internal tolerances are tightened until
    the propagated error of the ratio meets ``ctx.target_tol``.

    Raises :class:`NearZeroDivisor` when ``s`` lies within
    :func:`near_zero_radius` of a zero of xi (Newton distance), or when
    ``xi(s)`` is indistinguishable from zero at its error.
    """
    m = ctx.mp
    s = as_complex(s, ctx)
    tol = ctx.target_tol
    inner = tol / 256
    radius = near_zero_radius(ctx)
    floor = 2.0 ** (-ctx.precision_bits + ctx.guard_bits)
    checked = False
    for _ in range(4):
        L1, eL1, F1, eF1 = _xi_parts(m, s, inner, inner, ctx.eps)
        aF1 = float(abs(F1))
        if aF1 <= eF1:
            raise NearZeroDivisor(f"xi({s}) is zero to working accuracy", s=s, distance=0.0)
        if not checked and aF1 < radius * 1e4 * (1 + float(abs(s))):
            d = _distance_to_zero(m, s, F1, inner, ctx.eps)
            if d < radius:
                raise NearZeroDivisor(
                    f"s={s} lies {d:.3g} from a zero of xi (radius {radius:.3g})", s=s, distance=d)
            checked = True
        L2, eL2, F2, eF2 = _xi_parts(m, 2 * s, inner, inner, ctx.eps)
        val = m.exp(L2 - L1) * F2 / F1
        aval = float(abs(val))
        aF2 = float(abs(F2))
        rel = eL1 + eL2 + eF1 / aF1 + (eF2 / aF2 if aF2 else 0.0) + 8 * ctx.eps
        err = aval * rel
        if aF2 == 0:
            err += float(abs(m.exp(L2 - L1))) * eF2 / aF1
        if err <= tol or inner <= floor:
            break
        inner = max(inner * min(2.0 ** -4, tol / err / 16), floor)
    flags = frozenset() if err <= tol else frozenset({Flag.CANCELLATION})
    return EvalResult(val, err, flags)


def xi_symmetry_residual(s, ctx: PrecisionContext):
    """``|xi(s) - xi(1 - s)|``; zero up to error for every ``s``."""
    s = as_complex(s, ctx)
    a = xi(s, ctx).value
    b = xi(1 - s, ctx).value
    return abs(a - b)
