import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gamma_euler, zeta_borwein
from rhxi import (
    Flag,
    NearZeroDivisor,
    PoleError,
    PrecisionContext,
    PrecisionError,
    PreconditionError,
    f_ratio,
    log_gamma,
    xi,
    xi_symmetry_residual,
    zeta,
)
from rhxi.context import as_complex

TOL = 1e-30


def close(a, b, tol):
    return abs(mpmath.mpc(a) - mpmath.mpc(b)) <= tol


# -- context ---------------------------------------------------------------

def test_context_rejects_unreachable_tolerance():
    with pytest.raises(PrecisionError):
        PrecisionContext(precision_bits=64, target_tol=1e-30)
    with pytest.raises(PreconditionError):
        PrecisionContext(precision_bits=32)


def test_context_parses_i_suffix(ctx):
    z = as_complex("0.75+10i", ctx)
    assert z == ctx.mp.mpc("0.75", "10")


def test_tightened_is_clipped_at_floor():
    c = PrecisionContext(precision_bits=128, target_tol=1e-12)
    assert c.tightened(0.0).target_tol == 2.0 ** (-128 + 64)


# -- zeta ------------------------------------------------------------------

def test_zeta_two_and_zero(ctx):
    m = ctx.mp
    r2 = zeta(2, ctx)
    assert r2.err_bound <= TOL
    assert close(r2.value, m.pi ** 2 / 6, TOL)
    r0 = zeta(0, ctx)
    assert close(r0.value, -m.mpf(1) / 2, TOL)


def test_zeta_half_matches_alternating_series(ctx):
    r = zeta(0.5, ctx)
    assert close(r.value, zeta_borwein(0.5, dps=60), 10 * TOL)


@pytest.mark.parametrize("s", [0.5 + 14.134725j, 0.75 + 10j, 1.5 + 40j, -0.7 + 3j, 3 - 2j, 0.5 + 150j])
def test_zeta_complex_matches_alternating_series(ctx, s):
    r = zeta(s, ctx)
    assert close(r.value, zeta_borwein(s, dps=60), 10 * TOL)


def test_zeta_pole(ctx):
    with pytest.raises(PoleError):
        zeta(1, ctx)


def test_zeta_error_bound_is_honest_at_low_precision():
    c = PrecisionContext(precision_bits=128, target_tol=1e-12)
    r = zeta(0.6 + 30j, c)
    with mpmath.workdps(40):
        exact = mpmath.zeta(mpmath.mpc("0.6", "30"))
    assert abs(mpmath.mpc(r.value) - exact) <= max(r.err_bound, 1e-12)


# -- log Gamma -------------------------------------------------------------

@pytest.mark.parametrize("z", [0.25, 0.5, 2.5, 3 + 2j, 1.3 - 0.7j])
def test_log_gamma_matches_euler_limit(ctx, z):
    r = log_gamma(z, ctx)
    with mpmath.workdps(60):
        g = gamma_euler(z, dps=40)
        assert abs(mpmath.exp(mpmath.mpc(r.value)) / g - 1) <= 1e-28


@pytest.mark.parametrize("z", [0.25, 1e-3 + 0j, -2.5 + 0.1j, 10 + 200j, -7.3 - 40j, 0.5 + 1e4j])
def test_log_gamma_principal_branch(ctx, z):
    r = log_gamma(z, ctx)
    with mpmath.workdps(80):
        exact = mpmath.loggamma(mpmath.mpc(z))
    assert close(r.value, exact, 10 * TOL * max(1, abs(exact)))


def test_log_gamma_quarter_frozen(ctx):
    # lnGamma(1/4), cross-checked against mpmath and the Euler-limit oracle
    assert abs(float(log_gamma(0.25, ctx).value.real) - 1.28802252469808) < 1e-14


def test_log_gamma_pole(ctx):
    with pytest.raises(PoleError):
        log_gamma(-3, ctx)


def test_log_gamma_recurrence(ctx):
    m = ctx.mp
    z = m.mpc("0.3", "7.1")
    a = log_gamma(z + 1, ctx).value
    b = log_gamma(z, ctx).value + m.log(z)
    assert close(a, b, 10 * TOL * 10)


# -- xi --------------------------------------------------------------------

def test_xi_zero_and_one(ctx):
    half = ctx.mp.mpf(1) / 2
    for s in (0, 1):
        r = xi(s, ctx)
        assert close(r.value, half, TOL)


def test_xi_half_frozen(ctx):
    assert abs(float(xi(0.5, ctx).value.real) - 0.497120778188314) < 1e-14


def test_xi_real_on_critical_line(ctx):
    for t in (3, 14.134725, 77.7, 150):
        r = xi(complex(0.5, t), ctx)
        assert abs(r.value.imag) <= r.err_bound + TOL


def test_xi_far_left_uses_reflection(ctx):
    m = ctx.mp
    s = m.mpc(-3.2, 5.5)
    with mpmath.workdps(90):
        ss = mpmath.mpc(-3.2, 5.5)
        exact = (ss - 1) * mpmath.pi ** (-ss / 2) * mpmath.gamma(1 + ss / 2) * mpmath.zeta(ss)
    r = xi(s, ctx)
    assert abs(mpmath.mpc(r.value) - exact) <= 10 * max(r.err_bound, TOL * abs(exact))


@settings(max_examples=100, deadline=None, derandomize=True)
@given(st.floats(-0.5, 1.5), st.floats(-60, 60))
def test_functional_equation_random_points(sigma, t):
    c = PrecisionContext(precision_bits=256, target_tol=1e-30)
    s = c.mp.mpc(sigma, t)
    a, b = xi(s, c), xi(1 - s, c)
    assert xi_symmetry_residual(s, c) <= 10 * (a.err_bound + b.err_bound)


@settings(max_examples=25, deadline=None, derandomize=True)
@given(st.floats(0.55, 1.5), st.floats(-50, 50))
def test_xi_conjugate_symmetry(sigma, t):
    c = PrecisionContext(precision_bits=192, target_tol=1e-25)
    s = c.mp.mpc(sigma, t)
    a, b = xi(s, c), xi(c.mp.conj(s), c)
    assert abs(a.value - c.mp.conj(b.value)) <= 2 * (a.err_bound + b.err_bound)


# -- the ratio -------------------------------------------------------------

def test_f_ratio_at_two(ctx):
    # xi(4)/xi(2) = 2 pi / 5 in closed form
    r = f_ratio(2, ctx)
    assert close(r.value, 2 * ctx.mp.pi / 5, TOL)


def test_f_ratio_against_mpmath(ctx):
    s = mpmath.mpc("0.73", "21.5")

    def ref_xi(z):
        return (z - 1) * mpmath.pi ** (-z / 2) * mpmath.gamma(1 + z / 2) * mpmath.zeta(z)

    with mpmath.workdps(80):
        exact = ref_xi(2 * s) / ref_xi(s)
    r = f_ratio(ctx.mp.mpc("0.73", "21.5"), ctx)
    assert abs(mpmath.mpc(r.value) - exact) <= max(r.err_bound, TOL) * 10
    assert Flag.CANCELLATION not in r.flags


def test_f_ratio_large_height_has_no_underflow(ctx12):
    r = f_ratio(complex(0.75, 180), ctx12)
    assert mpmath.isfinite(r.value.real)
    assert r.err_bound <= 1e-12


def test_f_ratio_refuses_exact_zero(ctx):
    gamma1 = ctx.mp.mpf("14.134725141734693790457251983562470270784257115699")
    with pytest.raises(NearZeroDivisor):
        f_ratio(ctx.mp.mpc(0.5, gamma1), ctx)


def test_f_ratio_accepts_nearby_point(ctx):
    r = f_ratio(complex(0.5, 14.1347), ctx)
    assert abs(r.value) > 1


def test_determinism(ctx):
    s = complex(0.61, 33.3)
    a, b = f_ratio(s, ctx), f_ratio(s, ctx)
    assert a.value == b.value and a.err_bound == b.err_bound
