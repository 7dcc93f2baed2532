import math

import mpmath
import pytest

from rhxi import (
    ContourSpec,
    IntegrationOptions,
    MaxPanelsExceeded,
    NearPoleOnContour,
    PrecisionContext,
    PreconditionError,
    closed_form_j,
    i_of_eps,
    integrate_vertical,
    j_of_eps,
    reference_value,
    tail_bound,
)
from rhxi.gauss_kronrod import gauss_kronrod
from rhxi.quadrature import (
    adaptive_integrate,
    calibrate_tail_model,
    choose_T,
    f_envelope,
    xi_envelope,
)
from rhxi.special_functions import f_ratio, xi

# J = int xi(1/2 + eps + it) dt, evaluated from the Gamma(1/4) closed form at
# 80 digits with mpmath and confirmed by direct quadrature below
J_EXACT = "5.61335880355538436610182854764"


# -- Gauss-Kronrod rule ----------------------------------------------------

@pytest.mark.parametrize("n", [7, 15])
def test_rule_exact_for_polynomials(n):
    rule = gauss_kronrod(n, 128)
    m = mpmath.mp
    for deg in range(0, 3 * n + 2):
        k = sum(w * x ** deg for w, x in zip(rule.kronrod_weights, rule.nodes))
        g = sum(w * rule.nodes[i] ** deg for w, i in zip(rule.gauss_weights, rule.gauss_index))
        exact = m.mpf(2) / (deg + 1) if deg % 2 == 0 else 0
        assert abs(k - exact) < 1e-35
        if deg < 2 * n:
            assert abs(g - exact) < 1e-35


def test_rule_matches_quadpack_g7k15():
    rule = gauss_kronrod(7, 128)
    nodes = sorted(float(x) for x in rule.nodes)
    assert abs(nodes[-1] - 0.991455371120812639206854697526329) < 1e-15
    assert abs(nodes[-2] - 0.949107912342758524526189684047851) < 1e-15
    w = dict(zip((float(x) for x in rule.nodes), (float(v) for v in rule.kronrod_weights)))
    assert abs(w[0.0] - 0.209482141084727828012999174891714) < 1e-15


# -- adaptive engine -------------------------------------------------------

def test_adaptive_integrate_smooth(ctx):
    m = ctx.mp
    v, err, _ = adaptive_integrate(m.sin, [0, m.pi], 1e-30, ctx)
    assert abs(v - 2) < 1e-30
    assert err < 1e-30


def test_adaptive_integrate_peaked_complex(ctx):
    m = ctx.mp
    a = m.mpf("0.01")
    # int_{-1}^{1} 1/(a + i t) dt = 2 atan(1/a); the odd imaginary part cancels
    v, err, n = adaptive_integrate(lambda t: 1 / (a + 1j * t), [-1, 1], 1e-25, ctx)
    assert abs(v - 2 * m.atan(1 / a)) < 1e-25
    assert n > 2


def test_adaptive_integrate_is_deterministic(ctx):
    m = ctx.mp
    f = lambda t: m.exp(-t) * m.cos(7 * t)
    a = adaptive_integrate(f, [0, 3], 1e-28, ctx)
    b = adaptive_integrate(f, [0, 3], 1e-28, ctx)
    assert a == b


def test_adaptive_integrate_panel_limit(ctx):
    with pytest.raises(MaxPanelsExceeded):
        adaptive_integrate(lambda t: 1 / (t + ctx.mp.mpf(10) ** -40), [0, 1], 1e-30, ctx, max_panels=20)


def test_integrate_vertical(ctx):
    m = ctx.mp
    r = integrate_vertical(lambda t: m.exp(-t), ContourSpec(sigma=1, T=20, tol=1e-28), ctx)
    assert abs(r.value - (1 - m.exp(-20))) < 1e-28
    assert r.tail_err == 0


def test_contour_spec_validation():
    with pytest.raises(PreconditionError):
        ContourSpec(sigma=0.5, T=10, tol=1e-8)
    with pytest.raises(PreconditionError):
        ContourSpec(sigma=1, T=-1, tol=1e-8)


# -- tail model ------------------------------------------------------------

def test_tail_model_covers_samples():
    ctx = PrecisionContext(precision_bits=128, target_tol=1e-10)
    grid = [10 + 3.7 * k for k in range(40)]
    worst = calibrate_tail_model(ctx, sigmas=(0.52, 0.8, 1.3, 2.0), t_grid=grid)
    assert 0 < worst <= 1


def test_xi_envelope_covers_samples(ctx12):
    m = ctx12.mp
    for sigma in (0.5, 0.8, 1.5, 2.0):
        for t in (10, 23.5, 61, 140):
            assert float(abs(xi(m.mpc(sigma, t), ctx12).value)) <= xi_envelope(sigma, t)


def test_tail_bound_dominates_actual_tail():
    ctx = PrecisionContext(precision_bits=128, target_tol=1e-12)
    m = ctx.mp
    sigma, T = 1.0, 20.0
    actual = m.quad(lambda t: m.re(f_ratio(m.mpc(sigma, t), ctx).value), [T, 30, 45, 70])
    assert abs(actual) <= tail_bound(sigma, T)


def test_tail_bound_domain():
    with pytest.raises(PreconditionError):
        tail_bound(1.0, 5)
    with pytest.raises(PreconditionError):
        tail_bound(0.5, 20)


def test_choose_T_monotone():
    b = lambda T: tail_bound(0.8, T)
    t1, t2 = choose_T(b, 1e-8), choose_T(b, 1e-12)
    assert 10 <= t1 < t2 <= 200
    assert b(t1) <= 1e-8 and b(t2) <= 1e-12
    assert choose_T(b, 1e-300) == 200


def test_envelope_scaling():
    assert f_envelope(0.6, 30) > f_envelope(1.0, 30)


# -- line integrals --------------------------------------------------------

def test_closed_form_value(ctx):
    assert abs(closed_form_j(ctx) - ctx.mp.mpf(J_EXACT)) < 1e-28
    with mpmath.workdps(60):
        g = mpmath.gamma(mpmath.mpf(1) / 4)
        independent = mpmath.pi ** 0.25 / mpmath.sqrt(32) * g * (g ** 8 / (32 * mpmath.pi ** 4) - 3)
        assert abs(closed_form_j(ctx) - independent) < 1e-50


def test_j_two_sided_has_no_imaginary_part(ctx12):
    r = j_of_eps(0.2, ctx12, IntegrationOptions(tol=1e-9, two_sided=True))
    assert abs(r.value - closed_form_j(ctx12)) <= r.total_err
    assert r.imag_residual <= 1e-9


def test_j_at_mid_tolerance(ctx12):
    r = j_of_eps(0.45, ctx12, IntegrationOptions(tol=1e-8))
    assert abs(r.value - closed_form_j(ctx12)) <= r.total_err
    assert r.total_err <= 1e-8


def test_i_of_eps_domain(ctx12):
    for bad in (0, -0.1, 1.5):
        with pytest.raises(PreconditionError):
            i_of_eps(bad, ctx12)
    with pytest.raises(PreconditionError):
        i_of_eps(0.005, ctx12)


def test_i_of_eps_matches_reference(ctx12):
    opts = IntegrationOptions(tol=1e-7)
    r = i_of_eps(0.4, ctx12, opts)
    ref = reference_value(ctx12, opts)
    assert abs(r.value - ref.value) <= r.total_err + ref.total_err
    assert abs(float(r.value) - 1.01026350500243) < 1e-6
    assert r.total_err <= 1e-7


def test_line_through_zero_is_refused():
    # a synthetic pole placed on the line itself
    from rhxi import inject_pole

    ctx = PrecisionContext(precision_bits=128, target_tol=1e-8)
    g = inject_pole(0.01, "0.75+12i")
    with pytest.raises(NearPoleOnContour):
        i_of_eps(0.25, ctx, IntegrationOptions(tol=1e-6, T=14, integrand=g))
