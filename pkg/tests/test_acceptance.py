"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.

Run on its own with ``pytest tests/test_acceptance.py -v`` (a few minutes on
one core) or ``python tests/test_acceptance.py``.
"""

import random
import subprocess
import sys

import mpmath
import pytest

from oracles import zeros_by_sign_scan, zeta_borwein
from rhxi import (
    IntegrationOptions,
    NearZeroDivisor,
    PrecisionContext,
    SweepOptions,
    closed_form_j,
    default_eps_grid,
    f_ratio,
    i_of_eps,
    inject_pole,
    j_of_eps,
    reference_value,
    residue_from_jump,
    scan_zeros,
    sweep,
    xi,
    xi_symmetry_residual,
    zeta,
)
from rhxi.cli import main as cli_main


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
        return ok

    return emit


def test_1_closed_form(report, capsys):
    ctx = PrecisionContext(precision_bits=256, target_tol=1e-12)
    exact = closed_form_j(ctx)
    diffs = {}
    for e in ("0", "0.1", "0.3"):
        r = j_of_eps(e, ctx)
        diffs[e] = float(abs(r.value - exact))
    code = cli_main(["xicheck", "--precision-bits", "256", "--tol", "1e-12"])
    capsys.readouterr()
    ok = max(diffs.values()) <= 1e-10 and code == 0
    detail = ", ".join(f"eps={e}: {d:.2e}" for e, d in diffs.items())
    assert report(1, "xi line integral vs closed form (<= 1e-10)", ok, f"{detail}; xicheck exit {code}")


def test_2_flat_sweep(report):
    ctx = PrecisionContext(precision_bits=256, target_tol=1e-10)
    r = sweep(default_eps_grid(0.02, 0.48, 24), ctx, SweepOptions(tol=1e-8))
    ratio = r.max_reference_deviation()
    failed = sum(r.is_failed(i) for i in range(len(r.eps_grid)))
    ok = len(r.eps_grid) == 24 and not failed and not r.jumps and ratio <= 5
    detail = (f"24 points, {failed} failed, {len(r.jumps)} jumps, reference "
              f"{mpmath.nstr(r.reference, 12)}, max deviation {ratio:.3g} x combined bound")
    assert report(2, "eps sweep at tol 1e-8 is flat", ok, detail)


def test_3_injected_pole(report):
    ctx = PrecisionContext(precision_bits=256, target_tol=1e-10)
    c = 0.01
    g = inject_pole(c, "0.75+10i")
    r = sweep(default_eps_grid(0.02, 0.48, 24), ctx, SweepOptions(tol=1e-8, integrand=g))
    ok = len(r.jumps) == 1
    detail = f"{len(r.jumps)} jumps"
    if ok:
        j = r.jumps[0]
        est = residue_from_jump(j, r)
        # analytic contribution: Re Res of c/(s - s0) at s0 is Re c
        rel = abs(float(est.residue) - c) / c
        ok = j.eps_lo < 0.25 < j.eps_hi and rel <= 0.01
        detail = (f"jump in ({j.eps_lo:g}, {j.eps_hi:g}), Re Res {float(est.residue):.10f} "
                  f"vs {c}, relative error {rel:.2e}")
    assert report(3, "injected pole c=0.01 at 0.75+10i", ok, detail)


def test_4_special_functions(report):
    tol = 1e-30
    ctx = PrecisionContext(precision_bits=256, target_tol=tol)
    m = ctx.mp
    errs = {
        "zeta(2)": float(abs(zeta(2, ctx).value - m.pi ** 2 / 6)),
        "zeta(0)": float(abs(zeta(0, ctx).value + m.mpf(1) / 2)),
        "zeta(1/2)": float(abs(zeta(0.5, ctx).value - zeta_borwein(0.5, dps=60))),
        "xi(0)": float(abs(xi(0, ctx).value - m.mpf(1) / 2)),
        "xi(1)": float(abs(xi(1, ctx).value - m.mpf(1) / 2)),
    }
    limits = {"zeta(1/2)": 10 * tol}
    ok = all(v <= limits.get(k, tol) for k, v in errs.items())
    rng = random.Random(20240611)
    worst = 0.0
    for _ in range(100):
        s = m.mpc(rng.uniform(-0.5, 1.5), rng.uniform(-60, 60))
        bound = xi(s, ctx).err_bound + xi(1 - s, ctx).err_bound
        worst = max(worst, float(xi_symmetry_residual(s, ctx)) / bound)
    ok = ok and worst <= 10
    detail = ", ".join(f"{k} {v:.1e}" for k, v in errs.items())
    detail += f"; functional equation worst residual {worst:.2f} x propagated bound (100 points)"
    assert report(4, "special-function suite", ok, detail)


def test_5_zero_finder(report):
    ctx = PrecisionContext(precision_bits=256, target_tol=1e-30)
    found = scan_zeros(30, 0.25, ctx)
    oracle = zeros_by_sign_scan(30, step=0.01, dps=40)
    ok = len(found) == len(oracle) == 3
    worst = max(float(abs(a - b)) for a, b in zip(found, oracle)) if ok else float("inf")
    ok = ok and worst <= 1e-8
    raised = 0
    for g in found:
        try:
            f_ratio(ctx.mp.mpc(0.5, g), ctx)
        except NearZeroDivisor:
            raised += 1
    ok = ok and raised == len(found)
    detail = (f"{[mpmath.nstr(g, 12) for g in found.ordinates]}, max |diff| {worst:.1e}, "
              f"NearZeroDivisor raised {raised}/{len(found)}")
    assert report(5, "zeros on [0, 30] and refusal at each", ok, detail)


def test_6_quadrature_stability(report):
    ctx = PrecisionContext(precision_bits=256, target_tol=1e-12)
    cases = [
        ("I(0.25)", lambda o: i_of_eps(0.25, ctx, o), 1e-8),
        ("I(0.06)", lambda o: i_of_eps(0.06, ctx, o), 1e-8),
        ("I(3/2) reference", lambda o: reference_value(ctx, o), 1e-8),
        ("J(0.1)", lambda o: j_of_eps(0.1, ctx, o), 1e-10),
    ]
    ok = True
    parts = []
    for name, run, tol in cases:
        base = run(IntegrationOptions(tol=tol))
        doubled = run(IntegrationOptions(tol=tol, T=2 * base.T_used))
        finer = run(IntegrationOptions(tol=tol / 10))
        dT = float(abs(base.value - doubled.value))
        dtol = float(abs(base.value - finer.value))
        good = dT <= base.tail_err and dtol <= tol
        ok &= good
        parts.append(f"{name}: T->2T {dT:.1e} (tail_err {base.tail_err:.1e}), tol/10 {dtol:.1e}")
    assert report(6, "stability under T->2T and tol->tol/10", ok, "; ".join(parts))


def _run(args, cwd):
    proc = subprocess.run([sys.executable, "-m", "rhxi", *args], cwd=cwd,
                          capture_output=True, check=False)
    return proc.returncode, proc.stdout


def test_7_determinism(report, tmp_path):
    commands = [
        ["zeros", "--tmax", "40"],
        ["integrate", "--eps", "0.3", "--tol", "1e-8"],
        ["xicheck", "--tol", "1e-10"],
        ["sweep", "--eps-min", "0.1", "--eps-max", "0.4", "--eps-steps", "3", "--tol", "1e-6"],
        ["sweep", "--eps-min", "0.1", "--eps-max", "0.4", "--eps-steps", "2", "--tol", "1e-6",
         "--format", "json", "--inject", "0.01@0.75+10i"],
    ]
    ok = True
    parts = []
    for cmd in commands:
        a, b = _run(cmd, tmp_path), _run(cmd, tmp_path)
        same = a == b and len(a[1]) > 0
        ok &= same
        parts.append(f"{cmd[0]} exit {a[0]} {'identical' if same else 'DIFFERENT'}")
    csv = tmp_path / "s.csv"
    _run(["sweep", "--eps-min", "0.2", "--eps-max", "0.3", "--eps-steps", "2",
          "--tol", "1e-6", "--out", str(csv)], tmp_path)
    svgs = []
    for name in ("a.svg", "b.svg"):
        _run(["plot", str(csv), "--out", str(tmp_path / name)], tmp_path)
        svgs.append((tmp_path / name).read_bytes())
    same = svgs[0] == svgs[1] and len(svgs[0]) > 0
    ok &= same
    parts.append(f"plot {'identical' if same else 'DIFFERENT'}")
    assert report(7, "byte-identical output across runs", ok, ", ".join(parts))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
