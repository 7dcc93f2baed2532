# %% [markdown]
# # The xi line integral against its closed form
#
# The integral of xi along any vertical line has a closed form in Gamma(1/4),
# so it makes a good calibration target for the quadrature before we trust it
# on the ratio f = xi(2s)/xi(s).

# %%
from rhxi import IntegrationOptions, PrecisionContext, closed_form_j, j_of_eps

ctx = PrecisionContext(precision_bits=256, target_tol=1e-12)
exact = closed_form_j(ctx)
print("closed form:", ctx.mp.nstr(exact, 30))

# %% [markdown]
# Shifting the line should not change anything: xi is entire.

# %%
for eps in ("0", "0.1", "0.3", "0.7"):
    r = j_of_eps(eps, ctx)
    print(f"eps={eps:>4}  diff={ctx.mp.nstr(r.value - exact, 3):>10}  bound={r.total_err:.1e}  T={r.T_used}")

# %% [markdown]
# The two-sided form integrates the complex integrand over [-T, T]; its
# imaginary part should vanish by conjugate symmetry.

# %%
r = j_of_eps(0.2, ctx, IntegrationOptions(tol=1e-9, two_sided=True))
print("two-sided diff:", ctx.mp.nstr(r.value - exact, 3), " imaginary residue:", r.imag_residual)
