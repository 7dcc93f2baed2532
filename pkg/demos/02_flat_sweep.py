# %% [markdown]
# # I(eps) across the strip
#
# With no zeros of xi off the critical line, I(eps) is the same number for
# every eps in (0, 1/2).  This sweep reproduces the flat curve.  The default
# here is a coarse tolerance so it finishes in about a minute; set TOL = 1e-8
# for the full-accuracy version (a few minutes on one core).

# %%
from rhxi import PrecisionContext, SweepOptions, default_eps_grid, sweep
from rhxi.reporting import plot_sweep_svg, sweep_to_csv

TOL = 1e-6
ctx = PrecisionContext(precision_bits=192, target_tol=1e-10)
grid = default_eps_grid(0.02, 0.48, 24)

result = sweep(grid, ctx, SweepOptions(tol=TOL, progress=lambda e, v: print(f"  eps={e:.2f}")))

# %%
print("reference I(3/2):", ctx.mp.nstr(result.reference, 15))
print("jumps flagged:", len(result.jumps))
print("worst deviation / bound:", round(result.max_reference_deviation(), 3))

# %% [markdown]
# Save the numbers and the picture.

# %%
with open("flat_sweep.csv", "w") as fh:
    fh.write(sweep_to_csv(result, ctx))
plot_sweep_svg(result, "flat_sweep.svg")
print("wrote flat_sweep.csv and flat_sweep.svg")
