# %% [markdown]
# # Would the sweep notice a zero off the line?
#
# We add a synthetic simple pole c/(s - s0) (plus its mirror image) to f and
# sweep again.  The line Re s = 1/2 + eps crosses s0 = 0.75 + 10i at
# eps = 1/4, and I(eps) should step there by -2 Re c.

# %%
from rhxi import PrecisionContext, SweepOptions, inject_pole, residue_from_jump, sweep

ctx = PrecisionContext(precision_bits=192, target_tol=1e-10)
g = inject_pole(0.01, "0.75+10i")
grid = (0.1, 0.15, 0.2, 0.3, 0.35, 0.4)
result = sweep(grid, ctx, SweepOptions(tol=1e-6, integrand=g))

for e, v in zip(result.eps_grid, result.values):
    print(f"eps={e:.2f}  I={ctx.mp.nstr(v, 12)}")

# %%
(jump,) = result.jumps
est = residue_from_jump(jump, result)
print(f"jump between eps={jump.eps_lo} and {jump.eps_hi}, {jump.significance:.2g} x the error bound")
print("recovered Re Res:", ctx.mp.nstr(est.residue, 10), "(injected 0.01)")
