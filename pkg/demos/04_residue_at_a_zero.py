# %% [markdown]
# # Residues of f at zeros on the line
#
# f has a pole at every zero rho of xi.  On the line these poles sit exactly
# where every shifted contour starts, so they never enter I(eps); still, it
# is instructive to see their size.  The residue comes from a small contour
# circle and is checked against xi(2 rho) / xi'(rho).

# %%
from rhxi import PrecisionContext, residue_at, scan_zeros

ctx = PrecisionContext(precision_bits=192, target_tol=1e-15)
zeros = scan_zeros(30, 0.25, ctx)

for g in zeros:
    est = residue_at(ctx.mp.mpc(0.5, g), ctx, zeros=zeros.ordinates)
    print(f"gamma={ctx.mp.nstr(g, 15):>18}  Res={ctx.mp.nstr(est.residue, 8):>30}"
          f"  |diff to xi(2p)/xi'(p)|={ctx.mp.nstr(abs(est.residue - est.cross_check), 2)}")
