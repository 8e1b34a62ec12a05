"""Flux lines of the Hopf curvature and their mutual linking.

The dual field B = eps F has B^t = 0 and B^alpha = B^beta, so every flux
line is a circle t = t0, alpha - beta = delta0. After stereographic
projection the circles of one t0 wind around a common torus, and any two of
them link once. The loops are written to flux_loops.json and flux_loops.obj
for external plotting.
"""

import numpy as np

from hopflink.fluxlines import export_loops, fig1_parameters, linking_demo, torus_radii, torus_residual

demo = linking_demo(fig1_parameters())
for lp in demo.loops:
    R, r = torus_radii(lp.t0)
    res = torus_residual(lp.samples, lp.t0)[2]
    print(f"t0 = {lp.t0:.4f}  delta0 = {lp.delta0:.4f}  torus R = {R:.4f} r = {r:.4f}  fit {res:.1e}")

off = demo.off_diagonal()
print(f"\npairwise linking numbers: min {off.min():.6f}  max {off.max():.6f}")
print(f"max ||Lk| - 1| = {demo.max_magnitude_error():.2e}")
print("signs:", sorted(set(np.sign(off).astype(int).tolist())))

export_loops(demo.loops, "flux_loops.json", "json")
export_loops(demo.loops, "flux_loops.obj", "obj")
print("wrote flux_loops.json and flux_loops.obj")
