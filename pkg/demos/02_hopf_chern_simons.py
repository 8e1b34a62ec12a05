"""Chern-Simons integral of the Hopf map S3 -> S2.

The Berry connection of the Hopf map is globally smooth on S3 in the gauge
Z = (e^{i m alpha} cos(t/2), e^{i m beta} sin(t/2)), so the integral of
A ^ dA is well defined. It equals -4 pi^2 m^2 and does not change when the
polar angle profile is deformed within the same homotopy class.
"""

import math

from hopflink import HopfS3
from hopflink.manifold import build_grid
from hopflink.topo import chern_simons_raw

grid = build_grid(64, 64, 64)
base = chern_simons_raw(HopfS3(1), grid).raw
print(f"I(1) = {base:.12f}   (-4 pi^2 = {-4 * math.pi**2:.12f})")

print("\nm   I(m)/I(1)        undeformed - deformed")
for m in range(1, 5):
    a = chern_simons_raw(HopfS3(m), grid).raw
    b = chern_simons_raw(HopfS3(m, deformed=True), grid).raw
    print(f"{m}   {a / base:14.10f}   {a - b:+.2e}")

r = chern_simons_raw(HopfS3(2), grid)
print("\nrecorded conventions:")
for key in ("orientation", "gauge", "normalization"):
    print(f"  {key}: {r.metadata[key]}")
