"""Berry monopole of the map S2 -> S2 and its Chern number.

A two-level Hamiltonian h.sigma whose unit vector winds n times over the
sphere carries a Berry flux of n/2 flux quanta in the +1 band. This script
checks the line/surface agreement of the Berry phase, then evaluates the
Chern number with the closed-form density and with the gauge-free plaquette
method, and finally the spin-1 version of the identity map.
"""

import math

from hopflink import PontrjaginS2
from hopflink.berry import Patch, berry_phase_loop
from hopflink.topo import chern_number, spin1_identity_field

spec = PontrjaginS2(1)

# latitude loops: the line integral of A in the north gauge equals the
# curvature flux through the northern cap
print("theta0      line        surface")
for theta0 in (0.25 * math.pi, 0.5 * math.pi, 0.75 * math.pi):
    bp = berry_phase_loop(spec, theta0, patch=Patch.NORTH)
    print(f"{theta0:7.4f}  {bp.line:10.7f}  {bp.surface:10.7f}")

print("\nn   formula C       plaquette C")
for n in range(5):
    a = chern_number(PontrjaginS2(n)).raw
    b = chern_number(PontrjaginS2(n), (64, 128), method="plaquette").raw
    print(f"{n}   {a:.12f}  {b:.12f}")

# a 3x3 Hamiltonian S.r_hat: the top band carries one full flux quantum
r = chern_number(spin1_identity_field, (128, 256))
print(f"\nspin-1 top band: C = {r.raw:.10f} (rounded {r.rounded})")
