"""Evaluate a few Laguerre-Gaussian modes and check their basic anatomy.

Run from the repository root:

    python3 demos/01_mode_gallery.py

Prints the on-axis behaviour, the phase winding of a vortex mode, the
orthonormality of the family, and the agreement between the direct
polynomial evaluation and the generating-function route.
"""

import numpy as np

from oamgrav import (
    BeamParameters,
    ModeIndex,
    TransverseQuadrature,
    beam_geometry,
    evaluate_lg,
    evaluate_lg_via_generating,
    overlap,
)

beam = BeamParameters(k=1732.0508075688772, w0=0.001)
geom0 = beam_geometry(beam, 0.0)

print(f"beam: k={beam.k}, w0={beam.w0}, Rayleigh range zR={beam.rayleigh_range:.6g}")
print(f"focal spot size w(0)={geom0.spot_size:.6g}\n")

# Fundamental mode peaks on axis at sqrt(2/pi)/w0.
f00 = evaluate_lg(ModeIndex(0, 0), 0.0, 0.0, 0.0, beam)
print(f"LG(0,0) on-axis amplitude : {abs(complex(f00)):.9g}")
print(f"expected sqrt(2/pi)/w0    : {np.sqrt(2.0 / np.pi) / beam.w0:.9g}\n")

# A vortex mode vanishes on axis and winds its phase once per unit of l.
mode = ModeIndex(2, 0)
ring = 0.8 * geom0.spot_size
angles = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
values = evaluate_lg(mode, ring * np.cos(angles), ring * np.sin(angles), 0.0, beam)
phases = np.unwrap(np.angle(values))
winding = (phases[-1] - phases[0]) / (angles[-1] - angles[0])
print(f"LG(2,0) on-axis amplitude : {abs(complex(evaluate_lg(mode, 0.0, 0.0, 0.0, beam))):.3g}")
print(f"LG(2,0) phase winding     : {winding:.6f} (expect {mode.l})\n")

# Orthonormality holds in any transverse plane, not just at the focus.
quad = TransverseQuadrature.legendre(beam_geometry(beam, 0.5 * beam.rayleigh_range).spot_size)
print("overlap table at z = 0.5 zR (rows LG(l,0), cols LG(j,0), l,j in -1..1):")
for l in (-1, 0, 1):
    row = []
    for j in (-1, 0, 1):
        g = overlap(ModeIndex(l, 0), ModeIndex(j, 0), 0.5 * beam.rayleigh_range, beam, quad)
        row.append(f"{abs(g):.2e}")
    print("   " + "  ".join(row))
print()

# The generating-function evaluation must reproduce the polynomial one.
xs = np.linspace(-2.0 * geom0.spot_size, 2.0 * geom0.spot_size, 7)
worst = 0.0
for l, p in [(0, 0), (1, 0), (-3, 0), (2, 1), (0, 3)]:
    m = ModeIndex(l, p)
    direct = evaluate_lg(m, xs, 0.3 * geom0.spot_size, 0.2 * beam.rayleigh_range, beam)
    viagen = evaluate_lg_via_generating(m, xs, 0.3 * geom0.spot_size, 0.2 * beam.rayleigh_range, beam)
    gap = np.max(np.abs(direct - viagen)) / np.max(np.abs(direct))
    worst = max(worst, gap)
    print(f"LG({l},{p}) direct vs generating route: relative gap {gap:.2e}")
print(f"\nworst relative gap {worst:.2e}")
