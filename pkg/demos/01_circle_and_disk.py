"""Potential theory of the unit circle and the disk of radius 1/2.

Both sets have classical answers: Fekete points on the circle are roots of
unity, the capacity of a disk is its radius, and the extremal function of the
circle is max(1, |x|).  Each step below prints the numerical value next to
the classical one.
"""
import json
from pathlib import Path

import numpy as np

from convlab import capacity, extremal_lower, fekete_search, ghull_member, transfinite_diameter
from convlab.regions import region_from_dict

DATA = Path(__file__).parent / "data"
circle = region_from_dict(json.loads((DATA / "circle.json").read_text()))
half_disk = region_from_dict(json.loads((DATA / "disk_half.json").read_text()))

# Fekete configurations: the optimizer only sees random samples of the circle
print("k   d_k(circle)   (k+1)^(1/k)")
for k in (2, 4, 8):
    cfg = fekete_search(circle, k, seed=0)
    print(f"{k:<3d} {cfg.d_k:.6f}      {(k + 1) ** (1 / k):.6f}")

angles = np.sort(np.angle(fekete_search(circle, 5, seed=0).points[:, 0]))
print("angular gaps at k=5:", np.round(np.diff(angles), 4), "(2pi/6 =", round(2 * np.pi / 6, 4), ")")

# the limit d(E) from the sequence d_k
rep = transfinite_diameter(circle, 8)
print(f"\nd(circle) extrapolated: {rep.d:.5f} +- {rep.uncertainty:.5f}")

# capacity bracket; in one variable it agrees with d(E)
est = capacity(half_disk, k_max=6)
print(f"c(disk r=1/2) in [{est.c_lower:.5f}, {est.c_upper:.5f}], d = {est.d_estimate:.5f}")

# extremal function of the circle: lower bounds from explicit witnesses
print("\n|x|   Phi lower bound   witness")
for r in (0.5, 1.0, 2.0, 5.0):
    e = extremal_lower(circle, [r])
    print(f"{r:<5g} {e.value:.6f}          {e.method}")

# the circle is not pluripolar, so its G-hull is the whole plane
print("\nG-hull of the circle at 5:", ghull_member(circle, [5]).verdict.value)
