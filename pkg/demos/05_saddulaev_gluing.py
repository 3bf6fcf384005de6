"""Gluing u = log|s| into a function with logarithmic growth.

The transform keeps the pole of u at 0, stays below log+|x|, and sits at
exactly -(1 - 2^-J) on the unit circle, where every term equals -2^-j.
"""
import json
import math
from pathlib import Path

import numpy as np

from convlab import saddulaev_transform
from convlab.weights import weight_from_dict

DATA = Path(__file__).parent / "data"
u = weight_from_dict(json.loads((DATA / "log_abs.json").read_text()))

v, rep = saddulaev_transform(u, [np.array([0j])], [np.array([1.0 + 0j])], j_max=40)
print("M_1..M_6:", [round(m, 3) for m in rep["M"][:6]])
print("v at the pole is floored:", rep["E_at_floor"])
print(f"v(1) = {v(np.array([1.0])):.15f}   oracle {-(1 - 2.0 ** -40):.15f}")

print("\n|x|     v(x)       log+|x|")
for r in (0.1, 0.5, 1.0, 2.0, 10.0, 1e3):
    print(f"{r:<7g} {v(np.array([r])):+.5f}   {max(0.0, math.log(r)):.5f}")

sums = v.partial_sums(np.array([3.0]))
print("\npartial sums at 3, last five:", np.round(sums[-5:], 6))
