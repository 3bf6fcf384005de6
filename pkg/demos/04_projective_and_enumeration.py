"""Two more constructions: a homogeneous series on P^1 and the enumeration
series for a finite set.

On P^1 the target is the point [0:1]; a verdict must not depend on which
representative of [x] is probed.  The enumeration series for K = {0, 1}
lists exact-rational polynomials bounded by 1 on K, so it converges on K and
nowhere else.
"""
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from convlab import Polynomial, synth_enumeration, synth_projective
from convlab.regions import region_from_dict

DATA = Path(__file__).parent / "data"

x1 = Polynomial.variable(2, 0)
proj = synth_projective([x1], m_max=4, probes=[(0, 1), (1, 1), (1j, -3)], seed=2)
for p in proj.probes:
    print(f"[{p.point[0]}:{p.point[1]}]  {p.verdict.kind.value}")

lam = [0.01, 1 - 2j, 40.0]
again = proj.probe([tuple(l * np.asarray(p.point)) for p in proj.probes for l in lam])
same = all(r.verdict.kind == proj.probes[i // len(lam)].verdict.kind for i, r in enumerate(again))
print("verdicts unchanged under rescaling by", lam, ":", same)

K = region_from_dict(json.loads((DATA / "two_points.json").read_text()))
grid = [(Fraction(0),), (Fraction(1),), (Fraction(1, 2),), (Fraction(-1),), (complex(0, 1),)]
enum = synth_enumeration(K, probes=grid)
print(f"\nenumeration: {len(enum.spec.rules)} terms over {enum.certified_window['levels']} levels")
for p in enum.probes:
    print(f"  {str(p.point[0]):<6} {p.verdict.kind.value}")
