"""Block construction for the countable set {1, 1/2, 1/3, 1/4}.

Block m works with g_m = (s - 1)(s - 1/2)...(s - 1/min(m, 4)).  Off the zero set
of g_m, witnesses h = p^a m^(v(b-a)) are built until they exceed m/2 on a
cover of the window.  On the target, the later blocks vanish and the earlier
ones stay bounded, so the series converges there.
"""
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from convlab import synth_block
from convlab.regions import region_from_dict

DATA = Path(__file__).parent / "data"
target = region_from_dict(json.loads((DATA / "reciprocals.json").read_text()))
print("components in the data file:", len(target.children))

s_probes = [(Fraction(1, 3),), (Fraction(1, 4),), (Fraction(1, 5),), (0.4,), (0.0,), (1.5j,)]
rep = synth_block(target, m_max=8, probes=s_probes, seed=7)

print(f"{len(rep.spec.rules)} terms, {len(rep.witnesses)} witnesses, exactness {rep.exactness.value}")
for w in rep.witnesses[:4]:
    print(f"  block {w.m}: beta = {w.a}/{w.b}, q = {w.q}")

print("\nprobe   verdict       per-block rates")
for p in rep.probes:
    rates = p.detail["block_rates"]
    shown = " ".join(f"{float(rates[m]):.2g}" for m in sorted(rates, key=int))
    print(f"{complex(p.point[0]):<7.3g} {p.verdict.kind.value:<13} {shown}")

# the three witness clauses, re-checked on samples nobody has seen yet
rng = np.random.Generator(np.random.Philox(key=2024))
G = (rng.normal(size=(2000, 1)) + 1j * rng.normal(size=(2000, 1))) * np.exp(rng.uniform(-3, 5, (2000, 1)))
ok = True
for w in rep.witnesses:
    E = np.array([[1 / i] for i in range(1, min(int(w.m), len(target.children)) + 1)])
    ok &= all(good for good, _ in w.check(E, G, tol=1e-6).values())
print("\nall witness clauses hold on fresh samples:", ok)
print("joint check:", rep.hartogs.kind.value)
