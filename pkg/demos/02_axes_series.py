"""A series that converges exactly on the coordinate axes of C^2.

The term rule (k s1 s2)^k t^(2k) vanishes identically on s1 s2 = 0 and grows
like k^(1/2) in root-test terms everywhere else.  We synthesize it, classify
the probes from data/axes_probes.json, and re-check the verdicts with the
coefficient-only verifier.
"""
import json
from pathlib import Path

from convlab import synth_variety, verify
from convlab.regions import region_from_dict
from convlab.synthesis import decode_point

DATA = Path(__file__).parent / "data"
target = region_from_dict(json.loads((DATA / "axes.json").read_text()))
probes = [decode_point(p) for p in json.loads((DATA / "axes_probes.json").read_text())]

rep = synth_variety(target.polys[0], probes=probes)
rule = rep.spec.rules[0]
print("term rule:", rule.scale.form, "x base^k at exponent", f"{rule.exponent.a}k+{rule.exponent.b}")

print("\npoint              on axes  verdict      slope")
for p in rep.probes:
    pt = ", ".join(f"{complex(c):.2g}" for c in p.point)
    print(f"({pt:<16}) {str(p.on_target):<8} {p.verdict.kind.value:<12} {p.verdict.slope:.3f}")

# the same series in n+1 variables is divergent, as it must be for a
# convergence set smaller than C^2
print("\njoint series:", rep.hartogs.kind.value)

check = verify(rep.spec, target, probes)
print("verifier agrees on every probe:", all(p.correct for p in check.probes))
