"""Synthesis of series with prescribed convergence sets, and an independent
verifier.

Four synthesizers:

* ``synth_variety``: one term rule (k p)^k t^(k d); the coefficients vanish
  on {p = 0} and grow like k^(1/d) elsewhere.
* ``synth_enumeration``: rational pairs (p, k) with |p|_K <= 1, listed by
  height and raised to powers so the exponents strictly increase.
* ``synth_block``: blocks m = 1..m_max built from normalized defining
  polynomials of an ascending union, each block a finite cover of the window
  minus an eps-neighbourhood of E_m by beta-power witnesses.
* ``synth_projective``: the same block scheme on P^1 with the extra linear
  factor <x, u> and avoiding-hyperplane certificates.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable
from fractions import Fraction
from math import comb

import numpy as np

from .parallel import parallel_map
from .pluripotential import vanishing_polynomials
from .polynomial import NormedPoly, Polynomial, exponents_of_degree, poly_to_dict, sup_norm
from .regions import (EPS_MEM, ProjCover, Region, canonical, find_avoiding_hyperplane,
                      proj_distance, region_to_dict)
from .series import (Affine, ClassifierConfig, ConvergenceVerdict, Scale, SeriesSpec, TermRule,
                     Verdict, check_class, classify, classify_rates, hartogs_joint_check)


class Exactness(str, enum.Enum):
    EXACT = "EXACT"
    WINDOWED = "WINDOWED"


def _enc(c):
    if isinstance(c, Fraction):
        return str(c)
    c = complex(c)
    return [c.real, c.imag]


def encode_point(x) -> list:
    return [_enc(c) for c in np.atleast_1d(np.asarray(x, dtype=object))]


def decode_point(v) -> tuple:
    out = []
    for c in v:
        if isinstance(c, str):
            out.append(Fraction(c))
        elif isinstance(c, (list, tuple)):
            out.append(complex(float(c[0]), float(c[1])))
        elif isinstance(c, int):
            out.append(Fraction(c))
        else:
            out.append(complex(float(c)))
    return tuple(out)


def _as_complex(x) -> np.ndarray:
    return np.array([complex(c) for c in np.atleast_1d(np.asarray(x, dtype=object))], dtype=complex)


@dataclass
class ProbeResult:
    point: tuple
    on_target: bool
    in_window: bool
    verdict: ConvergenceVerdict
    detail: dict = field(default_factory=dict)

    @property
    def expected(self) -> Verdict | None:
        if self.on_target:
            return Verdict.CONVERGES
        return Verdict.DIVERGES if self.in_window else None

    @property
    def correct(self) -> bool:
        return self.expected is None or self.verdict.kind == self.expected

    def to_dict(self) -> dict:
        return {"point": encode_point(self.point), "on_target": self.on_target,
                "in_window": self.in_window, "verdict": self.verdict.to_dict(),
                "expected": self.expected.value if self.expected else None,
                "correct": self.correct, **self.detail}


@dataclass
class SynthesisReport:
    spec: SeriesSpec
    mode: str
    exactness: Exactness
    probes: list[ProbeResult]
    certified_window: dict
    witnesses: list = field(default_factory=list)
    hartogs: ConvergenceVerdict | None = None
    class_ok: bool = True
    notes: dict = field(default_factory=dict)
    prober: Callable | None = field(default=None, repr=False, compare=False)

    def probe(self, points) -> list[ProbeResult]:
        """Classify further points against this construction, exactly as the
        synthesizer classified its own probes."""
        if self.prober is None:
            raise ValueError(f"{self.mode} report carries no prober")
        return parallel_map(self.prober, list(points))

    @property
    def verdicts(self) -> list[ConvergenceVerdict]:
        return [p.verdict for p in self.probes]

    @property
    def all_correct(self) -> bool:
        return all(p.correct for p in self.probes)

    @property
    def indeterminate_fraction(self) -> float:
        if not self.probes:
            return 0.0
        return sum(p.verdict.kind == Verdict.INDETERMINATE for p in self.probes) / len(self.probes)

    def to_dict(self, include_spec: bool = True) -> dict:
        d = {
            "mode": self.mode,
            "exactness": self.exactness.value,
            "class_1_0": self.class_ok,
            "hartogs": self.hartogs.to_dict() if self.hartogs else None,
            "certified_window": self.certified_window,
            "witnesses": [w.summary() for w in self.witnesses],
            "probes": [p.to_dict() for p in self.probes],
            "all_correct": self.all_correct,
            "notes": self.notes,
        }
        if include_spec:
            d["spec"] = self.spec.to_dict()
        return d

    def margin_rows(self) -> list[list]:
        rows = [["index", "point", "on_target", "in_window", "verdict", "margin", "growth", "correct"]]
        for i, p in enumerate(self.probes):
            g = p.verdict.growth_estimate
            rows.append([i, " ".join(f"{complex(c).real:+.6g}{complex(c).imag:+.6g}j" for c in p.point),
                         int(p.on_target), int(p.in_window), p.verdict.kind.value,
                         f"{p.verdict.margin:.6g}", "inf" if not math.isfinite(g) else f"{g:.6g}",
                         int(p.correct)])
        return rows


# --------------------------------------------------------------------------
# probe plans and distance certificates

def _taylor_tables(p: Polynomial) -> list[tuple[int, Polynomial]]:
    """(|beta|, D_beta) with p(c + y) = sum_beta D_beta(c) y^beta."""
    out = []
    n = p.n
    for order in range(1, max(p.degree, 0) + 1):
        for beta in exponents_of_degree(n, order):
            terms = {}
            for a, c in p.terms.items():
                if all(ai >= bi for ai, bi in zip(a, beta)):
                    coef = 1
                    for ai, bi in zip(a, beta):
                        coef *= comb(ai, bi)
                    key = tuple(ai - bi for ai, bi in zip(a, beta))
                    terms[key] = terms.get(key, 0) + complex(c) * coef
            D = Polynomial(n, terms)
            if not D.is_zero:
                out.append((order, D))
    return out


def variation_bounds(p: Polynomial, centers, radius) -> np.ndarray:
    """Vectorized bound of |p(x) - p(c)| over polydisks of the given radius."""
    C = np.asarray(centers, dtype=complex).reshape(-1, p.n)
    rad = np.broadcast_to(np.asarray(radius, dtype=float), (len(C),))
    out = np.zeros(len(C))
    for order, D in _taylor_tables(p):
        out += np.abs(D.evaluate_many(C)) * rad ** order
    return out


def far_from(target: Region, points, eps: float) -> np.ndarray:
    """True where the eps-polydisk around the point certainly misses the
    target (root distances in one variable, a Taylor bound otherwise)."""
    P = np.asarray(points, dtype=complex).reshape(-1, target.n)
    if target.kind == "UNION":
        return np.all([far_from(c, P, eps) for c in target.children], axis=0)
    if target.kind == "FINITE":
        Q = np.asarray([[complex(c) for c in q] for q in target.points])
        if len(Q) == 0:
            return np.ones(len(P), dtype=bool)
        d = np.linalg.norm(P[:, None, :] - Q[None, :, :], axis=2).min(axis=1)
        return d >= eps
    if target.kind == "VARIETY" and target.n == 1:
        roots = target.zero_points()
        if not roots:
            return np.ones(len(P), dtype=bool)
        R = np.asarray([r[0] for r in roots])
        return np.abs(P[:, 0][:, None] - R[None, :]).min(axis=1) >= eps
    if target.kind == "VARIETY":
        ok = np.zeros(len(P), dtype=bool)
        for g in target.polys:
            g = g.to_float()
            ok |= np.abs(g.evaluate_many(P)) > variation_bounds(g, P, eps)
        return ok
    raise ValueError(f"no distance certificate for {target.kind}")


def probe_plan(target: Region, count: int, window: float = 2.0, eps: float = 0.05,
               seed: int = 0, on_fraction: float = 0.25) -> list[np.ndarray]:
    """Seeded probes: about ``on_fraction`` sampled on the target, the rest
    uniform in the window ball and certified at distance >= eps."""
    n_on = max(1, int(round(on_fraction * count)))
    on = list(target.sample(n_on, seed=seed, window=window))
    rng = np.random.Generator(np.random.Philox(key=seed + 1))
    off: list[np.ndarray] = []
    while len(off) < count - n_on:
        z = rng.normal(size=(256, target.n)) + 1j * rng.normal(size=(256, target.n))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        z *= window * rng.uniform(size=(256, 1)) ** (1 / (2 * target.n))
        keep = z[far_from(target, z, eps)]
        off.extend(keep[: count - n_on - len(off)])
    return on + off


# --------------------------------------------------------------------------
# variety synthesizer

def variety_spec(p: Polynomial) -> SeriesSpec:
    """sum_{k>=1} (k p)^k t^(k deg p)."""
    return SeriesSpec(p.n, (TermRule(p, Scale("k^k"), Affine(1, 0), Affine(p.degree, 0), k_start=1),))


def synth_variety(p: Polynomial, horizon: int = 64, probes=None, probe_count: int = 0,
                  window: float = 2.0, eps: float = 0.05, seed: int = 0,
                  config: ClassifierConfig = ClassifierConfig()) -> SynthesisReport:
    if p.degree < 1:
        raise ValueError("synth_variety needs a nonconstant polynomial")
    spec = variety_spec(p)
    target = Region.variety(p, window=window)
    if probes is None:
        probes = probe_plan(target, probe_count, window, eps, seed) if probe_count else []

    def run(y):
        yc = _as_complex(y)
        on = target.contains(yc).inside
        stream = spec.restrict(yc, horizon, zero_tol=EPS_MEM)
        v = classify(stream, config, horizon)
        in_win = (not on) and bool(far_from(target, yc[None, :], eps)[0])
        return ProbeResult(tuple(y), on, in_win, v)

    results = parallel_map(run, list(probes))
    return SynthesisReport(spec, "variety", Exactness.EXACT, results,
                           {"kind": "global", "eps": eps,
                            "note": "divergence holds at every point off the zero set"},
                           hartogs=hartogs_joint_check(spec, max(horizon, 64)),
                           class_ok=check_class(spec, 1, 0, horizon), prober=run)


# --------------------------------------------------------------------------
# beta-power witnesses

class InfeasibleBeta(ValueError):
    pass


def choose_beta(r: float, m: float, b_max: int = 64, ell: float = 1.0) -> tuple[int, int]:
    """Largest a/b < 1 with b <= b_max and (r/m)^beta * ell^(1-beta) > 1/2."""
    if r <= 0:
        raise InfeasibleBeta("r must be positive")
    lr, ll = math.log(r / m), math.log(ell) if ell > 0 else -math.inf
    best = None
    for b in range(2, b_max + 1):
        for a in range(b - 1, 0, -1):
            beta = a / b
            val = beta * lr + (1 - beta) * ll if ll > -math.inf else -math.inf
            if val > -math.log(2):
                if best is None or beta > best[0] / best[1]:
                    best = (a, b)
                break
    if best is None:
        raise InfeasibleBeta(f"no beta with b <= {b_max} for r/m = {r / m:.3g}")
    g = math.gcd(*best)
    return best[0] // g, best[1] // g


@dataclass
class BetaWitness:
    """h = p^a (m L)^(v (b - a)) with q = b v, where L = 1 in the affine case
    and L(x) = <x, u>, u = conj(y)/|y|, in the projective case."""

    p: NormedPoly
    a: int
    b: int
    m: float
    y: np.ndarray
    r: float
    projective: bool = False

    @property
    def v(self) -> int:
        return self.p.weight

    @property
    def q(self) -> int:
        return self.b * self.v

    @property
    def beta(self) -> float:
        return self.a / self.b

    @property
    def u(self) -> np.ndarray:
        y = _as_complex(self.y)
        return np.conj(y) / np.linalg.norm(y)

    def log_abs_h(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=complex).reshape(-1, self.p.n)
        with np.errstate(divide="ignore"):
            lp = np.log(np.abs(self.p.poly.evaluate_many(X)))
            out = self.a * lp + self.v * (self.b - self.a) * math.log(self.m)
            if self.projective:
                out = out + self.v * (self.b - self.a) * np.log(np.abs(X @ self.u))
        return out

    def modulus(self, X) -> np.ndarray:
        """|(h(x), q)| = |h(x)|^(1/q)."""
        return np.exp(self.log_abs_h(X) / self.q)

    def normalized(self, X) -> np.ndarray:
        """||(h(x), q)||."""
        X = np.asarray(X, dtype=complex).reshape(-1, self.p.n)
        nx = np.linalg.norm(X, axis=1)
        return self.modulus(X) / (nx if self.projective else np.sqrt(1 + nx ** 2))

    @property
    def threshold(self) -> float:
        """Affine exceedance level: |(h,q)| > m/2 iff |(p,v)| > threshold."""
        return self.m * 2.0 ** (-1.0 / self.beta)

    def h_polynomial(self) -> Polynomial:
        base = self.p.poly ** self.a
        if self.projective:
            base = base * Polynomial.linear_form(self.u) ** (self.v * (self.b - self.a))
        return base * (float(self.m) ** (self.v * (self.b - self.a)))

    def check(self, E_samples=None, global_samples=None, tol: float = 1e-6) -> dict:
        """Re-evaluate the three clauses by direct evaluation."""
        out = {}
        if E_samples is not None and len(E_samples):
            E = np.asarray(E_samples, dtype=complex).reshape(-1, self.p.n)
            f = self.normalized if self.projective else self.modulus
            vals = f(E)
            # samples of E_m are zeros of p up to the membership tolerance
            res = np.abs(self.p.poly.evaluate_many(E))
            vals = np.where(res <= EPS_MEM * (1 + np.linalg.norm(E, axis=1)) ** self.v, 0.0, vals)
            v = float(np.max(vals))
            out["i"] = (v <= 1 + tol, v)
        if global_samples is not None and len(global_samples):
            v = float(np.max(self.normalized(global_samples)))
            out["ii"] = (v <= self.m + tol, v)
        y = _as_complex(self.y)[None, :]
        v = float((self.normalized if self.projective else self.modulus)(y)[0])
        out["iii"] = (v > self.m / 2 - tol, v)
        return out

    def summary(self) -> dict:
        return {"m": self.m, "a": self.a, "b": self.b, "beta": self.beta, "v": self.v, "q": self.q,
                "r": self.r, "y": encode_point(self.y), "projective": self.projective}


def beta_construct(p: NormedPoly, m: float, r: float, y, samples=None, b_max: int = 64,
                   projective: bool = False, ell: float = 1.0, tol: float = 1e-12) -> BetaWitness:
    """Build the beta-power witness at y.

    Requires |(p(y),v)| >= r (affine) or ||(p(y),v)|| >= r (projective);
    ``samples`` of E_m (intersected with B_m or K_m) are used to check
    clause (i) on construction.
    """
    y = _as_complex(y)
    pv = abs(complex(p.poly.evaluate(list(y)))) ** (1 / p.weight)
    val = pv / np.linalg.norm(y) if projective else pv
    if val < r * (1 - tol):
        raise ValueError(f"precondition failed: value {val:.6g} at y is below r = {r:.6g}")
    a, b = choose_beta(r, m, b_max, ell)
    w = BetaWitness(p, a, b, m, y, r, projective)
    res = w.check(samples)
    if "i" in res and not res["i"][0]:
        raise ValueError(f"precondition sample failure: clause (i) value {res['i'][1]:.6g} > 1")
    if res["iii"][1] <= m / 2:
        raise InfeasibleBeta("clause (iii) fails at the probe")
    return w


# --------------------------------------------------------------------------
# block verdicts

def block_rates(stream, blocks: dict[int, int], scale: float = 1.0) -> dict[int, float]:
    """Max |c_q|^(1/q) / scale per block level."""
    out: dict[int, float] = {}
    for q, la in zip(stream.exponents, stream.log_abs):
        m = blocks[int(q)]
        v = math.exp(la / q) / scale if la > -math.inf else 0.0
        out[m] = max(out.get(m, 0.0), v)
    return out


def block_verdict(rates: dict[int, float]) -> ConvergenceVerdict:
    """Zero last block: the probe lies in E_m for the top level, CONVERGES.
    Every block in the upper half above m/2: DIVERGES.  Otherwise
    INDETERMINATE."""
    ms = sorted(rates)
    top = ms[-1]
    window = (ms[0], top)
    peak = max(rates.values())
    if rates[top] == 0.0:
        return ConvergenceVerdict(Verdict.CONVERGES, peak, window, 1.0, 0.0)
    upper = [m for m in ms if m > top / 2]
    margins = [(rates[m] - m / 2) / (m / 2) for m in upper]
    if min(margins) > 0:
        return ConvergenceVerdict(Verdict.DIVERGES, math.inf, window, min(margins), 0.0)
    return ConvergenceVerdict(Verdict.INDETERMINATE, peak, window, min(margins), 0.0)


BLOCK_JOINT_CONFIG = ClassifierConfig(slope_min=0.15, slope_flat=0.05, j_min=4)


def block_joint_check(spec: SeriesSpec, points, config: ClassifierConfig = BLOCK_JOINT_CONFIG
                      ) -> ConvergenceVerdict:
    """Joint (s, t) root test across block levels.

    For a point y in the closed unit polydisk, max_alpha |b_(alpha,q)| is at
    least |P_q(y)| / #monomials, and every such coefficient has total degree
    at most deg P_q + q.  The per-block maximum of the resulting lower bounds
    for |b|^(1/(|alpha|+q)) is then classified against the block level.
    """
    if not spec.blocks:
        raise ValueError("block_joint_check needs a block-built spec")
    Y = np.asarray(points, dtype=complex).reshape(-1, spec.n)
    Y = Y / np.maximum(1.0, np.abs(Y).max(axis=1))[:, None]
    H = spec.max_exponent() or 0
    best: dict[int, float] = {}
    for (q, rule, k), m in zip(_terms_in_rule_order(spec, H), spec.blocks):
        deg = rule.degree(k)
        if deg < 0:
            continue
        la = max(rule.log_abs_at(y, [k])[0][0] for y in Y)
        lb = (la - math.log(comb(spec.n + deg, deg))) / (deg + q)
        best[m] = max(best.get(m, -math.inf), lb)
    ms = np.array(sorted(best), dtype=float)
    if not len(ms) or ms.max() < config.j_min:
        # too few blocks to see a trend
        return ConvergenceVerdict(Verdict.INDETERMINATE, math.nan, (1, int(ms.max()) if len(ms) else 0), 0.0)
    return classify_rates(ms, np.array([best[int(m)] for m in ms]), int(ms.max()), config)


# --------------------------------------------------------------------------
# affine block synthesizer

def divisor_chain(components, m_max: int) -> list[Polynomial]:
    """g_m = product of the first min(m, len) components."""
    comps = list(components)
    out, g = [], Polynomial.constant(comps[0].n, 1)
    for m in range(1, m_max + 1):
        if m <= len(comps):
            g = g * comps[m - 1]
        out.append(g)
    return out


def _components(target) -> list[Polynomial]:
    if isinstance(target, Region):
        if target.kind == "VARIETY":
            return [target.polys[0]]
        if target.kind == "UNION" and all(c.kind == "VARIETY" for c in target.children):
            return [c.polys[0] for c in target.children]
        if target.kind == "FINITE" and target.n == 1 and not target.projective:
            return [Polynomial.variable(1, 0) - p[0] for p in target.points]
        raise ValueError("block targets must be varieties, unions of varieties or finite sets in C")
    return list(target)


def _grid(window: float, side: float, n: int) -> np.ndarray:
    k = int(round(2 * window / side))
    ticks = -window + side * (np.arange(k) + 0.5)
    axes = [ticks] * (2 * n)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 2 * n)
    return mesh[:, 0::2] + 1j * mesh[:, 1::2]


def _split(center: np.ndarray, side: float) -> np.ndarray:
    n = len(center)
    offs = np.array(list(itertools.product([-0.25, 0.25], repeat=2 * n))) * side
    return center[None, :] + offs[:, 0::2] + 1j * offs[:, 1::2]


@dataclass
class _Cell:
    center: np.ndarray
    side: float
    depth: int = 0


def _affine_block(m: int, g: Polynomial, window: float, eps: float, side: float, seed: int,
                  b_max: int, max_depth: int, sup_budget: int):
    n = g.n
    d = g.degree
    gf = g.to_float()
    sn = sup_norm(NormedPoly(gf, d), budget=sup_budget, seed=seed + m)
    S = 1.1 * sn.upper
    p = gf * (1.0 / S ** d)
    P = NormedPoly(p, d)
    region = Region.variety(g)
    cells = [_Cell(c, side) for c in _grid(window, side, n)]
    witnesses: list[BetaWitness] = []
    uncertified: list[_Cell] = []
    t_min = math.inf

    def classify_cells(cs):
        C = np.array([c.center for c in cs])
        keep = far_from(region, C, eps)
        rad = np.array([c.side for c in cs]) / math.sqrt(2)
        lb = np.abs(p.evaluate_many(C)) - variation_bounds(p, C, rad)
        return keep, lb

    keep, lb = classify_cells(cells)
    pending = [(c, l) for c, k, l in zip(cells, keep, lb) if k]
    while pending:
        # drop cells already covered by the smallest threshold so far
        pending = [(c, l) for c, l in pending if not (l > 0 and l ** (1 / d) > t_min)]
        if not pending:
            break
        pos = [(c, l) for c, l in pending if l > 0]
        if pos:
            # farthest uncovered cell from the existing witness probes
            C = np.array([c.center for c, _ in pos])
            if witnesses:
                Y = np.array([_as_complex(w.y) for w in witnesses])
                dist = np.linalg.norm(C[:, None, :] - Y[None, :, :], axis=2).min(axis=1)
            else:
                dist = np.linalg.norm(C, axis=1)
            i = int(np.argmax(dist))
            r = min(l for _, l in pos) ** (1 / d)
            w = beta_construct(P, m, r, pos[i][0].center, b_max=b_max)
            witnesses.append(w)
            t_min = min(t_min, w.threshold)
            continue
        # every remaining cell needs refinement
        nxt = []
        for c, _ in pending:
            if c.depth >= max_depth:
                uncertified.append(c)
                continue
            subs = [_Cell(s, c.side / 2, c.depth + 1) for s in _split(c.center, c.side)]
            k2, l2 = classify_cells(subs)
            nxt.extend((s, l) for s, kk, l in zip(subs, k2, l2) if kk)
        pending = nxt
    return P, S, witnesses, uncertified


def synth_block(target, window: float = 2.0, eps: float = 0.05, m_max: int = 8,
                probes=None, probe_count: int = 0, seed: int = 0, b_max: int = 64,
                cell_budget: int = 20000, max_depth: int = 4, sup_budget: int = 256) -> SynthesisReport:
    """Block construction over an ascending union of zero sets."""
    comps = _components(target)
    n = comps[0].n
    chain = divisor_chain(comps, m_max)
    per_dim = max(2, int(math.ceil(2 * window / eps)))
    if per_dim ** (2 * n) > cell_budget:
        per_dim = max(2, int(cell_budget ** (1 / (2 * n))))
    side = 2 * window / per_dim
    blocks = [_affine_block(m, chain[m - 1], window, eps, side, seed, b_max, max_depth, sup_budget)
              for m in range(1, m_max + 1)]

    rules, levels, witnesses, prev = [], [], [], 0
    uncert = []
    for m, (P, S, ws, unc) in enumerate(blocks, start=1):
        uncert.extend((m, c) for c in unc)
        for w in ws:
            R = 1 if w.q > prev else prev // w.q + 1
            rules.append(TermRule.single(R * w.q, P.poly, R * w.a,
                                         Scale("m_pow", 1.0, m=float(m), a=0.0, b=float(R * w.v * (w.b - w.a)))))
            levels.append(m)
            witnesses.append(w)
            prev = R * w.q
    spec = SeriesSpec(n, tuple(rules), False, tuple(levels))
    top = Region.variety(chain[-1], window=window)
    window_info = {"kind": "box", "window": window, "eps": eps, "resolution": side,
                   "m_max": m_max, "uncertified_cells": len(uncert),
                   "uncertified": [{"m": m, "center": encode_point(c.center), "side": c.side}
                                   for m, c in uncert]}

    def in_window(yc):
        if np.any(np.abs(yc.real) > window) or np.any(np.abs(yc.imag) > window):
            return False
        if not far_from(top, yc[None, :], eps)[0]:
            return False
        for _, c in uncert:
            if np.all(np.abs((yc - c.center).real) <= c.side / 2) and np.all(np.abs((yc - c.center).imag) <= c.side / 2):
                return False
        return True

    if probes is None:
        probes = _block_probes(top, chain, probe_count, window, eps, seed) if probe_count else []
    report = SynthesisReport(spec, "block", Exactness.WINDOWED, [], window_info, witnesses,
                             class_ok=check_class(spec, 1, 0, max(spec.max_exponent() or 1, 1)))
    report.prober = lambda y: _block_probe(spec, witnesses, levels, top, y, in_window)
    report.probes = report.probe(probes)
    report.hartogs = block_joint_check(spec, [_as_complex(w.y) for w in witnesses])
    return report


def _block_probes(top: Region, chain, count, window, eps, seed):
    """On-target probes from the zero set of the top block (exact rational
    roots in one variable when available), the rest off target."""
    on: list = []
    g = chain[-1]
    if g.n == 1:
        on = [tuple([r]) for r in _rational_roots(g)]
        if not on:
            on = [tuple(z) for z in top.zero_points()]
    n_on = min(len(on), max(1, count // 4)) if on else 0
    rest = probe_plan(top, count - n_on + 1, window, eps, seed, on_fraction=0.0)[1:] if count > n_on else []
    return on[:n_on] + rest[: count - n_on]


def _rational_roots(g: Polynomial) -> list[Fraction]:
    """Rational roots of an exact univariate polynomial that splits into
    linear factors with rational roots (as produced by divisor chains)."""
    if not g.is_exact:
        return []
    out = []
    for z in np.roots([complex(g.terms.get((e,), 0)) for e in range(g.degree, -1, -1)]):
        if abs(z.imag) < 1e-9:
            f = Fraction(z.real).limit_denominator(10 ** 6)
            if g.evaluate([f]) == 0 and f not in out:
                out.append(f)
    return out


def _block_probe(spec, witnesses, levels, top, y, in_window):
    yc = _as_complex(y)
    on = top.contains(yc).inside if not all(isinstance(c, Fraction) for c in y) else \
        all(g.evaluate(list(y)) == 0 for g in top.polys)
    horizon = spec.max_exponent() or 0
    stream = spec.restrict(yc, horizon, zero_tol=EPS_MEM)
    exp_to_block = {q: m for (q, _, _), m in zip(_terms_in_rule_order(spec, horizon), levels)}
    rates = block_rates(stream, exp_to_block)
    v = block_verdict(rates)
    # second route: evaluate the stored witnesses directly
    direct: dict[int, float] = {}
    for w, m in zip(witnesses, levels):
        g_zero = abs(complex(w.p.poly.evaluate(list(yc)))) <= EPS_MEM * (1 + np.linalg.norm(yc)) ** w.v
        val = 0.0 if g_zero else float(w.modulus(yc[None, :])[0])
        direct[m] = max(direct.get(m, 0.0), val)
    v2 = block_verdict(direct)
    if v2.kind != v.kind:
        v = ConvergenceVerdict(Verdict.INDETERMINATE, v.growth_estimate, v.window, 0.0, 0.0)
    return ProbeResult(tuple(y), bool(on), (not on) and in_window(yc), v,
                       {"block_rates": {str(k): rates[k] for k in sorted(rates)}})


def _terms_in_rule_order(spec: SeriesSpec, horizon: int):
    """terms() sorted by exponent coincide with rule order for block specs."""
    return [(rule.exponent(k), rule, k) for rule in spec.rules for k in rule.ks(horizon)]


# --------------------------------------------------------------------------
# projective block synthesizer (P^1)

def _proj_block(m: int, g: Polynomial, eps: float, seed: int, b_max: int, max_depth: int,
                sup_budget: int):
    d = g.degree
    gf = g.to_float()
    sn = sup_norm(NormedPoly(gf, d, homogeneous=True), budget=sup_budget, seed=seed + m)
    S = 1.1 * sn.upper
    p = gf * (1.0 / S ** d)
    P = NormedPoly(p, d, homogeneous=True)
    zeros = Region.variety(g, projective=True).zero_points()
    charts = {0: p.dehomogenize(0), 1: p.dehomogenize(1)}  # x = (1, z) and x = (w, 1)

    def rep(chart, z):
        return np.array([1, z]) if chart == 0 else np.array([z, 1])

    per_dim = max(2, int(math.ceil(2 / eps)))
    side = 2 / per_dim
    ticks = -1 + side * (np.arange(per_dim) + 0.5)
    cells = [(ch, complex(a, b), side, 0) for ch in (0, 1) for a in ticks for b in ticks
             if abs(complex(a, b)) - side / math.sqrt(2) <= 1]

    def excluded(ch, z):
        x = rep(ch, z)
        return any(proj_distance(x, zz) < eps for zz in zeros)

    def bounds(cs):
        """Per cell: lower bound of ||(p,d)|| and data for the L-factor bound."""
        out = []
        for ch in (0, 1):
            idx = [i for i, c in enumerate(cs) if c[0] == ch]
            if not idx:
                continue
            Z = np.array([[cs[i][1]] for i in idx])
            rad = np.array([cs[i][2] for i in idx]) / math.sqrt(2)
            lb = np.abs(charts[ch].evaluate_many(Z)) - variation_bounds(charts[ch], Z, rad)
            nx_hi = np.sqrt(1 + (np.abs(Z[:, 0]) + rad) ** 2)
            for j, i in enumerate(idx):
                out.append((i, max(lb[j], 0.0) ** (1 / d) / nx_hi[j], nx_hi[j], rad[j]))
        res = [None] * len(cs)
        for i, v, nx, rad in out:
            res[i] = (v, nx, rad)
        return res

    def L_lower(w, c, nx, rad):
        ch, z = c[0], c[1]
        u = w.u
        if ch == 0:
            val, slope = u[0] + z * u[1], abs(u[1])
        else:
            val, slope = z * u[0] + u[1], abs(u[0])
        return max(abs(val) - slope * rad, 0.0) / nx

    def covered(w, c, b):
        v, nx, rad = b
        if v <= 0:
            return False
        ell = L_lower(w, c, nx, rad)
        if ell <= 0:
            return False
        return w.beta * math.log(v) + (1 - w.beta) * math.log(w.m * ell) > math.log(w.m / 2)

    pending = [c for c in cells if not excluded(c[0], c[1])]
    pb = bounds(pending)
    witnesses: list[BetaWitness] = []
    uncertified = []
    while pending:
        keep = [(c, b) for c, b in zip(pending, pb) if not any(covered(w, c, b) for w in witnesses[-8:])]
        if len(witnesses) > 8:
            keep = [(c, b) for c, b in keep if not any(covered(w, c, b) for w in witnesses[:-8])]
        if not keep:
            break
        pos = [(c, b) for c, b in keep if b[0] > 0]
        if pos:
            reps = np.array([canonical(rep(c[0], c[1])) for c, _ in pos])
            if witnesses:
                Y = np.array([canonical(w.y) for w in witnesses])
                dist = np.sqrt(np.clip(1 - np.abs(reps @ Y.conj().T) ** 2, 0, None)).min(axis=1)
            else:
                dist = np.zeros(len(pos))
            i = int(np.argmax(dist))
            c, b = pos[i]
            y = rep(c[0], c[1])
            w0 = BetaWitness(P, 1, 2, m, y, b[0], True)
            ell_cell = L_lower(w0, c, b[1], b[2])
            try:
                a_, b_ = choose_beta(b[0], m, b_max, ell_cell)
            except InfeasibleBeta:
                a_ = None
            if a_ is not None:
                w = BetaWitness(P, a_, b_, m, y, b[0], True)
                if covered(w, c, b):
                    witnesses.append(w)
                    pending, pb = [k[0] for k in keep], [k[1] for k in keep]
                    continue
            # the cell is too coarse for its own witness: refine it
            keep.pop(keep.index((c, b)))
            if c[3] >= max_depth:
                uncertified.append(c)
                pending, pb = [k[0] for k in keep], [k[1] for k in keep]
                continue
            subs = [(c[0], c[1] + dz, c[2] / 2, c[3] + 1)
                    for dz in (c[2] / 4 * complex(sx, sy) for sx in (-1, 1) for sy in (-1, 1))]
            subs = [s for s in subs if not excluded(s[0], s[1])]
            pending = [k[0] for k in keep] + subs
            pb = [k[1] for k in keep] + bounds(subs)
            continue
        nxt = []
        for c, _ in keep:
            if c[3] >= max_depth:
                uncertified.append(c)
                continue
            subs = [(c[0], c[1] + dz, c[2] / 2, c[3] + 1)
                    for dz in (c[2] / 4 * complex(sx, sy) for sx in (-1, 1) for sy in (-1, 1))]
            nxt.extend(s for s in subs if not excluded(s[0], s[1]))
        pending = nxt
        pb = bounds(pending)
    return P, S, witnesses, uncertified, side


def synth_projective(target, eps: float = 0.05, m_max: int = 8, probes=None, probe_count: int = 0,
                     seed: int = 0, b_max: int = 16, max_depth: int = 4,
                     sup_budget: int = 256) -> SynthesisReport:
    """Block construction on P^1 with covers K_m and homogeneous witnesses."""
    comps = _components(target)
    if comps[0].n != 2:
        raise NotImplementedError("certified projective covering is implemented for P^1 (n = 2)")
    for g in comps:
        if not g.is_homogeneous() or g.degree < 1:
            raise ValueError("projective targets need homogeneous polynomials of positive degree")
    chain = divisor_chain(comps, m_max)
    rules, levels, witnesses, prev, uncert, certs = [], [], [], 0, [], []
    side = None
    for m in range(1, m_max + 1):
        P, S, ws, unc, side = _proj_block(m, chain[m - 1], eps, seed, b_max, max_depth, sup_budget)
        uncert.extend((m, c) for c in unc)
        extra = ws[0].y if ws else None
        cert = find_avoiding_hyperplane(ProjCover(2, float(m)), 0.1, extra_point=extra, seed=seed + m)
        certs.append({"m": m, "eps": cert.eps, "delta": cert.delta,
                      "normal": encode_point(cert.hyperplane.normal)})
        for w in ws:
            R = 1 if w.q > prev else prev // w.q + 1
            base = (P.poly ** w.a) * Polynomial.linear_form(w.u) ** (w.v * (w.b - w.a))
            rules.append(TermRule.single(R * w.q, base, R,
                                         Scale("m_pow", 1.0, m=float(m), a=0.0, b=float(R * w.v * (w.b - w.a)))))
            levels.append(m)
            witnesses.append(w)
            prev = R * w.q
    spec = SeriesSpec(2, tuple(rules), True, tuple(levels))
    top = Region.variety(chain[-1], projective=True)
    zeros = top.zero_points()

    def in_window(x):
        if any(proj_distance(x, z) < eps for z in zeros):
            return False
        xc = _as_complex(x)
        for _, (ch, z, sd, _) in uncert:
            # chart 0 is x = (1, z), chart 1 is x = (w, 1)
            if xc[ch] == 0:
                continue
            zz = xc[1 - ch] / xc[ch]
            if abs((zz - z).real) <= sd / 2 and abs((zz - z).imag) <= sd / 2:
                return False
        return True

    if probes is None and probe_count:
        rng = np.random.Generator(np.random.Philox(key=seed + 3))
        on = [tuple(z) for z in zeros][: max(1, probe_count // 4)]
        off = []
        while len(off) < probe_count - len(on):
            z = rng.normal(size=2) + 1j * rng.normal(size=2)
            if in_window(z):
                off.append(tuple(z))
        probes = on + off
    probes = probes or []
    win = {"kind": "P1-charts", "eps": eps, "resolution": side, "m_max": m_max,
           "uncertified_cells": len(uncert), "avoiding_hyperplanes": certs}
    report = SynthesisReport(spec, "projective", Exactness.WINDOWED, [], win, witnesses,
                             class_ok=check_class(spec, 1, 0, max(spec.max_exponent() or 1, 1)))
    report.prober = lambda x: projective_probe(spec, witnesses, levels, top, x, in_window)
    report.probes = report.probe(probes)
    report.hartogs = block_joint_check(spec, [canonical(w.y) for w in witnesses])
    return report


def projective_probe(spec, witnesses, levels, top, x, in_window=None) -> ProbeResult:
    xc = _as_complex(x)
    if not np.any(xc):
        raise ValueError("projective probes need a nonzero representative")
    on = top.contains(xc).inside
    horizon = spec.max_exponent() or 0
    stream = spec.restrict(xc, horizon, zero_tol=EPS_MEM)
    exp_to_block = {q: m for (q, _, _), m in zip(_terms_in_rule_order(spec, horizon), levels)}
    rates = block_rates(stream, exp_to_block, scale=float(np.linalg.norm(xc)))
    v = block_verdict(rates)
    direct: dict[int, float] = {}
    xh = canonical(xc)
    for w, m in zip(witnesses, levels):
        zero = abs(complex(w.p.poly.evaluate(list(xh)))) <= EPS_MEM
        direct[m] = max(direct.get(m, 0.0), 0.0 if zero else float(w.normalized(xh[None, :])[0]))
    if block_verdict(direct).kind != v.kind:
        v = ConvergenceVerdict(Verdict.INDETERMINATE, v.growth_estimate, v.window, 0.0, 0.0)
    inw = (not on) and (in_window(xc) if in_window else True)
    return ProbeResult(tuple(x), bool(on), inw, v, {"block_rates": {str(k): rates[k] for k in sorted(rates)}})


# --------------------------------------------------------------------------
# enumeration synthesizer

def _height_values(W: int) -> list[Fraction]:
    """Rationals c/d in [-1, 1] with d <= W."""
    vals = {Fraction(c, d) for d in range(1, W + 1) for c in range(-d, d + 1)}
    return sorted(vals, key=lambda f: (f.denominator, abs(f), f))


def _interpolant(points: list[Fraction], values: list[Fraction]) -> Polynomial:
    z = Polynomial.variable(1, 0)
    out = Polynomial.zero(1)
    for i, (a, v) in enumerate(zip(points, values)):
        if v == 0:
            continue
        li = Polynomial.constant(1, Fraction(1))
        for j, b in enumerate(points):
            if j != i:
                li = li * (z - b) * Fraction(1) / (a - b)
        out = out + li * v
    return out


def enumerate_family(K: Region, levels: int, per_level: int = 48, seed: int = 0):
    """Yield (level, p, k) with |p|_K <= 1 exactly, level by level.

    Level W holds pairs of weight W: interpolated or constant values with
    denominators <= W on K, plus (vanishing polynomial) x (integer polynomial
    with coefficients <= W and degree <= W - 1).  Each level keeps its extreme
    members (value 1 everywhere; constant multiplier W) and a seeded sample of
    the rest.
    """
    vanish = [q for q in vanishing_polynomials(K) if q.degree >= 1]
    if not vanish:
        raise ValueError("enumeration needs K inside an algebraic hypersurface")
    g = vanish[0]
    if not g.is_exact:
        raise ValueError("exact-rational mode needs rational data for K")
    n = K.n
    interp = None
    if K.kind == "FINITE" and n == 1:
        pts = [Fraction(p[0]) for p in K.points]
        interp = lambda vals: _interpolant(pts, vals)
        n_vals = len(pts)
    else:
        interp = lambda vals: Polynomial.constant(n, vals[0])
        n_vals = 1
    rng = np.random.Generator(np.random.Philox(key=seed))
    dg = g.degree
    for W in range(1, levels + 1):
        vals = _height_values(W)
        fresh = [v for v in vals if v.denominator == W] or vals
        members = []
        one = interp([Fraction(1)] * n_vals)
        members.append((one, max(one.degree, 1)))
        members.append((g * W, dg))
        members.append((one + g * W, dg))
        for _ in range(per_level - len(members)):
            vv = [fresh[int(rng.integers(len(fresh)))] if i == 0 else vals[int(rng.integers(len(vals)))]
                  for i in range(n_vals)]
            qdeg = int(rng.integers(0, W))
            mons = [a for d in range(qdeg + 1) for a in exponents_of_degree(n, d)]
            q = Polynomial(n, {a: int(rng.integers(-W, W + 1)) for a in mons})
            p = interp(vv) + g * q
            k = max(p.degree, 1)
            members.append((p, k))
        for p, k in members:
            yield W, p, k


def enumeration_spec(K: Region, levels: int = 16, per_level: int = 48, seed: int = 0):
    rules, lv, prev = [], [], 0
    for W, p, k in enumerate_family(K, levels, per_level, seed):
        r = 1 if k > prev else prev // k + 1
        rules.append(TermRule.single(r * k, p, r))
        lv.append(W)
        prev = r * k
    return SeriesSpec(K.n, tuple(rules)), lv


def _exact_point(y) -> tuple | None:
    out = []
    for c in y:
        if isinstance(c, (int, Fraction)):
            out.append(Fraction(c))
        elif isinstance(c, complex) and c.imag == 0 and math.isfinite(c.real):
            out.append(Fraction(c.real))
        elif isinstance(c, float):
            out.append(Fraction(c))
        else:
            return None
    return tuple(out)


def enumeration_verdict(spec: SeriesSpec, levels: list[int], y,
                        config: ClassifierConfig = ClassifierConfig()) -> ConvergenceVerdict:
    """Root test over enumeration levels: the level rate is the max of
    |p_j(y)|^(1/k_j) over the level (exact evaluation at real rational y)."""
    ex = _exact_point(y)
    yc = _as_complex(y)
    per: dict[int, float] = {}
    for rule, W in zip(spec.rules, levels):
        k = rule.exponent.b // rule.power.b
        if ex is not None and rule.base.is_exact:
            v = abs(rule.base.evaluate(list(ex)))
            rate = float(v) ** (1 / k)
        else:
            rate = abs(complex(rule.base.evaluate(list(yc)))) ** (1 / k)
        per[W] = max(per.get(W, 0.0), rate)
    Ws = np.array(sorted(per), dtype=float)
    with np.errstate(divide="ignore"):
        lr = np.log(np.array([per[int(w)] for w in Ws]))
    return classify_rates(Ws, lr, int(Ws.max()), config)


def enumeration_probes(K: Region, count: int, window: float = 2.0, seed: int = 0) -> list[tuple]:
    """The points of a finite K (exact) followed by seeded probes in the
    window ball."""
    out: list[tuple] = [tuple(p) for p in K.points] if K.kind == "FINITE" else \
        [tuple(p) for p in K.sample(max(1, count // 4), seed=seed, window=window)]
    rng = np.random.Generator(np.random.Philox(key=seed + 5))
    while len(out) < count:
        z = rng.normal(size=K.n) + 1j * rng.normal(size=K.n)
        out.append(tuple(z * window * rng.uniform() ** (1 / (2 * K.n)) / np.linalg.norm(z)))
    return out


def synth_enumeration(K: Region, levels: int = 16, per_level: int = 48, probes=None,
                      seed: int = 0) -> SynthesisReport:
    """Series whose convergence set is the G-hull of K (K itself when K is a
    finite set or a piece of an algebraic hypersurface)."""
    if levels < ClassifierConfig().j_min:
        raise ValueError(f"enumeration needs at least {ClassifierConfig().j_min} levels for a root-test verdict")
    spec, lv = enumeration_spec(K, levels, per_level, seed)
    probes = list(probes or [])
    vanish = [q for q in vanishing_polynomials(K) if q.degree >= 1]

    def run(y):
        ex = _exact_point(y)
        if ex is not None and K.kind == "FINITE":
            on = any(tuple(Fraction(c) for c in p) == ex for p in K.points)
        else:
            on = K.contains(_as_complex(y)).inside
        v = enumeration_verdict(spec, lv, y)
        # off K the vanishing witness is nonzero, so Phi_K(y) is infinite
        outside = (not on) and any(abs(complex(q.evaluate(list(_as_complex(y))))) > 0 for q in vanish)
        return ProbeResult(tuple(y), on, outside, v)

    results = parallel_map(run, probes)
    return SynthesisReport(spec, "enumeration", Exactness.EXACT, results,
                           {"kind": "levels", "levels": levels, "per_level": per_level,
                            "terms": len(spec.rules)},
                           class_ok=check_class(spec, 1, 0, max(spec.max_exponent() or 1, 1)),
                           notes={"levels": lv}, prober=run)


# --------------------------------------------------------------------------
# independent verification

def verify(spec: SeriesSpec, target: Region, probes, horizon: int | None = None,
           growth: float = 1e-6) -> SynthesisReport:
    """Empirical E_m membership from the series coefficients alone.

    E_m = {|s| <= m, |P_j(s)|^(1/j) <= m}.  A probe stays in some E_m when the
    later part of the coefficient stream produces no new maximum of
    |P_j(s)|^(1/j); it escapes when the later part keeps exceeding the
    earlier one.  Block-built specs compare block levels instead of halves.
    """
    H = horizon if horizon is not None else (spec.max_exponent() or 64)
    results = []
    for y in probes:
        yc = _as_complex(y)
        on = target.contains(yc).inside
        scale = float(np.linalg.norm(yc)) if spec.projective else 1.0
        stream = spec.restrict(yc, H, zero_tol=EPS_MEM)
        rates = np.where(np.isfinite(stream.log_abs),
                         np.exp(stream.log_abs / np.maximum(stream.exponents, 1)), 0.0) / scale
        rates = np.where(stream.exponents > 0, rates, 0.0)
        base = 1.0 if spec.projective else float(np.linalg.norm(yc))
        if spec.blocks:
            exp_to_block = {q: m for (q, _, _), m in zip(_terms_in_rule_order(spec, H), spec.blocks)}
            br = block_rates(stream, exp_to_block, scale)
            v = block_verdict(br)
            member = v.kind == Verdict.CONVERGES
            escape = v.kind == Verdict.DIVERGES
        else:
            half = len(rates) // 2
            m1 = float(rates[:half].max()) if half else 0.0
            m2 = float(rates[half:].max()) if len(rates) > half else 0.0
            escape = m2 > m1 * (1 + growth) and m2 > 0
            member = not escape
        level = max(base, float(rates.max()) if len(rates) else 0.0)
        m_level = math.ceil(level - 1e-12) if member else None
        kind = Verdict.CONVERGES if member else (Verdict.DIVERGES if escape else Verdict.INDETERMINATE)
        consistent = (member and on) or (escape and not on)
        if not consistent:
            kind = Verdict.INDETERMINATE
        margin = (m_level - level) if member and m_level is not None else 0.0
        verdict = ConvergenceVerdict(kind, level if member else math.inf, (1, H), margin, 0.0)
        results.append(ProbeResult(tuple(y), on, not on, verdict,
                                   {"E_m": m_level, "level": level, "consistent": consistent}))
    return SynthesisReport(spec, "verify", Exactness.WINDOWED, results, {"kind": "probes"},
                           notes={"consistent": all(r.detail["consistent"] for r in results),
                                  "target": region_to_dict(target)})
