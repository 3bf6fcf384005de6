"""Formal series sum_j P_j(s) t^j described by finite term rules.

A :class:`TermRule` emits, for k = k_start, k_start + 1, ..., the term

    scale(k) * base(s) ** power(k) * t ** exponent(k)

with ``power`` and ``exponent`` affine in k.  Coefficient streams are kept in
log-magnitude form so that rules such as (k p(s))^k never overflow.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .polynomial import Polynomial, poly_from_dict, poly_to_dict, monomial_counts

NEG_INF = -np.inf


@dataclass(frozen=True)
class Affine:
    a: int = 1
    b: int = 0

    def __call__(self, k: int) -> int:
        return self.a * k + self.b


@dataclass(frozen=True)
class Scale:
    """Scalar sequence: ``const`` c, ``k^k`` c*k^k, or ``m_pow`` c*m^(a k + b)."""

    form: str = "const"
    value: complex = 1.0
    m: float = 1.0
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.form not in ("const", "k^k", "m_pow"):
            raise ValueError(f"unknown scale form {self.form!r}")
        if self.form == "m_pow" and self.m <= 0:
            raise ValueError("m_pow needs m > 0")

    def log_abs(self, k: int) -> float:
        if self.value == 0:
            return NEG_INF
        base = math.log(abs(self.value))
        if self.form == "k^k":
            return base + (k * math.log(k) if k > 0 else 0.0)
        if self.form == "m_pow":
            return base + (self.a * k + self.b) * math.log(self.m)
        return base

    def phase(self) -> float:
        return float(np.angle(self.value))

    def __call__(self, k: int):
        if self.form == "k^k":
            return self.value * (k ** k if k > 0 else 1)
        if self.form == "m_pow":
            return self.value * self.m ** (self.a * k + self.b)
        return self.value


@dataclass(frozen=True)
class TermRule:
    base: Polynomial
    scale: Scale = Scale()
    power: Affine = Affine(1, 0)
    exponent: Affine = Affine(1, 0)
    k_start: int = 0
    k_stop: int | None = None

    def __post_init__(self):
        if self.exponent.a < 0 or self.power.a < 0:
            raise ValueError("power and exponent schedules must be nondecreasing")
        if self.exponent.a == 0 and self.k_stop is None:
            raise ValueError("a constant exponent schedule needs k_stop")
        if self.k_stop is not None and self.k_stop < self.k_start:
            raise ValueError("k_stop < k_start")
        for k in (self.k_start,) + ((self.k_stop,) if self.k_stop is not None else ()):
            if self.power(k) < 0 or self.exponent(k) < 0:
                raise ValueError("negative power or exponent")

    @classmethod
    def single(cls, exponent: int, base: Polynomial, power: int = 1,
               scale: Scale = Scale()) -> "TermRule":
        return cls(base, scale, Affine(0, power), Affine(0, exponent), 0, 0)

    def ks(self, horizon: int) -> range:
        if self.exponent.a == 0:
            hi = self.k_stop if self.exponent.b <= horizon else self.k_start - 1
        else:
            hi = (horizon - self.exponent.b) // self.exponent.a
            if self.k_stop is not None:
                hi = min(hi, self.k_stop)
        return range(self.k_start, hi + 1)

    @property
    def is_zero(self) -> bool:
        return self.base.is_zero or self.scale.value == 0

    def degree(self, k: int) -> int:
        if self.is_zero:
            return -1
        return self.base.degree * self.power(k)

    def polynomial(self, k: int) -> Polynomial:
        return (self.base ** self.power(k)) * self.scale(k)

    def log_abs_at(self, point, ks: Sequence[int], base_value: complex | None = None
                   ) -> tuple[np.ndarray, np.ndarray]:
        """(log|c_k|, arg c_k) at one point for each k."""
        ks = np.asarray(list(ks), dtype=np.int64)
        b = complex(self.base.evaluate_many([point])[0]) if base_value is None else complex(base_value)
        pw = self.power.a * ks + self.power.b
        ls = np.array([self.scale.log_abs(int(k)) for k in ks], dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lb = math.log(abs(b)) if b != 0 else NEG_INF
            la = np.where(pw == 0, 0.0, pw * lb)
        ph = self.scale.phase() + pw * (np.angle(b) if b != 0 else 0.0)
        return ls + la, ph


@dataclass(frozen=True)
class CoefficientStream:
    """Nonzero and zero coefficients c_j of a single-variable series in t."""

    exponents: np.ndarray
    log_abs: np.ndarray
    phase: np.ndarray
    horizon: int

    @property
    def values(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_abs) * np.exp(1j * self.phase)

    def rates(self) -> np.ndarray:
        """r_j = |c_j|^(1/j) (0 where c_j = 0; j = 0 reported as nan)."""
        j = self.exponents.astype(float)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.exp(self.log_abs / j)
        r[j == 0] = np.nan
        return r

    def dense(self) -> np.ndarray:
        """c_0..c_D as a complex array (absent exponents are 0)."""
        out = np.zeros(self.horizon + 1, dtype=complex)
        out[self.exponents] = self.values
        return out

    def to_csv(self, path) -> None:
        vals, rates = self.values, self.rates()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j", "re", "im", "r_j"])
            for j, v, r in zip(self.exponents, vals, rates):
                w.writerow([int(j), repr(float(v.real)), repr(float(v.imag)), repr(float(r))])


class ExponentCollision(ValueError):
    pass


@dataclass(frozen=True)
class SeriesSpec:
    n: int
    rules: tuple[TermRule, ...] = ()
    projective: bool = False
    blocks: tuple[int, ...] = ()  # optional block level m per rule (block constructions)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        if self.blocks and len(self.blocks) != len(self.rules):
            raise ValueError("blocks must give one level per rule")
        for r in self.rules:
            if r.base.n != self.n:
                raise ValueError("rule base dimension mismatch")
        if self.projective:
            for r in self.rules:
                if r.is_zero:
                    continue
                if not r.base.is_homogeneous():
                    raise ValueError("projective series need homogeneous bases")
                d = r.base.degree
                if d * r.power.a != r.exponent.a or d * r.power.b != r.exponent.b:
                    raise ValueError("projective term degree must equal its exponent")

    def terms(self, horizon: int) -> list[tuple[int, TermRule, int]]:
        """(q, rule, k) for every emitted exponent q <= horizon, sorted by q."""
        out, seen = [], {}
        for ri, rule in enumerate(self.rules):
            for k in rule.ks(horizon):
                q = rule.exponent(k)
                if q in seen:
                    raise ExponentCollision(f"exponent {q} emitted twice (rules {seen[q]} and {ri})")
                seen[q] = ri
                out.append((q, rule, k))
        out.sort(key=lambda t: t[0])
        return out

    def exponents(self, horizon: int) -> list[int]:
        return [q for q, _, _ in self.terms(horizon)]

    def materialize(self, horizon: int) -> list[tuple[int, Polynomial]]:
        return [(q, rule.polynomial(k)) for q, rule, k in self.terms(horizon)]

    def degrees(self, horizon: int) -> list[tuple[int, int]]:
        return [(q, rule.degree(k)) for q, rule, k in self.terms(horizon)]

    def max_exponent(self) -> int | None:
        """Largest exponent if every rule is finite, else None."""
        if any(r.k_stop is None for r in self.rules):
            return None
        return max((r.exponent(r.k_stop) for r in self.rules), default=0)

    def restrict(self, point, horizon: int, zero_tol: float = 0.0) -> CoefficientStream:
        """Coefficients at ``point``; a base with |b| <= zero_tol (1+|point|)^deg
        counts as exactly zero.

        Projective specs are homogeneous of degree q in every term, so they are
        evaluated at point/|point| and shifted by q log|point|: no underflow for
        small representatives and a zero test that ignores the scaling.
        """
        point = np.asarray(point, dtype=complex)
        shift = 0.0
        if self.projective:
            shift = math.log(float(np.linalg.norm(point)))
            point = point / np.linalg.norm(point)
        terms = self.terms(horizon)
        qs = np.array([q for q, _, _ in terms], dtype=np.int64)
        la = np.full(len(terms), NEG_INF)
        ph = np.zeros(len(terms))
        by_rule: dict[int, list[int]] = {}
        for i, (_, rule, _) in enumerate(terms):
            by_rule.setdefault(id(rule), []).append(i)
        rules = {id(r): r for r in self.rules}
        for rid, idx in by_rule.items():
            rule = rules[rid]
            if rule.is_zero:
                continue
            b = complex(rule.base.evaluate_many([point])[0])
            if zero_tol > 0 and abs(b) <= zero_tol * (1 + float(np.linalg.norm(point))) ** rule.base.degree:
                continue
            l, p = rule.log_abs_at(point, [terms[i][2] for i in idx], b)
            la[idx], ph[idx] = l, p
        if shift:
            la = la + qs * shift
        return CoefficientStream(qs, la, ph, horizon)

    # JSON
    def to_dict(self) -> dict:
        rules = []
        for r in self.rules:
            sc = {"form": r.scale.form, "re": complex(r.scale.value).real,
                  "im": complex(r.scale.value).imag}
            if r.scale.form == "m_pow":
                sc.update(m=r.scale.m, a=r.scale.a, b=r.scale.b)
            rules.append({
                "kind": "power_schedule",
                "base": poly_to_dict(r.base),
                "scale": sc,
                "power": {"form": "affine", "a": r.power.a, "b": r.power.b},
                "exponent": {"form": "affine", "a": r.exponent.a, "b": r.exponent.b},
                "k_start": r.k_start,
                "k_stop": r.k_stop,
            })
        out = {"n": self.n, "projective": self.projective, "rules": rules}
        if self.blocks:
            out["blocks"] = list(self.blocks)
        return out

    @classmethod
    def from_dict(cls, d) -> "SeriesSpec":
        try:
            rules = []
            for i, r in enumerate(d["rules"]):
                if r.get("kind", "power_schedule") != "power_schedule":
                    raise ValueError(f"rule {i}: unknown kind {r.get('kind')!r}")
                sc = r.get("scale", {"form": "const"})
                scale = Scale(sc.get("form", "const"),
                              complex(sc.get("re", sc.get("value", 1.0)), sc.get("im", 0.0)),
                              float(sc.get("m", 1.0)), float(sc.get("a", 0.0)), float(sc.get("b", 0.0)))
                pw = r.get("power", {"a": 1, "b": 0})
                ex = r["exponent"]
                rules.append(TermRule(poly_from_dict(r["base"]), scale,
                                      Affine(int(pw["a"]), int(pw["b"])),
                                      Affine(int(ex["a"]), int(ex["b"])),
                                      int(r.get("k_start", 0)),
                                      None if r.get("k_stop") is None else int(r["k_stop"])))
            return cls(int(d["n"]), tuple(rules), bool(d.get("projective", False)),
                       tuple(d.get("blocks", ())))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed series JSON: {exc!r}") from exc


# --------------------------------------------------------------------------
# class membership and normalisation

def check_class(spec: SeriesSpec, A: int, B: int, horizon: int) -> bool:
    """deg P_j <= A j + B for materialised terms up to ``horizon`` and, by the
    affine schedules, for every later term."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    for q, d in spec.degrees(horizon):
        if d > A * q + B:
            return False
    for r in spec.rules:
        if r.is_zero:
            continue
        dB = r.base.degree
        # slack(k) = A*q(k) + B - dB*power(k), affine in k
        slope = A * r.exponent.a - dB * r.power.a
        k_last = r.k_stop
        k_first = max(r.k_start, max(r.ks(horizon), default=r.k_start - 1) + 1)
        if k_last is not None and k_first > k_last:
            continue
        slack0 = A * r.exponent(k_first) + B - dB * r.power(k_first)
        if slack0 < 0:
            return False
        if k_last is None and slope < 0:
            return False
        if k_last is not None and A * r.exponent(k_last) + B - dB * r.power(k_last) < 0:
            return False
    return True


def normalize_to_10(spec: SeriesSpec, A: int, B: int, horizon: int = 64) -> SeriesSpec:
    """g(s, t) = t^N f(s, t^N) with N = A + B: exponent q -> N (q + 1)."""
    if not check_class(spec, A, B, horizon):
        raise ValueError(f"series is not in Class ({A},{B})")
    N = A + B
    rules = tuple(replace(r, exponent=Affine(N * r.exponent.a, N * (r.exponent.b + 1)))
                  for r in spec.rules)
    return SeriesSpec(spec.n, rules, spec.projective, spec.blocks)


def restrict_affine(spec: SeriesSpec, s, horizon: int, zero_tol: float = 0.0) -> CoefficientStream:
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if len(s) != spec.n:
        raise ValueError("dimension mismatch")
    return spec.restrict(s, horizon, zero_tol)


def restrict_projective(spec: SeriesSpec, x, horizon: int, zero_tol: float = 0.0) -> CoefficientStream:
    """Coefficients of f(x t) = sum_k H_k(x) t^k."""
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    if len(x) != spec.n:
        raise ValueError("dimension mismatch")
    if not np.any(x):
        raise ValueError("projective restriction needs x != 0")
    for q, rule, k in spec.terms(horizon):
        if not rule.is_zero and rule.degree(k) != q:
            raise ValueError("term is not homogeneous of degree equal to its exponent")
    return spec.restrict(x, horizon, zero_tol)


# --------------------------------------------------------------------------
# root-test classifier

class Verdict(str, enum.Enum):
    CONVERGES = "CONVERGES"
    DIVERGES = "DIVERGES"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class ConvergenceVerdict:
    kind: Verdict
    growth_estimate: float
    window: tuple[int, int]
    margin: float
    slope: float = 0.0

    def to_dict(self) -> dict:
        g = self.growth_estimate
        return {"kind": self.kind.value, "growth_estimate": g if math.isfinite(g) else "inf",
                "window": list(self.window), "margin": self.margin, "slope": self.slope}


@dataclass(frozen=True)
class ClassifierConfig:
    """Thresholds for the windowed root test.

    ``slope_min`` is the least-squares slope of log r_j against log j above
    which growth counts as a trend; ``slope_flat`` the slope below which the
    window counts as bounded.  ``clean_ratio`` and ``favour_ratio`` bound the
    residual ratio between the power-law and limit fits of the envelope.
    """

    slope_min: float = 0.2
    slope_flat: float = 0.1
    bound_factor: float = 1.5
    expected_bound: float = 1.0
    j_min: int = 8
    window_fraction: float = 0.5
    clean_ratio: float = 0.1
    favour_ratio: float = 0.6

    @property
    def bound(self) -> float:
        return self.bound_factor * max(1.0, self.expected_bound)


def _fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    X = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    return float(coef[1]), float(coef[0]), float(np.sqrt(np.mean(res ** 2)))


def classify_rates(index: np.ndarray, log_rate: np.ndarray, horizon: int,
                   config: ClassifierConfig = ClassifierConfig()) -> ConvergenceVerdict:
    """Classify from (j, log r_j) pairs; -inf entries (zero terms) are dropped.

    The fits run on the running maximum of log r_j over the window, so
    interleaved term families are judged by their upper envelope.  Besides
    the absolute slope thresholds, two scale-free tests compare a power-law
    fit (a + c log j, unbounded) with a limit fit (a + b / j, bounded); their
    residual ratio does not change when every rate is raised to a fixed power,
    which is what substituting t -> t^N does.
    """
    if horizon < config.j_min:
        raise ValueError(f"window too small: horizon {horizon} < j_min {config.j_min}")
    lo = max(1, int(math.ceil(config.window_fraction * horizon)))
    window = (lo, horizon)
    index = np.asarray(index, dtype=float)
    log_rate = np.asarray(log_rate, dtype=float)
    finite = (index >= 1) & (index <= horizon) & np.isfinite(log_rate)
    order = np.argsort(index[finite], kind="stable")
    j_all, y_all = index[finite][order], log_rate[finite][order]
    # a point is a record if it beats every earlier rate, not just those in the window
    prior = np.concatenate(([-np.inf], np.maximum.accumulate(y_all)[:-1]))
    keep = j_all >= lo
    j, y, is_record = j_all[keep], y_all[keep], (y_all > prior)[keep]
    if len(j) == 0:
        return ConvergenceVerdict(Verdict.CONVERGES, 0.0, window, config.slope_min, 0.0)
    r_max = float(np.exp(y.max()))
    if len(j) < 3:
        kind = Verdict.CONVERGES if r_max <= config.bound else Verdict.INDETERMINATE
        return ConvergenceVerdict(kind, r_max, window, config.bound - r_max, 0.0)
    env = np.maximum.accumulate(y)
    rise = env[-1] - env[0]
    # fit the record points only: the staircase between records is an
    # artifact of interleaved families and blurs the curve shape
    if is_record.sum() >= 3:
        jr, er = j[is_record], y[is_record]
    else:
        jr, er = j, env
    slope, _, res_power = _fit(np.log(jr), er)
    _, _, res_limit = _fit(1.0 / jr, er)
    flat_tol = 1e-12 * max(1.0, abs(env[-1]))
    if rise <= flat_tol or slope <= 0:
        return ConvergenceVerdict(Verdict.CONVERGES, r_max, window, config.slope_min - slope, slope)
    clean_power = res_power <= config.clean_ratio * res_limit
    clean_limit = res_limit <= config.clean_ratio * res_power
    if slope >= config.slope_min and (r_max > config.bound or clean_power):
        return ConvergenceVerdict(Verdict.DIVERGES, math.inf, window, slope - config.slope_min, slope)
    if clean_power:
        return ConvergenceVerdict(Verdict.DIVERGES, math.inf, window, 1.0 - res_power / res_limit, slope)
    if res_power <= config.favour_ratio * res_limit:
        # the envelope bends like log j rather than settling like 1/j
        return ConvergenceVerdict(Verdict.DIVERGES, math.inf, window, 1.0 - res_power / res_limit, slope)
    if clean_limit or slope <= config.slope_flat:
        margin = (1.0 - res_limit / res_power) if clean_limit else config.slope_min - slope
        return ConvergenceVerdict(Verdict.CONVERGES, r_max, window, margin, slope)
    return ConvergenceVerdict(Verdict.INDETERMINATE, r_max, window, 0.0, slope)


def classify(coefficients, config: ClassifierConfig = ClassifierConfig(),
             horizon: int | None = None) -> ConvergenceVerdict:
    """Root-test verdict for a coefficient stream or a dense array c_0..c_D."""
    if isinstance(coefficients, CoefficientStream):
        j, la = coefficients.exponents, coefficients.log_abs
        D = coefficients.horizon if horizon is None else horizon
    else:
        c = np.asarray(coefficients, dtype=complex)
        j = np.arange(len(c))
        with np.errstate(divide="ignore"):
            la = np.log(np.abs(c))
        D = len(c) - 1 if horizon is None else horizon
    j = np.asarray(j, dtype=float)
    pos = j > 0
    return classify_rates(j[pos], la[pos] / j[pos], D, config)


def classify_log_abs(exponents, log_abs, horizon: int,
                     config: ClassifierConfig = ClassifierConfig()) -> ConvergenceVerdict:
    e = np.asarray(exponents, dtype=float)
    la = np.asarray(log_abs, dtype=float)
    pos = e > 0
    return classify_rates(e[pos], la[pos] / e[pos], horizon, config)


# --------------------------------------------------------------------------
# joint (n+1)-variable root test

HARTOGS_CONFIG = ClassifierConfig(slope_min=0.15, slope_flat=0.05)


def _joint_entries(spec: SeriesSpec, horizon: int, materialize_limit: int, torus: int,
                   seed: int) -> dict[int, float]:
    """Max log|b_{alpha,q}| per total degree |alpha| + q."""
    best: dict[int, float] = {}

    def put(N: int, v: float):
        # layers with N <= horizon are complete: they only involve q <= horizon
        if N <= horizon and v > best.get(N, NEG_INF):
            best[N] = v

    rng = np.random.Generator(np.random.Philox(key=seed))
    theta = rng.uniform(0, 2 * np.pi, size=(torus, spec.n))
    torus_pts = np.exp(1j * theta)
    for q, rule, k in spec.terms(horizon):
        if rule.is_zero:
            continue
        deg = rule.degree(k)
        if deg <= materialize_limit:
            P = rule.polynomial(k)
            for a, c in P.terms.items():
                if c != 0:
                    put(sum(a) + q, math.log(abs(complex(c))))
        else:
            # Cauchy: max_alpha |b_alpha| >= |P(s)| / #monomials on the unit torus
            vals = [rule.log_abs_at(p, [k])[0][0] for p in torus_pts]
            lb = max(vals) - math.log(monomial_counts(spec.n, deg)[0])
            if lb >= 0:
                put(deg + q, lb)  # |b|^(1/(|alpha|+q)) >= |b|^(1/(deg+q)) when |b| >= 1
    return best


def hartogs_joint_check(spec: SeriesSpec, horizon: int = 64,
                        config: ClassifierConfig = HARTOGS_CONFIG,
                        materialize_limit: int = 64, torus: int = 16,
                        seed: int = 0) -> ConvergenceVerdict:
    """Root test on the coefficients of f viewed as a series in (s, t)."""
    best = _joint_entries(spec, horizon, materialize_limit, torus, seed)
    if not best:
        return ConvergenceVerdict(Verdict.CONVERGES, 0.0, (1, horizon), config.slope_min, 0.0)
    N = np.array(sorted(best), dtype=float)
    la = np.array([best[int(v)] for v in N])
    pos = N > 0
    return classify_rates(N[pos], la[pos] / N[pos], max(horizon, config.j_min), config)
