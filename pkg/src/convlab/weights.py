"""Plurisubharmonic weights built from a small grammar, and the gluing that
turns a weight of logarithmic growth into one that is -inf exactly on a
prescribed set.

Grammar: log|p|, log sqrt(c + |x|^2), constants, finite maxima, nonnegative
sums and nonnegative affine rescalings.  Every node can bound its own
supremum over the polydisk {|x_i| <= R}; bounds take log R so that radii
like exp(2^40) stay representable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .polynomial import Polynomial, poly_from_dict, poly_to_dict

FLOOR = -1e12


def floored(v: float) -> float:
    return FLOOR if v == -math.inf or v < FLOOR else float(v)


class WeightFunction:
    n: int

    def __call__(self, x) -> float:
        raise NotImplementedError

    def log_bound(self, log_R: float) -> float:
        """Upper bound of sup over the closed polydisk of radius exp(log_R)."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def _pt(x, n: int) -> np.ndarray:
    v = np.atleast_1d(np.asarray(x, dtype=complex))
    if len(v) != n:
        raise ValueError(f"point has dimension {len(v)}, expected {n}")
    return v


@dataclass(frozen=True)
class LogAbsPoly(WeightFunction):
    poly: Polynomial

    @property
    def n(self) -> int:
        return self.poly.n

    def __call__(self, x) -> float:
        v = abs(complex(self.poly.evaluate(list(_pt(x, self.n)))))
        return math.log(v) if v > 0 else -math.inf

    def log_bound(self, log_R: float) -> float:
        if self.poly.is_zero:
            return -math.inf
        terms = [(math.log(abs(complex(c))), sum(a)) for a, c in self.poly.terms.items()]
        return float(logsumexp([lc + d * log_R for lc, d in terms]))

    def to_dict(self) -> dict:
        return {"kind": "log_abs", "poly": poly_to_dict(self.poly)}


@dataclass(frozen=True)
class LogNorm(WeightFunction):
    """log sqrt(shift + |x|^2); shift = 0 gives log|x|."""

    n: int
    shift: float = 0.0

    def __call__(self, x) -> float:
        r2 = self.shift + float(np.sum(np.abs(_pt(x, self.n)) ** 2))
        return 0.5 * math.log(r2) if r2 > 0 else -math.inf

    def log_bound(self, log_R: float) -> float:
        big = math.log(self.n) + 2 * log_R
        return 0.5 * (float(np.logaddexp(math.log(self.shift), big)) if self.shift > 0 else big)

    def to_dict(self) -> dict:
        return {"kind": "log_norm", "n": self.n, "shift": self.shift}


@dataclass(frozen=True)
class Constant(WeightFunction):
    n: int
    value: float

    def __call__(self, x) -> float:
        return self.value

    def log_bound(self, log_R: float) -> float:
        return self.value

    def to_dict(self) -> dict:
        return {"kind": "const", "n": self.n, "value": self.value}


@dataclass(frozen=True)
class MaxOf(WeightFunction):
    parts: tuple[WeightFunction, ...]

    @property
    def n(self) -> int:
        return self.parts[0].n

    def __call__(self, x) -> float:
        return max(p(x) for p in self.parts)

    def log_bound(self, log_R: float) -> float:
        return max(p.log_bound(log_R) for p in self.parts)

    def to_dict(self) -> dict:
        return {"kind": "max", "parts": [p.to_dict() for p in self.parts]}


@dataclass(frozen=True)
class SumOf(WeightFunction):
    parts: tuple[WeightFunction, ...]
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.weights:
            object.__setattr__(self, "weights", (1.0,) * len(self.parts))
        if len(self.weights) != len(self.parts) or any(w < 0 for w in self.weights):
            raise ValueError("sum weights must be nonnegative, one per part")

    @property
    def n(self) -> int:
        return self.parts[0].n

    def __call__(self, x) -> float:
        return sum(w * p(x) for w, p in zip(self.weights, self.parts) if w)

    def log_bound(self, log_R: float) -> float:
        return sum(w * p.log_bound(log_R) for w, p in zip(self.weights, self.parts) if w)

    def to_dict(self) -> dict:
        return {"kind": "sum", "parts": [p.to_dict() for p in self.parts], "weights": list(self.weights)}


@dataclass(frozen=True)
class Affine(WeightFunction):
    part: WeightFunction
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")

    @property
    def n(self) -> int:
        return self.part.n

    def __call__(self, x) -> float:
        v = self.part(x)
        return -math.inf if v == -math.inf and self.scale > 0 else self.scale * v + self.shift

    def log_bound(self, log_R: float) -> float:
        return self.scale * self.part.log_bound(log_R) + self.shift

    def to_dict(self) -> dict:
        return {"kind": "affine", "part": self.part.to_dict(), "scale": self.scale, "shift": self.shift}


# --------------------------------------------------------------------------
# absolutely homogeneous grammar on C x C^n

class HFunction:
    n: int  # number of coordinates including x_0

    def __call__(self, x) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class HAbsRoot(HFunction):
    """|h(x)|^(1/q) for h homogeneous of degree q."""

    poly: Polynomial

    def __post_init__(self):
        if not self.poly.is_homogeneous() or self.poly.degree < 1:
            raise ValueError("need a homogeneous polynomial of positive degree")

    @property
    def n(self) -> int:
        return self.poly.n

    def __call__(self, x) -> float:
        return abs(complex(self.poly.evaluate(list(_pt(x, self.n))))) ** (1 / self.poly.degree)

    def to_dict(self) -> dict:
        return {"kind": "h_abs_root", "poly": poly_to_dict(self.poly)}


@dataclass(frozen=True)
class HMax(HFunction):
    parts: tuple[HFunction, ...]

    @property
    def n(self) -> int:
        return self.parts[0].n

    def __call__(self, x) -> float:
        return max(p(x) for p in self.parts)

    def to_dict(self) -> dict:
        return {"kind": "h_max", "parts": [p.to_dict() for p in self.parts]}


@dataclass(frozen=True)
class HNorm(HFunction):
    n: int

    def __call__(self, x) -> float:
        return float(np.linalg.norm(_pt(x, self.n)))

    def to_dict(self) -> dict:
        return {"kind": "h_norm", "n": self.n}


def h_to_l(h: HFunction) -> WeightFunction:
    """x -> log h(1, x)."""
    if isinstance(h, HAbsRoot):
        q = h.poly.degree
        base = LogAbsPoly(h.poly.dehomogenize(0))
        return base if q == 1 else Affine(base, 1.0 / q, 0.0)
    if isinstance(h, HMax):
        return MaxOf(tuple(h_to_l(p) for p in h.parts))
    if isinstance(h, HNorm):
        return LogNorm(h.n - 1, 1.0)
    raise TypeError(f"unsupported H-grammar node {type(h).__name__}")


def weight_from_dict(d: dict):
    try:
        k = d["kind"]
        if k == "log_abs":
            return LogAbsPoly(poly_from_dict(d["poly"]))
        if k == "log_norm":
            return LogNorm(int(d["n"]), float(d.get("shift", 0.0)))
        if k == "const":
            return Constant(int(d["n"]), float(d["value"]))
        if k == "max":
            return MaxOf(tuple(weight_from_dict(p) for p in d["parts"]))
        if k == "sum":
            return SumOf(tuple(weight_from_dict(p) for p in d["parts"]), tuple(d.get("weights", ())))
        if k == "affine":
            return Affine(weight_from_dict(d["part"]), float(d.get("scale", 1.0)), float(d.get("shift", 0.0)))
        if k == "h_abs_root":
            return HAbsRoot(poly_from_dict(d["poly"]))
        if k == "h_max":
            return HMax(tuple(weight_from_dict(p) for p in d["parts"]))
        if k == "h_norm":
            return HNorm(int(d["n"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed weight JSON: {exc!r}") from exc
    raise ValueError(f"unknown weight kind {d.get('kind')!r}")


# --------------------------------------------------------------------------
# gluing

@dataclass(frozen=True)
class SaddulaevWeight(WeightFunction):
    """v = sum_{j=1}^{J} v_j with
    v_j = max(2^-j (u/M_j - 1), 2^-j log|x| - 1) while log|x| < 2^j,
    and v_j = 2^-j log|x| - 1 beyond."""

    u: WeightFunction
    M: tuple[float, ...]

    @property
    def n(self) -> int:
        return self.u.n

    @property
    def j_max(self) -> int:
        return len(self.M)

    def terms(self, x) -> np.ndarray:
        x = _pt(x, self.n)
        r = float(np.linalg.norm(x))
        lx = math.log(r) if r > 0 else -math.inf
        ux = self.u(x)
        out = np.empty(self.j_max)
        for j, Mj in enumerate(self.M, start=1):
            s = 2.0 ** -j
            tail = s * lx - 1 if lx > -math.inf else -math.inf
            if lx < 2.0 ** j:
                head = s * (ux / Mj - 1) if ux > -math.inf else -math.inf
                out[j - 1] = max(head, tail)
            else:
                out[j - 1] = tail
        return out

    def partial_sums(self, x) -> np.ndarray:
        t = self.terms(x)
        with np.errstate(invalid="ignore"):
            return np.cumsum(t)

    def __call__(self, x) -> float:
        # where u = -inf every late term is about -1, so the full series is -inf
        if self.u(x) == -math.inf:
            return -math.inf
        v = float(np.sum(self.terms(x)))
        return -math.inf if math.isnan(v) else v

    def value(self, x) -> float:
        return floored(self(x))

    def tail_bound(self, x) -> float:
        """|sum_{j > J} v_j(x)| bound, valid once log|x| < 2^(J+1)."""
        ux = self.u(x)
        if ux == -math.inf:
            return math.inf
        return 2.0 ** -self.j_max * (1 + max(0.0, -ux) / self.M[-1])

    def log_bound(self, log_R: float) -> float:
        return max(log_R, 0.0)

    def to_dict(self) -> dict:
        return {"kind": "saddulaev", "u": self.u.to_dict(), "M": list(self.M)}


def eventually_nonincreasing(seq, tol: float = 1e-12) -> bool:
    """True when the second half of the sequence never increases."""
    s = np.asarray(seq, dtype=float)
    if np.all(s == -math.inf):
        return True
    tail = s[len(s) // 2:]
    with np.errstate(invalid="ignore"):
        d = np.diff(tail)
    return bool(np.all((d <= tol) | np.isnan(d)))


def saddulaev_transform(u: WeightFunction, E_samples=(), off_samples=(), j_max: int = 40):
    """Glue v from u; returns (v, report).

    M_j is the grammar's certified bound of u on the polydisk of radius
    exp(2^j) (which contains the ball of that radius), made nondecreasing
    and at least 1.
    """
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    M, prev = [], 1.0
    for j in range(1, j_max + 1):
        b = u.log_bound(2.0 ** j)
        if not math.isfinite(b):
            raise ValueError(f"cannot certify a finite bound for u at j = {j}")
        prev = max(prev, b, 1.0)
        M.append(prev)
    v = SaddulaevWeight(u, tuple(M))

    def row(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        val = v(x)
        lp = max(0.0, math.log(float(np.linalg.norm(x)))) if np.linalg.norm(x) > 0 else 0.0
        return {"x": [[complex(c).real, complex(c).imag] for c in x], "v": floored(val),
                "log_plus": lp, "below_log_plus": floored(val) <= lp + 1e-9,
                "monotone_tail": eventually_nonincreasing(v.partial_sums(x)),
                "tail_bound": v.tail_bound(x)}

    on = [row(x) for x in E_samples]
    off = [row(x) for x in off_samples]
    report = {
        "j_max": j_max, "M": M,
        "E": on, "off": off,
        "E_at_floor": all(r["v"] == FLOOR for r in on),
        "off_finite": all(r["v"] > FLOOR for r in off),
        "below_log_plus": all(r["below_log_plus"] for r in on + off),
        "monotone_tail": all(r["monotone_tail"] for r in on + off),
    }
    return v, report
