"""Closed sets in C^n and P^(n-1): descriptors, membership, sampling.

Projective points are carried by nonzero representatives in C^n; the
canonical representative is the unit vector whose first nonzero coordinate
is real and positive.  Distances between projective points and from a point
to a hyperplane are sines of Fubini-Study angles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Sequence

import numpy as np

from .polynomial import Polynomial, poly_from_dict, poly_to_dict

EPS_MEM = 1e-9


class SamplerFailure(RuntimeError):
    """Raised when a sampler cannot produce enough member points."""


@dataclass(frozen=True)
class Membership:
    inside: bool
    residual: float

    def __bool__(self) -> bool:
        return self.inside


def _vec(x, n: int | None = None) -> np.ndarray:
    v = np.atleast_1d(np.asarray([complex(c) for c in np.atleast_1d(x)], dtype=complex))
    if n is not None and len(v) != n:
        raise ValueError(f"point has dimension {len(v)}, expected {n}")
    return v


def canonical(x) -> np.ndarray:
    """Unit representative with first nonzero coordinate positive real."""
    v = _vec(x)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("zero vector has no projective class")
    v = v / nrm
    i = int(np.flatnonzero(np.abs(v) > 1e-300)[0])
    return v * (abs(v[i]) / v[i])


def proj_distance(x, y) -> float:
    """sin of the Fubini-Study angle between [x] and [y]."""
    x, y = _vec(x), _vec(y)
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    # norm of the component of x orthogonal to y; stable near 0
    return float(min(1.0, np.linalg.norm(x - np.vdot(y, x) * y)))


def random_unit(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    z = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _uniform_ball(rng, count: int, n: int, radius: float) -> np.ndarray:
    u = random_unit(rng, count, n)
    rad = radius * rng.uniform(size=(count, 1)) ** (1.0 / (2 * n))
    return u * rad


# --------------------------------------------------------------------------
# hyperplanes

@dataclass(frozen=True)
class Hyperplane:
    """V = {[x]: <x, normal> = 0} in P^(n-1), <x, y> = sum x_i conj(y_i)."""

    normal: tuple[complex, ...]

    def __post_init__(self):
        v = _vec(self.normal)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", tuple(complex(c) for c in v / nrm))

    @property
    def n(self) -> int:
        return len(self.normal)

    @classmethod
    def from_functional(cls, w) -> "Hyperplane":
        """Hyperplane {sum w_i x_i = 0}."""
        return cls(tuple(np.conj(_vec(w))))

    def distance(self, x) -> float:
        x = _vec(x, self.n)
        return float(abs(np.vdot(np.asarray(self.normal), x)) / np.linalg.norm(x))

    def distances(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=complex).reshape(-1, self.n)
        return np.abs(X @ np.conj(np.asarray(self.normal))) / np.linalg.norm(X, axis=1)

    def basis(self) -> np.ndarray:
        """Orthonormal basis (rows) of the underlying linear subspace."""
        nv = np.asarray(self.normal)[None, :]
        _, _, vh = np.linalg.svd(nv)
        return vh[1:].conj()


# --------------------------------------------------------------------------
# regions

_KINDS = ("VARIETY", "FINITE", "BALL", "POLYDISK", "SPHERE", "SEGMENT",
          "UNION", "INTERSECTION", "HYPERPLANE")


@dataclass(frozen=True)
class Region:
    """Closed-set descriptor.  ``n`` is the number of coordinates; a
    projective region lives in P^(n-1)."""

    kind: str
    n: int
    projective: bool = False
    polys: tuple[Polynomial, ...] = ()
    points: tuple[tuple, ...] = ()
    center: tuple[complex, ...] = ()
    radius: float = 0.0
    endpoints: tuple[tuple[complex, ...], ...] = ()
    children: tuple["Region", ...] = ()
    normal: tuple[complex, ...] = ()
    window: float = 2.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}")
        for c in self.children:
            if c.n != self.n or c.projective != self.projective:
                raise ValueError("space mismatch between region and child")
        for p in self.polys:
            if p.n != self.n:
                raise ValueError("polynomial dimension mismatch")
            if self.projective and not p.is_homogeneous():
                raise ValueError("projective varieties need homogeneous polynomials")

    # constructors
    @classmethod
    def variety(cls, polys, window: float = 2.0, projective: bool = False) -> "Region":
        polys = tuple(polys) if not isinstance(polys, Polynomial) else (polys,)
        return cls("VARIETY", polys[0].n, projective, polys=polys, window=window)

    @classmethod
    def finite(cls, points, n: int | None = None, projective: bool = False) -> "Region":
        pts = tuple(tuple(p) if isinstance(p, (tuple, list, np.ndarray)) else (p,) for p in points)
        if n is None:
            if not pts:
                raise ValueError("empty finite set needs n")
            n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("points must share dimension")
        if projective:
            pts = tuple(tuple(complex(c) for c in canonical(p)) for p in pts)
        return cls("FINITE", n, projective, points=pts)

    @classmethod
    def ball(cls, center, radius: float) -> "Region":
        c = tuple(complex(v) for v in np.atleast_1d(center))
        return cls("BALL", len(c), center=c, radius=float(radius))

    @classmethod
    def polydisk(cls, center, radius: float) -> "Region":
        c = tuple(complex(v) for v in np.atleast_1d(center))
        return cls("POLYDISK", len(c), center=c, radius=float(radius))

    @classmethod
    def sphere(cls, center, radius: float) -> "Region":
        c = tuple(complex(v) for v in np.atleast_1d(center))
        return cls("SPHERE", len(c), center=c, radius=float(radius))

    @classmethod
    def segment(cls, a, b) -> "Region":
        a = tuple(complex(v) for v in np.atleast_1d(a))
        b = tuple(complex(v) for v in np.atleast_1d(b))
        return cls("SEGMENT", len(a), endpoints=(a, b))

    @classmethod
    def union(cls, children) -> "Region":
        children = tuple(children)
        return cls("UNION", children[0].n, children[0].projective, children=children)

    @classmethod
    def intersection(cls, children) -> "Region":
        children = tuple(children)
        return cls("INTERSECTION", children[0].n, children[0].projective, children=children)

    @classmethod
    def hyperplane(cls, normal) -> "Region":
        h = Hyperplane(tuple(np.atleast_1d(normal)))
        return cls("HYPERPLANE", h.n, True, normal=h.normal)

    # queries
    @property
    def is_empty(self) -> bool:
        if self.kind == "FINITE":
            return not self.points
        if self.kind == "UNION":
            return all(c.is_empty for c in self.children)
        return False

    @property
    def degree(self) -> int:
        return max((p.degree for p in self.polys), default=0)

    def contains(self, x, eps: float = EPS_MEM) -> Membership:
        x = _vec(x, self.n)
        if self.projective:
            x = canonical(x)
        nx = float(np.linalg.norm(x))
        k = self.kind
        if k == "VARIETY":
            res = max(abs(complex(p.evaluate_many([x])[0])) for p in self.polys)
            return Membership(res <= eps * (1 + nx) ** self.degree, res)
        if k == "FINITE":
            if not self.points:
                return Membership(False, math.inf)
            if self.projective:
                res = min(proj_distance(x, p) for p in self.points)
                return Membership(res <= eps, res)
            P = np.asarray([[complex(c) for c in p] for p in self.points])
            res = float(np.min(np.linalg.norm(P - x, axis=1)))
            return Membership(res <= eps * (1 + nx), res)
        if k in ("BALL", "POLYDISK", "SPHERE"):
            d = x - np.asarray(self.center)
            if k == "BALL":
                res = max(0.0, float(np.linalg.norm(d)) - self.radius)
            elif k == "POLYDISK":
                res = max(0.0, float(np.max(np.abs(d))) - self.radius)
            else:
                res = abs(float(np.linalg.norm(d)) - self.radius)
            return Membership(res <= eps * (1 + self.radius), res)
        if k == "SEGMENT":
            a, b = (np.asarray(e) for e in self.endpoints)
            ab = b - a
            t = np.clip(np.real(np.vdot(ab, x - a)) / max(np.real(np.vdot(ab, ab)), 1e-300), 0, 1)
            res = float(np.linalg.norm(x - (a + t * ab)))
            return Membership(res <= eps * (1 + nx), res)
        if k == "HYPERPLANE":
            res = Hyperplane(self.normal).distance(x)
            return Membership(res <= eps, res)
        parts = [c.contains(x, eps) for c in self.children]
        if k == "UNION":
            return Membership(any(p.inside for p in parts), min(p.residual for p in parts))
        return Membership(all(p.inside for p in parts), max(p.residual for p in parts))

    def distance(self, x) -> float:
        """Euclidean (affine) or Fubini-Study (projective) distance, exact for
        FINITE, BALL-type and univariate VARIETY; residual-based otherwise."""
        x = _vec(x, self.n)
        if self.kind == "UNION":
            return min(c.distance(x) for c in self.children)
        if self.kind == "VARIETY" and (self.n == 1 or (self.projective and self.n == 2)):
            return min((self._point_distance(x, r) for r in self.zero_points()), default=math.inf)
        return self.contains(x).residual

    def _point_distance(self, x, p) -> float:
        if self.projective:
            return proj_distance(x, p)
        return float(np.linalg.norm(x - np.asarray(p)))

    def zero_points(self) -> list[np.ndarray]:
        """Finite zero set for univariate or P^1 varieties."""
        if self.kind != "VARIETY":
            raise ValueError("zero_points needs a VARIETY")
        if self.n == 1 and not self.projective:
            cand = _univariate_roots(self.polys[0])
            pts = [np.array([r]) for r in cand]
        elif self.projective and self.n == 2:
            p = self.polys[0]
            pts = [np.array([1.0, r]) for r in _univariate_roots(p.dehomogenize(0))]
            if abs(complex(p.evaluate([0.0, 1.0]))) == 0:
                pts.append(np.array([0.0, 1.0]))
            pts = [canonical(v) for v in pts]
        else:
            raise ValueError("zero set is not finite in this dimension")
        return [v for v in pts if self.contains(v, 1e-7).inside]

    # sampling
    def sample(self, count: int, seed: int = 0, window: float | None = None,
               boundary_fraction: float = 0.5, budget: int = 200) -> np.ndarray:
        if count < 1:
            raise ValueError("count must be >= 1")
        rng = np.random.Generator(np.random.Philox(key=seed))
        pts = self._sample(rng, count, window, boundary_fraction, budget)
        if self.projective:
            pts = np.array([canonical(p) for p in pts])
        return pts

    def _sample(self, rng, count, window, bf, budget) -> np.ndarray:
        n, k = self.n, self.kind
        if k == "FINITE":
            if not self.points:
                raise SamplerFailure("cannot sample the empty set")
            P = np.asarray([[complex(c) for c in p] for p in self.points])
            order = rng.permutation(len(P))
            return P[order[np.arange(count) % len(P)]]
        if k in ("BALL", "POLYDISK", "SPHERE"):
            c = np.asarray(self.center)
            nb = count if k == "SPHERE" else int(round(bf * count))
            if k == "POLYDISK":
                bnd = c + self.radius * np.exp(2j * np.pi * rng.uniform(size=(nb, n)))
                inner = c + self.radius * np.sqrt(rng.uniform(size=(count - nb, n))) * \
                    np.exp(2j * np.pi * rng.uniform(size=(count - nb, n)))
            else:
                bnd = c + self.radius * random_unit(rng, nb, n)
                inner = c + _uniform_ball(rng, count - nb, n, self.radius)
            return np.vstack([bnd, inner])
        if k == "SEGMENT":
            a, b = (np.asarray(e) for e in self.endpoints)
            t = rng.uniform(size=(count, 1))
            t[:2, 0] = [0.0, 1.0][:count]
            return a + t * (b - a)
        if k == "HYPERPLANE":
            B = Hyperplane(self.normal).basis()
            coef = random_unit(rng, count, n - 1)
            return coef @ B
        if k == "VARIETY":
            return self._sample_variety(rng, count, window or self.window, budget)
        if k == "UNION":
            live = [c for c in self.children if not c.is_empty]
            if not live:
                raise SamplerFailure("cannot sample the empty set")
            counts = [count // len(live) + (i < count % len(live)) for i in range(len(live))]
            parts = [c._sample(rng, m, window, bf, budget) for c, m in zip(live, counts) if m]
            return np.vstack(parts)
        # INTERSECTION: generate from the most restrictive child, filter by the rest
        gen = sorted(self.children, key=lambda c: {"FINITE": 0, "VARIETY": 1, "HYPERPLANE": 1}.get(c.kind, 2))
        first, rest = gen[0], gen[1:]
        win = window
        for c in rest:
            if c.kind in ("BALL", "POLYDISK"):
                win = float(np.linalg.norm(c.center)) + c.radius * (math.sqrt(n) if c.kind == "POLYDISK" else 1)
        out: list[np.ndarray] = []
        for _ in range(budget):
            cand = first._sample(rng, max(count, 16), win, bf, budget)
            for p in cand:
                q = canonical(p) if self.projective else p
                if all(c.contains(q, 1e-7).inside for c in rest):
                    out.append(p)
            if len(out) >= count:
                return np.asarray(out[:count])
        raise SamplerFailure("intersection sampler exhausted its budget")

    def _sample_variety(self, rng, count, window, budget) -> np.ndarray:
        n = self.n
        out: list[np.ndarray] = []
        for _ in range(budget * count):
            if len(out) >= count:
                break
            if self.projective:
                base = random_unit(rng, 1, n)[0] * window
            else:
                base = _uniform_ball(rng, 1, n, window)[0]
            i = int(rng.integers(n))
            sl = _slice(self.polys[0], base, i)
            if sl is None:  # slice identically zero: whole line lies on the variety
                cands = [base]
            else:
                roots = _univariate_roots(sl)
                if len(roots) == 0:
                    continue
                r = roots[int(rng.integers(len(roots)))]
                pt = base.copy()
                pt[i] = r
                cands = [pt]
            for pt in cands:
                if not self.projective and np.linalg.norm(pt) > window * (1 + 1e-12):
                    continue
                if self.projective and np.linalg.norm(pt) == 0:
                    continue
                q = canonical(pt) if self.projective else pt
                if self.contains(q, 1e-7).inside:
                    out.append(pt)
        if len(out) < count:
            raise SamplerFailure(f"variety sampler found {len(out)} of {count} points; "
                                 "window may miss the variety")
        return np.asarray(out[:count])


def _slice(p: Polynomial, base: np.ndarray, i: int) -> Polynomial | None:
    """Univariate polynomial t -> p(base with coordinate i replaced by t)."""
    coeffs: dict[int, complex] = {}
    for a, c in p.terms.items():
        v = complex(c)
        for j, e in enumerate(a):
            if j != i and e:
                v *= base[j] ** e
        coeffs[a[i]] = coeffs.get(a[i], 0) + v
    scale = max((abs(v) for v in coeffs.values()), default=0.0)
    if scale == 0:
        return None
    uni = Polynomial(1, {(e,): v for e, v in coeffs.items() if abs(v) > 1e-14 * scale})
    return uni


def _univariate_roots(p: Polynomial) -> np.ndarray:
    d = p.degree
    if d <= 0:
        return np.array([], dtype=complex)
    coeffs = [complex(p.terms.get((e,), 0)) for e in range(d, -1, -1)]
    return np.roots(coeffs)


# --------------------------------------------------------------------------
# projective covers K_M

@dataclass(frozen=True)
class ProjCover:
    """K_M = S_1 u ... u S_n with S_1 = {[1,0,...,0]} and
    S_k = {|x_1|^2 + ... + |x_(k-1)|^2 <= M^2 |x_k|^2, x_(k+1) = ... = 0}."""

    n: int
    M: float
    projective: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.n < 2 or self.M <= 0:
            raise ValueError("ProjCover needs n >= 2 and M > 0")

    @property
    def is_empty(self) -> bool:
        return False

    @property
    def pieces(self) -> list[str]:
        return [f"S_{k}" for k in range(1, self.n + 1)]

    def piece_residual(self, x, k: int) -> float:
        x = canonical(x)
        if k == 1:
            return proj_distance(x, np.eye(self.n)[0])
        tail = float(np.linalg.norm(x[k:]))
        excess = float(np.linalg.norm(x[:k - 1])) - self.M * abs(x[k - 1])
        return max(tail, excess, 0.0)

    def contains(self, x, eps: float = EPS_MEM) -> Membership:
        x = _vec(x, self.n)
        res = min(self.piece_residual(x, k) for k in range(1, self.n + 1))
        return Membership(res <= eps, res)

    def sample(self, count: int, seed: int = 0, window: float | None = None, **_) -> np.ndarray:
        rng = np.random.Generator(np.random.Philox(key=seed))
        out = []
        for _ in range(count):
            k = int(rng.integers(1, self.n + 1))
            x = np.zeros(self.n, dtype=complex)
            if k == 1:
                x[0] = 1.0
            else:
                x[k - 1] = 1.0
                if rng.uniform() < 0.3:  # boundary of the piece
                    x[:k - 1] = self.M * random_unit(rng, 1, k - 1)[0]
                else:
                    x[:k - 1] = _uniform_ball(rng, 1, k - 1, self.M)[0]
            out.append(canonical(x))
        return np.asarray(out)


def membership(region, x, eps: float = EPS_MEM) -> Membership:
    return region.contains(x, eps)


def sample(region, count: int, window: float | None = None, seed: int = 0) -> np.ndarray:
    return region.sample(count, seed=seed, window=window)


# --------------------------------------------------------------------------
# avoiding hyperplanes

@dataclass(frozen=True)
class AvoidanceCertificate:
    hyperplane: Hyperplane
    eps: float
    delta: float                  # reported separation
    delta_certified: float        # analytic lower bound over K_M
    delta_sampled: float          # min distance over samples of K
    extra_distance: float | None  # distance of the extra point, if any


def _cover_bound(w: np.ndarray, M: float) -> float:
    """Lower bound of |w.x| / (|w||x|) over K_M by Cauchy-Schwarz."""
    nw = np.linalg.norm(w)
    out = abs(w[0]) / nw
    for k in range(2, len(w) + 1):
        lead = abs(w[k - 1]) - M * np.linalg.norm(w[:k - 1])
        out = min(out, lead / (nw * math.sqrt(1 + M * M)))
    return float(out)


def find_avoiding_hyperplane(cover: ProjCover, eps: float = 0.1, extra_point=None,
                             samples: int = 2000, seed: int = 0, shrink: float = 0.5,
                             budget: int = 60) -> AvoidanceCertificate:
    """Hyperplane span(e_j + eps e_(j+1)) missing K_M (and an extra point).

    ``eps`` is shrunk until the analytic separation over K_M is positive; an
    extra point on the hyperplane is handled by a seeded perturbation of the
    defining functional that keeps the K_M bound positive.
    """
    n, M = cover.n, cover.M
    pts = cover.sample(samples, seed=seed)
    rng = np.random.Generator(np.random.Philox(key=seed + 1))
    for _ in range(budget):
        w = np.array([(-1.0 / eps) ** j for j in range(n)], dtype=complex)
        bound = _cover_bound(w, M)
        if bound > 0:
            break
        eps *= shrink
    else:
        raise RuntimeError("could not certify an avoiding hyperplane within the shrink budget")
    extra_d = None
    if extra_point is not None:
        u = _vec(extra_point, n)
        for attempt in range(budget):
            d = abs(np.dot(w, u)) / (np.linalg.norm(w) * np.linalg.norm(u))
            if d > 1e-3 * bound:
                extra_d = float(d)
                break
            # perturb inside the open set of functionals that still miss K_M
            z = rng.normal(size=n) + 1j * rng.normal(size=n)
            trial = w + (0.1 * bound * np.linalg.norm(w) / (attempt + 1)) * z / np.linalg.norm(z)
            if _cover_bound(trial, M) > 0:
                w = trial
                bound = _cover_bound(w, M)
        else:
            raise RuntimeError("could not separate the extra point")
    H = Hyperplane.from_functional(w)
    sampled = float(H.distances(pts).min())
    if sampled < bound * (1 - 1e-9):
        raise RuntimeError("sampled separation contradicts the analytic bound")
    delta = bound if extra_d is None else min(bound, extra_d)
    return AvoidanceCertificate(H, eps, delta, bound, sampled, extra_d)


# --------------------------------------------------------------------------
# JSON

def _c(v) -> list | str:
    if isinstance(v, Fraction):
        return str(v)
    v = complex(v)
    return [v.real, v.imag]


def _uc(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, int):
        return v
    return complex(float(v))


def region_to_dict(r) -> dict:
    if isinstance(r, ProjCover):
        return {"kind": "proj_cover", "space": "projective", "n": r.n, "M": r.M}
    d: dict = {"kind": r.kind.lower(), "space": "projective" if r.projective else "affine", "n": r.n}
    if r.kind == "VARIETY":
        d["polys"] = [poly_to_dict(p) for p in r.polys]
        d["window"] = r.window
    elif r.kind == "FINITE":
        d["points"] = [[_c(c) for c in p] for p in r.points]
    elif r.kind in ("BALL", "POLYDISK", "SPHERE"):
        d["center"] = [_c(c) for c in r.center]
        d["radius"] = r.radius
    elif r.kind == "SEGMENT":
        d["a"], d["b"] = ([_c(c) for c in e] for e in r.endpoints)
    elif r.kind == "HYPERPLANE":
        d["normal"] = [_c(c) for c in r.normal]
    else:
        d["children"] = [region_to_dict(c) for c in r.children]
    return d


def region_from_dict(d) -> Region | ProjCover:
    try:
        kind = d["kind"].upper()
        proj = d.get("space", "affine") == "projective"
        if kind == "PROJ_COVER":
            return ProjCover(int(d["n"]), float(d["M"]))
        if kind == "VARIETY":
            return Region.variety([poly_from_dict(p) for p in d["polys"]],
                                  float(d.get("window", 2.0)), proj)
        if kind == "FINITE":
            return Region.finite([tuple(_uc(c) for c in p) for p in d["points"]], int(d["n"]), proj)
        if kind in ("BALL", "POLYDISK", "SPHERE"):
            ctor = {"BALL": Region.ball, "POLYDISK": Region.polydisk, "SPHERE": Region.sphere}[kind]
            return ctor([_uc(c) for c in d["center"]], float(d["radius"]))
        if kind == "SEGMENT":
            return Region.segment([_uc(c) for c in d["a"]], [_uc(c) for c in d["b"]])
        if kind == "HYPERPLANE":
            return Region.hyperplane([_uc(c) for c in d["normal"]])
        if kind in ("UNION", "INTERSECTION"):
            ch = [region_from_dict(c) for c in d["children"]]
            return Region.union(ch) if kind == "UNION" else Region.intersection(ch)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed region JSON: {exc!r}") from exc
    raise ValueError(f"unknown region kind {d.get('kind')!r}")
