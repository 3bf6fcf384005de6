"""Sparse multivariate polynomials over C with degree-graded lex indexing.

Monomials are listed as alpha(1), alpha(2), ... with |alpha| nondecreasing and
lexicographic order inside each degree, so for n = 2 the listing starts
(0,0), (0,1), (1,0), (0,2), (1,1), (2,0).

Coefficients are Python ``complex`` by default.  Exact mode keeps
``fractions.Fraction`` coefficients (rational, real) so that enumeration of
rational polynomials is well defined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponent = tuple[int, ...]


# --------------------------------------------------------------------------
# monomial indexing

@lru_cache(maxsize=None)
def exponents_of_degree(n: int, d: int) -> tuple[Exponent, ...]:
    """All exponent vectors of total degree ``d`` in ascending lex order."""
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d + 1):
        for rest in exponents_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def monomial_counts(n: int, k: int) -> tuple[int, int]:
    """Return ``(m_k, l_k)``: number of monomials of degree <= k and the
    total degree sum of those monomials."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    m_k = math.comb(n + k, k)
    l_k = n * math.comb(n + k, k - 1) if k >= 1 else 0
    return m_k, l_k


def monomials_upto(n: int, count: int) -> list[Exponent]:
    """First ``count`` exponents alpha(1..count)."""
    out: list[Exponent] = []
    d = 0
    while len(out) < count:
        out.extend(exponents_of_degree(n, d))
        d += 1
    return out[:count]


def monomial_at(n: int, i: int) -> Exponent:
    """Exponent alpha(i) for position ``i >= 1``."""
    if n < 1 or i < 1:
        raise ValueError("need n >= 1 and i >= 1")
    d = 0
    seen = 0
    while True:
        layer = math.comb(n - 1 + d, d)
        if seen + layer >= i:
            return exponents_of_degree(n, d)[i - seen - 1]
        seen += layer
        d += 1


def index_of(alpha: Sequence[int]) -> int:
    """Inverse of :func:`monomial_at`."""
    alpha = tuple(int(a) for a in alpha)
    n = len(alpha)
    if n < 1 or any(a < 0 for a in alpha):
        raise ValueError("exponent must be a nonempty vector of nonnegative ints")
    d = sum(alpha)
    pos = math.comb(n - 1 + d, d - 1) if d >= 1 else 0  # m_{d-1}
    rem = d
    for j in range(n - 1):
        parts = n - j - 1
        for v in range(alpha[j]):
            pos += math.comb(rem - v + parts - 1, parts - 1)
        rem -= alpha[j]
    return pos + 1


# --------------------------------------------------------------------------
# polynomials

def _is_zero(c) -> bool:
    return c == 0


class Polynomial:
    """Immutable sparse polynomial in ``n`` complex variables."""

    __slots__ = ("n", "_terms", "_degree")

    def __init__(self, n: int, terms: Mapping[Sequence[int], Number] | None = None):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        clean: dict[Exponent, Number] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise ValueError(f"bad exponent {alpha} for n={n}")
            c = clean.get(alpha, 0) + c
            if _is_zero(c):
                clean.pop(alpha, None)
            else:
                clean[alpha] = c
        self.n = n
        self._terms = clean
        self._degree = max((sum(a) for a in clean), default=-1)

    # constructors
    @classmethod
    def constant(cls, n: int, c: Number = 1) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        alpha = [0] * n
        alpha[i] = 1
        return cls(n, {tuple(alpha): 1})

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, {})

    @classmethod
    def from_roots(cls, roots: Iterable[Number], exact: bool = False) -> "Polynomial":
        """Monic univariate polynomial prod (s - r)."""
        s = cls.variable(1, 0)
        p = cls.constant(1, Fraction(1) if exact else 1)
        for r in roots:
            p = p * (s - r)
        return p

    @classmethod
    def linear_form(cls, coeffs: Sequence[Number]) -> "Polynomial":
        n = len(coeffs)
        return cls(n, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    # basic properties
    @property
    def terms(self) -> dict[Exponent, Number]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self._terms.values())

    def is_homogeneous(self, k: int | None = None) -> bool:
        degs = {sum(a) for a in self._terms}
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs == {k})

    def __iter__(self):
        return iter(sorted(self._terms.items(), key=lambda t: index_of(t[0])))

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Number):
            other = Polynomial.constant(self.n, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if self.is_zero:
            return f"Polynomial(n={self.n}, 0)"
        parts = []
        for alpha, c in self:
            mono = "*".join(f"x{i + 1}^{a}" if a > 1 else f"x{i + 1}"
                            for i, a in enumerate(alpha) if a)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return f"Polynomial(n={self.n}, " + " + ".join(parts) + ")"

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            return other
        if isinstance(other, Number):
            return Polynomial.constant(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for a, c in other._terms.items():
            terms[a] = terms.get(a, 0) + c
        return Polynomial(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Polynomial(self.n, {a: c * other for a, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Exponent, Number] = {}
        for a, c in self._terms.items():
            for b, e in other._terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                terms[key] = terms.get(key, 0) + c * e
        return Polynomial(self.n, terms)

    __rmul__ = __mul__

    def __truediv__(self, other: Number):
        if isinstance(other, Polynomial):
            return NotImplemented
        if self.is_exact and isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return self * (1 / other)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("power must be a nonnegative int")
        result = Polynomial.constant(self.n, Fraction(1) if self.is_exact else 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # structure
    def homogeneous_part(self, k: int) -> "Polynomial":
        return Polynomial(self.n, {a: c for a, c in self._terms.items() if sum(a) == k})

    def homogeneous_parts(self) -> dict[int, "Polynomial"]:
        return {k: self.homogeneous_part(k) for k in sorted({sum(a) for a in self._terms})}

    def to_float(self) -> "Polynomial":
        return Polynomial(self.n, {a: complex(c) for a, c in self._terms.items()})

    def dehomogenize(self, index: int = 0) -> "Polynomial":
        """Set variable ``index`` to 1 and drop it: P(1, x) for index 0."""
        if self.n < 2:
            raise ValueError("need at least two variables")
        terms: dict[Exponent, Number] = {}
        for a, c in self._terms.items():
            b = a[:index] + a[index + 1:]
            terms[b] = terms.get(b, 0) + c
        return Polynomial(self.n - 1, terms)

    def homogenize(self, degree: int | None = None) -> "Polynomial":
        """Inverse of :meth:`dehomogenize` (new variable placed first)."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise ValueError("target degree below polynomial degree")
        return Polynomial(self.n + 1, {(d - sum(a),) + a: c for a, c in self._terms.items()})

    def coefficient_abs_sum(self) -> float:
        return float(sum(abs(complex(c)) for c in self._terms.values()))

    def taylor_shift(self, center: Sequence[complex]) -> "Polynomial":
        """Coefficients of y -> p(center + y)."""
        center = [complex(c) for c in center]
        if len(center) != self.n:
            raise ValueError("dimension mismatch")
        n = self.n
        shifted = [Polynomial.variable(n, i) + center[i] for i in range(n)]
        out = Polynomial.zero(n)
        cache: dict[tuple[int, int], Polynomial] = {}

        def pw(i: int, e: int) -> Polynomial:
            if (i, e) not in cache:
                cache[(i, e)] = shifted[i] ** e
            return cache[(i, e)]

        for a, c in self._terms.items():
            term = Polynomial.constant(n, complex(c))
            for i, e in enumerate(a):
                if e:
                    term = term * pw(i, e)
            out = out + term
        return out

    def variation_bound(self, center: Sequence[complex], radius: float) -> float:
        """Upper bound for |p(x) - p(center)| over the polydisk of the given
        coordinate radius around ``center``."""
        q = self.taylor_shift(center)
        return float(sum(abs(complex(c)) * radius ** sum(a)
                         for a, c in q._terms.items() if sum(a) > 0))

    # evaluation
    def evaluate(self, x: Sequence[Number]):
        """Exact monomial-sum evaluation at one point."""
        if isinstance(x, Number):
            x = (x,)
        if len(x) != self.n:
            raise ValueError(f"point has dimension {len(x)}, polynomial has {self.n}")
        total = 0
        for a, c in self._terms.items():
            term = c
            for xi, e in zip(x, a):
                if e:
                    term = term * xi ** e
            total = total + term
        return total

    __call__ = evaluate

    def _arrays(self):
        alphas = np.array(list(self._terms.keys()), dtype=np.int64).reshape(-1, self.n)
        coeffs = np.array([complex(c) for c in self._terms.values()], dtype=complex)
        return alphas, coeffs

    def evaluate_many(self, points) -> np.ndarray:
        """Vectorised float evaluation at an (N, n) array of points."""
        X = np.asarray(points, dtype=complex).reshape(-1, self.n)
        if self.is_zero:
            return np.zeros(len(X), dtype=complex)
        alphas, coeffs = self._arrays()
        out = np.zeros(len(X), dtype=complex)
        for a, c in zip(alphas, coeffs):
            term = np.full(len(X), c, dtype=complex)
            for i, e in enumerate(a):
                if e:
                    term = term * X[:, i] ** e
            out += term
        return out

    def log_abs_many(self, points) -> np.ndarray:
        """log|p| at points, ``-inf`` where p vanishes."""
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.evaluate_many(points)))


def variables(n: int) -> list[Polynomial]:
    return [Polynomial.variable(n, i) for i in range(n)]


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def power(p: Polynomial, e: int) -> Polynomial:
    return p ** e


def homogeneous_part(p: Polynomial, k: int) -> Polynomial:
    return p.homogeneous_part(k)


def evaluate(p: Polynomial, x: Sequence[Number]):
    return p.evaluate(x)


# --------------------------------------------------------------------------
# normalized norms

@dataclass(frozen=True)
class NormedPoly:
    """A pair (p, k): p of degree <= k, or homogeneous of degree exactly k."""

    poly: Polynomial
    weight: int
    homogeneous: bool = False

    def __post_init__(self):
        if self.weight < 1:
            raise ValueError("weight must be >= 1")
        if self.poly.degree > self.weight:
            raise ValueError(f"degree {self.poly.degree} exceeds weight {self.weight}")
        if self.homogeneous and not self.poly.is_homogeneous(self.weight):
            raise ValueError("homogeneous pair needs every term of degree == weight")

    @property
    def n(self) -> int:
        return self.poly.n

    def power(self, a: int) -> "NormedPoly":
        """(p^a, a k); pointwise normalized values are unchanged."""
        return NormedPoly(self.poly ** a, self.weight * a, self.homogeneous)


def _root_abs(value: float, k: int) -> float:
    return float(abs(value)) ** (1.0 / k)


def modulus_value(np_: NormedPoly, x: Sequence[complex]) -> float:
    """|(p(x), k)| = |p(x)|^(1/k)."""
    return _root_abs(complex(np_.poly.evaluate(x)), np_.weight)


def normalized_value(np_: NormedPoly, x: Sequence[complex]) -> float:
    """||(p(x), k)||: affine weight (1+|x|^2)^(1/2) or homogeneous weight |x|."""
    xs = np.atleast_1d(np.asarray(x, dtype=complex))
    nrm = float(np.linalg.norm(xs))
    val = _root_abs(complex(np_.poly.evaluate(list(xs))), np_.weight)
    if np_.homogeneous:
        if nrm == 0:
            raise ValueError("homogeneous normalized value undefined at x = 0")
        return val / nrm
    return val / math.sqrt(1.0 + nrm * nrm)


def normalized_values_many(np_: NormedPoly, points) -> np.ndarray:
    X = np.asarray(points, dtype=complex).reshape(-1, np_.n)
    vals = np.abs(np_.poly.evaluate_many(X)) ** (1.0 / np_.weight)
    nrm = np.linalg.norm(X, axis=1)
    if np_.homogeneous:
        if np.any(nrm == 0):
            raise ValueError("homogeneous normalized value undefined at x = 0")
        return vals / nrm
    return vals / np.sqrt(1.0 + nrm ** 2)


@dataclass(frozen=True)
class SupNorm:
    """Bracket for a supremum: ``lower`` is attained at an evaluated point,
    ``upper`` is a heuristic bound."""

    lower: float
    upper: float
    lower_certified: bool = True
    upper_certified: bool = False
    argmax: tuple | None = None


def random_sphere(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    z = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _sphere_directions(rng, count: int, n: int) -> np.ndarray:
    if n == 1:
        theta = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
        return np.exp(1j * theta)[:, None]
    eye = np.eye(n, dtype=complex)
    return np.vstack([eye, random_sphere(rng, count, n)])


def _ascend(fun, starts: np.ndarray, n: int):
    """Multi-start local maximisation of ``fun`` over C^n."""
    from scipy.optimize import minimize

    best_val, best_x = -np.inf, None
    for x0 in starts:
        v0 = np.concatenate([x0.real, x0.imag])

        def neg(v):
            z = v[:n] + 1j * v[n:]
            return -fun(z)

        res = minimize(neg, v0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 400 * n})
        z = res.x[:n] + 1j * res.x[n:]
        val = fun(z)
        if val > best_val:
            best_val, best_x = val, z
    return best_val, best_x


def sup_norm(np_: NormedPoly, region=None, budget: int = 256, seed: int = 0,
             r_max: float = 2.0 ** 10, ascent_starts: int = 4) -> SupNorm:
    """Bracket ``||(p,k)||_K`` (region given) or ``||(p,k)||`` (region None).

    ``region`` needs ``is_empty`` and ``sample(count, seed=...)``.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    n = np_.n
    if np_.poly.is_zero:
        return SupNorm(0.0, 0.0, True, True)

    if region is not None:
        if region.is_empty:
            return SupNorm(0.0, 0.0, True, True)
        pts = np.asarray(region.sample(budget, seed=seed), dtype=complex).reshape(-1, n)
        if np_.homogeneous:
            pts = pts[np.linalg.norm(pts, axis=1) > 0]
        if len(pts) == 0:
            return SupNorm(0.0, 0.0, True, True)
        vals = normalized_values_many(np_, pts)
        i = int(np.argmax(vals))
        lower = float(vals[i])
        more = np.asarray(region.sample(4 * budget, seed=seed + 1), dtype=complex).reshape(-1, n)
        if np_.homogeneous:
            more = more[np.linalg.norm(more, axis=1) > 0]
        upper = max(lower, float(normalized_values_many(np_, more).max()) if len(more) else 0.0)
        return SupNorm(lower, upper, True, False, tuple(pts[i]))

    if np_.homogeneous:
        dirs = _sphere_directions(rng, budget, n)
        vals = normalized_values_many(np_, dirs)
        order = np.argsort(vals)[::-1][:ascent_starts]
        fun = lambda z: (normalized_value(np_, z) if np.linalg.norm(z) > 0 else 0.0)
        best, bx = _ascend(fun, dirs[order], n)
        i = int(np.argmax(vals))
        lower, arg = float(vals[i]), dirs[i]
        if best > lower:
            lower, arg = best, bx
        return SupNorm(lower, lower, True, False, tuple(arg))

    radii = [0.0] + [2.0 ** e for e in range(-1, int(math.log2(r_max)) + 1)]
    dirs = _sphere_directions(rng, budget, n)
    pts = np.vstack([r * dirs for r in radii])
    vals = normalized_values_many(np_, pts)
    order = np.argsort(vals)[::-1][:ascent_starts]
    best, bx = _ascend(lambda z: normalized_value(np_, z), pts[order], n)
    i = int(np.argmax(vals))
    lower, arg = float(vals[i]), pts[i]
    if best > lower:
        lower, arg = best, bx
    # value at infinity through the leading form
    lead = np_.poly.homogeneous_part(np_.weight)
    limit = 0.0
    if not lead.is_zero:
        lead_np = NormedPoly(lead, np_.weight, homogeneous=True)
        limit = sup_norm(lead_np, None, budget=budget, seed=seed + 7).upper
    return SupNorm(lower, max(lower, limit), True, False, tuple(arg))


# --------------------------------------------------------------------------
# JSON form: {"n": int, "terms": [{"alpha": [...], "re": ..., "im": ...}]}

def poly_to_dict(p: Polynomial) -> dict:
    terms = []
    for alpha, c in p:
        if isinstance(c, (int, Fraction)):
            terms.append({"alpha": list(alpha), "re": str(Fraction(c)), "im": "0"})
        else:
            c = complex(c)
            terms.append({"alpha": list(alpha), "re": c.real, "im": c.imag})
    out = {"n": p.n, "terms": terms}
    if p.is_exact and not p.is_zero:
        out["exact"] = True
    return out


def _parse_coeff(re, im):
    if isinstance(re, str) or isinstance(im, str):
        r, i = Fraction(str(re)), Fraction(str(im))
        if i != 0:
            raise ValueError("exact mode supports rational real coefficients only")
        return r
    return complex(float(re), float(im))


def poly_from_dict(d: Mapping) -> Polynomial:
    try:
        n = int(d["n"])
        terms = {}
        for t in d["terms"]:
            alpha = tuple(int(a) for a in t["alpha"])
            terms[alpha] = terms.get(alpha, 0) + _parse_coeff(t.get("re", 0.0), t.get("im", 0.0))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polynomial JSON: {exc!r}") from exc
    return Polynomial(n, terms)
