"""Sparse polynomials in two variables (x, y) and in (x, y, z1..zr).

Coefficients are plain floats keyed by exponent tuples.  Evaluation is
numpy-friendly: feeding arrays for the variables returns arrays.
"""

from __future__ import annotations

import numpy as np

_PRUNE = 0.0  # exact-zero pruning only; tiny coefficients are meaningful


class BivariatePolynomial:
    """Polynomial in (x, y) stored as {(i, j): coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for (i, j), c in dict(terms).items():
                if c != _PRUNE:
                    self.terms[(int(i), int(j))] = float(c)

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def x(cls):
        return cls({(1, 0): 1.0})

    @classmethod
    def y(cls):
        return cls({(0, 1): 1.0})

    @classmethod
    def from_univariate(cls, coeffs, var="x"):
        """Build from ascending coefficients of a one-variable polynomial."""
        if var == "x":
            return cls({(k, 0): c for k, c in enumerate(coeffs)})
        return cls({(0, k): c for k, c in enumerate(coeffs)})

    @property
    def degree(self):
        """Total degree; the zero polynomial has degree 0."""
        if not self.terms:
            return 0
        return max(i + j for i, j in self.terms)

    def is_zero(self):
        return not self.terms

    def __call__(self, x, y):
        out = 0.0
        for (i, j), c in self.terms.items():
            term = c
            if i:
                term = term * np.power(x, i)
            if j:
                term = term * np.power(y, j)
            out = out + term
        if not self.terms:
            return np.zeros_like(np.asarray(x, dtype=float) + np.asarray(y, dtype=float))
        return out

    def __add__(self, other):
        other = _coerce(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0.0) + c
        return BivariatePolynomial(terms)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return BivariatePolynomial({k: c * other for k, c in self.terms.items()})
        other = _coerce(other)
        terms = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                terms[k] = terms.get(k, 0.0) + c1 * c2
        return BivariatePolynomial(terms)

    __rmul__ = __mul__

    def partial(self, var):
        """Partial derivative with respect to "x" or "y"."""
        terms = {}
        for (i, j), c in self.terms.items():
            if var == "x" and i > 0:
                terms[(i - 1, j)] = terms.get((i - 1, j), 0.0) + c * i
            elif var == "y" and j > 0:
                terms[(i, j - 1)] = terms.get((i, j - 1), 0.0) + c * j
        return BivariatePolynomial(terms)

    def substitute_linear(self, a1, a2, a3, a4):
        """Return P(a1*x + a2*y, a3*x + a4*y) expanded as a polynomial.

        The substitution is linear, so the total degree never grows.
        """
        u = BivariatePolynomial({(1, 0): a1, (0, 1): a2})
        v = BivariatePolynomial({(1, 0): a3, (0, 1): a4})
        # cache powers up to the needed exponents
        max_i = max((i for i, _ in self.terms), default=0)
        max_j = max((j for _, j in self.terms), default=0)
        u_pows = [BivariatePolynomial.const(1.0)]
        for _ in range(max_i):
            u_pows.append(u_pows[-1] * u)
        v_pows = [BivariatePolynomial.const(1.0)]
        for _ in range(max_j):
            v_pows.append(v_pows[-1] * v)
        out = BivariatePolynomial()
        for (i, j), c in self.terms.items():
            out = out + (u_pows[i] * v_pows[j]) * c
        return out

    def to_json(self):
        return {f"{i},{j}": c for (i, j), c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, data):
        terms = {}
        for key, c in data.items():
            i, j = (int(p) for p in key.split(","))
            terms[(i, j)] = c
        return cls(terms)

    def __eq__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "BivariatePolynomial(0)"
        bits = []
        for (i, j), c in sorted(self.terms.items()):
            mono = "".join(s for s, e in (("x", i), ("y", j)) for s in ([f"{s}^{e}" if e > 1 else s] if e else []))
            bits.append(f"{c:g}{mono}" if mono else f"{c:g}")
        return f"BivariatePolynomial({' + '.join(bits)})"


def _coerce(value):
    if isinstance(value, BivariatePolynomial):
        return value
    return BivariatePolynomial.const(value)


class MultiPoly:
    """Polynomial in (x, y, z1..zr), exponent tuples of length r + 2."""

    __slots__ = ("terms", "nvars")

    def __init__(self, nvars, terms=None):
        self.nvars = int(nvars)
        self.terms = {}
        if terms:
            for key, c in dict(terms).items():
                key = tuple(int(e) for e in key)
                if len(key) != self.nvars:
                    raise ValueError(f"exponent tuple {key} has wrong arity")
                if c != 0.0:
                    self.terms[key] = float(c)

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def var(cls, nvars, idx, coeff=1.0):
        key = tuple(1 if k == idx else 0 for k in range(nvars))
        return cls(nvars, {key: coeff})

    @property
    def degree(self):
        if not self.terms:
            return 0
        return max(sum(key) for key in self.terms)

    def is_zero(self):
        return not self.terms

    def __call__(self, *args):
        if len(args) != self.nvars:
            raise ValueError(f"expected {self.nvars} arguments, got {len(args)}")
        out = 0.0
        for key, c in self.terms.items():
            term = c
            for v, e in zip(args, key):
                if e:
                    term = term * np.power(v, e)
            out = out + term
        return out

    def lift(self, nvars):
        """Reinterpret in a larger variable tuple (new trailing variables)."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink arity")
        pad = nvars - self.nvars
        return MultiPoly(nvars, {key + (0,) * pad: c for key, c in self.terms.items()})

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0.0) + c
        return MultiPoly(self.nvars, terms)

    def __neg__(self):
        return MultiPoly(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return MultiPoly(self.nvars, {k: c * other for k, c in self.terms.items()})
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                terms[k] = terms.get(k, 0.0) + c1 * c2
        return MultiPoly(self.nvars, terms)

    __rmul__ = __mul__

    def to_json(self):
        return {",".join(str(e) for e in key): c for key, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, nvars, data):
        terms = {}
        for key, c in data.items():
            terms[tuple(int(p) for p in key.split(","))] = c
        return cls(nvars, terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.terms!r})"


def poly1_eval(coeffs, x):
    """Evaluate ascending-coefficient univariate polynomial, numpy friendly."""
    return np.polynomial.polynomial.polyval(x, np.asarray(coeffs, dtype=float))


def poly1_der(coeffs):
    """Ascending coefficients of the derivative."""
    c = np.asarray(coeffs, dtype=float)
    if c.size <= 1:
        return np.zeros(1)
    return np.polynomial.polynomial.polyder(c)
