"""Sparse weighted multivariate polynomials over pluggable rings.

Representation: {exponent tuple: coefficient}.  An optional weighted-degree
bound B makes every arithmetic result drop monomials of weighted degree
above B (the truncation used throughout the quotient-ring and formal-group
computations).

Multiplication has two exact paths: sparse dict convolution, and (over a
prime field, when operands are large) Kronecker substitution into one big
integer product.  Lane arithmetic in the packed path is arbitrary
precision (gmpy2 / Python int); numpy only shovels lane buffers, with an
explicit no-overflow check.
"""

from __future__ import annotations

import numpy as np

from .rings import PrimeField
from .packed import conv_mod, weighted_degree_grid


def kronecker_mul(
    terms_a, terms_b, nvars: int, p: int, weights=None, bound=None
) -> dict:
    """Exact product of two F_p coefficient dicts through the packed
    big-integer convolution, with optional weighted-degree truncation."""
    def caps(terms):
        c = [0] * nvars
        for e in terms:
            for i, v in enumerate(e):
                c[i] = max(c[i], v)
        return c

    def to_arr(terms):
        arr = np.zeros([c + 1 for c in caps(terms)], dtype=np.uint64)
        for e, v in terms.items():
            arr[e] = v
        return arr

    prod = conv_mod(to_arr(terms_a), to_arr(terms_b), p)
    if bound is not None:
        grid = weighted_degree_grid(prod.shape, weights or (1,) * nvars)
        prod = np.where(grid <= bound, prod, 0)
    out = {}
    for idx in zip(*np.nonzero(prod)):
        out[tuple(int(v) for v in idx)] = int(prod[idx])
    return out


class MultiPoly:
    __slots__ = ("ring", "nvars", "weights", "bound", "terms")

    def __init__(self, ring, nvars, terms=None, weights=None, bound=None):
        self.ring = ring
        self.nvars = nvars
        self.weights = tuple(weights) if weights else (1,) * nvars
        self.bound = bound
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if ring.is_zero(c):
                    continue
                if bound is not None and self._wdeg(e) > bound:
                    continue
                self.terms[tuple(e)] = c

    # -- helpers ---------------------------------------------------------

    def _wdeg(self, e) -> int:
        return sum(v * w for v, w in zip(e, self.weights))

    def _like(self, terms) -> "MultiPoly":
        out = MultiPoly(self.ring, self.nvars, weights=self.weights, bound=self.bound)
        out.terms = terms
        return out

    def with_bound(self, bound) -> "MultiPoly":
        return MultiPoly(
            self.ring, self.nvars, self.terms, weights=self.weights, bound=bound
        )

    @classmethod
    def zero(cls, ring, nvars, weights=None, bound=None):
        return cls(ring, nvars, weights=weights, bound=bound)

    @classmethod
    def constant(cls, ring, nvars, c, weights=None, bound=None):
        return cls(
            ring, nvars, {(0,) * nvars: c}, weights=weights, bound=bound
        )

    @classmethod
    def variable(cls, ring, nvars, j, weights=None, bound=None):
        e = [0] * nvars
        e[j] = 1
        return cls(
            ring, nvars, {tuple(e): ring.one}, weights=weights, bound=bound
        )

    def is_zero(self) -> bool:
        return not self.terms

    def wdegree(self) -> int:
        """Max weighted degree of the support (-1 for the zero poly)."""
        return max((self._wdeg(e) for e in self.terms), default=-1)

    def leading(self):
        """(exps, coeff) at the grlex-largest monomial (weighted degree,
        then exponent tuple)."""
        if not self.terms:
            return None
        e = max(self.terms, key=lambda e: (self._wdeg(e), e))
        return e, self.terms[e]

    def coefficient(self, e):
        return self.terms.get(tuple(e), self.ring.zero)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        R = self.ring
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = R.add(out.get(e, R.zero), c)
            if R.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return self._like(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        R = self.ring
        return self._like({e: R.neg(c) for e, c in self.terms.items()})

    def scale(self, k):
        R = self.ring
        if R.is_zero(k):
            return self._like({})
        return self._like({e: R.mul(k, c) for e, c in self.terms.items()})

    def __mul__(self, other):
        R = self.ring
        if (
            isinstance(R, PrimeField)
            and len(self.terms) * len(other.terms) > 40000
        ):
            prod = kronecker_mul(
                self.terms,
                other.terms,
                self.nvars,
                R.p,
                weights=self.weights,
                bound=self.bound,
            )
            return self._like(prod)
        out = {}
        bound = self.bound
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if bound is not None and self._wdeg(e) > bound:
                    continue
                s = R.add(out.get(e, R.zero), R.mul(c1, c2))
                if R.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return self._like(out)

    def __pow__(self, k: int):
        out = MultiPoly.constant(
            self.ring, self.nvars, self.ring.one, self.weights, self.bound
        )
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self - other).is_zero()

    def map_coefficients(self, ring, fn) -> "MultiPoly":
        out = MultiPoly(ring, self.nvars, weights=self.weights, bound=self.bound)
        for e, c in self.terms.items():
            v = fn(c)
            if not ring.is_zero(v):
                out.terms[e] = v
        return out

    def permute_vars(self, perm) -> "MultiPoly":
        """Apply x_i -> x_perm[i]."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            for i, v in enumerate(e):
                ne[perm[i]] = v
            out[tuple(ne)] = c
        return self._like(out)

    def substitute(self, values: list) -> "MultiPoly":
        """Substitute MultiPoly values (same ring/bound space) for all
        variables; used for small rewrites, not hot paths."""
        model = values[0]
        out = MultiPoly.zero(model.ring, model.nvars, model.weights, model.bound)
        for e, c in self.terms.items():
            term = MultiPoly.constant(
                model.ring, model.nvars, c, model.weights, model.bound
            )
            for j, v in enumerate(e):
                if v:
                    term = term * values[j] ** v
            out = out + term
        return out

    def __repr__(self):
        items = sorted(self.terms.items())[:8]
        body = " + ".join(f"({c})*x^{e}" for e, c in items) or "0"
        more = " + ..." if len(self.terms) > 8 else ""
        return f"<poly {body}{more}>"
