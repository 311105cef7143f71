"""One-variable truncated power series over a pluggable coefficient ring.

Dense representation: coefficient list of length = order M, index =
exponent.  All operations truncate at the smaller operand order;
composition adjusts the order by the valuation of the inner series.
"""

from __future__ import annotations


class CompositionDomainError(ValueError):
    """Inner series of a composition has a nonzero constant term."""


class ReversionError(ValueError):
    """Linear coefficient not invertible; no compositional inverse."""


class TruncatedSeries:
    __slots__ = ("ring", "order", "c")

    def __init__(self, ring, order: int, coeffs=None):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.ring = ring
        self.order = order
        if coeffs is None:
            self.c = [ring.zero] * order
        else:
            coeffs = list(coeffs)[:order]
            coeffs += [ring.zero] * (order - len(coeffs))
            self.c = coeffs

    @classmethod
    def x(cls, ring, order: int) -> "TruncatedSeries":
        s = cls(ring, order)
        if order > 1:
            s.c[1] = ring.one
        return s

    @classmethod
    def zero(cls, ring, order: int) -> "TruncatedSeries":
        return cls(ring, order)

    def copy(self) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.order, list(self.c))

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, min(order, self.order), self.c[:order])

    def __add__(self, other):
        R = self.ring
        order = min(self.order, other.order)
        return TruncatedSeries(
            R, order, [R.add(a, b) for a, b in zip(self.c, other.c)]
        )

    def __sub__(self, other):
        R = self.ring
        order = min(self.order, other.order)
        return TruncatedSeries(
            R, order, [R.sub(a, b) for a, b in zip(self.c, other.c)]
        )

    def __neg__(self):
        return TruncatedSeries(self.ring, self.order, [self.ring.neg(a) for a in self.c])

    def scale(self, k) -> "TruncatedSeries":
        R = self.ring
        return TruncatedSeries(R, self.order, [R.mul(k, a) for a in self.c])

    def __mul__(self, other):
        R = self.ring
        order = min(self.order, other.order)
        out = [R.zero] * order
        for i, a in enumerate(self.c[:order]):
            if R.is_zero(a):
                continue
            for j, b in enumerate(other.c[: order - i]):
                if R.is_zero(b):
                    continue
                out[i + j] = R.add(out[i + j], R.mul(a, b))
        return TruncatedSeries(R, order, out)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by x^k (k >= 0) keeping the same order."""
        return TruncatedSeries(self.ring, self.order, [self.ring.zero] * k + self.c)

    def valuation(self) -> int | None:
        for i, a in enumerate(self.c):
            if not self.ring.is_zero(a):
                return i
        return None

    def wdegree(self) -> int | None:
        """Index of the first coefficient that is a unit (Weierstrass
        degree); None when no stored coefficient is a unit."""
        for i, a in enumerate(self.c):
            if self.ring.is_unit(a):
                return i
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        R = self.ring
        return all(R.eq(a, b) for a, b in zip(self.c[:order], other.c[:order]))

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(x)).  inner must have zero constant term."""
        R = self.ring
        if inner.order > 0 and not R.is_zero(inner.c[0]):
            raise CompositionDomainError("inner series has a constant term")
        v = inner.valuation()
        order = min(self.order, inner.order) if v == 1 or v is None else min(
            self.order * v, inner.order
        )
        if v is None:
            out = TruncatedSeries(R, min(self.order, inner.order))
            out.c[0] = self.c[0]
            return out
        support = [i for i, a in enumerate(self.c) if not R.is_zero(a)]
        if len(support) * 4 <= self.order:
            # sparse outer series: sum c_i * inner^i over the support
            inner_t = inner.truncate(order)
            out = TruncatedSeries(R, order)
            power = TruncatedSeries(R, order, [R.one])
            prev = 0
            for i in support:
                step = i - prev
                base = inner_t
                while step:
                    if step & 1:
                        power = power * base
                    step >>= 1
                    if step:
                        base = base * base
                prev = i
                out = out + power.scale(self.c[i])
            return out
        # Horner from the top coefficient down
        inner_t = inner.truncate(order)
        out = TruncatedSeries(R, order)
        for a in reversed(self.c):
            out = out * inner_t
            out = TruncatedSeries(R, order, out.c)
            out.c[0] = R.add(out.c[0], a)
        return out

    def reciprocal(self) -> "TruncatedSeries":
        """Multiplicative inverse; constant term must be a unit."""
        R = self.ring
        if not R.is_unit(self.c[0]):
            raise ZeroDivisionError("constant term is not a unit")
        M = self.order
        inv0 = R.inv(self.c[0])
        out = [R.zero] * M
        out[0] = inv0
        for m in range(1, M):
            acc = R.zero
            for j in range(1, m + 1):
                if not R.is_zero(self.c[j]):
                    acc = R.add(acc, R.mul(self.c[j], out[m - j]))
            out[m] = R.neg(R.mul(inv0, acc))
        return TruncatedSeries(R, M, out)

    def derivative(self) -> "TruncatedSeries":
        R = self.ring
        out = [
            R.mul(R.from_int(i), a) for i, a in enumerate(self.c[1:], start=1)
        ]
        return TruncatedSeries(R, max(self.order - 1, 1), out)

    def reversion(self) -> "TruncatedSeries":
        """Compositional inverse g with self(g(x)) = x = g(self(x)) up to
        the order, for series c1*x + O(x^2) with c1 a unit.

        Newton iteration with doubling precision (no integer divisions, so
        this also works in characteristic p); the Lagrange-inversion oracle
        in the tests is independent of this path.
        """
        R = self.ring
        if not R.is_zero(self.c[0]):
            raise ReversionError("series has a constant term")
        if self.order < 2 or not R.is_unit(self.c[1]):
            raise ReversionError("linear coefficient is not a unit")
        M = self.order
        inv1 = R.inv(self.c[1])
        g = TruncatedSeries(R, 2, [R.zero, inv1])
        prec = 2
        while prec < M:
            prec = min(2 * prec, M)
            g = TruncatedSeries(R, prec, g.c)
            f = self.truncate(prec)
            err = f.compose(g)
            err.c[1] = R.sub(err.c[1], R.one)  # f(g) - x
            recip = f.derivative().compose(g).reciprocal()
            # padding the divisor reciprocal to full order is harmless:
            # err has valuation > prec/2, so the top reciprocal
            # coefficient never reaches exponents < prec
            recip = TruncatedSeries(R, prec, recip.c)
            g = g - err * recip
        return g

    def map_coefficients(self, ring, fn) -> "TruncatedSeries":
        return TruncatedSeries(ring, self.order, [fn(a) for a in self.c])

    def __repr__(self):
        terms = []
        for i, a in enumerate(self.c):
            if not self.ring.is_zero(a):
                terms.append(f"({a})*x^{i}")
            if len(terms) > 8:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"<series {body} + O(x^{self.order})>"
