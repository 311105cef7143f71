"""Pluggable exact coefficient rings.

A ring object knows how to combine raw coefficient values; it never wraps
them.  Raw values are Fractions for the rationals, ints in [0, modulus)
for the modular rings, and {exponent-tuple: Fraction} dicts for the
polynomial extension (used for the deformation parameters u_1..u_{n-1}).
"""

from __future__ import annotations

from fractions import Fraction

from ..numerics import is_prime


class ReductionError(ArithmeticError):
    """A denominator divisible by p blocked reduction mod p^a."""


class Rationals:
    """Exact rational field; values are Fraction (ints accepted)."""

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, i):
        return Fraction(i)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def is_zero(self, x):
        return x == 0

    def is_unit(self, x):
        return x != 0

    def inv(self, x):
        return Fraction(1) / x

    def eq(self, x, y):
        return x == y

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


QQ = Rationals()


class PrimeField:
    """F_p; values are ints in [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, i):
        return i % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def is_zero(self, x):
        return x % self.p == 0

    def is_unit(self, x):
        return x % self.p != 0

    def inv(self, x):
        return pow(x, -1, self.p)

    def eq(self, x, y):
        return (x - y) % self.p == 0

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class IntegersModPrimePower:
    """Z/p^a; values are ints in [0, p^a).  Units are elements prime to p."""

    def __init__(self, p: int, a: int):
        if not is_prime(p) or a < 1:
            raise ValueError(f"bad modulus {p}^{a}")
        self.p = p
        self.a = a
        self.modulus = p**a
        self.zero = 0
        self.one = 1

    def from_int(self, i):
        return i % self.modulus

    def from_rational(self, x) -> int:
        """Reduce an exact rational; denominator must be prime to p."""
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ReductionError(f"denominator of {x} not prime to {self.p}")
        return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus

    def add(self, x, y):
        return (x + y) % self.modulus

    def sub(self, x, y):
        return (x - y) % self.modulus

    def mul(self, x, y):
        return (x * y) % self.modulus

    def neg(self, x):
        return (-x) % self.modulus

    def is_zero(self, x):
        return x % self.modulus == 0

    def is_unit(self, x):
        return x % self.p != 0

    def inv(self, x):
        return pow(x, -1, self.modulus)

    def eq(self, x, y):
        return (x - y) % self.modulus == 0

    def __repr__(self):
        return f"Z/{self.p}^{self.a}"

    def __eq__(self, other):
        return (
            isinstance(other, IntegersModPrimePower)
            and (other.p, other.a) == (self.p, self.a)
        )

    def __hash__(self):
        return hash(("Zpa", self.p, self.a))


class PolyExtension:
    """Polynomials in named variables over a base ring, values as dicts
    {exponent tuple: base value}.  A total-degree truncation silently drops
    high monomials and records that it did (`truncated` flag).
    """

    def __init__(self, base, names: tuple[str, ...], trunc: int | None = None):
        self.base = base
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.trunc = trunc
        self.truncated = False
        self.zero = {}
        self.one = {(0,) * self.nvars: base.one}

    def from_int(self, i):
        c = self.base.from_int(i)
        return {} if self.base.is_zero(c) else {(0,) * self.nvars: c}

    def variable(self, j: int):
        e = [0] * self.nvars
        e[j] = 1
        return {tuple(e): self.base.one}

    def _clean(self, d):
        return {e: c for e, c in d.items() if not self.base.is_zero(c)}

    def add(self, x, y):
        out = dict(x)
        for e, c in y.items():
            s = self.base.add(out.get(e, self.base.zero), c)
            if self.base.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return out

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def neg(self, x):
        return {e: self.base.neg(c) for e, c in x.items()}

    def mul(self, x, y):
        out = {}
        for e1, c1 in x.items():
            for e2, c2 in y.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if self.trunc is not None and sum(e) > self.trunc:
                    self.truncated = True
                    continue
                s = self.base.add(
                    out.get(e, self.base.zero), self.base.mul(c1, c2)
                )
                if self.base.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return out

    def is_zero(self, x):
        return all(self.base.is_zero(c) for c in x.values())

    def is_unit(self, x):
        # unit iff the constant term is a base unit and there is no
        # nilpotent correction to worry about: over a field base, any
        # polynomial with unit constant term is invertible only if
        # constant; we only ever invert constants.
        e0 = (0,) * self.nvars
        x = self._clean(x)
        return set(x) == {e0} and self.base.is_unit(x[e0])

    def inv(self, x):
        e0 = (0,) * self.nvars
        x = self._clean(x)
        if set(x) != {e0}:
            raise ZeroDivisionError("only constants are invertible here")
        return {e0: self.base.inv(x[e0])}

    def eq(self, x, y):
        return self.is_zero(self.sub(x, y))

    def constant_term(self, x):
        return x.get((0,) * self.nvars, self.base.zero)

    def __repr__(self):
        return f"{self.base!r}[{', '.join(self.names)}]"

    def __eq__(self, other):
        return (
            isinstance(other, PolyExtension)
            and other.base == self.base
            and other.names == self.names
            and other.trunc == self.trunc
        )

    def __hash__(self):
        return hash(("PolyExt", self.base, self.names, self.trunc))
