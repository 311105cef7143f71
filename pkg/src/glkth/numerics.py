"""Integer-level combinatorics shared by every other module.

Everything here is exact: all arithmetic is on Python ints (arbitrary
precision), and all closed forms are cross-checked elsewhere against
brute-force oracles.  The central objects are the chromatic parameter
bundle (p, n, r, q) and the integer family N_k counting polynomial
generators / irreducible representations in each groupoid degree p^k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class UndefinedValuationError(ValueError):
    """v_p(0) requested."""


class ParameterError(ValueError):
    """Chromatic parameters fail validation."""


def vp(m: int, p: int) -> int:
    """Largest e with p^e dividing m.  m must be nonzero."""
    if m == 0:
        raise UndefinedValuationError("v_p(0) is undefined")
    m = abs(m)
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


def digit_sum(d: int, p: int) -> int:
    """Sum of the base-p digits of d >= 0."""
    s = 0
    while d > 0:
        s += d % p
        d //= p
    return s


def is_prime(m: int) -> bool:
    """Trial division; adequate for desk-scale prime powers."""
    if m < 2:
        return False
    f = 2
    while f * f <= m:
        if m % f == 0:
            return False
        f += 1
    return True


def prime_power_base(q: int) -> int | None:
    """The prime l with q = l^e, or None if q is not a prime power."""
    if q < 2:
        return None
    l = 2
    while l * l <= q:
        if q % l == 0:
            m = q
            while m % l == 0:
                m //= l
            return l if m == 1 else None
        l += 1
    return q  # q itself is prime


@dataclass(frozen=True)
class ChromaticParams:
    """Prime p, height n, depth r = v_p(q-1) and the field order q.

    Validation is strict: p must be an odd prime, q a prime power coprime
    to p, and v_p(q-1) must equal r exactly.
    """

    p: int
    n: int
    r: int
    q: int

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ParameterError(f"p={self.p} is not an odd prime")
        if self.n < 1:
            raise ParameterError(f"height n={self.n} must be positive")
        if self.r < 1:
            raise ParameterError(f"r={self.r} must be positive")
        if prime_power_base(self.q) is None:
            raise ParameterError(f"q={self.q} is not a prime power")
        if self.q % self.p == 0:
            raise ParameterError(f"q={self.q} is not coprime to p={self.p}")
        if self.q % self.p != 1 or vp(self.q - 1, self.p) != self.r:
            raise ParameterError(
                f"v_{self.p}({self.q}-1) != {self.r}; got q={self.q}"
            )

    def N(self, k: int) -> int:
        """N_0 = p^(nr);  N_k = p^((n-1)k + n(r-1)) (p^n - 1) for k > 0."""
        p, n, r = self.p, self.n, self.r
        if k == 0:
            return p ** (n * r)
        return p ** ((n - 1) * k + n * (r - 1)) * (p**n - 1)

    def Nbar(self, k: int) -> int:
        return sum(self.N(j) for j in range(k + 1))

    def Nstar(self, k: int) -> int:
        p, n, r = self.p, self.n, self.r
        return self.Nbar(k) - p ** (n * k + n * r - k)


def gl_order(q: int, d: int) -> int:
    """Order of the d x d general linear group over a field of q elements.

    Empty product for d = 0.
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    qd = q**d
    out = 1
    for k in range(d):
        out *= qd - q**k
    return out


def gl_order_valuation(params: ChromaticParams, d: int) -> int:
    """Closed form d*r + (d - digit_sum(d))/(p-1) for v_p |GL_d|."""
    p = params.p
    return d * params.r + (d - digit_sum(d, p)) // (p - 1)


@dataclass
class NkTable:
    """The family N_k with partial sums Nbar_k and the shifted N*_k.

    Construction verifies the five defining identities

        (A)  p^k N_k = p^(nr)                     if k = 0
                     = p^(n(r+k)) - p^(n(r+k-1))  if k > 0
        (B)  sum_{j<=k} p^j N_j = p^(n(r+k))
        (C)  p^k (Nbar_k - N*_k) = p^(n(k+r))
        (D)  p^(k+1) (Nbar_k - N*_{k+1}) = p^(n(k+r))
        (E)  p^(k+1) N*_{k+1} = (p-1) p^k Nbar_k + p^k N*_k

    for every stored k, and raises if any fails.
    """

    params: ChromaticParams
    kmax: int
    N: list[int] = field(default_factory=list)
    Nbar: list[int] = field(default_factory=list)
    Nstar: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.kmax < 0:
            raise ValueError("kmax must be >= 0")
        pr = self.params
        self.N = [pr.N(k) for k in range(self.kmax + 2)]
        self.Nbar = [pr.Nbar(k) for k in range(self.kmax + 2)]
        self.Nstar = [pr.Nstar(k) for k in range(self.kmax + 2)]
        self.check_identities()

    def check_identities(self):
        p, n, r = self.params.p, self.params.n, self.params.r
        for k in range(self.kmax + 1):
            a = p**k * self.N[k]
            a_expect = (
                p ** (n * r) if k == 0
                else p ** (n * (r + k)) - p ** (n * (r + k - 1))
            )
            assert a == a_expect, f"(A) fails at k={k}"
            b = sum(p**j * self.N[j] for j in range(k + 1))
            assert b == p ** (n * (r + k)), f"(B) fails at k={k}"
            c = p**k * (self.Nbar[k] - self.Nstar[k])
            assert c == p ** (n * (k + r)), f"(C) fails at k={k}"
            d = p ** (k + 1) * (self.Nbar[k] - self.Nstar[k + 1])
            assert d == p ** (n * (k + r)), f"(D) fails at k={k}"
            e = p ** (k + 1) * self.Nstar[k + 1]
            e_expect = (p - 1) * p**k * self.Nbar[k] + p**k * self.Nstar[k]
            assert e == e_expect, f"(E) fails at k={k}"


def nk_table(params: ChromaticParams, kmax: int) -> NkTable:
    return NkTable(params, kmax)


def poincare_series(params: ChromaticParams, tmax: int) -> list[int]:
    """Coefficients of t^0..t^tmax of prod_{k>=0} (1 - t^(p^k))^(-N_k).

    Only factors with p^k <= tmax contribute below the cutoff.
    """
    if tmax < 0:
        raise ValueError("tmax must be >= 0")
    coeffs = [1] + [0] * tmax
    k = 0
    while params.p**k <= tmax:
        step = params.p**k
        # (1 - t^step)^(-N) one geometric factor at a time
        for _ in range(params.N(k)):
            for i in range(step, tmax + 1):
                coeffs[i] += coeffs[i - step]
        k += 1
    return coeffs


def gauss_binom(m: int, a: int, Q: int) -> int:
    """Number of a-dimensional subspaces of a space of dimension m over a
    field with Q elements.  Returns 0 when a > m or a < 0.
    """
    if a < 0 or a > m:
        return 0
    num = 1
    den = 1
    for i in range(a):
        num *= Q ** (m - i) - 1
        den *= Q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def rational_binom(x: Fraction | int, k: int) -> Fraction:
    """Generalized binomial coefficient x(x-1)...(x-k+1)/k!, exact."""
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(x) - i
    for i in range(2, k + 1):
        out /= i
    return out
