"""The formal group law engine.

The law is determined by its logarithm, the unique series solving

    log(x) = x + (1/p) * sum_{i=1..n} log(u_i x^(p^i)),   u_0 = p, u_n = 1,

with coefficients that are rationals for n = 1 and rational polynomials
in u_1..u_(n-1) for n >= 2.  Everything else (exp, the two-variable sum,
m-series, divided p-series) is derived from it over the rationals and
only then reduced: mod (u_*, p) for the height-n mod-p theory, or mod
(u_*, p^a) for truncated integral coefficients.  Reduction asserts
p-integrality of every coefficient; a failure is a bug, never expected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra.packed import conv_mod, weighted_degree_grid
from .algebra.rings import (
    QQ,
    IntegersModPrimePower,
    PolyExtension,
    PrimeField,
)
from .algebra.multipoly import MultiPoly
from .algebra.series import TruncatedSeries
from .numerics import ChromaticParams, vp

MODE_RATIONAL = "rational"
MODE_MODP = "modp"
MODE_MODPA = "modpa"


class IntegralityError(ArithmeticError):
    """A coefficient that must be p-integral is not (indicates a bug)."""


@dataclass
class WeierstrassData:
    """A series together with the index of its first unit coefficient.

    wdegree is math.inf for the zero series.
    """

    series: TruncatedSeries
    wdegree: int | float


def default_order(params: ChromaticParams, kmax: int = 1) -> int:
    """2 p^(n(r+kmax)) + 1, enough to see all Weierstrass degrees used."""
    return 2 * params.p ** (params.n * (params.r + kmax)) + 1


class FglContext:
    """Series cache for one (p, n) at one truncation order and mode.

    The cache is a pure memo: all fills are idempotent, entries are
    immutable once computed.
    """

    def __init__(
        self,
        params: ChromaticParams,
        order: int | None = None,
        mode: str = MODE_MODP,
        precision: int | None = None,
    ):
        self.params = params
        self.p = params.p
        self.n = params.n
        self.order = order if order is not None else default_order(params)
        if mode not in (MODE_RATIONAL, MODE_MODP, MODE_MODPA):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == MODE_MODPA and (precision is None or precision < 1):
            raise ValueError("modpa mode needs precision >= 1")
        self.mode = mode
        self.precision = precision
        # Modular modes kill u_1..u_(n-1) in the end, and specialization
        # commutes with every series operation, so their master
        # computation can run over plain rationals with u_i = 0; the
        # p-integrality assertion on reduction is unchanged.  Only the
        # rational mode carries the u-polynomials.
        if self.n >= 2 and mode == MODE_RATIONAL:
            self.master_ring = PolyExtension(
                QQ, tuple(f"u{i}" for i in range(1, self.n))
            )
        else:
            self.master_ring = QQ
        if mode == MODE_MODP:
            self.ring = PrimeField(self.p)
        elif mode == MODE_MODPA:
            self.ring = IntegersModPrimePower(self.p, precision)
        else:
            self.ring = self.master_ring
        self._cache: dict = {}

    # -- master (rational) series ---------------------------------------

    def _master_const(self, x: Fraction):
        if self.n >= 2:
            R = self.master_ring
            return {} if x == 0 else {(0,) * R.nvars: x}
        return x

    def log_series(self) -> TruncatedSeries:
        """The logarithm over the master ring ('rational' content)."""
        if "log" in self._cache:
            return self._cache["log"]
        R = self.master_ring
        p, n, M = self.p, self.n, self.order
        out = TruncatedSeries(R, M)
        out.c[1] = R.one
        e = 1
        while p**e < M:
            m = p**e
            acc = R.zero
            for i in range(1, min(n, e) + 1):
                prev = out.c[m // p**i]
                if R.is_zero(prev):
                    continue
                if i == n:
                    upow = R.one  # u_n = 1
                else:
                    uexp = [0] * (n - 1)
                    uexp[i - 1] = m // p**i
                    upow = {tuple(uexp): QQ.one}
                acc = R.add(acc, R.mul(prev, upow))
            out.c[m] = R.mul(self._master_const(Fraction(1, p)), acc)
            e += 1
        self._cache["log"] = out
        return out

    def exp_series(self) -> TruncatedSeries:
        if "exp" not in self._cache:
            self._cache["exp"] = self.log_series().reversion()
        return self._cache["exp"]

    def _master_m_series(self, m: int) -> TruncatedSeries:
        key = ("mser", m)
        if key not in self._cache:
            scaled = self.log_series().scale(self._master_const(Fraction(m)))
            self._cache[key] = self.exp_series().compose(scaled)
        return self._cache[key]

    def _master_sum(self) -> MultiPoly:
        """x +_F y over the master ring, total degree < order (matching
        the series convention: exponents below the truncation)."""
        if "sum" in self._cache:
            return self._cache["sum"]
        R = self.master_ring
        cap = self.order - 1
        log = self.log_series()
        S = MultiPoly(R, 2, bound=cap)
        for i, a in enumerate(log.c):
            if not R.is_zero(a):
                S = S + MultiPoly(R, 2, {(i, 0): a, (0, i): a}, bound=cap)
        # exp(S) as sum of b_m S^m; S is sparse so powers stay small
        exp = self.exp_series()
        out = MultiPoly(R, 2, bound=cap)
        power = MultiPoly.constant(R, 2, R.one, bound=cap)
        for m in range(1, len(exp.c)):
            power = power * S
            if power.is_zero():
                break
            if not R.is_zero(exp.c[m]):
                out = out + power.scale(exp.c[m])
        self._cache["sum"] = out
        return out

    # -- reduction -------------------------------------------------------

    def _reduce_coeff(self, c):
        """Master-ring coefficient -> mode coefficient, checking that
        every denominator (in every u-monomial) is prime to p."""
        if self.n >= 2:
            terms = c.items()
        else:
            terms = [((), c)]
        const = Fraction(0)
        for e, v in terms:
            if Fraction(v).denominator % self.p == 0:
                raise IntegralityError(
                    f"coefficient {v} at u^{e} not p-integral"
                )
            if not any(e):
                const = Fraction(v)
        if self.mode == MODE_MODP:
            return self.ring.from_int(
                const.numerator * pow(const.denominator, -1, self.p)
            )
        if self.mode == MODE_MODPA:
            return self.ring.from_rational(const)
        return c

    def reduce_series(self, s: TruncatedSeries) -> TruncatedSeries:
        if self.mode == MODE_RATIONAL:
            return s
        return s.map_coefficients(self.ring, self._reduce_coeff)

    def reduce_poly(self, poly: MultiPoly) -> MultiPoly:
        if self.mode == MODE_RATIONAL:
            return poly
        return poly.map_coefficients(self.ring, self._reduce_coeff)

    # -- public ops ------------------------------------------------------

    def fgl_sum(self) -> MultiPoly:
        key = ("sum", self.mode)
        if key not in self._cache:
            self._cache[key] = self.reduce_poly(self._master_sum())
        return self._cache[key]

    def _wdegree(self, s: TruncatedSeries) -> int | float:
        w = s.wdegree()
        return math.inf if w is None else w

    def m_series(self, m: int) -> WeierstrassData:
        if m == 0:
            return WeierstrassData(
                TruncatedSeries.zero(self.ring, self.order), math.inf
            )
        key = ("mser", m, self.mode)
        if key not in self._cache:
            s = self.reduce_series(self._master_m_series(m))
            self._cache[key] = WeierstrassData(s, self._wdegree(s))
        return self._cache[key]

    def divided_p_series(self, k: int) -> tuple[WeierstrassData, WeierstrassData]:
        """(<p>(t), f_k(t)) with <p>(t) = [p](t)/t and
        f_k(t) = <p>([p^(r+k-1)](t))."""
        if self.mode == MODE_RATIONAL:
            raise ValueError("divided p-series wants a modular mode")
        if k < 1:
            raise ValueError("k must be >= 1")
        pser = self.m_series(self.p).series
        hp = TruncatedSeries(self.ring, self.order - 1, pser.c[1:])
        inner = self.m_series(self.p ** (self.params.r + k - 1)).series
        fk = hp.compose(inner)
        return (
            WeierstrassData(hp, self._wdegree(hp)),
            WeierstrassData(fk, self._wdegree(fk)),
        )

    def sum_of_series(
        self, s1: TruncatedSeries, s2: TruncatedSeries
    ) -> TruncatedSeries:
        """s1(x) +_F s2(x) by substituting into the two-variable sum."""
        F = self.fgl_sum()
        R = self.ring
        order = min(s1.order, s2.order, self.order)
        out = TruncatedSeries(R, order)
        pow1: dict[int, TruncatedSeries] = {0: TruncatedSeries(R, order, [R.one])}
        pow2: dict[int, TruncatedSeries] = {0: TruncatedSeries(R, order, [R.one])}

        def power(table, s, k):
            if k not in table:
                table[k] = power(table, s, k - 1) * s
            return table[k]

        for (i, j), c in sorted(F.terms.items()):
            term = power(pow1, s1, i) * power(pow2, s2, j)
            out = out + term.scale(c)
        return out

    def sum_support_violations(self, modulus: int) -> list[tuple[int, int]]:
        """Monomials x^i y^j of the sum with i+j != 1 mod the modulus."""
        F = self.fgl_sum()
        return sorted(
            (i, j)
            for (i, j) in F.terms
            if (i + j) % modulus != 1 % modulus
        )


def sum_as_array(ctx: FglContext) -> np.ndarray:
    """The mod-p two-variable sum as a dense (M+1)x(M+1) uint64 grid,
    M = ctx.order - 1 being the total-degree cap."""
    assert ctx.mode == MODE_MODP
    M = ctx.order - 1
    F = ctx.fgl_sum()
    arr = np.zeros((M + 1, M + 1), dtype=np.uint64)
    for (i, j), c in F.terms.items():
        arr[i, j] = c
    return arr


def _truncated_powers(base: np.ndarray, kmax: int, M: int, p: int):
    """base^0..base^kmax as dense 2-D grids, total degree <= M."""
    grid = weighted_degree_grid((M + 1, M + 1), (1, 1))
    mask = grid <= M
    powers = [np.zeros((M + 1, M + 1), dtype=np.uint64)]
    powers[0][0, 0] = 1
    for _ in range(kmax):
        nxt = conv_mod(powers[-1], base, p)[: M + 1, : M + 1]
        pad = np.zeros((M + 1, M + 1), dtype=np.uint64)
        pad[: nxt.shape[0], : nxt.shape[1]] = nxt
        powers.append(np.where(mask, pad, 0))
    return powers


def associativity_defect(ctx: FglContext) -> int:
    """Number of monomials (total degree <= order) where
    (x +_F y) +_F z and x +_F (y +_F z) disagree mod p.

    Both sides are assembled independently by substituting the dense sum
    grid into itself, one slot at a time.
    """
    assert ctx.mode == MODE_MODP
    p, M = ctx.p, ctx.order - 1
    F = sum_as_array(ctx)
    powers = _truncated_powers(F, M, M, p)
    left = np.zeros((M + 1, M + 1, M + 1), dtype=np.uint64)
    right = np.zeros((M + 1, M + 1, M + 1), dtype=np.uint64)
    for a in range(M + 1):
        for b in range(M + 1):
            c = int(F[a, b])
            if not c:
                continue
            # F(F(x,y), z): c * F(x,y)^a * z^b
            left[:, :, b] = (left[:, :, b] + c * powers[a]) % p
            # F(x, F(y,z)): c * x^a * F(y,z)^b
            right[a, :, :] = (right[a, :, :] + c * powers[b]) % p
    grid3 = weighted_degree_grid((M + 1,) * 3, (1, 1, 1))
    mask3 = grid3 <= M
    return int(np.count_nonzero((left != right) & mask3))
