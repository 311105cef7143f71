"""Mod-p Tanabe rings K^0(BGL_d(F_q)) and their internal structure.

The ring is F_p[[c_1..c_d]] / (phi*(c_i) - c_i) with phi* acting through
x_j -> [q](x_j) on the Chern roots.  Everything is made finite by
truncating at a weighted degree bound B (w(c_i) = i): the truncated
quotient Q_B is T/(monomials of degree > B) for the true ring T, so
dim Q_B grows monotonically to dim T as B grows, and dim T is known
independently (a Poincare-series coefficient).  The saturation protocol
certifies Q_B = T by exactly that dimension match, plus stability and
the Adams nilpotency relations, never by an a priori bound alone.

Linear algebra is sparse row echelon over F_p with grlex pivot order,
deterministic throughout.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .algebra.linalg import SparseEchelon, nullspace, rank, solve_mod_prime_power
from .algebra.multipoly import MultiPoly
from .algebra.rings import PrimeField
from .algebra.series import TruncatedSeries
from .fgl import MODE_MODP, MODE_MODPA, FglContext
from .numerics import ChromaticParams, poincare_series
from . import cache as diskcache


class BoundTooSmallError(RuntimeError):
    """The requested truncation bound fails the saturation criteria."""


class FrobeniusPropertyError(RuntimeError):
    """A structural fact (socle dimension one, defining identity of the
    fixed-point class, ...) failed: a build bug, never expected."""


class UnsaturatedAlgebraError(RuntimeError):
    """An operation that needs a saturated algebra got a partial one."""


def _monomials(d: int, weights, bound: int) -> list[tuple]:
    """All exponent tuples with weighted degree <= bound, grlex order."""
    out = [()]
    for w in weights:
        nxt = []
        for e in out:
            used = sum(v * ww for v, ww in zip(e, weights))
            k = 0
            while used + k * w <= bound:
                nxt.append(e + (k,))
                k += 1
        out = nxt
    out.sort(key=lambda e: (sum(v * w for v, w in zip(e, weights)), e))
    return out


class AlgebraElement:
    """Coordinate vector over the standard-monomial basis (reduced)."""

    __slots__ = ("alg", "vec")

    def __init__(self, alg: "FiniteAlgebra", vec: dict[int, int]):
        self.alg = alg
        self.vec = {c: v % alg.p for c, v in vec.items() if v % alg.p}

    def is_zero(self) -> bool:
        return not self.vec

    def __add__(self, other):
        out = dict(self.vec)
        for c, v in other.vec.items():
            out[c] = out.get(c, 0) + v
        return AlgebraElement(self.alg, out)

    def __sub__(self, other):
        out = dict(self.vec)
        for c, v in other.vec.items():
            out[c] = out.get(c, 0) - v
        return AlgebraElement(self.alg, out)

    def __neg__(self):
        return AlgebraElement(self.alg, {c: -v for c, v in self.vec.items()})

    def scale(self, k: int):
        return AlgebraElement(self.alg, {c: k * v for c, v in self.vec.items()})

    def __mul__(self, other):
        return self.alg.multiply(self, other)

    def __pow__(self, k: int):
        out = self.alg.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        return self.alg is other.alg and self.vec == other.vec

    def coordinates(self) -> list[int]:
        return [self.vec.get(c, 0) for c in self.alg.basis]

    def __repr__(self):
        parts = [
            f"{v}*c^{self.alg.monomials[c]}" for c, v in sorted(self.vec.items())
        ]
        return "<elt " + (" + ".join(parts) or "0") + ">"


class FiniteAlgebra:
    """Finite-dimensional commutative local F_p-algebra presented by a
    monomial list and a normal-form reducer on the spanned range."""

    def __init__(self, params: ChromaticParams, d: int, weights, bound: int):
        self.params = params
        self.p = params.p
        self.d = d
        self.weights = tuple(weights)
        self.bound = bound
        self.monomials = _monomials(d, self.weights, bound)
        self.index = {e: i for i, e in enumerate(self.monomials)}
        self.ech = SparseEchelon(self.p)
        self.basis: list[int] = []
        self.saturated = False
        self._mul_cache: dict[tuple[int, int], dict[int, int]] = {}

    # -- construction helpers --------------------------------------------

    def _finish(self):
        pivots = set(self.ech.pivot_rows)
        self.basis = [i for i in range(len(self.monomials)) if i not in pivots]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def wdeg(self, e) -> int:
        return sum(v * w for v, w in zip(e, self.weights))

    # -- element constructors --------------------------------------------

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return self.from_terms({(0,) * self.d: 1})

    def gen(self, i: int) -> AlgebraElement:
        e = [0] * self.d
        e[i] = 1
        return self.from_terms({tuple(e): 1})

    def euler(self) -> AlgebraElement:
        """Top generator c_d."""
        return self.gen(self.d - 1)

    def from_terms(self, terms: dict[tuple, int]) -> AlgebraElement:
        row = []
        for e, v in terms.items():
            if v % self.p == 0:
                continue
            idx = self.index.get(tuple(e))
            if idx is None:
                if self.wdeg(e) > self.bound:
                    continue  # beyond bound: zero once saturated
                raise KeyError(f"monomial {e} not enumerated")
            row.append((idx, v % self.p))
        return AlgebraElement(self, self.ech.normal_form(row))

    def from_poly(self, poly: MultiPoly) -> AlgebraElement:
        return self.from_terms(poly.terms)

    def basis_element(self, pos: int) -> AlgebraElement:
        return AlgebraElement(self, {self.basis[pos]: 1})

    # -- ring structure ----------------------------------------------------

    def _mul_basis(self, ca: int, cb: int) -> dict[int, int]:
        key = (ca, cb) if ca <= cb else (cb, ca)
        hit = self._mul_cache.get(key)
        if hit is None:
            ea = self.monomials[ca]
            eb = self.monomials[cb]
            prod = tuple(a + b for a, b in zip(ea, eb))
            if self.wdeg(prod) > self.bound:
                if not self.saturated:
                    raise UnsaturatedAlgebraError(
                        "product exceeds the bound of an unsaturated algebra"
                    )
                hit = {}
            else:
                hit = self.ech.normal_form([(self.index[prod], 1)])
            self._mul_cache[key] = hit
        return hit

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        p = self.p
        out: dict[int, int] = {}
        for ca, va in a.vec.items():
            for cb, vb in b.vec.items():
                f = va * vb % p
                for c, w in self._mul_basis(ca, cb).items():
                    out[c] = (out.get(c, 0) + f * w) % p
        return AlgebraElement(self, out)

    # -- linear-algebra ops ------------------------------------------------

    def _mult_matrix(self, a: AlgebraElement) -> list[list[int]]:
        """Rows = coordinates of a * basis_j, as a dim x dim matrix with
        columns indexed by basis position (row i = image of basis i)."""
        pos = {c: i for i, c in enumerate(self.basis)}
        mat = []
        for c in self.basis:
            prod = self.multiply(a, AlgebraElement(self, {c: 1}))
            row = [0] * self.dimension
            for cc, v in prod.vec.items():
                row[pos[cc]] = v
            mat.append(row)
        return mat

    def annihilator(self, elements) -> list[AlgebraElement]:
        """Basis of {y : s*y = 0 for all s in elements}."""
        if not self.saturated:
            raise UnsaturatedAlgebraError("annihilator needs saturation")
        stacked: list[list[int]] = []
        for s in elements:
            mat = self._mult_matrix(s)
            # columns = y coordinates; mat[i] is image of basis i, so the
            # map y -> s*y has matrix with column i = mat[i]
            dim = self.dimension
            for out_pos in range(dim):
                stacked.append([mat[j][out_pos] for j in range(dim)])
        if not stacked:
            return [self.basis_element(i) for i in range(self.dimension)]
        kern = nullspace(stacked, self.p)
        out = []
        for vec in kern:
            out.append(
                AlgebraElement(
                    self, {self.basis[j]: v for j, v in enumerate(vec) if v}
                )
            )
        return out

    def maximal_ideal_generators(self) -> list[AlgebraElement]:
        return [self.gen(i) for i in range(self.d)]

    def socle(self) -> list[AlgebraElement]:
        """ann(maximal ideal); must be one-dimensional here (Frobenius)."""
        if self.d == 0:
            return [self.one()]
        soc = self.annihilator(self.maximal_ideal_generators())
        if len(soc) != 1:
            raise FrobeniusPropertyError(
                f"socle dimension {len(soc)} != 1 at d={self.d}"
            )
        return soc

    def subspace_span(self, elements) -> SparseEchelon:
        ech = SparseEchelon(self.p)
        for el in elements:
            ech.insert(sorted(el.vec.items()))
        return ech

    def same_subspace(self, els_a, els_b) -> bool:
        ea = self.subspace_span(els_a)
        eb = self.subspace_span(els_b)
        if ea.rank != eb.rank:
            return False
        return all(not eb.normal_form(sorted(el.vec.items())) for el in els_a)

    def ideal_span(self, gens) -> list[AlgebraElement]:
        """Basis of the ideal generated by gens (as a subspace)."""
        ech = SparseEchelon(self.p)
        out = []
        for g in gens:
            for i in range(self.dimension):
                el = self.multiply(g, self.basis_element(i))
                if ech.insert(sorted(el.vec.items())):
                    out.append(el)
        return out

    def unit_multiple(self, v: AlgebraElement, w: AlgebraElement) -> int | None:
        """lambda in F_p^x with w = lambda * v, or None."""
        for lam in range(1, self.p):
            if (w - v.scale(lam)).is_zero():
                return lam
        return None


class TorusRing(FiniteAlgebra):
    """K^0 of the d-torus: F_p[x_1..x_d]/(x_j^(p^(nr))), monomial
    relations, so the reducer is empty and the basis is every monomial
    with exponents below p^(nr)."""

    def __init__(self, params: ChromaticParams, d: int):
        self.exp_bound = params.p ** (params.n * params.r)
        bound = d * (self.exp_bound - 1)
        super().__init__(params, d, (1,) * d, bound)
        # relations: any monomial with an exponent >= p^(nr)
        for i, e in enumerate(self.monomials):
            if any(v >= self.exp_bound for v in e):
                self.ech.insert([(i, 1)])
        self._finish()
        self.saturated = True


def build_torus_ring(params: ChromaticParams, d: int, max_dim: int = 500000) -> TorusRing:
    expected = params.p ** (params.n * params.r * d)
    if expected > max_dim:
        raise BoundTooSmallError(
            f"torus ring dimension {expected} exceeds the budget {max_dim}"
        )
    ring = TorusRing(params, d)
    assert ring.dimension == expected
    return ring


# -- symmetric functions of a series of the Chern roots -------------------


def _reduction_table(d: int, nterms: int, ring, bound: int):
    """h[m][j] with x^m = sum_j h[m][j](e) x^j modulo the generic monic
    polynomial x^d - e_1 x^(d-1) + e_2 x^(d-2) - ...  (x_j = Chern roots).
    Entries are MultiPoly in e_1..e_d, weights 1..d, wdeg <= bound."""
    weights = tuple(range(1, d + 1))
    zero = MultiPoly(ring, d, weights=weights, bound=bound)
    one = MultiPoly.constant(ring, d, ring.one, weights=weights, bound=bound)
    # s_i = (-1)^(i-1) e_i so that x^d = sum_i s_i x^(d-i)
    s = []
    for i in range(1, d + 1):
        e = [0] * d
        e[i - 1] = 1
        coeff = ring.one if i % 2 == 1 else ring.neg(ring.one)
        s.append(MultiPoly(ring, d, {tuple(e): coeff}, weights=weights, bound=bound))
    table = []
    for m in range(nterms):
        if m < d:
            row = [one if j == m else zero for j in range(d)]
        else:
            prev = table[m - 1]
            row = [zero] * d
            for j in range(1, d):
                row[j] = prev[j - 1]
            top = prev[d - 1]
            if not top.is_zero():
                for j in range(d):
                    row[j] = row[j] + top * s[d - 1 - j]
        table.append(row)
    return table


def symmetric_functions_of_series(
    series: TruncatedSeries, d: int, bound: int
) -> list[MultiPoly]:
    """Coefficients phi_0..phi_d (in e_1..e_d, weights 1..d) of
    prod_j (t - g(x_j)) = sum_i phi_i t^(d-i), computed as the
    characteristic polynomial of multiplication by g(x) on the rank-d
    module with basis 1..x^(d-1) over the symmetric-function ring.

    phi_i equals the i-th signed symmetric function (-1)^i E_i(g(x_*)),
    i.e. the phi*-image of the Chern class once e_j -> (-1)^j c_j.
    """
    ring = series.ring
    weights = tuple(range(1, d + 1))
    zero = MultiPoly(ring, d, weights=weights, bound=bound)
    one = MultiPoly.constant(ring, d, ring.one, weights=weights, bound=bound)
    if d == 0:
        return [one]
    table = _reduction_table(d, series.order, ring, bound)
    M = [[zero for _ in range(d)] for _ in range(d)]
    for j in range(d):
        for m, g in enumerate(series.c):
            if ring.is_zero(g):
                continue
            if m + j >= len(table):
                break
            row = table[m + j]
            for i in range(d):
                if not row[i].is_zero():
                    M[i][j] = M[i][j] + row[i].scale(g)
    # det(t I - M) by permutation expansion; entries are degree <= 1 in t
    from itertools import permutations

    phi = [zero] * (d + 1)  # phi[i] multiplies t^(d-i)
    for perm in permutations(range(d)):
        sign = 1
        seen = [False] * d
        for i in range(d):
            if seen[i]:
                continue
            j, ln = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
        fixed = [i for i in range(d) if perm[i] == i]
        moved = [i for i in range(d) if perm[i] != i]
        base = one if sign == 1 else -one
        for i in moved:
            base = base * (-M[i][perm[i]])
        if base.is_zero():
            continue
        # fixed points contribute (t - M_ii): expand over subsets
        from itertools import combinations

        for kk in range(len(fixed) + 1):
            for subset in combinations(fixed, kk):
                term = base
                for i in subset:
                    term = term * (-M[i][i])
                tdeg = len(fixed) - kk
                phi[d - tdeg] = phi[d - tdeg] + term
    return phi


def _chern_substitution(epoly: MultiPoly, bound: int) -> MultiPoly:
    """e_j -> (-1)^j c_j: same exponents, sign twist, weights kept."""
    ring = epoly.ring
    out = MultiPoly(ring, epoly.nvars, weights=epoly.weights, bound=bound)
    for e, c in epoly.terms.items():
        odd = sum(v for j, v in enumerate(e) if (j + 1) % 2 == 1)
        out.terms[e] = c if odd % 2 == 0 else ring.neg(c)
    return out


class QuotientAlgebra(FiniteAlgebra):
    """The truncated Tanabe ring at one bound B, plus its relation data."""

    def __init__(
        self,
        params: ChromaticParams,
        d: int,
        bound: int,
        fgl: FglContext | None = None,
    ):
        super().__init__(params, d, tuple(range(1, d + 1)), bound)
        self.fgl = fgl or FglContext(
            params, order=max(bound + 2, 8), mode=MODE_MODP
        )
        if self.fgl.order < bound + 2:
            self.fgl = FglContext(params, order=bound + 2, mode=MODE_MODP)
        self.relations = self._relations()
        rows = []
        for i, rel in enumerate(self.relations):
            val = min(
                (self.wdeg(e) for e in rel.terms), default=self.bound + 1
            )
            for m in self.monomials:
                if self.wdeg(m) + val > self.bound:
                    continue
                row = []
                for e, c in rel.terms.items():
                    prod = tuple(a + b for a, b in zip(e, m))
                    if self.wdeg(prod) <= self.bound:
                        row.append((self.index[prod], c))
                if row:
                    rows.append((i, m, sorted(row)))
        rows.sort(key=lambda t: (t[0], t[1]))
        for _, _, row in rows:
            self.ech.insert(row)
        self._finish()

    def _relations(self) -> list[MultiPoly]:
        """r_i = phi*(c_i) - c_i as polynomials in c_1..c_d, wdeg <= B."""
        qser = self.fgl.m_series(self.params.q).series
        phi = symmetric_functions_of_series(qser, self.d, self.bound)
        rels = []
        for i in range(1, self.d + 1):
            img = _chern_substitution(phi[i], self.bound)
            e = [0] * self.d
            e[i - 1] = 1
            ci = MultiPoly(
                PrimeField(self.p),
                self.d,
                {tuple(e): 1},
                weights=self.weights,
                bound=self.bound,
            )
            rels.append(img - ci)
        return rels

    # -- phi* and the fixed-point class ----------------------------------

    def adams_image(self, i: int) -> AlgebraElement:
        """phi*(c_i) reduced into the algebra."""
        return self.from_poly(
            _chern_substitution(
                symmetric_functions_of_series(
                    self.fgl.m_series(self.params.q).series, self.d, self.bound
                )[i],
                self.bound,
            )
        )

    def fix_class(self) -> AlgebraElement:
        """prod_j <q>(x_j) rewritten in Chern classes and reduced; the
        defining identity euler * fix = phi*(euler) is asserted."""
        if not self.saturated:
            raise UnsaturatedAlgebraError("fix class needs saturation")
        if self.d == 0:
            return self.one()
        qser = self.fgl.m_series(self.params.q).series
        hq = TruncatedSeries(qser.ring, qser.order - 1, qser.c[1:])
        # det of multiplication by <q>(x) = prod_j <q>(x_j) = the constant
        # coefficient phi_d of its characteristic polynomial, times (-1)^d
        phi = symmetric_functions_of_series(hq, self.d, self.bound)
        det = phi[self.d]
        if self.d % 2 == 1:
            det = -det
        fix = self.from_poly(_chern_substitution(det, self.bound))
        lhs = self.euler() * fix
        rhs = self.adams_image(self.d)
        if not (lhs - rhs).is_zero():
            raise FrobeniusPropertyError(
                "euler * fix != phi*(euler) in the built algebra"
            )
        return fix


def expected_dimension(params: ChromaticParams, d: int) -> int:
    return poincare_series(params, d)[d]


def nilpotency_exponent(params: ChromaticParams, d: int) -> int:
    """p^(n(k+r)) with p^k <= d < p^(k+1) kills the maximal ideal."""
    k = 0
    while params.p ** (k + 1) <= d:
        k += 1
    return params.p ** (params.n * (k + params.r))


def initial_bound(params: ChromaticParams, d: int) -> int:
    """Heuristic start: the conjectural socle degree (sum over base-p
    digits of d of (Nbar_i - 1) p^i) plus slack.  Saturation verifies."""
    p = params.p
    total, dd, i = 0, d, 0
    while dd:
        total += (dd % p) * (params.Nbar(i) - 1) * p**i
        dd //= p
        i += 1
    return total + 2


@dataclass
class SaturationReport:
    bounds_tried: list[int] = field(default_factory=list)
    dims: list[int] = field(default_factory=list)
    saturated: bool = False
    reason: str = ""


def _saturation_checks(alg: QuotientAlgebra) -> tuple[bool, str]:
    expected = expected_dimension(alg.params, alg.d)
    if alg.dimension != expected:
        return False, f"dim {alg.dimension} != PS coefficient {expected}"
    nil = nilpotency_exponent(alg.params, alg.d)
    was_saturated = alg.saturated
    alg.saturated = True  # allow >bound products to reduce to zero
    try:
        for i in range(alg.d):
            if not (alg.gen(i) ** nil).is_zero():
                return False, f"c_{i+1}^{nil} != 0"
    finally:
        alg.saturated = was_saturated
    return True, ""


def build_gl_ring(
    params: ChromaticParams,
    d: int,
    bound: int | None = None,
    budget_seconds: float | None = None,
) -> QuotientAlgebra:
    """Build K^0(BGL_d(F_q)) mod p.  With an explicit bound, failure of
    the saturation criteria raises BoundTooSmallError (never a silently
    wrong dimension); otherwise the bound is grown until saturated."""
    if d == 0:
        alg = QuotientAlgebra(params, 0, 0)
        alg.saturated = True
        return alg
    if bound is not None:
        alg = QuotientAlgebra(params, d, bound)
        ok, why = _saturation_checks(alg)
        if not ok:
            raise BoundTooSmallError(f"bound {bound} too small: {why}")
        alg.saturated = True
        return alg
    return saturate_build(params, d, budget_seconds=budget_seconds)[0]


def saturate_build(
    params: ChromaticParams,
    d: int,
    start_bound: int | None = None,
    budget_seconds: float | None = None,
) -> tuple[QuotientAlgebra, SaturationReport]:
    """Grow B until the dimension stabilizes across two increments,
    equals the Poincare coefficient, and the nilpotency relations hold.
    On budget exhaustion the last algebra is returned flagged
    unsaturated."""
    report = SaturationReport()
    t0 = time.monotonic()
    B = start_bound if start_bound is not None else initial_bound(params, d)
    alg = None
    while True:
        alg = QuotientAlgebra(params, d, B)
        report.bounds_tried.append(B)
        report.dims.append(alg.dimension)
        ok, why = _saturation_checks(alg)
        if ok:
            # stability across a further increment: the dimension is
            # nondecreasing in B and capped by the true one, so any
            # change here would expose a build bug
            confirm = QuotientAlgebra(params, d, B + 2)
            report.bounds_tried.append(B + 2)
            report.dims.append(confirm.dimension)
            if confirm.dimension != alg.dimension:
                raise FrobeniusPropertyError(
                    "dimension moved after reaching the Poincare coefficient"
                )
            alg.saturated = True
            report.saturated = True
            return alg, report
        report.reason = why
        if budget_seconds is not None and time.monotonic() - t0 > budget_seconds:
            report.reason = f"budget exceeded; last: {why}"
            return alg, report
        B += max(2, B // 4)


def saturate(alg: QuotientAlgebra, budget_seconds: float | None = None):
    """Spec-facing wrapper: saturate starting from alg's bound."""
    if alg.saturated:
        return alg, SaturationReport(
            bounds_tried=[alg.bound], dims=[alg.dimension], saturated=True
        )
    return saturate_build(
        alg.params, alg.d, start_bound=alg.bound, budget_seconds=budget_seconds
    )


# -- restriction to the torus ---------------------------------------------


def restrict_to_torus(
    alg: QuotientAlgebra, torus: TorusRing
) -> dict[int, AlgebraElement]:
    """Images of c_1..c_d in the torus ring: c_i -> (-1)^i e_i(x)."""
    from .algebra.symmetric import elementary_poly

    out = {}
    ring = PrimeField(alg.p)
    for i in range(1, alg.d + 1):
        e = elementary_poly(ring, alg.d, i, bound=torus.bound)
        sign = 1 if i % 2 == 0 else alg.p - 1
        out[i] = torus.from_poly(e.scale(sign))
    return out


def restriction_map(
    alg: QuotientAlgebra, torus: TorusRing, el: AlgebraElement
) -> AlgebraElement:
    imgs = restrict_to_torus(alg, torus)
    out = torus.zero()
    for col, v in el.vec.items():
        mono = alg.monomials[col]
        term = torus.one().scale(v)
        for i, exp in enumerate(mono):
            if exp:
                term = term * imgs[i + 1] ** exp
        out = out + term
    return out


# -- indecomposables / primitives at d = p^k ------------------------------


@dataclass
class IndecomposablesReport:
    dim_algebra: int
    dim_Jbar: int
    dim_quotient: int
    dim_Ibar: int
    ibar_generated_by_power: bool
    ibar_times_jbar_zero: bool
    free_rank_one: bool
    image_of_top_chern_ok: bool
    quotient_truncated_poly_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.ibar_generated_by_power
            and self.ibar_times_jbar_zero
            and self.free_rank_one
            and self.image_of_top_chern_ok
            and self.quotient_truncated_poly_ok
        )


class _TruncatedUni:
    """F_p[x]/x^W helper for the indecomposable-quotient target."""

    def __init__(self, p: int, W: int):
        self.p = p
        self.W = W

    def mul(self, a: list[int], b: list[int]) -> list[int]:
        out = [0] * self.W
        for i, va in enumerate(a):
            if not va:
                continue
            for j, vb in enumerate(b):
                if i + j >= self.W:
                    break
                if vb:
                    out[i + j] = (out[i + j] + va * vb) % self.p
        return out

    def pow(self, a: list[int], k: int) -> list[int]:
        out = [0] * self.W
        out[0] = 1
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return out


def indecomposable_quotient(alg: QuotientAlgebra):
    """For d = p^k: the map alpha c_j -> (-1)^j e_j(x, [q]x, ..) into
    F_p[x]/x^(p^k N_k), its kernel Jbar (= decomposables), the primitive
    ideal Ibar = ann(Jbar), and the structural verifications."""
    params, d = alg.params, alg.d
    if not alg.saturated:
        raise UnsaturatedAlgebraError("needs a saturated algebra")
    p = params.p
    k = 0
    while p ** (k + 1) <= d:
        k += 1
    if p**k != d:
        raise ValueError(f"d={d} is not a power of p={p}")
    Nk = params.N(k)
    W = p**k * Nk
    uni = _TruncatedUni(p, W)
    order = W + 1
    fgl = FglContext(params, order=order, mode=MODE_MODP)

    # alpha(c_j): elementary symmetric of the orbit series, signed
    orbit = [fgl.m_series(params.q**i).series.c[:W] for i in range(d)]
    # prod_i (t - series_i): coefficients in F_p[x]/x^W
    poly_t = [[0] * W for _ in range(d + 1)]
    poly_t[0][0] = 1
    deg = 0
    for ser in orbit:
        ser = (ser + [0] * W)[:W]
        nxt = [[0] * W for _ in range(d + 1)]
        for td in range(deg + 1):
            # * t
            nxt[td + 1] = [
                (a + b) % p for a, b in zip(nxt[td + 1], poly_t[td])
            ]
            # * (-series)
            prod = uni.mul(poly_t[td], ser)
            nxt[td] = [(a - b) % p for a, b in zip(nxt[td], prod)]
        poly_t = nxt
        deg += 1
    alpha_c = {j: poly_t[d - j] for j in range(1, d + 1)}  # already signed

    # well-definedness: alpha kills each relation r_i
    def alpha_of_poly(poly: MultiPoly) -> list[int]:
        out = [0] * W
        for e, cval in poly.terms.items():
            term = [0] * W
            term[0] = cval % p
            for j, exp in enumerate(e):
                if exp:
                    term = uni.mul(term, uni.pow(alpha_c[j + 1], exp))
            out = [(a + b) % p for a, b in zip(out, term)]
        return out

    for rel in alg.relations:
        img = alpha_of_poly(rel)
        assert all(v == 0 for v in img), "alpha does not kill a relation"

    # matrix of alpha on the basis
    mat = []
    for col in alg.basis:
        e = alg.monomials[col]
        term = [0] * W
        term[0] = 1
        for j, exp in enumerate(e):
            if exp:
                term = uni.mul(term, uni.pow(alpha_c[j + 1], exp))
        mat.append(term)
    # Jbar = kernel of alpha (rows = basis images; kernel of transpose)
    dim = alg.dimension
    mat_T = [[mat[i][w] for i in range(dim)] for w in range(W)]
    kern = nullspace(mat_T, p)
    Jbar = [
        AlgebraElement(alg, {alg.basis[i]: v for i, v in enumerate(vec) if v})
        for vec in kern
    ]
    rank_alpha = dim - len(Jbar)

    Ibar = alg.annihilator(Jbar) if Jbar else [
        alg.basis_element(i) for i in range(dim)
    ]

    # Ibar should be the ideal generated by c_d^(Nbar_{k-1})
    Nbar_prev = params.Nbar(k - 1) if k >= 1 else 0
    t_gen = alg.euler() ** Nbar_prev
    ideal_t = alg.ideal_span([t_gen])
    ibar_ok = alg.same_subspace(Ibar, ideal_t) and len(Ibar) == len(ideal_t)

    prod_zero = all((x * y).is_zero() for x in Ibar for y in Jbar)

    # free rank one: z + Jbar -> z * t_gen is a bijection onto Ibar
    quot_basis = []
    ech = alg.subspace_span(Jbar)
    for i in range(dim):
        el = alg.basis_element(i)
        if ech.insert(sorted(el.vec.items())):
            quot_basis.append(el)
    images = [el * t_gen for el in quot_basis]
    img_rank = alg.subspace_span(images).rank
    free_ok = img_rank == len(Ibar) == len(quot_basis) == Nk

    # image of c_{p^k} is +-s with s^(N_k - 1) != 0 = s^(N_k)
    s_img = alpha_c[d]
    sign_ok = False
    for sgn in (1, p - 1):
        cand = [v * sgn % p for v in s_img]
        if cand[p**k] and all(cand[i] == 0 for i in range(p**k)):
            sign_ok = True
    s_pow = uni.pow(s_img, Nk - 1)
    s_pow_next = uni.mul(s_pow, s_img)
    quotient_ok = any(s_pow) and not any(s_pow_next)

    report = IndecomposablesReport(
        dim_algebra=dim,
        dim_Jbar=len(Jbar),
        dim_quotient=rank_alpha,
        dim_Ibar=len(Ibar),
        ibar_generated_by_power=ibar_ok,
        ibar_times_jbar_zero=prod_zero,
        free_rank_one=free_ok,
        image_of_top_chern_ok=sign_ok,
        quotient_truncated_poly_ok=quotient_ok,
    )
    return Jbar, Ibar, report


# -- the integral Q-ring ---------------------------------------------------


@dataclass
class QRingPresentation:
    params: ChromaticParams
    k: int
    precision: int
    modulus_poly: list[int]  # monic Weierstrass polynomial h, ambient = Z/p^a[x]/h
    s_element: list[int]  # s reduced mod h
    g_coeffs: list[int]  # g_k(t) = t^(N_k) + sum g_coeffs[i] t^i
    Nk: int

    def g_of_zero(self) -> int:
        return self.g_coeffs[0]


def _weierstrass_monic(series: TruncatedSeries, p: int, a: int, W: int) -> list[int]:
    """The monic degree-W polynomial h with (h) = (series) in Z/p^a[[x]],
    by digitwise-in-p division of x^W by the series: x^W = q*f + r with
    deg r < W, then h = x^W - r = q*f with q a unit.

    Mod p the divisor is x^W * (unit), so each digit's remainder is just
    the part of the current residual below degree W; the quotient digit
    is the rest shifted down and multiplied by the inverse unit.  Dropped
    tails beyond the stored order never flow back down in degree, so the
    remainder digits are exact (the order must be about (a+1)*W)."""
    modulus = p**a
    M = series.order
    f = [c % modulus for c in series.c]
    assert M > (a + 1) * W, "series order too small for exact division"
    assert all(f[i] % p == 0 for i in range(W)), "lower coefficients not in (p)"
    assert f[W] % p != 0, "leading coefficient not a unit"
    v_inv_p = TruncatedSeries(
        PrimeField(p), M, [x % p for x in f[W:]]
    ).reciprocal().c
    G = [0] * M
    G[W] = 1
    r = [0] * W
    for digit in range(a):
        pk = p**digit
        assert all(c % pk == 0 for c in G), "division lost exactness"
        Gp = [(c // pk) % p for c in G]
        r_digit = Gp[:W]
        q_digit = [0] * M
        for i, gv in enumerate(Gp[W:]):
            if not gv:
                continue
            for j in range(M - i):
                if v_inv_p[j]:
                    q_digit[i + j] = (q_digit[i + j] + gv * v_inv_p[j]) % p
        for i, c in enumerate(r_digit):
            r[i] = (r[i] + pk * c) % modulus
        # G -= pk * (r_digit + q_digit * f); mod p this equals Gp
        upd = [0] * M
        for i, c in enumerate(r_digit):
            upd[i] = c
        for i, qv in enumerate(q_digit):
            if not qv:
                continue
            for j in range(M - i):
                if f[j]:
                    upd[i + j] = (upd[i + j] + qv * f[j]) % modulus
        for i in range(M):
            G[i] = (G[i] - pk * upd[i]) % modulus
    h = [(-c) % modulus for c in r] + [1]
    return h


class _MonicQuotient:
    """Z/p^a[x]/h(x) with h monic of degree W: free, rank W."""

    def __init__(self, h: list[int], p: int, a: int):
        self.h = h
        self.W = len(h) - 1
        self.p = p
        self.modulus = p**a

    def reduce(self, poly: list[int]) -> list[int]:
        poly = [c % self.modulus for c in poly]
        for m in range(len(poly) - 1, self.W - 1, -1):
            c = poly[m]
            if c:
                poly[m] = 0
                for j in range(self.W):
                    poly[m - self.W + j] = (
                        poly[m - self.W + j] - c * self.h[j]
                    ) % self.modulus
        out = poly[: self.W]
        out += [0] * (self.W - len(out))
        return out

    def mul(self, x: list[int], y: list[int]) -> list[int]:
        prod = [0] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b:
                    prod[i + j] = (prod[i + j] + a * b) % self.modulus
        return self.reduce(prod)


def q_ring(params: ChromaticParams, k: int, precision: int) -> QRingPresentation:
    """The indecomposable ring over Z/p^a: ambient Z/p^a[x]/f_k(x) with
    f_k = <p>([p^(r+k-1)]) (k >= 1) or [p^r] (k = 0); s = the product of
    the orbit series; g_k = the monic minimal relation of s, found by
    linear algebra with p-adic lifting."""
    p, a = params.p, precision
    Nk = params.N(k)
    W = p**k * Nk
    order = (a + 2) * W + 2
    fgl = FglContext(params, order=order, mode=MODE_MODPA, precision=a)
    if k == 0:
        f = fgl.m_series(p**params.r).series
    else:
        f = fgl.divided_p_series(k)[1].series
    assert f.wdegree() == W, f"Weierstrass degree {f.wdegree()} != {W}"
    h = _weierstrass_monic(f, p, a, W)
    amb = _MonicQuotient(h, p, a)
    # factors at full stored order: reduction mod h folds high powers of
    # x back down, and the tail beyond the order is divisible by p^a
    s = [1]
    for i in range(p**k):
        s = amb.mul(s, fgl.m_series(params.q**i).series.c)
    s = amb.reduce(s + [0] * (amb.W - len(s)))
    # s is a unit multiple of x^(p^k) mod (p, x^(p^k + 1))
    assert s[p**k] % p != 0 and all(c % p == 0 for c in s[: p**k])
    # minimal monic relation at degree N_k
    powers = [[1] + [0] * (amb.W - 1)]
    for _ in range(Nk):
        powers.append(amb.mul(powers[-1], s))
    mat = [[powers[i][w] for i in range(Nk)] for w in range(amb.W)]
    rhs = [(-powers[Nk][w]) % amb.modulus for w in range(amb.W)]
    mat_p = [[v % p for v in row] for row in mat]
    assert rank(mat_p, p) == Nk, "powers of s dependent below N_k"
    coeffs = solve_mod_prime_power(mat, rhs, p, a)
    # Weierstrass degree of g_k is N_k: lower coefficients in (p)
    assert all(c % p == 0 for c in coeffs), "g_k not Weierstrass of degree N_k"
    if k >= 1:
        # for k = 0 the relation is the p^r-series itself, which vanishes
        # at 0; only the k >= 1 quotients have constant term unit * p
        g0 = coeffs[0]
        assert g0 % p == 0 and (g0 // p) % p != 0, "g_k(0) not unit * p"
    return QRingPresentation(
        params=params,
        k=k,
        precision=a,
        modulus_poly=h,
        s_element=s,
        g_coeffs=coeffs,
        Nk=Nk,
    )


# -- the divisor relation --------------------------------------------------


def divisor_relation_check(alg: QuotientAlgebra, with_witness: bool = False):
    """prod_{k=1..d} [q^k - 1](x) = 0 in alg[x]/f(x),
    f(t) = sum_i c_i t^(d-i).  Returns (holds, witness)."""
    params, d = alg.params, alg.d
    if d == 0:
        return True, None
    if not alg.saturated:
        raise UnsaturatedAlgebraError("needs a saturated algebra")
    p = params.p

    # elements of E = alg[x]/f are lists of d algebra elements
    cs = [alg.from_terms({}) for _ in range(d)]
    chern = [alg.gen(i) for i in range(d)]

    def x_times(vec):
        top = vec[d - 1]
        out = [alg.zero()] + vec[: d - 1]
        if not top.is_zero():
            for i in range(1, d + 1):
                out[d - i] = out[d - i] - top * chern[i - 1]
        return out

    # powers of x until nilpotent
    powers = []
    cur = [alg.zero()] * d
    cur[0] = alg.one()
    limit = d * (alg.bound + 2)
    while any(not c.is_zero() for c in cur):
        powers.append(cur)
        if len(powers) > limit:
            raise FrobeniusPropertyError("x not nilpotent within the budget")
        cur = x_times(cur)
    nilp = len(powers)

    fglc = FglContext(params, order=nilp + 1, mode=MODE_MODP)

    def series_at_x(coeffs):
        out = [alg.zero()] * d
        for m, c in enumerate(coeffs[:nilp]):
            if c:
                for j in range(d):
                    out[j] = out[j] + powers[m][j].scale(c)
        return out

    def e_mul(u, v):
        out = [alg.zero()] * d
        for jj in range(d):
            if v[jj].is_zero():
                continue
            shifted = u
            for _ in range(jj):
                shifted = x_times(shifted)
            for ii in range(d):
                out[ii] = out[ii] + shifted[ii] * v[jj]
        return out

    prod = [alg.zero()] * d
    prod[0] = alg.one()
    for kk in range(1, d + 1):
        val = series_at_x(fglc.m_series(params.q**kk - 1).series.c)
        prod = e_mul(prod, val)
    holds = all(c.is_zero() for c in prod)
    witness = None
    if not holds and with_witness:
        witness = [c.coordinates() for c in prod]
    return holds, witness


# -- disk cache for built algebras -----------------------------------------


def store_algebra(alg: QuotientAlgebra, cache_dir: str) -> str:
    payload = {
        "p": alg.params.p,
        "n": alg.params.n,
        "r": alg.params.r,
        "q": alg.params.q,
        "d": alg.d,
        "bound": alg.bound,
        "dimension": alg.dimension,
        "saturated": alg.saturated,
        "basis": [list(alg.monomials[c]) for c in alg.basis],
        "rows": {
            str(lead): sorted((c, v) for c, v in row)
            for lead, row in alg.ech.pivot_rows.items()
        },
    }
    key = diskcache.cache_key(alg.params, alg.d, alg.bound)
    return diskcache.store(cache_dir, key, payload)


def load_algebra(
    params: ChromaticParams, d: int, bound: int, cache_dir: str
) -> QuotientAlgebra | None:
    payload = diskcache.load(cache_dir, diskcache.cache_key(params, d, bound))
    if payload is None:
        return None
    alg = QuotientAlgebra.__new__(QuotientAlgebra)
    FiniteAlgebra.__init__(alg, params, d, tuple(range(1, d + 1)), bound)
    alg.fgl = FglContext(params, order=bound + 2, mode=MODE_MODP)
    alg.relations = alg._relations()
    for lead, row in payload["rows"].items():
        alg.ech.pivot_rows[int(lead)] = [tuple(t) for t in row]
    alg._finish()
    alg.saturated = payload["saturated"]
    if alg.dimension != payload["dimension"]:
        return None
    return alg
