"""Rewriting symmetric polynomials in the elementary symmetric basis.

Classical leading-term subtraction: the grlex-leading monomial of a
symmetric polynomial has weakly decreasing exponents (l1 >= l2 >= ...),
and is killed by subtracting c * e_1^(l1-l2) e_2^(l2-l3) ... e_d^(ld).
Variables of the output poly are e_1..e_d with weights 1..d.
"""

from __future__ import annotations

from .multipoly import MultiPoly


class SymmetryError(ValueError):
    """Input polynomial is not symmetric."""


def elementary_poly(ring, d: int, j: int, bound=None) -> MultiPoly:
    """e_j(x_1..x_d) as a MultiPoly in d unweighted variables."""
    from itertools import combinations

    terms = {}
    for subset in combinations(range(d), j):
        e = [0] * d
        for i in subset:
            e[i] = 1
        terms[tuple(e)] = ring.one
    return MultiPoly(ring, d, terms, bound=bound)


def is_symmetric(poly: MultiPoly) -> bool:
    """Invariance under the transpositions (i, i+1), which generate."""
    d = poly.nvars
    for i in range(d - 1):
        perm = list(range(d))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if poly.permute_vars(perm) != poly:
            return False
    return True


def express_in_elementary(poly: MultiPoly) -> MultiPoly:
    """Rewrite a symmetric polynomial in x_1..x_d as a polynomial in
    e_1..e_d (weights 1..d).  Raises SymmetryError on asymmetric input."""
    if not is_symmetric(poly):
        raise SymmetryError("input is not symmetric")
    d = poly.nvars
    R = poly.ring
    bound = poly.bound
    e_polys = [elementary_poly(R, d, j, bound=bound) for j in range(d + 1)]
    out = MultiPoly(R, d, weights=range(1, d + 1), bound=bound)
    work = poly
    e_power_cache: dict[tuple, MultiPoly] = {
        (0,) * d: MultiPoly.constant(R, d, R.one, bound=bound)
    }

    def e_product(exps: tuple) -> MultiPoly:
        if exps in e_power_cache:
            return e_power_cache[exps]
        # peel one factor to reuse the cache
        j = max(i for i, v in enumerate(exps) if v > 0)
        prev = list(exps)
        prev[j] -= 1
        prod = e_product(tuple(prev)) * e_polys[j + 1]
        e_power_cache[exps] = prod
        return prod

    while not work.is_zero():
        lead_e, lead_c = work.leading()
        lam = sorted(lead_e, reverse=True)
        if list(lead_e) != lam:
            raise SymmetryError(
                f"leading monomial {lead_e} not weakly decreasing; "
                "truncation destroyed symmetry"
            )
        ee = [0] * d
        for i in range(d - 1):
            ee[i] = lam[i] - lam[i + 1]
        ee[d - 1] = lam[d - 1]
        ee = tuple(ee)
        out = out + MultiPoly(
            R, d, {ee: lead_c}, weights=range(1, d + 1), bound=bound
        )
        work = work - e_product(ee).scale(lead_c)
    return out


def substitute_elementary(epoly: MultiPoly, d: int) -> MultiPoly:
    """Inverse direction: plug e_j = e_j(x_1..x_d) back in (test oracle)."""
    R = epoly.ring
    values = [
        elementary_poly(R, d, j + 1, bound=epoly.bound) for j in range(d)
    ]
    return epoly.substitute(values)
