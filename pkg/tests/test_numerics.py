from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from glkth.numerics import (
    ChromaticParams,
    NkTable,
    ParameterError,
    UndefinedValuationError,
    digit_sum,
    gauss_binom,
    gl_order,
    gl_order_valuation,
    nk_table,
    poincare_series,
    vp,
)

P311 = ChromaticParams(p=3, n=1, r=1, q=4)
P321 = ChromaticParams(p=3, n=2, r=1, q=4)
P312 = ChromaticParams(p=3, n=1, r=2, q=19)
P511 = ChromaticParams(p=5, n=1, r=1, q=11)


def test_vp_examples():
    assert vp(63, 3) == 2  # 63 = 9*7
    assert vp(1, 5) == 0
    assert vp(4**3 - 1, 3) == 2  # r + v_3(3) with q=4, r=1


def test_vp_zero_error():
    with pytest.raises(UndefinedValuationError):
        vp(0, 3)


@given(st.integers(min_value=1, max_value=10**6), st.sampled_from([3, 5, 7]))
def test_vp_against_factor_oracle(m, p):
    # oracle: strip factors one at a time
    e, rest = 0, m
    while rest % p == 0:
        rest //= p
        e += 1
    assert vp(m, p) == e
    assert rest * p**e == m and rest % p != 0


@pytest.mark.parametrize("params,J", [(P311, 60), (P312, 50), (P511, 50)])
def test_vp_geometric_lemma(params, J):
    # v_p(q^j - 1) = r + v_p(j) for all j
    for j in range(1, J + 1):
        assert vp(params.q**j - 1, params.p) == params.r + vp(j, params.p)


def test_gl_order_examples():
    assert gl_order(4, 1) == 3
    assert gl_order(4, 3) == 181440
    assert vp(181440, 3) == 4
    assert gl_order(7, 0) == 1


def test_gl_order_brute_force_tiny():
    # |GL_2(F_2)| = 6 and |GL_2(F_3)| = 48, by counting invertible matrices
    def brute(q, d, field):
        import itertools

        count = 0
        for flat in itertools.product(range(q), repeat=d * d):
            m = [list(flat[i * d : (i + 1) * d]) for i in range(d)]
            # determinant mod q for d = 2
            det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % q
            if det:
                count += 1
        return count

    assert gl_order(2, 2) == brute(2, 2, None) == 6
    assert gl_order(3, 2) == brute(3, 2, None) == 48


@pytest.mark.parametrize("params", [P311, P321, P312, P511])
def test_gl_order_valuation_closed_form(params):
    for d in range(31):
        assert (
            vp(gl_order(params.q, d), params.p) if d else 0
        ) == gl_order_valuation(params, d) == d * params.r + (
            d - digit_sum(d, params.p)
        ) // (params.p - 1)


@pytest.mark.parametrize("params", [P311, P321, P511])
def test_block_subgroup_index_coprime_to_p(params):
    # product of GL_{p^i}^{d_i} over base-p digits d_i of d has index
    # coprime to p in GL_d
    p, q = params.p, params.q
    for d in range(1, 31):
        vsub = 0
        dd, i = d, 0
        while dd:
            vsub += (dd % p) * vp(gl_order(q, p**i), p)
            dd //= p
            i += 1
        assert vsub == vp(gl_order(q, d), p)


def test_params_validation():
    with pytest.raises(ParameterError):
        ChromaticParams(p=3, n=1, r=1, q=5)  # 5 != 1 mod 3
    with pytest.raises(ParameterError):
        ChromaticParams(p=3, n=1, r=2, q=4)  # v_3(3) = 1 != 2
    with pytest.raises(ParameterError):
        ChromaticParams(p=4, n=1, r=1, q=5)  # p not prime
    with pytest.raises(ParameterError):
        ChromaticParams(p=2, n=1, r=1, q=5)  # p must be odd
    with pytest.raises(ParameterError):
        ChromaticParams(p=3, n=1, r=1, q=12)  # q not a prime power
    with pytest.raises(ParameterError):
        ChromaticParams(p=3, n=1, r=1, q=27)  # q = 0 mod p


def test_nk_values_311():
    t = nk_table(P311, 6)
    assert t.N[:3] == [3, 2, 2]
    assert t.Nbar[:3] == [3, 5, 7]
    assert t.Nstar[1] == 5 - 3 ** (1 + 1 - 1) == 2


def test_nk_values_321():
    t = nk_table(P321, 4)
    assert t.N[0] == 9 and t.N[1] == 24


def test_nk_identity_B_instance():
    # sum_{j<=1} p^j N_j = 3 + 3*2 = 9 = p^{n(r+1)} at (3,1,1)
    t = nk_table(P311, 2)
    assert 3 + 3 * 2 == 9 == 3 ** (1 * (1 + 1))
    assert sum(3**j * t.N[j] for j in range(2)) == 9


@pytest.mark.parametrize("params", [P311, P312, P321, P511])
def test_nk_identities_through_k8(params):
    NkTable(params, 8)  # constructor asserts (A)-(E)


def brute_poincare(params, tmax):
    # oracle: multiply the factors as explicit Fraction series
    coeffs = [Fraction(1)] + [Fraction(0)] * tmax
    k = 0
    while params.p**k <= tmax:
        step = params.p**k
        N = params.N(k)
        # (1-t^step)^-N expanded by iterated geometric series
        factor = [Fraction(0)] * (tmax + 1)
        # coefficient of t^(step*j) is C(N-1+j, j)
        j = 0
        while step * j <= tmax:
            num = 1
            den = 1
            for i in range(j):
                num *= N + i
                den *= i + 1
            factor[step * j] = Fraction(num, den)
            j += 1
        coeffs = [
            sum(coeffs[i] * factor[m - i] for i in range(m + 1))
            for m in range(tmax + 1)
        ]
        k += 1
    return [int(c) for c in coeffs]


def test_poincare_311():
    assert poincare_series(P311, 4) == [1, 3, 6, 12, 21]
    assert poincare_series(P311, 0) == [1]


def test_poincare_321():
    assert poincare_series(P321, 3) == [1, 9, 45, 189]


@pytest.mark.parametrize("params,tmax", [(P311, 12), (P321, 8), (P511, 10)])
def test_poincare_against_binomial_oracle(params, tmax):
    assert poincare_series(params, tmax) == brute_poincare(params, tmax)


def test_gauss_binom_examples():
    assert gauss_binom(2, 1, 4) == 5
    assert gauss_binom(3, 0, 2) == 1
    assert gauss_binom(5, 0, 9) == 1
    assert gauss_binom(3, 1, 2) == 7
    assert gauss_binom(1, 2, 3) == 0


@pytest.mark.parametrize("Q", [2, 3, 4, 5])
def test_gauss_binom_q_pascal(Q):
    # [m a]_Q = [m-1 a-1]_Q + Q^a [m-1 a]_Q
    for m in range(1, 8):
        for a in range(0, m + 1):
            lhs = gauss_binom(m, a, Q)
            rhs = gauss_binom(m - 1, a - 1, Q) + Q**a * gauss_binom(m - 1, a, Q)
            assert lhs == rhs
            assert gauss_binom(m, a, Q) == gauss_binom(m, m - a, Q)


@given(
    st.integers(min_value=0, max_value=9),
    st.integers(min_value=0, max_value=9),
    st.sampled_from([2, 3, 4, 5, 7]),
)
def test_gauss_binom_positive(m, a, Q):
    v = gauss_binom(m, a, Q)
    assert v >= 0
    if 0 <= a <= m:
        assert v >= 1
