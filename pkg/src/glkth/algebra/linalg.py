"""Linear algebra over F_p and Z/p^a.

The quotient-ring builder needs row echelon form of a large sparse
integer matrix over F_p with a deterministic pivot order (columns are
monomials in grlex order; the pivot of a row is its largest column).
Rows are sorted (col, coeff) lists; subtraction is a linear merge.

Dense helpers cover kernels and solves at quotient-algebra scale, and a
p-adic digit-lifting solver handles the Z/p^a systems of the q-ring
construction (unique solutions certified by full column rank mod p).
"""

from __future__ import annotations


def _merge_scaled(row_a, row_b, c, p):
    """row_a + c * row_b for sorted (col, coeff) lists (coeffs in [1,p))."""
    out = []
    i = j = 0
    na, nb = len(row_a), len(row_b)
    while i < na and j < nb:
        ca, cb = row_a[i][0], row_b[j][0]
        if ca < cb:
            out.append(row_a[i])
            i += 1
        elif cb < ca:
            out.append((cb, c * row_b[j][1] % p))
            j += 1
        else:
            v = (row_a[i][1] + c * row_b[j][1]) % p
            if v:
                out.append((ca, v))
            i += 1
            j += 1
    out.extend(row_a[i:])
    for col, v in row_b[j:]:
        out.append((col, c * v % p))
    return out


class SparseEchelon:
    """Incremental row echelon over F_p, pivot = largest column.

    Rows are inserted one at a time; each is reduced against existing
    pivot rows (largest-column-first), normalized monic, and stored.
    Deterministic given insertion order.
    """

    def __init__(self, p: int):
        self.p = p
        self.pivot_rows: dict[int, list] = {}  # leading col -> sorted row

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row) -> list:
        """Reduce a sorted (col, coeff) row by leading-term cancellation
        only (enough for membership tests and rank)."""
        p = self.p
        row = [(c, v % p) for c, v in row if v % p]
        row.sort()
        while row:
            lead, v = row[-1]
            piv = self.pivot_rows.get(lead)
            if piv is None:
                return row
            row = _merge_scaled(row, piv, p - v, p)
        return row

    def insert(self, row) -> bool:
        """Insert a row; returns True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        lead, v = row[-1]
        inv = pow(v, -1, self.p)
        if inv != 1:
            row = [(c, inv * w % self.p) for c, w in row]
        self.pivot_rows[lead] = row
        return True

    def normal_form(self, row) -> dict:
        """Canonical coset representative supported on non-pivot columns."""
        p = self.p
        row = self.reduce(row)
        out = {}
        while row:
            lead, v = row[-1]
            piv = self.pivot_rows.get(lead)
            if piv is None:
                out[lead] = v
                row = row[:-1]
            else:
                row = _merge_scaled(row, piv, p - v, p)
        return out

    def standard_columns(self, ncols: int) -> list[int]:
        return [c for c in range(ncols) if c not in self.pivot_rows]


# -- dense helpers -------------------------------------------------------


def dense_echelon(mat: list[list[int]], p: int):
    """In-place RREF; returns pivot column list.  Rows are python ints."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, nrows):
            if mat[i][c] % p:
                sel = i
                break
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = pow(mat[r][c], -1, p)
        mat[r] = [inv * v % p for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] % p:
                f = mat[i][c]
                mat[i] = [(v - f * w) % p for v, w in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def nullspace(mat: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the right kernel of mat over F_p (deterministic)."""
    if not mat:
        return []
    ncols = len(mat[0])
    work = [list(row) for row in mat]
    pivots = dense_echelon(work, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-work[r][fc]) % p
        basis.append(vec)
    return basis


def solve_unique(mat: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """Solve mat @ x = rhs over F_p when the solution exists; returns None
    if inconsistent.  Requires full column rank (asserted)."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    work = [list(row) + [rhs[i] % p] for i, row in enumerate(mat)]
    pivots = dense_echelon(work, p)
    if ncols in pivots:
        return None  # pivot in augmented column: inconsistent
    assert len(pivots) == ncols, "matrix does not have full column rank"
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = work[r][ncols] % p
    return x


def rank(mat: list[list[int]], p: int) -> int:
    work = [list(row) for row in mat]
    return len(dense_echelon(work, p))


def solve_mod_prime_power(
    mat: list[list[int]], rhs: list[int], p: int, a: int
) -> list[int]:
    """Solve mat @ x = rhs over Z/p^a by digit lifting.

    mat must have full column rank mod p, which makes the solution unique;
    each digit is a consistent F_p solve and the final residual is checked.
    """
    modulus = p**a
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    x = [0] * ncols
    residual = [v % modulus for v in rhs]
    for digit in range(a):
        pk = p**digit
        assert all(v % pk == 0 for v in residual), "inconsistent lift"
        red = [(v // pk) % p for v in residual]
        xd = solve_unique(mat, red, p)
        assert xd is not None, "no solution mod p"
        for j in range(ncols):
            x[j] = (x[j] + pk * xd[j]) % modulus
        residual = [
            (rhs[i] - sum(mat[i][j] * x[j] for j in range(ncols))) % modulus
            for i in range(nrows)
        ]
    assert all(v == 0 for v in residual), "lifting failed"
    return x
