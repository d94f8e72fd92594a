"""Exact integer and rational linear algebra on small dense matrices.

Matrices are lists of rows, rows are lists of Python ints (Fractions in the
rational helpers).  Everything is exact; no floating point enters here.  The
workhorses are a row-style Hermite normal form with optional transform
tracking, integer kernels and lattice saturation derived from it, and the
coset decomposition used to pick integral (or p-integral) representatives
modulo a saturated lattice.

Conventions:
  * HNF is row-style and canonical: pivots positive, entries above a pivot
    reduced into [0, pivot), rows ordered by pivot column, no zero rows.
  * Kernels are full: the returned rows span {v : v . M = 0} exactly (the
    lattice is saturated by construction), not just a finite-index sublattice.
"""

from bisect import bisect_left
from fractions import Fraction


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _echelonize(rows, track):
    """Bring integer rows to echelon form via unimodular row operations.

    Returns (basis, transform, kernel) where basis rows have strictly
    increasing pivot columns, transform[i] . input = basis[i], and
    kernel rows k satisfy k . input = 0.  transform/kernel are None
    unless track is True.  Together transform+kernel rows extend to a
    unimodular matrix, so the kernel rows span the full left kernel.
    """
    basis = []        # echelon rows, kept sorted by pivot column
    pivcol = []       # pivot column of each basis row
    tbasis = [] if track else None
    kernel = [] if track else None
    nrows = len(rows)
    for idx, row0 in enumerate(rows):
        vec = list(row0)
        uvec = [0] * nrows if track else None
        if track:
            uvec[idx] = 1
        n = len(vec)
        j = 0
        while True:
            while j < n and vec[j] == 0:
                j += 1
            if j == n:
                if track:
                    kernel.append(uvec)
                break
            # find basis row with this pivot column, if any
            pos = bisect_left(pivcol, j)
            if pos == len(pivcol) or pivcol[pos] != j:
                basis.insert(pos, vec)
                pivcol.insert(pos, j)
                if track:
                    tbasis.insert(pos, uvec)
                break
            brow = basis[pos]
            a, b = brow[j], vec[j]
            if b % a == 0:
                q = b // a
                for jj in range(j, n):
                    vec[jj] -= q * brow[jj]
                if track:
                    burow = tbasis[pos]
                    for k in range(nrows):
                        uvec[k] -= q * burow[k]
            else:
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                for jj in range(j, n):
                    aa, bb = brow[jj], vec[jj]
                    brow[jj] = x * aa + y * bb
                    vec[jj] = -bg * aa + ag * bb
                if track:
                    burow = tbasis[pos]
                    for k in range(nrows):
                        aa, bb = burow[k], uvec[k]
                        burow[k] = x * aa + y * bb
                        uvec[k] = -bg * aa + ag * bb
            # vec now has a zero at column j; continue reducing
    return basis, pivcol, tbasis, kernel


def _reduce_above(basis, pivcol, tbasis=None):
    """Normalize echelon rows into canonical HNF (in place)."""
    for i in range(len(basis)):
        j = pivcol[i]
        if basis[i][j] < 0:
            basis[i] = [-v for v in basis[i]]
            if tbasis is not None:
                tbasis[i] = [-v for v in tbasis[i]]
        p = basis[i][j]
        for k in range(i):
            q = basis[k][j] // p
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[i])]
                if tbasis is not None:
                    tbasis[k] = [a - q * b for a, b in zip(tbasis[k], tbasis[i])]


def hnf(rows):
    """Canonical row Hermite normal form; zero rows dropped."""
    basis, pivcol, _, _ = _echelonize(rows, track=False)
    _reduce_above(basis, pivcol)
    return [list(r) for r in basis]


def hnf_with_transform(rows):
    """Return (H, U, K): H canonical HNF, U[i].rows = H[i], K spans left kernel."""
    basis, pivcol, tbasis, kernel = _echelonize(rows, track=True)
    _reduce_above(basis, pivcol, tbasis)
    return basis, tbasis, kernel


def left_kernel(rows):
    """Basis (canonical HNF) of {v in Z^r : v . rows = 0}; full/saturated."""
    if not rows:
        return []
    _, _, _, kernel = _echelonize(rows, track=True)
    return hnf(kernel)


def transpose(rows, ncols):
    return [[row[j] for row in rows] for j in range(ncols)]


def right_kernel(rows, ncols):
    """Basis (canonical HNF) of {x in Z^ncols : rows . x = 0}; full/saturated."""
    if not rows:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    return left_kernel(transpose(rows, ncols))


def saturate(rows, ncols):
    """Saturation (Q-span intersected with Z^ncols) of the row lattice."""
    if not rows:
        return []
    return right_kernel(right_kernel(rows, ncols), ncols)


def hnf_contains(hnf_rows, vec):
    """Membership of an integer vector in the lattice spanned by HNF rows."""
    v = list(vec)
    for row in hnf_rows:
        j = next(k for k, a in enumerate(row) if a)
        if v[j] % row[j]:
            return False
        q = v[j] // row[j]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def hnf_coords(hnf_rows, vec):
    """Integer coordinates of vec on the HNF rows, or None if not a member."""
    v = list(vec)
    coords = []
    for row in hnf_rows:
        j = next(k for k, a in enumerate(row) if a)
        if v[j] % row[j]:
            return None
        q = v[j] // row[j]
        coords.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return coords


def bareiss_det(rows):
    """Determinant of a square integer matrix (fraction-free elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def lattice_index(sub_hnf, super_hnf):
    """Index [super : sub] for lattices of equal rank, sub contained in super."""
    if len(sub_hnf) != len(super_hnf):
        raise ValueError("lattices have different ranks")
    coords = []
    for row in sub_hnf:
        c = hnf_coords(super_hnf, row)
        if c is None:
            raise ValueError("sub-lattice is not contained in super-lattice")
        coords.append(c)
    return abs(bareiss_det(coords))


def solve_upper_triangular(mat, rhs):
    """Solve y . mat = rhs for square mat with nonzero diagonal, exact."""
    n = len(mat)
    y = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(rhs[i])
        for k in range(i + 1, n):
            s -= y[k] * mat[k][i]
        y[i] = s / mat[i][i]
    return y


def coset_reduce(sat_hnf, vec):
    """Canonical representative of vec modulo the saturated lattice (HNF rows).

    The representative is supported on the non-pivot columns; because the
    lattice is saturated, its coordinates there decide exactly whether the
    coset contains an integral (resp. p-integral) vector.
    """
    if not sat_hnf:
        return [Fraction(v) for v in vec]
    pivots = [next(k for k, a in enumerate(row) if a) for row in sat_hnf]
    # alpha . B restricted to pivot columns is upper triangular
    tri = [[row[p] for p in pivots] for row in sat_hnf]
    rhs = [Fraction(vec[p]) for p in pivots]
    alpha = solve_upper_triangular(tri, rhs)
    rep = [Fraction(v) for v in vec]
    for a, row in zip(alpha, sat_hnf):
        if a:
            rep = [r - a * b for r, b in zip(rep, row)]
    for p in pivots:
        assert rep[p] == 0
    return rep


def gauss_solve(mat, rhs):
    """Solve mat . x = rhs exactly over Q.  mat is m x n (rows), rhs length m.

    Returns one solution (free variables set to 0) or None if inconsistent.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    a = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    piv_of_col = {}
    r = 0
    for c in range(n):
        p = None
        for i in range(r, m):
            if a[i][c]:
                p = i
                break
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        piv_of_col[c] = r
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n]:
            return None
    x = [Fraction(0)] * n
    for c, i in piv_of_col.items():
        x[c] = a[i][n]
    return x
