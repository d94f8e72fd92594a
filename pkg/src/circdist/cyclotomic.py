"""Exact arithmetic in the tower of cyclotomic fields Q(zeta_n).

Elements are dense rational coefficient vectors on the power basis
1, z, ..., z^(phi(n)-1) of Q(zeta_n), reduced modulo the n-th cyclotomic
polynomial.  The compatible-system convention is zeta_(mn)^m = zeta_n, so
coercion up a level sends z_n^i to z_m^((m/n) i) and coercion down verifies
subfield membership exactly instead of assuming it.

Heavy products go through integer convolution (common denominators are
cleared first), and exponent folding uses z^n = 1 before the table reduction
against Phi_n, so levels in the several hundreds stay cheap.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from . import polys
from .intlinalg import gauss_solve


class LevelError(ValueError):
    """Level precondition violated (mismatch, non-divisibility, n < 1)."""


class SubfieldError(ArithmeticError):
    """A norm or coercion result failed the exact subfield-membership check."""


class PrecisionError(ArithmeticError):
    """Certified interval evaluation could not separate a sign from zero."""


@lru_cache(maxsize=None)
class _LevelCtx:
    """Per-level tables: cyclotomic polynomial and power-reduction rows."""

    def __init__(self, n):
        self.n = n
        self.phi_poly = polys.cyclotomic_polynomial(n)
        self.degree = len(self.phi_poly) - 1
        red = {}
        if self.degree < n:
            row = [-c for c in self.phi_poly[:-1]]
            red[self.degree] = tuple(row)
            for j in range(self.degree + 1, n):
                top = row[-1]
                row = [0] + row[:-1]
                if top:
                    for i in range(self.degree):
                        row[i] -= top * self.phi_poly[i]
                red[j] = tuple(row)
        self.reduction = red
        self._pi_inverse = None

    def reduce_int_vec(self, vec):
        """Reduce an integer coefficient vector of any length mod Phi_n."""
        n, deg = self.n, self.degree
        folded = [0] * min(len(vec), n)
        for j, c in enumerate(vec):
            if c:
                folded[j % n] += c
        out = folded[:deg] + [0] * (deg - len(folded))
        for j in range(deg, len(folded)):
            c = folded[j]
            if c:
                row = self.reduction[j]
                for i in range(deg):
                    out[i] += c * row[i]
        return out


def euler_phi(n):
    return polys.euler_phi(n)


def cyclotomic_polynomial_coeffs(n):
    """Little-endian integer coefficients of the n-th cyclotomic polynomial
    (monic, degree phi(n))."""
    return polys.cyclotomic_polynomial(n)


def _clear_denominators(coeffs):
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    return [int(c * den) for c in coeffs], den


@dataclass(frozen=True)
class CycElt:
    """Element of Q(zeta_level) on the power basis; immutable value."""

    level: int
    coeffs: tuple

    def __post_init__(self):
        if self.level < 1:
            raise LevelError("level must be >= 1")
        if len(self.coeffs) != euler_phi(self.level):
            raise ValueError("coefficient vector has wrong length")

    # -- ring operations ---------------------------------------------------

    def _binop_check(self, other):
        if not isinstance(other, CycElt):
            other = from_rational(self.level, other)
        if other.level != self.level:
            raise LevelError("level mismatch: %d vs %d" % (self.level, other.level))
        return other

    def __add__(self, other):
        other = self._binop_check(other)
        return CycElt(self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        other = self._binop_check(other)
        return CycElt(self.level, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CycElt(self.level, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycElt(self.level, tuple(a * q for a in self.coeffs))
        other = self._binop_check(other)
        ctx = _LevelCtx(self.level)
        na, da = _clear_denominators(self.coeffs)
        nb, db = _clear_denominators(other.coeffs)
        prod = polys.int_poly_mul(na, nb)
        red = ctx.reduce_int_vec(prod)
        d = da * db
        return CycElt(self.level, tuple(Fraction(c, d) for c in red))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return inverse(self) ** (-k)
        result = one(self.level)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def denominator_lcm(self):
        d = 1
        for c in self.coeffs:
            d = lcm(d, c.denominator)
        return d

    def is_integral(self):
        return self.denominator_lcm() == 1


def from_rational(n, q):
    q = Fraction(q)
    return CycElt(n, (q,) + (Fraction(0),) * (euler_phi(n) - 1))


def one(n):
    return from_rational(n, 1)


def zero(n):
    return from_rational(n, 0)


def zeta(n):
    """The distinguished primitive n-th root (exponent convention z_n)."""
    ctx = _LevelCtx(n)
    vec = [0] * euler_phi(n)
    if 1 < ctx.degree or n == 1:
        # z reduces to itself for degree > 1; level 1 has z = 1
        if n == 1:
            vec[0] = 1
        else:
            vec[1] = 1
    else:
        # degree 1 and n = 2: z = -1
        vec = ctx.reduce_int_vec([0, 1])
    return CycElt(n, tuple(Fraction(c) for c in vec))


def zeta_power(n, k):
    ctx = _LevelCtx(n)
    vec = [0] * n
    vec[k % n] = 1
    red = ctx.reduce_int_vec(vec)
    return CycElt(n, tuple(Fraction(c) for c in red))


# ---------------------------------------------------------------------------
# Galois action


@dataclass(frozen=True)
class GaloisElt:
    """Automorphism z_n -> z_n^a of Q(zeta_n); a is a unit mod n."""

    level: int
    a: int

    def __post_init__(self):
        n = self.level
        if n < 1:
            raise LevelError("level must be >= 1")
        if n > 1 and (not 1 <= self.a < n or gcd(self.a, n) != 1):
            raise ValueError("a = %d is not a reduced unit mod %d" % (self.a, n))

    def compose(self, other):
        if other.level != self.level:
            raise LevelError("level mismatch")
        n = self.level
        return GaloisElt(n, (self.a * other.a) % n if n > 1 else 1)

    def inverse(self):
        n = self.level
        return GaloisElt(n, pow(self.a, -1, n) if n > 1 else 1)


def tau(n):
    """Complex conjugation at level n."""
    return GaloisElt(n, n - 1 if n > 2 else 1)


def act(g, x):
    """Apply a Galois automorphism (GaloisElt or unit int) to x."""
    a = g.a if isinstance(g, GaloisElt) else g
    n = x.level
    if isinstance(g, GaloisElt) and g.level != n:
        raise LevelError("automorphism level %d does not match element level %d"
                         % (g.level, n))
    a %= n
    if n <= 2 or a == 1:
        return x
    if gcd(a, n) != 1:
        raise ValueError("a = %d is not a unit mod %d" % (a, n))
    nums, den = _clear_denominators(x.coeffs)
    long = [0] * n
    for i, c in enumerate(nums):
        if c:
            long[(i * a) % n] += c
    red = _LevelCtx(n).reduce_int_vec(long)
    return CycElt(n, tuple(Fraction(c, den) for c in red))


def inverse(x):
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero")
    inv = polys.cyclo_inverse(list(x.coeffs), x.level)
    return CycElt(x.level, tuple(inv))


def apply_integer_exponents(x, terms):
    """Product of sigma_a(x)^k over (a, k) pairs with integer k (any sign)."""
    n = x.level
    pos = one(n)
    xinv = None
    for a, k in terms:
        if k == 0:
            continue
        base = act(a, x)
        if k < 0:
            if xinv is None:
                xinv = inverse(x)
            base = act(a, xinv)
            k = -k
        pos = pos * base ** k
    return pos


# ---------------------------------------------------------------------------
# level coercion and norms


def raise_level(x, m):
    """Embed x into Q(zeta_m) for a multiple m of x.level (z_n = z_m^(m/n))."""
    n = x.level
    if m == n:
        return x
    if m % n:
        raise LevelError("%d does not divide %d" % (n, m))
    step = m // n
    nums, den = _clear_denominators(x.coeffs)
    long = [0] * m
    for i, c in enumerate(nums):
        if c:
            long[(i * step) % m] += c
    red = _LevelCtx(m).reduce_int_vec(long)
    return CycElt(m, tuple(Fraction(c, den) for c in red))


def lower_level(x, n):
    """Rewrite x at level n (n | x.level); exact membership check included.

    Writes x on the basis z_m^j z_n^i (j < phi(m)/phi(n), i < phi(n)) and
    demands that every j != 0 block vanishes.
    """
    m = x.level
    if m == n:
        return x
    if m % n:
        raise LevelError("%d does not divide %d" % (n, m))
    d = m // n
    phim, phin = euler_phi(m), euler_phi(n)
    big = phim // phin
    ctx = _LevelCtx(m)
    # exponents e = j + d*i, all distinct and < m
    unit_of_coord = {}
    dense = []           # (pair index, exponent)
    pairs = []
    for j in range(big):
        for i in range(phin):
            e = j + d * i
            pairs.append((j, i, e))
            if e < phim:
                unit_of_coord[e] = len(pairs) - 1
            else:
                dense.append((len(pairs) - 1, e))
    coeffs = {}
    if dense:
        rows = []
        rhs = []
        free_coords = [k for k in range(phim) if k not in unit_of_coord]
        assert len(free_coords) == len(dense)
        for k in free_coords:
            rows.append([Fraction(ctx.reduction[e][k]) for _, e in dense])
            rhs.append(x.coeffs[k])
        sol = gauss_solve(rows, rhs)
        if sol is None:
            raise SubfieldError("element is not in the level-%d subfield" % n)
        for (idx, _), v in zip(dense, sol):
            coeffs[idx] = v
    for k, idx in unit_of_coord.items():
        v = x.coeffs[k]
        for (didx, e) in dense:
            c = coeffs[didx]
            if c:
                v -= c * ctx.reduction[e][k]
        coeffs[idx] = v
    out = [Fraction(0)] * phin
    for (j, i, _), idx in zip(pairs, range(len(pairs))):
        c = coeffs.get(idx, Fraction(0))
        if j == 0:
            out[i] = c
        elif c:
            raise SubfieldError("element is not in the level-%d subfield" % n)
    return CycElt(n, tuple(out))


def relative_galois_group(m, n):
    """Units a mod m with a = 1 (mod n): Gal(Q(m)/Q(n)) under the convention."""
    if m % n:
        raise LevelError("%d does not divide %d" % (n, m))
    if n <= 2:
        return [a for a in range(1, m + 1) if gcd(a, m) == 1] if m > 1 else [1]
    return [a for a in range(1, m) if gcd(a, m) == 1 and a % n == 1]


def norm_down(x, n):
    """Field norm from level x.level to level n (n | x.level), verified."""
    m = x.level
    if m % n:
        raise LevelError("%d does not divide %d" % (n, m))
    prod = one(m)
    for a in relative_galois_group(m, n):
        prod = prod * act(a % m if m > 1 else 1, x)
    return lower_level(prod, n)


def sigma_ell(ell, n):
    """The automorphism acting trivially on the ell-part of level n and as
    the inverse Frobenius on the prime-to-ell part (CRT construction)."""
    if n <= 2:
        return GaloisElt(n, 1)
    q = 1
    while n % (q * ell) == 0:
        q *= ell
    m = n // q
    if m == 1:
        return GaloisElt(n, 1)
    inv = pow(ell % m, -1, m)
    if q == 1:
        return GaloisElt(n, inv % n)
    g, u, v = _xgcd(q, m)
    assert g == 1
    a = (1 * v * m + inv * u * q) % n
    return GaloisElt(n, a)


def _xgcd(a, b):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        qq = g // ng
        x, nx = nx, x - qq * nx
        y, ny = ny, y - qq * ny
        g, ng = ng, g - qq * ng
    return g, x, y


# ---------------------------------------------------------------------------
# residue computations


def reduce_mod_ell(x, ell):
    """Coefficient-wise reduction to F_ell[t]/(Phi_n mod ell); returns the
    little-endian coefficient list of the residue polynomial."""
    for c in x.coeffs:
        if c.denominator % ell == 0:
            raise ValueError("coefficient denominator divisible by %d" % ell)
    return polys.fp_trim([int(c.numerator * pow(c.denominator, -1, ell)) % ell
                          for c in x.coeffs])


def vanishes_at_all_primes_above(x, ell):
    """True iff x lies in every prime of Z[zeta_n] above ell.

    Z[zeta_n] is the maximal order, so primes above ell correspond to the
    distinct irreducible factors of Phi_n mod ell; the test is divisibility
    of the residue by the radical of Phi_n mod ell.
    """
    n = x.level
    res = reduce_mod_ell(x, ell)
    if not res:
        return True
    phi_mod = polys.fp_trim([c % ell for c in polys.cyclotomic_polynomial(n)])
    rad = polys.fp_squarefree_part(phi_mod, ell)
    _, rem = polys.fp_divmod(res, rad, ell)
    return not rem


def _prime_power_split(n):
    ps = polys.prime_factors(n)
    if len(ps) != 1:
        raise LevelError("level %d is not a prime power" % n)
    return ps[0]


def valuation_at_p(x, p):
    """Valuation of nonzero x at the unique prime above p; the level must be
    a power of p and 1 - zeta is the uniformizer."""
    n = x.level
    if n < 2 or _prime_power_split(n) != p:
        raise LevelError("level %d is not a power of %d" % (n, p))
    if x.is_zero():
        raise ZeroDivisionError("valuation of zero")
    den = x.denominator_lcm()
    y = x * den
    vden = 0
    dd = den
    while dd % p == 0:
        dd //= p
        vden += 1
    ctx = _LevelCtx(n)
    if ctx._pi_inverse is None:
        ctx._pi_inverse = inverse(one(n) - zeta(n))
    phi_mod = [c % p for c in ctx.phi_poly]
    v = 0
    while True:
        nums = [int(c) for c in y.coeffs]
        res = polys.fp_trim([c % p for c in nums])
        if polys.fp_resultant(phi_mod, res, p) != 0:
            break
        y = y * ctx._pi_inverse
        assert y.is_integral()
        v += 1
    return v - euler_phi(n) * vden


def norm_to_q(x):
    """Field norm down to Q, as an exact Fraction."""
    return polys.cyclo_norm(list(x.coeffs), x.level)


def is_unit(x):
    """Global unit test: integral coefficients and |norm| = 1."""
    if x.is_zero():
        return False
    if not x.is_integral():
        return False
    return abs(norm_to_q(x)) == 1


def is_p_unit(x, p):
    """p-unit test: integral coefficients and |norm| a power of p."""
    if x.is_zero():
        return False
    if not x.is_integral():
        return False
    nrm = abs(norm_to_q(x))
    val = nrm.numerator
    if nrm.denominator != 1 or val == 0:
        return False
    while val % p == 0:
        val //= p
    return val == 1


# ---------------------------------------------------------------------------
# total positivity (certified)


def plus_reps(n):
    """Representatives min(a, n-a) of the units mod n modulo negation."""
    if n <= 2:
        return [1]
    return sorted({min(a, n - a) for a in range(1, n) if gcd(a, n) == 1})


def _float_embedding_values(x):
    import numpy as np
    n = x.level
    reps = plus_reps(n)
    coeffs = np.array([float(c) for c in x.coeffs])
    idx = np.arange(len(coeffs))
    vals = []
    for c in reps:
        ang = 2.0 * np.pi * ((idx * c) % n) / n
        vals.append(float(np.cos(ang) @ coeffs))
    return reps, vals, float(np.abs(coeffs).sum())


def _interval_embedding_sign(x, c, dps):
    from mpmath import iv
    iv.dps = dps
    n = x.level
    total = iv.mpf(0)
    for i, co in enumerate(x.coeffs):
        if co:
            t = (2 * i * c) % (2 * n)
            angle = iv.pi * t / n
            total += (iv.mpf(co.numerator) / co.denominator) * iv.cos(angle)
    if total > 0:
        return 1
    if total < 0:
        return -1
    return 0


def is_totally_positive(x):
    """True iff every real embedding of the tau-fixed element x is positive.

    Floating screen with a conservative error bound first; any embedding too
    close to zero is re-evaluated with certified interval arithmetic at
    doubling precision.  A nonzero tau-fixed element has no vanishing real
    embedding, so escalation terminates.
    """
    n = x.level
    if x.is_zero():
        raise ZeroDivisionError("total positivity of zero is undefined")
    if act(tau(n), x) != x:
        raise ValueError("element is not fixed by conjugation")
    try:
        reps, vals, scale = _float_embedding_values(x)
        bound = 1e-10 * (1.0 + scale)
        ambiguous = [c for c, v in zip(reps, vals) if abs(v) <= bound]
        if any(v < -bound for v in vals):
            return False
    except OverflowError:
        reps = plus_reps(n)
        ambiguous = list(reps)
        vals = None
    if vals is not None and not ambiguous:
        return True
    for c in (ambiguous if vals is not None else reps):
        sign = 0
        dps = 40
        while dps <= 700:
            sign = _interval_embedding_sign(x, c, dps)
            if sign:
                break
            dps *= 2
        if sign == 0:
            raise PrecisionError("could not separate embedding %d from zero" % c)
        if sign < 0:
            return False
    return True


# ---------------------------------------------------------------------------
# serialization


def _frac_str(q):
    return str(q.numerator) if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)


def cyc_to_json(x):
    return {"level": x.level, "coeffs": [_frac_str(c) for c in x.coeffs]}


def cyc_from_json(obj):
    return CycElt(int(obj["level"]), tuple(Fraction(s) for s in obj["coeffs"]))
