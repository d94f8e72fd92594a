"""Dense polynomial arithmetic over Z, Q and prime fields.

Polynomials are little-endian coefficient lists ([] is the zero polynomial).
Integer multiplication goes through Kronecker substitution (pack into one big
integer, multiply, unpack) so that large cyclotomic levels stay fast; gmpy2
provides the big-integer multiply when available.

Also here: cyclotomic polynomials (with the radical shortcut
Phi_n(x) = Phi_rad(n)(x^(n/rad)) so only squarefree levels recurse), mod-l
polynomial arithmetic used for residue checks, and CRT-based resultants /
inverses modulo a cyclotomic polynomial with exact verification.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

try:
    from gmpy2 import mpz
except ImportError:          # pragma: no cover - gmpy2 is a declared dep
    mpz = int


# ---------------------------------------------------------------------------
# integer polynomials

def trim(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    del a[n:]
    return a


def _kron_pack(a, width):
    # little-endian fixed-width chunks; coefficients must be >= 0
    nbytes = width // 8
    return mpz(int.from_bytes(
        b"".join(int(c).to_bytes(nbytes, "little") for c in a), "little"))


def _kron_unpack(v, width, count):
    nbytes = width // 8
    data = int(v).to_bytes(nbytes * count + nbytes, "little")
    return [int.from_bytes(data[i * nbytes:(i + 1) * nbytes], "little")
            for i in range(count)]


def _nonneg_mul(a, b, width, count):
    if not a or not b:
        return [0] * count
    return _kron_unpack(_kron_pack(a, width) * _kron_pack(b, width), width, count)


def int_poly_mul(a, b):
    """Product of integer coefficient lists."""
    if not a or not b:
        return []
    la, lb = len(a), len(b)
    count = la + lb - 1
    if min(la, lb) < 16:
        out = [0] * count
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out
    amax = max(abs(c) for c in a)
    bmax = max(abs(c) for c in b)
    bound = amax * bmax * min(la, lb) + 1
    width = ((bound.bit_length() + 8) // 8) * 8
    ap = [c if c > 0 else 0 for c in a]
    an = [-c if c < 0 else 0 for c in a]
    bp = [c if c > 0 else 0 for c in b]
    bn = [-c if c < 0 else 0 for c in b]
    pp = _nonneg_mul(ap, bp, width, count)
    nn = _nonneg_mul(an, bn, width, count)
    pn = _nonneg_mul(ap, bn, width, count)
    np_ = _nonneg_mul(an, bp, width, count)
    return [pp[i] + nn[i] - pn[i] - np_[i] for i in range(count)]


def int_poly_divexact(a, b):
    """Quotient a / b of integer polynomials, assuming exact division."""
    a = list(a)
    trim(a)
    db = len(b) - 1
    lead = b[db]
    out = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db]
        if c:
            q, r = divmod(c, lead)
            if r:
                raise ArithmeticError("division is not exact")
            out[i] = q
            for j in range(db + 1):
                a[i + j] -= q * b[j]
    if any(a[:db]):
        raise ArithmeticError("division is not exact")
    return out


def mobius(n):
    m = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            m = -m
        d += 1
    if n > 1:
        m = -m
    return m


def prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(n):
    r = n
    for p in prime_factors(n):
        r -= r // p
    return r


@lru_cache(maxsize=None)
def _cyclotomic_squarefree(n):
    # Phi_n for squarefree n by the quotient recursion on proper divisors
    num = [0] * n + [1]
    num[0] = -1                      # x^n - 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = int_poly_mul(den, cyclotomic_polynomial(d))
    return tuple(int_poly_divexact(num, den))


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients (little-endian) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("level must be >= 1")
    if n == 1:
        return (-1, 1)
    rad = 1
    for p in prime_factors(n):
        rad *= p
    if rad == n:
        return _cyclotomic_squarefree(n)
    base = cyclotomic_polynomial(rad)
    step = n // rad
    out = [0] * ((len(base) - 1) * step + 1)
    for i, c in enumerate(base):
        out[i * step] = c
    return tuple(out)


# ---------------------------------------------------------------------------
# polynomials over a prime field (lists of ints in [0, p))

def fp_trim(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def fp_mul(a, b, p):
    if not a or not b:
        return []
    return fp_trim([c % p for c in int_poly_mul(a, b)])


def fp_divmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError
    inv = pow(b[db], -1, p)
    support = [j for j in range(db + 1) if b[j]]
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = (a[i + db] * inv) % p
        q[i] = c
        if c:
            for j in support:
                a[i + j] = (a[i + j] - c * b[j]) % p
    return fp_trim(q), fp_trim(a[:db])


def fp_gcd(a, b, p):
    a, b = fp_trim(list(a)), fp_trim(list(b))
    while b:
        a, b = b, fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def fp_deriv(a, p):
    return fp_trim([(i * c) % p for i, c in enumerate(a)][1:])


def fp_squarefree_part(a, p):
    """Radical of a over F_p: the monic product of its distinct irreducible
    factors.  Handles multiplicities divisible by p (where a' may vanish)
    by peeling off the p-th-power part and recursing on its p-th root."""
    a = fp_trim(list(a))
    if len(a) <= 1:
        return [1]
    inv = pow(a[-1], -1, p)
    a = [(c * inv) % p for c in a]
    da = fp_deriv(a, p)
    if not da:
        # a = s(x^p) = (s(x))^p by Frobenius; radical(a) = radical(s)
        return fp_squarefree_part(a[::p], p)
    d = fp_gcd(a, da, p)
    if len(d) == 1:
        return a
    w, r = fp_divmod(a, d, p)      # product of factors with multiplicity prime to p
    assert not r
    # strip w-factors from d; what remains is the p-th-power part of a
    y = d
    while True:
        g = fp_gcd(y, w, p)
        if len(g) == 1:
            break
        y, r = fp_divmod(y, g, p)
        assert not r
    if len(y) == 1:
        return w
    return fp_mul(w, fp_squarefree_part(y[::p], p), p)


def fp_resultant(f, g, p):
    """Res(f, g) over F_p by the Euclidean remainder sequence."""
    f, g = fp_trim(list(f)), fp_trim(list(g))
    if not f or not g:
        return 0
    res = 1
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return (res * pow(g[0], df, p)) % p
        _, r = fp_divmod(f, g, p)
        r = fp_trim(r)
        if not r:
            return 0
        dr = len(r) - 1
        res = (res * pow(g[dg], df - dr, p) * pow(-1, df * dg, p)) % p
        f, g = g, r


def fp_powmod(base, e, modulus, p):
    """base^e mod modulus over F_p (e >= 0)."""
    result = [1]
    base = fp_divmod(base, modulus, p)[1]
    while e:
        if e & 1:
            result = fp_divmod(fp_mul(result, base, p), modulus, p)[1]
        e >>= 1
        if e:
            base = fp_divmod(fp_mul(base, base, p), modulus, p)[1]
    return result


# ---------------------------------------------------------------------------
# CRT / rational reconstruction

def is_probable_prime(n):
    """Deterministic Miller-Rabin for n < 3.3 * 10^24 (fixed base set)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_PRIMES = []


def crt_primes():
    """Deterministic, lazily extended pool of 29-bit primes for CRT runs."""
    idx = 0
    while True:
        while idx >= len(_PRIMES):
            cand = _PRIMES[-1] + 2 if _PRIMES else (1 << 29) + 3
            while not is_probable_prime(cand):
                cand += 2
            _PRIMES.append(cand)
        yield _PRIMES[idx]
        idx += 1


def crt_pair(r1, m1, r2, m2):
    x = pow(m1, -1, m2)
    return (r1 + (r2 - r1) * x % m2 * m1) % (m1 * m2)


def symmetric_residue(r, m):
    r %= m
    return r - m if 2 * r > m else r


def rational_reconstruct(a, m):
    """num/den with a*den = num (mod m), |num|, den <= sqrt(m/2), or None."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r1 > bound or abs(s1) > bound or s1 == 0:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


# ---------------------------------------------------------------------------
# resultants and inverses modulo a cyclotomic polynomial, exact via CRT

def int_content_and_primitive(coeffs):
    """(content, primitive numerator, denominator) of a Fraction list."""
    from math import lcm
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    nums = [int(c * den) for c in coeffs]
    g = 0
    for v in nums:
        g = gcd(g, abs(v))
    if g == 0:
        return 0, [], den
    return g, [v // g for v in nums], den


def cyclo_norm(coeffs, n):
    """Field norm from Q(zeta_n) of the element with the given rational
    coefficient vector (length phi(n)), computed as Res(Phi_n, x) by CRT."""
    phi = list(cyclotomic_polynomial(n))
    deg = len(phi) - 1
    content, prim, den = int_content_and_primitive(list(coeffs))
    if content == 0:
        return Fraction(0)
    # |Res(Phi, prim)| <= (sum |prim coeffs|)^deg
    s = sum(abs(c) for c in prim)
    bound = 2 * max(1, s) ** deg + 1
    m = 1
    res = 0
    for p in crt_primes():
        fp = [c % p for c in phi]
        gp = fp_trim([c % p for c in prim])
        rp = fp_resultant(fp, gp, p)
        if m == 1:
            res, m = rp, p
        else:
            res, m = crt_pair(res, m, rp, p), m * p
        if m > bound:
            break
    val = symmetric_residue(res, m)
    return Fraction(val) * Fraction(content, den) ** deg


def cyclo_inverse(coeffs, n):
    """Inverse of a nonzero element of Q(zeta_n) given by rational coefficient
    vector, via CRT modular inverses plus exact verification."""
    phi = list(cyclotomic_polynomial(n))
    degree = len(phi) - 1
    content, prim, den = int_content_and_primitive(list(coeffs))
    if content == 0:
        raise ZeroDivisionError("inverse of zero")
    nprimes = 4
    primes = crt_primes()
    used = []
    residues = []
    while True:
        while len(used) < nprimes:
            p = next(primes)
            fp = [c % p for c in phi]
            gp = fp_trim([c % p for c in prim])
            inv = _fp_inverse_mod(gp, fp, p)
            if inv is None:
                continue
            used.append(p)
            residues.append(inv + [0] * (degree - len(inv)))
        m = 1
        acc = [0] * degree
        for p, vec in zip(used, residues):
            if m == 1:
                acc, m = list(vec), p
            else:
                acc = [crt_pair(a, m, b, p) for a, b in zip(acc, vec)]
                m *= p
        recon = [rational_reconstruct(a, m) for a in acc]
        if all(r is not None for r in recon):
            inv_prim = recon
            # verify prim * inv_prim == 1 mod Phi_n, exactly
            from math import lcm
            d = 1
            for r in inv_prim:
                d = lcm(d, r.denominator)
            nums = [int(r * d) for r in inv_prim]
            prod = int_poly_mul(prim, nums)
            rem = _int_rem_mod_cyclo(prod, phi)
            if rem == [d] + [0] * (degree - 1) or (rem == [d] and degree == 1):
                scale = Fraction(den, content)
                return [r * scale for r in inv_prim]
        nprimes *= 2
        if nprimes > 512:
            raise ArithmeticError("modular inverse reconstruction failed")


def _int_rem_mod_cyclo(a, phi):
    a = list(a)
    db = len(phi) - 1
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db]
        if c:
            for j in range(db + 1):
                a[i + j] -= c * phi[j]
    out = a[:db]
    out += [0] * (db - len(out))
    return out


def _fp_inverse_mod(a, modulus, p):
    """Inverse of a mod modulus over F_p, or None if not coprime."""
    if not a:
        return None
    r0, r1 = list(modulus), list(a)
    s0, s1 = [], [1]
    while r1:
        q, r = fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        qs = fp_mul(q, s1, p)
        s2 = [( (s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0) ) % p
              for i in range(max(len(s0), len(qs)))]
        s0, s1 = s1, fp_trim(s2)
    if len(r0) != 1:
        return None
    inv = pow(r0[0], -1, p)
    return [(c * inv) % p for c in s0]
