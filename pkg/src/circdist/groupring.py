"""Exact algebra in Z[G_n] and Z[G_n^+] for G_n = (Z/n)^x.

Group elements are reduced representatives a with 1 <= a < n (for the plus
quotient, the smaller of {a, n-a}); group-ring elements are sparse maps from
representatives to exact rationals.  Ideal lattices are integer matrices in
canonical Hermite normal form over the fixed coordinate order "ascending
representatives", so two lattices are equal iff their HNF rows are identical.

The annihilator of the totally positive element eps_n = (1-z_n)^(1+tau) is
computed two ways: structurally, as the kernel of multiplication by the
decomposition-group idempotent e_n (with shortcut bases when e_n collapses
to 1 or to 1 - e_H), and analytically, from certified logarithmic embeddings
with exact verification of every kernel vector (the independent oracle).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from . import cyclotomic, intlinalg, polys
from .cyclotomic import CycElt, LevelError, act, one, zeta


class HypothesisNotMetError(ValueError):
    """A stated hypothesis (such as b >= b_0) is not satisfied; the check is
    inapplicable rather than failed."""


class PrecisionError(ArithmeticError):
    """Numeric stage failed and exact verification could not rescue it."""


# ---------------------------------------------------------------------------
# group bookkeeping


@lru_cache(maxsize=None)
def units(n):
    if n <= 2:
        return (1,)
    return tuple(a for a in range(1, n) if gcd(a, n) == 1)


@lru_cache(maxsize=None)
def group_reps(n, plus):
    if n <= 2:
        return (1,)
    if not plus:
        return units(n)
    return tuple(sorted({min(a, n - a) for a in units(n)}))


def canon_rep(a, n, plus):
    if n <= 2:
        return 1
    a %= n
    if gcd(a, n) != 1:
        raise ValueError("%d is not a unit mod %d" % (a, n))
    return min(a, n - a) if plus else a


def rep_index(n, plus):
    reps = group_reps(n, plus)
    return {r: i for i, r in enumerate(reps)}


# ---------------------------------------------------------------------------
# group-ring elements


@dataclass(frozen=True)
class GroupRingElt:
    """Element of Q[G_n] (or Q[G_n^+] when plus): sorted sparse coefficients."""

    level: int
    plus: bool
    coeffs: tuple   # tuple of (rep, Fraction), sorted by rep, zeros dropped

    def as_dict(self):
        return dict(self.coeffs)

    def coefficient(self, a):
        r = canon_rep(a, self.level, self.plus)
        return dict(self.coeffs).get(r, Fraction(0))

    def augmentation(self):
        return sum((c for _, c in self.coeffs), Fraction(0))

    def support(self):
        return tuple(r for r, _ in self.coeffs)

    def is_integral(self):
        return all(c.denominator == 1 for _, c in self.coeffs)

    def denominator_lcm(self):
        d = 1
        for _, c in self.coeffs:
            d = lcm(d, c.denominator)
        return d

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.level != other.level or self.plus != other.plus:
            raise LevelError("group-ring mismatch")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.coeffs)
        for r, c in other.coeffs:
            acc[r] = acc.get(r, Fraction(0)) + c
        return grelt(self.level, self.plus, acc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return GroupRingElt(self.level, self.plus,
                            tuple((r, -c) for r, c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return grelt(self.level, self.plus, {})
            return GroupRingElt(self.level, self.plus,
                                tuple((r, c * q) for r, c in self.coeffs))
        self._check(other)
        n, plus = self.level, self.plus
        acc = {}
        for r1, c1 in self.coeffs:
            for r2, c2 in other.coeffs:
                r = canon_rep(r1 * r2, n, plus)
                acc[r] = acc.get(r, Fraction(0)) + c1 * c2
        return grelt(n, plus, acc)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = identity(self.level, self.plus)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- structure maps ------------------------------------------------------

    def project(self, to_level=None, to_plus=None):
        """Push coefficients along G_m -> G_n and/or G -> G^+."""
        n = self.level if to_level is None else to_level
        plus = self.plus if to_plus is None else to_plus
        if self.level % n:
            raise LevelError("%d does not divide %d" % (n, self.level))
        if self.plus and not plus:
            raise LevelError("cannot lift from the plus quotient")
        acc = {}
        for r, c in self.coeffs:
            rr = canon_rep(r % n if n > 1 else 1, n, plus)
            acc[rr] = acc.get(rr, Fraction(0)) + c
        return grelt(n, plus, acc)

    def to_vector(self):
        idx = rep_index(self.level, self.plus)
        vec = [Fraction(0)] * len(idx)
        for r, c in self.coeffs:
            vec[idx[r]] = c
        return vec

    def act_on(self, x, assume_tau_fixed=False):
        """Multiplicative action x^self; coefficients must be integers.

        A plus-quotient exponent acts through either lift, which is only
        well defined on tau-fixed elements; that is checked unless the
        caller vouches for it.
        """
        if x.level != self.level:
            raise LevelError("level mismatch")
        if not self.is_integral():
            raise ValueError("exponent has non-integer coefficients")
        if self.plus and not assume_tau_fixed:
            if act(cyclotomic.tau(x.level), x) != x:
                raise ValueError("plus-quotient exponent on a non-tau-fixed element")
        terms = [(r, int(c)) for r, c in self.coeffs]
        return cyclotomic.apply_integer_exponents(x, terms)

    def scaled_integral(self):
        """(d, d*self) with d the smallest positive integer clearing denominators."""
        d = self.denominator_lcm()
        return d, self * d


def grelt(level, plus, coeffs):
    """Normalized constructor from a {rep: coefficient} mapping."""
    items = []
    for r, c in coeffs.items():
        q = Fraction(c)
        if q:
            items.append((canon_rep(r, level, plus), q))
    items.sort()
    merged = []
    for r, c in items:
        if merged and merged[-1][0] == r:
            merged[-1] = (r, merged[-1][1] + c)
        else:
            merged.append((r, c))
    return GroupRingElt(level, plus, tuple((r, c) for r, c in merged if c))


def identity(n, plus):
    return grelt(n, plus, {1: 1})


def sigma(n, a, plus=False):
    return grelt(n, plus, {a: 1})


def from_vector(n, plus, vec):
    reps = group_reps(n, plus)
    return grelt(n, plus, {r: v for r, v in zip(reps, vec)})


def subgroup_sum(n, plus, members):
    return grelt(n, plus, {r: 1 for r in members})


def e_subgroup(n, plus, members):
    return subgroup_sum(n, plus, members) * Fraction(1, len(members))


def group_sum(n, plus):
    return subgroup_sum(n, plus, group_reps(n, plus))


def gr_to_json(x):
    return {"level": x.level, "plus": x.plus,
            "coeffs": {str(r): cyclotomic._frac_str(c) for r, c in x.coeffs}}


def gr_from_json(obj):
    return grelt(int(obj["level"]), bool(obj["plus"]),
                 {int(r): Fraction(s) for r, s in obj["coeffs"].items()})


# ---------------------------------------------------------------------------
# decomposition groups and the idempotent e_n


def decomposition_group(n, ell):
    """Decomposition subgroup of the prime ell | n in G_n^+, as a sorted
    tuple of plus representatives: via CRT it is the image of
    (Z/ell^a)^x x <ell mod m> for n = ell^a m."""
    if n % ell:
        raise LevelError("%d does not divide %d" % (ell, n))
    q = 1
    while n % (q * ell) == 0:
        q *= ell
    m = n // q
    frob = {1}
    if m > 1:
        f = ell % m
        while f not in frob:
            frob.add(f)
            f = (f * ell) % m
    members = set()
    for x in units(n):
        if m == 1 or (x % m) in frob:
            members.add(canon_rep(x, n, True))
    return tuple(sorted(members))


@lru_cache(maxsize=None)
def _e_n_expansion(n):
    """e_n written as a combination of subgroup idempotents e_H: returns a
    dict {subgroup members (frozenset): coefficient}.  Uses
    e_H * e_K = e_<H,K> to multiply the (1 - e_D) factors symbolically."""
    whole = frozenset(group_reps(n, True))
    triv = frozenset({1})
    terms = {triv: Fraction(1)}
    for ell in polys.prime_factors(n):
        d = frozenset(decomposition_group(n, ell))
        new = {}
        for h, c in terms.items():
            new[h] = new.get(h, Fraction(0)) + c
            hk = _subgroup_join(n, h, d)
            new[hk] = new.get(hk, Fraction(0)) - c
        terms = {h: c for h, c in new.items() if c}
    if len(polys.prime_factors(n)) == 1:
        terms[whole] = terms.get(whole, Fraction(0)) + 1
        terms = {h: c for h, c in terms.items() if c}
    return terms


def _subgroup_join(n, h, k):
    """Subgroup of G_n^+ generated by two subgroups (given as rep sets)."""
    gens = set(h) | set(k)
    members = {1}
    frontier = [1]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = canon_rep(x * g, n, True)
            if y not in members:
                members.add(y)
                frontier.append(y)
    return frozenset(members)


def idempotent_e_n(n):
    """The idempotent of Q[G_n^+] cutting out the span of eps_n: the product
    of (1 - e_D) over decomposition groups of the primes dividing n, plus the
    full-group average when n is a prime power.  Verified idempotent."""
    if n < 2:
        raise LevelError("level must be >= 2")
    acc = grelt(n, True, {})
    for h, c in sorted(_e_n_expansion(n).items(), key=lambda t: sorted(t[0])):
        acc = acc + e_subgroup(n, True, h) * c
    assert acc * acc == acc, "e_n failed the idempotency check"
    return acc


# ---------------------------------------------------------------------------
# ideal lattices


@dataclass(frozen=True)
class IdealLattice:
    """Finitely generated subgroup of the group ring, rows in canonical HNF
    over the fixed coordinate order (ascending representatives)."""

    level: int
    plus: bool
    hnf: tuple    # tuple of tuples of ints

    @classmethod
    def from_rows(cls, level, plus, rows):
        return cls(level, plus, tuple(tuple(r) for r in intlinalg.hnf(rows)))

    @classmethod
    def zero(cls, level, plus):
        return cls(level, plus, ())

    @property
    def rank(self):
        return len(self.hnf)

    def contains(self, x):
        if isinstance(x, GroupRingElt):
            if x.level != self.level or x.plus != self.plus:
                raise LevelError("group-ring mismatch")
            vec = x.to_vector()
            if any(c.denominator != 1 for c in vec):
                return False
            vec = [int(c) for c in vec]
        else:
            vec = list(x)
        return intlinalg.hnf_contains([list(r) for r in self.hnf], vec)

    def contains_lattice(self, other):
        return all(self.contains(list(row)) for row in other.hnf)

    def basis_elements(self):
        return [from_vector(self.level, self.plus, row) for row in self.hnf]

    def scaled(self, k):
        return IdealLattice(self.level, self.plus,
                            tuple(tuple(k * v for v in row) for row in self.hnf))

    def index_in(self, other):
        return intlinalg.lattice_index([list(r) for r in self.hnf],
                                       [list(r) for r in other.hnf])

    def to_json(self):
        return {"level": self.level, "plus": self.plus,
                "hnf": [list(r) for r in self.hnf]}


def eps_n(n):
    """The totally positive cyclotomic element (1 - z_n)^(1 + tau)."""
    x = one(n) - zeta(n)
    return x * act(cyclotomic.tau(n), x)


def annihilator_In_formula(n):
    """Annihilator of eps_n in Z[G_n^+] via the idempotent: the integer
    kernel of right multiplication by e_n, saturated, in HNF."""
    if n < 2:
        raise LevelError("level must be >= 2")
    terms = _e_n_expansion(n)
    reps = group_reps(n, True)
    triv = frozenset({1})
    if terms == {triv: Fraction(1)}:
        return IdealLattice.zero(n, True)
    if (len(terms) == 2 and terms.get(triv) == 1
            and set(terms.values()) == {Fraction(1), Fraction(-1)}):
        # e_n = 1 - e_H: the kernel is spanned by the H-coset indicator sums
        h = next(s for s in terms if s != triv)
        seen = set()
        rows = []
        idx = rep_index(n, True)
        for g in reps:
            coset = frozenset(canon_rep(g * x, n, True) for x in h)
            if coset not in seen:
                seen.add(coset)
                row = [0] * len(reps)
                for r in coset:
                    row[idx[r]] = 1
                rows.append(row)
        return IdealLattice.from_rows(n, True, rows)
    e = idempotent_e_n(n)
    scale = e.denominator_lcm()
    rows = []
    for g in reps:
        prod = sigma(n, g, True) * e * scale
        rows.append([int(c) for c in prod.to_vector()])
    kernel = intlinalg.left_kernel(rows)
    return IdealLattice(n, True, tuple(tuple(r) for r in kernel))


def annihilator_In_oracle(n, max_phi=16):
    """Independent construction of the annihilator of eps_n: rational kernel
    of the logarithmic embedding matrix, each vector verified exactly by
    eps_n^v = 1 in the field, then saturated.  Never accepts unverified
    numeric output."""
    if n < 2:
        raise LevelError("level must be >= 2")
    if polys.euler_phi(n) > max_phi:
        raise ValueError("phi(%d) exceeds the configured oracle bound %d" % (n, max_phi))
    from mpmath import mp, mpf, sin, log, pi
    reps = group_reps(n, True)
    mu = len(reps)
    eps = eps_n(n)
    for dps in (60, 120, 240, 480):
        mp.dps = dps
        ell = {}
        for d in reps:
            ell[d] = 2 * log(2 * sin(pi * d / n))
        rows = [[ell[canon_rep(c * g, n, True)] for g in reps] for c in reps]
        kern = _mp_kernel(rows, mpf(10) ** (-dps // 2))
        candidates = []
        ok = True
        for vec in kern:
            fr = [Fraction(float(v)).limit_denominator(4096) for v in vec]
            den = 1
            for q in fr:
                den = lcm(den, q.denominator)
            ivec = [int(q * den) for q in fr]
            elt = from_vector(n, True, ivec)
            val = elt.act_on(eps, assume_tau_fixed=True)
            if val != one(n):
                ok = False
                break
            candidates.append(ivec)
        if ok:
            sat = intlinalg.saturate(candidates, mu) if candidates else []
            return IdealLattice(n, True, tuple(tuple(r) for r in sat))
    raise PrecisionError("oracle kernel reconstruction failed for n = %d" % n)


def _mp_kernel(rows, eps):
    """Kernel basis of a real matrix by Gauss-Jordan with pivot threshold;
    returned in the canonical free-column parametrization."""
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    a = [list(r) for r in rows]
    piv_cols = []
    r = 0
    for c in range(ncols):
        best, bi = None, None
        for i in range(r, m):
            v = abs(a[i][c])
            if best is None or v > best:
                best, bi = v, i
        if best is None or best < eps:
            continue
        a[r], a[bi] = a[bi], a[r]
        pivot = a[r][c]
        a[r] = [v / pivot for v in a[r]]
        for i in range(m):
            if i != r:
                f = a[i][c]
                if abs(f) > 0:
                    a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for i, pc in enumerate(piv_cols):
            vec[pc] = -a[i][fc]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# annihilators of roots of unity


def _root_annihilator_lattice(n, reps, exps, order):
    """Lattice {c : sum c_g exps[g] = 0 mod order} in Z[G], canonical HNF."""
    mu = len(reps)
    row = [exps[g] for g in reps] + [order]
    kern = intlinalg.right_kernel([row], mu + 1)
    rows = [r[:mu] for r in kern]
    return IdealLattice.from_rows(n, False, rows)


def _dlog_linear(k0, t, L):
    """Solve k0*e = t (mod L); the target is a power of the base by construction."""
    d = gcd(k0, L)
    if t % d:
        raise ArithmeticError("discrete log does not exist")
    return (t // d) * pow(k0 // d, -1, L // d) % (L // d)


def annihilator_Tn(n, starred=False):
    """Annihilator in Z[G_n] of -z_n; with starred and odd n, the annihilator
    of -z_(2n) carried over through Q(2n) = Q(n)."""
    if n < 2:
        raise LevelError("level must be >= 2")
    reps = group_reps(n, False)
    if starred and n % 2 == 1:
        L = 4 * n
        k0 = (2 * n + 2) % L
        order = L // gcd(k0, L)
        exps = {}
        for a in reps:
            atil = a if a % 2 == 1 else a + n   # the unit mod 2n over a
            t = (2 * n + 2 * atil) % L
            exps[a] = _dlog_linear(k0, t, L)
    else:
        L = 2 * n
        k0 = (n + 2) % L
        order = L // gcd(k0, L)
        exps = {}
        for a in reps:
            t = (n + 2 * a) % L
            exps[a] = _dlog_linear(k0, t, L)
    return _root_annihilator_lattice(n, reps, exps, order)


def annihilator_mu(n):
    """Annihilator in Z[G_n] of the full group mu_n (equivalently of z_n)."""
    reps = group_reps(n, False)
    exps = {a: a % n for a in reps}
    return _root_annihilator_lattice(n, reps, exps, n)


def project_annihilator(m, n, lattice):
    """Image of a lattice at level m under the coefficient push-forward to
    level n (n | m), returned in canonical HNF."""
    if lattice.level != m:
        raise LevelError("lattice level mismatch")
    if m % n:
        raise LevelError("%d does not divide %d" % (n, m))
    reps_m = group_reps(m, lattice.plus)
    idx_n = rep_index(n, lattice.plus)
    rows = []
    for row in lattice.hnf:
        out = [0] * len(idx_n)
        for r, v in zip(reps_m, row):
            if v:
                out[idx_n[canon_rep(r % n if n > 1 else 1, n, lattice.plus)]] += v
        rows.append(out)
    return IdealLattice.from_rows(n, lattice.plus, rows)


# ---------------------------------------------------------------------------
# the finite-level image claim


def _gal_fixing_subgroup(level, base):
    """Plus representatives at `level` of Gal fixing the level-`base` field:
    classes of units congruent to +-1 mod base."""
    out = set()
    for x in units(level):
        r = x % base
        if r == 1 % base or r == (base - 1) % base:
            out.add(canon_rep(x, level, True))
    return out


def stabilization_b0(m, p, b_max=12):
    """Smallest b such that every prime divisor of the tower levels m*p^c
    has full decomposition group above the level m*p^b, detected by
    containment at two consecutive higher levels."""
    for b in range(b_max + 1):
        good = True
        for ell in sorted(set(polys.prime_factors(m)) | {p}):
            for c in (b + 1, b + 2):
                lev = m * p ** c
                h = _gal_fixing_subgroup(lev, m * p ** b)
                if not h <= set(decomposition_group(lev, ell)):
                    good = False
                    break
            if not good:
                break
        if good:
            return b
    raise PrecisionError("no stabilization level found below b = %d" % b_max)


def image_is_p_times_I(m, p, b):
    """True iff the push-forward of the annihilator lattice at level
    m*p^(b+1) equals p times the annihilator lattice at level m*p^b.
    Requires p | m and b >= b_0 (decomposition-group stabilization)."""
    if m % p:
        raise HypothesisNotMetError("p = %d does not divide m = %d" % (p, m))
    b0 = stabilization_b0(m, p)
    if b < b0:
        raise HypothesisNotMetError(
            "hypothesis not met: b = %d is below the stabilization level b_0 = %d" % (b, b0))
    hi = annihilator_In_formula(m * p ** (b + 1))
    lo = annihilator_In_formula(m * p ** b)
    proj = project_annihilator(m * p ** (b + 1), m * p ** b, hi)
    return proj == lo.scaled(p)
