"""Exact arithmetic on positive definite integral binary quadratic forms.

Reduction, Gauss composition, class numbers and class group structure by
exhaustive enumeration, discriminant utilities, Kronecker symbol, and the
three quadratic forms attached to a 2x2x2 integer cube.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import arith
from .errors import ClassmapError, InputError

kronecker_symbol = arith.kronecker


@dataclass(frozen=True)
class QuadForm:
    """Integral binary quadratic form a*x^2 + b*xy + c*y^2, positive definite."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0:
            raise InputError(f"form {self.tuple()} is not positive definite (a <= 0)")
        if self.disc() >= 0:
            raise InputError(f"form {self.tuple()} has non-negative discriminant")

    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def content(self) -> int:
        return math.gcd(math.gcd(self.a, self.b), self.c)

    def is_primitive(self) -> bool:
        return self.content() == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if b < 0 and (abs(b) == a or a == c):
            return False
        return True

    def inverse(self) -> "QuadForm":
        return reduce_form(QuadForm(self.a, -self.b, self.c))[0]

    def tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def apply(self, m: tuple[tuple[int, int], tuple[int, int]]) -> "QuadForm":
        """The form f((x,y) -> M(x,y)), i.e. f composed with the substitution M."""
        (p, q), (r, s) = m
        a, b, c = self.a, self.b, self.c
        a2 = a * p * p + b * p * r + c * r * r
        b2 = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s
        c2 = a * q * q + b * q * s + c * s * s
        return QuadForm(a2, b2, c2)

    def __str__(self):
        return f"{self.a},{self.b},{self.c}"


def parse_form(text: str) -> QuadForm:
    parts = text.split(",")
    if len(parts) != 3:
        raise InputError(f"expected 'a,b,c', got {text!r}")
    return QuadForm(*(int(p) for p in parts))


def principal_form(disc: int) -> QuadForm:
    """The identity class representative of a negative discriminant."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InputError(f"{disc} is not a negative discriminant")
    if disc % 4 == 0:
        return QuadForm(1, 0, -disc // 4)
    return QuadForm(1, 1, (1 - disc) // 4)


IDENTITY_2X2 = ((1, 0), (0, 1))


def _matmul(m, n):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def reduce_form(f: QuadForm) -> tuple[QuadForm, tuple[tuple[int, int], tuple[int, int]]]:
    """Gauss reduction. Returns (reduced form, unimodular M with f.apply(M) reduced).

    Reduced means |b| <= a <= c with b >= 0 whenever |b| = a or a = c.
    """
    a, b, c = f.a, f.b, f.c
    m = IDENTITY_2X2
    if not (-a < b <= a):
        r = (a - b) // (2 * a)
        b, c = b + 2 * r * a, a * r * r + b * r + c
        m = _matmul(m, ((1, r), (0, 1)))
    while a > c or (a == c and b < 0):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        # swap (x,y) -> (-y, x) followed by the shift x -> x + s*y
        m = _matmul(m, ((0, -1), (1, s)))
    out = QuadForm(a, b, c)
    return out, m


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Gauss composition (Dirichlet/Shanks with explicit Bezout); reduced output."""
    if f.disc() != g.disc():
        raise InputError(f"discriminant mismatch: {f.disc()} vs {g.disc()}")
    if not f.is_primitive() or not g.is_primitive():
        raise InputError("composition requires primitive forms")
    if f.a > g.a:
        f, g = g, f
    a1, b1, c1 = f.tuple()
    a2, b2, c2 = g.tuple()
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = arith.xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u, v = arith.xgcd(s, d)
        x2, y2 = u, -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form(QuadForm(a3, b3, c3))[0]


def form_pow(f: QuadForm, n: int) -> QuadForm:
    """n-fold composition of the class of f (n may be negative)."""
    disc = f.disc()
    if n < 0:
        f, n = f.inverse(), -n
    result = reduce_form(principal_form(disc))[0]
    base = reduce_form(f)[0]
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


# ---------------------------------------------------------------------------
# class numbers and class groups


def _check_discriminant_arg(d: int) -> None:
    if d <= 0 or (-d) % 4 not in (0, 1):
        raise InputError(f"-{d} is not a negative discriminant (need -D = 0,1 mod 4)")


def reduced_forms(d: int) -> list[QuadForm]:
    """All primitive reduced forms of discriminant -D, sorted by (a, b, c)."""
    _check_discriminant_arg(d)
    forms = []
    gcd = math.gcd
    for a in range(1, math.isqrt(d // 3) + 1):
        for b in range(d & 1, a + 1, 2):
            num = b * b + d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or gcd(gcd(a, b), c) != 1:
                continue
            forms.append(QuadForm(a, b, c))
            if 0 < b < a < c:
                forms.append(QuadForm(a, -b, c))
    return sorted(forms, key=lambda f: (f.a, f.b, f.c))


def class_number(d: int) -> int:
    """h(-D): number of primitive reduced forms of discriminant -D."""
    _check_discriminant_arg(d)
    count = 0
    gcd = math.gcd
    for a in range(1, math.isqrt(d // 3) + 1):
        for b in range(d & 1, a + 1, 2):
            num = b * b + d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or gcd(gcd(a, b), c) != 1:
                continue
            count += 1 if (b == 0 or b == a or a == c) else 2
    return count


@dataclass(frozen=True)
class ClassGroupTable:
    """Complete composition table of CL(-D) with its elementary divisors."""

    disc: int
    reduced_forms: tuple[QuadForm, ...]
    structure: tuple[int, ...]  # d1 | d2 | ... , product = h, trivial -> ()
    composition_index: tuple[tuple[int, ...], ...]

    @property
    def h(self) -> int:
        return len(self.reduced_forms)

    def index_of(self, f: QuadForm) -> int:
        return self.reduced_forms.index(reduce_form(f)[0])

    def to_json(self) -> dict:
        return {
            "disc": self.disc,
            "h": self.h,
            "structure": list(self.structure),
            "forms": [list(f.tuple()) for f in self.reduced_forms],
        }


def _table_pow(table, i: int, n: int, identity: int) -> int:
    result = identity
    base = i
    while n:
        if n & 1:
            result = table[result][base]
        base = table[base][base]
        n >>= 1
    return result


def _invariant_factors(table, identity: int) -> tuple[int, ...]:
    """Elementary divisors d1 | d2 | ... from the group table, by p-Sylow counts.

    For an abelian p-group of type (e_1 >= e_2 >= ...), the number of solutions
    of x^(p^j) = 1 is p^(sum_i min(e_i, j)); the increments of the p-adic logs
    recover the conjugate partition.
    """
    h = len(table)
    if h == 1:
        return ()
    per_prime: dict[int, list[int]] = {}
    for p in arith.factorize(h):
        counts_ge = []  # counts_ge[j-1] = #{i : e_i >= j}
        prev_log = 0
        j = 1
        while True:
            pj = p**j
            nj = sum(1 for i in range(h) if _table_pow(table, i, pj, identity) == identity)
            log_nj = arith.valuation(nj, p) if nj > 1 else 0
            delta = log_nj - prev_log
            if delta == 0:
                break
            counts_ge.append(delta)
            prev_log = log_nj
            j += 1
        # conjugate partition: e_i = #{j : counts_ge[j] >= i}
        n_parts = counts_ge[0]
        exps = [sum(1 for cg in counts_ge if cg >= i + 1) for i in range(n_parts)]
        per_prime[p] = exps  # descending
    width = max(len(v) for v in per_prime.values())
    factors = []
    for k in range(width):
        dk = 1
        for p, exps in per_prime.items():
            if k < len(exps):
                dk *= p ** exps[k]
        factors.append(dk)
    factors.sort()
    return tuple(factors)


def class_group_structure(d: int, max_h: int = 4096) -> ClassGroupTable:
    """Full composition table and invariant factors of CL(-D).

    Quadratic in h (table construction); refuses beyond max_h.
    """
    forms = reduced_forms(d)
    h = len(forms)
    if h > max_h:
        raise ClassmapError(f"h(-{d}) = {h} exceeds table limit {max_h}")
    index = {f.tuple(): i for i, f in enumerate(forms)}
    table = tuple(
        tuple(index[compose(fi, fj).tuple()] for fj in forms) for fi in forms
    )
    identity = index[reduce_form(principal_form(-d))[0].tuple()]
    # sanity: identity row/column act trivially, rows are permutations
    assert all(table[identity][j] == j for j in range(h))
    assert all(sorted(row) == list(range(h)) for row in table)
    structure = _invariant_factors(table, identity)
    return ClassGroupTable(disc=-d, reduced_forms=tuple(forms),
                           structure=structure, composition_index=table)


def is_fundamental_discriminant(disc: int) -> bool:
    """True iff disc < 0 is the discriminant of an imaginary quadratic field."""
    if disc >= 0:
        raise InputError("expected a negative integer")
    if disc % 4 == 1:
        return arith.is_squarefree_int(-disc) is True
    if disc % 4 == 0:
        m = disc // 4
        return m % 4 in (2, 3) and arith.is_squarefree_int(-m) is True
    return False


# ---------------------------------------------------------------------------
# 2x2x2 cubes


@dataclass(frozen=True)
class BhargavaCube:
    """Integer cube with vertices labeled as in the reference figure.

    Axis convention (x right, y up, z back):
      (0,0,0)=phi3  (1,0,0)=theta  (0,1,0)=psi1  (1,1,0)=phi2
      (0,0,1)=psi2  (1,0,1)=phi1   (0,1,1)=rho   (1,1,1)=psi3
    """

    phi3: int
    psi1: int
    phi2: int
    theta: int
    psi2: int
    rho: int
    psi3: int
    phi1: int

    def as_tuple(self) -> tuple[int, ...]:
        """Entries in the (phi3, psi1, phi2, theta; psi2, rho, psi3, phi1) order."""
        return (self.phi3, self.psi1, self.phi2, self.theta,
                self.psi2, self.rho, self.psi3, self.phi1)

    @staticmethod
    def from_tuple(entries) -> "BhargavaCube":
        phi3, psi1, phi2, theta, psi2, rho, psi3, phi1 = entries
        return BhargavaCube(phi3, psi1, phi2, theta, psi2, rho, psi3, phi1)


def _det_form(n, m) -> tuple[int, int, int]:
    """Coefficients of det(N*x - M*y) as a binary quadratic form."""
    (n11, n12), (n21, n22) = n
    (m11, m12), (m21, m22) = m
    qa = n11 * n22 - n12 * n21
    qb = -(n11 * m22 + n22 * m11 - n12 * m21 - n21 * m12)
    qc = m11 * m22 - m12 * m21
    return qa, qb, qc


def cube_associated_forms(cube: BhargavaCube) -> tuple[QuadForm, QuadForm, QuadForm]:
    """The three forms cut out by the cube's opposite face pairs.

    Face pairing and signs are fixed once and for all by the reference cube
    (-1,-1,-2,5; -1,1,-1,-4) -> ((5,6,7), (3,2,9), (2,0,13)):
      Q1 = det(N1*x - M1*y) with M1/N1 the z=0/z=1 faces,
      Q2 = det(N2*x - M2*y) with M2/N2 the y=0/y=1 faces,
      Q3 = -det(M3*x - N3*y) with M3/N3 the x=0/x=1 faces.
    All three share one discriminant and their classes compose to the
    principal class.
    """
    c = cube
    m1 = ((c.phi3, c.theta), (c.psi1, c.phi2))
    n1 = ((c.psi2, c.phi1), (c.rho, c.psi3))
    m2 = ((c.phi3, c.theta), (c.psi2, c.phi1))
    n2 = ((c.psi1, c.phi2), (c.rho, c.psi3))
    m3 = ((c.phi3, c.psi1), (c.psi2, c.rho))
    n3 = ((c.theta, c.phi2), (c.phi1, c.psi3))
    raw = [
        _det_form(n1, m1),
        _det_form(n2, m2),
        tuple(-t for t in _det_form(m3, n3)),
    ]
    forms = []
    for qa, qb, qc in raw:
        if qa <= 0 or qb * qb - 4 * qa * qc >= 0:
            raise InputError(f"non-definite slice ({qa},{qb},{qc})")
        forms.append(QuadForm(qa, qb, qc))
    discs = {f.disc() for f in forms}
    if len(discs) != 1:
        raise InputError(f"cube slices disagree on discriminant: {sorted(discs)}")
    return tuple(forms)


def cube_discriminant(cube: BhargavaCube) -> int:
    return cube_associated_forms(cube)[0].disc()
