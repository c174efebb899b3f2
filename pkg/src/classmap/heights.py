"""Canonical heights with rigorous error bounds, pairings, regulator, diameter.

Normalization: hhat(P) = 1/2 * lim h_W(x(2^n P)) / 4^n. Two algorithms:

* canonical_height: local decomposition on a global minimal model. The
  archimedean part is the telescoping series
      lam_inf(P) = log max(1,|x|) + sum_k 4^-(k+1) * g(x_k),
      g(x) = log( max(|N(x)|, |D(x)|) / max(1,|x|)^4 ),
  where x_{k+1} = N(x_k)/D(x_k) is the x-coordinate duplication map; its tail
  is bounded through an explicit global bound on |g| obtained from the
  resultant of N and D. The non-archimedean part is log(denominator) plus
  finitely many corrections at bad primes where the point reduces to the
  singular locus (node/cusp case analysis). Everything is evaluated in
  outward-rounded interval arithmetic, so the returned error is rigorous.

* canonical_height_doubling: the direct definition, k exact doublings with
  the Weil-height envelope |hhat - h_W/2| <= curve constants controlling the
  truncation. Kept as an independent oracle; coordinate sizes quadruple per
  doubling, so it is capped (default 12) and cannot certify very tight
  tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2

from . import arith
from .elliptic import INFINITY, Curve, Point, _add_raw, add, is_torsion
from .errors import ClassmapError, InputError, ToleranceError
from .intervals import Interval, get_precision, interval_max, set_precision


@dataclass(frozen=True)
class HeightValue:
    """A real number known to lie in [value - error, value + error]."""

    interval: Interval

    @property
    def value(self):
        return self.interval.midpoint()

    @property
    def error(self):
        return self.interval.half_width()

    def to_json(self) -> dict:
        return {"value": format(self.value, ".40g"),
                "error": format(self.error, ".3g")}

    def __repr__(self):
        return f"HeightValue({self.value} +- {self.error})"


# ---------------------------------------------------------------------------
# general Weierstrass models


@dataclass(frozen=True)
class WeierstrassModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def b2(self):
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self):
        return (self.a1**2 * self.a6 + 4 * self.a2 * self.a6
                - self.a1 * self.a3 * self.a4 + self.a2 * self.a3**2 - self.a4**2)

    @property
    def c4(self):
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self):
        return (self.c4**3 - self.c6**2) // 1728

    def duplication_polys(self) -> tuple[list[int], list[int]]:
        """(N, D) with x(2P) = N(x)/D(x); coefficient lists low-to-high."""
        num = [-self.b8, -2 * self.b6, -self.b4, 0, 1]
        den = [self.b6, 2 * self.b4, self.b2, 4]
        return num, den


@dataclass(frozen=True)
class MinimalModel:
    """Global minimal model of y^2 = x^3 + a4 x + a6 plus the transport data.

    (x, y) on the original model corresponds to x' = (x - r)/u^2,
    y' = (y - s*(x - r) - t)/u^3 on the minimal model.
    """

    model: WeierstrassModel
    u: int
    r: int
    s: int
    t: int
    bad_primes: tuple[int, ...]  # primes dividing the minimal discriminant

    def transport(self, p: Point) -> tuple[Fraction, Fraction]:
        x = (p.x - self.r) / Fraction(self.u**2)
        y = (p.y - self.s * (p.x - self.r) - self.t) / Fraction(self.u**3)
        m = self.model
        assert (y * y + m.a1 * x * y + m.a3 * y
                == x**3 + m.a2 * x * x + m.a4 * x + m.a6), "transport left the curve"
        return x, y


def _kraus_ok(c4: int, c6: int) -> bool:
    """Kraus: (c4, c6) arise from some integral Weierstrass model."""
    if c6 != 0 and arith.valuation(c6, 3) == 2:
        return False
    if c6 % 4 == 3:
        return True
    return c4 % 16 == 0 and c6 % 32 in (0, 8)


def _model_from_c(c4: int, c6: int) -> WeierstrassModel:
    """Reconstruct a canonical integral model with the given invariants."""
    b2 = None
    for cand in range(-5, 7):
        if (cand - (-c6)) % 12 == 0:
            b2 = cand
            break
    assert b2 is not None
    assert (b2 * b2 - c4) % 24 == 0
    b4 = (b2 * b2 - c4) // 24
    assert (-b2**3 + 36 * b2 * b4 - c6) % 216 == 0
    b6 = (-b2**3 + 36 * b2 * b4 - c6) // 216
    a1 = b2 % 2
    a2 = (b2 - a1) // 4
    a3 = b6 % 2
    a6 = (b6 - a3) // 4
    assert (b4 - a1 * a3) % 2 == 0
    a4 = (b4 - a1 * a3) // 2
    model = WeierstrassModel(a1, a2, a3, a4, a6)
    assert model.c4 == c4 and model.c6 == c6
    return model


@lru_cache(maxsize=256)
def minimal_model(a4: int, a6: int) -> MinimalModel:
    """Laska-Kraus-Connell global minimal model of y^2 = x^3 + a4 x + a6."""
    start = WeierstrassModel(0, 0, 0, a4, a6)
    c4, c6, disc = start.c4, start.c6, start.disc
    if disc == 0:
        raise InputError("singular curve")
    u = 1
    for p in sorted(arith.factorize(disc)):
        exps = [arith.valuation(disc, p) // 12]
        if c4 != 0:
            exps.append(arith.valuation(c4, p) // 4)
        if c6 != 0:
            exps.append(arith.valuation(c6, p) // 6)
        e = min(exps)
        if p in (2, 3):
            while e > 0 and not _kraus_ok(c4 // (p**e) ** 4, c6 // (p**e) ** 6):
                e -= 1
        u *= p**e
    c4m, c6m = c4 // u**4, c6 // u**6
    model = _model_from_c(c4m, c6m)
    # solve the transformation x = u^2 x' + r, y = u^3 y' + s u^2 x' + t
    assert (u**2 * model.b2) % 12 == 0, "minimal model transport is not integral"
    r = (u**2 * model.b2) // 12
    assert (u * model.a1) % 2 == 0
    s = (u * model.a1) // 2
    assert (u**3 * model.a3) % 2 == 0
    t = (u**3 * model.a3) // 2
    # consistency of the full a-invariant transformation
    assert u * model.a1 == 2 * s
    assert u**2 * model.a2 == 3 * r - s * s
    assert u**3 * model.a3 == 2 * t
    assert u**4 * model.a4 == a4 + 3 * r * r - 2 * s * t
    assert u**6 * model.a6 == a6 + r * a4 + r**3 - t * t
    bad = tuple(sorted(arith.factorize(model.disc)))
    return MinimalModel(model=model, u=u, r=r, s=s, t=t, bad_primes=bad)


# ---------------------------------------------------------------------------
# archimedean local height


def _poly_xgcd_constant(num: list[int], den: list[int]) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """(rho, u, v) with u*num + v*den = rho, rho a nonzero constant.

    Plain extended Euclid over Q[x] for the coprime duplication pair.
    """

    def deg(p):
        return len(p) - 1

    def trim(p):
        while len(p) > 1 and p[-1] == 0:
            p = p[:-1]
        return p

    def sub_scaled(p, q, coeff, shift):
        out = list(p) + [Fraction(0)] * max(0, len(q) + shift - len(p))
        for i, qc in enumerate(q):
            out[i + shift] -= coeff * qc
        return trim(out)

    def divmod_poly(p, q):
        quo = [Fraction(0)] * max(1, len(p) - len(q) + 1)
        rem = [Fraction(c) for c in p]
        while deg(rem) >= deg(q) and any(rem):
            shift = deg(rem) - deg(q)
            coeff = rem[-1] / q[-1]
            quo[shift] += coeff
            rem = sub_scaled(rem, q, coeff, shift)
            if rem == [Fraction(0)]:
                break
        return trim(quo), trim(rem)

    r0 = [Fraction(c) for c in num]
    r1 = [Fraction(c) for c in den]
    u0, u1 = [Fraction(1)], [Fraction(0)]
    v0, v1 = [Fraction(0)], [Fraction(1)]
    while True:
        if r1 == [Fraction(0)]:
            raise ClassmapError("duplication polynomials are not coprime")
        if deg(r1) == 0:
            break
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        mul = _poly_mul(q, u1)
        u0, u1 = u1, trim([a - b for a, b in _zip_pad(u0, mul)])
        mul = _poly_mul(q, v1)
        v0, v1 = v1, trim([a - b for a, b in _zip_pad(v0, mul)])
    rho = r1[0]
    check = [a + b for a, b in _zip_pad(_poly_mul(u1, [Fraction(c) for c in num]),
                                        _poly_mul(v1, [Fraction(c) for c in den]))]
    assert trim(check) == [rho]
    return rho, u1, v1


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _zip_pad(p, q):
    n = max(len(p), len(q))
    p = list(p) + [Fraction(0)] * (n - len(p))
    q = list(q) + [Fraction(0)] * (n - len(q))
    return zip(p, q)


@lru_cache(maxsize=256)
def _series_bound(model: WeierstrassModel) -> float:
    """Global bound G with |g(x)| <= G for all real x (used for the tail)."""
    num, den = model.duplication_polys()
    k_plus = max(sum(abs(c) for c in num), sum(abs(c) for c in den))
    rho, u, v = _poly_xgcd_constant(num, den)
    k_c = sum(abs(c) for c in u) + sum(abs(c) for c in v)
    r0 = max(1, 2 * sum(abs(c) for c in num[:-1]))
    lower = min(Fraction(1, 2), abs(rho) / (k_c * Fraction(r0) ** 7))
    g_hi = Interval.log_of_fraction(Fraction(max(k_plus, 2))).hi
    g_lo = (-Interval.log_of_fraction(lower)).hi
    return float(max(g_hi, g_lo, 1.0))


def _eval_poly_interval(coeffs: list[int], x: Interval) -> Interval:
    acc = Interval.from_int(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * x + Interval.from_int(c)
    return acc


def _lambda_inf(model: WeierstrassModel, x0: Fraction, terms: int) -> Interval:
    """Archimedean local height of the point with x-coordinate x0 (series)."""
    num, den = model.duplication_polys()
    one = Interval.from_int(1)
    x = Interval.from_fraction(x0)
    total = x.abs().max_with(one).log()
    quarter = Fraction(1, 4)
    scale = quarter
    for _ in range(terms):
        n_val = _eval_poly_interval(num, x)
        d_val = _eval_poly_interval(den, x)
        big = n_val.abs().max_with(d_val.abs())
        m4 = x.abs().max_with(one) ** 4
        total = total + Interval.from_fraction(scale) * (big.log() - m4.log())
        x = n_val / d_val
        scale *= quarter
    tail = Interval.from_fraction(Fraction(_series_bound(model)) * scale * Fraction(4, 3))
    return Interval(total.lo - tail.hi, total.hi + tail.hi)


# ---------------------------------------------------------------------------
# non-archimedean corrections at bad primes


def _vp_fraction(q: Fraction, p: int) -> int:
    if q == 0:
        raise ClassmapError("valuation of zero")
    return arith.valuation(q.numerator, p) - arith.valuation(q.denominator, p)


def _bad_prime_correction(model: WeierstrassModel, x: Fraction, y: Fraction,
                          p: int) -> Fraction:
    """Multiple q of log p correcting lambda_p beyond max(0, -v_p(x)) * log p.

    Zero unless the point reduces to the singular locus mod p. Node and cusp
    cases follow the standard valuation recipe on a minimal model.
    """
    if x != 0 and _vp_fraction(x, p) < 0:
        return Fraction(0)
    e_a = 3 * x * x + 2 * model.a2 * x + model.a4 - model.a1 * y
    e_b = 2 * y + model.a1 * x + model.a3
    va = _vp_fraction(e_a, p) if e_a != 0 else 10**9
    vb = _vp_fraction(e_b, p) if e_b != 0 else 10**9
    if va <= 0 or vb <= 0:
        return Fraction(0)  # nonsingular reduction
    n = arith.valuation(model.disc, p)
    if model.c4 % p != 0:
        # multiplicative reduction: component position alpha = min(vb, n/2)
        alpha = min(Fraction(vb), Fraction(n, 2))
        return -alpha * (n - alpha) / n
    psi3 = (3 * x**4 + model.b2 * x**3 + 3 * model.b4 * x * x
            + 3 * model.b6 * x + model.b8)
    vc = _vp_fraction(psi3, p) if psi3 != 0 else 10**9
    if vc >= 3 * vb:
        return Fraction(-2 * vb, 3)
    return Fraction(-vc, 4)


# ---------------------------------------------------------------------------
# canonical height


def _height_x_interval(curve: Curve, p: Point, terms: int) -> Interval:
    """hhat_x(P) = 2*hhat(P) as an interval, at the current precision."""
    mm = minimal_model(curve.a4, curve.a6)
    x, y = mm.transport(p)
    lam_inf = _lambda_inf(mm.model, x, terms)
    denom = x.denominator  # = C'^2 > 0
    total = lam_inf + Interval.log_of_int(denom) if denom > 1 else lam_inf
    for q in mm.bad_primes:
        corr = _bad_prime_correction(mm.model, x, y, q)
        if corr:
            total = total + Interval.from_fraction(corr) * Interval.log_of_int(q)
    return total


def canonical_height(curve: Curve, p: Point, tol=Fraction(1, 10**10),
                     max_retries: int = 5) -> HeightValue:
    """hhat(P) = 1/2 lim h_W(nP)/n^2 with rigorous error at most tol.

    Torsion points (order <= 12) return exactly 0. Raises ToleranceError with
    the best estimate if the precision ladder cannot certify tol.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise InputError("tol must be positive")
    if is_torsion(curve, p):
        return HeightValue(Interval.zero())
    base_prec = get_precision()
    g_bound = _series_bound(minimal_model(curve.a4, curve.a6).model)
    terms = max(8, int(math.log(g_bound / (1.5 * float(tol)), 4)) + 3)
    best = None
    try:
        for attempt in range(max_retries):
            set_precision(base_prec * (2**attempt))
            try:
                hx = _height_x_interval(curve, p, terms)
            except (ValueError, ZeroDivisionError):
                continue  # interval hit a pole or log of 0; retry wider mantissa
            half = hx * Fraction(1, 2)
            best = HeightValue(half)
            width = float(half.half_width())
            if (math.isfinite(width) and Fraction(width) <= tol) or half.width() == 0:
                return best
    finally:
        set_precision(base_prec)
    raise ToleranceError(f"could not certify tolerance {tol}", best=best)


def silverman_envelope(curve: Curve) -> tuple[Interval, Interval]:
    """(L, U) with -L <= hhat(P) - h_W(P)/2 <= U for all rational points."""
    j = curve.j_invariant()
    hj = Interval.log_of_int(max(abs(j.numerator), j.denominator, 1))
    hd = Interval.log_of_int(abs(curve.discriminant()))
    lower = hj * Fraction(1, 8) + hd * Fraction(1, 12) + Fraction(973, 1000)
    upper = hj * Fraction(1, 12) + hd * Fraction(1, 12) + Fraction(107, 100)
    return lower, upper


def canonical_height_doubling(curve: Curve, p: Point, tol=Fraction(1, 10**6),
                              max_doublings: int = 12) -> HeightValue:
    """Direct definition: h_W([2^k]P)/(2*4^k) with the envelope controlling k.

    Independent of canonical_height; used as its oracle. Raises ToleranceError
    (carrying the best estimate) when the envelope cannot reach tol within the
    doubling cap.
    """
    tol = Fraction(tol)
    if is_torsion(curve, p):
        return HeightValue(Interval.zero())
    lower, upper = silverman_envelope(curve)
    env = float((lower + upper).hi) / 2.0
    k = 0
    while env / 4**k > tol and k < max_doublings:
        k += 1
    x = gmpy2.mpq(p.x.numerator, p.x.denominator)
    a4, a6 = curve.a4, curve.a6
    for _ in range(k):
        x2 = x * x
        num = x2 * x2 - 2 * a4 * x2 - 8 * a6 * x + a4 * a4
        den = 4 * (x2 * x + a4 * x + a6)
        x = num / den
    hw = Interval.log_of_int(max(abs(int(x.numerator)), int(x.denominator), 1))
    scale = Fraction(1, 2 * 4**k)
    est = Interval(
        (hw * scale - lower * Fraction(1, 4**k)).lo,
        (hw * scale + upper * Fraction(1, 4**k)).hi,
    )
    result = HeightValue(est)
    if Fraction(float(est.half_width())) > tol:
        raise ToleranceError(
            f"doubling cap {max_doublings} cannot certify tolerance {tol}", best=result)
    return result


# ---------------------------------------------------------------------------
# pairing, regulator, diameter


def neron_tate_pairing(curve: Curve, p: Point, q: Point,
                       tol=Fraction(1, 10**10)) -> HeightValue:
    """<P, Q> = (hhat(P+Q) - hhat(P) - hhat(Q)) / 2."""
    tol = Fraction(tol)
    each = tol / 2
    hpq = canonical_height(curve, add(curve, p, q), each).interval
    hp = canonical_height(curve, p, each).interval
    hq = canonical_height(curve, q, each).interval
    return HeightValue((hpq - hp - hq) * Fraction(1, 2))


def _interval_det(rows: list[list[Interval]]) -> Interval:
    n = len(rows)
    if n == 0:
        return Interval.from_int(1)
    if n == 1:
        return rows[0][0]
    total = Interval.zero()
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _interval_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def regulator(curve: Curve, points: list[Point], tol=Fraction(1, 10**8)) -> HeightValue:
    """det of the pairing Gram matrix; 1 for the empty set (convention)."""
    tol = Fraction(tol)
    r = len(points)
    if r == 0:
        return HeightValue(Interval.from_int(1))
    for attempt in range(4):
        each = tol / (4 ** (r + attempt))
        gram = [[None] * r for _ in range(r)]
        for i in range(r):
            for j in range(i, r):
                val = neron_tate_pairing(curve, points[i], points[j], each).interval
                gram[i][j] = gram[j][i] = val
        det = _interval_det(gram)
        if Fraction(float(det.half_width())) <= tol:
            return HeightValue(det)
    return HeightValue(det)


def diameter(curve: Curve, points: list[Point], tol=Fraction(1, 10**8)) -> HeightValue:
    """max over sign vectors delta in {0, +-1}^r of 2*hhat(sum delta_i P_i)."""
    tol = Fraction(tol)
    r = len(points)
    if r == 0:
        return HeightValue(Interval.zero())
    combos = []
    signs = [0] * r

    def walk(i):
        if i == r:
            combos.append(tuple(signs))
            return
        for s in (0, 1, -1):
            signs[i] = s
            walk(i + 1)
        signs[i] = 0

    walk(0)
    # delta and -delta give the same height; keep one representative
    seen = set()
    reps = []
    for c in combos:
        if c not in seen:
            seen.add(c)
            seen.add(tuple(-s for s in c))
            reps.append(c)
    values = []
    for c in reps:
        q = INFINITY
        for s, pt in zip(c, points):
            if s == 1:
                q = _add_raw(curve, q, pt)
            elif s == -1:
                q = _add_raw(curve, q, Point(pt.x, -pt.y))
        values.append(canonical_height(curve, q, tol / 2).interval * 2)
    return HeightValue(interval_max(values))
