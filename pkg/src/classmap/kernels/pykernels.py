"""Pure-Python kernels: the fallback backend.

Same contracts as the compiled extension in _ckernels.pyx; exact but slow.
The compiled twin is selected at import when available (see __init__.py).
"""

from __future__ import annotations

import math

from .. import arith

BACKEND = "python"


def class_number_counts(limit: int) -> list[int]:
    """counts[d] = h(-d) for every 0 < d <= limit with -d = 0,1 mod 4 (else 0).

    One pass over all primitive reduced forms (a, b, c) with 4ac - b^2 <= limit.
    """
    counts = [0] * (limit + 1)
    gcd = math.gcd
    for a in range(1, math.isqrt(limit // 3) + 1):
        a4 = 4 * a
        for b in range(0, a + 1):
            g2 = gcd(a, b)
            c_hi = (b * b + limit) // a4
            weight_edge = b == 0 or b == a
            for c in range(a, c_hi + 1):
                if g2 != 1 and gcd(g2, c) != 1:
                    continue
                d = a4 * c - b * b
                counts[d] += 1 if (weight_edge or a == c) else 2
    return counts


def _fundamental_flags(limit: int) -> bytearray:
    """flags[d] = 1 iff -d is a fundamental discriminant, 0 < d <= limit."""
    sqfree = bytearray([1]) * (limit + 1)
    for p in range(2, math.isqrt(limit) + 1):
        p2 = p * p
        sqfree[p2::p2] = bytearray(len(range(p2, limit + 1, p2)))
    flags = bytearray(limit + 1)
    for d in range(3, limit + 1):
        if d % 4 == 3:
            flags[d] = sqfree[d]
        elif d % 4 == 0:
            m = d // 4
            flags[d] = 1 if (m % 4 in (1, 2) and sqfree[m]) else 0
    return flags


def dirichlet_class_number(d: int) -> int:
    """h(-d) for fundamental -d from the weighted character sum
    h = w/(2d) * |sum_{k=1}^{d-1} k * chi_{-d}(k)|, w in {2,4,6}.
    """
    chi = _character_values(d)
    s = sum(k * chi[k] for k in range(1, d))
    w = 6 if d == 3 else 4 if d == 4 else 2
    num = w * abs(s)
    if num % (2 * d):
        raise ArithmeticError(f"character sum for -{d} not divisible by 2d")
    return num // (2 * d)


def _character_values(d: int) -> list[int]:
    """chi_{-d}(k) for 0 <= k < d, built multiplicatively over least prime factors."""
    spf = arith.smallest_prime_factors(max(d - 1, 1))
    chi = [0] * d
    if d > 1:
        chi[1] = 1
    for k in range(2, d):
        p = spf[k]
        chi[k] = arith.kronecker(-d, k) if p == k else chi[p] * chi[k // p]
    return chi


def dirichlet_class_numbers(limit: int) -> list[int]:
    """h[d] by the character-sum formula for every fundamental -d <= limit, else 0."""
    flags = _fundamental_flags(limit)
    spf = arith.smallest_prime_factors(limit)
    out = [0] * (limit + 1)
    chi = [0] * (limit + 1)
    for d in range(3, limit + 1):
        if not flags[d]:
            continue
        chi[1] = 1
        s = 0
        for k in range(2, d):
            p = spf[k]
            v = arith.kronecker(-d, k) if p == k else chi[p] * chi[k // p]
            chi[k] = v
            s += k * v
        s += 1  # k = 1 term
        w = 6 if d == 3 else 4 if d == 4 else 2
        num = w * abs(s)
        if num % (2 * d):
            raise ArithmeticError(f"character sum for -{d} not divisible by 2d")
        out[d] = num // (2 * d)
    return out


def poly_value(a4: int, a6: int, n: int, x: int, y: int) -> int:
    """G_n(x, y) = y*(u^3 + a4*u*y^2 - a6*y^3) with u = x + n*y."""
    u = x + n * y
    return y * (u * u * u + a4 * u * y * y - a6 * y * y * y)


def squarefree_box_count_band(a4: int, a6: int, n: int, y_limit: int,
                              m: int, a0: int, b0: int,
                              b_start: int, b_end: int) -> int:
    """Pairs (a,b) in (0,Y]^2, a=a0, b=b0 (mod m), b in [b_start,b_end),
    with G_n(a,b) nonzero and square-free."""
    count = 0
    b = b_start + ((b0 - b_start) % m)
    a_first = 1 + ((a0 - 1) % m)
    while b < b_end:
        if 0 < b <= y_limit:
            for a in range(a_first, y_limit + 1, m):
                v = poly_value(a4, a6, n, a, b)
                if v and arith.is_squarefree_int(abs(v)) is True:
                    count += 1
        b += m
    return count


def census_band(a4: int, a6: int, n: int, y_limit: int,
                y_start: int, y_end: int,
                a0_torsion: int | None, eps_prime: float,
                lower_const: float) -> tuple[int, int, int, int]:
    """Suitability failure counts over 0 < x < Y, y in [y_start, y_end).

    Returns (map_fail, kernel_fail, lower_fail, upper_fail) where the bound
    conditions are, in log form with s = (1 + eps'):
      lower:  log d > lower_const + s*log(u*v + v^2)
      upper:  log d < s*(2*log v + log(u*v + v^2))
    and lower_const = 2*s*(delta(E) + d(P)) - s*log 4.
    """
    map_fail = kernel_fail = lower_fail = upper_fail = 0
    s = 1.0 + eps_prime
    log = math.log
    for v in range(max(1, y_start), min(y_end, y_limit)):
        v2 = v * v
        for x in range(1, y_limit):
            u = x + n * v
            d = v * (u * u * u + a4 * u * v2 - a6 * v2 * v)
            if d <= 0 or 3 * u * u + a4 * v2 <= 0:
                map_fail += 1
            if v <= 1 or (a0_torsion is not None and d - u * v <= a0_torsion * v2):
                kernel_fail += 1
            w = log(u * v + v2)
            if d <= 0 or log(d) <= lower_const + s * w:
                lower_fail += 1
            if d > 0 and log(d) >= s * (2.0 * log(v) + w):
                upper_fail += 1
    return map_fail, kernel_fail, lower_fail, upper_fail
