"""Elementary integer arithmetic shared across modules.

Everything here is exact. gmpy2 is used for speed on big operands but all
functions accept and return plain Python ints.
"""

from __future__ import annotations

import math
import random

import gmpy2

from .errors import FactorizationError


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    g, s, t = gmpy2.gcdext(a, b)
    return int(g), int(s), int(t)


def kronecker(a: int, n: int) -> int:
    """Extended Kronecker symbol (a | n), defined for all integers.

    Conventions: (a | 0) = 1 iff a = +-1 else 0; (a | -1) = -1 iff a < 0;
    (a | 2) = 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8.
    Completely multiplicative in n.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    # factor out twos of n
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if a % 8 in (3, 5):
                result = -result
    # now n odd positive: Jacobi symbol by reciprocity
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ---------------------------------------------------------------------------
# primes


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit by Eratosthenes."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i in range(2, limit + 1) if flags[i]]


def smallest_prime_factors(limit: int) -> list[int]:
    """spf[k] = least prime factor of k for 2 <= k <= limit (spf[0]=spf[1]=0)."""
    spf = list(range(limit + 1))
    spf[0] = spf[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            for k in range(p * p, limit + 1, p):
                if spf[k] == k:
                    spf[k] = p
    return spf


_PRIME_CACHE: list[int] = []
_PRIME_CACHE_LIMIT = 0


def primes_up_to(limit: int) -> list[int]:
    """Cached prime list; grows monotonically."""
    global _PRIME_CACHE, _PRIME_CACHE_LIMIT
    if limit > _PRIME_CACHE_LIMIT:
        new_limit = max(limit, 2 * _PRIME_CACHE_LIMIT, 1 << 10)
        _PRIME_CACHE = sieve_primes(new_limit)
        _PRIME_CACHE_LIMIT = new_limit
    i = _bisect_right(_PRIME_CACHE, limit)
    return _PRIME_CACHE[:i]


def _bisect_right(seq, x):
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def is_probable_prime(n: int) -> bool:
    return gmpy2.is_prime(n, 40)


# ---------------------------------------------------------------------------
# factorization: trial division + Pollard-Brent rho


def _pollard_brent(n: int, rng: random.Random) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, trial_limit: int = 100_000, rho_rounds: int = 64) -> dict[int, int]:
    """Prime factorization of |n| as {p: exponent}.

    Trial division up to trial_limit, then Miller-Rabin + Pollard-Brent for
    the cofactor. Raises FactorizationError if a composite cofactor resists.
    """
    n = abs(n)
    if n == 0:
        raise FactorizationError("cannot factor 0")
    out: dict[int, int] = {}
    for p in primes_up_to(trial_limit):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    rng = random.Random(0xC1A55)
    stack = [n]
    budget = rho_rounds
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        root = gmpy2.iroot(m, 2)
        if root[1]:  # perfect square shortcut
            stack.extend([int(root[0])] * 2)
            continue
        if budget <= 0:
            raise FactorizationError(f"composite cofactor {m} not factored")
        budget -= 1
        d = _pollard_brent(m, rng)
        stack.extend([d, m // d])
    return out


def squarefree_part_known(factorization: dict[int, int]) -> bool:
    return all(e == 1 for e in factorization.values())


def is_squarefree_int(n: int, budget: int = 1 << 64) -> bool | None:
    """Exact square-freeness test for 1 <= n <= budget; None ("unknown") beyond.

    Trial division by primes up to n^(1/3) leaves a cofactor that is 1, a
    prime, a prime square, or a product of two distinct primes; a perfect
    square test settles it.
    """
    if n <= 0:
        raise ValueError("is_squarefree expects a positive integer")
    if n > budget:
        return None
    if n < 4:
        return True
    m = n
    cube_root = int(gmpy2.iroot(n, 3)[0]) + 1
    for p in primes_up_to(cube_root):
        if p * p > m:
            break
        if m % p == 0:
            m //= p
            if m % p == 0:
                return False
    if m == 1:
        return True
    return not gmpy2.is_square(m)


def valuation(n: int, p: int) -> int:
    """Largest e with p^e | n; n must be nonzero."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def divisors_from_factorization(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)
