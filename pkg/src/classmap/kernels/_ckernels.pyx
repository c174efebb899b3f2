# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot loops.

Same contracts as pykernels.py: batched class-number enumeration, the
Dirichlet character-sum class-number sweep, square-free box counting and the
suitability census. Selected at import by kernels/__init__.py.
"""

from libc.stdlib cimport malloc, free
from libc.math cimport log, sqrt, cbrt

BACKEND = "compiled"


# ---------------------------------------------------------------------------
# shared prime table (grown on demand, never shrunk)

cdef long long *g_primes = NULL
cdef Py_ssize_t g_nprimes = 0
cdef long long g_prime_limit = 0


cdef int _ensure_primes(long long limit) except -1:
    global g_primes, g_nprimes, g_prime_limit
    if limit <= g_prime_limit:
        return 0
    if limit < 1024:
        limit = 1024
    cdef long long n = limit + 1
    cdef unsigned char *flags = <unsigned char *> malloc(n)
    if flags == NULL:
        raise MemoryError()
    cdef long long i, p
    for i in range(n):
        flags[i] = 1
    flags[0] = 0
    if n > 1:
        flags[1] = 0
    p = 2
    while p * p < n:
        if flags[p]:
            i = p * p
            while i < n:
                flags[i] = 0
                i += p
        p += 1
    cdef Py_ssize_t count = 0
    for i in range(2, n):
        if flags[i]:
            count += 1
    cdef long long *primes = <long long *> malloc(count * sizeof(long long))
    if primes == NULL:
        free(flags)
        raise MemoryError()
    count = 0
    for i in range(2, n):
        if flags[i]:
            primes[count] = i
            count += 1
    free(flags)
    if g_primes != NULL:
        free(g_primes)
    g_primes = primes
    g_nprimes = count
    g_prime_limit = limit
    return 0


cdef inline long long _icbrt(long long v) nogil:
    cdef long long r = <long long> cbrt(<double> v)
    while r > 0 and r * r * r > v:
        r -= 1
    while (r + 1) * (r + 1) * (r + 1) <= v:
        r += 1
    return r


cdef inline long long _isqrt(long long v) nogil:
    cdef long long r = <long long> sqrt(<double> v)
    while r > 0 and r * r > v:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r


cdef bint _squarefree64(long long v) nogil:
    """Exact square-freeness for 1 <= v < 2^62, primes available to cbrt(v)."""
    if v < 4:
        return True
    cdef long long m = v
    cdef long long p, r
    cdef Py_ssize_t i
    for i in range(g_nprimes):
        p = g_primes[i]
        if p * p > m:
            break
        if m % p == 0:
            m //= p
            if m % p == 0:
                return False
    if m == 1:
        return True
    r = _isqrt(m)
    return r * r != m


cdef int _kronecker64(long long a, long long k) nogil:
    """Kronecker symbol (a | k) for k >= 1."""
    cdef int result = 1
    cdef long long r, t
    if k % 2 == 0:
        if a % 2 == 0:
            return 0
        while k % 2 == 0:
            k //= 2
            r = a % 8
            if r < 0:
                r += 8
            if r == 3 or r == 5:
                result = -result
    a %= k
    if a < 0:
        a += k
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = k % 8
            if r == 3 or r == 5:
                result = -result
        t = a
        a = k
        k = t
        if (a % 4 == 3) and (k % 4 == 3):
            result = -result
        a %= k
    if k == 1:
        return result
    return 0


def kronecker64(a, k):
    """Exposed for backend parity tests (k >= 1 only)."""
    return _kronecker64(a, k)


# ---------------------------------------------------------------------------
# class numbers


def class_number_counts(long long limit):
    """counts[d] = h(-d) for 0 < d <= limit with -d = 0,1 mod 4 (else 0)."""
    cdef long long *counts = <long long *> malloc((limit + 1) * sizeof(long long))
    if counts == NULL:
        raise MemoryError()
    cdef long long a, b, c, d, a4, c_hi, g2, g, x, y
    cdef long long amax
    cdef int edge
    with nogil:
        for d in range(limit + 1):
            counts[d] = 0
        amax = _isqrt(limit // 3)
        for a in range(1, amax + 1):
            a4 = 4 * a
            for b in range(0, a + 1):
                x = a
                y = b
                while y:
                    x, y = y, x % y
                g2 = x
                c_hi = (b * b + limit) // a4
                edge = 1 if (b == 0 or b == a) else 0
                for c in range(a, c_hi + 1):
                    if g2 != 1:
                        x = g2
                        y = c
                        while y:
                            x, y = y, x % y
                        if x != 1:
                            continue
                    d = a4 * c - b * b
                    counts[d] += 1 if (edge or a == c) else 2
    out = [counts[d] for d in range(limit + 1)]
    free(counts)
    return out


def dirichlet_class_number(long long d):
    """h(-d) for fundamental -d via h = w/(2d) * |sum k*chi_{-d}(k)|."""
    if d < 3:
        raise ValueError("need d >= 3")
    cdef long long n = d
    cdef int *spf = <int *> malloc(n * sizeof(int))
    cdef signed char *chi = <signed char *> malloc(n if n > 2 else 2)
    if spf == NULL or chi == NULL:
        raise MemoryError()
    cdef long long i, p, k, s, w, num
    cdef int v
    try:
        with nogil:
            for i in range(n):
                spf[i] = <int> i
            p = 2
            while p * p < n:
                if spf[p] == p:
                    i = p * p
                    while i < n:
                        if spf[i] == <int> i:
                            spf[i] = <int> p
                        i += p
                p += 1
            chi[1] = 1
            s = 1
            for k in range(2, d):
                p = spf[k]
                if p == k:
                    v = _kronecker64(-d, k)
                else:
                    v = chi[p] * chi[k // p]
                chi[k] = <signed char> v
                s += k * v
        w = 6 if d == 3 else (4 if d == 4 else 2)
        num = w * abs(s)
        if num % (2 * d):
            raise ArithmeticError(f"character sum for -{d} not divisible by 2d")
        return num // (2 * d)
    finally:
        free(spf)
        free(chi)


def dirichlet_class_numbers(long long limit):
    """h[d] by the weighted character sum for every fundamental -d <= limit, else 0."""
    cdef long long n = limit + 1
    cdef int *spf = <int *> malloc(n * sizeof(int))
    cdef unsigned char *sqfree = <unsigned char *> malloc(n)
    cdef signed char *chi = <signed char *> malloc(n if n > 2 else 2)
    cdef long long *hvals = <long long *> malloc(n * sizeof(long long))
    if spf == NULL or sqfree == NULL or chi == NULL or hvals == NULL:
        raise MemoryError()
    cdef long long i, p, d, k, m, s, w, num
    cdef int v
    try:
        with nogil:
            for i in range(n):
                spf[i] = <int> i
                sqfree[i] = 1
                hvals[i] = 0
            p = 2
            while p * p < n:
                if spf[p] == p:
                    i = p * p
                    while i < n:
                        if spf[i] == <int> i:
                            spf[i] = <int> p
                        i += p
                p += 1
            p = 2
            while p * p < n:
                i = p * p
                while i < n:
                    sqfree[i] = 0
                    i += p * p
                p += 1
            for d in range(3, n):
                # fundamental tests: -d = 1 mod 4 squarefree, or d = 4m with
                # m = 1,2 mod 4 squarefree
                if d % 4 == 3:
                    if not sqfree[d]:
                        continue
                elif d % 4 == 0:
                    m = d // 4
                    if not ((m % 4 == 1 or m % 4 == 2) and sqfree[m]):
                        continue
                else:
                    continue
                chi[1] = 1
                s = 1
                for k in range(2, d):
                    p = spf[k]
                    if p == k:
                        v = _kronecker64(-d, k)
                    else:
                        v = chi[p] * chi[k // p]
                    chi[k] = <signed char> v
                    s += k * v
                w = 6 if d == 3 else (4 if d == 4 else 2)
                num = w * (s if s >= 0 else -s)
                hvals[d] = num // (2 * d)
        out = [hvals[d] for d in range(n)]
        return out
    finally:
        free(spf)
        free(sqfree)
        free(chi)
        free(hvals)


# ---------------------------------------------------------------------------
# sieve kernels


def squarefree_box_count_band(long long a4, long long a6, long long n,
                              long long y_limit, long long m,
                              long long a0, long long b0,
                              long long b_start, long long b_end):
    """Count pairs (a,b) in (0,Y]^2 with the congruence constraints, b in the
    band [b_start, b_end), and G_n(a,b) nonzero square-free. int64 arithmetic:
    the caller guarantees |G_n| stays below 2^62 on the box."""
    cdef long long u_max = y_limit + n * y_limit
    cdef long long vbound = y_limit * (u_max * u_max * u_max
                                       + (a4 if a4 > 0 else -a4) * u_max * y_limit * y_limit
                                       + (a6 if a6 > 0 else -a6) * y_limit * y_limit * y_limit)
    _ensure_primes(_icbrt(vbound) + 1)
    cdef long long count = 0
    cdef long long a, b, u, v, a_first
    b = b_start + ((b0 - b_start) % m + m) % m
    a_first = 1 + ((a0 - 1) % m + m) % m
    with nogil:
        while b < b_end:
            if 0 < b <= y_limit:
                a = a_first
                while a <= y_limit:
                    u = a + n * b
                    v = b * (u * u * u + a4 * u * b * b - a6 * b * b * b)
                    if v < 0:
                        v = -v
                    if v != 0 and _squarefree64(v):
                        count += 1
                    a += m
            b += m
    return count


def census_band(long long a4, long long a6, long long n, long long y_limit,
                long long y_start, long long y_end,
                a0_torsion, double eps_prime, double lower_const):
    """Suitability failure counts (map, kernel, lower, upper) over the band;
    see pykernels.census_band for the exact predicates."""
    cdef bint has_a0 = a0_torsion is not None
    cdef long long a0t = a0_torsion if has_a0 else 0
    cdef double s = 1.0 + eps_prime
    cdef long long map_fail = 0, kernel_fail = 0, lower_fail = 0, upper_fail = 0
    cdef long long v, x, u, d, v2
    cdef long long lo = y_start if y_start > 1 else 1
    cdef long long hi = y_end if y_end < y_limit else y_limit
    cdef double w, logd
    with nogil:
        for v in range(lo, hi):
            v2 = v * v
            for x in range(1, y_limit):
                u = x + n * v
                d = v * (u * u * u + a4 * u * v2 - a6 * v2 * v)
                if d <= 0 or 3 * u * u + a4 * v2 <= 0:
                    map_fail += 1
                if v <= 1 or (has_a0 and d - u * v <= a0t * v2):
                    kernel_fail += 1
                w = log(<double> (u * v + v2))
                if d <= 0:
                    lower_fail += 1
                else:
                    logd = log(<double> d)
                    if logd <= lower_const + s * w:
                        lower_fail += 1
                    if logd >= s * (2.0 * log(<double> v) + w):
                        upper_fail += 1
    return map_fail, kernel_fail, lower_fail, upper_fail
