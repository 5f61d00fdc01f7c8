"""Exact integer comparisons against expressions containing square roots.

The tower formulas compare integers with quantities like B^((n-1)/2)(sqrt(B)-1);
everything here reduces those comparisons to integer squaring so no floating
point enters any theorem check.
"""

from __future__ import annotations

from math import gcd, isqrt


def is_perfect_square(x: int) -> bool:
    if x < 0:
        return False
    r = isqrt(x)
    return r * r == x


def factor_prime_power(q: int) -> tuple[int, int]:
    """q = p^r with p prime, else ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = None
    m = q
    for d in range(2, isqrt(q) + 1):
        if m % d == 0:
            p = d
            break
    if p is None:
        return q, 1
    r = 0
    while m % p == 0:
        m //= p
        r += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, r


def epsilon(q: int) -> int:
    """2*sqrt(q) for perfect squares, else the greatest integer <= 2*sqrt(q)
    that is coprime to q."""
    if is_perfect_square(q):
        return 2 * isqrt(q)
    e = isqrt(4 * q)  # floor(2 sqrt(q))
    while e > 0 and gcd(e, q) != 1:
        e -= 1
    return e


def le_sqrt_gap(a: int, b_base: int, n: int) -> bool:
    """Exact test of  a <= B^((n-1)/2) * (sqrt(B) - 1)  for integer B >= 2.

    The right-hand side equals B^(n/2) - B^((n-1)/2); exactly one exponent is
    half-integral when B is not a perfect square, so compare by squaring.
    """
    if a <= 0:
        return True
    B = b_base
    half_exp = (n - 1) // 2
    # fast path: the right side is at least 2^(half_exp - 2)
    if n >= 2 and a.bit_length() + 2 <= half_exp:
        return True
    if n % 2 == 1:
        lhs = a + B**half_exp  # compare with B^half_exp * sqrt(B)
        return lhs * lhs <= B ** (2 * half_exp + 1)
    rest = B ** (n // 2) - a  # compare B^((n-1)/2) <= rest
    if rest < 0:
        return False
    return B ** (n - 1) <= rest * rest


def floor_sqrt_gap(b_base: int, n: int) -> int:
    """floor( B^((n-1)/2) * (sqrt(B) - 1) ) computed exactly."""
    B = b_base
    if n % 2 == 1:
        m = (n - 1) // 2
        return isqrt(B ** (2 * m + 1)) - B**m
    y = B ** (n - 1)
    s = isqrt(y)
    ceil_sqrt = s if s * s == y else s + 1
    return B ** (n // 2) - ceil_sqrt


def floor_div_sub_sqrt(a: int, b2: int, divisor: int) -> int:
    """floor( (a - sqrt(b2)) / divisor ) for integers a >= 0, b2 >= 0, divisor > 0."""
    s = isqrt(b2)
    m = (a - s - 1) // divisor
    # sqrt(b2) lies in [s, s+1); nudge up while (m+1)*divisor <= a - sqrt(b2)
    while True:
        t = a - (m + 1) * divisor
        if t >= 0 and t * t >= b2 and (t * t > b2 or s * s == b2):
            m += 1
        else:
            break
    return m
