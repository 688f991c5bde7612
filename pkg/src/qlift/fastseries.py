"""Fast arithmetic on dense integer power series (lists of ints, index = exponent).

The heavy table builders work here; results get wrapped into QSeries at the
boundary.  Multiplication uses Kronecker substitution: pack a series into one
big integer, multiply with gmpy2 (FFT-backed), unpack.  All operations are
exact.
"""
from __future__ import annotations

import math

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

_SCHOOLBOOK_CUTOFF = 900  # len(a)*len(b) below this: plain convolution


def _max_bits(a) -> int:
    m = 0
    for x in a:
        if x:
            b = x.bit_length() if x > 0 else (-x).bit_length()
            if b > m:
                m = b
    return m


def _pack(a, width_bytes: int) -> int:
    buf = bytearray(width_bytes * len(a))
    for i, x in enumerate(a):
        if x:
            o = i * width_bytes
            buf[o:o + width_bytes] = x.to_bytes(width_bytes, "little")
    return int.from_bytes(buf, "little")


def _unpack(x: int, width_bytes: int, n: int) -> list[int]:
    x = int(x)
    total = max(width_bytes * n, (x.bit_length() + 7) // 8) + 16
    buf = x.to_bytes(total, "little")
    out = []
    for i in range(n):
        o = i * width_bytes
        out.append(int.from_bytes(buf[o:o + width_bytes], "little"))
    return out


def mul(a: list[int], b: list[int], n: int) -> list[int]:
    """Product of the two series, truncated to length n."""
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    if len(a) * len(b) <= _SCHOOLBOOK_CUTOFF:
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                top = min(len(b), n - i)
                for j in range(top):
                    if b[j]:
                        out[i + j] += x * b[j]
        return out
    # Kronecker substitution with sign splitting
    bits = _max_bits(a) + _max_bits(b) + min(len(a), len(b)).bit_length() + 1
    wb = (bits + 7) // 8
    ap = [x if x > 0 else 0 for x in a]
    an = [-x if x < 0 else 0 for x in a]
    bp = [x if x > 0 else 0 for x in b]
    bn = [-x if x < 0 else 0 for x in b]
    P = mpz(_pack(ap, wb)) * _pack(bp, wb) + mpz(_pack(an, wb)) * _pack(bn, wb)
    N = mpz(_pack(ap, wb)) * _pack(bn, wb) + mpz(_pack(an, wb)) * _pack(bp, wb)
    pos = _unpack(P, wb, n)
    neg = _unpack(N, wb, n)
    return [p - q for p, q in zip(pos, neg)]


def square(a: list[int], n: int) -> list[int]:
    return mul(a, a, n)


def pow_series(a: list[int], e: int, n: int) -> list[int]:
    if e < 0:
        return pow_series(inv(a, n), -e, n)
    result = None
    base = a[:n]
    while e:
        if e & 1:
            result = base if result is None else mul(result, base, n)
        e >>= 1
        if e:
            base = mul(base, base, n)
    if result is None:
        return [1] + [0] * (n - 1)
    return result + [0] * (n - len(result))


def inv(a: list[int], n: int) -> list[int]:
    """Inverse of a series with a[0] = +-1, by Newton doubling. Exact over Z."""
    if not a or a[0] not in (1, -1):
        raise ValueError("inv needs leading coefficient +-1")
    g = [a[0]]
    k = 1
    while k < n:
        k = min(2 * k, n)
        ag = mul(a[:k], g, k)
        # g <- g*(2 - a*g)
        t = [-x for x in ag]
        t[0] += 2
        g = mul(g, t, k)
    return g[:n] + [0] * (n - len(g))


def axpy(y: list[int], c: int, x: list[int]) -> None:
    """y += c*x in place (lengths: len(x) <= len(y))."""
    if c == 0:
        return
    if c == 1:
        for i, v in enumerate(x):
            if v:
                y[i] += v
    elif c == -1:
        for i, v in enumerate(x):
            if v:
                y[i] -= v
    else:
        for i, v in enumerate(x):
            if v:
                y[i] += c * v


def dilate(a: list[int], m: int, n: int) -> list[int]:
    """Series a(q^m) truncated to length n."""
    out = [0] * n
    for i, x in enumerate(a):
        j = i * m
        if j >= n:
            break
        out[j] = x
    return out


# ---------------------------------------------------------------------------
# standard series as integer lists

def eta_euler(n: int) -> list[int]:
    """prod_{k>=1} (1 - q^k) by the pentagonal number theorem (sparse support)."""
    out = [0] * n
    out[0] = 1
    j = 1
    while True:
        e1 = j * (3 * j - 1) // 2
        e2 = j * (3 * j + 1) // 2
        if e1 >= n and e2 >= n:
            break
        s = 1 if j % 2 == 0 else -1
        if e1 < n:
            out[e1] += s
        if e2 < n:
            out[e2] += s
        j += 1
    return out


def eta_product_power(delta: int, r: int, n: int) -> list[int]:
    """prod_{k>=1} (1 - q^(delta k))^r  (no q-power prefactor)."""
    base = dilate(eta_euler((n + delta - 1) // delta + 1), delta, n)
    return pow_series(base, r, n)


def eta_quotient(factors, n: int) -> tuple[list[int], "math.Fraction | object"]:
    """Series and fractional valuation shift for prod eta(delta tau)^r.

    Returns (coeffs, shift24) where the actual series is
    q^(shift24/24) * sum coeffs[i] q^i.
    """
    out = [1] + [0] * (n - 1)
    shift24 = 0
    for delta, r in factors:
        out = mul(out, eta_product_power(delta, r, n), n)
        shift24 += delta * r
    return out, shift24


def sigma_list(k: int, n: int) -> list[int]:
    """[sigma_k(0):=0, sigma_k(1), ..., sigma_k(n-1)] by sieving."""
    out = [0] * n
    for d in range(1, n):
        dk = d ** k
        for m in range(d, n, d):
            out[m] += dk
    return out


def eisenstein(k: int, n: int) -> list[int]:
    c = {2: -24, 4: 240, 6: -504}[k]
    s = sigma_list(k - 1, n)
    out = [c * x for x in s]
    out[0] = 1
    return out


def theta_list(n: int) -> list[int]:
    out = [0] * n
    out[0] = 1
    m = 1
    while m * m < n:
        out[m * m] = 2
        m += 1
    return out


def theta_op(a: list[int], shift: int = 0) -> list[int]:
    """q d/dq on sum a[i] q^(i+shift): multiplies a[i] by (i+shift)."""
    return [x * (i + shift) for i, x in enumerate(a)]
