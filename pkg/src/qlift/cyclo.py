"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) modulo the m-th
cyclotomic polynomial, with Fraction coordinates.  Order-1 elements are exactly
the rationals.  Mixed orders are lifted to the lcm on demand.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .ntheory import euler_phi

BigRational = Fraction


# ---------------------------------------------------------------------------
# integer/rational polynomial helpers (dense tuples, constant term first)

def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return tuple(out)


def _poly_divmod_exact(num, den):
    """Division in Z[x] assuming it is exact over Z (monic-ish denominator)."""
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            raise ArithmeticError("non-exact polynomial division")
        quot[i - dn] = q
        for j, y in enumerate(den):
            num[i - dn + j] -= q * y
    if any(num[:dn]):
        raise ArithmeticError("nonzero remainder in exact division")
    return tuple(quot)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, constant term first; monic of degree phi(m)."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return (-1, 1)
    num = tuple([-1] + [0] * (m - 1) + [1])  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divmod_exact(num, cyclotomic_polynomial(d))
    return num


@lru_cache(maxsize=None)
def _reduction_rows(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row k = coordinates of z^(phi(m)+k) in the power basis, k = 0..phi(m)-2."""
    phi = euler_phi(m)
    p = cyclotomic_polynomial(m)
    # z^phi = -(p_0 + p_1 z + ... + p_{phi-1} z^{phi-1})  (Phi_m monic)
    rows = []
    cur = [Fraction(-c) for c in p[:phi]]
    rows.append(tuple(cur))
    for _ in range(phi - 2):
        shifted = [Fraction(0)] + cur[:-1]
        top = cur[-1]
        if top:
            shifted = [s + top * r for s, r in zip(shifted, rows[0])]
        cur = shifted
        rows.append(tuple(cur))
    return tuple(rows)


def _reduce_coords(m: int, raw: list[Fraction]) -> tuple[Fraction, ...]:
    """Reduce a coefficient list (deg < 2*phi-1) modulo Phi_m to length phi."""
    phi = euler_phi(m)
    if len(raw) <= phi:
        return tuple(raw) + (Fraction(0),) * (phi - len(raw))
    rows = _reduction_rows(m)
    out = list(raw[:phi])
    for k, c in enumerate(raw[phi:]):
        if c:
            row = rows[k]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return tuple(out)


class Cyclotomic:
    """Element of Q(zeta_m) in the power basis modulo Phi_m. Immutable."""

    __slots__ = ("order", "coords", "_hash")

    def __init__(self, order: int, coords):
        phi = euler_phi(order)
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != phi:
            raise ValueError(f"need {phi} coordinates for order {order}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Cyclotomic is immutable")

    # -- constructors -----------------------------------------------------
    @staticmethod
    def from_rational(x) -> "Cyclotomic":
        return Cyclotomic(1, (Fraction(x),))

    @staticmethod
    def zero(order: int = 1) -> "Cyclotomic":
        return Cyclotomic(order, (Fraction(0),) * euler_phi(order))

    @staticmethod
    def one(order: int = 1) -> "Cyclotomic":
        c = [Fraction(0)] * euler_phi(order)
        c[0] = Fraction(1)
        return Cyclotomic(order, c)

    # -- order manipulation ------------------------------------------------
    def lift(self, new_order: int) -> "Cyclotomic":
        """Rewrite in Q(zeta_M) for m | M via zeta_m = zeta_M^(M/m)."""
        m = self.order
        if new_order == m:
            return self
        if new_order % m:
            raise ValueError("can only lift to a multiple of the order")
        step = new_order // m
        raw = [Fraction(0)] * ((len(self.coords) - 1) * step + 1)
        for i, c in enumerate(self.coords):
            if c:
                raw[i * step] += c
        return Cyclotomic(new_order, _reduce_coords(new_order, raw))

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def to_rational(self) -> Fraction | None:
        """The rational value, or None if any non-constant coordinate is nonzero."""
        if any(self.coords[1:]):
            return None
        return self.coords[0]

    # -- arithmetic ----------------------------------------------------------
    def _pair(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.from_rational(other)
        if self.order == other.order:
            return self, other
        m = math.lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._pair(other)
        return Cyclotomic(a.order, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, tuple(-x for x in self.coords))

    def __sub__(self, other):
        a, b = self._pair(other)
        return Cyclotomic(a.order, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.order, tuple(c * other for c in self.coords))
        a, b = self._pair(other)
        n = len(a.coords)
        raw = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    if y:
                        raw[i + j] += x * y
        return Cyclotomic(a.order, _reduce_coords(a.order, raw))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Field inverse via the extended Euclidean algorithm against Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        r = self.to_rational()
        if r is not None:
            return Cyclotomic(self.order, (1 / r,) + self.coords[1:])
        m = self.order
        a = [Fraction(c) for c in cyclotomic_polynomial(m)]
        b = list(self.coords)
        # extended gcd against Phi_m: maintain t with t*b = gcd (mod Phi_m)
        t0, t1 = [Fraction(0)], [Fraction(1)]

        def deg(p):
            d = len(p) - 1
            while d >= 0 and p[d] == 0:
                d -= 1
            return d

        def sub_scaled(p, q, c, shift):
            out = list(p) + [Fraction(0)] * max(0, len(q) + shift - len(p))
            for i, y in enumerate(q):
                if y:
                    out[i + shift] -= c * y
            return out

        while deg(b) > 0:
            q = [Fraction(0)] * (deg(a) - deg(b) + 1)
            rem = list(a)
            while deg(rem) >= deg(b):
                sh = deg(rem) - deg(b)
                c = rem[deg(rem)] / b[deg(b)]
                q[sh] = c
                rem = sub_scaled(rem, b, c, sh)
            a, b = b, rem
            qt1 = [Fraction(0)] * (len(q) + len(t1) - 1)
            for i, x in enumerate(q):
                if x:
                    for j, y in enumerate(t1):
                        if y:
                            qt1[i + j] += x * y
            t_new = [Fraction(0)] * max(len(t0), len(qt1))
            for i, x in enumerate(t0):
                t_new[i] += x
            for i, x in enumerate(qt1):
                t_new[i] -= x
            t0, t1 = t1, t_new
        g = b[0] if deg(b) == 0 else None
        if g is None or g == 0:
            raise ZeroDivisionError("element not invertible (unexpected)")
        inv_coords = [c / g for c in t1]
        return Cyclotomic(m, _reduce_coords(m, inv_coords))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        a, b = self._pair(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.from_rational(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Cyclotomic.one(self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            r = self.to_rational()
            return r is not None and r == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._pair(other)
        return a.coords == b.coords

    def __hash__(self):
        if self._hash is None:
            r = self.to_rational()
            h = hash(r) if r is not None else hash((self.order, self.coords))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self):
        r = self.to_rational()
        if r is not None:
            return str(r)
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                z = f"z{self.order}" + (f"^{i}" if i > 1 else "")
                parts.append(f"{c}*{z}" if abs(c) != 1 else (z if c > 0 else f"-{z}"))
        s = " + ".join(parts).replace("+ -", "- ")
        return s or "0"

    # -- analytic embedding -----------------------------------------------------
    def embed(self, prec: int = 64):
        """Complex value under zeta_m -> exp(2*pi*i/m), as an mpmath mpc at prec bits."""
        if prec < 32:
            raise ValueError("prec must be at least 32 bits")
        import mpmath

        with mpmath.workprec(prec + 16):
            z = mpmath.e ** (2j * mpmath.pi / self.order)
            acc = mpmath.mpc(0)
            for c in reversed(self.coords):
                acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
            return mpmath.mpc(acc)


def root_of_unity(m: int, b: int = 1) -> Cyclotomic:
    """zeta_m^b, canonically reduced."""
    if m < 1:
        raise ValueError("m must be positive")
    b %= m
    raw = [Fraction(0)] * (b + 1)
    raw[b] = Fraction(1)
    return Cyclotomic(m, _reduce_coords(m, raw))


def as_cyclotomic(x) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    return Cyclotomic.from_rational(x)
