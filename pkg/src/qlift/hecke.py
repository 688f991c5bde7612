"""Hecke actions: integral weight T_k(p^m), half-integral vector-valued
p*T_{1/2}(p^2) on coefficient families, and the multiplicative operator."""
from __future__ import annotations

import math
from fractions import Fraction

from .ntheory import is_prime, kronecker, ord_p
from .qseries import QSeries, _cadd, _cmul, _czero


class InvalidPrime(Exception):
    pass


# ---------------------------------------------------------------------------
# integral weight

def hecke_integral(f: QSeries, k: int, p: int) -> QSeries:
    """T_k(p): coefficient of q^n becomes c(pn) + p^(k-1) c(n/p)."""
    if not is_prime(p):
        raise InvalidPrime(f"{p} is not prime")
    if f.ram_index != 1 or any(e.denominator != 1 for e in f.terms):
        raise ValueError("hecke_integral needs integral exponents")
    t = f.trunc / p
    out: dict = {}
    pk = Fraction(p) ** (k - 1)
    seen = set()
    for e in f.terms:
        for n in (Fraction(e, p), e * p):
            if n.denominator == 1 and n < t and n not in seen:
                seen.add(n)
                c = f.terms.get(n * p, Fraction(0))
                if (Fraction(n, p)).denominator == 1:
                    cc = f.terms.get(Fraction(n, p))
                    if cc is not None:
                        c = _cadd(c, _cmul(cc, pk))
                if not _czero(c):
                    out[n] = c
    return QSeries(out, t, 1)


def hecke_integral_power(f: QSeries, k: int, p: int, m: int) -> QSeries:
    """T_k(p^m) via T_k(p^(m+1)) = T_k(p) T_k(p^m) - p^(k-1) T_k(p^(m-1))."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return f
    prev, cur = f, hecke_integral(f, k, p)
    for _ in range(m - 1):
        nxt = hecke_integral(cur, k, p) - prev.truncate(cur.trunc / p) * (Fraction(p) ** (k - 1))
        prev, cur = cur.truncate(nxt.trunc), nxt
    return cur


def shimura_power_coefficient(f: QSeries, k: int, p: int, m: int, n: int):
    """Coefficient of q^n (n >= 1) of f|T_k(p^m) by the explicit double sum."""
    if n < 1:
        raise ValueError("the explicit formula covers n >= 1 only")
    ell = min(ord_p(n, p), m)
    total: object = Fraction(0)
    for t in range(ell + 1):
        arg = Fraction(p ** m * n, p ** (2 * t))
        if arg.denominator == 1:
            total = _cadd(total, _cmul(f.coefficient(arg), Fraction(p) ** ((k - 1) * t)))
    return total


# ---------------------------------------------------------------------------
# half-integral weight coefficient families

class VectorValuedCoefficients:
    """Sparse holomorphic-part family c(n, gamma) of a weight-1/2 form for the
    (dual) Weil representation of level N.

    Support: n = sigma * gamma^2 (mod 4N).  Symmetry: c(n, -gamma) = c(n, gamma).
    """

    __slots__ = ("level", "weight", "dual_sign", "coeffs")

    def __init__(self, level: int, coeffs, weight=Fraction(1, 2), dual_sign: int = 1):
        if dual_sign not in (1, -1):
            raise ValueError("dual_sign must be +1 or -1")
        weight = Fraction(weight)
        self.level = level
        self.weight = weight
        self.dual_sign = dual_sign
        norm: dict = {}
        for (n, g), c in coeffs.items():
            c = Fraction(c)
            if not c:
                continue
            g = g % (2 * level)
            if (n - dual_sign * g * g) % (4 * level) != 0:
                raise ValueError(f"support violation at (n, gamma) = ({n}, {g})")
            key = (n, g)
            mirror = (n, (-g) % (2 * level))
            if key in norm and norm[key] != c:
                raise ValueError(f"inconsistent duplicate entry at {key}")
            norm[key] = c
            if mirror in norm and norm[mirror] != c:
                raise ValueError(f"symmetry violation at (n, gamma) = ({n}, {g})")
            norm[mirror] = c
        self.coeffs = norm

    def get(self, n, g) -> Fraction:
        if isinstance(n, Fraction):
            if n.denominator != 1:
                return Fraction(0)
            n = int(n)
        return self.coeffs.get((n, g % (2 * self.level)), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, VectorValuedCoefficients)
                and self.level == other.level and self.dual_sign == other.dual_sign
                and self.coeffs == other.coeffs)


def hecke_half(v: VectorValuedCoefficients, p: int) -> VectorValuedCoefficients:
    """The scaled action p*T_{1/2}(p^2) on a coefficient family.

    out(n, g) = p*v(p^2 n, p g) + (sigma n / p) v(n, g) + v(n/p^2, g/p).
    Needs gcd(p, 2N) = 1; at level 1 the component index is determined by n,
    so every prime (including 2) is admissible.
    """
    if not is_prime(p):
        raise InvalidPrime(f"{p} is not prime")
    if v.weight != Fraction(1, 2):
        raise ValueError("the half-integral action is implemented for weight 1/2")
    N = v.level
    scalar = (N == 1)
    if not scalar and math.gcd(p, 2 * N) != 1:
        raise InvalidPrime(f"p = {p} must be coprime to 2N = {2 * N}")
    s = v.dual_sign
    if scalar:
        def up_g(n, g):
            return (p * p * n) % 2
        def down_g(n, g):
            return (n // (p * p)) % 2
    else:
        pinv = pow(p, -1, 2 * N)
        def up_g(n, g):
            return (p * g) % (2 * N)
        def down_g(n, g):
            return (g * pinv) % (2 * N)

    candidates = set()
    for (n, g) in v.coeffs:
        if n % (p * p) == 0:
            candidates.add((n // (p * p), down_g(n, g)))
        candidates.add((n, g))
        candidates.add((n * p * p, up_g(n, g)))
    out = {}
    for (n, g) in candidates:
        if (n - s * g * g) % (4 * N) != 0:
            continue  # outside the support lattice: no such coefficient exists
        c = p * v.get(n * p * p, up_g(n, g))
        c += kronecker(s * n, p) * v.get(n, g)
        if n % (p * p) == 0:
            c += v.get(n // (p * p), down_g(n, g))
        if c:
            out[(n, g)] = c
    return VectorValuedCoefficients(N, out, v.weight, v.dual_sign)


def hecke_half_power(v: VectorValuedCoefficients, p: int, m: int) -> VectorValuedCoefficients:
    """p^m T_{1/2}(p^(2m)) via S_(m+1) = S_1 S_m - p S_(m-1) for the scaled ops."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return v
    prev, cur = v, hecke_half(v, p)
    for _ in range(m - 1):
        nxt_coeffs = dict(hecke_half(cur, p).coeffs)
        for key, c in prev.coeffs.items():
            nxt_coeffs[key] = nxt_coeffs.get(key, Fraction(0)) - p * c
        prev, cur = cur, VectorValuedCoefficients(
            v.level, {k: c for k, c in nxt_coeffs.items() if c}, v.weight, v.dual_sign)
    return cur


# ---------------------------------------------------------------------------
# multiplicative Hecke operator

def mult_hecke(f: QSeries, k: int, N: int, p: int) -> QSeries:
    """f | T(p) = eps * f(p tau) * prod_j f((tau + j)/p), leading coefficient 1.

    Takes weight k to weight (p+1)k; valuation nu to nu(p+1); the collected
    expansion must have integral exponents.
    """
    if not is_prime(p):
        raise InvalidPrime(f"{p} is not prime")
    if N % p == 0:
        raise InvalidPrime("p must not divide the level")
    if f.is_zero():
        raise ValueError("mult_hecke needs a nonzero series")
    out = f.substitute_up(p)
    for j in range(p):
        out = out * f.slash_shift(p, j)
    for e in out.terms:
        if e.denominator != 1:
            raise ArithmeticError(f"non-integral exponent {e} survived collection")
    v = out.valuation()
    lead = out.terms[v]
    from .cyclo import Cyclotomic

    if isinstance(lead, Cyclotomic):
        eps = lead.inverse()
        out = out.map_coefficients(lambda c: (c * eps) if isinstance(c, Cyclotomic)
                                   else eps * c)
    else:
        out = out * (Fraction(1) / lead)
    # collapse to ram_index 1 and rational coefficients where possible
    terms = {}
    for e, c in out.terms.items():
        if not isinstance(c, Fraction):
            r = c.to_rational()
            c = r if r is not None else c
        terms[e] = c
    return QSeries(terms, out.trunc, 1)
