"""Classical level-1 expansions and eta quotients: E_k, Delta, j, J_n, theta."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import fastseries as fs
from .qseries import QSeries


def eisenstein(k: int, T: int) -> QSeries:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n for k in {2, 4, 6}."""
    if k not in (2, 4, 6):
        raise ValueError(f"unsupported Eisenstein weight {k}")
    if T < 1:
        raise ValueError("T must be >= 1")
    return QSeries.from_int_list(fs.eisenstein(k, T))


@dataclass(frozen=True)
class EtaQuotient:
    """prod_delta eta(delta tau)^(r_delta), stored as ((delta, r), ...)."""
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for d, _ in self.factors:
            if d < 1:
                raise ValueError("eta argument multipliers must be positive")

    @property
    def valuation(self) -> Fraction:
        return Fraction(sum(d * r for d, r in self.factors), 24)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.factors), 2)


def eta_quotient_series(e: EtaQuotient, T) -> QSeries:
    T = Fraction(T)
    val = e.valuation
    if T < val:
        raise ValueError("truncation below valuation")
    n = int(T - val) + 1
    coeffs = [1] + [0] * (n - 1)
    for d, r in e.factors:
        coeffs = fs.mul(coeffs, fs.eta_product_power(d, r, n), n)
    ram = val.denominator
    terms = {val + i: Fraction(c) for i, c in enumerate(coeffs) if c}
    return QSeries(terms, T, ram)


@lru_cache(maxsize=32)
def delta_series(T: int) -> QSeries:
    """Delta = eta(tau)^24 = q prod (1-q^n)^24."""
    if T < 1:
        raise ValueError("T must be >= 1")
    return QSeries.from_int_list(fs.eta_product_power(1, 24, max(T - 1, 1)), trunc=T, shift=1)


@lru_cache(maxsize=32)
def _j_list(n: int) -> list[int]:
    """Integer coefficients of j, starting at exponent -1 (so list[0] = 1)."""
    e4 = fs.eisenstein(4, n)
    num = fs.mul(fs.mul(e4, e4, n), e4, n)
    den_inv = fs.inv(fs.eta_product_power(1, 24, n), n)
    return fs.mul(num, den_inv, n)


def j_series(T: int) -> QSeries:
    """j = E4^3 / Delta = q^-1 + 744 + 196884 q + ..."""
    if T < 1:
        raise ValueError("T must be >= 1")
    return QSeries.from_int_list(_j_list(T + 1), trunc=T, shift=-1)


@lru_cache(maxsize=8)
def _faber_family(nmax: int, T: int):
    """J_0..J_nmax (normalized q^-n + O(q)) and their Faber polynomials P_n.

    Polynomials are int tuples, constant term first, J_n = P_n(j).
    """
    j = j_series(T + nmax + 1)
    jm744 = j - 744
    Js = [QSeries.one(j.trunc), jm744]
    polys = [(1,), (-744, 1)]
    for n in range(2, nmax + 1):
        cur = jm744 * Js[n - 1]
        poly = [0] + list(polys[n - 1])
        for i, c in enumerate(polys[n - 1]):
            poly[i] -= 744 * c
        # clear principal exponents -n+1..-1 and the constant term
        for k in range(n - 1, 0, -1):
            c = cur.coefficient(-k)
            if c:
                cur = cur - Js[k] * c
                for i, pc in enumerate(polys[k]):
                    poly[i] -= int(c) * pc
        c0 = cur.coefficient(0)
        if c0:
            cur = cur - c0
            poly[0] -= int(c0)
        Js.append(cur)
        polys.append(tuple(poly))
    return Js, polys


def faber_J(n: int, T: int) -> QSeries:
    """J_n = (j - 744)|T(n), normalized to q^-n + O(q); J_0 = 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    Js, _ = _faber_family(n, T)
    return Js[n].truncate(T)


def faber_polynomial(n: int) -> tuple[int, ...]:
    """Monic integer polynomial P_n with J_n = P_n(j) (constant term first)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _, polys = _faber_family(n, max(n + 2, 4))
    return polys[n]


def theta_kohnen(T: int) -> QSeries:
    """theta = 1 + 2 sum q^(n^2)."""
    if T < 1:
        raise ValueError("T must be >= 1")
    return QSeries.from_int_list(fs.theta_list(T))
