"""Generalized Borcherds products: expansion, logarithmic-derivative lift,
multiplicative Hecke transport on product data, and identity verifiers."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import forms
from .cyclo import Cyclotomic, root_of_unity
from .hecke import VectorValuedCoefficients, hecke_half, hecke_integral, mult_hecke
from .ntheory import is_fundamental_discriminant, is_prime, kronecker
from .qseries import QSeries, _cadd, _cmul, _czero


@dataclass(frozen=True)
class BorcherdsProductData:
    """Product-side data: q^weyl * prod_{n,b} (1 - zeta^b q^n)^((D/b) c(n)).

    exponents[n] = c+(|D| n^2, r n) for 1 <= n <= nmax (zeros omitted);
    weight = c+(0, 0), nonzero only for delta = 1.
    """
    delta: int
    r: int
    exponents: dict
    nmax: int
    level: int = 1
    weyl: Fraction = Fraction(0)
    weight: int = 0

    def __post_init__(self):
        if not is_fundamental_discriminant(self.delta) or self.delta < 1:
            raise ValueError(f"delta = {self.delta} is not a positive fundamental discriminant")
        if (self.r * self.r - self.delta) % (4 * self.level) != 0:
            raise ValueError("r^2 must be congruent to delta mod 4N")
        if self.delta != 1 and self.weight != 0:
            raise ValueError("weight must vanish for twisted products")
        object.__setattr__(self, "weyl", Fraction(self.weyl))
        for n, c in self.exponents.items():
            if n < 1 or n > self.nmax or int(c) != c:
                raise ValueError(f"bad exponent entry {n}: {c}")

    def exponent(self, n: int) -> int:
        if n > self.nmax:
            raise ValueError(f"exponent data only known for n <= {self.nmax}")
        return self.exponents.get(n, 0)

    def family(self) -> VectorValuedCoefficients:
        """The diagonal coefficient family (|D| n^2, r n), plus the (0,0) entry."""
        coeffs = {}
        if self.weight:
            coeffs[(0, 0)] = Fraction(self.weight)
        for n, c in self.exponents.items():
            if c:
                coeffs[(self.delta * n * n, (self.r * n) % (2 * self.level))] = Fraction(c)
        return VectorValuedCoefficients(self.level, coeffs)


def expand_psi(data: BorcherdsProductData, T) -> QSeries:
    """Truncated q-expansion of the product (coefficients in Q(zeta_delta))."""
    T = Fraction(T)
    rel = T - data.weyl
    if rel > data.nmax + 1:
        raise ValueError(f"need exponent data to n = {math.ceil(rel) - 1}, have {data.nmax}")
    D = data.delta
    acc = QSeries.one(rel)
    for n in range(1, math.ceil(rel)):
        c = data.exponents.get(n, 0)
        if not c:
            continue
        for b in range(D):
            s = kronecker(D, b)
            if not s:
                continue
            e = s * c
            # (1 - zeta^b q^n)^e as a binomial series, truncated
            kmax = int((rel - 1) // n) if rel > 1 else 0
            terms = {Fraction(0): Fraction(1)}
            binom = Fraction(1)
            for k in range(1, kmax + 1):
                binom = binom * Fraction(e - (k - 1), k)
                if binom == 0:
                    break
                coef = binom if k % 2 == 0 else -binom
                zz = root_of_unity(D, b * k)
                zr = zz.to_rational()
                terms[Fraction(n * k)] = coef * zr if zr is not None else zz * coef
            acc = acc * QSeries(terms, rel)
    if data.weyl:
        acc = QSeries({e + data.weyl: c for e, c in acc.terms.items()}, T,
                      math.lcm(acc.ram_index, data.weyl.denominator))
    return acc


@lru_cache(maxsize=128)
def _gauss_sum(D: int, t: int) -> Cyclotomic:
    """sum_{b mod D} (D/b) zeta_D^(b t)."""
    acc = Cyclotomic.zero(D if D > 1 else 1)
    for b in range(D):
        s = kronecker(D, b)
        if s:
            acc = acc + root_of_unity(D, b * t) * s
    return acc


def log_derivative(f: QSeries, k: int) -> QSeries:
    """The weight-raising logarithmic derivative Theta(f)/f - k E2 / 12."""
    if f.is_zero():
        raise ZeroDivisionError("log derivative of the zero series")
    g = f.theta() * f.invert()
    e2 = forms.eisenstein(2, max(2, math.ceil(g.trunc)))
    return g - e2 * Fraction(k, 12)


def log_derivative_closed(data: BorcherdsProductData, T) -> QSeries:
    """Closed-form coefficients of the log-derivative lift of the product:
    weyl - sum_n ( sum_{b, m|n} c_b(m) m zeta^(bn/m) ) q^n - (weight/12) E2."""
    T = Fraction(T)
    if T > data.nmax + 1:
        raise ValueError("insufficient exponent data")
    D = data.delta
    terms = {Fraction(0): Fraction(data.weyl)}
    for n in range(1, math.ceil(T)):
        s: object = Fraction(0)
        for m in range(1, n + 1):
            if n % m:
                continue
            c = data.exponents.get(m, 0)
            if not c:
                continue
            g = _gauss_sum(D, n // m)
            s = _cadd(s, _cmul(g, Fraction(c * m)))
        if not _czero(s):
            terms[Fraction(n)] = _cmul(s, Fraction(-1))
    out = QSeries(terms, T)
    e2 = forms.eisenstein(2, max(2, math.ceil(T)))
    return out - e2 * Fraction(data.weight, 12)


def mult_hecke_product(data: BorcherdsProductData, p: int) -> BorcherdsProductData:
    """Exponent-level multiplicative Hecke: the scaled half-integral action on
    the underlying family; weyl -> (p+1) weyl, weight -> (p+1) weight."""
    if not is_prime(p) or data.level * data.delta % p == 0:
        raise ValueError("p must be a prime not dividing N * delta")
    image = hecke_half(data.family(), p)
    new_nmax = data.nmax // p
    D = data.delta
    new_exp = {}
    for n in range(1, new_nmax + 1):
        c = image.get(D * n * n, (data.r * n) % (2 * data.level))
        if c:
            if c.denominator != 1:
                raise ArithmeticError("scaled Hecke image must be integral")
            new_exp[n] = int(c)
    return BorcherdsProductData(
        delta=D, r=data.r, exponents=new_exp, nmax=new_nmax, level=data.level,
        weyl=data.weyl * (p + 1), weight=data.weight * (p + 1))


def delta_function_data(nmax: int) -> BorcherdsProductData:
    """The untwisted product of 12*theta: q * prod (1-q^n)^24 (the Delta function)."""
    return BorcherdsProductData(delta=1, r=1, exponents={n: 24 for n in range(1, nmax + 1)},
                                nmax=nmax, weyl=Fraction(1), weight=12)


# ---------------------------------------------------------------------------
# verification reports

@dataclass
class Report:
    check: str
    params: dict
    ok: bool
    first_mismatch: object = None
    residuals: list = field(default_factory=list)
    runtime_ms: int = 0

    def as_dict(self) -> dict:
        out = {"check": self.check, "params": self.params, "pass": self.ok,
               "first_mismatch": None if self.first_mismatch is None else str(self.first_mismatch)}
        if self.residuals:
            out["residuals"] = [float(f"{r:.6e}") for r in self.residuals]
        out["runtime_ms"] = self.runtime_ms
        return out


def verify_thm31(data: BorcherdsProductData, p: int, T: int) -> Report:
    """expand(transported data) == mult_hecke(expand(data)) through q^T."""
    t0 = time.monotonic()
    lhs = expand_psi(mult_hecke_product(data, p), T)
    need = p * T + p
    rhs = mult_hecke(expand_psi(data, need), data.weight, data.level, p)
    mism = lhs.first_mismatch(rhs, upto=T)
    return Report("thm31", {"delta": data.delta, "p": p, "order": T},
                  mism is None, mism, runtime_ms=int(1000 * (time.monotonic() - t0)))


def verify_thm32(data: BorcherdsProductData, p: int, T: int) -> Report:
    """closed log-derivative of transported data == T_2(p) of the original one."""
    t0 = time.monotonic()
    lhs = log_derivative_closed(mult_hecke_product(data, p), T)
    rhs = hecke_integral(log_derivative_closed(data, p * T + p), 2, p)
    mism = lhs.first_mismatch(rhs, upto=T)
    return Report("thm32", {"delta": data.delta, "p": p, "order": T},
                  mism is None, mism, runtime_ms=int(1000 * (time.monotonic() - t0)))


# ---------------------------------------------------------------------------
# Faber duality: Theta(j)/(j - X) = -sum P_n(X) q^n with polynomial coefficients

def _poly_add(a, b):
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _poly_scale(a, c):
    return tuple(x * c for x in a)


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return tuple(out)


def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a) if a else (Fraction(0),)


def faber_duality(T: int) -> Report:
    """Check Theta(j) * (j - X)^(-1) has q^n coefficient -P_n(X) for 0 <= n < T."""
    t0 = time.monotonic()
    if T < 2:
        raise ValueError("T must be >= 2")
    j = forms.j_series(T + 2)
    # series with coefficients in Q[X]: dict exponent -> tuple
    f = {e: (Fraction(c),) for e, c in j.terms.items()}
    f[Fraction(0)] = _poly_add(f.get(Fraction(0), (Fraction(0),)), (Fraction(0), Fraction(-1)))
    num = {e: (Fraction(c * e),) for e, c in j.terms.items() if e}
    # invert f = q^-1 (1 + u): recursive division, valuation -1, unit leading coeff 1
    v = Fraction(-1)
    t_inv = j.trunc - 2 * v
    g: dict = {-v: (Fraction(1),)}
    e = -v + 1
    while e < t_inv:
        s = (Fraction(0),)
        for ef, cf in f.items():
            if ef == v:
                continue
            eg = v + e - ef
            if eg in g:
                s = _poly_add(s, _poly_mul(cf, g[eg]))
        s = _poly_trim(s)
        if s != (Fraction(0),):
            g[e] = _poly_scale(s, Fraction(-1))
        e += 1
    # product num * g, truncated at T
    prod: dict = {}
    for e1, c1 in num.items():
        for e2, c2 in g.items():
            e = e1 + e2
            if e < T:
                prod[e] = _poly_add(prod.get(e, (Fraction(0),)), _poly_mul(c1, c2))
    mism = None
    for n in range(T):
        got = _poly_trim(prod.get(Fraction(n), (Fraction(0),)))
        want = _poly_trim(tuple(Fraction(-c) for c in forms.faber_polynomial(n)))
        if got != want:
            mism = n
            break
    return Report("faber_duality", {"order": T}, mism is None, mism,
                  runtime_ms=int(1000 * (time.monotonic() - t0)))


# ---------------------------------------------------------------------------
# Galois structure of twisted expansions

def galois_conjugate(c, a: int):
    """zeta -> zeta^a on a coefficient (a coprime to the order)."""
    if not isinstance(c, Cyclotomic):
        return c
    m = c.order
    if math.gcd(a, m) != 1:
        raise ValueError("conjugation index must be coprime to the order")
    acc = Cyclotomic.zero(m)
    for i, x in enumerate(c.coords):
        if x:
            acc = acc + root_of_unity(m, i * a) * x
    return acc


def split_quadratic(c, D: int) -> tuple[Fraction, Fraction]:
    """Exact (u, v) with c = u + v sqrt(D), for coefficients of twisted products.

    sqrt(D) is realized as the Gauss sum of the Kronecker character mod D.
    Raises NonRationalCoefficient-style errors via to_rational checks.
    """
    if D == 1:
        r = c.to_rational() if isinstance(c, Cyclotomic) else Fraction(c)
        if r is None:
            raise ArithmeticError("expected a rational coefficient")
        return r, Fraction(0)
    if not isinstance(c, Cyclotomic):
        return Fraction(c), Fraction(0)
    a = next(x for x in range(2, D) if math.gcd(x, D) == 1 and kronecker(D, x) == -1)
    sig = galois_conjugate(c.lift(D) if D % c.order == 0 else c, a)
    g = _gauss_sum(D, 1)
    u2 = (c + sig)
    v2 = (c - sig) * g.inverse()
    u = u2.to_rational()
    v = v2.to_rational()
    if u is None or v is None:
        raise ArithmeticError("coefficient does not lie in Q(sqrt(D))")
    return u / 2, v / 2
