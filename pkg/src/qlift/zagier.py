"""The weight-1/2 plus-space basis f_d, its coefficient table A(n, d), Hecke
images A_m(n, d), the prime-power index-shift formula, and verifiers for the
trace relations mod prime powers."""
from __future__ import annotations

import math
import time
import threading
from fractions import Fraction

from . import fastseries as fs
from .borcherds import BorcherdsProductData, Report
from .hecke import VectorValuedCoefficients, hecke_half_power
from .ntheory import factor, is_prime, kronecker, ord_p
from .qseries import QSeries


def admissible(d: int) -> bool:
    """Indices of basis elements: d >= 0 with d = 0 or 3 mod 4."""
    return d >= 0 and d % 4 in (0, 3)


def _f3_positive(T: int) -> list[int]:
    """Positive-part coefficients A(n, 3) for 0 <= n < T.

    Seed construction: the weight-25/2 bracket of theta against E10(4 tau),
    divided by 40 Delta(4 tau) and normalized; certified in the test suite
    against the CM trace oracle and the plus-space shape.
    """
    n = T + 8
    m4 = n // 4 + 2
    e10 = fs.mul(fs.eisenstein(4, m4), fs.eisenstein(6, m4), m4)
    e10_4 = fs.dilate(e10, 4, n)
    th = fs.theta_list(n)
    b = [20 * x * i - y for (i, x), y in zip(enumerate(fs.theta_op(th)),
                                             fs.mul(th, fs.theta_op(fs.dilate(e10, 4, n) if False else e10_4), n))]
    # b = 20*Theta(theta)*E10(4t) - theta*Theta(E10(4t))
    b = [0] * n
    tt = fs.theta_op(th)
    p1 = fs.mul(tt, e10_4, n)
    p2 = fs.mul(th, fs.theta_op(e10_4), n)
    for i in range(n):
        b[i] = 20 * p1[i] - p2[i]
    eta24_4 = fs.pow_series(fs.dilate(fs.eta_euler(m4), 4, n), 24, n)
    raw = fs.mul(b, fs.inv(eta24_4, n), n)  # exponent i - 4, want q^-3 leading
    assert raw[0] == 0 and raw[1] == 40, "seed leading term corrupted"
    c0_40 = raw[4]  # 40 * constant term
    out = [0] * T
    for i in range(T):
        v = raw[i + 4] - c0_40 * th[i]
        q, r = divmod(v, 40)
        if r:
            raise ArithmeticError(f"seed coefficient at q^{i} not integral")
        out[i] = q
    out[0] = 0
    return out


def _j4_list(T: int) -> list[int]:
    """j(4 tau) as an integer list indexed by exponent + 4, truncated below T."""
    from .forms import _j_list
    m = (T + 4) // 4 + 2
    return _j_list(m)


class PlusSpaceBasis:
    """Integer table A(n, d): f_d = q^-d + sum_{n>0} A(n, d) q^n.

    Columns cover admissible d <= dmax; rows cover 0 <= n < trunc.
    Construction: seeds theta and f_3, then f_d = j(4t) f_{d-4} - corrections,
    where the corrections clear all lower principal parts and the constant.
    """

    def __init__(self, dmax: int, trunc: int):
        if dmax < 0 or trunc < 2:
            raise ValueError("need dmax >= 0 and trunc >= 2")
        self.dmax = dmax
        self.trunc = trunc
        self.columns: dict[int, list[int]] = {0: fs.theta_list(trunc)}
        if dmax >= 3:
            self.columns[3] = _f3_positive(trunc)
        if dmax >= 4:
            jl = _j4_list(trunc + dmax + 4)
            for d in range(4, dmax + 1):
                if not admissible(d):
                    continue
                self.columns[d] = self._next_column(d, jl)

    def _next_column(self, d: int, jl: list[int]) -> list[int]:
        T = self.trunc
        prev = self.columns[d - 4]
        # full list for f_{d-4} * j(4t): exponents -(d) .. T-1  (index i = exp + d)
        full_prev = [0] * (d - 4) + [0] * 0
        full_prev = [0] * (d + T)
        full_prev[0] = 0
        # f_{d-4}: principal at exp -(d-4) i.e. index 4 after shifting by d
        fp = [0] * (d - 4 + T)
        fp[0] = 1
        for i in range(1, T):
            fp[d - 4 + i] = prev[i] if i < T else 0
        fp[d - 4] = prev[0]
        jexp = [0] * (d + T)
        for k, c in enumerate(jl):
            i = 4 * k  # exponent 4k - 4, index = exp + 4
            if i < d + T:
                jexp[i] = c
        P = fs.mul(fp, jexp, d + T)  # index i = exponent i - d
        # corrections: clear principal exponents e = d-1 .. 1 and the constant
        for e in range(d - 1, 0, -1):
            c = P[d - e]
            if c == 0:
                continue
            if not admissible(e):
                raise ArithmeticError(
                    f"non-admissible principal residue q^-{e} while building f_{d}")
            col = self.columns[e]
            P[d - e] = 0
            base = d
            for i in range(1, T):
                v = col[i]
                if v:
                    P[base + i] -= c * v
            P[base] -= c * col[0]
        c0 = P[d]
        if c0:
            th = self.columns[0]
            for i in range(T):
                v = th[i]
                if v:
                    P[d + i] -= c0 * v
        out = P[d:d + T]
        out += [0] * (T - len(out))
        return out

    # -- queries ---------------------------------------------------------------
    def coefficient(self, n: int, d: int) -> int:
        """A(n, d) including the principal part (A(-d, d) = 1)."""
        if not admissible(d) or d > self.dmax:
            raise ValueError(f"inadmissible or out-of-range index d = {d}")
        if n == -d:
            return 1 if d > 0 else self.columns[0][0]
        if n < 0:
            return 0
        if n >= self.trunc:
            raise ValueError(f"row {n} beyond table truncation {self.trunc}")
        return self.columns[d][n]

    def series(self, d: int, T: int | None = None) -> QSeries:
        T = self.trunc if T is None else T
        if T > self.trunc:
            raise ValueError("beyond table truncation")
        terms = {Fraction(-d): Fraction(1)} if d else {}
        for n in range(0 if d == 0 else 1, T):
            c = self.columns[d][n]
            if c:
                terms[Fraction(n)] = Fraction(c)
        return QSeries(terms, T)

    def family(self, d: int, T: int | None = None) -> VectorValuedCoefficients:
        """The level-1 coefficient family of f_d, args below T."""
        T = self.trunc if T is None else T
        if T > self.trunc:
            raise ValueError("beyond table truncation")
        coeffs = {}
        if d > 0:
            coeffs[(-d, (-d) % 2)] = Fraction(1)
        for n in range(T):
            c = self.columns[d][n]
            if c:
                coeffs[(n, n % 2)] = Fraction(c)
        return VectorValuedCoefficients(1, coeffs)


# ---------------------------------------------------------------------------
# table registry: build lazily, grow geometrically, share within the process

_registry: list[PlusSpaceBasis] = []
_registry_lock = threading.Lock()


def build_basis(dmax: int, trunc: int) -> PlusSpaceBasis:
    return PlusSpaceBasis(dmax, trunc)


def ensure_table(dmax: int, trunc: int) -> PlusSpaceBasis:
    """A table covering (dmax, trunc), built once and cached in the process."""
    with _registry_lock:
        for t in _registry:
            if t.dmax >= dmax and t.trunc >= trunc:
                return t
        t = PlusSpaceBasis(dmax, trunc)
        _registry.append(t)
        return t


def _auto_table(dmax: int, trunc: int) -> PlusSpaceBasis:
    with _registry_lock:
        for t in _registry:
            if t.dmax >= dmax and t.trunc >= trunc:
                return t
    # round up to soften repeated rebuilds
    def up(x, step):
        return ((x + step - 1) // step) * step
    return ensure_table(max(up(dmax, 64), 64), max(up(trunc, 64), 64))


def coefficient_A(n: int, d: int) -> int:
    """A(n, d), the q^n coefficient of f_d (principal part included)."""
    if not admissible(d):
        raise ValueError(f"inadmissible index d = {d}")
    return _auto_table(d, max(n + 1, 2)).coefficient(n, d)


def bef_action(d: int, p: int, m: int) -> dict[int, int]:
    """f_d | p^m T(p^(2m)) as a formal integer combination {index: coefficient}.

    Convention: indices that are not admissible contribute nothing.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 0:
        raise ValueError("m must be >= 0")
    if not admissible(d):
        raise ValueError(f"inadmissible index d = {d}")
    if m == 0:
        return {d: 1}
    if d == 0:
        return {0: (p ** (m + 1) - 1) // (p - 1)}
    u = ord_p(d, p) // 2
    dp = d // p ** (2 * u)
    out: dict[int, int] = {}

    def put(idx_num: int, idx_den: int, coeff: int):
        if coeff == 0 or idx_num % idx_den:
            return
        idx = idx_num // idx_den
        if not admissible(idx):
            return
        out[idx] = out.get(idx, 0) + coeff

    if m < u:
        for t in range(m + 1):
            e = 2 * u - 2 * m + 4 * t
            put(p ** e * dp, 1, p ** (m - t))
    else:
        chi = kronecker(-dp, p)
        for t in range(m - u + 1):
            put(p ** (2 * t) * dp, 1, (chi ** (m - u - t)) * p ** u)
        for t in range(1, u + 1):
            e = 2 * m - 2 * u + 4 * t
            put(p ** e * dp, 1, p ** (u - t))
    return {k: v for k, v in out.items() if v}


def hecke_A(m: int, n: int, d: int) -> int:
    """A_m(n, d): q^n coefficient of the (scaled) index-m^2 Hecke image of f_d.

    Built multiplicatively: the 2-part by the index-shift formula, odd primes
    by iterating the scaled coefficient action on the family.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not admissible(d):
        raise ValueError(f"inadmissible index d = {d}")
    e2 = ord_p(m, 2) if m % 2 == 0 else 0
    odd = [(p, e) for p, e in factor(m) if p != 2]
    state = bef_action(d, 2, e2) if e2 else {d: 1}
    scale = 1
    for p, e in odd:
        scale *= p ** (2 * e)
    total = Fraction(0)
    for di, ci in state.items():
        if odd:
            fam = _auto_table(di, scale * abs(n) + 1).family(di, scale * abs(n) + 1)
            for p, e in odd:
                fam = hecke_half_power(fam, p, e)
            val = fam.get(n, n % 2)
        else:
            val = Fraction(_auto_table(di, abs(n) + 1).coefficient(n, di))
        total += ci * val
    if total.denominator != 1:
        raise ArithmeticError("scaled Hecke image must be integral")
    return int(total)


def fd_data(delta: int, d: int, nmax: int) -> BorcherdsProductData:
    """Borcherds product data of f_d twisted by delta: exponents A(delta n^2, d)."""
    if delta < 1:
        raise ValueError("delta must be a positive fundamental discriminant")
    table = _auto_table(d, delta * nmax * nmax + 1)
    exps = {}
    for n in range(1, nmax + 1):
        c = table.coefficient(delta * n * n, d)
        if c:
            exps[n] = c
    return BorcherdsProductData(delta=delta, r=delta % 2, exponents=exps, nmax=nmax,
                                level=1, weyl=Fraction(0), weight=0)


# ---------------------------------------------------------------------------
# verifiers

def _trace_over_sqrt(J_index: int, delta: int, d: int, mode: str, prec: int = 256):
    """Tr_{delta,d}(J_n) / sqrt(delta) as an exact integer, by table or CM oracle."""
    if mode == "table":
        return hecke_A(J_index, delta, d)
    from . import heegner
    from .forms import faber_polynomial
    val = heegner.twisted_trace(heegner.faber_handle(J_index), delta, d, 1, prec=prec)
    if val.denominator != 1:
        raise ArithmeticError(f"trace not integral: {val}")
    return int(val)


def verify_thm41(delta: int, d: int, p: int, m: int, nmax: int,
                 mode: str = "table", prec: int = 256) -> Report:
    """sum_t p^t Tr(J_{p^m n / p^2t}) against the index-shifted trace combination."""
    t0 = time.monotonic()
    if not is_prime(p) or delta % p == 0 or delta <= 1:
        raise ValueError("need a prime p not dividing delta > 1")
    combo = bef_action(d, p, m)
    mismatch = None
    for n in range(1, nmax + 1):
        ell = min(ord_p(n, p), m)
        lhs = 0
        for t in range(ell + 1):
            idx = p ** m * n // p ** (2 * t)
            lhs += p ** t * _trace_over_sqrt(idx, delta, d, mode, prec)
        rhs = 0
        for dt, c in combo.items():
            rhs += c * _trace_over_sqrt(n, delta, dt, mode, prec)
        if lhs != rhs:
            mismatch = n
            break
    return Report("thm41", {"delta": delta, "d": d, "p": p, "m": m,
                            "nmax": nmax, "mode": mode},
                  mismatch is None, mismatch,
                  runtime_ms=int(1000 * (time.monotonic() - t0)))


def verify_cor42(delta: int, d: int, p: int, m: int, nmax: int) -> Report:
    """The exact A-table identity, assuming ord_p(d) < 2."""
    t0 = time.monotonic()
    if not is_prime(p) or delta % p == 0 or delta <= 1:
        raise ValueError("need a prime p not dividing delta > 1")
    if ord_p(d, p) >= 2:
        raise ValueError("corollary requires ord_p(d) < 2")
    mismatch = None
    for n in range(1, nmax + 1):
        ell = min(ord_p(n, p), m)
        lhs = 0
        for t in range(ell + 1):
            idx = p ** m * n // p ** (2 * t)
            lhs += p ** t * hecke_A(idx, delta, d)
        chi = kronecker(-d, p)
        rhs = 0
        for t in range(m + 1):
            rhs += chi ** (m - t) * hecke_A(n, delta, p ** (2 * t) * d)
        if lhs != rhs:
            mismatch = n
            break
    return Report("cor42", {"delta": delta, "d": d, "p": p, "m": m, "nmax": nmax},
                  mismatch is None, mismatch,
                  runtime_ms=int(1000 * (time.monotonic() - t0)))
