"""Truncated sparse Laurent/Puiseux series in q with exact coefficients.

A series knows its exponent lattice (1/ram_index)*Z and a truncation bound
trunc: coefficients are known exactly for exponents < trunc and unknown beyond.
Coefficients are Fraction (the common case) or Cyclotomic.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction

from .cyclo import Cyclotomic, root_of_unity


class NonRationalCoefficient(Exception):
    def __init__(self, exponent):
        self.exponent = exponent
        super().__init__(f"non-rational coefficient at exponent {exponent}")


class TruncationError(Exception):
    pass


def _czero(c) -> bool:
    if isinstance(c, Cyclotomic):
        return c.is_zero()
    return c == 0


def _cadd(a, b):
    if isinstance(a, Cyclotomic) or isinstance(b, Cyclotomic):
        if not isinstance(a, Cyclotomic):
            a = Cyclotomic.from_rational(a)
        return a + b
    return a + b


def _cmul(a, b):
    if isinstance(a, Cyclotomic) or isinstance(b, Cyclotomic):
        if not isinstance(a, Cyclotomic):
            a = Cyclotomic.from_rational(a)
        return a * b
    return a * b


def _crat(c) -> Fraction | None:
    if isinstance(c, Cyclotomic):
        return c.to_rational()
    return Fraction(c)


class QSeries:
    __slots__ = ("ram_index", "trunc", "terms")

    def __init__(self, terms, trunc, ram_index: int = 1):
        trunc = Fraction(trunc)
        clean = {}
        for e, c in terms.items():
            e = Fraction(e)
            if _czero(c):
                continue
            if e >= trunc:
                continue
            if (e * ram_index).denominator != 1:
                raise ValueError(f"exponent {e} not in (1/{ram_index})Z")
            clean[e] = c
        self.ram_index = ram_index
        self.trunc = trunc
        self.terms = clean

    # -- constructors --------------------------------------------------------
    @staticmethod
    def zero(trunc, ram_index: int = 1) -> "QSeries":
        return QSeries({}, trunc, ram_index)

    @staticmethod
    def one(trunc, ram_index: int = 1) -> "QSeries":
        return QSeries({Fraction(0): Fraction(1)}, trunc, ram_index)

    @staticmethod
    def monomial(coeff, exponent, trunc, ram_index: int = 1) -> "QSeries":
        return QSeries({Fraction(exponent): coeff}, trunc, ram_index)

    @staticmethod
    def from_int_list(coeffs, trunc=None, shift: int = 0) -> "QSeries":
        """Series sum coeffs[i] q^(i+shift); trunc defaults to len+shift."""
        if trunc is None:
            trunc = len(coeffs) + shift
        return QSeries({Fraction(i + shift): Fraction(c) for i, c in enumerate(coeffs) if c},
                       trunc)

    # -- basic queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> Fraction | None:
        """Smallest known exponent; None for the (known-)zero series."""
        return min(self.terms) if self.terms else None

    def coefficient(self, e):
        e = Fraction(e)
        if e >= self.trunc:
            raise TruncationError(f"coefficient at {e} is beyond truncation {self.trunc}")
        return self.terms.get(e, Fraction(0))

    def support(self):
        return sorted(self.terms)

    def _val_or_trunc(self) -> Fraction:
        v = self.valuation()
        return v if v is not None else self.trunc

    # -- ring operations ---------------------------------------------------------
    def _common_ram(self, other: "QSeries") -> int:
        return math.lcm(self.ram_index, other.ram_index)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = QSeries({Fraction(0): other}, self.trunc, 1)
        t = min(self.trunc, other.trunc)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = _cadd(terms.get(e, Fraction(0)), c)
            if _czero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        return QSeries(terms, t, self._common_ram(other))

    __radd__ = __add__

    def __neg__(self):
        return QSeries({e: -c for e, c in self.terms.items()}, self.trunc, self.ram_index)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = QSeries({Fraction(0): other}, self.trunc, 1)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            if _czero(other):
                return QSeries({}, self.trunc, self.ram_index)
            return QSeries({e: _cmul(c, other) for e, c in self.terms.items()},
                           self.trunc, self.ram_index)
        t = min(self.trunc + other._val_or_trunc(), other.trunc + self._val_or_trunc())
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e >= t:
                    continue
                prod = _cmul(c1, c2)
                s = _cadd(out.get(e, Fraction(0)), prod)
                if _czero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return QSeries(out, t, self._common_ram(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        if n == 0:
            return QSeries.one(self.trunc, self.ram_index)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def invert(self) -> "QSeries":
        """Inverse series; requires a nonzero known valuation coefficient."""
        if self.is_zero():
            raise ZeroDivisionError("cannot invert the zero series")
        v = self.valuation()
        c0 = self.terms[v]
        inv0 = c0.inverse() if isinstance(c0, Cyclotomic) else Fraction(1) / c0
        t = self.trunc - 2 * v
        step = Fraction(1, self.ram_index)
        g = {-v: inv0}
        e = -v + step
        while e < t:
            s: object = Fraction(0)
            for ef, cf in self.terms.items():
                if ef == v:
                    continue
                eg = v + e - ef
                if eg in g:
                    s = _cadd(s, _cmul(cf, g[eg]))
            if not _czero(s):
                g[e] = _cmul(s, -inv0)
            e += step
        return QSeries(g, t, self.ram_index)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return self * other.invert()

    # -- operators from the theory ----------------------------------------------
    def theta(self) -> "QSeries":
        """q d/dq: multiply the coefficient at q^e by e."""
        return QSeries({e: _cmul(c, e) for e, c in self.terms.items() if e != 0},
                       self.trunc, self.ram_index)

    def substitute_up(self, c: int) -> "QSeries":
        """q -> q^c (exponents scaled by c)."""
        if c < 1:
            raise ValueError("substitute_up needs a positive integer")
        return QSeries({e * c: v for e, v in self.terms.items()},
                       self.trunc * c, self.ram_index)

    def slash_shift(self, p: int, j: int) -> "QSeries":
        """The series of f((tau + j)/p): a q^e -> a zeta_p^(j e) q^(e/p)."""
        if not 0 <= j < p:
            raise ValueError("need 0 <= j < p")
        new_ram = self.ram_index * p
        out = {}
        for e, c in self.terms.items():
            a = e * self.ram_index  # integer
            zeta = root_of_unity(p * self.ram_index, j * a.numerator)
            out[e / p] = _cmul(c, zeta) if j else c
        return QSeries(out, self.trunc / p, new_ram)

    def rationalize(self) -> "QSeries":
        """Same series with Fraction coefficients; error on any irrational one."""
        out = {}
        for e, c in sorted(self.terms.items()):
            r = _crat(c)
            if r is None:
                raise NonRationalCoefficient(e)
            out[e] = r
        return QSeries(out, self.trunc, self.ram_index)

    def truncate(self, t) -> "QSeries":
        t = Fraction(t)
        if t > self.trunc:
            raise TruncationError(f"cannot extend knowledge from {self.trunc} to {t}")
        return QSeries({e: c for e, c in self.terms.items() if e < t}, t, self.ram_index)

    def map_coefficients(self, fn) -> "QSeries":
        return QSeries({e: fn(c) for e, c in self.terms.items()}, self.trunc, self.ram_index)

    # -- comparisons ---------------------------------------------------------------
    def agrees_with(self, other: "QSeries", upto=None) -> bool:
        """Coefficientwise equality for exponents < upto (default: common truncation)."""
        t = min(self.trunc, other.trunc)
        if upto is not None:
            t = min(t, Fraction(upto))
        for e in set(self.terms) | set(other.terms):
            if e >= t:
                continue
            if not _czero(_cadd(self.terms.get(e, Fraction(0)),
                                _cmul(other.terms.get(e, Fraction(0)), -1))):
                return False
        return True

    def first_mismatch(self, other: "QSeries", upto=None):
        t = min(self.trunc, other.trunc)
        if upto is not None:
            t = min(t, Fraction(upto))
        bad = [e for e in set(self.terms) | set(other.terms)
               if e < t and not _czero(_cadd(self.terms.get(e, Fraction(0)),
                                             _cmul(other.terms.get(e, Fraction(0)), -1)))]
        return min(bad) if bad else None

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.trunc == other.trunc and self.agrees_with(other))

    # -- serialization ----------------------------------------------------------------
    def to_json_obj(self) -> dict:
        def frac(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        terms = []
        for e in sorted(self.terms):
            c = self.terms[e]
            if not isinstance(c, Cyclotomic):
                c = Cyclotomic.from_rational(c)
            terms.append({"exp": frac(e),
                          "coeff": {"order": c.order, "coords": [frac(x) for x in c.coords]}})
        return {"ram_index": self.ram_index, "trunc": frac(self.trunc), "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @staticmethod
    def from_json_obj(obj) -> "QSeries":
        def unfrac(s) -> Fraction:
            return Fraction(s)

        terms = {}
        for t in obj["terms"]:
            c = Cyclotomic(int(t["coeff"]["order"]), [unfrac(x) for x in t["coeff"]["coords"]])
            r = c.to_rational()
            terms[unfrac(t["exp"])] = r if r is not None else c
        return QSeries(terms, unfrac(obj["trunc"]), int(obj["ram_index"]))

    @staticmethod
    def from_json(s: str) -> "QSeries":
        return QSeries.from_json_obj(json.loads(s))

    # -- display -------------------------------------------------------------------
    def __repr__(self):
        return f"QSeries({self.text()} + O(q^{self.trunc}))"

    def text(self) -> str:
        """Rendering like 'q^-1 + 744 + 196884 q + 21493760 q^2'."""
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            cs = str(c)
            if e == 0:
                term = cs
            else:
                qs = "q" if e == 1 else f"q^{e}"
                if cs == "1":
                    term = qs
                elif cs == "-1":
                    term = f"-{qs}"
                else:
                    cs2 = f"({cs})" if (" " in cs or "+" in cs[1:] or "-" in cs[1:]) else cs
                    term = f"{cs2} {qs}"
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out
