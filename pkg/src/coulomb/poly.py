"""Sparse multivariate polynomials with exact rational coefficients.

A deliberately small carrier: a polynomial is a mapping from exponent
tuples to nonzero exact rationals (``int`` or :class:`~fractions.Fraction`).  Variables are
positional; naming is left to the caller.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


def _integral(terms: Mapping[Monomial, Fraction]) -> tuple[int, list]:
    den = 1
    for c in terms.values():
        q = c.denominator
        if q != 1 and den % q:
            den = den * q // gcd(den, q)
    if den == 1:
        return 1, [(m, c.numerator) for m, c in terms.items()]
    return den, [(m, c.numerator * (den // c.denominator)) for m, c in terms.items()]


def _from_integral(nvars: int, terms: Mapping[Monomial, int], den: int) -> "Poly":
    # integral results keep plain int coefficients; they compare and hash like Fractions
    if den == 1:
        return Poly._raw(nvars, {m: c for m, c in terms.items() if c})
    return Poly._raw(nvars, {m: Fraction(c, den) for m, c in terms.items() if c})


class Poly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[tuple(mono)] = Fraction(c)
        self.terms: dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "Poly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = Fraction(c)
        if const:
            terms[(0,) * n] = Fraction(const)
        return cls._raw(n, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            c = Fraction(other)
            if not c:
                return Poly._raw(self.nvars, {})
            return Poly._raw(self.nvars, {m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        # clear denominators so the inner loop runs on ints
        d1, t1 = _integral(self.terms)
        d2, t2 = _integral(other.terms)
        out: dict[Monomial, int] = {}
        for m1, c1 in t1:
            for m2, c2 in t2:
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return _from_integral(self.nvars, out, d1 * d2)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def total_degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def leading(self) -> tuple[Monomial, Fraction]:
        """Lexicographically largest monomial and its coefficient."""
        m = max(self.terms)
        return m, self.terms[m]

    def substitute_zero(self, var: int) -> "Poly":
        return Poly._raw(self.nvars, {m: c for m, c in self.terms.items() if m[var] == 0})

    def coefficient_in(self, var: int, k: int) -> "Poly":
        """Coefficient of var**k, as a polynomial with var absent."""
        out = {}
        for m, c in self.terms.items():
            if m[var] == k:
                mm = list(m)
                mm[var] = 0
                out[tuple(mm)] = c
        return Poly._raw(self.nvars, out)

    def max_power(self, var: int) -> int:
        return max((m[var] for m in self.terms), default=0)

    def min_power(self, var: int) -> int:
        return min((m[var] for m in self.terms), default=0)

    def divide_by_variable(self, var: int) -> "Poly":
        """Exact division by a single variable; raises if not divisible."""
        out = {}
        for m, c in self.terms.items():
            if m[var] == 0:
                raise ArithmeticError("not divisible")
            mm = list(m)
            mm[var] -= 1
            out[tuple(mm)] = c
        return Poly._raw(self.nvars, out)

    def evaluate(self, values: Mapping[int, object]) -> "Poly":
        """Substitute exact values for some variables (others stay symbolic)."""
        out: dict[Monomial, Fraction] = {}
        vals = {i: Fraction(v) for i, v in values.items()}
        for m, c in self.terms.items():
            mm = list(m)
            for i, v in vals.items():
                e = mm[i]
                if e:
                    c = c * v**e
                    mm[i] = 0
            if c:
                key = tuple(mm)
                out[key] = out.get(key, 0) + c
        return Poly._raw(self.nvars, {m: c for m, c in out.items() if c})

    def scalar(self) -> Fraction:
        """Value of a constant polynomial."""
        if not self.terms:
            return Fraction(0)
        zero = (0,) * self.nvars
        if set(self.terms) != {zero}:
            raise ValueError("polynomial is not constant")
        return self.terms[zero]

    def shift(self, var_shifts: Mapping[int, Sequence]) -> "Poly":
        """Substitute x_i -> x_i + sum_j s_ij x_j for the given variables.

        ``var_shifts`` maps a variable index i to a full coefficient row s_i
        (length nvars) added to x_i.
        """
        if not var_shifts or not self.terms:
            return self
        simple = {}
        for i, row in var_shifts.items():
            nz = [j for j, c in enumerate(row) if c]
            if len(nz) != 1 or nz[0] == i or nz[0] in var_shifts or not isinstance(row[nz[0]], int):
                break
            simple[i] = (nz[0], row[nz[0]])
        else:
            return self._shift_simple(simple)
        cache: dict[tuple[int, int], Poly] = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                row = list(var_shifts[i])
                row[i] = row[i] + 1
                cache[key] = Poly.linear(row) ** e
            return cache[key]

        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            rest = list(m)
            term = None
            for i in var_shifts:
                if rest[i]:
                    f = power(i, rest[i])
                    term = f if term is None else term * f
                    rest[i] = 0
            if term is None:
                key = tuple(rest)
                out[key] = out.get(key, 0) + c
                continue
            for mm, cc in term.terms.items():
                key = tuple(a + b for a, b in zip(rest, mm))
                out[key] = out.get(key, 0) + c * cc
        return Poly._raw(self.nvars, {m: c for m, c in out.items() if c})

    def _shift_simple(self, shifts: Mapping[int, tuple[int, int]]) -> "Poly":
        """x_i -> x_i + s * x_j with integer s and x_j not itself shifted.

        Binomial expansion, one variable at a time, on integer numerators.
        """
        den, items = _integral(self.terms)
        cur: dict[Monomial, int] = dict(items)
        for i, (j, s) in shifts.items():
            nxt: dict[Monomial, int] = {}
            for m, c in cur.items():
                e = m[i]
                if e == 0:
                    nxt[m] = nxt.get(m, 0) + c
                    continue
                mm = list(m)
                binom, spow = 1, 1
                base_j = m[j]
                for k in range(e + 1):
                    mm[i] = e - k
                    mm[j] = base_j + k
                    key = tuple(mm)
                    nxt[key] = nxt.get(key, 0) + c * binom * spow
                    binom = binom * (e - k) // (k + 1)
                    spow *= s
            cur = nxt
        return _from_integral(self.nvars, cur, den)

    def __repr__(self):
        return f"Poly({self.nvars}, {self.terms!r})"

    def render(self, names: Sequence[str], key=None) -> str:
        """Render with the largest monomial first (``key`` ranks monomials)."""
        if not self.terms:
            return "0"
        if key is None:
            key = lambda m: (sum(m), m)
        parts = []
        for m in sorted(self.terms, key=key, reverse=True):
            c = self.terms[m]
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = _frac(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_frac(a)}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def product(polys: Iterable[Poly], nvars: int) -> Poly:
    out = Poly.constant(nvars, 1)
    for p in polys:
        out = out * p
    return out
