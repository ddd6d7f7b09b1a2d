"""Truncated Hilbert series in q^(1/2) with optional lattice fugacities.

Exponents of q are stored as integers in units of 1/2, so ``q^(3/2)`` is the
key ``3``.  A series carries its truncation order (also in half units) and
the number of fugacities; every term ``(h, b)`` has ``h <= order_half``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

Key = tuple[int, tuple[int, ...]]


def parse_half(text) -> int:
    """Parse an order like ``10``, ``"7/2"`` or ``Fraction(7, 2)`` into half units."""
    x = Fraction(text)
    h = x * 2
    if h.denominator != 1:
        raise ValueError(f"{text!r} is not a half-integer")
    return int(h)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class GradedSeries:
    __slots__ = ("terms", "order_half", "nfug")

    def __init__(self, terms: Mapping[Key, object] | None = None, order_half: int = 0, nfug: int = 0):
        self.order_half = order_half
        self.nfug = nfug
        clean: dict[Key, Fraction] = {}
        for (h, b), c in (terms or {}).items():
            b = tuple(b)
            if len(b) != nfug:
                raise ValueError(f"fugacity vector {b} has length {len(b)}, expected {nfug}")
            if h <= order_half and c:
                clean[(h, b)] = clean.get((h, b), 0) + Fraction(c)
        self.terms = {k: v for k, v in sorted(clean.items()) if v}

    @classmethod
    def one(cls, order_half: int, nfug: int = 0) -> "GradedSeries":
        return cls({(0, (0,) * nfug): 1}, order_half, nfug)

    @classmethod
    def geometric(cls, step_half: int, order_half: int, nfug: int = 0, fug: tuple[int, ...] | None = None) -> "GradedSeries":
        """1 / (1 - q^(step/2) b^fug), truncated."""
        if step_half <= 0:
            raise ValueError("geometric series needs a positive step")
        fug = tuple(fug) if fug is not None else (0,) * nfug
        return cls({(k * step_half, tuple(k * x for x in fug)): 1 for k in range(order_half // step_half + 1)}, order_half, nfug)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, order_half: int | None = None) -> "GradedSeries":
        """Unrefined series with ``coeffs[h]`` at q^(h/2)."""
        coeffs = list(coeffs)
        if order_half is None:
            order_half = len(coeffs) - 1
        return cls({(h, ()): c for h, c in enumerate(coeffs)}, order_half, 0)

    def _compatible(self, other: "GradedSeries") -> int:
        if self.nfug != other.nfug:
            raise ValueError("series have different fugacity counts")
        return min(self.order_half, other.order_half)

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        order = self._compatible(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return GradedSeries(out, order, self.nfug)

    def __neg__(self):
        return GradedSeries({k: -c for k, c in self.terms.items()}, self.order_half, self.nfug)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GradedSeries({k: c * other for k, c in self.terms.items()}, self.order_half, self.nfug)
        order = self._compatible(other)
        out: dict[Key, Fraction] = {}
        for (h1, b1), c1 in self.terms.items():
            for (h2, b2), c2 in other.terms.items():
                h = h1 + h2
                if h > order:
                    continue
                key = (h, tuple(x + y for x, y in zip(b1, b2)))
                out[key] = out.get(key, 0) + c1 * c2
        return GradedSeries(out, order, self.nfug)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = GradedSeries.one(self.order_half, self.nfug)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (self.order_half, self.nfug, self.terms) == (other.order_half, other.nfug, other.terms)

    def truncate(self, order_half: int) -> "GradedSeries":
        if order_half > self.order_half:
            raise ValueError("cannot raise the truncation order")
        return GradedSeries(self.terms, order_half, self.nfug)

    def unrefined(self) -> "GradedSeries":
        """Set every fugacity to 1."""
        out: dict[Key, Fraction] = {}
        for (h, _), c in self.terms.items():
            out[(h, ())] = out.get((h, ()), 0) + c
        return GradedSeries(out, self.order_half, 0)

    def coefficient(self, h: int, fug: tuple[int, ...] | None = None) -> Fraction:
        if fug is not None:
            return self.terms.get((h, tuple(fug)), Fraction(0))
        return sum((c for (hh, _), c in self.terms.items() if hh == h), Fraction(0))

    def coefficients(self) -> list[Fraction]:
        """Unrefined coefficients at q^0, q^(1/2), ..., q^(order/2)."""
        out = [Fraction(0)] * (self.order_half + 1)
        for (h, _), c in self.terms.items():
            if h >= 0:
                out[h] += c
        return out

    def integer_coefficients(self) -> list[int]:
        cs = self.coefficients()
        if any(c.denominator != 1 for c in cs):
            raise ValueError("series has non-integer coefficients")
        return [int(c) for c in cs]

    def min_exponent(self) -> int | None:
        return min((h for h, _ in self.terms), default=None)

    def first_mismatch(self, other: "GradedSeries") -> Key | None:
        order = self._compatible(other)
        keys = sorted(set(self.terms) | set(other.terms))
        for k in keys:
            if k[0] > order:
                break
            if self.terms.get(k, 0) != other.terms.get(k, 0):
                return k
        return None

    def render(self) -> str:
        lines = []
        for (h, b), c in self.terms.items():
            exp = f"q^({h}/2)" if h % 2 else f"q^{h // 2}"
            fug = f" * b^({','.join(str(x) for x in b)})" if self.nfug else ""
            lines.append(f"{exp}{fug}: {format_rational(c)}")
        return "\n".join(lines)

    def to_json_obj(self) -> dict:
        return {
            "order_half": str(self.order_half),
            "fugacity_count": str(self.nfug),
            "terms": [
                [str(h), [str(x) for x in b], str(c.numerator), str(c.denominator)]
                for (h, b), c in self.terms.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "GradedSeries":
        nfug = int(obj["fugacity_count"])
        terms = {}
        for h, b, num, den in obj["terms"]:
            terms[(int(h), tuple(int(x) for x in b))] = Fraction(int(num), int(den))
        return cls(terms, int(obj["order_half"]), nfug)

    @classmethod
    def from_json(cls, text: str) -> "GradedSeries":
        return cls.from_json_obj(json.loads(text))

    def __repr__(self):
        return f"GradedSeries(order_half={self.order_half}, nfug={self.nfug}, terms={len(self.terms)})"
