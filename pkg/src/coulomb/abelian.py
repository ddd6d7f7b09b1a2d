"""Coulomb-branch coordinate ring of a torus gauge theory, and its quantization.

The ring has a basis ``w^a hbar^b m^c X[lam]`` indexed by coweights ``lam``
of the torus.  Products of monopole symbols are given by explicit structure
constants: classically

    X[lam] X[mu] = prod_i L_i^{d_i(lam, mu)} X[lam + mu],
    L_i = <a_i, w> + m_i,
    d_i = (|<a_i,lam>| + |<a_i,mu>| - |<a_i,lam+mu>|) / 2,

and the quantized product is computed in the difference-operator model
``X[lam] = A_lam(w) u^lam`` with ``u^lam f(w) = f(w + hbar lam) u^lam``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import ClosureError, DimensionError, NonGenericPointError
from .lattice import pairing, rank as matrix_rank
from .poly import Poly

CLASSICAL = "classical"
QUANTIZED = "quantized"


def _int_tuple(v) -> tuple[int, ...]:
    out = []
    for x in v:
        if isinstance(x, bool) or int(x) != x:
            raise TypeError(f"expected an integer, got {x!r}")
        out.append(int(x))
    return tuple(out)


@dataclass(frozen=True)
class TorusTheory:
    """Rank-``rank`` torus acting on C^d with weights ``matter``.

    ``flavor`` optionally gives each matter direction a flavor covector of
    length ``mass_count``; the corresponding linear form picks up the mass
    ``<flavor_i, m>``.
    """

    rank: int
    matter: tuple[tuple[int, ...], ...] = ()
    flavor: tuple[tuple[int, ...], ...] | None = None
    mass_count: int = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        matter = tuple(_int_tuple(a) for a in self.matter)
        for a in matter:
            if len(a) != self.rank:
                raise DimensionError(f"matter covector {a} has length {len(a)}, expected rank {self.rank}")
        object.__setattr__(self, "matter", matter)
        flavor = self.flavor
        if flavor is not None:
            flavor = tuple(_int_tuple(f) for f in flavor)
            if len(flavor) != len(matter):
                raise DimensionError(f"{len(flavor)} flavor covectors for {len(matter)} matter covectors")
            lengths = {len(f) for f in flavor}
            if len(lengths) > 1:
                raise DimensionError("flavor covectors have inconsistent lengths")
            inferred = lengths.pop() if lengths else (self.mass_count or 0)
            if self.mass_count is not None and self.mass_count != inferred:
                raise DimensionError(f"mass_count {self.mass_count} does not match flavor covectors")
            object.__setattr__(self, "flavor", flavor)
            object.__setattr__(self, "mass_count", inferred)
        else:
            object.__setattr__(self, "mass_count", 0 if self.mass_count is None else self.mass_count)
            if self.mass_count:
                raise DimensionError("mass_count given without flavor covectors")

    @property
    def d(self) -> int:
        return len(self.matter)

    @property
    def nvars(self) -> int:
        return self.rank + 1 + self.mass_count

    @property
    def hbar_index(self) -> int:
        return self.rank

    def variable_names(self) -> list[str]:
        w = ["w"] if self.rank == 1 else [f"w{j + 1}" for j in range(self.rank)]
        m = ["m"] if self.mass_count == 1 else [f"m{k + 1}" for k in range(self.mass_count)]
        return w + ["hbar"] + m

    def linear_form(self, i: int) -> Poly:
        """L_i = <a_i, w> + <f_i, m> as a polynomial."""
        return _linear_form(self, i)

    def delta(self, lam: Sequence[int]) -> Fraction:
        return delta_dimension(self, lam)

    def massless(self) -> "TorusTheory":
        return TorusTheory(self.rank, self.matter)

    def is_positive(self) -> bool:
        """True iff delta(lam) > 0 for every nonzero coweight."""
        if self.rank == 0:
            return True
        return bool(self.matter) and matrix_rank(self.matter) == self.rank

    # element constructors
    def X(self, lam: Sequence[int]) -> "AlgebraElement":
        return monopole_generator(self, lam)

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(0,) * self.rank: Poly.constant(self.nvars, 1)})

    def scalar(self, p) -> "AlgebraElement":
        if not isinstance(p, Poly):
            p = Poly.constant(self.nvars, p)
        return AlgebraElement(self, {(0,) * self.rank: p})

    def w(self, j: int = 0) -> "AlgebraElement":
        return self.scalar(Poly.variable(self.nvars, j))

    def hbar(self) -> "AlgebraElement":
        return self.scalar(Poly.variable(self.nvars, self.hbar_index))

    def mass(self, k: int = 0) -> "AlgebraElement":
        return self.scalar(Poly.variable(self.nvars, self.rank + 1 + k))


@lru_cache(maxsize=None)
def _linear_form(theory: TorusTheory, i: int) -> Poly:
    row = list(theory.matter[i]) + [0]
    row += list(theory.flavor[i]) if theory.flavor else []
    return Poly.linear(row)


def with_masses(theory: TorusTheory, flavor: Sequence[Sequence[int]]) -> TorusTheory:
    """Attach flavor charges: each L_i = <a_i, w> becomes <a_i, w> + <f_i, m>."""
    return TorusTheory(theory.rank, theory.matter, tuple(tuple(f) for f in flavor))


def delta_dimension(theory: TorusTheory, lam: Sequence[int]) -> Fraction:
    if len(lam) != theory.rank:
        raise DimensionError(f"coweight {tuple(lam)} has length {len(lam)}, expected {theory.rank}")
    return Fraction(sum(abs(pairing(a, lam)) for a in theory.matter), 2)


class AlgebraElement:
    """Finite sum of ``coefficient(w, hbar, m) * X[lam]``.

    Treat instances as immutable.  Terms are kept sorted by sector.
    """

    __slots__ = ("theory", "terms")

    def __init__(self, theory: TorusTheory, terms: Mapping[tuple[int, ...], Poly]):
        self.theory = theory
        clean = {}
        for lam in sorted(terms):
            p = terms[lam]
            if len(lam) != theory.rank:
                raise DimensionError(f"sector {lam} does not match rank {theory.rank}")
            if p.nvars != theory.nvars:
                raise DimensionError("coefficient polynomial has the wrong number of variables")
            if p:
                clean[tuple(lam)] = p
        self.terms: dict[tuple[int, ...], Poly] = clean

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected an AlgebraElement, got {type(other).__name__}")
        if other.theory != self.theory:
            raise ValueError("elements belong to different theories")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self.theory.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for lam, p in other.terms.items():
            out[lam] = out[lam] + p if lam in out else p
        return AlgebraElement(self.theory, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.theory, {lam: -p for lam, p in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self.theory.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return AlgebraElement(self.theory, {lam: p * c for lam, p in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, p: Poly) -> "AlgebraElement":
        """Left multiplication of every coefficient by a polynomial in (w, hbar, m)."""
        return AlgebraElement(self.theory, {lam: p * c for lam, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.theory == other.theory and self.terms == other.terms

    def __hash__(self):
        return hash((self.theory, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def sectors(self) -> list[tuple[int, ...]]:
        return list(self.terms)

    def coefficient(self, lam: Sequence[int]) -> Poly:
        return self.terms.get(tuple(lam), Poly(self.theory.nvars))

    def is_hbar_free(self) -> bool:
        h = self.theory.hbar_index
        return all(p.max_power(h) == 0 for p in self.terms.values())

    def at_hbar_zero(self) -> "AlgebraElement":
        h = self.theory.hbar_index
        return AlgebraElement(self.theory, {lam: p.substitute_zero(h) for lam, p in self.terms.items()})

    def evaluate(self, w=None, hbar=None, m=None) -> "AlgebraElement":
        t = self.theory
        values = {}
        if w is not None:
            values.update({j: v for j, v in enumerate(w)})
        if hbar is not None:
            values[t.hbar_index] = hbar
        if m is not None:
            values.update({t.rank + 1 + k: v for k, v in enumerate(m)})
        return AlgebraElement(t, {lam: p.evaluate(values) for lam, p in self.terms.items()})

    def render(self) -> str:
        if not self.terms:
            return "0"
        names = self.theory.variable_names()
        return " + ".join(
            f"({p.render(names)}) * X[{','.join(str(x) for x in lam)}]" for lam, p in self.terms.items()
        )

    __str__ = render

    def __repr__(self):
        return f"AlgebraElement({self.render()})"


def monopole_generator(theory: TorusTheory, lam: Sequence[int]) -> AlgebraElement:
    lam = _int_tuple(lam)
    if len(lam) != theory.rank:
        raise DimensionError(f"coweight {lam} has length {len(lam)}, expected {theory.rank}")
    return AlgebraElement(theory, {lam: Poly.constant(theory.nvars, 1)})


def _pairings(theory: TorusTheory, lam) -> list[int]:
    return [pairing(a, lam) for a in theory.matter]


@lru_cache(maxsize=65536)
def classical_structure(theory: TorusTheory, lam: tuple, mu: tuple) -> Poly:
    """prod_i L_i^{d_i(lam, mu)}."""
    out = Poly.constant(theory.nvars, 1)
    for i, (p, q) in enumerate(zip(_pairings(theory, lam), _pairings(theory, mu))):
        twice = abs(p) + abs(q) - abs(p + q)
        if twice % 2 or twice < 0:
            raise ClosureError(f"non-integral exponent {twice}/2 for matter {i}")
        if twice:
            out = out * theory.linear_form(i) ** (twice // 2)
    return out


def _shift_factors(theory: TorusTheory, lam) -> Counter:
    """Linear factors of A_lam as labels (i, k) meaning L_i - k*hbar."""
    out = Counter()
    for i, p in enumerate(_pairings(theory, lam)):
        for k in range(-p):
            out[(i, k)] += 1
    return out


@lru_cache(maxsize=65536)
def quantized_structure(theory: TorusTheory, lam: tuple, mu: tuple, offset: Fraction = Fraction(0)) -> Poly:
    """A_lam(w) A_mu(w + hbar lam) / A_{lam+mu}(w), checked to be a polynomial."""
    p_lam = _pairings(theory, lam)
    numerator = _shift_factors(theory, lam)
    for (i, k), c in _shift_factors(theory, mu).items():
        # L_i(w + hbar lam) - k hbar = L_i(w) - (k - <a_i, lam>) hbar
        numerator[(i, k - p_lam[i])] += c
    target = _shift_factors(theory, tuple(a + b for a, b in zip(lam, mu)))
    for key, c in target.items():
        if numerator[key] < c:
            raise ClosureError(
                f"X[{lam}] X[{mu}] is not in the monopole span: missing factor L_{key[0]} - {key[1]}*hbar"
            )
    numerator.subtract(target)
    n = theory.nvars
    hbar = Poly.variable(n, theory.hbar_index)
    out = Poly.constant(n, 1)
    for (i, k), c in sorted(numerator.items()):
        if c:
            out = out * (theory.linear_form(i) - hbar * (k + offset)) ** c
    return out


def multiply(e1: AlgebraElement, e2: AlgebraElement, mode: str = CLASSICAL, offset=0) -> AlgebraElement:
    """Product in the Coulomb-branch ring (classical) or its quantization.

    ``offset`` selects the hbar offsets ``(k + offset) hbar`` of the shift
    operators; 0 and 1/2 are the usual choices and agree at hbar = 0.
    """
    e1._check(e2)
    theory = e1.theory
    out: dict[tuple[int, ...], Poly] = {}
    if mode == CLASSICAL:
        for lam, c1 in e1.terms.items():
            for mu, c2 in e2.terms.items():
                nu = tuple(a + b for a, b in zip(lam, mu))
                term = c1 * c2 * classical_structure(theory, lam, mu)
                out[nu] = out[nu] + term if nu in out else term
    elif mode == QUANTIZED:
        offset = Fraction(offset)
        h = theory.hbar_index
        for lam, c1 in e1.terms.items():
            shifts = {}
            for j, x in enumerate(lam):
                if x:
                    row = [0] * theory.nvars
                    row[h] = x
                    shifts[j] = row
            for mu, c2 in e2.terms.items():
                nu = tuple(a + b for a, b in zip(lam, mu))
                term = c1 * c2.shift(shifts) * quantized_structure(theory, lam, mu, offset)
                out[nu] = out[nu] + term if nu in out else term
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return AlgebraElement(theory, out)


def commutator(e1: AlgebraElement, e2: AlgebraElement, offset=0) -> AlgebraElement:
    return multiply(e1, e2, QUANTIZED, offset) - multiply(e2, e1, QUANTIZED, offset)


def poisson_bracket(e1: AlgebraElement, e2: AlgebraElement) -> AlgebraElement:
    """{f, g} = ((f g - g f) / hbar) at hbar = 0, lifting f, g with the same coefficients."""
    if not (e1.is_hbar_free() and e2.is_hbar_free()):
        raise ValueError("Poisson bracket needs hbar-free arguments")
    h = e1.theory.hbar_index
    c = commutator(e1, e2)
    out = {}
    for lam, p in c.terms.items():
        if p.substitute_zero(h):
            raise ArithmeticError(f"commutator is not divisible by hbar in sector {lam}")
        out[lam] = p.coefficient_in(h, 1)
    return AlgebraElement(e1.theory, out)


# gradings

@dataclass(frozen=True)
class GradingSpec:
    mode: str = "delta"
    shift: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.mode not in ("delta", "shifted"):
            raise ValueError(f"unknown grading mode {self.mode!r}")
        if self.mode == "shifted":
            if self.shift is None:
                raise ValueError("shifted grading needs a shift covector")
        if self.shift is not None:
            object.__setattr__(self, "shift", tuple(Fraction(c) for c in self.shift))


@dataclass(frozen=True)
class Inhomogeneous:
    degrees: tuple[Fraction, ...]


@dataclass(frozen=True)
class MixedCharge:
    sectors: tuple[tuple[int, ...], ...]


def sector_degree(theory: TorusTheory, lam: Sequence[int], grading: GradingSpec = GradingSpec()) -> Fraction:
    deg = delta_dimension(theory, lam)
    if grading.mode == "shifted":
        if len(grading.shift) != theory.rank:
            raise DimensionError("shift covector has the wrong length")
        deg += sum(c * x for c, x in zip(grading.shift, lam))
    return deg


def degree(e: AlgebraElement, grading: GradingSpec = GradingSpec()):
    """Common degree of all terms, or an :class:`Inhomogeneous` marker.

    w, hbar and masses have degree 1; X[lam] has degree delta(lam), plus
    <shift, lam> in shifted mode.  The zero element returns None.
    """
    degs = set()
    for lam, p in e.terms.items():
        base = sector_degree(e.theory, lam, grading)
        degs.update(base + k for k in p.total_degrees())
    if not degs:
        return None
    if len(degs) == 1:
        return degs.pop()
    return Inhomogeneous(tuple(sorted(degs)))


def topological_charge(e: AlgebraElement):
    """Sector label lam if the element lives in a single sector."""
    if len(e.terms) == 1:
        return next(iter(e.terms))
    return MixedCharge(tuple(e.terms))


# generic fiber

@dataclass(frozen=True)
class FiberWitness:
    point: tuple[Fraction, ...]
    masses: tuple[Fraction, ...]
    scalars: tuple[Fraction, ...]

    @property
    def all_nonzero(self) -> bool:
        return all(s != 0 for s in self.scalars)


def generic_fiber_witness(theory: TorusTheory, w0: Sequence, m0: Sequence = ()) -> FiberWitness:
    """Evaluate X[e_j] X[-e_j] at (w0, m0, hbar = 0) for every basis direction.

    Nonzero values mean every X[e_j] is invertible on the fiber, so the
    specialized sector algebra is the Laurent ring of the dual torus.
    """
    w0 = tuple(Fraction(x) for x in w0)
    m0 = tuple(Fraction(x) for x in m0)
    if len(w0) != theory.rank:
        raise DimensionError(f"w0 has length {len(w0)}, expected {theory.rank}")
    if len(m0) != theory.mass_count:
        raise DimensionError(f"m0 has length {len(m0)}, expected {theory.mass_count}")
    values = {j: x for j, x in enumerate(w0)}
    values.update({theory.rank + 1 + k: x for k, x in enumerate(m0)})
    values[theory.hbar_index] = 0
    for i, a in enumerate(theory.matter):
        # zero weights never enter a structure constant
        if any(a) and theory.linear_form(i).evaluate(values).scalar() == 0:
            raise NonGenericPointError(i, a, w0)
    scalars = []
    for j in range(theory.rank):
        e = tuple(int(i == j) for i in range(theory.rank))
        neg = tuple(-x for x in e)
        prod = multiply(theory.X(e), theory.X(neg), QUANTIZED)
        scalars.append(prod.coefficient((0,) * theory.rank).evaluate(values).scalar())
    return FiberWitness(w0, m0, tuple(scalars))
