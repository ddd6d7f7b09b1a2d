"""Monopole-formula Hilbert series for torus and GL-product gauge theories.

    HS(q) = sum over dominant coweights lam of  q^delta(lam) * P_lam(q),

    delta(lam) = 1/2 sum_rho |<rho, lam>| - sum_{alpha > 0} |<alpha, lam>|,

with P_lam the dressing factor prod 1/(1 - q^d) over the Casimir degrees d of
the stabilizer of lam.  The conventions are the usual ones with q = t^2.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .abelian import TorusTheory
from .errors import DimensionError, DivergenceError
from .lattice import nullspace, pairing
from .series import GradedSeries, parse_half

GL = "GL"
TORUS = "T"


@dataclass(frozen=True)
class NonabelianTheory:
    """Product of GL(n) and torus factors with matter weights on the maximal torus.

    Coordinates of the coweight lattice are the factors' coordinates in order.
    """

    factors: tuple[tuple[str, int], ...]
    matter: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        factors = tuple((str(k), int(n)) for k, n in self.factors)
        for kind, n in factors:
            if kind not in (GL, TORUS):
                raise ValueError(f"unknown factor kind {kind!r}")
            if n < 0:
                raise ValueError("factor sizes must be nonnegative")
        object.__setattr__(self, "factors", factors)
        matter = tuple(tuple(int(x) for x in rho) for rho in self.matter)
        for rho in matter:
            if len(rho) != self.rank:
                raise DimensionError(f"matter weight {rho} has length {len(rho)}, expected {self.rank}")
        object.__setattr__(self, "matter", matter)

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.factors)

    @property
    def blocks(self) -> list[tuple[str, int, int]]:
        """(kind, start, size) for every factor."""
        out, start = [], 0
        for kind, n in self.factors:
            out.append((kind, start, n))
            start += n
        return out

    @property
    def positive_roots(self) -> list[tuple[int, ...]]:
        roots = []
        for kind, start, n in self.blocks:
            if kind != GL:
                continue
            for a in range(n):
                for b in range(a + 1, n):
                    r = [0] * self.rank
                    r[start + a], r[start + b] = 1, -1
                    roots.append(tuple(r))
        return roots

    @property
    def weyl_orders(self) -> list[int]:
        return [math.factorial(n) if kind == GL else 1 for kind, n in self.factors]

    @property
    def fugacity_count(self) -> int:
        return sum(1 if kind == GL else n for kind, n in self.factors)

    def is_dominant(self, lam: Sequence[int]) -> bool:
        return all(pairing(a, lam) >= 0 for a in self.positive_roots)

    def sector_class(self, lam: Sequence[int]) -> tuple[int, ...]:
        """Class of lam in pi_1(G): block sums for GL factors, lam itself for tori."""
        out = []
        for kind, start, n in self.blocks:
            part = lam[start:start + n]
            if kind == GL:
                out.append(sum(part))
            else:
                out.extend(part)
        return tuple(out)

    @classmethod
    def from_torus(cls, theory: TorusTheory) -> "NonabelianTheory":
        return cls(((TORUS, theory.rank),), theory.matter)

    def as_torus(self) -> TorusTheory:
        if any(kind == GL and n > 1 for kind, n in self.factors):
            raise ValueError("theory has a nonabelian factor")
        return TorusTheory(self.rank, self.matter)


@dataclass(frozen=True)
class QuiverData:
    vertices: tuple
    edges: tuple[tuple, ...]
    dims: tuple[int, ...]
    framing: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        object.__setattr__(self, "framing", tuple(int(x) for x in self.framing))
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise ValueError("duplicate vertex names")
        if len(self.dims) != n or len(self.framing) != n:
            raise ValueError("dims and framing need one entry per vertex")
        if any(x < 0 for x in self.dims + self.framing):
            raise ValueError("dimensions must be nonnegative")
        for e in self.edges:
            if len(e) != 2 or e[0] not in self.vertices or e[1] not in self.vertices:
                raise ValueError(f"edge {e} has an endpoint outside the vertex set")


def quiver_to_theory(quiver: QuiverData) -> NonabelianTheory:
    """G = prod GL(V_i), N = sum Hom(V_out, V_in) + sum Hom(W_i, V_i)."""
    index = {v: i for i, v in enumerate(quiver.vertices)}
    offsets, start = [], 0
    for n in quiver.dims:
        offsets.append(start)
        start += n
    rank = start

    def unit(vertex, a):
        e = [0] * rank
        e[offsets[vertex] + a] = 1
        return e

    matter = []
    for out_v, in_v in quiver.edges:
        i, j = index[out_v], index[in_v]
        for a in range(quiver.dims[j]):
            for b in range(quiver.dims[i]):
                rho = [x - y for x, y in zip(unit(j, a), unit(i, b))]
                matter.append(tuple(rho))
    for i, w in enumerate(quiver.framing):
        for _ in range(w):
            for a in range(quiver.dims[i]):
                matter.append(tuple(unit(i, a)))
    factors = tuple((GL, n) for n in quiver.dims if n > 0)
    return NonabelianTheory(factors, tuple(matter))


def _as_nonabelian(theory) -> NonabelianTheory:
    if isinstance(theory, TorusTheory):
        return NonabelianTheory.from_torus(theory)
    return theory


def monopole_delta(theory, lam: Sequence[int]) -> Fraction:
    theory = _as_nonabelian(theory)
    if len(lam) != theory.rank:
        raise DimensionError(f"coweight {tuple(lam)} has length {len(lam)}, expected {theory.rank}")
    matter = sum(abs(pairing(rho, lam)) for rho in theory.matter)
    roots = sum(abs(pairing(a, lam)) for a in theory.positive_roots)
    return Fraction(matter, 2) - roots


def casimir_degrees(theory, lam: Sequence[int]) -> tuple[int, ...]:
    """Casimir degrees of the stabilizer of lam (a Levi subgroup)."""
    theory = _as_nonabelian(theory)
    degs = []
    for kind, start, n in theory.blocks:
        part = lam[start:start + n]
        if kind == TORUS:
            degs.extend([1] * n)
            continue
        for _, group in itertools.groupby(sorted(part)):
            b = len(list(group))
            degs.extend(range(1, b + 1))
    return tuple(sorted(degs))


@lru_cache(maxsize=None)
def _dressing(degrees: tuple[int, ...], order_half: int) -> GradedSeries:
    out = GradedSeries.one(order_half)
    for d in degrees:
        out = out * GradedSeries.geometric(2 * d, order_half)
    return out


def dressing_factor(theory, lam: Sequence[int], order) -> GradedSeries:
    return _dressing(casimir_degrees(theory, lam), parse_half(order))


def _rays(theory: NonabelianTheory) -> list[tuple[int, ...]]:
    """Extreme rays of the fan on which delta and |.|_1 are both linear,
    intersected with the dominant cone."""
    n = theory.rank
    hyper = set()
    for h in list(theory.matter) + theory.positive_roots + [tuple(int(i == j) for j in range(n)) for i in range(n)]:
        if any(h):
            g = math.gcd(*h)
            h = tuple(x // g for x in h)
            if next(x for x in h if x) < 0:
                h = tuple(-x for x in h)
            hyper.add(h)
    hyper = sorted(hyper)
    rays = set()
    for subset in itertools.combinations(hyper, n - 1):
        kernel = nullspace(list(subset), ncols=n) if subset else nullspace([], ncols=n)
        if len(kernel) != 1:
            continue
        r = kernel[0]
        for s in (r, tuple(-x for x in r)):
            if theory.is_dominant(s):
                rays.add(s)
    return sorted(rays)


def search_box(theory, order_half: int) -> tuple[list[int], list[int]]:
    """Coordinate box containing every dominant lam with 2*delta(lam) <= order_half.

    delta is linear on each cone of the fan cut out by the matter, root and
    coordinate hyperplanes, so the region ``delta <= D`` is the union of the
    polytopes conv(0, D r / delta(r)) over the extreme rays r.  A ray with
    delta(r) <= 0 is a flat or negative direction and the series diverges.
    """
    theory = _as_nonabelian(theory)
    D = Fraction(order_half, 2)
    lo = [0] * theory.rank
    hi = [0] * theory.rank
    for r in _rays(theory):
        d = monopole_delta(theory, r)
        if d <= 0:
            raise DivergenceError(r, d)
        for k, x in enumerate(r):
            v = D * x / d
            hi[k] = max(hi[k], math.floor(v))
            lo[k] = min(lo[k], math.ceil(v))
    return lo, hi


def _box_chunks(lo: Sequence[int], hi: Sequence[int], limit: int = 1 << 21) -> Iterator[np.ndarray]:
    sizes = [h - l + 1 for l, h in zip(lo, hi)]
    if not sizes:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    if math.prod(sizes) <= limit or len(sizes) == 1:
        grids = np.meshgrid(*[np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)], indexing="ij")
        yield np.stack([g.ravel() for g in grids], axis=1)
        return
    for first in range(lo[0], hi[0] + 1):
        for chunk in _box_chunks(lo[1:], hi[1:], limit):
            yield np.hstack([np.full((chunk.shape[0], 1), first, dtype=np.int64), chunk])


def dominant_coweights(theory, order_half: int) -> list[tuple[tuple[int, ...], int]]:
    """All dominant lam with 2*delta(lam) <= order_half, with 2*delta(lam).

    Raises DivergenceError when some nonzero dominant coweight has
    delta <= 0.
    """
    theory = _as_nonabelian(theory)
    if theory.rank == 0:
        return [((), 0)]
    lo, hi = search_box(theory, order_half)
    R = np.array(theory.matter, dtype=np.int64).reshape(-1, theory.rank)
    A = np.array(theory.positive_roots, dtype=np.int64).reshape(-1, theory.rank)
    out = []
    for pts in _box_chunks(lo, hi):
        if A.shape[0]:
            pts = pts[(pts @ A.T >= 0).all(axis=1)]
        twice = np.abs(pts @ R.T).sum(axis=1) - 2 * np.abs(pts @ A.T).sum(axis=1)
        keep = twice <= order_half
        for lam, h in zip(pts[keep].tolist(), twice[keep].tolist()):
            out.append((tuple(lam), int(h)))
    out.sort(key=lambda t: (t[1], t[0]))
    return out


def monopole_hilbert_series(theory, order, include_fugacities: bool = False) -> GradedSeries:
    """Lattice sum over dominant coweights of q^delta times the dressing factor."""
    theory = _as_nonabelian(theory)
    order_half = parse_half(order)
    nfug = theory.fugacity_count if include_fugacities else 0
    acc: dict = {}
    for lam, h in dominant_coweights(theory, order_half):
        fug = theory.sector_class(lam) if include_fugacities else ()
        dress = _dressing(casimir_degrees(theory, lam), order_half)
        for (hd, _), c in dress.terms.items():
            if h + hd <= order_half:
                key = (h + hd, fug)
                acc[key] = acc.get(key, 0) + c
    return GradedSeries(acc, order_half, nfug)


def algebra_hilbert_series(theory: TorusTheory, order) -> GradedSeries:
    """Graded dimensions of the monomial basis w^alpha X[lam], counted directly."""
    from .presentation import graded_basis

    order_half = parse_half(order)
    acc: dict = {}
    for alpha, lam in graded_basis(theory, Fraction(order_half, 2)):
        h = 2 * sum(alpha) + int(2 * theory.delta(lam))
        acc[(h, ())] = acc.get((h, ()), 0) + 1
    return GradedSeries(acc, order_half, 0)
