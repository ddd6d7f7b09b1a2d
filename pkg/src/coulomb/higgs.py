"""Higgs-branch Hilbert series of torus gauge theories.

For a torus T of rank r acting on C^d with charges c_i, the hyperkahler
quotient of C^d + (C^d)* is counted by the constant term in z of

    (1 - q)^r * prod_i 1 / ((1 - t z^c_i) (1 - t z^-c_i)),     t = q^(1/2).

The expansion is a plain truncated power series in t with Laurent monomials
in z, so the constant term is exact.  ``invariant_count_series`` counts the
same thing by brute force, which catches non-flat moment maps.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .abelian import TorusTheory
from .errors import DimensionError
from .lattice import DualSequence, as_matrix, rank as matrix_rank
from .monopole import monopole_hilbert_series
from .series import GradedSeries, format_rational, parse_half

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HiggsInput:
    rank: int
    charges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("gauge rank must be nonnegative")
        charges = tuple(tuple(int(x) for x in c) for c in self.charges)
        for c in charges:
            if len(c) != self.rank:
                raise DimensionError(f"charge {c} has length {len(c)}, expected {self.rank}")
        object.__setattr__(self, "charges", charges)

    @property
    def d(self) -> int:
        return len(self.charges)

    def negated(self) -> "HiggsInput":
        return HiggsInput(self.rank, tuple(tuple(-x for x in c) for c in self.charges))

    def moment_maps(self) -> list[tuple[int, ...]]:
        """mu_k = sum_i c_ik x_i y_i, as coefficient vectors over i."""
        return [tuple(c[k] for c in self.charges) for k in range(self.rank)]


def molien_series(inp: HiggsInput, order, moment_map: bool = True) -> GradedSeries:
    """Constant term of the Molien integrand, truncated at ``order``."""
    H = parse_half(order)
    r = inp.rank
    zero = (0,) * r
    # reach[i][k]: how far factors i.. can still move z_k per unit of t-degree
    reach = [[0] * r for _ in range(inp.d + 1)]
    for i in range(inp.d - 1, -1, -1):
        reach[i] = [max(a, abs(b)) for a, b in zip(reach[i + 1], inp.charges[i])]

    acc = {(0, zero): 1}
    for i, c in enumerate(inp.charges):
        nxt: dict = {}
        for (h, z), coeff in acc.items():
            for a in range(H - h + 1):
                for b in range(H - h - a + 1):
                    hh = h + a + b
                    zz = tuple(x + (a - b) * y for x, y in zip(z, c))
                    if any(abs(x) > (H - hh) * m for x, m in zip(zz, reach[i + 1])):
                        continue
                    key = (hh, zz)
                    nxt[key] = nxt.get(key, 0) + coeff
        acc = nxt
    out = GradedSeries({(h, ()): c for (h, z), c in acc.items() if z == zero}, H)
    if moment_map:
        out = out * (GradedSeries({(0, ()): 1, (2, ()): -1}, H) ** r)
    return out


def higgs_hilbert_series(inp: HiggsInput, order, moment_map: bool = True) -> GradedSeries:
    return molien_series(inp, order, moment_map)


def _monomials(nvars: int, total: int):
    if nvars == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _monomials(nvars - 1, total - first):
            yield (first,) + rest


def _invariant_monomials(inp: HiggsInput, total: int) -> list[tuple[int, ...]]:
    """Exponents (a_1..a_d, b_1..b_d) of x^a y^b with weight sum (a_i - b_i) c_i = 0."""
    d, r = inp.d, inp.rank
    out = []
    for e in _monomials(2 * d, total):
        if all(sum((e[i] - e[d + i]) * inp.charges[i][k] for i in range(d)) == 0 for k in range(r)):
            out.append(e)
    return out


def invariant_count_series(inp: HiggsInput, order) -> GradedSeries:
    """dim of (C[x, y] / (mu))^T degree by degree, by exact linear algebra.

    Invariant monomials span C[x, y]^T, and since each mu_k is invariant the
    invariant part of the ideal is spanned by mu_k times invariant monomials
    two steps lower.
    """
    H = parse_half(order)
    d = inp.d
    mus = inp.moment_maps()
    inv = {n: _invariant_monomials(inp, n) for n in range(H + 1)}
    coeffs = []
    for n in range(H + 1):
        basis = {e: j for j, e in enumerate(inv[n])}
        rows = []
        if n >= 2:
            for mu in mus:
                for e in inv[n - 2]:
                    row = [0] * len(basis)
                    for i, ci in enumerate(mu):
                        if ci:
                            f = list(e)
                            f[i] += 1
                            f[d + i] += 1
                            row[basis[tuple(f)]] += ci
                    if any(row):
                        rows.append(row)
        coeffs.append(len(basis) - (matrix_rank(rows) if rows else 0))
    return GradedSeries.from_coefficients(coeffs, H)


def molien_flags(inp: HiggsInput, order) -> list[str]:
    """Empty when the Molien count matches the brute-force count through ``order``."""
    bad = molien_series(inp, order).first_mismatch(invariant_count_series(inp, order))
    if bad is None:
        return []
    log.warning("moment map not flat for charges %s", inp.charges)
    h = bad[0]
    label = f"q^{h // 2}" if h % 2 == 0 else f"q^({h}/2)"
    return [f"Molien count disagrees with invariant count at {label}"]


def dual_higgs_input(B, seq: DualSequence | None = None) -> HiggsInput:
    """Higgs side of the dual pair: T_F^vee acting with charges from the columns of C."""
    seq = seq or DualSequence.from_inclusion(B)
    C = seq.quotient
    d = as_matrix(B).nrows
    return HiggsInput(C.nrows, tuple(C.column(i) for i in range(d)) if C.nrows else ((),) * d)


def coulomb_theory(B) -> TorusTheory:
    B = as_matrix(B)
    return TorusTheory(B.ncols, B.rows)


def _format_half(h: int) -> str:
    return str(h // 2) if h % 2 == 0 else f"{h}/2"


def duality_check(B, order, flag_order=3) -> dict:
    """Compare the Coulomb series of (T via B, C^d) with the dual Higgs series.

    Both sides are expanded independently.  ``flags`` records the saturation
    index when it is not 1 and any low-order disagreement between the Molien
    count and the brute-force invariant count.
    """
    B = as_matrix(B)
    H = parse_half(order)
    seq = DualSequence.from_inclusion(B)
    flags = []
    if not seq.saturated:
        flags.append(f"embedding index {seq.index}; torsion quotient not modeled")
    coulomb = monopole_hilbert_series(coulomb_theory(B), order)
    higgs_in = dual_higgs_input(B, seq)
    higgs = higgs_hilbert_series(higgs_in, order)

    flags += molien_flags(higgs_in, _format_half(min(H, parse_half(flag_order))))

    report = {"status": "equal", "order_checked": _format_half(H), "flags": flags}
    mismatch = coulomb.first_mismatch(higgs)
    if mismatch is not None:
        h = mismatch[0]
        report["status"] = "mismatch"
        report["first_mismatch"] = {
            "exponent": _format_half(h),
            "coulomb": format_rational(coulomb.coefficient(h)),
            "higgs": format_rational(higgs.coefficient(h)),
        }
    return report
