"""Generators and relations for the Coulomb-branch ring of a torus theory.

Relations are found degree by degree: every generator monomial of a given
(degree, sector) slice is expanded in the basis ``w^alpha X[lam]`` and the
kernel of that linear map, modulo what earlier relations already generate,
gives the new relations.  Nothing beyond the degree bound is claimed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .abelian import AlgebraElement, TorusTheory, classical_structure, multiply
from .errors import DivergenceError, IncompleteGeneratorsError
from .lattice import echelon_pivots, nullspace, pairing, rank as matrix_rank
from .poly import Poly
from .series import format_rational, parse_half

DEFAULT_DEGREE = 5


def _l1_ball(n: int, radius: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for x in range(-radius, radius + 1):
        for rest in _l1_ball(n - 1, radius - abs(x)):
            yield (x,) + rest


def _compositions(n: int, total: int) -> Iterator[tuple[int, ...]]:
    """Exponent vectors of length n summing to total, lexicographically descending."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(n - 1, total - first):
            yield (first,) + rest


def _flat_witness(theory: TorusTheory) -> tuple[int, ...]:
    if not theory.matter:
        return tuple(int(j == 0) for j in range(theory.rank))
    return nullspace(theory.matter, ncols=theory.rank)[0]


def _sectors_up_to(theory: TorusTheory, twice_bound: int) -> list[tuple[int, ...]]:
    """Coweights with 2*delta <= twice_bound.

    Pick n independent matter covectors a_S.  Since sum_{i in S} |<a_i, lam>|
    <= 2*delta(lam), every such lam is a_S^{-1} v for an integer v in the
    l1-ball of radius twice_bound.
    """
    n = theory.rank
    if n == 0:
        return [()]
    chosen: list[tuple[int, ...]] = []
    for a in theory.matter:
        if matrix_rank(chosen + [a]) == len(chosen) + 1:
            chosen.append(a)
        if len(chosen) == n:
            break
    inv = _rational_inverse(chosen)
    out = []
    for v in _l1_ball(n, twice_bound):
        lam = [sum(inv[i][j] * v[j] for j in range(n)) for i in range(n)]
        if any(x.denominator != 1 for x in lam):
            continue
        lam = tuple(int(x) for x in lam)
        if sum(abs(pairing(a, lam)) for a in theory.matter) <= twice_bound:
            out.append(lam)
    return sorted(out)


def _rational_inverse(rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(rows)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [r[n:] for r in A]


def graded_basis(theory: TorusTheory, D) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Monomial basis {w^alpha X[lam] : delta(lam) + |alpha| <= D} as (alpha, lam) pairs.

    Ordered by degree, then sector, then alpha (descending lex).
    """
    if not theory.is_positive():
        witness = _flat_witness(theory)
        raise DivergenceError(witness, theory.delta(witness))
    bound = parse_half(D)
    out = []
    for lam in _sectors_up_to(theory, bound):
        twice = int(2 * theory.delta(lam))
        for k in range((bound - twice) // 2 + 1):
            for alpha in _compositions(theory.rank, k):
                out.append((twice + 2 * k, lam, alpha))
    out.sort(key=lambda t: (t[0], t[1], tuple(-x for x in t[2])))
    return [(alpha, lam) for _, lam, alpha in out]


@dataclass(frozen=True)
class Generator:
    name: str
    kind: str  # "w" or "X"
    index: object  # coordinate j for "w", sector tuple for "X"
    degree: Fraction
    scale: Fraction = Fraction(1)


@dataclass
class Presentation:
    theory: TorusTheory
    generators: list[Generator]
    relations: list[Poly]
    degree_bound: Fraction
    surjective: bool = True
    missed: list = field(default_factory=list)

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def monomial_key(self, m: tuple[int, ...]):
        return monomial_key(self.generators, m)

    def relation_strings(self) -> list[str]:
        return [r.render(self.names, key=self.monomial_key) for r in self.relations]

    def render(self) -> str:
        rels = ", ".join(self.relation_strings()) or "0"
        return f"ring C[{', '.join(self.names)}] / ({rels})"

    def to_json_obj(self) -> dict:
        return {
            "generators": [
                {
                    "name": g.name,
                    "kind": g.kind,
                    "index": [str(x) for x in g.index] if g.kind == "X" else str(g.index),
                    "degree": format_rational(g.degree),
                    "scale": format_rational(g.scale),
                }
                for g in self.generators
            ],
            "relations": [
                [[[str(e) for e in m], format_rational(c)] for m, c in sorted(r.terms.items(), key=lambda t: self.monomial_key(t[0]), reverse=True)]
                for r in self.relations
            ],
            "degree_bound": format_rational(self.degree_bound),
            "surjective": self.surjective,
            "missed": [[[str(x) for x in a], [str(x) for x in lam]] for a, lam in self.missed],
        }

    def machine_block(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))


def monomial_key(gens: Sequence[Generator], m: tuple[int, ...]):
    """Graded order; within a degree X-generators dominate, then w's."""
    twice = sum(e * int(2 * g.degree) for e, g in zip(m, gens))
    xs = tuple(e for e, g in zip(m, gens) if g.kind == "X")
    ws = tuple(e for e, g in zip(m, gens) if g.kind == "w")
    return (twice, xs, ws)


def _x_name(theory: TorusTheory, gamma: tuple[int, ...]) -> str:
    n = theory.rank
    if n == 1:
        g = gamma[0]
        base = "x" if g > 0 else "y"
        return base if abs(g) == 1 else f"{base}{abs(g)}"
    nz = [j for j, x in enumerate(gamma) if x]
    if len(nz) == 1 and abs(gamma[nz[0]]) == 1:
        return ("x" if gamma[nz[0]] > 0 else "y") + str(nz[0] + 1)
    return "X[" + ",".join(str(x) for x in gamma) + "]"


def default_generators(theory: TorusTheory) -> list[tuple[int, ...]]:
    """{+-e_j} followed by every other sector of degree <= max_j delta(e_j)."""
    n = theory.rank
    units = []
    for j in range(n):
        e = tuple(int(i == j) for i in range(n))
        units += [e, tuple(-x for x in e)]
    top = max((theory.delta(e) for e in units), default=Fraction(0))
    extra = [lam for lam in _sectors_up_to(theory, int(2 * top)) if any(lam) and lam not in units]
    extra.sort(key=lambda lam: (theory.delta(lam), tuple(-x for x in lam)))
    return units + extra


def _is_lex_positive(v) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def _make_generators(theory: TorusTheory, sectors, w_indices) -> list[Generator]:
    gens = []
    wname = (lambda j: "w") if theory.rank == 1 else (lambda j: f"w{j + 1}")
    for j in w_indices:
        gens.append(Generator(wname(j), "w", j, Fraction(1)))
    sset = set(sectors)
    for gamma in sectors:
        scale = Fraction(1)
        neg = tuple(-x for x in gamma)
        if _is_lex_positive(gamma) and neg in sset:
            # unit canonicalization: X[g] X[-g] gets leading coefficient 1
            _, lc = classical_structure(theory, gamma, neg).leading()
            scale = Fraction(1) / lc
        gens.append(Generator(_x_name(theory, gamma), "X", gamma, theory.delta(gamma), scale))
    return gens


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    A = [list(r) for r in rows if any(r)]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = Fraction(A[r][c])
        A[r] = [x / p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def _reduce(v: list[Fraction], E: list[list[Fraction]], pivots: list[int]) -> list[Fraction]:
    v = list(v)
    for row, c in zip(E, pivots):
        if v[c] != 0:
            f = v[c]
            v = [x - f * y for x, y in zip(v, row)]
    return v


def _generator_monomials(gens: Sequence[Generator], twice_bound: int) -> list[tuple[int, ...]]:
    weights = [int(2 * g.degree) for g in gens]
    if any(w <= 0 for w in weights):
        raise ValueError("generator degrees must be positive")
    out = []

    def rec(i, budget, acc):
        if i == len(gens):
            out.append(tuple(acc))
            return
        for e in range(budget // weights[i] + 1):
            acc.append(e)
            rec(i + 1, budget - e * weights[i], acc)
            acc.pop()

    rec(0, twice_bound, [])
    return out


class _Evaluator:
    """Images of generator monomials as (sector, coefficient in w)."""

    def __init__(self, theory: TorusTheory, gens: Sequence[Generator]):
        self.theory = theory
        self.gens = gens
        n = theory.nvars
        self.cache: dict[tuple[int, ...], tuple[tuple[int, ...], Poly]] = {
            (0,) * len(gens): ((0,) * theory.rank, Poly.constant(n, 1))
        }

    def __call__(self, m: tuple[int, ...]):
        if m in self.cache:
            return self.cache[m]
        k = max(i for i, e in enumerate(m) if e)
        prev = list(m)
        prev[k] -= 1
        sector, coeff = self(tuple(prev))
        g = self.gens[k]
        if g.kind == "w":
            coeff = coeff * Poly.variable(self.theory.nvars, g.index)
        else:
            coeff = coeff * classical_structure(self.theory, sector, g.index) * g.scale
            sector = tuple(a + b for a, b in zip(sector, g.index))
        self.cache[m] = (sector, coeff)
        return sector, coeff


def _slices(gens, monomials, evaluate):
    slices: dict[tuple[int, tuple[int, ...]], list[tuple[int, ...]]] = {}
    for m in monomials:
        twice = monomial_key(gens, m)[0]
        sector = tuple(sum(e * g.index[j] for e, g in zip(m, gens) if g.kind == "X") for j in range(evaluate.theory.rank))
        slices.setdefault((twice, sector), []).append(m)
    for key in slices:
        slices[key].sort(key=lambda m: monomial_key(gens, m), reverse=True)
    return dict(sorted(slices.items()))


def _basis_slice(theory: TorusTheory, twice: int, sector) -> list[tuple[int, ...]]:
    k2 = twice - int(2 * theory.delta(sector))
    if k2 < 0 or k2 % 2:
        return []
    return list(_compositions(theory.rank, k2 // 2))


def _poly_to_generator_vector(r: Poly, monos: list[tuple[int, ...]], offset: tuple[int, ...]):
    index = {m: i for i, m in enumerate(monos)}
    v = [Fraction(0)] * len(monos)
    for m, c in r.terms.items():
        mm = tuple(a + b for a, b in zip(m, offset))
        v[index[mm]] += c
    return v


def find_relations(theory: TorusTheory, gens: Sequence[Sequence[int]] | None = None, D=DEFAULT_DEGREE,
                   *, w_generators: Sequence[int] | None = None, strict: bool = False) -> Presentation:
    """Presentation of the massless Coulomb-branch ring, complete up to degree D."""
    theory = theory.massless()
    if not theory.is_positive():
        witness = _flat_witness(theory)
        raise DivergenceError(witness, theory.delta(witness))
    sectors = [tuple(int(x) for x in g) for g in (default_generators(theory) if gens is None else gens)]
    if len(set(sectors)) != len(sectors):
        raise ValueError("duplicate generator sectors")
    w_idx = list(range(theory.rank)) if w_generators is None else list(w_generators)
    generators = _make_generators(theory, sectors, w_idx)
    bound = parse_half(D)
    evaluate = _Evaluator(theory, generators)
    monomials = _generator_monomials(generators, bound)
    slices = _slices(generators, monomials, evaluate)

    relations: list[tuple[int, tuple[int, ...], Poly]] = []
    missed = []
    ngen = len(generators)
    for (twice, sector), monos in slices.items():
        basis = _basis_slice(theory, twice, sector)
        bindex = {tuple(a) + (0,) * (theory.nvars - theory.rank): i for i, a in enumerate(basis)}
        columns = []
        for m in monos:
            sec, coeff = evaluate(m)
            col = [Fraction(0)] * len(basis)
            for mono, c in coeff.terms.items():
                col[bindex[mono]] += c
            columns.append(col)
        image_pivots = echelon_pivots(columns) if columns else []
        if len(image_pivots) < len(basis):
            missed += [(basis[i], sector) for i in range(len(basis)) if i not in image_pivots]
        if not basis:
            kernel = [tuple(int(i == j) for j in range(len(monos))) for i in range(len(monos))]
        else:
            matrix = [[columns[j][i] for j in range(len(monos))] for i in range(len(basis))]
            kernel = nullspace(matrix, ncols=len(monos))
        if not kernel:
            continue
        ideal = []
        mindex = set(monos)
        for rt, rs, r in relations:
            cof_sector = tuple(a - b for a, b in zip(sector, rs))
            for m in slices.get((twice - rt, cof_sector), []):
                shifted = {tuple(a + b for a, b in zip(mm, m)) for mm in r.terms}
                if shifted <= mindex:
                    ideal.append(_poly_to_generator_vector(r, monos, m))
        if ideal and matrix_rank(ideal) == len(kernel):
            continue
        E, P = _rref(ideal)
        residuals = [_reduce([Fraction(x) for x in k], E, P) for k in kernel]
        new, _ = _rref(residuals)
        for row in new:
            poly = Poly(ngen, {m: c for m, c in zip(monos, row) if c})
            relations.append((twice, sector, poly))

    if missed and strict:
        raise IncompleteGeneratorsError(missed)
    return Presentation(theory, generators, [r for _, _, r in relations], Fraction(bound, 2), not missed, missed)


def reduce_presentation(p: Presentation) -> Presentation:
    """Drop w-generators that some relation expresses in terms of the others."""
    drop = set()
    for r in p.relations:
        for i, g in enumerate(p.generators):
            if g.kind != "w" or i in drop:
                continue
            unit = tuple(int(k == i) for k in range(len(p.generators)))
            if unit in r.terms and all(m[i] == 0 for m in r.terms if m != unit):
                drop.add(i)
                break
    if not drop:
        return p
    keep_w = [g.index for i, g in enumerate(p.generators) if g.kind == "w" and i not in drop]
    sectors = [g.index for g in p.generators if g.kind == "X"]
    q = find_relations(p.theory, sectors, p.degree_bound, w_generators=keep_w)
    return q if q.surjective else p


def generator_element(p: Presentation, g: Generator) -> AlgebraElement:
    t = p.theory
    if g.kind == "w":
        return t.w(g.index)
    return t.X(g.index) * g.scale


def evaluate_relation(p: Presentation, r: Poly) -> AlgebraElement:
    """Image of a polynomial in the generators under the classical product."""
    t = p.theory
    elems = [generator_element(p, g) for g in p.generators]
    total = AlgebraElement(t, {})
    for m, c in r.terms.items():
        term = t.one()
        for e, x in zip(m, elems):
            for _ in range(e):
                term = multiply(term, x)
        total = total + term * c
    return total


@dataclass
class VerificationReport:
    passed: bool
    nonzero_relations: list[int]
    dimension_mismatches: list[tuple]
    dimensions: list[int]  # presented-ring dimension at q^(h/2), h = 0..2*bound

    def summary(self) -> str:
        state = "pass" if self.passed else "fail"
        return (f"{state}: {len(self.nonzero_relations)} nonzero relation(s), "
                f"{len(self.dimension_mismatches)} dimension mismatch(es); dims {self.dimensions}")


def verify_presentation(p: Presentation) -> VerificationReport:
    """Re-evaluate every relation and recount graded dimensions against graded_basis."""
    bad = [i for i, r in enumerate(p.relations) if not evaluate_relation(p, r).is_zero()]
    bound = parse_half(p.degree_bound)
    gens = p.generators
    monomials = _generator_monomials(gens, bound)
    rank = p.theory.rank
    slices: dict = {}
    for m in monomials:
        twice = monomial_key(gens, m)[0]
        sector = tuple(sum(e * g.index[j] for e, g in zip(m, gens) if g.kind == "X") for j in range(rank))
        slices.setdefault((twice, sector), []).append(m)

    def sector_of(m):
        return tuple(sum(e * g.index[j] for e, g in zip(m, gens) if g.kind == "X") for j in range(rank))

    rel_info = [(monomial_key(gens, next(iter(r.terms)))[0], sector_of(next(iter(r.terms))), r) for r in p.relations]
    presented = {}
    for key, monos in slices.items():
        twice, sector = key
        mset = set(monos)
        rows = []
        for rt, rs, r in rel_info:
            cof = tuple(a - b for a, b in zip(sector, rs))
            for m in slices.get((twice - rt, cof), []):
                if {tuple(a + b for a, b in zip(mm, m)) for mm in r.terms} <= mset:
                    rows.append(_poly_to_generator_vector(r, monos, m))
        presented[key] = len(monos) - (matrix_rank(rows) if rows else 0)
    expected: dict = {}
    for alpha, lam in graded_basis(p.theory, p.degree_bound):
        key = (2 * sum(alpha) + int(2 * p.theory.delta(lam)), lam)
        expected[key] = expected.get(key, 0) + 1
    mismatches = []
    for key in sorted(set(presented) | set(expected)):
        a, b = presented.get(key, 0), expected.get(key, 0)
        if a != b:
            mismatches.append((Fraction(key[0], 2), key[1], a, b))
    dims = [0] * (bound + 1)
    for (twice, _), v in presented.items():
        dims[twice] += v
    return VerificationReport(not bad and not mismatches, bad, mismatches, dims)
