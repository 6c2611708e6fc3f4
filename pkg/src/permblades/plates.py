"""Plates, open plates, subspaces, tripods and the plate-basis expansion.

A plate of an OSP (S1, ..., Sk) of a subset T of {1..n} is the cone

    {x : x_a = 0 for a not in T, x_T = 0, x_S1 >= 0, x_S1S2 >= 0, ...}

generated by the lines inside each block and the rays e_s(i) - e_s(i+1)
between representatives of consecutive blocks.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .cone import ClosedCone, cone_from_rays, simple_root, contains_point
from .indicator import (
    ConeFunction, arrangement_witnesses, convolve, elementary_symmetric, eval_at,
    functions_equal, is_subset_cut, subset_normals,
)
from .osp import OSP, all_subset_osps, cyclic_rotations


class BlocksOverlap(ValueError):
    """Blocks passed to a constructor share elements."""


class NotInPlateSpan(ValueError):
    """A function is not a combination of plate indicators."""


Block = Sequence[int]


def as_block(b) -> tuple[int, ...]:
    if isinstance(b, int):
        return (b,)
    return tuple(sorted(b))


def as_osp(label) -> OSP:
    if isinstance(label, OSP):
        return label
    if isinstance(label, str):
        return OSP.parse(label)
    return OSP(as_block(b) for b in label)


def _disjoint(*blocks) -> list[tuple[int, ...]]:
    bl = [as_block(b) for b in blocks]
    seen: set[int] = set()
    for b in bl:
        if seen.intersection(b):
            raise BlocksOverlap(f"blocks {bl} overlap")
        seen.update(b)
    return bl


@lru_cache(maxsize=None)
def _plate_cone(blocks: tuple, n: int) -> ClosedCone:
    lines = []
    for b in blocks:
        for a, c in zip(b, b[1:]):
            lines.append(simple_root(a, c, n))
    rays = [simple_root(b[0], c[0], n) for b, c in zip(blocks, blocks[1:])]
    return cone_from_rays(lines, rays, n)


def plate_cone(label, n: int) -> ClosedCone:
    s = as_osp(label)
    if max(s.support) > n:
        raise ValueError(f"{s} does not fit in n={n}")
    return _plate_cone(s.blocks, n)


def plate(label, n: int) -> ConeFunction:
    return ConeFunction.atom(plate_cone(label, n))


def subspace(block, n: int) -> ConeFunction:
    """Indicator 1_S of the subspace {x supported on S, x_S = 0}."""
    return plate([as_block(block)], n)


def subspace_product(blocks: Iterable, n: int) -> ConeFunction:
    """1_S1 * ... * 1_Sk, the span of the lines inside each block."""
    bl = _disjoint(*blocks)
    return convolve(*[subspace(b, n) for b in bl]) if bl else ConeFunction.one(n)


def plate_pair(s1, s2, n: int) -> ConeFunction:
    return plate(_disjoint(s1, s2), n)


def mu(s1, s2, n: int) -> ConeFunction:
    """Open plate: the pair plate minus its boundary subspace 1_S1 * 1_S2."""
    a, b = _disjoint(s1, s2)
    return plate([a, b], n) - subspace_product([a, b], n)


def mu_chain(blocks: Sequence, n: int) -> ConeFunction:
    bl = [as_block(b) for b in blocks]
    return convolve(*[mu(a, b, n) for a, b in zip(bl, bl[1:])])


def mu_cycle(blocks: Sequence, n: int) -> ConeFunction:
    """mu_{S1,S2} * mu_{S2,S3} * ... * mu_{Sk,S1}."""
    bl = [as_block(b) for b in blocks]
    return convolve(*[mu(bl[i], bl[(i + 1) % len(bl)], n) for i in range(len(bl))])


def tripod(s1, s2, s3, n: int) -> ConeFunction:
    """gamma = 1 + mu12 + mu23 + mu31 inside the span of the three blocks.

    For singleton blocks the unit is the origin; in general every term is
    convolved with L = 1_S1 * 1_S2 * 1_S3, so lumped blocks behave like the
    quotient of the singleton picture by L.
    """
    a, b, c = _disjoint(s1, s2, s3)
    lin = subspace_product([a, b, c], n)
    return (lin + convolve(mu(a, b, n), subspace(c, n))
            + convolve(mu(b, c, n), subspace(a, n))
            + convolve(mu(c, a, n), subspace(b, n)))


def cyclic_pair_product(blocks: Sequence, n: int) -> ConeFunction:
    """[[S1,S2]] * [[S2,S3]] * ... * [[Sk,S1]]."""
    bl = _disjoint(*blocks)
    k = len(bl)
    return convolve(*[plate_pair(bl[i], bl[(i + 1) % k], n) for i in range(k)])


def cyclic_minkowski_check(label, n: int) -> bool:
    s = as_osp(label)
    if len(s) < 2:
        return True
    union = subspace(sorted(s.support), n)
    return functions_equal(cyclic_pair_product(s.blocks, n), union)


def open_plate_checks(s1, s2, n: int) -> dict[str, bool]:
    m12, m21 = mu(s1, s2, n), mu(s2, s1, n)
    zero = ConeFunction.zero(n)
    return {
        "square": functions_equal(convolve(m12, m12), -m12),
        "opposite": functions_equal(convolve(m12, m21), zero),
    }


def cycle_identity_check(label, n: int) -> bool:
    s = as_osp(label)
    if len(s) < 2:
        return True
    return functions_equal(mu_cycle(s.blocks, n), ConeFunction.zero(n))


def triangulation_identity_check(s1, s2, s3, n: int) -> bool:
    """Closed and open triangulation identities for three disjoint blocks.

    Both sides live in the span of the three blocks, so the lone plate and the
    lone open plate on the right are convolved with the missing block's 1_S.
    """
    a, b, c = _disjoint(s1, s2, s3)
    p12, p23, p13 = plate_pair(a, b, n), plate_pair(b, c, n), plate_pair(a, c, n)
    sb = subspace(b, n)
    closed = functions_equal(convolve(p12 + p23, p13), convolve(p12, p23) + convolve(p13, sb))
    m12, m23, m13 = mu(a, b, n), mu(b, c, n), mu(a, c, n)
    opened = functions_equal(convolve(m12 + m23, m13), convolve(m12, m23) - convolve(m13, sb))
    return closed and opened


def alternating_expansion(label, n: int) -> ConeFunction:
    """Graduated blade written through elementary symmetric polynomials in the
    cyclic pair plates:  1_union + sum_{j=0}^{k-2} (-1)^(k-j) L * e_j."""
    s = as_osp(label)
    k = len(s)
    union = subspace(sorted(s.support), n)
    if k == 1:
        return union
    lin = subspace_product(s.blocks, n)
    pairs = [plate_pair(s.blocks[i], s.blocks[(i + 1) % k], n) for i in range(k)]
    total = union
    for j in range(0, k - 1):
        term = convolve(lin, elementary_symmetric(pairs, j, n))
        total = total + term * (-1) ** (k - j)
    return total


# ----------------------------------------------------------------------------
# expansion in plate indicators
# ----------------------------------------------------------------------------

def is_nonpointed(label: OSP) -> bool:
    return any(len(b) > 1 for b in label.blocks)


def is_low_dim(label: OSP, n: int, codim: int = 2) -> bool:
    """Plate of codimension >= ``codim`` in V0 (its dimension is |T| - 1)."""
    return label.size <= n - codim


class PlateBasis:
    """A basis of the span of all subset-plate indicators in V0.

    Columns are chosen greedily in the order: non-pointed and low-dimensional,
    non-pointed, low-dimensional, the rest.  This keeps the quotients by
    non-pointed and by low-dimensional plates readable off coordinates; the
    property is checked at construction (``adapted``).
    """

    def __init__(self, n: int):
        self.n = n
        self.witnesses = arrangement_witnesses(subset_normals(n), n)
        labels = []
        seen: set[ClosedCone] = set()
        for s in sorted(all_subset_osps(n), key=lambda s: (s.size, len(s), s.blocks)):
            c = plate_cone(s, n)
            if c not in seen:
                seen.add(c)
                labels.append(s)

        def group(s):
            np_, ld = is_nonpointed(s), is_low_dim(s, n)
            return 0 if np_ and ld else 1 if np_ else 2 if ld else 3

        self.labels = sorted(labels, key=lambda s: (group(s), len(s), s.size, s.blocks))
        self._pivots: list[tuple[int, dict, dict]] = []
        self.basis: list[OSP] = []
        for s in self.labels:
            vec = self._column(s)
            expr = {s: Fraction(1)}
            vec, expr = self._reduce(vec, expr)
            if vec:
                row = min(vec)
                self._pivots.append((row, vec, expr))
                self.basis.append(s)
        self.adapted = self._adapted()

    def _column(self, s: OSP) -> dict[int, Fraction]:
        c = plate_cone(s, self.n)
        return {i: Fraction(1) for i, w in enumerate(self.witnesses) if contains_point(c, w)}

    def _reduce(self, vec: dict, expr: dict):
        vec, expr = dict(vec), dict(expr)
        for row, pv, pe in self._pivots:
            f = vec.get(row)
            if not f:
                continue
            f = f / pv[row]
            for k, v in pv.items():
                nv = vec.get(k, 0) - f * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            for k, v in pe.items():
                nv = expr.get(k, 0) - f * v
                if nv:
                    expr[k] = nv
                else:
                    expr.pop(k, None)
        return vec, expr

    def _adapted(self) -> bool:
        from .exact_core import rank
        n = self.n
        cols = {s: [1 if contains_point(plate_cone(s, n), w) else 0 for w in self.witnesses]
                for s in self.labels}
        for pred in (is_nonpointed, lambda s: is_low_dim(s, n),
                     lambda s: is_nonpointed(s) or is_low_dim(s, n)):
            inside = [s for s in self.labels if pred(s)]
            chosen = [s for s in self.basis if pred(s)]
            if not inside:
                continue
            if rank([cols[s] for s in inside]) != len(chosen):
                return False
        return True

    def expand(self, f: ConeFunction) -> dict[OSP, Fraction]:
        if f.n != self.n:
            raise ValueError("ambient dimensions differ")
        vec = {}
        for i, w in enumerate(self.witnesses):
            v = eval_at(f, w)
            if v:
                vec[i] = v
        # coordinates x with sum_b x_b col_b = vec: reduce -vec and read off
        rest, expr = self._reduce(vec, {})
        if rest:
            raise NotInPlateSpan("function is not a combination of plate indicators")
        coords = {s: -v for s, v in expr.items() if v}
        # sampling one point per face is only conclusive for subset-cut atoms
        if not all(is_subset_cut(c) for c in f.terms):
            if not functions_equal(coords_to_function(coords, self.n), f):
                raise NotInPlateSpan("function is not constant on subset-sum faces")
        return coords


@lru_cache(maxsize=None)
def plate_basis(n: int) -> PlateBasis:
    return PlateBasis(n)


def expand_in_plate_basis(f: ConeFunction) -> dict[OSP, Fraction]:
    """Coordinates of f over the adapted plate basis (labels are OSPs)."""
    if not f.terms:
        return {}
    return plate_basis(f.n).expand(f)


def coords_to_function(coords: Mapping, n: int) -> ConeFunction:
    total = ConeFunction.zero(n)
    for s, v in coords.items():
        total = total + plate(s, n) * v
    return total


def project_mod_nonpointed(coords: Mapping) -> dict:
    return {s: v for s, v in coords.items() if not is_nonpointed(as_osp(s))}


def project_mod_codim(coords: Mapping, n: int, codim: int = 2) -> dict:
    return {s: v for s, v in coords.items() if not is_low_dim(as_osp(s), n, codim)}


def coords_equal_mod(lhs: ConeFunction, rhs: ConeFunction, nonpointed=False, codim=False) -> bool:
    n = lhs.n
    d = expand_in_plate_basis(lhs - rhs)
    if nonpointed:
        d = project_mod_nonpointed(d)
    if codim:
        d = project_mod_codim(d, n)
    return not d


def independence_rank(functions: Sequence[ConeFunction], n: int) -> int:
    """Rank of the face-value matrix of ``functions`` on the subset arrangement."""
    from .exact_core import rank
    wit = arrangement_witnesses(subset_normals(n), n)
    return rank([[eval_at(f, w) for w in wit] for f in functions])


def rotated_plates(label, n: int) -> list[ConeFunction]:
    return [plate(r, n) for r in cyclic_rotations(as_osp(label))]
