"""Blades: cone sets, characteristic functions, factorizations, normal fans and
the local structure of the permutohedral honeycomb."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import floor
from typing import Sequence

from .cone import ClosedCone, cone_from_halfspaces, cone_from_rays, minkowski_sum, simple_root
from .exact_core import Infeasible, relative_interior_point
from .indicator import (
    ConeFunction, convolve, elementary_symmetric, functions_equal, unions_equal,
)
from .osp import (
    OSP, PolygonTriangulation, cyclic_normal_form, enumerate_triangulations,
    is_cyclically_increasing,
)
from .plates import (
    as_osp, mu, plate_pair, subspace, subspace_product, tripod,
)


class BadOrientation(ValueError):
    """A triangle of a triangulation is not cyclically oriented."""


class OnAffineWall(ValueError):
    """A point lies on an affine reflection hyperplane x_i - x_j in Z."""


def _label(label) -> OSP:
    return as_osp(label)


def _pair_cone(a, b, n: int) -> ClosedCone:
    return cone_from_rays([], [simple_root(a[0], b[0], n)], n)


def _lineality(s: OSP, n: int) -> ClosedCone:
    lines = [simple_root(x, y, n) for b in s.blocks for x, y in zip(b, b[1:])]
    return cone_from_rays(lines, [], n)


def blade_set(label, n: int) -> list[ClosedCone]:
    """Cones whose union is the blade: drop two cyclic factors from the sum of
    the k cyclic pair rays, then add the lineality inside the blocks."""
    s = _label(label)
    k = len(s)
    lin = _lineality(s, n)
    if k == 1:
        return [lin]
    if k == 2:
        return [lin]
    factors = [_pair_cone(s.blocks[i], s.blocks[(i + 1) % k], n) for i in range(k)]
    out = set()
    for i, j in combinations(range(k), 2):
        c = lin
        for t in range(k):
            if t not in (i, j):
                c = minkowski_sum(c, factors[t])
        out.add(c)
    return sorted(out, key=lambda c: c.sort_key())


def blade_char_fn(label, n: int) -> ConeFunction:
    """L + sum_{j=1}^{k-2} L * e_j(mu_{S1,S2}, ..., mu_{Sk,S1})."""
    s = _label(label)
    k = len(s)
    lin = subspace_product(s.blocks, n)
    if k == 1:
        return subspace(sorted(s.support), n)
    if k == 2:
        return lin
    mus = [mu(s.blocks[i], s.blocks[(i + 1) % k], n) for i in range(k)]
    total = lin
    for j in range(1, k - 1):
        total = total + convolve(lin, elementary_symmetric(mus, j, n))
    return total


def blade_as_difference(label, n: int) -> ConeFunction:
    """1_union minus the open chains mu_{S1,...,Sk} over all rotations."""
    s = _label(label)
    k = len(s)
    union = subspace(sorted(s.support), n)
    if k == 1:
        return union
    total = union
    for r in range(k):
        bl = s.blocks[r:] + s.blocks[:r]
        chain = convolve(*[mu(a, b, n) for a, b in zip(bl, bl[1:])])
        total = total - chain
    return total


def blade_indicator(label, n: int) -> ConeFunction:
    """{0,1} indicator of the union of blade_set, by inclusion-exclusion."""
    from .cone import intersect
    cones = blade_set(label, n)
    total = ConeFunction.zero(n)
    for r in range(1, len(cones) + 1):
        for sub in combinations(cones, r):
            c = sub[0]
            for d in sub[1:]:
                c = intersect(c, d)
            total = total + ConeFunction.atom(c, (-1) ** (r + 1))
    return total


def flag_factorization(label) -> list[OSP]:
    s = _label(label)
    if len(s) < 3:
        raise ValueError("flag factorization needs at least three blocks")
    b = s.blocks
    return [OSP([b[0], b[i], b[i + 1]]) for i in range(1, len(b) - 1)]


def _tripod_of(s: OSP, n: int) -> ConeFunction:
    return tripod(s.blocks[0], s.blocks[1], s.blocks[2], n)


def flag_product(label, n: int) -> ConeFunction:
    s = _label(label)
    if len(s) < 3:
        return blade_char_fn(s, n)
    return convolve(*[_tripod_of(t, n) for t in flag_factorization(s)])


def verify_flag(label, n: int) -> bool:
    return functions_equal(flag_product(label, n), blade_char_fn(label, n))


def triangulation_factorization(label, t: PolygonTriangulation, n: int) -> ConeFunction:
    s = _label(label)
    if t.k != len(s):
        raise ValueError("triangulation size does not match the block count")
    facs = []
    for tri in t.triangles:
        if not is_cyclically_increasing(list(tri)):
            raise BadOrientation(f"triangle {tri} is not cyclically oriented")
        a, b, c = (s.blocks[i - 1] for i in tri)
        facs.append(tripod(a, b, c, n))
    return convolve(*facs)


def independence_check(label, n: int) -> bool:
    s = _label(label)
    if len(s) < 4:
        return True
    tris = enumerate_triangulations(len(s))
    first = triangulation_factorization(s, tris[0], n)
    return all(functions_equal(first, triangulation_factorization(s, t, n)) for t in tris[1:])


def minkowski_decomposition_check(label, t: PolygonTriangulation, n: int) -> bool:
    """The blade equals the Minkowski sum of the tripod blades of ``t``."""
    s = _label(label)
    sums: list[ClosedCone] = [cone_from_rays([], [], n)]
    for tri in t.triangles:
        if not is_cyclically_increasing(list(tri)):
            raise BadOrientation(f"triangle {tri} is not cyclically oriented")
        pieces = blade_set(OSP([s.blocks[i - 1] for i in tri]), n)
        sums = list({minkowski_sum(a, b) for a in sums for b in pieces})
    lin = _lineality(s, n)
    sums = [minkowski_sum(c, lin) for c in sums]
    return unions_equal(blade_set(s, n), sums, n)


def _edge_normal_cones(verts: list, n: int) -> list[ClosedCone]:
    """Normal cones (in V0) of the edges of the simplex with vertices ``verts``."""
    out = []
    for a, b in combinations(range(len(verts)), 2):
        eqs = [tuple(x - y for x, y in zip(verts[a], verts[b]))]
        ineqs = [tuple(x - y for x, y in zip(verts[a], verts[c]))
                 for c in range(len(verts)) if c not in (a, b)]
        out.append(cone_from_halfspaces(ineqs, eqs, n))
    return out


def simplex_vertices(sigma: Sequence[int]) -> list[tuple[int, ...]]:
    """e_s1 - e_sn, e_s2 - e_s1, ..., e_sn - e_s(n-1)."""
    n = len(sigma)
    return [simple_root(sigma[i], sigma[i - 1], n) for i in range(n)]


def polar_simplex_vertices(sigma: Sequence[int]) -> list[tuple[Fraction, ...]]:
    """Vertices of {y in V0 : y.(e_si - e_s(i+1)) <= 1 for all i}."""
    from .exact_core import solve_linear
    n = len(sigma)
    roots = [simple_root(sigma[i], sigma[(i + 1) % n], n) for i in range(n)]
    out = []
    for j in range(n):
        rows = [r for i, r in enumerate(roots) if i != j] + [tuple([1] * n)]
        rhs = [1] * (n - 1) + [0]
        out.append(solve_linear(rows, rhs))
    return out


def normal_fan_cones(sigma: Sequence[int]) -> list[ClosedCone]:
    """Codimension-one cones of the normal fan of the simplex with vertices
    e_s1 - e_sn, e_s2 - e_s1, ..., e_sn - e_s(n-1)."""
    return _edge_normal_cones(simplex_vertices(sigma), len(sigma))


def polar_normal_fan_cones(sigma: Sequence[int]) -> list[ClosedCone]:
    """Codimension-one cones of the normal fan of the simplex whose facet
    normals are the cyclic roots e_si - e_s(i+1)."""
    return _edge_normal_cones(polar_simplex_vertices(sigma), len(sigma))


def normal_fan_check(sigma: Sequence[int]) -> bool:
    """Blade of sigma against the normal fan of the root-vertex simplex."""
    n = len(sigma)
    return unions_equal(blade_set(OSP.singletons(sigma), n), normal_fan_cones(sigma), n)


def polar_normal_fan_check(sigma: Sequence[int]) -> bool:
    """Blade of sigma against the normal fan of the root-facet simplex."""
    n = len(sigma)
    return unions_equal(blade_set(OSP.singletons(sigma), n), polar_normal_fan_cones(sigma), n)


def normal_fan_report(sigma: Sequence[int]) -> dict:
    return {
        "sigma": list(sigma),
        "vertex_simplex": normal_fan_check(sigma),
        "facet_simplex": polar_normal_fan_check(sigma),
    }


# ----------------------------------------------------------------------------
# honeycomb locality
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AlcoveLocation:
    sigma: tuple[int, ...]
    offsets: tuple[int, ...]


def _frac(x: Fraction) -> Fraction:
    return x - floor(x)


def _check_generic(x: Sequence[Fraction]) -> None:
    for i, j in combinations(range(len(x)), 2):
        if (x[i] - x[j]).denominator == 1:
            raise OnAffineWall(f"x_{i + 1} - x_{j + 1} is an integer")


def alcove_system_holds(x, sigma, offsets) -> bool:
    """a_i < x_s(i) - x_s(i+1) < a_i + 1 cyclically, with sum a_i = 1 - n."""
    n = len(x)
    if sum(offsets) != 1 - n:
        return False
    for i in range(n):
        d = x[sigma[i] - 1] - x[sigma[(i + 1) % n] - 1]
        if not offsets[i] < d < offsets[i] + 1:
            return False
    return True


def locate_alcove(x: Sequence) -> AlcoveLocation:
    """Order coordinates by increasing fractional part (rotated to start at 1)
    and read off the forced integer offsets."""
    x = [Fraction(v) for v in x]
    _check_generic(x)
    n = len(x)
    order = sorted(range(1, n + 1), key=lambda i: _frac(x[i - 1]))
    sigma = cyclic_normal_form(OSP.singletons(order))
    sig = tuple(b[0] for b in sigma.blocks)
    offs = tuple(floor(x[sig[i] - 1] - x[sig[(i + 1) % n] - 1]) for i in range(n))
    return AlcoveLocation(sig, offs)


def brute_force_alcoves(x: Sequence, bound: int = 3) -> list[AlcoveLocation]:
    """All (sigma, a) with sigma(1) = 1 solving the alcove system, by search."""
    from itertools import product
    x = [Fraction(v) for v in x]
    n = len(x)
    out = []
    for rest in permutations(range(2, n + 1)):
        sig = (1,) + rest
        span = range(-bound - n, bound + 1)
        for offs in product(span, repeat=n):
            if alcove_system_holds(x, sig, offs):
                out.append(AlcoveLocation(sig, tuple(offs)))
    return out


def alcove_walls_ok(x: Sequence, loc: AlcoveLocation) -> bool:
    """Each upper hyperplane x_s(i) - x_s(i+1) = a_i + 1 supports a facet of
    the alcove, and no lower one does."""
    n = len(x)
    sig, offs = loc.sigma, loc.offsets

    def diff(i, c):
        v = [Fraction(0)] * (n + 1)
        v[sig[i] - 1] += 1
        v[sig[(i + 1) % n] - 1] -= 1
        v[n] = Fraction(-c)
        return v

    for wall in range(n):
        for upper in (True, False):
            eq = diff(wall, offs[wall] + 1 if upper else offs[wall])
            ineqs = []
            for i in range(n):
                if i == wall:
                    continue
                lo = diff(i, offs[i])
                hi = [-v for v in diff(i, offs[i] + 1)]
                ineqs += [(lo, True), (hi, True)]
            try:
                relative_interior_point(ineqs, [eq], n)
                feasible = True
            except Infeasible:
                feasible = False
            if feasible != upper and n > 2:
                return False
    return True


def vertex_neighbors(x: Sequence) -> list[tuple[Fraction, ...]]:
    """Reflections of x in the n walls x_s(i) - x_s(i+1) = a_i + 1."""
    x = [Fraction(v) for v in x]
    loc = locate_alcove(x)
    n = len(x)
    out = []
    for i in range(n):
        a, b = loc.sigma[i] - 1, loc.sigma[(i + 1) % n] - 1
        t = loc.offsets[i] + 1 - (x[a] - x[b])
        y = list(x)
        y[a] += t
        y[b] -= t
        out.append(tuple(y))
    return out


def local_blade_check(x: Sequence) -> bool:
    """Cones spanned by n-2 of the neighbor directions are exactly the blade
    cones of the located cyclic order."""
    x = [Fraction(v) for v in x]
    n = len(x)
    loc = locate_alcove(x)
    if not alcove_walls_ok(x, loc):
        return False
    dirs = [tuple(y - z for y, z in zip(nb, x)) for nb in vertex_neighbors(x)]
    roots = [simple_root(loc.sigma[i], loc.sigma[(i + 1) % n], n) for i in range(n)]
    for d, r in zip(dirs, roots):
        t = next(a / b for a, b in zip(d, r) if b)
        if t <= 0 or any(a != t * b for a, b in zip(d, r)):
            return False
    local = {cone_from_rays([], [d for t, d in enumerate(dirs) if t not in (i, j)], n)
             for i, j in combinations(range(n), 2)}
    return local == set(blade_set(OSP.singletons(loc.sigma), n))


def describe(label, n: int) -> dict:
    s = _label(label)
    return {
        "label": str(s),
        "n": n,
        "cones": [c.to_json() for c in blade_set(s, n)],
        "function": blade_char_fn(s, n).to_json(),
    }
