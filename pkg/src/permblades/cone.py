"""Polyhedral cones in the sum-zero hyperplane V0 with exact double description.

Every cone is stored canonically with both representations:

* ``lines`` / ``rays``: lineality basis and extreme rays (mod lineality),
* ``eqs`` / ``ineqs``: the same data for the dual cone, read as equations
  ``v.x = 0`` and inequalities ``v.x >= 0``.

All vectors are primitive integer tuples lying in V0.  Set equality of cones
is identity of ``key``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .exact_core import nullspace, primitive, primitive_signed, rref


class NotInV0(ValueError):
    """A generator or evaluation point has nonzero coordinate sum."""


IntVec = tuple  # tuple[int, ...]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def project_normal(a: Sequence, n: int) -> tuple[int, ...]:
    """The V0 component of a normal vector, scaled to be integral."""
    fr = [Fraction(x) for x in a]
    s = sum(fr)
    return primitive([n * x - s for x in fr])


def _check_v0(v, what="generator"):
    if sum(v) != 0:
        raise NotInV0(f"{what} {tuple(v)} does not lie in V0")


# ----------------------------------------------------------------------------
# double description
# ----------------------------------------------------------------------------

def _initial_lines(lines: list[IntVec], n: int) -> list[IntVec]:
    """Integer basis of {y in V0 : y.l = 0 for all l}."""
    mat = [tuple([1] * n)] + list(lines)
    return [primitive(v) for v in nullspace(mat, n)]


def _dd_insert(B, R, masks, r, bit):
    """Intersect the cone generated by lines B and rays R with {y : r.y >= 0}.

    ``masks`` holds, for each ray, a bitmask of the inserted halfspaces it
    makes tight.  Returns the new (B, R, masks).
    """
    vals_b = [_dot(r, b) for b in B]
    pivot = next((i for i, v in enumerate(vals_b) if v != 0), None)
    if pivot is not None:
        b0 = B[pivot]
        c0 = vals_b[pivot]
        if c0 < 0:
            b0 = tuple(-x for x in b0)
            c0 = -c0
        newB = []
        for i, b in enumerate(B):
            if i == pivot:
                continue
            v = vals_b[i]
            newB.append(b if v == 0 else primitive([c0 * x - v * y for x, y in zip(b, b0)]))
        newR, newM = [], []
        for s, m in zip(R, masks):
            v = _dot(r, s)
            newR.append(s if v == 0 else primitive([c0 * x - v * y for x, y in zip(s, b0)]))
            newM.append(m | bit)
        # b0 is tight on every earlier halfspace (it was lineality) but not on r
        newR.append(b0)
        newM.append(_all_bits(bit))
        return newB, newR, newM

    vals = [_dot(r, s) for s in R]
    if all(v >= 0 for v in vals):
        return B, R, [m | bit if v == 0 else m for m, v in zip(masks, vals)]
    plus = [i for i, v in enumerate(vals) if v > 0]
    minus = [i for i, v in enumerate(vals) if v < 0]
    zero = [i for i, v in enumerate(vals) if v == 0]
    newR = [R[i] for i in plus] + [R[i] for i in zero]
    newM = [masks[i] for i in plus] + [masks[i] | bit for i in zero]
    for i in plus:
        for j in minus:
            z = masks[i] & masks[j]
            if _adjacent(z, i, j, masks):
                vi, vj = vals[i], vals[j]
                newR.append(primitive([vi * x - vj * y for x, y in zip(R[j], R[i])]))
                newM.append(z | bit)
    return B, newR, newM


def _all_bits(bit: int) -> int:
    # every inserted halfspace before ``bit``
    return bit - 1


def _adjacent(z: int, i: int, j: int, masks) -> bool:
    for t, m in enumerate(masks):
        if t != i and t != j and m & z == z:
            return False
    return True


def dual_generators(lines: Iterable[IntVec], rays: Iterable[IntVec], n: int):
    """Lineality basis and extreme rays of {y in V0 : y.l = 0, y.r >= 0}."""
    lines = [tuple(l) for l in lines]
    B = _initial_lines(lines, n)
    R: list[IntVec] = []
    masks: list[int] = []
    bit = 1
    for r in rays:
        if not any(r):
            continue
        B, R, masks = _dd_insert(B, R, masks, tuple(r), bit)
        bit <<= 1
    return B, R


# ----------------------------------------------------------------------------
# canonical normalization
# ----------------------------------------------------------------------------

def _canon_lines(lines) -> tuple[tuple[IntVec, ...], list]:
    if not lines:
        return (), []
    red, piv = rref(lines)
    rows = [r for r in red[: len(piv)]]
    out = tuple(primitive_signed(r) for r in rows)
    return out, list(zip(rows, piv))


def _canon_rays(rays, pivots) -> tuple[IntVec, ...]:
    out = set()
    for r in rays:
        v = [Fraction(x) for x in r]
        for row, pc in pivots:
            c = v[pc]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        if any(v):
            out.add(primitive(v))
    return tuple(sorted(out))


class ClosedCone:
    """A closed polyhedral cone in V0 (canonical, immutable)."""

    __slots__ = ("n", "lines", "rays", "eqs", "ineqs", "key", "_hash", "_dual")

    def __init__(self, n, lines, rays, eqs, ineqs):
        self.n = n
        self.lines = lines
        self.rays = rays
        self.eqs = eqs
        self.ineqs = ineqs
        self.key = (n, lines, rays)
        self._hash = hash(self.key)
        self._dual = None

    def __eq__(self, other) -> bool:
        return isinstance(other, ClosedCone) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"ClosedCone(n={self.n}, lines={list(self.lines)}, rays={list(self.rays)})"

    def sort_key(self):
        return (self.dimension, len(self.lines), self.lines, self.rays)

    @property
    def dimension(self) -> int:
        return self.n - 1 - len(self.eqs)

    @property
    def is_pointed(self) -> bool:
        return not self.lines

    def relint_point(self) -> tuple[int, ...]:
        """A point in the relative interior (the sum of the extreme rays)."""
        p = [0] * self.n
        for r in self.rays:
            p = [a + b for a, b in zip(p, r)]
        return tuple(p)

    def to_json(self) -> dict:
        return {"lines": [list(v) for v in self.lines], "rays": [list(v) for v in self.rays]}


_CANON: dict = {}
_SUMS: dict = {}


def _build(n: int, lines, rays) -> ClosedCone:
    dl, dr = dual_generators(lines, rays, n)
    L, R = dual_generators(dl, dr, n)
    lines_c, piv = _canon_lines(L)
    rays_c = _canon_rays(R, piv)
    eqs_c, dpiv = _canon_lines(dl)
    ineqs_c = _canon_rays(dr, dpiv)
    key = (n, lines_c, rays_c)
    hit = _CANON.get(key)
    if hit is not None:
        return hit
    cone = ClosedCone(n, lines_c, rays_c, eqs_c, ineqs_c)
    dual = _CANON.get((n, eqs_c, ineqs_c))
    if dual is None:
        dual = ClosedCone(n, eqs_c, ineqs_c, lines_c, rays_c)
        _CANON[dual.key] = dual
    cone._dual = dual
    dual._dual = cone
    _CANON[key] = cone
    return cone


def _generators_key(n, lines, rays):
    return (n, frozenset(lines), frozenset(rays))


_GEN: dict = {}


def _from_int_generators(n: int, lines, rays) -> ClosedCone:
    lines = [primitive_signed(l) for l in lines if any(l)]
    rays = [primitive(r) for r in rays if any(r)]
    gk = _generators_key(n, lines, rays)
    hit = _GEN.get(gk)
    if hit is None:
        hit = _build(n, sorted(set(lines)), sorted(set(rays)))
        _GEN[gk] = hit
    return hit


def cone_from_rays(lines: Iterable[Sequence], rays: Iterable[Sequence], n: int) -> ClosedCone:
    """Conical hull of ``rays`` plus the linear span of ``lines``."""
    lines, rays = list(lines), list(rays)
    for v in lines + rays:
        if len(v) != n:
            raise ValueError(f"vector {tuple(v)} has wrong length for n={n}")
        _check_v0([Fraction(x) for x in v])
    return _from_int_generators(n, [primitive(l) for l in lines], [primitive(r) for r in rays])


def cone_from_halfspaces(ineqs: Iterable[Sequence], eqs: Iterable[Sequence], n: int) -> ClosedCone:
    """{x in V0 : a.x >= 0 for a in ineqs, b.x = 0 for b in eqs}."""
    pin = [project_normal(a, n) for a in ineqs]
    peq = [project_normal(b, n) for b in eqs]
    return dualize(_from_int_generators(n, peq, pin))


def vrep_from_hrep(ineqs, eqs, n: int) -> tuple[list[IntVec], list[IntVec]]:
    """Lineality basis and extreme rays of an H-described cone."""
    c = cone_from_halfspaces(ineqs, eqs, n)
    return list(c.lines), list(c.rays)


def origin(n: int) -> ClosedCone:
    return _from_int_generators(n, [], [])


def whole_space(n: int) -> ClosedCone:
    return dualize(origin(n))


def dualize(c: ClosedCone) -> ClosedCone:
    if c._dual is None:
        # only reachable for cones created outside this module
        d = _from_int_generators(c.n, list(c.eqs), list(c.ineqs))
        c._dual = d
    return c._dual


def canonical_form(c: ClosedCone) -> ClosedCone:
    return _from_int_generators(c.n, list(c.lines), list(c.rays))


def minkowski_sum(c1: ClosedCone, c2: ClosedCone) -> ClosedCone:
    if c1.n != c2.n:
        raise ValueError("ambient dimensions differ")
    if c1.dimension == 0:
        return c2
    if c2.dimension == 0:
        return c1
    k = (c1.key, c2.key) if c1.key <= c2.key else (c2.key, c1.key)
    hit = _SUMS.get(k)
    if hit is None:
        hit = _from_int_generators(c1.n, list(c1.lines) + list(c2.lines), list(c1.rays) + list(c2.rays))
        _SUMS[k] = hit
    return hit


def intersect(c1: ClosedCone, c2: ClosedCone) -> ClosedCone:
    return dualize(minkowski_sum(dualize(c1), dualize(c2)))


def contains_point(c: ClosedCone, x: Sequence) -> bool:
    if len(x) != c.n:
        raise ValueError("point has wrong length")
    _check_v0(x, "point")
    return all(_dot(e, x) == 0 for e in c.eqs) and all(_dot(a, x) >= 0 for a in c.ineqs)


def dimension(c: ClosedCone) -> int:
    return c.dimension


def is_pointed(c: ClosedCone) -> bool:
    return c.is_pointed


def simple_root(i: int, j: int, n: int) -> tuple[int, ...]:
    """e_i - e_j (1-based indices)."""
    v = [0] * n
    v[i - 1] += 1
    v[j - 1] -= 1
    return tuple(v)


def clear_caches() -> None:
    _CANON.clear()
    _SUMS.clear()
    _GEN.clear()
