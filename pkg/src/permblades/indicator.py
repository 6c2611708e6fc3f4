"""Rational combinations of closed-cone indicator functions.

Convolution sends ``[C1] * [C2]`` to ``[C1 + C2]`` (Minkowski sum), the
pointwise product sends it to ``[C1 & C2]``, and duality sends ``[C]`` to the
indicator of the dual cone.  Equality of functions is decided exactly by
evaluating the difference once on every face of the hyperplane arrangement
built from the normals of the atoms involved.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .cone import (
    ClosedCone, NotInV0, contains_point, dualize, intersect, minkowski_sum, origin,
    whole_space,
)
from .exact_core import primitive, primitive_signed, rank


class ConeFunction:
    """Finite formal sum of closed-cone indicators with rational coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[ClosedCone, object] | None = None):
        self.n = n
        clean: dict[ClosedCone, Fraction] = {}
        if terms:
            for c, v in terms.items():
                if c.n != n:
                    raise ValueError("atom lives in a different ambient space")
                v = Fraction(v)
                if v:
                    clean[c] = clean.get(c, 0) + v
                    if not clean[c]:
                        del clean[c]
        self.terms = clean

    @classmethod
    def atom(cls, cone: ClosedCone, coeff=1) -> "ConeFunction":
        return cls(cone.n, {cone: coeff})

    @classmethod
    def zero(cls, n: int) -> "ConeFunction":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "ConeFunction":
        """Indicator of the origin: the unit for convolution."""
        return cls.atom(origin(n))

    @classmethod
    def everything(cls, n: int) -> "ConeFunction":
        """Indicator of V0: the unit for the pointwise product."""
        return cls.atom(whole_space(n))

    def _check(self, other: "ConeFunction"):
        if not isinstance(other, ConeFunction):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("ambient dimensions differ")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for c, v in other.terms.items():
            out[c] = out.get(c, 0) + v
        return ConeFunction(self.n, out)

    def __neg__(self):
        return ConeFunction(self.n, {c: -v for c, v in self.terms.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, ConeFunction):
            raise TypeError("use convolve() or pointwise_product() for functions")
        s = Fraction(scalar)
        return ConeFunction(self.n, {c: v * s for c, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        # identity of term maps; use functions_equal for equality as functions
        return isinstance(other, ConeFunction) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"ConeFunction(n={self.n}, atoms={len(self.terms)})"

    def sorted_terms(self) -> list[tuple[ClosedCone, Fraction]]:
        return sorted(self.terms.items(), key=lambda cv: cv[0].sort_key())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"coeff": str(v), **c.to_json()} for c, v in self.sorted_terms()
            ],
        }


def _lift(fs: Iterable[ConeFunction]) -> list[ConeFunction]:
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one function")
    n = fs[0].n
    if any(f.n != n for f in fs):
        raise ValueError("ambient dimensions differ")
    return fs


def convolve(*fs: ConeFunction) -> ConeFunction:
    """Bilinear extension of [C1] * [C2] = [C1 + C2]."""
    fs = _lift(fs)
    acc = fs[0]
    for g in fs[1:]:
        out: dict[ClosedCone, Fraction] = {}
        for c1, v1 in acc.terms.items():
            for c2, v2 in g.terms.items():
                c = minkowski_sum(c1, c2)
                out[c] = out.get(c, 0) + v1 * v2
        acc = ConeFunction(acc.n, out)
    return acc


def pointwise_product(*fs: ConeFunction) -> ConeFunction:
    """Bilinear extension of [C1] . [C2] = [C1 & C2]."""
    fs = _lift(fs)
    acc = fs[0]
    for g in fs[1:]:
        out: dict[ClosedCone, Fraction] = {}
        for c1, v1 in acc.terms.items():
            for c2, v2 in g.terms.items():
                c = intersect(c1, c2)
                out[c] = out.get(c, 0) + v1 * v2
        acc = ConeFunction(acc.n, out)
    return acc


def dualize_fn(f: ConeFunction) -> ConeFunction:
    return ConeFunction(f.n, {dualize(c): v for c, v in f.terms.items()})


def euler_characteristic(f: ConeFunction) -> Fraction:
    return sum(f.terms.values(), Fraction(0))


def eval_at(f: ConeFunction, x) -> Fraction:
    if len(x) != f.n:
        raise ValueError("point has wrong length")
    if sum(x) != 0:
        raise NotInV0(f"point {tuple(x)} does not lie in V0")
    return sum((v for c, v in f.terms.items() if contains_point(c, x)), Fraction(0))


def elementary_symmetric(fs: list[ConeFunction], j: int, n: int) -> ConeFunction:
    """j-th elementary symmetric convolution polynomial in ``fs``."""
    total = ConeFunction.zero(n)
    if j == 0:
        return ConeFunction.one(n)
    for sub in combinations(fs, j):
        total = total + convolve(*sub)
    return total


# ----------------------------------------------------------------------------
# arrangement faces
# ----------------------------------------------------------------------------

def subset_normals(n: int) -> list[tuple[int, ...]]:
    """V0 components of the subset-sum functionals x_S, one per hyperplane."""
    out = set()
    for r in range(1, n):
        for s in combinations(range(n), r):
            v = [-r] * n
            for i in s:
                v[i] += n
            out.add(primitive_signed(v))
    return sorted(out)


def _hyperplane(v) -> tuple[int, ...]:
    return primitive_signed(v)


class _Face:
    __slots__ = ("lines", "rays", "cons")

    def __init__(self, lines, rays, cons):
        self.lines = lines  # list of int vectors
        self.rays = rays
        self.cons = cons  # list of oriented normals a with a.x >= 0 on the face


def _split(face: _Face, a, keep_lower: bool):
    """Children of ``face`` cut by the hyperplane a.x = 0 (sign +, 0, -)."""
    vals_l = [sum(x * y for x, y in zip(a, l)) for l in face.lines]
    pivot = next((i for i, v in enumerate(vals_l) if v != 0), None)
    na = tuple(-x for x in a)
    if pivot is not None:
        b0 = face.lines[pivot]
        c0 = vals_l[pivot]
        if c0 < 0:
            b0 = tuple(-x for x in b0)
            c0 = -c0
        newL = []
        for i, l in enumerate(face.lines):
            if i == pivot:
                continue
            v = vals_l[i]
            newL.append(l if v == 0 else primitive([c0 * x - v * y for x, y in zip(l, b0)]))
        newR = []
        for s in face.rays:
            v = sum(x * y for x, y in zip(a, s))
            newR.append(s if v == 0 else primitive([c0 * x - v * y for x, y in zip(s, b0)]))
        out = [_Face(newL, newR + [b0], face.cons + [a]),
               _Face(newL, newR + [tuple(-x for x in b0)], face.cons + [na])]
        if keep_lower:
            out.append(_Face(newL, newR, face.cons))
        return out

    vals = [sum(x * y for x, y in zip(a, s)) for s in face.rays]
    has_p = any(v > 0 for v in vals)
    has_m = any(v < 0 for v in vals)
    if not has_m:
        if has_p:
            return [_Face(face.lines, face.rays, face.cons + [a])]
        return [face]
    if not has_p:
        return [_Face(face.lines, face.rays, face.cons + [na])]

    masks = []
    for s in face.rays:
        m = 0
        for k, c in enumerate(face.cons):
            if sum(x * y for x, y in zip(c, s)) == 0:
                m |= 1 << k
        masks.append(m)
    plus = [i for i, v in enumerate(vals) if v > 0]
    minus = [i for i, v in enumerate(vals) if v < 0]
    zero = [face.rays[i] for i, v in enumerate(vals) if v == 0]
    combos = []
    for i in plus:
        for j in minus:
            z = masks[i] & masks[j]
            if all(t in (i, j) or masks[t] & z != z for t in range(len(masks))):
                vi, vj = vals[i], vals[j]
                combos.append(primitive([vi * x - vj * y for x, y in zip(face.rays[j], face.rays[i])]))
    out = [
        _Face(face.lines, [face.rays[i] for i in plus] + zero + combos, face.cons + [a]),
        _Face(face.lines, [face.rays[i] for i in minus] + zero + combos, face.cons + [na]),
    ]
    if keep_lower:
        out.append(_Face(face.lines, zero + combos, face.cons))
    return out


_FACES: dict = {}


def arrangement_witnesses(normals: Iterable, n: int, chambers_only: bool = False) -> list[tuple[int, ...]]:
    """One relative-interior point per face (or per chamber) of a central
    arrangement in V0 given by hyperplane normals."""
    hyper = sorted({_hyperplane(v) for v in normals if any(v)})
    key = (n, tuple(hyper), chambers_only)
    hit = _FACES.get(key)
    if hit is not None:
        return hit
    start = _Face([primitive(v) for v in _v0_basis(n)], [], [])
    faces = [start]
    for a in hyper:
        nxt = []
        for f in faces:
            nxt.extend(_split(f, a, not chambers_only))
        faces = nxt
    out = []
    for f in faces:
        p = [0] * n
        for r in f.rays:
            p = [x + y for x, y in zip(p, r)]
        out.append(tuple(p))
    _FACES[key] = out
    return out


def _v0_basis(n: int):
    return [tuple(1 if j == i else -1 if j == i + 1 else 0 for j in range(n)) for i in range(n - 1)]


def _orthogonal_to_all(v, gens) -> bool:
    return all(sum(x * y for x, y in zip(v, g)) == 0 for g in gens)


def _equality_normals(cone: ClosedCone, pool: list, chosen: set) -> list:
    """Hyperplanes from the arrangement (then subset sums, then the cone's own
    equations) whose common zero set is the linear span of ``cone``."""
    need = len(cone.eqs)
    if need == 0:
        return []
    gens = list(cone.lines) + list(cone.rays)
    picked: list = []
    for cand in sorted(chosen) + pool + list(cone.eqs):
        if not _orthogonal_to_all(cand, gens):
            continue
        if rank(picked + [cand]) > len(picked):
            picked.append(cand)
            if len(picked) == need:
                break
    return picked


def relevant_normals(fs: Iterable[ConeFunction], n: int) -> set:
    """Arrangement on which every function in ``fs`` is constant on faces."""
    atoms = set()
    for f in fs:
        atoms.update(f.terms)
    normals = set()
    for c in atoms:
        normals.update(_hyperplane(a) for a in c.ineqs)
    pool = subset_normals(n)
    for c in sorted(atoms, key=lambda c: c.sort_key()):
        normals.update(_hyperplane(v) for v in _equality_normals(c, pool, normals))
    return normals


def _int_matrix(vectors, n):
    big = any(abs(x) > _INT64_SAFE for v in vectors for x in v)
    return np.array(vectors, dtype=object if big else np.int64).reshape(len(vectors), n)


_INT64_SAFE = 1 << 20


def values_on_witnesses(f: ConeFunction, witnesses) -> np.ndarray:
    """Exact values of f at many integer points (vectorized membership).

    Returns an integer array of values scaled by the common denominator of the
    coefficients; only the zero pattern and ratios are meaningful.
    """
    n = f.n
    W = _int_matrix(witnesses, n)
    den = 1
    for v in f.terms.values():
        den = den * v.denominator // gcd(den, v.denominator)
    total = np.zeros(len(witnesses), dtype=object)
    for c, v in f.terms.items():
        mask = np.ones(len(witnesses), dtype=bool)
        if c.ineqs:
            mask &= (W.dot(_int_matrix(c.ineqs, n).T) >= 0).all(axis=1)
        if c.eqs:
            mask &= (W.dot(_int_matrix(c.eqs, n).T) == 0).all(axis=1)
        total[mask] += int(v * den)
    return total


_SUBSET_CUT: dict = {}

SUPERSET_MAX_N = 5


def _dots(v, vecs):
    return [sum(x * y for x, y in zip(v, g)) for g in vecs]


def is_subset_cut(c: ClosedCone) -> bool:
    """Whether ``c`` is a union of faces of the subset-sum arrangement: its span
    and every facet are cut out by hyperplanes x_S = 0."""
    hit = _SUBSET_CUT.get(c)
    if hit is not None:
        return hit
    pool = subset_normals(c.n)
    gens = list(c.lines) + list(c.rays)
    ok = True
    if c.eqs:
        orth = [s for s in pool if _orthogonal_to_all(s, gens)]
        ok = rank(orth) == len(c.eqs) if orth else False
    if ok:
        # tight ray sets of facets, matched by some valid subset normal
        cand = []
        for s in pool:
            for v in (s, tuple(-x for x in s)):
                if any(_dots(v, c.lines)):
                    continue
                d = _dots(v, c.rays)
                if all(x >= 0 for x in d) and any(d):
                    cand.append(frozenset(i for i, x in enumerate(d) if x == 0))
        cand = set(cand)
        for a in c.ineqs:
            tight = frozenset(i for i, x in enumerate(_dots(a, c.rays)) if x == 0)
            if tight not in cand:
                ok = False
                break
    _SUBSET_CUT[c] = ok
    return ok


def equality_witnesses(h: ConeFunction, chambers_only: bool = False):
    """Witness points on which ``h`` is determined (one per face of an
    arrangement on whose faces every atom of ``h`` is constant)."""
    n = h.n
    if n <= SUPERSET_MAX_N and all(is_subset_cut(c) for c in h.terms):
        return arrangement_witnesses(subset_normals(n), n, chambers_only)
    return arrangement_witnesses(relevant_normals([h], n), n, chambers_only)


def find_difference(f: ConeFunction, g: ConeFunction, chambers_only: bool = False):
    """A witness point where f and g differ, or None when they are equal."""
    h = f - g
    if not h.terms:
        return None
    wit = equality_witnesses(h, chambers_only)
    vals = values_on_witnesses(h, wit)
    for w, v in zip(wit, vals):
        if v != 0:
            return w
    return None


def functions_equal(f: ConeFunction, g: ConeFunction) -> bool:
    return find_difference(f, g) is None


def functions_equal_mod_codim1(f: ConeFunction, g: ConeFunction) -> bool:
    """Equality away from cones of codimension at least one."""
    return find_difference(f, g, chambers_only=True) is None


def is_zero(f: ConeFunction) -> bool:
    return functions_equal(f, ConeFunction.zero(f.n))


def face_values(f: ConeFunction, witnesses) -> list[Fraction]:
    return [eval_at(f, w) for w in witnesses]


def union_contains(cones: Iterable[ClosedCone], x) -> bool:
    return any(contains_point(c, x) for c in cones)


def unions_equal(a: Iterable[ClosedCone], b: Iterable[ClosedCone], n: int) -> bool:
    """Set equality of two finite unions of cones, checked face by face."""
    a, b = list(a), list(b)
    normals = set()
    pool = subset_normals(n)
    for c in a + b:
        normals.update(_hyperplane(v) for v in c.ineqs)
    for c in a + b:
        normals.update(_hyperplane(v) for v in _equality_normals(c, pool, normals))
    for w in arrangement_witnesses(normals, n):
        if union_contains(a, w) != union_contains(b, w):
            return False
    return True

