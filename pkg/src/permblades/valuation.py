"""Rational-function images of plates and blades, checked by exact evaluation.

Identities between rational functions are decided by evaluating both sides at
seeded random rational points; a single mismatch is a counterexample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterable, Sequence

from .osp import OSP, cyclic_rotations, enumerate_standard_osps, is_cyclic_subword
from .plates import as_osp


class PoleHit(ZeroDivisionError):
    """A denominator vanishes at the chosen point."""


MAX_RESAMPLES = 1000
COORD_BOUND = 10 ** 6

EvalPoint = tuple  # tuple[Fraction, ...], index i-1 holds x_i


def random_point(n: int, rng: random.Random) -> EvalPoint:
    return tuple(Fraction(rng.randint(1, COORD_BOUND), rng.randint(1, COORD_BOUND)) for _ in range(n))


def _inv(d: Fraction) -> Fraction:
    if d == 0:
        raise PoleHit("denominator vanishes")
    return 1 / d


def _x(p: EvalPoint, i: int) -> Fraction:
    return Fraction(p[i - 1])


# ----------------------------------------------------------------------------
# plate representations
# ----------------------------------------------------------------------------

def laplace_rep(label, p: EvalPoint) -> Fraction:
    """prod_i 1 / (sum of x_j over the first i blocks)."""
    s = as_osp(label)
    out, acc = Fraction(1), Fraction(0)
    for b in s.blocks:
        acc += sum(_x(p, j) for j in b)
        out *= _inv(acc)
    return out


def geometric_rep(label, p: EvalPoint) -> Fraction:
    """prod_i 1 / (1 - product of x_j over the first i blocks)."""
    s = as_osp(label)
    out, acc = Fraction(1), Fraction(1)
    for b in s.blocks:
        for j in b:
            acc *= _x(p, j)
        out *= _inv(1 - acc)
    return out


def _chain(label) -> list[int] | None:
    s = as_osp(label)
    if any(len(b) > 1 for b in s.blocks):
        return None
    return [b[0] for b in s.blocks]


def ratio_rep(label, p: EvalPoint) -> Fraction:
    """Lattice-point generating function: a chain of singletons maps to
    prod 1/(1 - x_a/x_b) over consecutive pairs; non-pointed plates map to 0."""
    c = _chain(label)
    if c is None:
        return Fraction(0)
    out = Fraction(1)
    for a, b in zip(c, c[1:]):
        out *= _inv(1 - _x(p, a) * _inv(_x(p, b)))
    return out


def root_rep(label, p: EvalPoint) -> Fraction:
    """Chain of singletons maps to prod 1/(x_a - x_b); plates with a block of
    size > 1 are non-pointed and map to 0."""
    c = _chain(label)
    if c is None:
        return Fraction(0)
    out = Fraction(1)
    for a, b in zip(c, c[1:]):
        out *= _inv(_x(p, a) - _x(p, b))
    return out


def pt(order: Sequence[int], p: EvalPoint) -> Fraction:
    """1 / ((x_{i1} - x_{i2}) ... (x_{in} - x_{i1}))."""
    order = list(order)
    if len(set(order)) != len(order):
        raise ValueError("indices must be distinct")
    out = Fraction(1)
    for a, b in zip(order, order[1:] + order[:1]):
        out *= _inv(_x(p, a) - _x(p, b))
    return out


def _pt_term(label, p):
    if isinstance(label, OSP):
        return pt([b[0] for b in label.blocks], p)
    return pt(label, p)


REPS: dict[str, Callable] = {
    "laplace": laplace_rep,
    "geometric": geometric_rep,
    "ratio": ratio_rep,
    "root": root_rep,
    "pt": _pt_term,
}


def graduated_rep(rep: str | Callable) -> Callable:
    """Lift a plate representation to graduated blades (sum over rotations)."""
    f = REPS[rep] if isinstance(rep, str) else rep

    def g(label, p):
        return sum((f(r, p) for r in cyclic_rotations(as_osp(label))), Fraction(0))

    return g


def _resolve(rep) -> Callable:
    if callable(rep):
        return rep
    if rep.startswith("graduated-"):
        return graduated_rep(rep[len("graduated-"):])
    return REPS[rep]


# ----------------------------------------------------------------------------
# identity checking
# ----------------------------------------------------------------------------

Term = tuple  # (coefficient, label)


@dataclass
class IdentityResult:
    holds: bool
    trials: int
    point: EvalPoint | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    resamples: int = 0

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out = {"holds": self.holds, "trials": self.trials, "resamples": self.resamples}
        if not self.holds:
            out["witness"] = {
                "point": [str(x) for x in self.point],
                "lhs": str(self.lhs),
                "rhs": str(self.rhs),
            }
        return out


def _side(terms, f, p) -> Fraction:
    if callable(terms):
        return Fraction(terms(p))
    return sum((Fraction(c) * f(lab, p) for c, lab in terms), Fraction(0))


def verify_rational_identity(lhs, rhs, rep, trials: int = 25, n: int | None = None,
                             seed: int = 0, rng: random.Random | None = None) -> IdentityResult:
    """Exact evaluation of two signed label combinations at ``trials`` random
    points.  Either side may also be a callable point -> value."""
    f = _resolve(rep)
    if n is None:
        n = _infer_n(lhs, rhs)
    rng = rng or random.Random(seed)
    resamples = 0
    for _ in range(trials):
        for attempt in range(MAX_RESAMPLES):
            p = random_point(n, rng)
            try:
                a = _side(lhs, f, p)
                b = _side(rhs, f, p)
                break
            except PoleHit:
                resamples += 1
        else:
            raise PoleHit(f"no generic point found after {MAX_RESAMPLES} attempts")
        if a != b:
            return IdentityResult(False, trials, p, a, b, resamples)
    return IdentityResult(True, trials, resamples=resamples)


def _infer_n(*sides) -> int:
    m = 0
    for side in sides:
        if callable(side):
            continue
        for _, lab in side:
            if isinstance(lab, OSP):
                m = max(m, max(lab.support))
            elif isinstance(lab, str):
                m = max(m, max(OSP.parse(lab).support))
            else:
                m = max(m, max(lab))
    if not m:
        raise ValueError("cannot infer n; pass it explicitly")
    return m


# ----------------------------------------------------------------------------
# concrete identities
# ----------------------------------------------------------------------------

def decoupling_terms(n: int) -> list[Term]:
    """PT(1, w) for every cyclic rotation w of (2, ..., n)."""
    tail = list(range(2, n + 1))
    return [(1, tuple([1] + tail[i:] + tail[:i])) for i in range(len(tail))]


def check_decoupling(n: int, trials: int = 25, seed: int = 0) -> IdentityResult:
    return verify_rational_identity(decoupling_terms(n), [], "pt", trials, n=n, seed=seed)


SHUFFLE_TOP_TERMS = ["1|2|3|4|5", "1|2|4|3|5", "1|2|4|5|3", "1|4|2|3|5", "1|4|2|5|3", "1|4|5|2|3"]


def _q(a, b, c, x):
    # x_c x_a^2 + x_b^2 x_a - 3 x_b x_c x_a + x_b x_c^2
    xa, xb, xc = x(a), x(b), x(c)
    return xc * xa * xa + xb * xb * xa - 3 * xb * xc * xa + xb * xc * xc


def shuffle_factored(p: EvalPoint) -> Fraction:
    """The factored right-hand side for the two-tripod product."""
    x = lambda i: _x(p, i)
    den = (x(1) - x(2)) * (x(2) - x(3)) * (x(3) - x(1)) * (x(1) - x(4)) * (x(4) - x(5)) * (x(5) - x(1))
    return _q(1, 2, 3, x) * _q(1, 4, 5, x) * _inv(den)


def check_shuffle_example(trials: int = 25, seed: int = 0) -> dict:
    """The six pointed top terms of [(1,2,3)]*[(1,4,5)] under the ratio
    representation, against the factored form and the product of the factors."""
    top = [(1, OSP.parse(s)) for s in SHUFFLE_TOP_TERMS]
    g = graduated_rep("ratio")
    factored = verify_rational_identity(top, shuffle_factored, g, trials, n=5, seed=seed)
    product = verify_rational_identity(
        top, lambda p: g(OSP.parse("1|2|3"), p) * g(OSP.parse("1|4|5"), p), g, trials, n=5, seed=seed)
    return {"factored": factored, "product_of_factors": product}


def check_laplace_cyclic_sum(n: int = 5, trials: int = 25, seed: int = 0) -> IdentityResult:
    """Root representation of [(1,...,n)] vanishes identically."""
    return verify_rational_identity([(1, OSP.singletons(range(1, n + 1)))], [], "graduated-root",
                                    trials, n=n, seed=seed)


def _g(*factors: Iterable[int]):
    def f(p):
        out = Fraction(1)
        for fac in factors:
            prod = Fraction(1)
            for j in fac:
                prod *= _x(p, j)
            out *= _inv(1 - prod)
        return out
    return f


def tripod_partial_fraction_form(p: EvalPoint) -> Fraction:
    """Five-term partial fraction form of [(2,3,4)] in the geometric representation."""
    return (_g([2], [2, 3], [4])(p) + _g([3], [4], [2, 4])(p) + _g([2], [3], [3, 4])(p)
            + _g([2, 3, 4])(p) - _g([2], [3], [4])(p))


def geometric_blade_sum_terms() -> list[Term]:
    """Standard OSPs of {1..4} containing (1) and (2,3,4) as cyclic subwords, signed."""
    out = []
    a, b = OSP.parse("1"), OSP.parse("2|3|4")
    for u in enumerate_standard_osps(4):
        if is_cyclic_subword(a, u) and is_cyclic_subword(b, u):
            out.append(((-1) ** (4 - len(u)), u))
    return out


def printed_blade_sum_form(p: EvalPoint) -> Fraction:
    """The five-term right-hand side as displayed, with (1 - x_2) appearing twice
    in the second term."""
    return (_g([1], [2], [2, 3], [4])(p) + _g([2], [3], [3, 4], [2])(p) + _g([1], [4], [4, 2], [3])(p)
            + _g([1], [2, 3, 4])(p) - _g([1], [2], [3], [4])(p))


def corrected_blade_sum_form(p: EvalPoint) -> Fraction:
    return (_g([1], [2], [2, 3], [4])(p) + _g([1], [3], [4], [2, 4])(p) + _g([1], [2], [3], [3, 4])(p)
            + _g([1], [2, 3, 4])(p) - _g([1], [2], [3], [4])(p))


def check_geometric_example(trials: int = 25, seed: int = 0) -> dict:
    g = graduated_rep("geometric")
    tri = [(1, OSP.parse("2|3|4"))]
    blade_sum = geometric_blade_sum_terms()
    scaled = lambda p: _inv(1 - _x(p, 1)) * g(OSP.parse("2|3|4"), p)
    return {
        "tripod_partial_fractions": verify_rational_identity(tri, tripod_partial_fraction_form, g, trials, n=4, seed=seed),
        "blade_sum_scaled": verify_rational_identity(blade_sum, scaled, g, trials, n=4, seed=seed),
        "blade_sum_printed": verify_rational_identity(blade_sum, printed_blade_sum_form, g, trials, n=4, seed=seed),
        "blade_sum_corrected": verify_rational_identity(blade_sum, corrected_blade_sum_form, g, trials, n=4, seed=seed),
    }


def kk_relations_check(n: int, trials: int = 25, seed: int = 0) -> dict:
    """Linear relations among the top blades modulo non-pointed and higher
    codimension plates, pushed through the blade -> PT map."""
    from .blades import blade_char_fn
    from .exact_core import nullspace, rank
    from .plates import expand_in_plate_basis, project_mod_codim, project_mod_nonpointed

    labels = [OSP.singletons((1,) + perm) for perm in permutations(range(2, n + 1))]
    vecs = []
    for s in labels:
        coords = expand_in_plate_basis(blade_char_fn(s, n))
        coords = project_mod_codim(project_mod_nonpointed(coords), n)
        vecs.append(coords)
    keys = sorted({k for v in vecs for k in v}, key=str)
    mat = [[v.get(k, 0) for k in keys] for v in vecs]
    # relations: c with sum_s c_s vec_s = 0
    transposed = [list(col) for col in zip(*mat)] if keys else []
    rels = nullspace(transposed, len(labels)) if transposed else [
        [1 if i == j else 0 for i in range(len(labels))] for j in range(len(labels))]
    rng = random.Random(seed)
    results = []
    for rel in rels:
        terms = [(c, tuple(b[0] for b in s.blocks)) for c, s in zip(rel, labels) if c]
        results.append(verify_rational_identity(terms, [], "pt", trials, n=n, rng=rng))
    pts = [random_point(n, rng) for _ in range(len(labels) + 2)]
    pt_rank = rank([[pt([b[0] for b in s.blocks], p) for p in pts] for s in labels])
    return {
        "n": n,
        "blades": len(labels),
        "projected_rank": rank(mat) if keys else 0,
        "pt_rank": pt_rank,
        "relations": len(rels),
        "all_hold": all(results),
    }
