"""Graduated blades, the canonical basis, straightening and the enumerations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Iterable, Sequence

from .blades import blade_char_fn
from .indicator import ConeFunction, arrangement_witnesses, convolve, eval_at, subset_normals
from .osp import (
    OSP, cyclic_normal_form, cyclic_rotations, enumerate_standard_osps, is_cyclic_subword,
    is_standard, is_two_standard, lex_sequence, necklace, set_partitions, stirling1, stirling2,
)
from .plates import as_osp, plate


class StraighteningFailed(ArithmeticError):
    """The change-of-basis matrix is singular."""


class NeedMoreTerms(ValueError):
    """A truncated generating function has not stabilized."""


# ----------------------------------------------------------------------------
# graduated blades
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class GraduatedBlade:
    label: OSP
    fn: ConeFunction


def graduated_fn(label, n: int) -> ConeFunction:
    s = as_osp(label)
    total = ConeFunction.zero(n)
    for r in cyclic_rotations(s):
        total = total + plate(r, n)
    return total


def graduated(label, n: int) -> GraduatedBlade:
    s = as_osp(label)
    if not is_standard(s):
        raise ValueError(f"{s} is not standard")
    return GraduatedBlade(s, graduated_fn(s, n))


# ----------------------------------------------------------------------------
# canonical elements
# ----------------------------------------------------------------------------

class CanonicalElement:
    """A set of OSPs (T, S_i) sharing the first block T, each 2-standard, whose
    remaining supports partition the complement of T."""

    __slots__ = ("t_block", "parts")

    def __init__(self, parts: Iterable[OSP]):
        parts = [as_osp(p) for p in parts]
        if not parts:
            raise ValueError("a canonical element has at least one part")
        t = parts[0].blocks[0]
        seen = set(t)
        for p in parts:
            if p.blocks[0] != t:
                raise ValueError("all parts must start with the same block")
            if not is_two_standard(p):
                raise ValueError(f"part {p} is not 2-standard")
            rest = set(p.support) - set(t)
            if seen & rest:
                raise ValueError("parts overlap outside the first block")
            seen |= rest
        # a lone (T) part only survives when T is everything
        parts = [p for p in parts if len(p) > 1] or [OSP([t])]
        self.t_block = t
        self.parts = tuple(sorted(parts, key=lambda p: p.blocks))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(x for p in self.parts for x in p.support)

    @property
    def block_count(self) -> int:
        """m = 1 + total number of blocks after T."""
        return 1 + sum(len(p) - 1 for p in self.parts)

    def dimension(self, n: int) -> int:
        return n - 1 - sum(1 for p in self.parts if len(p) > 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, CanonicalElement) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __str__(self) -> str:
        return "{" + "; ".join(str(p) for p in self.parts) + "}"

    def __repr__(self) -> str:
        return f"CanonicalElement({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "CanonicalElement":
        return cls(OSP.parse(chunk) for chunk in text.strip().strip("{}").split(";"))


def u_b(label) -> CanonicalElement:
    """Split a standard OSP after its first block at the left-to-right minima
    of the remaining blocks; each piece gets the first block prepended."""
    s = cyclic_normal_form(as_osp(label))
    t, rest = s.blocks[0], s.blocks[1:]
    if not rest:
        return CanonicalElement([OSP([t])])
    starts = []
    running = None
    for i, b in enumerate(rest):
        if running is None or b[0] < running:
            starts.append(i)
            running = b[0]
    starts.append(len(rest))
    parts = [OSP((t,) + rest[a:b]) for a, b in zip(starts, starts[1:])]
    return CanonicalElement(parts)


def u_b_inverse(e: CanonicalElement) -> OSP:
    """Concatenate the parts in decreasing order of their second block minimum."""
    parts = [p for p in e.parts if len(p) > 1]
    parts.sort(key=lambda p: p.blocks[1][0], reverse=True)
    blocks = [e.t_block]
    for p in parts:
        blocks.extend(p.blocks[1:])
    return OSP(blocks)


def canonical_elements(n: int) -> list[CanonicalElement]:
    """Direct enumeration of blade-canonical composite OSPs of {1..n}."""
    out = []
    others = list(range(2, n + 1))
    for r in range(len(others) + 1):
        from itertools import combinations
        for extra in combinations(others, r):
            t = (1,) + extra
            rest = [x for x in others if x not in extra]
            if not rest:
                out.append(CanonicalElement([OSP([t])]))
                continue
            for groups in set_partitions(rest):
                choices = [enumerate_standard_osps(g) for g in groups]
                for combo in _product(choices):
                    out.append(CanonicalElement(OSP((t,) + tuple(c.blocks)) for c in combo))
    return out


def _product(lists):
    if not lists:
        yield ()
        return
    for x in lists[0]:
        for rest in _product(lists[1:]):
            yield (x,) + rest


def canonical_census(n: int) -> dict[int, int]:
    """Counts of canonical elements by dimension of the blade product."""
    if n > 6:
        raise ValueError("census is supported for n <= 6")
    counts: dict[int, int] = {}
    for e in canonical_elements(n):
        d = e.dimension(n)
        counts[d] = counts.get(d, 0) + 1
    return dict(sorted(counts.items()))


def expand_canonical_product(e: CanonicalElement) -> dict[OSP, int]:
    """Signed expansion of the product of graduated parts over graduated blades.

    U runs over standard OSPs whose blocks are unions of the source blocks
    (T and every later block of every part) such that each part is a cyclic
    subword of U; the sign is (-1)^(m - |U|).
    """
    atoms = [e.t_block] + [b for p in e.parts for b in p.blocks[1:]]
    m = len(atoms)
    out: dict[OSP, int] = {}
    for idx in enumerate_standard_osps(m):
        u = OSP([tuple(x for i in blk for x in atoms[i - 1]) for blk in idx.blocks])
        if all(is_cyclic_subword(p, u) for p in e.parts):
            out[u] = (-1) ** (m - len(u))
    return dict(sorted(out.items(), key=lambda kv: lex_sequence(kv[0])))


def canonical_product_fn(e: CanonicalElement, n: int) -> ConeFunction:
    """Convolution of the graduated functions of the parts."""
    return convolve(*[graduated_fn(p, n) for p in e.parts])


def canonical_gamma_fn(e: CanonicalElement, n: int) -> ConeFunction:
    """Convolution of the characteristic blade functions of the parts."""
    return convolve(*[blade_char_fn(p, n) for p in e.parts])


def expansion_fn(coeffs: dict[OSP, int], n: int) -> ConeFunction:
    total = ConeFunction.zero(n)
    for u, c in coeffs.items():
        total = total + graduated_fn(u, n) * c
    return total


# ----------------------------------------------------------------------------
# change of basis
# ----------------------------------------------------------------------------

@lru_cache(maxsize=None)
def change_of_basis(n: int):
    """Standard OSPs in lex order and the sparse matrix M[U][S] giving the
    coefficient of [(U)] in the expansion of the canonical element of S."""
    labels = enumerate_standard_osps(n)
    cols = {s: expand_canonical_product(u_b(s)) for s in labels}
    return labels, cols


def verify_unitriangular(n: int) -> bool:
    labels, cols = change_of_basis(n)
    pos = {s: i for i, s in enumerate(labels)}
    for s in labels:
        col = cols[s]
        if col.get(s) != 1:
            return False
        if any(pos[u] > pos[s] for u in col):
            return False
    return True


def straighten(label, n: int | None = None) -> dict[CanonicalElement, Fraction]:
    """Coordinates of [(label)] over the canonical elements."""
    s = cyclic_normal_form(as_osp(label))
    n = n or max(s.support)
    if s.support != frozenset(range(1, n + 1)):
        raise ValueError("straightening needs an OSP of {1..n}")
    if n > 6:
        raise ValueError("straightening is supported for n <= 6")
    labels, cols = change_of_basis(n)
    # solve M x = e_s by back substitution from the lex-largest label
    rhs: dict[OSP, Fraction] = {s: Fraction(1)}
    x: dict[OSP, Fraction] = {}
    for t in reversed(labels):
        v = rhs.get(t, Fraction(0))
        if not v:
            continue
        diag = cols[t].get(t, 0)
        if not diag:
            raise StraighteningFailed(f"zero pivot at {t}")
        coef = v / diag
        x[t] = coef
        for u, c in cols[t].items():
            rhs[u] = rhs.get(u, Fraction(0)) - coef * c
    return {u_b(t): c for t, c in x.items() if c}


def unstraighten(coords: dict[CanonicalElement, Fraction]) -> dict[OSP, Fraction]:
    """Expand canonical coordinates back over graduated blades."""
    out: dict[OSP, Fraction] = {}
    for e, c in coords.items():
        for u, v in expand_canonical_product(e).items():
            out[u] = out.get(u, Fraction(0)) + c * v
    return {u: v for u, v in out.items() if v}


# ----------------------------------------------------------------------------
# enumeration
# ----------------------------------------------------------------------------

def blade_count(n: int, k: int) -> int:
    """Number of canonical blades of dimension n - k."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    return sum(stirling2(n, i) * stirling1(i - 1, k - 1) for i in range(1, n + 1))


def plate_count(n: int, k: int) -> int:
    """Number of plates of {1..n} whose cone has dimension n - k."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    return sum(stirling2(n, i) * stirling1(i, k) for i in range(1, n + 1))


def blade_row(n: int) -> list[int]:
    return [blade_count(n, k) for k in range(1, n + 1)]


def plate_row(n: int) -> list[int]:
    return [plate_count(n, k) for k in range(1, n + 1)]


def plates_by_dimension(n: int) -> dict[int, int]:
    """Brute-force: distinct plate cones of {1..n} grouped by dimension."""
    from .osp import enumerate_osps
    from .plates import plate_cone
    counts: dict[int, int] = {}
    for s in enumerate_osps(n):
        d = plate_cone(s, n).dimension
        counts[d] = counts.get(d, 0) + 1
    return counts


class IntPolynomial:
    """Dense integer polynomial, coefficients in ascending degree."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Sequence[int]):
        c = list(int(x) for x in coefficients)
        while c and c[-1] == 0:
            c.pop()
        self.coefficients = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolynomial) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __call__(self, x):
        return sum(c * x ** i for i, c in enumerate(self.coefficients))

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if not c:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and i) else str(mag)
            if i == 1:
                body += "x"
            elif i > 1:
                body += f"x^{i}"
            terms.append(("-" if c < 0 else "+") + body)
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coefficients)})"

    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]

    def is_unimodal(self) -> bool:
        c = self.coefficients
        i = 0
        while i + 1 < len(c) and c[i] <= c[i + 1]:
            i += 1
        while i + 1 < len(c) and c[i] >= c[i + 1]:
            i += 1
        return i >= len(c) - 1


def diagonal_term(d: int, m: int) -> int:
    """m-th entry of the d-th diagonal of the blade triangle."""
    return blade_count(m + d + 1, m + 1)


def _numerator(d: int, terms: int) -> list[int]:
    series = [diagonal_term(d, m) for m in range(terms)]
    k = 2 * d + 1
    factor = [(-1) ** i * comb(k, i) for i in range(k + 1)]
    return [sum(factor[i] * series[j - i] for i in range(min(j, k) + 1)) for j in range(terms)]


def diagonal_numerator(d: int, terms: int | None = None) -> IntPolynomial:
    """(1 - x)^(2d+1) times the generating function of the d-th diagonal."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    terms = terms if terms is not None else 2 * d + 4
    if terms < 2 * d + 2:
        raise NeedMoreTerms(f"need at least {2 * d + 2} terms")
    a = IntPolynomial(_numerator(d, terms))
    b = IntPolynomial(_numerator(d, terms + 2))
    if a != b or a.degree >= terms - 2:
        raise NeedMoreTerms(f"numerator of diagonal {d} not stable with {terms} terms")
    return a


def conjecture_check(d_max: int) -> list[dict]:
    out = []
    for d in range(d_max + 1):
        p = diagonal_numerator(d)
        expected = factorial(2 * d) // factorial(d)
        total = sum(p.coefficients)
        sym, uni = p.is_palindromic(), p.is_unimodal()
        out.append({
            "d": d,
            "numerator": str(p),
            "symmetric": sym,
            "unimodal": uni,
            "sum": total,
            "expected_sum": expected,
            "pass": sym and uni and total == expected,
        })
    return out


# ----------------------------------------------------------------------------
# rank checks
# ----------------------------------------------------------------------------

def _rank_on_faces(fns: list[ConeFunction], n: int) -> int:
    from .exact_core import rank
    wit = arrangement_witnesses(subset_normals(n), n)
    return rank([[eval_at(f, w) for w in wit] for f in fns])


def graduated_rank(n: int) -> tuple[int, int]:
    """(rank, count) of the graduated blades of {1..n}."""
    fns = [graduated_fn(s, n) for s in enumerate_standard_osps(n)]
    return _rank_on_faces(fns, n), len(fns)


def gamma_set_report(n: int) -> dict:
    """Rank of the {0,1}-valued canonical products and whether they span the
    same space as the graduated blades."""
    gam = [canonical_gamma_fn(e, n) for e in canonical_elements(n)]
    grad = [graduated_fn(s, n) for s in enumerate_standard_osps(n)]
    r_gam = _rank_on_faces(gam, n)
    r_grad = _rank_on_faces(grad, n)
    r_both = _rank_on_faces(gam + grad, n)
    return {
        "n": n,
        "size": len(gam),
        "rank": r_gam,
        "independent": r_gam == len(gam),
        "same_span_as_graduated": r_gam == r_grad == r_both,
    }


def necklace_check(n: int) -> bool:
    return sum(blade_row(n)) == necklace(n)


# ----------------------------------------------------------------------------
# quotient relations in three coordinates
# ----------------------------------------------------------------------------

def quotient_relations_report() -> dict:
    """The two-blade relations on V0^3, exactly and modulo non-pointed plates,
    plates of codimension >= 2, or both."""
    from .indicator import functions_equal, pointwise_product
    from .plates import (
        expand_in_plate_basis, project_mod_codim, project_mod_nonpointed, subspace,
        subspace_product,
    )
    n = 3
    one = lambda *b: subspace(b, n)
    origin = subspace_product([(1,), (2,), (3,)], n)
    char_sum = blade_char_fn("1|2|3", n) + blade_char_fn("1|3|2", n)
    grad_sum = graduated_fn("1|2|3", n) + graduated_fn("1|3|2", n)
    lines = one(1, 2) + one(2, 3) + one(1, 3)
    pairs = graduated_fn("1|2,3", n) + graduated_fn("1,2|3", n) + graduated_fn("1,3|2", n)
    whole = one(1, 2, 3)
    zero = ConeFunction.zero(n)

    def mod(lhs, rhs, nonpointed, codim):
        d = expand_in_plate_basis(lhs - rhs)
        if nonpointed:
            d = project_mod_nonpointed(d)
        if codim:
            d = project_mod_codim(d, n)
        return not d

    return {
        "char_exact": functions_equal(char_sum, lines - origin),
        "char_exact_pointwise_form": functions_equal(
            char_sum, lines - pointwise_product(one(1, 2), one(2, 3), one(1, 3))),
        "char_mod_codim": mod(char_sum, lines, False, True),
        "char_mod_nonpointed": mod(char_sum, -origin, True, False),
        "char_mod_both": mod(char_sum, zero, True, True),
        "graduated_exact": functions_equal(grad_sum, pairs - whole + origin),
        "graduated_mod_codim": mod(grad_sum, pairs - whole, False, True),
        "graduated_mod_nonpointed": mod(grad_sum, origin, True, False),
        "graduated_mod_both": mod(grad_sum, zero, True, True),
    }
