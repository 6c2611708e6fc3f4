"""The commutative nilpotent ring on edge generators u_ij and its v-subalgebra.

Generators u_ij = -u_ji (i != j) satisfy u_ij^2 = 0 and the three-term
relation u_ij u_jk + u_jk u_ki + u_ki u_ij = 0.  Monomials are squarefree sets
of edges, stored as bitmasks.  Each graded piece is reduced by exact linear
algebra: the ideal in degree d is spanned by relation * monomial, kept in a
sparse echelon form whose pivot is the largest monomial of each row.  The
normal form of an element is its remainder on non-pivot monomials.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Mapping, Sequence

from .osp import stirling1


class NotNilpotent(ValueError):
    """exp was asked for an element with nonzero constant term."""


# ----------------------------------------------------------------------------
# sparse echelon
# ----------------------------------------------------------------------------

class Echelon:
    """Rows with distinct leading (maximal) columns, leading coefficient 1."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        v = {c: Fraction(a) for c, a in vec.items() if a}
        heap = [-c for c in v]
        heapq.heapify(heap)
        out: dict[int, Fraction] = {}
        while heap:
            c = -heapq.heappop(heap)
            a = v.pop(c, None)
            if not a:
                continue
            row = self.pivots.get(c)
            if row is None:
                out[c] = a
                continue
            for c2, b in row.items():
                if c2 == c:
                    continue
                old = v.get(c2)
                if old is None:
                    v[c2] = -a * b
                    heapq.heappush(heap, -c2)
                else:
                    new = old - a * b
                    if new:
                        v[c2] = new
                    else:
                        v[c2] = Fraction(0)
        return out

    def insert(self, vec: Mapping[int, Fraction]) -> bool:
        r = self.reduce(vec)
        if not r:
            return False
        lead = max(r)
        a = r[lead]
        self.pivots[lead] = {c: x / a for c, x in r.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


# ----------------------------------------------------------------------------
# the ring
# ----------------------------------------------------------------------------

class Ring:
    """Edge bookkeeping and per-degree quotient data for a fixed n."""

    def __init__(self, n: int, edge_order: Sequence[tuple[int, int]] | None = None):
        if n < 2:
            raise ValueError("need n >= 2")
        self.n = n
        edges = list(edge_order) if edge_order is not None else list(combinations(range(1, n + 1), 2))
        if sorted(edges) != list(combinations(range(1, n + 1), 2)):
            raise ValueError("edge_order must list every pair i<j once")
        self.edges = edges
        self.bit = {e: 1 << i for i, e in enumerate(edges)}
        self._ideal: dict[int, Echelon] = {}
        self._v_span: dict[int, Echelon] = {}

    def edge_mask(self, i: int, j: int) -> tuple[int, int]:
        """(bitmask, sign) for u_ij."""
        if i == j:
            raise ValueError("u_ii is not a generator")
        if i < j:
            return self.bit[(i, j)], 1
        return self.bit[(j, i)], -1

    def _relations(self):
        for i, j, k in combinations(range(1, self.n + 1), 3):
            # u_ij u_jk + u_jk u_ki + u_ki u_ij
            terms: dict[int, int] = {}
            for (a, b), (c, d) in (((i, j), (j, k)), ((j, k), (k, i)), ((k, i), (i, j))):
                m1, s1 = self.edge_mask(a, b)
                m2, s2 = self.edge_mask(c, d)
                terms[m1 | m2] = terms.get(m1 | m2, 0) + s1 * s2
            yield terms

    def ideal(self, d: int) -> Echelon:
        ech = self._ideal.get(d)
        if ech is not None:
            return ech
        ech = Echelon()
        if d >= 2:
            rels = list(self._relations())
            bits = [1 << i for i in range(len(self.edges))]
            for rest in combinations(bits, d - 2):
                m = sum(rest)
                for rel in rels:
                    row = {mm | m: c for mm, c in rel.items() if not mm & m}
                    if row:
                        ech.insert(row)
        self._ideal[d] = ech
        return ech

    def monomial_count(self, d: int) -> int:
        from math import comb
        return comb(len(self.edges), d)

    def dimension(self, d: int) -> int:
        return self.monomial_count(d) - self.ideal(d).rank

    def dimensions(self) -> list[int]:
        out = []
        for d in range(len(self.edges) + 1):
            dim = self.dimension(d)
            if dim == 0:
                break
            out.append(dim)
        return out

    def v_span(self, d: int) -> Echelon:
        """Echelon form of the degree-d products of v_{1jk}, in normal form."""
        ech = self._v_span.get(d)
        if ech is not None:
            return ech
        ech = Echelon()
        gens = [v(1, j, k, self) for j, k in combinations(range(2, self.n + 1), 2)]
        for combo in combinations(gens, d):
            prod = one(self)
            for g in combo:
                prod = prod * g
            comp = prod.component(d)
            if comp:
                ech.insert(comp)
        self._v_span[d] = ech
        return ech


@lru_cache(maxsize=None)
def ring(n: int) -> Ring:
    return Ring(n)


def _degree(mask: int) -> int:
    return bin(mask).count("1")


class GradedElement:
    """An element of the ring, always kept in normal form."""

    __slots__ = ("ring", "terms")

    def __init__(self, r: Ring, terms: Mapping[int, Fraction], reduced: bool = False):
        self.ring = r
        if reduced:
            self.terms = {m: c for m, c in terms.items() if c}
        else:
            by_deg: dict[int, dict[int, Fraction]] = {}
            for m, c in terms.items():
                if c:
                    by_deg.setdefault(_degree(m), {})[m] = Fraction(c)
            out: dict[int, Fraction] = {}
            for d, vec in by_deg.items():
                out.update(r.ideal(d).reduce(vec))
            self.terms = out

    @property
    def n(self) -> int:
        return self.ring.n

    def component(self, d: int) -> dict[int, Fraction]:
        return {m: c for m, c in self.terms.items() if _degree(m) == d}

    def degrees(self) -> list[int]:
        return sorted({_degree(m) for m in self.terms})

    def is_zero(self) -> bool:
        return not self.terms

    def constant(self) -> Fraction:
        return self.terms.get(0, Fraction(0))

    def _check(self, other):
        if self.ring is not other.ring:
            raise ValueError("elements of different rings")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = one(self.ring) * other
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return GradedElement(self.ring, t, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement(self.ring, {m: -c for m, c in self.terms.items()}, reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GradedElement(self.ring, {m: c * other for m, c in self.terms.items()}, reduced=True)
        self._check(other)
        t: dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if m1 & m2:
                    continue
                t[m1 | m2] = t.get(m1 | m2, 0) + c1 * c2
        return GradedElement(self.ring, t)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (Fraction(1) / Fraction(k))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = one(self.ring) * other
        return isinstance(other, GradedElement) and self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def monomial_str(self, m: int) -> str:
        if m == 0:
            return "1"
        return "*".join(f"u{i}{j}" if self.n < 10 else f"u{i},{j}"
                        for (i, j) in self.ring.edges if self.ring.bit[(i, j)] & m)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (_degree(m), m)):
            c = self.terms[m]
            parts.append(f"{c}*{self.monomial_str(m)}" if m else str(c))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"GradedElement(n={self.n}, {self})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"coeff": str(self.terms[m]),
                       "edges": [[i, j] for (i, j) in self.ring.edges if self.ring.bit[(i, j)] & m]}
                      for m in sorted(self.terms, key=lambda m: (_degree(m), m))],
        }


def _r(r) -> Ring:
    return ring(r) if isinstance(r, int) else r


def one(r) -> GradedElement:
    r = _r(r)
    return GradedElement(r, {0: Fraction(1)}, reduced=True)


def zero(r) -> GradedElement:
    return GradedElement(_r(r), {}, reduced=True)


def u(i: int, j: int, r) -> GradedElement:
    r = _r(r)
    m, s = r.edge_mask(i, j)
    return GradedElement(r, {m: Fraction(s)}, reduced=True)


def v(i: int, j: int, k: int, r) -> GradedElement:
    r = _r(r)
    return u(i, j, r) + u(j, k, r) + u(k, i, r)


def z(i: int, r) -> GradedElement:
    r = _r(r)
    total = zero(r)
    for j in range(1, r.n + 1):
        if j != i:
            total = total + u(i, j, r)
    return total


def normal_form(e: GradedElement) -> GradedElement:
    """Elements are stored reduced; this re-reduces from scratch."""
    return GradedElement(e.ring, dict(e.terms))


def multiply(a: GradedElement, b: GradedElement) -> GradedElement:
    return a * b


def exp_nilpotent(a: GradedElement) -> GradedElement:
    if a.constant():
        raise NotNilpotent("exp needs an element without constant term")
    total = one(a.ring)
    power = one(a.ring)
    k = 0
    while True:
        k += 1
        power = power * a / k
        if power.is_zero():
            return total
        total = total + power


def relabel(e: GradedElement, perm: Mapping[int, int]) -> GradedElement:
    """Apply i -> perm[i] to every generator."""
    r = e.ring
    out = zero(r)
    for m, c in e.terms.items():
        term = one(r) * c
        for (i, j) in r.edges:
            if r.bit[(i, j)] & m:
                term = term * u(perm[i], perm[j], r)
        out = out + term
    return out


# ----------------------------------------------------------------------------
# identities
# ----------------------------------------------------------------------------

def _cycle_edges(seq: Sequence[int]):
    seq = list(seq)
    return list(zip(seq, seq[1:] + seq[:1]))


def flag_identity_check(seq: Sequence[int], n: int | None = None) -> bool:
    """prod (1 + u_{i_a i_{a+1}}) around the cycle equals the fan of (1 + v)."""
    seq = list(seq)
    if len(set(seq)) != len(seq) or len(seq) < 2:
        raise ValueError("need at least two distinct indices")
    r = ring(n or max(seq))
    lhs = one(r)
    for a, b in _cycle_edges(seq):
        lhs = lhs * (one(r) + u(a, b, r))
    rhs = one(r)
    for a in range(1, len(seq) - 1):
        rhs = rhs * (one(r) + v(seq[0], seq[a], seq[a + 1], r))
    return lhs == rhs


def cyclic_vanish_check(seq: Sequence[int], n: int | None = None) -> bool:
    """The full cyclic product and the sum of all (k-1)-edge cyclic paths vanish."""
    seq = list(seq)
    if len(set(seq)) != len(seq) or len(seq) < 2:
        raise ValueError("need at least two distinct indices")
    r = ring(n or max(seq))
    edges = _cycle_edges(seq)
    k = len(edges)
    full = one(r)
    for a, b in edges:
        full = full * u(a, b, r)
    paths = zero(r)
    for start in range(k):
        term = one(r)
        for t in range(k - 1):
            a, b = edges[(start + t) % k]
            term = term * u(a, b, r)
        paths = paths + term
    return full.is_zero() and paths.is_zero()


def triple_relations_check(n: int) -> bool:
    """v_ijk = v_jki = -v_ikj and v_ijk^2 = 0 for all triples."""
    r = ring(n)
    for i, j, k in permutations(range(1, n + 1), 3):
        a = v(i, j, k, r)
        if a != v(j, k, i, r) or a != -v(i, k, j, r) or not (a * a).is_zero():
            return False
    return True


def degree_one_decomposition_check(n: int) -> bool:
    """u_ij = (z_i - z_j)/n + (1/n) sum_k v_ijk."""
    r = ring(n)
    for i, j in permutations(range(1, n + 1), 2):
        rhs = (z(i, r) - z(j, r)) / n
        for k in range(1, n + 1):
            if k not in (i, j):
                rhs = rhs + v(i, j, k, r) / n
        if rhs != u(i, j, r):
            return False
    return True


def subalgebra_membership(e: GradedElement) -> bool:
    for d in e.degrees():
        if d == 0:
            continue
        if e.ring.v_span(d).reduce(e.component(d)):
            return False
    return True


# ----------------------------------------------------------------------------
# flows
# ----------------------------------------------------------------------------

@dataclass
class FlowMatrix:
    """Flow m[(i, j)] from i to j; missing pairs carry 0."""
    n: int
    m: dict

    def __post_init__(self):
        self.m = {tuple(k): Fraction(x) for k, x in self.m.items() if x}
        for (i, j) in self.m:
            if i == j or not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"bad edge {(i, j)}")

    def alpha(self, i: int, j: int) -> Fraction:
        return self.m.get((i, j), Fraction(0)) - self.m.get((j, i), Fraction(0))

    @classmethod
    def from_alpha(cls, n: int, alpha: Mapping) -> "FlowMatrix":
        return cls(n, {(i, j): a for (i, j), a in alpha.items()})

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]], weight=1) -> "FlowMatrix":
        m: dict = {}
        for c in cycles:
            for a, b in _cycle_edges(c):
                m[(a, b)] = m.get((a, b), 0) + weight
        return cls(n, m)


def scattering_check(alpha: FlowMatrix) -> bool:
    n = alpha.n
    return all(sum((alpha.alpha(a, b) for b in range(1, n + 1) if b != a), Fraction(0)) == 0
               for a in range(1, n + 1))


def balanced_graph(m: FlowMatrix) -> bool:
    return scattering_check(m)


def flow_exponential(alpha: FlowMatrix) -> GradedElement:
    r = ring(alpha.n)
    lin = zero(r)
    for i, j in combinations(range(1, alpha.n + 1), 2):
        a = alpha.alpha(i, j)
        if a:
            lin = lin + u(i, j, r) * a
    return exp_nilpotent(lin)


def scattering_iff_membership(alpha: FlowMatrix) -> bool:
    """True when balance and membership of exp(sum alpha_ij u_ij) agree."""
    return scattering_check(alpha) == subalgebra_membership(flow_exponential(alpha))


def exhaustive_scattering(n: int = 4) -> tuple[int, int]:
    """(cases, agreements) over alpha in {-1,0,1}^(n choose 2)."""
    from itertools import product
    pairs = list(combinations(range(1, n + 1), 2))
    cases = agree = 0
    for vals in product((-1, 0, 1), repeat=len(pairs)):
        f = FlowMatrix.from_alpha(n, dict(zip(pairs, vals)))
        cases += 1
        agree += scattering_iff_membership(f)
    return cases, agree


def random_flows(n: int, count: int, rng: random.Random) -> list[FlowMatrix]:
    """Half balanced (sums of weighted random cycles), half unconstrained."""
    out = []
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]

    def rnd():
        return Fraction(rng.randint(-50, 50), rng.randint(1, 50))

    for t in range(count):
        if t % 2 == 0:
            m: dict = {}
            for _ in range(rng.randint(1, 4)):
                k = rng.randint(2, n)
                cyc = rng.sample(range(1, n + 1), k)
                w = rnd()
                for a, b in _cycle_edges(cyc):
                    m[(a, b)] = m.get((a, b), 0) + w
            out.append(FlowMatrix(n, m))
        else:
            out.append(FlowMatrix(n, {p: rnd() for p in pairs if rng.random() < 0.5}))
    return out


# ----------------------------------------------------------------------------
# leading singularities
# ----------------------------------------------------------------------------

def leading_singularity(triples: Iterable[Sequence[int]], n: int | None = None) -> GradedElement:
    triples = [tuple(t) for t in triples]
    r = ring(n or max(max(t) for t in triples))
    out = one(r)
    for t in triples:
        out = out * (one(r) + v(*t, r))
    return out


HEXAGON_TRIPLES = [(1, 2, 3), (3, 4, 5), (5, 6, 1), (2, 6, 4)]


def _u_sum(r, edges) -> GradedElement:
    total = zero(r)
    for a, b in edges:
        total = total + u(a, b, r)
    return total


def hexagon_ls_check() -> dict:
    r = ring(6)
    ls = leading_singularity(HEXAGON_TRIPLES, 6)
    twelve = exp_nilpotent(_u_sum(r, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 3), (5, 6), (6, 1),
                                       (1, 5), (2, 6), (6, 4), (4, 2)]))
    vv = exp_nilpotent(v(1, 5, 3, r) + v(2, 6, 4, r))
    printed = exp_nilpotent(_u_sum(r, [(1, 2), (2, 3), (3, 4), (5, 6), (6, 1)])) * vv
    corrected = exp_nilpotent(_u_sum(r, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)])) * vv
    rot = {i: i % 6 + 1 for i in range(1, 7)}
    return {
        "exp_of_edge_sum": ls == twelve,
        "as_printed": ls == printed,
        "with_u45": ls == corrected,
        "rotation_invariant": relabel(ls, rot) == ls,
    }


def hexagon_flip_check() -> bool:
    r = ring(6)
    lhs = v(1, 2, 3, r) * v(3, 4, 5, r) * v(5, 6, 1, r) * v(1, 3, 5, r)
    rhs = v(1, 2, 3, r) * v(1, 3, 4, r) * v(1, 4, 5, r) * v(1, 5, 6, r)
    return lhs == rhs and not lhs.is_zero()


def triangulation_product(triangles: Iterable[Sequence[int]], n: int) -> GradedElement:
    return leading_singularity(triangles, n)


def boundary_product(k: int, n: int | None = None) -> GradedElement:
    """prod (1 + u_{i,i+1}) around the k-gon 1..k."""
    r = ring(n or k)
    out = one(r)
    for a, b in _cycle_edges(range(1, k + 1)):
        out = out * (one(r) + u(a, b, r))
    return out


# ----------------------------------------------------------------------------
# dimensions and the conjectured bases
# ----------------------------------------------------------------------------

def expected_dimensions(n: int) -> list[int]:
    return [stirling1(n, n - j) for j in range(n)]


def _cycles(perm: Sequence[int]) -> list[list[int]]:
    """Cycles of a permutation of 1..m (perm[i-1] is the image of i), each
    starting at its minimum."""
    m = len(perm)
    seen = set()
    out = []
    for s in range(1, m + 1):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        x = perm[s - 1]
        while x != s:
            cyc.append(x)
            seen.add(x)
            x = perm[x - 1]
        out.append(cyc)
    return out


def conjectured_basis_check(n: int) -> dict:
    """Rank of the cycle-indexed u-monomials in the ring for n-1 and of the
    v-monomials (with last index n) in the v-subalgebra for n, per degree."""
    if n > 6:
        raise ValueError("supported for n <= 6")
    m = n - 1
    r_small, r_big = ring(m) if m >= 2 else None, ring(n)
    by_deg: dict[int, list] = {}
    for perm in permutations(range(1, m + 1)):
        cyc = _cycles(perm)
        by_deg.setdefault(m - len(cyc), []).append(cyc)
    report = {}
    ok = True
    for j in sorted(by_deg):
        cycs = by_deg[j]
        u_ech, v_ech = Echelon(), Echelon()
        for cyc_list in cycs:
            if r_small is not None:
                eu = one(r_small)
            ev = one(r_big)
            for c in cyc_list:
                for a, b in zip(c, c[1:]):
                    if r_small is not None:
                        eu = eu * u(a, b, r_small)
                    ev = ev * v(a, b, n, r_big)
            if r_small is not None:
                u_ech.insert(eu.component(j))
            v_ech.insert(ev.component(j))
        dim_u = r_small.dimension(j) if r_small is not None else (1 if j == 0 else 0)
        if j == 0:
            u_rank = v_rank = 1
            dim_v = 1
        else:
            u_rank, v_rank = u_ech.rank, v_ech.rank
            dim_v = r_big.v_span(j).rank
        row = {
            "count": len(cycs),
            "u_rank": u_rank, "u_dim": dim_u,
            "v_rank": v_rank, "v_dim": dim_v,
        }
        row["pass"] = len(cycs) == u_rank == dim_u == v_rank == dim_v
        ok = ok and row["pass"]
        report[j] = row
    return {"n": n, "degrees": report, "pass": ok}
