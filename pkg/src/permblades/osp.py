"""Ordered set partitions, cyclic structure, polygon triangulations and counts."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial
from typing import Callable, Iterable, Iterator, Sequence


class TooLarge(ValueError):
    """Enumeration request beyond the supported size."""


class NoSuchDiagonal(ValueError):
    """A flip was requested on an edge that is not an interior diagonal."""


class OSP:
    """An ordered set partition: a sequence of disjoint nonempty blocks.

    Blocks are stored as sorted tuples; the support may be any finite set of
    positive integers.
    """

    __slots__ = ("blocks", "_hash")

    def __init__(self, blocks: Iterable[Iterable[int]]):
        bl = []
        seen: set[int] = set()
        for b in blocks:
            items = tuple(sorted(int(x) for x in b))
            if not items:
                raise ValueError("empty block")
            if len(set(items)) != len(items) or seen.intersection(items):
                raise ValueError("repeated element in ordered set partition")
            if items[0] <= 0:
                raise ValueError("elements must be positive integers")
            seen.update(items)
            bl.append(items)
        self.blocks: tuple[tuple[int, ...], ...] = tuple(bl)
        self._hash = hash(self.blocks)

    @classmethod
    def parse(cls, text: str) -> "OSP":
        """Parse ``1,5|2|9|3|6,7``."""
        text = text.strip()
        if not text:
            raise ValueError("empty ordered set partition")
        blocks = []
        for chunk in text.split("|"):
            parts = [p.strip() for p in chunk.split(",")]
            if any(not p.isdigit() for p in parts):
                raise ValueError(f"bad block {chunk!r}")
            vals = [int(p) for p in parts]
            if any(v == 0 for v in vals):
                raise ValueError("zero is not a valid element")
            blocks.append(vals)
        return cls(blocks)

    @classmethod
    def singletons(cls, seq: Iterable[int]) -> "OSP":
        return cls([x] for x in seq)

    def __str__(self) -> str:
        return "|".join(",".join(map(str, b)) for b in self.blocks)

    def __repr__(self) -> str:
        return f"OSP({str(self)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, OSP) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __getitem__(self, i):
        return self.blocks[i]

    def sort_key(self):
        return (len(self.blocks), self.blocks)

    def __lt__(self, other: "OSP") -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def support(self) -> frozenset[int]:
        return frozenset(x for b in self.blocks for x in b)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def rotate(self, j: int) -> "OSP":
        k = len(self.blocks)
        j %= k
        return OSP(self.blocks[j:] + self.blocks[:j])

    def drop_first(self) -> "OSP":
        return OSP(self.blocks[1:])

    def is_singleton_blocks(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)


def is_standard(s: OSP) -> bool:
    return min(s.support) in s.blocks[0]


def is_two_standard(s: OSP) -> bool:
    if not is_standard(s):
        return False
    return len(s) == 1 or is_standard(s.drop_first())


def cyclic_rotations(s: OSP) -> list[OSP]:
    return [s.rotate(j) for j in range(len(s))]


def cyclic_normal_form(s: OSP) -> OSP:
    m = min(s.support)
    j = next(i for i, b in enumerate(s.blocks) if m in b)
    return s.rotate(j)


def block_images(w: OSP, u: OSP) -> list[int] | None:
    """Index of the block of ``u`` containing each block of ``w``, or None."""
    where = {x: i for i, b in enumerate(u.blocks) for x in b}
    out = []
    for b in w.blocks:
        idx = {where.get(x) for x in b}
        if len(idx) != 1 or None in idx:
            return None
        out.append(idx.pop())
    return out


def is_cyclically_increasing(seq: Sequence[int]) -> bool:
    """Distinct values that become increasing after some rotation."""
    if len(set(seq)) != len(seq):
        return False
    descents = sum(1 for i in range(len(seq)) if seq[i] > seq[(i + 1) % len(seq)])
    return descents <= 1


def is_cyclic_subword(w: OSP, u: OSP) -> bool:
    """Blocks of ``w`` sit inside distinct blocks of ``u`` in the cyclic order.

    Block images are forced because blocks of ``u`` are disjoint, so the test
    reduces to checking that the image indices run once around the cycle.
    """
    img = block_images(w, u)
    return img is not None and is_cyclically_increasing(img)


def lex_sequence(s: OSP) -> tuple[int, ...]:
    """(p_1, ..., p_n) with p_i the 1-based index of the block holding the i-th
    smallest element of the support."""
    where = {x: i + 1 for i, b in enumerate(s.blocks) for x in b}
    return tuple(where[x] for x in sorted(where))


def lex_compare(s: OSP, t: OSP) -> int:
    if s.support != t.support:
        raise ValueError("lex comparison needs a common ground set")
    a, b = lex_sequence(s), lex_sequence(t)
    return (a > b) - (a < b)


# ----------------------------------------------------------------------------
# enumeration
# ----------------------------------------------------------------------------

MAX_ENUM = 9


def _set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def set_partitions(ground: Iterable[int]) -> Iterator[list[tuple[int, ...]]]:
    items = sorted(ground)
    for p in _set_partitions(items):
        yield [tuple(sorted(b)) for b in p]


def enumerate_osps(ground, predicate: Callable[[OSP], bool] | None = None) -> Iterator[OSP]:
    """All ordered set partitions of ``ground`` (an int n means {1..n})."""
    items = list(range(1, ground + 1)) if isinstance(ground, int) else sorted(ground)
    if len(items) > MAX_ENUM:
        raise TooLarge(f"ground set of size {len(items)} exceeds {MAX_ENUM}")
    for p in set_partitions(items):
        for perm in permutations(p):
            s = OSP(perm)
            if predicate is None or predicate(s):
                yield s


def enumerate_standard_osps(ground) -> list[OSP]:
    """Standard OSPs of ``ground``, generated directly and sorted by lex sequence."""
    items = list(range(1, ground + 1)) if isinstance(ground, int) else sorted(ground)
    if len(items) > MAX_ENUM:
        raise TooLarge(f"ground set of size {len(items)} exceeds {MAX_ENUM}")
    out = []
    m = items[0]
    for p in set_partitions(items):
        head = next(b for b in p if m in b)
        others = [b for b in p if b is not head]
        for perm in permutations(others):
            out.append(OSP((head,) + perm))
    out.sort(key=lex_sequence)
    return out


def all_subset_osps(n: int) -> list[OSP]:
    """OSPs of every nonempty subset of {1..n}."""
    out = []
    for r in range(1, n + 1):
        for t in combinations(range(1, n + 1), r):
            out.extend(enumerate_osps(t))
    return out


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def stirling1(n: int, k: int) -> int:
    """Unsigned Stirling numbers of the first kind (permutations with k cycles)."""
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return (n - 1) * stirling1(n - 1, k) + stirling1(n - 1, k - 1)


def necklace(n: int) -> int:
    """Ordered set partitions of {1..n} up to cyclic rotation of blocks."""
    return sum(stirling2(n, k) * factorial(k - 1) for k in range(1, n + 1))


def fubini(n: int) -> int:
    return sum(stirling2(n, k) * factorial(k) for k in range(n + 1))


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


# ----------------------------------------------------------------------------
# polygon triangulations
# ----------------------------------------------------------------------------

class PolygonTriangulation:
    """Triangulation of the convex k-gon with vertices 1..k.

    Triangles are stored as increasing triples (which are cyclically oriented).
    """

    __slots__ = ("k", "triangles")

    def __init__(self, k: int, triangles: Iterable[Sequence[int]]):
        tris = []
        for t in triangles:
            a, b, c = t
            if not is_cyclically_increasing([a, b, c]):
                raise ValueError(f"triangle {t} is not cyclically oriented")
            tris.append(tuple(sorted(t)))
        if len(tris) != k - 2:
            raise ValueError("a triangulation of a k-gon has k-2 triangles")
        self.k = k
        self.triangles = tuple(sorted(tris))

    def __eq__(self, other) -> bool:
        return (isinstance(other, PolygonTriangulation) and self.k == other.k
                and self.triangles == other.triangles)

    def __hash__(self) -> int:
        return hash((self.k, self.triangles))

    def __repr__(self) -> str:
        return f"PolygonTriangulation({self.k}, {list(self.triangles)})"

    def diagonals(self) -> list[tuple[int, int]]:
        edges = set()
        for a, b, c in self.triangles:
            edges.update({(a, b), (b, c), (a, c)})
        return sorted(e for e in edges if (e[1] - e[0]) % self.k not in (1, self.k - 1))


def enumerate_triangulations(k: int) -> list[PolygonTriangulation]:
    if not 3 <= k <= 9:
        raise TooLarge("triangulations are enumerated for 3 <= k <= 9")

    @lru_cache(maxsize=None)
    def tri(i: int, j: int) -> tuple:
        if j - i < 2:
            return ((),)
        out = []
        for m in range(i + 1, j):
            for left in tri(i, m):
                for right in tri(m, j):
                    out.append(left + right + ((i, m, j),))
        return tuple(out)

    return sorted((PolygonTriangulation(k, t) for t in tri(1, k)), key=lambda t: t.triangles)


def flip(t: PolygonTriangulation, diagonal: tuple[int, int]) -> PolygonTriangulation:
    """Replace the two triangles sharing ``diagonal`` by the other diagonal's pair."""
    i, k = sorted(diagonal)
    pair = [tr for tr in t.triangles if i in tr and k in tr]
    if len(pair) != 2:
        raise NoSuchDiagonal(f"{diagonal} is not an interior diagonal")
    j = next(x for x in pair[0] if x not in (i, k))
    ell = next(x for x in pair[1] if x not in (i, k))
    rest = [tr for tr in t.triangles if tr not in pair]
    return PolygonTriangulation(t.k, rest + [tuple(sorted((i, j, ell))), tuple(sorted((j, k, ell)))])
