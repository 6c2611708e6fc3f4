"""Points on the circle modulo rotation, parametrized by ordered set partitions.

Angles are rational fractions of a full turn, so rotation classes compare by
exact subtraction mod 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .osp import OSP, cyclic_normal_form, cyclic_rotations, enumerate_osps, stirling2
from .plates import as_osp


@dataclass(frozen=True)
class CircleConfig:
    """angle[i] in [0, 1) for each particle, with particle 1 at 0."""
    angle: tuple[Fraction, ...]

    def __getitem__(self, i: int) -> Fraction:
        return self.angle[i - 1]

    def to_json(self) -> dict:
        return {str(i + 1): str(a) for i, a in enumerate(self.angle)}


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def normalize(angles: Mapping[int, Fraction] | Sequence[Fraction]) -> CircleConfig:
    if isinstance(angles, Mapping):
        angles = [angles[i] for i in range(1, len(angles) + 1)]
    base = Fraction(angles[0])
    return CircleConfig(tuple(_mod1(Fraction(a) - base) for a in angles))


def _check_simplex(x: Sequence, n: int) -> list[Fraction]:
    x = [Fraction(t) for t in x]
    if len(x) != n:
        raise ValueError(f"point has {len(x)} coordinates, expected {n}")
    if any(t < 0 for t in x) or sum(x) != 1:
        raise ValueError("point must be nonnegative with coordinate sum 1")
    return x


def raw_angles(label, x: Sequence) -> dict[int, Fraction]:
    """Each particle in block i sits at the sum of x over blocks i..k, mod 1."""
    s = as_osp(label)
    n = max(s.support)
    if s.support != frozenset(range(1, n + 1)):
        raise ValueError("label must partition {1..n}")
    xs = _check_simplex(x, n)
    out: dict[int, Fraction] = {}
    acc = Fraction(0)
    for b in reversed(s.blocks):
        acc += sum(xs[j - 1] for j in b)
        for j in b:
            out[j] = _mod1(acc)
    return out


def phi(label, x: Sequence) -> CircleConfig:
    return normalize(raw_angles(label, x))


def random_simplex_point(n: int, rng: random.Random, bound: int = 1000) -> list[Fraction]:
    w = [rng.randint(1, bound) for _ in range(n)]
    t = sum(w)
    return [Fraction(a, t) for a in w]


def rotation_shift(label, x: Sequence) -> Fraction:
    """Uniform angle by which rotating the blocks once moves every particle:
    the total weight of the first block, mod 1."""
    s = as_osp(label)
    xs = [Fraction(t) for t in x]
    return _mod1(sum(xs[j - 1] for j in s.blocks[0]))


def cyclic_invariance_check(label, trials: int = 25, seed: int = 0,
                            rng: random.Random | None = None) -> bool:
    s = as_osp(label)
    n = max(s.support)
    rng = rng or random.Random(seed)
    rots = cyclic_rotations(s)
    for _ in range(trials):
        x = random_simplex_point(n, rng)
        base = phi(s, x)
        for r in rots:
            if phi(r, x) != base:
                return False
    return True


def phase_difference_check(label, trials: int = 10, seed: int = 0,
                           rng: random.Random | None = None) -> bool:
    """Rotating the blocks once shifts every raw angle by the same amount."""
    s = as_osp(label)
    n = max(s.support)
    rng = rng or random.Random(seed)
    if len(s) == 1:
        return True
    rot = OSP(s.blocks[1:] + s.blocks[:1])
    for _ in range(trials):
        x = random_simplex_point(n, rng)
        a, b = raw_angles(s, x), raw_angles(rot, x)
        shift = rotation_shift(s, x)
        if any(_mod1(b[i] - a[i] - shift) for i in a):
            return False
    return True


def count_by_blocks(n: int) -> list[int]:
    """Cyclic classes of OSPs of {1..n} with k = 1..n blocks."""
    if not 1 <= n <= 10:
        raise ValueError("need 1 <= n <= 10")
    return [stirling2(n, k) * factorial(k - 1) for k in range(1, n + 1)]


def count_by_blocks_brute(n: int) -> list[int]:
    classes = {cyclic_normal_form(s) for s in enumerate_osps(n)}
    out = [0] * n
    for s in classes:
        out[len(s) - 1] += 1
    return out
