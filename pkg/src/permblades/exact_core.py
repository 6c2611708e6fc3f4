"""Exact rational linear algebra and feasibility of strict/nonstrict systems.

Rationals are :class:`fractions.Fraction`.  Vectors are tuples, matrices are
lists of tuples.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple
Matrix = list


class Inconsistent(ValueError):
    """A linear system has no solution."""


class Infeasible(ValueError):
    """A system of linear inequalities has no solution."""


def frac_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def rref(m: Sequence[Sequence]) -> tuple[list[tuple[Fraction, ...]], list[int]]:
    """Reduced row echelon form and pivot columns.

    The output has as many rows as the input; zero rows sit at the bottom.
    """
    rows = [list(frac_vector(r)) for r in m]
    if not rows:
        return [], []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("matrix is not rectangular")
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [x / p for x in rows[r]]
        pivot_row = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows], pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[1]) if m else 0


def nullspace(m: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : m x = 0}, one vector per free column."""
    if not m:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(m)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(red, piv):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_linear(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """One exact solution of a x = b (free variables set to zero)."""
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    if not a:
        raise ValueError("empty system")
    ncols = len(a[0])
    aug = [tuple(row) + (rhs,) for row, rhs in zip(a, b)]
    red, piv = rref(aug)
    if ncols in piv:
        raise Inconsistent("system has no solution")
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, piv):
        x[pc] = row[ncols]
    return tuple(x)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector, keeping direction."""
    fr = frac_vector(v)
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def primitive_signed(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector with first nonzero coordinate positive."""
    p = primitive(v)
    for x in p:
        if x:
            return p if x > 0 else tuple(-y for y in p)
    return p


# ----------------------------------------------------------------------------
# Fourier-Motzkin feasibility with witness back-substitution
# ----------------------------------------------------------------------------

class _Row:
    __slots__ = ("coef", "const", "strict", "hist")

    def __init__(self, coef, const, strict, hist):
        self.coef = coef
        self.const = const
        self.strict = strict
        self.hist = hist

    def key(self):
        # positive scaling invariant key for deduplication
        vals = list(self.coef) + [self.const]
        s = next((abs(x) for x in vals if x != 0), None)
        if s is None:
            return (tuple(vals),)
        return tuple(x / s for x in vals)


def _normalize_constraints(items, n, allow_strict):
    out = []
    for item in items:
        if allow_strict:
            vec, strict = item
            strict = _as_strict(strict)
        else:
            vec, strict = item, False
        vec = frac_vector(vec)
        if len(vec) == n:
            coef, const = vec, Fraction(0)
        elif len(vec) == n + 1:
            coef, const = vec[:n], vec[n]
        else:
            raise ValueError(f"constraint of length {len(vec)} for n={n}")
        out.append((coef, const, strict))
    return out


def _as_strict(flag) -> bool:
    if isinstance(flag, str):
        if flag not in ("strict", "nonstrict"):
            raise ValueError(f"unknown strictness {flag!r}")
        return flag == "strict"
    return bool(flag)


def relative_interior_point(ineqs, eqs, n: int) -> tuple[Fraction, ...]:
    """A rational point satisfying a mixed system, or raise :class:`Infeasible`.

    ``ineqs`` holds pairs ``(vector, strict)`` meaning ``a.x + c >= 0`` (or ``> 0``
    when strict); ``eqs`` holds vectors meaning ``a.x + c = 0``.  A vector of
    length n is homogeneous, length n+1 carries the constant ``c`` last.
    Deterministic for a fixed input.
    """
    ineq_rows = _normalize_constraints(ineqs, n, True)
    eq_rows = _normalize_constraints(eqs, n, False)

    # Parametrize the affine solution set of the equalities: x = x0 + N t.
    if eq_rows:
        a = [coef for coef, _, _ in eq_rows]
        b = [-const for _, const, _ in eq_rows]
        try:
            x0 = solve_linear(a, b)
        except Inconsistent as exc:
            raise Infeasible("equalities are inconsistent") from exc
        basis = nullspace(a, n)
    else:
        x0 = tuple(Fraction(0) for _ in range(n))
        basis = nullspace([], n)
    d = len(basis)

    rows = []
    for i, (coef, const, strict) in enumerate(ineq_rows):
        new_coef = tuple(dot(coef, bv) for bv in basis)
        new_const = const + dot(coef, x0)
        rows.append(_Row(new_coef, new_const, strict, frozenset([i])))

    for prune in (True, False):
        t = _fm_solve(rows, d, prune)
        if t is None:
            continue
        x = tuple(x0[i] + sum(t[j] * basis[j][i] for j in range(d)) for i in range(n))
        if _satisfies(x, ineq_rows, eq_rows):
            return x
    raise Infeasible("no point satisfies the system")


def _satisfies(x, ineq_rows, eq_rows) -> bool:
    for coef, const, strict in ineq_rows:
        v = dot(coef, x) + const
        if v < 0 or (strict and v == 0):
            return False
    return all(dot(coef, x) + const == 0 for coef, const, _ in eq_rows)


def _fm_solve(rows, d, prune):
    """Eliminate variables d-1..0, then back-substitute.  None if infeasible."""
    levels = []
    current = _dedup(rows)
    for step, var in enumerate(reversed(range(d))):
        levels.append((var, current))
        pos, neg, keep = [], [], []
        for r in current:
            c = r.coef[var]
            (pos if c > 0 else neg if c < 0 else keep).append(r)
        nxt = list(keep)
        limit = step + 2
        for p in pos:
            for q in neg:
                hist = p.hist | q.hist
                if prune and len(hist) > limit:
                    continue
                a, b = p.coef[var], -q.coef[var]
                coef = tuple(b * x + a * y for x, y in zip(p.coef, q.coef))
                const = b * p.const + a * q.const
                nxt.append(_Row(coef, const, p.strict or q.strict, hist))
        current = _dedup(nxt)
    for r in current:
        if r.const < 0 or (r.strict and r.const == 0):
            return None
    t = [Fraction(0)] * d
    for var, cons in reversed(levels):
        lo, lo_strict, hi, hi_strict = None, False, None, False
        for r in cons:
            c = r.coef[var]
            rest = r.const + sum(r.coef[j] * t[j] for j in range(d) if j != var)
            if c == 0:
                continue
            bound = -rest / c
            if c > 0:
                if lo is None or bound > lo:
                    lo, lo_strict = bound, r.strict
                elif bound == lo:
                    lo_strict = lo_strict or r.strict
            else:
                if hi is None or bound < hi:
                    hi, hi_strict = bound, r.strict
                elif bound == hi:
                    hi_strict = hi_strict or r.strict
        if lo is None and hi is None:
            val = Fraction(0)
        elif hi is None:
            val = lo + 1
        elif lo is None:
            val = hi - 1
        elif lo < hi:
            val = (lo + hi) / 2
        elif lo == hi and not lo_strict and not hi_strict:
            val = lo
        else:
            return None
        t[var] = val
    return t


def _dedup(rows):
    seen = {}
    for r in rows:
        if all(c == 0 for c in r.coef) and (r.const > 0 or (r.const == 0 and not r.strict)):
            continue
        k = r.key()
        old = seen.get(k)
        if old is None:
            seen[k] = r
        elif r.strict and not old.strict:
            seen[k] = r
        elif r.strict == old.strict and len(r.hist) < len(old.hist):
            seen[k] = r
    return list(seen.values())
