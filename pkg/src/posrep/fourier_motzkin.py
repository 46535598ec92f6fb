"""Exact Fourier-Motzkin elimination for small systems of weak linear inequalities.

Each constraint reads ``coeffs . x + const >= 0`` over Fractions. Every derived
row remembers which original rows it combines. A combination is kept only
when those rows, restricted to the eliminated columns, have rank one less
than their count (Chernikov's test: anything else is a non-extreme ray of
the projection cone and hence implied by other rows). Imbert's cheaper
bound, history size at most one more than the number of eliminations, is
checked first. Parallel rows are also merged into the tightest one, and
that merge can starve the history tests of the row they would have needed.
Every derived row is still a valid consequence, so the pruned pass never
calls a feasible system infeasible; when its back-substitution fails the
system is solved again with the history tests off, which is plain
elimination plus the merge and therefore exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence


@dataclass(frozen=True)
class Inequality:
    coeffs: tuple[Fraction, ...]
    const: Fraction
    history: frozenset = frozenset()

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, x)), self.const)


def _normalized(coeffs, const, history) -> Inequality:
    # scale the coefficient vector to coprime integers so parallel rows share a key
    coeffs = [Fraction(c) for c in coeffs]
    nonzero = [c for c in coeffs if c]
    if not nonzero:
        return Inequality(tuple(coeffs), Fraction(const), history)
    den = 1
    for q in nonzero:
        den = den * q.denominator // gcd(den, q.denominator)
    g = 0
    for q in nonzero:
        g = gcd(g, abs(int(q * den)))
    scale = Fraction(den, g)
    return Inequality(tuple(c * scale for c in coeffs), Fraction(const) * scale, history)


def _prune(rows: list[Inequality], max_history: Optional[int]) -> Optional[list[Inequality]]:
    """Drop duplicates, trivially true rows and history-redundant rows; None if a row is 0 >= c > 0."""
    best: dict = {}
    for r in rows:
        if not any(r.coeffs):
            if r.const < 0:
                return None
            continue
        if max_history is not None and len(r.history) > max_history:
            continue
        key = r.coeffs
        old = best.get(key)
        if old is None or r.const < old.const or (r.const == old.const and len(r.history) < len(old.history)):
            best[key] = r
    return list(best.values())


def _rank(matrix: list[list[int]]) -> int:
    """Exact rank of an integer matrix (fraction-free elimination)."""
    rows = [r[:] for r in matrix if any(r)]
    rank, col = 0, 0
    n_cols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < n_cols:
        pivot = next((k for k in range(rank, len(rows)) if rows[k][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        top = rows[rank]
        for k in range(rank + 1, len(rows)):
            f = rows[k][col]
            if f:
                rows[k] = [top[col] * x - f * y for x, y in zip(rows[k], top)]
        rank += 1
        col += 1
    return rank


def _eliminate(
    rows: list[Inequality], var: int, eliminated: list[int], original: list[list[int]], prune: bool = True
) -> list[Inequality]:
    pos = [r for r in rows if r.coeffs[var] > 0]
    neg = [r for r in rows if r.coeffs[var] < 0]
    out = [r for r in rows if r.coeffs[var] == 0]
    limit = len(eliminated) + 1
    seen = set()
    for p in pos:
        for q in neg:
            history = p.history | q.history
            if prune:
                if len(history) > limit or history in seen:
                    continue
                seen.add(history)
                sub = [[original[h][e] for e in eliminated] for h in history]
                if _rank(sub) != len(history) - 1:
                    continue
            a, b = p.coeffs[var], -q.coeffs[var]
            coeffs = tuple(b * pc + a * qc for pc, qc in zip(p.coeffs, q.coeffs))
            out.append(_normalized(coeffs, b * p.const + a * q.const, history))
    return out


def _fill(rows: Sequence[Inequality], var: int) -> int:
    pos = sum(1 for r in rows if r.coeffs[var] > 0)
    neg = sum(1 for r in rows if r.coeffs[var] < 0)
    return pos * neg - pos - neg


def _bounds(rows: Sequence[Inequality], var: int, x: Sequence[Fraction]):
    lo = hi = None
    for r in rows:
        c = r.coeffs[var]
        if c == 0:
            continue
        rest = r.const + sum(r.coeffs[j] * x[j] for j in range(len(x)) if j != var and x[j] is not None)
        bound = -rest / c
        if c > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    return lo, hi


def solve(
    rows: Sequence[Inequality],
    n_vars: int,
    prefer_max: Sequence[int] = (),
) -> Optional[list[Fraction]]:
    """A feasible point of the system, or None when it is infeasible.

    Variables are eliminated greedily (fewest generated rows first) and
    assigned in reverse. Variables in ``prefer_max`` are eliminated last and
    take their largest feasible value; any other takes the midpoint of its
    feasible interval (or the finite end, or 0).
    """
    x = _solve(rows, n_vars, prefer_max, prune=True)
    if x is _RETRY:
        x = _solve(rows, n_vars, prefer_max, prune=False)
    if x is _RETRY:
        raise AssertionError("back-substitution failed without pruning")
    return x


_RETRY = object()


def _solve(rows, n_vars, prefer_max, prune):
    system = [_normalized(r.coeffs, r.const, frozenset({k})) for k, r in enumerate(rows)]
    original = []
    for r in system:
        den = 1
        for c in r.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        original.append([int(c * den) for c in r.coeffs])
    system = _prune(system, None)
    if system is None:
        return None
    remaining = list(range(n_vars))
    last = [v for v in prefer_max if v in remaining]
    stages, order = [], []
    while remaining:
        candidates = [v for v in remaining if v not in last] or remaining
        var = min(candidates, key=lambda v: _fill(system, v))
        remaining.remove(var)
        order.append(var)
        stages.append(system)
        system = _prune(_eliminate(system, var, order, original, prune), len(order) + 1 if prune else None)
        if system is None:
            return None
    x: list = [None] * n_vars
    for var, stage in zip(reversed(order), reversed(stages)):
        lo, hi = _bounds(stage, var, x)
        if lo is not None and hi is not None and lo > hi:
            return _RETRY
        if var in prefer_max and hi is not None:
            x[var] = hi
        elif lo is not None and hi is not None:
            x[var] = (lo + hi) / 2
        elif lo is not None:
            x[var] = max(lo, Fraction(0))
        elif hi is not None:
            x[var] = min(hi, Fraction(0))
        else:
            x[var] = Fraction(0)
    if any(r.slack(x) < 0 for r in rows):
        return _RETRY
    return x
