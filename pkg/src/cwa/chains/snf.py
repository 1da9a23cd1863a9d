"""Smith normal form over the integers.

Elimination uses the smallest nonzero entry as pivot, which keeps
intermediate growth modest on the desk-scale matrices this package sees.
The returned factor list is canonical: positive and divisibility-sorted.
"""

from __future__ import annotations

from typing import NamedTuple

from .matrix import Matrix


class SmithForm(NamedTuple):
    factors: tuple[int, ...]
    rank: int


def _min_pivot(a, t, nrows, ncols):
    best = None
    best_abs = 0
    for i in range(t, nrows):
        row = a[i]
        for j in range(t, ncols):
            v = row[j]
            if v and (best is None or abs(v) < best_abs):
                best, best_abs = (i, j), abs(v)
                if best_abs == 1:
                    return best
    return best


def _reduce(m: Matrix, track: bool):
    n, k = m.shape
    a = m.to_lists()
    u = [[int(i == j) for j in range(n)] for i in range(n)] if track else None
    v = [[int(i == j) for j in range(k)] for i in range(k)] if track else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if track:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for c in range(k):
            if rs[c]:
                ra[c] += q * rs[c]
        if track:
            ua, us = u[dst], u[src]
            for c in range(n):
                if us[c]:
                    ua[c] += q * us[c]

    def add_col(dst, src, q):
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        if track:
            for row in v:
                if row[src]:
                    row[dst] += q * row[src]

    factors = []
    for t in range(min(n, k)):
        piv = _min_pivot(a, t, n, k)
        if piv is None:
            break
        while True:
            i, j = piv
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = a[t][t]
            piv = None
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t] and (piv is None or abs(a[i][t]) < abs(a[piv[0]][t])):
                        piv = (i, t)
            for j in range(t + 1, k):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j] and (piv is None or abs(a[t][j]) < abs(a[piv[0]][piv[1]])):
                        piv = (t, j)
            if piv is not None:
                continue
            bad = None
            for i in range(t + 1, n):
                row = a[i]
                for j in range(t + 1, k):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
            piv = (t, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if track:
                u[t] = [-x for x in u[t]]
        factors.append(a[t][t])
    return factors, a, u, v


def smith_normal_form(m: Matrix) -> SmithForm:
    """Invariant factors ``d1 | d2 | ... | dr`` (all >= 1) and the rank ``r``."""
    factors, _, _, _ = _reduce(m, track=False)
    return SmithForm(tuple(factors), len(factors))


def smith_decomposition(m: Matrix) -> tuple[SmithForm, Matrix, Matrix]:
    """Return ``(form, U, V)`` with ``U @ m @ V`` diagonal and ``U``, ``V``
    unimodular."""
    factors, _, u, v = _reduce(m, track=True)
    n, k = m.shape
    return SmithForm(tuple(factors), len(factors)), Matrix(n, n, u), Matrix(k, k, v)


def rank(m: Matrix) -> int:
    return smith_normal_form(m).rank


def integer_kernel(m: Matrix) -> Matrix:
    """Columns form a basis of the integer kernel lattice ``{x : m x = 0}``."""
    form, _, v = smith_decomposition(m)
    cols = list(range(form.rank, m.ncols))
    return v.submatrix(range(m.ncols), cols)
