"""Exact linear algebra kernels.

Two scalar domains are supported:

* rationals (``fractions.Fraction``), with matrices stored as tuples of
  tuples -- used for section-space representations, wall forms and chamber
  feasibility, where signs must be exact;
* prime fields F_p, with matrices stored as small numpy integer arrays --
  used for brute-force representation theory.

Row spaces are always kept in reduced row echelon form (RREF) with unit
pivots; this makes witnesses canonical and equality tests trivial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError

F0 = Fraction(0)
F1 = Fraction(1)

Matrix = tuple[tuple[Fraction, ...], ...]


def mat(rows: Iterable[Iterable]) -> Matrix:
    """Freeze an iterable of rows into a Fraction matrix."""
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def zeros(r: int, c: int) -> Matrix:
    return tuple((F0,) * c for _ in range(r))


def identity(n: int) -> Matrix:
    return tuple(tuple(F1 if i == j else F0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DomainError("shape-mismatch", f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), F0) for j in range(cols))
        for i in range(len(a))
    )


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum((a[i][k] * v[k] for k in range(len(v))), F0) for i in range(len(a)))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c: Fraction, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def transpose(a: Matrix) -> Matrix:
    if not a:
        return ()
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def rref(rows: Iterable[Sequence[Fraction]]) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    if not work:
        return (), ()
    ncols = len(work[0])
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        sel = None
        for i in range(rank, len(work)):
            if work[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        work[rank], work[sel] = work[sel], work[rank]
        pv = work[rank][col]
        if pv != 1:
            work[rank] = [x / pv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return tuple(tuple(r) for r in work[:rank]), tuple(pivots)


def rank(rows: Iterable[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0])


def residual(basis: Matrix, pivots: Sequence[int], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Reduce v by an RREF basis; zero residual means v lies in the row space."""
    w = list(v)
    for row, pc in zip(basis, pivots):
        if w[pc] != 0:
            f = w[pc]
            w = [x - f * y for x, y in zip(w, row)]
    return tuple(w)


def in_row_space(basis: Matrix, pivots: Sequence[int], v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in residual(basis, pivots, v))


def row_space_leq(a: Matrix, b: Matrix) -> bool:
    """span(a) contained in span(b); both matrices need not be reduced."""
    bb, piv = rref(b)
    return all(in_row_space(bb, piv, row) for row in a)


def span_union(a: Matrix, b: Matrix) -> Matrix:
    rows = list(a) + list(b)
    if not rows:
        return ()
    return rref(rows)[0]


def column_kernel(a: Matrix, ncols: int) -> Matrix:
    """RREF basis of {x : a @ x = 0} (x of length ncols)."""
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [F0] * ncols
        x[fc] = F1
        for row, pc in zip(red, pivots):
            x[pc] = -row[fc]
        basis.append(tuple(x))
    return rref(basis)[0] if basis else ()


def quotient_map(sub: Matrix, ambient_dim: int) -> Matrix:
    """Matrix of the projection F^n -> F^(n-k) with kernel exactly span(sub).

    Coordinates of the quotient are the non-pivot columns of the RREF of sub.
    """
    red, pivots = rref(sub)
    free = [c for c in range(ambient_dim) if c not in pivots]
    rows = []
    for fc in free:
        row = [F0] * ambient_dim
        row[fc] = F1
        for srow, pc in zip(red, pivots):
            row[pc] = -srow[fc]
        rows.append(tuple(row))
    return tuple(rows)


def preimage(constraints: Sequence[tuple[Matrix, Matrix]], source_dim: int) -> Matrix:
    """RREF basis of {v : A v in span(S) for every (A, S) constraint}.

    Each A maps the source into some ambient space and S is a row basis of
    the admissible subspace there.
    """
    stacked: list[tuple[Fraction, ...]] = []
    for a, s in constraints:
        if not a:
            continue
        target_dim = len(a)
        q = quotient_map(s, target_dim)
        for qrow in q:
            stacked.append(tuple(
                sum((qrow[t] * a[t][c] for t in range(target_dim)), F0)
                for c in range(source_dim)
            ))
    if not stacked:
        return identity(source_dim)
    return column_kernel(tuple(stacked), source_dim)


# ---------------------------------------------------------------------------
# exact rational linear feasibility (phase-1 simplex, Bland's rule)
# ---------------------------------------------------------------------------

def find_feasible(rows: Sequence[Sequence[Fraction]],
                  rhs: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """Find x with rows @ x >= rhs, or None if the system is infeasible.

    All arithmetic is exact; Bland's rule guarantees termination.
    """
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    # x = u - w with u, w >= 0; slack s >= 0:  rows*(u-w) - s = rhs
    ncols = 2 * n + m + m  # u, w, slack, artificial
    table: list[list[Fraction]] = []
    for i in range(m):
        coeff = [Fraction(c) for c in rows[i]]
        row = coeff + [-c for c in coeff] + [F0] * m + [F0] * m + [Fraction(rhs[i])]
        row[2 * n + i] = Fraction(-1)
        if row[-1] < 0:
            row = [-x for x in row]
        row[2 * n + m + i] = F1
        table.append(row)
    basis = [2 * n + m + i for i in range(m)]
    # phase-1 objective: minimise the sum of artificials; store reduced costs
    obj = [F0] * (ncols + 1)
    for row in table:
        for j in range(ncols + 1):
            obj[j] += row[j]
    for i in range(m):
        obj[2 * n + m + i] -= F1

    while True:
        enter = next((j for j in range(ncols) if obj[j] > 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            if table[i][enter] > 0:
                ratio = table[i][-1] / table[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # unbounded phase-1 objective cannot happen (bounded below by 0)
            raise DomainError("lp-internal", "phase-1 simplex became unbounded")
        pv = table[leave][enter]
        table[leave] = [x / pv for x in table[leave]]
        for i in range(m):
            if i != leave and table[i][enter] != 0:
                f = table[i][enter]
                table[i] = [x - f * y for x, y in zip(table[i], table[leave])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, table[leave])]
        basis[leave] = enter

    if obj[-1] != 0:
        return None
    values = [F0] * ncols
    for i, bv in enumerate(basis):
        if bv < ncols:
            values[bv] = table[i][-1]
    return [values[k] - values[n + k] for k in range(n)]


# ---------------------------------------------------------------------------
# prime field helpers (numpy int matrices, entries reduced mod p)
# ---------------------------------------------------------------------------

def fp_rref(a: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """RREF over F_p; returns (nonzero rows, pivot columns)."""
    work = np.array(a, dtype=np.int64) % p
    nrows, ncols = work.shape
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        sel = None
        for i in range(r, nrows):
            if work[i, col] % p:
                sel = i
                break
        if sel is None:
            continue
        work[[r, sel]] = work[[sel, r]]
        inv = pow(int(work[r, col]), p - 2, p)
        work[r] = (work[r] * inv) % p
        for i in range(nrows):
            if i != r and work[i, col]:
                work[i] = (work[i] - work[i, col] * work[r]) % p
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return work[:r], tuple(pivots)


def fp_residual(basis: np.ndarray, pivots: Sequence[int], v: np.ndarray, p: int) -> np.ndarray:
    w = np.array(v, dtype=np.int64) % p
    for row, pc in zip(basis, pivots):
        if w[pc]:
            w = (w - w[pc] * row) % p
    return w


def fp_in_row_space(basis: np.ndarray, pivots: Sequence[int], v: np.ndarray, p: int) -> bool:
    return not fp_residual(basis, pivots, v, p).any()


def fp_row_space_leq(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    bb, piv = fp_rref(b, p)
    return all(fp_in_row_space(bb, piv, row, p) for row in a)


def fp_rank(a: np.ndarray, p: int) -> int:
    return fp_rref(a, p)[0].shape[0]


def fp_column_kernel(a: np.ndarray, p: int) -> np.ndarray:
    """RREF basis of the right kernel of a over F_p (rows are solutions)."""
    red, pivots = fp_rref(a, p)
    ncols = a.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for row, pc in zip(red, pivots):
            basis[k, pc] = (-row[fc]) % p
    return fp_rref(basis, p)[0] if len(free) else basis


def fp_coords(basis: np.ndarray, pivots: Sequence[int], v: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of v in an RREF basis; raises if v is outside the span."""
    w = np.array(v, dtype=np.int64) % p
    coords = np.zeros(len(basis), dtype=np.int64)
    for k, (row, pc) in enumerate(zip(basis, pivots)):
        if w[pc]:
            coords[k] = w[pc]
            w = (w - w[pc] * row) % p
    if w.any():
        raise DomainError("not-in-span", "vector lies outside the given subspace")
    return coords
