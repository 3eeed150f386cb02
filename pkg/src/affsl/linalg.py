"""Exact linear algebra over an arbitrary field given by duck-typed scalars.

Works for both :class:`affsl.scalars.Scalar` and :class:`fractions.Fraction`
coefficients: the only requirements are +, -, *, /, == 0 via truthiness.

Vectors are sparse dicts keyed by arbitrary sortable column labels.  The
:class:`SparseEchelon` keeps a reduced row echelon basis of a growing
subspace, so reduction modulo the subspace is canonical (independent of
the order rows were inserted in).
"""

from __future__ import annotations

import heapq


def vec_add_scaled(target: dict, src: dict, coeff) -> None:
    """target += coeff * src, dropping entries that cancel to zero."""
    if not coeff:
        return
    for col, val in src.items():
        cur = target.get(col)
        if cur is None:
            target[col] = coeff * val
        else:
            new = cur + coeff * val
            if new:
                target[col] = new
            else:
                del target[col]


def vec_scale(v: dict, coeff) -> dict:
    if not coeff:
        return {}
    return {col: coeff * val for col, val in v.items()}


class SparseEchelon:
    """Reduced row echelon basis of a subspace, with optional row tracking.

    Each stored row is normalized so its pivot (minimal column label)
    has coefficient one, and its pivot column occurs in no other stored
    row.  ``tracking`` rows carry a second sparse vector through the same
    eliminations, which is how coordinates are recovered.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot column -> (vector, tracking-vector)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict, track: dict | None = None):
        """Canonical remainder of vec modulo the subspace (vec is not mutated)."""
        v = dict(vec)
        t = dict(track) if track is not None else {}
        self._reduce_inplace(v, t)
        return (v, t) if track is not None else v

    def _reduce_inplace(self, v: dict, t: dict) -> None:
        # worklist in increasing column order; eliminating a pivot column only
        # introduces columns above it, so every pivot hit gets processed
        heap = sorted(v)
        while heap:
            col = heapq.heappop(heap)
            if col not in v:
                continue
            row = self.rows.get(col)
            if row is None:
                continue
            c = v[col]
            vec_add_scaled(v, row[0], -c)
            vec_add_scaled(t, row[1], -c)
            for nc in row[0]:
                if nc != col and nc in v:
                    heapq.heappush(heap, nc)

    def insert(self, vec: dict, track: dict | None = None):
        """Add a row; returns its pivot column, or None if it reduced to zero."""
        v, t = dict(vec), dict(track or {})
        self._reduce_inplace(v, t)
        if not v:
            return None
        pivot = min(v)
        inv = 1 / v[pivot]
        v = vec_scale(v, inv)
        t = vec_scale(t, inv)
        # keep reduced form: eliminate the new pivot from stored rows
        for pcol, (rv, rt) in self.rows.items():
            c = rv.get(pivot)
            if c is not None:
                vec_add_scaled(rv, v, -c)
                vec_add_scaled(rt, t, -c)
        self.rows[pivot] = (v, t)
        return pivot


def span_rank(vectors) -> int:
    ech = SparseEchelon()
    for v in vectors:
        ech.insert(v)
    return ech.rank


def invert_matrix(mat, one):
    """Exact inverse of a square matrix given as list of row lists.

    ``one`` is the multiplicative unit of the coefficient field.  Raises
    ArithmeticError when the matrix is singular.
    """
    n = len(mat)
    zero = one - one
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ArithmeticError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = one / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
