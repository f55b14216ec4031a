"""Exact linear algebra over the rationals.

Everything here works on plain tuples/lists of ``fractions.Fraction``.  Row
echelon forms are fully reduced (leading 1, cleared columns), which makes them
canonical: two subspaces are equal iff their echelon rows are equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction

Vector = tuple[Q, ...]
Matrix = list[list[Q]]


def qvec(entries: Iterable) -> Vector:
    return tuple(Q(e) for e in entries)


def zero_vector(n: int) -> Vector:
    return (Q(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Q(1) if j == i else Q(0) for j in range(n))


def vec_add(a: Sequence[Q], b: Sequence[Q]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[Q], b: Sequence[Q]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c: Q, a: Sequence[Q]) -> Vector:
    return tuple(c * x for x in a)


def is_zero_vector(a: Sequence[Q]) -> bool:
    return all(x == 0 for x in a)


def mat_vec(m: Sequence[Sequence[Q]], v: Sequence[Q]) -> Vector:
    return tuple(sum((row[j] * v[j] for j in range(len(v))), Q(0)) for row in m)


def mat_mul(a: Sequence[Sequence[Q]], b: Sequence[Sequence[Q]]) -> Matrix:
    n, k = len(a), len(b)
    cols = len(b[0]) if k else 0
    out = []
    for i in range(n):
        row = []
        for j in range(cols):
            row.append(sum((a[i][t] * b[t][j] for t in range(k)), Q(0)))
        out.append(row)
    return out


def rref(rows: Iterable[Sequence[Q]]) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form.

    Returns the nonzero rows (each with leading coefficient 1 and its pivot
    column cleared everywhere else) together with the pivot column indices.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = Q(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def reduce_against(v: Sequence[Q], rows: Sequence[Vector], pivots: Sequence[int]) -> Vector:
    """Residual of v after eliminating the pivot coordinates of an RREF basis."""
    w = list(v)
    for row, p in zip(rows, pivots):
        if w[p] != 0:
            f = w[p]
            w = [x - f * y for x, y in zip(w, row)]
    return tuple(w)


def solve_linear(a: Sequence[Sequence[Q]], b: Sequence[Q]) -> Vector | None:
    """One exact solution of A x = b, or None if inconsistent.

    Free variables are set to zero (first-solution-in-column-order policy),
    so the answer is deterministic.
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    aug = [list(a[i]) + [b[i]] for i in range(nrows)]
    rows, pivots = rref(aug)
    for row, p in zip(rows, pivots):
        if p == ncols:
            return None
    x = [Q(0)] * ncols
    for row, p in zip(rows, pivots):
        x[p] = row[ncols]
    return tuple(x)


def kernel_basis(a: Sequence[Sequence[Q]]) -> list[Vector]:
    """Basis of the null space of A, one vector per free column."""
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    rows, pivots = rref(a)
    pivset = set(pivots)
    basis = []
    for c in range(ncols):
        if c in pivset:
            continue
        v = [Q(0)] * ncols
        v[c] = Q(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[c]
        basis.append(tuple(v))
    return basis


def invert_matrix(a: Sequence[Sequence[Q]]) -> Matrix | None:
    n = len(a)
    aug = [list(a[i]) + [Q(1) if j == i else Q(0) for j in range(n)] for i in range(n)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) != n:
        return None
    return [list(rows[i][n:]) for i in range(n)]


class Subspace:
    """Subspace of Q^n stored as a canonical RREF basis."""

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence[Q]] = ()):
        self.ambient_dim = ambient_dim
        rows, pivots = rref([qvec(v) for v in vectors])
        self.rows: tuple[Vector, ...] = tuple(rows)
        self.pivots: tuple[int, ...] = tuple(pivots)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v: Sequence[Q]) -> bool:
        return is_zero_vector(self.reduce(v))

    def reduce(self, v: Sequence[Q]) -> Vector:
        return reduce_against(qvec(v), self.rows, self.pivots)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def coords(self, v: Sequence[Q]) -> Vector | None:
        """Coordinates of v in the RREF basis, or None if v is outside."""
        if not self.contains(v):
            return None
        return tuple(qvec(v)[p] for p in self.pivots)

    def add(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        # Null space of stacked coordinates: x in both spans.
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.ambient_dim)
        cols = [list(r) for r in self.rows] + [list(vec_scale(Q(-1), r)) for r in other.rows]
        a = [[cols[j][i] for j in range(len(cols))] for i in range(self.ambient_dim)]
        vecs = []
        for k in kernel_basis(a):
            coeffs = k[: self.dim]
            v = zero_vector(self.ambient_dim)
            for c, r in zip(coeffs, self.rows):
                v = vec_add(v, vec_scale(c, r))
            vecs.append(v)
        return Subspace(self.ambient_dim, vecs)

    def basis_extension(self) -> list[Vector]:
        """Unit vectors at non-pivot columns, completing the rows to a basis of Q^n."""
        pivset = set(self.pivots)
        return [unit_vector(self.ambient_dim, c) for c in range(self.ambient_dim) if c not in pivset]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.rows))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def span_closure(ambient_dim: int, seed: Iterable[Vector], step) -> Subspace:
    """Smallest subspace containing seed and closed under step(vector) -> iterable of vectors.

    step is applied to basis vectors of the current span until a fixed point.
    """
    space = Subspace(ambient_dim, seed)
    while True:
        new_vecs = []
        for r in space.rows:
            for w in step(r):
                if not space.contains(w):
                    new_vecs.append(w)
        if not new_vecs:
            return space
        space = Subspace(ambient_dim, list(space.rows) + new_vecs)
