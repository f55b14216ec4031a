"""Operators on the truncated quotient Hopf algebra.

Operators are exact matrices on the enumerated basis.  A degree-raising
operator is only faithful on inputs whose degree leaves room below the cap;
every check in this package restricts its comparisons accordingly, and the
inner operator triple is extracted abstractly (kernel of the action on the
truncated space) so its structure constants never see truncation noise.
The bracket-faithfulness of the matrices themselves, one degree below the
cap, is verified and reported rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .envelope import PBWElement, UTau, UTauElement
from .lie import (
    LieAlgebra,
    Subspace,
    Triple,
    TripleError,
    inner_adapted_basis,
    quotient_structure,
    subalgebra_structure,
)
from .linalg import Q, Vector, kernel_basis, mat_mul, solve_linear, unit_vector

Matrix = list[list[Q]]


def mat_zero(n: int) -> Matrix:
    return [[Q(0)] * n for _ in range(n)]


def mat_identity(n: int) -> Matrix:
    return [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c: Q, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def mat_commutator(a: Matrix, b: Matrix) -> Matrix:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def mat_is_zero(a: Matrix) -> bool:
    return all(all(x == 0 for x in row) for row in a)


def element_to_coords(U: UTau, u: UTauElement) -> list[Q]:
    v = [Q(0)] * len(U.basis)
    for m, c in u.terms.items():
        v[U.index[m]] = c
    return v


def coords_to_element(U: UTau, v: Sequence[Q]) -> UTauElement:
    return UTauElement(U, {U.basis[i]: c for i, c in enumerate(v) if c})


def apply_matrix(U: UTau, a: Matrix, u: UTauElement) -> UTauElement:
    vin = element_to_coords(U, u)
    n = len(U.basis)
    out = [Q(0)] * n
    for j, c in enumerate(vin):
        if c:
            col = [a[i][j] for i in range(n)]
            for i in range(n):
                if col[i]:
                    out[i] += c * col[i]
    return coords_to_element(U, out)


def basis_rmult_matrices(U: UTau) -> list[Matrix]:
    """Right-multiplication matrices of all basis monomials, cached on the
    algebra (semantically invisible: recomputation gives the same tables)."""
    cached = getattr(U, "_rmult_basis_cache", None)
    if cached is not None:
        return cached
    n = len(U.basis)
    mats = []
    for mono in U.basis:
        mat = mat_zero(n)
        for j, mx in enumerate(U.basis):
            img = U.mul_trunc(UTauElement(U, {mx: Q(1)}), UTauElement(U, {mono: Q(1)}))
            for m, c in img.terms.items():
                mat[U.index[m]][j] = c
        mats.append(mat)
    U._rmult_basis_cache = mats
    return mats


def right_mult_matrix(U: UTau, u: UTauElement) -> Matrix:
    """Matrix of x -> x u (exact degree truncation of the product)."""
    n = len(U.basis)
    mats = basis_rmult_matrices(U)
    out = mat_zero(n)
    for mono, c in u.terms.items():
        out = mat_add(out, mat_scale(c, mats[U.index[mono]]))
    return out


def action_matrix(U: UTau, adapted_vector: Sequence[Q]) -> Matrix:
    """Matrix of the left action of a degree-one element of the enveloping
    algebra (coordinates in the adapted basis of g)."""
    n = len(U.basis)
    f = U.env.from_vector(adapted_vector)
    mat = mat_zero(n)
    for j, mono in enumerate(U.basis):
        img = U.act(f, UTauElement(U, {mono: Q(1)}))
        for m, c in img.terms.items():
            mat[U.index[m]][j] = c
    return mat


def matrices_agree_below(U: UTau, a: Matrix, b: Matrix, max_in_degree: int) -> bool:
    for j, mono in enumerate(U.basis):
        if len(mono) > max_in_degree:
            continue
        for i in range(len(U.basis)):
            if a[i][j] != b[i][j]:
                return False
    return True


def rmult_membership(
    U: UTau, a: Matrix, max_in_degree: int, rmats: list[Matrix] | None = None
) -> UTauElement | None:
    """Solve a = R_u on columns of degree <= max_in_degree; None if no u."""
    n = len(U.basis)
    cols = [j for j, mono in enumerate(U.basis) if len(mono) <= max_in_degree]
    if rmats is None:
        rmats = basis_rmult_matrices(U)
    rows = []
    rhs = []
    for j in cols:
        for i in range(n):
            rows.append([rmats[k][i][j] for k in range(len(U.basis))])
            rhs.append(a[i][j])
    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    return UTauElement(U, {U.basis[k]: c for k, c in enumerate(sol) if c})


def rmult_span(U: UTau, max_in_degree: int) -> "Subspace":
    """Span of all right multiplications, flattened over the columns of
    degree <= max_in_degree (for fast membership tests)."""
    cache = getattr(U, "_rmult_span_cache", None)
    if cache is None:
        cache = {}
        U._rmult_span_cache = cache
    if max_in_degree in cache:
        return cache[max_in_degree]
    n = len(U.basis)
    cols = [j for j, mono in enumerate(U.basis) if len(mono) <= max_in_degree]
    vecs = []
    for mat in basis_rmult_matrices(U):
        vecs.append([mat[i][j] for j in cols for i in range(n)])
    span = Subspace(len(cols) * n, vecs)
    cache[max_in_degree] = span
    return span


def in_rmult_span(U: UTau, a: Matrix, max_in_degree: int) -> bool:
    n = len(U.basis)
    cols = [j for j, mono in enumerate(U.basis) if len(mono) <= max_in_degree]
    flat = [a[i][j] for j in cols for i in range(n)]
    return rmult_span(U, max_in_degree).contains(flat)


@dataclass
class InnerOperatorData:
    """The operator triple of a built Hopf algebra, with its provenance.

    ginn_basis spans the subalgebra of the adapted g generated by c (its
    first entries are exactly the adapted c-basis).  kernel collects the
    combinations acting as zero on the truncated space; the returned triple
    is the quotient by that kernel, re-adapted so that the primitives keep
    their indices.  matrices realize the ginn basis as operators.
    """

    U: UTau
    ginn_basis: list[Vector]
    ginn_alg: LieAlgebra
    matrices: list[Matrix]
    kernel: Subspace
    triple: Triple
    op_coords: Callable[[Sequence[Q]], Vector]
    bracket_faithful_degree: int
    bracket_faithful: bool

    def ginn_coords(self, adapted_vec: Sequence[Q]) -> Vector | None:
        cols = [
            [self.ginn_basis[j][i] for j in range(len(self.ginn_basis))]
            for i in range(self.U.adapted.dim)
        ]
        return solve_linear(cols, adapted_vec)

    def dims_per_degree(self) -> dict[str, int]:
        return {
            "dim_inner": len(self.ginn_basis),
            "dim_kernel": self.kernel.dim,
            "dim_operator_triple": self.triple.g.dim,
        }


def inner_operator_triple(U: UTau) -> InnerOperatorData:
    """Lie algebra of operators generated by right multiplications with
    primitives, together with the triple it determines.

    Generation happens at the abstract level (the action is a Lie algebra
    morphism), so the structure constants are exact; what the truncation can
    influence is only the kernel of the action, whose dimension is reported.
    The matrices' own commutators are checked against the abstract brackets
    on inputs one degree below the cap and the outcome is recorded.
    """
    g = U.adapted
    n_dim = g.dim
    m = U.m
    c_rows = [unit_vector(n_dim, i) for i in range(m)]
    ginn_basis, prov = inner_adapted_basis(g, c_rows)
    labels = [f"R{i}" for i in range(len(ginn_basis))]
    ginn_alg = subalgebra_structure(g, ginn_basis, labels)
    ginn_alg.bracket_provenance = prov
    matrices = [action_matrix(U, v) for v in ginn_basis]
    nb = len(U.basis)
    rows = []
    for p in range(nb):
        for q in range(nb):
            row = [matrices[j][p][q] for j in range(len(ginn_basis))]
            if any(row):
                rows.append(row)
    kernel = Subspace(len(ginn_basis), kernel_basis(rows) if rows else [])
    faithful = True
    for i in range(len(ginn_basis)):
        for j in range(i + 1, len(ginn_basis)):
            lhs = mat_commutator(matrices[i], matrices[j])
            br = ginn_alg.bracket_basis(i, j)
            rhs = mat_zero(nb)
            for k, c in enumerate(br):
                if c:
                    rhs = mat_add(rhs, mat_scale(c, matrices[k]))
            if not matrices_agree_below(U, lhs, rhs, U.cap - 1):
                faithful = False
    s_cap = Subspace(
        n_dim, [unit_vector(n_dim, m + i) for i in range(U.k)]
    ).intersect(Subspace(n_dim, ginn_basis))
    cols = [[ginn_basis[j][i] for j in range(len(ginn_basis))] for i in range(n_dim)]
    s_in_ginn = []
    for r in s_cap.rows:
        coords = solve_linear(cols, r)
        s_in_ginn.append(coords)

    if kernel.dim == 0:
        triple = Triple(
            ginn_alg,
            Subspace(len(ginn_basis), s_in_ginn),
            Subspace(len(ginn_basis), [unit_vector(len(ginn_basis), i) for i in range(m)]),
        )

        def op_coords(v):
            return tuple(v)

    else:
        q, proj, _ = quotient_structure(ginn_alg, kernel, labels_prefix="r")
        c_imgs = [proj(unit_vector(len(ginn_basis), i)) for i in range(m)]
        basis2, prov2 = inner_adapted_basis(q, c_imgs)
        if len(basis2) != q.dim:
            raise TripleError("operator quotient is not generated by the primitives")
        alg2 = subalgebra_structure(q, basis2, [f"R{i}" for i in range(len(basis2))])
        alg2.bracket_provenance = prov2
        cols2 = [[basis2[j][i] for j in range(len(basis2))] for i in range(q.dim)]
        s_vecs2 = []
        for r in s_in_ginn:
            coords = solve_linear(cols2, proj(r))
            s_vecs2.append(coords)
        triple = Triple(
            alg2,
            Subspace(len(basis2), s_vecs2),
            Subspace(len(basis2), [unit_vector(len(basis2), i) for i in range(m)]),
        )

        def op_coords(v):
            return solve_linear(cols2, proj(v))

    return InnerOperatorData(
        U=U,
        ginn_basis=ginn_basis,
        ginn_alg=ginn_alg,
        matrices=matrices,
        kernel=kernel,
        triple=triple,
        op_coords=op_coords,
        bracket_faithful_degree=U.cap - 1,
        bracket_faithful=faithful,
    )
