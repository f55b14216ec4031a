"""Finite-dimensional Lie algebras over Q, triples and their predicates.

A triple is a Lie algebra g together with a subalgebra s and a complement c
(g = s (+) c as vector spaces).  The predicates implemented here are exact:
normalizers, cores, the inner/reduced forms of a triple, hyporeductivity and
the pseudoreductivity conditions on a map zeta: s -> c.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import (
    Q,
    Subspace,
    Vector,
    is_zero_vector,
    kernel_basis,
    qvec,
    solve_linear,
    unit_vector,
    vec_add,
    vec_scale,
    zero_vector,
)


class LieAlgebra:
    """Lie algebra given by structure constants on an ordered basis.

    brackets maps (i, j) to the coefficient vector of [e_i, e_j].  Pairs that
    are never mentioned default to zero; if (j, i) is absent it is filled in
    as the negative of (i, j), while explicitly supplied values are kept
    verbatim so that check_lie can detect inconsistent input.
    """

    def __init__(self, labels: Sequence[str], brackets: dict | None = None):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        table: dict[tuple[int, int], Vector] = {}
        for (i, j), v in (brackets or {}).items():
            table[(i, j)] = qvec(v)
        for (i, j) in list(table.keys()):
            if (j, i) not in table:
                table[(j, i)] = vec_scale(Q(-1), table[(i, j)])
        self.table = table
        # Optional: for algebras built by bracket closure, bracket_provenance[k]
        # records (i, j) with basis[k] = [basis[i], basis[j]].
        self.bracket_provenance: dict[int, tuple[int, int]] = {}

    def bracket_basis(self, i: int, j: int) -> Vector:
        return self.table.get((i, j), zero_vector(self.dim))

    def bracket(self, x: Sequence[Q], y: Sequence[Q]) -> Vector:
        out = zero_vector(self.dim)
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                out = vec_add(out, vec_scale(xi * yj, self.bracket_basis(i, j)))
        return out

    def ad_matrix(self, x: Sequence[Q]) -> list[list[Q]]:
        cols = [self.bracket(x, unit_vector(self.dim, j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def opposite(self) -> "LieAlgebra":
        """Same space with bracket -[x, y]."""
        neg = {k: vec_scale(Q(-1), v) for k, v in self.table.items()}
        out = LieAlgebra(self.labels, {})
        out.table = neg
        out.bracket_provenance = dict(self.bracket_provenance)
        return out

    def __repr__(self):
        return f"LieAlgebra({list(self.labels)})"


def check_lie(g: LieAlgebra):
    """Exact antisymmetry and Jacobi verification; returns (ok, witness)."""
    n = g.dim
    for i in range(n):
        for j in range(n):
            lhs = g.bracket_basis(i, j)
            rhs = vec_scale(Q(-1), g.bracket_basis(j, i))
            if lhs != rhs:
                return False, {
                    "violation": "antisymmetry",
                    "pair": [g.labels[i], g.labels[j]],
                }
        if not is_zero_vector(g.bracket_basis(i, i)):
            return False, {"violation": "alternating", "pair": [g.labels[i]] * 2}
    for i in range(n):
        for j in range(i + 1, n):
            bij = g.bracket_basis(i, j)
            for k in range(j + 1, n):
                acc = g.bracket(bij, unit_vector(n, k))
                acc = vec_add(acc, g.bracket(g.bracket_basis(j, k), unit_vector(n, i)))
                acc = vec_add(acc, g.bracket(g.bracket_basis(k, i), unit_vector(n, j)))
                if not is_zero_vector(acc):
                    return False, {
                        "violation": "jacobi",
                        "triple": [g.labels[i], g.labels[j], g.labels[k]],
                    }
    return True, None


def generated_subalgebra(g: LieAlgebra, seed: Subspace) -> Subspace:
    """Smallest bracket-closed subspace containing seed."""
    space = Subspace(g.dim, seed.rows)
    while True:
        new = []
        for a in space.rows:
            for b in space.rows:
                w = g.bracket(a, b)
                if not space.contains(w):
                    new.append(w)
        if not new:
            return space
        space = Subspace(g.dim, list(space.rows) + new)


def normalizer(g: LieAlgebra, c: Subspace) -> Subspace:
    """N_g(c) = {x : [x, c] contained in c}, solved exactly."""
    if c.dim == 0:
        return Subspace(g.dim, [unit_vector(g.dim, i) for i in range(g.dim)])
    conditions = []
    for w in c.rows:
        residuals = [c.reduce(g.bracket(unit_vector(g.dim, i), w)) for i in range(g.dim)]
        for coord in range(g.dim):
            row = [residuals[i][coord] for i in range(g.dim)]
            conditions.append(row)
    return Subspace(g.dim, kernel_basis(conditions))


def core(g: LieAlgebra, s: Subspace) -> Subspace:
    """Largest ideal of g contained in s.

    Fixed point of K_0 = s, K_{i+1} = {x in K_i : [g, x] in K_i}.
    """
    k = s
    while True:
        if k.dim == 0:
            return k
        conditions = []
        for i in range(g.dim):
            images = [k.reduce(g.bracket(unit_vector(g.dim, i), row)) for row in k.rows]
            for coord in range(g.dim):
                conditions.append([images[j][coord] for j in range(k.dim)])
        nxt_coeffs = kernel_basis(conditions)
        vecs = []
        for coeffs in nxt_coeffs:
            v = zero_vector(g.dim)
            for cf, row in zip(coeffs, k.rows):
                v = vec_add(v, vec_scale(cf, row))
            vecs.append(v)
        nxt = Subspace(g.dim, vecs)
        if nxt.dim == k.dim:
            return nxt
        k = nxt


class TripleError(ValueError):
    pass


class Triple:
    """(g, s, c) with s a subalgebra and g = s (+) c.

    zeta, when present, is the map s -> c stored as (domain, image) pairs so
    it survives basis changes of s.
    """

    def __init__(
        self,
        g: LieAlgebra,
        s: Subspace,
        c: Subspace,
        zeta: Sequence[tuple[Sequence[Q], Sequence[Q]]] | None = None,
        check: bool = True,
    ):
        self.g = g
        self.s = s
        self.c = c
        self.zeta = None
        if zeta is not None:
            self.zeta = tuple((qvec(d), qvec(v)) for d, v in zeta)
        if check:
            self.validate()

    def validate(self):
        g, s, c = self.g, self.s, self.c
        if s.ambient_dim != g.dim or c.ambient_dim != g.dim:
            raise TripleError("subspace ambient dimension does not match the algebra")
        for a in s.rows:
            for b in s.rows:
                if not s.contains(g.bracket(a, b)):
                    raise TripleError("s is not a subalgebra")
        if s.dim + c.dim != g.dim or s.intersect(c).dim != 0:
            raise TripleError("g is not the direct sum of s and c")
        if self.zeta is not None:
            for d, v in self.zeta:
                if not s.contains(d):
                    raise TripleError("zeta domain vector outside s")
                if not c.contains(v):
                    raise TripleError("zeta image vector outside c")

    def zeta_apply(self, d: Sequence[Q]) -> Vector:
        """Value of zeta on d in s (zero map when zeta is absent)."""
        if self.zeta is None or not self.zeta:
            return zero_vector(self.g.dim)
        cols = [pair[0] for pair in self.zeta]
        a = [[cols[j][i] for j in range(len(cols))] for i in range(self.g.dim)]
        lam = solve_linear(a, qvec(d))
        if lam is None:
            raise TripleError("zeta is not defined on the requested vector")
        out = zero_vector(self.g.dim)
        for lj, (_, img) in zip(lam, self.zeta):
            out = vec_add(out, vec_scale(lj, img))
        return out

    def s_part(self, v: Sequence[Q]) -> Vector:
        """Component of v in s along the splitting g = s (+) c."""
        return vec_sub_c(self, v)[0]

    def c_part(self, v: Sequence[Q]) -> Vector:
        return vec_sub_c(self, v)[1]

    def __repr__(self):
        return f"Triple(dim g={self.g.dim}, dim s={self.s.dim}, dim c={self.c.dim})"


def vec_sub_c(t: Triple, v: Sequence[Q]) -> tuple[Vector, Vector]:
    """Split v = s_part + c_part along g = s (+) c."""
    cols = list(t.s.rows) + list(t.c.rows)
    a = [[cols[j][i] for j in range(len(cols))] for i in range(t.g.dim)]
    lam = solve_linear(a, qvec(v))
    if lam is None:
        raise TripleError("vector outside s + c")
    sp = zero_vector(t.g.dim)
    for lj, row in zip(lam[: t.s.dim], t.s.rows):
        sp = vec_add(sp, vec_scale(lj, row))
    cp = zero_vector(t.g.dim)
    for lj, row in zip(lam[t.s.dim :], t.c.rows):
        cp = vec_add(cp, vec_scale(lj, row))
    return sp, cp


def subalgebra_structure(
    g: LieAlgebra, basis_vecs: Sequence[Vector], labels: Sequence[str]
) -> LieAlgebra:
    """Structure constants of a bracket-closed subspace in the given basis."""
    n = len(basis_vecs)
    cols = [[basis_vecs[j][i] for j in range(n)] for i in range(g.dim)]
    brackets = {}
    for i in range(n):
        for j in range(n):
            w = g.bracket(basis_vecs[i], basis_vecs[j])
            coords = solve_linear(cols, w)
            if coords is None:
                raise TripleError("subspace is not bracket-closed")
            brackets[(i, j)] = coords
    return LieAlgebra(labels, brackets)


def inner_adapted_basis(g: LieAlgebra, c_rows: Sequence[Vector]):
    """Basis of the subalgebra generated by the given (independent) vectors:
    those vectors first, then brackets of earlier basis elements.

    Returns (basis_vectors, provenance) where provenance[k] = (i, j) states
    basis[k] = [basis[i], basis[j]] for every extension element.
    """
    basis: list[Vector] = [qvec(v) for v in c_rows]
    provenance: dict[int, tuple[int, int]] = {}
    span = Subspace(g.dim, basis)
    changed = True
    while changed:
        changed = False
        n = len(basis)
        for i in range(n):
            for j in range(i + 1, n):
                w = g.bracket(basis[i], basis[j])
                if not span.contains(w):
                    provenance[len(basis)] = (i, j)
                    basis.append(w)
                    span = Subspace(g.dim, basis)
                    changed = True
    return basis, provenance


def tau_inn(t: Triple) -> Triple:
    """Restriction of the triple to the subalgebra generated by c."""
    basis, provenance = inner_adapted_basis(t.g, t.c.rows)
    labels = [f"c{i}" for i in range(t.c.dim)] + [
        f"w{i}" for i in range(len(basis) - t.c.dim)
    ]
    g_inn = subalgebra_structure(t.g, basis, labels)
    g_inn.bracket_provenance = provenance
    n = len(basis)
    cols = [[basis[j][i] for j in range(n)] for i in range(t.g.dim)]
    s_inn_vecs = []
    s_cap = t.s.intersect(Subspace(t.g.dim, basis))
    for row in s_cap.rows:
        coords = solve_linear(cols, row)
        s_inn_vecs.append(coords)
    zeta_new = None
    if t.zeta is not None:
        zeta_new = []
        for d, v in t.zeta:
            dc = solve_linear(cols, d)
            vc = solve_linear(cols, v)
            if dc is not None and vc is not None:
                zeta_new.append((dc, vc))
    return Triple(
        g_inn,
        Subspace(n, s_inn_vecs),
        Subspace(n, [unit_vector(n, i) for i in range(t.c.dim)]),
        zeta=zeta_new,
    )


def quotient_structure(g: LieAlgebra, ideal: Subspace, labels_prefix: str = "q"):
    """Quotient Lie algebra by an ideal, with projection and section maps."""
    comp = ideal.basis_extension()
    n = len(comp)
    free_cols = [c for c in range(g.dim) if c not in set(ideal.pivots)]

    def proj(v: Sequence[Q]) -> Vector:
        red = ideal.reduce(v)
        return tuple(red[c] for c in free_cols)

    def lift(w: Sequence[Q]) -> Vector:
        out = zero_vector(g.dim)
        for coeff, vec in zip(w, comp):
            out = vec_add(out, vec_scale(coeff, vec))
        return out

    brackets = {}
    for i in range(n):
        for j in range(n):
            brackets[(i, j)] = proj(g.bracket(comp[i], comp[j]))
    q = LieAlgebra([f"{labels_prefix}{i}" for i in range(n)], brackets)
    return q, proj, lift


def tau_red(t: Triple) -> Triple:
    """Inner restriction followed by the quotient by core(s_inn).

    The reduced triple is re-adapted so its basis starts with the image of c
    and extends by recorded brackets (needed by the equivalence search).
    The image of c must stay injective; this is asserted.
    """
    ti = tau_inn(t)
    k = core(ti.g, ti.s)
    if k.dim == 0:
        return ti
    q, proj, _ = quotient_structure(ti.g, k)
    m = ti.c.dim
    c_imgs = [proj(unit_vector(ti.g.dim, i)) for i in range(m)]
    c_q = Subspace(q.dim, c_imgs)
    if c_q.dim != m:
        raise TripleError("c does not inject into the reduced triple")
    s_q = Subspace(q.dim, [proj(r) for r in ti.s.rows])
    zeta_q = None
    if ti.zeta is not None:
        zeta_q = []
        for d, v in ti.zeta:
            dq, vq = proj(d), proj(v)
            if not is_zero_vector(dq):
                zeta_q.append((dq, vq))
    t_q = Triple(q, s_q, c_q, zeta=zeta_q)
    return tau_inn(t_q)


def check_hyporeductive(t: Triple):
    """g = N_g(rho_c) + rho_c, tested exactly; returns (ok, detail)."""
    n = normalizer(t.g, t.c)
    total = n.add(t.c)
    ok = total.dim == t.g.dim
    return ok, {
        "dim_normalizer": n.dim,
        "dim_sum": total.dim,
        "dim_g": t.g.dim,
    }


def check_pseudoreductive(t: Triple):
    """The two conditions on zeta; returns (ok, detail).

    The second condition quantifies over single elements of c with polynomial
    dependence, so basis vectors alone are not enough: we also test all
    pairwise sums of c-basis vectors, with even ad-powers up to 2*dim(g).
    """
    if t.zeta is None:
        raise TripleError("pseudoreductivity requires zeta")
    n = normalizer(t.g, t.c)
    failures = []
    for row in t.s.rows:
        img = t.zeta_apply(row)
        if not n.contains(vec_add(row, img)):
            failures.append({"condition": "shifted-normalizer", "s_vector": _fmt_vec(row)})
    witnesses = list(t.c.rows)
    for i in range(t.c.dim):
        for j in range(i + 1, t.c.dim):
            witnesses.append(vec_add(t.c.rows[i], t.c.rows[j]))
    max_power = 2 * t.g.dim
    for w in witnesses:
        for row in t.s.rows:
            v = t.zeta_apply(row)
            for p in range(1, max_power + 1):
                v = t.g.bracket(w, v)
                if p % 2 == 0 and not t.c.contains(v):
                    failures.append(
                        {
                            "condition": "even-ad-power",
                            "power": p,
                            "witness": _fmt_vec(w),
                        }
                    )
                    break
            else:
                continue
            break
    return (not failures), {"failures": failures, "max_power": max_power}


def _fmt_vec(v: Sequence[Q]) -> list[str]:
    return [str(x) for x in v]


def _series_dims(g: LieAlgebra, derived: bool) -> list[int]:
    cur = Subspace(g.dim, [unit_vector(g.dim, i) for i in range(g.dim)])
    dims = [cur.dim]
    full = cur
    for _ in range(g.dim + 1):
        left = cur if derived else full
        vecs = [g.bracket(a, b) for a in left.rows for b in cur.rows]
        nxt = Subspace(g.dim, vecs)
        dims.append(nxt.dim)
        if nxt.dim == cur.dim:
            break
        cur = nxt
    return dims


def _center_dim(g: LieAlgebra) -> int:
    conds = []
    for i in range(g.dim):
        for coord in range(g.dim):
            conds.append([g.bracket_basis(j, i)[coord] for j in range(g.dim)])
    return len(kernel_basis(conds))


def triples_equivalent(t1: Triple, t2: Triple, dim_cap: int = 6):
    """Equivalence of triples: existence of an isomorphism of the reduced
    forms mapping s into s' and c into c'.

    Both triples are reduced first.  Cheap invariants decide many "no"
    answers; otherwise, since the reduced algebra is generated by c, an
    isomorphism is determined by its restriction to c, and we solve the
    resulting polynomial system exactly.  Returns (verdict, witness) with
    verdict one of "yes" / "no" / "unknown".
    """
    r1, r2 = tau_red(t1), tau_red(t2)
    if (r1.g.dim, r1.s.dim, r1.c.dim) != (r2.g.dim, r2.s.dim, r2.c.dim):
        return "no", {"reason": "dimension mismatch"}
    if _series_dims(r1.g, True) != _series_dims(r2.g, True):
        return "no", {"reason": "derived series mismatch"}
    if _series_dims(r1.g, False) != _series_dims(r2.g, False):
        return "no", {"reason": "lower central series mismatch"}
    if _center_dim(r1.g) != _center_dim(r2.g):
        return "no", {"reason": "center dimension mismatch"}
    if r1.g.dim > dim_cap:
        return "unknown", {"reason": f"dimension above search cap {dim_cap}"}
    return _isomorphism_search(r1, r2)


def _isomorphism_search(r1: Triple, r2: Triple):
    import sympy

    m = r1.c.dim
    n = r1.g.dim
    bvars = [[sympy.Symbol(f"b_{i}_{j}") for j in range(m)] for i in range(m)]
    # Symbolic images of the adapted basis of g1 inside g2 (coordinates in g2).
    phi: list[list] = []
    for i in range(m):
        phi.append([bvars[j][i] if j < m else sympy.Integer(0) for j in range(n)])

    def brk(x, y):
        out = [sympy.Integer(0)] * n
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0:
                    continue
                v = r2.g.bracket_basis(i, j)
                for k in range(n):
                    if v[k] != 0:
                        out[k] = out[k] + x[i] * y[j] * sympy.Rational(v[k])
        return [sympy.expand(e) for e in out]

    prov = r1.g.bracket_provenance
    for k in range(m, n):
        i, j = prov[k]
        phi.append(brk(phi[i], phi[j]))

    equations = []
    for i in range(n):
        for j in range(i + 1, n):
            target = r1.g.bracket_basis(i, j)
            lhs = [sympy.Integer(0)] * n
            for k in range(n):
                if target[k] != 0:
                    for a in range(n):
                        lhs[a] = lhs[a] + sympy.Rational(target[k]) * phi[k][a]
            rhs = brk(phi[i], phi[j])
            for a in range(n):
                eq = sympy.expand(lhs[a] - rhs[a])
                if eq != 0:
                    equations.append(eq)
    # phi must map s1 into s2.
    for row in r1.s.rows:
        img = [sympy.Integer(0)] * n
        for k in range(n):
            if row[k] != 0:
                for a in range(n):
                    img[a] = img[a] + sympy.Rational(row[k]) * phi[k][a]
        # Reduce against the echelon basis of s2.
        w = list(img)
        for s_row, p in zip(r2.s.rows, r2.s.pivots):
            f = w[p]
            if f != 0:
                w = [x - f * sympy.Rational(y) for x, y in zip(w, s_row)]
        for a in range(n):
            eq = sympy.expand(w[a])
            if eq != 0:
                equations.append(eq)
    tvar = sympy.Symbol("t_det")
    mat = sympy.Matrix([[phi[k][a] for k in range(n)] for a in range(n)])
    equations.append(sympy.expand(mat.det() * tvar - 1))

    flat_vars = [bvars[i][j] for i in range(m) for j in range(m)] + [tvar]
    try:
        gb = sympy.groebner(equations, *flat_vars, order="grevlex", domain="QQ")
        if list(gb.exprs) == [sympy.Integer(1)]:
            return "no", {"reason": "polynomial system inconsistent"}
    except Exception:
        pass
    try:
        solutions = sympy.solve(equations, flat_vars, dict=True)
    except NotImplementedError:
        return "unknown", {"reason": "solver gave up"}
    trial_values = [sympy.Integer(1), sympy.Integer(-1), sympy.Integer(2),
                    sympy.Rational(1, 2), sympy.Integer(-2), sympy.Integer(3)]
    for sol in solutions:
        free = sorted(
            {s for expr in sol.values() for s in expr.free_symbols}
            | {v for v in flat_vars if v not in sol},
            key=lambda s: s.name,
        )
        free = [s for s in free if s.name != "t_det" or s not in sol]
        assignments = _enumerate_assignments(free, trial_values, limit=400)
        for assign in assignments:
            candidate = {}
            ok = True
            for v in flat_vars:
                expr = sol.get(v, v)
                val = expr.subs(assign)
                if val.free_symbols or not val.is_rational:
                    ok = False
                    break
                candidate[v] = val
            if not ok:
                continue
            b = [[Q(int(candidate[bvars[i][j]].p), int(candidate[bvars[i][j]].q)) for j in range(m)] for i in range(m)]
            if _verify_candidate(r1, r2, b):
                return "yes", {"c_block": [[str(x) for x in row] for row in b]}
    return "unknown", {"reason": "no rational witness found"}


def _enumerate_assignments(free, values, limit):
    if not free:
        return [dict()]
    out = []
    idx = [0] * len(free)
    total = 0
    while total < limit:
        out.append({s: values[i] for s, i in zip(free, idx)})
        total += 1
        pos = 0
        while pos < len(idx):
            idx[pos] += 1
            if idx[pos] < len(values):
                break
            idx[pos] = 0
            pos += 1
        else:
            break
    return out


def _verify_candidate(r1: Triple, r2: Triple, b: list[list[Q]]) -> bool:
    n = r1.g.dim
    m = r1.c.dim
    phi: list[Vector] = []
    for i in range(m):
        phi.append(tuple(b[j][i] if j < m else Q(0) for j in range(n)))
    for k in range(m, n):
        i, j = r1.g.bracket_provenance[k]
        phi.append(r2.g.bracket(phi[i], phi[j]))
    for i in range(n):
        for j in range(n):
            target = r1.g.bracket_basis(i, j)
            lhs = zero_vector(n)
            for k in range(n):
                if target[k] != 0:
                    lhs = vec_add(lhs, vec_scale(target[k], phi[k]))
            if lhs != r2.g.bracket(phi[i], phi[j]):
                return False
    for row in r1.s.rows:
        img = zero_vector(n)
        for k in range(n):
            if row[k] != 0:
                img = vec_add(img, vec_scale(row[k], phi[k]))
        if not r2.s.contains(img):
            return False
    for i in range(m):
        if not r2.c.contains(phi[i]):
            return False
    mat = [[phi[k][a] for k in range(n)] for a in range(n)]
    from .linalg import invert_matrix

    return invert_matrix(mat) is not None
