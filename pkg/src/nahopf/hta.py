"""Hyporeductive triple algebras: extraction, enveloping algebra, integration
and the recursive family of multilinear brackets on the complement.

A triple algebra is the data (c, a.b, a*b, [c;a,b]) read off a splitting
g = h (+) c with h inside the normalizer of c.  Conversely the enveloping
Lie algebra E(c) is presented on c by the relations
[[a,b] - a.b, c] = [c;a,b]; its validity as a triple (s a subalgebra,
hyporeductivity) is checked operationally rather than against an axiom
list.  Integration goes through the opposite algebra of E(c).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .envelope import UTau, UTauElement
from .freena import evaluate_su_bracket
from .hall import FreeLie, PresentedLie
from .lie import Subspace, Triple, TripleError, check_hyporeductive, normalizer, vec_sub_c
from .linalg import Q, Vector, is_zero_vector, qvec, solve_linear, unit_vector, vec_add, vec_scale, zero_vector
from .operators import (
    mat_add,
    mat_commutator,
    matrices_agree_below,
    right_mult_matrix,
)

BASE_ORDER_DIRECT = "star-direct"      # <1; y, z> = -(y.z) - y*z
BASE_ORDER_SWAPPED = "star-swapped"    # <1; y, z> = -(y.z) - z*y


class HTA:
    """(c, dot, star, ternary) on an ordered basis of c.

    dot must be antisymmetric and ternary antisymmetric in its last two
    arguments; star is unconstrained at input time.  Tables are sparse:
    missing entries are zero, and the antisymmetric closure of supplied
    entries is filled in (conflicting explicit values are an error).
    """

    def __init__(self, labels: Sequence[str], dot, star, ternary):
        self.labels = tuple(labels)
        self.m = len(self.labels)
        self.dot = dot
        self.star = star
        self.ternary = ternary

    @classmethod
    def from_tables(cls, labels, dot: dict, star: dict, ternary: dict) -> "HTA":
        m = len(labels)
        zero = zero_vector(m)

        def fill_antisym(table: dict, what: str) -> dict:
            full = {}
            for (i, j), v in table.items():
                full[(i, j)] = qvec(v)
            for (i, j), v in list(full.items()):
                if i == j and not is_zero_vector(v):
                    raise TripleError(f"{what} must vanish on equal arguments")
                if (j, i) in full:
                    if full[(j, i)] != vec_scale(Q(-1), v):
                        raise TripleError(f"{what} is not antisymmetric")
                else:
                    full[(j, i)] = vec_scale(Q(-1), v)
            return full

        dot_full = fill_antisym(dot, "dot")
        star_full = {k: qvec(v) for k, v in star.items()}
        tern_full = {}
        for (k, i, j), v in ternary.items():
            tern_full[(k, i, j)] = qvec(v)
        for (k, i, j), v in list(tern_full.items()):
            if i == j and not is_zero_vector(v):
                raise TripleError("ternary must vanish on equal last arguments")
            if (k, j, i) in tern_full:
                if tern_full[(k, j, i)] != vec_scale(Q(-1), v):
                    raise TripleError("ternary is not antisymmetric in its last two slots")
            else:
                tern_full[(k, j, i)] = vec_scale(Q(-1), v)
        return cls(labels, dot_full, star_full, tern_full)

    def dot_basis(self, i: int, j: int) -> Vector:
        return self.dot.get((i, j), zero_vector(self.m))

    def star_basis(self, i: int, j: int) -> Vector:
        return self.star.get((i, j), zero_vector(self.m))

    def ternary_basis(self, k: int, i: int, j: int) -> Vector:
        return self.ternary.get((k, i, j), zero_vector(self.m))

    def _bilinear(self, table_fn, x: Sequence[Q], y: Sequence[Q]) -> Vector:
        out = zero_vector(self.m)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    out = vec_add(out, vec_scale(xi * yj, table_fn(i, j)))
        return out

    def dot_apply(self, x, y) -> Vector:
        return self._bilinear(self.dot_basis, x, y)

    def star_apply(self, x, y) -> Vector:
        return self._bilinear(self.star_basis, x, y)

    def ternary_apply(self, c, x, y) -> Vector:
        out = zero_vector(self.m)
        for k, ck in enumerate(c):
            if ck:
                out = vec_add(out, vec_scale(ck, self._bilinear(
                    lambda i, j: self.ternary_basis(k, i, j), x, y)))
        return out

    def star_is_antisymmetric(self) -> bool:
        for i in range(self.m):
            if not is_zero_vector(self.star_basis(i, i)):
                return False
            for j in range(self.m):
                if self.star_basis(i, j) != vec_scale(Q(-1), self.star_basis(j, i)):
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, HTA) or self.m != other.m:
            return False
        for i in range(self.m):
            for j in range(self.m):
                if self.dot_basis(i, j) != other.dot_basis(i, j):
                    return False
                if self.star_basis(i, j) != other.star_basis(i, j):
                    return False
                for k in range(self.m):
                    if self.ternary_basis(k, i, j) != other.ternary_basis(k, i, j):
                        return False
        return True

    def __repr__(self):
        return f"HTA(dim={self.m})"


def hta_from_triple(t: Triple, h: Subspace) -> HTA:
    """Read the three products off the splitting g = h (+) c with h in the
    normalizer of c."""
    g = t.g
    nrm = normalizer(g, t.c)
    if not nrm.contains_subspace(h):
        raise TripleError("h is not contained in the normalizer of c")
    if h.dim + t.c.dim != g.dim or h.intersect(t.c).dim != 0:
        raise TripleError("h is not a complement of c")
    m = t.c.dim
    cols = list(h.rows) + list(t.c.rows)
    a = [[cols[j][i] for j in range(len(cols))] for i in range(g.dim)]

    def split_h_c(v):
        lam = solve_linear(a, qvec(v))
        if lam is None:
            raise TripleError("vector outside h + c")
        h_part = zero_vector(g.dim)
        for lj, row in zip(lam[: h.dim], h.rows):
            h_part = vec_add(h_part, vec_scale(lj, row))
        c_coords = tuple(lam[h.dim :])
        return h_part, c_coords

    dot = {}
    star = {}
    ternary = {}
    for i in range(m):
        for j in range(m):
            br = g.bracket(t.c.rows[i], t.c.rows[j])
            h_ab, dot_ij = split_h_c(br)
            dot[(i, j)] = dot_ij
            _, c_of_h = vec_sub_c(t, h_ab)
            star_ij = t.c.coords(c_of_h)
            star[(i, j)] = star_ij
            for k in range(m):
                tv = g.bracket(h_ab, t.c.rows[k])
                coords = t.c.coords(tv)
                if coords is None:
                    raise TripleError("h does not normalize c")
                ternary[(k, i, j)] = coords
    return HTA([f"c{i}" for i in range(m)], dot, star, ternary)


@dataclass
class EnvelopeResult:
    presented: PresentedLie
    triple: Triple
    s_dim: int
    collapsed: bool
    hyporeductive: bool
    detail: dict


def envelope_E(hta: HTA, cap: int) -> EnvelopeResult:
    """Presented enveloping Lie algebra of the triple algebra, truncated.

    The quotient is computed at degree max(cap, 4) so that brackets of the
    surviving (degree <= 2) basis elements always close.  Collapse of the
    generator space is reported, never silently accepted.
    """
    m = hta.m
    work = max(cap, 4)
    free = FreeLie(m, 3)
    relations = []
    for i in range(m):
        for j in range(i + 1, m):
            base = free.bracket({i: Q(1)}, {j: Q(1)})
            z = dict(base)
            for tcoord, c in enumerate(hta.dot_basis(i, j)):
                if c:
                    z[tcoord] = z.get(tcoord, Q(0)) - c
            for k in range(m):
                rel = free.bracket(z, {k: Q(1)})
                for tcoord, c in enumerate(hta.ternary_basis(k, i, j)):
                    if c:
                        rel[tcoord] = rel.get(tcoord, Q(0)) - c
                relations.append(rel)
    presented = PresentedLie(m, work, relations)
    collapsed = presented.generator_collapsed()
    if collapsed:
        raise TripleError("the complement collapses in the enveloping algebra")
    alg = presented.as_lie_algebra()
    n = presented.dim
    gen_pos = [presented.basis_pos[i] for i in range(m)]
    c_sub = Subspace(n, [unit_vector(n, p) for p in gen_pos])
    s_vecs = []
    for i in range(m):
        for j in range(i + 1, m):
            base = presented.free.bracket({i: Q(1)}, {j: Q(1)})
            z = dict(base)
            for tcoord, c in enumerate(hta.dot_basis(i, j)):
                if c:
                    z[tcoord] = z.get(tcoord, Q(0)) - c
            red = presented.reduce(z)
            vec = [Q(0)] * n
            for idx, c in red.items():
                vec[presented.basis_pos[idx]] = c
            s_vecs.append(tuple(vec))
    s_sub = Subspace(n, s_vecs)
    triple = Triple(alg, s_sub, c_sub)
    hypo_ok, hypo_detail = check_hyporeductive(triple)
    return EnvelopeResult(
        presented=presented,
        triple=triple,
        s_dim=s_sub.dim,
        collapsed=collapsed,
        hyporeductive=hypo_ok,
        detail={"dims_per_degree": presented.dims_per_degree(), **hypo_detail},
    )


@dataclass
class IntegrationResult:
    envelope: EnvelopeResult
    U: UTau
    commutator_strict: bool       # [a,b] equals star + dot on primitives
    commutator_dot_only: bool     # [a,b] equals dot on primitives
    bracket_identity: bool        # [[R_a,R_b] + R_{a.b}, R_c] = R_{[c;a,b]}

    @property
    def ok(self) -> bool:
        return (self.commutator_strict or self.commutator_dot_only) and self.bracket_identity


def integrate_hta(hta: HTA, cap: int) -> IntegrationResult:
    """Hopf algebra of the opposite enveloping triple, with the two defining
    identities verified on primitive basis triples.

    The commutator identity is reported in two variants: the strict form
    including star, and the dot-only form.  Through the enveloping algebra
    the star product is invisible (its witnesses live in s), so the strict
    form can only hold when star vanishes; both outcomes are recorded.
    """
    env_res = envelope_E(hta, cap)
    t = env_res.triple
    t_op = Triple(t.g.opposite(), t.s, t.c)
    U = UTau(t_op, cap)
    m = hta.m
    strict = True
    dot_only = True
    for i in range(m):
        for j in range(m):
            a, b = U.primitive(i), U.primitive(j)
            comm = U.mul(a, b) - U.mul(b, a)
            want_dot = U.primitive_from_vector(hta.dot_basis(i, j))
            want_strict = want_dot + U.primitive_from_vector(hta.star_basis(i, j))
            if not (comm - want_strict).is_zero():
                strict = False
            if not (comm - want_dot).is_zero():
                dot_only = False
    bracket_ok = True
    rmats = [right_mult_matrix(U, U.primitive(i)) for i in range(m)]
    for i in range(m):
        for j in range(m):
            inner = mat_commutator(rmats[i], rmats[j])
            inner = mat_add(
                inner, right_mult_matrix(U, U.primitive_from_vector(hta.dot_basis(i, j)))
            )
            for k in range(m):
                lhs = mat_commutator(inner, rmats[k])
                rhs = right_mult_matrix(
                    U, U.primitive_from_vector(hta.ternary_basis(k, i, j))
                )
                if not matrices_agree_below(U, lhs, rhs, U.cap - 3):
                    bracket_ok = False
    return IntegrationResult(
        envelope=env_res,
        U=U,
        commutator_strict=strict,
        commutator_dot_only=dot_only,
        bracket_identity=bracket_ok,
    )


def sabinin_ops(hta: HTA, cap: int, base_order: str = BASE_ORDER_DIRECT) -> dict:
    """Multilinear bracket tables from the recursion on the triple algebra.

    Keys are (word, y, z) with word a tuple of basis indices and y, z basis
    indices, total degree len(word) + 2 <= cap; values are coordinate
    vectors in the basis of c.
    """
    m = hta.m

    def base(y_vec, z_vec) -> Vector:
        out = vec_scale(Q(-1), hta.dot_apply(y_vec, z_vec))
        if base_order == BASE_ORDER_DIRECT:
            out = vec_add(out, vec_scale(Q(-1), hta.star_apply(y_vec, z_vec)))
        elif base_order == BASE_ORDER_SWAPPED:
            out = vec_add(out, vec_scale(Q(-1), hta.star_apply(z_vec, y_vec)))
        else:
            raise ValueError(f"unknown base order {base_order}")
        return out

    def word_splits(word):
        n = len(word)
        for r in range(n + 1):
            for subset in itertools.combinations(range(n), r):
                inset = set(subset)
                yield (
                    tuple(word[t] for t in subset),
                    tuple(word[t] for t in range(n) if t not in inset),
                )

    def s_val(word: tuple, y_vec, z_vec) -> Vector:
        if not word:
            return base(y_vec, z_vec)
        u, x_last = word[:-1], word[-1]
        x_vec = unit_vector(m, x_last)
        out = s_val(u, x_vec, hta.dot_apply(y_vec, z_vec))
        for u1, u2 in word_splits(u):
            inner = s_val(u2, y_vec, z_vec)
            out = vec_add(out, s_val(u1, x_vec, inner))
        if not u:
            out = vec_add(out, hta.ternary_apply(x_vec, y_vec, z_vec))
        return out

    table = {}
    for total in range(2, cap + 1):
        wlen = total - 2
        for word in itertools.product(range(m), repeat=wlen):
            for y in range(m):
                for z in range(m):
                    table[(word, y, z)] = s_val(
                        word, unit_vector(m, y), unit_vector(m, z)
                    )
    return table


def sabinin_antisymmetry_ok(table: dict, m: int) -> bool:
    for (word, y, z), v in table.items():
        w2 = table.get((word, z, y))
        if w2 is None or w2 != vec_scale(Q(-1), v):
            return False
    return True


def crosscheck_su(hta: HTA, cap: int):
    """Recursion values against the evaluated multilinear operations inside
    the integrated Hopf algebra, for both base-case conventions.

    Returns (ok, detail); ok means at least one convention matches every
    word of total degree <= cap, and the detail records which.
    """
    result = integrate_hta(hta, cap)
    U = result.U
    m = hta.m
    prims = [U.primitive(i) for i in range(m)]

    def mulfn(x, y):
        return U.mul(x, y)

    outcomes = {}
    mismatches = {}
    for order in (BASE_ORDER_DIRECT, BASE_ORDER_SWAPPED):
        table = sabinin_ops(hta, cap, base_order=order)
        ok = True
        first_bad = None
        for (word, y, z), vec in sorted(table.items()):
            got = evaluate_su_bracket(
                [prims[i] for i in word], prims[y], prims[z], mulfn, U.one()
            )
            if got is None:
                got = U.zero()
            if any(len(mono) != 1 for mono in got.terms):
                ok = False
                first_bad = {"word": list(word), "y": y, "z": z, "reason": "not primitive"}
                break
            want = U.primitive_from_vector(vec)
            if not (got - want).is_zero():
                ok = False
                first_bad = {
                    "word": list(word),
                    "y": y,
                    "z": z,
                    "recursion": [str(c) for c in vec],
                    "evaluated": str(got),
                }
                break
        outcomes[order] = ok
        if first_bad:
            mismatches[order] = first_bad
    detail = {
        "matches": outcomes,
        "mismatches": mismatches,
        "integration": {
            "commutator_strict": result.commutator_strict,
            "commutator_dot_only": result.commutator_dot_only,
            "bracket_identity": result.bracket_identity,
        },
    }
    return (outcomes[BASE_ORDER_DIRECT] or outcomes[BASE_ORDER_SWAPPED]), detail


def resolve_star_convention(t: Triple, h: Subspace, cap: int = 3):
    """Empirical resolution of the base-case argument order.

    Integrates the triple directly (through its opposite algebra), extracts
    the triple algebra along h, and compares the evaluated bracket of two
    primitives against both candidate base cases.  Only meaningful when the
    extracted star product is nonzero and non-symmetric.
    """
    hta = hta_from_triple(t, h)
    t_op = Triple(t.g.opposite(), t.s, t.c, check=False)
    U = UTau(t_op, cap)
    m = hta.m
    direct_ok = True
    swapped_ok = True
    for y in range(m):
        for z in range(m):
            py, pz = U.primitive(y), U.primitive(z)
            su_val = U.mul(pz, py) - U.mul(py, pz)  # -[y, z]
            ev = unit_vector(m, y), unit_vector(m, z)
            direct = vec_add(
                vec_scale(Q(-1), hta.dot_apply(*ev)),
                vec_scale(Q(-1), hta.star_apply(*ev)),
            )
            swapped = vec_add(
                vec_scale(Q(-1), hta.dot_apply(*ev)),
                vec_scale(Q(-1), hta.star_apply(ev[1], ev[0])),
            )
            if not (su_val - U.primitive_from_vector(direct)).is_zero():
                direct_ok = False
            if not (su_val - U.primitive_from_vector(swapped)).is_zero():
                swapped_ok = False
    return {
        "star_nonzero": any(
            not is_zero_vector(hta.star_basis(i, j)) for i in range(m) for j in range(m)
        ),
        "star_antisymmetric": hta.star_is_antisymmetric(),
        BASE_ORDER_DIRECT: direct_ok,
        BASE_ORDER_SWAPPED: swapped_ok,
    }
