"""The hyporeductive structure on a built Hopf algebra: the conjugation-style
operator r, the circle operation obtained through the coalgebra section, and
executable checks of the hypospeciality identities.

All operator comparisons are restricted to input degrees that stay inside
the cap, so every reported equality is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .envelope import (
    CoalgMorphism,
    PBWElement,
    UTau,
    UTauElement,
    multiset_ordered_splits,
    multiset_splits,
)
from .lie import Subspace, TripleError
from .linalg import Q, unit_vector
from .operators import (
    Matrix,
    mat_add,
    mat_commutator,
    mat_scale,
    mat_sub,
    mat_zero,
    matrices_agree_below,
    right_mult_matrix,
    rmult_membership,
)


def r_apply(U: UTau, mu, mv, x: UTauElement) -> UTauElement:
    """r(u, v)(x) = ((x u_(1)) v_(1)) / (u_(2) v_(2)) for basis monomials."""
    out = U.zero()
    for (u1, u2), cu in U.delta(UTauElement(U, {mu: Q(1)})).items():
        for (v1, v2), cv in U.delta(UTauElement(U, {mv: Q(1)})).items():
            num = U.mul(U.mul(x, UTauElement(U, {u1: Q(1)})), UTauElement(U, {v1: Q(1)}))
            den = U.mul(UTauElement(U, {u2: Q(1)}), UTauElement(U, {v2: Q(1)}))
            out = out + (cu * cv) * U.right_div(num, den)
    return out


class ROperatorCache:
    """Matrices of r(u, v) per basis pair; columns beyond the exact domain
    (input degree + deg u + deg v > cap) are zero."""

    def __init__(self, U: UTau):
        self.U = U
        self._mats: dict[tuple, Matrix] = {}

    def matrix(self, mu, mv) -> Matrix:
        key = (mu, mv)
        cached = self._mats.get(key)
        if cached is not None:
            return cached
        U = self.U
        n = len(U.basis)
        mat = mat_zero(n)
        bound = U.cap - len(mu) - len(mv)
        for j, mono in enumerate(U.basis):
            if len(mono) > bound:
                continue
            img = r_apply(U, mu, mv, UTauElement(U, {mono: Q(1)}))
            for m, c in img.terms.items():
                mat[U.index[m]][j] = c
        self._mats[key] = mat
        return mat

    def apply_elements(self, u: UTauElement, v: UTauElement, x: UTauElement) -> UTauElement:
        out = self.U.zero()
        for mu, cu in u.terms.items():
            for mv, cv in v.terms.items():
                out = out + (cu * cv) * r_apply(self.U, mu, mv, x)
        return out


def check_r_diagonal_vanishes(U: UTau):
    """r(a, a) = 0 for every primitive basis element."""
    r = ROperatorCache(U)
    for i in range(U.m):
        mat = r.matrix((i,), (i,))
        if not matrices_agree_below(U, mat, mat_zero(len(U.basis)), U.cap - 2):
            return False, {"primitive": U.labels[i]}
    return True, None


def check_r_commutator_identity(U: UTau):
    """2 r(a,b) = -[R_a, R_b] - R_{[a,b]} as operators, on all primitive pairs."""
    r = ROperatorCache(U)
    rmats = [right_mult_matrix(U, U.primitive(i)) for i in range(U.m)]
    for i in range(U.m):
        for j in range(U.m):
            a, b = U.primitive(i), U.primitive(j)
            comm = U.mul(a, b) - U.mul(b, a)
            lhs = mat_scale(Q(2), r.matrix((i,), (j,)))
            rhs = mat_sub(
                mat_zero(len(U.basis)),
                mat_add(
                    mat_commutator(rmats[i], rmats[j]),
                    right_mult_matrix(U, comm),
                ),
            )
            if not matrices_agree_below(U, lhs, rhs, U.cap - 2):
                return False, {"pair": [U.labels[i], U.labels[j]]}
    return True, None


@dataclass
class CircStructure:
    """The circle operation as a table on basis pairs, plus the verification
    records gathered while building it."""

    U: UTau
    sigma: CoalgMorphism
    table: dict[tuple, UTauElement]
    rho_in_us: bool
    factorization_ok: bool
    images_in_normalizer_env: bool

    def apply(self, u: UTauElement, v: UTauElement) -> UTauElement:
        out = self.U.zero()
        for mu, cu in u.terms.items():
            for mv, cv in v.terms.items():
                out = out + (cu * cv) * self.table[(mu, mv)]
        return out


def rho_pair(U: UTau, mu, mv) -> PBWElement:
    """S(rho_{u_(1) v_(1)}) rho_{v_(2)} rho_{u_(2)} inside U(g)."""
    env = U.env
    out = env.zero()
    for (u1, u2), cu in U.delta(UTauElement(U, {mu: Q(1)})).items():
        for (v1, v2), cv in U.delta(UTauElement(U, {mv: Q(1)})).items():
            prod = U.mul(UTauElement(U, {u1: Q(1)}), UTauElement(U, {v1: Q(1)}))
            part = env.antipode(U.rho(prod))
            part = part * U.rho(UTauElement(U, {v2: Q(1)}))
            part = part * U.rho(UTauElement(U, {u2: Q(1)}))
            out = out + (cu * cv) * part
    return out


def env_span_of_products(U: UTau, vectors) -> Subspace:
    """Span inside the truncated U(g) of all products of the given degree-one
    elements (the enveloping subalgebra they generate), as a subspace over
    the enumerated monomial coordinates."""
    env = U.env
    monos = []
    for d in range(U.cap + 1):
        monos.extend(
            tuple(sorted(m))
            for m in itertools.combinations_with_replacement(range(env.lie.dim), d)
        )
    pos = {m: i for i, m in enumerate(monos)}
    gens = [env.from_vector(v) for v in vectors]
    elems = [env.one()]
    frontier = [env.one()]
    for _ in range(U.cap):
        nxt = []
        for f in frontier:
            for g_el in gens:
                h = f * g_el
                if not h.is_zero():
                    nxt.append(h)
        elems.extend(nxt)
        frontier = nxt
    rows = []
    for f in elems:
        row = [Q(0)] * len(monos)
        for m, c in f.terms.items():
            row[pos[m]] = c
        rows.append(row)
    sub = Subspace(len(monos), rows)
    sub._mono_positions = pos  # reuse by membership tests
    return sub


def env_element_in_span(span: Subspace, f: PBWElement) -> bool:
    pos = span._mono_positions
    row = [Q(0)] * span.ambient_dim
    for m, c in f.terms.items():
        if m not in pos:
            return False
        row[pos[m]] = c
    return span.contains(row)


def circ_build(U: UTau, sigma: CoalgMorphism) -> CircStructure:
    """u o v := sigma(rho(u, v)) evaluated at the unit, on all basis pairs
    whose degrees fit the cap.

    Along the way three facts are verified and recorded: every rho(u, v)
    lies in U(s); the section's images satisfy the factorization
    sigma(rho(u,v)) = rho_{u_(1) o v_(1)} rho(u_(2), v_(2)); and those images
    lie in the enveloping span of the normalizer.
    """
    from .lie import normalizer as _normalizer

    env = U.env
    nrm = _normalizer(U.adapted, Subspace(U.adapted.dim, [unit_vector(U.adapted.dim, i) for i in range(U.m)]))
    nspan = env_span_of_products(U, nrm.rows)
    table: dict[tuple, UTauElement] = {}
    rho_vals: dict[tuple, PBWElement] = {}
    rho_in_us = True
    in_nrm = True
    for mu in U.basis:
        for mv in U.basis:
            if len(mu) + len(mv) > U.cap:
                continue
            rp = rho_pair(U, mu, mv)
            rho_vals[(mu, mv)] = rp
            if not U.is_in_us(rp):
                rho_in_us = False
            img = sigma.apply(rp)
            if not env_element_in_span(nspan, img):
                in_nrm = False
            table[(mu, mv)] = U.reduce_env(img)
    fact_ok = True
    for mu in U.basis:
        for mv in U.basis:
            if len(mu) + len(mv) > U.cap:
                continue
            lhs = sigma.apply(rho_vals[(mu, mv)])
            rhs = env.zero()
            for (u1, u2), cu in U.delta(UTauElement(U, {mu: Q(1)})).items():
                for (v1, v2), cv in U.delta(UTauElement(U, {mv: Q(1)})).items():
                    circ_uv = table[(u1, v1)]
                    rhs = rhs + (cu * cv) * (U.rho(circ_uv) * rho_vals[(u2, v2)])
            if not (lhs - rhs).is_zero():
                fact_ok = False
    return CircStructure(
        U=U,
        sigma=sigma,
        table=table,
        rho_in_us=rho_in_us,
        factorization_ok=fact_ok,
        images_in_normalizer_env=in_nrm,
    )


def check_circ_coalgebra(U: UTau, circ: CircStructure):
    """Unit laws and the coalgebra-morphism property of the circle table."""
    for mu in U.basis:
        u = UTauElement(U, {mu: Q(1)})
        eps = Q(1) if not mu else Q(0)
        if not (circ.apply(u, U.one()) - eps * U.one()).is_zero():
            return False, {"law": "right unit", "u": str(u)}
        if not (circ.apply(U.one(), u) - eps * U.one()).is_zero():
            return False, {"law": "left unit", "u": str(u)}
    for mu in U.basis:
        for mv in U.basis:
            if len(mu) + len(mv) > U.cap:
                continue
            val = circ.table[(mu, mv)]
            lhs = U.delta(val)
            rhs: dict = {}
            for (u1, u2), cu in U.delta(UTauElement(U, {mu: Q(1)})).items():
                for (v1, v2), cv in U.delta(UTauElement(U, {mv: Q(1)})).items():
                    left = circ.table[(u1, v1)]
                    right = circ.table[(u2, v2)]
                    for m1, c1 in left.terms.items():
                        for m2, c2 in right.terms.items():
                            key = (m1, m2)
                            nv = rhs.get(key, Q(0)) + cu * cv * c1 * c2
                            if nv:
                                rhs[key] = nv
                            elif key in rhs:
                                del rhs[key]
            if lhs != rhs:
                return False, {"law": "coalgebra morphism", "pair": [str(mu), str(mv)]}
    return True, None


def check_circ_primitive(U: UTau, circ: CircStructure):
    """a o b is primitive for primitive a, b."""
    for i in range(U.m):
        for j in range(U.m):
            val = circ.table[((i,), (j,))]
            if any(len(m) != 1 for m in val.terms):
                return False, {"pair": [U.labels[i], U.labels[j]]}
    return True, None


def h_apply(U: UTau, r: ROperatorCache, circ: CircStructure, mu, mv, x: UTauElement) -> UTauElement:
    """H(u,v)(x) = r(u_(1), v_(1))(x) (u_(2) o v_(2))."""
    out = U.zero()
    for (u1, u2), cu in U.delta(UTauElement(U, {mu: Q(1)})).items():
        for (v1, v2), cv in U.delta(UTauElement(U, {mv: Q(1)})).items():
            rx = r_apply(U, u1, v1, x)
            out = out + (cu * cv) * U.mul(rx, circ.table[(u2, v2)])
    return out


def hprime_apply(U: UTau, r: ROperatorCache, circ: CircStructure, mu, mv, y: UTauElement) -> UTauElement:
    """H'(u,v)(y) = (u_(1) o v_(1)) \\ H(u_(2), v_(2))(y)."""
    out = U.zero()
    for (u1, u2), cu in U.delta(UTauElement(U, {mu: Q(1)})).items():
        for (v1, v2), cv in U.delta(UTauElement(U, {mv: Q(1)})).items():
            hy = h_apply(U, r, circ, u2, v2, y)
            out = out + (cu * cv) * U.left_div(circ.table[(u1, v1)], hy)
    return out


def check_hypospecial(U: UTau, circ: CircStructure, max_total: int | None = None):
    """H(u,v)(xy) = H(u_(1),v_(1))(x) H'(u_(2),v_(2))(y) on all basis tuples
    of total degree within the bound."""
    cap = U.cap if max_total is None else max_total
    r = ROperatorCache(U)
    h_cache: dict[tuple, UTauElement] = {}
    hp_cache: dict[tuple, UTauElement] = {}

    def h_mono(mu, mv, mx):
        key = (mu, mv, mx)
        if key not in h_cache:
            h_cache[key] = h_apply(U, r, circ, mu, mv, UTauElement(U, {mx: Q(1)}))
        return h_cache[key]

    def h_elem(mu, mv, x: UTauElement):
        out = U.zero()
        for mx, cx in x.terms.items():
            out = out + cx * h_mono(mu, mv, mx)
        return out

    def hp_mono(mu, mv, my):
        key = (mu, mv, my)
        if key not in hp_cache:
            hp_cache[key] = hprime_apply(U, r, circ, mu, mv, UTauElement(U, {my: Q(1)}))
        return hp_cache[key]

    checked = 0
    for mu in U.basis:
        for mv in U.basis:
            duv = len(mu) + len(mv)
            if duv > cap:
                continue
            du = U.delta(UTauElement(U, {mu: Q(1)}))
            dv = U.delta(UTauElement(U, {mv: Q(1)}))
            for mx in U.basis:
                if duv + len(mx) > cap:
                    continue
                x = UTauElement(U, {mx: Q(1)})
                for my in U.basis:
                    if duv + len(mx) + len(my) > cap:
                        continue
                    y = UTauElement(U, {my: Q(1)})
                    lhs = h_elem(mu, mv, U.mul(x, y))
                    rhs = U.zero()
                    for (u1, u2), cu in du.items():
                        for (v1, v2), cv in dv.items():
                            hx = h_mono(u1, v1, mx)
                            hpy = hp_mono(u2, v2, my)
                            rhs = rhs + (cu * cv) * U.mul(hx, hpy)
                    if not (lhs - rhs).is_zero():
                        return False, {
                            "tuple": [str(mu), str(mv), str(mx), str(my)],
                        }
                    checked += 1
    return True, {"tuples_checked": checked, "max_total": cap}


def hyporeductivity_bracket_check(U: UTau, circ: CircStructure):
    """[[R_a,R_b] + R_{[a,b] - 2 a o b}, R_c] = R_{-2 H'(a,b)(c)} on all
    primitive basis triples, as operators below the cap."""
    r = ROperatorCache(U)
    rmats = [right_mult_matrix(U, U.primitive(i)) for i in range(U.m)]
    n = len(U.basis)
    for i in range(U.m):
        for j in range(U.m):
            a, b = U.primitive(i), U.primitive(j)
            comm_ab = U.mul(a, b) - U.mul(b, a)
            inner = mat_add(
                mat_commutator(rmats[i], rmats[j]),
                right_mult_matrix(U, comm_ab - Q(2) * circ.table[((i,), (j,))]),
            )
            for k in range(U.m):
                lhs = mat_commutator(inner, rmats[k])
                hp = hprime_apply(U, r, circ, (i,), (j,), U.primitive(k))
                rhs = right_mult_matrix(U, Q(-2) * hp)
                if not matrices_agree_below(U, lhs, rhs, U.cap - 3):
                    return False, {"triple": [U.labels[i], U.labels[j], U.labels[k]]}
    return True, None
