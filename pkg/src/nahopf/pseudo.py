"""The pseudoreductive structure: the bullet operation induced by zeta, the
anticommutator law, the conjugation flow in two formal parameters and its
defining differential equation with Bernoulli coefficients.

The bullet operation is transported from the triple to the operator side
through the inner operator data; when the action kernel makes the naive
transport ambiguous this is detected and reported.  On primitives a
canonical representative is always available, so primitive bullet values
are computed even in the ambiguous case (with a warning attached).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .envelope import CoalgMorphism, PBWElement, UTau, UTauElement, coalg_inverse, exp_star
from .hypo import ROperatorCache, r_apply, rho_pair
from .lie import Subspace, Triple, TripleError
from .linalg import (
    Q,
    Vector,
    is_zero_vector,
    solve_linear,
    unit_vector,
    vec_add,
    vec_scale,
    zero_vector,
)
from .operators import (
    InnerOperatorData,
    Matrix,
    mat_add,
    mat_commutator,
    mat_identity,
    mat_scale,
    mat_sub,
    mat_zero,
    matrices_agree_below,
    right_mult_matrix,
    rmult_membership,
)
from .linalg import mat_mul


@lru_cache(maxsize=None)
def _inv_exp_series(order: int) -> tuple[Q, ...]:
    """Coefficients of x/(exp(x) - 1) up to the given order (series oracle)."""
    s = [Q(1, factorial(k + 1)) for k in range(order + 1)]  # (e^x - 1)/x
    t = [Q(0)] * (order + 1)
    t[0] = Q(1)
    for n in range(1, order + 1):
        acc = Q(0)
        for j in range(1, n + 1):
            acc += s[j] * t[n - j]
        t[n] = -acc
    return tuple(t)


def bernoulli(two_m: int) -> Q:
    """Coefficient of x^{2m}/(2m)! in x/(exp(x) - 1), as an exact rational."""
    if two_m < 0 or two_m % 2 == 1:
        raise ValueError("argument must be an even non-negative integer")
    return _inv_exp_series(two_m)[two_m] * factorial(two_m)


# ---------------------------------------------------------------------------
# bullet on primitives


@dataclass
class BulletPrimitives:
    """Primitive bullet values a_i bullet a_j, with transport bookkeeping."""

    U: UTau
    table: dict[tuple[int, int], UTauElement]
    transport_ambiguous: bool
    kernel_dim: int

    def value(self, i: int, j: int) -> UTauElement:
        return self.table[(i, j)]


def _primitive_commutator_vector(U: UTau, i: int, j: int) -> Vector:
    comm = U.mul(U.primitive(i), U.primitive(j)) - U.mul(U.primitive(j), U.primitive(i))
    if any(len(m) != 1 for m in comm.terms):
        raise TripleError("commutator of primitives is not primitive")
    return comm.primitive_vector()


def _double_r_abstract(U: UTau, i: int, j: int) -> Vector:
    """The adapted-coordinate element realized by 2 r(a_i, a_j):
    minus the bracket of the two c-vectors minus the lift of [a_i, a_j]."""
    n = U.adapted.dim
    br = U.adapted.bracket(unit_vector(n, i), unit_vector(n, j))
    v = _primitive_commutator_vector(U, i, j)
    lift = tuple(v[t] if t < U.m else Q(0) for t in range(n))
    z = vec_scale(Q(-1), vec_add(br, lift))
    if any(z[t] != 0 for t in range(U.m)):
        raise TripleError("conjugation operator does not kill the unit")
    return z


def _zeta_adapted(U: UTau, t: Triple, adapted_vec: Vector) -> Vector:
    """Apply the triple's zeta to an adapted-coordinate vector of s; the
    value comes back as a primitive coordinate vector."""
    ambient = zero_vector(t.g.dim)
    for coeff, basis_vec in zip(adapted_vec, U.adapted_basis_vecs):
        if coeff:
            ambient = vec_add(ambient, vec_scale(coeff, basis_vec))
    img = t.zeta_apply(ambient)
    coords = t.c.coords(img)
    if coords is None:
        raise TripleError("zeta image left the complement")
    return coords


def bullet_primitives(U: UTau, inner: InnerOperatorData, t: Triple) -> BulletPrimitives:
    """R_{a bullet b} = zeta(2 r(a, b)), computed through the canonical
    representative of the conjugation operator in the adapted algebra.

    Ambiguity of the transported zeta (a nonzero action kernel on which zeta
    does not vanish) is recorded; the canonical representative keeps the
    values deterministic regardless.
    """
    if t.zeta is None:
        raise TripleError("bullet requires a triple with zeta")
    ambiguous = False
    for krow in inner.kernel.rows:
        k_adapted = zero_vector(U.adapted.dim)
        for coeff, vec in zip(krow, inner.ginn_basis):
            if coeff:
                k_adapted = vec_add(k_adapted, vec_scale(coeff, vec))
        if not is_zero_vector(_zeta_adapted(U, t, k_adapted)):
            ambiguous = True
    table = {}
    for i in range(U.m):
        for j in range(U.m):
            z = _double_r_abstract(U, i, j)
            table[(i, j)] = U.primitive_from_vector(_zeta_adapted(U, t, z))
    return BulletPrimitives(
        U=U, table=table, transport_ambiguous=ambiguous, kernel_dim=inner.kernel.dim
    )


def check_bullet_bracket_identity(U: UTau, bullet: BulletPrimitives):
    """[r(a,b) + R_{a.b}/2, R_c] = R_{r(a,b)(c) + [c, a.b]/2} on primitive
    basis triples, as operators below the cap."""
    r = ROperatorCache(U)
    rmats = [right_mult_matrix(U, U.primitive(i)) for i in range(U.m)]
    for i in range(U.m):
        for j in range(U.m):
            w = bullet.value(i, j)
            op = mat_add(r.matrix((i,), (j,)), mat_scale(Q(1, 2), right_mult_matrix(U, w)))
            for k in range(U.m):
                c_el = U.primitive(k)
                lhs = mat_commutator(op, rmats[k])
                elt = r_apply(U, (i,), (j,), c_el) + Q(1, 2) * (
                    U.mul(c_el, w) - U.mul(w, c_el)
                )
                rhs = right_mult_matrix(U, elt)
                if not matrices_agree_below(U, lhs, rhs, U.cap - 3):
                    return False, {
                        "triple": [U.labels[i], U.labels[j], U.labels[k]],
                    }
    return True, None


def check_bol(U: UTau, bullet: BulletPrimitives):
    """R_{a.b} R_y + R_y R_{a.b} = R_{(a.b) y + y (a.b)} for all primitive
    pairs and basis y below the cap."""
    for i in range(U.m):
        for j in range(U.m):
            w = bullet.value(i, j)
            rw = right_mult_matrix(U, w)
            for my in U.basis:
                if len(my) > U.cap - 1:
                    continue
                y = UTauElement(U, {my: Q(1)})
                ry = right_mult_matrix(U, y)
                lhs = mat_add(mat_mul(ry, rw), mat_mul(rw, ry))
                rhs = right_mult_matrix(U, U.mul_trunc(w, y) + U.mul_trunc(y, w))
                if not matrices_agree_below(U, lhs, rhs, U.cap - 1 - len(my)):
                    return False, {
                        "pair": [U.labels[i], U.labels[j]],
                        "y": str(y),
                    }
    return True, None


# ---------------------------------------------------------------------------
# general bullet through the operator triple


def transport(src: UTau, dst: UTau, u: UTauElement) -> UTauElement:
    """Carry an element across the canonical primitive identification of two
    builds with the same complement, through symmetrized coordinates."""
    return dst.from_sym(src.to_sym(u))


@dataclass
class BulletStructure:
    U: UTau
    table: dict[tuple, UTauElement]
    prim: BulletPrimitives
    rho_in_us: bool
    factorization_ok: bool
    prim_consistent: bool
    product_tables_match: bool

    def apply(self, u: UTauElement, v: UTauElement) -> UTauElement:
        out = self.U.zero()
        for mu, cu in u.terms.items():
            for mv, cv in v.terms.items():
                out = out + (cu * cv) * self.table[(mu, mv)]
        return out


def bullet_general(U: UTau, inner: InnerOperatorData, t: Triple) -> BulletStructure:
    """u bullet v := theta'(Psi^{-1}(rho(u, v))) evaluated at the unit, built
    over the operator triple.

    theta is the shift d -> d + 2 zeta(d) on degree one, zero on higher
    monomials; its exponential extension lands in products of the conjugation
    operators.  Fails when the transported zeta is not well defined.
    """
    if t.zeta is None:
        raise TripleError("bullet requires a triple with zeta")
    prim = bullet_primitives(U, inner, t)
    if prim.transport_ambiguous:
        raise TripleError(
            "zeta does not descend to the operator triple "
            "(nonzero value on the action kernel)"
        )
    # zeta on the operator triple.
    n_ad = U.adapted.dim
    s_span = Subspace(n_ad, [unit_vector(n_ad, U.m + i) for i in range(U.k)])
    ginn_span = Subspace(n_ad, inner.ginn_basis)
    zeta_pairs = []
    for row in s_span.intersect(ginn_span).rows:
        d_ginn = inner.ginn_coords(row)
        d_op = inner.op_coords(d_ginn)
        img_prim = _zeta_adapted(U, t, row)
        img_adapted = tuple(
            img_prim[i] if i < U.m else Q(0) for i in range(n_ad)
        )
        img_op = inner.op_coords(inner.ginn_coords(img_adapted))
        zeta_pairs.append((d_op, img_op))
    t_op = Triple(inner.triple.g, inner.triple.s, inner.triple.c, zeta=zeta_pairs)
    UK = UTau(t_op, U.cap)
    # The two builds must agree through the primitive identification.
    tables_match = True
    for mu in U.basis:
        for mv in U.basis:
            if len(mu) + len(mv) > U.cap:
                continue
            lhs = transport(
                U, UK, U.mul(UTauElement(U, {mu: Q(1)}), UTauElement(U, {mv: Q(1)}))
            )
            rhs = UK.mul(
                transport(U, UK, UTauElement(U, {mu: Q(1)})),
                transport(U, UK, UTauElement(U, {mv: Q(1)})),
            )
            if not (lhs - rhs).is_zero():
                tables_match = False
    theta: dict[tuple, PBWElement] = {}
    for jj in range(UK.k):
        d_vec = unit_vector(UK.adapted.dim, UK.m + jj)
        zd = t_op.zeta_apply(UK.adapted_basis_vecs[UK.m + jj])
        # zeta image in adapted coordinates of the operator triple
        cols = [
            [UK.adapted_basis_vecs[b][i] for b in range(UK.adapted.dim)]
            for i in range(t_op.g.dim)
        ]
        zd_ad = solve_linear(cols, zd)
        val = vec_add(d_vec, vec_scale(Q(2), zd_ad))
        theta[(UK.m + jj,)] = UK.env.from_vector(val)
    dom = UK.us_basis()
    theta_prime = exp_star(UK.env, dom, theta)
    psi = CoalgMorphism(
        UK.env, {mono: UK.pi(theta_prime.apply_mono(mono)) for mono in dom}
    )
    psi_inv = coalg_inverse(UK, psi)

    def f_map(g_elt: PBWElement) -> PBWElement:
        return theta_prime.apply(psi_inv.apply(g_elt))

    rho_in_us = True
    table: dict[tuple, UTauElement] = {}
    f_vals: dict[tuple, PBWElement] = {}
    rho_vals: dict[tuple, PBWElement] = {}
    for mu in U.basis:
        for mv in U.basis:
            if len(mu) + len(mv) > U.cap:
                continue
            uk = transport(U, UK, UTauElement(U, {mu: Q(1)}))
            vk = transport(U, UK, UTauElement(U, {mv: Q(1)}))
            rp = UK.env.zero()
            for muk, cuk in uk.terms.items():
                for mvk, cvk in vk.terms.items():
                    rp = rp + (cuk * cvk) * rho_pair(UK, muk, mvk)
            if not UK.is_in_us(rp):
                rho_in_us = False
            rho_vals[(mu, mv)] = rp
            img = f_map(rp)
            f_vals[(mu, mv)] = img
            table[(mu, mv)] = transport(UK, U, UK.reduce_env(img))
    fact_ok = True
    for mu in U.basis:
        for mv in U.basis:
            if len(mu) + len(mv) > U.cap:
                continue
            lhs = f_vals[(mu, mv)]
            rhs = UK.env.zero()
            for (u1, u2), cu in U.delta(UTauElement(U, {mu: Q(1)})).items():
                for (v1, v2), cv in U.delta(UTauElement(U, {mv: Q(1)})).items():
                    w = transport(U, UK, table[(u1, v1)])
                    rhs = rhs + (cu * cv) * (UK.rho(w) * rho_vals[(u2, v2)])
            if not (lhs - rhs).is_zero():
                fact_ok = False
    prim_consistent = True
    for i in range(U.m):
        for j in range(U.m):
            if not (table[((i,), (j,))] - prim.value(i, j)).is_zero():
                prim_consistent = False
    return BulletStructure(
        U=U,
        table=table,
        prim=prim,
        rho_in_us=rho_in_us,
        factorization_ok=fact_ok,
        prim_consistent=prim_consistent,
        product_tables_match=tables_match,
    )


def check_pseudospecial(U: UTau, bullet: BulletStructure, max_total: int | None = None):
    """P(u,v)(xy) = r(u_(1),v_(1))(x) P(u_(2),v_(2))(y) on basis tuples of
    total degree within the bound, plus the derivation form on primitives:
    P(a,b)(xy) = r(a,b)(x) y + x P(a,b)(y)."""
    cap = U.cap if max_total is None else max_total
    r_cache: dict[tuple, UTauElement] = {}
    p_cache: dict[tuple, UTauElement] = {}

    def r_mono(mu, mv, mx):
        key = (mu, mv, mx)
        if key not in r_cache:
            r_cache[key] = r_apply(U, mu, mv, UTauElement(U, {mx: Q(1)}))
        return r_cache[key]

    def p_mono(mu, mv, mx):
        key = (mu, mv, mx)
        if key not in p_cache:
            out = U.zero()
            for (u1, u2), cu in U.delta(UTauElement(U, {mu: Q(1)})).items():
                for (v1, v2), cv in U.delta(UTauElement(U, {mv: Q(1)})).items():
                    rx = r_mono(u1, v1, mx)
                    out = out + (cu * cv) * U.mul(rx, bullet.table[(u2, v2)])
            p_cache[key] = out
        return p_cache[key]

    def p_elem(mu, mv, x: UTauElement):
        out = U.zero()
        for mx, cx in x.terms.items():
            out = out + cx * p_mono(mu, mv, mx)
        return out

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
                    lhs = p_elem(mu, mv, U.mul(x, y))
                    rhs = U.zero()
                    for (u1, u2), cu in du.items():
                        for (v1, v2), cv in dv.items():
                            rx = r_mono(u1, v1, mx)
                            py = p_mono(u2, v2, my)
                            rhs = rhs + (cu * cv) * U.mul(rx, py)
                    if not (lhs - rhs).is_zero():
                        return False, {
                            "tuple": [str(mu), str(mv), str(mx), str(my)],
                        }
                    checked += 1
    for i in range(U.m):
        for j in range(U.m):
            for mx in U.basis:
                for my in U.basis:
                    if 2 + len(mx) + len(my) > cap:
                        continue
                    x = UTauElement(U, {mx: Q(1)})
                    y = UTauElement(U, {my: Q(1)})
                    lhs = p_elem((i,), (j,), U.mul(x, y))
                    rhs = U.mul(r_mono((i,), (j,), mx), y) + U.mul(
                        x, p_mono((i,), (j,), my)
                    )
                    if not (lhs - rhs).is_zero():
                        return False, {
                            "law": "derivation form",
                            "pair": [U.labels[i], U.labels[j]],
                        }
    return True, {"tuples_checked": checked, "max_total": cap}


# ---------------------------------------------------------------------------
# the two-parameter flow


def _series_mul(a: dict, b: dict, cap: int, n: int) -> dict:
    out: dict = {}
    for (i1, j1), ma in a.items():
        for (i2, j2), mb in b.items():
            i, j = i1 + i2, j1 + j2
            if i + j > cap:
                continue
            prod = mat_mul(ma, mb)
            key = (i, j)
            if key in out:
                out[key] = mat_add(out[key], prod)
            else:
                out[key] = prod
    return out


def _series_add(a: dict, b: dict, scale: Q = Q(1)) -> dict:
    out = {k: [row[:] for row in v] for k, v in a.items()}
    for k, v in b.items():
        if k in out:
            out[k] = mat_add(out[k], mat_scale(scale, v))
        else:
            out[k] = mat_scale(scale, v)
    return out


def _series_exp_single(mat: Matrix, var: str, cap: int, n: int) -> dict:
    out = {(0, 0): mat_identity(n)}
    power = mat_identity(n)
    for k in range(1, cap + 1):
        power = mat_mul(power, mat)
        key = (k, 0) if var == "s" else (0, k)
        out[key] = mat_scale(Q(1, factorial(k)), power)
    return out


def _series_log(a: dict, cap: int, n: int) -> dict:
    x = {k: v for k, v in a.items() if k != (0, 0)}
    const = a.get((0, 0))
    if const is None or const != mat_identity(n):
        raise ValueError("series logarithm requires identity constant term")
    out: dict = {}
    power = {(0, 0): mat_identity(n)}
    for k in range(1, cap + 1):
        power = _series_mul(power, x, cap, n)
        out = _series_add(out, power, Q(-1) ** (k + 1) / Q(k))
    return {k: v for k, v in out.items() if any(any(c for c in row) for row in v)}


def flow_check(U: UTau, bullet: BulletPrimitives, flow_cap: int = 4):
    """Conjugation-flow verification over all primitive pairs and directions.

    For each bullet value w = a bullet b and primitive direction c, three
    facts are checked coefficientwise on the valid degrees:

    1. every (s,t)-coefficient of exp(t R_w) exp(s R_c) exp(t R_w) is a right
       multiplication operator;
    2. the whole product equals right multiplication by the element series
       (exp_l(t w) exp_l(s c)) exp_l(t w) with left-normed powers;
    3. the logarithm f of the flow satisfies f(s, 0) = s R_c and the
       differential equation df/dt = 2 sum_m (beta_{2m}/(2m)!) ad_f^{2m}(R_w).

    Returns (ok, detail).
    """
    coeffs_checked = 0
    for i in range(U.m):
        for j in range(U.m):
            for k in range(U.m):
                ok, detail = _flow_single(
                    U, bullet.value(i, j), unit_vector(U.m, k), flow_cap
                )
                if not ok:
                    detail["pair"] = [U.labels[i], U.labels[j]]
                    detail["direction"] = U.labels[k]
                    return False, detail
                coeffs_checked += detail["coefficients_checked"]
    return True, {"flow_cap": flow_cap, "coefficients_checked": coeffs_checked}


def _flow_single(U: UTau, bullet_val: UTauElement, c_vec: Vector, flow_cap: int):
    from .operators import in_rmult_span

    n = len(U.basis)
    c_el = U.primitive_from_vector(c_vec)
    rw = right_mult_matrix(U, bullet_val)
    rc = right_mult_matrix(U, c_el)
    et = _series_exp_single(rw, "t", flow_cap, n)
    es = _series_exp_single(rc, "s", flow_cap, n)
    lhs = _series_mul(_series_mul(et, es, flow_cap, n), et, flow_cap, n)
    detail: dict = {"flow_cap": flow_cap}
    for (i, j), mat in sorted(lhs.items()):
        bound = U.cap - (i + j)
        if bound < 0:
            continue
        if not in_rmult_span(U, mat, bound):
            return False, {**detail, "failure": "membership", "coefficient": [i, j]}
    # element-side series with left-normed powers
    def left_powers(w: UTauElement):
        out = {(0): U.one()}
        acc = U.one()
        for k in range(1, flow_cap + 1):
            acc = U.mul_trunc(acc, w)
            out[k] = acc
        return out

    pw = left_powers(bullet_val)
    pc = left_powers(c_el)
    xw = {(0, k): Q(1, factorial(k)) * pw[k] for k in range(flow_cap + 1)}
    yc = {(k, 0): Q(1, factorial(k)) * pc[k] for k in range(flow_cap + 1)}

    def elem_series_mul(a, b):
        out: dict = {}
        for (i1, j1), ua in a.items():
            for (i2, j2), ub in b.items():
                i, j = i1 + i2, j1 + j2
                if i + j > flow_cap:
                    continue
                prod = U.mul_trunc(ua, ub)
                key = (i, j)
                out[key] = out.get(key, U.zero()) + prod
        return out

    z = elem_series_mul(elem_series_mul(xw, yc), xw)
    for (i, j), mat in sorted(lhs.items()):
        bound = U.cap - (i + j)
        if bound < 0:
            continue
        target = right_mult_matrix(U, z.get((i, j), U.zero()))
        if not matrices_agree_below(U, mat, target, bound):
            return False, {**detail, "failure": "element series", "coefficient": [i, j]}
    # logarithm and the differential equation
    f = _series_log(lhs, flow_cap, n)
    for (i, j), mat in f.items():
        if j == 0:
            bound = U.cap - i - 1
            want = rc if i == 1 else mat_zero(n)
            if bound >= 0 and not matrices_agree_below(U, mat, want, bound):
                return False, {**detail, "failure": "initial condition", "coefficient": [i, j]}
    df = {}
    for (i, j), mat in f.items():
        if j >= 1:
            df[(i, j - 1)] = mat_scale(Q(j), mat)
    rw_series = {(0, 0): rw}
    rhs_ode: dict = {}
    ad_power = rw_series
    for m2 in range(0, flow_cap + 1, 2):
        if m2 > 0:
            ad_power = _series_sub(
                _series_mul(f, ad_power, flow_cap, n),
                _series_mul(ad_power, f, flow_cap, n),
            )
            ad_power = _series_sub(
                _series_mul(f, ad_power, flow_cap, n),
                _series_mul(ad_power, f, flow_cap, n),
            )
        rhs_ode = _series_add(rhs_ode, ad_power, Q(2) * bernoulli(m2) / factorial(m2))
    keys = set(df) | set(rhs_ode)
    for key in sorted(keys):
        i, j = key
        if i + j > flow_cap - 1:
            continue
        bound = U.cap - (i + j) - 1
        if bound < 0:
            continue
        a = df.get(key, mat_zero(n))
        b = rhs_ode.get(key, mat_zero(n))
        if not matrices_agree_below(U, a, b, bound):
            return False, {**detail, "failure": "flow equation", "coefficient": [i, j]}
    return True, {**detail, "coefficients_checked": len(lhs)}


def _series_sub(a: dict, b: dict) -> dict:
    return _series_add(a, b, Q(-1))
