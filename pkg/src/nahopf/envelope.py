"""Truncated universal enveloping algebra and the quotient Hopf algebra.

The enveloping algebra U(g) carries a degree cap: products are exact
whenever the degrees of the factors add up to at most the cap, and monomials
beyond the cap are discarded consistently.  For a triple (g, s, c) the basis
of g is adapted (c-vectors first, s-vectors last), which turns the left
module U(g)/U(g)s into a monomial quotient: killing every normal-ordered
monomial that contains an s-letter.

The quotient, written UTau here, is a connected non-associative Hopf
algebra: its product is defined through the symmetrized basis, its left and
right divisions are computed by induction on the divisor through the
connected coproduct splitting, and the embedding u -> rho_u back into U(g)
together with the projection onto U(s) realize the factorization
U(g) = rho(UTau) . U(s).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .lie import LieAlgebra, Subspace, Triple, TripleError, normalizer, subalgebra_structure
from .linalg import (
    Q,
    Vector,
    invert_matrix,
    solve_linear,
    unit_vector,
    vec_add,
    vec_scale,
    zero_vector,
)

Mono = tuple[int, ...]


class DegreeOverflowError(ValueError):
    pass


def multiset_splits(m: Mono) -> list[tuple[Mono, Mono, Q]]:
    """Two-part coproduct of a normal-ordered monomial: all sub-multiset
    splits, each weighted by the product of per-letter binomials."""
    letters = sorted(set(m))
    counts = [m.count(x) for x in letters]
    out = []
    for choice in itertools.product(*(range(k + 1) for k in counts)):
        left = []
        right = []
        coeff = Q(1)
        for x, k, j in zip(letters, counts, choice):
            left.extend([x] * j)
            right.extend([x] * (k - j))
            coeff *= comb(k, j)
        out.append((tuple(left), tuple(right), coeff))
    return out


def multiset_ordered_splits(m: Mono, parts: int) -> list[tuple[tuple[Mono, ...], Q]]:
    """Ordered coproduct splits of a monomial into the given number of parts."""
    letters = sorted(set(m))
    counts = [m.count(x) for x in letters]
    per_letter = []
    for k in counts:
        combos = []
        for comp in itertools.product(*(range(k + 1) for _ in range(parts - 1))):
            used = sum(comp)
            if used <= k:
                full = comp + (k - used,)
                weight = Q(factorial(k))
                for j in full:
                    weight /= factorial(j)
                combos.append((full, weight))
        per_letter.append(combos)
    out = []
    for assignment in itertools.product(*per_letter):
        part_monos = []
        coeff = Q(1)
        for p in range(parts):
            part = []
            for x, (full, _) in zip(letters, assignment):
                part.extend([x] * full[p])
            part_monos.append(tuple(part))
        for full, weight in assignment:
            coeff *= weight
        out.append((tuple(part_monos), coeff))
    return out


def _add_into(acc: dict, terms: dict, scale: Q = Q(1)):
    for k, v in terms.items():
        nv = acc.get(k, Q(0)) + scale * v
        if nv:
            acc[k] = nv
        elif k in acc:
            del acc[k]


class PBWElement:
    """Element of the truncated U(g) in normal-ordered form."""

    __slots__ = ("env", "terms")

    def __init__(self, env: "UnivEnv", terms: dict | None = None):
        self.env = env
        self.terms = {m: Q(c) for m, c in (terms or {}).items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        _add_into(out, other.terms)
        return PBWElement(self.env, out)

    def __sub__(self, other):
        out = dict(self.terms)
        _add_into(out, other.terms, Q(-1))
        return PBWElement(self.env, out)

    def __neg__(self):
        return PBWElement(self.env, {m: -c for m, c in self.terms.items()})

    def __rmul__(self, scalar):
        scalar = Q(scalar)
        return PBWElement(self.env, {m: scalar * c for m, c in self.terms.items()})

    def __mul__(self, other):
        return self.env.mul(self, other)

    def __eq__(self, other):
        return isinstance(other, PBWElement) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def counit(self) -> Q:
        return self.terms.get((), Q(0))

    def max_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        labels = self.env.lie.labels
        bits = []
        for m in sorted(self.terms):
            word = ".".join(labels[i] for i in m) if m else "1"
            bits.append(f"{self.terms[m]}*{word}")
        return " + ".join(bits)


class UnivEnv:
    """U(g) truncated at a degree cap, with its Hopf structure.

    Products are computed by PBW straightening: adjacent inversions are
    swapped against the structure constants until every word is weakly
    increasing.  Normal-ordered monomials longer than the cap are discarded
    from results, but their shorter bracket descendants are kept, so every
    product is the exact degree-truncation of the untruncated one.  Two-sided
    exactness (no information loss at all) holds when the factor degrees sum
    to at most the cap.
    """

    def __init__(self, lie: LieAlgebra, cap: int):
        self.lie = lie
        self.cap = cap
        self._straight: dict[Mono, dict[Mono, Q]] = {}

    def zero(self) -> PBWElement:
        return PBWElement(self, {})

    def one(self) -> PBWElement:
        return PBWElement(self, {(): Q(1)})

    def gen(self, i: int) -> PBWElement:
        return PBWElement(self, {(i,): Q(1)})

    def from_vector(self, v: Sequence[Q]) -> PBWElement:
        return PBWElement(self, {(i,): Q(c) for i, c in enumerate(v) if c})

    def straighten(self, word: Mono) -> dict[Mono, Q]:
        cached = self._straight.get(word)
        if cached is not None:
            return cached
        pos = -1
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                pos = i
                break
        if pos < 0:
            result = {word: Q(1)} if len(word) <= self.cap else {}
        else:
            result: dict[Mono, Q] = {}
            swapped = word[:pos] + (word[pos + 1], word[pos]) + word[pos + 2 :]
            _add_into(result, self.straighten(swapped))
            br = self.lie.bracket_basis(word[pos], word[pos + 1])
            for k, c in enumerate(br):
                if c:
                    _add_into(result, self.straighten(word[:pos] + (k,) + word[pos + 2 :]), c)
        self._straight[word] = result
        return result

    def mono_mul(self, m1: Mono, m2: Mono) -> dict[Mono, Q]:
        return self.straighten(m1 + m2)

    def mul(self, a: PBWElement, b: PBWElement) -> PBWElement:
        out: dict = {}
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                _add_into(out, self.mono_mul(ma, mb), ca * cb)
        return PBWElement(self, out)

    def delta(self, a: PBWElement) -> dict[tuple[Mono, Mono], Q]:
        out: dict = {}
        for m, c in a.terms.items():
            for left, right, w in multiset_splits(m):
                key = (left, right)
                nv = out.get(key, Q(0)) + c * w
                if nv:
                    out[key] = nv
                elif key in out:
                    del out[key]
        return out

    def antipode(self, a: PBWElement) -> PBWElement:
        out: dict = {}
        for m, c in a.terms.items():
            sign = Q(-1) ** len(m)
            _add_into(out, self.straighten(tuple(reversed(m))), sign * c)
        return PBWElement(self, out)


class UTauElement:
    """Element of the quotient Hopf algebra, in the normal-ordered basis.

    Keys are weakly increasing tuples of c-indices (multisets over the basis
    of the complement)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "UTau", terms: dict | None = None):
        self.alg = alg
        self.terms = {m: Q(c) for m, c in (terms or {}).items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        _add_into(out, other.terms)
        return UTauElement(self.alg, out)

    def __sub__(self, other):
        out = dict(self.terms)
        _add_into(out, other.terms, Q(-1))
        return UTauElement(self.alg, out)

    def __neg__(self):
        return UTauElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __rmul__(self, scalar):
        scalar = Q(scalar)
        return UTauElement(self.alg, {m: scalar * c for m, c in self.terms.items()})

    def __mul__(self, other):
        return self.alg.mul(self, other)

    def __eq__(self, other):
        return isinstance(other, UTauElement) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def counit(self) -> Q:
        return self.terms.get((), Q(0))

    def max_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def truncate(self, degree: int) -> "UTauElement":
        return UTauElement(self.alg, {m: c for m, c in self.terms.items() if len(m) <= degree})

    def primitive_vector(self) -> Vector:
        """Coordinates of the degree-1 part in the c-basis."""
        return tuple(self.terms.get((i,), Q(0)) for i in range(self.alg.m))

    def __repr__(self):
        if not self.terms:
            return "0"
        labels = self.alg.labels
        bits = []
        for m in sorted(self.terms):
            word = ".".join(labels[i] for i in m) if m else "1"
            bits.append(f"{self.terms[m]}*{word}")
        return " + ".join(bits)


class UTau:
    """Hopf algebra integrating a triple, truncated at a degree cap.

    Built from the adapted copy of g (c-basis first, s-basis last).  The
    normal-ordered basis consists of the classes of pure-c monomials; the
    symmetrized basis indexed by the same multisets is used to define the
    product and the embedding rho into U(g).
    """

    def __init__(self, triple: Triple, cap: int):
        triple.validate()
        self.triple = triple
        self.cap = cap
        self.m = triple.c.dim
        self.k = triple.s.dim
        basis_vecs = list(triple.c.rows) + list(triple.s.rows)
        g = triple.g
        labels = []
        for v in basis_vecs:
            nz = [(i, c) for i, c in enumerate(v) if c]
            if len(nz) == 1 and nz[0][1] == 1:
                labels.append(g.labels[nz[0][0]])
            else:
                labels.append("+".join(f"{c}{g.labels[i]}" for i, c in nz))
        self.adapted = subalgebra_structure(g, basis_vecs, labels)
        self.adapted_basis_vecs = basis_vecs
        self.labels = labels[: self.m]
        self.env = UnivEnv(self.adapted, cap)
        self.basis: list[Mono] = []
        for d in range(cap + 1):
            self.basis.extend(
                tuple(sorted(mono))
                for mono in itertools.combinations_with_replacement(range(self.m), d)
            )
        self.index = {m: i for i, m in enumerate(self.basis)}
        self._sym_in_straight: dict[Mono, dict[Mono, Q]] = {}
        self._straight_in_sym: dict[Mono, dict[Mono, Q]] = {}
        self._build_sym_tables()
        self._mul_table: dict[tuple[Mono, Mono], dict[Mono, Q]] = {}
        self._ldiv_table: dict[tuple[Mono, Mono], dict[Mono, Q]] = {}
        self._rdiv_table: dict[tuple[Mono, Mono], dict[Mono, Q]] = {}

    # -- basic elements ------------------------------------------------

    def zero(self) -> UTauElement:
        return UTauElement(self, {})

    def one(self) -> UTauElement:
        return UTauElement(self, {(): Q(1)})

    def primitive(self, i: int) -> UTauElement:
        return UTauElement(self, {(i,): Q(1)})

    def primitive_from_vector(self, v: Sequence[Q]) -> UTauElement:
        return UTauElement(self, {(i,): Q(c) for i, c in enumerate(v) if c})

    def element(self, terms: dict) -> UTauElement:
        return UTauElement(self, terms)

    def dims_per_degree(self) -> list[int]:
        out = [0] * (self.cap + 1)
        for m in self.basis:
            out[len(m)] += 1
        return out

    # -- reduction U(g) -> UTau and the symmetrized basis ---------------

    def reduce_env(self, f: PBWElement) -> UTauElement:
        """Class of an element of U(g) in the quotient: monomials containing
        an s-letter die, pure-c monomials survive verbatim."""
        out = {}
        for m, c in f.terms.items():
            if all(i < self.m for i in m):
                out[m] = out.get(m, Q(0)) + c
        return UTauElement(self, out)

    def _build_sym_tables(self):
        for mono in self.basis:
            n = len(mono)
            acc: dict[Mono, Q] = {}
            for word in itertools.permutations(mono):
                for w, c in self.env.straighten(word).items():
                    if all(i < self.m for i in w):
                        nv = acc.get(w, Q(0)) + c
                        if nv:
                            acc[w] = nv
                        elif w in acc:
                            del acc[w]
            self._sym_in_straight[mono] = acc
        for mono in self.basis:  # ascending degree thanks to enumeration order
            n = len(mono)
            inv = {mono: Q(1, factorial(n))}
            rest = dict(self._sym_in_straight[mono])
            rest.pop(mono, None)
            for w, c in rest.items():
                lower = self._straight_in_sym[w]
                _add_into(inv, lower, -Q(1, factorial(n)) * c)
            self._straight_in_sym[mono] = inv

    def to_sym(self, u: UTauElement) -> dict[Mono, Q]:
        out: dict[Mono, Q] = {}
        for m, c in u.terms.items():
            _add_into(out, self._straight_in_sym[m], c)
        return out

    def from_sym(self, coords: dict[Mono, Q]) -> UTauElement:
        out: dict = {}
        for mono, c in coords.items():
            _add_into(out, self._sym_in_straight[mono], c)
        return UTauElement(self, out)

    # -- product ---------------------------------------------------------

    def _mul_mono(self, mu: Mono, mv: Mono) -> dict[Mono, Q]:
        key = (mu, mv)
        cached = self._mul_table.get(key)
        if cached is not None:
            return cached
        out: dict[Mono, Q] = {}
        for sym_mono, lam in self._straight_in_sym[mv].items():
            for word in itertools.permutations(sym_mono):
                env_word = tuple(reversed(word)) + mu
                for w, c in self.env.straighten(env_word).items():
                    if all(i < self.m for i in w):
                        nv = out.get(w, Q(0)) + lam * c
                        if nv:
                            out[w] = nv
                        elif w in out:
                            del out[w]
        self._mul_table[key] = out
        return out

    def mul(self, u: UTauElement, v: UTauElement, strict: bool = True) -> UTauElement:
        out: dict = {}
        for mu, cu in u.terms.items():
            for mv, cv in v.terms.items():
                if strict and len(mu) + len(mv) > self.cap:
                    raise DegreeOverflowError(
                        f"product degree {len(mu) + len(mv)} exceeds cap {self.cap}"
                    )
                _add_into(out, self._mul_mono(mu, mv), cu * cv)
        return UTauElement(self, out)

    def mul_trunc(self, u: UTauElement, v: UTauElement) -> UTauElement:
        """Exact degree-truncation of the product: components beyond the cap
        are dropped, everything below is computed in full (series use)."""
        return self.mul(u, v, strict=False)

    # -- coalgebra --------------------------------------------------------

    def delta(self, u: UTauElement) -> dict[tuple[Mono, Mono], Q]:
        out: dict = {}
        for m, c in u.terms.items():
            for left, right, w in multiset_splits(m):
                key = (left, right)
                nv = out.get(key, Q(0)) + c * w
                if nv:
                    out[key] = nv
                elif key in out:
                    del out[key]
        return out

    # -- divisions --------------------------------------------------------

    def _ldiv_mono(self, mu: Mono, mv: Mono) -> dict[Mono, Q]:
        """u \\ v on basis monomials, by induction on the divisor degree."""
        if not mu:
            return {mv: Q(1)}
        key = (mu, mv)
        cached = self._ldiv_table.get(key)
        if cached is not None:
            return cached
        out: dict[Mono, Q] = {}
        _add_into(out, self._mul_mono(mu, mv), Q(-1))
        for left, right, w in multiset_splits(mu):
            if not left or not right:
                continue
            inner = self._ldiv_mono(right, mv)
            for m2, c2 in inner.items():
                if len(left) + len(m2) <= self.cap:
                    _add_into(out, self._mul_mono(left, m2), -w * c2)
        self._ldiv_table[key] = out
        return out

    def _rdiv_mono(self, mu: Mono, mv: Mono) -> dict[Mono, Q]:
        """u / v on basis monomials, by induction on the divisor degree."""
        if not mv:
            return {mu: Q(1)}
        key = (mu, mv)
        cached = self._rdiv_table.get(key)
        if cached is not None:
            return cached
        out: dict[Mono, Q] = {}
        _add_into(out, self._mul_mono(mu, mv), Q(-1))
        for left, right, w in multiset_splits(mv):
            if not left or not right:
                continue
            inner = self._rdiv_mono(mu, left)
            for m2, c2 in inner.items():
                if len(m2) + len(right) <= self.cap:
                    _add_into(out, self._mul_mono(m2, right), -w * c2)
        self._rdiv_table[key] = out
        return out

    def left_div(self, u: UTauElement, v: UTauElement) -> UTauElement:
        out: dict = {}
        for mu, cu in u.terms.items():
            for mv, cv in v.terms.items():
                if len(mu) + len(mv) > self.cap:
                    raise DegreeOverflowError("division degrees exceed cap")
                _add_into(out, self._ldiv_mono(mu, mv), cu * cv)
        return UTauElement(self, out)

    def right_div(self, u: UTauElement, v: UTauElement) -> UTauElement:
        out: dict = {}
        for mu, cu in u.terms.items():
            for mv, cv in v.terms.items():
                if len(mu) + len(mv) > self.cap:
                    raise DegreeOverflowError("division degrees exceed cap")
                _add_into(out, self._rdiv_mono(mu, mv), cu * cv)
        return UTauElement(self, out)

    # -- embedding, action, projection ------------------------------------

    def rho(self, u: UTauElement) -> PBWElement:
        """Coalgebra embedding into U(g): the symmetrized basis element goes
        to the reversed products of its letters."""
        out: dict = {}
        for sym_mono, lam in self.to_sym(u).items():
            for word in itertools.permutations(sym_mono):
                _add_into(out, self.env.straighten(tuple(reversed(word))), lam)
        return PBWElement(self.env, out)

    def act(self, f: PBWElement, u: UTauElement) -> UTauElement:
        """Left action of U(g): multiply the representative on the left, then
        pass to the quotient."""
        out: dict = {}
        for mf, cf in f.terms.items():
            for mu, cu in u.terms.items():
                for w, c in self.env.straighten(mf + mu).items():
                    if all(i < self.m for i in w):
                        nv = out.get(w, Q(0)) + cf * cu * c
                        if nv:
                            out[w] = nv
                        elif w in out:
                            del out[w]
        return UTauElement(self, out)

    def pi(self, f: PBWElement) -> PBWElement:
        """Projection of U(g) onto U(s) along the embedded copy of UTau."""
        out = self.env.zero()
        for (m1, m2), c in self.env.delta(f).items():
            u1 = self.reduce_env(PBWElement(self.env, {m1: Q(1)}))
            part = self.env.antipode(self.rho(u1)) * PBWElement(self.env, {m2: Q(1)})
            out = out + c * part
        return out

    def factorize(self, f: PBWElement) -> list[tuple[UTauElement, PBWElement]]:
        """Tensor decomposition of U(g) as rho(UTau) . U(s).

        Returns pairs (u_i, g_i) with g_i in U(s), one pair per surviving
        quotient basis monomial, such that sum rho(u_i) g_i = f exactly.
        """
        buckets: dict[Mono, PBWElement] = {}
        for (m1, m2), c in self.env.delta(f).items():
            u1 = self.reduce_env(PBWElement(self.env, {m1: Q(1)}))
            g_part = c * self.pi(PBWElement(self.env, {m2: Q(1)}))
            for mono, cu in u1.terms.items():
                cur = buckets.get(mono, self.env.zero())
                buckets[mono] = cur + cu * g_part
        out = []
        for mono in sorted(buckets):
            g_part = buckets[mono]
            if not g_part.is_zero():
                out.append((UTauElement(self, {mono: Q(1)}), g_part))
        return out

    def recombine(self, pairs: Iterable[tuple[UTauElement, PBWElement]]) -> PBWElement:
        out = self.env.zero()
        for u, g_part in pairs:
            out = out + self.rho(u) * g_part
        return out

    def is_in_us(self, f: PBWElement) -> bool:
        """Membership in U(s): no monomial uses a c-letter."""
        return all(all(i >= self.m for i in mono) for mono in f.terms)

    def us_basis(self) -> list[Mono]:
        out = []
        for d in range(self.cap + 1):
            out.extend(
                tuple(sorted(mono))
                for mono in itertools.combinations_with_replacement(
                    range(self.m, self.m + self.k), d
                )
            )
        return out

    # -- power helpers -----------------------------------------------------

    def left_power(self, a: UTauElement, n: int) -> UTauElement:
        """Left-normed power a^n = ((aa)...)a."""
        if n == 0:
            return self.one()
        out = a
        for _ in range(n - 1):
            out = self.mul(out, a)
        return out


class CoalgMorphism:
    """Linear map given on normal-ordered source monomials, with images in a
    target enveloping algebra; coalgebra-morphism-ness is a testable
    property, not an enforced invariant."""

    def __init__(self, env: UnivEnv, images: dict[Mono, PBWElement]):
        self.env = env
        self.images = images

    def apply_mono(self, mono: Mono) -> PBWElement:
        img = self.images.get(mono)
        if img is None:
            raise KeyError(f"morphism not defined on monomial {mono}")
        return img

    def apply(self, f: PBWElement) -> PBWElement:
        out = self.env.zero()
        for m, c in f.terms.items():
            out = out + c * self.apply_mono(m)
        return out


def exp_star(
    env: UnivEnv, domain: Sequence[Mono], theta: dict[Mono, PBWElement]
) -> CoalgMorphism:
    """Coalgebra morphism exp*(theta): ordered coproduct splits of each
    monomial, theta of the parts multiplied left to right, weighted 1/n!.

    theta must vanish on the empty monomial; only finitely many terms
    survive because every part must carry positive degree."""
    images: dict[Mono, PBWElement] = {}
    for mono in domain:
        if not mono:
            images[mono] = env.one()
            continue
        acc = env.zero()
        for n in range(1, len(mono) + 1):
            for parts, weight in multiset_ordered_splits(mono, n):
                if any(not p for p in parts):
                    continue
                term = None
                for p in parts:
                    tp = theta.get(p)
                    if tp is None or tp.is_zero():
                        term = None
                        break
                    term = tp if term is None else term * tp
                if term is not None:
                    acc = acc + (weight / factorial(n)) * term
        images[mono] = acc
    return CoalgMorphism(env, images)


def coalg_inverse(U: UTau, psi: CoalgMorphism) -> CoalgMorphism:
    """Inverse of a filtration-preserving endomorphism of U(s).

    Fails with a named error when the degree-1 block is singular; otherwise
    the full matrix on the truncated basis is inverted exactly.
    """
    dom = U.us_basis()
    pos = {m: i for i, m in enumerate(dom)}
    k = U.k
    block = [[Q(0)] * k for _ in range(k)]
    for j in range(k):
        img = psi.apply_mono((U.m + j,))
        for i in range(k):
            block[i][j] = img.terms.get((U.m + i,), Q(0))
    if invert_matrix(block) is None:
        raise TripleError("degree-1 block of the morphism is singular")
    n = len(dom)
    mat = [[Q(0)] * n for _ in range(n)]
    for j, mono in enumerate(dom):
        img = psi.apply_mono(mono)
        for m2, c in img.terms.items():
            if m2 not in pos:
                raise TripleError("morphism image leaves U(s)")
            mat[pos[m2]][j] = c
    inv = invert_matrix(mat)
    if inv is None:
        raise TripleError("morphism is singular on the truncated space")
    images = {}
    for j, mono in enumerate(dom):
        images[mono] = PBWElement(
            U.env, {dom[i]: inv[i][j] for i in range(n) if inv[i][j]}
        )
    return CoalgMorphism(U.env, images)


def sigma_section(U: UTau, theta_policy: str = "first-solution") -> CoalgMorphism:
    """Coalgebra section of the projection onto U(s), for hyporeductive triples.

    A linear lift of s into the normalizer of c is chosen deterministically
    (free variables zeroed in column order), extended multiplicatively via
    exp*, and corrected by the inverse of its projection so that pi after
    sigma is the identity on the truncated U(s).
    """
    if theta_policy != "first-solution":
        raise ValueError(f"unsupported theta policy: {theta_policy}")
    g = U.adapted
    n_dim = g.dim
    m, k = U.m, U.k
    c_span = Subspace(n_dim, [unit_vector(n_dim, i) for i in range(m)])
    nrm = normalizer(g, c_span)
    if nrm.add(c_span).dim != n_dim:
        raise TripleError("triple is not hyporeductive: normalizer + c is too small")
    theta: dict[Mono, PBWElement] = {}
    cols = [[nrm.rows[j][i] for j in range(nrm.dim)] for i in range(n_dim)]
    for j in range(k):
        target = unit_vector(n_dim, m + j)
        a = [cols[m + i] for i in range(k)]
        lam = solve_linear(a, [target[m + i] for i in range(k)])
        if lam is None:
            raise TripleError("no lift of s into the normalizer exists")
        w = zero_vector(n_dim)
        for lj, row in zip(lam, nrm.rows):
            w = vec_add(w, vec_scale(lj, row))
        theta[(m + j,)] = U.env.from_vector(w)
    dom = U.us_basis()
    theta_prime = exp_star(U.env, dom, theta)
    psi = CoalgMorphism(U.env, {mono: U.pi(theta_prime.apply_mono(mono)) for mono in dom})
    psi_inv = coalg_inverse(U, psi)
    images = {mono: theta_prime.apply(psi_inv.apply_mono(mono)) for mono in dom}
    return CoalgMorphism(U.env, images)


def check_monoalternative(U: UTau, max_total: int | None = None):
    """Right monoalternativity on all basis pairs within the cap.

    For each pair (x, y) and every number of coproduct slots, compares the
    left-iterated products against multiplication by the left-normed product
    of the slots.  Returns (ok, detail).
    """
    cap = U.cap if max_total is None else max_total
    checked = 0
    for my in U.basis:
        dy = len(my)
        for mx in U.basis:
            if len(mx) + dy > cap:
                continue
            x = UTauElement(U, {mx: Q(1)})
            for n in range(1, cap + 1):
                lhs = U.zero()
                rhs = U.zero()
                for parts, w in multiset_ordered_splits(my, n):
                    acc = x
                    for p in parts:
                        acc = U.mul(acc, UTauElement(U, {p: Q(1)}))
                    lhs = lhs + w * acc
                    prod = U.one()
                    for p in parts:
                        prod = U.mul(prod, UTauElement(U, {p: Q(1)}))
                    rhs = rhs + w * U.mul(x, prod)
                if not (lhs - rhs).is_zero():
                    return False, {
                        "x": str(x),
                        "y": str(UTauElement(U, {my: Q(1)})),
                        "slots": n,
                    }
                checked += 1
    return True, {"pairs_checked": checked, "max_total": cap}


def check_power_identity(U: UTau):
    """u c^n = ((u c) ... ) c for basis u and a spanning sample of c."""
    samples = [unit_vector(U.m, i) for i in range(U.m)]
    for i in range(U.m):
        for j in range(i + 1, U.m):
            samples.append(vec_add(unit_vector(U.m, i), unit_vector(U.m, j)))
    for mu in U.basis:
        u = UTauElement(U, {mu: Q(1)})
        for v in samples:
            c_elt = U.primitive_from_vector(v)
            for n in range(0, U.cap - len(mu) + 1):
                lhs = U.mul(u, U.left_power(c_elt, n))
                rhs = u
                for _ in range(n):
                    rhs = U.mul(rhs, c_elt)
                if not (lhs - rhs).is_zero():
                    return False, {"u": str(u), "power": n}
    return True, None


def check_divisions(U: UTau):
    """The four division chains on every basis pair within the cap."""
    checked = 0
    for mu in U.basis:
        for mv in U.basis:
            if len(mu) + len(mv) > U.cap:
                continue
            u = UTauElement(U, {mu: Q(1)})
            v = UTauElement(U, {mv: Q(1)})
            eps_u = Q(1) if not mu else Q(0)
            eps_v = Q(1) if not mv else Q(0)
            want_l = eps_u * v
            want_r = eps_v * u
            chain1 = U.zero()
            chain2 = U.zero()
            for (m1, m2), c in U.delta(u).items():
                u1 = UTauElement(U, {m1: Q(1)})
                u2 = UTauElement(U, {m2: Q(1)})
                chain1 = chain1 + c * U.left_div(u1, U.mul(u2, v))
                chain2 = chain2 + c * U.mul(u1, U.left_div(u2, v))
            chain3 = U.zero()
            chain4 = U.zero()
            for (m1, m2), c in U.delta(v).items():
                v1 = UTauElement(U, {m1: Q(1)})
                v2 = UTauElement(U, {m2: Q(1)})
                chain3 = chain3 + c * U.right_div(U.mul(u, v1), v2)
                chain4 = chain4 + c * U.mul(U.right_div(u, v1), v2)
            for got, want, name in (
                (chain1, want_l, "left-then-multiply"),
                (chain2, want_l, "multiply-then-left"),
                (chain3, want_r, "right-then-multiply"),
                (chain4, want_r, "multiply-then-right"),
            ):
                if not (got - want).is_zero():
                    return False, {"u": str(u), "v": str(v), "chain": name}
            checked += 1
    return True, {"pairs_checked": checked}
