"""Free Lie algebras on a finite generating set, truncated by degree.

Hall basis elements are kept together with their expansion into words of the
tensor algebra, so re-expressing an arbitrary Lie element in the Hall basis
is plain linear algebra per degree: no rewriting system, no termination
argument needed.  Presented (finitely related) quotients are computed from
the exact intersection of the relation ideal with the truncated space.
"""

from __future__ import annotations

from typing import Sequence

from .lie import LieAlgebra, TripleError
from .linalg import Q, reduce_against, rref

Word = tuple[int, ...]
WordPoly = dict[Word, Q]


def _word_mul(a: WordPoly, b: WordPoly) -> WordPoly:
    out: WordPoly = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            v = out.get(w, Q(0)) + ca * cb
            if v:
                out[w] = v
            elif w in out:
                del out[w]
    return out


def _word_commutator(a: WordPoly, b: WordPoly) -> WordPoly:
    out = _word_mul(a, b)
    for w, c in _word_mul(b, a).items():
        v = out.get(w, Q(0)) - c
        if v:
            out[w] = v
        elif w in out:
            del out[w]
    return out


class HallElement:
    __slots__ = ("index", "degree", "left", "right", "words")

    def __init__(self, index, degree, left, right, words):
        self.index = index
        self.degree = degree
        self.left = left    # index of left factor, -1 for a generator
        self.right = right
        self.words = words  # expansion in the tensor algebra


class FreeLie:
    """Hall basis of the free Lie algebra on n_gens generators, degrees <= cap.

    The Hall set uses the classical condition: [u, v] is basic iff u < v and
    v is a generator or the left factor of v is <= u, with elements ordered
    by (degree, creation index).  Element indices do not depend on the cap,
    so coordinate dictionaries stay valid across instances with different
    caps.  Per-degree dimensions match the Witt formula (tested).
    """

    def __init__(self, n_gens: int, cap: int):
        self.n_gens = n_gens
        self.cap = cap
        self.elements: list[HallElement] = []
        self.by_degree: dict[int, list[int]] = {d: [] for d in range(1, cap + 1)}
        for i in range(n_gens):
            self._add(1, -1, -1, {(i,): Q(1)})
        for d in range(2, cap + 1):
            for j, v in enumerate(list(self.elements)):
                for i, u in enumerate(list(self.elements)):
                    if i >= j:
                        continue
                    if u.degree + v.degree != d:
                        continue
                    if v.left != -1 and v.left > i:
                        continue
                    self._add(d, i, j, _word_commutator(u.words, v.words))
        self._degree_solvers: dict[int, tuple] = {}

    def _add(self, degree, left, right, words):
        el = HallElement(len(self.elements), degree, left, right, words)
        self.elements.append(el)
        self.by_degree[degree].append(el.index)

    def dims(self) -> list[int]:
        return [len(self.by_degree[d]) for d in range(1, self.cap + 1)]

    def describe(self, idx: int) -> str:
        el = self.elements[idx]
        if el.left == -1:
            return f"g{idx}"
        return f"[{self.describe(el.left)},{self.describe(el.right)}]"

    def _solver(self, degree: int):
        """RREF data for expressing degree-d word polynomials in the Hall basis."""
        if degree in self._degree_solvers:
            return self._degree_solvers[degree]
        idxs = self.by_degree[degree]
        words = sorted({w for i in idxs for w in self.elements[i].words})
        wpos = {w: k for k, w in enumerate(words)}
        cols = len(words)
        aug = []
        for row_i, i in enumerate(idxs):
            row = [Q(0)] * (cols + len(idxs))
            for w, c in self.elements[i].words.items():
                row[wpos[w]] = c
            row[cols + row_i] = Q(1)
            aug.append(row)
        rows, pivots = rref(aug)
        self._degree_solvers[degree] = (idxs, wpos, cols, rows, pivots)
        return self._degree_solvers[degree]

    def express(self, poly: WordPoly) -> dict[int, Q]:
        """Hall coordinates of a Lie element given as a word polynomial.

        Components of degree above the cap are dropped; anything left that is
        not a Lie element raises.
        """
        out: dict[int, Q] = {}
        by_deg: dict[int, WordPoly] = {}
        for w, c in poly.items():
            if len(w) > self.cap or c == 0:
                continue
            by_deg.setdefault(len(w), {})[w] = c
        for degree, part in by_deg.items():
            idxs, wpos, cols, rows, pivots = self._solver(degree)
            vec = [Q(0)] * (cols + len(idxs))
            for w, c in part.items():
                if w not in wpos:
                    raise TripleError("word polynomial is not in the Lie subspace")
                vec[wpos[w]] = c
            res = reduce_against(tuple(vec), rows, pivots)
            if any(res[:cols]):
                raise TripleError("word polynomial is not in the Lie subspace")
            for k, i in enumerate(idxs):
                if res[cols + k]:
                    out[i] = -res[cols + k]
        return out

    def words_of(self, coords: dict[int, Q]) -> WordPoly:
        out: WordPoly = {}
        for i, c in coords.items():
            for w, cw in self.elements[i].words.items():
                v = out.get(w, Q(0)) + c * cw
                if v:
                    out[w] = v
                elif w in out:
                    del out[w]
        return out

    def bracket(self, a: dict[int, Q], b: dict[int, Q]) -> dict[int, Q]:
        """Bracket of two Hall-coordinate vectors, truncated at cap."""
        pa, pb = self.words_of(a), self.words_of(b)
        return self.express(_word_commutator(pa, pb))

    def bracket_with_generator(self, gen: int, a: dict[int, Q]) -> dict[int, Q]:
        return self.bracket({gen: Q(1)}, a)


class PresentedLie:
    """Degree-truncated quotient of a free Lie algebra by relations.

    Relations may be inhomogeneous (their components graded by generator
    count).  The relation ideal is intersected with the span of Hall
    elements of degree <= cap: generator-bracket chains of the relations are
    computed with enough headroom that leading terms just above the cap can
    still cancel, and only chains whose full support fits below the working
    cap enter the elimination, so everything quotiented out genuinely lies
    in the ideal.  Kernel rows are echelonized highest-degree-first, making
    each row a rewrite of its top Hall monomial into lower-degree terms.
    """

    def __init__(self, n_gens: int, cap: int, relations: Sequence[dict[int, Q]] = ()):
        self.n_gens = n_gens
        self.cap = cap
        base = FreeLie(n_gens, cap)
        rel_list = []
        spreads = []
        for r in relations:
            r = {i: Q(c) for i, c in r.items() if c}
            if not r:
                continue
            degs = [base.elements[i].degree for i in r]
            if max(degs) > cap:
                raise TripleError("relation reaches beyond the degree cap")
            spreads.append(max(degs) - min(degs))
            rel_list.append(r)
        headroom = max(spreads, default=0)
        self.free = base if headroom == 0 else FreeLie(n_gens, cap + headroom)
        self.work_cap = cap + headroom
        n_hall = len(self.free.elements)
        # Column order: degree descending, then Hall index; pivots land on the
        # highest-degree monomial of each kernel element.
        self.col_order = sorted(
            range(n_hall), key=lambda i: (-self.free.elements[i].degree, i)
        )
        self.col_pos = {i: k for k, i in enumerate(self.col_order)}
        self.kernel_rows, self.kernel_pivots = rref(self._relation_kernel(rel_list))
        pivset = {self.col_order[p] for p in self.kernel_pivots}
        self.basis = [
            i
            for i in range(n_hall)
            if i not in pivset and self.free.elements[i].degree <= cap
        ]
        self.basis_pos = {i: k for k, i in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._brackets: dict[tuple[int, int], dict[int, Q]] = {}

    def _relation_kernel(self, relations):
        if not relations:
            return []
        free = self.free

        def spread_info(r):
            degs = [free.elements[i].degree for i in r]
            return min(degs), max(degs)

        chains: list[dict[int, Q]] = []
        frontier: list[tuple[dict[int, Q], int]] = []
        for r in relations:
            lo, hi = spread_info(r)
            if hi <= self.work_cap:
                chains.append(r)
            frontier.append((r, hi - lo))
        while frontier:
            nxt = []
            for r, spread in frontier:
                lo, _ = spread_info(r)
                if lo + 1 + spread > self.work_cap:
                    continue  # every descendant would be truncated
                for gen in range(self.n_gens):
                    br = free.bracket_with_generator(gen, r)
                    br = {i: c for i, c in br.items() if c}
                    if br:
                        chains.append(br)
                        nxt.append((br, spread))
            frontier = nxt
        n_hall = len(free.elements)
        mat = []
        for r in chains:
            row = [Q(0)] * n_hall
            for i, c in r.items():
                row[self.col_pos[i]] = c
            mat.append(row)
        rows, pivots = rref(mat)
        # A pivot inside the degree-<=cap block means the whole row lives
        # there (columns are ordered by descending degree); rows pivoted in
        # the high block are consequences invisible below the cap.
        over = sum(1 for i in self.col_order if free.elements[i].degree > self.cap)
        return [list(row) for row, p in zip(rows, pivots) if p >= over]

    def reduce(self, coords: dict[int, Q]) -> dict[int, Q]:
        """Normal form: eliminate kernel pivots, keep surviving basis support."""
        n_hall = len(self.free.elements)
        vec = [Q(0)] * n_hall
        for i, c in coords.items():
            vec[self.col_pos[i]] = vec[self.col_pos[i]] + c
        res = reduce_against(tuple(vec), self.kernel_rows, self.kernel_pivots)
        out = {}
        for k, v in enumerate(res):
            if v:
                i = self.col_order[k]
                if self.free.elements[i].degree > self.cap or i not in self.basis_pos:
                    raise TripleError(
                        "bracket does not close inside the truncated quotient"
                    )
                out[i] = v
        return out

    def bracket_basis(self, i: int, j: int) -> dict[int, Q]:
        bi, bj = self.basis[i], self.basis[j]
        if self.free.elements[bi].degree + self.free.elements[bj].degree > self.work_cap:
            raise TripleError("bracket does not close inside the truncated quotient")
        key = (i, j)
        if key not in self._brackets:
            raw = self.free.bracket({bi: Q(1)}, {bj: Q(1)})
            self._brackets[key] = self.reduce(raw)
        return self._brackets[key]

    def as_lie_algebra(self) -> LieAlgebra:
        brackets = {}
        for i in range(self.dim):
            for j in range(self.dim):
                w = self.bracket_basis(i, j)
                brackets[(i, j)] = tuple(w.get(b, Q(0)) for b in self.basis)
        labels = [self.free.describe(b) for b in self.basis]
        return LieAlgebra(labels, brackets)

    def generator_collapsed(self) -> bool:
        """True when some combination of generators died in the quotient."""
        degree_one = [i for i in self.basis if self.free.elements[i].degree == 1]
        return len(degree_one) < self.n_gens

    def dims_per_degree(self) -> list[int]:
        out = [0] * self.cap
        for i in self.basis:
            out[self.free.elements[i].degree - 1] += 1
        return out


def free_lie_hall(n_gens: int, cap: int) -> PresentedLie:
    """Free (relation-less) truncated Lie algebra with its Hall basis."""
    return PresentedLie(n_gens, cap, [])


def presented_quotient(
    n_gens: int, cap: int, relations: Sequence[dict[int, Q]]
) -> PresentedLie:
    return PresentedLie(n_gens, cap, relations)
