"""Free unital non-associative algebra on indexed generators.

Monomials are full binary trees stored as nested tuples: a leaf is a
generator index, an inner node is a pair (left, right), and None is the unit
monomial.  The coalgebra structure is the one determined by making every
generator primitive, and on top of it live the triple-product recursion and
the symmetrized multilinear operations that turn any algebra's primitive
part into a Sabinin-type structure.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

Q = Fraction

Monomial = None | int | tuple


def tree_degree(t: Monomial) -> int:
    if t is None:
        return 0
    if isinstance(t, int):
        return 1
    return tree_degree(t[0]) + tree_degree(t[1])


def _tree_flat(t: Monomial) -> tuple[int, ...]:
    if t is None:
        return ()
    if isinstance(t, int):
        return (0, t)
    return (1,) + _tree_flat(t[0]) + _tree_flat(t[1])


def tree_key(t: Monomial):
    """Degree-lexicographic key on the preorder linearization."""
    return (tree_degree(t), _tree_flat(t))


def tree_mul(a: Monomial, b: Monomial) -> Monomial:
    if a is None:
        return b
    if b is None:
        return a
    return (a, b)


def tree_str(t: Monomial, names: Sequence[str] | None = None) -> str:
    if t is None:
        return "1"
    if isinstance(t, int):
        return names[t] if names else f"x{t}"
    return f"({tree_str(t[0], names)} {tree_str(t[1], names)})"


class FreeNAElement:
    """Finite Q-linear combination of tree monomials; treated as immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {m: Q(c) for m, c in (terms or {}).items() if c}

    @staticmethod
    def zero() -> "FreeNAElement":
        return FreeNAElement()

    @staticmethod
    def one() -> "FreeNAElement":
        return FreeNAElement({None: Q(1)})

    @staticmethod
    def gen(i: int) -> "FreeNAElement":
        return FreeNAElement({i: Q(1)})

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, Q(0)) + c
            if v:
                out[m] = v
            elif m in out:
                del out[m]
        return FreeNAElement(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FreeNAElement({m: -c for m, c in self.terms.items()})

    def __rmul__(self, scalar):
        scalar = Q(scalar)
        if not scalar:
            return FreeNAElement()
        return FreeNAElement({m: scalar * c for m, c in self.terms.items()})

    def __mul__(self, other):
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tree_mul(ma, mb)
                v = out.get(m, Q(0)) + ca * cb
                if v:
                    out[m] = v
                elif m in out:
                    del out[m]
        return FreeNAElement(out)

    def __eq__(self, other):
        return isinstance(other, FreeNAElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def counit(self) -> Q:
        return self.terms.get(None, Q(0))

    def max_degree(self) -> int:
        return max((tree_degree(m) for m in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=tree_key):
            c = self.terms[m]
            bits.append(f"{c}*{tree_str(m)}")
        return " + ".join(bits)


def na_mul(a: FreeNAElement, b: FreeNAElement) -> FreeNAElement:
    return a * b


@lru_cache(maxsize=None)
def _delta_monomial(t: Monomial) -> tuple:
    if t is None:
        return (((None, None), Q(1)),)
    if isinstance(t, int):
        return (((t, None), Q(1)), ((None, t), Q(1)))
    out: dict = {}
    for (l1, l2), cl in _delta_monomial(t[0]):
        for (r1, r2), cr in _delta_monomial(t[1]):
            key = (tree_mul(l1, r1), tree_mul(l2, r2))
            v = out.get(key, Q(0)) + cl * cr
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return tuple(out.items())


def na_delta(a: FreeNAElement) -> dict:
    """Coproduct as a dictionary (left monomial, right monomial) -> coefficient."""
    out: dict = {}
    for m, c in a.terms.items():
        for key, cd in _delta_monomial(m):
            v = out.get(key, Q(0)) + c * cd
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return out


def associator(u: FreeNAElement, v: FreeNAElement, w: FreeNAElement) -> FreeNAElement:
    return (u * v) * w - u * (v * w)


def commutator(u: FreeNAElement, v: FreeNAElement) -> FreeNAElement:
    return u * v - v * u


def left_normed_product(word: Sequence[int]) -> FreeNAElement:
    out = FreeNAElement.one()
    for i in word:
        out = out * FreeNAElement.gen(i)
    return out


def word_splits(word: tuple[int, ...]):
    """Two-part coproduct of a word of primitives: order-preserving deshuffles."""
    n = len(word)
    for r in range(n + 1):
        for subset in itertools.combinations(range(n), r):
            inset = set(subset)
            left = tuple(word[i] for i in subset)
            right = tuple(word[i] for i in range(n) if i not in inset)
            yield left, right


@lru_cache(maxsize=None)
def p_map(u_word: tuple[int, ...], v_word: tuple[int, ...], z: int) -> FreeNAElement:
    """Triple-product family: the unique solution of the associator recursion
    with the convention that an empty first or second word gives zero."""
    if not u_word or not v_word:
        return FreeNAElement.zero()
    u = left_normed_product(u_word)
    v = left_normed_product(v_word)
    out = associator(u, v, FreeNAElement.gen(z))
    for su, cu in word_splits(u_word):
        for sv, cv in word_splits(v_word):
            if not su and not sv:
                continue
            tail = p_map(cu, cv, z)
            if tail.is_zero():
                continue
            out = out - left_normed_product(su) * left_normed_product(sv) * tail
    return out


@lru_cache(maxsize=None)
def su_bracket(x_word: tuple[int, ...], y: int, z: int) -> FreeNAElement:
    """Multilinear bracket family on primitives, antisymmetric in (y, z)."""
    if not x_word:
        gy, gz = FreeNAElement.gen(y), FreeNAElement.gen(z)
        return -Q(1) * commutator(gy, gz)
    return -Q(1) * p_map(x_word, (y,), z) + p_map(x_word, (z,), y)


def su_phi(
    x_word: tuple[int, ...], y_word: tuple[int, ...], y_last: int
) -> FreeNAElement:
    """Fully symmetrized triple-product family (symmetric in the x block and
    in the y block extended by the final argument)."""
    n, m = len(x_word), len(y_word)
    if n < 1 or m + 1 < 2:
        raise ValueError("both argument blocks must be nonempty")
    ys = y_word + (y_last,)
    total = FreeNAElement.zero()
    for sx in itertools.permutations(range(n)):
        xw = tuple(x_word[i] for i in sx)
        for sy in itertools.permutations(range(m + 1)):
            yw = tuple(ys[i] for i in sy)
            total = total + p_map(xw, yw[:m], yw[m])
    fact = Q(1)
    for k in range(2, n + 1):
        fact *= k
    for k in range(2, m + 2):
        fact *= k
    return Q(1, 1) / fact * total


def evaluate_element(
    elem: FreeNAElement,
    values: Sequence,
    mul: Callable,
    unit,
):
    """Substitute generator values into a free element.

    The target only needs +, scalar * (left), and the supplied product.
    Returns None for the zero element (the caller knows its own zero).
    """
    cache: dict = {}

    def ev(m: Monomial):
        if m is None:
            return unit
        if isinstance(m, int):
            return values[m]
        if m not in cache:
            cache[m] = mul(ev(m[0]), ev(m[1]))
        return cache[m]

    acc = None
    for m, c in sorted(elem.terms.items(), key=lambda kv: tree_key(kv[0])):
        term = c * ev(m)
        acc = term if acc is None else acc + term
    return acc


def evaluate_su_bracket(x_vals: Sequence, y_val, z_val, mul, unit):
    """Evaluate the bracket family on elements of any unital algebra."""
    m = len(x_vals)
    elem = su_bracket(tuple(range(m)), m, m + 1)
    return evaluate_element(elem, list(x_vals) + [y_val, z_val], mul, unit)


def evaluate_su_phi(x_vals: Sequence, y_vals: Sequence, y_last, mul, unit):
    n, m = len(x_vals), len(y_vals)
    elem = su_phi(tuple(range(n)), tuple(range(n, n + m)), n + m)
    return evaluate_element(elem, list(x_vals) + list(y_vals) + [y_last], mul, unit)
