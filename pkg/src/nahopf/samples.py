"""Ready-made algebras, triples and triple-algebra structures.

These are the worked examples used across the test suite and handy as CLI
input generators: the rank-one simple algebra with its reductive splitting,
the one-dimensional-complement affine algebra, the Heisenberg algebra, and
a solvable algebra whose splitting is hyporeductive but not reductive (its
normalizer does not contain s), which exercises the nontrivial circle and
bullet machinery.
"""

from __future__ import annotations

from fractions import Fraction

from .lie import LieAlgebra, Subspace, Triple
from .linalg import Q, unit_vector

from .hta import HTA


def sl2() -> LieAlgebra:
    # basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
    return LieAlgebra(
        ["h", "e", "f"],
        {
            (0, 1): (Q(0), Q(2), Q(0)),
            (0, 2): (Q(0), Q(0), Q(-2)),
            (1, 2): (Q(1), Q(0), Q(0)),
        },
    )


def sl2_triple() -> Triple:
    g = sl2()
    return Triple(
        g,
        Subspace(3, [unit_vector(3, 0)]),
        Subspace(3, [unit_vector(3, 1), unit_vector(3, 2)]),
    )


def sl2_triple_zeta0() -> Triple:
    g = sl2()
    return Triple(
        g,
        Subspace(3, [unit_vector(3, 0)]),
        Subspace(3, [unit_vector(3, 1), unit_vector(3, 2)]),
        zeta=[(unit_vector(3, 0), (Q(0), Q(0), Q(0)))],
    )


def aff1() -> LieAlgebra:
    # basis (x, y): [x, y] = y
    return LieAlgebra(["x", "y"], {(0, 1): (Q(0), Q(1))})


def aff1_triple() -> Triple:
    g = aff1()
    return Triple(g, Subspace(2, [unit_vector(2, 0)]), Subspace(2, [unit_vector(2, 1)]))


def heisenberg() -> LieAlgebra:
    # basis (z, x, y): [x, y] = z, z central
    return LieAlgebra(["z", "x", "y"], {(1, 2): (Q(1), Q(0), Q(0))})


def heisenberg_triple() -> Triple:
    g = heisenberg()
    return Triple(
        g,
        Subspace(3, [unit_vector(3, 0)]),
        Subspace(3, [unit_vector(3, 1), unit_vector(3, 2)]),
    )


def solv3() -> LieAlgebra:
    # basis (d, a, b): [d, b] = -d, [a, b] = d + a, [d, a] = 0.
    # The splitting s = <d>, c = <a, b> is hyporeductive (the normalizer is
    # spanned by d + a and b) but not reductive, and zeta(d) = a makes it
    # pseudoreductive.
    return LieAlgebra(
        ["d", "a", "b"],
        {
            (0, 2): (Q(-1), Q(0), Q(0)),
            (1, 2): (Q(1), Q(1), Q(0)),
        },
    )


def solv3_triple(with_zeta: bool = True) -> Triple:
    g = solv3()
    zeta = None
    if with_zeta:
        zeta = [(unit_vector(3, 0), unit_vector(3, 1))]
    return Triple(
        g,
        Subspace(3, [unit_vector(3, 0)]),
        Subspace(3, [unit_vector(3, 1), unit_vector(3, 2)]),
        zeta=zeta,
    )


def solv3_h_complement() -> Subspace:
    """Complement of c inside the normalizer for the solvable example: the
    line through d + a.  Extracting the triple algebra along it produces a
    nonzero star product."""
    return Subspace(3, [(Q(1), Q(1), Q(0))])


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra([f"t{i}" for i in range(n)], {})


def hta_zero(dim: int) -> HTA:
    return HTA.from_tables(
        [f"a{i}" for i in range(dim)], dot={}, star={}, ternary={}
    )


def hta_traceless_ternary() -> HTA:
    """Two-dimensional complement, zero binary products, ternary action with
    matrix diag(1, -1): the enveloping algebra is three-dimensional simple."""
    return HTA.from_tables(
        ["a", "b"],
        dot={},
        star={},
        ternary={
            (0, 0, 1): (Q(1), Q(0)),
            (1, 0, 1): (Q(0), Q(-1)),
        },
    )


def hta_dot_only() -> HTA:
    """Two-dimensional complement with dot(a, b) = a and no other products."""
    return HTA.from_tables(
        ["a", "b"],
        dot={(0, 1): (Q(1), Q(0))},
        star={},
        ternary={},
    )
