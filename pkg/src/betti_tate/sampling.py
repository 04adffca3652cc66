"""Seeded random finitely presented quiver representations satisfying all relations."""

from __future__ import annotations

import random
from fractions import Fraction

from .laurent import LaurentMatrix, LaurentPoly, Y
from .modules import FPModule, ModuleMap
from .strat_quiver import QuiverPresentation, QuiverRep

__all__ = ["random_poly", "random_module", "random_rep"]


def random_poly(rng: random.Random, max_terms: int = 2, exp_range: int = 2) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        terms[rng.randint(-exp_range, exp_range)] = rng.randint(-3, 3)
    return LaurentPoly(terms)


def random_module(rng: random.Random, max_gens: int = 2, terminal: bool = False) -> FPModule:
    g = rng.randint(1 if terminal else 0, max_gens)
    if terminal:
        cols = [[Y - 1 if i == j else 0 for i in range(g)] for j in range(g)]
        cols += [[rng.randint(-2, 2) for _ in range(g)] for _ in range(rng.randint(0, 1))]
    else:
        pool = [Y - 1, Y - 1, Y - 2, (Y - 1) ** 2, (Y - 1) * (Y + 1)]
        cols = []
        for _ in range(rng.randint(0, g)):
            if rng.random() < 0.7:
                j = rng.randrange(g)
                cols.append([rng.choice(pool) if i == j else 0 for i in range(g)])
            else:
                cols.append([random_poly(rng) for _ in range(g)])
    return FPModule(g, LaurentMatrix.from_columns(cols, g))


def _left_nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Basis of {p : p A = 0} for the n x m rational matrix A given by rows."""
    m = len(rows[0]) if rows else 0
    # p A = 0  <=>  A^T p^T = 0
    At = [[Fraction(rows[i][j]) for i in range(n)] for j in range(m)]
    pivots, r = [], 0
    for c in range(n):
        piv = next((i for i in range(r, m) if At[i][c]), None)
        if piv is None:
            continue
        At[r], At[piv] = At[piv], At[r]
        inv = 1 / At[r][c]
        At[r] = [v * inv for v in At[r]]
        for i in range(m):
            if i != r and At[i][c]:
                f = At[i][c]
                At[i] = [a - f * b for a, b in zip(At[i], At[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -At[i][free]
        basis.append(v)
    return basis


def _random_arrow(rng: random.Random, src: FPModule, tgt: FPModule) -> ModuleMap:
    """x = Z H P with P killing A(1) and Z spanning ker(y - 1) on the target.

    P A is then divisible by y - 1 and Z is killed by it, so x is well defined
    and both compositions with y - 1 vanish.
    """
    g, h = src.gens, tgt.gens
    if not g or not h:
        return ModuleMap(src, tgt, LaurentMatrix.zeros(h, g))
    A1 = src.relations.evaluate(1) if src.relations.ncols else [[] for _ in range(g)]
    P = _left_nullspace(A1, g)
    Z = tgt.multiplication(Y - 1).kernel_inclusion().matrix
    if not P or not Z.ncols or rng.random() < 0.1:
        return ModuleMap(src, tgt, LaurentMatrix.zeros(h, g))
    H = LaurentMatrix([[rng.randint(-2, 2) for _ in P] for _ in range(Z.ncols)], Z.ncols, len(P))
    x = Z @ H @ LaurentMatrix(P, len(P), g)
    return ModuleMap(src, tgt, x)


def random_rep(seed: int, k: int | None = None, l: int | None = None, max_gens: int = 2) -> QuiverRep:
    rng = random.Random(seed)
    k = rng.randint(-2, 2) if k is None else k
    l = rng.randint(0, 3) if l is None else l
    nodes = [random_module(rng, max_gens) for _ in range(l)] + [random_module(rng, max_gens, terminal=True)]
    arrows = [_random_arrow(rng, nodes[i], nodes[i + 1]) for i in range(l)]
    return QuiverRep(QuiverPresentation(k, l), nodes, arrows)
