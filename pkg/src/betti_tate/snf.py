"""Smith normal form over Q[y, y^-1] and the linear solvers built on it."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .laurent import ONE, ZERO, LaurentMatrix, LaurentPoly

__all__ = [
    "SmithForm",
    "smith_form",
    "snf",
    "solve",
    "kernel_basis",
    "image_basis",
    "is_smith_form",
]


@dataclass(frozen=True)
class SmithForm:
    S: LaurentMatrix
    U: LaurentMatrix
    V: LaurentMatrix
    U_inv: LaurentMatrix
    rank: int

    @property
    def diagonal(self) -> tuple[LaurentPoly, ...]:
        return tuple(self.S[i, i] for i in range(self.rank))


def _key(p: LaurentPoly) -> tuple[int, int]:
    return (p.nterms(), p.spread())


@lru_cache(maxsize=8192)
def smith_form(M: LaurentMatrix) -> SmithForm:
    """U @ M @ V == S with U, V unimodular and S diagonal, d1 | d2 | ..., entries normalized."""
    m, n = M.shape
    A = M.to_lists()
    U = LaurentMatrix.identity(m).to_lists()
    Ui = LaurentMatrix.identity(m).to_lists()
    V = LaurentMatrix.identity(n).to_lists()

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i != j:
            for r in A:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b if b else a for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b if b else a for a, b in zip(U[dst], U[src])]
        for r in Ui:
            if r[dst]:
                r[src] = r[src] - q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for r in A:
            if r[src]:
                r[dst] = r[dst] + q * r[src]
        for r in V:
            if r[src]:
                r[dst] = r[dst] + q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or _key(a) < best[0]):
                    best = (_key(a), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q, r = A[i][t].divmod(p)
                    add_row(i, t, -q)
                    clean = clean and not r
            for j in range(t + 1, n):
                if A[t][j]:
                    q, r = A[t][j].divmod(p)
                    add_col(j, t, -q)
                    clean = clean and not r
            if not clean:
                # a remainder of smaller spread is left in row or column t
                cand = [(A[i][t].spread(), 0, i) for i in range(t + 1, m) if A[i][t]]
                cand += [(A[t][j].spread(), 1, j) for j in range(t + 1, n) if A[t][j]]
                _, kind, idx = min(cand)
                if kind == 0:
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][j] and not p.divides(A[i][j]) for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, ONE)
        t += 1

    rank = t
    for i in range(rank):
        u = A[i][i].normalizing_unit()
        if u != ONE:
            A[i] = [u * a for a in A[i]]
            U[i] = [u * a for a in U[i]]
            uinv = u.unit_inverse()
            for r in Ui:
                r[i] = r[i] * uinv
    return SmithForm(
        S=LaurentMatrix(A, m, n),
        U=LaurentMatrix(U, m, m),
        V=LaurentMatrix(V, n, n),
        U_inv=LaurentMatrix(Ui, m, m),
        rank=rank,
    )


def snf(M: LaurentMatrix) -> tuple[LaurentMatrix, LaurentMatrix, LaurentMatrix]:
    sf = smith_form(M)
    return sf.S, sf.U, sf.V


def is_smith_form(S: LaurentMatrix) -> bool:
    m, n = S.shape
    for i in range(m):
        for j in range(n):
            if i != j and S[i, j]:
                return False
    diag = [S[i, i] for i in range(min(m, n))]
    seen_zero = False
    for d in diag:
        if not d:
            seen_zero = True
        elif seen_zero or d != d.normalized():
            return False
    nz = [d for d in diag if d]
    return all(a.divides(b) for a, b in zip(nz, nz[1:]))


def solve(M: LaurentMatrix, B: LaurentMatrix) -> LaurentMatrix | None:
    """Some X with M @ X == B, or None when no solution exists over R."""
    if M.nrows != B.nrows:
        raise ValueError(f"row mismatch: {M.shape} vs {B.shape}")
    sf = smith_form(M)
    UB = sf.U @ B
    n = M.ncols
    Z = [[ZERO] * B.ncols for _ in range(n)]
    for j in range(B.ncols):
        for i in range(M.nrows):
            v = UB[i, j]
            if i < sf.rank:
                q, r = v.divmod(sf.S[i, i])
                if r:
                    return None
                Z[i][j] = q
            elif v:
                return None
    return sf.V @ LaurentMatrix(Z, n, B.ncols)


def kernel_basis(M: LaurentMatrix) -> LaurentMatrix:
    """Columns form an R-basis of {v : M v = 0}."""
    sf = smith_form(M)
    return sf.V.select_columns(range(sf.rank, M.ncols))


def image_basis(M: LaurentMatrix) -> LaurentMatrix:
    """Columns form an R-basis of the column span of M."""
    sf = smith_form(M)
    cols = [[sf.U_inv[i, t] * sf.S[t, t] for i in range(M.nrows)] for t in range(sf.rank)]
    return LaurentMatrix.from_columns(cols, M.nrows)
