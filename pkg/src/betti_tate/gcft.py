"""Rank-one local systems on the loop group acting on both sides of the equivalence.

A rank-one local system on the loop group of C^* is indexed by a component
n (an integer) and a monodromy a (a nonzero rational).  On the automorphic
side component n shifts valuations by n and monodromy a extracts the
generalized a-eigenpart of the loops; on the spectral side these are the
twist by O(n) and the derived tensor product with the skyscraper at y = a.
The eigenpart is modelled by the two-term Koszul cone of (y - a).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .laurent import LaurentMatrix, Y, rational_from_json, rational_to_json
from .modules import (
    FPModule,
    FreeComplex,
    ModuleMap,
    cycles_and_cohomology,
    induced_cohomology_map,
)
from .mirror import apply_F, diagrams_equal, stabilize
from .nodal_graded import WindowDiagram, diagram_iso_check, twist
from .report import VerificationReport
from .snf import image_basis, solve
from .strat_quiver import QuiverRep, check_rep, pushforward_i, translate_rep

__all__ = [
    "RankOneLocal",
    "DerivedPair",
    "conv_shift",
    "shift_automorphic",
    "conv_monodromy",
    "spectral_tensor_skyscraper",
    "compare_derived",
    "verify_intertwine",
]


@dataclass(frozen=True)
class RankOneLocal:
    component: int
    monodromy: Fraction

    def __post_init__(self):
        object.__setattr__(self, "monodromy", Fraction(self.monodromy))
        if not self.monodromy:
            raise ValueError("monodromy must be nonzero")

    def to_json(self) -> dict:
        return {"component": self.component, "monodromy": rational_to_json(self.monodromy)}

    @classmethod
    def from_json(cls, data) -> "RankOneLocal":
        if not isinstance(data, dict):
            raise ValueError("RankOneLocal JSON must be an object")
        n = data.get("component")
        if not isinstance(n, int) or isinstance(n, bool):
            raise ValueError("component must be an integer")
        return cls(n, rational_from_json(data.get("monodromy")))


@dataclass(frozen=True)
class DerivedPair:
    h_minus1: WindowDiagram
    h0: WindowDiagram
    local: RankOneLocal

    def to_json(self) -> dict:
        return {"local": self.local.to_json(), "h_minus1": self.h_minus1.to_json(),
                "h0": self.h0.to_json()}


def conv_shift(M: WindowDiagram, n: int) -> WindowDiagram:
    """Component-n convolution; on the shared data model it is the twist by n."""
    return twist(M, n)


def shift_automorphic(V: QuiverRep, n: int) -> QuiverRep:
    """n-fold pushforward X_k -> X_{k-1}, each followed by relabelling along t.

    Every step prepends a zero vertex and moves the old vertex j to j+1.  For
    n < 0 the inverse relabelling is applied directly, as in the colimit.
    """
    if n < 0:
        return translate_rep(V, n)
    for _ in range(n):
        V = translate_rep(pushforward_i(V), 1)
    return V


def _eigenvalue(a, inverse_orientation: bool) -> Fraction:
    a = Fraction(a)
    if not a:
        raise ValueError("monodromy must be nonzero")
    return 1 / a if inverse_orientation else a


# -- route 1: kernel and cokernel of the action of y - a -------------------------------


def _koszul_by_action(M: WindowDiagram, a: Fraction):
    if M.is_empty:
        return M, M, {}
    kers, cokers, incs = [], [], {}
    for d in range(M.lo, M.hi + 1):
        f = M.piece(d).multiplication(Y - a)
        incs[d] = f.kernel_inclusion()
        kers.append(f.kernel())
        cokers.append(f.cokernel())
    kx, cx = [], []
    for i, d in enumerate(range(M.lo, M.hi)):
        x = M.xmap(d)
        lifted = (x @ incs[d]).lift_through(incs[d + 1])
        if lifted is None:  # pragma: no cover - x commutes with y
            raise ArithmeticError("x does not preserve the eigen-kernel")
        kx.append(lifted)
        cx.append(ModuleMap(cokers[i], cokers[i + 1], x.matrix))
    K = WindowDiagram(M.lo, M.hi, tuple(kers), tuple(kx))
    Q = WindowDiagram(M.lo, M.hi, tuple(cokers), tuple(cx))
    return K, Q, incs


def conv_monodromy(M: WindowDiagram, a, inverse_orientation: bool = False) -> DerivedPair:
    """Convolution with the monodromy-a local system on component 0."""
    a_eff = _eigenvalue(a, inverse_orientation)
    K, Q, _ = _koszul_by_action(M, a_eff)
    return DerivedPair(K.normalized(), Q.normalized(), RankOneLocal(0, Fraction(a)))


# -- route 2: total complex of (presentation) (x) (Koszul complex) ---------------------


def _tensor_complex(P: FPModule, a: Fraction) -> tuple[FreeComplex, LaurentMatrix]:
    """Total complex of [R^r -A-> R^g] (x) [R -(y-a)-> R], positions -2, -1, 0.

    A is replaced by a column basis of its span, so the presentation is a
    genuine free resolution.
    """
    g = P.gens
    A = image_basis(P.relations) if P.relations.ncols else LaurentMatrix.zeros(g, 0)
    r = A.ncols
    t = Y - a
    d2 = A.vstack(LaurentMatrix.scalar(r, -t))
    d1 = LaurentMatrix.scalar(g, t).hstack(A)
    return FreeComplex((r, g + r, g), (d2, d1)), A


def _koszul_by_tensor(M: WindowDiagram, a: Fraction):
    if M.is_empty:
        return M, M, {}
    data = {d: _tensor_complex(M.piece(d), a) for d in range(M.lo, M.hi + 1)}
    cyc = {d: cycles_and_cohomology(C) for d, (C, _) in data.items()}
    for d, parts in cyc.items():
        if not parts[0][1].is_zero():  # pragma: no cover - the presentation is a resolution
            raise ArithmeticError(f"spurious H^-2 in degree {d}")
    h1 = [cyc[d][1][1] for d in range(M.lo, M.hi + 1)]
    h0 = [cyc[d][2][1] for d in range(M.lo, M.hi + 1)]
    m1, m0 = [], []
    for d in range(M.lo, M.hi):
        X = M.xmap(d).matrix
        (C, A), (D, B) = data[d], data[d + 1]
        lam = solve(B, X @ A) if A.ncols else LaurentMatrix.zeros(B.ncols, 0)
        if lam is None:
            raise ArithmeticError(f"x_{d} does not lift to the resolutions")
        m1.append(induced_cohomology_map(C, D, LaurentMatrix.block_diag([X, lam]), 1))
        m0.append(induced_cohomology_map(C, D, X, 2))
    H1 = WindowDiagram(M.lo, M.hi, tuple(h1), tuple(m1))
    H0 = WindowDiagram(M.lo, M.hi, tuple(h0), tuple(m0))
    return H1, H0, cyc


def spectral_tensor_skyscraper(M: WindowDiagram, a, inverse_orientation: bool = False) -> DerivedPair:
    """Derived tensor product with the weight-0 skyscraper at y = a."""
    a_eff = _eigenvalue(a, inverse_orientation)
    H1, H0, _ = _koszul_by_tensor(M, a_eff)
    return DerivedPair(H1.normalized(), H0.normalized(), RankOneLocal(0, Fraction(a)))


def compare_derived(M: WindowDiagram, N: WindowDiagram, a) -> VerificationReport:
    """Koszul-by-action on M against tensor-by-Koszul on N (same data), via explicit isomorphisms.

    The witness on H^-1 sends a cycle (u, w) of the total complex to u, which is
    killed by y - a; on H^0 both sides are quotients of the same free module.
    """
    a = Fraction(a)
    rep = VerificationReport("koszul-compare", (M.lo, M.hi))
    if (M.lo, M.hi) != (N.lo, N.hi) or M.pieces != N.pieces:
        rep.fail("inputs differ")
        return rep
    K, Q, incs = _koszul_by_action(M, a)
    H1, H0, cyc = _koszul_by_tensor(N, a)
    if M.is_empty:
        return rep
    fam1, fam0 = {}, {}
    for d in range(M.lo, M.hi + 1):
        g = M.piece(d).gens
        Z = cyc[d][1][0]
        U = Z.select_rows(range(g))
        to_k = ModuleMap(H1.piece(d), M.piece(d), U).lift_through(incs[d])
        if to_k is None:
            rep.fail(f"H^-1 cycles in degree {d} are not eigenvectors")
            return rep
        fam1[d] = ModuleMap(H1.piece(d), K.piece(d), to_k.matrix)
        fam0[d] = ModuleMap(H0.piece(d), Q.piece(d), LaurentMatrix.identity(g))
    for label, src, tgt, fam in (("H^-1", H1, K, fam1), ("H^0", H0, Q, fam0)):
        chk = diagram_iso_check(src, tgt, fam)
        rep.witnesses.append({"cohomology": label, "pass": chk.passed})
        rep.require(chk.passed, f"{label}: {chk.failures}")
        rep.tables[label] = [src.piece(d).describe() for d in range(M.lo, M.hi + 1)]
    return rep


def verify_intertwine(V: QuiverRep, a, n: int) -> VerificationReport:
    a = Fraction(a)
    rep = VerificationReport("gcft", (V.k, V.l))
    rep.tables["local"] = RankOneLocal(n, a).to_json()
    chk = check_rep(V)
    if not chk.passed:
        rep.fail(f"invalid representation: {chk.failures}")
        return rep
    stab = stabilize(V).diagram
    FV = apply_F(V)

    # (i) component n: valuation shift vs twist
    shifted = apply_F(shift_automorphic(V, n))
    sq = diagrams_equal(shifted, twist(FV, n), name="shift")
    rep.witnesses.append({"part": "shift", "pass": sq.passed})
    rep.require(sq.passed, f"shift by {n}: {sq.failures}")

    # (ii) monodromy a, composed with the shift
    aut = conv_shift_pair(conv_monodromy(stab, a), n)
    aut_other = conv_monodromy(conv_shift(stab, n), a)
    rep.require(_pair_key(aut) == _pair_key(aut_other), "monodromy does not commute with the shift")
    spec = spectral_tensor_skyscraper(twist(FV, n), a)
    for label, x, yv in (("h_minus1", aut.h_minus1, spec.h_minus1), ("h0", aut.h0, spec.h0)):
        rep.require(x.is_valid() and yv.is_valid(), f"{label}: invalid output diagram")
    cmp = compare_derived(conv_shift(stab, n), twist(FV, n), a)
    rep.witnesses.append({"part": "monodromy", "pass": cmp.passed})
    rep.require(cmp.passed, f"monodromy {a}: {cmp.failures}")
    rep.tables["h_minus1"] = aut.h_minus1.describe()
    rep.tables["h0"] = aut.h0.describe()
    return rep


def conv_shift_pair(P: DerivedPair, n: int) -> DerivedPair:
    return DerivedPair(conv_shift(P.h_minus1, n), conv_shift(P.h0, n),
                       RankOneLocal(P.local.component + n, P.local.monodromy))


def _pair_key(P: DerivedPair):
    return P.h_minus1.to_json(), P.h0.to_json()
