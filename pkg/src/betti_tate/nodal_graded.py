"""Graded modules over B = Q[x, y^-1, y]/(x(y-1)), |x| = 1, |y| = 0, as window diagrams.

A graded B-module is recorded by its graded pieces M_d (modules over
R = Q[y, y^-1]) and the maps x_d : M_d -> M_{d+1}.  A finitely presented one
vanishes in low degrees and has x an isomorphism in high degrees, so it is
stored on a finite window [lo, hi]: zero below lo, and continued by the
identity on M_hi above hi.

Twist convention: O(n) is free of rank one on a generator in degree n, so
degree-0 maps O(a) -> O(b) exist exactly when b <= a (multiplication by x^(a-b)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .laurent import ONE, Y, LaurentMatrix
from .modules import (
    FPModule,
    ModuleMap,
    cohomology,
    direct_sum,
    direct_sum_maps,
    map_ops,
)
from .report import VerificationReport
from .snf import solve

__all__ = [
    "WindowDiagram",
    "GeneratorId",
    "KoszulResult",
    "structure_generator",
    "twist",
    "direct_sum_diagrams",
    "GradedHom",
    "graded_hom",
    "graded_hom_data",
    "recognize_generator",
    "resolution_cochain",
    "ext_truncated",
    "identity_family",
    "diagram_map_check",
    "diagram_iso_check",
    "verify_generation_witness",
]

_TORSION = FPModule.cyclic(Y - 1)


@dataclass(frozen=True)
class WindowDiagram:
    lo: int
    hi: int
    pieces: tuple[FPModule, ...] = ()
    xmaps: tuple[ModuleMap, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "xmaps", tuple(self.xmaps))
        if self.hi < self.lo - 1:
            raise ValueError(f"bad window [{self.lo}, {self.hi}]")
        n = self.hi - self.lo + 1
        if len(self.pieces) != n or len(self.xmaps) != max(n - 1, 0):
            raise ValueError("piece/map counts do not match the window")
        for i, f in enumerate(self.xmaps):
            if f.source.gens != self.pieces[i].gens or f.target.gens != self.pieces[i + 1].gens:
                raise ValueError(f"x-map at degree {self.lo + i} has the wrong shape")

    @classmethod
    def empty(cls, lo: int = 0) -> "WindowDiagram":
        return cls(lo, lo - 1, (), ())

    @property
    def is_empty(self) -> bool:
        return self.hi < self.lo

    def piece(self, d: int) -> FPModule:
        if self.is_empty or d < self.lo:
            return FPModule.zero()
        return self.pieces[min(d, self.hi) - self.lo]

    def xmap(self, d: int) -> ModuleMap:
        """x : M_d -> M_{d+1}, for any integer d."""
        if self.is_empty or d < self.lo - 1:
            z = FPModule.zero()
            return z.identity()
        if d == self.lo - 1:
            return FPModule.zero().zero_map_to(self.pieces[0])
        if d >= self.hi:
            return self.pieces[-1].identity()
        return self.xmaps[d - self.lo]

    def problems(self) -> list[str]:
        out = []
        for d in range(self.lo, self.hi + 1):
            M = self.piece(d)
            if not map_ops(M.multiplication(Y)).is_iso:  # pragma: no cover - y is a unit of R
                out.append(f"y is not invertible on M_{d}")
        for d in range(self.lo, self.hi):
            x = self.xmap(d)
            if not x.is_well_defined():
                out.append(f"x_{d} is not well defined")
                continue
            src, tgt = x.source, x.target
            if not (x @ src.multiplication(Y - 1)).is_zero():
                out.append(f"x_{d} o (y-1) != 0")
            if not (tgt.multiplication(Y - 1) @ x).is_zero():
                out.append(f"(y-1) o x_{d} != 0")
        if not self.is_empty and not self.pieces[-1].killed_by(Y - 1):
            out.append(f"y does not act as the identity on the stable piece M_{self.hi}")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def normalized(self) -> "WindowDiagram":
        """Drop zero pieces on the left and redundant copies of the stable piece on the right."""
        pieces = list(self.pieces)
        xmaps = list(self.xmaps)
        lo = self.lo
        while pieces and pieces[0].is_zero():
            pieces.pop(0)
            if xmaps:
                xmaps.pop(0)
            lo += 1
        while len(pieces) >= 2:
            a, b = pieces[-2], pieces[-1]
            same = a == b and xmaps[-1].matrix.is_identity()
            if same or (a.is_zero() and b.is_zero()):
                pieces.pop()
                xmaps.pop()
            else:
                break
        if not pieces:
            return WindowDiagram.empty(0)
        return WindowDiagram(lo, lo + len(pieces) - 1, tuple(pieces), tuple(xmaps))

    def dims(self, lo: int, hi: int) -> list[int | None]:
        return [self.piece(d).dim_q() for d in range(lo, hi + 1)]

    def describe(self) -> str:
        if self.is_empty:
            return "0"
        return " -> ".join(f"[{d}] {self.piece(d).describe()}" for d in range(self.lo, self.hi + 1)) + " -> (id)"

    def to_json(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "pieces": [m.to_json() for m in self.pieces],
            "xmaps": [f.matrix.to_json() for f in self.xmaps],
        }

    @classmethod
    def from_json(cls, data) -> "WindowDiagram":
        if not isinstance(data, dict):
            raise ValueError("WindowDiagram JSON must be an object")
        try:
            lo, hi = data["lo"], data["hi"]
            pieces = [FPModule.from_json(m) for m in data["pieces"]]
            xm = data["xmaps"]
        except KeyError as exc:
            raise ValueError(f"missing field {exc}") from exc
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (lo, hi)):
            raise ValueError("lo and hi must be integers")
        if not isinstance(xm, list) or len(xm) != max(len(pieces) - 1, 0):
            raise ValueError("need one x-map between consecutive pieces")
        maps = [ModuleMap(pieces[i], pieces[i + 1],
                          LaurentMatrix.from_json(m, nrows=pieces[i + 1].gens, ncols=pieces[i].gens))
                for i, m in enumerate(xm)]
        return cls(lo, hi, tuple(pieces), tuple(maps))


@dataclass(frozen=True)
class GeneratorId:
    kind: str  # "O" or "Occ"
    twist: int = 0

    def __post_init__(self):
        if self.kind not in ("O", "Occ"):
            raise ValueError(f"unknown generator kind {self.kind!r}")

    def __str__(self):
        return f"{self.kind}({self.twist})"


@dataclass(frozen=True)
class KoszulResult:
    """Cohomology diagrams of a derived operation, indexed from -(len-1) to 0."""

    diagrams: tuple[WindowDiagram, ...]

    @property
    def h_minus1(self) -> WindowDiagram:
        return self.diagrams[-2]

    @property
    def h0(self) -> WindowDiagram:
        return self.diagrams[-1]


def structure_generator(g: GeneratorId) -> WindowDiagram:
    n = g.twist
    if g.kind == "O":
        R = FPModule.free(1)
        return WindowDiagram(n, n + 1, (R, _TORSION), (ModuleMap(R, _TORSION, LaurentMatrix.identity(1)),))
    return WindowDiagram(n, n, (_TORSION,), ())


def twist(M: WindowDiagram, n: int) -> WindowDiagram:
    if M.is_empty:
        return WindowDiagram.empty(0)
    return WindowDiagram(M.lo + n, M.hi + n, M.pieces, M.xmaps)


def direct_sum_diagrams(M: WindowDiagram, N: WindowDiagram) -> WindowDiagram:
    if M.is_empty:
        return N
    if N.is_empty:
        return M
    lo, hi = min(M.lo, N.lo), max(M.hi, N.hi)
    pieces = tuple(direct_sum(M.piece(d), N.piece(d)) for d in range(lo, hi + 1))
    xmaps = tuple(direct_sum_maps(M.xmap(d), N.xmap(d)) for d in range(lo, hi))
    return WindowDiagram(lo, hi, pieces, xmaps)


# -- graded Hom ----------------------------------------------------------------------


@dataclass(frozen=True)
class GradedHom:
    """Degree-0 Hom(M, N) as the kernel of one map out of the product of N_d^(gens M_d).

    Coordinates of a family are the concatenation over d = lo..hi of the
    generator-major flattening of each phi_d (see modules.flatten).
    """

    source: WindowDiagram
    target: WindowDiagram
    lo: int
    hi: int
    module: FPModule
    inclusion: ModuleMap

    def coordinates(self, family: Mapping[int, LaurentMatrix]) -> LaurentMatrix | None:
        col = []
        for d in range(self.lo, self.hi + 1):
            phi = family[d]
            h, g = self.target.piece(d).gens, self.source.piece(d).gens
            if phi.shape != (h, g):
                raise ValueError(f"component at degree {d} has shape {phi.shape}, expected {(h, g)}")
            col += [phi[r, i] for i in range(g) for r in range(h)]
        vec = LaurentMatrix([[e] for e in col], len(col), 1)
        amb = self.inclusion.target
        X = solve(self.inclusion.matrix.hstack(amb.relations), vec)
        if X is None:
            return None
        return X.select_rows(range(self.module.gens))

    def family_map(self, src: FPModule, families: Sequence[Mapping[int, LaurentMatrix]]) -> ModuleMap:
        """ModuleMap src -> Hom sending generator i of src to families[i]."""
        cols = []
        for fam in families:
            c = self.coordinates(fam)
            if c is None:
                raise ValueError("family is not a degree-0 morphism")
            cols.append(c.column(0))
        return ModuleMap(src, self.module, LaurentMatrix.from_columns(cols, self.module.gens))


def _scalar_blocks(mat: LaurentMatrix, h: int, transpose: bool) -> LaurentMatrix:
    """Block matrix with blocks mat[i, j] * I_h at (j, i) if transpose else (i, j)."""
    rows, cols = (mat.ncols, mat.nrows) if transpose else (mat.nrows, mat.ncols)
    out = LaurentMatrix.zeros(rows * h, cols * h).to_lists()
    for i in range(mat.nrows):
        for j in range(mat.ncols):
            e = mat[i, j]
            if not e:
                continue
            bi, bj = (j, i) if transpose else (i, j)
            for r in range(h):
                out[bi * h + r][bj * h + r] = e
    return LaurentMatrix(out, rows * h, cols * h)


def graded_hom_data(M: WindowDiagram, N: WindowDiagram) -> GradedHom:
    if M.is_empty:
        z = FPModule.zero()
        return GradedHom(M, N, 0, -1, z, z.identity())
    lo = M.lo
    hi = max(M.hi, N.hi if not N.is_empty else lo, lo)
    degs = list(range(lo, hi + 1))
    g = {d: M.piece(d).gens for d in degs}
    h = {d: N.piece(d).gens for d in degs}
    h[hi + 1] = N.piece(hi + 1).gens
    var_off = {}
    off = 0
    for d in degs:
        var_off[d] = off
        off += g[d] * h[d]
    nvars = off

    # targets: relation blocks then commutation blocks
    tgt_mods: list[FPModule] = []
    eq_blocks = []  # (row offset, list of (var degree, block matrix))
    row = 0
    for d in degs:
        A = M.piece(d).relations
        Nd = N.piece(d)
        r = A.ncols
        if r and g[d] and h[d]:
            eq_blocks.append((row, [(d, _scalar_blocks(A, h[d], transpose=True))]))
        tgt_mods += [Nd] * r
        row += h[d] * r
    for d in degs[:-1]:
        XN = N.xmap(d).matrix
        XM = M.xmap(d).matrix
        Nn = N.piece(d + 1)
        parts = []
        if g[d] and h[d]:
            parts.append((d, LaurentMatrix.block_diag([XN] * g[d])))
        if g[d + 1] and h[d + 1]:
            parts.append((d + 1, -_scalar_blocks(XM, h[d + 1], transpose=True)))
        if parts:
            eq_blocks.append((row, parts))
        tgt_mods += [Nn] * g[d]
        row += h[d + 1] * g[d]
    nrows = row

    mat = LaurentMatrix.zeros(nrows, nvars).to_lists()
    for r0, parts in eq_blocks:
        for d, blk in parts:
            c0 = var_off[d]
            for i in range(blk.nrows):
                for j in range(blk.ncols):
                    if blk[i, j]:
                        mat[r0 + i][c0 + j] = mat[r0 + i][c0 + j] + blk[i, j]
    src_mod = direct_sum(*[N.piece(d) for d in degs for _ in range(g[d])])
    tgt_mod = direct_sum(*tgt_mods)
    psi = ModuleMap(src_mod, tgt_mod, LaurentMatrix(mat, nrows, nvars))
    return GradedHom(M, N, lo, hi, psi.kernel(), psi.kernel_inclusion())


def graded_hom(M: WindowDiagram, N: WindowDiagram) -> FPModule:
    return graded_hom_data(M, N).module


# -- Ext from the periodic resolutions -------------------------------------------------


def recognize_generator(M) -> GeneratorId:
    if isinstance(M, GeneratorId):
        return M
    if isinstance(M, WindowDiagram):
        nm = M.normalized()
        if not nm.is_empty:
            for kind in ("O", "Occ"):
                g = GeneratorId(kind, nm.lo)
                if structure_generator(g).normalized() == nm:
                    return g
    raise ValueError("ext_truncated supports only O(n), Occ(n) as the first argument")


def resolution_cochain(g: GeneratorId, N: WindowDiagram, length: int) -> tuple[list[FPModule], list[ModuleMap]]:
    """Hom(F_., N) in degree 0 for the graded free resolution F_. of g, terms 0..length.

    O(n) is its own resolution.  Occ(n) = B/(y-1) has the 2-periodic resolution
    ... -> O(n+1) -x-> O(n) -(y-1)-> O(n) -> Occ(n); dualizing gives
    N_n -(y-1)-> N_n -x-> N_{n+1} -(y-1)-> N_{n+1} -x-> ...
    """
    n = g.twist
    if g.kind == "O":
        z = FPModule.zero()
        terms = [N.piece(n)] + [z] * length
        maps = [terms[0].zero_map_to(z)] + [z.identity()] * max(length - 1, 0)
        return terms, maps[:length]
    terms = [N.piece(n + i // 2) for i in range(length + 1)]
    maps = []
    for i in range(length):
        d = n + i // 2
        if i % 2 == 0:
            maps.append(N.piece(d).multiplication(Y - 1))
        else:
            maps.append(N.xmap(d))
    return terms, maps


def ext_truncated(M, N: WindowDiagram, depth: int) -> list[FPModule]:
    """Ext^0..Ext^depth(M, N) in graded degree 0, M a twist of O or Occ."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    g = recognize_generator(M)
    terms, maps = resolution_cochain(g, N, depth + 1)
    return cohomology(terms, maps)[: depth + 1]


# -- morphisms of diagrams -----------------------------------------------------------------


def identity_family(M: WindowDiagram, N: WindowDiagram) -> dict[int, ModuleMap] | None:
    """Degree-wise identity matrices on the union window, when generator counts agree."""
    lo, hi = _union(M, N)
    fam = {}
    for d in range(lo, hi + 1):
        a, b = M.piece(d), N.piece(d)
        if a.gens != b.gens:
            return None
        fam[d] = ModuleMap(a, b, LaurentMatrix.identity(a.gens))
    return fam


def _union(M: WindowDiagram, N: WindowDiagram) -> tuple[int, int]:
    spans = [(D.lo, D.hi) for D in (M, N) if not D.is_empty]
    if not spans:
        return 0, -1
    return min(s[0] for s in spans), max(s[1] for s in spans)


def diagram_map_check(M: WindowDiagram, N: WindowDiagram, phi: Mapping[int, ModuleMap],
                      name: str = "diagram-map") -> VerificationReport:
    """phi is a morphism of diagrams: each component well defined and x-squares commute."""
    lo, hi = _union(M, N)
    rep = VerificationReport(name, (lo, hi))
    missing = [d for d in range(lo, hi + 1) if d not in phi]
    if missing:
        raise ValueError(f"family is missing degrees {missing} of the union window [{lo}, {hi}]")
    for d in range(lo, hi + 1):
        f = phi[d]
        if f.source.gens != M.piece(d).gens or f.target.gens != N.piece(d).gens:
            rep.fail(f"component at degree {d} has the wrong shape")
            continue
        f = ModuleMap(M.piece(d), N.piece(d), f.matrix)
        if not f.is_well_defined():
            rep.fail(f"component at degree {d} is not well defined")
    if not rep.passed:
        return rep
    for d in range(lo, hi):
        lhs = ModuleMap(M.piece(d), N.piece(d + 1), N.xmap(d).matrix @ phi[d].matrix)
        rhs = ModuleMap(M.piece(d), N.piece(d + 1), phi[d + 1].matrix @ M.xmap(d).matrix)
        rep.require(lhs.equals(rhs), f"x-square at degree {d} does not commute")
    return rep


def diagram_iso_check(M: WindowDiagram, N: WindowDiagram, phi: Mapping[int, ModuleMap]) -> VerificationReport:
    rep = diagram_map_check(M, N, phi, name="diagram-iso")
    if not rep.passed:
        return rep
    lo, hi = _union(M, N)
    for d in range(lo, hi + 1):
        f = ModuleMap(M.piece(d), N.piece(d), phi[d].matrix)
        ok = map_ops(f).is_iso
        rep.witnesses.append({"degree": d, "iso": ok})
        rep.require(ok, f"component at degree {d} is not an isomorphism")
    return rep


def _exact_at(f: ModuleMap, g: ModuleMap) -> list[str]:
    """Problems with 0 -> A -f-> B -g-> C -> 0 being exact."""
    out = []
    if not map_ops(f).kernel.is_zero():
        out.append("first map not injective")
    if not map_ops(g).cokernel.is_zero():
        out.append("second map not surjective")
    if not (g @ f).is_zero():
        out.append("composite not zero")
    inc = g.kernel_inclusion()
    if inc.source.gens and solve(f.matrix.hstack(f.target.relations), inc.matrix) is None:
        out.append("kernel of second map not in image of first")
    return out


def _family(M: WindowDiagram, N: WindowDiagram, lo: int, hi: int, rule) -> dict[int, ModuleMap]:
    fam = {}
    for d in range(lo, hi + 1):
        a, b = M.piece(d), N.piece(d)
        fam[d] = ModuleMap(a, b, rule(d, a, b))
    return fam


def _unit_or_zero(d, a, b):
    if a.gens == 1 and b.gens == 1:
        return LaurentMatrix.identity(1)
    return LaurentMatrix.zeros(b.gens, a.gens)


def verify_generation_witness(lo: int = -1, hi: int = 5) -> VerificationReport:
    """Degree-wise exactness of the two short exact sequences built from O and Occ.

    (i)  0 -> Occ(1) -x-> Occ(0) -> delta_0 -> 0, delta_0 = R/(y-1) in degree 0 only;
    (ii) 0 -> Occ(1) -x-> O(0)   -> J       -> 0, J = R in degree 0 only.
    """
    rep = VerificationReport("generation-witness", (lo, hi))
    occ0 = structure_generator(GeneratorId("Occ", 0))
    occ1 = structure_generator(GeneratorId("Occ", 1))
    o0 = structure_generator(GeneratorId("O", 0))
    z = FPModule.zero()
    delta0 = WindowDiagram(0, 1, (_TORSION, z), (_TORSION.zero_map_to(z),))
    R = FPModule.free(1)
    J = WindowDiagram(0, 1, (R, z), (R.zero_map_to(z),))
    for name, A, B, C in (("skyscraper", occ1, occ0, delta0), ("open-stratum", occ1, o0, J)):
        rep.require(C.is_valid(), f"{name}: cokernel diagram invalid")
        f = _family(A, B, lo, hi + 1, _unit_or_zero)
        g = _family(B, C, lo, hi + 1, _unit_or_zero)
        for lbl, D1, D2, fam in (("x", A, B, f), ("projection", B, C, g)):
            chk = diagram_map_check(D1, D2, _restrict(fam, D1, D2), name=f"{name}-{lbl}")
            rep.require(chk.passed, f"{name}: {lbl} is not a morphism of diagrams: {chk.failures}")
        table = []
        for d in range(lo, hi + 1):
            probs = _exact_at(f[d], g[d])
            table.append({"degree": d, "A": A.piece(d).describe(), "B": B.piece(d).describe(),
                          "C": C.piece(d).describe(), "exact": not probs})
            for p in probs:
                rep.fail(f"{name} at degree {d}: {p}")
        rep.tables[name] = table
    return rep


def _restrict(fam: Mapping[int, ModuleMap], M: WindowDiagram, N: WindowDiagram) -> dict[int, ModuleMap]:
    lo, hi = _union(M, N)
    return {d: fam[d] for d in range(lo, hi + 1)}
