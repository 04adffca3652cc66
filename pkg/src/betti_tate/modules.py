"""Finitely presented modules over R = Q[y, y^-1], maps between them, and complexes.

A module with g generators and relation matrix A (g x r) is R^g / colspan(A).
A map M -> N is a matrix F (N.gens x M.gens) sending relations of M into
relations of N; the solution L of N.relations @ L == F @ M.relations is the
well-definedness certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .laurent import ONE, ZERO, Y, LaurentMatrix, LaurentPoly, as_poly
from .snf import image_basis, kernel_basis, smith_form, solve

__all__ = [
    "FPModule",
    "ModuleMap",
    "MapOps",
    "IllDefinedMapError",
    "map_ops",
    "module_normal_form",
    "hom_module",
    "direct_sum",
    "direct_sum_maps",
    "FreeComplex",
    "complex_cohomology",
    "cycles_and_cohomology",
    "induced_cohomology_map",
    "cohomology",
    "torsion_module",
    "Y_MINUS_ONE",
]

Y_MINUS_ONE = Y - 1


class IllDefinedMapError(ValueError):
    """A matrix does not send the source relations into the target relations."""


@dataclass(frozen=True, eq=True)
class FPModule:
    gens: int
    relations: LaurentMatrix = None

    def __post_init__(self):
        rel = self.relations
        if rel is None:
            rel = LaurentMatrix.zeros(self.gens, 0)
            object.__setattr__(self, "relations", rel)
        if self.gens < 0:
            raise ValueError("negative generator count")
        if rel.nrows != self.gens:
            raise ValueError(f"relation matrix has {rel.nrows} rows for {self.gens} generators")

    @classmethod
    def free(cls, n: int) -> "FPModule":
        return cls(n, LaurentMatrix.zeros(n, 0))

    @classmethod
    def zero(cls) -> "FPModule":
        return cls(0, LaurentMatrix.zeros(0, 0))

    @classmethod
    def cyclic(cls, p) -> "FPModule":
        """R / (p)."""
        return cls(1, LaurentMatrix([[as_poly(p)]]))

    @cached_property
    def normal_form(self) -> tuple[int, tuple[LaurentPoly, ...]]:
        sf = smith_form(self.relations)
        factors = tuple(d for d in sf.diagonal if not d.is_unit())
        return self.gens - sf.rank, factors

    @property
    def free_rank(self) -> int:
        return self.normal_form[0]

    @property
    def invariant_factors(self) -> tuple[LaurentPoly, ...]:
        return self.normal_form[1]

    def is_zero(self) -> bool:
        return self.normal_form == (0, ())

    def dim_q(self) -> int | None:
        """Dimension over Q, or None when infinite."""
        f, inv = self.normal_form
        if f:
            return None
        return sum(d.spread() for d in inv)

    def isomorphic(self, other: "FPModule") -> bool:
        return self.normal_form == other.normal_form

    def contains(self, vectors: LaurentMatrix) -> bool:
        """True iff every column of `vectors` lies in the relation submodule."""
        if vectors.ncols == 0:
            return True
        return solve(self.relations, vectors) is not None

    def killed_by(self, p) -> bool:
        return self.contains(LaurentMatrix.scalar(self.gens, p))

    def identity(self) -> "ModuleMap":
        return ModuleMap(self, self, LaurentMatrix.identity(self.gens))

    def multiplication(self, p) -> "ModuleMap":
        return ModuleMap(self, self, LaurentMatrix.scalar(self.gens, p))

    def zero_map_to(self, other: "FPModule") -> "ModuleMap":
        return ModuleMap(self, other, LaurentMatrix.zeros(other.gens, self.gens))

    def describe(self) -> str:
        f, inv = self.normal_form
        parts = []
        if f:
            parts.append("R" if f == 1 else f"R^{f}")
        parts += [f"R/({d})" for d in inv]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"gens": self.gens, "relations": self.relations.to_json()}

    @classmethod
    def from_json(cls, data) -> "FPModule":
        if not isinstance(data, dict) or "gens" not in data or "relations" not in data:
            raise ValueError(f"FPModule JSON must be an object with 'gens' and 'relations': {data!r}")
        g = data["gens"]
        if not isinstance(g, int) or isinstance(g, bool) or g < 0:
            raise ValueError(f"bad generator count {g!r}")
        rels = data["relations"]
        if g == 0:
            if rels not in ([], None):
                raise ValueError("a module with no generators has no relation rows")
            return cls.zero()
        if not rels:
            return cls.free(g)
        return cls(g, LaurentMatrix.from_json(rels, nrows=g))


def torsion_module(p) -> FPModule:
    return FPModule.cyclic(p)


def module_normal_form(M: FPModule) -> tuple[int, list[LaurentPoly]]:
    f, inv = M.normal_form
    return f, list(inv)


@dataclass(frozen=True, eq=True)
class ModuleMap:
    source: FPModule
    target: FPModule
    matrix: LaurentMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.gens, self.source.gens):
            raise ValueError(
                f"map matrix has shape {self.matrix.shape}, expected "
                f"{(self.target.gens, self.source.gens)}")

    @cached_property
    def certificate(self) -> LaurentMatrix | None:
        img = self.matrix @ self.source.relations
        return solve(self.target.relations, img)

    def is_well_defined(self) -> bool:
        return self.certificate is not None

    def require_well_defined(self) -> "ModuleMap":
        if self.certificate is None:
            raise IllDefinedMapError("map does not send relations to relations")
        return self

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition self ∘ other."""
        if other.target.gens != self.source.gens:
            raise ValueError("maps are not composable")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix - other.matrix)

    def scale(self, p) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix.scale(p))

    def is_zero(self) -> bool:
        return self.target.contains(self.matrix)

    def equals(self, other: "ModuleMap") -> bool:
        """Equality as homomorphisms (matrices may differ by target relations)."""
        return (self - other).is_zero()

    @cached_property
    def _kernel(self) -> tuple[FPModule, "ModuleMap"]:
        self.require_well_defined()
        g = self.source.gens
        if g == 0:
            K = FPModule.zero()
            return K, ModuleMap(K, self.source, LaurentMatrix.zeros(0, 0))
        stacked = self.matrix.hstack(self.target.relations)
        ker = kernel_basis(stacked)
        top = ker.select_rows(range(g))
        Z = image_basis(top) if top.ncols else LaurentMatrix.zeros(g, 0)
        C = solve(Z, self.source.relations) if self.source.relations.ncols else LaurentMatrix.zeros(Z.ncols, 0)
        if C is None:  # pragma: no cover - relations always lie in the preimage
            raise ArithmeticError("source relations escaped the kernel")
        K = FPModule(Z.ncols, C)
        return K, ModuleMap(K, self.source, Z)

    def kernel(self) -> FPModule:
        return self._kernel[0]

    def kernel_inclusion(self) -> "ModuleMap":
        return self._kernel[1]

    def cokernel(self) -> FPModule:
        self.require_well_defined()
        return FPModule(self.target.gens, self.target.relations.hstack(self.matrix))

    def cokernel_projection(self) -> "ModuleMap":
        return ModuleMap(self.target, self.cokernel(), LaurentMatrix.identity(self.target.gens))

    def image(self) -> FPModule:
        """source / kernel."""
        Z = self.kernel_inclusion().matrix
        return FPModule(self.source.gens, self.source.relations.hstack(Z))

    def is_injective(self) -> bool:
        return self.kernel().is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel().is_zero()

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def lift_through(self, inclusion: "ModuleMap") -> "ModuleMap | None":
        """h with inclusion ∘ h == self, for an injective `inclusion` into self.target."""
        if inclusion.target.gens != self.target.gens:
            raise ValueError("inclusion must land in the target")
        stacked = inclusion.matrix.hstack(self.target.relations)
        X = solve(stacked, self.matrix)
        if X is None:
            return None
        return ModuleMap(self.source, inclusion.source, X.select_rows(range(inclusion.source.gens)))

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "matrix": self.matrix.to_json()}


@dataclass(frozen=True)
class MapOps:
    kernel: FPModule
    cokernel: FPModule
    is_iso: bool
    kernel_inclusion: ModuleMap
    cokernel_projection: ModuleMap


def map_ops(f: ModuleMap) -> MapOps:
    """Kernel, cokernel and isomorphism test; raises IllDefinedMapError on a bad map."""
    f.require_well_defined()
    K = f.kernel()
    Q = f.cokernel()
    return MapOps(K, Q, K.is_zero() and Q.is_zero(), f.kernel_inclusion(), f.cokernel_projection())


def direct_sum(*mods: FPModule) -> FPModule:
    if not mods:
        return FPModule.zero()
    return FPModule(sum(m.gens for m in mods), LaurentMatrix.block_diag([m.relations for m in mods]))


def direct_sum_maps(*maps: ModuleMap) -> ModuleMap:
    return ModuleMap(direct_sum(*(f.source for f in maps)), direct_sum(*(f.target for f in maps)),
                     LaurentMatrix.block_diag([f.matrix for f in maps]))


@dataclass(frozen=True)
class HomModule:
    """Hom_R(M, N) as a submodule of N^(M.gens).

    Elements are stored as h*g coordinate vectors, generator-major:
    entry i*h + r is row r of the image of generator i.
    """

    source: FPModule
    target: FPModule
    module: FPModule
    inclusion: ModuleMap

    def coordinates(self, phi: LaurentMatrix) -> LaurentMatrix | None:
        """Coordinates (module.gens x 1) of the homomorphism with matrix phi, if it is one."""
        vec = flatten(phi)
        X = solve(self.inclusion.matrix.hstack(self.inclusion.target.relations), vec)
        if X is None:
            return None
        return X.select_rows(range(self.module.gens))


def flatten(phi: LaurentMatrix) -> LaurentMatrix:
    """Generator-major column vector of a matrix."""
    return LaurentMatrix([[phi[r, i]] for i in range(phi.ncols) for r in range(phi.nrows)],
                         phi.nrows * phi.ncols, 1)


def unflatten(vec: Sequence, h: int, g: int) -> LaurentMatrix:
    return LaurentMatrix([[vec[i * h + r] for i in range(g)] for r in range(h)], h, g)


def hom_module(M: FPModule, N: FPModule) -> HomModule:
    g, h = M.gens, N.gens
    r = M.relations.ncols
    Ng = direct_sum(*([N] * g))
    Nr = direct_sum(*([N] * r))
    blocks = [[LaurentMatrix.scalar(h, M.relations[i, j]) for i in range(g)] for j in range(r)]
    if r and g:
        mat = LaurentMatrix.block(blocks)
    else:
        mat = LaurentMatrix.zeros(h * r, h * g)
    psi = ModuleMap(Ng, Nr, mat)
    return HomModule(M, N, psi.kernel(), psi.kernel_inclusion())


# -- complexes ---------------------------------------------------------------


@dataclass(frozen=True)
class FreeComplex:
    """Cochain complex R^{n_0} -> R^{n_1} -> ... ; differentials[i] is n_{i+1} x n_i."""

    ranks: tuple[int, ...]
    differentials: tuple[LaurentMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise ValueError("need one differential between consecutive positions")
        for i, d in enumerate(self.differentials):
            if d.shape != (self.ranks[i + 1], self.ranks[i]):
                raise ValueError(f"differential {i} has shape {d.shape}")

    def check(self) -> bool:
        return all((b @ a).is_zero() for a, b in zip(self.differentials, self.differentials[1:]))


def cycles_and_cohomology(C: FreeComplex) -> list[tuple[LaurentMatrix, FPModule]]:
    """Per position: a basis Z of the cycles and H = ker/im presented on Z."""
    if not C.check():
        raise ValueError("differentials do not compose to zero")
    out = []
    for i, n in enumerate(C.ranks):
        if i < len(C.differentials):
            Z = kernel_basis(C.differentials[i])
        else:
            Z = LaurentMatrix.identity(n)
        if i > 0 and C.differentials[i - 1].ncols:
            rel = solve(Z, C.differentials[i - 1])
            if rel is None:  # pragma: no cover
                raise ArithmeticError("boundaries are not cycles")
        else:
            rel = LaurentMatrix.zeros(Z.ncols, 0)
        out.append((Z, FPModule(Z.ncols, rel)))
    return out


def complex_cohomology(C: FreeComplex) -> list[FPModule]:
    return [H for _, H in cycles_and_cohomology(C)]


def induced_cohomology_map(C: FreeComplex, D: FreeComplex, f: LaurentMatrix, i: int) -> ModuleMap:
    """The map H^i(C) -> H^i(D) induced by the degree-i component f of a chain map."""
    Zc, Hc = cycles_and_cohomology(C)[i]
    Zd, Hd = cycles_and_cohomology(D)[i]
    img = f @ Zc
    coords = solve(Zd, img) if img.ncols else LaurentMatrix.zeros(Zd.ncols, 0)
    if coords is None:
        raise ValueError("f does not send cycles to cycles")
    return ModuleMap(Hc, Hd, coords)


def cohomology(terms: Sequence[FPModule], maps: Sequence[ModuleMap]) -> list[FPModule]:
    """Cohomology of a cochain complex of finitely presented modules."""
    if len(maps) != max(len(terms) - 1, 0):
        raise ValueError("need one map between consecutive terms")
    for a, b in zip(maps, maps[1:]):
        if not (b @ a).is_zero():
            raise ValueError("differentials do not compose to zero")
    out = []
    for i, M in enumerate(terms):
        if i < len(maps):
            inc = maps[i].kernel_inclusion()
        else:
            inc = M.identity()
        if i == 0:
            out.append(inc.source)
            continue
        lifted = maps[i - 1].lift_through(inc)
        if lifted is None:  # pragma: no cover
            raise ArithmeticError("image is not contained in the kernel")
        out.append(lifted.cokernel())
    return out
