"""Finite truncations of the valuation-stratified loop space and their quiver algebras.

The truncation with coordinates a_k, ..., a_{k+l} is C^{l+1} stratified by the
index of the first nonzero coordinate.  Cosheaves on it are modules over the
algebra A(k, l): a linear quiver with vertices k..k+l, corestriction arrows
c_j : j-1 -> j, invertible loops m_n at every non-terminal vertex, and the
monodromy-invariance relations c(1 - m) = 0 = (1 - m)c.

Paths are stored in travel order: the first letter is applied first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .laurent import ONE, Y, Fraction, LaurentMatrix
from .modules import (
    FPModule,
    FreeComplex,
    ModuleMap,
    complex_cohomology,
    direct_sum,
    direct_sum_maps,
    map_ops,
)
from .report import VerificationReport

__all__ = [
    "Stratum",
    "StratumPoset",
    "stratification_model",
    "stratum_vertex_correspondence",
    "Relation",
    "QuiverPresentation",
    "quiver_presentation",
    "PathWord",
    "word",
    "one_step_rewrites",
    "path_normal_form",
    "reachable_normal_forms",
    "enumerate_words",
    "hom_projectives",
    "hom_by_enumeration",
    "ProjectiveId",
    "QuiverRep",
    "rep_of_projective",
    "zero_rep",
    "direct_sum_reps",
    "check_rep",
    "rep_iso_check",
    "pullback_p",
    "pushforward_i",
    "translate_rep",
    "verify_end_example",
    "hom_closed_form",
    "verify_homtable",
]

POINT = "point"


# -- stratified model --------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    label: int | str  # n for T_l(n) = {0}^n x C^* x C^(l-n), or "point"
    complex_dim: int
    loop_rank: int

    def __str__(self):
        return "{0}" if self.label == POINT else f"T({self.label})"


@dataclass(frozen=True)
class StratumPoset:
    level: int
    strata: tuple[Stratum, ...]  # deepest first: point < T(l) < ... < T(0)
    projection: dict | None = field(default=None, compare=False, hash=False)

    def labels(self) -> list:
        return [s.label for s in self.strata]

    def rank(self, label) -> int:
        return self.labels().index(label)

    def leq(self, a, b) -> bool:
        """a lies in the closure of b."""
        return self.rank(a) <= self.rank(b)

    def stratum(self, label) -> Stratum:
        return self.strata[self.rank(label)]

    def stratum_of(self, coords: Sequence) -> int | str:
        """Label of the stratum containing the point (a_0, ..., a_l)."""
        if len(coords) != self.level + 1:
            raise ValueError(f"expected {self.level + 1} coordinates")
        for n, a in enumerate(coords):
            if a:
                return n
        return POINT


def stratification_model(l: int) -> StratumPoset:
    if l < 0:
        raise ValueError("level must be non-negative")
    strata = [Stratum(POINT, 0, 0)]
    strata += [Stratum(n, l + 1 - n, 1) for n in range(l, -1, -1)]
    projection = None
    if l >= 1:
        projection = {n: n for n in range(l)}
        projection[l] = POINT
        projection[POINT] = POINT
    return StratumPoset(l, tuple(strata), projection)


def stratum_vertex_correspondence(k: int, l: int) -> dict[int, int | str]:
    """Vertices of the quiver at (k, l+1) matched with the strata of level l.

    Vertex k+n sits over T_l(n); the terminal vertex sits over the point.
    """
    model = stratification_model(l)
    out = {k + n: n for n in range(l + 1)}
    out[k + l + 1] = POINT
    assert len(out) == len(model.strata)
    return out


# -- quiver presentation ---------------------------------------------------------


@dataclass(frozen=True, order=True)
class Relation:
    """kind 'cm' is c_{loop+1}(1 - m_loop); kind 'mc' is (1 - m_loop)c_loop."""

    kind: str
    loop: int

    @property
    def arrow(self) -> int:
        return self.loop + 1 if self.kind == "cm" else self.loop

    def __str__(self):
        if self.kind == "cm":
            return f"c{self.loop + 1}(1-m{self.loop})"
        return f"(1-m{self.loop})c{self.loop}"


@dataclass(frozen=True)
class QuiverPresentation:
    k: int
    l: int

    def __post_init__(self):
        if self.l < 0:
            raise ValueError("window length must be non-negative")

    @property
    def vertices(self) -> range:
        return range(self.k, self.k + self.l + 1)

    @property
    def terminal(self) -> int:
        return self.k + self.l

    @property
    def arrows(self) -> range:
        """Arrow c_j runs j-1 -> j."""
        return range(self.k + 1, self.k + self.l + 1)

    @property
    def loops(self) -> range:
        return range(self.k, self.k + self.l)

    def has_loop(self, v: int) -> bool:
        return self.k <= v < self.k + self.l

    @property
    def relations(self) -> frozenset[Relation]:
        rels = {Relation("cm", i) for i in range(self.k, self.k + self.l)}
        rels |= {Relation("mc", j) for j in range(self.k + 1, self.k + self.l)}
        return frozenset(rels)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "vertices": list(self.vertices),
            "arrows": [{"name": f"c{j}", "source": j - 1, "target": j} for j in self.arrows],
            "loops": [f"m{v}" for v in self.loops],
            "relations": sorted(str(r) for r in self.relations),
        }


def quiver_presentation(k: int, l: int) -> QuiverPresentation:
    return QuiverPresentation(k, l)


# -- paths and rewriting ---------------------------------------------------------


@dataclass(frozen=True)
class PathWord:
    """letters: ('m', vertex, exponent) or ('c', arrow index), in travel order."""

    source: int
    target: int
    letters: tuple = ()

    def __str__(self):
        if not self.letters:
            return f"e{self.source}"
        parts = []
        for let in reversed(self.letters):
            if let[0] == "c":
                parts.append(f"c{let[1]}")
            else:
                parts.append(f"m{let[1]}^{let[2]}" if let[2] != 1 else f"m{let[1]}")
        return " o ".join(parts)


def word(q: QuiverPresentation, source: int, letters: Sequence) -> PathWord:
    """Validate a travel-order letter sequence starting at `source`."""
    if source not in q.vertices:
        raise ValueError(f"vertex {source} not in window {q.k}..{q.terminal}")
    v = source
    out = []
    for let in letters:
        let = tuple(let)
        if let[0] == "m":
            _, u, e = let
            if u != v or not q.has_loop(v):
                raise ValueError(f"loop m{u} not available at vertex {v}")
            if e == 0:
                raise ValueError("zero loop exponent")
        elif let[0] == "c":
            if let[1] != v + 1 or let[1] not in q.arrows:
                raise ValueError(f"arrow c{let[1]} not composable at vertex {v}")
            v = let[1]
        else:
            raise ValueError(f"unknown letter {let!r}")
        out.append(let)
    return PathWord(source, v, tuple(out))


def one_step_rewrites(w: PathWord) -> Iterator[PathWord]:
    """All words obtained by one rewrite at one position.

    Rules: m^a m^b -> m^(a+b) (dropped when a+b = 0); c after m^a -> c; m^a after c -> c.
    """
    L = w.letters
    for i in range(len(L) - 1):
        a, b = L[i], L[i + 1]
        if a[0] == "m" and b[0] == "m":
            e = a[2] + b[2]
            mid = (("m", a[1], e),) if e else ()
            yield PathWord(w.source, w.target, L[:i] + mid + L[i + 2:])
        elif a[0] == "m" and b[0] == "c":
            yield PathWord(w.source, w.target, L[:i] + L[i + 1:])
        elif a[0] == "c" and b[0] == "m":
            yield PathWord(w.source, w.target, L[:i + 1] + L[i + 2:])


def path_normal_form(w: PathWord, q: QuiverPresentation | None = None) -> PathWord:
    if q is not None:
        w = word(q, w.source, w.letters)
    while True:
        nxt = next(one_step_rewrites(w), None)
        if nxt is None:
            return w
        w = nxt


@lru_cache(maxsize=None)
def reachable_normal_forms(w: PathWord) -> frozenset[PathWord]:
    """Irreducible words reachable from w along every possible rewrite sequence."""
    steps = set(one_step_rewrites(w))
    if not steps:
        return frozenset([w])
    out = set()
    for s in steps:
        out |= reachable_normal_forms(s)
    return frozenset(out)


def enumerate_words(q: QuiverPresentation, source: int, max_len: int) -> Iterator[PathWord]:
    """All composable words from `source` built from m^(+-1) and c letters, length <= max_len."""
    frontier = [PathWord(source, source, ())]
    yield frontier[0]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            v = w.target
            choices = []
            if q.has_loop(v):
                choices += [("m", v, 1), ("m", v, -1)]
            if v + 1 in q.arrows:
                choices.append(("c", v + 1))
            for let in choices:
                t = let[1] if let[0] == "c" else v
                nw = PathWord(w.source, t, w.letters + (let,))
                nxt.append(nw)
                yield nw
        frontier = nxt


def _generator_path(q: QuiverPresentation, a: int, b: int) -> PathWord | None:
    if a > b:
        return None
    return PathWord(a, b, tuple(("c", j) for j in range(a + 1, b + 1)))


@lru_cache(maxsize=None)
def hom_projectives(a: "ProjectiveId", b: "ProjectiveId") -> FPModule:
    """Paths a -> b modulo relations, as an R-module where y is the loop at b."""
    if (a.k, a.l) != (b.k, b.l):
        raise ValueError("projectives from different windows")
    q = QuiverPresentation(a.k, a.l)
    gen = _generator_path(q, a.n, b.n)
    if gen is None:
        return FPModule.zero()
    gen = path_normal_form(gen)
    if not q.has_loop(b.n):
        return FPModule.cyclic(Y - 1)
    moved = path_normal_form(PathWord(gen.source, gen.target, gen.letters + (("m", b.n, 1),)))
    if moved == gen:
        return FPModule.cyclic(Y - 1)
    return FPModule.free(1)


def hom_by_enumeration(q: QuiverPresentation, a: int, b: int, max_len: int = 8) -> FPModule:
    """Bounded-enumeration oracle for hom_projectives.

    Collects every normal form of a path a -> b of length <= max_len and reads
    off the y-action of the loop at b on that set.
    """
    forms = {path_normal_form(w) for w in enumerate_words(q, a, max_len) if w.target == b}
    if not forms:
        return FPModule.zero()
    if not q.has_loop(b):
        if len(forms) != 1:
            raise AssertionError(f"expected one path class, got {sorted(map(str, forms))}")
        return FPModule.cyclic(Y - 1)
    moved = {path_normal_form(PathWord(w.source, w.target, w.letters + (("m", b, 1),))) for w in forms}
    if moved == forms and all(
            path_normal_form(PathWord(w.source, w.target, w.letters + (("m", b, 1),))) == w for w in forms):
        if len(forms) != 1:
            raise AssertionError("y-fixed classes should be a single arrow composite")
        return FPModule.cyclic(Y - 1)
    # free action: the classes form one orbit y^j * e (j bounded by the enumeration)
    exps = set()
    for w in forms:
        if w.letters and any(let[0] == "c" for let in w.letters):
            raise AssertionError("mixed free and fixed path classes")
        exps.add(w.letters[0][2] if w.letters else 0)
    if exps != set(range(-max_len, max_len + 1)):
        raise AssertionError(f"unexpected loop powers {sorted(exps)}")
    return FPModule.free(1)


# -- representations ----------------------------------------------------------------


@dataclass(frozen=True)
class ProjectiveId:
    k: int
    l: int
    n: int

    def __post_init__(self):
        if self.l < 0 or not (self.k <= self.n <= self.k + self.l):
            raise ValueError(f"vertex {self.n} outside window ({self.k}, {self.l})")


@dataclass(frozen=True)
class QuiverRep:
    """nodes[i] sits at vertex k+i; arrows[i] is c_{k+i+1} : nodes[i] -> nodes[i+1]."""

    presentation: QuiverPresentation
    nodes: tuple[FPModule, ...]
    arrows: tuple[ModuleMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        q = self.presentation
        if len(self.nodes) != q.l + 1 or len(self.arrows) != q.l:
            raise ValueError("node/arrow counts do not match the window")
        for i, f in enumerate(self.arrows):
            if f.source.gens != self.nodes[i].gens or f.target.gens != self.nodes[i + 1].gens:
                raise ValueError(f"arrow c{q.k + i + 1} has the wrong shape")

    @property
    def k(self) -> int:
        return self.presentation.k

    @property
    def l(self) -> int:
        return self.presentation.l

    def node(self, v: int) -> FPModule:
        return self.nodes[v - self.k]

    def arrow(self, j: int) -> ModuleMap:
        """c_j : V_{j-1} -> V_j."""
        return self.arrows[j - self.k - 1]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "nodes": [m.to_json() for m in self.nodes],
            "arrows": [{"index": self.k + i + 1, "matrix": f.matrix.to_json()}
                       for i, f in enumerate(self.arrows)],
        }

    @classmethod
    def from_json(cls, data) -> "QuiverRep":
        if not isinstance(data, dict):
            raise ValueError("QuiverRep JSON must be an object")
        try:
            k, l = data["k"], data["l"]
            nodes = [FPModule.from_json(m) for m in data["nodes"]]
            arrows_json = data["arrows"]
        except KeyError as exc:
            raise ValueError(f"missing field {exc}") from exc
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (k, l)):
            raise ValueError("k and l must be integers")
        q = QuiverPresentation(k, l)
        by_index = {}
        for a in arrows_json:
            idx = a.get("index") if isinstance(a, dict) else None
            if idx not in q.arrows or idx in by_index:
                raise ValueError(f"bad arrow index {idx!r}")
            by_index[idx] = a["matrix"]
        if set(by_index) != set(q.arrows):
            raise ValueError("every arrow must be given exactly once")
        if len(nodes) != l + 1:
            raise ValueError("wrong number of nodes")
        arrows = []
        for j in q.arrows:
            src, tgt = nodes[j - k - 1], nodes[j - k]
            mat = LaurentMatrix.from_json(by_index[j], nrows=tgt.gens, ncols=src.gens)
            arrows.append(ModuleMap(src, tgt, mat))
        return cls(q, tuple(nodes), tuple(arrows))


def zero_rep(k: int, l: int) -> QuiverRep:
    z = FPModule.zero()
    return QuiverRep(QuiverPresentation(k, l), (z,) * (l + 1), (z.identity(),) * l)


def direct_sum_reps(V: QuiverRep, W: QuiverRep) -> QuiverRep:
    if V.presentation != W.presentation:
        raise ValueError("direct sum needs a common window")
    return QuiverRep(V.presentation,
                     tuple(direct_sum(a, b) for a, b in zip(V.nodes, W.nodes)),
                     tuple(direct_sum_maps(f, g) for f, g in zip(V.arrows, W.arrows)))


@lru_cache(maxsize=None)
def rep_of_projective(p: ProjectiveId) -> QuiverRep:
    q = QuiverPresentation(p.k, p.l)
    nodes = [hom_projectives(p, ProjectiveId(p.k, p.l, d)) for d in q.vertices]
    arrows = []
    for j in q.arrows:
        src, tgt = nodes[j - 1 - q.k], nodes[j - q.k]
        g_src = _generator_path(q, p.n, j - 1)
        g_tgt = _generator_path(q, p.n, j)
        if src.gens and tgt.gens:
            image = path_normal_form(PathWord(g_src.source, j, g_src.letters + (("c", j),)))
            if image != path_normal_form(g_tgt):  # pragma: no cover
                raise AssertionError("post-composition left the generator class")
            mat = LaurentMatrix.identity(1)
        else:
            mat = LaurentMatrix.zeros(tgt.gens, src.gens)
        arrows.append(ModuleMap(src, tgt, mat))
    return QuiverRep(q, tuple(nodes), tuple(arrows))


def _relation_map(V: QuiverRep, rel: Relation) -> ModuleMap:
    c = V.arrow(rel.arrow)
    if rel.kind == "cm":
        return c @ c.source.multiplication(ONE - Y)
    return c.target.multiplication(ONE - Y) @ c


def check_rep(V: QuiverRep) -> VerificationReport:
    rep = VerificationReport("check-rep", (V.k, V.l))
    q = V.presentation
    for j in q.arrows:
        rep.require(V.arrow(j).is_well_defined(), f"c{j} is not a well-defined module map")
    term = V.node(q.terminal)
    rep.require(term.killed_by(Y - 1), f"loop does not act trivially on terminal vertex {q.terminal}")
    if not rep.passed:
        return rep
    for rel in sorted(q.relations):
        ok = _relation_map(V, rel).is_zero()
        rep.witnesses.append({"relation": str(rel), "zero": ok})
        rep.require(ok, f"{rel} != 0")
    rep.tables["nodes"] = {str(v): V.node(v).describe() for v in q.vertices}
    return rep


def rep_iso_check(V: QuiverRep, W: QuiverRep, phis: Sequence[ModuleMap]) -> VerificationReport:
    """Vertex-wise isomorphism V -> W given by an explicit family, commuting with the arrows."""
    rep = VerificationReport("rep-iso", (V.k, V.l))
    if V.presentation != W.presentation or len(phis) != V.l + 1:
        rep.fail("window mismatch")
        return rep
    for i, phi in enumerate(phis):
        v = V.k + i
        if not phi.is_well_defined():
            rep.fail(f"component at vertex {v} is not well defined")
            continue
        rep.require(map_ops(phi).is_iso, f"component at vertex {v} is not an isomorphism")
    if not rep.passed:
        return rep
    for j in V.presentation.arrows:
        i = j - V.k
        lhs = W.arrow(j) @ phis[i - 1]
        rhs = phis[i] @ V.arrow(j)
        rep.require(lhs.equals(rhs), f"square at c{j} does not commute")
    return rep


def pullback_p(V: QuiverRep) -> QuiverRep:
    """Pullback along the projection dropping the last coordinate: duplicate the terminal vertex."""
    term = V.nodes[-1]
    q = QuiverPresentation(V.k, V.l + 1)
    return QuiverRep(q, V.nodes + (term,), V.arrows + (term.identity(),))


def pushforward_i(V: QuiverRep) -> QuiverRep:
    """Pushforward along X_k -> X_{k-1}: prepend a zero vertex at k-1."""
    z = FPModule.zero()
    first = V.nodes[0]
    q = QuiverPresentation(V.k - 1, V.l + 1)
    return QuiverRep(q, (z,) + V.nodes, (z.zero_map_to(first),) + V.arrows)


def translate_rep(V: QuiverRep, n: int) -> QuiverRep:
    """Transport along multiplication by t^n, which shifts valuations by n."""
    return QuiverRep(QuiverPresentation(V.k + n, V.l), V.nodes, V.arrows)


def verify_end_example() -> VerificationReport:
    rep = VerificationReport("end-example", (0, 1))
    C = FreeComplex((1, 1), (LaurentMatrix([[Y - 1]]),))
    H = complex_cohomology(C)
    dims = [h.dim_q() for h in H]
    rep.tables["cohomology"] = [h.describe() for h in H]
    rep.tables["dims"] = dims
    total = None if any(d is None for d in dims) else sum(dims)
    hom01 = hom_projectives(ProjectiveId(0, 1, 0), ProjectiveId(0, 1, 1))
    rep.tables["hom_P0_P1"] = hom01.describe()
    rep.witnesses.append({"complex": "R --(y-1)--> R", "total_dim": total, "hom_dim": hom01.dim_q()})
    rep.require(total == 1, f"total dimension {total} != 1")
    rep.require(total == hom01.dim_q(), "dimension differs from the quiver Hom")
    # degree placement is recorded, not asserted
    rep.tables["degree_of_class"] = [i for i, d in enumerate(dims) if d]
    return rep


def hom_closed_form(k: int, l: int, a: int, b: int) -> FPModule:
    """R on the diagonal below the terminal vertex, R/(y-1) for a < b or at the terminal diagonal, else 0."""
    if a > b:
        return FPModule.zero()
    if a == b and a < k + l:
        return FPModule.free(1)
    return FPModule.cyclic(Y - 1)


def verify_homtable(k: int, l: int, max_len: int = 8) -> VerificationReport:
    rep = VerificationReport("homtable", (k, l))
    q = quiver_presentation(k, l)
    table = {}
    for a in q.vertices:
        for b in q.vertices:
            H = hom_projectives(ProjectiveId(k, l, a), ProjectiveId(k, l, b))
            closed = hom_closed_form(k, l, a, b)
            enum = hom_by_enumeration(q, a, b, max_len)
            rep.require(H.normal_form == closed.normal_form,
                        f"Hom(P{a},P{b}) = {H.describe()}, closed form {closed.describe()}")
            rep.require(H.normal_form == enum.normal_form,
                        f"Hom(P{a},P{b}) = {H.describe()}, enumeration {enum.describe()}")
            table[f"{a},{b}"] = H.describe()
    rep.tables["homs"] = table
    return rep
