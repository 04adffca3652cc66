"""Command-line entry point: one subcommand per check, JSON in and out, stable exit codes.

Exit codes: 0 pass, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

from . import __version__
from .gcft import verify_intertwine
from .mirror import apply_F, apply_G, mirror_diagram, roundtrip_check, verify_compat, verify_ff
from .nodal_graded import GeneratorId, WindowDiagram, ext_truncated, verify_generation_witness
from .report import VerificationReport
from .sampling import random_rep
from .strat_quiver import (
    ProjectiveId,
    QuiverRep,
    check_rep,
    quiver_presentation,
    rep_of_projective,
    verify_end_example,
    verify_homtable,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
GOLDEN_FILE = "golden.json"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CheckSpec:
    name: str
    params: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        args = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name} {args}".strip()


@dataclass
class RunManifest:
    version: str
    results: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.results)

    def to_json(self) -> dict:
        return {
            "tool": "betti-tate",
            "version": self.version,
            "pass": self.passed,
            "count": len(self.results),
            "checks": sorted(self.results, key=lambda r: r["name"]),
            "timing": self.timing,
        }


# -- input helpers ---------------------------------------------------------------------


def _load_json(path: str | None):
    if path is None:
        raise UsageError("--input is required for this command")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _load_rep(path: str | None) -> QuiverRep:
    data = _load_json(path)
    try:
        return QuiverRep.from_json(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"not a quiver representation: {exc}") from exc


def _load_diagram(path: str | None) -> WindowDiagram:
    data = _load_json(path)
    try:
        return WindowDiagram.from_json(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"not a window diagram: {exc}") from exc


def _window(args) -> tuple[int, int]:
    if args.l < 0:
        raise UsageError("--l must be non-negative")
    return args.k, args.l


def _projectives(k: int, l: int) -> list[QuiverRep]:
    return [rep_of_projective(ProjectiveId(k, l, n)) for n in range(k, k + l + 1)]


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _merge(name: str, window, reports: list[VerificationReport]) -> VerificationReport:
    out = VerificationReport(name, window)
    for r in reports:
        out.witnesses.append({"check": r.check, "window": r.window, "pass": r.passed})
        for m in r.failures:
            out.fail(f"{r.check}: {m}")
    return out


# -- commands --------------------------------------------------------------------------
# each returns (report, payload); payload is the JSON document written by --json/--out


def cmd_quiver(args):
    k, l = _window(args)
    q = quiver_presentation(k, l)
    rep = VerificationReport("quiver", (k, l))
    rep.tables["relations"] = sorted(str(r) for r in q.relations)
    return rep, q.to_json()


def cmd_homtable(args):
    k, l = _window(args)
    rep = verify_homtable(k, l)
    return rep, rep.to_json()


def cmd_check_rep(args):
    rep = check_rep(_load_rep(args.input))
    return rep, rep.to_json()


def cmd_apply_f(args):
    V = _load_rep(args.input)
    chk = check_rep(V)
    if not chk.passed:
        raise UsageError(f"input representation is invalid: {chk.failures}")
    D = apply_F(V)
    rep = VerificationReport("apply-f", (D.lo, D.hi))
    rep.tables["diagram"] = D.describe()
    return rep, D.to_json()


def cmd_apply_g(args):
    D = _load_diagram(args.input)
    probs = D.problems()
    if probs:
        raise UsageError(f"input diagram is invalid: {probs}")
    V = apply_G(D)
    rep = VerificationReport("apply-g", (V.k, V.l))
    return rep, V.to_json()


def cmd_roundtrip(args):
    if args.input:
        rep = roundtrip_check(_load_rep(args.input))
    else:
        k, l = _window(args)
        rep = _merge("roundtrip", (k, l), [roundtrip_check(V) for V in _projectives(k, l)])
    return rep, rep.to_json()


def cmd_check_ff(args):
    k, l = _window(args)
    if args.depth < 1:
        raise UsageError("--depth must be at least 1")
    rep = verify_ff(k, l, args.depth)
    return rep, rep.to_json()


def cmd_check_compat(args):
    rep = verify_compat(*_window(args))
    return rep, rep.to_json()


def cmd_generation_witness(args):
    rep = verify_generation_witness()
    return rep, rep.to_json()


def cmd_end_example(args):
    rep = verify_end_example()
    return rep, rep.to_json()


def cmd_gcft(args):
    if args.a == 0:
        raise UsageError("--a must be nonzero")
    if args.input:
        rep = verify_intertwine(_load_rep(args.input), args.a, args.n)
    else:
        k, l = _window(args)
        rep = _merge("gcft", (k, l), [verify_intertwine(V, args.a, args.n) for V in _projectives(k, l)])
    return rep, rep.to_json()


# -- suite -----------------------------------------------------------------------------


def golden_snapshot(l_max: int = 4, depth: int = 4) -> dict:
    """Exact tables the suite compares against the stored golden file."""
    homs, relations, objects = {}, {}, {}
    for l in range(l_max + 1):
        homs[str(l)] = verify_homtable(0, l).tables["homs"]
        relations[str(l)] = sorted(str(r) for r in quiver_presentation(0, l).relations)
        objects[str(l)] = [str(g) for g in mirror_diagram(0, l).objects]
    occ = mirror_diagram(0, 0).diagram(0)
    ext = [m.describe() for m in ext_truncated(GeneratorId("Occ", 0), occ, depth)]
    return {"l_max": l_max, "depth": depth, "homtables": homs, "relations": relations,
            "mirror_objects": objects, "ext_occ0_occ0": ext}


def _golden_path(arg: str | None) -> Path:
    if arg:
        return Path(arg)
    return Path(str(resources.files("betti_tate") / "golden" / "v1" / GOLDEN_FILE))


def _diff(expected, actual, path: str = "") -> list[str]:
    if isinstance(expected, dict) and isinstance(actual, dict):
        out = []
        for key in sorted(set(expected) | set(actual)):
            sub = f"{path}/{key}"
            if key not in actual:
                out.append(f"{sub}: missing")
            elif key not in expected:
                out.append(f"{sub}: unexpected")
            else:
                out.extend(_diff(expected[key], actual[key], sub))
        return out
    if expected != actual:
        return [f"{path or '/'}: expected {expected!r}, got {actual!r}"]
    return []


def golden_check(path: Path, l_max: int, depth: int) -> VerificationReport:
    rep = VerificationReport("golden")
    try:
        expected = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read golden file {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        rep.fail(f"golden file is not valid JSON: {exc}")
        return rep
    if not isinstance(expected, dict):
        rep.fail("golden file must hold a JSON object")
        return rep
    g_l, g_depth = expected.get("l_max"), expected.get("depth")
    if not isinstance(g_l, int) or not isinstance(g_depth, int):
        rep.fail("golden file lacks l_max/depth")
        return rep
    # compare the part of the stored tables that this run covers
    l_cmp = min(l_max, g_l)
    actual = golden_snapshot(l_cmp, g_depth)
    expected = dict(expected)
    for key in ("homtables", "relations", "mirror_objects"):
        if isinstance(expected.get(key), dict):
            expected[key] = {s: v for s, v in expected[key].items() if s.isdigit() and int(s) <= l_cmp}
    expected["l_max"] = l_cmp
    for line in _diff(expected, actual):
        rep.fail(line)
    return rep


def suite_specs(k_min: int, k_max: int, l_max: int, depth: int, samples: int) -> list[tuple[CheckSpec, Callable]]:
    specs: list[tuple[CheckSpec, Callable]] = []
    for k in range(k_min, k_max + 1):
        for l in range(l_max + 1):
            p = {"k": k, "l": l}
            specs.append((CheckSpec("homtable", p), lambda k=k, l=l: verify_homtable(k, l)))
            specs.append((CheckSpec("check-ff", {**p, "depth": depth}),
                          lambda k=k, l=l: verify_ff(k, l, depth)))
            specs.append((CheckSpec("check-compat", p), lambda k=k, l=l: verify_compat(k, l)))
            specs.append((CheckSpec("roundtrip", p), lambda k=k, l=l: _merge(
                "roundtrip", (k, l), [roundtrip_check(V) for V in _projectives(k, l)])))
    for s in range(samples):
        specs.append((CheckSpec("roundtrip-random", {"seed": s}), lambda s=s: roundtrip_check(random_rep(s))))
    specs.append((CheckSpec("generation-witness"), verify_generation_witness))
    specs.append((CheckSpec("end-example"), verify_end_example))
    for k, l in ((0, 1), (0, 2)):
        if l > l_max:
            continue
        for v in range(k, k + l + 1):
            for a in (2, -1, 1):
                for n in (-2, 0, 1):
                    specs.append((CheckSpec("gcft", {"k": k, "l": l, "vertex": v, "a": str(a), "n": n}),
                                  lambda k=k, l=l, v=v, a=a, n=n: verify_intertwine(
                                      rep_of_projective(ProjectiveId(k, l, v)), a, n)))
    return specs


def run_suite(k_min: int = -2, k_max: int = 2, l_max: int = 4, depth: int = 4,
              samples: int = 50, golden: str | None = None) -> tuple[RunManifest, list[str]]:
    if l_max < 0 or l_max > 4:
        raise UsageError("--l-max must be between 0 and 4")
    if k_min > k_max:
        raise UsageError("--k-min must not exceed --k-max")
    if depth < 1:
        raise UsageError("--depth must be at least 1")
    manifest = RunManifest(__version__)
    failures: list[str] = []
    start = time.perf_counter()
    per = {}
    specs = suite_specs(k_min, k_max, l_max, depth, samples)
    specs.append((CheckSpec("golden", {"l_max": l_max, "depth": depth}),
                  lambda: golden_check(_golden_path(golden), l_max, depth)))
    for spec, fn in specs:
        t0 = time.perf_counter()
        rep = fn()
        per[spec.label] = round(time.perf_counter() - t0, 6)
        entry = {"name": spec.label, "check": spec.name, "params": spec.params, "pass": rep.passed}
        if rep.failures:
            entry["failures"] = rep.failures
            failures.extend(f"{spec.label}: {m}" for m in rep.failures)
        manifest.results.append(entry)
    manifest.timing = {"total_seconds": round(time.perf_counter() - start, 6), "per_check": per}
    return manifest, failures


def cmd_suite(args):
    manifest, failures = run_suite(args.k_min, args.k_max, args.l_max, args.depth, args.samples, args.golden)
    rep = VerificationReport("suite")
    for m in failures:
        rep.fail(m)
    rep.tables["count"] = len(manifest.results)
    return rep, manifest.to_json()


def cmd_write_golden(args):
    path = _golden_path(args.golden)
    snap = golden_snapshot(args.l_max, args.depth)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(snap, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    rep = VerificationReport("write-golden")
    rep.tables["path"] = str(path)
    return rep, snap


COMMANDS = {
    "quiver": (cmd_quiver, "print the quiver presentation at (k, l)"),
    "homtable": (cmd_homtable, "Hom between projectives: closed form and path enumeration"),
    "check-rep": (cmd_check_rep, "validate a quiver representation (--input)"),
    "apply-f": (cmd_apply_f, "apply the mirror functor to a representation (--input)"),
    "apply-g": (cmd_apply_g, "apply the inverse functor to a window diagram (--input)"),
    "roundtrip": (cmd_roundtrip, "G o F on --input or on all projectives at (k, l)"),
    "check-ff": (cmd_check_ff, "full faithfulness on generators"),
    "check-compat": (cmd_check_compat, "pullback/pushforward compatibility"),
    "generation-witness": (cmd_generation_witness, "exact sequences generating the skyscrapers"),
    "end-example": (cmd_end_example, "endomorphisms of the structure sheaf of the node"),
    "gcft": (cmd_gcft, "rank-one local system intertwining"),
    "suite": (cmd_suite, "run the full acceptance matrix"),
    "write-golden": (cmd_write_golden, "regenerate the golden tables"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=0)
    common.add_argument("--l", type=int, default=2)
    common.add_argument("--depth", type=int, default=4)
    common.add_argument("--a", type=_rational, default=Fraction(2))
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--input")
    common.add_argument("--json", action="store_true", help="print the JSON document to stdout")
    common.add_argument("--out", help="write the JSON document to this path")
    common.add_argument("--golden", help="golden file path (suite, write-golden)")
    common.add_argument("--k-min", type=int, default=-2)
    common.add_argument("--k-max", type=int, default=2)
    common.add_argument("--l-max", type=int, default=4)
    common.add_argument("--samples", type=int, default=50)

    parser = argparse.ArgumentParser(prog="betti-tate", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_USAGE
    fn = COMMANDS[args.command][0]
    try:
        rep, payload = fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        try:
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_USAGE
    if args.json:
        print(text)
    else:
        print(rep.summary())
    return EXIT_PASS if rep.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
