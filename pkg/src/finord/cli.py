"""Command-line front end.

Three subcommands: `hierarchy` builds antichain towers and exports them,
`verify` runs the named exhaustive verification suites, and `obstruct`
searches for mediating maps and emits refutation certificates.

Reports are JSON on stdout with a fixed envelope (schema version, tool
version, effective config and its hash).  With a fixed seed the bytes are
reproducible; `elapsed` stays null unless --timing is given, precisely so
that repeated runs compare equal.

Exit codes: 0 success / no violations / all candidates refuted; 1 invalid
configuration or violations found; 2 budget exhausted.
"""

import argparse
import hashlib
import json
import sys
import time
from itertools import combinations
from pathlib import Path
from random import Random

from finord import __version__
from finord import heyting as heyting_mod
from finord import hierarchy as hierarchy_mod
from finord import hsets
from finord import kripke as kripke_mod
from finord import maps as maps_mod
from finord import order as order_mod
from finord.errors import BudgetError, FinordError, FormatError
from finord.order import sierpinski

SCHEMA = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BUDGET = 2

SUITES = ("lemma23", "lemma24", "lemma31", "lemma32", "thm26",
          "coreflect", "duality", "bao")

NAMED_POSETS = ("singleton", "sierpinski", "product2x2")


class _Parser(argparse.ArgumentParser):
    # bad flags are an invalid configuration: exit 1, not argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_FAIL)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="finord", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"finord {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def common(p, depth_default=None):
        p.add_argument("--depth", type=int, default=depth_default,
                       help="stage depth to build or verify")
        p.add_argument("--budget", type=int,
                       default=hierarchy_mod.DEFAULT_BUDGET,
                       help="max elements per hierarchy level")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for sampled checks")
        p.add_argument("--out", type=Path, default=None,
                       help="write the document or report here as well")
        p.add_argument("--timing", action="store_true",
                       help="fill the elapsed field (breaks byte-identity)")

    ph = sub.add_parser("hierarchy", help="build and export antichain towers")
    ph.add_argument("action", choices=("build", "stats", "export"))
    ph.add_argument("--base", default="thm33",
                    help="thm33 | antichain3 | file:PATH")
    ph.add_argument("--format", choices=("json", "dot", "text"),
                    default="json")
    common(ph, depth_default=2)
    ph.set_defaults(func=cmd_hierarchy)

    pv = sub.add_parser("verify", help="run an exhaustive verification suite")
    pv.add_argument("suite", choices=SUITES)
    pv.add_argument("--max-size", type=int, default=None,
                    help="carrier size bound for enumerated structures")
    pv.add_argument("--states", type=int, default=None,
                    help="state count bound for frame suites")
    pv.add_argument("--samples", type=int, default=2000,
                    help="sampled checks beyond the exhaustive range")
    common(pv)
    pv.set_defaults(func=cmd_verify)

    po = sub.add_parser("obstruct",
                        help="emit product-obstruction certificates")
    group = po.add_mutually_exclusive_group(required=True)
    group.add_argument("--poset",
                       help="singleton | sierpinski | product2x2 | file:PATH")
    group.add_argument("--all-posets", type=int, metavar="N",
                       help="all posets with up to N elements, up to iso")
    common(po, depth_default=2)
    po.set_defaults(func=cmd_obstruct)
    return parser


# ---------------------------------------------------------------------------
# config plumbing

def _config_of(args) -> dict:
    skip = {"func", "command", "out", "timing"}
    cfg = {}
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        cfg[key.replace("_", "-")] = str(val) if isinstance(val, Path) else val
    return cfg


def _render(command: str, config: dict, payload: dict, elapsed) -> str:
    body = {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "config": config,
        "config_hash": hashlib.sha256(
            json.dumps(config, sort_keys=True).encode()).hexdigest()[:12],
        "elapsed": elapsed,
    }
    body.update(payload)
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def _resolve_base(spec: str):
    """-> (universe, base ids).  Accepts thm33 | antichain3 | file:PATH."""
    if spec == "thm33":
        u = hsets.Universe()
        return u, tuple(hsets.concrete_claw(u))
    if spec == "antichain3":
        u, ids = hsets.abstract_antichain(3)
        return u, tuple(ids)
    if spec.startswith("file:"):
        data = _read_json(spec[5:])
        try:
            atoms = data["atoms"]
            pairs = [tuple(pair) for pair in data["leq"]]
            chosen = data["base"]
        except (KeyError, TypeError) as exc:
            raise FormatError(
                "base file needs 'atoms', 'leq', and 'base'") from exc
        u = hsets.Universe(hsets.base_poset(atoms, pairs))
        missing = [lbl for lbl in chosen if lbl not in atoms]
        if missing:
            raise FormatError(f"base labels not among atoms: {missing}")
        return u, tuple(u.atom(lbl) for lbl in chosen)
    raise FormatError(f"unknown base {spec!r}")


def _resolve_poset(spec: str) -> order_mod.FinitePreorder:
    if spec == "singleton":
        return order_mod.singleton()
    if spec == "sierpinski":
        return sierpinski()
    if spec == "product2x2":
        return order_mod.product(sierpinski(), sierpinski())
    if spec.startswith("file:"):
        return order_mod.from_json(_read_json(spec[5:]))
    raise FormatError(f"unknown poset {spec!r}")


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _require_complete(h: hierarchy_mod.Hierarchy):
    if not h.complete:
        raise BudgetError("level budget exhausted",
                          stage=h.truncated_at, budget=h.budget)


def _pick(value, default):
    return default if value is None else value


# ---------------------------------------------------------------------------
# hierarchy

def cmd_hierarchy(args):
    if args.depth < 0 or args.budget <= 0:
        raise FormatError("depth must be >= 0 and budget positive")
    u, base = _resolve_base(args.base)
    h = hierarchy_mod.build(base, args.depth, u, args.budget)
    payload = {
        "action": args.action,
        "levels": [len(level) for level in h.levels],
        "new_per_level": [len(h.new_at(a)) for a in range(len(h.levels))],
        "growth": hierarchy_mod.growth_stats(h),
        "truncated_at": h.truncated_at,
        "base_ids": sorted(h.base),
        "base_elements": [u.dump_line(x) for x in sorted(h.base)],
    }
    document = None
    if args.action == "export" or (args.action == "build" and args.out):
        if args.format == "json":
            document = hierarchy_mod.dumps(h)
        elif args.format == "dot":
            document = hierarchy_mod.level_dot(h, h.depth)
        else:
            document = u.dump()
    code = EXIT_OK if h.complete else EXIT_BUDGET
    return code, payload, document


# ---------------------------------------------------------------------------
# verify suites

def _suite_lemma23(args, rng):
    """Stage structure and base-restriction comparisons, both towers."""
    depth = _pick(args.depth, 2)
    checks = 0
    violations = []

    for name in ("thm33", "antichain3"):
        u, base = _resolve_base(name)
        h = hierarchy_mod.build(base, depth, u, args.budget)
        _require_complete(h)
        rep = hierarchy_mod.verify_stage_properties(h)
        checks += len(rep.checks)
        violations += [[name, *map(str, v)] for v in rep.violations]

    # sub-antichains of the free 3-antichain against the full base
    u, base = _resolve_base("antichain3")
    for r in (1, 2, 3):
        for m in combinations(base, r):
            rep = hierarchy_mod.verify_restriction(m, base, depth, u,
                                                   args.budget)
            checks += 1
            violations += [["restriction", str(m), *map(str, v)]
                           for v in rep.violations]

    # a base living one stage up: offset containment must kick in
    a, b, c = base
    shifted = (u.intern([a, b]), u.intern([b, c]))
    rep = hierarchy_mod.verify_restriction(shifted, base, depth, u,
                                           args.budget)
    checks += 1
    if not rep.offset_checked or rep.offset != 1:
        violations.append(["restriction_offset", str(rep.offset)])
    violations += [["restriction_shifted", *map(str, v)]
                   for v in rep.violations]

    return {"suite": args.suite, "checks": checks, "violations": violations}


def _suite_lemma24(args, rng):
    """Pairing every stage element with an incomparable outsider."""
    depth = _pick(args.depth, 2)
    u, ids = hsets.abstract_antichain(4)
    h = hierarchy_mod.build(ids[:3], depth, u, args.budget)
    _require_complete(h)
    checks = 0
    violations = []
    for alpha in range(len(h.levels)):
        rep = hierarchy_mod.fan(h.levels[alpha], ids[3], u, None)
        checks += len(rep.pair_ids)
        if not rep.ok:
            violations += [["fan", str(alpha), *map(str, v)]
                           for v in rep.violations]
        if len(rep.pair_ids) != len(h.levels[alpha]):
            violations.append(["fan_size", str(alpha)])
    return {"suite": args.suite, "checks": checks, "violations": violations}


def _suite_lemma31(args, rng):
    """The three openness characterizations agree on every function."""
    max_size = _pick(args.max_size, 3)
    preorders = []
    for n in range(1, max_size + 1):
        preorders += order_mod.enumerate_preorders(n)
    functions = 0
    violations = []

    def check(p, q, table, tag):
        f = maps_mod.PointMap(p, q, table)
        v1 = maps_mod.is_open_v1(f)
        v2 = maps_mod.is_open_v2(f)
        v3 = maps_mod.is_open_v3(f)
        if not v1 == v2 == v3:
            violations.append([tag, order_mod.to_json(p)["leq"],
                               order_mod.to_json(q)["leq"], list(table),
                               int(v1), int(v2), int(v3)])

    for p in preorders:
        for q in preorders:
            for f in maps_mod.all_functions(p, q):
                functions += 1
                check(p, q, f.table, "exhaustive")
    samples = 0
    for _ in range(args.samples):
        p = order_mod.sample_preorder(rng.choice((4, 5)), rng)
        q = order_mod.sample_preorder(rng.choice((4, 5)), rng)
        table = tuple(rng.randrange(q.n) for _ in range(p.n))
        samples += 1
        check(p, q, table, "sampled")
    return {"suite": args.suite, "pairs": len(preorders) ** 2,
            "functions": functions, "samples": samples,
            "checks": functions + samples, "violations": violations}


def _suite_lemma32(args, rng):
    """Open maps injective on the base stay injective on the stage."""
    depth = _pick(args.depth, 1)
    max_size = _pick(args.max_size, 4)
    u, base = _resolve_base("thm33")
    h = hierarchy_mod.build(base, depth, u, args.budget)
    _require_complete(h)
    open_maps = injective = 0
    violations = []
    posets = 0
    for n in range(1, max_size + 1):
        for p in order_mod.enumerate_posets(n):
            posets += 1
            rep = maps_mod.injectivity_report(h, depth, p)
            open_maps += rep.open_maps
            injective += rep.injective_on_base
            violations += [["injectivity", n, list(t)]
                           for t in rep.violations]
    return {"suite": args.suite, "posets": posets, "open_maps": open_maps,
            "injective_on_base": injective, "checks": open_maps,
            "violations": violations}


def _suite_thm26(args, rng):
    """Strict growth of the doubleton tower, fanned against the triple."""
    depth = _pick(args.depth, 3)
    u, ids = hsets.abstract_antichain(3)
    rep = hierarchy_mod.growth_witness(ids, depth, u, args.budget)
    violations = []
    if rep.min_growth < 3:
        violations.append(["growth_below_three", rep.growth])
    if not rep.fans_ok:
        violations.append(["fans"])
    return {"suite": args.suite, "level_sizes": rep.level_sizes,
            "growth": rep.growth, "fan_sizes": rep.fan_sizes,
            "checks": len(rep.growth) + len(rep.fan_sizes),
            "violations": violations}


def _suite_coreflect(args, rng):
    """Definitional vs fixpoint coreflection, then the universal property."""
    states = _pick(args.states, 3)
    max_size = _pick(args.max_size, 2)
    checks = 0
    violations = []
    frames = []
    for n in range(1, states + 1):
        batch = (kripke_mod.enumerate_frames(n) if n <= 3
                 else kripke_mod.frames_up_to_iso(n))
        frames += batch
    for i, f in enumerate(frames):
        checks += 1
        if kripke_mod.coreflect_fixpoint(f) != kripke_mod.coreflect(f).member_mask:
            violations.append(["fixpoint_mismatch", i])
    preorders = []
    for n in range(1, max_size + 1):
        preorders += order_mod.enumerate_preorders(n)
    for i, f in enumerate(frames):
        for p in preorders:
            rep = kripke_mod.verify_coreflection(f, p)
            checks += rep.pmorphisms
            if not rep.ok:
                violations.append(["universal", i, order_mod.to_json(p)["leq"],
                                   [list(map(str, v)) for v in rep.violations]])
    return {"suite": args.suite, "frames": len(frames),
            "preorders": len(preorders), "checks": checks,
            "violations": violations}


def _suite_duality(args, rng):
    """Unit isomorphism and fullness of the downset functor."""
    max_size = _pick(args.max_size, 4)
    checks = 0
    violations = []
    posets = []
    for n in range(1, max_size + 1):
        posets += order_mod.enumerate_posets(n)
    for i, p in enumerate(posets):
        checks += 1
        if not heyting_mod.verify_adjunction_unit(p):
            violations.append(["unit", i])
    small = [p for p in posets if p.n <= 3]
    for i, p in enumerate(small):
        for j, q in enumerate(small):
            rep = heyting_mod.fullness_report(p, q)
            checks += 1
            if not rep.ok:
                violations.append(["fullness", i, j, rep.open_maps,
                                   rep.morphisms])
    return {"suite": args.suite, "posets": len(posets),
            "fullness_pairs": len(small) ** 2, "checks": checks,
            "violations": violations}


def _suite_bao(args, rng):
    """Closure-algebra bridge, modal inequality, and the frame round trip."""
    states = _pick(args.states, 3)
    checks = 0
    violations = []
    for n in range(1, states + 1):
        for i, f in enumerate(kripke_mod.enumerate_frames(n)):
            checks += 1
            if not kripke_mod.closure_iff_preorder(f):
                violations.append(["closure_bridge", n, i])
            if n <= 3 and not kripke_mod.verify_bao_adjunction(f):
                violations.append(["round_trip", n, i])
    sampled = 0
    for _ in range(args.samples):
        f = kripke_mod.sample_frame(5, rng)
        sampled += 1
        if not kripke_mod.closure_iff_preorder(f):
            violations.append(["closure_bridge_sampled",
                               kripke_mod.frame_to_json(f)["relation"]])
    checks += sampled
    baos = 0
    for _ in range(64):
        dia = tuple(rng.getrandbits(4) | 0 for _ in range(4))
        a = kripke_mod.FiniteBAO(4, dia)
        rep = kripke_mod.box_diamond_report(a)
        baos += 1
        checks += rep.pairs_checked
        if not rep.ok:
            violations.append(["box_diamond", list(dia)])
    for f in kripke_mod.enumerate_frames(2):
        for g in kripke_mod.enumerate_frames(2):
            rep = kripke_mod.fullness_frames_report(f, g)
            checks += rep.functions
            if not rep.ok:
                violations.append(["powerset_fullness",
                                   kripke_mod.frame_to_json(f)["relation"],
                                   kripke_mod.frame_to_json(g)["relation"]])
    return {"suite": args.suite, "frames_sampled": sampled,
            "baos_sampled": baos, "checks": checks, "violations": violations}


_SUITE_FUNCS = {
    "lemma23": _suite_lemma23,
    "lemma24": _suite_lemma24,
    "lemma31": _suite_lemma31,
    "lemma32": _suite_lemma32,
    "thm26": _suite_thm26,
    "coreflect": _suite_coreflect,
    "duality": _suite_duality,
    "bao": _suite_bao,
}


def cmd_verify(args):
    if args.budget <= 0 or args.samples < 0:
        raise FormatError("budget must be positive and samples nonnegative")
    rng = Random(args.seed)
    payload = _SUITE_FUNCS[args.suite](args, rng)
    code = EXIT_OK if not payload["violations"] else EXIT_FAIL
    return code, payload, None


# ---------------------------------------------------------------------------
# obstruct

def cmd_obstruct(args):
    if args.depth < 1 or args.budget <= 0:
        raise FormatError("depth must be >= 1 and budget positive")
    u, base = _resolve_base("thm33")
    h = hierarchy_mod.build(base, args.depth, u, args.budget)
    _require_complete(h)
    s = sierpinski()
    if args.poset is not None:
        posets = [(args.poset, _resolve_poset(args.poset))]
    else:
        if args.all_posets < 1:
            raise FormatError("--all-posets needs a positive bound")
        posets = []
        for n in range(1, args.all_posets + 1):
            posets += [(f"poset{n}.{i}", p) for i, p in
                       enumerate(order_mod.enumerate_posets(n))]

    certificates = []
    refuted = 0
    for name, p in posets:
        opens = maps_mod.enumerate_open_maps(p, s)
        for p1 in opens:
            for p2 in opens:
                tick = time.perf_counter() if args.timing else None
                verdict = maps_mod.product_obstruction(p, p1, p2, h,
                                                       args.depth)
                refuted += verdict.refuted
                certificates.append({
                    "poset": name,
                    "size": p.n,
                    "p1": list(p1.table),
                    "p2": list(p2.table),
                    "certificate_kind": verdict.certificate_kind,
                    "stage": verdict.stage,
                    "candidates_examined": sum(
                        st.candidates_examined for st in verdict.searches),
                    "mediating_found": sum(
                        st.mediating_found for st in verdict.searches),
                    "elapsed": (round(time.perf_counter() - tick, 6)
                                if args.timing else None),
                })
    payload = {
        "posets": len(posets),
        "candidates": len(certificates),
        "refuted": refuted,
        "certificates": certificates,
    }
    code = EXIT_OK if refuted == len(certificates) else EXIT_FAIL
    return code, payload, None


# ---------------------------------------------------------------------------
# entry point

def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        code, payload, document = args.func(args)
    except BudgetError as exc:
        code, payload, document = EXIT_BUDGET, {"error": str(exc)}, None
    except FinordError as exc:
        print(f"finord: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"finord: error: {exc}", file=sys.stderr)
        return EXIT_FAIL

    elapsed = round(time.perf_counter() - start, 6) if args.timing else None
    report = _render(args.command, _config_of(args), payload, elapsed)
    if document is not None:
        if args.out:
            args.out.write_text(document, encoding="utf-8")
            sys.stdout.write(report)
        else:
            sys.stdout.write(document)
    else:
        if args.out:
            args.out.write_text(report, encoding="utf-8")
        sys.stdout.write(report)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
