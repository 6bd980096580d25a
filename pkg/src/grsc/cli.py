"""``grsc`` command line.

Exit codes: 0 all requested checks pass, 1 a checked property fails,
2 usage or input error, 3 inconclusive because a cap was hit.

Words are whitespace separated tokens with ``-`` marking inverses.  Pass
them as one quoted argument (``"a -b"``) or after ``--``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
import warnings
from pathlib import Path

from . import fixtures
from .cancellation import (DEFAULT_CYCLE_CAP, Certificate, CycleCapExceeded, check_gr16,
                           presentation, rh_certificate)
from .diagrams import (CrossingNotFound, DiagramError, PreconditionError, classify_strebel,
                       degrees, fill_word, interior_arcs_are_pieces, parse_diagram,
                       quad_crossing_path, reduce as reduce_diagram, validate_diagram)
from .geometry import BallCapExceeded, HeuristicReductionWarning, cayley_ball, dehn_reduce
from .graph import GraphSyntaxError, NotReducedError, aut_orbits, parse_graph, validate_reduced
from .metric import verify_all
from .pieces import enumerate_pieces, max_piece_length
from .words import WordSyntaxError

OK, FAILS, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str):
    p = Path(path)
    if not p.exists():
        stem = p.name[:-4] if p.name.endswith(".lgf") else p.name
        if stem in fixtures.NAMES:
            data = fixtures.text(stem).encode("utf-8")
            return data, f"fixture:{stem}"
        raise InputError(f"cannot read {path}")
    try:
        return p.read_bytes(), str(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _load_graph(path: str, report: dict):
    data, source = _read(path)
    report["inputs"]["graph"] = {"path": path, "source": source, "sha256": _digest(data)}
    try:
        g = parse_graph(data.decode("utf-8"))
    except (GraphSyntaxError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None
    bad = validate_reduced(g)
    if bad:
        raise InputError(f"{path}: labelling not reduced: {bad[0]}")
    return g


def _load_diagram(path: str, report: dict):
    data, source = _read(path)
    report["inputs"]["diagram"] = {"path": path, "source": source, "sha256": _digest(data)}
    try:
        return parse_diagram(data.decode("utf-8"))
    except (DiagramError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _word(g, tokens):
    try:
        return g.alphabet.parse_word(" ".join(tokens))
    except WordSyntaxError as exc:
        raise InputError(str(exc)) from None


def _certified_presentation(g, args, report):
    verdict = check_gr16(g, args.cap_cycles)
    try:
        p = presentation(g, args.cap_cycles, certified=bool(verdict.holds))
    except CycleCapExceeded as exc:
        report["verdict"] = "inconclusive"
        report["reason"] = str(exc)
        return None, verdict
    report["certified"] = bool(verdict.holds)
    return p, verdict


# ---------------------------------------------------------------- commands

def cmd_check(args, report, out):
    g = _load_graph(args.graph, report)
    v = check_gr16(g, args.cap_cycles)
    report["piece_bound"] = str(v.piece_bound)
    if v.holds is None:
        report["verdict"] = "inconclusive"
        out(f"inconclusive: more than {args.cap_cycles} simple cycles (pieces {v.piece_bound})")
        return INCONCLUSIVE
    if v.holds:
        report["verdict"] = "holds"
        out(f"Gr'(1/6) holds; pieces {v.piece_bound}")
        return OK
    cyc, piece = v.violation
    report["verdict"] = "fails"
    report["witness"] = {"piece": g.alphabet.format_word(piece), "piece_length": len(piece),
                         "cycle_vertices": list(cyc.vertices),
                         "cycle_word": g.alphabet.format_word(cyc.word),
                         "cycle_length": cyc.length}
    out(f"Gr'(1/6) fails: piece '{g.alphabet.format_word(piece)}' of length {len(piece)} "
        f"on a simple cycle of length {cyc.length} (6*{len(piece)} >= {cyc.length})")
    return FAILS


def cmd_pieces(args, report, out):
    g = _load_graph(args.graph, report)
    orbits = aut_orbits(g)
    bound = max_piece_length(g, orbits)
    report["piece_bound"] = str(bound)
    report["witness"] = g.alphabet.format_word(bound.witness)
    out(f"pieces: {bound}  witness: {g.alphabet.format_word(bound.witness) or '(empty)'}")
    if args.max_len:
        words = enumerate_pieces(g, args.max_len, orbits)
        report["pieces"] = [g.alphabet.format_word(w) for w in words]
        for w in words:
            out("  " + g.alphabet.format_word(w))
    report["verdict"] = "ok"
    return OK


def cmd_presentation(args, report, out):
    g = _load_graph(args.graph, report)
    try:
        p = presentation(g, args.cap_cycles)
    except CycleCapExceeded as exc:
        report["verdict"] = "inconclusive"
        out(f"inconclusive: {exc}")
        return INCONCLUSIVE
    report["generators"] = list(g.alphabet.names)
    report["relators"] = [g.alphabet.format_word(r) for r in p.relators]
    report["verdict"] = "ok"
    out(p.format())
    return OK


def _dehn(g, args, report, out):
    p, _ = _certified_presentation(g, args, report)
    if p is None:
        out("inconclusive: " + report["reason"])
        return None, None
    w = _word(g, args.word)
    if not p.certified:
        out("note: Gr'(1/6) not certified; reduction is heuristic")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HeuristicReductionWarning)
        z = dehn_reduce(p, w)
    report["word"] = g.alphabet.format_word(w)
    report["reduced"] = g.alphabet.format_word(z)
    return p, z


def cmd_reduce(args, report, out):
    g = _load_graph(args.graph, report)
    p, z = _dehn(g, args, report, out)
    if p is None:
        return INCONCLUSIVE
    report["verdict"] = "ok"
    out(g.alphabet.format_word(z) or "(empty)")
    return OK


def cmd_istrivial(args, report, out):
    g = _load_graph(args.graph, report)
    p, z = _dehn(g, args, report, out)
    if p is None:
        return INCONCLUSIVE
    trivial = len(z) == 0
    report["trivial"] = trivial
    report["verdict"] = "trivial" if trivial else "nontrivial"
    out("trivial" if trivial else f"not trivial (reduces to {g.alphabet.format_word(z)})")
    return OK if trivial else FAILS


def cmd_ball(args, report, out):
    g = _load_graph(args.graph, report)
    p, _ = _certified_presentation(g, args, report)
    if p is None:
        out("inconclusive: " + report["reason"])
        return INCONCLUSIVE
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", HeuristicReductionWarning)
            b = cayley_ball(p, args.radius)
    except BallCapExceeded as exc:
        report["verdict"] = "inconclusive"
        out(f"inconclusive: {exc}")
        return INCONCLUSIVE
    report["ball"] = b.to_dict()
    report["verdict"] = "ok"
    out(f"ball of radius {args.radius}: {len(b)} elements, {len(b.edges())} edges")
    return OK


def _certificate(g, args, report, out):
    cert = rh_certificate(g, args.cap_cycles)
    if not isinstance(cert, Certificate):
        capped = cert.reason.startswith("inconclusive")
        report["verdict"] = "inconclusive" if capped else "refused"
        report["reason"] = cert.reason
        out(f"certificate refused: {cert.reason}")
        return None, INCONCLUSIVE if capped else FAILS
    return cert, OK


def cmd_certificate(args, report, out):
    g = _load_graph(args.graph, report)
    cert, code = _certificate(g, args, report, out)
    if cert is None:
        return code
    report.update(cert.to_dict())
    report["verdict"] = "relatively-hyperbolic"
    out(cert.to_text())
    return OK


def cmd_verify(args, report, out):
    g = _load_graph(args.graph, report)
    cert, code = _certificate(g, args, report, out)
    if cert is None:
        return code
    p = presentation(g, args.cap_cycles, certified=True)
    try:
        b = cayley_ball(p, args.radius)
    except BallCapExceeded as exc:
        report["verdict"] = "inconclusive"
        out(f"inconclusive: {exc}")
        return INCONCLUSIVE
    res = verify_all(b, g, cert.piece_bound, args.delta, args.seed,
                     cap_geodesics=args.cap_geodesics)
    report["checks"] = res
    passed = res["contraction"]["passed"] and res["lambda1"]["passed"] and res["lambda2"]["passed"]
    report["verdict"] = "pass" if passed else "fail"
    c, l1, l2 = res["contraction"], res["lambda1"], res["lambda2"]
    out(f"ball radius {b.radius}: {len(b)} elements; M = {cert.piece_bound}, delta = {args.delta}, seed = {args.seed}")
    for r in c["components"]:
        out(f"  contraction (bound {c['bound']}): component {r['component']} "
            f"scored {r['scored']}, censored {r['censored']}, max {r['max_observed']}, "
            f"{'pass' if r['passed'] else 'FAIL'}")
    out(f"  lambda1 (bound {l1['bound']}): {l1['pairs']} pairs, censored {l1['censored']}, "
        f"max {l1['max_observed']}, piece paths {'ok' if l1['piece_paths_ok'] else 'BAD'}, "
        f"{'pass' if l1['passed'] else 'FAIL'}")
    for r in l2["components"]:
        out(f"  lambda2 (radius {l2['radius']}): component {r['component']} "
            f"{', '.join(f'{k} {v}' for k, v in r['counts'].items())}, "
            f"{'pass' if r['passed'] else 'FAIL'}")
    return OK if passed else FAILS


def cmd_fill(args, report, out):
    g = _load_graph(args.graph, report)
    p, verdict = _certified_presentation(g, args, report)
    if p is None:
        out("inconclusive: " + report["reason"])
        return INCONCLUSIVE
    w = _word(g, args.word)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HeuristicReductionWarning)
        try:
            d = fill_word(p, w)
        except ValueError as exc:
            report["verdict"] = "nontrivial"
            out(str(exc))
            return FAILS
    pieces_ok = interior_arcs_are_pieces(d, g)
    report["diagram"] = d.serialize()
    report["faces"] = len(d.faces)
    report["interior_arcs_are_pieces"] = pieces_ok
    report["verdict"] = "ok"
    out(d.serialize().rstrip())
    out(f"# {len(d.faces)} faces; interior arcs are pieces: {pieces_ok}")
    return OK


def cmd_diagram(args, report, out):
    d = _load_diagram(args.diagram, report)
    action = args.action
    if action == "validate":
        v = validate_diagram(d)
        report.update(v.to_dict())
        if v.ok:
            report["degrees"] = {str(f): list(degrees(d, f)) for f in sorted(d.faces)}
        report["verdict"] = "ok" if v.ok else "invalid"
        out("valid diagram" if v.ok else "invalid diagram")
        for msg in v.errors + v.seven_violations + (v.ngon_violations if d.sides else []):
            out("  " + msg)
        if v.ok:
            out(f"  (3,7): {'yes' if v.is_37 else 'no'}; "
                f"combinatorial {d.n_sides}-gon: {'yes' if v.is_ngon else 'no'}")
        return OK if v.ok else FAILS
    try:
        if action == "classify":
            form = classify_strebel(d)
            report["form"] = form.value
            report["verdict"] = "ok"
            out(f"Strebel form {form.value}")
            return OK
        if action == "reduce":
            reds = reduce_diagram(d)
            report["reductions"] = [r.to_dict() for r in reds]
            report["irreducible"] = not reds
            report["verdict"] = "ok"
            out("irreducible" if not reds else f"{len(reds)} reduction(s)")
            for r in reds:
                out(f"  {r.kind} reduction at {r.where}: parts with "
                    f"{[len(x.faces) for x in r.parts]} faces")
            return OK
        path = quad_crossing_path(d)
        report["crossing"] = path.to_dict()
        report["verdict"] = "ok"
        out(f"sides {path.sides[0]} and {path.sides[1]} joined by {path.length} interior arc(s): "
            + " ".join(map(str, path.vertices)))
        return OK
    except PreconditionError as exc:
        raise InputError(f"{args.diagram}: {exc}") from None
    except CrossingNotFound as exc:
        report["verdict"] = "not-found"
        out(f"crossing path not found: {exc}")
        return FAILS


# ---------------------------------------------------------------- parser

def _common(p):
    p.add_argument("--cap-cycles", type=int, default=DEFAULT_CYCLE_CAP, metavar="N",
                   help="simple-cycle enumeration cap")
    p.add_argument("--json", metavar="PATH", help="write a JSON report")
    p.add_argument("--quiet", action="store_true", help="suppress human-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grsc", description="graphical small cancellation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_cmd(name, helptext, func, word=False):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("graph", help=".lgf file or bundled fixture name")
        if word:
            p.add_argument("word", nargs="*", help="word tokens")
        _common(p)
        p.set_defaults(func=func)
        return p

    graph_cmd("check", "decide the Gr'(1/6) condition", cmd_check)
    p = graph_cmd("pieces", "maximum piece length", cmd_pieces)
    p.add_argument("--max-len", type=int, default=0, metavar="K", help="also list pieces up to length K")
    graph_cmd("presentation", "relators read from simple cycles", cmd_presentation)
    graph_cmd("reduce", "Dehn-reduce a word", cmd_reduce, word=True)
    graph_cmd("istrivial", "decide whether a word is trivial", cmd_istrivial, word=True)
    p = graph_cmd("ball", "Cayley ball", cmd_ball)
    p.add_argument("--radius", type=int, required=True)
    p = graph_cmd("verify", "check contraction and penetration bounds in a ball", cmd_verify)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--delta", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap-geodesics", type=int, default=16, metavar="N")
    graph_cmd("certificate", "relative hyperbolicity certificate", cmd_certificate)
    graph_cmd("fill", "disc diagram for a trivial word", cmd_fill, word=True)

    p = sub.add_parser("diagram", help="combinatorial diagram operations")
    p.add_argument("action", choices=["validate", "classify", "reduce", "cross"])
    p.add_argument("diagram", help=".dgf file")
    _common(p)
    p.set_defaults(func=cmd_diagram)
    return parser


def _echo(argv):
    # the report destination is not an input, keep it out of the echo
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--json":
            skip = True
        elif not a.startswith("--json="):
            out.append(a)
    return out


def run(argv=None, stdout=None) -> tuple:
    """Run a command; return (exit code, report dict)."""
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else USAGE), {}
    for name in ("radius", "delta", "max_len", "cap_cycles", "cap_geodesics"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"grsc: error: --{name.replace('_', '-')} must be non-negative", file=sys.stderr)
            return USAGE, {}
    report = {"command": _echo(argv), "inputs": {}}
    lines = []

    def out(text):
        lines.append(text)
        if not args.quiet:
            print(text, file=stdout)

    t0 = time.perf_counter()
    try:
        code = args.func(args, report, out)
    except (InputError, NotReducedError) as exc:
        print(f"grsc: error: {exc}", file=sys.stderr)
        return USAGE, report
    report["exit_code"] = code
    if not args.quiet:
        print(f"({time.perf_counter() - t0:.2f}s)", file=stdout)
    if args.json:
        try:
            Path(args.json).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                                       encoding="utf-8")
        except OSError as exc:
            print(f"grsc: error: cannot write {args.json}: {exc.strerror}", file=sys.stderr)
            return USAGE, report
    return code, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
