"""Command-line surface: ingestion, computation, rendering, reports.

Every command prints a run report as JSON to stdout (suppress with
--quiet).  Exit codes: 0 success, 1 a verified property failed, 2 input
error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import sofic
from .derivative import derive, rank_chain, is_countable, cylinder_class
from .errors import (BudgetExceededError, InputError, SimulationError,
                     SubshiftError, VerificationError)
from .sft2d import (
    Budget, approx_derivative_member, count_admissible, enumerate_admissible,
    extensible, make_pattern_set, pattern_from_text, pattern_to_pgm,
    pattern_to_text, tileset_from_json, tileset_to_json, window_patterns,
    make_pattern,
)
from .constructions import (
    ConfigurationWindow, chain_point, cone_render, diamond_config,
    diamond_shift, doubling_machine, grid_config, grid_shift,
    machine_from_json, poset_config, poset_from_json, trivial_machine,
    verify_chain, verify_embedding, window_from_text, window_to_text,
)


def _digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]


def _load_graph(path):
    return sofic.graph_from_json(Path(path).read_text())


def _load_tileset(path):
    return tileset_from_json(Path(path).read_text())


def _load_pattern(path):
    """Pattern text, optionally with a window JSON header as first line."""
    text = Path(path).read_text()
    first = text.splitlines()[0] if text.splitlines() else ""
    if first.lstrip().startswith("{"):
        return window_from_text(text).window
    return pattern_from_text(text)


def _load_pattern_set(path, block):
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        first = text.splitlines()[0]
        try:
            head = json.loads(first)
        except ValueError:
            head = None
        if head is not None and "patterns" in head:
            pats = [pattern_from_text("\n".join(rows)) for rows in head["patterns"]]
            return make_pattern_set(pats)
    pattern = _load_pattern(path)
    if block is None:
        raise InputError("--block is required for window inputs")
    return window_patterns(pattern, block, block)


def _budget(args):
    return Budget(max_nodes=args.max_states, timeout_s=args.timeout_s)


def _write(path, text):
    Path(path).write_text(text)


# ---------------------------------------------------------------------------
# Subcommand handlers: return (results dict, artifact list)


def cmd_contexts(args):
    g = _load_graph(args.graph)
    part = sofic.context_partition(sofic.trim(g), args.probe_len)
    classes = [{
        "representative": sofic.format_word(c.representative),
        "relation_size": len(c.relation),
        "members": c.members,
    } for c in part.classes]
    return {
        "classes": classes,
        "class_count": len(part.classes),
        "stabilized": part.stabilized,
        "stabilized_at": part.stabilized_at,
        "has_empty_context": part.has_empty_class,
    }, []


def cmd_derive(args):
    g = sofic.trim(_load_graph(args.graph))
    d = derive(g)
    _write(args.output, sofic.graph_to_json(d))
    return {
        "states": len(d.states),
        "edges": len(d.edges),
        "empty": d.is_empty,
        "output": args.output,
    }, [args.output]


def cmd_rank(args):
    g = sofic.trim(_load_graph(args.graph))
    rc = rank_chain(g)
    return {
        "rank": rc.rank,
        "chain_state_counts": [len(p.states) for p in rc.presentations],
        "countable": rc.perfect_kernel_empty,
    }, []


def cmd_countable(args):
    g = sofic.trim(_load_graph(args.graph))
    return {"countable": is_countable(g)}, []


def cmd_enum2d(args):
    ts = _load_tileset(args.tileset)
    budget = _budget(args)
    if args.count_only:
        count = count_admissible(ts, args.width, args.height, budget=budget)
        return {"count": count}, []
    pats = list(enumerate_admissible(ts, args.width, args.height, budget=budget))
    artifacts = []
    if args.output:
        doc = {"w": args.width, "h": args.height,
               "patterns": [pattern_to_text(p).splitlines() for p in pats]}
        _write(args.output, json.dumps(doc))
        artifacts.append(args.output)
    return {"count": len(pats), "output": args.output}, artifacts


def cmd_extend(args):
    ts = _load_tileset(args.tileset)
    p = _load_pattern(args.pattern)
    ok = extensible(ts, p, args.r, budget=_budget(args))
    return {"extensible": ok, "margin": args.r}, []


def cmd_approx_derive2d(args):
    ts = _load_tileset(args.tileset)
    p = _load_pattern(args.pattern)
    got = approx_derivative_member(ts, p, args.n, args.m, budget=_budget(args))
    return {"member": got, "agree": args.n, "margin": args.m}, []


def _emit_window(cw, args, results, artifacts):
    _write(args.output, window_to_text(cw))
    artifacts.append(args.output)
    results["output"] = args.output
    if args.png:
        from .viz import save_pattern_png
        alphabet = sorted({c for row in cw.window.cells for c in row})
        save_pattern_png(cw.window, alphabet, args.png,
                         title="%s %s" % (cw.generator, dict(cw.params)))
        artifacts.append(args.png)
        results["figure"] = args.png


def cmd_gen(args):
    results, artifacts = {}, []
    if args.what == "grid":
        ts = grid_shift()
        if args.tileset_out:
            _write(args.tileset_out, tileset_to_json(ts))
            artifacts.append(args.tileset_out)
            results["tileset"] = args.tileset_out
        if args.output:
            cw = grid_config(args.cell_size, args.x0, args.y0,
                             args.width, args.height)
            _emit_window(cw, args, results, artifacts)
    elif args.what == "diamond":
        ts = diamond_shift()
        if args.tileset_out:
            _write(args.tileset_out, tileset_to_json(ts))
            artifacts.append(args.tileset_out)
            results["tileset"] = args.tileset_out
        if args.output:
            cw = diamond_config(args.n, args.m, args.x0, args.y0,
                                args.width, args.height)
            _emit_window(cw, args, results, artifacts)
    elif args.what == "poset":
        p = poset_from_json(Path(args.poset).read_text())
        cw = poset_config(p, args.element, args.x0, args.y0,
                          args.width, args.height)
        _emit_window(cw, args, results, artifacts)
    elif args.what == "chain":
        cw = chain_point(args.index, args.x0, args.y0, args.width, args.height)
        _emit_window(cw, args, results, artifacts)
    elif args.what == "cone":
        m = _load_machine(args.machine)
        choices = tuple(int(c) for c in args.choices.split(",") if c != "")
        cw = cone_render(m, args.l, args.k, args.sweeps, choices=choices)
        _emit_window(cw, args, results, artifacts)
    else:
        raise InputError("unknown generator %r" % args.what)
    return results, artifacts


def _load_machine(spec):
    if spec == "doubling":
        return doubling_machine()
    if spec == "trivial":
        return trivial_machine()
    return machine_from_json(Path(spec).read_text())


def cmd_compare(args):
    a = _load_pattern_set(args.a, args.block)
    b = _load_pattern_set(args.b, args.block)
    from .sft2d import subpattern_leq
    return {
        "a_leq_b": subpattern_leq(a, b),
        "b_leq_a": subpattern_leq(b, a),
        "a_size": list(a.size), "b_size": list(b.size),
        "a_count": len(a.patterns), "b_count": len(b.patterns),
    }, []


def cmd_verify(args):
    if args.what == "chain":
        leq, geq = verify_chain(args.i, args.j, args.small, args.big)
        want = (True, True) if args.i == args.j else \
            ((True, False) if args.i < args.j else (False, True))
        results = {"leq": leq, "geq": geq,
                   "expected": {"leq": want[0], "geq": want[1]}}
        if (leq, geq) != want:
            raise VerificationError("chain comparison (%d,%d) gave %r"
                                    % (args.i, args.j, (leq, geq)))
        return results, []
    if args.what == "embedding":
        p = poset_from_json(Path(args.poset).read_text())
        mat = verify_embedding(p, args.small, args.big)
        want = {(x, y): p.below(y, x) for x in p.elements for y in p.elements}
        results = {
            "matrix": {"%s>=%s" % k: v for k, v in sorted(mat.items())},
            "matches_order": mat == want,
        }
        artifacts = []
        if args.output_dir:
            out = Path(args.output_dir)
            out.mkdir(parents=True, exist_ok=True)
            csv_path = out / "embedding_matrix.csv"
            with open(csv_path, "w") as fh:
                fh.write("," + ",".join(p.elements) + "\n")
                for x in p.elements:
                    fh.write(x + "," + ",".join(
                        "1" if mat[(x, y)] else "0" for y in p.elements) + "\n")
            artifacts.append(str(csv_path))
            png_path = out / "embedding_matrix.png"
            from .viz import save_matrix_png
            save_matrix_png(mat, p.elements, str(png_path),
                            title="pattern containment")
            artifacts.append(str(png_path))
            results["artifacts"] = artifacts
        if mat != want:
            raise VerificationError("embedding matrix differs from the order")
        return results, artifacts
    raise InputError("unknown verify target %r" % args.what)


def cmd_render(args):
    p = _load_pattern(args.pattern)
    alphabet = args.alphabet.split(",") if args.alphabet else \
        sorted({c for row in p.cells for c in row if c is not None})
    fmt = args.format or ("png" if args.output.endswith(".png") else "pgm")
    if fmt == "pgm":
        _write(args.output, pattern_to_pgm(p, alphabet))
    elif fmt == "png":
        from .viz import save_pattern_png
        save_pattern_png(p, alphabet, args.output)
    elif fmt == "text":
        _write(args.output, pattern_to_text(p) + "\n")
    else:
        raise InputError("unknown render format %r" % fmt)
    return {"output": args.output, "format": fmt,
            "size": [p.width, p.height]}, [args.output]


# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="subshift-lab",
        description="1-D sofic derivative workbench and 2-D SFT constructions")
    ap.add_argument("--quiet", action="store_true",
                    help="suppress the JSON run report")
    ap.add_argument("--max-states", type=int, default=10_000_000,
                    help="search/enumeration node budget")
    ap.add_argument("--timeout-s", type=float, default=60.0,
                    help="per-command search time budget")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("contexts", help="context classes of a 1-D presentation")
    p.add_argument("graph")
    p.add_argument("--probe-len", type=int, default=8)
    p.set_defaults(fn=cmd_contexts)

    p = sub.add_parser("derive", help="derivative presentation")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_derive)

    p = sub.add_parser("rank", help="derivative chain and rank")
    p.add_argument("graph")
    p.set_defaults(fn=cmd_rank)

    p = sub.add_parser("countable", help="emptiness of the perfect kernel")
    p.add_argument("graph")
    p.set_defaults(fn=cmd_countable)

    p = sub.add_parser("enum2d", help="enumerate admissible rectangles")
    p.add_argument("tileset")
    p.add_argument("--w", dest="width", type=int, required=True)
    p.add_argument("--h", dest="height", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_enum2d)

    p = sub.add_parser("extend", help="margin extensibility of a pattern")
    p.add_argument("tileset")
    p.add_argument("pattern")
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(fn=cmd_extend)

    p = sub.add_parser("approx-derive2d",
                       help="finite-scale derivative membership probe")
    p.add_argument("tileset")
    p.add_argument("pattern")
    p.add_argument("--n", type=int, required=True, help="agreement square")
    p.add_argument("--m", type=int, required=True, help="extension margin")
    p.set_defaults(fn=cmd_approx_derive2d)

    p = sub.add_parser("gen", help="run a construction generator")
    p.add_argument("what", choices=["grid", "diamond", "poset", "chain", "cone"])
    p.add_argument("-o", "--output", help="window output file")
    p.add_argument("--tileset-out", help="tile set JSON output (grid/diamond)")
    p.add_argument("--png", help="also render the window to this PNG")
    p.add_argument("--cell-size", type=int, default=2)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--poset", help="poset JSON file")
    p.add_argument("--element")
    p.add_argument("--index", type=int, default=1)
    p.add_argument("--machine", default="doubling",
                   help="'doubling', 'trivial' or a machine JSON file")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--sweeps", type=int, default=8)
    p.add_argument("--choices", default="")
    p.add_argument("--x0", type=int, default=-16)
    p.add_argument("--y0", type=int, default=-16)
    p.add_argument("--w", dest="width", type=int, default=33)
    p.add_argument("--h", dest="height", type=int, default=33)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("compare", help="subpattern comparison of pattern sets")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--block", type=int, default=None,
                   help="block size when inputs are window files")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("verify", help="check a construction property")
    p.add_argument("what", choices=["chain", "embedding"])
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--small", type=int, default=None)
    p.add_argument("--big", type=int, default=512)
    p.add_argument("--poset")
    p.add_argument("-o", "--output-dir")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("render", help="export a pattern to PGM/PNG/text")
    p.add_argument("pattern")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--format", choices=["pgm", "png", "text"])
    p.add_argument("--alphabet", help="comma-separated symbol order")
    p.set_defaults(fn=cmd_render)

    return ap


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify" and args.small is None:
        args.small = 8 if args.what == "chain" else 4
    started = time.monotonic()
    inputs = {}
    for name in ("graph", "tileset", "pattern", "poset", "a", "b"):
        path = getattr(args, name, None)
        if path and Path(str(path)).is_file():
            inputs[str(path)] = _digest(path)
    try:
        results, artifacts = args.fn(args)
        code = 0
    except VerificationError as exc:
        results, artifacts, code = {"error": str(exc), "kind": "verification"}, [], 1
    except (InputError, SimulationError, FileNotFoundError) as exc:
        results, artifacts, code = {"error": str(exc), "kind": "input"}, [], 2
    except BudgetExceededError as exc:
        results = {"error": str(exc), "kind": "budget", "partial": exc.partial}
        artifacts, code = [], 3
    report = {
        "command": args.command,
        "argv": argv,
        "inputs": inputs,
        "results": results,
        "artifacts": artifacts,
        "elapsed_s": round(time.monotonic() - started, 3),
        "budget": {"max_states": args.max_states, "timeout_s": args.timeout_s},
    }
    if not args.quiet:
        print(json.dumps(report, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
