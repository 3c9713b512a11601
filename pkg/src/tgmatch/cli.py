"""Command-line front end over a workspace directory.

Exit codes: 0 success, 1 operational error, 2 usage error (argparse).
Pass ``--json`` on reporting commands for machine-readable output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import TgmatchError
from .matcher import propose
from .server import session_summary
from .similarity import SimilarityConfig
from .workspace import Workspace


def _print(payload, as_json: bool, text_lines=None):
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in (text_lines if text_lines is not None else [json.dumps(payload)]):
            print(line)


def cmd_load(ws: Workspace, args) -> int:
    edges = Path(args.edges).read_bytes()
    nodes = Path(args.nodes).read_bytes() if args.nodes else None
    entry = ws.add_graph(args.id, edges, nodes)
    summary = ws.graph_summary(args.id)
    _print(summary, args.json, [
        f"loaded graph '{args.id}': {entry.graph.n_nodes} nodes, {entry.graph.n_edges} edges",
    ])
    return 0


def cmd_remove(ws: Workspace, args) -> int:
    ws.remove_graph(args.id)
    _print({"removed": args.id}, args.json, [f"removed graph '{args.id}'"])
    return 0


def cmd_list(ws: Workspace, args) -> int:
    graphs = ws.list_graphs()
    _print({"graphs": graphs}, args.json, [
        f"{g['id']}: {g['nodes']} nodes, {g['edges']} edges" for g in graphs
    ] or ["(no graphs loaded)"])
    return 0


def cmd_stats(ws: Workspace, args) -> int:
    from .core import stats
    st = stats(ws.view(args.id)).to_dict()
    lines = [f"nodes: {st['nodes']}", f"visible edges: {st['visible_edges']}"]
    for ch, n in sorted(st["channels"].items()):
        lines.append(f"  {ch}: {n}")
    if st["extent"]:
        lines.append(f"extent: [{st['extent'][0]}, {st['extent'][1]}]")
    _print(st, args.json, lines)
    return 0


def cmd_seeds(ws: Workspace, args) -> int:
    from .matcher import derive_seed_signature, find_seeds
    template = ws.view(args.template)
    target = ws.view(args.target)
    sig = derive_seed_signature(template)
    seeds = find_seeds(target, sig, ws.similarity_config, limit=args.limit)
    payload = {
        "signature": sig.to_dict(),
        "seeds": [{"mapping": {str(t): b for t, b in s.mapping.items()},
                   "score": s.score} for s in seeds],
    }
    _print(payload, args.json, [
        f"signature nodes: {list(sig.nodes)}",
        *(f"  {s.mapping}  score={s.score:.4f}" for s in seeds),
    ])
    return 0


def _parse_seed(text: str) -> dict[int, int]:
    seed = {}
    for part in text.split(","):
        t, _, b = part.partition(":")
        seed[int(t.strip())] = int(b.strip())
    return seed


def cmd_match(ws: Workspace, args) -> int:
    cfg = ws.similarity_config
    if args.threshold is not None:
        cfg = SimilarityConfig.from_dict({**cfg.to_dict(), "accept_threshold": args.threshold})
    seed = _parse_seed(args.seed) if args.seed else None
    session = ws.create_session(args.template, args.target, seed=seed,
                                auto_seed=seed is None, cfg=cfg)
    if args.auto:
        ws.run_auto(session.session_id, args.max_iter)
    summary = session_summary(ws, session)
    _print(summary, args.json, [
        f"session {session.session_id}",
        f"status: {session.status}",
        f"matched {len(session.S)} of {len(session.S) + len(session.T)} template nodes",
        *(f"  {t} -> {b}" for t, b in sorted(session.mapping.items())),
    ])
    return 0


def cmd_compare(ws: Workspace, args) -> int:
    candidates = [c.strip() for c in args.candidates.split(",") if c.strip()]
    ranking = ws.compare(args.template, candidates)
    _print({"ranking": ranking}, args.json, [
        f"{i + 1}. {r['candidate']}  score={r['score']:.4f}  status={r['status']}"
        for i, r in enumerate(ranking)
    ])
    return 0


def cmd_candidates(ws: Workspace, args) -> int:
    session = ws.get_session(args.id)
    pairs = propose(session, args.k)
    _print({"candidates": [c.to_dict() for c in pairs]}, args.json, [
        f"{c.frontier} -> {c.candidate}  total={c.score.total:.4f} "
        f"(presence={c.score.presence:.3f} count={c.score.count:.3f} "
        f"temporal={c.score.temporal:.3f})"
        for c in pairs
    ])
    return 0


def cmd_export_session(ws: Workspace, args) -> int:
    doc = ws.session_document(args.id)
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote session '{args.id}' to {args.output}")
    else:
        print(text)
    return 0


def cmd_serve(ws: Workspace, args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(ws)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:  # port in use
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgmatch",
        description="Temporal multigraph analytics and subgraph matching")
    parser.add_argument("--workspace", default="workspace",
                        help="workspace directory (default: ./workspace)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("load", help="load a graph from CSV files")
    p.add_argument("edges", help="edge CSV path")
    p.add_argument("--id", required=True)
    p.add_argument("--nodes", help="node CSV path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_load)

    p = sub.add_parser("remove", help="remove a graph (and its sessions)")
    p.add_argument("--id", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_remove)

    p = sub.add_parser("list", help="list loaded graphs")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("stats", help="visible-edge stats for a graph's view")
    p.add_argument("--id", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("seeds", help="derive a seed signature and search a target")
    p.add_argument("--template", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--limit", type=int, default=5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_seeds)

    p = sub.add_parser("match", help="start a match session (optionally run it)")
    p.add_argument("--template", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--seed", help="explicit seed 'tnode:gnode,tnode:gnode'")
    p.add_argument("--auto", action="store_true", help="run the automatic loop")
    p.add_argument("--threshold", type=float, help="auto accept threshold")
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("candidates", help="rank next proposals for a session")
    p.add_argument("--id", required=True)
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("compare", help="rank candidate graphs against a template")
    p.add_argument("--template", required=True)
    p.add_argument("--candidates", required=True, help="comma-separated graph ids")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("export-session", help="dump a session's replayable JSON")
    p.add_argument("--id", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_export_session)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ws = Workspace(args.workspace)
        return args.func(ws, args)
    except (TgmatchError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
