"""Command-line front door: benchmark runs, an interactive REPL, and the
HTTP service."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dsl.program import render_program
from .executor import AgentSession, Executor, ExecutorConfig
from .memory.embedding import HashEmbedder
from .memory.store import MemoryStore
from .planner.backends import BackendError, RemoteBackend, ScriptedBackend
from .planner.dialogue import Dialogue
from .planner.planner import PlanError, Planner, PlannerConfig
from .resources import data_path
from .session.episodes import (
    ABLATIONS,
    EpisodeRunConfig,
    episode_rng,
    load_episode,
    run_episode,
)
from .session.feedback import FEEDBACK_QUESTION
from .session.metrics import compute_metrics
from .world.loader import load_world


def make_backend(spec: str):
    kind, _, arg = spec.partition(":")
    if kind == "mock":
        if not arg:
            raise SystemExit("mock backend needs a fixture path: mock:FILE")
        return ScriptedBackend(arg)
    if kind == "remote":
        if not arg:
            raise SystemExit("remote backend needs a URL: remote:URL")
        return RemoteBackend(arg)
    raise SystemExit(f"unknown backend '{spec}' (use mock:FILE or remote:URL)")


def make_store(memory: str | None) -> MemoryStore:
    embedder = HashEmbedder()
    if memory is not None:
        return MemoryStore.load(memory, embedder)
    bundled = data_path("memory/seed_memory.jsonl")
    if bundled.exists():
        return MemoryStore.load(bundled, embedder)
    return MemoryStore(embedder)


def cmd_run(args) -> int:
    backend = make_backend(args.backend)
    planner = Planner(backend, make_store(args.memory), PlannerConfig())
    episode_files = sorted(Path(args.episodes).glob("*.json"))
    if not episode_files:
        raise SystemExit(f"no episode files in {args.episodes}")
    ablations = frozenset(args.ablate.split(",")) - {""} if args.ablate else frozenset()
    config = EpisodeRunConfig(
        feedback_rounds=args.feedback,
        ablations=ablations,
        seed=args.seed,
    )
    rows = []
    for path in episode_files:
        episode = load_episode(path)
        if hasattr(backend, "set_context"):
            backend.set_context(episode.episode_id)
        result, _ = run_episode(episode, planner, config)
        rows.append(result)
        status = "ok" if result.success else "FAIL"
        print(f"{result.episode_id:30s} {status:4s} "
              f"gc {result.gc_met}/{result.gc_total} steps {result.steps}")
    metrics = compute_metrics(rows)
    print(f"SR {metrics['sr']:.3f}  GC {metrics['gc']:.3f}  "
          f"SR-PLW {metrics['sr_plw']:.3f}  GC-PLW {metrics['gc_plw']:.3f}")
    if args.out:
        payload = {
            "config": {
                "backend": backend.identity,
                "feedback_rounds": args.feedback,
                "ablations": sorted(ablations),
                "seed": args.seed,
                "episodes": [r.episode_id for r in rows],
            },
            "per_episode": [r.to_record() for r in rows],
            "metrics": metrics,
        }
        Path(args.out).write_text(
            json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return 0 if all(r.success for r in rows) else 1


def cmd_repl(args) -> int:
    backend = make_backend(args.backend)
    planner = Planner(backend, make_store(args.memory), PlannerConfig())
    world = load_world(args.world)
    session = AgentSession(world)
    session.start()
    executor = Executor(session, planner, ExecutorConfig(),
                        episode_rng(args.seed, "repl"))
    print(f"loaded {world.name}; type an instruction (empty line quits)")
    while True:
        try:
            text = input("you> ").strip()
        except EOFError:
            break
        if not text or text in ("quit", "exit"):
            break
        dialogue = Dialogue.from_pairs([("Commander", text)])
        rounds = 0
        while True:
            try:
                plan = planner.synthesize_plan(dialogue)
            except (BackendError, PlanError) as exc:
                print(f"planning failed: {exc}")
                break
            print("plan:")
            for line in render_program(plan.program).splitlines():
                print(f"  {line}")
            trace = executor.execute_program(plan.program, dialogue)
            for rec in trace.records:
                suffix = f" ({rec.error_text})" if rec.error_text else ""
                print(f"  [{rec.outcome}] {rec.source}{suffix}")
            if trace.aborted or rounds >= args.feedback:
                break
            print(f"agent> {FEEDBACK_QUESTION}")
            try:
                answer = input("you> ").strip()
            except EOFError:
                answer = ""
            if not answer:
                break
            dialogue = Dialogue.from_pairs(
                list(dialogue.turns) + [("Commander", answer)])
            rounds += 1
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .session.service import create_app

    backend = make_backend(args.backend)
    app = create_app(backend, episodes_dir=args.episodes,
                     store=make_store(args.memory))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="butler",
        description="instructable household agent on a grid simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="score a directory of episodes")
    p_run.add_argument("--episodes", required=True)
    p_run.add_argument("--backend", required=True,
                       help="mock:FIXTURE or remote:URL")
    p_run.add_argument("--feedback", type=int, default=0, choices=(0, 1, 2))
    p_run.add_argument("--ablate", default="",
                       help=f"comma list from {','.join(ABLATIONS)}")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--memory", default=None,
                       help="memory JSONL (default: bundled seed)")
    p_run.add_argument("--out", default=None, help="results JSON path")
    p_run.set_defaults(func=cmd_run)

    p_repl = sub.add_parser("repl", help="interactive session on one world")
    p_repl.add_argument("--world", required=True)
    p_repl.add_argument("--backend", required=True)
    p_repl.add_argument("--feedback", type=int, default=2)
    p_repl.add_argument("--seed", type=int, default=0)
    p_repl.add_argument("--memory", default=None)
    p_repl.set_defaults(func=cmd_repl)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8642)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--backend", required=True)
    p_serve.add_argument("--episodes", default=None)
    p_serve.add_argument("--memory", default=None)
    p_serve.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
