"""Command-line client for the experiment service.

By default commands talk to an in-process instance of the service, so
no server needs to be running; point FAIRFEDCS_SERVER (or --server) at
a remote instance to execute there instead. Output directories default
to FAIRFEDCS_OUT_ROOT (falling back to ./runs).

Exit codes: 0 success, 2 configuration error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import asyncio
import os
import sys
from dataclasses import asdict
from pathlib import Path

import httpx

from .config import POLICIES, ConfigError, ExperimentConfig, load_config
from .service import create_app

OUT_ROOT_ENV = "FAIRFEDCS_OUT_ROOT"
SERVER_ENV = "FAIRFEDCS_SERVER"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _out_root() -> Path:
    return Path(os.environ.get(OUT_ROOT_ENV, "runs"))


def _wire_config(config: ExperimentConfig) -> dict:
    return {k: v for k, v in asdict(config).items() if v is not None}


def _post(path: str, payload: dict, server: str | None) -> dict:
    """Send one request to the configured server or an in-process app."""
    server = server or os.environ.get(SERVER_ENV)

    async def _go() -> httpx.Response:
        if server:
            client = httpx.AsyncClient(base_url=server, timeout=None)
        else:
            client = httpx.AsyncClient(
                transport=httpx.ASGITransport(app=create_app()),
                base_url="http://fairfedcs.local",
                timeout=None,
            )
        async with client:
            return await client.post(path, json=payload)

    try:
        response = asyncio.run(_go())
    except httpx.HTTPError as exc:
        print(f"error: request failed: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_RUNTIME)
    if response.status_code in (400, 422):
        print(f"error: {response.json()['detail']}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)
    if response.status_code != 200:
        print(f"error: server returned {response.status_code}: {response.text}", file=sys.stderr)
        raise SystemExit(EXIT_RUNTIME)
    return response.json()


def _load_config_or_exit(path: str) -> ExperimentConfig:
    try:
        return load_config(path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def parse_seed_list(text: str) -> list[int]:
    """Comma-separated seeds with inclusive ranges: "0-4,7" -> [0,1,2,3,4,7]."""
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def cmd_run(args: argparse.Namespace) -> int:
    config = _load_config_or_exit(args.config)
    out_dir = Path(args.out) if args.out else _out_root() / f"run_{config.policy}_seed{config.seed}"
    result = _post(
        "/run",
        {
            "config": _wire_config(config),
            "out_dir": str(out_dir),
            "full_trace": args.full_trace,
        },
        args.server,
    )
    summary = result["summary"]
    line = (
        f"policy={config.policy} seed={config.seed} jfi={summary['jfi']:.4f} "
        f"final_accuracy={summary['final_accuracy']:.4f} rounds={summary['rounds_executed']}"
    )
    if summary.get("minority_class_accuracy") is not None:
        line += f" minority_class_accuracy={summary['minority_class_accuracy']:.4f}"
    print(line)
    for path in result["files"]:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config_or_exit(args.config)
    policies = [p.strip() for p in args.policies.split(",") if p.strip()]
    try:
        seeds = parse_seed_list(args.seeds)
    except ValueError:
        print(f"error: cannot parse seed list {args.seeds!r}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out) if args.out else _out_root() / "sweep"
    result = _post(
        "/sweep",
        {
            "config": _wire_config(config),
            "policies": policies,
            "seeds": seeds,
            "out_dir": str(out_dir),
        },
        args.server,
    )
    print(f"completed {len(result['cells'])} runs ({len(policies)} policies x {len(seeds)} seeds)")
    print(f"wrote {result['sweep_csv']}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    out_dir = Path(args.out) if args.out else _out_root() / "report"
    result = _post("/report", {"sweep_dir": args.sweep, "out_dir": str(out_dir)}, args.server)
    for path in result["files"]:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairfedcs",
        description="Fairness-aware federated client selection experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one configured experiment")
    run_p.add_argument("--config", required=True, help="TOML experiment config")
    run_p.add_argument("--out", help="output directory (default under the output root)")
    run_p.add_argument("--full-trace", action="store_true", help="dump every client every round")
    run_p.add_argument("--server", help="remote service URL (default: in-process)")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="run a policies x seeds grid")
    sweep_p.add_argument("--config", required=True, help="TOML experiment config")
    sweep_p.add_argument(
        "--policies", required=True, help=f"comma-separated subset of {','.join(POLICIES)}"
    )
    sweep_p.add_argument("--seeds", required=True, help='seed list, e.g. "0-19" or "1,2,5"')
    sweep_p.add_argument("--out", help="sweep output directory")
    sweep_p.add_argument("--server", help="remote service URL (default: in-process)")
    sweep_p.set_defaults(func=cmd_sweep)

    report_p = sub.add_parser("report", help="build tables and plot data from a sweep")
    report_p.add_argument("--sweep", required=True, help="sweep output directory")
    report_p.add_argument("--out", help="report output directory")
    report_p.add_argument("--server", help="remote service URL (default: in-process)")
    report_p.set_defaults(func=cmd_report)

    serve_p = sub.add_parser("serve", help="start the HTTP service")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8000)
    serve_p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
