"""Command-line front end: a thin client of the compute service.

Every subcommand builds a JSON request, posts it to the service (an
in-process ASGI transport by default, or a remote instance via --server)
and renders the response as CSV or JSON.  Numeric CSV output uses 17
significant digits so values survive a text round trip bit-exactly, and a
saved JSON output can be fed back through --config to reproduce the same
CSV byte for byte.

Exit codes: 0 success, 1 domain error, 2 accuracy/convergence error (and
failed selftest), 64 usage error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

from .service.rows import COLUMNS

USAGE_EXIT = 64
DOMAIN_EXIT = 1
ACCURACY_EXIT = 2

_COMMAND_PATHS = {
    "spectrum": "/v1/spectrum",
    "resonances": "/v1/resonances",
    "sweep-eps": "/v1/sweep-eps",
    "sweep-beta": "/v1/sweep-beta",
    "scatter": "/v1/scatter",
    "kernel": "/v1/kernel",
    "selftest": "/v1/selftest",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def parse_grid(text: str) -> list[float]:
    """Grid syntax: 'start:stop:step' (inclusive stop), comma list, or scalar."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        n = int((stop - start) / step + 1e-9) + 1
        if n < 1:
            raise ValueError(f"empty grid {text!r}")
        return [start + i * step for i in range(n)]
    if "," in text:
        return [float(p) for p in text.split(",") if p.strip()]
    return [float(text)]


def _parse_int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def _parse_complex_pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) == 1:
        return float(parts[0]), 0.0
    if len(parts) == 2:
        return float(parts[0]), float(parts[1])
    raise ValueError(f"expected 're' or 're,im', got {text!r}")


def _parse_point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'r,theta', got {text!r}")
    return float(parts[0]), float(parts[1])


def load_config(path: str) -> dict:
    """Read a config file: JSON (possibly a previous output) or key=value lines."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        return data.get("config", data)
    out: dict = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad config line (need key=value): {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key.endswith("_grid") and (":" in value or "," in value):
            out[key] = parse_grid(value)
            continue
        if key == "m_list":
            out[key] = _parse_int_list(value)
            continue
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def render_csv(command: str, rows: list[dict]) -> str:
    cols = COLUMNS[command]
    lines = [",".join(cols)]
    for row in rows:
        lines.append(",".join(format_value(row.get(c)) for c in cols))
    return "\n".join(lines) + "\n"


def render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def build_parser() -> _Parser:
    parser = _Parser(prog="wedgehybrid", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", metavar="PATH", default=None)
        p.add_argument("--config", metavar="FILE", default=None)
        p.add_argument("--server", metavar="URL", default=None,
                       help="URL of a running service; default runs in-process")

    def physics(p, eps=True):
        p.add_argument("--beta", default=None)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--gamma", type=float, default=None)
        if eps:
            p.add_argument("--eps", default=None)

    p = sub.add_parser("spectrum", help="real spectral points with classification tags")
    physics(p)
    p.add_argument("--emax", type=float, default=None, dest="e_max")
    p.add_argument("--lmin", type=float, default=None, dest="lambda_min")
    common(p)

    p = sub.add_parser("resonances", help="complex resonance poles for gap indices")
    physics(p)
    p.add_argument("--m", default=None, help="gap index or comma list, e.g. 1,2")
    common(p)

    p = sub.add_parser("sweep-eps", help="track a resonance along a coupling grid")
    physics(p, eps=True)
    p.add_argument("--m", default=None)
    common(p)

    p = sub.add_parser("sweep-beta", help="resonance across wedge openings at fixed coupling")
    physics(p, eps=True)
    p.add_argument("--m", default=None)
    common(p)

    p = sub.add_parser("scatter", help="reflection amplitude and phase along a momentum grid")
    physics(p)
    p.add_argument("--k", default=None, help="momentum grid, e.g. 0.1:5:0.01")
    common(p)

    p = sub.add_parser("kernel", help="hybrid resolvent kernel blocks at one configuration")
    physics(p)
    p.add_argument("--z", default=None, help="spectral parameter 're' or 're,im'")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--p", default=None, help="wedge source point 'r,theta'")
    p.add_argument("--q", default=None, help="wedge target point 'r,theta'")
    p.add_argument("--mode-tol", type=float, default=None, dest="mode_tol")
    p.add_argument("--e-window", type=float, default=None, dest="e_window")
    common(p)

    p = sub.add_parser("selftest", help="run the built-in closed-form oracle suite")
    common(p)

    return parser


def _payload_from_args(args) -> dict:
    """Translate parsed flags into request fields (only explicitly set ones)."""
    cmd = args.command
    payload: dict = {}

    def put(field, value):
        if value is not None:
            payload[field] = value

    if cmd in ("spectrum", "resonances", "scatter", "kernel"):
        if args.beta is not None:
            payload["beta"] = float(args.beta)
        put("alpha", args.alpha)
        put("gamma", args.gamma)
        if args.eps is not None:
            payload["eps"] = float(args.eps)
    if cmd == "spectrum":
        put("e_max", args.e_max)
        put("lambda_min", args.lambda_min)
    elif cmd == "resonances":
        if args.m is not None:
            payload["m_list"] = _parse_int_list(args.m)
    elif cmd == "sweep-eps":
        if args.beta is not None:
            payload["beta"] = float(args.beta)
        put("alpha", args.alpha)
        put("gamma", args.gamma)
        if args.m is not None:
            payload["m"] = int(args.m)
        if args.eps is not None:
            payload["eps_grid"] = parse_grid(args.eps)
    elif cmd == "sweep-beta":
        put("alpha", args.alpha)
        put("gamma", args.gamma)
        if args.eps is not None:
            payload["eps"] = float(args.eps)
        if args.m is not None:
            payload["m"] = int(args.m)
        if args.beta is not None:
            payload["beta_grid"] = parse_grid(args.beta)
    elif cmd == "scatter":
        if args.k is not None:
            payload["k_grid"] = parse_grid(args.k)
    elif cmd == "kernel":
        if args.z is not None:
            payload["z_re"], payload["z_im"] = _parse_complex_pair(args.z)
        put("x", args.x)
        put("y", args.y)
        if args.p is not None:
            payload["p_r"], payload["p_theta"] = _parse_point(args.p)
        if args.q is not None:
            payload["q_r"], payload["q_theta"] = _parse_point(args.q)
        put("mode_tol", args.mode_tol)
        put("e_window", args.e_window)
    return payload


def _post(path: str, payload: dict, server: str | None) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            return client.post(path, json=payload)

    async def go():
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://wedgehybrid.internal", timeout=600.0
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return USAGE_EXIT
    try:
        payload = _payload_from_args(args)
    except (ValueError, TypeError) as exc:
        print(f"wedgehybrid: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    if args.config:
        try:
            base = load_config(args.config)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            print(f"wedgehybrid: error: cannot read config: {exc}", file=sys.stderr)
            return USAGE_EXIT
        base.pop("command", None)
        base.pop("warning_index", None)
        base.pop("passed", None)
        merged = dict(base)
        merged.update(payload)
        payload = merged

    try:
        resp = _post(_COMMAND_PATHS[args.command], payload, args.server)
    except httpx.HTTPError as exc:
        print(f"wedgehybrid: error: service unreachable: {exc}", file=sys.stderr)
        return DOMAIN_EXIT

    if resp.status_code != 200:
        try:
            body = resp.json()
        except Exception:
            body = {}
        kind = body.get("error")
        message = body.get("message") or body.get("detail") or resp.text
        print(f"wedgehybrid: error: {message}", file=sys.stderr)
        if kind == "accuracy":
            return ACCURACY_EXIT
        return DOMAIN_EXIT

    data = resp.json()
    if args.format == "json":
        _emit(render_json(data), args.output)
    else:
        _emit(render_csv(args.command, data["rows"]), args.output)

    if args.command == "selftest":
        if not data["config"].get("passed", False):
            print("wedgehybrid: selftest FAILED", file=sys.stderr)
            return ACCURACY_EXIT
    warning = data["config"].get("warning_index")
    if warning is not None:
        print(f"wedgehybrid: warning: sweep truncated at row {warning}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
