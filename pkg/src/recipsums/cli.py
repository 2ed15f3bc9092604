"""Command-line front end.

The CLI is a thin client: every command is a POST to the service layer,
in-process by default or against a remote base URL via --server.  Data
goes to stdout, diagnostics to stderr.

Exit codes: 0 success, 2 bad input, 3 digit prefix too short,
4 comparison unresolved at the precision cap, 5 verification
inconclusive.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import sys
from fractions import Fraction

import httpx

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIGITS = 3
EXIT_UNRESOLVED = 4
EXIT_INCONCLUSIVE = 5

_ERROR_EXITS = {
    "ParseError": EXIT_PARSE,
    "PerfectSquare": EXIT_PARSE,
    "ZeroDenominator": EXIT_PARSE,
    "RationalValue": EXIT_PARSE,
    "OutOfRange": EXIT_PARSE,
    "DomainError": EXIT_PARSE,
    "ParameterMismatch": EXIT_PARSE,
    "InsufficientDigits": EXIT_DIGITS,
    "UnresolvedComparison": EXIT_UNRESOLVED,
}

DEFAULT_TOL = Fraction(1, 1 << 30)


def _post(server: str | None, endpoint: str, payload: dict) -> httpx.Response:
    async def run() -> httpx.Response:
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=600.0) as client:
                return await client.post(endpoint, json=payload)
        from .service.app import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://recipsums", timeout=600.0
        ) as client:
            return await client.post(endpoint, json=payload)

    return asyncio.run(run())


def _fail(resp: httpx.Response) -> int:
    try:
        body = resp.json()
    except ValueError:
        body = {}
    if resp.status_code == 422:
        detail = json.dumps(body.get("detail", body))
        print(f"error: invalid request: {detail}", file=sys.stderr)
        return EXIT_PARSE
    kind = body.get("error", "unknown")
    detail = body.get("detail", resp.text)
    print(f"error [{kind}]: {detail}", file=sys.stderr)
    return _ERROR_EXITS.get(kind, EXIT_PARSE)


def _tol_string(text: str) -> str:
    try:
        return str(Fraction(text))
    except ValueError:
        pass
    try:
        return str(Fraction(float(text)))
    except (ValueError, OverflowError):
        raise argparse.ArgumentTypeError(f"cannot parse tolerance {text!r}")


def _n_schedule(text: str) -> list[int]:
    """Explicit comma list, or geometric 'start:factor:count'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(
                "geometric schedule must be start:factor:count"
            )
        start, factor, count = (int(p) for p in parts)
        if start < 1 or factor < 2 or count < 0:
            raise argparse.ArgumentTypeError("bad geometric schedule")
        return [start * factor**i for i in range(count)]
    if not text.strip():
        return []
    return [int(p) for p in text.split(",")]


def _csv_list(text: str) -> list[str]:
    return [p for p in (s.strip() for s in text.split(",")) if p]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recipsums",
        description="Exact three-distance decompositions, reciprocal sums "
        "and rigorous bound verification for n*alpha sequences.",
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service (default: run in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="continued-fraction convergent table")
    p.add_argument("--alpha", required=True)
    p.add_argument("--count", type=int, required=True)

    p = sub.add_parser("gaps", help="three-distance decomposition as JSON")
    p.add_argument("--alpha", required=True)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("perm", help="sorted order of {alpha}..{N alpha}")
    p.add_argument("--alpha", required=True)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("sum", help="rigorous reciprocal-sum enclosure")
    p.add_argument("--alpha", required=True)
    p.add_argument("--gamma", default="rat:0")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", default=None, help="weight exponent on n")
    p.add_argument("--b", default=None, help="exponent on the fractional part")
    p.add_argument("--dist", action="store_true", help="use distance to Z")
    p.add_argument("--exclude-residue", action="store_true")
    p.add_argument("--tol", type=_tol_string, default=str(DEFAULT_TOL))

    p = sub.add_parser("verify", help="check a sum against its proven bound")
    p.add_argument("--alpha", required=True)
    p.add_argument("--gamma", default="rat:0")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--b", default=None)
    p.add_argument("--dist", action="store_true")
    p.add_argument("--exclude-residue", action="store_true")
    p.add_argument("--tol", type=_tol_string, default=str(DEFAULT_TOL))

    p = sub.add_parser("sweep", help="verification grid as CSV/JSON")
    p.add_argument("--alpha", type=_csv_list, required=True)
    p.add_argument("--gamma", type=_csv_list, default=["rat:0"])
    p.add_argument("--N", type=_n_schedule, required=True)
    p.add_argument("--kind", type=_csv_list, default=["e1"])
    p.add_argument("--b", type=_csv_list, default=[])
    p.add_argument("--tol", type=_tol_string, default=str(DEFAULT_TOL))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", default=None, help="write to file instead of stdout")

    p = sub.add_parser("oracle", help="independent brute-force reference")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    for name in ("points", "gaps"):
        op = osub.add_parser(name)
        op.add_argument("--alpha", required=True)
        op.add_argument("--N", type=int, required=True)
        op.add_argument("--precision-bits", type=int, default=256)
    op = osub.add_parser("sum")
    op.add_argument("--alpha", required=True)
    op.add_argument("--gamma", default="rat:0")
    op.add_argument("--N", type=int, required=True)
    op.add_argument("--a", default="0")
    op.add_argument("--b", default="1")
    op.add_argument("--dist", action="store_true")
    op.add_argument("--exclude-residue", action="store_true")
    op.add_argument("--precision-bits", type=int, default=256)
    return parser


def _cmd_expand(args) -> int:
    resp = _post(args.server, "/expand", {"alpha": args.alpha, "count": args.count})
    if resp.status_code != 200:
        return _fail(resp)
    data = resp.json()
    print("k a p q error")
    for row in data["rows"]:
        print(f"{row['k']} {row['a']} {row['p']} {row['q']} {row['error']:.12g}")
    return EXIT_OK


def _cmd_gaps(args) -> int:
    resp = _post(args.server, "/gaps", {"alpha": args.alpha, "N": args.N})
    if resp.status_code != 200:
        return _fail(resp)
    print(json.dumps(resp.json(), indent=2))
    return EXIT_OK


def _cmd_perm(args) -> int:
    resp = _post(args.server, "/perm", {"alpha": args.alpha, "N": args.N})
    if resp.status_code != 200:
        return _fail(resp)
    print(" ".join(str(n) for n in resp.json()["order"]))
    return EXIT_OK


def _cmd_sum(args) -> int:
    payload = {
        "alpha": args.alpha,
        "gamma": args.gamma,
        "N": args.N,
        "a": args.a,
        "b": args.b,
        "dist": args.dist,
        "exclude_residue": args.exclude_residue,
        "tol": args.tol,
    }
    resp = _post(args.server, "/sum", payload)
    if resp.status_code != 200:
        return _fail(resp)
    print(json.dumps(resp.json(), indent=2))
    return EXIT_OK


def _cmd_verify(args) -> int:
    payload = {
        "alpha": args.alpha,
        "gamma": args.gamma,
        "N": args.N,
        "b": args.b,
        "dist": args.dist,
        "exclude_residue": args.exclude_residue,
        "tol": args.tol,
    }
    resp = _post(args.server, "/verify", payload)
    if resp.status_code != 200:
        return _fail(resp)
    data = resp.json()
    print(json.dumps(data, indent=2))
    return EXIT_OK if data["verdict"] == "Holds" else EXIT_INCONCLUSIVE


def _cmd_sweep(args) -> int:
    payload = {
        "alphas": args.alpha,
        "gammas": args.gamma,
        "Ns": args.N,
        "kinds": args.kind,
        "bs": args.b,
        "tol": args.tol,
        "jobs": args.jobs,
    }
    resp = _post(args.server, "/sweep", payload)
    if resp.status_code != 200:
        return _fail(resp)
    text = resp.text
    if args.format == "json":
        rows = list(csv.DictReader(io.StringIO(text)))
        text = json.dumps(rows, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    if args.oracle_command in ("points", "gaps"):
        payload = {
            "alpha": args.alpha,
            "N": args.N,
            "precision_bits": args.precision_bits,
        }
        resp = _post(args.server, f"/oracle/{args.oracle_command}", payload)
    else:
        payload = {
            "alpha": args.alpha,
            "gamma": args.gamma,
            "N": args.N,
            "a": args.a,
            "b": args.b,
            "dist": args.dist,
            "exclude_residue": args.exclude_residue,
            "precision_bits": args.precision_bits,
        }
        resp = _post(args.server, "/oracle/sum", payload)
    if resp.status_code != 200:
        return _fail(resp)
    print(json.dumps(resp.json(), indent=2))
    return EXIT_OK


_DISPATCH = {
    "expand": _cmd_expand,
    "gaps": _cmd_gaps,
    "perm": _cmd_perm,
    "sum": _cmd_sum,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _DISPATCH[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
