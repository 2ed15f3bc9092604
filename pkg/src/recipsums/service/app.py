"""FastAPI service exposing the exact-arithmetic core.

Every domain failure maps to HTTP 400 with a stable machine-readable
``error`` kind, so thin clients can translate outcomes into exit codes
without parsing prose.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import bounds, oracles, sums, threegap
from ..alpha import parse_alpha, parse_gamma
from ..cf import cf_engine
from ..errors import ParseError, RecipError
from . import models as m


def _fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad {what} {text!r}: {exc}") from None


def _sum_report(req: m.SumRequest) -> sums.SumReport:
    x = parse_alpha(req.alpha)
    gamma = parse_gamma(req.gamma)
    tol = _fraction(req.tol, "tol")
    if req.exclude_residue:
        return sums.sum_reciprocal_frac_excluding_residue(x, gamma, req.N, tol)
    if req.dist:
        return sums.sum_reciprocal_dist(x, gamma, req.N, tol)
    if req.a is not None:
        a = _fraction(req.a, "a")
        b = _fraction(req.b, "b") if req.b is not None else Fraction(1)
        return sums.sum_general(x, gamma, req.N, a, b, tol)
    if req.b is not None:
        return sums.sum_reciprocal_power(x, gamma, req.N, _fraction(req.b, "b"), tol)
    return sums.sum_reciprocal_frac(x, gamma, req.N, tol)


def _verify_kind(req: m.VerifyRequest) -> tuple[str, Fraction | None]:
    if req.dist:
        return "dist", None
    if req.exclude_residue:
        return "e2", None
    if req.b is not None:
        return "power", _fraction(req.b, "b")
    return "e1", None


def _interval(enc) -> m.Interval:
    return m.Interval(lo=enc.float_lo(), hi=enc.float_hi())


_SWEEP_COLUMNS = [
    "alpha", "gamma", "N", "K", "qK", "qK1", "kind", "b",
    "sum_lo", "sum_hi", "bound_lo", "bound_hi", "tightness", "verdict",
]


def _sweep_row(alpha: str, gamma: str, N: int, kind: str, b: str | None, tol: str):
    base = {"alpha": alpha, "gamma": gamma, "N": N, "kind": kind, "b": b or ""}
    try:
        x = parse_alpha(alpha)
        g = parse_gamma(gamma)
        eng = cf_engine(x)
        K = eng.largest_index_leq(N)
        base.update(K=K, qK=eng.q(K), qK1=eng.q(K + 1))
        bf = _fraction(b, "b") if b else None
        rep = bounds.check_bound(x, g, N, kind, bf, _fraction(tol, "tol"))
        base.update(
            sum_lo=repr(rep.sum.float_lo()),
            sum_hi=repr(rep.sum.float_hi()),
            bound_lo=repr(rep.bound.float_lo()),
            bound_hi=repr(rep.bound.float_hi()),
            tightness=repr(rep.tightness),
            verdict=rep.verdict,
        )
    except (RecipError, ValueError):
        base["verdict"] = "error"
    return base


def create_app() -> FastAPI:
    app = FastAPI(title="recipsums", version="1.0")

    @app.exception_handler(RecipError)
    async def _domain_error(request: Request, exc: RecipError):
        return JSONResponse(
            status_code=400, content={"error": exc.kind, "detail": str(exc)}
        )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400, content={"error": "ParseError", "detail": str(exc)}
        )

    @app.post("/expand", response_model=m.ExpandResponse)
    def expand(req: m.ExpandRequest):
        x = parse_alpha(req.alpha)
        eng = cf_engine(x)
        eng.ensure(req.count)
        rows = []
        for k in range(req.count + 1):
            c = eng.convergent(k)
            err = float(c.error_form.enclosure(x, 96))
            rows.append(m.ConvergentRow(k=k, a=c.a, p=c.p, q=c.q, error=err))
        return m.ExpandResponse(alpha=x.spec(), rows=rows)

    @app.post("/gaps", response_model=m.GapsResponse)
    def gaps(req: m.GapsRequest):
        dec = threegap.decompose(parse_alpha(req.alpha), req.N)
        return m.GapsResponse(**dec.to_json())

    @app.post("/perm", response_model=m.PermResponse)
    def perm(req: m.PermRequest):
        x = parse_alpha(req.alpha)
        return m.PermResponse(
            alpha=x.spec(), N=req.N, order=threegap.permutation(x, req.N)
        )

    @app.post("/sum", response_model=m.SumResponse)
    def sum_endpoint(req: m.SumRequest):
        rep = _sum_report(req)
        return m.SumResponse(
            alpha=rep.alpha_spec,
            gamma=rep.gamma_spec,
            N=rep.N,
            a=str(rep.a) if rep.a is not None else None,
            b=str(rep.b) if rep.b is not None else None,
            kind=rep.kind,
            excluded=rep.excluded,
            exact_hit=rep.exact_hit,
            value=_interval(rep.value),
            term_count=rep.term_count,
        )

    @app.post("/verify", response_model=m.VerifyResponse)
    def verify(req: m.VerifyRequest):
        kind, b = _verify_kind(req)
        rep = bounds.check_bound(
            parse_alpha(req.alpha),
            parse_gamma(req.gamma),
            req.N,
            kind,
            b,
            _fraction(req.tol, "tol"),
        )
        return m.VerifyResponse(**rep.to_json())

    @app.post("/sweep", response_class=PlainTextResponse)
    def sweep(req: m.SweepRequest) -> str:
        tasks = []
        for alpha in req.alphas:
            for gamma in req.gammas:
                for N in req.Ns:
                    for kind in req.kinds:
                        b_list = req.bs if kind == "power" else [None]
                        for b in b_list:
                            tasks.append((alpha, gamma, N, kind, b, req.tol))
        if req.jobs > 1 and tasks:
            with ThreadPoolExecutor(max_workers=req.jobs) as pool:
                rows = list(pool.map(lambda t: _sweep_row(*t), tasks))
        else:
            rows = [_sweep_row(*t) for t in tasks]
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, fieldnames=_SWEEP_COLUMNS, restval="", lineterminator="\n"
        )
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()

    @app.post("/oracle/points", response_model=m.OraclePointsResponse)
    def oracle_points(req: m.OraclePointsRequest):
        x = parse_alpha(req.alpha)
        cfg = oracles.OracleConfig(precision_bits=req.precision_bits)
        pts = oracles.sorted_points(x, req.N, cfg)
        return m.OraclePointsResponse(
            alpha=x.spec(),
            N=req.N,
            points=[m.OraclePoint(n=n, value=_interval(e)) for n, e in pts],
        )

    @app.post("/oracle/gaps", response_model=m.OracleGapsResponse)
    def oracle_gaps(req: m.OraclePointsRequest):
        x = parse_alpha(req.alpha)
        cfg = oracles.OracleConfig(precision_bits=req.precision_bits)
        gm = oracles.gap_multiset(x, req.N, cfg)
        return m.OracleGapsResponse(
            alpha=x.spec(),
            N=req.N,
            gaps=[m.OracleGap(length=_interval(e), count=c) for e, c in gm],
        )

    @app.post("/oracle/sum", response_model=m.OracleSumResponse)
    def oracle_sum(req: m.OracleSumRequest):
        x = parse_alpha(req.alpha)
        gamma = parse_gamma(req.gamma)
        cfg = oracles.OracleConfig(precision_bits=req.precision_bits)
        residue = None
        if req.exclude_residue:
            eng = cf_engine(x)
            residue = eng.q(eng.largest_index_leq(req.N))
        enc = oracles.sum_brute(
            x,
            gamma,
            req.N,
            a=_fraction(req.a, "a"),
            b=_fraction(req.b, "b"),
            cfg=cfg,
            dist=req.dist,
            exclude_residue_mod=residue,
        )
        return m.OracleSumResponse(
            alpha=x.spec(), gamma=gamma.spec(), N=req.N, value=_interval(enc)
        )

    return app


app = create_app()
