"""Command line interface: ``foamcalc <command> [options]``.

Exit codes: 0 success, 1 a check or acceptance criterion failed, 2 usage or
input schema error, 3 precondition failure (ring, basepoint, labels),
4 spanning certificate failure, 5 d^2 != 0.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .diagrams import DiagramError, LinkDiagram, bundled, bundled_names, bundled_path
from .foam import Foam, FoamError, MoyGraph
from .krcomplex import ComplexError, build_complex, homology
from .moy import IrreducibleGraph, moy_polynomial
from .operators import (CharacteristicMismatch, circles_statespace, composite_check,
                        reduced_complex, verify_theorem1)
from .rings import RingError, RingSpec, ZZ, mod
from .rweval import evaluate
from .statespace import ComponentSpace, SpanningCertificateFailed, StateSpace

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_CERTIFICATE, EXIT_COMPLEX = 0, 1, 2, 3, 4, 5


class InputError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str
    pd: str | None = None
    foam: str | None = None
    graph: str | None = None
    N: int | None = None
    ring: RingSpec = ZZ
    basepoints: list = field(default_factory=list)
    out: str | None = None
    format: str = "text"
    jobs: int = 1
    span_bound: int | None = None
    extra: dict = field(default_factory=dict)


def _ring(args) -> RingSpec:
    if getattr(args, "mod", None):
        if args.ring not in (None, "Z"):
            raise InputError("give either --ring or --mod")
        return mod(args.mod)
    return RingSpec.parse(args.ring or "Z")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_diagram(spec: str) -> LinkDiagram:
    """A PD JSON path or the name of a bundled diagram."""
    if spec in bundled_names():
        return bundled(spec)
    return LinkDiagram.from_json(_load_json(spec))


def load_graph(spec: str) -> MoyGraph:
    p = Path(spec)
    if not p.exists() and bundled_path(spec).exists():
        p = bundled_path(spec)
    return MoyGraph.from_json(_load_json(str(p)))


# ---------------------------------------------------------------------------
# commands; each returns (report dict, exit code)


def _basepoint(D: LinkDiagram, marker):
    try:
        return D.basepoint_edge(marker)
    except DiagramError as exc:
        raise PreconditionError(str(exc)) from exc


def _need(cfg, attr, flag):
    if getattr(cfg, attr) is None:
        raise InputError(f"{cfg.command} needs {flag}")
    return getattr(cfg, attr)


def cmd_homology(cfg: JobConfig):
    D = load_diagram(_need(cfg, "pd", "--pd"))
    N = _need(cfg, "N", "--N")
    C = build_complex(D, N, cfg.ring)
    H = homology(C)
    rep = {"diagram": D.name, "N": N, **H.to_json()}
    return rep, EXIT_OK


def cmd_reduced(cfg: JobConfig):
    D = load_diagram(_need(cfg, "pd", "--pd"))
    N = _need(cfg, "N", "--N")
    p = cfg.basepoints[0] if cfg.basepoints else None
    if p is not None:
        _basepoint(D, p)
    R = reduced_complex(D, N, cfg.ring, p)
    H = homology(R.complex)
    return {"diagram": D.name, "N": N, "basepoint": p, **H.to_json()}, EXIT_OK


def cmd_foam_eval(cfg: JobConfig):
    F = Foam.from_json(_load_json(_need(cfg, "foam", "--foam")))
    val = evaluate(F)
    return {"N": F.N, "evaluation": repr(val), "json": val.to_json()}, EXIT_OK


def cmd_moy_eval(cfg: JobConfig):
    g = load_graph(_need(cfg, "graph", "--graph"))
    if cfg.N is not None and cfg.N != g.N:
        g = MoyGraph.from_json({**g.to_json(), "N": cfg.N})
    P = moy_polynomial(g)
    return {"N": g.N, "moy": repr(P), "coefficients": P.to_json()}, EXIT_OK


def _space_report(space: ComponentSpace) -> dict:
    rows = []
    for d, blk in sorted(space.blocks.items()):
        rows.append({"q": d, "expected": space.expected[d], "rank": len(blk.basis),
                     "spanning": len(blk.spanning), "unimodular": True,
                     "pivot_selection": blk.pivots is not None})
    return {"rank": repr(space.rank()), "moy": repr(space.expected), "templates": len(space.templates),
            "blocks": rows}


def cmd_statespace(cfg: JobConfig):
    if cfg.graph:
        g = load_graph(cfg.graph)
        space = ComponentSpace(g)
        return {"graph": cfg.graph, "N": g.N, **_space_report(space)}, EXIT_OK
    D = load_diagram(_need(cfg, "pd", "--pd or --graph"))
    N = _need(cfg, "N", "--N")
    bits = cfg.extra.get("resolution")
    v = tuple(int(c) for c in bits) if bits else (0,) * D.n
    if len(v) != D.n:
        raise InputError(f"--resolution needs {D.n} bits")
    S = StateSpace(D.web(N), D.resolution_states(v))
    pieces = [{"arcs": sorted(map(str, p.key)) if isinstance(p.key, frozenset) else [str(p.key)],
               **_space_report(p.space)} for p in S.pieces]
    return {"diagram": D.name, "N": N, "resolution": "".join(map(str, v)), "rank": repr(S.rank()),
            "pieces": pieces}, EXIT_OK


def cmd_verify_thm1(cfg: JobConfig):
    D = load_diagram(_need(cfg, "pd", "--pd"))
    P = _need(cfg, "N", "--P")
    ring = cfg.ring if cfg.ring != ZZ else mod(P)
    q = cfg.basepoints[0] if cfg.basepoints else None
    r = cfg.basepoints[1] if len(cfg.basepoints) > 1 else None
    for m in cfg.basepoints:
        _basepoint(D, m)
    rep = verify_theorem1(D, P, ring, q, r)
    return {"diagram": D.name, "P": P, "ring": str(ring), **rep}, (EXIT_OK if rep["passed"] else EXIT_CHECK)


def cmd_composite_check(cfg: JobConfig):
    N = _need(cfg, "N", "--N")
    ring = cfg.ring if cfg.ring != ZZ else mod(N)
    if cfg.pd:
        D = load_diagram(cfg.pd)
        bits = cfg.extra.get("resolution") or "1" * D.n
        S = StateSpace(D.web(N), D.resolution_states(tuple(int(c) for c in bits)))
        bps = cfg.basepoints or list(D.basepoints)[:2]
        if len(bps) < 2:
            raise InputError("composite-check needs two basepoints")
        q, r = _basepoint(D, bps[0]), _basepoint(D, bps[1])
    else:
        S = circles_statespace(N, 2)
        q, r = ("o", 0), ("o", 1)
    res = composite_check(S, q, r, ring)
    return {"N": N, "ring": str(ring), "verdict": res.verdict,
            "witness": None if res.witness is None else repr(res.witness)}, EXIT_OK


def cmd_grassmann(cfg: JobConfig):
    from .grassmann import SchurVector, cup, iso_matrix, nabla_cohomology, nabla_table
    from .sympoly import partitions_in_box

    k, N = cfg.extra.get("k"), _need(cfg, "N", "--N")
    if k is None or not 1 <= k <= N:
        raise InputError("grassmann needs --k between 1 and N")
    action = cfg.extra.get("action") or "nabla-table"
    box = partitions_in_box(k, N - k)
    names = [list(lam) for lam in box]
    if action == "nabla-table":
        if cfg.ring.characteristic:
            cols = [nabla_cohomology(SchurVector.basis(lam, k, N, cfg.ring)) for lam in box]
            M = [[c.coeffs.get(lam, 0) for c in cols] for lam in box]
        else:
            _, M = nabla_table(k, N)
        return {"k": k, "N": N, "ring": str(cfg.ring), "partitions": names, "matrix": M}, EXIT_OK
    if action == "cup-table":
        table = []
        for a in box:
            for b in box:
                c = cup(SchurVector.basis(a, k, N, cfg.ring), SchurVector.basis(b, k, N, cfg.ring))
                table.append({"a": list(a), "b": list(b),
                              "product": [[list(l), v] for l, v in sorted(c.coeffs.items())]})
        return {"k": k, "N": N, "ring": str(cfg.ring), "products": table}, EXIT_OK
    if action == "iso":
        _, M = iso_matrix(k, N)
        return {"k": k, "N": N, "partitions": names, "matrix": M}, EXIT_OK
    raise InputError(f"unknown grassmann action {action!r}")


def cmd_acceptance(cfg: JobConfig):
    from .acceptance import run_all

    t = time.time()
    rows = run_all(cfg.jobs)
    rep = {"criteria": [{"criterion": n, "passed": ok, "detail": d, "seconds": round(s, 2)}
                        for n, ok, d, s in rows],
           "passed": all(ok for _, ok, _, _ in rows), "seconds": round(time.time() - t, 2)}
    return rep, (EXIT_OK if rep["passed"] else EXIT_CHECK)


COMMANDS = {
    "homology": cmd_homology,
    "reduced": cmd_reduced,
    "foam-eval": cmd_foam_eval,
    "moy-eval": cmd_moy_eval,
    "statespace": cmd_statespace,
    "verify-thm1": cmd_verify_thm1,
    "composite-check": cmd_composite_check,
    "grassmann": cmd_grassmann,
    "acceptance": cmd_acceptance,
}


# ---------------------------------------------------------------------------
# output


def _text(rep: dict, command: str) -> str:
    if command in ("homology", "reduced"):
        lines = [f"ring {rep['ring']}"]
        lines += [f"h={g['h']:>3} q={g['q']:>4}  rank {g['rank']}" + (f"  torsion {g['torsion']}" if g["torsion"] else "")
                  for g in rep["groups"]]
        lines.append(f"Poincare polynomial: {rep['poincare']}")
        return "\n".join(lines)
    if command == "moy-eval":
        return rep["moy"]
    if command == "foam-eval":
        return rep["evaluation"]
    if command == "composite-check":
        return rep["verdict"]
    if command == "acceptance":
        lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['criterion']}  ({c['detail']}, {c['seconds']}s)"
                 for c in rep["criteria"]]
        lines.append("all criteria pass" if rep["passed"] else "some criteria FAILED")
        return "\n".join(lines)
    if command == "verify-thm1":
        return "\n".join(f"{k}: {v}" for k, v in rep.items())
    return json.dumps(rep, indent=2, sort_keys=True, default=str)


def _csv(rep: dict, command: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command in ("homology", "reduced"):
        w.writerow(["h", "q", "rank", "torsion"])
        for g in rep["groups"]:
            w.writerow([g["h"], g["q"], g["rank"], " ".join(map(str, g["torsion"]))])
    elif command == "acceptance":
        w.writerow(["criterion", "passed", "seconds", "detail"])
        for c in rep["criteria"]:
            w.writerow([c["criterion"], c["passed"], c["seconds"], c["detail"]])
    elif command == "statespace" and "blocks" in rep:
        w.writerow(["q", "expected", "rank", "spanning"])
        for b in rep["blocks"]:
            w.writerow([b["q"], b["expected"], b["rank"], b["spanning"]])
    else:
        w.writerow(["key", "value"])
        for k, v in rep.items():
            w.writerow([k, json.dumps(v, sort_keys=True, default=str)])
    return buf.getvalue().rstrip("\n")


def render(rep: dict, command: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, indent=2, sort_keys=True, default=str)
    if fmt == "csv":
        return _csv(rep, command)
    return _text(rep, command)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pd", help="PD diagram JSON, or the name of a bundled diagram")
    common.add_argument("--foam", help="closed foam JSON")
    common.add_argument("--graph", help="MOY graph JSON")
    common.add_argument("--N", "--P", dest="N", type=int)
    common.add_argument("--ring", help="Z, Q or Z/n")
    common.add_argument("--mod", type=int, help="shorthand for --ring Z/n")
    common.add_argument("--basepoint", action="append", default=[], help="basepoint marker (repeatable)")
    common.add_argument("--resolution", help="0/1 string selecting a resolution")
    common.add_argument("--k", type=int, help="Grassmannian rank")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (acceptance)")
    common.add_argument("--span-bound", type=int, help="accepted for compatibility; spanning sets are unbounded")
    p = argparse.ArgumentParser(prog="foamcalc", description="sl(N) foam evaluation and link homology")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "grassmann":
            sp.add_argument("action", nargs="?", default="nabla-table",
                            choices=("nabla-table", "cup-table", "iso"))
    return p


def config_from_args(args) -> JobConfig:
    if args.jobs < 1:
        raise InputError("--jobs must be positive")
    if args.N is not None and args.N < 1:
        raise InputError("--N must be positive")
    return JobConfig(args.command, args.pd, args.foam, args.graph, args.N, _ring(args), list(args.basepoint),
                     args.out, args.format, args.jobs, args.span_bound,
                     {"resolution": args.resolution, "k": args.k, "action": getattr(args, "action", None)})


def _fail(code: int, kind: str, exc: Exception) -> int:
    print(json.dumps({"error": kind, "message": str(exc)}, sort_keys=True), file=sys.stderr)
    return code


def run(cfg: JobConfig) -> tuple[dict, int]:
    return COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        rep, code = run(cfg)
    except (InputError, DiagramError, json.JSONDecodeError) as exc:
        return _fail(EXIT_INPUT, "input", exc)
    except (CharacteristicMismatch, RingError, PreconditionError) as exc:
        return _fail(EXIT_PRECONDITION, "precondition", exc)
    except (SpanningCertificateFailed, IrreducibleGraph) as exc:
        return _fail(EXIT_CERTIFICATE, "certificate", exc)
    except ComplexError as exc:
        return _fail(EXIT_COMPLEX, "complex", exc)
    except FoamError as exc:
        return _fail(EXIT_INPUT, "input", exc)
    except (ValueError, KeyError) as exc:
        return _fail(EXIT_PRECONDITION, "precondition", exc)
    text = render(rep, cfg.command, cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
