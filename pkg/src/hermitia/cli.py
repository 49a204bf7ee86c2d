"""Command-line front end.

Every consistency comparison is computed twice where possible (closed-form
path and search path) and reported side by side with a match flag; a
mismatch is surfaced through exit code 2, never reconciled silently.

Exit codes: 0 success and consistent, 2 inconsistent finding, 3 invalid
input, 4 search bound exhausted.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import gf
from .matff import Mat, MatError, SurfaceSpec, fermat_surface
from .tetra import (CASE_C1, SignatureError, case_signature, on_surface,
                    smoothness_scan)
from .classify import enumerate_admissible, predicted_signatures
from .orbit import (OrbitError, SearchExhausted, build_curve, count_report,
                    embed_qprime, inflate_case1, pairwise_equivalence,
                    q2_lambda_member, q2_parameter_matrices,
                    stabilizer_search)

EXIT_OK = 0
EXIT_INCONSISTENT = 2
EXIT_INVALID = 3
EXIT_EXHAUSTED = 4


@dataclass
class RunConfig:
    subcommand: str
    q: int = 0
    case: Optional[str] = None
    d_max: Optional[int] = None
    max_ext: int = 6
    seed: int = 1
    threads: int = 1
    fmt: str = "json"
    out: Optional[str] = None
    surface_path: Optional[str] = None
    fermat: bool = False
    lambdas_path: Optional[str] = None
    scan: bool = False
    mode: str = "diagonal_exhaustive"
    samples: int = 10 ** 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; keep 3
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _build_parser() -> _Parser:
    p = _Parser(prog="hermitia",
                description="exact verification, classification, construction "
                            "and counting of tetranomial curves on smooth "
                            "Hermitian surfaces")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, q=True):
        if q:
            sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--threads", type=int,
                        default=int(os.environ.get("HERMITIA_THREADS", "1")))
        sp.add_argument("--format", dest="fmt", choices=("json", "tsv"),
                        default="json")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("classify", help="rediscover the admissible signatures")
    sp.add_argument("--max-d", dest="d_max", type=int, default=None)
    common(sp)

    sp = sub.add_parser("count", help="closed-form curve counts per case")
    common(sp)

    sp = sub.add_parser("build", help="construct and verify a curve on a surface")
    sp.add_argument("--case", required=True, choices=("c1", "c2", "c3"))
    sp.add_argument("--max-ext", dest="max_ext", type=int, default=6)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--fermat", action="store_true")
    grp.add_argument("--surface", dest="surface_path")
    common(sp)

    sp = sub.add_parser("stabilizer", help="exhaustive diagonal stabilizer scan")
    sp.add_argument("--case", required=True, choices=("c2", "c3"))
    sp.add_argument("--mode", choices=("diagonal_exhaustive", "full_small"),
                    default="diagonal_exhaustive")
    sp.add_argument("--samples", type=int, default=10 ** 4)
    common(sp)

    sp = sub.add_parser("reps-q2", help="q=2 representative inequivalence matrix")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--scan", action="store_true",
                     help="lambda family over all of GF(4)")
    grp.add_argument("--lambdas-file", dest="lambdas_path")
    common(sp, q=False)
    return p


def _emit(doc: dict, cfg) -> None:
    if cfg.fmt == "tsv":
        lines = []
        for key, val in _flatten(doc):
            lines.append(f"{key}\t{val}")
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flatten(doc, prefix=""):
    if isinstance(doc, dict):
        for k in sorted(doc):
            yield from _flatten(doc[k], f"{prefix}{k}.")
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), doc


def _check_prime_power(q: int) -> None:
    if not gf.is_prime_power(q):
        raise SystemExit(EXIT_INVALID)


def cmd_classify(cfg: RunConfig) -> int:
    _check_prime_power(cfg.q)
    report = enumerate_admissible(cfg.q, cfg.d_max, threads=cfg.threads)
    doc = report.to_json()
    doc["predicted"] = [list(s.astuple())
                        for s in predicted_signatures(cfg.q, report.d_max)]
    _emit(doc, cfg)
    return EXIT_OK if report.matches_prediction else EXIT_INCONSISTENT


def cmd_count(cfg: RunConfig) -> int:
    _check_prime_power(cfg.q)
    report = count_report(cfg.q)
    _emit(report.to_json(), cfg)
    return EXIT_OK


def _load_surface(cfg: RunConfig) -> SurfaceSpec:
    if cfg.fermat:
        return fermat_surface(cfg.q)
    with open(cfg.surface_path) as fh:
        gram = Mat.from_json(json.load(fh))
    surf = SurfaceSpec(cfg.q, gram)
    if not surf.hermitian:
        print("surface matrix is not Hermitian for this q", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)
    if not surf.smooth:
        print("surface matrix is singular", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)
    return surf


def cmd_build(cfg: RunConfig) -> int:
    _check_prime_power(cfg.q)
    try:
        case_signature(cfg.case, cfg.q)
    except Exception:
        raise SystemExit(EXIT_INVALID)
    surf = _load_surface(cfg)
    try:
        curve = build_curve(cfg.case, cfg.q, surf, max_ext=cfg.max_ext)
    except SearchExhausted as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_EXHAUSTED
    scan = smoothness_scan(cfg.case, cfg.q, gf.gf_ext(cfg.q, 2),
                           threads=cfg.threads)
    doc = {
        "curve": curve.to_json(),
        "on_surface": on_surface(curve, surf),
        "nonplanar": curve.nonplanar,
        "standard_model_scan": scan.to_json(),
    }
    _emit(doc, cfg)
    return EXIT_OK


def cmd_stabilizer(cfg: RunConfig) -> int:
    _check_prime_power(cfg.q)
    if cfg.q < 3:
        raise SystemExit(EXIT_INVALID)
    try:
        report = stabilizer_search(cfg.case, cfg.q, mode=cfg.mode,
                                   samples=cfg.samples, seed=cfg.seed)
    except (OrbitError, SignatureError) as exc:
        print(str(exc), file=sys.stderr)
        raise SystemExit(EXIT_INVALID)
    _emit(report.to_json(), cfg)
    if report.nondiagonal_hits:
        return EXIT_INCONSISTENT
    return EXIT_OK if report.matches_prediction else EXIT_INCONSISTENT


def cmd_reps_q2(cfg: RunConfig) -> int:
    fld4 = gf.gfq2(2)
    members = []
    for k, params in enumerate(q2_parameter_matrices()):
        members.append((f"fixed-{k}", params))
    if cfg.scan:
        lams = list(fld4.elements())
    else:
        with open(cfg.lambdas_path) as fh:
            lams = [fld4.element(c) for c in json.load(fh)]
    for lam in lams:
        members.append((f"lambda-{fld4.coeffs(lam)}", q2_lambda_member(lam)))
    forms = [embed_qprime(inflate_case1(p), CASE_C1, 2) for _, p in members]
    search = gf.make_field(2, 4)
    verdicts = pairwise_equivalence(forms, search)
    n = len(forms)
    matrix = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                matrix[i][j] = verdicts[(i, j)] is not None
    doc = {
        "search_field": gf.field_to_json(search),
        "members": [name for name, _ in members],
        "equivalent": matrix,
        "all_pairwise_inequivalent": all(
            not matrix[i][j] for i in range(n) for j in range(n) if i != j),
    }
    _emit(doc, cfg)
    return EXIT_OK if doc["all_pairwise_inequivalent"] else EXIT_INCONSISTENT


def _to_config(ns) -> RunConfig:
    kwargs = {f.name: getattr(ns, f.name) for f in dataclasses.fields(RunConfig)
              if hasattr(ns, f.name)}
    return RunConfig(**kwargs)


def main(argv=None) -> int:
    cfg = _to_config(_build_parser().parse_args(argv))
    handlers = {
        "classify": cmd_classify,
        "count": cmd_count,
        "build": cmd_build,
        "stabilizer": cmd_stabilizer,
        "reps-q2": cmd_reps_q2,
    }
    try:
        return handlers[cfg.subcommand](cfg)
    except (MatError, OrbitError, SignatureError, gf.FieldError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
