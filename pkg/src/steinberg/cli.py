"""Command-line entry point ``stb``.

Every command prints a JSON report (and writes it with ``--json PATH``). Exit
status: 0 pass, 1 verification failure, 2 usage error, 3 budget exceeded,
4 malformed or non-symplectic matrix, 5 truncation bound too small.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetExceeded, MalformedMatrixError, NotSymplecticError, TruncationError

SCHEMA_VERSION = "1.0"
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_MATRIX, EXIT_TRUNCATION = 0, 1, 2, 3, 4, 5

EXACT, HOMOLOGICAL, TRUNCATION = "exact", "homological", "experimental-truncation"


def jsonable(x):
    """Plain JSON data; rationals become "p/q" strings."""
    from .symplectic import Line, Subspace

    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str, float)):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Line):
        return list(x.rep)
    if isinstance(x, Subspace):
        return [[str(v) for v in r] for r in x.rows]
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    return str(x)


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- cache ---------------------------------------------------------------------

def cache_dir() -> Path:
    return Path(os.environ.get("STB_CACHE_DIR", ".cache"))


def cache_key(command: str, params: dict) -> str:
    blob = json.dumps({"command": command, "params": jsonable(params), "version": __version__},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_load(key: str):
    path = cache_dir() / f"{key}.json"
    try:
        return json.loads(path.read_text())
    except (OSError, ValueError):
        return None


def cache_store(key: str, payload) -> None:
    d = cache_dir()
    try:
        d.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(payload))
        os.replace(tmp, d / f"{key}.json")
    except OSError:
        pass


# -- commands --------------------------------------------------------------------
# each returns (results, passed, certification_level)

def _space_matrix(text: str, q: int = 0):
    from .symplectic import SpElement, SymplecticSpace, ground_for, parse_matrix

    A = parse_matrix(text)
    if A.nrows != A.ncols or A.nrows % 2:
        raise MalformedMatrixError(f"a symplectic matrix must be square of even size, got {A.nrows}x{A.ncols}")
    return SpElement(A, SymplecticSpace(A.nrows // 2, ground_for(q)))


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise MalformedMatrixError(f"cannot parse vector {text!r}") from None


def cmd_building(a):
    from .buildings import build_building, solomon_tits_rank
    from .topology import cm_certificate, reduced_homology

    B = build_building(a.variant, a.n, a.q, m=a.m, budget=a.budget)
    res = {"summary": B.summary()}
    passed = True
    level = EXACT
    if a.homology:
        h = reduced_homology(B.order_complex())
        res["homology"] = h.to_json()
        if a.variant == "full":
            st = solomon_tits_rank(a.n, a.q)
            ok = h.concentrated_in(a.n - 1) and h.b(a.n - 1) == st
            res["solomon_tits"] = {"expected_rank": st, "rank": h.b(a.n - 1), "passed": ok}
            passed &= ok
    if a.cm_check:
        c = cm_certificate(B.poset, a.n - 1)
        res["cm_certificate"] = c.to_json()
        passed &= c.passed
        level = HOMOLOGICAL
    return res, passed, level


def cmd_restricted(a):
    from .buildings import verify_restriction_lemmas

    rep = verify_restriction_lemmas(a.n, a.q, budget=a.budget)
    return rep.to_json(), rep.passed, HOMOLOGICAL


def cmd_complex(a):
    from .lattice_complexes import (
        ComplexSpec, build_lattice_complex, sigma_edges_and_minimal_mixed, star_decomposition,
    )
    from .topology import reduced_homology

    V = None
    if a.V:
        V = tuple(_vector(r) for r in a.V.split(";"))
    spec = ComplexSpec(a.kind, a.m, a.n, a.bound, a.W, V)
    K = build_lattice_complex(spec, vertex_budget=a.vertex_budget)
    res = {
        "spec": spec.to_json(),
        "f_vector": K.complex.f_vector(),
        "tag_counts": K.tag_counts(),
        "sigma_edges": len(K.sigma_edges),
        "downward_closed": K.complex.check_closed(),
    }
    passed = res["downward_closed"]
    if a.homology:
        res["homology"] = reduced_homology(K.complex).to_json()
    if a.sigma:
        r = sigma_edges_and_minimal_mixed(K)
        res["sigma_mixed"] = {"passed": r.passed, "violations": r.violations[:20]}
        passed &= r.passed
    if a.star:
        r = star_decomposition(K)
        res["star_decomposition"] = {
            "covers": r.covers, "disjoint": r.disjoint, "join_identity": r.join_identity,
            "star_acyclic": r.star_acyclic, "passed": r.passed, "failures": r.failures[:20],
        }
        passed &= r.passed
    return res, passed, TRUNCATION


def _samples(n, entries, count, seed):
    from .symplectic import sample_sp_Z

    return sample_sp_Z(n, entries, count, seed=seed)


def cmd_pipeline(a):
    from . import apartments as ap

    op = a.op
    if op == "fundamental":
        xi = ap.fundamental_class(a.n)
        ok = xi.boundary().is_zero()
        return {"xi": ap.chain_to_json(xi), "cycle": ok, "pair_homology": ap.beta_pair_homology(a.n).to_json()}, ok, EXACT
    if op == "apartment":
        M = _space_matrix(a.matrix, a.q)
        c = ap.apartment_class(M)
        ok = c.boundary().is_zero()
        return {"chain": ap.chain_to_json(c), "cycle": ok, "terms": len(c)}, ok, EXACT
    if op == "verify-prop51":
        if a.matrix:
            mats = [_space_matrix(a.matrix)]
        else:
            mats = _samples(a.n, a.entries, a.samples, a.seed)
        reps = [ap.verify_factorization(M, a.bound) for M in mats]
        signs = sorted({r.sign for r in reps})
        ok = all(r.passed for r in reps) and len(signs) == 1
        mode = {1: "exact", -1: "negated"}.get(signs[0], "mismatch") if len(signs) == 1 else "inconsistent"
        res = {"count": len(reps), "mode": mode, "cases": [r.to_json() for r in reps] if a.verbose else
               [{"matrix": [list(x) for x in r.matrix.rows()], "sign": r.sign, "passed": r.passed} for r in reps]}
        return res, ok, EXACT
    if op == "rank-one":
        r = ap.rank_one_check(a.bound)
        return r.to_json(), r.passed, TRUNCATION
    if op == "decomposition":
        from .lattice_complexes import ComplexSpec, build_lattice_complex

        K = build_lattice_complex(ComplexSpec("IA", 0, a.n, a.bound))
        r = ap.relative_decomposition(K, check_link_perp=not a.no_link_perp)
        return r.to_json(), r.passed, TRUNCATION
    if op == "two-routes":
        v = _vector(a.v) if a.v else None
        w = _vector(a.w) if a.w else None
        if a.matrix:
            mats = [_space_matrix(a.matrix)]
        else:
            mats = ap.sample_fixing_pair(a.samples, a.entries, seed=a.seed)
        reps = []
        for M in mats:
            vv = v or M.column(2 * M.space.n - 2)
            ww = w or M.column(2 * M.space.n - 1)
            reps.append(ap.claim_identification(M, vv, ww, a.bound))
        ok = all(r.passed for r in reps)
        return {"count": len(reps), "cases": [r.to_json() for r in reps]}, ok, EXACT
    raise ValueError(op)


def cmd_span(a):
    from .apartments import apartment_span_Fq

    r = apartment_span_Fq(a.n, a.q, equivariance_pairs=a.equivariance, seed=a.seed, budget=a.budget)
    return r.to_json(), r.passed, EXACT


def cmd_reduce(a):
    from .reduction import manin_reduce, rational_symbol, reduction_chain

    try:
        r = manin_reduce(a.src, a.dst)
    except ValueError as exc:
        raise MalformedMatrixError(str(exc)) from None
    res = r.to_json()
    res["apartment_sum_matches"] = reduction_chain(r) == rational_symbol(r.start, r.end)
    ok = r.unimodular() and r.telescopes() and res["apartment_sum_matches"]
    return res, ok, EXACT


def cmd_cm_check(a):
    from .apartments import beta_boundary_complex
    from .buildings import build_building
    from .topology import SimplicialComplex, cm_certificate, face_poset

    kind = a.poset
    if kind == "beta-boundary":
        P, d = face_poset(beta_boundary_complex(a.n)), a.n - 1
    elif kind == "simplex-boundary":
        K = SimplicialComplex(itertools.combinations(range(a.n + 1), a.n))
        P, d = face_poset(K), a.n - 1
    else:
        B = build_building(kind, a.n, a.q, m=a.m, budget=a.budget)
        P = B.poset
        d = a.n - 2 if kind == "typeA" else a.n - 1
    if a.dim is not None:
        d = a.dim
    c = cm_certificate(P, d)
    return {"poset": kind, "elements": len(P), "certificate": c.to_json()}, c.passed, HOMOLOGICAL


COMMANDS = {
    "building": cmd_building,
    "restricted": cmd_restricted,
    "complex": cmd_complex,
    "pipeline": cmd_pipeline,
    "span": cmd_span,
    "reduce": cmd_reduce,
    "cm-check": cmd_cm_check,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stb", description="Exact checks for symplectic Steinberg modules.")
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the report to PATH")
    common.add_argument("--timing", action="store_true", help="record wall-clock time in the report")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    common.add_argument("--quiet", action="store_true", help="do not print the report")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("building", parents=[common], help="finite symplectic buildings")
    p.add_argument("--variant", choices=["full", "restricted", "upper", "typeA"], default="full")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--homology", action="store_true")
    p.add_argument("--cm-check", action="store_true")

    p = sub.add_parser("restricted", parents=[common], help="lemmas for the building restricted to W")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--budget", type=int, default=1000)

    p = sub.add_parser("complex", parents=[common], help="norm-truncated lattice complexes")
    p.add_argument("--kind", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--W", action="store_true", help="restrict to W")
    p.add_argument("--V", help="summand basis rows 'a,b,..;c,d,..' for B and BA")
    p.add_argument("--vertex-budget", type=int, default=20_000)
    p.add_argument("--homology", action="store_true")
    p.add_argument("--sigma", action="store_true", help="σ edge and minimal mixed face uniqueness")
    p.add_argument("--star", action="store_true", help="star decomposition along σ edges")

    p = sub.add_parser("pipeline", parents=[common], help="apartment classes and the map α")
    p.add_argument("op", choices=["fundamental", "apartment", "verify-prop51", "rank-one", "decomposition", "two-routes"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--q", type=int, default=0, help="field size for apartment (0 means Q)")
    p.add_argument("--matrix")
    p.add_argument("--bound", type=int, default=4)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--entries", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--v")
    p.add_argument("--w")
    p.add_argument("--no-link-perp", action="store_true")
    p.add_argument("--verbose", action="store_true", help="include full chains")

    p = sub.add_parser("span", parents=[common], help="span of apartment classes over F_q")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--equivariance", type=int, default=0, metavar="PAIRS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=100_000)

    p = sub.add_parser("reduce", parents=[common], help="continued-fraction reduction of a modular symbol")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)

    p = sub.add_parser("cm-check", parents=[common], help="Cohen–Macaulay certificate for a poset")
    p.add_argument("--poset", choices=["full", "restricted", "upper", "typeA", "beta-boundary", "simplex-boundary"],
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--dim", type=int)
    p.add_argument("--budget", type=int, default=1000)
    return ap


_META = {"json", "timing", "no_cache", "quiet", "command"}


def run_command(argv=None) -> tuple[dict | None, int]:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return None, EXIT_USAGE if exc.code else EXIT_PASS
    params = {k: v for k, v in sorted(vars(a).items()) if k not in _META}
    command = a.command if a.command != "pipeline" else f"pipeline {a.op}"
    t0 = time.perf_counter()
    key = cache_key(command, params)
    hit = None if a.no_cache else cache_load(key)
    code = EXIT_PASS
    try:
        if hit is not None:
            results, passed, level = hit["results"], hit["passed"], hit["certification_level"]
        else:
            results, passed, level = COMMANDS[a.command](a)
            results = jsonable(results)
            if not a.no_cache:
                cache_store(key, {"results": results, "passed": passed, "certification_level": level})
        code = EXIT_PASS if passed else EXIT_FAIL
        report = {"results": results, "passed": passed, "certification_level": level}
    except BudgetExceeded as exc:
        code, report = EXIT_BUDGET, {"error": "budget_exceeded", "message": str(exc)}
    except (MalformedMatrixError, NotSymplecticError) as exc:
        code, report = EXIT_MATRIX, {"error": "bad_matrix", "message": str(exc)}
    except TruncationError as exc:
        code, report = EXIT_TRUNCATION, {"error": "truncation", "message": str(exc),
                                         "required_bound": exc.required_bound}
    except ValueError as exc:
        code, report = EXIT_USAGE, {"error": "usage", "message": str(exc)}
    if "error" in report:
        print(f"stb: {report['message']}", file=sys.stderr)
        report.update({"results": None, "passed": False, "certification_level": None})
    report.update({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "timing_ms": round((time.perf_counter() - t0) * 1000, 3) if a.timing else None,
    })
    text = dumps(report)
    if a.json:
        Path(a.json).write_text(text)
    if not a.quiet:
        sys.stdout.write(text)
    return report, code


def main(argv=None) -> int:
    _, code = run_command(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
