"""Command line front end: JSON problem in, deterministic report out.

Exit codes: 0 verified / valid, 1 refuted / invalid, 2 input error,
3 unknown / inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from . import builders, dualnum, planes, seriestwist, twistcore
from .coeffring import Ring
from .errors import ExtensionError, HypothesisError, StructuralError, TwistError
from .polyalg import BiPoly, Poly, TruncPoly

SCHEMA = 1
EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3
COMMANDS = ("build", "verify", "classify-plane", "classify-dual", "rank-table", "identities")


class InputError(Exception):
    """Bad job description; ``pointer`` names the offending field."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(message)
        self.pointer = pointer


# -- parameter access --------------------------------------------------------------------------

class Params:
    def __init__(self, data: dict, prefix: str = "/params"):
        if not isinstance(data, dict):
            raise InputError("expected a JSON object", prefix)
        self.data = data
        self.prefix = prefix

    def has(self, key: str) -> bool:
        return key in self.data

    def get(self, key: str, default=None):
        return self.data.get(key, default)

    def need(self, key: str):
        if key not in self.data:
            raise InputError(f"missing field {key!r}", f"{self.prefix}/{key}")
        return self.data[key]

    def int(self, key: str, default: Optional[int] = None, lo: int = 0) -> int:
        v = self.data.get(key, default) if default is not None else self.need(key)
        if isinstance(v, bool) or not isinstance(v, int) or v < lo:
            raise InputError(f"{key!r} must be an integer >= {lo}", f"{self.prefix}/{key}")
        return v

    def parse(self, key: str, fn: Callable, default=None):
        if key not in self.data and default is not None:
            return default
        raw = self.need(key)
        try:
            return fn(raw)
        except InputError:
            raise
        except (TwistError, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
            raise InputError(f"cannot read {key!r}: {exc}", f"{self.prefix}/{key}") from exc

    def sub(self, key: str) -> "Params":
        return Params(self.need(key), f"{self.prefix}/{key}")


def _ring(p: Params) -> Ring:
    return p.parse("ring", Ring.from_json, default=Ring.rationals())


def _matrix(p: Params, key: str, ring: Ring) -> BiPoly:
    def read(raw):
        if isinstance(raw, dict) and "coeffs" in raw:
            raw = raw["coeffs"]
        if isinstance(raw, dict):
            return BiPoly(ring, {tuple(int(x) for x in k.split(",")): Fraction(v)
                                 if ring.kind == "Q" else int(v) for k, v in raw.items()})
        return BiPoly.from_json(ring, {"coeffs": raw})
    return p.parse(key, read)


def _poly(p: Params, key: str, ring: Ring) -> Poly:
    return p.parse(key, lambda raw: Poly.from_json(ring, raw))


# -- family construction -----------------------------------------------------------------------

def build_family(p: Params, args) -> Tuple[str, Any]:
    """Returns ("alpha", AlphaFamily) or ("series", TruncatedAlphaFamily)."""
    if p.has("family"):
        data = p.need("family")
        if isinstance(data, dict) and data.get("kind") == "series":
            return "series", series_from_json(Params(data, p.prefix + "/family"), args)
        return "alpha", p.parse("family", twistcore.AlphaFamily.from_json)
    kind = p.need("kind")
    ring = _ring(p)
    if kind == "q":
        return "alpha", twistcore.AlphaFamily.from_q(ring, _matrix(p, "q", ring))
    if kind == "almost_null":
        return "alpha", builders.build_almost_null(_matrix(p, "q", ring))
    if kind == "ore":
        return "alpha", builders.ore_from_images(ring, _poly(p, "alpha", ring),
                                                 _poly(p, "delta", ring))
    if kind == "quantum_plane":
        return "alpha", builders.quantum_plane(ring, p.parse("qv", ring.normalize, default=2))
    if kind == "weyl":
        return "alpha", builders.weyl_family(ring)
    if kind == "dual_projection":
        return "alpha", builders.build_dual_projection(ring)
    if kind == "t2_derivation":
        return "alpha", builders.build_t2_derivation_family(p.int("n", lo=2), ring)
    if kind == "t2_derivation_tower":
        return "alpha", builders.build_t2_derivation_tower(p.int("n", lo=2), ring)
    if kind == "dual":
        return "alpha", dualnum.to_alpha_view(_poly(p, "P", ring), _poly(p, "Q", ring))
    if kind in ("series-matrix", "series-tower", "series-flip"):
        return "series", series_from_json(p, args)
    raise InputError(f"unknown family kind {kind!r}", f"{p.prefix}/kind")


def _orders(p: Params, args) -> Tuple[int, int]:
    nx = args.nx if args.nx is not None else p.int("nx", 8, lo=1)
    ny = args.ny if args.ny is not None else p.int("ny", 8, lo=1)
    return nx, ny


def series_from_json(p: Params, args) -> seriestwist.TruncatedAlphaFamily:
    ring = _ring(p)
    nx, ny = _orders(p, args)
    kind = p.get("kind", "series-matrix")
    source = p.get("source")
    if kind == "series-tower" or source == "tower":
        betas = p.need("betas")
        if not isinstance(betas, dict):
            raise InputError("betas must map indices to images", f"{p.prefix}/betas")
        imgs = {}
        for k, v in betas.items():
            try:
                imgs[int(k)] = Poly.from_json(ring, v)
            except (TwistError, ValueError) as exc:
                raise InputError(f"cannot read beta {k}: {exc}", f"{p.prefix}/betas/{k}")
        fam = seriestwist.build_series_tower(_poly(p, "alpha", ring), imgs, nx, ny)
    elif kind == "series-flip":
        fam = seriestwist.flip_series(_matrix(p, "a", ring), nx, ny)
    else:
        fam = seriestwist.build_series_family(_matrix(p, "a", ring), nx, ny)
        if p.get("flipped"):
            fam.flipped = True
    if p.get("overrides"):
        ov = {}
        for k, row in enumerate(p.get("overrides")):
            try:
                j, n, coeffs = row
                poly = Poly.from_json(ring, coeffs)
            except (TwistError, ValueError, TypeError) as exc:
                raise InputError(f"bad override: {exc}", f"{p.prefix}/overrides/{k}")
            ov[(int(j), int(n))] = TruncPoly.from_poly(poly, nx)
        fam = fam.with_overrides(ov)
    return fam


# -- commands ------------------------------------------------------------------------------------

def _status_code(status: str) -> int:
    return {"Verified": EXIT_OK, "Valid": EXIT_OK, "AlmostNull": EXIT_OK, "Pass": EXIT_OK,
            "Refuted": EXIT_REFUTED, "Invalid": EXIT_REFUTED, "ObstructedUpper": EXIT_REFUTED,
            "ObstructedLower": EXIT_REFUTED, "Fail": EXIT_REFUTED}.get(status, EXIT_UNKNOWN)


def cmd_build(p: Params, args) -> dict:
    try:
        kind, fam = build_family(p, args)
    except HypothesisError as exc:
        return {"status": "Invalid", "error": str(exc), "witness": exc.witness}
    if kind == "series":
        return {"status": "Valid", "family": fam.to_json()}
    deg = args.degree if args.degree is not None else p.int("N", 4, lo=1)
    cells = {}
    for j in range(0, deg + 1):
        for m in range(0, deg + 1):
            try:
                v = fam.alpha_cell(j, m)
            except ExtensionError as exc:
                return {"status": "Inconclusive", "family": fam.to_json(), "error": str(exc)}
            if not v.is_zero():
                poly = v.to_poly() if fam.is_quot else v
                cells.setdefault(str(j), {})[str(m)] = poly.to_json()["coeffs"]
    return {"status": "Valid", "family": fam.to_json(), "tables": cells, "degree": deg}


def cmd_verify(p: Params, args) -> dict:
    try:
        kind, fam = build_family(p, args)
    except HypothesisError as exc:
        return {"status": "Refuted", "error": str(exc), "witness": exc.witness}
    witness = p.get("witness")
    if kind == "series":
        if witness is not None:
            still = p.parse("witness", lambda w: seriestwist.replay_series_witness(fam, w))
            return _replay_report(witness, still)
        rep = seriestwist.verify_series_axioms(fam)
        return {"status": rep.status, "report": rep.to_json(), "nx": fam.nx, "ny": fam.ny}
    if witness is not None:
        still = p.parse("witness", lambda w: twistcore.witness_replays(fam, w))
        return _replay_report(witness, still)
    N = args.degree if args.degree is not None else p.int("N", twistcore.DEFAULT_DEGREE, lo=1)
    mode = p.get("mode", "axioms")
    if mode == "obstruction":
        side = p.get("side", "upper")
        if side not in ("upper", "lower"):
            raise InputError("side must be 'upper' or 'lower'", f"{p.prefix}/side")
        rep = planes.detect_obstruction(fam.q, N, side=side)
    elif mode == "axioms":
        rep = twistcore.verify_axioms(fam, N)
    else:
        raise InputError(f"unknown mode {mode!r}", f"{p.prefix}/mode")
    return {"status": rep.status, "report": rep.to_json()}


def _replay_report(witness: dict, still: bool) -> dict:
    if still:
        return {"status": "Refuted", "report": {"status": "Refuted", "witness": witness,
                                                "notes": ["witness replayed"]}}
    return {"status": "Verified", "report": {"status": "Verified",
                                             "notes": ["witness does not reproduce"]}}


def cmd_classify_plane(p: Params, args) -> dict:
    ring = _ring(p)
    if ring.kind == "mod" and ring.modulus > planes.ENUM_LIMIT:
        raise InputError("modulus too large for root enumeration", f"{p.prefix}/ring")
    q = _matrix(p, "q", ring)
    v = planes.classify_almost_null(q)
    out = {"status": v.status, "verdict": v.to_json()}
    if v.status in ("ObstructedUpper", "ObstructedLower"):
        N = args.degree if args.degree is not None else p.int("N", twistcore.DEFAULT_DEGREE, 1)
        side = "upper" if v.status == "ObstructedUpper" else "lower"
        out["obstruction"] = planes.detect_obstruction(q, N, side=side).to_json()
    return out


def cmd_classify_dual(p: Params, args) -> dict:
    ring = _ring(p)
    P, Q = _poly(p, "P", ring), _poly(p, "Q", ring)
    v = dualnum.classify_dual(P, Q)
    pair = dualnum.IotaPair(P, Q)
    rep = dualnum.verify_iota_axioms(pair, args.degree)
    out = {"status": v.status, "verdict": v.to_json(), "iota_check": rep.to_json()}
    if v.valid:
        out["alpha_view"] = dualnum.to_alpha_view(P, Q).to_json()
    return out


def cmd_rank_table(p: Params, args) -> dict:
    lo = p.int("m_min", 2, lo=2)
    hi = p.int("m_max", 10, lo=2)
    rows = dualnum.rank_table(range(lo + lo % 2, hi + 1, 2))
    ok = all(r["rank"] == r["m"] // 2 and r["nullity"] == r["m"] // 2 + 1 for r in rows)
    return {"status": "Pass" if ok else "Fail", "rows": rows}


def identity_failures(n_max: int, N_max: int, m_max: int,
                      perturb: Optional[Tuple[int, int, int]] = None,
                      vectors: int = 0, seed: int = 0) -> Tuple[Dict[str, int], List[dict]]:
    """Exhaustive check of the alternating-sum identities and the C-column identity."""
    from .coeffring import binomial
    A = dualnum.A_nN
    counts: Dict[str, int] = {}
    fails: List[dict] = []

    def record(name, ok, **where):
        counts[name] = counts.get(name, 0) + 1
        if not ok:
            fails.append({"identity": name, **where})

    for N in range(0, N_max + 1):
        record("2A_0^N = (-1)^N + 1", 2 * A(0, N) == (-1) ** N + 1, N=N)
        record("A_N^N = 1", A(N, N) == 1, N=N)
        for n in range(1, min(n_max, N) + 1):
            record("2A_n^N - A_{n-1}^{N-1} = (-1)^{N-n} C(N,n)",
                   2 * A(n, N) - A(n - 1, N - 1) == (-1) ** (N - n) * binomial(N, n), n=n, N=N)
            record("2A_n^N - A_{n-1}^N = (-1)^{N-n} C(N+1,n)",
                   2 * A(n, N) - A(n - 1, N) == (-1) ** (N - n) * binomial(N + 1, n), n=n, N=N)
    for m in range(2, m_max + 1, 2):
        C = dualnum.build_C_matrix(m)
        if perturb is not None and perturb[0] <= m and perturb[1] <= m:
            rows = [list(r) for r in C.rows]
            rows[perturb[0]][perturb[1]] += perturb[2]
            C = dualnum.ClassificationMatrix(m, tuple(tuple(r) for r in rows))
        for n in range(1, m // 2 + 1):
            for i in range(m + 1):
                record("sum_k (-1)^k c_{i,2n-k} C(n,k) = 0",
                       dualnum.column_identity(C, n, i) == 0, m=m, n=n, i=i)
    rng = random.Random(seed)
    for k in range(vectors):
        m = rng.randint(1, 8)
        y = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(m + 1)]
        a, b = dualnum.systems_equivalent_check(y)
        record("A-system <=> B-system", a == b, vector=k, m=m)
    return counts, fails


def cmd_identities(p: Params, args) -> dict:
    n_max = p.int("n_max", 20, lo=1)
    N_max = p.int("N_max", 20, lo=1)
    m_max = p.int("m_max", 10, lo=2)
    perturb = p.get("perturb")
    if perturb is not None:
        if (not isinstance(perturb, list) or len(perturb) != 3
                or not all(isinstance(x, int) for x in perturb)):
            raise InputError("perturb must be [i, j, delta]", f"{p.prefix}/perturb")
        perturb = tuple(perturb)
    vectors = p.int("vectors", 0)
    counts, fails = identity_failures(n_max, N_max, m_max, perturb, vectors, args.seed)
    out = {"status": "Pass" if not fails else "Fail",
           "checks": dict(sorted(counts.items()))}
    if fails:
        out["first_failure"] = fails[0]
        out["failures"] = len(fails)
    return out


HANDLERS = {"build": cmd_build, "verify": cmd_verify, "classify-plane": cmd_classify_plane,
            "classify-dual": cmd_classify_dual, "rank-table": cmd_rank_table,
            "identities": cmd_identities}


# -- plumbing ------------------------------------------------------------------------------------

def thread_cap() -> int:
    """TWISTLAB_THREADS, validated; every command currently runs on one thread."""
    raw = os.environ.get("TWISTLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"TWISTLAB_THREADS must be a positive integer, got {raw!r}", "$env")
    if n < 1:
        raise InputError(f"TWISTLAB_THREADS must be a positive integer, got {raw!r}", "$env")
    return n


def load_job(command: str, text: str) -> Params:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}", "")
    if not isinstance(data, dict):
        raise InputError("top level must be an object", "")
    if "schema" in data and data["schema"] != SCHEMA:
        raise InputError(f"unsupported schema {data['schema']!r}", "/schema")
    if "command" in data and data["command"] != command:
        raise InputError(f"job is for {data['command']!r}, not {command!r}", "/command")
    if "params" in data:
        return Params(data["params"], "/params")
    body = {k: v for k, v in data.items() if k not in ("schema", "command")}
    return Params(body, "")


def run(command: str, text: str, args) -> Tuple[int, dict]:
    try:
        thread_cap()
        params = load_job(command, text)
        body = HANDLERS[command](params, args)
    except InputError as exc:
        return EXIT_INPUT, {"status": "InputError", "error": str(exc), "pointer": exc.pointer}
    except (StructuralError, ValueError) as exc:
        return EXIT_INPUT, {"status": "InputError", "error": str(exc), "pointer": ""}
    except HypothesisError as exc:
        return EXIT_REFUTED, {"status": "Invalid", "error": str(exc), "witness": exc.witness}
    except ExtensionError as exc:
        return EXIT_UNKNOWN, {"status": "Inconclusive", "error": str(exc)}
    return _status_code(body["status"]), body


def render_text(command: str, report: dict) -> str:
    lines = [f"{command}: {report['status']}"]
    for key in ("error", "pointer"):
        if report.get(key):
            lines.append(f"  {key}: {report[key]}")
    inner = report.get("report", {})
    for note in inner.get("notes", []):
        lines.append(f"  note: {note}")
    w = report.get("witness") or inner.get("witness")
    if w:
        lines.append("  witness: " + json.dumps(w, sort_keys=True))
    verdict = report.get("verdict")
    if verdict:
        if "params" in verdict:
            lines.append(f"  lambda = {verdict['params']['lambda']}, xi = {verdict['params']['xi']}")
        for cond in ("condition_a", "condition_b"):
            if cond in verdict:
                for c in verdict[cond]["clauses"]:
                    mark = "ok " if c["holds"] else "BAD"
                    lines.append(f"  [{mark}] {c['clause']}: {c['lhs']} vs {c['rhs']}")
        if "clause" in verdict:
            lines.append(f"  failing clause: {verdict['clause']}")
    for row in report.get("rows", []):
        lines.append(f"  m={row['m']:>3}  rank={row['rank']:>3}  nullity={row['nullity']:>3}")
    if "first_failure" in report:
        lines.append("  first failure: " + json.dumps(report["first_failure"], sort_keys=True))
    elif "checks" in report and command == "identities":
        lines.append(f"  {sum(report['checks'].values())} checks passed")
    return "\n".join(lines)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistlab", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", "-i", required=True, help="job JSON file, or - for stdin")
    ap.add_argument("--output", "-o", choices=("json", "text"), default="json")
    ap.add_argument("--degree", type=int, default=None, help="verification degree N")
    ap.add_argument("--nx", type=int, default=None, help="X-adic truncation order")
    ap.add_argument("--ny", type=int, default=None, help="Y-adic truncation order")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    for name in ("degree", "nx", "ny"):
        v = getattr(args, name)
        if v is not None and v < 1:
            print(f"--{name} must be >= 1", file=sys.stderr)
            return EXIT_INPUT
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        code, report = EXIT_INPUT, {"status": "InputError", "error": str(exc), "pointer": ""}
    else:
        code, report = run(args.command, text, args)
    report = {"schema": SCHEMA, "command": args.command, **report}
    if args.output == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(render_text(args.command, report))
    return code


if __name__ == "__main__":
    sys.exit(main())
