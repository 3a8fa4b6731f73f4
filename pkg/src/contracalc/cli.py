"""Command-line front end.  Every command prints one JSON report.

Exit codes: 0 all verdicts pass, 2 bad input or usage, 3 a verdict failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from pathlib import Path

from .coalgebra import Coalgebra, check_coalgebra
from .comodule import Comodule, check_comodule, load_coalgebra_ref, load_json_file
from .contramodule_fd import ContramoduleFD, check_contramodule
from .errors import AxiomFailure, CoalgebraMismatch, ContracalcError, ParseError
from .exact_linalg import Mat
from .scalars import ZZ, AdicRing, Field, Poly, PolynomialRing

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 2, 3


class Inputs:
    """Collects everything a report depends on, for the digest."""

    def __init__(self, command: str, params: dict):
        self.command = command
        self.params = params
        self.files: list = []

    def load(self, path) -> tuple:
        obj = load_json_file(path)
        self.files.append(obj)
        return obj, Path(path).parent

    def digest(self) -> str:
        blob = json.dumps({"command": self.command, "params": self.params, "files": self.files},
                          sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _report(inputs: Inputs, verdicts: dict, certificates: dict | None = None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": inputs.command,
           "inputs_digest": inputs.digest(), "verdicts": verdicts}
    if certificates:
        out["certificates"] = certificates
    return out


def _load_object(inputs: Inputs, path):
    """A coalgebra, comodule, contramodule or adic presentation from a JSON file."""
    obj, base = inputs.load(path)
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected a JSON object")
    if "comult" in obj:
        return "coalgebra", Coalgebra.from_json(obj)
    if "coaction" in obj:
        C = _coalgebra_of(inputs, obj, base)
        return "comodule", Comodule.from_json(obj, C)
    if "contraaction" in obj:
        C = _coalgebra_of(inputs, obj, base)
        return "contramodule", ContramoduleFD.from_json(obj, C)
    if "diag" in obj:
        from .adic import DiagonalPresentation
        return "presentation", DiagonalPresentation.from_json(obj)
    raise ParseError(f"{path}: not a coalgebra, comodule, contramodule or presentation")


def _coalgebra_of(inputs: Inputs, obj, base):
    ref = obj.get("coalgebra")
    if isinstance(ref, str):
        try:
            inputs.files.append(json.loads((base / ref).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError):
            pass        # load_coalgebra_ref reports the problem
    return load_coalgebra_ref(obj, base)


# ---------------------------------------------------------------------------
# check

def cmd_check(args) -> tuple:
    inputs = Inputs("check", {"path": Path(args.path).name})
    kind, X = _load_object(inputs, args.path)
    if kind == "coalgebra":
        cert = check_coalgebra(X)
    elif kind == "comodule":
        cert = check_comodule(X)
    elif kind == "contramodule":
        cert = check_contramodule(X)
    else:
        from .adic import PresentedContra, nakayama_check
        P = PresentedContra(X)
        rep = _report(inputs, {"kind": kind, "passed": True, "finitely_generated": X.size is not None,
                               "relations_trivial": X.relations_trivial()},
                      {"nakayama": nakayama_check(P).to_json()})
        return rep, EXIT_OK
    rep = _report(inputs, {"kind": kind, "dim": X.dim, "passed": cert.passed}, {"axioms": cert.to_json()})
    if not cert.passed:
        rep["error"] = {"type": "AxiomFailure", "message": f"{kind} fails {cert.axiom}"}
        return rep, EXIT_INPUT
    return rep, EXIT_OK


# ---------------------------------------------------------------------------
# functor

FUNCTOR_ARITY = {"cotensor": 2, "cohom": 2, "contratensor": 2, "psi": 1, "phi": 1}


def cmd_functor(args) -> tuple:
    from . import cocontra, cofunctors
    kind = args.kind
    if len(args.paths) != FUNCTOR_ARITY[kind]:
        raise ParseError(f"{kind} takes {FUNCTOR_ARITY[kind]} input file(s)")
    inputs = Inputs("functor", {"kind": kind, "paths": [Path(p).name for p in args.paths]})
    objs = [_load_object(inputs, p) for p in args.paths]
    for k, X in objs:
        if k not in ("comodule", "contramodule"):
            raise ParseError(f"{kind} takes comodules and contramodules, got a {k}")
        cert = check_comodule(X) if k == "comodule" else check_contramodule(X)
        if not cert.passed:
            raise AxiomFailure(f"input {X!r} fails {cert.axiom}")
    if len(objs) == 2 and objs[0][1].C != objs[1][1].C:
        raise CoalgebraMismatch("inputs live over different coalgebras")
    w = args.witness
    verdicts: dict = {"kind": kind}
    certs: dict = {}
    X = objs[0][1]
    if kind == "cotensor":
        N, M = X, objs[1][1]
        _expect(N, "comodule", "right"), _expect(M, "comodule", "left")
        R = cofunctors.cotensor(N, M)
        iso = cofunctors.cotensor_with_coalgebra(N)
        verdicts.update(dim=R.dim, ambient=R.ambient)
        certs["N[]C=N"] = iso.to_json(w)
        if w:
            certs["inclusion"] = R.inclusion.to_json()
        ok = iso.verified
    elif kind == "cohom":
        M, P = X, objs[1][1]
        _expect(M, "comodule", "left"), _expect(P, "contramodule")
        R = cofunctors.cohom(M, P)
        iso = cofunctors.cohom_from_coalgebra(P)
        verdicts.update(dim=R.dim, ambient=R.ambient)
        certs["Cohom(C,P)=P"] = iso.to_json(w)
        if w:
            certs["projection"] = R.projection.to_json()
        ok = iso.verified
    elif kind == "contratensor":
        N, P = X, objs[1][1]
        _expect(N, "comodule", "right"), _expect(P, "contramodule")
        R = cofunctors.contratensor(N, P)
        iso = cofunctors.contratensor_with_free(N, 1)
        verdicts.update(dim=R.dim, ambient=R.ambient)
        certs["N(.)Hom(C,k)=N"] = iso.to_json(w)
        if w:
            certs["projection"] = R.projection.to_json()
        ok = iso.verified
    elif kind == "psi":
        _expect(X, "comodule", "left")
        P = cocontra.psi(X)
        ax = check_contramodule(P)
        rt = cocontra.roundtrip(X)
        verdicts.update(dim=P.dim, source_dim=X.dim, contramodule_axioms=ax.passed,
                        roundtrip=rt.verdict)
        certs["roundtrip"] = rt.to_json(w)
        if w:
            certs["contraaction"] = P.contraaction.to_json()
        ok = ax.passed and rt.passed
    else:
        _expect(X, "contramodule")
        M = cocontra.phi(X)
        ax = check_comodule(M)
        rt = cocontra.roundtrip(X)
        verdicts.update(dim=M.dim, source_dim=X.dim, comodule_axioms=ax.passed, roundtrip=rt.verdict)
        certs["roundtrip"] = rt.to_json(w)
        if w:
            certs["coaction"] = M.coaction.to_json()
        ok = ax.passed and rt.passed
    verdicts["passed"] = ok
    return _report(inputs, verdicts, certs), EXIT_OK if ok else EXIT_FAILED


def _expect(X, kind, side=None):
    if kind == "comodule" and (not isinstance(X, Comodule) or (side and X.side != side)):
        raise ParseError(f"expected a {side} comodule, got {X!r}")
    if kind == "contramodule" and not isinstance(X, ContramoduleFD):
        raise ParseError(f"expected a contramodule, got {X!r}")


# ---------------------------------------------------------------------------
# counterexample, harrison

def _adic_ring(kind: str, p: int) -> AdicRing:
    if kind == "zp":
        return AdicRing.zp(p)
    return AdicRing.kz(Field.Fp(p))


def cmd_counterexample(args) -> tuple:
    from .adic import counterexample
    if args.depth < 2:
        raise ParseError("--depth must be at least 2")
    inputs = Inputs("counterexample", {"ring": args.ring, "prime": args.prime, "depth": args.depth})
    cert = counterexample(_adic_ring(args.ring, args.prime), args.depth)
    verdicts = {"partial_sums_zero": all(cert.partial_sums_zero), "p_in_m^n_P": all(cert.divisible),
                "p_nonzero": cert.p_nonzero, "passed": cert.passed}
    return _report(inputs, verdicts, {"counterexample": cert.to_json()}), \
        EXIT_OK if cert.passed else EXIT_FAILED


def cmd_harrison(args) -> tuple:
    from .cocontra import harrison_truncated
    if args.set_size < 0 or args.precision < 1:
        raise ParseError("need --set-size >= 0 and --precision >= 1")
    inputs = Inputs("harrison", {"p": args.p, "set_size": args.set_size, "precision": args.precision,
                                 "seed": args.seed})
    rep = harrison_truncated(args.set_size, args.precision, args.p, seed=args.seed)
    verdicts = {"levels": [L.passed for L in rep.levels], "passed": rep.passed}
    certs = {"harrison": rep.to_json()} if args.witness else None
    return _report(inputs, verdicts, certs), EXIT_OK if rep.passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# mgm

_SHORT_Z = re.compile(r"^Z(?:/(\d+))?$")


def parse_module(text: str, ring_kind: str, prime: int):
    """A finitely generated module as a relation matrix (rows are relations).

    Accepts a JSON object {"generators": g, "relations": [[...], ...]}, a path
    to such a file, or a sum of cyclic modules such as ``Z/8+Z`` or
    ``k[z]/z^3+k[z]/(z-1)``; ``0`` is the zero module.
    """
    R = ZZ if ring_kind == "z" else PolynomialRing(Field.Fp(prime))
    txt = text.strip()
    p = Path(txt)
    if not txt.startswith(("{", "[")) and p.suffix == ".json":
        obj = load_json_file(p)
        return R, _module_from_json(R, obj)
    if txt.startswith("{"):
        try:
            obj = json.loads(txt)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad module JSON: {exc}") from exc
        return R, _module_from_json(R, obj)
    if txt == "0":
        return R, Mat(R, [], 0)
    diag = []
    for term in txt.replace(" ", "").split("+"):
        if R == ZZ:
            m = _SHORT_Z.match(term)
            if not m:
                raise ParseError(f"bad cyclic module {term!r} (expected Z or Z/d)")
            diag.append(int(m.group(1)) if m.group(1) else 0)
        else:
            if term == "k[z]":
                diag.append(R.zero)
                continue
            if not term.startswith("k[z]/"):
                raise ParseError(f"bad cyclic module {term!r} (expected k[z] or k[z]/f)")
            f = term[len("k[z]/"):]
            if f.startswith("(") and f.endswith(")"):
                f = f[1:-1]
            diag.append(Poly.parse(R.field, f))
    g = len(diag)
    rows = [[d if i == j else R.zero for j in range(g)] for i, d in enumerate(diag)]
    rows = [r for r, d in zip(rows, diag) if not R.is_zero(d)]
    return R, Mat(R, rows, g)


def _module_from_json(R, obj):
    try:
        g = int(obj["generators"])
        rels = obj.get("relations", [])
        if R == ZZ:
            rows = [[int(a) for a in r] for r in rels]
        else:
            rows = [[Poly.parse(R.field, a) for a in r] for r in rels]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"bad module presentation: {exc}") from exc
    if any(len(r) != g for r in rows):
        raise ParseError("every relation needs one entry per generator")
    return Mat(R, rows, g)


def cmd_mgm(args) -> tuple:
    from .adic import admits_contra_structure, closed_form_rule
    R, A = parse_module(args.module, args.ring, args.prime)
    if R == ZZ:
        try:
            s = int(args.s)
        except ValueError as exc:
            raise ParseError("over Z, --s must be a prime") from exc
    else:
        if args.s.strip() != "z":
            raise ParseError("over k[z], --s must be z")
        s = Poly.z(R.field)
    inputs = Inputs("mgm", {"ring": args.ring, "prime": args.prime, "s": args.s,
                            "relations": [[R.fmt(a) for a in r] for r in A.rows], "generators": A.ncols})
    rep = admits_contra_structure(A, s)
    closed = closed_form_rule(A, s)
    verdicts = {"admits": rep.admits, "closed_form_agrees": closed == rep.admits,
                "passed": closed == rep.admits}
    return _report(inputs, verdicts, {"oracle": rep.to_json()}), \
        EXIT_OK if closed == rep.admits else EXIT_FAILED


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contracalc", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--witness", action="store_true", help="include matrices and full traces")
    common.add_argument("--timing", action="store_true", help="add wall_time to the report")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a JSON object")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("functor", parents=[common], help="cotensor, cohom, contratensor, psi, phi")
    p.add_argument("kind", choices=sorted(FUNCTOR_ARITY))
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_functor)

    p = sub.add_parser("counterexample", parents=[common], help="the non-separated contramodule")
    p.add_argument("--ring", choices=["zp", "kz"], default="kz")
    p.add_argument("--prime", type=int, default=5, help="p for Z_p, residue characteristic for k[[z]]")
    p.add_argument("--depth", type=int, default=32)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("mgm", parents=[common], help="does a f.g. module carry a contramodule structure")
    p.add_argument("--ring", choices=["z", "kz"], default="z")
    p.add_argument("--prime", type=int, default=5, help="characteristic of k for k[z]")
    p.add_argument("--module", required=True)
    p.add_argument("--s", required=True)
    p.set_defaults(func=cmd_mgm)

    p = sub.add_parser("harrison", parents=[common], help="Harrison towers at finite levels")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--set-size", type=int, required=True)
    p.add_argument("--precision", type=int, required=True)
    p.set_defaults(func=cmd_harrison)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        report, code = args.func(args)
    except ContracalcError as exc:
        report = {"schema_version": SCHEMA_VERSION, "command": args.command,
                  "error": {"type": type(exc).__name__, "message": str(exc)}}
        code = EXIT_INPUT
    if args.timing:
        report["wall_time"] = round(time.perf_counter() - t0, 6)
    json.dump(report, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
