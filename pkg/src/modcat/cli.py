"""Command-line front end: ``modcat <subcommand> ...``.

Exit status is 0 on success, 1 when the input fails validation and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from typing import Any, Sequence

import mpmath

from .classification import (CSV_HEADER, ResourceBoundError, check_prime_transitive_catalog,
                             classify_transitive, verify_transitivity_theorems)
from .cyclotomic import Cyc
from .galois import NoMatch, galois_group
from .modular_data import (ModularData, ModularDataError, build_pointed, build_sl2,
                           build_sl2_adjoint, build_svec, cyclic_quadratic_form, deligne_product,
                           is_prime, prime_factorization, validate_modular)
from .nt import units
from .sl2z import (LiftFailure, NotSignedPermutation, g_sigma_category_check, is_irreducible,
                   is_minimal, lift_projective)
from .supermod import (SuperModularData, build_sl2_super, is_s_simple, is_super_transitive,
                       split_check, svec_product, verify_super_theorems)


class UsageError(Exception):
    pass


# input / output -------------------------------------------------------------------

def super_to_json(C: SuperModularData) -> dict:
    return {"underlying": C.underlying.to_json(), "fermion": C.fermion, "basic": C.basic}


def super_from_json(obj: dict) -> SuperModularData:
    return SuperModularData(ModularData.from_json(obj["underlying"]), obj["fermion"], obj["basic"])


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read {path}: {err}") from err


def load_data(path: str) -> ModularData:
    obj = _load(path)
    if "underlying" in obj:
        return super_from_json(obj).underlying
    return ModularData.from_json(obj)


def load_super(path: str) -> SuperModularData:
    obj = _load(path)
    if "underlying" in obj:
        return super_from_json(obj)
    return SuperModularData(ModularData.from_json(obj))


def _approx(x: Cyc, bits: int) -> str:
    with mpmath.workprec(bits):
        v = mpmath.chop(x.embed(bits), tol=mpmath.mpf(2) ** (16 - bits))
        return mpmath.nstr(v, max(5, int(bits * 0.30103)))


def _add_approx(obj: dict, C: ModularData, bits: int) -> dict:
    obj = dict(obj)
    obj["approx"] = {
        "precision_bits": bits,
        "S": [[_approx(x, bits) for x in row] for row in C.S.to_lists()],
        "dims": [_approx(d, bits) for d in C.dims],
    }
    return obj


def _pretty(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(i, (dict, list)) for i in
                                                         (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_pretty(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}"
                         for v in obj)
    return f"{pad}{obj}"


def render(obj: Any, fmt: str, rows: list[list[str]] | None = None, header: list[str] | None = None) -> str:
    if fmt == "csv":
        if rows is None:
            raise UsageError("csv output is only available for catalogs")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "pretty":
        return _pretty(obj) + "\n"
    return json.dumps(obj, indent=2) + "\n"


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".modcat-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, out)


# subcommands ------------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as err:
        raise UsageError(f"expected a list of integers, got {text!r}") from err


def cmd_construct(args) -> tuple[dict, int]:
    kind = args.kind
    if kind in ("sl2", "sl2-adjoint", "super-sl2") and (args.k is None or args.l is None):
        raise UsageError(f"{kind} needs --k and --l")
    if kind == "sl2":
        C = build_sl2(args.k, args.l)
    elif kind == "sl2-adjoint":
        C = build_sl2_adjoint(args.k, args.l)
    elif kind == "pointed":
        if args.orders is None or args.conductor is None:
            raise UsageError("pointed needs --orders and --conductor")
        orders = _int_list(args.orders)
        if args.q is not None:
            q = _int_list(args.q)
        elif args.form is not None and len(orders) == 1:
            q = cyclic_quadratic_form(orders[0], args.form, args.conductor)
        else:
            raise UsageError("pointed needs --q, or --form for a cyclic group")
        C = build_pointed(orders, q, args.conductor)
    elif kind == "svec":
        C = build_svec(args.eps)
    elif kind == "product":
        if not args.inputs or len(args.inputs) != 2:
            raise UsageError("product needs two --in files")
        C = deligne_product(load_data(args.inputs[0]), load_data(args.inputs[1]))
    elif kind == "sproduct":
        if not args.inputs or len(args.inputs) != 2:
            raise UsageError("sproduct needs two --in files")
        S = svec_product(load_super(args.inputs[0]), load_super(args.inputs[1]))
        return super_to_json(S), 0
    elif kind == "super-sl2":
        return super_to_json(build_sl2_super(args.k, args.l)), 0
    else:
        raise UsageError(f"unknown construction {kind}")
    obj = C.to_json()
    if args.approx:
        obj = _add_approx(obj, C, args.precision)
    return obj, 0


def cmd_validate(args) -> tuple[dict, int]:
    C = load_data(args.input)
    rep = validate_modular(C)
    return rep.to_json(), 0 if rep.ok else 1


def _modular_input(args) -> ModularData:
    C = load_data(args.input)
    rep = validate_modular(C)
    if not rep.ok:
        raise ModularDataError("input is not modular: " + ", ".join(rep.failures))
    return C


def cmd_galois(args) -> tuple[dict, int]:
    return galois_group(_modular_input(args)).to_json(), 0


def _rep_report(rho) -> dict:
    desc = is_minimal(rho)
    checks = {}
    for a in units(rho.level):
        try:
            checks[str(a)] = "pass" if g_sigma_category_check(rho, a) else "fail"
        except NotSignedPermutation:
            checks[str(a)] = "fail"
    return {
        "level": rho.level,
        "dim": rho.dim,
        "minimal": desc is not None,
        "type": desc.type if desc else None,
        "irreducible": is_irreducible(rho),
        "factorization": desc.to_json() if desc else [],
        "g_sigma_checks": checks,
    }


def cmd_rep(args) -> tuple[Any, int]:
    C = _modular_input(args)
    lifts = lift_projective(C)
    if args.lift is not None:
        if not 0 <= args.lift < 12:
            raise UsageError("--lift must be between 0 and 11")
        report = _rep_report(lifts[args.lift])
        return report, 0 if "fail" not in report["g_sigma_checks"].values() else 1
    reports = [_rep_report(r) for r in lifts]
    bad = any("fail" in r["g_sigma_checks"].values() for r in reports)
    return reports, 1 if bad else 0


def cmd_factor(args) -> tuple[dict, int]:
    C = _modular_input(args)
    factors = prime_factorization(C)
    return {"factors": [[C.labels[i] for i in sorted(D)] for D in factors],
            "prime": is_prime(C)}, 0


def cmd_classify(args) -> tuple[Any, int, list[list[str]]]:
    catalog = classify_transitive(args.max_ordt)
    return [e.to_json() for e in catalog], 0, [e.csv_row() for e in catalog]


def cmd_super(args) -> tuple[dict, int]:
    if args.input:
        C = load_super(args.input)
    elif args.k is not None and args.l is not None:
        C = build_sl2_super(args.k, args.l)
    else:
        raise UsageError("super needs --in or --k and --l")
    bad = C.invariant_failures()
    if bad:
        raise ModularDataError("not super-modular: " + ", ".join(bad))
    split = split_check(C)
    obj = C.to_json()
    obj.update({
        "transitive": is_super_transitive(C),
        "s_simple": is_s_simple(C),
        "split": split if isinstance(split, str) else
        ([C.labels[i] for i in sorted(split)] if split is not None else None),
    })
    return obj, 0


def cmd_theorems(args) -> tuple[dict, int]:
    if args.prime is not None:
        rep = check_prime_transitive_catalog(args.prime)
        obj = {"p": rep.p, "ok": rep.ok,
               "categories": [{"l": l, "prime": rep.prime[l], "transitive": rep.transitive[l],
                               "anomaly": str(rep.anomalies[l])} for l in rep.labels],
               "pairwise_inequivalent": rep.pairwise_inequivalent,
               "anomalies_distinct": rep.anomalies_distinct}
        return obj, 0 if rep.ok else 1
    if args.super_kmax is not None:
        rep = verify_super_theorems(args.super_kmax)
        return rep, 0 if rep["ok"] else 1
    if args.input:
        checks = verify_transitivity_theorems(_modular_input(args))
        return {"checks": checks, "ok": all(checks.values())}, 0 if all(checks.values()) else 1
    raise UsageError("theorems needs --in, --prime or --super-kmax")


# parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "pretty"], default="json")
    common.add_argument("--out", help="write output to this path instead of stdout")

    parser = argparse.ArgumentParser(prog="modcat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build modular data")
    p.add_argument("kind", choices=["sl2", "sl2-adjoint", "pointed", "svec", "product",
                                    "sproduct", "super-sl2"])
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--eps", type=int, choices=[1, -1], default=1)
    p.add_argument("--orders", help="cyclic orders, e.g. '5' or '2,2'")
    p.add_argument("--q", help="q exponents for every group element, lexicographic order")
    p.add_argument("--form", type=int, help="c in q(a) = zeta^(c a^2) for a cyclic group")
    p.add_argument("--conductor", type=int)
    p.add_argument("--in", dest="inputs", action="append")
    p.add_argument("--approx", action="store_true", help="add floating renderings")
    p.add_argument("--precision", type=int, default=53, help="bits for --approx")
    p.set_defaults(func=cmd_construct)

    for name, func, text in [("validate", cmd_validate, "check modular data"),
                             ("galois", cmd_galois, "Galois action on simples"),
                             ("factor", cmd_factor, "prime factorization")]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--in", dest="input", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("rep", parents=[common], help="SL2(Z) lifts")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--lift", type=int)
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("classify", parents=[common], help="catalog of transitive data")
    p.add_argument("--max-ordt", type=int, default=40)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("super", parents=[common], help="super-modular analysis")
    p.add_argument("--in", dest="input")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.set_defaults(func=cmd_super)

    p = sub.add_parser("theorems", parents=[common], help="structure theorem checks")
    p.add_argument("--in", dest="input")
    p.add_argument("--prime", type=int)
    p.add_argument("--super-kmax", type=int)
    p.set_defaults(func=cmd_theorems)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
        rows = result[2] if len(result) == 3 else None
        obj, code = result[0], result[1]
        emit(render(obj, args.format, rows, CSV_HEADER if rows is not None else None), args.out)
        return code
    except (UsageError, ResourceBoundError) as err:
        print(f"modcat: {err}", file=sys.stderr)
        return 2
    except (ModularDataError, NoMatch, LiftFailure, NotSignedPermutation) as err:
        print(f"modcat: validation failed: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"modcat: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
