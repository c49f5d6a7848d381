"""Command-line driver.

    ikedalift eigenform --weight 32
    ikedalift siegel-series --genus 4 --prime 11 --matrix "[1,1,3,3,0,1,0,0,1,0]"
    ikedalift lift --weight 12 --genus 4 --disc-bound 200 --out table.json
    ikedalift congruence --weights 12,32 --prime 11 --genus 4 --disc-bound 200

Exit status: 0 on success, 1 on invalid input, 2 on an unsupported case.
Defaults can be overridden by a JSON file named in $IKEDALIFT_CONFIG.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, fields

from . import __version__
from .arith import to_string
from .halfint import cohen_eisenstein, shimura_eigen_lift
from .lifting import (
    FourierTable,
    eisenstein_siegel_coeff,
    eisenstein_stabilized_coeff,
    lift_table,
    stabilize_via_operator,
    stabilized_table,
)
from .modforms import eigenforms, ordinary_at, satake_ring
from .padic import congruence_scan, factor_report, split_prime
from .quadforms import BinaryQF, HalfIntMatrix, classes_up_to
from .quadforms.binary import lemma36_correspondence, lemma36_i, lemma36_ii
from .siegel_series import UnsupportedCase, siegel_series

log = logging.getLogger("ikedalift")

CONFIG_ENV = "IKEDALIFT_CONFIG"


@dataclass
class RunConfig:
    precision: int = 200
    padic_precision: int = 30
    disc_bound: int = 200
    format: str = "json"

    def validate(self):
        for name in ("precision", "padic_precision"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.disc_bound < 0:
            raise ValueError("disc_bound must be non-negative")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")


def load_config(path: str | None = None) -> RunConfig:
    path = path or os.environ.get(CONFIG_ENV)
    cfg = RunConfig()
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in fields(RunConfig)}
        for key, value in data.items():
            if key not in known:
                raise ValueError(f"unknown config key {key!r}")
            setattr(cfg, key, value)
    cfg.validate()
    return cfg


# -- output helpers ------------------------------------------------------------


def _emit(args, payload, rows=None, header=None):
    """Write JSON (or CSV when rows are given and --format csv) to --out or stdout."""
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pick_form(weight: int, index: int, precision: int):
    forms = eigenforms(weight, precision)
    if not forms:
        raise ValueError(f"S_{weight} is zero")
    if not 0 <= index < len(forms):
        raise ValueError(f"weight {weight} has {len(forms)} Galois orbits; index {index} out of range")
    return forms[index]


def _lift_inputs(args, extra_prime: int = 0):
    weight, genus = args.weight, args.genus
    if genus not in (2, 4):
        raise ValueError("genus must be 2 or 4")
    k, n = weight // 2, genus // 2
    if weight % 2:
        raise ValueError("weight must be even")
    if (k - n) % 2:
        raise ValueError(f"the lift needs k = n mod 2 (weight {weight} = 2k, genus {genus} = 2n)")
    bound = args.disc_bound
    f = _pick_form(weight, args.index, max(args.precision // 4, extra_prime + 1, 40))
    h = shimura_eigen_lift(f, max(args.precision, bound + 1))
    return f, h, n, bound


def _table_status(table: FourierTable) -> int:
    for T, reason in table.skipped:
        log.info("skipped %s: %s", T, reason)
    if table.skipped:
        log.warning("%d classes skipped as unsupported (use -v for the list)", len(table.skipped))
    if table.skipped and not table.entries:
        return 2
    return 0


# -- commands ------------------------------------------------------------------


def cmd_eigenform(args) -> int:
    forms = eigenforms(args.weight, args.precision)
    _emit(args, [f.to_json() for f in forms])
    return 0


def cmd_halfint(args) -> int:
    k = args.k
    out = []
    for f in eigenforms(2 * k, max(args.precision // 4, 40)) if 2 * k >= 12 else []:
        h = shimura_eigen_lift(f, args.precision)
        d = h.to_json()
        d["eigenform_field"] = f.hecke_field.polynomial_string()
        out.append(d)
    H = cohen_eisenstein(k, args.precision)
    out.append(H.to_json() | {"name": f"Cohen H_{k}+1/2"})
    _emit(args, out)
    return 0


def cmd_siegel_series(args) -> int:
    T = HalfIntMatrix.parse(args.matrix)
    if args.genus is not None and T.genus != args.genus:
        raise ValueError(f"matrix has genus {T.genus}, not {args.genus}")
    if not T.is_positive_definite():
        raise ValueError("T must be positive definite")
    F = siegel_series(T, args.prime)
    if args.format == "json" and args.out:
        _emit(args, {"matrix": list(T.entries), "prime": args.prime, "v": F.v, "poly": str(F)})
    else:
        sys.stdout.write(str(F) + "\n")
    return 0


def cmd_lift(args) -> int:
    f, h, n, bound = _lift_inputs(args)
    table = lift_table(f, h, n, bound)
    payload = table.to_json() | {"field": f.hecke_field.polynomial_string()}
    rows = [[T.disc, str(T), to_string(c)] for T, c in table.entries]
    _emit(args, payload, rows, ["disc", "matrix", "coeff"])
    return _table_status(table)


def cmd_stabilize(args) -> int:
    p = args.prime
    f, h, n, bound = _lift_inputs(args, extra_prime=p)
    if not ordinary_at(f, p):
        raise ValueError(f"f is not ordinary at {p}")
    if args.method == "operator":
        if n != 1:
            raise UnsupportedCase("the operator form is implemented at genus 2 only")
        table = stabilize_via_operator(f, h, p, bound)
    else:
        table = stabilized_table(f, h, n, p, bound)
    R = satake_ring(f, p)
    payload = table.to_json() | {
        "field": f.hecke_field.polynomial_string(),
        "ring": f"y^2 - ({to_string(R.e1)})*y + {to_string(R.e2)}",
        "alpha": "y",
    }
    rows = [[T.disc, str(T), to_string(c)] for T, c in table.entries]
    _emit(args, payload, rows, ["disc", "matrix", "coeff"])
    return _table_status(table)


def cmd_eisenstein(args) -> int:
    k, n = args.k, args.genus // 2
    classes = classes_up_to(args.genus, args.disc_bound) if args.disc_bound > 0 else []
    entries, skipped = [], []
    for T in classes:
        try:
            c = eisenstein_siegel_coeff(k, n, T) if args.prime is None else eisenstein_stabilized_coeff(k, n, T, args.prime)
        except UnsupportedCase as exc:
            skipped.append((T, str(exc)))
            continue
        entries.append((T, c))
    table = FourierTable(args.genus, k + n, 1 if args.prime is None else args.prime, entries, None, skipped)
    payload = table.to_json()
    if args.prime is not None:
        payload["rank0"] = to_string(eisenstein_stabilized_coeff(k, n, None, args.prime))
    rows = [[T.disc, str(T), to_string(c)] for T, c in entries]
    _emit(args, payload, rows, ["disc", "matrix", "coeff"])
    return _table_status(table)


def cmd_congruence(args) -> int:
    weights = [int(w) for w in args.weights.split(",")]
    if len(weights) != 2:
        raise ValueError("--weights takes exactly two weights")
    p = args.prime
    tables = []
    for w in weights:
        ns = argparse.Namespace(**vars(args))
        ns.weight = w
        f, h, n, bound = _lift_inputs(ns)
        tables.append((f, lift_table(f, h, n, bound)))
    (fa, ta), (fb, tb) = tables
    field_ = fb.hecke_field if fb.hecke_field.degree >= fa.hecke_field.degree else fa.hecke_field
    ideals = split_prime(field_, p)
    common = {T for T, _ in ta.entries} & {T for T, _ in tb.entries}
    ea = [(T, T.disc, c) for T, c in ta.entries if T in common]
    eb = [(T, T.disc, c) for T, c in tb.entries if T in common]
    report = congruence_scan(ea, eb, ideals, args.padic_precision)
    rows, out_rows = [], []
    for r in report.rows:
        vals = [("inf" if v is None else str(v)) for v in r.valuations.values()]
        ok = any(v is None or v >= 1 for v in r.valuations.values())
        rows.append([r.disc, str(r.key), ";".join(vals), "ok" if ok else "violation"])
        integral = r.norm is None or r.norm.denominator == 1
        if not integral:
            log.warning("norm at %s is not integral: %s", r.key, r.norm)
        facs, cof, tag = factor_report(abs(r.norm.numerator)) if r.norm else ([], 0, "zero")
        out_rows.append(
            {
                "disc": r.disc,
                "matrix": list(r.key.entries),
                "valuations": vals,
                "norm": str(r.norm),
                "norm_integral": integral,
                "norm_factors": [[q, e] for q, e in facs],
                "cofactor": str(cof),
                "cofactor_kind": tag,
                "verdict": "ok" if ok else "violation",
            }
        )
    payload = {
        "weights": weights,
        "prime": p,
        "genus": args.genus,
        "disc_bound": args.disc_bound,
        "ideals": [str(I) for I in ideals],
        "classes": len(report.rows),
        "skipped": len({T for T, _ in ta.skipped} | {T for T, _ in tb.skipped}),
        "norms_divisible": report.norms_divisible(p),
        "norms_integral": all(row["norm_integral"] for row in out_rows),
        "verdict": report.verdict(),
        "rows": out_rows,
    }
    _emit(args, payload, rows, ["disc", "matrix", "valuation", "verdict"])
    for _, t in tables:
        _table_status(t)
    return 0 if report.rows or not (ta.skipped or tb.skipped) else 2


def cmd_lemma36(args) -> int:
    D, p, variant = args.D, args.p, args.variant
    if variant in ("iii", "iv"):
        rep = lemma36_correspondence(variant, D, p)
        payload = {
            "variant": variant,
            "D": D,
            "p": p,
            "source_classes": rep.source_count,
            "target_classes": rep.target_count,
            "bijective": rep.bijective,
            "pairs": [[str(a), str(b)] for a, b in rep.pairs],
        }
    else:
        if args.form is None:
            raise ValueError("variants i and ii need --form")
        Q = BinaryQF.parse(args.form)
        if Q.disc != D:
            raise ValueError(f"form has discriminant {Q.disc}, not {D}")
        image, g = (lemma36_i if variant == "i" else lemma36_ii)(Q, p)
        payload = {"variant": variant, "D": D, "p": p, "form": str(Q), "image": str(image), "matrix": [list(r) for r in g]}
    _emit(args, payload)
    return 0


# -- parser --------------------------------------------------------------------


def build_parser(cfg: RunConfig) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ikedalift", description="Ikeda lifts, Siegel series and p-adic congruences")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, lift=False):
        p.add_argument("--precision", type=int, default=cfg.precision)
        p.add_argument("--padic-precision", type=int, default=cfg.padic_precision)
        p.add_argument("--format", choices=["json", "csv"], default=cfg.format)
        p.add_argument("--out")
        if lift:
            p.add_argument("--weight", type=int, required=True, help="weight 2k of f")
            p.add_argument("--genus", type=int, default=4)
            p.add_argument("--disc-bound", type=int, default=cfg.disc_bound)
            p.add_argument("--index", type=int, default=0, help="Galois orbit of f")

    p = sub.add_parser("eigenform", help="normalized eigenforms of level one")
    common(p)
    p.add_argument("--weight", type=int, required=True)
    p.set_defaults(func=cmd_eigenform)

    p = sub.add_parser("halfint", help="plus-space eigenforms of weight k + 1/2")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_halfint)

    p = sub.add_parser("siegel-series", help="the polynomial F_l(T; X)")
    common(p)
    p.add_argument("--genus", type=int)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_siegel_series)

    p = sub.add_parser("lift", help="Fourier coefficients of the lift")
    common(p, lift=True)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("stabilize", help="semi-ordinary p-stabilization")
    common(p, lift=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--method", choices=["closed", "operator"], default="closed")
    p.set_defaults(func=cmd_stabilize)

    p = sub.add_parser("eisenstein", help="Siegel Eisenstein coefficients")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--genus", type=int, default=4)
    p.add_argument("--disc-bound", type=int, default=cfg.disc_bound)
    p.add_argument("--prime", type=int)
    p.set_defaults(func=cmd_eisenstein)

    p = sub.add_parser("congruence", help="compare two lifts modulo primes above p")
    common(p)
    p.add_argument("--weights", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--genus", type=int, default=4)
    p.add_argument("--disc-bound", type=int, default=cfg.disc_bound)
    p.add_argument("--index", type=int, default=0)
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("lemma36", help="binary-form correspondences mod p")
    common(p)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--variant", choices=["i", "ii", "iii", "iv"], default="iii")
    p.add_argument("--form")
    p.set_defaults(func=cmd_lemma36)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = load_config()
    except (OSError, ValueError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return 1
    parser = build_parser(cfg)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        RunConfig(args.precision, args.padic_precision, getattr(args, "disc_bound", 1), args.format).validate()
        return args.func(args)
    except UnsupportedCase as exc:
        print(f"unsupported: {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, IndexError, KeyError) as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
