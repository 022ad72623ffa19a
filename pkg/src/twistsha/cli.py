"""Command-line front end.

Every subcommand builds one report {input, result, assumptions, diagnostics,
version}; ``--json`` prints it as a single JSON document, otherwise a short
text rendering is printed.  Exact numbers are serialized as strings.

Exit codes: 0 success, 2 input error, 3 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from twistsha import __version__
from twistsha.arith import is_squarefree, omega0
from twistsha.curves.cohomology import (
    CohomologyError,
    GeneratedSubgroup,
    lemma_identities,
    verify_h1_order,
)
from twistsha.curves.field import QuadElem, QuadField
from twistsha.curves.weierstrass import CurveError, CurveQ, Point
from twistsha.localdata.fields import local_field, splitting_type
from twistsha.localdata.tate import residue_curve_info, tate_reduction
from twistsha.mkt import MktError, bad_primes, mkt_index, twisted
from twistsha.predict import (
    HEEGNER_CURVE,
    PredictError,
    bsd_assembly_en,
    heegner_37a,
    heegner_sha,
    rank_parity_en,
    sha_order_en,
    sha_ratio,
)
from twistsha.tunnell import OMEGA_DISPLAY, coefficients_upto, l_value_en, l_value_factor, verdict

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CROSSCHECK = 3

# Printed tables, copied verbatim as residue-class rules.
LEMMA_41_ORD = {1: 6, 2: 12, 3: 12}  # n mod 4 -> ord_w(Delta_w)
LEMMA_41_CW = {1: 2, 2: 4, 3: 2, 5: 2, 6: 2, 7: 4}  # n mod 8 -> c_w
LEMMA_41_EXT = {  # (modulus, residue) -> Q_2-extension
    (8, 1): "Q2",
    (8, 5): "Q2(sqrt(-3))",
    (8, 7): "Q2(sqrt(-1))",
    (8, 3): "Q2(sqrt(3))",
    (16, 14): "Q2(sqrt(-2))",
    (16, 2): "Q2(sqrt(2))",
    (48, 10): "Q2(sqrt(-6))", (48, 26): "Q2(sqrt(-6))", (48, 42): "Q2(sqrt(-6))",
    (48, 6): "Q2(sqrt(6))", (48, 22): "Q2(sqrt(6))", (48, 38): "Q2(sqrt(6))",
}
LEMMA_42 = {  # (sign, n mod 8) -> delta - 2 omega0(n)
    (1, 1): 0, (1, 5): 1, (1, 7): 1, (1, 6): 3, (1, 2): 2, (1, 3): 2,
    (-1, 1): 1, (-1, 5): 2, (-1, 7): 2, (-1, 2): 3, (-1, 3): 3, (-1, 6): 4,
}


class InputError(ValueError):
    pass


class CrossCheckError(ArithmeticError):
    pass


# -- serialization ------------------------------------------------------------


def exact(x) -> str:
    if isinstance(x, QuadElem):
        return f"{exact(x.a)} + ({exact(x.b)})*sqrt({x.d})"
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction, QuadElem)):
        return exact(obj)
    if isinstance(obj, Point):
        return "O" if obj.is_zero else [exact(obj.x), exact(obj.y)]
    if isinstance(obj, CurveQ):
        return [exact(a) for a in obj.ainvs]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=str) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    return str(obj)


def report(inp: dict, result, assumptions=(), diagnostics=None) -> dict:
    return {
        "input": jsonable(inp),
        "result": jsonable(result),
        "assumptions": list(assumptions),
        "diagnostics": jsonable(diagnostics or {}),
        "version": __version__,
    }


def _render_text(doc: dict, out):
    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v:
                    out.write(f"{pad}{k}:\n")
                    walk(v, indent + 1)
                else:
                    out.write(f"{pad}{k}: {v if v != [] and v != {} else '-'}\n")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)):
                    out.write(f"{pad}-\n")
                    walk(v, indent + 1)
                else:
                    out.write(f"{pad}- {v}\n")
        else:
            out.write(f"{pad}{obj}\n")

    walk({k: doc[k] for k in ("result", "assumptions", "diagnostics")}, 0)


def emit(doc: dict, args, out):
    if args.json:
        out.write(json.dumps(doc, sort_keys=False, separators=(",", ":")) + "\n")
    else:
        _render_text(doc, out)


# -- argument parsing ---------------------------------------------------------


def parse_curve(text: str) -> CurveQ:
    try:
        coeffs = [Fraction(t.strip()) for t in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed curve {text!r}") from exc
    if len(coeffs) not in (2, 5):
        raise InputError("a curve is 'a,b' or 'a1,a2,a3,a4,a6'")
    E = CurveQ.from_ainvs(coeffs)
    if E.discriminant == 0:
        raise InputError(f"singular curve {text!r}")
    return E


def parse_field(D: int) -> QuadField:
    if D in (0, 1) or not is_squarefree(D):
        raise InputError(f"--d must be a squarefree integer other than 0 and 1, got {D}")
    return QuadField(D)


def parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError as exc:
        raise InputError(f"range must look like A..B, got {text!r}") from exc
    if lo < 1 or hi < lo:
        raise InputError("range needs 1 <= A <= B")
    return lo, hi


def parse_generators(path: str) -> GeneratedSubgroup:
    """Read ``curve a b D`` followed by lines ``x_a x_b y_a y_b`` (a + b sqrt D)."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    rows = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows or rows[0][0] != "curve" or len(rows[0]) not in (4, 7):
        raise InputError("generator file must start with 'curve a b D'")
    try:
        head = [Fraction(t) for t in rows[0][1:]]
        E = CurveQ.from_ainvs(head[:-1])
        D = int(head[-1])
        K = parse_field(D)
        pts = []
        for row in rows[1:]:
            if len(row) != 4:
                raise InputError(f"expected 'x_a x_b y_a y_b', got {' '.join(row)!r}")
            xa, xb, ya, yb = (Fraction(t) for t in row)
            pts.append(Point(E, QuadElem(xa, xb, D), QuadElem(ya, yb, D), K))
    except (ValueError, ZeroDivisionError, CurveError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    return GeneratedSubgroup.from_points(pts, E, K)


# -- subcommands --------------------------------------------------------------


def _reduction_dict(red) -> dict:
    return {
        "kodaira": red.kodaira,
        "v_min_disc": red.v_min_disc,
        "tamagawa": red.tamagawa,
        "reduction": red.kind,
        "good_subkind": red.good_subkind,
        "conductor_exponent": red.conductor_exponent,
    }


def cmd_twist(args) -> dict:
    E = parse_curve(args.curve)
    K = parse_field(args.d)
    ED = twisted(E, K)
    result = {
        "curve": E,
        "twist": ED,
        "discriminant": E.discriminant,
        "twist_discriminant": ED.discriminant,
        "bad_primes": bad_primes(E),
        "twist_bad_primes": bad_primes(ED),
    }
    return report({"curve": args.curve, "d": args.d}, result)


def cmd_local(args) -> dict:
    E = parse_curve(args.curve)
    K = parse_field(args.d)
    p = args.p
    from twistsha.arith import is_prime

    if not is_prime(p):
        raise InputError(f"--p must be prime, got {p}")
    L = local_field(K.D, p)
    red_v = tate_reduction(E, p)
    red_D = tate_reduction(twisted(E, K), p)
    red_w = tate_reduction(E, L)
    result = {
        "p": p,
        "splitting": splitting_type(K.D, p),
        "local_field": L.label,
        "E/Q_p": _reduction_dict(red_v),
        "E_D/Q_p": _reduction_dict(red_D),
        "E/K_w": _reduction_dict(red_w),
    }
    if red_v.is_good:
        info = residue_curve_info(E, p)
        result["residue_curve"] = {"count": info.count, "trace": info.trace, "two_torsion_dim": info.two_torsion_dim}
    return report({"curve": args.curve, "d": args.d, "p": p}, result)


def _mkt_result(E, K) -> tuple[dict, dict]:
    br = mkt_index(E, K)
    if not br.paths_agree:
        raise CrossCheckError(f"product and Kramer paths disagree: {br.disagreements}")
    pl = br.places
    result = {
        "delta": br.total,
        "delta_inf": br.delta_inf,
        "delta_g": br.delta_g,
        "delta_m": br.delta_m,
        "delta_a": br.delta_a,
        "delta_f": br.delta_f,
        "places": {str(v): pl.kind_of(v) for v in sorted(pl.S0)},
        "ledger": [{"place": str(v), "value": val, "method": how} for v, val, how in br.ledger],
    }
    return result, {"paths_agree": br.paths_agree}


def cmd_mkt(args) -> dict:
    E = parse_curve(args.curve)
    K = parse_field(args.d)
    result, diag = _mkt_result(E, K)
    return report({"curve": args.curve, "d": args.d}, result, diagnostics=diag)


def _tunnell_record(n, coef, name) -> dict:
    r = l_value_factor(coef, n)
    return report(
        {"n": n},
        {"n": n, "coefficient_name": name, "coefficient": coef, "r": r,
         "l_value": f"{r} * omega / sqrt({n})", "omega": OMEGA_DISPLAY, "verdict": verdict(n, r)},
        ["Sha(E_n/Q) finite (for the congruent verdict)"],
    )


def cmd_tunnell(args, out) -> int:
    if args.range:
        lo, hi = parse_range(args.range)
        a = coefficients_upto(hi)
        ap = coefficients_upto(hi // 2, prime=True)
        for n in range(lo, hi + 1):
            if n == 1 or not is_squarefree(n):
                continue
            if n % 2:
                rec = _tunnell_record(n, int(a[n]), f"a_{n}")
            else:
                rec = _tunnell_record(n, int(ap[n // 2]), f"a'_{n // 2}")
            emit(rec, args, out)
        return EXIT_OK
    if args.n is None:
        raise InputError("tunnell needs --n or --range")
    res = _tunnell_checked(args.n)
    emit(_tunnell_record(args.n, res.coefficient, res.coefficient_name), args, out)
    return EXIT_OK


def _tunnell_checked(n):
    if n < 1 or not is_squarefree(n):
        raise InputError(f"n must be a squarefree positive integer, got {n}")
    return l_value_en(n)


def cmd_congruent(args) -> dict:
    res = _tunnell_checked(args.n)
    result = {
        "n": args.n,
        "verdict": res.verdict,
        "coefficient_name": res.coefficient_name,
        "coefficient": res.coefficient,
        "r": res.l_value_factor,
    }
    if args.n != 1:
        result["rank_parity"] = rank_parity_en(args.n)
    return report({"n": args.n}, result, ["Sha(E_n/Q) finite", "rank E(Q) = 0 and Sha(E/Q) = 0 (cited)"])


def _prediction_doc(inp, pred) -> dict:
    result = {"kind": pred.kind, "value": pred.value, "exponents": pred.exponents, "notes": pred.notes}
    result.update(pred.extras)
    return report(inp, result, pred.assumptions, pred.diagnostics)


def cmd_predict_sha(args) -> dict:
    if args.n is not None:
        return _prediction_doc({"n": args.n}, sha_order_en(args.n))
    if not (args.curve and args.d is not None and args.index is not None):
        raise InputError("predict-sha needs --n, or --curve --d --r-f --r-df --index")
    E = parse_curve(args.curve)
    K = parse_field(args.d)
    pred = sha_ratio(E, K, args.r_f, args.r_df, args.index)
    inp = {"curve": args.curve, "d": args.d, "r_F": args.r_f, "r_DF": args.r_df, "index": args.index}
    return _prediction_doc(inp, pred)


def cmd_heegner(args) -> dict:
    if args.curve is None:
        return _prediction_doc({"d": args.d}, heegner_37a(args.d))
    if args.index is None:
        raise InputError("heegner with --curve needs --index")
    E = parse_curve(args.curve)
    pred = heegner_sha(E, args.d, args.l_vanishes, args.index)
    return _prediction_doc({"curve": args.curve, "d": args.d, "index": args.index}, pred)


def cmd_verify_h1(args) -> dict:
    G = parse_generators(args.gens)
    rep = verify_h1_order(G)
    result = {"lhs": rep.lhs, "rhs": rep.rhs, "r_F": rep.r_F, "r_DF": rep.r_DF, "index": rep.index, "equal": rep.equal}
    diag = {"h1_equal": rep.equal}
    if G.is_finite:
        ids = lemma_identities(G)
        result["identities"] = [{"name": c.name, "values": list(c.values), "holds": c.holds} for c in ids]
        diag["identities_hold"] = all(c.holds for c in ids)
    doc = report({"gens": args.gens}, result, list(rep.assumptions), diag)
    if not all(v for v in diag.values()):
        raise CrossCheckError(json.dumps(doc))
    return doc


def _assembly_dict(a) -> dict:
    return {
        "omega_power": a.omega_power,
        "regulator": a.regulator,
        "tamagawa_product": a.tamagawa_product,
        "torsion_order": a.torsion_order,
        "sha": a.sha,
        "disc_root_factor": a.disc_root_factor,
        "lhs": f"{a.lhs} * omega^{a.omega_power} / sqrt(n)",
        "rhs": f"{a.rhs} * omega^{a.omega_power} / sqrt(n)",
        "equal": a.equal,
        "vacuous": a.vacuous,
    }


def cmd_bsd_check(args) -> dict:
    out = bsd_assembly_en(args.n)
    result = {"n": args.n, "coefficient_name": out["coefficient_name"], "coefficient": out["coefficient"]}
    diag = {}
    for key, val in out.items():
        if hasattr(val, "lhs"):
            result[key] = _assembly_dict(val)
            diag[f"{key} equal"] = val.equal
    return report({"n": args.n}, result, out["assumptions"], diag)


def lemma_41_rows(reps=None) -> list[dict]:
    """Recompute c_w and ord_w(Delta_w) for one squarefree n > 1 per usable class mod 48."""
    E = CurveQ.short(-1, 0)
    if reps is None:
        reps = []
        for r in range(48):
            if r % 4 == 0:
                continue
            n = r if r > 1 else r + 48
            while not is_squarefree(n):
                n += 48
            reps.append(n)
    rows = []
    for n in reps:
        L = local_field(n, 2)
        red = tate_reduction(E, L)
        ext = next((lab for (m, res), lab in LEMMA_41_EXT.items() if n % m == res), None)
        rows.append({
            "n": n,
            "extension": L.label,
            "ord_w": red.v_min_disc,
            "c_w": red.tamagawa,
            "golden_extension": ext,
            "golden_ord_w": LEMMA_41_ORD[n % 4],
            "golden_c_w": LEMMA_41_CW.get(n % 8),
        })
    return rows


def _same_extension(label, golden) -> bool:
    if golden is None:
        return False
    if golden == "Q2":
        return label == "Q2"
    g = int(golden[len("Q2(sqrt("):-2])
    return local_field(g, 2).label == label


def lemma_42_rows(bound: int) -> list[dict]:
    E = CurveQ.short(-1, 0)
    rows = []
    for m in range(2, bound + 1):
        if not is_squarefree(m):
            continue
        for n in (m, -m):
            br = mkt_index(E, n)
            sign = 1 if n > 0 else -1
            rows.append({
                "n": n,
                "delta": br.total,
                "golden": LEMMA_42[(sign, n % 8)] + 2 * omega0(n),
                "paths_agree": br.paths_agree,
            })
    return rows


def cmd_table(args) -> dict:
    if args.name == "lemma-4.1":
        rows = lemma_41_rows()
        bad = [
            r for r in rows
            if (r["ord_w"], r["c_w"]) != (r["golden_ord_w"], r["golden_c_w"])
            or not _same_extension(r["extension"], r["golden_extension"])
        ]
    else:
        rows = lemma_42_rows(args.bound)
        bad = [r for r in rows if r["delta"] != r["golden"] or not r["paths_agree"]]
    doc = report({"table": args.name}, {"rows": rows, "mismatches": bad}, diagnostics={"matches_golden": not bad})
    if bad:
        raise CrossCheckError(json.dumps(doc))
    return doc


# -- driver -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistsha", description="Quadratic twists, MKT index and Sha predictions.")
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one structured JSON document")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("twist", parents=[common], help="quadratic twist of a curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("local", parents=[common], help="local reduction data at p")
    p.add_argument("--curve", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("mkt", parents=[common], help="MKT index with its breakdown")
    p.add_argument("--curve", required=True)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("tunnell", parents=[common], help="Tunnell coefficients")
    p.add_argument("--n", type=int)
    p.add_argument("--range")

    p = sub.add_parser("congruent", parents=[common], help="congruent number verdict")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("predict-sha", parents=[common], help="Sha order or ratio prediction")
    p.add_argument("--n", type=int)
    p.add_argument("--curve")
    p.add_argument("--d", type=int)
    p.add_argument("--r-f", type=int, default=0)
    p.add_argument("--r-df", type=int, default=0)
    p.add_argument("--index", type=int)

    p = sub.add_parser("heegner", parents=[common], help="Heegner-case Sha prediction")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--curve")
    p.add_argument("--index", type=int)
    p.add_argument("--l-vanishes", action="store_true")

    p = sub.add_parser("verify-h1", parents=[common], help="check #H^1 against the norm index")
    p.add_argument("--gens", required=True)

    p = sub.add_parser("bsd-check", parents=[common], help="assemble both BSD sides for E_n and E/K")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("table", parents=[common], help="regenerate a printed table and diff it")
    p.add_argument("name", choices=["lemma-4.1", "lemma-4.2"])
    p.add_argument("--bound", type=int, default=500)
    return ap


HANDLERS = {
    "twist": cmd_twist,
    "local": cmd_local,
    "mkt": cmd_mkt,
    "congruent": cmd_congruent,
    "predict-sha": cmd_predict_sha,
    "heegner": cmd_heegner,
    "verify-h1": cmd_verify_h1,
    "bsd-check": cmd_bsd_check,
    "table": cmd_table,
}


VALUE_OPTIONS = ("--curve",)


def _join_values(argv: list[str]) -> list[str]:
    """Turn ``--curve -1,0`` into ``--curve=-1,0`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = _join_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "tunnell":
            return cmd_tunnell(args, out)
        emit(HANDLERS[args.command](args), args, out)
        return EXIT_OK
    except CrossCheckError as exc:
        err.write(f"cross-check failure: {exc}\n")
        return EXIT_CROSSCHECK
    except MktError as exc:
        err.write(f"cross-check failure: {exc}\n")
        return EXIT_CROSSCHECK
    except (InputError, PredictError, CurveError, CohomologyError, ValueError) as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
