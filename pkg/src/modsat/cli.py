"""Command-line front end: ``modsat <command> ...``, JSON in and out.

Exit codes: 0 success, 1 input error, 2 hypothesis violation, 3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .automorphism import automorphism_from_json, pinned_automorphism, validate_fixed_datum
from .brauer import HypothesisViolation, InternalInvariantError, satake_matrix, setup_from_json
from .rootdata import BAD_PRIME_TABLE, RootDatum, build_root_datum, dual_datum
from .suite import SCHEMA_VERSION, SuiteConfig, corrupted_folding_table, dumps, run_suite
from .weyl import element_from_word, parse_word, weyl_order

log = logging.getLogger("modsat")

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_INTERNAL = 0, 1, 2, 3


def bad_primes_table() -> list[dict]:
    """One row per group of types sharing a bound; bounds are strings ("n" for C_n)."""
    return [{"types": list(types), "bound": bound} for types, bound in BAD_PRIME_TABLE]


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc


def datum_from_json(data: dict) -> RootDatum:
    """A full root datum JSON or the shorthand ``{"type": "B", "rank": 3, "isogeny": "sc"}``."""
    if "type" in data:
        return build_root_datum(data["type"], int(data["rank"]), data.get("isogeny", "sc"))
    return RootDatum.from_json(data)


def _emit(obj, out: str | None) -> None:
    text = dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _versioned(obj: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, **obj}


# ---------------------------------------------------------------------------
# commands


def cmd_bad_primes(args) -> int:
    _emit(_versioned({"excluded_primes": bad_primes_table()}), args.out)
    return EXIT_OK


def cmd_group(args) -> int:
    d = _datum_arg(args)
    from .rootdata import bad_prime_bound

    _emit(
        _versioned({
            "datum": d.to_json(),
            "label": d.label,
            "weyl_order": weyl_order(d),
            "positive_roots": [list(r) for r in d.positive_roots],
            "two_rho": list(d.two_rho),
            "bad_prime_bound": bad_prime_bound(d),
            "dual": dual_datum(d).to_json(),
        }),
        args.out,
    )
    return EXIT_OK


def _datum_arg(args) -> RootDatum:
    if getattr(args, "datum", None):
        return datum_from_json(_load_json(args.datum))
    if getattr(args, "type", None):
        return build_root_datum(args.type, args.rank, args.isogeny)
    raise ValueError("give --datum FILE or --type/--rank")


def cmd_auto(args) -> int:
    d = _datum_arg(args)
    a = automorphism_from_json(d, _load_json(args.auto))
    rep = validate_fixed_datum(a)
    _emit(_versioned({"automorphism": a.to_json(), "fixed_datum": a.fixed_datum.to_json(), "validation": rep.to_json()}), args.out)
    return EXIT_OK if rep.ok else EXIT_INPUT


def cmd_fold(args) -> int:
    d = _datum_arg(args)
    perm = [int(x) for x in args.perm.replace(",", " ").split()]
    a = pinned_automorphism(d, perm, args.ell)
    rep = validate_fixed_datum(a)
    _emit(
        _versioned({
            "base": d.label,
            "folded_type": a.folded_type,
            "fixed_datum": a.fixed_datum.to_json(),
            "embedding": [list(r) for r in a.embedding],
            "validation": rep.to_json(),
        }),
        args.out,
    )
    return EXIT_OK if rep.ok else EXIT_INTERNAL


def cmd_brauer_matrix(args) -> int:
    s = setup_from_json(_load_json(args.setup))
    if args.weight_bound < 0:
        raise ValueError("--weight-bound must be nonnegative")
    m = satake_matrix(s, args.weight_bound, threads=args.threads)
    out = m.to_json()
    out["g_dual"] = s.g_datum.label
    out["h_dual"] = s.h_datum.label
    _emit(out, args.out)
    return EXIT_OK


def cmd_tate(args) -> int:
    from . import tate

    if args.module:
        m = tate.SigmaModule.from_json(_load_json(args.module))
        groups = [tate.tate_cohomology(m, j).to_json() for j in args.j]
        _emit(_versioned({"module": m.to_json(), "groups": groups}), args.out)
    elif args.tensor_dim is not None:
        if args.ell is None:
            raise ValueError("--tensor-dim needs --ell")
        degrees = [int(x) for x in args.degrees.split(",")] if args.degrees else None
        t = tate.tate_of_tensor_power(args.tensor_dim, args.ell, args.coeff, degrees)
        _emit(_versioned({"tensor_power": t.to_json()}), args.out)
    else:
        raise ValueError("give --module FILE or --tensor-dim N --ell P")
    return EXIT_OK


def _theta(data) -> list[Fraction]:
    from .dualhom import parse_theta

    values = data["values"] if isinstance(data, dict) else data
    return list(parse_theta(values))


def cmd_dl_tate(args) -> int:
    from .grcombi import dl_tate_multiset

    data = _load_json(args.theta)
    if "datum" not in data:
        raise ValueError("theta.json needs a 'datum'")
    d = datum_from_json(data["datum"])
    theta = _theta(data)
    if len(theta) != d.rank:
        raise ValueError(f"theta needs {d.rank} values")
    gens = [(i,) for i in parse_word(args.wx)]
    twist = element_from_word(d, parse_word(args.twist))
    vartheta = data.get("vartheta")
    r = dl_tate_multiset(d, gens, twist, theta, vartheta, args.j)
    _emit(r.to_json(), args.out)
    return EXIT_OK


def cmd_gr_fixed(args) -> int:
    from .grcombi import StratumLabel, fixed_stratum, iwahori_orbit_dimension, pariversity, relative_pariversity

    d = _datum_arg(args)
    a = automorphism_from_json(d, _load_json(args.auto))
    lam = tuple(int(x) for x in args.lam.replace(",", " ").split())
    label = StratumLabel(d, lam)
    fs = fixed_stratum(label, a, args.delta)
    out = {
        "lambda": list(lam),
        "dim_G": iwahori_orbit_dimension(label, args.delta),
        "pariversity": pariversity(label),
        "fixed": fs.to_json() if fs else {"empty": True},
    }
    if fs:
        out["relative_pariversity"] = relative_pariversity(label, a)
    _emit(_versioned(out), args.out)
    return EXIT_OK


def cmd_param_toral(args) -> int:
    from .dualhom import (
        canonical_embedding_cocycle,
        elliptic_inner_setup,
        inner_case_dual_hom,
        toral_parameter,
    )

    data = _load_json(args.theta)
    if "g_datum" not in data:
        raise ValueError("theta.json needs 'g_datum' (the dual group datum)")
    g = datum_from_json(data["g_datum"])
    theta = _theta(data)
    w = parse_word(args.w)
    if args.inner_ell:
        s = elliptic_inner_setup(g, args.inner_ell)
        dh = inner_case_dual_hom(s, w)
    else:
        dh = canonical_embedding_cocycle(g, w)
    p = toral_parameter(theta, dh)
    _emit({**p.to_json(), "dual_hom": dh.to_json()}, args.out)
    return EXIT_OK


def cmd_suite(args) -> int:
    cfg = SuiteConfig(
        seed=args.seed,
        threads=args.threads,
        folding_table=corrupted_folding_table() if args.corrupt_folding_table else None,
        br_pairs=args.br_pairs,
    )
    report = run_suite(cfg, check_determinism=not args.no_determinism)
    _emit(report, args.out)
    for r in report["results"]:
        log.info("%2d %-28s %s", r["id"], r["name"], "PASS" if r["passed"] else "FAIL")
    return EXIT_OK if report["passed"] else EXIT_INTERNAL


# ---------------------------------------------------------------------------
# parser


def _add_datum(p):
    p.add_argument("--datum", help="root datum JSON (full or {type, rank, isogeny})")
    p.add_argument("--type")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--isogeny", default="sc")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modsat", description="Mod-ell Satake and Brauer computations")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="write JSON here instead of stdout")
        return p

    command("bad-primes", cmd_bad_primes, help="the excluded-primes table")
    p = command("group", cmd_group, help="describe a root datum")
    _add_datum(p)
    p = command("auto", cmd_auto, help="validate an automorphism and its fixed datum")
    _add_datum(p)
    p.add_argument("--auto", required=True)
    p = command("fold", cmd_fold, help="fixed datum of a diagram automorphism")
    _add_datum(p)
    p.add_argument("--perm", required=True, help="node permutation, 0-based, e.g. '2,1,0'")
    p.add_argument("--ell", type=int, required=True)

    brauer = sub.add_parser("brauer", help="Brauer maps and mod-ell Satake matrices").add_subparsers(dest="sub", required=True)
    p = brauer.add_parser("matrix", help="matrix of br in Satake bases")
    p.set_defaults(func=cmd_brauer_matrix)
    p.add_argument("--setup", required=True)
    p.add_argument("--weight-bound", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")

    p = command("tate", cmd_tate, help="Tate cohomology of a Sigma-module or tensor power")
    p.add_argument("--module")
    p.add_argument("--j", type=int, nargs="+", default=[0, 1])
    p.add_argument("--tensor-dim", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--coeff", choices=("Fl", "Zl"), default="Zl")
    p.add_argument("--degrees", help="comma-separated degrees of the basis of V")

    dl = sub.add_parser("dl", help="deep-level Deligne-Lusztig Tate multisets").add_subparsers(dest="sub", required=True)
    p = dl.add_parser("tate", help="Tate multiset of deep-level Deligne-Lusztig induction")
    p.set_defaults(func=cmd_dl_tate)
    p.add_argument("--wx", required=True, help="generators of W_x(T), e.g. 's1 s2'")
    p.add_argument("--twist", default="", help="the Weyl element w, e.g. 's1 s2'")
    p.add_argument("--theta", required=True)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--out")

    gr = sub.add_parser("gr", help="affine Grassmannian strata and fixed points").add_subparsers(dest="sub", required=True)
    p = gr.add_parser("fixed", help="sigma-fixed points of an Iwahori stratum")
    p.set_defaults(func=cmd_gr_fixed)
    _add_datum(p)
    p.add_argument("--auto", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--delta", choices=("negative", "positive"), default="negative")
    p.add_argument("--out")

    param = sub.add_parser("param", help="toral L-parameters through a dual homomorphism").add_subparsers(dest="sub", required=True)
    p = param.add_parser("toral", help="unramified toral L-parameter")
    p.set_defaults(func=cmd_param_toral)
    p.add_argument("--theta", required=True)
    p.add_argument("--w", default="")
    p.add_argument("--inner-ell", type=int)
    p.add_argument("--out")

    p = command("suite", cmd_suite, help="run the property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--br-pairs", type=int, default=1000)
    p.add_argument("--corrupt-folding-table", action="store_true", help="negative control")
    p.add_argument("--no-determinism", action="store_true", help="skip the rerun for property 13")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except HypothesisViolation as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except InternalInvariantError as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
