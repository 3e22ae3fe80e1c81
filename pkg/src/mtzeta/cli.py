"""Command-line surface with stable JSON output.

Subcommands: reduce, verify, eval, convert, bern-expand, partitions,
characters.  Exit codes: 0 success, 1 malformed flags (usage on stderr),
2 domain errors (divergence, Re(z) < 1, non-primitive character, out of
budget), 3 verification failure (residual above combined bound + tol).

Output is deterministic: expressions serialize in canonical term order and
JSON keys are sorted, so identical requests give byte-identical output.
Schema version: "mtzeta/1".
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Any

from mpmath import mp, mpc

from . import __version__
from .bernprod import carlitz_product, expand_by_partitions, expand_by_subsets, naive_product
from .dirichlet import character_identities, enumerate_characters, gauss_sum, mt_l_value
from .mzvconvert import mt_to_mzv
from .numerics import EvalConfig, mt_direct, mt_via_mzv
from .partitions import PartitionKind, enumerate_partitions
from .reduction import Identity, cyclic_sum_identity
from .symexpr import atom_from_json, atom_to_json, expr_from_json, expr_to_json

SCHEMA = "mtzeta/1"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1, not argparse's 2
        print(f"error: {message}", file=sys.stderr)
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise SystemExit(_usage_error(f"bad integer vector {text!r}")) from exc


def _usage_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 1


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:\.\d+)?)?\s*(?:(?P<sign>[+-])\s*(?P<im>\d+(?:\.\d+)?)?\s*i)?\s*$"
)


def parse_complex(text: str) -> complex:
    """Accepts 'a', 'a+bi', 'a-bi', 'bi' with decimal components."""
    t = text.strip().replace(" ", "")
    m = re.match(r"^([+-]?\d+(?:\.\d+)?)([+-]\d*(?:\.\d+)?)i$", t)
    if m:
        re_part = float(m.group(1))
        imtxt = m.group(2)
        if imtxt in ("+", "-"):
            imtxt += "1"
        return complex(re_part, float(imtxt))
    m = re.match(r"^([+-]?\d*(?:\.\d+)?)i$", t)
    if m:
        imtxt = m.group(1) or "1"
        if imtxt in ("+", "-"):
            imtxt += "1"
        return complex(0.0, float(imtxt))
    return complex(float(t), 0.0)


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)


def _emit(payload: dict, fmt: str, text_lines: list[str] | None = None) -> None:
    if fmt == "text" and text_lines is not None:
        print("\n".join(text_lines))
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))


def identity_to_json(ident: Identity) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "identity",
        "s": list(ident.s),
        "alpha": _frac_str(ident.alpha),
        "depth": ident.depth,
        "lhs": [
            {"coeff": _frac_str(c), "atom": atom_to_json(a)} for c, a in ident.lhs
        ],
        "rhs": expr_to_json(ident.rhs),
    }


def identity_from_json(data: dict) -> Identity:
    lhs = tuple(
        (Fraction(t["coeff"]), atom_from_json(t["atom"])) for t in data["lhs"]
    )
    return Identity(
        lhs,
        expr_from_json(data["rhs"]),
        tuple(data["s"]),
        Fraction(data["alpha"]),
        int(data["depth"]),
    )


def _cfg(args: argparse.Namespace) -> EvalConfig:
    kwargs: dict[str, Any] = {}
    if getattr(args, "precision_bits", None):
        kwargs["precision_bits"] = args.precision_bits
    if getattr(args, "tol", None):
        kwargs["target_tol"] = min(args.tol, 1e-10)
    return EvalConfig(**kwargs)


def _resolve_character(spec: str):
    try:
        mod_s, idx_s = spec.split(",")
        mod, idx = int(mod_s), int(idx_s)
    except ValueError:
        raise SystemExit(_usage_error(f"bad --chi {spec!r}, expected MOD,INDEX"))
    chars = enumerate_characters(mod)
    if not 0 <= idx < len(chars):
        raise ValueError(f"character index {idx} out of range for modulus {mod}")
    return chars[idx]


# ---------------------------------------------------------------------------
# subcommand handlers (each returns the process exit code)


def _cmd_partitions(args) -> int:
    s = _parse_ints(args.s)
    kind = PartitionKind.FAT if args.kind == "fat" else PartitionKind.PRE_FAT
    parts = enumerate_partitions(s, kind)
    payload = {
        "schema": SCHEMA,
        "kind": "partitions",
        "s": list(s),
        "partition_kind": kind.value,
        "count": len(parts),
        "partitions": [[list(p) for p in P.parts] for P in parts],
    }
    _emit(payload, args.format, [f"{len(parts)} partitions"] + [
        " | ".join(str(list(p)) for p in P.parts) for P in parts
    ])
    return 0


def _cmd_bern_expand(args) -> int:
    s = _parse_ints(args.s)
    combos = {
        "naive": naive_product(s),
        "by_subsets": expand_by_subsets(s),
        "by_partitions": expand_by_partitions(s),
    }
    if len(s) == 2:
        combos["two_factor"] = carlitz_product(*s)
    oracle = combos["naive"]
    payload = {
        "schema": SCHEMA,
        "kind": "bernoulli-product",
        "s": list(s),
        "expansions": {
            name: {
                "terms": {str(m): _frac_str(c) for m, c in sorted(combo.terms.items())},
                "constant": _frac_str(combo.constant),
            }
            for name, combo in sorted(combos.items())
        },
        "all_equal": all(c == oracle for c in combos.values()),
    }
    _emit(payload, args.format)
    return 0


def _cmd_convert(args) -> int:
    s = _parse_ints(args.s)
    colors = None
    if args.colors:
        colors = [Fraction(c) for c in args.colors.split(",")]
    expr = mt_to_mzv(s, colors)
    payload = {
        "schema": SCHEMA,
        "kind": "mzv-combination",
        "s": list(s),
        "colors": [_frac_str(Fraction(c) % 1) for c in (colors or [0] * len(s))],
        "expr": expr_to_json(expr),
    }
    _emit(payload, args.format, [str(expr)])
    return 0


def _cmd_characters(args) -> int:
    chars = enumerate_characters(args.mod)
    cfg = _cfg(args)
    rows = []
    for chi in chars:
        tau = gauss_sum(chi, cfg)
        rows.append(
            {
                "index": chi.index,
                "conductor": chi.conductor,
                "primitive": chi.primitive,
                "principal": chi.principal,
                "angles": [
                    None if a is None else _frac_str(a) for a in chi.angles
                ],
                "gauss_sum": {
                    "re": mp.nstr(mp.re(mpc(tau.value)), 17),
                    "im": mp.nstr(mp.im(mpc(tau.value)), 17),
                },
            }
        )
    payload = {
        "schema": SCHEMA,
        "kind": "characters",
        "modulus": args.mod,
        "indexing": "little-endian exponents on unit-group generators",
        "characters": rows,
    }
    _emit(
        payload,
        args.format,
        [f"chi_{r['index']}: conductor {r['conductor']}, primitive {r['primitive']}" for r in rows],
    )
    return 0


def _identity_for(args) -> Identity:
    s = _parse_ints(args.s)
    alpha = Fraction(args.alpha) if args.alpha else Fraction(0)
    return cyclic_sum_identity(s, alpha)


def _cmd_reduce(args) -> int:
    if args.chi:
        chi = _resolve_character(args.chi)
        cfg = _cfg(args)
        fam = character_identities(_parse_ints(args.s), chi, cfg)
        payload = {
            "schema": SCHEMA,
            "kind": "weighted-identities",
            "chi": {"modulus": chi.modulus, "index": chi.index},
            "family": [
                {
                    "weight": {
                        "re": mp.nstr(mp.re(mpc(w.value)), 17),
                        "im": mp.nstr(mp.im(mpc(w.value)), 17),
                        "bound": w.bound,
                    },
                    "identity": identity_to_json(ident),
                }
                for w, ident in fam
            ],
        }
        _emit(payload, args.format)
        return 0
    ident = _identity_for(args)
    _emit(
        identity_to_json(ident),
        args.format,
        ["lhs:"]
        + [f"  {c} * {a}" for c, a in ident.lhs]
        + ["rhs:", f"  {ident.rhs}"],
    )
    return 0


def _z_value(args) -> complex:
    if args.z is None:
        raise ValueError("--z is required for a z-dependent target")
    return parse_complex(args.z)


def _cmd_verify(args) -> int:
    cfg = _cfg(args)
    tol = args.tol or 0.0
    z0 = _z_value(args)
    if args.chi:
        chi = _resolve_character(args.chi)
        fam = character_identities(_parse_ints(args.s), chi, cfg)
        total = mpc(0)
        bound = 0.0
        for w, ident in fam:
            r = ident.residual(z0, cfg)
            total += mpc(w.value) * mpc(r.value)
            wm, rm = float(abs(mpc(w.value))), float(abs(mpc(r.value)))
            bound += wm * r.bound + rm * w.bound + w.bound * r.bound
        residual = float(abs(total))
    else:
        ident = _identity_for(args)
        r = ident.residual(z0, cfg)
        residual = float(abs(mpc(r.value)))
        bound = r.bound
    ok = residual <= bound + tol
    payload = {
        "schema": SCHEMA,
        "kind": "verification",
        "s": list(_parse_ints(args.s)),
        "z": str(args.z),
        "residual": residual,
        "bound": bound,
        "tol": tol,
        "pass": ok,
    }
    _emit(payload, args.format, [f"residual {residual:.3e} vs bound {bound:.3e} + tol {tol:.1e}: {'PASS' if ok else 'FAIL'}"])
    return 0 if ok else 3


def _cmd_eval(args) -> int:
    cfg = _cfg(args)
    s = _parse_ints(args.s)
    if args.chi:
        chi = _resolve_character(args.chi)
        ones = enumerate_characters(1)[0]
        if args.z:
            zc = parse_complex(args.z)
            if zc.imag or zc.real != int(zc.real) or zc.real < 1:
                raise ValueError(
                    "character assembly needs a positive integer z"
                )
            exps = s + (int(zc.real),)
        else:
            exps = s
        chis = (ones,) * (len(exps) - 1) + (chi,)
        result = mt_l_value(exps, chis, cfg)
        route = "character-assembly"
    else:
        alpha = Fraction(args.alpha) if args.alpha else Fraction(0)
        if args.z:
            z0 = parse_complex(args.z)
            if z0.real < 1:
                raise ValueError(f"Re(z) >= 1 required, got {z0}")
            zv: Any = int(z0.real) if z0 == int(z0.real) else z0
            exps = s + (zv,)
        else:
            exps = s
        colors = (Fraction(0),) * (len(exps) - 1) + (alpha,)
        integral = all(isinstance(e, int) for e in exps)
        if integral and len(exps) >= 2:
            result = mt_via_mzv(exps, colors, cfg)
            route = "conversion"
        else:
            result = mt_direct(exps, colors, cfg, N=args.N)
            route = "direct"
    payload = {
        "schema": SCHEMA,
        "kind": "evaluation",
        "s": list(s),
        "route": route,
        "value_re": mp.nstr(mp.re(mpc(result.value)), 25),
        "value_im": mp.nstr(mp.im(mpc(result.value)), 25),
        "bound": result.bound,
    }
    _emit(payload, args.format, [f"{payload['value_re']} + {payload['value_im']} i  (bound {result.bound:.3e}, {route})"])
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="mtzeta", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, z=False, alpha=False, chi=False, numeric=False):
        sp.add_argument("--s", required=True, help="comma-separated integers")
        if alpha:
            sp.add_argument("--alpha", help='rational color "p/q"')
        if chi:
            sp.add_argument("--chi", help='character "MOD,INDEX"')
        if z:
            sp.add_argument("--z", help='complex value "a+bi"')
        if numeric:
            sp.add_argument("--precision-bits", type=int, dest="precision_bits")
            sp.add_argument("--N", type=int, dest="N")
            sp.add_argument("--tol", type=float)
        sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = sub.add_parser("partitions", help="enumerate fat/pre-fat partitions")
    sp.add_argument("--kind", choices=("fat", "pre-fat"), default="fat")
    common(sp)
    sp.set_defaults(fn=_cmd_partitions)

    sp = sub.add_parser("bern-expand", help="Bernoulli-product expansions + oracle verdict")
    common(sp)
    sp.set_defaults(fn=_cmd_bern_expand)

    sp = sub.add_parser("convert", help="rewrite an MT value as colored MZVs")
    sp.add_argument("--colors", help="comma-separated rationals, one per slot")
    common(sp)
    sp.set_defaults(fn=_cmd_convert)

    sp = sub.add_parser("characters", help="list Dirichlet characters mod f")
    sp.add_argument("--mod", type=int, required=True)
    sp.add_argument("--precision-bits", type=int, dest="precision_bits")
    sp.add_argument("--tol", type=float)
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.set_defaults(fn=_cmd_characters)

    sp = sub.add_parser("reduce", help="construct the cyclic-sum identity")
    common(sp, alpha=True, chi=True, numeric=True)
    sp.set_defaults(fn=_cmd_reduce)

    sp = sub.add_parser("verify", help="evaluate an identity and check the residual")
    common(sp, z=True, alpha=True, chi=True, numeric=True)
    sp.set_defaults(fn=_cmd_verify)

    sp = sub.add_parser("eval", help="evaluate an MT value or L-value")
    common(sp, z=True, alpha=True, chi=True, numeric=True)
    sp.set_defaults(fn=_cmd_eval)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "alpha", None) and getattr(args, "chi", None):
        return _usage_error("--alpha and --chi are mutually exclusive")
    try:
        return args.fn(args)
    except (ValueError, TypeError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
