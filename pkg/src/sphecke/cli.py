"""Command-line front end.

Subcommands: basic, kostka, satake, convolve, kernel, verify, zeta,
arch, decomp, cache.  Output is canonical JSON (sorted keys, canonical
term order), so identical inputs produce identical bytes.  Exit codes:
0 success/PASS, 1 verification mismatch, 2 invalid input or usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import arch as _arch
from .errors import InvalidInput
from .kostka import KostkaCache, lusztig_q_analogue
from .laurent import Laurent
from .lseries import (
    SchwartzElement,
    basic_function,
    gamma_kernel,
    verify_fixed_point,
    verify_unitarity,
    zeta_closed_form,
    zeta_over_l,
)
from .characters import ext_power_decomp, sym_power_decomp
from .rootdata import (
    RepSpec,
    RootDatum,
    build_preset,
    datum_from_json,
    datum_to_json,
    validate_rho,
)
from .satake import (
    cell,
    convolve,
    eval_numeric,
    identity_element,
    satake,
    specialize,
)
from .serialize import element_from_obj, element_to_obj

CACHE_ENV = "SPHECKE_CACHE_DIR"


def _parse_vec(text: str):
    return tuple(int(x) for x in text.split(","))


def _load_datum(args) -> RootDatum:
    if getattr(args, "datum", None):
        if getattr(args, "group", None):
            raise InvalidInput("--group and --datum are mutually exclusive")
        with open(args.datum, "r", encoding="utf-8") as fh:
            return datum_from_json(json.load(fh))
    if not getattr(args, "group", None):
        raise InvalidInput("need --group PRESET or --datum FILE")
    return build_preset(args.group)


def _load_rho(rd: RootDatum, args) -> RepSpec:
    text = getattr(args, "rho", None) or "std"
    if text == "std":
        hw = (1,) + (0,) * (rd.rank - 1)
    else:
        hw = _parse_vec(text)
    rho = RepSpec(hw)
    report = validate_rho(rd, rho)
    if not report.passed:
        raise InvalidInput(f"representation invalid: {report}")
    return rho


def _emit(args, obj) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pretty_grades(element) -> dict:
    return {
        str(k): {",".join(map(str, v)): str(c) for v, c in sorted(terms.items(), reverse=True)}
        for k, terms in sorted(element.grades.items())
    }


def _element_payload(element) -> dict:
    return {"element": element_to_obj(element), "pretty": _pretty_grades(element)}


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_basic(args) -> int:
    rd = _load_datum(args)
    rho = _load_rho(rd, args)
    basic = basic_function(rd, rho, args.N)
    element = basic.element
    if args.specialize is not None:
        element = specialize(element, Fraction(args.specialize))
    payload = _element_payload(element)
    payload["datum"] = datum_to_json(rd)
    _emit(args, payload)
    return 0


def _cmd_kostka(args) -> int:
    rd = _load_datum(args)
    lam = _parse_vec(getattr(args, "lam"))
    mu = _parse_vec(args.mu)
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        cache = KostkaCache(os.path.join(cache_dir, "kostka.jsonl"))
        poly = cache.lookup(rd, lam, mu)
    else:
        poly = lusztig_q_analogue(rd, lam, mu)
    print(poly)
    if args.json:
        _emit(args, {"lambda": list(lam), "mu": list(mu), "qpoly": poly.to_json()})
    return 0


def _cmd_satake(args) -> int:
    rd = _load_datum(args)
    mu = _parse_vec(args.mu)
    element = satake(cell(rd, mu))
    _emit(args, _element_payload(element))
    return 0


def _cmd_convolve(args) -> int:
    rd = _load_datum(args)
    a = cell(rd, _parse_vec(args.mu))
    b = cell(rd, _parse_vec(args.nu))
    _emit(args, _element_payload(convolve(a, b)))
    return 0


def _cmd_kernel(args) -> int:
    rd = _load_datum(args)
    rho = _load_rho(rd, args)
    kern = gamma_kernel(rd, rho, args.N)
    element = kern.element
    if args.specialize is not None:
        element = specialize(element, Fraction(args.specialize))
    _emit(args, _element_payload(element))
    return 0


def _cmd_decomp(args) -> int:
    rd = _load_datum(args)
    rho = _load_rho(rd, args)
    if (args.sym is None) == (args.ext is None):
        raise InvalidInput("need exactly one of --sym K or --ext I")
    if args.sym is not None:
        parts = sym_power_decomp(rd, rho, args.sym)
    else:
        parts = ext_power_decomp(rd, rho, args.ext)
    _emit(args, [{"lambda": list(lam), "mult": m} for lam, m in parts])
    return 0


def _verify_gj_standard(rd: RootDatum, rho: RepSpec, N: int) -> dict:
    """Indicator identity: the half-shift specialization of the basic
    element is the characteristic function of the nonnegative cells."""
    if not rd.cartan.startswith("GL"):
        raise InvalidInput("the indicator identity is a GL preset statement")
    n = rd.rank
    if rho.highest_weight != (1,) + (0,) * (n - 1):
        raise InvalidInput("the indicator identity needs the standard rho")
    basic = basic_function(rd, rho, N)
    sp = specialize(basic.element, Fraction(-(n - 1), 2))
    mismatch = None
    for k in range(N + 1):
        seen = dict(sp.grades.get(k, {}))
        for mu, coeff in sorted(seen.items(), reverse=True):
            want = Laurent.one() if min(mu) >= 0 else Laurent.zero()
            if coeff != want:
                mismatch = {"grade": k, "mu": list(mu), "expected": str(want), "got": str(coeff)}
                break
        if mismatch is None:
            # every nonnegative dominant cell of this grade must be present
            from .rootdata import dominant_below

            for lam, _ in sym_power_decomp(rd, rho, k):
                for mu in dominant_below(rd, lam):
                    if min(mu) >= 0 and mu not in seen:
                        mismatch = {
                            "grade": k,
                            "mu": list(mu),
                            "expected": "1",
                            "got": "absent",
                        }
                        break
                if mismatch:
                    break
        if mismatch:
            break
    return {
        "name": "gj-standard",
        "status": "PASS" if mismatch is None else "FAIL",
        "first_mismatch": mismatch,
    }


def _cmd_verify(args) -> int:
    rd = _load_datum(args)
    rho = _load_rho(rd, args)
    names = {
        "fixed-point": lambda: verify_fixed_point(rd, rho, args.N).to_json(),
        "unitarity": lambda: verify_unitarity(rd, rho, args.N).to_json(),
        "gj-standard": lambda: _verify_gj_standard(rd, rho, args.N),
    }
    if args.what == "all":
        selected = ["fixed-point", "unitarity"] + (
            ["gj-standard"] if rd.cartan.startswith("GL") else []
        )
    else:
        selected = [args.what]
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [(name, pool.submit(names[name])) for name in selected]
            reports = [f.result() for _, f in futures]
    else:
        reports = [names[name]() for name in selected]
    ok = all(r["status"] == "PASS" for r in reports)
    _emit(args, {"reports": reports, "status": "PASS" if ok else "FAIL"})
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_zeta(args) -> int:
    rd = _load_datum(args)
    rho = _load_rho(rd, args)
    if args.h_json:
        with open(args.h_json, "r", encoding="utf-8") as fh:
            h = element_from_obj(rd, json.load(fh))
    else:
        h = identity_element(rd)
    if args.over_l:
        zp = zeta_over_l(rd, rho, h)
        _emit(args, {"x_support": zp.x_support(), "text": str(zp)})
        return 0
    c = tuple(float(x) for x in args.c.split(","))
    basic = basic_function(rd, rho, 0)
    closed = zeta_closed_form(rd, rho, SchwartzElement(basic, h), c, args.q, complex(args.s))
    truncated = None
    rel = None
    if args.N:
        from .lseries import l_series as _ls

        ls = _ls(rd, rho, args.N)
        ev = eval_numeric(ls, c, args.q, complex(args.s), args.N)
        sh = satake(h)
        hval = 0j
        lconst = basic.l
        for g, terms in sh.grades.items():
            shiftv = args.q ** (-(complex(args.s) + lconst / 2) * g)
            for lam, coeff in terms.items():
                from .characters import char_eval, weight_multiplicities

                hval += shiftv * coeff.eval_complex(args.q, complex(args.s)) * char_eval(
                    weight_multiplicities(rd, lam), c
                )
        truncated = ev.value * hval
        rel = abs(truncated - closed) / max(abs(closed), 1e-300)
    _emit(
        args,
        {
            "closed_form": [closed.real, closed.imag],
            "truncated": None if truncated is None else [truncated.real, truncated.imag],
            "rel_diff": rel,
        },
    )
    return 0


def _cmd_arch(args) -> int:
    rd = _load_datum(args)
    rho = _load_rho(rd, args)
    out: dict
    if args.op == "lfactor":
        lam = tuple(float(x) for x in args.lam.split(","))
        params = _arch.arch_params(rd, rho, lam, complex(args.s), Fraction(args.p), args.field)
        val = _arch.lfactor_real(params) if args.field == "real" else _arch.lfactor_cplx(params)
        out = {"value": [val.real, val.imag]}
    elif args.op == "gamma":
        lam = tuple(float(x) for x in args.lam.split(","))
        params = _arch.arch_params(rd, rho, lam, complex(args.s), Fraction(args.p), args.field)
        g = _arch.gamma_factor(params)
        out = {
            "value": [g.value.real, g.value.imag],
            "rel_discrepancy": g.rel_discrepancy,
            "flags": g.flags,
        }
    elif args.op == "stirling":
        out = {"ratio": _arch.stirling_ratio(args.x, args.y)}
    elif args.op == "threshold":
        val = _arch.threshold(rd, rho, Fraction(args.p), args.which, args.field)
        out = {"threshold": str(val)}
    elif args.op == "crho":
        out = {"c_rho": str(_arch.c_rho_constant(rd, rho))}
    elif args.op == "probe":
        rep = _arch.seminorm_probe(
            rd, rho, complex(args.s), Fraction(args.p), args.t,
            radii=tuple(float(r) for r in args.radii.split(",")),
        )
        out = {
            "max_log_value": rep.max_log_value,
            "shell_max": rep.shell_max,
            "decayed": rep.decayed,
            "pole_flag": rep.pole_flag,
            "samples": rep.samples,
        }
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write("shell,max_log_value\n")
                for i, v in enumerate(rep.shell_max):
                    fh.write(f"{i},{v}\n")
    else:
        raise InvalidInput(f"unknown arch op {args.op}")
    _emit(args, out)
    return 0


def _cmd_cache(args) -> int:
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV)
    if not cache_dir:
        raise InvalidInput("need --cache-dir or SPHECKE_CACHE_DIR")
    path = os.path.join(cache_dir, "kostka.jsonl")
    os.makedirs(cache_dir, exist_ok=True)
    cache = KostkaCache(path)
    if args.verb == "stats":
        st = cache.stats()
        _emit(args, {"entries": st.entries, "skipped": st.skipped, "path": path})
    elif args.verb == "clear":
        cache.clear()
        _emit(args, {"cleared": True, "path": path})
    elif args.verb == "export":
        for line in cache.export_lines():
            print(line)
    return 0


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="sphecke", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, rho=True, n=False):
        p.add_argument("--group", help="preset name (gl1..gl4, b2..b4, c2..c4, d3, d4, g2)")
        p.add_argument("--datum", help="JSON root-datum file")
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--jobs", type=int, default=1)
        if rho:
            p.add_argument("--rho", default="std", help="'std' or comma highest weight")
        if n:
            p.add_argument("--N", type=int, default=4, help="grade truncation")

    p = sub.add_parser("basic", help="graded basic element")
    common(p, n=True)
    p.add_argument("--specialize", help="fold X at this rational shift, e.g. -1/2")
    p.set_defaults(fn=_cmd_basic)

    p = sub.add_parser("kostka", help="q-analogue polynomial")
    common(p, rho=False)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--cache-dir")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_kostka)

    p = sub.add_parser("satake", help="transform of one cell indicator")
    common(p, rho=False)
    p.add_argument("--mu", required=True)
    p.set_defaults(fn=_cmd_satake)

    p = sub.add_parser("convolve", help="product of two cell indicators")
    common(p, rho=False)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.set_defaults(fn=_cmd_convolve)

    p = sub.add_parser("kernel", help="Fourier kernel truncation")
    common(p, n=True)
    p.add_argument("--specialize", help="fold X at this rational shift, e.g. 0")
    p.set_defaults(fn=_cmd_kernel)

    p = sub.add_parser("decomp", help="symmetric/exterior power decomposition")
    common(p)
    p.add_argument("--sym", type=int)
    p.add_argument("--ext", type=int)
    p.set_defaults(fn=_cmd_decomp)

    p = sub.add_parser("verify", help="coefficientwise identity checks")
    p.add_argument("what", choices=["fixed-point", "unitarity", "gj-standard", "all"])
    common(p, n=True)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("zeta", help="zeta values and the X-polynomial")
    common(p, n=False)
    p.add_argument("--h-json", help="element JSON for the compact factor")
    p.add_argument("--over-l", action="store_true", help="emit the X-polynomial instead")
    p.add_argument("--c", help="comma floats: the evaluation parameter")
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--s", default="1.0")
    p.add_argument("--N", type=int, default=0, help="also cross-check by truncation")
    p.set_defaults(fn=_cmd_zeta)

    p = sub.add_parser("arch", help="archimedean numerics")
    p.add_argument("op", choices=["lfactor", "gamma", "stirling", "threshold", "crho", "probe"])
    common(p)
    p.add_argument("--lam", default="0", help="comma floats: spectral parameter")
    p.add_argument("--s", default="1.0")
    p.add_argument("--p", default="2")
    p.add_argument("--field", choices=["real", "complex"], default="real")
    p.add_argument("--which", choices=["basic", "kernel"], default="basic")
    p.add_argument("--x", type=float, default=2.0)
    p.add_argument("--y", type=float, default=100.0)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--radii", default="5,15,30,60")
    p.add_argument("--csv", help="write probe shells as CSV here")
    p.set_defaults(fn=_cmd_arch)

    p = sub.add_parser("cache", help="disk cache administration")
    p.add_argument("verb", choices=["stats", "clear", "export"])
    p.add_argument("--cache-dir")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_cache)

    return top


_VALUE_FLAGS = {"--specialize", "--s", "--lam", "--c", "--mu", "--nu", "--lambda"}


def _join_negative_values(argv):
    """Fold '--flag -1/2' into '--flag=-1/2' so argparse keeps the value."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            try:
                val = next(it)
            except StopIteration:
                out.append(tok)
                break
            out.append(f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _join_negative_values(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
