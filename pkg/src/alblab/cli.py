"""Command-line front end.

Every library operation is reachable from exactly one subcommand (the
table at the bottom is what the coverage test checks).  Output is JSON
with sorted keys and fixed separators, so identical inputs produce
byte-identical bytes.  Exit codes: 0 success, 1 domain error, 2
numerical non-convergence, 64 unknown subcommand or usage error, 65
malformed JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import acceptance, albanese, hodge, integrals, malcev, words
from .integrals import ConvergenceError, QuadratureConfig
from .paths import DomainError, make_path, parse_complex

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_NUMERIC = 2
EXIT_USAGE = 64
EXIT_BADJSON = 65


class UsageError(Exception):
    pass


class BadJson(Exception):
    pass


@dataclass
class Config:
    abs_tol: float = 1e-10
    level: int = 2
    epsilons: tuple = QuadratureConfig().regularization_epsilons
    workers: int = 4

    def __post_init__(self):
        if self.abs_tol <= 0:
            raise DomainError("abs_tol must be positive")
        if self.level < 1:
            raise DomainError("level must be >= 1")

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(abs_tol=self.abs_tol,
                                regularization_epsilons=self.epsilons)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadJson(f"malformed JSON: {exc}") from exc


def _cjson(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def _parse_number(text: str):
    """Rational when it looks rational (exact paths stay exact), else complex."""
    s = str(text).strip()
    if _RATIONAL.match(s):
        return Fraction(s)
    return parse_complex(s)


def _parse_triple(text: str) -> tuple:
    parts = str(text).split(",")
    if len(parts) != 3:
        raise DomainError(f"expected three comma-separated values, got {text!r}")
    return tuple(_parse_number(p) for p in parts)


def _series_arg(text: str, level: int | None) -> malcev.ExactSeries:
    data = _loads(text)
    if isinstance(data, dict) and "coefficients" in data:
        return malcev.ExactSeries.from_json(data)
    if level is None:
        raise DomainError("bare coefficient maps need --level")
    return malcev.ExactSeries(level, {w: Fraction(c) for w, c in data.items()})


def _truncated_arg(text: str) -> integrals.TruncatedSeries:
    from .series import TruncatedSeries
    return TruncatedSeries.from_json(_loads(text))


def _shuffle_arg(text: str) -> words.ShuffleElement:
    data = _loads(text)
    if isinstance(data, str):
        return words.ShuffleElement.from_word(data)
    return words.ShuffleElement.from_json(data)


# --- handlers --------------------------------------------------------------------

def _h_words_basis(args, cfg):
    basis = words.word_basis(args.r)
    return {"r": args.r, "count": len(basis), "words": basis}


def _h_words_shuffle(args, cfg):
    out = words.shuffle_product(_shuffle_arg(args.a), _shuffle_arg(args.b))
    return {"product": out.to_json()}


def _h_words_deconcat(args, cfg):
    return {"splittings": [[u, v] for u, v in words.deconcat_coproduct(args.word)]}


def _h_words_dbar(args, cfg):
    table = words.SymbolicFormTable.default()
    if args.table:
        raw = _loads(args.table)
        table = words.SymbolicFormTable(
            degree={k: int(v) for k, v in raw.get("degree", {"0": 1, "1": 1}).items()},
            d={k: {s: Fraction(c) for s, c in v.items()} for k, v in raw.get("d", {}).items()},
            wedge={tuple(k.split(",")): {s: Fraction(c) for s, c in v.items()}
                   for k, v in raw.get("wedge", {}).items()})
    word = tuple(args.word.split()) if " " in args.word else args.word
    terms = words.bar_differential(word, table)
    return {"terms": [{"word": list(k), "coefficient": str(c)}
                      for k, c in sorted(terms.items())]}


def _h_ii_path(args, cfg):
    path = make_path(_loads(args.spec))
    return {"segments": len(path.segments), "start": _cjson(path.start),
            "end": _cjson(path.end), "interior": path.is_interior}


def _h_ii_eval(args, cfg):
    path = make_path(_loads(args.path))
    value, err = integrals.iterated_integral(args.word, path, cfg.quadrature(),
                                             with_error=True)
    return {"word": args.word, "value": _cjson(value), "abs_err_est": err}


def _h_ii_signature(args, cfg):
    path = make_path(_loads(args.path))
    sig = integrals.signature(path, args.level if args.level else cfg.level,
                              cfg.quadrature())
    return sig.to_json()


def _h_ii_compose(args, cfg):
    out = integrals.compose_signatures(_truncated_arg(args.a), _truncated_arg(args.b))
    return {"level": out.level,
            "coefficients": {w: _cjson(c) for w, c in sorted(out.coeffs.items())}}


def _h_ii_regularized(args, cfg):
    sig = integrals.regularized_signature(parse_complex(args.x),
                                          args.level if args.level else cfg.level,
                                          cfg.quadrature(), loop_prefix=args.loop_prefix)
    return {"level": sig.level,
            "coefficients": {w: _cjson(c) for w, c in sorted(sig.coeffs.items())}}


def _h_ii_monodromy(args, cfg):
    if not args.loop_word and not args.loop:
        raise UsageError("ii monodromy needs --loop-word or --loop")
    base = integrals.regularized_signature(parse_complex(args.x), 2, cfg.quadrature())
    loop = args.loop_word if args.loop_word else make_path(_loads(args.loop))
    g = integrals.monodromy_matrix(loop, base, 2, cfg.quadrature())
    return {"matrix": g.tolist()}


def _h_malcev_exp(args, cfg):
    return {"series": malcev.exp_trunc(_series_arg(args.series, args.level)).to_json()}


def _h_malcev_log(args, cfg):
    return {"series": malcev.log_trunc(_series_arg(args.series, args.level)).to_json()}


def _h_malcev_classify(args, cfg):
    return {"class": malcev.classify_coproduct(_series_arg(args.series, args.level))}


def _h_malcev_bch(args, cfg):
    a = _series_arg(args.a, args.level)
    b = _series_arg(args.b, args.level)
    return {"series": malcev.bch(a, b).to_json()}


def _h_malcev_hall_dims(args, cfg):
    dims = malcev.hall_dims(args.r)
    return {"dims": dims, "total": sum(dims),
            "representatives": [w for w, _ in malcev.hall_basis(args.r)]}


def _h_malcev_coords(args, cfg):
    level = args.level if args.level else cfg.level
    coords = malcev.malcev_coordinates(args.word, level)
    return {"level": level, "coordinates": {w: str(c) for w, c in sorted(coords.items())}}


def _fmt_number(v):
    if isinstance(v, Fraction):
        return str(v)
    return _cjson(v)


def _h_hodge_filtration(args, cfg):
    alpha, beta, lam = _parse_triple(args.F)
    f = hodge.hodge_filtration_from(alpha, beta, lam)
    return {"coordinates": [_fmt_number(x) for x in f.coordinates()],
            "F0": [[_fmt_number(x) for x in v] for v in f.generators(0)],
            "Fm1": [[_fmt_number(x) for x in v] for v in f.generators(-1)]}


def _h_hodge_transversal(args, cfg):
    n = hodge.NilpotentEndo(*(Fraction(p) for p in args.N.split(",")))
    f = hodge.hodge_filtration_from(*_parse_triple(args.F))
    return {"transversal": hodge.griffiths_transversal(n, f)}


def _h_hodge_orbit(args, cfg):
    n = hodge.NilpotentEndo(*(Fraction(p) for p in args.N.split(",")))
    f = hodge.hodge_filtration_from(*_parse_triple(args.F))
    result = hodge.generates_nilpotent_orbit(n, f)
    defect = result.criterion_defect
    return {"generates": result.generates,
            "criterion_defect": str(defect) if isinstance(defect, Fraction) else _cjson(defect),
            "admissible": result.admissible, "reason": result.reason}


def _h_hodge_rmf(args, cfg):
    mat = [[Fraction(x) for x in row] for row in _loads(args.matrix)]
    wdata = {int(k): [[Fraction(x) for x in v] for v in vs]
             for k, vs in _loads(args.weights).items()}
    w = hodge.WeightFiltrationGeneric.from_dict(wdata, len(mat))
    m = hodge.relative_monodromy_filtration(mat, w)
    if m is None:
        return {"exists": False}
    return {"exists": True, "filtration": m.to_json()}


def _h_hodge_chart(args, cfg):
    cc = hodge.boundary_chart_point(parse_complex(args.q), parse_complex(args.beta),
                                    parse_complex(getattr(args, "lambda")))
    if cc.kind == "orbit":
        n = cc.orbit_generator
        return {"kind": "orbit", "N": [str(n.a), str(n.b), str(n.c)],
                "lambda": _cjson(cc.orbit_lambda)}
    return {"kind": "interior", "coords": [_cjson(x) for x in cc.coords],
            "reduction": list(cc.reduction)}


def _h_hodge_reduce(args, cfg):
    alpha, beta, lam = _parse_triple(args.coords)
    reduced, g = hodge.reduce_mod_integral(alpha, beta, lam)
    return {"reduced": [_fmt_number(x) for x in reduced],
            "matrix": [[int(x) for x in row] for row in g]}


def _h_alb_map(args, cfg):
    p = albanese.albanese_point(parse_complex(args.x), args.loop_prefix, cfg.quadrature())
    return p.to_json()


def _h_alb_map_alt(args, cfg):
    p = albanese.albanese_point_alt(parse_complex(args.x), args.loop_prefix, cfg.quadrature())
    return p.to_json()


def _h_alb_extend(args, cfg):
    q, beta, lam = albanese.extended_albanese(parse_complex(args.x), cfg.quadrature())
    return {"q": _cjson(q), "beta": _cjson(beta), "lambda": _cjson(lam)}


def _h_alb_monodromy(args, cfg):
    return {"matrix": albanese.monodromy_action(args.word, cfg.quadrature()).tolist()}


def _h_alb_mhs_check(args, cfg):
    return albanese.lie_action_is_mhs_morphism()


def _h_selftest(args, cfg):
    results = acceptance.run_acceptance(args.level, cfg.quadrature())
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"level": args.level,
            "passed": all(r.passed for r in results),
            "failures": sum(r.failures for r in results),
            "criteria": [r.to_json() for r in results]}


# --- command table ---------------------------------------------------------------
# operation name -> (subcommand path, handler, [(flag, kwargs), ...])

COMMAND_TABLE = {
    "word_basis": ("words basis", _h_words_basis, [("--r", dict(type=int, required=True))]),
    "shuffle_product": ("words shuffle", _h_words_shuffle,
                        [("--a", dict(required=True)), ("--b", dict(required=True))]),
    "deconcat_coproduct": ("words deconcat", _h_words_deconcat,
                           [("--word", dict(required=True))]),
    "bar_differential": ("words dbar", _h_words_dbar,
                         [("--word", dict(required=True)), ("--table", dict(default=""))]),
    "make_path": ("ii path", _h_ii_path, [("--spec", dict(required=True))]),
    "iterated_integral": ("ii eval", _h_ii_eval,
                          [("--word", dict(required=True)), ("--path", dict(required=True))]),
    "signature": ("ii signature", _h_ii_signature,
                  [("--path", dict(required=True)), ("--level", dict(type=int, default=0))]),
    "compose_signatures": ("ii compose", _h_ii_compose,
                           [("--a", dict(required=True)), ("--b", dict(required=True))]),
    "regularized_signature": ("ii regularized", _h_ii_regularized,
                              [("--x", dict(required=True)),
                               ("--level", dict(type=int, default=0)),
                               ("--loop-prefix", dict(default="", dest="loop_prefix"))]),
    "monodromy_matrix": ("ii monodromy", _h_ii_monodromy,
                         [("--loop", dict(default="")),
                          ("--loop-word", dict(default="", dest="loop_word")),
                          ("--x", dict(default="0.5"))]),
    "exp_trunc": ("malcev exp", _h_malcev_exp,
                  [("--series", dict(required=True)), ("--level", dict(type=int, default=None))]),
    "log_trunc": ("malcev log", _h_malcev_log,
                  [("--series", dict(required=True)), ("--level", dict(type=int, default=None))]),
    "classify_coproduct": ("malcev classify", _h_malcev_classify,
                           [("--series", dict(required=True)),
                            ("--level", dict(type=int, default=None))]),
    "bch": ("malcev bch", _h_malcev_bch,
            [("--level", dict(type=int, default=None)), ("--a", dict(required=True)),
             ("--b", dict(required=True))]),
    "hall_dims": ("malcev hall-dims", _h_malcev_hall_dims,
                  [("--r", dict(type=int, required=True))]),
    "malcev_coordinates": ("malcev coords", _h_malcev_coords,
                           [("--word", dict(required=True)),
                            ("--level", dict(type=int, default=0))]),
    "hodge_filtration_from": ("hodge filtration", _h_hodge_filtration,
                              [("--F", dict(required=True))]),
    "griffiths_transversal": ("hodge transversal", _h_hodge_transversal,
                              [("--N", dict(required=True)), ("--F", dict(required=True))]),
    "generates_nilpotent_orbit": ("hodge orbit", _h_hodge_orbit,
                                  [("--N", dict(required=True)), ("--F", dict(required=True))]),
    "relative_monodromy_filtration": ("hodge rmf", _h_hodge_rmf,
                                      [("--matrix", dict(required=True)),
                                       ("--weights", dict(required=True))]),
    "boundary_chart_point": ("hodge chart", _h_hodge_chart,
                             [("--q", dict(required=True)), ("--beta", dict(required=True)),
                              ("--lambda", dict(required=True))]),
    "reduce_mod_integral": ("hodge reduce", _h_hodge_reduce,
                            [("--coords", dict(required=True))]),
    "albanese_point": ("alb map", _h_alb_map,
                       [("--x", dict(required=True)),
                        ("--loop-prefix", dict(default="", dest="loop_prefix"))]),
    "albanese_point_alt": ("alb map-alt", _h_alb_map_alt,
                           [("--x", dict(required=True)),
                            ("--loop-prefix", dict(default="", dest="loop_prefix"))]),
    "extended_albanese": ("alb extend", _h_alb_extend, [("--x", dict(required=True))]),
    "monodromy_action": ("alb monodromy", _h_alb_monodromy,
                         [("--word", dict(required=True))]),
    "lie_action_is_mhs_morphism": ("alb mhs-check", _h_alb_mhs_check, []),
    "selftest": ("selftest", _h_selftest,
                 [("--level", dict(default="quick", choices=["quick", "full"]))]),
}


def _dispatch_map():
    table = {}
    for op, (subcmd, handler, flags) in COMMAND_TABLE.items():
        table[tuple(subcmd.split())] = (op, handler, flags)
    return table


_DISPATCH = _dispatch_map()

_GLOBAL_FLAGS = [("--abs-tol", dict(type=float, default=None, dest="abs_tol")),
                 ("--workers", dict(type=int, default=4))]


def _build_config(ns) -> Config:
    abs_tol = ns.abs_tol
    if abs_tol is None:
        env = os.environ.get("ALBLAB_TOL")
        abs_tol = float(env) if env else 1e-10
    return Config(abs_tol=abs_tol, workers=ns.workers)


def run_command(argv: list[str]) -> int:
    """Execute one CLI invocation; prints JSON to stdout, returns the exit code."""
    try:
        out, code = _run(argv)
    except UsageError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True, separators=(",", ":")))
        return EXIT_USAGE
    except BadJson as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True, separators=(",", ":")))
        return EXIT_BADJSON
    except (DomainError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True, separators=(",", ":")))
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True, separators=(",", ":")))
        return EXIT_NUMERIC
    if out is not None:
        print(json.dumps(out, sort_keys=True, separators=(",", ":")))
    return code


def _run(argv):
    if not argv:
        raise UsageError("no subcommand; see README for the command table")
    if argv[0] == "--json-in":
        return _run_batch(argv)
    key = None
    rest = None
    if tuple(argv[:2]) in _DISPATCH:
        key, rest = tuple(argv[:2]), argv[2:]
    elif tuple(argv[:1]) in _DISPATCH:
        key, rest = tuple(argv[:1]), argv[1:]
    else:
        raise UsageError(f"unknown subcommand: {' '.join(argv[:2]) or '(none)'}")
    op, handler, flags = _DISPATCH[key]
    parser = _Parser(prog="alblab " + " ".join(key), add_help=False)
    for flag, kwargs in flags + _GLOBAL_FLAGS:
        parser.add_argument(flag, **kwargs)
    ns = parser.parse_args(rest)
    cfg = _build_config(ns)
    return handler(ns, cfg), EXIT_OK


def _run_batch(argv):
    source = argv[1] if len(argv) > 1 and not argv[1].startswith("--") else "-"
    rest = argv[2:] if source != "-" or (len(argv) > 1 and argv[1] == "-") else argv[1:]
    workers = 4
    if "--workers" in rest:
        try:
            workers = max(1, int(rest[rest.index("--workers") + 1]))
        except (IndexError, ValueError) as exc:
            raise UsageError("--workers needs an integer") from exc
    text = sys.stdin.read() if source == "-" else open(source).read()
    data = _loads(text)
    requests = data["requests"] if isinstance(data, dict) else data
    if not isinstance(requests, list):
        raise BadJson("batch input must be a list of argv arrays")

    def one(req):
        try:
            out, code = _run([str(t) for t in req])
            return {"exit_code": code, "output": out}
        except UsageError as exc:
            return {"exit_code": EXIT_USAGE, "error": str(exc)}
        except BadJson as exc:
            return {"exit_code": EXIT_BADJSON, "error": str(exc)}
        except (DomainError, ValueError) as exc:
            return {"exit_code": EXIT_DOMAIN, "error": str(exc)}
        except ConvergenceError as exc:
            return {"exit_code": EXIT_NUMERIC, "error": str(exc)}

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(one, requests))
    return {"results": results}, EXIT_OK


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
