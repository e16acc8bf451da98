"""Command-line front end.

Exit codes: 0 ok, 1 verification failures, 2 usage or input errors,
3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .catalogue import EXAMPLES, build_example
from .errors import ArgumentError, CapacityError, InvalidStateError
from .io import dumps, povm_to_dict, save_povm, save_state, state_from_dict
from .measures import (
    CutSpec,
    MeasureReport,
    cl_sandwich,
    coherent_information,
    discord,
    eof_two_qubit,
    holevo_correlation,
    irreversibility_bound,
    koashi_winter_terms,
    mutual_information,
    party_state,
    regularization_probe_n2,
    s_min,
    symmetric_correlation,
    symmetric_discord,
)
from .povm_opt import MODES, OptConfig
from .qstate import DensityMatrix, PureState
from .tolerances import MAX_AMBIENT_DIM, MAX_PURE_DIM
from .verify import SUITES, SuiteSpec, replay, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

MEASURES = (
    "mutual-information",
    "s-min",
    "coherent-information",
    "holevo",
    "symmetric-correlation",
    "discord",
    "symmetric-discord",
    "eof",
    "koashi-winter",
    "irreversibility",
    "probe-n2",
    "cl-sandwich",
)
TRIPARTITE = ("koashi-winter", "irreversibility")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("QCORR_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ArgumentError(f"QCORR_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise ArgumentError("QCORR_THREADS must be >= 1")
        return n
    return 1


def _parse_parties(text: str) -> dict[str, tuple[int, ...]]:
    """``"A=0,1;C=2,3"`` -> ``{"A": (0, 1), "C": (2, 3)}``."""
    out = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ArgumentError(f"bad party spec {chunk!r}; expected NAME=i,j")
        name, idx = chunk.split("=", 1)
        try:
            out[name.strip()] = tuple(int(i) for i in idx.split(",") if i.strip())
        except ValueError:
            raise ArgumentError(f"bad subsystem indices in {chunk!r}")
    return out


def _load(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ArgumentError(f"cannot read state file {path}: {exc}")
    if not isinstance(raw, dict):
        raise ArgumentError("state file must hold a JSON object")
    return state_from_dict(raw), raw


def _config(args) -> OptConfig:
    d = {}
    if args.config:
        try:
            with open(args.config) as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ArgumentError(f"cannot read config {args.config}: {exc}")
        if not isinstance(d, dict):
            raise ArgumentError("config file must hold a JSON object")
    for key, attr in (("mode", "mode"), ("n_outcomes", "outcomes"), ("restarts", "restarts"),
                      ("seed", "seed"), ("max_iters", "max_iters")):
        v = getattr(args, attr)
        if v is not None:
            d[key] = v
    cfg = OptConfig.from_dict(d)
    return replace(cfg, threads=_threads(args))


def _compute(state, raw, args) -> MeasureReport:
    measure = args.measure
    cfg = _config(args)
    pm = _parse_parties(args.parties) if args.parties else raw.get("parties")
    if pm is not None:
        pm = {k: tuple(v) for k, v in pm.items()}

    if measure in TRIPARTITE:
        if not isinstance(state, PureState):
            raise ArgumentError(f"{measure} needs a tripartite pure state (a 'vector' file)")
        if measure == "irreversibility":
            return irreversibility_bound(state, pm, cfg, measured=args.measured or "C")
        t = koashi_winter_terms(state, pm, cfg)
        diag = {k: t[k] for k in ("eof", "holevo", "s_a")}
        diag.update(t["holevo_report"].diagnostics)
        # the Holevo term is a lower bound, hence so is the residual
        return MeasureReport("koashi-winter-residual", t["residual"], "lower",
                             t["holevo_report"].certificate, diag)

    if isinstance(state, PureState):
        if state.dim > MAX_AMBIENT_DIM:
            raise CapacityError(f"pure state of dimension {state.dim} exceeds {MAX_AMBIENT_DIM} "
                                "for bipartite measures; reduce it first")
        state = state.density()
    cut = CutSpec(pm, args.measured)
    if measure == "mutual-information":
        return mutual_information(state, cut)
    if measure == "s-min":
        return s_min(state, cut)
    if measure == "coherent-information":
        return coherent_information(state, cut)
    if measure == "eof":
        return eof_two_qubit(state, cut)
    if measure == "holevo":
        return holevo_correlation(state, cut, cfg)
    if measure == "discord":
        return discord(state, cut, cfg)
    if measure == "symmetric-correlation":
        return symmetric_correlation(state, cut, cfg)
    if measure == "symmetric-discord":
        return symmetric_discord(state, cut, cfg)
    if measure == "probe-n2":
        return regularization_probe_n2(state, cut, cfg)
    if measure == "cl-sandwich":
        sw = cl_sandwich(state, cut, cfg)
        # C_cert is a certified lower bound on the one-way correlation in between
        return MeasureReport("cl-sandwich", sw.lower, "lower", None,
                             {"lower": sw.lower, "upper": sw.upper, "locked_width": sw.locked_width})
    raise ArgumentError(f"unknown measure {measure!r}")


def cmd_compute(args) -> int:
    state, raw = _load(args.state)
    rep = _compute(state, raw, args)
    cert_file = None
    if args.certificate and rep.certificate is not None:
        cert_file = args.certificate
        if isinstance(rep.certificate, tuple):
            Path(cert_file).write_text(dumps({"povms": [povm_to_dict(p) for p in rep.certificate]}))
        else:
            save_povm(rep.certificate, cert_file)
    print(json.dumps(rep.to_dict(cert_file), indent=2))
    return EXIT_OK


def cmd_examples(args) -> int:
    if args.list or not args.name:
        for name in EXAMPLES:
            print(name)
        return EXIT_OK
    if args.name not in EXAMPLES:
        print(f"unknown example {args.name!r}; catalogue: {', '.join(EXAMPLES)}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    state, pm, expected = build_example(args.name)
    stem = args.name.replace("-", "_")
    extra = {"parties": {k: list(v) for k, v in pm.items()}} if pm else None
    path = save_state(state, out / f"{stem}.json", extra)
    written = [str(path)]
    if args.name == "ghz-epr-psi":
        rho_ac, m = party_state(state, pm, ["A", "C"])
        p2 = save_state(rho_ac, out / f"{stem}_AC.json",
                        {"parties": {k: list(v) for k, v in m.items()}})
        written.append(str(p2))
    sidecar = {"name": args.name, "state_file": path.name, "units": "bits", "expected": expected}
    side = out / f"{stem}.expected.json"
    side.write_text(json.dumps(sidecar, indent=2))
    written.append(str(side))
    for w in written:
        print(w)
    return EXIT_OK


def _dims(text: str):
    out = []
    for item in text.split(","):
        try:
            a, b = item.lower().split("x")
            out.append((int(a), int(b)))
        except ValueError:
            raise ArgumentError(f"bad dims {item!r}; expected e.g. 2x2,2x3")
    return tuple(out)


def cmd_verify(args) -> int:
    kw = {"seed": args.seed, "restarts": args.restarts, "threads": _threads(args)}
    if args.trials is not None:
        kw["trials"] = args.trials
    if args.dims:
        kw["dims"] = _dims(args.dims)
    if args.dump_dir:
        kw["dump_dir"] = args.dump_dir
    spec = SuiteSpec(args.suite, **kw)
    if args.replay:
        try:
            rep = replay(args.replay, args.suite, spec)
        except OSError as exc:
            raise ArgumentError(str(exc))
    else:
        rep = run_suite(spec)
    if args.json:
        print(rep.to_json())
    else:
        print(rep.table())
        if args.suite == "trine-gap" and rep.records:
            v = rep.records[0]["values"]
            print(f"  POVM {v['C_povm']:.12g}  grid {v['grid']:.12g}  margin {v['margin_bits']:.12g}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_info(args) -> int:
    info = {
        "version": __version__,
        "measures": list(MEASURES),
        "examples": list(EXAMPLES),
        "suites": list(SUITES),
        "modes": list(MODES),
        "max_ambient_dim": MAX_AMBIENT_DIM,
        "max_pure_dim": MAX_PURE_DIM,
        "threads": _threads(args),
        "units": "bits",
    }
    if args.state:
        state, raw = _load(args.state)
        info["state"] = {
            "kind": "pure" if isinstance(state, PureState) else "mixed",
            "dims": list(state.dims),
            "labels": None if state.labels is None else list(state.labels),
            "parties": raw.get("parties"),
        }
        if isinstance(state, DensityMatrix):
            lam = np.clip(state.eigvalsh(), 0, None)
            info["state"]["rank"] = int(state.rank())
            info["state"]["purity"] = float(f"{np.sum(lam ** 2):.12g}")
    print(json.dumps(info, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qcorr", description="Correlation measures of bipartite quantum states.")
    p.add_argument("--version", action="version", version=f"qcorr {__version__}")
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap (falls back to QCORR_THREADS, then 1)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="compute one measure of a stored state")
    c.add_argument("--state", required=True)
    c.add_argument("--measure", required=True, choices=MEASURES)
    c.add_argument("--measured", help="name of the measured party")
    c.add_argument("--parties", help='party map, e.g. "A=0,1;C=2"')
    c.add_argument("--config", help="JSON file of optimizer settings")
    c.add_argument("--mode", choices=MODES)
    c.add_argument("--outcomes", type=int)
    c.add_argument("--restarts", type=int)
    c.add_argument("--seed", type=int)
    c.add_argument("--max-iters", type=int)
    c.add_argument("--certificate", help="write the certifying POVM(s) here")
    c.set_defaults(func=cmd_compute)

    e = sub.add_parser("examples", help="write a named example state and its expected values")
    e.add_argument("--name")
    e.add_argument("--out", default=".")
    e.add_argument("--list", action="store_true")
    e.set_defaults(func=cmd_examples)

    v = sub.add_parser("verify", help="run a seeded property suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--dims", help="comma list such as 2x2,2x3")
    v.add_argument("--restarts", type=int, default=8)
    v.add_argument("--dump-dir")
    v.add_argument("--replay", help="re-run the check on one saved state")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("info", help="catalogues, limits and an optional state summary")
    i.add_argument("--state")
    i.set_defaults(func=cmd_info)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads is not None and args.threads < 1:
            raise ArgumentError("--threads must be >= 1")
        return args.func(args)
    except CapacityError as exc:
        print(f"qcorr: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ArgumentError, InvalidStateError) as exc:
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
