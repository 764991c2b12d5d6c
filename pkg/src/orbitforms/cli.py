"""Command-line interface: spectrum computation, verification suites and the
characteristic-vector table dump.

Exact parameters are accepted as "p/q" strings (never floats).  Reports are
deterministic for a fixed (config, seed); cached runs return byte-identical
output (ORBITFORMS_CACHE or --cache-dir).

Exit codes: 0 success, 2 invalid configuration, 3 failed checks or internal
inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .errors import DomainError, EngineError, FormulaMismatch, InconsistencyError
from .models import (build_bc1, build_bc1_qes, build_bcn, build_g2,
                     build_sutherland, char_vector_table)
from .report import (SCHEMA, RunConfig, cache_lookup, cache_store,
                     parse_config_file)
from .spectral import qes_spectrum, spectrum
from .suites import SUITES, run_suite

SUITE_NAMES = tuple(sorted(SUITES)) + ("all",)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbit-forms",
        description="Exact engine for trigonometric models in orbit-space "
                    "coordinates: spectra, flags, hidden algebras, integrals "
                    "and numerical cross-checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument("--cache-dir", dest="cache_dir")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--dps", type=int, default=None)

    sp = sub.add_parser("spectrum", help="exact spectrum on the level-n flag")
    common(sp)
    sp.add_argument("--model", required=False,
                    choices=("bc1", "bc1_qes", "sutherland", "bcn", "g2"))
    sp.add_argument("--N", type=int, default=None)
    for key in ("nu", "nu2", "nu3", "mu", "b"):
        sp.add_argument(f"--{key}", default=None, help="exact rational p/q")
    sp.add_argument("--n", type=int, default=None, help="flag level")
    sp.add_argument("--f", default=None, help="characteristic vector, e.g. 1,2")
    sp.add_argument("--no-numeric-check", action="store_true")

    vp = sub.add_parser("verify", help="run a verification suite")
    common(vp)
    vp.add_argument("--suite", required=True, choices=SUITE_NAMES)
    vp.add_argument("--model", default=None)
    vp.add_argument("--n", type=int, default=None)
    vp.add_argument("--tuples", type=int, default=None)
    vp.add_argument("--sample-points", dest="sample_points", type=int, default=None)
    vp.add_argument("--include-timings", action="store_true")

    tp = sub.add_parser("table", help="characteristic-vector table dump")
    common(tp)
    return parser


def _collect_config(args: argparse.Namespace, command: str) -> RunConfig:
    items: dict[str, object] = {}
    if getattr(args, "config", None):
        items.update(parse_config_file(args.config))
    for key in ("model", "N", "nu", "nu2", "nu3", "mu", "b", "n", "f",
                "seed", "dps", "format", "out", "cache_dir", "suite",
                "tuples", "sample_points"):
        value = getattr(args, key, None)
        if value is not None:
            items[key] = value
    if getattr(args, "no_numeric_check", False):
        items["numeric_check"] = False
    if getattr(args, "include_timings", False):
        items["include_timings"] = True
    items["command"] = command
    return RunConfig.from_items(items)


def _emit(config: RunConfig, payload: bytes) -> None:
    out = config.get("out")
    if out:
        Path(str(out)).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode())
        if not payload.endswith(b"\n"):
            sys.stdout.write("\n")


def _spectrum_payload(config: RunConfig) -> bytes:
    family = config.get("model")
    if not family:
        raise DomainError("spectrum needs --model")
    n = config.get("n")
    if n is None:
        raise DomainError("spectrum needs --n (flag level)")
    numeric = bool(config.get("numeric_check", True))
    if family == "bc1":
        bundle = build_bc1(config.fraction("nu2", 0), config.fraction("nu3", 0))
    elif family == "bc1_qes":
        bundle = build_bc1_qes(config.fraction("nu2", 0), config.fraction("nu3", 0),
                               config.fraction("b", 0), int(n))
    elif family == "sutherland":
        if config.get("N") is None:
            raise DomainError("sutherland needs --N")
        bundle = build_sutherland(int(config.get("N")), config.fraction("nu", 0))
    elif family == "bcn":
        if config.get("N") is None:
            raise DomainError("bcn needs --N")
        bundle = build_bcn(int(config.get("N")), config.fraction("nu", 0),
                           config.fraction("nu2", 0), config.fraction("nu3", 0))
    elif family == "g2":
        bundle = build_g2(config.fraction("nu", 0), config.fraction("mu", 0))
    else:
        raise DomainError(f"unknown model {family!r}")

    vector = None
    if config.get("f"):
        vector = tuple(int(v) for v in str(config.get("f")).split(","))

    if family == "bc1_qes":
        record = qes_spectrum(bundle)
        entries = [{
            "eigenvalue_numeric": str(val),
            "quantum_index": None,
            "multiplicity": 1,
        } for val in record.eigenvalues]
        body = {
            "schema": SCHEMA,
            "command": "spectrum",
            "config": config.canonical(),
            "model": family,
            "flag": {"d": 1, "f": [1], "n": record.n},
            "exact_trace": str(record.matrix.trace()),
            "max_imag": str(record.max_imag),
            "entries": entries,
        }
        return json.dumps(body, sort_keys=True, indent=1).encode()

    record = spectrum(bundle, int(n), vector=vector, numeric_check=numeric)
    entries = []
    for e in record.entries:
        entries.append({
            "eigenvalue": str(e.eigenvalue),
            "quantum_indices": [list(p) for p in e.quantum_indices],
            "multiplicity": e.multiplicity,
            "kernel_dim": e.kernel_dim,
            "eigenpolynomials": [
                {"".join(f"{p}," for p in exps)[:-1] or "0": str(c)
                 for exps, c in poly.terms.items()}
                for poly in e.eigenpolynomials
            ],
        })
    body = {
        "schema": SCHEMA,
        "command": "spectrum",
        "config": config.canonical(),
        "model": record.model,
        "flag": {"d": record.d, "f": list(record.f), "n": record.n},
        "dim": record.dim,
        "numeric_checked": record.numeric_checked,
        "defective": [str(v) for v in record.defective],
        "entries": entries,
    }
    if config.get("format") == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["eigenvalue", "multiplicity", "quantum_indices"])
        for e in record.entries:
            writer.writerow([str(e.eigenvalue), e.multiplicity,
                             ";".join(str(tuple(p)) for p in e.quantum_indices)])
        return buf.getvalue().encode()
    return json.dumps(body, sort_keys=True, indent=1).encode()


def _table_payload(config: RunConfig) -> bytes:
    table = char_vector_table()
    if config.get("format") == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["model", "column", "vector"])
        for (model, column), vec in sorted(table.items()):
            writer.writerow([model, column,
                             "" if vec is None else str(vec)])
        return buf.getvalue().encode()
    body = {
        "schema": SCHEMA,
        "command": "table",
        "rows": {f"{model}/{column}": (list(vec) if isinstance(vec, tuple) else vec)
                 for (model, column), vec in sorted(table.items())},
    }
    return json.dumps(body, sort_keys=True, indent=1).encode()


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _collect_config(args, args.command)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        cached = cache_lookup(config)
        if cached is not None:
            _emit(config, cached)
            if args.command == "verify":
                summary = json.loads(cached)["summary"]
                return 0 if summary.get("fail", 0) == 0 else 3
            return 0

        if args.command == "spectrum":
            payload = _spectrum_payload(config)
            cache_store(config, payload)
            _emit(config, payload)
            return 0
        if args.command == "table":
            payload = _table_payload(config)
            cache_store(config, payload)
            _emit(config, payload)
            return 0
        if args.command == "verify":
            report = run_suite(str(config.get("suite")), config)
            payload = report.to_bytes()
            cache_store(config, payload)
            _emit(config, payload)
            summary = report.summary()
            print(f"pass={summary['pass']} reported-offset={summary['reported-offset']} "
                  f"fail={summary['fail']}", file=sys.stderr)
            return 0 if report.ok else 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FormulaMismatch, InconsistencyError) as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 3
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # anything unexpected is an internal inconsistency
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    parser.error("unreachable")
    return 2


if __name__ == "__main__":
    sys.exit(main())
