"""Command line interface.

Results go to ``--out`` (or standard output); progress goes to standard
error. Exit codes: 0 success, 1 invariant violation or rejected input
(a JSON report is written), 2 usage error, 3 feasibility or window limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from typing import Sequence

from . import checks, embedding, sampler
from .enumeration import count_colorings, partition_by_slope
from .errors import TooLarge, TricolorError, WindowOverflow, WindowUnstable
from .heights import Coloring, QuasiPeriodicHF, TorusHHF, checkerboard, dumps, from_json, lift, slope, validate
from .lattice import MAX_K, Dims

SCHEMA = "1"
FORMATS = ("json", "jsonl", "csv")


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ parsing


def _slope_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"slope must be comma separated integers, got {text!r}")


def _dims_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--d", type=int, required=required, help="dimension")
    p.add_argument("--n", type=int, required=required, help="torus side length")


def _common(p: argparse.ArgumentParser, formats: Sequence[str] = ("json",)) -> None:
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tricolor", description="Proper 3-colorings of discrete tori and their height functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count colorings and split them by slope")
    _dims_flags(p)
    p.add_argument("--method", choices=("transfer", "dfs"), default="transfer")
    _common(p, ("json", "csv"))

    p = sub.add_parser("classify", help="slope and validity of a function file")
    p.add_argument("--in", dest="inp", required=True)
    _common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=checks.SUITES)
    _dims_flags(p)
    p.add_argument("--m", type=_slope_arg, help="slope class, e.g. 6,0")
    p.add_argument("--samples", type=int, help="use a stratified random corpus of this size")
    p.add_argument("--seed", type=int, default=0)
    _common(p, ("json", "csv"))

    p = sub.add_parser("sample", help="draw colorings and report statistics")
    _dims_flags(p)
    p.add_argument("--method", choices=sampler.METHODS, default="exact")
    p.add_argument("--samples", type=int, default=1000, help="samples per chain")
    p.add_argument("--steps", type=int, default=1, help="single-site updates between recorded samples")
    p.add_argument("--burn-in", type=int, default=0, help="single-site updates discarded before recording")
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    _common(p, ("jsonl", "json", "csv"))

    for name, helptext in (("psi", "flatten a sloped function"), ("psi-inverse", "undo the flattening")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--in", dest="inp", required=True)
        p.add_argument("--m", type=_slope_arg, required=name == "psi-inverse")
        p.add_argument("--window-k", type=int, default=2)
        _common(p)

    p = sub.add_parser("stats", help="statistics of a sample stream")
    p.add_argument("--in", dest="inp", required=True, help="JSON-lines file written by `sample`")
    _common(p, ("jsonl", "json", "csv"))
    return ap


# ------------------------------------------------------------------ output


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _read_function(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise UsageError(f"cannot read function file {path}: {err}")


def _dims(args) -> Dims:
    if args.d < 1 or args.n < 4 or args.n % 2:
        raise UsageError("need --d >= 1 and an even --n >= 4")
    return Dims(args.d, args.n)


def _check_slope(m, dims: Dims | None) -> None:
    if m is not None and dims is not None and len(m) != dims.d:
        raise UsageError(f"--m has {len(m)} entries, expected {dims.d}")


# ------------------------------------------------------------- subcommands


def cmd_count(args) -> int:
    dims = _dims(args)
    total = count_colorings(dims, args.method)
    part = partition_by_slope(dims)
    if part.total != total:
        report = {"schema": SCHEMA, "error": "count mismatch", "total": str(total), "partition_total": str(part.total)}
        _emit(_json(report), args.out)
        return 1
    if args.format == "csv":
        rows = [[" ".join(str(c) for c in m), str(c)] for m, c in sorted(part.counts.items())]
        _emit(_csv(["m", "count"], rows), args.out)
    else:
        obj = {"schema": SCHEMA, "total": str(total), **part.to_json()}
        _emit(_json(obj), args.out)
    return 0


def cmd_classify(args) -> int:
    x = _read_function(args.inp)
    problems = validate(x)
    obj = {"schema": SCHEMA, "kind": to_kind(x), "d": x.dims.d, "n": x.dims.n, "valid": not problems, "problems": problems[:20]}
    if not problems:
        obj["slope"] = list(slope(x))
    _emit(_json(obj), args.out)
    return 0 if not problems else 1


def to_kind(x) -> str:
    return {Coloring: "coloring", TorusHHF: "hhf", QuasiPeriodicHF: "qp"}[type(x)]


def cmd_verify(args) -> int:
    dims = _dims(args)
    _check_slope(args.m, dims)
    if args.suite in ("embedding", "steep") and args.m is None:
        raise UsageError(f"verify {args.suite} needs --m")
    rep = checks.run_suite(args.suite, dims, args.m, args.samples, args.seed, checks.stderr_progress)
    if args.format == "csv":
        _emit(_csv(["suite", "ok", "checked", "violations"], [[rep.suite, rep.ok, rep.checked, len(rep.violations)]]), args.out)
    else:
        _emit(_json(rep.to_json()), args.out)
    return 0 if rep.ok else 1


def cmd_sample(args) -> int:
    dims = _dims(args)
    if args.samples < 1 or args.chains < 1 or args.burn_in < 0:
        raise UsageError("need --samples >= 1, --chains >= 1 and --burn-in >= 0")
    cfg = sampler.SampleConfig(dims, args.method, args.steps, args.burn_in, args.seed, args.chains)
    if args.method == "exact":
        draws = [(0, f) for f in sampler.exact_sample(cfg, args.samples * args.chains)]
    else:
        draws = list(sampler.glauber(cfg, checkerboard(dims), args.samples))
    colorings = [f for _, f in draws]
    agg = _aggregates(colorings, dims, with_boundaries=False)
    params = {"d": dims.d, "n": dims.n, "method": args.method, "samples": args.samples, "chains": args.chains,
              "steps": args.steps, "burn_in": args.burn_in, "seed": args.seed}
    if args.format == "csv":
        rows = [[i, c, " ".join(map(str, lift(f).slope)), " ".join(map(str, f.values.flatten(order="F")))] for i, (c, f) in enumerate(draws)]
        _emit(_csv(["index", "chain", "slope", "values"], rows), args.out)
    elif args.format == "json":
        obj = {"schema": SCHEMA, "params": params, "aggregates": agg,
               "samples": [{"chain": c, "values": [int(v) for v in f.values.flatten(order="F")]} for c, f in draws]}
        _emit(_json(obj), args.out)
    else:
        lines = [sampler.aggregate_record("params", params)]
        lines += [sampler.sample_record(i, c, f) for i, (c, f) in enumerate(draws)]
        lines += [sampler.aggregate_record(k, v) for k, v in agg.items()]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _aggregates(colorings: list[Coloring], dims: Dims, with_boundaries: bool) -> dict:
    import numpy as np

    out: dict = {}
    if not colorings:
        return out
    arr = np.stack([f.values for f in colorings])
    rho, count = sampler.mean_min_rho(colorings)
    out["rho"] = {"count": count, "mean_min_rho": [str(r) for r in rho]}
    out["slope_event"] = {"freq": str(sampler.slope_event_freq(arr, dims))}
    if dims.d >= 2 and dims.n >= 6:
        out["a_x"] = sampler.a_x_freq_all(arr, dims).to_json()
    if with_boundaries:
        hist: Counter = Counter()
        for f in colorings:
            h = lift(f)
            if not any(h.slope):
                hist.update(sampler.boundary_size_stats(h.torus()))
        out["boundary_sizes"] = {str(k): v for k, v in sorted(hist.items())}
    return out


def _read_samples(path: str) -> tuple[Dims, list[Coloring]]:
    out = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if rec.get("kind") == "sample":
                    out.append(from_json(rec["function"]))
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise UsageError(f"cannot read sample stream {path}: {err}")
    if not out:
        raise UsageError(f"no sample records in {path}")
    dims = out[0].dims
    if any(f.dims != dims or not isinstance(f, Coloring) for f in out):
        raise UsageError("sample stream mixes dimensions or kinds")
    return dims, out


def cmd_stats(args) -> int:
    dims, colorings = _read_samples(args.inp)
    agg = _aggregates(colorings, dims, with_boundaries=True)
    if args.format == "csv":
        rows = []
        for name, block in agg.items():
            for k, v in block.items():
                rows.append([name, k, json.dumps(v)])
        _emit(_csv(["statistic", "key", "value"], rows), args.out)
    elif args.format == "json":
        _emit(_json({"schema": SCHEMA, "d": dims.d, "n": dims.n, **agg}), args.out)
    else:
        _emit("\n".join(sampler.aggregate_record(k, v) for k, v in agg.items()) + "\n", args.out)
    return 0


def _window_k(args) -> int:
    if not 1 <= args.window_k <= MAX_K:
        raise UsageError(f"--window-k must lie in 1..{MAX_K}")
    return args.window_k


def cmd_psi(args) -> int:
    k = _window_k(args)
    h = _read_function(args.inp)
    if isinstance(h, Coloring):
        h = lift(h)
    if not isinstance(h, QuasiPeriodicHF):
        raise UsageError("psi needs a qp function or a coloring")
    _check_slope(args.m, h.dims)
    if args.m is not None and tuple(args.m) != h.slope:
        raise UsageError(f"--m {args.m} does not match the slope {h.slope} of the input")
    _emit(dumps(embedding.psi(h, args.m, window_k=k)), args.out)
    return 0


def cmd_psi_inverse(args) -> int:
    k = _window_k(args)
    t = _read_function(args.inp)
    if not isinstance(t, (QuasiPeriodicHF, TorusHHF)):
        raise UsageError("psi-inverse needs a periodic height function")
    _check_slope(args.m, t.dims)
    _emit(dumps(embedding.psi_inverse(t, args.m, window_k=k)), args.out)
    return 0


COMMANDS = {
    "count": cmd_count,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "sample": cmd_sample,
    "psi": cmd_psi,
    "psi-inverse": cmd_psi_inverse,
    "stats": cmd_stats,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as err:
        print(f"tricolor: error: {err}", file=sys.stderr)
        return 2
    except (TooLarge, WindowUnstable, WindowOverflow) as err:
        print(f"tricolor: {type(err).__name__}: {err}", file=sys.stderr)
        return 3
    except (TricolorError, ValueError) as err:
        report = {"schema": SCHEMA, "command": args.command, "error": type(err).__name__, "message": str(err)}
        _emit(_json(report), getattr(args, "out", None))
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
