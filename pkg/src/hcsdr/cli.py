"""Command-line interface: ``hcsdr fit|simulate|real|show-config|replay``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import platform
import shlex
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, dump_config, load_config
from .core import DataError, HcsdrError, NumericError, SeedSpec, UnitDirection, validate_dataset
from .initializers import SliceSpec, read_vector
from .optimizer import fit_best
from .realdata import evaluate_real, jitter, load_dataset
from .simulation import ExperimentGrid, replications_csv, run_experiment, summary_csv, summary_table

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
QUICK_REPS = 10

log = logging.getLogger("hcsdr")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0, help="master seed (default: %(default)s)")
    p.add_argument("--out", type=Path, default=None, help="output directory for results and manifest")
    p.add_argument("--config", type=Path, default=None, help="TOML file with [anneal]/[simplex] tables")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default: %(default)s)")
    g = p.add_argument_group("optimizer overrides")
    g.add_argument("--anneal-iterations", type=int, default=None, help="annealing iterations (default 2000)")
    g.add_argument("--anneal-temp", type=float, default=None, help="initial temperature (default 0.1)")
    g.add_argument("--anneal-step", type=float, default=None, help="proposal step scale, radians (default 1.0)")
    g.add_argument("--schedule", choices=("logarithmic", "exponential", "linear"), default=None,
                   help="temperature schedule (default logarithmic)")
    g.add_argument("--simplex-max-iter", type=int, default=None, help="simplex iterations (default 2000)")
    g.add_argument("--simplex-step", type=float, default=None, help="initial simplex edge, radians (default 0.1)")
    g.add_argument("--tol-f", type=float, default=None, help="simplex value tolerance (default 1e-8)")
    g.add_argument("--tol-x", type=float, default=None, help="simplex vertex tolerance (default 1e-8)")
    g.add_argument("--slices", type=int, default=None, help="slices for SIR/SAVE/DR (default 10, fewer if n < 100)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hcsdr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="estimate a single-index direction for a CSV dataset")
    p.add_argument("data", type=Path, help="CSV file with a header row")
    p.add_argument("--target", required=True, help="name of the response column")
    p.add_argument("--drop", type=_csv_list, default=[], help="comma-separated columns to ignore")
    p.add_argument("--init", default="sir", help="sir | save | dr | random | file:<path> (default: %(default)s)")
    p.add_argument("--restarts", type=int, default=1, help="independent pipelines; best kept (default: %(default)s)")
    p.add_argument("--jitter", type=float, default=0.0,
                   help="seeded Gaussian jitter in column SDs to break ties (default: off)")
    p.add_argument("--write-direction", type=Path, default=None, help="write the direction vector here")
    _add_common(p)

    p = sub.add_parser("simulate", help="run the Monte-Carlo grid and write mean/sd tables")
    p.add_argument("--models", type=_csv_list, default=["I", "II", "III"], help="default: I,II,III")
    p.add_argument("--inits", type=_csv_list, default=["sir", "save", "dr"], help="default: sir,save,dr")
    p.add_argument("--n", type=_int_list, default=[100, 200, 400], help="sample sizes (default: 100,200,400)")
    p.add_argument("--reps", type=int, default=100, help="replications per cell (default: %(default)s)")
    p.add_argument("--predictors", type=_csv_list, default=["normal"], help="normal,nonnormal (default: normal)")
    p.add_argument("--nonsparse", action="store_true", help="use the dense true directions")
    p.add_argument("--exp-mean", action="store_true", help="read Exp(k) as mean k instead of rate k")
    p.add_argument("--quick", action="store_true", help=f"smoke run with {QUICK_REPS} replications")
    _add_common(p)

    p = sub.add_parser("real", help="train/test predictive evaluation on a real dataset")
    p.add_argument("data", type=Path, help="CSV file with a header row")
    p.add_argument("--target", required=True, help="name of the response column")
    p.add_argument("--drop", type=_csv_list, default=[], help="comma-separated columns to ignore")
    p.add_argument("--train-size", type=int, default=300, help="training sample size (default: %(default)s)")
    p.add_argument("--init", type=_csv_list, default=["sir", "save", "dr"],
                   help="comma-separated initializers (default: sir,save,dr)")
    p.add_argument("--span", type=float, default=0.75, help="smoother span in (0, 1] (default: %(default)s)")
    p.add_argument("--restarts", type=int, default=1, help="independent pipelines; best kept (default: %(default)s)")
    _add_common(p)

    p = sub.add_parser("show-config", help="print the effective optimizer configuration")
    p.add_argument("--config", type=Path, default=None, help="TOML file with [anneal]/[simplex] tables")

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest", type=Path)
    return parser


def _configs(args):
    anneal = {"iterations": args.anneal_iterations, "initial_temp": args.anneal_temp,
              "step_scale": args.anneal_step, "temp_schedule": args.schedule}
    simplex = {"max_iterations": args.simplex_max_iter, "init_step": args.simplex_step,
               "tol_f": args.tol_f, "tol_x": args.tol_x}
    return load_config(args.config, anneal, simplex)


def _check_common(args):
    if not (0 <= args.seed < 2**64):
        raise UsageError("--seed must be a 64-bit unsigned integer")
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    if getattr(args, "restarts", 1) < 1:
        raise UsageError("--restarts must be at least 1")


def _write_manifest(out: Path, argv, args, anneal, simplex, outputs, started: float):
    manifest = {
        "command": args.command,
        "argv": list(argv),
        "master_seed": args.seed,
        "version": __version__,
        "config": {"anneal": asdict(anneal), "simplex": asdict(simplex)},
        "started": time.strftime("%Y-%m-%dT%H:%M:%S%z", time.localtime(started)),
        "wall_seconds": round(time.time() - started, 3),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "outputs": sorted(str(o) for o in outputs),
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _resolve_init(spec: str, p: int, notes: list):
    if spec.startswith("file:"):
        path = spec[5:]
        v = read_vector(path)
        if v.size != p:
            raise DataError(f"{path}: direction has {v.size} coordinates, data has {p} predictors")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > 1e-10:
            notes.append(f"start vector had norm {norm:.6g}; renormalized")
        return UnitDirection.from_vector(v)
    if spec.lower() not in ("sir", "save", "dr", "random"):
        raise UsageError(f"unknown initializer {spec!r}")
    return spec.lower()


def cmd_fit(args, argv, out=None):
    out = out or sys.stdout
    started = time.time()
    anneal, simplex = _configs(args)
    d, names = load_dataset(args.data, args.target, args.drop)
    seed = SeedSpec(args.seed)
    if args.jitter > 0:
        d = validate_dataset(jitter(d.x, args.jitter, seed), d.y)
    notes = []
    init = _resolve_init(args.init, d.p, notes)
    slices = SliceSpec(args.slices) if args.slices else None
    fit = fit_best(d, init, anneal, simplex, seed, slices, restarts=args.restarts)

    print(f"data: {args.data}  n={d.n}  p={d.p}  target={args.target}", file=out)
    print(f"initializer: {fit.initializer}  restarts={args.restarts}  seed={args.seed}", file=out)
    for note in notes:
        print(f"note: {note}", file=out)
    print(f"{'predictor':<24}{'start':>10}{'estimate':>10}", file=out)
    for name, s, e in zip(names, fit.start.coords, fit.direction.coords):
        print(f"{name:<24}{s:>10.4f}{e:>10.4f}", file=out)
    print(f"hellinger: {fit.hellinger:.4f}", file=out)
    print(f"bhattacharyya: {fit.bhattacharyya:.4f} (raw {fit.bhattacharyya_raw:.4f})", file=out)
    print("stages: " + "  ".join(f"{s}={h:.4f}" for s, h in fit.stage_trace), file=out)
    print(f"evaluations: {fit.evaluations}", file=out)

    outputs = []
    vec = "\n".join(format(v, ".17g") for v in fit.direction.coords) + "\n"
    if args.write_direction:
        args.write_direction.write_text(vec)
        outputs.append(args.write_direction)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "direction.txt").write_text(vec)
        outputs.append(args.out / "direction.txt")
        _write_manifest(args.out, argv, args, anneal, simplex, outputs, started)
    return fit


def cmd_simulate(args, argv, out=None):
    out = out or sys.stdout
    started = time.time()
    anneal, simplex = _configs(args)
    reps = QUICK_REPS if args.quick else args.reps
    if reps < 1:
        raise UsageError("--reps must be at least 1")
    bad = [k for k in args.predictors if k not in ("normal", "nonnormal")]
    if bad:
        raise UsageError(f"unknown predictor kind(s) {bad}")
    bad = [i for i in args.inits if i.lower() not in ("sir", "save", "dr", "random")]
    if bad:
        raise UsageError(f"unknown initializer(s) {bad}")
    grid = ExperimentGrid(models=[m.upper() for m in args.models], inits=[i.lower() for i in args.inits],
                          sample_sizes=args.n, replications=reps, master_seed=args.seed,
                          predictors=args.predictors, sparse=not args.nonsparse, exp_mean=args.exp_mean,
                          anneal=anneal, simplex=simplex, n_slices=args.slices)

    def progress(done, total):
        if done % 50 == 0 or done == total:
            log.info("replications: %d/%d", done, total)

    summary = run_experiment(grid, workers=args.threads, progress=progress)
    table = summary_table(summary)
    print(table, file=out)
    print(f"exponential parametrization: {'mean' if args.exp_mean else 'rate'}", file=out)
    text = summary_csv(summary)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        paths = [args.out / "summary.csv", args.out / "replications.csv", args.out / "summary.txt"]
        paths[0].write_text(text)
        paths[1].write_text(replications_csv(summary))
        paths[2].write_text(table + "\n")
        _write_manifest(args.out, argv, args, anneal, simplex, paths, started)
    else:
        print(text, end="", file=out)
    return summary


def cmd_real(args, argv, out=None):
    out = out or sys.stdout
    started = time.time()
    anneal, simplex = _configs(args)
    d, names = load_dataset(args.data, args.target, args.drop)
    inits = [_resolve_init(i, d.p, []) for i in args.init]
    results = evaluate_real(d.x, d.y, args.train_size, inits, args.span, SeedSpec(args.seed),
                            anneal, simplex, args.restarts)
    n_test = d.n - args.train_size
    print(f"data: {args.data}  n={d.n}  train={args.train_size}  test={n_test}  span={args.span}", file=out)
    print(f"{'method':<10}{'MSE: SDR':>12}{'MSE: SDR-HC':>14}", file=out)
    for r in results:
        print(f"{r.init.upper():<10}{r.mse_raw:>12.4f}{r.mse_hc:>14.4f}", file=out)
    for r in results:
        vec = ", ".join(f"{v:.3f}" for v in np.round(r.direction_hc.coords, 3) + 0.0)
        print(f"{r.init.upper()}-HC direction ({', '.join(names)}): ({vec})", file=out)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / "real.csv"
        lines = ["init,mse_raw,mse_hc,hellinger_hc," + ",".join(f"hc_{n}" for n in names)]
        for r in results:
            vals = [r.init, format(r.mse_raw, ".17g"), format(r.mse_hc, ".17g"), format(r.hellinger_hc, ".17g")]
            vals += [format(v, ".17g") for v in r.direction_hc.coords]
            lines.append(",".join(vals))
        path.write_text("\n".join(lines) + "\n")
        _write_manifest(args.out, argv, args, anneal, simplex, [path], started)
    return results


def cmd_show_config(args, argv, out=None):
    out = out or sys.stdout
    anneal, simplex = load_config(args.config)
    print(dump_config(anneal, simplex), end="", file=out)


def cmd_replay(args, argv, out=None):
    out = out or sys.stdout
    try:
        manifest = json.loads(args.manifest.read_text())
        recorded = manifest["argv"]
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"cannot read manifest {args.manifest}: {exc}") from None
    log.info("replaying: hcsdr %s", shlex.join(recorded))
    return main(recorded)


COMMANDS = {"fit": cmd_fit, "simulate": cmd_simulate, "real": cmd_real,
            "show-config": cmd_show_config, "replay": cmd_replay}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if hasattr(args, "seed"):
            _check_common(args)
        result = COMMANDS[args.command](args, argv)
    except (UsageError, ConfigError) as exc:
        print(f"hcsdr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"hcsdr: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericError, HcsdrError, np.linalg.LinAlgError) as exc:
        print(f"hcsdr: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.command == "replay" and isinstance(result, int):
        return result
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
