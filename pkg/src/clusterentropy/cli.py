"""Command-line entry point.

Exit codes: 0 success, 1 usage or parameter error, 2 data error,
3 sweep finished with failed cells.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ._errors import DataError, ParameterError
from .analysis import default_n_grid, horizon_curves, mdi_table
from .entropy import cluster_pdf, entropy_curve
from .horizons import build_horizon_spec, make_horizon_set, scaled_spec, write_spec_csv
from .io import (
    ingest_ticks,
    read_curves_csv,
    read_series,
    write_curves_csv,
    write_mdi_csv,
    write_partition_csv,
    write_series,
)
from .partition import cluster_histogram, partition
from .presets import Preset, generate_series, load_presets
from .report import write_report
from .stats import align_curves, paired_t_test
from .sweep import run_sweep

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3

log = logging.getLogger("clusterentropy")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # shared by the top-level parser and every subcommand, so the flags may
    # appear on either side of the subcommand name
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="base random seed (default 0)")
    p.add_argument("--scale", type=float, default=d(0.125), help="horizon length scale (default 1/8)")
    p.add_argument("--out", type=Path, default=d(Path(".")), help="output file or directory")
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for sweeps")
    p.add_argument("-v", "--verbose", action="count", default=d(0))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="clusterentropy",
        description="Moving-average cluster entropy of long-range dependent series.",
        parents=[_global_flags(False)],
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_global_flags(True)]

    g = sub.add_parser("generate", parents=common, help="simulate a series")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="preset label from the config")
    src.add_argument("--model", choices=("gbm", "fbm", "arfima"))
    g.add_argument("--config", type=Path, help="preset file (default: packaged presets)")
    g.add_argument("--length", type=int, help="samples (default: longest horizon at --scale)")
    g.add_argument("--hurst", type=float)
    g.add_argument("--d", type=float)
    g.add_argument("--phi", type=_floats, default=())
    g.add_argument("--theta", type=_floats, default=())
    g.add_argument("--mu", type=float, default=0.0)
    g.add_argument("--sigma", type=float, default=0.0)
    g.add_argument("--increments", action="store_true", help="write ARFIMA increments, not the path")

    h = sub.add_parser("horizons", parents=common, help="cut a series into equal-length horizons")
    h.add_argument("input", type=Path, help="series file, or tick CSV with --ticks")
    h.add_argument("--ticks", action="store_true", help="input is a timestamp,price tick file")
    h.add_argument("--decimate", type=int, default=1, help="keep every k-th tick")
    h.add_argument("--binary", action="store_true", help="write float64 .bin files")

    e = sub.add_parser("entropy", parents=common, help="entropy curves of a series")
    e.add_argument("input", type=Path)
    e.add_argument("--n", type=_ints, help="comma-separated windows (default: log grid)")
    e.add_argument("--horizons", action="store_true", help="cut into horizons at --scale first")
    e.add_argument("--include-boundary", action="store_true")
    e.add_argument("--dump-partition", action="store_true", help="also write tau,count per window")

    m = sub.add_parser("mdi", parents=common, help="index table from an entropy-curve CSV")
    m.add_argument("curves", type=Path)

    t = sub.add_parser("ttest", parents=common, help="paired t-test of curves against a benchmark")
    t.add_argument("curves", type=Path)
    t.add_argument("benchmark", type=Path)

    s = sub.add_parser("sweep", parents=common, help="seeded ensemble sweep over presets")
    s.add_argument("--config", type=Path)
    s.add_argument("--presets", type=lambda v: [x for x in v.split(",") if x], help="labels to run")
    s.add_argument("--group", help="run every preset of a group (gbm, fbm, table2, table3)")
    s.add_argument("--seeds", type=int, help="ensemble size")
    s.add_argument("--ar-convention", choices=("minus", "plus"))

    r = sub.add_parser("report", parents=common, help="figure and table files from a sweep")
    r.add_argument("sweep_dir", type=Path)
    r.add_argument("--config", type=Path)
    return parser


def _out_file(out: Path, default_name: str) -> Path:
    if out.suffix:
        out.parent.mkdir(parents=True, exist_ok=True)
        return out
    out.mkdir(parents=True, exist_ok=True)
    return out / default_name


def _out_dir(out: Path) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(a) -> int:
    config = load_presets(a.config)
    n_steps = a.length or scaled_spec(a.scale).max_length
    if a.preset:
        if a.preset not in config.presets:
            raise ParameterError(f"unknown preset {a.preset!r}")
        preset = config[a.preset]
    else:
        preset = Preset(
            "cli", a.model, hurst=a.hurst, d=a.d, phi=a.phi, theta=a.theta, mu=a.mu, sigma=a.sigma
        )
    if a.increments:
        from dataclasses import replace

        config = replace(config, integrate_arfima=False)
    x = generate_series(preset, n_steps, a.seed, config)
    path = _out_file(a.out, "series.csv")
    write_series(path, x)
    log.info("wrote %d samples to %s", x.size, path)
    return EXIT_OK


def cmd_horizons(a) -> int:
    out = _out_dir(a.out)
    if a.ticks:
        ticks = ingest_ticks(a.input, decimate=a.decimate)
        spec = build_horizon_spec(ticks.cumulative_lengths())
        x = ticks.prices
        provenance = str(a.input)
    else:
        x = read_series(a.input)
        spec = scaled_spec(a.scale)
        provenance = str(a.input)
    hset = make_horizon_set(x, spec, provenance=provenance)
    write_spec_csv(spec, out / "spec.csv")
    ext = "bin" if a.binary else "csv"
    for m, y in enumerate(hset.series, 1):
        write_series(out / f"horizon_{m:02d}.{ext}", y)
    log.info("wrote %d horizons of length %d to %s", len(hset), hset.target_length, out)
    return EXIT_OK


def cmd_entropy(a) -> int:
    x = read_series(a.input)
    out = _out_dir(a.out)
    if a.horizons:
        hset = make_horizon_set(x, scaled_spec(a.scale), provenance=str(a.input))
        grid = a.n or default_n_grid(hset.target_length)
        curves = horizon_curves(hset, n_grid=grid, include_boundary=a.include_boundary)
        series = list(enumerate(hset.series, 1))
    else:
        grid = a.n or default_n_grid(x.size)
        curves = {}
        for n in grid:
            hist = cluster_histogram(partition(x, n, a.include_boundary))
            if hist:
                curves[(1, n)] = entropy_curve(cluster_pdf(hist, n), horizon=1)
        series = [(1, x)]
    if not curves:
        raise DataError("no window produced a complete cluster")
    write_curves_csv(out / "curves.csv", curves)
    if a.dump_partition:
        for m, y in series:
            for n in grid:
                write_partition_csv(
                    out / f"partition_M{m:02d}_n{n}.csv",
                    cluster_histogram(partition(y, n, a.include_boundary)),
                )
    return EXIT_OK


def cmd_mdi(a) -> int:
    curves = read_curves_csv(a.curves)
    if any(len(k) == 3 for k in curves):
        tables = {}
        for (label, m, n), c in curves.items():
            tables.setdefault(label, {})[(m, n)] = c
        write_mdi_csv(_out_file(a.out, "mdi.csv"), {k: mdi_table(v) for k, v in tables.items()})
    else:
        write_mdi_csv(_out_file(a.out, "mdi.csv"), mdi_table(curves))
    return EXIT_OK


def _grouped(curves: dict, default_label: str) -> dict[str, dict[int, list]]:
    out: dict[str, dict[int, list]] = {}
    for key, c in sorted(curves.items()):
        label, m = (key[0], key[1]) if len(key) == 3 else (default_label, key[0])
        out.setdefault(label, {}).setdefault(m, []).append(c)
    return out


def cmd_ttest(a) -> int:
    x = _grouped(read_curves_csv(a.curves), a.curves.stem)
    ref_all = _grouped(read_curves_csv(a.benchmark), "benchmark")
    ref = ref_all.get("benchmark") or next(iter(ref_all.values()))
    rows, summary = [], {}
    for label, by_m in x.items():
        for m, cs in by_m.items():
            if m not in ref:
                raise DataError(f"benchmark has no horizon {m}")
            r = paired_t_test(align_curves(cs, ref[m]))
            rows.append((m, label, r))
            summary.setdefault(label, {})[str(m)] = {
                "t": r.t_stat, "p": r.p_value, "dof": r.dof, "pairs": r.n_pairs,
            }
    out = _out_dir(a.out)
    with open(out / "ttest.csv", "w") as fh:
        fh.write("M,set,p\n")
        for m, label, r in sorted(rows, key=lambda v: (v[0], v[1])):
            fh.write(f"{m},{label},{r.p_value!r}\n")
    (out / "ttest.json").write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_sweep(a) -> int:
    config = load_presets(
        a.config, scale=a.scale, base_seed=a.seed, n_seeds=a.seeds, ar_convention=a.ar_convention
    )
    labels = list(a.presets or [])
    if a.group:
        labels += [v for v in config.group(a.group) if v not in labels]
        if not config.group(a.group):
            raise ParameterError(f"no presets in group {a.group!r}")
    if labels:
        config = config.select(labels)
    result = run_sweep(config, out=_out_dir(a.out), jobs=a.jobs)
    for f in result.failures:
        log.warning("failed cell %s seed=%d: %s", f.label, f.seed, f.error)
    return EXIT_OK if result.ok else EXIT_PARTIAL


def cmd_report(a) -> int:
    config = load_presets(a.config)
    out = a.out if str(a.out) != "." else a.sweep_dir
    for path in write_report(a.sweep_dir, out, config):
        log.info("wrote %s", path)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "horizons": cmd_horizons,
    "entropy": cmd_entropy,
    "mdi": cmd_mdi,
    "ttest": cmd_ttest,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(message)s",
    )
    if args.jobs < 1:
        print("clusterentropy: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"clusterentropy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"clusterentropy: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
