"""Command-line interface.

Exit codes: 0 success, 2 input/config error, 3 degenerate physics,
4 fit did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import warnings
from pathlib import Path

from . import __version__, _accel
from . import config as config_mod
from .coupled_mode import (
    find_5050_lengths,
    first_5050_lengths,
    sweep_bunching_vs_length,
)
from .exceptions import ConfigError, DegenerateError, NoFeatureError
from .experiment_sim import CoincidenceRecord, simulate
from .fitting import DIP, MAX_ITER, PEAK, fit_dip, visibility_v1, visibility_v2

log = logging.getLogger("lossyhom")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_NOT_CONVERGED = 4

SWEEP_HEADER = ("length_um", "reflectance", "transmittance", "throughput", "P")
DATA_HEADER = ("stage_position_um", "counts", "integration_s")
REPORT_HEADER = ("parameter", "value", "std_error")


def fmt(value) -> str:
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return f"{value:.12g}"


def _write_csv(path: Path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([cell if isinstance(cell, str) else fmt(cell) for cell in row])
    path.write_text(buf.getvalue())


def _write_gnuplot(path: Path, csv_path: Path, xcol: int, ycol: int, xlabel: str, ylabel: str) -> None:
    path.write_text(
        "set datafile separator ','\n"
        f"set xlabel '{xlabel}'\n"
        f"set ylabel '{ylabel}'\n"
        f"plot '{csv_path}' using {xcol}:{ycol} every ::1 with linespoints title '{ylabel}'\n"
    )


def read_records(path) -> list[CoincidenceRecord]:
    """Parse a coincidence CSV; errors carry the offending line number."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    reader = csv.reader(io.StringIO(text))
    records = []
    for lineno, row in enumerate(reader, start=1):
        if lineno == 1:
            if tuple(cell.strip() for cell in row) != DATA_HEADER:
                raise ConfigError(f"{path}:1: expected header {','.join(DATA_HEADER)}")
            continue
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise ConfigError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
        try:
            pos = float(row[0])
            counts = int(row[1])
            tint = float(row[2])
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
        if counts < 0 or not tint > 0:
            raise ConfigError(f"{path}:{lineno}: counts must be >= 0 and integration_s > 0")
        records.append(CoincidenceRecord(pos, counts, tint))
    if len(records) < 5:
        raise ConfigError(f"{path}: need at least 5 data rows, got {len(records)}")
    return records


def cmd_sweep_coupler(args) -> int:
    cfg = config_mod.load(args.config)
    spec = cfg.coupler
    n1, n2 = spec.n_symmetric, spec.n_antisymmetric
    if args.at_5050_branches is not None:
        lengths = first_5050_lengths(n1, n2, spec.wavelength_um, args.at_5050_branches)
    elif args.lengths is not None:
        try:
            lengths = [float(v) for v in args.lengths.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"--lengths: {exc}") from exc
    elif cfg.sweep_lengths_um is not None:
        lengths = list(cfg.sweep_lengths_um)
    else:
        raise ConfigError("give --lengths, --at-5050-branches or sweep.lengths_um in the config")
    points = sweep_bunching_vs_length(n1, n2, spec.wavelength_um, lengths)
    bad = [pt.length_um for pt in points if not pt.ok]
    if bad:
        log.warning("no surviving pairs at %d length(s); P written as nan", len(bad))
    rows = sorted((pt.length_um, pt.reflectance, pt.transmittance, pt.throughput, pt.P) for pt in points)
    out = Path(args.out)
    _write_csv(out, SWEEP_HEADER, rows)
    if args.gnuplot:
        _write_gnuplot(Path(args.gnuplot), out, 1, 5, "coupling length (um)", "P")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = config_mod.load(args.config, seed=args.seed)
    records = simulate(cfg.experiment, workers=args.workers)
    out = Path(args.out)
    _write_csv(out, DATA_HEADER, records)
    if args.gnuplot:
        _write_gnuplot(Path(args.gnuplot), out, 1, 2, "stage position (um)", "coincidences")
    return EXIT_OK


def format_report(result, data_path) -> tuple[str, list]:
    p = result.params
    c_max, c_min = p.extremes
    rows = [
        ("baseline_C", p.baseline_C, result.std_errors["baseline_C"]),
        ("visibility_V", p.visibility_V, result.std_errors["visibility_V"]),
        ("coherence_length_um", p.coherence_length_um, result.std_errors["coherence_length_um"]),
        ("center_um", p.center_um, result.std_errors["center_um"]),
        ("curve_max", c_max, ""),
        ("curve_min", c_min, ""),
        ("rss", result.rss, ""),
        ("dof", result.dof, ""),
        ("iterations", result.iterations, ""),
        ("converged", int(result.converged), ""),
    ]
    if p.polarity == PEAK and c_min > 0:
        contrast = ("visibility_v2_of_extremes", visibility_v2(c_max, c_min))
    elif c_max > 0:
        contrast = ("visibility_v1_of_extremes", visibility_v1(c_max, c_min))
    else:
        contrast = None
    lines = [
        "lossyhom fit report",
        f"data: {data_path}",
        f"model: C*[1 {'+' if p.polarity == PEAK else '-'} V*exp(-((x-x0)/L_c)^2)] ({p.polarity})",
        f"converged: {'yes' if result.converged else 'no'} ({result.message}) after {result.iterations} iterations",
        "",
        f"{'parameter':<22}{'value':>20}{'std_error (1 sigma)':>22}",
    ]
    for name, value, err in rows[:4]:
        lines.append(f"{name:<22}{fmt(value):>20}{fmt(err):>22}")
    lines.append("")
    lines.append(f"curve max / min: {fmt(c_max)} / {fmt(c_min)}")
    if contrast:
        lines.append(f"{contrast[0]}: {fmt(contrast[1])}")
        rows.append((contrast[0], contrast[1], ""))
    lines.append(f"weighted rss: {fmt(result.rss)} on {result.dof} dof")
    return "\n".join(lines) + "\n", rows


def cmd_fit(args) -> int:
    records = read_records(args.data)
    result = fit_dip(records, args.polarity, max_iter=args.max_iter)
    text, rows = format_report(result, args.data)
    out = Path(args.out)
    csv_out = out.with_suffix(".csv") if out.suffix != ".csv" else out.with_suffix(".report.csv")
    out.write_text(text)
    _write_csv(csv_out, REPORT_HEADER, rows)
    sys.stdout.write(text)
    if not result.converged:
        log.error("fit did not converge: %s", result.message)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_find_splitter(args) -> int:
    cfg = config_mod.load(args.config)
    spec = cfg.coupler
    max_len = args.max_length_um if args.max_length_um is not None else cfg.sweep_max_length_um
    lengths = find_5050_lengths(spec.n_symmetric, spec.n_antisymmetric, spec.wavelength_um, max_len)
    if not lengths:
        sys.stdout.write(f"no balanced-split length below {fmt(max_len)} um\n")
        return EXIT_OK
    points = sweep_bunching_vs_length(spec.n_symmetric, spec.n_antisymmetric, spec.wavelength_um, lengths)
    sys.stdout.write(f"{'m':>4}{'L_m_um':>20}{'P':>20}{'throughput':>20}\n")
    for m, pt in enumerate(points):
        sys.stdout.write(f"{m:>4}{fmt(pt.length_um):>20}{fmt(pt.P):>20}{fmt(pt.throughput):>20}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lossyhom",
        description="Two-photon interference in lossy directional couplers.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} (kernels: {_accel.BACKEND})")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-coupler", help="bunching probability P versus coupling length")
    p.add_argument("config")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--lengths", help="comma-separated coupling lengths in um")
    group.add_argument("--at-5050-branches", type=int, metavar="N",
                       help="use the first N balanced-split lengths")
    p.add_argument("--out", required=True)
    p.add_argument("--gnuplot", metavar="SCRIPT", help="also write a gnuplot script for the CSV")
    p.set_defaults(func=cmd_sweep_coupler)

    p = sub.add_parser("simulate", help="Poisson coincidence scan")
    p.add_argument("config")
    p.add_argument("--seed", type=int, help=f"overrides {config_mod.SEED_ENV} and experiment.rng_seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--gnuplot", metavar="SCRIPT")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit a dip or peak to a coincidence CSV")
    p.add_argument("data")
    p.add_argument("--polarity", choices=(DIP, PEAK), default=DIP)
    p.add_argument("--max-iter", type=int, default=MAX_ITER)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("find-splitter", help="table of balanced-split coupling lengths")
    p.add_argument("config")
    p.add_argument("--max-length-um", type=float)
    p.set_defaults(func=cmd_find_splitter)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="lossyhom: %(levelname)s: %(message)s")
    with warnings.catch_warnings():
        warnings.simplefilter("default")
        warnings.showwarning = lambda message, *_a, **_k: log.warning("%s", message)
        try:
            return args.func(args)
        except (DegenerateError, NoFeatureError) as exc:
            log.error("%s", exc)
            return EXIT_DEGENERATE
        except ConfigError as exc:
            log.error("%s", exc)
            return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
