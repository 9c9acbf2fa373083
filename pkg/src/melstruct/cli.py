"""Command-line interface.

Commands: ingest, analyze, compare, baseline, plot-data.  Exit codes:
0 success, 1 usage error, 2 data error.  All randomness flows from --seed;
reports embed their config so a run can be reproduced byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import MelstructError
from .experiments import ExperimentConfig
from .ingest import parse_labels, parse_midi, parse_musicxml, read_label_file
from .manifest import CorpusManifest, ManifestEntry, load_manifest
from .patterns import empirical_distribution, sample_baseline_phrases
from .report import (
    build_analysis_report,
    build_comparison_report,
    canonical_json_bytes,
    validate_report,
)
from .song import Song, SongStructure, song_from_dict, song_to_dict
from .structure import extract_phrases

log = logging.getLogger("melstruct")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


class UsageError(Exception):
    """Raised for malformed command lines; mapped to exit code 1."""


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="melstruct", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for all randomness (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for ingest")
    common.add_argument("--config", type=Path, help="JSON config file (flags override it)")
    common.add_argument("--labels", type=Path, help="label file: song_id<TAB>labelstring")
    common.add_argument("--sim-threshold", type=float, help="phrase similarity threshold")
    common.add_argument("--max-order-fg", type=int, help="foreground model max order")
    common.add_argument("--max-order-bg", type=int, help="background model max order")
    common.add_argument("--lambda-grid", type=str, help="comma-separated mixture weights")
    common.add_argument("--bins", type=int, help="bin count for normalized-time curves")

    p_ingest = sub.add_parser("ingest", parents=[common], help="parse a corpus to Song JSON")
    p_ingest.add_argument("manifest", type=Path, help="manifest JSON or corpus directory")
    p_ingest.add_argument("out_dir", type=Path)
    p_ingest.add_argument("--track-hint", default="MELODY", help="melody track name")

    p_analyze = sub.add_parser("analyze", parents=[common], help="full corpus analysis")
    p_analyze.add_argument("corpus", type=Path, help="directory of ingested Song JSON")
    p_analyze.add_argument("out_dir", type=Path)

    p_compare = sub.add_parser("compare", parents=[common], help="reference vs generated")
    p_compare.add_argument("reference", type=Path)
    p_compare.add_argument("generated", type=Path)
    p_compare.add_argument("out_dir", type=Path)
    p_compare.add_argument("--generated-labels", type=Path, help="label file for the generated corpus")

    p_base = sub.add_parser("baseline", parents=[common], help="emit random baseline phrases")
    p_base.add_argument("corpus", type=Path, help="directory of ingested Song JSON")
    p_base.add_argument("out_file", type=Path)
    p_base.add_argument("--length", type=int, default=16, help="patterns per phrase")
    p_base.add_argument("--count", type=int, default=1000, help="phrases to sample")
    p_base.add_argument("--kind", choices=["onset", "pitch"], default="onset")

    p_plot = sub.add_parser("plot-data", parents=[common], help="re-emit CSVs from a report")
    p_plot.add_argument("report", type=Path)
    p_plot.add_argument("out_dir", type=Path)
    return parser


_CONFIG_CHECKS = {
    "max_order_fg": (lambda v: isinstance(v, int) and v >= 0, "an integer >= 0"),
    "max_order_bg": (lambda v: isinstance(v, int) and v >= 0, "an integer >= 0"),
    "lambda_grid": (
        lambda v: isinstance(v, (list, tuple))
        and len(v) >= 1
        and all(isinstance(x, (int, float)) and 0.0 <= x <= 1.0 for x in v),
        "a non-empty list of numbers in [0, 1]",
    ),
    "num_bins": (lambda v: isinstance(v, int) and v >= 2, "an integer >= 2"),
    "seed": (lambda v: isinstance(v, int), "an integer"),
    "sim_threshold": (
        lambda v: isinstance(v, (int, float)) and 0.0 < v <= 1.0,
        "a number in (0, 1]",
    ),
    "min_phrase_samples": (lambda v: isinstance(v, int) and v >= 1, "an integer >= 1"),
    "baseline_samples": (lambda v: isinstance(v, int) and v >= 1, "an integer >= 1"),
    "song_length_bin_width": (lambda v: isinstance(v, int) and v >= 1, "an integer >= 1"),
}


def _load_config(args) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        values.update(json.loads(Path(args.config).read_text()))
    overrides = {
        "seed": args.seed,
        "sim_threshold": args.sim_threshold,
        "max_order_fg": args.max_order_fg,
        "max_order_bg": args.max_order_bg,
        "num_bins": args.bins,
    }
    if args.lambda_grid:
        try:
            overrides["lambda_grid"] = [float(x) for x in args.lambda_grid.split(",")]
        except ValueError:
            raise UsageError(f"--lambda-grid is not a comma-separated number list: {args.lambda_grid!r}")
    for key, value in overrides.items():
        if value is not None:
            values[key] = value

    # report every problem at once, not just the first
    issues = []
    for key, value in sorted(values.items()):
        if key not in _CONFIG_CHECKS:
            issues.append(f"unknown config key {key!r}")
        elif not _CONFIG_CHECKS[key][0](value):
            issues.append(f"{key} must be {_CONFIG_CHECKS[key][1]}, got {value!r}")
    if issues:
        raise UsageError("bad configuration: " + "; ".join(issues))
    return ExperimentConfig.from_dict(values)


def _parse_entry(entry: ManifestEntry, track_hint: str) -> tuple[str, dict | None, str | None]:
    """Worker: parse one corpus file.  Returns (path, song dict, error)."""
    try:
        data = entry.path.read_bytes()
        song_id = entry.path.stem
        if entry.format == "midi":
            song = parse_midi(data, track_hint=track_hint, song_id=song_id)
        elif entry.format == "musicxml":
            song = parse_musicxml(data, song_id=song_id)
        else:
            song = song_from_dict(json.loads(data))
        return (str(entry.path), song_to_dict(song), None)
    except (MelstructError, ValueError, KeyError, OSError) as exc:
        return (str(entry.path), None, f"{type(exc).__name__}: {exc}")


def cmd_ingest(args) -> int:
    manifest = load_manifest(args.manifest)
    if not manifest.entries:
        log.error("manifest lists no corpus files")
        return EXIT_DATA
    out_dir: Path = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(
                pool.map(_parse_entry, manifest.entries, [args.track_hint] * len(manifest.entries))
            )
    else:
        results = [_parse_entry(entry, args.track_hint) for entry in manifest.entries]

    skipped = []
    n_ok = 0
    for path, song_dict, error in results:
        if error is not None:
            skipped.append({"path": path, "reason": error})
            log.warning("skipped %s: %s", path, error)
            continue
        out_path = out_dir / f"{song_dict['id']}.json"
        out_path.write_bytes(canonical_json_bytes(song_dict) + b"\n")
        n_ok += 1
    if manifest.label_file is not None:
        (out_dir / "labels.tsv").write_text(manifest.label_file.read_text())
    elif args.labels:
        (out_dir / "labels.tsv").write_text(Path(args.labels).read_text())
    (out_dir / "skipped.json").write_bytes(
        canonical_json_bytes({"skipped": skipped}) + b"\n"
    )
    log.info("ingested %d songs, skipped %d", n_ok, len(skipped))
    return EXIT_OK if n_ok >= 1 else EXIT_DATA


def _load_corpus(
    corpus_dir: Path, config: ExperimentConfig, labels_path: Path | None
) -> tuple[list[tuple[Song, SongStructure]], list[dict]]:
    """Load Song JSONs plus structures (labels when given, else extraction)."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise MelstructError(f"corpus directory {corpus_dir} does not exist")
    label_map: dict[str, str] = {}
    if labels_path is None:
        default_labels = corpus_dir / "labels.tsv"
        labels_path = default_labels if default_labels.exists() else None
    if labels_path is not None:
        label_map = read_label_file(Path(labels_path).read_text())
    pairs = []
    song_dicts = []
    for path in sorted(corpus_dir.glob("*.json")):
        if path.name == "skipped.json":
            continue
        data = json.loads(path.read_text())
        song = song_from_dict(data)
        song_dicts.append(song_to_dict(song))
        if song.id in label_map:
            structure = parse_labels(label_map[song.id], song)
        else:
            structure = extract_phrases(song, sim_threshold=config.sim_threshold)
        pairs.append((song, structure))
    if not pairs:
        raise MelstructError(f"no songs found in {corpus_dir}")
    return pairs, song_dicts


_CURVE_SECTIONS = (
    ("within_phrase_curve", "within_phrase"),
    ("over_song_curve", "over_song"),
    ("repetition_timeline", "repetition_timeline"),
)


def _curve_rows(section: dict) -> list[tuple]:
    if "fraction_repeating" in section:
        num_bins = section["num_bins"]
        values = section["fraction_repeating"]
        counts = [None] * num_bins
    else:
        num_bins = section["num_bins"]
        values = section["means"]
        counts = section["counts"]
    rows = []
    for b in range(num_bins):
        rows.append((b, b / num_bins, values[b], counts[b]))
    return rows


def _write_csvs(report: dict, out_dir: Path) -> None:
    csv_dir = out_dir / "csv"
    csv_dir.mkdir(parents=True, exist_ok=True)
    analyses = (
        [("", report["analysis"])]
        if report["kind"] == "analysis"
        else [("reference_", report["reference"]), ("generated_", report["generated"])]
    )
    for prefix, analysis in analyses:
        for section_key, name in _CURVE_SECTIONS:
            rows = _curve_rows(analysis[section_key])
            _write_csv(
                csv_dir / f"{prefix}{name}.csv",
                ["bin_index", "bin_start", "mean", "n"],
                rows,
            )
        for kind in ("onset", "pitch"):
            vocab = analysis["phrase_vocabulary"][kind]
            for series in ("real", "baseline"):
                rows = [
                    (i, p["length"], p["mean_distinct"], p["mean_unique"], p["n_samples"])
                    for i, p in enumerate(vocab[series]["points"])
                ]
                _write_csv(
                    csv_dir / f"{prefix}phrase_vocabulary_{kind}_{series}.csv",
                    ["bin_index", "length", "mean_distinct", "mean_unique", "n"],
                    rows,
                )
        for series in ("real", "baseline"):
            rows = [
                (i, p["length"], p["mean_distinct"], p["mean_unique"], p["n_samples"])
                for i, p in enumerate(analysis["song_vocabulary"][series]["points"])
            ]
            _write_csv(
                csv_dir / f"{prefix}song_vocabulary_{series}.csv",
                ["bin_index", "length", "mean_distinct", "mean_unique", "n"],
                rows,
            )
        for variant, rows in analysis["fg_bg_sweep"].items():
            _write_csv(
                csv_dir / f"{prefix}fg_bg_sweep_{variant}.csv",
                ["lambda", "entropy", "cross_entropy", "accuracy", "n_notes"],
                [
                    (r["lambda"], r["entropy"], r["cross_entropy"], r["accuracy"], r["n_notes"])
                    for r in rows
                ],
            )


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buffer.getvalue())


def _write_report(report: dict, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_bytes(canonical_json_bytes(report) + b"\n")
    _write_csvs(report, out_dir)


def cmd_analyze(args) -> int:
    config = _load_config(args)
    corpus, song_dicts = _load_corpus(args.corpus, config, args.labels)
    report = build_analysis_report(
        corpus, config, corpus_id=Path(args.corpus).name, song_dicts=song_dicts
    )
    _write_report(report, args.out_dir)
    log.info("report written to %s", args.out_dir / "report.json")
    return EXIT_OK


def cmd_compare(args) -> int:
    config = _load_config(args)
    reference, ref_dicts = _load_corpus(args.reference, config, args.labels)
    generated, gen_dicts = _load_corpus(args.generated, config, args.generated_labels)
    report = build_comparison_report(
        reference,
        generated,
        config,
        reference_id=Path(args.reference).name,
        generated_id=Path(args.generated).name,
        reference_dicts=ref_dicts,
        generated_dicts=gen_dicts,
    )
    _write_report(report, args.out_dir)
    log.info("comparison written to %s", args.out_dir / "report.json")
    return EXIT_OK


def cmd_baseline(args) -> int:
    config = _load_config(args)
    corpus, _ = _load_corpus(args.corpus, config, args.labels)
    from .patterns import melodic_phrase_patterns

    sequences = []
    for song, structure in corpus:
        sequences.extend(melodic_phrase_patterns(song, structure, kind=args.kind))
    dist = empirical_distribution(sequences)
    phrases = sample_baseline_phrases(dist, args.length, args.count, seed=config.seed)
    payload = {
        "kind": args.kind,
        "length": args.length,
        "count": args.count,
        "seed": config.seed,
        "phrases": [[list(p) if isinstance(p, tuple) else p for p in row] for row in phrases],
    }
    args.out_file.parent.mkdir(parents=True, exist_ok=True)
    args.out_file.write_bytes(canonical_json_bytes(payload) + b"\n")
    return EXIT_OK


def cmd_plot_data(args) -> int:
    report = json.loads(Path(args.report).read_text())
    validate_report(report)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    _write_csvs(report, args.out_dir)
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "analyze": cmd_analyze,
    "compare": cmd_compare,
    "baseline": cmd_baseline,
    "plot-data": cmd_plot_data,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MelstructError as exc:
        log.error("%s", exc)
        return EXIT_DATA
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
