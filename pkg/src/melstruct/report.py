"""Analysis report assembly, schema validation and canonical serialization.

Reports are plain JSON.  The same corpus and config always serialize to the
same bytes: keys are sorted, no timestamps are recorded, and all randomness
is derived from the config seed.  Input files are identified by SHA-256 so
a report is traceable to exact corpora.
"""

from __future__ import annotations

import hashlib
import json
import math

import jsonschema

from . import __version__
from .errors import MelstructError
from .experiments import ExperimentConfig, analyze_corpus, compare_corpora

SCHEMA_VERSION = 1

_CURVE = {
    "type": "object",
    "properties": {
        "num_bins": {"type": "integer", "minimum": 2},
        "means": {"type": "array", "items": {"type": ["number", "null"]}},
        "counts": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
    "required": ["num_bins", "means", "counts"],
}

_VOCAB_POINTS = {
    "type": "object",
    "properties": {
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "length": {"type": "number"},
                    "mean_distinct": {"type": "number"},
                    "mean_unique": {"type": "number"},
                    "n_samples": {"type": "integer", "minimum": 1},
                },
                "required": ["length", "mean_distinct", "mean_unique", "n_samples"],
            },
        }
    },
    "required": ["points"],
}

_SWEEP_ROWS = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "lambda": {"type": "number", "minimum": 0, "maximum": 1},
            "entropy": {"type": ["number", "null"]},
            "cross_entropy": {"type": ["number", "null"]},
            "accuracy": {"type": ["number", "null"]},
            "n_notes": {"type": "integer", "minimum": 0},
        },
        "required": ["lambda", "entropy", "cross_entropy", "accuracy"],
    },
}

_POSITION_TABLE = {
    "type": "object",
    "properties": {
        pos: {"type": ["number", "null"]}
        for pos in (
            "section_start",
            "phrase_start",
            "phrase_middle",
            "phrase_end",
            "section_end",
        )
    },
}

_ANALYSIS = {
    "type": "object",
    "properties": {
        "corpus": {"type": "object"},
        "onset_pattern_stats": {
            "type": "object",
            "properties": {
                "distinct_patterns": {"type": "integer", "minimum": 0},
                "total_windows": {"type": "integer", "minimum": 0},
            },
            "required": ["distinct_patterns", "total_windows"],
        },
        "phrase_vocabulary": {
            "type": "object",
            "properties": {
                "onset": {"type": "object"},
                "pitch": {"type": "object"},
            },
            "required": ["onset", "pitch"],
        },
        "rhythm_forms": {"type": "object"},
        "within_phrase_curve": _CURVE,
        "over_song_curve": _CURVE,
        "repetition_timeline": {
            "type": "object",
            "properties": {
                "num_bins": {"type": "integer"},
                "fraction_repeating": {
                    "type": "array",
                    "items": {"type": "number", "minimum": 0, "maximum": 1},
                },
            },
            "required": ["num_bins", "fraction_repeating"],
        },
        "repeat_latency": {"type": "object"},
        "novelty": {"type": "object"},
        "fg_bg_sweep": {
            "type": "object",
            "properties": {
                "include_duplicates": _SWEEP_ROWS,
                "holdout_repeats": _SWEEP_ROWS,
            },
            "required": ["include_duplicates", "holdout_repeats"],
        },
        "positional_cross_entropy": {
            "type": "object",
            "properties": {
                "background": _POSITION_TABLE,
                "foreground": _POSITION_TABLE,
            },
            "required": ["background", "foreground"],
        },
        "phrase_position_pitch_stats": {"type": "object"},
        "song_vocabulary": {"type": "object"},
        "per_song": {"type": "object"},
    },
    "required": [
        "corpus",
        "onset_pattern_stats",
        "phrase_vocabulary",
        "rhythm_forms",
        "within_phrase_curve",
        "over_song_curve",
        "repetition_timeline",
        "repeat_latency",
        "novelty",
        "fg_bg_sweep",
        "positional_cross_entropy",
        "phrase_position_pitch_stats",
        "song_vocabulary",
        "per_song",
    ],
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "tool_version": {"type": "string"},
        "kind": {"enum": ["analysis", "comparison"]},
        "config": {"type": "object"},
        "inputs": {
            "type": "object",
            "properties": {
                "corpora": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "corpus_id": {"type": "string"},
                            "content_hash": {"type": "string"},
                            "num_songs": {"type": "integer", "minimum": 1},
                        },
                        "required": ["corpus_id", "content_hash", "num_songs"],
                    },
                }
            },
            "required": ["corpora"],
        },
        "analysis": _ANALYSIS,
        "reference": _ANALYSIS,
        "generated": _ANALYSIS,
        "deltas": {"type": "object"},
        "significance": {"type": "object"},
        "skipped_files": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"path": {"type": "string"}, "reason": {"type": "string"}},
                "required": ["path", "reason"],
            },
        },
    },
    "required": ["schema_version", "tool_version", "kind", "config", "inputs"],
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "analysis"}}},
            "then": {"required": ["analysis"]},
        },
        {
            "if": {"properties": {"kind": {"const": "comparison"}}},
            "then": {"required": ["reference", "generated", "deltas", "significance"]},
        },
    ],
}


class ReportValidationError(MelstructError):
    pass


def _assert_finite(node, path: str = "$") -> None:
    if isinstance(node, bool):
        return
    if isinstance(node, float) and not math.isfinite(node):
        raise ReportValidationError(f"non-finite number at {path}")
    if isinstance(node, dict):
        for key, value in node.items():
            _assert_finite(value, f"{path}.{key}")
    elif isinstance(node, list):
        for i, value in enumerate(node):
            _assert_finite(value, f"{path}[{i}]")


def validate_report(report: dict) -> None:
    """Raise ReportValidationError unless the report matches the schema."""
    try:
        jsonschema.validate(report, REPORT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ReportValidationError(f"report schema violation: {exc.message}") from exc
    _assert_finite(report)


def canonical_json_bytes(data: dict) -> bytes:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode(
        "ascii"
    )


def corpus_content_hash(song_dicts: list[dict]) -> str:
    digest = hashlib.sha256()
    for d in sorted(song_dicts, key=lambda s: s["id"]):
        digest.update(canonical_json_bytes(d))
        digest.update(b"\n")
    return digest.hexdigest()


def _corpus_input(corpus_id: str, corpus, song_dicts: list[dict]) -> dict:
    return {
        "corpus_id": corpus_id,
        "content_hash": corpus_content_hash(song_dicts),
        "num_songs": len(song_dicts),
    }


def build_analysis_report(
    corpus,
    config: ExperimentConfig,
    corpus_id: str,
    song_dicts: list[dict],
    skipped: list[dict] | None = None,
) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "kind": "analysis",
        "config": config.to_dict(),
        "inputs": {"corpora": [_corpus_input(corpus_id, corpus, song_dicts)]},
        "analysis": analyze_corpus(corpus, config),
        "skipped_files": skipped or [],
    }
    validate_report(report)
    return report


def build_comparison_report(
    reference,
    generated,
    config: ExperimentConfig,
    reference_id: str,
    generated_id: str,
    reference_dicts: list[dict],
    generated_dicts: list[dict],
) -> dict:
    comparison = compare_corpora(reference, generated, config)
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "kind": "comparison",
        "config": config.to_dict(),
        "inputs": {
            "corpora": [
                _corpus_input(reference_id, reference, reference_dicts),
                _corpus_input(generated_id, generated, generated_dicts),
            ]
        },
        "reference": comparison["reference"],
        "generated": comparison["generated"],
        "deltas": comparison["deltas"],
        "significance": comparison["significance"],
        "skipped_files": [],
    }
    validate_report(report)
    return report
