import json
import math

import pytest

from melstruct.experiments import ExperimentConfig
from melstruct.report import (
    ReportValidationError,
    build_analysis_report,
    canonical_json_bytes,
    corpus_content_hash,
    validate_report,
)
from melstruct.ingest.labels import parse_labels
from melstruct.song import song_to_dict
from helpers import make_song, measure_block

CFG = ExperimentConfig(lambda_grid=(0.0, 1.0), baseline_samples=20, min_phrase_samples=1)


def tiny_corpus():
    notes = []
    for m in range(8):
        notes += measure_block(m, [(0, 60), (4, 64), (8, 67), (12, 64)])
    song = make_song(notes, 8, song_id="tiny")
    return [(song, parse_labels("A4A4", song))]


def test_build_analysis_report_validates():
    corpus = tiny_corpus()
    report = build_analysis_report(
        corpus, CFG, corpus_id="c", song_dicts=[song_to_dict(corpus[0][0])]
    )
    validate_report(report)
    assert report["kind"] == "analysis"
    assert report["inputs"]["corpora"][0]["num_songs"] == 1


def test_missing_section_rejected():
    corpus = tiny_corpus()
    report = build_analysis_report(
        corpus, CFG, corpus_id="c", song_dicts=[song_to_dict(corpus[0][0])]
    )
    del report["analysis"]["fg_bg_sweep"]
    with pytest.raises(ReportValidationError) as info:
        validate_report(report)
    assert "fg_bg_sweep" in str(info.value)


def test_non_finite_numbers_rejected():
    corpus = tiny_corpus()
    report = build_analysis_report(
        corpus, CFG, corpus_id="c", song_dicts=[song_to_dict(corpus[0][0])]
    )
    report["analysis"]["novelty"]["mean"] = math.nan
    with pytest.raises(ReportValidationError):
        validate_report(report)


def test_report_roundtrips_through_json():
    corpus = tiny_corpus()
    report = build_analysis_report(
        corpus, CFG, corpus_id="c", song_dicts=[song_to_dict(corpus[0][0])]
    )
    again = json.loads(canonical_json_bytes(report))
    validate_report(again)
    assert canonical_json_bytes(again) == canonical_json_bytes(report)


def test_corpus_hash_order_insensitive():
    a = {"id": "a", "tonic_pc": 0, "mode": "major", "num_measures": 1, "notes": [[0, 4, 60]]}
    b = {"id": "b", "tonic_pc": 0, "mode": "major", "num_measures": 1, "notes": [[0, 4, 62]]}
    assert corpus_content_hash([a, b]) == corpus_content_hash([b, a])
    assert corpus_content_hash([a]) != corpus_content_hash([b])
