#!/usr/bin/env python3
"""Regenerate the bundled fixture corpora (deterministic, safe to re-run).

Three corpora are produced under fixtures/:

  synthetic10/   ten labeled songs with pop-style phrase structure
  repetitive/    sixteen songs built from one or two measure patterns
  random/        sixteen songs with i.i.d. random onsets and pitches

The repetitive/random pair is constructed for complete separation of
per-song pattern vocabulary, so comparison significance tests have a
known-sign fixture.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from melstruct.ingest.labels import parse_label_string
from melstruct.report import canonical_json_bytes
from melstruct.song import NoteEvent, Song, song_to_dict

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

SCALE = [0, 2, 4, 5, 7, 9, 11]

TEMPLATES = [
    "i4A8A8B8B8o4",
    "A8A8B8B8",
    "i4A8B8A8B8o4",
    "A4A4B4B4C8C8",
    "i2A8A8x4B8B8o2",
    "A8A8A8B8",
    "i4A8A8B8B8C4o4",
    "A4A4A4A4B8B8",
    "i4A8A8x4B8B8o4",
    "A8B8A8B8C4C4",
]


def degree_pitch(tonic: int, degree_idx: int, register: int = 60) -> int:
    octave, step = divmod(degree_idx, 7)
    return register + tonic + SCALE[step] + 12 * octave


def melodic_measures(rng: np.random.Generator, n: int, tonic: int, end_on_tonic: bool) -> list:
    """n measures of (slot, duration, pitch), built from a 2-measure motif."""
    motif = []
    degree = int(rng.integers(0, 7))
    for _ in range(2):
        slots = sorted({0} | set(rng.choice(range(2, 16, 2), size=int(rng.integers(1, 4)), replace=False).tolist()))
        measure = []
        for i, slot in enumerate(slots):
            nxt = slots[i + 1] if i + 1 < len(slots) else 16
            degree = max(-3, min(10, degree + int(rng.integers(-2, 3))))
            measure.append((slot, nxt - slot, degree_pitch(tonic, degree)))
        motif.append(measure)
    measures = [list(motif[i % 2]) for i in range(n)]
    if end_on_tonic and measures[-1]:
        slot, dur, _ = measures[-1][-1]
        measures[-1][-1] = (slot, dur, degree_pitch(tonic, 0))
    return measures


def sparse_measures(rng: np.random.Generator, n: int, tonic: int) -> list:
    measures = []
    for m in range(n):
        if m % 2 == 0 and rng.random() < 0.5:
            measures.append([(0, 8, degree_pitch(tonic, 4, register=48))])
        else:
            measures.append([])
    return measures


def synthetic_song(index: int) -> tuple[Song, str]:
    rng = np.random.default_rng(20260100 + index)
    label_string = TEMPLATES[index % len(TEMPLATES)]
    structure = parse_label_string(label_string)
    tonic = int(rng.integers(0, 12))
    content: dict[str, list] = {}
    notes = []
    for lab in structure.labels:
        if lab.letter not in content:
            if lab.is_melodic:
                content[lab.letter] = melodic_measures(
                    rng, lab.length_measures, tonic, end_on_tonic=True
                )
            else:
                content[lab.letter] = sparse_measures(rng, lab.length_measures, tonic)
        for m, measure in enumerate(content[lab.letter]):
            base = (lab.start_measure + m) * 16
            for slot, dur, pitch in measure:
                notes.append(NoteEvent(base + slot, dur, pitch))
    notes.sort()
    song = Song(
        id=f"fx{index:03d}",
        notes=tuple(notes),
        num_measures=structure.num_measures,
        tonic_pc=tonic,
        mode="major",
    )
    return song, label_string


def repetitive_song(index: int) -> Song:
    rng = np.random.default_rng(30260100 + index)
    tonic = int(rng.integers(0, 12))
    num_measures = int(rng.choice([16, 20, 24, 28, 32]))
    slots = sorted({0} | set(rng.choice(range(2, 16, 2), size=2, replace=False).tolist()))
    degrees = rng.integers(0, 7, size=len(slots))
    measure = []
    for i, slot in enumerate(slots):
        nxt = slots[i + 1] if i + 1 < len(slots) else 16
        measure.append((slot, nxt - slot, degree_pitch(tonic, int(degrees[i]))))
    notes = [
        NoteEvent(m * 16 + slot, dur, pitch)
        for m in range(num_measures)
        for slot, dur, pitch in measure
    ]
    return Song(
        id=f"rep{index:03d}",
        notes=tuple(sorted(notes)),
        num_measures=num_measures,
        tonic_pc=tonic,
        mode="major",
    )


def random_song(index: int) -> Song:
    rng = np.random.default_rng(40260100 + index)
    num_measures = int(rng.choice([16, 20, 24, 28, 32]))
    notes = []
    for m in range(num_measures):
        slots = [s for s in range(16) if rng.random() < 0.35]
        for i, slot in enumerate(slots):
            nxt = slots[i + 1] if i + 1 < len(slots) else 16
            notes.append(
                NoteEvent(m * 16 + slot, nxt - slot, int(rng.integers(55, 80)))
            )
    if not notes:
        notes.append(NoteEvent(0, 4, 60))
    return Song(
        id=f"rnd{index:03d}",
        notes=tuple(sorted(notes)),
        num_measures=num_measures,
        tonic_pc=0,
        mode="major",
    )


def write_corpus(directory: Path, songs: list[Song], labels: dict[str, str] | None = None):
    directory.mkdir(parents=True, exist_ok=True)
    for song in songs:
        path = directory / f"{song.id}.json"
        path.write_bytes(canonical_json_bytes(song_to_dict(song)) + b"\n")
    if labels:
        lines = "".join(f"{sid}\t{lab}\n" for sid, lab in sorted(labels.items()))
        (directory / "labels.tsv").write_text(lines)
    print(f"wrote {len(songs)} songs to {directory}")


def write_golden_report():
    """Golden analysis report over synthetic10, used by the plots package."""
    import json
    import tempfile

    from melstruct.cli import main as cli_main

    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "out"
        code = cli_main(["analyze", str(FIXTURES / "synthetic10"), str(out)])
        if code != 0:
            raise SystemExit("analyze failed while building the golden report")
        (FIXTURES / "golden_report.json").write_bytes((out / "report.json").read_bytes())
    print(f"wrote {FIXTURES / 'golden_report.json'}")


def main():
    synth = [synthetic_song(i) for i in range(10)]
    write_corpus(
        FIXTURES / "synthetic10",
        [song for song, _ in synth],
        labels={song.id: lab for song, lab in synth},
    )
    write_corpus(FIXTURES / "repetitive", [repetitive_song(i) for i in range(16)])
    write_corpus(FIXTURES / "random", [random_song(i) for i in range(16)])
    write_golden_report()


if __name__ == "__main__":
    main()
