#!/usr/bin/env python3
"""Load a canonical song, look at its notes, degrees and labeled structure.

Songs are stored as JSON: note onsets and durations count sixteenth-note
ticks (16 per 4/4 measure), and every song carries a resolved tonic so
melodies can be compared as scale-degree sequences.
"""

import json
from pathlib import Path

from melstruct import song_from_dict, to_degree_sequence
from melstruct.ingest import parse_labels, read_label_file

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "synthetic10"

song = song_from_dict(json.loads((FIXTURES / "fx000.json").read_text()))
print(f"song {song.id}: {len(song.notes)} notes over {song.num_measures} measures")
print(f"tonic pitch class {song.tonic_pc} ({song.mode})")

print("\nfirst eight notes (onset, duration, pitch):")
for note in song.notes[:8]:
    print(f"  t={note.onset:<4} dur={note.duration:<3} pitch={note.pitch}")

degrees = to_degree_sequence(song)
print(f"\nscale degrees of those notes: {degrees[:8]}")

labels = read_label_file((FIXTURES / "labels.tsv").read_text())
structure = parse_labels(labels[song.id], song)
print(f"\nlabeled structure: {labels[song.id]}")
for lab in structure.labels:
    kind = "melodic" if lab.is_melodic else "non-melodic"
    print(f"  {lab.letter}: measures {lab.start_measure}-{lab.end_measure} ({kind})")
