#!/usr/bin/env python3
"""Find phrase structure by approximate-repetition search.

A melody with a literal repeat gets matching letters; adding an ornament
to the repeat still matches because measure substitutions cost only as
much as the measures differ.  Material that repeats nothing gets the
reserved unique letters (X, Y, ...).
"""

from melstruct.ingest.labels import render_labels
from melstruct.song import NoteEvent, Song
from melstruct.structure import (
    derive_sections,
    extract_phrases,
    measure_features,
    segment_similarity,
)


def four_measures(offset_measure, pitches):
    notes = []
    for m in range(4):
        for i, slot in enumerate((0, 4, 8, 12)):
            notes.append(
                NoteEvent((offset_measure + m) * 16 + slot, 4, pitches[(m + i) % len(pitches)])
            )
    return notes


verse = four_measures(0, (60, 62, 64, 65))
repeat = four_measures(4, (60, 62, 64, 65))
song = Song(id="demo", notes=tuple(sorted(verse + repeat)), num_measures=8, tonic_pc=0, mode="major")
print("exact repeat:", render_labels(extract_phrases(song)))

ornamented = sorted(verse + repeat + [NoteEvent(4 * 16 + 2, 1, 61)])
song2 = Song(id="demo2", notes=tuple(ornamented), num_measures=8, tonic_pc=0, mode="major")
tokens = measure_features(song2)
sim = segment_similarity(tokens[0:4], tokens[4:8])
print(f"repeat with a passing tone: similarity {sim:.3f},",
      "labels", render_labels(extract_phrases(song2, sim_threshold=0.8)))

contrast = four_measures(4, (55, 59, 57, 66))
song3 = Song(id="demo3", notes=tuple(sorted(verse + contrast)), num_measures=8, tonic_pc=0, mode="major")
print("unrelated halves:", render_labels(extract_phrases(song3)))

# Sections are maximal runs of repeated melodic phrases.
from melstruct.ingest.labels import parse_label_string

structure = parse_label_string("i4A8A8B8B8o4", "example")
for section in derive_sections(structure):
    print(
        f"section measures {section.start_measure}-{section.end_measure}:",
        "".join(section.phrase_letters),
    )
