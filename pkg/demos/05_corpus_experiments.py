#!/usr/bin/env python3
"""The full corpus battery on the bundled synthetic fixture.

Prints the headline numbers behind each report section: repetition over
time, predictability by structural position, the foreground/background
mixture sweep, and pattern vocabulary against the random baseline.
"""

import json
from pathlib import Path

from melstruct import song_from_dict
from melstruct.experiments import ExperimentConfig, analyze_corpus
from melstruct.ingest import parse_labels, read_label_file

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "synthetic10"

labels = read_label_file((FIXTURES / "labels.tsv").read_text())
corpus = []
for path in sorted(FIXTURES.glob("fx*.json")):
    song = song_from_dict(json.loads(path.read_text()))
    corpus.append((song, parse_labels(labels[song.id], song)))

config = ExperimentConfig(num_bins=10, baseline_samples=200, min_phrase_samples=2)
analysis = analyze_corpus(corpus, config)

print(f"{analysis['corpus']['num_songs']} songs, {analysis['corpus']['num_notes']} notes")
print(f"distinct half-note onset patterns: {analysis['onset_pattern_stats']['distinct_patterns']}")

timeline = analysis["repetition_timeline"]["fraction_repeating"]
print("\nfraction of corpus time inside repeated phrases, by song position:")
print("  " + " ".join(f"{f:.2f}" for f in timeline))

latency = analysis["repeat_latency"]
print(f"\nimmediate repeats: {latency['immediate_repeat_fraction']:.0%} of recurring phrases")
print(f"novelty ratio in [0.15, 0.35]: {analysis['novelty']['fraction_in_15_35']:.0%} of songs")

print("\nbackground-model cross-entropy by structural position (bits):")
for position, bits in analysis["positional_cross_entropy"]["background"].items():
    if bits is not None:
        print(f"  {position:<14} {bits:.2f}")

print("\nmixture sweep, repeats held out of the foreground:")
print("  lambda  cross-entropy  accuracy")
for row in analysis["fg_bg_sweep"]["holdout_repeats"]:
    print(f"  {row['lambda']:<7.2f} {row['cross_entropy']:<14.3f} {row['accuracy']:.3f}")

stats = analysis["phrase_position_pitch_stats"]
print("\ntonic probability by phrase position:")
for key in ("start", "middle", "end"):
    print(f"  {key:<7} {stats[key]['tonic_probability']:.2f}")
