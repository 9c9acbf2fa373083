"""Tonic resolution: notated keys, else Krumhansl-Schmuckler correlation."""

from __future__ import annotations

import numpy as np

from ..errors import MelstructError
from ..song import NoteEvent, Song

# Krumhansl-Kessler probe-tone profiles.
KS_MAJOR = np.array(
    [6.35, 2.23, 3.48, 2.33, 4.38, 4.09, 2.52, 5.19, 2.39, 3.66, 2.29, 2.88]
)
KS_MINOR = np.array(
    [6.33, 2.68, 3.52, 5.38, 2.60, 3.53, 2.54, 4.75, 3.98, 2.69, 3.34, 3.17]
)


def key_signature_to_tonic(fifths: int, mode: str) -> int:
    """Tonic pitch class for a circle-of-fifths key signature."""
    tonic = (fifths * 7) % 12
    if mode == "minor":
        tonic = (tonic + 9) % 12
    return tonic


def duration_weighted_histogram(notes) -> np.ndarray:
    hist = np.zeros(12)
    for note in notes:
        hist[note.pitch % 12] += note.duration
    return hist


def _correlation(a: np.ndarray, b: np.ndarray) -> float:
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt((da * da).sum() * (db * db).sum())
    if denom == 0:
        return 0.0
    return float((da * db).sum() / denom)


def resolve_tonic_from_notes(
    notes, notated: tuple[int, str] | None = None
) -> tuple[int, str]:
    """Pick (tonic_pc, mode) for a melody.

    A notated key always wins.  Otherwise the duration-weighted pitch-class
    histogram is correlated against all 24 rotated Krumhansl profiles and the
    best key is returned; exact ties go to the lower pitch class, major
    before minor.
    """
    if notated is not None:
        tonic, mode = notated
        return (tonic % 12, mode)
    notes = list(notes)
    if not notes:
        raise MelstructError("cannot resolve a tonic for an empty melody")
    hist = duration_weighted_histogram(notes)
    best: tuple[int, str] | None = None
    best_corr = -np.inf
    for pc in range(12):
        rotated = np.roll(hist, -pc)
        for mode, profile in (("major", KS_MAJOR), ("minor", KS_MINOR)):
            corr = _correlation(rotated, profile)
            if corr > best_corr:
                best_corr = corr
                best = (pc, mode)
    assert best is not None
    return best


def resolve_tonic(song: Song, notated: tuple[int, str] | None = None) -> tuple[int, str]:
    """Resolve the tonic of a song, preferring a notated key when given."""
    return resolve_tonic_from_notes(song.notes, notated=notated)
