"""Parsers that turn MIDI, MusicXML and label files into canonical Songs."""

from .key import resolve_tonic, resolve_tonic_from_notes
from .labels import parse_label_string, parse_labels, read_label_file, render_labels
from .musicxml import parse_musicxml
from .smf import parse_midi

__all__ = [
    "parse_midi",
    "parse_musicxml",
    "parse_labels",
    "parse_label_string",
    "render_labels",
    "read_label_file",
    "resolve_tonic",
    "resolve_tonic_from_notes",
]
