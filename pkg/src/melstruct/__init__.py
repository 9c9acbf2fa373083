"""melstruct: repetition and structure statistics for symbolic popular music.

The package quantifies how melodies repeat themselves: phrase and section
structure, half-note pattern vocabularies against random baselines, and
variable-order Markov predictability within and across songs.  The same
battery runs on machine-generated melodies to expose structural differences
from human-composed corpora.
"""

__version__ = "0.1.0"

from .song import (
    NoteEvent,
    PhraseLabel,
    Section,
    Song,
    SongStructure,
    song_from_dict,
    song_to_dict,
    to_degree_sequence,
)

__all__ = [
    "NoteEvent",
    "PhraseLabel",
    "Section",
    "Song",
    "SongStructure",
    "song_from_dict",
    "song_to_dict",
    "to_degree_sequence",
    "__version__",
]
