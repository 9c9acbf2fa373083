"""Corpus manifests: what files make up a corpus and how to read them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import MelstructError

FORMATS = ("midi", "musicxml", "song-json")

_EXTENSIONS = {
    ".mid": "midi",
    ".midi": "midi",
    ".xml": "musicxml",
    ".musicxml": "musicxml",
    ".json": "song-json",
}


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    format: str


@dataclass(frozen=True)
class CorpusManifest:
    corpus_id: str
    root: Path
    entries: tuple[ManifestEntry, ...]
    label_file: Path | None = None


def manifest_from_dict(data: dict, base_dir: Path) -> CorpusManifest:
    root = (base_dir / data.get("root", ".")).resolve()
    entries = []
    for item in data["files"]:
        if isinstance(item, str):
            path, fmt = item, None
        else:
            path, fmt = item["path"], item.get("format")
        if fmt is None:
            fmt = _EXTENSIONS.get(Path(path).suffix.lower())
        if fmt not in FORMATS:
            raise MelstructError(f"unknown corpus file format for {path!r}")
        entries.append(ManifestEntry(path=root / path, format=fmt))
    label_file = data.get("labels")
    return CorpusManifest(
        corpus_id=data.get("corpus_id", root.name),
        root=root,
        entries=tuple(sorted(entries, key=lambda e: str(e.path))),
        label_file=(root / label_file) if label_file else None,
    )


def load_manifest(path: Path) -> CorpusManifest:
    """Load a manifest JSON, or build one by scanning a directory.

    Directory scans pick up every file with a recognized extension, plus a
    ``labels.tsv`` if present, in sorted order.
    """
    path = Path(path)
    if path.is_dir():
        entries = []
        for child in sorted(path.rglob("*")):
            if not child.is_file():
                continue
            fmt = _EXTENSIONS.get(child.suffix.lower())
            if fmt is not None and child.name != "manifest.json":
                entries.append(ManifestEntry(path=child, format=fmt))
        label_file = path / "labels.tsv"
        return CorpusManifest(
            corpus_id=path.name,
            root=path,
            entries=tuple(entries),
            label_file=label_file if label_file.exists() else None,
        )
    if not path.exists():
        raise MelstructError(f"manifest {path} does not exist")
    data = json.loads(path.read_text())
    return manifest_from_dict(data, base_dir=path.parent)
