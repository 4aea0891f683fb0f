"""Labeled text corpora: manifest files, sample windows, control/eval splits.

A manifest is UTF-8 JSON-lines, one record per line:

    {"id": "fiction_01", "path": "fiction_01.txt", "label": "fiction"}

Relative paths resolve against the manifest's own directory so a corpus
directory can be moved or shipped as a unit. Randomness is always owned
by explicit seeds; manifests are read-only after loading and safe to
share across workers.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import ManifestError, WindowError
from .tokenizer import Token, TokenStream

__all__ = [
    "ManifestEntry",
    "CorpusManifest",
    "SampleWindow",
    "load_manifest",
    "save_manifest",
    "extract_window",
    "choose_window_start",
    "split_control_eval",
]


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    path: Path
    label: str

    def read_text(self) -> str:
        try:
            return self.path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise ManifestError(f"entry {self.id!r}: cannot read {self.path}: {exc}") from exc


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[ManifestEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self) -> list[str]:
        """Distinct labels in first-appearance order."""
        seen: list[str] = []
        for e in self.entries:
            if e.label not in seen:
                seen.append(e.label)
        return seen

    def by_label(self, label: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.label == label]


@dataclass(frozen=True)
class SampleWindow:
    """A fixed-length word range inside one sample's token stream."""

    sample_id: str
    start_word: int
    length_words: int

    def __post_init__(self) -> None:
        if self.start_word < 0:
            raise ValueError("start_word must be non-negative")
        if self.length_words < 1:
            raise ValueError("length_words must be >= 1")


def load_manifest(
    path: str | Path,
    categories: tuple[str, str] | None = None,
    check_paths: bool = True,
) -> CorpusManifest:
    """Parse and validate a JSON-lines manifest.

    When ``categories`` is given every label must belong to it. Entry
    order is preserved; ids must be unique; referenced files must exist
    unless ``check_paths`` is disabled.
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    base = path.parent
    entries: list[ManifestEntry] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        missing = {"id", "path", "label"} - rec.keys()
        if missing:
            raise ManifestError(f"{path}:{lineno}: missing fields {sorted(missing)}")
        sample_id = str(rec["id"])
        if sample_id in seen_ids:
            raise ManifestError(f"{path}:{lineno}: duplicate id {sample_id!r}")
        seen_ids.add(sample_id)
        label = str(rec["label"])
        if categories is not None and label not in categories:
            raise ManifestError(
                f"{path}:{lineno}: unknown label {label!r} (expected one of {list(categories)})"
            )
        entry_path = Path(rec["path"])
        if not entry_path.is_absolute():
            entry_path = base / entry_path
        if check_paths and not entry_path.is_file():
            raise ManifestError(f"{path}:{lineno}: entry path does not exist: {entry_path}")
        entries.append(ManifestEntry(id=sample_id, path=entry_path, label=label))
    return CorpusManifest(entries=tuple(entries))


def save_manifest(path: str | Path, manifest: CorpusManifest) -> None:
    path = Path(path)
    lines = [
        json.dumps({"id": e.id, "path": str(e.path), "label": e.label}, sort_keys=True)
        for e in manifest.entries
    ]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def extract_window(tokens: TokenStream, window: SampleWindow) -> TokenStream:
    """Contiguous sub-stream of exactly window.length_words tokens, re-indexed."""
    end = window.start_word + window.length_words
    if end > tokens.n_words:
        raise WindowError(
            f"window [{window.start_word}, {end}) exceeds {tokens.n_words} words "
            f"in sample {window.sample_id!r}"
        )
    sliced = tuple(
        Token(surface=t.surface, lemma=t.lemma, position=i)
        for i, t in enumerate(tokens.tokens[window.start_word:end])
    )
    return TokenStream(tokens=sliced, source_id=tokens.source_id)


def choose_window_start(
    n_words: int, length: int, sample_id: str, seed: int, random_offset: bool
) -> int:
    """Window placement: 0 by default, or a seeded uniform draw that fits.

    The per-sample generator is derived from (seed, sample_id) so results
    do not depend on processing order.
    """
    if length > n_words:
        raise WindowError(f"sample {sample_id!r} has {n_words} words; window needs {length}")
    if not random_offset:
        return 0
    digest = hashlib.sha256(f"{seed}:{sample_id}".encode()).digest()
    rng = random.Random(int.from_bytes(digest[:8], "big"))
    return rng.randrange(0, n_words - length + 1)


def split_control_eval(
    manifest: CorpusManifest, fraction: float, seed: int
) -> tuple[CorpusManifest, CorpusManifest]:
    """Per-category random partition into control and evaluation sets.

    Each category contributes floor(fraction * n) entries to control and
    the rest to eval. The same seed always yields the same partition, and
    the two outputs keep the input's entry order.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    rng = random.Random(seed)
    control_ids: set[str] = set()
    for label in sorted(manifest.labels()):
        group = manifest.by_label(label)
        if len(group) < 2:
            raise ManifestError(
                f"category {label!r} has {len(group)} entries; need at least 2 to split"
            )
        ids = [e.id for e in group]
        rng.shuffle(ids)
        control_ids.update(ids[: int(fraction * len(ids))])
    control = tuple(e for e in manifest.entries if e.id in control_ids)
    evaluation = tuple(e for e in manifest.entries if e.id not in control_ids)
    return CorpusManifest(entries=control), CorpusManifest(entries=evaluation)
