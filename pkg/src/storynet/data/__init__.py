"""Bundled sample data: a small labeled corpus and a demo quote."""

from pathlib import Path

_HERE = Path(__file__).parent


def mini_corpus_manifest() -> Path:
    """Path to the bundled fiction/news corpus manifest."""
    return _HERE / "minicorpus" / "manifest.jsonl"


def demo_quote_path() -> Path:
    """Path to the short demo text used in examples and golden tests."""
    return _HERE / "quote.txt"
