"""Text normalization: word splitting, case folding and lemma grouping.

Words are maximal runs of Unicode letters and digits. Apostrophes split
contractions into separate words ("don't" -> "don", "t"), except that a
trailing "'s" is dropped entirely because possessives and "is"-contractions
cannot be told apart. All other punctuation is a plain boundary, so tokens
connect across commas, periods and hyphens.

Lemma grouping uses a small deterministic suffix-stripping stemmer so that
inflected forms ("eat", "eats", "eaten") share one lemma. An identity
lemmatizer is available for analyses that must keep surface forms distinct.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Callable, Iterable

__all__ = [
    "Token",
    "TokenStream",
    "tokenize",
    "stem",
    "lemmatize",
    "make_lemmatizer",
    "make_stream",
]

_WORD_CHUNK = re.compile(r"'*[^\W_]+(?:'+[^\W_]+)*'*")
_APOSTROPHE_VARIANTS = str.maketrans({"’": "'", "ʼ": "'", "′": "'"})

_VOWELS = frozenset("aeiou")


@dataclass(frozen=True)
class Token:
    """One word occurrence: surface form, its lemma, and word index."""

    surface: str
    lemma: str
    position: int


@dataclass(frozen=True)
class TokenStream:
    """Ordered tokens of one text sample."""

    tokens: tuple[Token, ...]
    source_id: str = ""

    @property
    def n_words(self) -> int:
        return len(self.tokens)

    @property
    def n_unique_lemmas(self) -> int:
        return len({t.lemma for t in self.tokens})

    def lemmas(self) -> list[str]:
        return [t.lemma for t in self.tokens]

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


def tokenize(text: str) -> list[str]:
    """Split raw text into case-folded surface words.

    Punctuation never appears in the output; contractions become two words;
    a trailing "'s" is removed from its word entirely.
    """
    folded = unicodedata.normalize("NFC", text.casefold())
    folded = folded.translate(_APOSTROPHE_VARIANTS)
    words: list[str] = []
    for chunk in _WORD_CHUNK.findall(folded):
        if chunk.endswith("'s"):
            chunk = chunk[:-2]
        chunk = chunk.strip("'")
        words.extend(part for part in chunk.split("'") if part)
    return words


def _is_vowel(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return True
    # y acts as a vowel after a consonant ("fly", "rhythm")
    return ch == "y" and i > 0 and not _is_vowel(word, i - 1)


def _has_vowel(word: str) -> bool:
    return any(_is_vowel(word, i) for i in range(len(word)))


def _measure(word: str) -> int:
    """Count vowel-to-consonant transitions (the [C](VC)^m[V] measure)."""
    m = 0
    for i in range(len(word) - 1):
        if _is_vowel(word, i) and not _is_vowel(word, i + 1):
            m += 1
    return m


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    return (
        not _is_vowel(word, len(word) - 3)
        and _is_vowel(word, len(word) - 2)
        and not _is_vowel(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _repair(stub: str, allow_ate: bool = True) -> str:
    """Clean up a stem after removing ed/ing/en."""
    if allow_ate and stub.endswith(("at", "bl", "iz")):
        return stub + "e"
    if (
        len(stub) >= 2
        and stub[-1] == stub[-2]
        and not _is_vowel(stub, len(stub) - 1)
        and stub[-1] not in "lsz"
    ):
        return stub[:-1]
    if _measure(stub) == 1 and _ends_cvc(stub):
        return stub + "e"
    return stub


def _strip_once(word: str) -> str:
    if len(word) < 3 or not word.isalpha():
        return word
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies") and len(word) >= 4:
        return word[:-3] + "y"
    if word.endswith("ss"):
        return word
    if word.endswith("s") and _has_vowel(word[:-1]) and len(word) >= 4:
        return word[:-1]
    if word.endswith("ied") and len(word) >= 5:
        return word[:-3] + "y"
    if word.endswith("eed"):
        return word[:-1] if _measure(word[:-3]) > 0 else word
    if word.endswith("ed") and _has_vowel(word[:-2]):
        return _repair(word[:-2])
    if word.endswith("ing") and _has_vowel(word[:-3]):
        return _repair(word[:-3])
    if word.endswith("en") and _has_vowel(word[:-2]) and len(word) >= 4:
        # "ate" restoration is only sound for ed/ing ("conflated"), not "eaten"
        return _repair(word[:-2], allow_ate=False)
    return word


def stem(word: str) -> str:
    """Strip inflectional suffixes until the word stops changing.

    Iterating to a fixed point makes the mapping idempotent, which is what
    lets a lemma serve as a stable vertex identity.
    """
    for _ in range(len(word) + 1):
        stripped = _strip_once(word)
        if stripped == word:
            return word
        word = stripped
    return word


lemmatize = stem


def make_lemmatizer(name: str) -> Callable[[str], str]:
    """Return the lemma function for a config name: "stemmer" or "identity"."""
    if name == "stemmer":
        return stem
    if name == "identity":
        return lambda word: word
    raise ValueError(f"unknown lemmatizer {name!r} (expected 'stemmer' or 'identity')")


def make_stream(
    text: str,
    source_id: str = "",
    lemmatizer: str | Callable[[str], str] = "stemmer",
) -> TokenStream:
    """Tokenize and lemmatize raw text into a TokenStream."""
    lemma_fn = make_lemmatizer(lemmatizer) if isinstance(lemmatizer, str) else lemmatizer
    tokens = tuple(
        Token(surface=w, lemma=lemma_fn(w), position=i)
        for i, w in enumerate(tokenize(text))
    )
    return TokenStream(tokens=tokens, source_id=source_id)


def stream_from_tokens(
    words: Iterable[str], source_id: str = "", lemmatizer: str | Callable[[str], str] = "identity"
) -> TokenStream:
    """Build a stream from pre-split words (mainly for tests and fixtures)."""
    lemma_fn = make_lemmatizer(lemmatizer) if isinstance(lemmatizer, str) else lemmatizer
    tokens = tuple(
        Token(surface=w, lemma=lemma_fn(w), position=i) for i, w in enumerate(words)
    )
    return TokenStream(tokens=tokens, source_id=source_id)
