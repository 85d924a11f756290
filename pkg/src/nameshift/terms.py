"""Tokenization, stopwords and the normalized term key used everywhere downstream."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, NamedTuple

from .porter import porter_stem

MAX_TERM_TOKENS = 4
EXTRACTED_MAX_TOKENS = 3
MIN_TERM_CHARS = 3

_TOKEN_RE = re.compile(r"[^\W_]+")
_BLANK_LINE_RE = re.compile(r"\n\s*\n")


class MalformedTermError(ValueError):
    pass


@lru_cache(maxsize=None)
def load_stopwords(name: str = "stopwords_en.txt") -> frozenset[str]:
    text = resources.files("nameshift").joinpath("data").joinpath(name).read_text(encoding="utf-8")
    words = (line.strip().lower() for line in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


STOPWORDS = load_stopwords()


class Token(NamedTuple):
    word: str
    start: int
    end: int
    # True when punctuation (or a blank line) separates this token from the previous one
    brk: bool


def tokenize(text: str) -> list[Token]:
    """Split text into word tokens, flagging punctuation boundaries.

    A full stop directly after a single-letter token (an initial, as in
    "P. Diddy") is not treated as a boundary.
    """
    out: list[Token] = []
    prev_end = 0
    prev_word = ""
    for m in _TOKEN_RE.finditer(text):
        gap = text[prev_end:m.start()]
        stripped = gap.strip()
        brk = bool(out) and (bool(stripped) or bool(_BLANK_LINE_RE.search(gap)))
        if brk and stripped == "." and len(prev_word) == 1 and prev_word.isupper():
            brk = False
        out.append(Token(m.group(), m.start(), m.end(), brk))
        prev_end = m.end()
        prev_word = m.group()
    return out


def is_capitalized(word: str) -> bool:
    return bool(word) and word[0].isupper()


@dataclass(frozen=True)
class TermKey:
    """A case-folded, stemmed term. Equality ignores the surface spelling."""

    tokens: tuple[str, ...]
    stops: tuple[bool, ...]
    surface: str = field(default="", compare=False)
    words: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if len(self.tokens) != len(self.stops):
            raise MalformedTermError("tokens and stop flags differ in length")

    @property
    def content(self) -> tuple[str, ...]:
        return tuple(t for t, s in zip(self.tokens, self.stops) if not s)

    @property
    def content_words(self) -> tuple[str, ...]:
        words = self.words or self.tokens
        return tuple(w for w, s in zip(words, self.stops) if not s)

    def __len__(self) -> int:
        return len(self.tokens)

    def __str__(self) -> str:
        return self.surface or " ".join(self.tokens)

    @property
    def sort_key(self):
        return (self.tokens, self.stops)

    def with_surface(self, surface: str) -> "TermKey":
        words = tuple(t.word for t in tokenize(surface))
        return TermKey(self.tokens, self.stops, surface, words)


def _key_from_words(words: Iterable[str], surface: str, stopwords=STOPWORDS) -> TermKey:
    words = tuple(words)
    folded = [w.lower() for w in words]
    return TermKey(
        tuple(porter_stem(w) for w in folded),
        tuple(w in stopwords for w in folded),
        surface,
        words,
    )


def term_key(text: str, stopwords=STOPWORDS) -> TermKey:
    """Lenient normalization for arbitrary names (KB resource names, test-set names)."""
    words = [t.word for t in tokenize(text)]
    return _key_from_words(words, text.strip(), stopwords)


def normalize_term(surface: str, stopwords=STOPWORDS) -> TermKey:
    """Normalize a surface form that must satisfy the extracted-term shape.

    Raises MalformedTermError for empty surfaces, more than four words, fewer
    than three characters, or a surface made only of stopwords.
    """
    words = [t.word for t in tokenize(surface)]
    if not words:
        raise MalformedTermError(f"no words in {surface!r}")
    if len(words) > MAX_TERM_TOKENS:
        raise MalformedTermError(f"{surface!r} has more than {MAX_TERM_TOKENS} words")
    if len(" ".join(words)) < MIN_TERM_CHARS:
        raise MalformedTermError(f"{surface!r} is shorter than {MIN_TERM_CHARS} characters")
    key = _key_from_words(words, surface.strip(), stopwords)
    if not key.content:
        raise MalformedTermError(f"{surface!r} consists of stopwords only")
    return key


def single_token_key(term: TermKey, index: int) -> TermKey:
    words = term.words or term.tokens
    return TermKey((term.tokens[index],), (term.stops[index],), words[index], (words[index],))


def contains_sequence(haystack: tuple[str, ...] | list[str], needle: tuple[str, ...]) -> bool:
    n = len(needle)
    if n == 0:
        return True
    first = needle[0]
    for i in range(len(haystack) - n + 1):
        if haystack[i] == first and tuple(haystack[i:i + n]) == needle:
            return True
    return False


def count_sequence(haystack: list[str], needle: tuple[str, ...]) -> int:
    n = len(needle)
    if n == 0:
        return 0
    return sum(1 for i in range(len(haystack) - n + 1) if tuple(haystack[i:i + n]) == needle)


def stem_text(text: str) -> list[str]:
    return [porter_stem(t.word.lower()) for t in tokenize(text)]
