"""Dictionary and morphology services for URI path analysis.

Everything here is backed by plain-text word lists shipped in the data
directory: a frequency-ordered English lexicon used for word segmentation,
file extension and CRUD verb lists, and the noun tables that drive
singular/plural classification.  All dictionaries are loaded once and are
immutable afterwards, so they can be shared freely between rule checkers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources

from .errors import EmptyToken

UNKNOWN_CHUNK_PENALTY = 10.0  # per character; keeps known splits strictly cheaper

_CAMEL_RE = re.compile(r"""
    [A-Z]+(?![a-z])   # runs of capitals (acronyms)
    | [A-Z][a-z]+     # capitalized words
    | [a-z]+          # lowercase runs
""", re.VERBOSE)


def _data_text(name):
    return resources.files("api_ruler.data").joinpath(name).read_text(encoding="utf-8")


def _read_lines(name):
    out = []
    for line in _data_text(name).splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line.lower())
    return out


def split_words(segment):
    """Split a path segment into lowercase alphabetic words.

    Handles camelCase, acronym runs, and any non-letter separator
    (digits, hyphens, underscores, dots are all boundaries).
    """
    return [m.group(0).lower() for m in _CAMEL_RE.finditer(segment)]


@dataclass(frozen=True)
class Dictionary:
    """A named set of lowercase words, optionally frequency-ranked."""

    name: str
    entries: frozenset
    rank: dict | None = None  # word -> 1-based rank, 1 = most frequent
    max_word_length: int = 1

    @classmethod
    def from_words(cls, name, words, ranked=False):
        words = [w.strip().lower() for w in words if w.strip()]
        rank = {w: i + 1 for i, w in enumerate(dict.fromkeys(words))} if ranked else None
        longest = max((len(w) for w in words), default=1)
        return cls(name=name, entries=frozenset(words), rank=rank,
                   max_word_length=longest)

    @classmethod
    def load(cls, filename, ranked=False):
        return cls.from_words(filename, _read_lines(filename), ranked=ranked)

    def __contains__(self, word):
        return word in self.entries

    def __len__(self):
        return len(self.entries)

    def word_cost(self, word):
        """Cost of one dictionary word: log(rank * ln(dictionary size))."""
        rank = self.rank[word] if self.rank else 1
        return math.log(rank * math.log(len(self.entries)))


@dataclass(frozen=True)
class Segmentation:
    """Result of splitting a separator-free token into words.

    ``cost`` is finite iff no chunk fell outside the dictionary;
    ``search_cost`` is the minimized objective including unknown-chunk
    penalties, kept for comparison against enumeration oracles.
    """

    words: list
    cost: float
    residual: bool
    search_cost: float = 0.0


class Number(Enum):
    SINGULAR = "Singular"
    PLURAL = "Plural"
    INVARIANT = "Invariant"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class WordSense:
    token: str
    is_noun: bool
    is_verb: bool
    number: Number


# Singular words that suffix heuristics would call plural.
_SINGULAR_S_EXCEPTIONS = {
    "status", "bus", "analysis", "alias", "lens", "campus", "virus", "bonus",
    "census", "chaos", "gas", "atlas", "canvas", "iris", "kudos", "summons",
    "plus", "minus", "surplus", "apparatus", "consensus", "prospectus",
}


def _chunk_cost(chunk, dictionary):
    if chunk in dictionary:
        return dictionary.word_cost(chunk)
    return UNKNOWN_CHUNK_PENALTY * len(chunk)


def segment(token, dictionary):
    """Minimum-cost split of ``token`` into dictionary words.

    Dynamic programming over every split point; unknown chunks carry a
    per-character penalty and are merged in the output.  Deterministic:
    ties resolve toward longer trailing chunks.
    """
    cleaned = "".join(ch for ch in token if ch.isalpha()).lower()
    if not cleaned:
        raise EmptyToken(f"nothing to segment in {token!r}")

    max_len = dictionary.max_word_length
    n = len(cleaned)
    best = [0.0] + [math.inf] * n
    back = [0] * (n + 1)
    for i in range(1, n + 1):
        for j in range(max(0, i - max_len), i):
            cand = best[j] + _chunk_cost(cleaned[j:i], dictionary)
            if cand < best[i]:
                best[i] = cand
                back[i] = j

    chunks = []
    i = n
    while i > 0:
        j = back[i]
        chunks.append(cleaned[j:i])
        i = j
    chunks.reverse()

    # Adjacent unknown chunks merge; the per-character penalty is linear in
    # length, so the merged cost is unchanged.
    words = []
    residual = False
    for chunk in chunks:
        if chunk in dictionary:
            words.append(chunk)
        else:
            residual = True
            if words and words[-1] not in dictionary.entries:
                words[-1] += chunk
            else:
                words.append(chunk)

    search_cost = best[n]
    return Segmentation(
        words=words,
        cost=math.inf if residual else search_cost,
        residual=residual,
        search_cost=search_cost,
    )


class Lexicon:
    """Bundle of all shipped dictionaries plus the services built on them."""

    def __init__(self, profile="standard"):
        self.profile = profile
        freq_file = "words_by_frequency.txt"
        if profile == "large":
            # Optional slot for a bigger lexicon; falls back to the shipped
            # standard list when no large file is present.
            try:
                _data_text("words_by_frequency_large.txt")
                freq_file = "words_by_frequency_large.txt"
            except FileNotFoundError:
                pass
        self.frequency = Dictionary.load(freq_file, ranked=True)
        self.extensions = Dictionary.load("extensions.txt")
        self.format_names = Dictionary.load("format_names.txt")
        self.crud = _read_lines("crud.txt")
        self.crud_allowlist = Dictionary.load("crud_allowlist.txt")
        self.verbs = Dictionary.load("verbs.txt")
        self.invariant_nouns = Dictionary.load("invariant_nouns.txt")
        self.uncountable_nouns = Dictionary.load("uncountable_nouns.txt")
        self.irregular_singular = {}
        self.irregular_plural = {}
        for line in _read_lines("irregular_nouns.txt"):
            singular, _, plural = line.partition(",")
            if singular and plural:
                self.irregular_singular[singular] = plural
                self.irregular_plural[plural] = singular
        # Longest first so "update" wins over any shorter token sharing a prefix.
        self._crud_by_length = sorted(self.crud, key=len, reverse=True)

    def segment(self, token):
        return segment(token, self.frequency)

    def classify_word(self, token):
        """Noun-number and verb classification of a single lowercase word."""
        word = token.lower()
        is_verb = word in self.verbs or (word.endswith("s") and word[:-1] in self.verbs)
        in_tables = (
            word in self.irregular_singular or word in self.irregular_plural
            or word in self.invariant_nouns or word in self.uncountable_nouns
        )
        known = in_tables or word in self.frequency or word in self.verbs
        if not known:
            return WordSense(token=word, is_noun=False, is_verb=False, number=Number.UNKNOWN)

        # Table precedence: irregulars, invariants, and uncountables always
        # override the suffix heuristics below.
        if word in self.irregular_plural:
            number = Number.PLURAL
        elif word in self.irregular_singular:
            number = Number.SINGULAR
        elif word in self.invariant_nouns:
            number = Number.INVARIANT
        elif word in self.uncountable_nouns:
            number = Number.SINGULAR
        elif word in _SINGULAR_S_EXCEPTIONS:
            number = Number.SINGULAR
        elif word.endswith("ss") or word.endswith("us") or word.endswith("is"):
            number = Number.SINGULAR
        elif word.endswith("s"):
            number = Number.PLURAL
        else:
            number = Number.SINGULAR
        return WordSense(token=word, is_noun=True, is_verb=is_verb, number=number)

    def is_verb(self, word):
        return self.classify_word(word).is_verb

    @staticmethod
    def _is_namespace_style(segment_text):
        # Vendor namespace tokens like "Microsoft.Sql": capitalized on both
        # sides of the dot.
        pre, dot, suf = segment_text.rpartition(".")
        return bool(dot) and bool(pre) and bool(suf) and pre[0].isupper() and suf[0].isupper()

    def match_extension(self, segment_text):
        """Return the file extension a raw path segment ends with, if any."""
        if not segment_text or segment_text.startswith("{"):
            return None
        if "." in segment_text:
            if self._is_namespace_style(segment_text):
                return None
            suffix = segment_text.rpartition(".")[2].lower()
            if suffix in self.extensions:
                return suffix
            return None
        if segment_text.lower() in self.format_names:
            return segment_text.lower()
        return None

    def match_crud(self, segment_text):
        """Return the CRUD token a path segment exposes, if any.

        camelCase is split first; a word matches when a CRUD token is the
        whole word or its prefix, unless the word is in the compound-noun
        allowlist (e.g. "updater", "addresses", "settings").
        """
        if not segment_text or segment_text.startswith("{"):
            return None
        for word in split_words(segment_text):
            if word in self.crud_allowlist:
                continue
            for token in self._crud_by_length:
                if word == token or word.startswith(token):
                    return token
        return None


@lru_cache(maxsize=2)
def default_lexicon(profile="standard"):
    return Lexicon(profile=profile)


def classify_word(token):
    return default_lexicon().classify_word(token)


def match_extension(segment_text):
    return default_lexicon().match_extension(segment_text)


def match_crud(segment_text):
    return default_lexicon().match_crud(segment_text)
