"""Utterance normalization: class members become class tags.

A normalized utterance (NU) is a token tuple in which every maximal run of
tokens matching a class member has been replaced by the class tag. NUs are
the unit of identity for all frequency analyses.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence

from .vocab import RESERVED, ClassLexicon

NU = tuple[str, ...]

_PUNCT = str.maketrans({c: " " for c in ".,;:!?"})


def tokenize(text: str) -> list[str]:
    """Whitespace tokenization after stripping sentence punctuation.

    Case is preserved here; :func:`normalize` lowercases everything that is
    not a known class tag or reserved tag.
    """
    return text.translate(_PUNCT).split()


def normalize(lexicon: ClassLexicon, utterance: str | Sequence[str]) -> NU:
    """Replace class members with their tags, greedy longest match first.

    Unknown words pass through lowercased; existing tags pass through
    unchanged, which makes the function idempotent.
    """
    tokens = tokenize(utterance) if isinstance(utterance, str) else list(utterance)
    cased = [
        t if (t in lexicon.classes or t in RESERVED) else t.lower() for t in tokens
    ]
    out: list[str] = []
    i = 0
    n = len(cased)
    while i < n:
        token = cased[i]
        if token in lexicon.classes or token in RESERVED:
            out.append(token)
            i += 1
            continue
        matched = False
        max_len = min(lexicon.max_member_words, n - i)
        for length in range(max_len, 0, -1):
            tag = lexicon.tag_for_sequence(tuple(cased[i : i + length]))
            if tag is not None:
                out.append(tag)
                i += length
                matched = True
                break
        if not matched:
            out.append(token)
            i += 1
    return tuple(out)


def normalize_corpus(lexicon: ClassLexicon, utterances: Iterable[str | Sequence[str]]) -> list[NU]:
    return [normalize(lexicon, u) for u in utterances]


def nu_histogram(corpus: Iterable[NU]) -> Counter:
    """Occurrence count per distinct NU; total equals the corpus size."""
    return Counter(tuple(nu) for nu in corpus)


def read_corpus(path) -> list[str]:
    """One utterance per line; blank lines are skipped."""
    with open(path, "r", encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def write_nu_corpus(path, nus: Iterable[NU]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for nu in nus:
            fh.write(" ".join(nu) + "\n")
