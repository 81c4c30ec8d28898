"""Sentence splitting and tokenization.

Tokens correspond roughly to words and punctuation: whitespace-separated
chunks with surrounding punctuation detached into single-character tokens.
The sentence-final period is consumed here so the grammar stays
punctuation-free.
"""

from __future__ import annotations

from dataclasses import dataclass

TERMINATORS = ".!?"
PUNCT = set('.,!?;:"\'()')


@dataclass(frozen=True)
class Token:
    surface: str
    norm: str
    index: int


def split_sentences(text: str) -> list[str]:
    """Split after . ! ? when followed by whitespace or end of input."""
    sentences = []
    start = 0
    for i, ch in enumerate(text):
        if ch in TERMINATORS and (i + 1 == len(text) or text[i + 1].isspace()):
            piece = text[start : i + 1].strip()
            if piece:
                sentences.append(piece)
            start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _split_chunk(chunk: str) -> list[str]:
    """Detach leading/trailing punctuation from one whitespace-separated chunk."""
    lead = []
    trail = []
    while chunk and chunk[0] in PUNCT:
        lead.append(chunk[0])
        chunk = chunk[1:]
    while chunk and chunk[-1] in PUNCT:
        trail.append(chunk[-1])
        chunk = chunk[:-1]
    return lead + ([chunk] if chunk else []) + list(reversed(trail))


def tokenize(sentence: str) -> list[Token]:
    pieces = []
    for chunk in sentence.split():
        pieces.extend(_split_chunk(chunk))
    if pieces and pieces[-1] == ".":
        pieces.pop()
    return [Token(surface=p, norm=p.lower(), index=i) for i, p in enumerate(pieces)]
