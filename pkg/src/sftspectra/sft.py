"""Subshifts of finite type presented by 0/1 transition matrices.

A subshift here is the set of one-sided infinite symbol sequences in which
every consecutive pair (a, b) is allowed by a square 0/1 matrix.  All
higher-depth structure (words of length k, block recodings) is derived from
that matrix.  Distances between sequences use d(x, y) = 2^-j where j is the
first index at which x and y disagree, and d(x, x) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._perron import perron_root
from .errors import (NotPrimitiveError, NotSquareError, TooLargeError,
                     WordNotAdmissibleError, ZeroRowOrColumnError)


@dataclass(frozen=True, eq=False)
class Sft:
    """A subshift of finite type over symbols 0..alphabet_size-1.

    transitions[a, b] == 1 means b may follow a.  The matrix is validated by
    build_sft: square, 0/1 entries, and no zero row or column (every symbol
    has a successor and a predecessor).  primitive records whether some
    power of the matrix is entrywise positive.
    """

    alphabet_size: int
    transitions: np.ndarray
    primitive: bool


@dataclass(frozen=True)
class Word:
    """An admissible finite word, kept as a tuple of symbols."""

    symbols: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.symbols)


def build_sft(alphabet_size: int, transitions) -> Sft:
    """Validate a transition matrix and package it as an Sft."""
    matrix = np.asarray(transitions)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotSquareError(f"transition matrix has shape {matrix.shape}")
    if matrix.shape[0] != alphabet_size:
        raise NotSquareError(
            f"matrix is {matrix.shape[0]}x{matrix.shape[0]} but alphabet_size={alphabet_size}")
    if not np.isin(matrix, (0, 1)).all():
        raise WordNotAdmissibleError("transition entries must be 0 or 1")
    matrix = matrix.astype(np.int8)
    if (matrix.sum(axis=1) == 0).any() or (matrix.sum(axis=0) == 0).any():
        raise ZeroRowOrColumnError("every symbol needs a successor and a predecessor")
    matrix.flags.writeable = False
    return Sft(alphabet_size, matrix, _primitive(matrix))


def _primitive(matrix: np.ndarray) -> bool:
    # Wielandt: a primitive n x n matrix has a positive power with exponent
    # at most n^2.  With no zero row, positivity of powers is monotone in the
    # exponent, so repeated boolean squaring up to n^2 decides the question.
    n = matrix.shape[0]
    power = matrix > 0
    exponent = 1
    while exponent < n * n:
        power = (power.astype(np.int64) @ power.astype(np.int64)) > 0
        exponent *= 2
    return bool(power.all())


def is_primitive(sft: Sft) -> bool:
    return sft.primitive


def same_sft(a: Sft, b: Sft) -> bool:
    return a.alphabet_size == b.alphabet_size and np.array_equal(a.transitions, b.transitions)


def topological_entropy(sft: Sft, tol: float = 1e-13) -> float:
    """log of the spectral radius of the transition matrix.

    Requires primitivity so that power iteration has a spectral gap.
    """
    if not sft.primitive:
        raise NotPrimitiveError("topological entropy is computed for primitive subshifts only")
    return float(np.log(perron_root(sft.transitions.astype(float), tol=tol)))


def word(sft: Sft, symbols) -> Word:
    """Validated admissible word."""
    symbols = tuple(int(s) for s in symbols)
    if not symbols:
        raise WordNotAdmissibleError("empty word")
    if not is_admissible(sft, symbols):
        raise WordNotAdmissibleError(f"word {symbols} is not admissible")
    return Word(symbols)


def is_admissible(sft: Sft, symbols: tuple[int, ...]) -> bool:
    if any(s < 0 or s >= sft.alphabet_size for s in symbols):
        return False
    t = sft.transitions
    return all(t[a, b] for a, b in zip(symbols, symbols[1:]))


def admissible_words(sft: Sft, length: int) -> list[tuple[int, ...]]:
    """All admissible words of the given length, lexicographically sorted.

    This ordering is the canonical one: higher_block enumerates its recoded
    alphabet in exactly this order.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    if sft.alphabet_size ** length > 100_000_000:
        raise TooLargeError(
            f"{sft.alphabet_size}^{length} candidate words is beyond enumeration")
    if length == 1:
        return [(a,) for a in range(sft.alphabet_size)]
    t = sft.transitions
    words = [(a,) for a in range(sft.alphabet_size)]
    for _ in range(length - 1):
        words = [w + (b,) for w in words for b in range(sft.alphabet_size) if t[w[-1], b]]
    return words


def higher_block(sft: Sft, k: int) -> Sft:
    """Recode to the alphabet of admissible k-words.

    Symbol i of the recoded shift is admissible_words(sft, k)[i]; word w may
    be followed by w' when they overlap in k-1 symbols and the glued
    (k+1)-word is admissible.  k=1 returns an identical copy.  The recoding
    preserves topological entropy.
    """
    if k < 1:
        raise ValueError("block length must be >= 1")
    words = admissible_words(sft, k)
    index = {w: i for i, w in enumerate(words)}
    n = len(words)
    t = sft.transitions
    matrix = np.zeros((n, n), dtype=np.int8)
    for i, w in enumerate(words):
        for b in range(sft.alphabet_size):
            if not t[w[-1], b]:
                continue
            j = index.get(w[1:] + (b,))
            if j is not None:
                matrix[i, j] = 1
    return build_sft(n, matrix)


def full_shift(alphabet_size: int) -> Sft:
    """The full shift: every transition allowed."""
    return build_sft(alphabet_size, np.ones((alphabet_size, alphabet_size), dtype=np.int8))


def golden_mean_shift() -> Sft:
    """Two symbols, with the word 11 forbidden."""
    return build_sft(2, [[1, 1], [1, 0]])


def enumerate_cyclic_words(sft: Sft, length: int):
    """Admissible words whose wrap-around transition is also allowed."""
    t = sft.transitions
    for w in admissible_words(sft, length):
        if t[w[-1], w[0]]:
            yield w


__all__ = [
    "Sft", "Word", "build_sft", "is_primitive", "same_sft", "topological_entropy",
    "word", "is_admissible", "admissible_words", "higher_block", "full_shift",
    "golden_mean_shift", "enumerate_cyclic_words",
]
