"""Transition-matrix plumbing: validation, words, recoding, entropy."""

import math

import numpy as np
import pytest

from sftspectra import (NotPrimitiveError, NotSquareError, TooLargeError,
                        WordNotAdmissibleError, ZeroRowOrColumnError,
                        admissible_words, build_sft, enumerate_cyclic_words,
                        full_shift, higher_block, is_admissible, is_primitive,
                        same_sft, topological_entropy, word)

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


def test_build_rejects_non_square():
    with pytest.raises(NotSquareError):
        build_sft(2, [[1, 1, 0], [1, 0, 1]])


def test_build_rejects_wrong_alphabet_size():
    with pytest.raises(NotSquareError):
        build_sft(3, [[1, 1], [1, 0]])


def test_build_rejects_non_binary_entries():
    with pytest.raises(WordNotAdmissibleError):
        build_sft(2, [[1, 2], [1, 0]])


def test_build_rejects_dead_symbol():
    # Symbol 1 has no successor.
    with pytest.raises(ZeroRowOrColumnError):
        build_sft(2, [[1, 1], [0, 0]])


def test_transitions_are_frozen(golden):
    with pytest.raises(ValueError):
        golden.transitions[0, 0] = 0


def test_primitivity_flags(full2, golden):
    assert is_primitive(full2)
    assert is_primitive(golden)
    # The 2-cycle matrix is irreducible but period 2, hence not primitive.
    swap = build_sft(2, [[0, 1], [1, 0]])
    assert not is_primitive(swap)
    with pytest.raises(NotPrimitiveError):
        topological_entropy(swap)


def test_admissibility(golden):
    assert is_admissible(golden, (0, 1, 0, 0, 1))
    assert not is_admissible(golden, (0, 1, 1))
    assert not is_admissible(golden, (0, 2))
    with pytest.raises(WordNotAdmissibleError):
        word(golden, (1, 1))
    with pytest.raises(WordNotAdmissibleError):
        word(golden, ())


def test_admissible_words_count_and_order(golden):
    # Counts follow the Fibonacci recursion; order is lexicographic.
    counts = [len(admissible_words(golden, k)) for k in range(1, 8)]
    assert counts == [2, 3, 5, 8, 13, 21, 34]
    assert admissible_words(golden, 3) == [
        (0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1)]


def test_full_shift_word_count(full2):
    assert len(admissible_words(full2, 10)) == 1024


def test_higher_block_preserves_entropy(golden):
    h = topological_entropy(golden)
    for k in (2, 3, 4):
        recoded = higher_block(golden, k)
        assert recoded.alphabet_size == len(admissible_words(golden, k))
        assert topological_entropy(recoded) == pytest.approx(h, abs=1e-12)


def test_higher_block_k1_is_identity(golden):
    assert same_sft(higher_block(golden, 1), golden)


def test_topological_entropy_closed_forms(full2, golden, three_letter):
    assert abs(topological_entropy(full2) - math.log(2.0)) < 1e-13
    assert abs(topological_entropy(golden) - math.log(GOLDEN_RATIO)) < 1e-13
    # det(A - xI) = 0 for the 3-letter matrix: x^3 - 2x^2 - 2x + 1 has
    # largest root (3 + sqrt(5) + sqrt(2 sqrt(5) + 2 (3 + sqrt 5)))/4... use
    # numpy's eigenvalues as the independent reference instead.
    rho = max(np.linalg.eigvals(three_letter.transitions.astype(float)).real)
    assert abs(topological_entropy(three_letter) - math.log(rho)) < 1e-12


def test_enumerate_cyclic_words_golden(golden):
    # Admissible necklaces avoiding 11, including the wraparound pair.
    assert set(enumerate_cyclic_words(golden, 1)) == {(0,)}
    assert set(enumerate_cyclic_words(golden, 2)) == {(0, 0), (0, 1), (1, 0)}
    words3 = set(enumerate_cyclic_words(golden, 3))
    assert (1, 0, 1) not in words3  # wraps to 11
    assert words3 == {(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)}


def test_enumerate_cyclic_words_counts_match_trace(full2, golden):
    for sft in (full2, golden):
        a = sft.transitions.astype(np.int64)
        power = np.eye(2, dtype=np.int64)
        for n in range(1, 9):
            power = power @ a
            assert len(list(enumerate_cyclic_words(sft, n))) == power.trace()


def test_word_enumeration_refuses_absurd_lengths(full2):
    with pytest.raises(TooLargeError):
        list(enumerate_cyclic_words(full2, 64))
