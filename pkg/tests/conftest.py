"""Shared fixtures: the three workhorse subshifts and a few potentials."""

import numpy as np
import pytest

from sftspectra import build_sft, full_shift, golden_mean_shift, tabulate


@pytest.fixture(scope="session")
def full2():
    return full_shift(2)


@pytest.fixture(scope="session")
def golden():
    return golden_mean_shift()


@pytest.fixture(scope="session")
def three_letter():
    # Primitive 3-letter shift with the single transition 2->2 forbidden.
    return build_sft(3, [[1, 1, 1], [1, 1, 1], [1, 1, 0]])


@pytest.fixture(scope="session")
def first_symbol(full2):
    """phi(x) = x0 on the full 2-shift; everything about it is closed-form."""
    return tabulate(full2, 1, lambda w: float(w[0]))


def binary_entropy(alpha: np.ndarray) -> np.ndarray:
    """-a log a - (1-a) log(1-a), with the 0 log 0 = 0 convention."""
    a = np.clip(np.asarray(alpha, dtype=float), 0.0, 1.0)
    out = np.zeros_like(a)
    inner = (a > 0.0) & (a < 1.0)
    ai = a[inner]
    out[inner] = -ai * np.log(ai) - (1.0 - ai) * np.log1p(-ai)
    return out
