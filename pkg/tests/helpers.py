import numpy as np

from polyspec.hoffman import best_matching


def cgauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def multiset_gap(a, b):
    """Largest deviation between two eigenvalue multisets under the optimal pairing."""
    a, b = np.asarray(a), np.asarray(b)
    perm = best_matching(a, b).permutation
    return max(abs(a[i] - b[j]) for i, j in enumerate(perm))
