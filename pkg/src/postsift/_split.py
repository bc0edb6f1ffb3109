"""Pure numpy best-split kernel (fallback for the compiled extension).

Both kernels take a column already sorted ascending together with its
0/1 labels and return ``(boundary_index, gini_gain)``; the boundary is
the last left-side position, so the threshold is the midpoint
``(v[i] + v[i+1]) / 2``.  ``(-1, 0.0)`` signals a constant column.

Candidates are ranked by ``T = (A*nr + B*nl) / (nl*nr)`` with
``A = pl^2 + (nl-pl)^2`` and ``B = pr^2 + (nr-pr)^2``, a strictly
monotone transform of the Gini gain.  Every operand is an integer held
exactly in a float64 (safe while 2*n^3 < 2^53, i.e. n well beyond 10^5),
and IEEE division is correctly rounded, so mathematically tied
candidates compare exactly equal and the smallest threshold wins the
tie.  The arithmetic mirrors the Cython kernel expression for
expression so the two backends agree bit for bit (the extension is
compiled with floating-point contraction off).
"""

from __future__ import annotations

import numpy as np


def gini(pos: int, total: int) -> float:
    """Gini impurity of a node with ``pos`` positives out of ``total``."""
    if total == 0:
        return 0.0
    p = pos / total
    q = (total - pos) / total
    return 1.0 - p * p - q * q


def best_split_sorted(values: np.ndarray, labels: np.ndarray) -> tuple[int, float]:
    """Best Gini boundary over a sorted column.

    Candidates sit between consecutive distinct values; among equal gains
    the smallest boundary (hence smallest threshold) wins.
    """
    n = values.shape[0]
    boundaries = np.flatnonzero(values[:-1] != values[1:])
    if boundaries.size == 0:
        return -1, 0.0

    pos_prefix = np.cumsum(labels, dtype=np.float64)
    total_pos = pos_prefix[-1]
    n_f = float(n)
    parent = 1.0 - (total_pos / n_f) * (total_pos / n_f) \
        - ((n_f - total_pos) / n_f) * ((n_f - total_pos) / n_f)

    nl = (boundaries + 1).astype(np.float64)
    nr = n_f - nl
    pl = pos_prefix[boundaries]
    pr = total_pos - pl
    ql = nl - pl
    qr = nr - pr
    A = pl * pl + ql * ql
    B = pr * pr + qr * qr
    T = (A * nr + B * nl) / (nl * nr)

    best = int(np.argmax(T))
    gain = parent - 1.0 + T[best] / n_f
    return int(boundaries[best]), float(gain)
