"""Hot numeric kernels: incidence index construction, time binning, and the
offset-sweep cosine used by the temporal similarity component.

Each kernel has a numba ``@njit`` implementation and a pure-numpy fallback.
The fallback is selected by setting ``TGMATCH_DISABLE_NUMBA=1`` in the
environment (or automatically when numba is not importable).
``benchmarks/bench_kernels.py`` compares the two paths.

Temporal histograms use linear (fractional) binning: a time at position
``p = (t - origin) / width`` contributes ``1 - frac(p)`` to bin ``floor(p)``
and ``frac(p)`` to the next bin.  Times exactly on the grid behave like hard
binning; off-grid times degrade smoothly instead of flipping bins.
"""

from __future__ import annotations

import math
import os

import numpy as np


def _numba_disabled() -> bool:
    return os.environ.get("TGMATCH_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}


try:
    if _numba_disabled():
        raise ImportError("disabled via TGMATCH_DISABLE_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:  # pragma: no cover - exercised via the env flag
    njit = None
    NUMBA_ENABLED = False


# ---------------------------------------------------------------------------
# incidence CSR: node -> incident edge ids (every edge once per endpoint)

def _np_build_incidence(src_idx: np.ndarray, dst_idx: np.ndarray, n_nodes: int):
    n_edges = src_idx.shape[0]
    ends = np.concatenate([src_idx, dst_idx])
    eids = np.concatenate([np.arange(n_edges, dtype=np.int64)] * 2)
    # per node: edge ids ascending, source entry before target entry
    order = np.lexsort((np.arange(2 * n_edges), eids, ends))
    counts = np.bincount(ends, minlength=n_nodes)
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, eids[order]


def _py_build_incidence(src_idx, dst_idx, n_nodes):
    n_edges = src_idx.shape[0]
    counts = np.zeros(n_nodes, dtype=np.int64)
    for e in range(n_edges):
        counts[src_idx[e]] += 1
        counts[dst_idx[e]] += 1
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    for i in range(n_nodes):
        indptr[i + 1] = indptr[i] + counts[i]
    out = np.empty(2 * n_edges, dtype=np.int64)
    cursor = indptr[:-1].copy()
    for e in range(n_edges):
        s = src_idx[e]
        out[cursor[s]] = e
        cursor[s] += 1
        d = dst_idx[e]
        out[cursor[d]] = e
        cursor[d] += 1
    return indptr, out


# ---------------------------------------------------------------------------
# dense hard-binned histogram of times (chart data): (first bin, counts)

def _np_bin_counts(times: np.ndarray, origin: float, width: float):
    if times.shape[0] == 0:
        return 0, np.zeros(0, dtype=np.int64)
    bins = np.floor((times - origin) / width).astype(np.int64)
    k0 = int(bins.min())
    return k0, np.bincount(bins - k0).astype(np.int64)


def _py_bin_counts(times, origin, width):
    n = times.shape[0]
    if n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    bins = np.empty(n, dtype=np.int64)
    kmin = 0
    kmax = 0
    for i in range(n):
        k = int(math.floor((times[i] - origin) / width))
        bins[i] = k
        if i == 0 or k < kmin:
            kmin = k
        if i == 0 or k > kmax:
            kmax = k
    counts = np.zeros(kmax - kmin + 1, dtype=np.int64)
    for i in range(n):
        counts[bins[i] - kmin] += 1
    return kmin, counts


# ---------------------------------------------------------------------------
# offset-sweep cosine over linearly binned time multisets

def _py_soft_histogram(times, delta, origin, width):
    """Consolidated (bins, masses) for ``times + delta`` binned from origin.

    ``times`` must be sorted ascending; output bins are strictly increasing.
    """
    n = times.shape[0]
    pk = np.empty(n, dtype=np.int64)
    pf = np.empty(n, dtype=np.float64)
    for i in range(n):
        p = (times[i] + delta - origin) / width
        k = int(math.floor(p))
        pk[i] = k
        pf[i] = p - k
    out_bins = np.empty(2 * n, dtype=np.int64)
    out_mass = np.empty(2 * n, dtype=np.float64)
    m = 0
    i = 0  # primary stream: (pk[i], 1 - pf[i])
    j = 0  # secondary stream: (pk[j] + 1, pf[j]), zero-mass entries skipped
    while j < n and pf[j] == 0.0:
        j += 1
    while i < n or j < n:
        if j >= n or (i < n and pk[i] <= pk[j] + 1):
            b = pk[i]
            w = 1.0 - pf[i]
            i += 1
        else:
            b = pk[j] + 1
            w = pf[j]
            j += 1
            while j < n and pf[j] == 0.0:
                j += 1
        if m > 0 and out_bins[m - 1] == b:
            out_mass[m - 1] += w
        else:
            out_bins[m] = b
            out_mass[m] = w
            m += 1
    return out_bins[:m], out_mass[:m]


def _py_sparse_cosine(b1, m1, b2, m2):
    n1 = 0.0
    for i in range(m1.shape[0]):
        n1 += m1[i] * m1[i]
    n2 = 0.0
    for i in range(m2.shape[0]):
        n2 += m2[i] * m2[i]
    if n1 == 0.0 or n2 == 0.0:
        return 0.0
    dot = 0.0
    i = 0
    j = 0
    while i < b1.shape[0] and j < b2.shape[0]:
        if b1[i] < b2[j]:
            i += 1
        elif b1[i] > b2[j]:
            j += 1
        else:
            dot += m1[i] * m2[j]
            i += 1
            j += 1
    return dot / math.sqrt(n1 * n2)


def _py_offset_sweep(times1, times2, width, offsets):
    """(best position, best cosine) over the offset grid; ``offsets`` must be
    pre-ordered by the caller's tie-break preference (first strict max wins)."""
    best_pos = 0
    best_cos = -1.0
    for pos in range(offsets.shape[0]):
        delta = offsets[pos]
        origin = times1[0]
        if times2[0] + delta < origin:
            origin = times2[0] + delta
        b1, m1 = _py_soft_histogram(times1, 0.0, origin, width)
        b2, m2 = _py_soft_histogram(times2, delta, origin, width)
        cos = _py_sparse_cosine(b1, m1, b2, m2)
        if cos > best_cos:
            best_cos = cos
            best_pos = pos
    return best_pos, best_cos


def _np_soft_histogram(times, delta, origin, width):
    p = (times + delta - origin) / width
    k = np.floor(p).astype(np.int64)
    f = p - k
    keep = f > 0.0
    bins = np.concatenate([k, k[keep] + 1])
    mass = np.concatenate([1.0 - f, f[keep]])
    order = np.argsort(bins, kind="stable")
    bins = bins[order]
    mass = mass[order]
    if bins.shape[0] == 0:
        return bins, mass
    boundaries = np.flatnonzero(np.concatenate([[True], bins[1:] != bins[:-1]]))
    summed = np.add.reduceat(mass, boundaries)
    return bins[boundaries], summed


def _np_sparse_cosine(b1, m1, b2, m2):
    n1 = float(np.dot(m1, m1))
    n2 = float(np.dot(m2, m2))
    if n1 == 0.0 or n2 == 0.0:
        return 0.0
    common, i1, i2 = np.intersect1d(b1, b2, assume_unique=True, return_indices=True)
    dot = float(np.dot(m1[i1], m2[i2]))
    return dot / math.sqrt(n1 * n2)


def _np_offset_sweep(times1, times2, width, offsets):
    best_pos = 0
    best_cos = -1.0
    for pos in range(offsets.shape[0]):
        delta = float(offsets[pos])
        origin = min(float(times1[0]), float(times2[0]) + delta)
        b1, m1 = _np_soft_histogram(times1, 0.0, origin, width)
        b2, m2 = _np_soft_histogram(times2, delta, origin, width)
        cos = _np_sparse_cosine(b1, m1, b2, m2)
        if cos > best_cos:
            best_cos = cos
            best_pos = pos
    return best_pos, best_cos


if NUMBA_ENABLED:
    _nb_build_incidence = njit(cache=True)(_py_build_incidence)
    _nb_bin_counts = njit(cache=True)(_py_bin_counts)
    _nb_soft_histogram = njit(cache=True)(_py_soft_histogram)
    _nb_sparse_cosine = njit(cache=True)(_py_sparse_cosine)

    def _make_nb_offset_sweep():
        soft_histogram = _nb_soft_histogram
        sparse_cosine = _nb_sparse_cosine

        def sweep(times1, times2, width, offsets):
            best_pos = 0
            best_cos = -1.0
            for pos in range(offsets.shape[0]):
                delta = offsets[pos]
                origin = times1[0]
                if times2[0] + delta < origin:
                    origin = times2[0] + delta
                b1, m1 = soft_histogram(times1, 0.0, origin, width)
                b2, m2 = soft_histogram(times2, delta, origin, width)
                cos = sparse_cosine(b1, m1, b2, m2)
                if cos > best_cos:
                    best_cos = cos
                    best_pos = pos
            return best_pos, best_cos

        return njit(cache=True)(sweep)

    _nb_offset_sweep = _make_nb_offset_sweep()

    build_incidence = _nb_build_incidence
    bin_counts = _nb_bin_counts
    offset_sweep = _nb_offset_sweep
else:
    build_incidence = _np_build_incidence
    bin_counts = _np_bin_counts
    offset_sweep = _np_offset_sweep


IMPLEMENTATIONS = {
    "numpy": {
        "build_incidence": _np_build_incidence,
        "bin_counts": _np_bin_counts,
        "offset_sweep": _np_offset_sweep,
    },
    "python": {
        "build_incidence": _py_build_incidence,
        "bin_counts": _py_bin_counts,
        "offset_sweep": _py_offset_sweep,
    },
}
if NUMBA_ENABLED:
    IMPLEMENTATIONS["numba"] = {
        "build_incidence": _nb_build_incidence,
        "bin_counts": _nb_bin_counts,
        "offset_sweep": _nb_offset_sweep,
    }


def warmup() -> None:
    """Trigger JIT compilation on tiny inputs so timed runs exclude it."""
    t = np.array([0.0, 1.0])
    build_incidence(np.array([0], dtype=np.int64), np.array([1], dtype=np.int64), 2)
    bin_counts(t, 0.0, 1.0)
    offset_sweep(t, t, 1.0, np.array([0.0]))
