"""Shannon entropy, conditional entropy, and Transfer Entropy kernels, plus
the all-pairs TE matrix driver.

All quantities are in bits. Probabilities are plug-in maximum-likelihood
(counts / total); zero-probability terms are skipped.
"""

from __future__ import annotations

import numpy as np

from .discretize import BinningSpec, SymbolSeries, joint_counts, symbolize_panel
from .errors import LengthMismatch, TooShort
from .matrices import LabeledMatrix

MAX_HISTORY = 4


def _entropy_from_counts(counts, total):
    c = np.asarray(counts, dtype=float)
    c = c[c > 0]
    p = c / total
    return float(-(p @ np.log2(p)))


def shannon_entropy(sym: SymbolSeries) -> float:
    """H = -sum p_i log2 p_i over realized symbols."""
    if len(sym) == 0:
        raise TooShort("empty symbol series")
    counts = np.bincount(sym.symbols)
    return _entropy_from_counts(counts, len(sym))


def conditional_entropy(x: SymbolSeries, y: SymbolSeries) -> float:
    """H(X|Y) = -sum p(i,j) log2 [p(i,j)/p(j)]."""
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} vs {len(y)}")
    if len(x) == 0:
        raise TooShort("empty symbol series")
    B = max(x.spec.n_bins, y.spec.n_bins) + 1
    pair = np.bincount(x.symbols * B + y.symbols)
    marg = np.bincount(y.symbols)
    T = len(x)
    return _entropy_from_counts(pair, T) - _entropy_from_counts(marg, T)


def self_conditional_entropy(x: SymbolSeries) -> float:
    """H(X_future | X_past) from the (i_{n+1}, i_n) pair distribution."""
    if len(x) < 2:
        raise TooShort("need at least 2 symbols")
    return _self_cond_entropy_raw(x.symbols, x.spec.n_bins)


def _self_cond_entropy_raw(sym, n_bins):
    B = n_bins + 1
    pair = np.bincount(sym[1:] * B + sym[:-1])
    marg = np.bincount(sym[:-1])
    T1 = len(sym) - 1
    return _entropy_from_counts(pair, T1) - _entropy_from_counts(marg, T1)


def transfer_entropy(dest: SymbolSeries, source: SymbolSeries, k: int = 1, l: int = 1) -> float:
    """Information the source's l-history adds about the destination's next
    symbol beyond the destination's own k-history."""
    if len(dest) != len(source):
        raise LengthMismatch(f"{len(dest)} vs {len(source)}")
    if not (1 <= k <= MAX_HISTORY and 1 <= l <= MAX_HISTORY):
        raise ValueError(f"k and l must be in 1..{MAX_HISTORY}")
    if len(dest) <= max(k, l) + 1:
        raise TooShort(f"length {len(dest)} too short for k={k}, l={l}")
    if k == 1 and l == 1:
        B = max(dest.spec.n_bins, source.spec.n_bins)
        return _te_k1(dest.symbols - 1, source.symbols - 1, B)
    return _te_general(dest, source, k, l)


def _te_general(dest, source, k, l):
    jc = joint_counts(dest, source, k, l)
    c_dest = jc.marginal({"dest"})
    c_next_dest = jc.marginal({"next", "dest"})
    c_dest_src = jc.marginal({"dest", "source"})
    total = jc.total
    te = 0.0
    for (nxt, dh, sh), c in jc.table.items():
        num = c * c_dest[dh]
        den = c_next_dest[(nxt,) + dh] * c_dest_src[dh + sh]
        te += c * np.log2(num / den)
    return float(te / total)


def _te_k1(x0based, y0based, B):
    """Closed-form k=l=1 kernel on 0-based symbol arrays."""
    x1 = x0based[1:]
    x0 = x0based[:-1]
    y0 = y0based[:-1]
    T1 = len(x1)
    pair = x1 * B + x0
    c2 = np.bincount(pair, minlength=B * B)
    c1 = np.bincount(x0, minlength=B)
    c3 = np.bincount(pair * B + y0, minlength=B * B * B)
    csd = c3.reshape(B, B, B).sum(axis=0)
    nz = np.nonzero(c3)[0]
    c3nz = c3[nz].astype(float)
    i1i0 = nz // B
    j0 = nz % B
    i0 = i1i0 % B
    ratio = (c3nz * c1[i0]) / (c2[i1i0].astype(float) * csd[i0, j0])
    return float((c3nz @ np.log2(ratio)) / T1)


def te_matrix(panel, spec: BinningSpec, k: int = 1, l: int = 1) -> LabeledMatrix:
    """All-pairs Transfer Entropy; entry [s][d] is the flow from column s into
    column d. The diagonal is the self-flow, computed like any other entry."""
    sym = symbolize_panel(panel.values, spec) - 1
    values = te_matrix_from_symbols(sym, spec.n_bins, k=k, l=l)
    meta = {"k": k, "l": l, "binning": _spec_meta(spec)}
    return LabeledMatrix(panel.labels, values, "te", meta=meta)


def te_matrix_from_symbols(sym0, n_bins, k=1, l=1):
    """TE matrix over the columns of a T x N 0-based symbol array."""
    if not (1 <= k <= MAX_HISTORY and 1 <= l <= MAX_HISTORY):
        raise ValueError(f"k and l must be in 1..{MAX_HISTORY}")
    if k == 1 and l == 1:
        return _te_matrix_k1(sym0, n_bins)
    T, N = sym0.shape
    spec = BinningSpec(lo=0.0, hi=float(n_bins), width=1.0, n_bins=n_bins)
    cols = [SymbolSeries(sym0[:, j] + 1, spec) for j in range(N)]
    out = np.empty((N, N))
    for d in range(N):
        for s in range(N):
            out[s, d] = _te_general(cols[d], cols[s], k, l)
    return out


def _te_matrix_k1(sym0, B):
    X = np.ascontiguousarray(sym0)
    X1 = X[1:]
    X0 = X[:-1]
    T1, N = X0.shape
    B2 = B * B
    B3 = B2 * B
    out = np.empty((N, N))
    log2 = np.log2
    for d in range(N):
        pair = X1[:, d] * B + X0[:, d]
        c2 = np.bincount(pair, minlength=B2).astype(float)
        c1 = np.bincount(X0[:, d], minlength=B).astype(float)
        log_c2 = np.where(c2 > 0, log2(np.maximum(c2, 1.0)), 0.0)
        log_c1 = np.where(c1 > 0, log2(np.maximum(c1, 1.0)), 0.0)
        base = pair * B
        for s in range(N):
            c3 = np.bincount(base + X0[:, s], minlength=B3)
            csd = c3.reshape(B, B, B).sum(axis=0)
            nz = np.nonzero(c3)[0]
            c3nz = c3[nz].astype(float)
            i1i0 = nz // B
            j0 = nz % B
            i0 = i1i0 % B
            terms = log2(c3nz) + log_c1[i0] - log_c2[i1i0] - log2(csd[i0, j0])
            out[s, d] = (c3nz @ terms) / T1
    return out


def _spec_meta(spec):
    return {
        "lo": spec.lo,
        "hi": spec.hi,
        "width": spec.width,
        "n_bins": spec.n_bins,
        "mode": spec.mode,
    }
