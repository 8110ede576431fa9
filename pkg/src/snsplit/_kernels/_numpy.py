"""Pure-numpy kernels: prefix-sum evaluation of the CUSUM scan statistics.

Both scans are algebraic expansions of the squared-CUSUM sums into prefix
arrays (sum of P[t], t*P[t], P[t]^2 plus closed-form integer-power sums),
giving O(N) for the single-change scan and O(1) per pair for the
two-window scan.  The literal double-loop transcriptions live in the test
suite as oracles.

Positions whose self-normalizer is zero up to floating-point noise are
excluded: V is compared against VTOL_REL times the demeaned second moment
of the input, which is orders of magnitude above the cancellation residue
of an exactly-degenerate window but far below any genuine normalizer.
"""

import numpy as np

VTOL_REL = 1e-12


def _prefix(y):
    """Demeaned prefix sums and the exclusion threshold scale."""
    y = np.asarray(y, dtype=np.float64)
    yc = y - y.mean()
    var = float(np.mean(yc * yc))
    P = np.empty(y.size + 1)
    P[0] = 0.0
    np.cumsum(yc, out=P[1:])
    return P, var


def sn_ratios(y):
    """Per-position ratios T(k)/sqrt(V(k)) for k = 1..N-1.

    Returns an array of length N-1; excluded positions are NaN.
    """
    N = y.shape[0]
    P, var = _prefix(y)
    tol = VTOL_REL * var

    t = np.arange(1, N + 1, dtype=np.float64)
    A = np.cumsum(P[1:] ** 2)            # A[k-1] = sum_{t<=k} P[t]^2
    B = np.cumsum(t * P[1:])             # B[k-1] = sum_{t<=k} t*P[t]

    k = np.arange(1, N, dtype=np.float64)
    Pk = P[1:N]
    csum = k * (k + 1.0) * (2.0 * k + 1.0) / 6.0
    fwd = A[: N - 1] - 2.0 * (Pk / k) * B[: N - 1] + (Pk / k) ** 2 * csum

    # Q[t] = S_{t,N} = P[N] - P[t-1], t = 1..N (0-based index t-1)
    Q = P[N] - P[:N]
    w = N - np.arange(1, N + 1, dtype=np.float64) + 1.0
    sq = np.concatenate([np.cumsum((Q * Q)[::-1])[::-1], [0.0]])
    swq = np.concatenate([np.cumsum((w * Q)[::-1])[::-1], [0.0]])
    d = N - k
    W = P[N] - Pk
    bwd = (
        sq[1:N]
        - 2.0 * (W / d) * swq[1:N]
        + (W / d) ** 2 * d * (d + 1.0) * (2.0 * d + 1.0) / 6.0
    )

    V = (fwd + bwd) / float(N) ** 2
    T = (Pk - k * P[N] / N) / np.sqrt(N)
    ratios = np.full(N - 1, np.nan)
    ok = V > tol
    ratios[ok] = T[ok] / np.sqrt(V[ok])
    return ratios


def sn_stat_batch(Y):
    """Row-wise supremum of sn_ratios over a batch; NaN for degenerate rows."""
    R = Y.shape[0]
    out = np.empty(R)
    for i in range(R):
        r = sn_ratios(Y[i])
        out[i] = np.nan if np.all(np.isnan(r)) else np.nanmax(r)
    return out


def _sq_int(d):
    return d * (d + 1.0) * (2.0 * d + 1.0) / 6.0


def multi_scan_pairs(y, l1_vals, l2_vals):
    """Maximize |T^f/sqrt(V^f)| and |T^b/sqrt(V^b)| over scan pairs.

    l1_vals / l2_vals are ascending 1-based candidate positions; the pair
    set is their product intersected with l2 - l1 > 1.  Returns
    (fmax, fl1, fl2, bmax, bl1, bl2); a max of -inf means every pair on
    that side was skipped.

    All window sums are anchored locally (partial sums restarted at l1, or
    at the right end for the tail of the backward scan) before expanding
    the squared-CUSUM sums, so no expansion mixes large whole-series
    partial sums with small window contrasts.
    """
    N = y.shape[0]
    P, var = _prefix(y)
    tol = VTOL_REL * var
    PN = P[N]

    # forward left part (anchored at 1): depends on l1 only
    t = np.arange(1, N + 1, dtype=np.float64)
    cA = np.concatenate(([0.0], np.cumsum(P[1:] ** 2)))
    cB = np.concatenate(([0.0], np.cumsum(t * P[1:])))

    # backward right part (anchored at N): depends on l2 only
    # G[i] = S_{i,N}, suffix sums of G^2 and (N-i+1)*G over i = 1..N
    G = PN - P[:N]                       # index i-1 holds S_{i,N}
    w_tail = N - np.arange(1, N + 1, dtype=np.float64) + 1.0
    sG2 = np.concatenate([np.cumsum((G * G)[::-1])[::-1], [0.0]])
    swG = np.concatenate([np.cumsum((w_tail * G)[::-1])[::-1], [0.0]])

    l2_all = np.asarray(l2_vals, dtype=np.int64)

    fmax = -np.inf
    fl1 = fl2 = -1
    bmax = -np.inf
    bl1 = bl2 = -1

    for l1 in np.asarray(l1_vals, dtype=np.int64):
        l2 = l2_all[l2_all >= l1 + 2]
        if l2.size == 0:
            continue
        l1f = float(l1)
        l2f = l2.astype(np.float64)
        d = l2f - l1f

        fw = (
            cA[l1]
            - 2.0 * (P[l1] / l1f) * cB[l1]
            + (P[l1] / l1f) ** 2 * _sq_int(l1f)
        )

        # local sums restarted at l1: Q[j] = S_{l1+1, l1+j} (j = 0..N-l1),
        # Q2[j] = S_{l1, l1+j-1+1} = P[l1-1+j] - P[l1-1] (j = 0..N-l1+1)
        j = np.arange(N - l1 + 1, dtype=np.float64)
        Q = P[l1:] - P[l1]
        cq = np.cumsum(Q)
        cq2 = np.cumsum(Q * Q)
        cvq = np.cumsum(j * Q)
        Q2 = P[l1 - 1 :] - P[l1 - 1]
        w2 = np.arange(Q2.size, dtype=np.float64)   # weight i - l1 + 1
        c2 = np.cumsum(Q2 * Q2)
        cw2 = np.cumsum(w2 * Q2)

        di = l2 - l1   # window length, also the local index of l2

        # forward (1, l1, l2): residual sum over u = l1..l2-1 with
        # a_u = Q[d] - Q[u-l1], b_u = l2 - u
        W = Q[di]
        sq = cq[di - 1]
        sq2 = cq2[di - 1]
        svq = cvq[di - 1]
        sa2 = d * W**2 - 2.0 * W * sq + sq2
        sab = W * d * (d + 1.0) / 2.0 - (d * sq - svq)
        rf = sa2 - 2.0 * (W / d) * sab + (W / d) ** 2 * _sq_int(d)
        Vf = (fw + rf) / l2f**2
        Tf = (P[l1] - (l1f / l2f) * P[l2]) / np.sqrt(l2f)
        okf = Vf > tol
        if np.any(okf):
            rat = np.abs(Tf[okf]) / np.sqrt(Vf[okf])
            jj = int(np.argmax(rat))
            if rat[jj] > fmax:
                fmax = float(rat[jj])
                fl1 = int(l1)
                fl2 = int(l2[okf][jj])

        # backward (l1, l2, N): left part over i = l1..l2-1 with weights
        # i-l1+1 against M = S_{l1, l2-1} = Q2[d]
        nn = float(N - l1 + 1)
        M = Q2[di]
        lb = c2[di] - 2.0 * (M / d) * cw2[di] + (M / d) ** 2 * _sq_int(d)

        d2 = N - l2f + 1.0
        Gl2 = G[l2 - 1]
        rb = sG2[l2 - 1] - 2.0 * (Gl2 / d2) * swG[l2 - 1] + (
            Gl2 / d2
        ) ** 2 * _sq_int(d2)

        Vb = (lb + rb) / nn**2
        Tb = ((PN - P[l2 - 1]) - (d2 / nn) * (PN - P[l1 - 1])) / np.sqrt(nn)
        okb = Vb > tol
        if np.any(okb):
            rat = np.abs(Tb[okb]) / np.sqrt(Vb[okb])
            jj = int(np.argmax(rat))
            if rat[jj] > bmax:
                bmax = float(rat[jj])
                bl1 = int(l1)
                bl2 = int(l2[okb][jj])

    return fmax, fl1, fl2, bmax, bl1, bl2


def multi_scan_batch(Y, l1_vals, l2_vals):
    """Row-wise G^M = forward max + backward max; NaN for degenerate rows."""
    R = Y.shape[0]
    out = np.empty(R)
    for i in range(R):
        fmax, _, _, bmax, _, _ = multi_scan_pairs(Y[i], l1_vals, l2_vals)
        out[i] = np.nan if (fmax == -np.inf or bmax == -np.inf) else fmax + bmax
    return out
