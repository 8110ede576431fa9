"""Numba-compiled kernels mirroring the pure-numpy implementations.

Same prefix-sum algebra as _numpy.py; scalar loops instead of vectorized
expressions, plus prange batch entry points for the Monte Carlo engine.
Each batch row is independent, so results do not depend on the thread
count.
"""

import numpy as np
from numba import njit, prange

VTOL_REL = 1e-12


@njit(cache=True)
def _prefix(y):
    N = y.shape[0]
    mean = 0.0
    for i in range(N):
        mean += y[i]
    mean /= N
    P = np.empty(N + 1)
    P[0] = 0.0
    var = 0.0
    acc = 0.0
    for i in range(N):
        c = y[i] - mean
        var += c * c
        acc += c
        P[i + 1] = acc
    return P, var / N


@njit(cache=True)
def sn_ratios(y):
    N = y.shape[0]
    P, var = _prefix(y)
    tol = VTOL_REL * var

    A = np.empty(N + 1)
    B = np.empty(N + 1)
    A[0] = 0.0
    B[0] = 0.0
    for t in range(1, N + 1):
        A[t] = A[t - 1] + P[t] * P[t]
        B[t] = B[t - 1] + t * P[t]

    # suffix sums over Q[t] = P[N] - P[t-1]
    sq = np.zeros(N + 1)
    swq = np.zeros(N + 1)
    for t in range(N, 0, -1):
        q = P[N] - P[t - 1]
        w = N - t + 1.0
        sq[t - 1] = sq[t] + q * q
        swq[t - 1] = swq[t] + w * q

    ratios = np.full(N - 1, np.nan)
    for k in range(1, N):
        kf = float(k)
        fwd = (
            A[k]
            - 2.0 * (P[k] / kf) * B[k]
            + (P[k] / kf) ** 2 * kf * (kf + 1.0) * (2.0 * kf + 1.0) / 6.0
        )
        df = float(N - k)
        W = P[N] - P[k]
        bwd = (
            sq[k]
            - 2.0 * (W / df) * swq[k]
            + (W / df) ** 2 * df * (df + 1.0) * (2.0 * df + 1.0) / 6.0
        )
        V = (fwd + bwd) / (float(N) * float(N))
        if V > tol:
            T = (P[k] - kf * P[N] / N) / np.sqrt(float(N))
            ratios[k - 1] = T / np.sqrt(V)
    return ratios


@njit(cache=True, parallel=True)
def sn_stat_batch(Y):
    R = Y.shape[0]
    out = np.empty(R)
    for i in prange(R):
        r = sn_ratios(Y[i])
        best = -np.inf
        seen = False
        for j in range(r.shape[0]):
            if not np.isnan(r[j]):
                seen = True
                if r[j] > best:
                    best = r[j]
        out[i] = best if seen else np.nan
    return out


@njit(cache=True)
def _sq_int(d):
    return d * (d + 1.0) * (2.0 * d + 1.0) / 6.0


@njit(cache=True)
def multi_scan_pairs(y, l1_vals, l2_vals):
    # All window sums are anchored locally (restarted at l1, or at the
    # right end for the tail of the backward scan) before expanding the
    # squared-CUSUM sums; running accumulators advance with l2 for fixed
    # l1, keeping the scan O(1) per pair.
    N = y.shape[0]
    P, var = _prefix(y)
    tol = VTOL_REL * var
    PN = P[N]

    # forward left part (anchored at 1): depends on l1 only
    cA = np.empty(N + 1)
    cB = np.empty(N + 1)
    cA[0] = 0.0
    cB[0] = 0.0
    for t in range(1, N + 1):
        cA[t] = cA[t - 1] + P[t] * P[t]
        cB[t] = cB[t - 1] + t * P[t]

    # backward right part (anchored at N): suffix sums over G[i] = S_{i,N}
    G = np.empty(N + 1)
    sG2 = np.zeros(N + 2)
    swG = np.zeros(N + 2)
    for i in range(N, 0, -1):
        g = PN - P[i - 1]
        G[i] = g
        sG2[i] = sG2[i + 1] + g * g
        swG[i] = swG[i + 1] + (N - i + 1.0) * g

    fmax = -np.inf
    fl1 = -1
    fl2 = -1
    bmax = -np.inf
    bl1 = -1
    bl2 = -1

    for a in range(l1_vals.shape[0]):
        l1 = l1_vals[a]
        l1f = float(l1)
        fw = (
            cA[l1]
            - 2.0 * (P[l1] / l1f) * cB[l1]
            + (P[l1] / l1f) ** 2 * _sq_int(l1f)
        )
        nn = float(N - l1 + 1)

        # running local sums over the middle window; cursor = next u to
        # absorb.  Forward terms use Q[u] = P[u] - P[l1] with local index
        # u - l1; backward-left terms use Q2[i] = P[i] - P[l1-1] with
        # weight i - l1 + 1.
        cursor = l1
        sq = 0.0      # sum Q[u],           u = l1..cursor-1
        sq2 = 0.0     # sum Q[u]^2
        svq = 0.0     # sum (u-l1)*Q[u]
        s2 = 0.0      # sum Q2[i]^2,        i = l1..cursor-1
        sw2 = 0.0     # sum (i-l1+1)*Q2[i]

        for b in range(l2_vals.shape[0]):
            l2 = l2_vals[b]
            if l2 < l1 + 2:
                continue
            while cursor < l2:
                q = P[cursor] - P[l1]
                sq += q
                sq2 += q * q
                svq += (cursor - l1) * q
                q2 = P[cursor] - P[l1 - 1]
                s2 += q2 * q2
                sw2 += (cursor - l1 + 1.0) * q2
                cursor += 1
            l2f = float(l2)
            d = l2f - l1f

            # forward (1, l1, l2)
            W = P[l2] - P[l1]
            sa2 = d * W * W - 2.0 * W * sq + sq2
            sab = W * d * (d + 1.0) / 2.0 - (d * sq - svq)
            rf = sa2 - 2.0 * (W / d) * sab + (W / d) ** 2 * _sq_int(d)
            Vf = (fw + rf) / (l2f * l2f)
            if Vf > tol:
                Tf = (P[l1] - (l1f / l2f) * P[l2]) / np.sqrt(l2f)
                rat = abs(Tf) / np.sqrt(Vf)
                if rat > fmax:
                    fmax = rat
                    fl1 = l1
                    fl2 = l2

            # backward (l1, l2, N)
            M = P[l2 - 1] - P[l1 - 1]
            lb = s2 - 2.0 * (M / d) * sw2 + (M / d) ** 2 * _sq_int(d)
            d2 = float(N - l2 + 1)
            rb = (
                sG2[l2]
                - 2.0 * (G[l2] / d2) * swG[l2]
                + (G[l2] / d2) ** 2 * _sq_int(d2)
            )
            Vb = (lb + rb) / (nn * nn)
            if Vb > tol:
                Tb = ((PN - P[l2 - 1]) - (d2 / nn) * (PN - P[l1 - 1])) / np.sqrt(nn)
                rat = abs(Tb) / np.sqrt(Vb)
                if rat > bmax:
                    bmax = rat
                    bl1 = l1
                    bl2 = l2

    return fmax, fl1, fl2, bmax, bl1, bl2


@njit(cache=True, parallel=True)
def multi_scan_batch(Y, l1_vals, l2_vals):
    R = Y.shape[0]
    out = np.empty(R)
    for i in prange(R):
        fmax, _, _, bmax, _, _ = multi_scan_pairs(Y[i], l1_vals, l2_vals)
        if fmax == -np.inf or bmax == -np.inf:
            out[i] = np.nan
        else:
            out[i] = fmax + bmax
    return out
