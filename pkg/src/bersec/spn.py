"""Error amplification by keyless substitution-permutation networks.

Two routes to the output BER after ``r`` rounds given input bit errors:

* ``ideal_ber`` - the exact weight recursion for ideal S-boxes satisfying the
  strict avalanche criterion (every nonzero output difference of an affected
  S-box equally likely). Kernel coefficients are assembled in exact integer
  arithmetic and only converted to floats once each alternating sum is done.
* ``simulate_spn_ber`` - Monte Carlo over a concrete SPN built from the AES
  S-box and a bit-transposition P-box, without key mixing.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from ._aes import SBOX

MAX_K = 512
BLOCK_TRIALS = 1024


class CapacityError(ValueError):
    """The geometry is beyond the configured size cap for exact recursion."""


class UnsupportedGeometryError(ValueError):
    pass


@dataclass(frozen=True)
class SpnGeometry:
    K: int
    B: int = 8
    r: int = 1

    def __post_init__(self):
        if self.K < 1 or self.B < 1:
            raise ValueError("K and B must be positive")
        if self.K % self.B:
            raise ValueError(f"K must be a multiple of B (K={self.K}, B={self.B})")
        if self.r < 0:
            raise ValueError("number of rounds must be nonnegative")

    @property
    def J(self):
        return self.K // self.B


@dataclass(frozen=True)
class ErrorWeightDist:
    """Distribution of the number of bit errors; ``probs[w - 1]`` is P(W = w)."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or np.any(p < 0.0) or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("weight distribution must be nonnegative and sum to 1")
        object.__setattr__(self, "probs", p)

    @property
    def K(self):
        return len(self.probs)

    def mean(self):
        return float(np.dot(np.arange(1, self.K + 1), self.probs))


def single_error_initial(K):
    probs = np.zeros(K)
    probs[0] = 1.0
    return ErrorWeightDist(probs)


def affected_boxes_counts(K, B):
    """Exact counts A1[l-1, w-1]: placements of w errors touching exactly l of J boxes."""
    J = K // B
    A1 = [[0] * K for _ in range(J)]
    for l in range(1, J + 1):
        m = J - l
        for w in range(1, K + 1):
            total = 0
            for i in range(m, J + 1):
                # comb(a, b) == 0 for b > a gives the (a choose b)^+ convention
                term = comb(i, m) * comb(J, i) * comb((J - i) * B, w)
                total += term if (i - m) % 2 == 0 else -term
            A1[l - 1][w - 1] = total
    return A1


def output_weight_counts(K, B):
    """Exact counts N[w-1, l-1]: nonzero differences on l boxes with total weight w."""
    J = K // B
    N = [[0] * J for _ in range(K)]
    for l in range(1, J + 1):
        for w in range(1, K + 1):
            total = 0
            for i in range(l + 1):
                term = comb(l, i) * comb((l - i) * B, w)
                total += -term if i % 2 else term
            N[w - 1][l - 1] = total
    return N


@lru_cache(maxsize=32)
def ideal_kernels(K, B, max_k=MAX_K):
    """Float kernels ``(f_L_given_W, f_W_given_L)`` of shapes (J, K) and (K, J)."""
    if K > max_k:
        raise CapacityError(f"K={K} exceeds the exact-recursion cap of {max_k}")
    if K % B:
        raise ValueError(f"K must be a multiple of B (K={K}, B={B})")
    J = K // B
    A1 = affected_boxes_counts(K, B)
    f_lw = np.empty((J, K))
    for w in range(1, K + 1):
        a2 = comb(K, w)
        col = [A1[l][w - 1] for l in range(J)]
        if sum(col) != a2:
            raise ArithmeticError(f"box-occupancy counts for w={w} do not sum to C(K, w)")
        f_lw[:, w - 1] = [c / a2 for c in col]
    N = output_weight_counts(K, B)
    f_wl = np.empty((K, J))
    nonzero = 2 ** B - 1
    for l in range(1, J + 1):
        den = nonzero ** l
        f_wl[:, l - 1] = [N[w][l - 1] / den for w in range(K)]
    f_lw.setflags(write=False)
    f_wl.setflags(write=False)
    return f_lw, f_wl


def ideal_round_transition(dist, geom, max_k=MAX_K):
    if dist.K != geom.K:
        raise ValueError(f"distribution covers K={dist.K}, geometry has K={geom.K}")
    f_lw, f_wl = ideal_kernels(geom.K, geom.B, max_k)
    q = f_wl @ (f_lw @ dist.probs)
    drift = abs(q.sum() - 1.0)
    if drift >= 1e-9:
        raise ArithmeticError(f"probability drift {drift:.3e} in the weight recursion")
    return ErrorWeightDist(q / q.sum())


def ideal_weight_dists(geom, initial=None, max_k=MAX_K):
    """Weight distributions after rounds 1..r."""
    dist = single_error_initial(geom.K) if initial is None else initial
    out = []
    for _ in range(geom.r):
        dist = ideal_round_transition(dist, geom, max_k)
        out.append(dist)
    return out


def ideal_ber(geom, initial=None, max_k=MAX_K):
    """Output BER after each of rounds 1..r for ideal S-boxes."""
    if geom.r < 1:
        raise ValueError("ideal_ber needs at least one round")
    return np.array([d.mean() / geom.K for d in ideal_weight_dists(geom, initial, max_k)])


# --- concrete AES S-box network ----------------------------------------------

def transpose_pbox(K, B):
    """Bit ``j`` of S-box ``i`` moves to position ``j * J + i``."""
    J = K // B
    pos = np.arange(K)
    return (pos % B) * J + pos // B


def spn_round(state, perm):
    """One keyless round (S-box layer then P-box) on a (trials, K/8) uint8 array."""
    sub = SBOX[state]
    bits = np.unpackbits(sub, axis=1)
    out = np.empty_like(bits)
    out[:, perm] = bits
    return np.packbits(out, axis=1)


def _simulate_block(geom, perm, seed, block, m):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    K, J = geom.K, geom.J
    x = rng.integers(0, 256, size=(m, J), dtype=np.uint8)
    flip = rng.integers(0, K, size=m)
    e = np.zeros((m, K), dtype=np.uint8)
    e[np.arange(m), flip] = 1
    y = x ^ np.packbits(e, axis=1)
    sums = np.zeros(geom.r + 1, dtype=np.int64)
    sq = np.zeros(geom.r + 1, dtype=np.int64)
    d = np.ones(m, dtype=np.int64)
    sums[0], sq[0] = m, m
    for k in range(1, geom.r + 1):
        x = spn_round(x, perm)
        y = spn_round(y, perm)
        d = np.unpackbits(x ^ y, axis=1).sum(axis=1, dtype=np.int64)
        sums[k] = d.sum()
        sq[k] = (d * d).sum()
    return sums, sq


def simulate_spn_ber(geom, trials, seed, workers=1):
    """Monte Carlo output BER for rounds 0..r with a single flipped input bit.

    Each block of ``BLOCK_TRIALS`` trials draws from a generator keyed by
    ``(seed, block index)``; per-round Hamming distances are accumulated as
    integers, so the result does not depend on ``workers``.

    Returns ``(ber, stderr)`` arrays of length ``r + 1``.
    """
    if geom.B != 8:
        raise UnsupportedGeometryError("only the 8-bit AES S-box is bundled (B must be 8)")
    if trials < 1:
        raise ValueError("trials must be positive")
    perm = transpose_pbox(geom.K, geom.B)
    blocks = [(b, min(BLOCK_TRIALS, trials - b * BLOCK_TRIALS))
              for b in range((trials + BLOCK_TRIALS - 1) // BLOCK_TRIALS)]

    def run(item):
        return _simulate_block(geom, perm, seed, *item)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(item) for item in blocks]
    sums = sum(p[0] for p in parts)
    sq = sum(p[1] for p in parts)
    mean_d = sums / trials
    ber = mean_d / geom.K
    if trials > 1:
        var = (sq - trials * mean_d ** 2) / (trials - 1)
        stderr = np.sqrt(np.maximum(var, 0.0) / trials) / geom.K
    else:
        stderr = np.full(geom.r + 1, np.nan)
    return ber, stderr


def spn_ber_lower(geom, method="ideal", trials=10_000, seed=0, workers=1):
    """BER floor after ``geom.r`` rounds when exactly one input bit is wrong."""
    if geom.r == 0:
        return 1.0 / geom.K
    if method == "ideal":
        return float(ideal_ber(geom)[-1])
    if method == "simulation":
        ber, _ = simulate_spn_ber(geom, trials, seed, workers)
        return float(ber[-1])
    raise ValueError(f"unknown method {method!r}")
