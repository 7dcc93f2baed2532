"""Gauss-Kronrod rules on [-1, 1] at arbitrary precision.

The Kronrod extension of the n-point Gauss-Legendre rule is built from its
Jacobi matrix (Laurie's algorithm for the modified recurrence coefficients).
Eigenvalues are located in double precision and then polished by Newton's
method on the three-term recurrence in the working precision, so the rule
is accurate to the full context precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .context import _mp_for

__all__ = ["GKRule", "gauss_kronrod"]


@dataclass(frozen=True)
class GKRule:
    """Nodes and weights of a (2n+1)-point Kronrod rule with its embedded
    n-point Gauss rule; ``gauss_index`` picks the Gauss nodes out of
    ``nodes``."""

    n: int
    nodes: tuple
    kronrod_weights: tuple
    gauss_index: tuple
    gauss_weights: tuple


def _legendre_recurrence(m, count):
    # monic Legendre: alpha_k = 0, beta_0 = 2, beta_k = k^2 / (4k^2 - 1)
    a = [m.zero] * count
    b = [m.mpf(2)] + [m.mpf(k * k) / (4 * k * k - 1) for k in range(1, count)]
    return a, b


def _laurie(m, n, a0, b0):
    """Recurrence coefficients of the Jacobi-Kronrod matrix of order 2n+1."""
    a = [m.zero] * (2 * n + 1)
    b = [m.zero] * (2 * n + 1)
    for k in range(0, (3 * n) // 2 + 1):
        a[k] = a0[k]
    for k in range(0, -(-3 * n // 2) + 1):
        b[k] = b0[k]
    size = n // 2 + 2
    s = [m.zero] * size
    t = [m.zero] * size
    t[1] = b[n + 1]
    for mm in range(0, n - 1):
        ks = list(range((mm + 1) // 2, -1, -1))
        terms = [(a[k + n + 1] - a[mm - k]) * t[k + 1] + b[k + n + 1] * s[k] - b[mm - k] * s[k + 1]
                 for k in ks]
        u = m.zero
        for k, term in zip(ks, terms):
            u += term
            s[k + 1] = u
        s, t = t, s
    for j in range(n // 2, -1, -1):
        s[j + 1] = s[j]
    for mm in range(n - 1, 2 * n - 2):
        ks = list(range(mm + 1 - n, (mm - 1) // 2 + 1))
        js = [n - 1 - (mm - k) for k in ks]
        terms = [-(a[k + n + 1] - a[mm - k]) * t[j + 1] - b[k + n + 1] * s[j + 1] + b[mm - k] * s[j + 2]
                 for k, j in zip(ks, js)]
        u = m.zero
        for j, term in zip(js, terms):
            u += term
            s[j + 1] = u
        j = js[-1] if js else n - 1 - (mm - (mm + 1 - n))
        k = (mm + 1) // 2
        if mm % 2 == 0:
            a[k + n + 1] = a[k] + (s[j + 1] - b[k + n + 1] * s[j + 2]) / t[j + 2]
        else:
            b[k + n + 1] = s[j + 1] / s[j + 2]
        s, t = t, s
    a[2 * n] = a[n - 1] - b[2 * n] * s[1] / t[1]
    return a, b


def _eval_recurrence(m, a, b, x):
    """Monic orthogonal polynomial of degree len(a), its derivative and
    sum_k p_k(x)^2 / (b_1 ... b_k)."""
    p_prev, p = m.zero, m.one
    dp_prev, dp = m.zero, m.zero
    norm = m.one
    acc = m.one
    for k in range(len(a)):
        p_next = (x - a[k]) * p - (b[k] * p_prev if k else 0)
        dp_next = p + (x - a[k]) * dp - (b[k] * dp_prev if k else 0)
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
        if k + 1 < len(a):
            norm *= b[k + 1]
            acc += p * p / norm
    return p, dp, acc


def _rule_from_jacobi(m, a, b):
    size = len(a)
    J = np.zeros((size, size))
    for k in range(size):
        J[k, k] = float(a[k])
        if k + 1 < size:
            J[k, k + 1] = J[k + 1, k] = float(m.sqrt(b[k + 1]))
    guesses = np.sort(np.linalg.eigvalsh(J))
    stop = m.mpf(2) ** (-m.prec + 8)
    nodes, weights = [], []
    for g in guesses:
        x = m.mpf(float(g))
        for _ in range(60):
            p, dp, _ = _eval_recurrence(m, a, b, x)
            dx = p / dp
            x -= dx
            if abs(dx) <= stop:
                break
        _, _, acc = _eval_recurrence(m, a, b, x)
        nodes.append(x)
        weights.append(b[0] / acc)
    return nodes, weights


@lru_cache(maxsize=16)
def gauss_kronrod(n: int, bits: int) -> GKRule:
    """The (2n+1)-point Kronrod rule extending n-point Gauss-Legendre."""
    m = _mp_for(bits + 32)
    a0, b0 = _legendre_recurrence(m, 2 * n + 2)
    ka, kb = _laurie(m, n, a0, b0)
    knodes, kweights = _rule_from_jacobi(m, ka, kb)
    gnodes, gweights = _rule_from_jacobi(m, a0[:n], b0[:n])
    gauss_index = []
    for g in gnodes:
        i = min(range(len(knodes)), key=lambda j: abs(knodes[j] - g))
        gauss_index.append(i)
    out = _mp_for(bits)
    return GKRule(
        n=n,
        nodes=tuple(out.mpf(x) for x in knodes),
        kronrod_weights=tuple(out.mpf(w) for w in kweights),
        gauss_index=tuple(gauss_index),
        gauss_weights=tuple(out.mpf(w) for w in gweights),
    )
