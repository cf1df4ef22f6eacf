"""Brute-force beamsplitter on Fock states, used as an independent oracle.

The input |m>|n> is mapped by a' = sqrt(eta) a + sqrt(1-eta) b and
b' = -sqrt(1-eta) a + sqrt(eta) b; expanding the creation-operator
polynomial gives the amplitude of each photon count in the first port.
Inputs diagonal in the number basis mix these count laws linearly.
"""

from math import comb, factorial, sqrt

import numpy as np


def fock_count_law(m, n, eta):
    s, c = sqrt(eta), sqrt(1 - eta)
    total = m + n
    amp = np.zeros(total + 1)
    for i in range(m + 1):
        for j in range(n + 1):
            amp[i + j] += comb(m, i) * s ** i * c ** (m - i) * comb(n, j) * (-c) ** j * s ** (n - j)
    k = np.arange(total + 1)
    norm = np.array([sqrt(factorial(int(a)) * factorial(total - int(a)) / (factorial(m) * factorial(n))) for a in k])
    return (amp * norm) ** 2


def fock_beamsplit(p, q, eta):
    p, q = np.asarray(p, float), np.asarray(q, float)
    out = np.zeros(p.size + q.size - 1)
    for m, pm in enumerate(p):
        for n, qn in enumerate(q):
            if pm * qn:
                out[: m + n + 1] += pm * qn * fock_count_law(m, n, eta)
    return out
