"""Slow reference computations used to check the fast ones."""

import itertools
import math
import random


def det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * det([r[:j] + r[j + 1:] for r in rows[1:]])
               for j in range(n) if rows[0][j])


def determinantal_factors(M):
    """d_k = D_k / D_{k-1} with D_k the gcd of all k x k minors."""
    m, n = len(M), len(M[0]) if M else 0
    D = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = math.gcd(g, det([[M[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        D.append(g)
    return [D[i] // D[i - 1] for i in range(1, len(D))]


def random_matrices(count=200, seed=7):
    rng = random.Random(seed)
    for _ in range(count):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        lo = rng.choice([-2, -4, -9])
        M = [[rng.randint(lo, -lo) for _ in range(n)] for _ in range(m)]
        if rng.random() < 0.3:  # low-rank cases
            M[-1] = [2 * v for v in M[0]]
        yield M
