"""Random boundary matrices with the sign structure of orientable GGS complexes.

Instances are strictly upper triangular over {-1, 0, 1} with zero square;
every index-1 column and every index-1 row of the index-2 block is either
empty or exactly one +1 and one -1.
"""
from __future__ import annotations

import random
from typing import List

import numpy as np

from .chain import ChainComplex
from .model import Generator


def _signed_pair(rng: random.Random):
    return (1, -1) if rng.random() < 0.5 else (-1, 1)


def random_structured_complex(rng: random.Random, max_size: int = 12,
                              min_size: int = 1) -> ChainComplex:
    n = rng.randint(min_size, max_size)
    cuts = sorted(rng.randint(0, n) for _ in range(2))
    n0, n1, n2 = cuts[0], cuts[1] - cuts[0], n - cuts[1]

    d1 = [[0] * n1 for _ in range(n0)]
    for col in range(n1):
        if n0 >= 2 and rng.random() < 0.6:
            a, b = rng.sample(range(n0), 2)
            sa, sb = _signed_pair(rng)
            d1[a][col], d1[b][col] = sa, sb

    d2 = [[0] * n2 for _ in range(n1)]
    # plant parallel saddle pairs: equal boundaries, so opposite rows cancel
    if n1 >= 2 and n2 >= 2 and rng.random() < 0.6:
        i, j = rng.sample(range(n1), 2)
        for row in d1:
            row[j] = row[i]
        c, e = rng.sample(range(n2), 2)
        s = rng.choice((1, -1))
        d2[i][c], d2[i][e] = s, -s
        d2[j][c], d2[j][e] = -s, s
    for i in range(n1):
        if any(d2[i]) or n2 < 2 or rng.random() < 0.5:
            continue
        c, e = rng.sample(range(n2), 2)
        sa, sb = _signed_pair(rng)
        d2[i][c], d2[i][e] = sa, sb

    # drop rows until the composite vanishes
    while True:
        bad = [c for c in range(n2)
               if any(sum(d1[a][i] * d2[i][c] for i in range(n1)) for a in range(n0))]
        if not bad:
            break
        c = rng.choice(bad)
        culprits = [i for i in range(n1) if d2[i][c] and any(d1[a][i] for a in range(n0))]
        d2[rng.choice(culprits)] = [0] * n2

    gens = ([Generator(f"a{i}", 0, 1) for i in range(n0)]
            + [Generator(f"s{i}", 1, 1) for i in range(n1)]
            + [Generator(f"r{i}", 2, 1) for i in range(n2)])
    m = np.zeros((n, n), dtype=np.int64)
    for a in range(n0):
        for i in range(n1):
            m[a, n0 + i] = d1[a][i]
    for i in range(n1):
        for c in range(n2):
            m[n0 + i, n0 + n1 + c] = d2[i][c]
    return ChainComplex(tuple(gens), m)


def random_complexes(seed: int, count: int, max_size: int = 12) -> List[ChainComplex]:
    rng = random.Random(seed)
    return [random_structured_complex(rng, max_size) for _ in range(count)]
