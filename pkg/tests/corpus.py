"""Fixed scenario corpus: every entry satisfies the nondefectivity inequality chain
with ambient dimension at most 3000.  Moment families never satisfy the chain at
this scale (N(N-1) exceeds binom(n+4, 5) until n is far beyond desk size), so
they are exercised by the certification examples instead.
"""

from nondefect.bundle import FatPoints, Froberg, Partition

CORPUS = [
    # Froberg: single degree, linear multipliers
    (Froberg(3, (2,), 1), (1,)),
    (Froberg(4, (2,), 1), (1,)),
    (Froberg(5, (2,), 1), (1,)),
    (Froberg(6, (2,), 1), (1,)),
    (Froberg(8, (2,), 1), (1,)),
    (Froberg(10, (2,), 1), (1,)),
    (Froberg(12, (2,), 1), (19,)),
    (Froberg(14, (2,), 1), (26,)),
    (Froberg(8, (3,), 1), (30,)),
    # Froberg: two degrees
    (Froberg(6, (4, 5), 1), (0, 1)),
    (Froberg(6, (4, 5), 1), (1, 3)),
    (Froberg(7, (4, 5), 1), (0, 1)),
    (Froberg(7, (4, 5), 1), (1, 3)),
    (Froberg(8, (4, 5), 1), (0, 1)),
    (Froberg(8, (4, 5), 1), (1, 3)),
    # fat points: double points
    (FatPoints(3, 6, (2,)), (6,)),
    (FatPoints(3, 8, (2,)), (12,)),
    (FatPoints(3, 10, (2,)), (19,)),
    (FatPoints(4, 4, (2,)), (4,)),
    (FatPoints(4, 6, (2,)), (17,)),
    (FatPoints(5, 5, (2,)), (20,)),
    (FatPoints(6, 4, (2,)), (15,)),
    (FatPoints(8, 3, (2,)), (7,)),
    (FatPoints(10, 3, (2,)), (12,)),
    # fat points: mixed multiplicities
    (FatPoints(3, 12, (3, 2)), (5, 10)),
    (FatPoints(4, 7, (3, 2)), (2, 17)),
    (FatPoints(4, 7, (3, 2)), (1, 5)),
    (FatPoints(4, 7, (3, 2, 1)), (1, 3, 20)),
    (FatPoints(6, 6, (3, 2)), (1, 50)),
    # partition rank: tensor rank and several components
    (Partition(8, 3, (1, 1, 1)), (2,)),
    (Partition(10, 3, (1, 1, 1)), (4,)),
    (Partition(10, 3, (1, 1, 1)), (8,)),
    (Partition(12, 3, (1, 1, 1)), (17,)),
    (Partition(14, 3, (1, 1, 1)), (29,)),
    (Partition(3, 5, (1, 1, 1, 2)), (1, 0, 0, 1)),
    (Partition(3, 5, (1, 1, 1, 2)), (0, 1, 1, 0)),
]


def corpus_id(entry) -> str:
    fam, alpha = entry
    params = ",".join(f"{k}={v}" for k, v in fam.describe().items() if k != "kind")
    return f"{fam.kind}[{params}]a={list(alpha)}"
