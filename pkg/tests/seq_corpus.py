"""Synthetic graded sequences in three families, shared by the stability tests."""
import random

from equistab.intlinalg import FgAbGroup, identity, zeros
from equistab.stability import GradedSequence


def _steps(groups, maps_fn):
    return GradedSequence(groups, [maps_fn(n, groups[n], groups[n + 1]) for n in range(len(groups) - 1)])


def _drop(A, B):
    """Keep the first coordinates, drop the rest (A, B free or with equal torsion tails)."""
    F = zeros(B.ngens, A.ngens)
    for i in range(min(A.ngens, B.ngens)):
        F[i, i] = 1
    return F


def stable_sequence(rng):
    """Ranks grow by inclusion until s, then identity maps."""
    s, N = rng.randint(0, 3), rng.randint(5, 8)
    tors = tuple(sorted(rng.sample([2, 4, 8], rng.randint(0, 1))))
    groups = [FgAbGroup(min(n, s), tors) for n in range(N + 1)]
    return _steps(groups, lambda n, A, B: _block_inclusion(A, B)), True


def _block_inclusion(A, B):
    F = zeros(B.ngens, A.ngens)
    for i in range(A.free):
        F[i, i] = 1
    for j in range(len(A.torsion)):
        F[B.free + j, A.free + j] = 1
    return F


def eventually_surjective_sequence(rng):
    """Surjections that are not injective for n < s (free rank drops, or Z onto Z/m), then isomorphisms."""
    s, N = rng.randint(1, 3), rng.randint(5, 8)
    if rng.random() < 0.5:
        top = rng.randint(1, 2)
        groups = [FgAbGroup(top + max(s - n, 0)) for n in range(N + 1)]
        return _steps(groups, lambda n, A, B: _drop(A, B)), True
    m = rng.choice([2, 3, 4])
    groups = [FgAbGroup(1) if n < s else FgAbGroup(0, (m,)) for n in range(N + 1)]
    return _steps(groups, lambda n, A, B: identity(1) if A.ngens == B.ngens else _drop(A, B)), True


def never_stable_sequence(rng):
    kind = rng.choice(["double", "grow", "zero"])
    N = rng.randint(4, 8)
    if kind == "double":
        c = rng.choice([2, 3, 5])
        groups = [FgAbGroup(1)] * (N + 1)
        return _steps(groups, lambda n, A, B: identity(1) * c), False
    if kind == "grow":
        groups = [FgAbGroup(n) for n in range(N + 1)]
        return _steps(groups, lambda n, A, B: _drop(A, B)), False
    groups = [FgAbGroup(0, (2,))] * (N + 1)
    return _steps(groups, lambda n, A, B: zeros(1, 1)), False


def corpus(seed=0, per_family=12):
    rng = random.Random(seed)
    out = []
    for family in (stable_sequence, eventually_surjective_sequence, never_stable_sequence):
        for _ in range(per_family):
            seq, expected = family(rng)
            out.append((family.__name__, seq, expected))
    return out
