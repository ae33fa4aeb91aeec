"""Random presentations of the same tiling, for invariance tests."""

import random

from polylink.tcell import TCell, change_basis, mirror, relabel, rotate_rotations

UNIMODULAR = (((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1)), ((1, 0), (-1, 1)),
              ((2, 1), (1, 1)), ((0, -1), (1, 0)), ((-1, 0), (0, -1)), ((3, 2), (1, 1)))


def random_variant(cell: TCell, rng: random.Random) -> tuple[TCell, str]:
    """Relabel, flip, re-root rotations, change basis and maybe mirror ``cell``."""
    perm = list(range(cell.n_edges))
    rng.shuffle(perm)
    flips = [rng.random() < 0.5 for _ in perm]
    labels = [f"x{i}" for i in rng.sample(range(100), cell.n_edges)]
    shifts = [rng.randrange(6) for _ in cell.vertices]
    matrix = rng.choice(UNIMODULAR)
    out = relabel(cell, perm, flips, labels)
    out = rotate_rotations(out, shifts)
    out = change_basis(out, matrix)
    mirrored = rng.random() < 0.5
    if mirrored:
        out = mirror(out)
    return out, f"perm={perm} flips={flips} shifts={shifts} basis={matrix} mirror={mirrored}"
