import numpy as np

from ggsflow.chain import ChainComplex
from ggsflow.model import Generator


def labelled(complex_):
    """``(generator labels, nonzero cells)`` of a complex."""
    return [str(g) for g in complex_.generators], complex_.nonzero()


def complex_from_table(table):
    labels, cells = table
    gens = tuple(Generator.parse(x) for x in labels)
    pos = {x: i for i, x in enumerate(labels)}
    m = np.zeros((len(gens), len(gens)), dtype=np.int64)
    for (row, col), v in cells.items():
        m[pos[row], pos[col]] = v
    return ChainComplex(gens, m)
