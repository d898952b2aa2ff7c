"""The fixed corpus of generated double complexes used by the acceptance suite."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .dcomplex import DoubleComplex, FieldSpec, GenConfig, generate

MODES = ("tensor", "exact_rows", "direct_sum", "zero")
FIELDS = (FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(None))
SIZE = 200
MAX_GRID = 5
DIM_MAX = 6


@dataclass(frozen=True)
class Instance:
    index: int
    cfg: GenConfig

    @property
    def name(self) -> str:
        c = self.cfg
        return f"{self.index:03d}-{c.mode}-{c.field}-{c.rows}x{c.cols}"

    @property
    def dc(self) -> DoubleComplex:
        return generate(self.cfg)


def corpus_configs(size: int = SIZE) -> list[GenConfig]:
    """Modes cycle fastest, then fields; grid sizes come from a seeded RNG."""
    rng = random.Random("lhomdc-corpus")
    out = []
    for idx in range(size):
        mode = MODES[idx % len(MODES)]
        f = FIELDS[(idx // len(MODES)) % len(FIELDS)]
        rows, cols = rng.randint(1, MAX_GRID), rng.randint(1, MAX_GRID)
        out.append(GenConfig(mode, rows, cols, DIM_MAX, f, idx))
    return out


@lru_cache(maxsize=4)
def corpus(size: int = SIZE) -> tuple[Instance, ...]:
    return tuple(Instance(i, cfg) for i, cfg in enumerate(corpus_configs(size)))
