from __future__ import annotations

import numpy as np
import pytest

from backnet.model import LinkModels, ProblemInstance, Topology


def make_problem(positions, K=1, alpha=0.95, D_t=1.0, **model_kwargs) -> ProblemInstance:
    return ProblemInstance(
        Topology.from_positions(positions), K, alpha, D_t, LinkModels(**model_kwargs)
    )


def random_problem(rng: np.random.Generator, M: int, K: int, side: float = 5000.0) -> ProblemInstance:
    return make_problem(rng.uniform(0, side, size=(M, 2)), K=K)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
