"""
Sub-commands of the command-line tool.

Every module exposes ``run(config) -> ReportDocument``; result files are written
through the report service and listed in the document's outputs.
"""
from typing import List

import numpy as np

from app.constants import Command, HamiltonianKind, ModelSelection
from app.models.config import RunConfig
from app.models.report import ReportDocument


def new_document(command: Command, config: RunConfig) -> ReportDocument:
    """Empty report carrying the run header."""
    return ReportDocument(command=command.value, seed=config.seed, units=config.units_label())


def selected_models(config: RunConfig) -> List[HamiltonianKind]:
    """Models named by ``config.model`` (all three for 'all')."""
    if config.model == ModelSelection.ALL:
        return list(HamiltonianKind)
    return [HamiltonianKind(config.model.value)]


def random_momenta(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    """
    Momenta drawn uniformly from the ball |p| <= radius.

    Args:
        rng: Seeded generator
        count: Number of momenta
        radius: Ball radius

    Returns:
        np.ndarray: Shape (count, 3)
    """
    directions = rng.normal(size=(count, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.uniform(size=count) ** (1.0 / 3.0)
    return directions * radii[:, None]
