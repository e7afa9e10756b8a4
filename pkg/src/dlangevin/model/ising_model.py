"""
Ising / Potts lattice model.

f(x) = -sum_n theta[n, x_n] - lambda * sum_{(i,j) in E} [x_i == x_j]
on an open-boundary 4-neighbour square lattice of side L (N = L^2).
C = 2 is the Ising model, C > 2 the Potts model.
"""

from typing import Any, Literal, Optional
import logging

import numpy as np
from pydantic import ConfigDict, Field, field_validator, model_validator
from scipy import sparse

from .base import EnergyModel, ModelParams, as_float_array
from .types import ModelFamily


def square_lattice_edges(side: int) -> np.ndarray:
    """
    Undirected edges of an open side x side lattice, each stored once.

    Sites are numbered row-major; returns an (E, 2) array with i < j.
    """
    idx = np.arange(side * side).reshape(side, side)
    right = np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()], axis=1)
    down = np.stack([idx[:-1, :].ravel(), idx[1:, :].ravel()], axis=1)
    return np.concatenate([right, down], axis=0).astype(np.int64)


class IsingPottsParams(ModelParams):
    """Lattice side, external field, coupling strength and edge list."""

    model_config = ConfigDict(populate_by_name=True)

    family: Literal[ModelFamily.ISING] = ModelFamily.ISING
    side: int = Field(..., ge=1, description="Lattice side length L")
    theta: np.ndarray = Field(..., description="External field, N x C")
    lam: float = Field(..., alias="lambda", description="Coupling strength")
    edges: np.ndarray = Field(..., description="Lattice edges, E x 2")

    @model_validator(mode="before")
    @classmethod
    def fill_edges(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("edges") is None and "side" in data:
            data = dict(data)
            data["edges"] = square_lattice_edges(int(data["side"]))
        return data

    @field_validator("theta", mode="before")
    @classmethod
    def validate_theta(cls, v: Any) -> np.ndarray:
        return as_float_array(v, 2, "theta")

    @field_validator("edges", mode="before")
    @classmethod
    def validate_edges(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.int64).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def validate_lattice(self) -> "IsingPottsParams":
        n = self.side * self.side
        if self.theta.shape[0] != n or self.theta.shape[1] < 2:
            raise ValueError(
                f"theta must be {n} x C (C >= 2) for side {self.side}, "
                f"got {self.theta.shape}"
            )
        expected = {tuple(e) for e in square_lattice_edges(self.side).tolist()}
        given = [tuple(sorted(e)) for e in self.edges.tolist()]
        if len(given) != len(set(given)) or set(given) != expected:
            raise ValueError("edges must be the square lattice, each edge stored once")
        return self

    @property
    def n_sites(self) -> int:
        return int(self.theta.shape[0])

    @property
    def n_categories(self) -> int:
        return int(self.theta.shape[1])


class IsingPottsModel(EnergyModel[IsingPottsParams]):
    """Pairwise lattice model; single-site moves are linear in the embedding."""

    def __init__(
        self, params: IsingPottsParams, logger: Optional[logging.Logger] = None
    ):
        super().__init__(params, logger)
        n = params.n_sites
        e = params.edges
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        self._adjacency = sparse.csr_matrix(
            (np.ones(rows.size), (rows, cols)), shape=(n, n)
        )

    @property
    def adjacency(self) -> sparse.csr_matrix:
        return self._adjacency

    def _energies(self, X: np.ndarray) -> np.ndarray:
        theta = self.params.theta
        unary = theta[np.arange(self.n_sites), X].sum(axis=1)
        e = self.params.edges
        agree = (X[:, e[:, 0]] == X[:, e[:, 1]]).sum(axis=1)
        return -unary - self.params.lam * agree

    def _neighbour_counts(self, onehot: np.ndarray) -> np.ndarray:
        return np.asarray(self._adjacency @ onehot)

    def _log_ratio_table(self, x: np.ndarray) -> np.ndarray:
        theta = self.params.theta
        local = theta + self.params.lam * self._neighbour_counts(self.one_hot(x))
        current = local[np.arange(self.n_sites), x]
        return local - current[:, None]

    def _energy_gradient(self, onehot: np.ndarray) -> np.ndarray:
        return -self.params.theta - self.params.lam * self._neighbour_counts(onehot)
