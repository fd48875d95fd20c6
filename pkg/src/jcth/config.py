"""Global limits and the default tolerance set.

Every report records the ``Tolerances`` instance it was produced with, so the
defaults below are part of the reproducibility contract.
"""

from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass

DEFAULT_MAX_DIM = 8192

_max_dim = DEFAULT_MAX_DIM


def max_dim() -> int:
    return _max_dim


def set_max_dim(n: int) -> None:
    global _max_dim
    if int(n) < 1:
        raise ValueError("max_dim must be positive")
    _max_dim = int(n)


@contextlib.contextmanager
def dimension_limit(n: int):
    old = _max_dim
    set_max_dim(n)
    try:
        yield
    finally:
        set_max_dim(old)


@dataclass(frozen=True)
class Tolerances:
    # |Im λ| <= real * (1 + |λ|) counts as real
    real: float = 1e-9
    # conjugate pairing defect, relative to max(1, max|λ|)
    pair: float = 1e-8
    pseudoherm: float = 1e-12
    quasi_herm: float = 1e-10
    isospectral: float = 1e-9
    closed_form: float = 1e-10
    gram: float = 1e-10
    # eta-Gram of a full eigenbasis after per-cluster orthonormalisation
    eta_gram: float = 1e-8
    completeness: float = 1e-9
    superalgebra: float = 1e-11
    eig: float = 1e-10
    # top-Fock-level weight above which an eigenvector is a truncation artefact
    boundary_weight: float = 1e-8
    # eigenvalues closer than this (times scale) are handled as one cluster
    cluster: float = 1e-8

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict | None) -> "Tolerances":
        if not d:
            return cls()
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise KeyError(sorted(unknown)[0])
        return cls(**{k: float(v) for k, v in d.items()})

    def merged(self, overrides: dict | None) -> "Tolerances":
        if not overrides:
            return self
        base = self.to_dict()
        base.update({k: float(v) for k, v in overrides.items()})
        return Tolerances.from_dict(base)
