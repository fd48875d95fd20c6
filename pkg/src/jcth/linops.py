"""Dense complex linear algebra used by every other module.

Operators are plain ``numpy.ndarray`` objects of dtype complex128 and shape
``(dim, dim)``; ``as_operator`` is the single validation gate.  Products of
large, mostly-zero operators (the many-particle supercharges reach dim 4096)
are routed through ``scipy.sparse`` internally, but every function here takes
and returns dense arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse import csgraph

from . import config
from .errors import (
    ConvergenceError,
    DimensionLimitError,
    PositivityError,
    PreconditionError,
    ShapeError,
)

_SPARSE_MIN_DIM = 256
_SPARSE_MAX_DENSITY = 0.05


def as_operator(a) -> np.ndarray:
    """Validate ``a`` as a square, finite operator and return it as complex128.

    Sparse input stays sparse (CSR).
    """
    if sp.issparse(a):
        m = sp.csr_matrix(a, dtype=np.complex128)
        if m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ShapeError(f"operator must be a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m.data)):
            raise ShapeError("operator has non-finite entries")
        return m
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ShapeError(f"operator must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeError("operator has non-finite entries")
    return m


def check_dim(n: int) -> int:
    if n > config.max_dim():
        raise DimensionLimitError(n, config.max_dim())
    return n


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def fro(a) -> float:
    if sp.issparse(a):
        return float(sp.linalg.norm(a))
    return float(np.linalg.norm(a))


def rel_residual(x: np.ndarray, ref: np.ndarray) -> float:
    """``||x - ref||_F / max(1, ||ref||_F)``."""
    return fro(x - ref) / max(1.0, fro(ref))


def identity(n: int) -> np.ndarray:
    return np.eye(check_dim(n), dtype=np.complex128)


def eye_like(a):
    if sp.issparse(a):
        return sp.identity(a.shape[0], dtype=np.complex128, format="csr")
    return np.eye(a.shape[0], dtype=np.complex128)


def is_diagonal(a) -> bool:
    if sp.issparse(a):
        return a.count_nonzero() == np.count_nonzero(a.diagonal())
    return np.count_nonzero(a) == np.count_nonzero(np.diagonal(a))


def dense(a) -> np.ndarray:
    return a.toarray() if sp.issparse(a) else np.asarray(a)


def _sparse_or_none(a: np.ndarray):
    if a.shape[0] < _SPARSE_MIN_DIM:
        return None
    if np.count_nonzero(a) > _SPARSE_MAX_DENSITY * a.size:
        return None
    return sp.csr_matrix(a)


def mul(*ops: np.ndarray) -> np.ndarray:
    """Matrix product of two or more operators.

    Large, sparse-looking factors are multiplied in CSR form; the result is
    identical up to floating-point summation order.
    """
    if len(ops) == 1:
        return ops[0]
    if any(sp.issparse(o) for o in ops):
        # sparse in, sparse out
        return reduce(lambda x, y: x @ y, [sp.csr_matrix(o) for o in ops]).tocsr()
    sparse = [_sparse_or_none(o) for o in ops]
    if all(s is not None for s in sparse):
        out = reduce(lambda x, y: x @ y, sparse)
        return out.toarray()
    return reduce(np.matmul, ops)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return mul(a, b) - mul(b, a)


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return mul(a, b) + mul(b, a)


def _kron2(a, b):
    if sp.issparse(a) or sp.issparse(b):
        return sp.kron(a, b, format="csr")
    return np.kron(a, b)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; the left factor is the slow index.

    Sparse if either factor is sparse.
    """
    n = a.shape[0] * b.shape[0]
    check_dim(n)
    return _kron2(a, b)


def kron_all(*ops: np.ndarray) -> np.ndarray:
    n = int(np.prod([o.shape[0] for o in ops]))
    check_dim(n)
    return reduce(_kron2, ops)


def embed(op: np.ndarray, slot: int, dims: list[int], sparse: bool = False) -> np.ndarray:
    """Place ``op`` in tensor slot ``slot`` with identities elsewhere."""
    if sparse:
        factors = [sp.identity(d, dtype=np.complex128, format="csr") for d in dims]
        factors[slot] = sp.csr_matrix(op)
    else:
        factors = [np.eye(d, dtype=np.complex128) for d in dims]
        factors[slot] = op
    return kron_all(*factors)


def compress(a: np.ndarray, keep) -> np.ndarray:
    """Restrict ``a`` to the rows and columns listed (or masked) in ``keep``."""
    idx = np.flatnonzero(keep) if np.asarray(keep).dtype == bool else np.asarray(keep)
    return a[np.ix_(idx, idx)]


# ---------------------------------------------------------------------------
# eigenproblems

@dataclass(frozen=True)
class Eigensystem:
    """Eigenvalues with right and left eigenvectors (as matrix columns).

    ``left[:, k]`` is an eigenvector of ``A^H`` for ``conj(values[k])``.
    """

    values: np.ndarray
    right: np.ndarray
    left: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def right_residuals(self, a: np.ndarray) -> np.ndarray:
        r = a @ self.right - self.right * self.values
        return np.linalg.norm(r, axis=0) / np.linalg.norm(self.right, axis=0)

    def left_residuals(self, a: np.ndarray) -> np.ndarray:
        r = dagger(a) @ self.left - self.left * self.values.conj()
        return np.linalg.norm(r, axis=0) / np.linalg.norm(self.left, axis=0)


def sort_order(values: np.ndarray) -> np.ndarray:
    """Indices sorting by real part, then imaginary part."""
    return np.lexsort((values.imag, values.real))


def eig_general(a) -> Eigensystem:
    """All eigenvalues of a general complex matrix with left and right vectors.

    LAPACK ``zgeev`` (balancing, Hessenberg reduction, shifted QR, back
    substitution on the Schur form for both vector sets).  Results are sorted
    by (Re, Im) and every vector column has unit 2-norm.
    """
    m = dense(as_operator(a))
    if not np.any(m.imag):
        # real input goes through the real driver: complex eigenvalues come in exact conjugate pairs
        m = m.real.copy()
    try:
        w, vl, vr = sla.eig(m, left=True, right=True, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        try:
            partial = np.linalg.eigvals(m)
        except np.linalg.LinAlgError:
            partial = None
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}", partial) from exc
    order = sort_order(w)
    w, vl, vr = w[order], vl[:, order], vr[:, order]
    vr = vr / np.linalg.norm(vr, axis=0)
    vl = vl / np.linalg.norm(vl, axis=0)
    return Eigensystem(values=w, right=vr, left=vl)


def _require_hermitian(a: np.ndarray, tol: float = 1e-12) -> None:
    defect = fro(a - dagger(a))
    if defect > tol * max(1.0, fro(a)):
        raise PreconditionError(f"matrix is not Hermitian (defect {defect:.3e})")


def herm_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition with a shortcut for diagonal input."""
    if is_diagonal(a):
        d = np.real(np.diagonal(a)).copy()
        order = np.argsort(d, kind="stable")
        vecs = np.zeros(a.shape, dtype=np.complex128)
        vecs[order, np.arange(len(d))] = 1.0
        return d[order], vecs
    w, v = np.linalg.eigh(a)
    return w, v


def components(a) -> list[np.ndarray]:
    """Index sets of the connected components of the sparsity graph of ``a``."""
    pattern = sp.csr_matrix(a) if not sp.issparse(a) else a.tocsr()
    pattern = abs(pattern) > 0
    count, labels = csgraph.connected_components(pattern, directed=False)
    order = np.argsort(labels, kind="stable")
    bounds = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, bounds)


def _block_function(m, idx, f):
    sub = dense(m[np.ix_(idx, idx)] if not sp.issparse(m) else m[idx][:, idx])
    w, v = np.linalg.eigh(sub)
    out = (v * f(w)) @ dagger(v)
    return 0.5 * (out + dagger(out))


def herm_function(a, f):
    """Apply a scalar function to a Hermitian matrix via its eigenbasis.

    Works block by block on the connected components of the sparsity
    pattern; sparse input gives sparse output.
    """
    m = as_operator(a)
    _require_hermitian(m)
    if is_diagonal(m):
        d = np.real(m.diagonal())
        out = np.asarray(f(d)).astype(np.complex128)
        return sp.diags(out, format="csr") if sp.issparse(m) else np.diag(out)
    if not sp.issparse(m) and m.shape[0] < _SPARSE_MIN_DIM:
        return _block_function(m, np.arange(m.shape[0]), f)
    rows, cols, vals = [], [], []
    for idx in components(m):
        blk = _block_function(m, idx, f)
        r, c = np.nonzero(blk)
        rows.append(idx[r])
        cols.append(idx[c])
        vals.append(blk[r, c])
    n = m.shape[0]
    out = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                        shape=(n, n))
    return out if sp.issparse(m) else out.toarray()


def herm_sqrt(a) -> np.ndarray:
    """Positive square root of a Hermitian positive-definite matrix."""
    m = as_operator(a)
    _require_hermitian(m)
    w, _ = herm_eigh(dense(m))
    if w[0] <= 1e-12 * fro(m):
        raise PositivityError(float(w[0]))
    return herm_function(m, np.sqrt)


def residual_pseudoherm(h, eta) -> float:
    """Normalised defect ``||h^H eta - eta h||_F / max(1, ||eta||_F ||h||_F)``."""
    if not sp.issparse(h):
        h = np.asarray(h)
    if not sp.issparse(eta):
        eta = np.asarray(eta)
    if h.shape != eta.shape or len(h.shape) != 2:
        raise ShapeError(f"shape mismatch {h.shape} vs {eta.shape}")
    scale = max(1.0, fro(eta) * fro(h))
    if is_diagonal(eta):
        d = eta.diagonal()
        if sp.issparse(h):
            dm = sp.diags(d, format="csr")
            defect = dagger(h) @ dm - dm @ h
        else:
            defect = dagger(h) * d[None, :] - d[:, None] * h
    else:
        defect = mul(dagger(h), eta) - mul(eta, h)
    return fro(defect) / scale
