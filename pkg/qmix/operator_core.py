# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.

Dense complex matrix primitives shared by every other module: Hermitian
checks, eigendecompositions, spectral matrix functions, the column-stacking
vectorization of superoperators and the superoperator exponential.
"""

import logging

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

from .errors import DimensionError, NotHermitianError, SpecError


__all__ = ("Superoperator", "as_matrix", "hermitian", "eig_hermitian",
           "matrix_function", "default_eig_floor", "check_dims", "vec",
           "devectorize",
           "vectorize", "superop_from_kraus", "heisenberg_from_kraus",
           "choi_matrix", "expm", "trace_norm", "matrix_to_json",
           "matrix_from_json", "random_hermitian", "random_density",
           "random_pure_state", "haar_unitary")

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
EIG_FLOOR_REL = 1e-14
MAX_DIM = 32


def as_matrix(a, name="matrix"):
    """Returns ``a`` as a finite square complex128 array.

    Parameters
    ----------

    a: array_like
        Candidate matrix

    name: :class:`str`
        Used in error messages
    """

    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty square matrix, "
                             f"got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise DimensionError(f"{name} has dimension {m.shape[0]} beyond "
                             f"the supported ceiling {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def hermitian(a, name="matrix", tol=HERMITIAN_TOL):
    """Checks ``a`` is Hermitian and returns its exact symmetrization.

    The check is ``max|A - A^H| <= tol * max|A|``.
    """

    m = as_matrix(a, name)
    scale = np.max(np.abs(m)) if m.size else 0.0
    if np.max(np.abs(m - m.conj().T)) > tol * max(scale, 1e-300):
        raise NotHermitianError(f"{name} is not Hermitian")
    return (m + m.conj().T) / 2


def check_dims(*mats):
    """Common dimension of square matrices, or DimensionError."""
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def eig_hermitian(a):
    """Eigendecomposition of a Hermitian matrix.

    Returns
    -------

    (eigenvalues, eigenvectors)
        Real eigenvalues in ascending order and the unitary whose columns are
        the matching eigenvectors, so that ``A = V diag(w) V^H``.
    """

    w, v = scipy.linalg.eigh((a + a.conj().T) / 2)
    return w, v


def default_eig_floor(eigenvalues):
    return EIG_FLOOR_REL * float(np.max(np.abs(eigenvalues)))


def matrix_function(a, f, eig_floor="relative", eig=None):
    """Applies a real scalar function to a Hermitian matrix spectrally.

    Parameters
    ----------

    a: :class:`numpy.ndarray`
        Hermitian matrix

    f: callable
        Vectorized real function, applied to the eigenvalues

    eig_floor: :class:`float`, ``"relative"`` or ``None``
        Eigenvalues below the floor are clamped to it before ``f`` is
        applied. The default ``"relative"`` floor is ``1e-14 * max|lambda|``.
        ``None`` disables clamping, as needed for indefinite matrices.

    eig: (eigenvalues, eigenvectors)
        Precomputed decomposition of ``a``
    """

    w, v = eig if eig is not None else eig_hermitian(a)
    if isinstance(eig_floor, str):
        if eig_floor != "relative":
            raise ValueError(f"unknown eig_floor {eig_floor!r}")
        eig_floor = default_eig_floor(w)
    if eig_floor is not None:
        w = np.maximum(w, eig_floor)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w), dtype=np.float64)
    if not np.all(np.isfinite(fw)):
        raise FloatingPointError("matrix function is not finite on the "
                                 "spectrum")
    out = (v * fw) @ v.conj().T
    return (out + out.conj().T) / 2


def trace_norm(a):
    """``tr|A|`` of a Hermitian matrix."""
    return float(np.sum(np.abs(scipy.linalg.eigvalsh((a + a.conj().T) / 2))))


def vec(x):
    """Column-stacking vectorization."""
    return np.asarray(x).reshape(-1, order="F")


def devectorize(v, dim):
    return np.asarray(v).reshape(dim, dim, order="F")


class Superoperator():
    """A linear map on d x d matrices stored as a d^2 x d^2 matrix acting on
    column-stacked operators, so that ``vec(A X B) = (B^T kron A) vec(X)``.

    Instances are read-only once built.

    Attributes
    ----------

    dim: :class:`int`
        Dimension d of the underlying matrix algebra

    matrix: :class:`numpy.ndarray`
        The d^2 x d^2 representation
    """

    __slots__ = ("dim", "matrix")

    def __init__(self, matrix, dim=None):
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2:
            raise DimensionError(f"superoperator matrix must be 2-D, got "
                                 f"shape {m.shape}")
        d = int(round(np.sqrt(m.shape[0]))) if dim is None else int(dim)
        if m.shape != (d * d, d * d):
            raise DimensionError(f"superoperator matrix shape {m.shape} does "
                                 f"not match dimension {d}")
        m.setflags(write=False)
        self.dim = d
        self.matrix = m

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim * dim), dim)

    def __call__(self, x):
        x = np.asarray(x)
        if x.shape != (self.dim, self.dim):
            raise DimensionError(f"operand shape {x.shape} does not match "
                                 f"dimension {self.dim}")
        return devectorize(self.matrix @ vec(x), self.dim)

    def __matmul__(self, other):
        if not isinstance(other, Superoperator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError("dimension mismatch")
        return Superoperator(self.matrix @ other.matrix, self.dim)

    def __add__(self, other):
        if not isinstance(other, Superoperator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError("dimension mismatch")
        return Superoperator(self.matrix + other.matrix, self.dim)

    def __sub__(self, other):
        if not isinstance(other, Superoperator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError("dimension mismatch")
        return Superoperator(self.matrix - other.matrix, self.dim)

    def __mul__(self, scalar):
        return Superoperator(scalar * self.matrix, self.dim)

    __rmul__ = __mul__

    def __neg__(self):
        return Superoperator(-self.matrix, self.dim)

    def adjoint(self):
        """Hilbert-Schmidt adjoint, the conjugate transpose of the matrix."""
        return Superoperator(self.matrix.conj().T, self.dim)

    def distance(self, other):
        """Max-norm distance to another superoperator."""
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def __repr__(self):
        return f"<Superoperator dim={self.dim}>"


def vectorize(terms, dim=None):
    """Builds the superoperator of ``X -> sum_k A_k X B_k``.

    Parameters
    ----------

    terms: iterable of (A, B)
        Left and right multiplication factors. ``None`` stands for the
        identity.

    dim: :class:`int`
        Required when every factor is ``None`` or ``terms`` is empty
    """

    terms = list(terms)
    for a, b in terms:
        for m in (a, b):
            if m is not None:
                d = np.asarray(m).shape[0]
                if dim is None:
                    dim = d
                elif d != dim or np.asarray(m).shape != (dim, dim):
                    raise DimensionError(f"factor of shape "
                                         f"{np.asarray(m).shape} in a map on "
                                         f"{dim}x{dim} matrices")
    if dim is None:
        raise DimensionError("cannot infer dimension of an empty map")

    eye = np.eye(dim, dtype=np.complex128)
    out = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for a, b in terms:
        a = eye if a is None else np.asarray(a, dtype=np.complex128)
        b = eye if b is None else np.asarray(b, dtype=np.complex128)
        out += np.kron(b.T, a)
    return Superoperator(out, dim)


def superop_from_kraus(kraus):
    """Schroedinger picture channel ``rho -> sum_i K_i rho K_i^H``."""
    return vectorize([(k, k.conj().T) for k in kraus])


def heisenberg_from_kraus(kraus):
    """Heisenberg picture channel ``f -> sum_i K_i^H f K_i``."""
    return vectorize([(k.conj().T, k) for k in kraus])


def choi_matrix(superop):
    """``sum_ij |i><j| kron S(|i><j|)``."""
    d = superop.dim
    choi = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=np.complex128)
            unit[i, j] = 1.0
            choi += np.kron(unit, superop(unit))
    return choi


def expm(superop, t=1.0):
    """``exp(t S)`` by scaling and squaring with a degree 13 Pade
    approximant.

    Raises
    ------

    FloatingPointError
        When ``t S`` is too large for the result to be representable
    """

    t = float(t)
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    if t == 0.0:
        return Superoperator.identity(superop.dim)
    with np.errstate(over="ignore", invalid="ignore"):
        out = scipy.linalg.expm(t * superop.matrix)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError(f"exp(tS) overflows at t={t}")
    return Superoperator(out, superop.dim)


def matrix_to_json(a):
    """Nested row-major list of ``[re, im]`` pairs."""
    a = np.asarray(a, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(data, field="matrix"):
    """Parses nested ``[re, im]`` pairs. Plain real numbers are accepted as
    entries with zero imaginary part."""

    if not isinstance(data, list) or not data:
        raise SpecError("expected a non-empty list of rows", field=field)
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != len(data):
            raise SpecError(f"row {i} must have {len(data)} entries",
                            field=f"{field}[{i}]")
        out = []
        for j, entry in enumerate(row):
            if isinstance(entry, (int, float)) and not isinstance(entry,
                                                                  bool):
                out.append(complex(entry, 0.0))
            elif (isinstance(entry, list) and len(entry) == 2
                  and all(isinstance(x, (int, float)) for x in entry)):
                out.append(complex(entry[0], entry[1]))
            else:
                raise SpecError("entries must be [re, im] pairs",
                                field=f"{field}[{i}][{j}]")
        rows.append(out)
    m = np.array(rows, dtype=np.complex128)
    if not np.all(np.isfinite(m)):
        raise SpecError("non-finite entry", field=field)
    return m


def random_hermitian(dim, rng, scale=1.0):
    """Gaussian Hermitian matrix with entries of standard deviation
    ``scale``."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g + g.conj().T) / 2


def haar_unitary(dim, rng):
    if dim == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(dim, random_state=rng)


def random_pure_state(dim, rng):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_density(dim, rng, rank=None):
    """Random density matrix of the given rank, full rank by default."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real
