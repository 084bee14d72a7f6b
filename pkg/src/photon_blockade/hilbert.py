"""Operators on truncated photon x qubit x qubit tensor-product spaces.

Composite basis index convention: the LAST tensor factor varies fastest, so on
``[n_max + 1, 2, 2]`` the state ``|n, q1, q2>`` has index ``(n * 2 + q1) * 2 + q2``.
Qubit basis: index 0 is ``|g>``, index 1 is ``|e>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np


class InvalidDimensionError(ValueError):
    pass


class SpaceMismatchError(ValueError):
    pass


class DensityMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    trace: float = 1e-10
    min_eigenvalue: float = -1e-8
    # relative to max |H|
    hamiltonian_hermitian: float = 1e-12


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class HilbertSpace:
    subsystem_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.subsystem_dims)
        if not dims or any(d < 1 for d in dims):
            raise InvalidDimensionError(f"bad subsystem dimensions {self.subsystem_dims!r}")
        object.__setattr__(self, "subsystem_dims", dims)

    @property
    def total_dim(self) -> int:
        return prod(self.subsystem_dims)

    def index(self, *labels: int) -> int:
        """Composite index of the product state with the given per-factor labels."""
        if len(labels) != len(self.subsystem_dims):
            raise InvalidDimensionError("one label per subsystem required")
        idx = 0
        for lab, dim in zip(labels, self.subsystem_dims):
            if not 0 <= lab < dim:
                raise InvalidDimensionError(f"label {lab} outside 0..{dim - 1}")
            idx = idx * dim + lab
        return idx

    def basis(self, *labels: int) -> np.ndarray:
        vec = np.zeros(self.total_dim, dtype=complex)
        vec[self.index(*labels)] = 1.0
        return vec


def photon_qubits_space(n_max: int, n_qubits: int = 2) -> HilbertSpace:
    return HilbertSpace((n_max + 1,) + (2,) * n_qubits)


@dataclass(frozen=True, eq=False)
class Operator:
    space: HilbertSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        n = self.space.total_dim
        if mat.shape != (n, n):
            raise InvalidDimensionError(f"matrix shape {mat.shape} does not match dimension {n}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def dag(self) -> Operator:
        return Operator(self.space, self.matrix.conj().T)

    def _check(self, other: Operator) -> None:
        if not isinstance(other, Operator):
            raise TypeError(f"expected Operator, got {type(other).__name__}")
        if other.space != self.space:
            raise SpaceMismatchError(f"{self.space} vs {other.space}")

    def __add__(self, other: Operator) -> Operator:
        self._check(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: Operator) -> Operator:
        self._check(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self) -> Operator:
        return Operator(self.space, -self.matrix)

    def __mul__(self, scalar: complex) -> Operator:
        if isinstance(scalar, Operator):
            raise TypeError("use @ for operator products")
        return Operator(self.space, scalar * self.matrix)

    __rmul__ = __mul__

    def __matmul__(self, other: Operator) -> Operator:
        self._check(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def is_hermitian(self, rel_tol: float = DEFAULT_TOLERANCES.hamiltonian_hermitian) -> bool:
        scale = np.max(np.abs(self.matrix), initial=0.0)
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0) <= rel_tol * scale)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    space: HilbertSpace
    matrix: np.ndarray = field(repr=False)
    tol: Tolerances = DEFAULT_TOLERANCES

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        n = self.space.total_dim
        if mat.shape != (n, n):
            raise InvalidDimensionError(f"matrix shape {mat.shape} does not match dimension {n}")
        herm_err = np.max(np.abs(mat - mat.conj().T))
        if herm_err > self.tol.hermitian:
            raise DensityMatrixError(f"not Hermitian: max deviation {herm_err:.3e}")
        tr = np.trace(mat)
        if abs(tr - 1.0) > self.tol.trace:
            raise DensityMatrixError(f"trace {tr} differs from 1")
        lam = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0]
        if lam < self.tol.min_eigenvalue:
            raise DensityMatrixError(f"negative eigenvalue {lam:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_ket(cls, space: HilbertSpace, ket: np.ndarray) -> DensityMatrix:
        ket = np.asarray(ket, dtype=complex)
        ket = ket / np.linalg.norm(ket)
        return cls(space, np.outer(ket, ket.conj()))

    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()


def fock_ladder(n_max: int) -> Operator:
    """Truncated annihilation operator on ``n_max + 1`` Fock levels."""
    if n_max < 1:
        raise InvalidDimensionError(f"n_max must be >= 1, got {n_max}")
    mat = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)
    return Operator(HilbertSpace((n_max + 1,)), mat)


def qubit_lowering() -> Operator:
    """``|g><e|`` with ``|g>`` at index 0."""
    return Operator(HilbertSpace((2,)), np.array([[0.0, 1.0], [0.0, 0.0]]))


def identity(space: HilbertSpace) -> Operator:
    return Operator(space, np.eye(space.total_dim))


def embed(op: Operator, space: HilbertSpace, position: int) -> Operator:
    """Place a single-subsystem operator at ``position`` with identities elsewhere."""
    dims = space.subsystem_dims
    if not 0 <= position < len(dims):
        raise InvalidDimensionError(f"position {position} out of range for {dims}")
    if op.space.total_dim != dims[position]:
        raise InvalidDimensionError(
            f"operator dimension {op.space.total_dim} != subsystem dimension {dims[position]}"
        )
    left = prod(dims[:position])
    right = prod(dims[position + 1:])
    mat = np.kron(np.kron(np.eye(left), op.matrix), np.eye(right))
    return Operator(space, mat)


def tensor(*ops: Operator) -> Operator:
    mat = np.eye(1, dtype=complex)
    dims: list[int] = []
    for op in ops:
        mat = np.kron(mat, op.matrix)
        dims.extend(op.space.subsystem_dims)
    return Operator(HilbertSpace(tuple(dims)), mat)


# functional forms of the operator algebra

def dagger(a: Operator) -> Operator:
    return a.dag()


def add(a: Operator, b: Operator) -> Operator:
    return a + b


def scale(a: Operator, s: complex) -> Operator:
    return a * s


def matmul(a: Operator, b: Operator) -> Operator:
    return a @ b


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


def expectation(op: Operator, rho: DensityMatrix) -> complex:
    if op.space != rho.space:
        raise SpaceMismatchError(f"{op.space} vs {rho.space}")
    # Tr(A rho) without forming the product
    return complex(np.einsum("ij,ji->", op.matrix, rho.matrix))


def operators_for(space: HilbertSpace) -> tuple[Operator, list[Operator]]:
    """Photon annihilator and per-qubit lowering operators on a photon+qubits space."""
    a = embed(fock_ladder(space.subsystem_dims[0] - 1), space, 0)
    sm = qubit_lowering()
    lowers = [embed(sm, space, j) for j in range(1, len(space.subsystem_dims))]
    return a, lowers


def sum_operators(ops: Sequence[Operator]) -> Operator:
    it = iter(ops)
    total = next(it)
    for op in it:
        total = total + op
    return total
