"""Dense complex linear algebra for small fixed dimensions.

States are explicit amplitude vectors over an ordered basis (dimension 2, 3,
or 9 in this package).  Two-atom states live in dimension 9 with the flat
index convention (i, j) -> 3*i + j: the given atom is the left tensor factor,
the auxiliary atom the right one.

All containers are immutable after construction (their arrays are marked
read-only) and safe to share across threads.  Every function here is pure
except ``sample_outcome``, which advances only the random generator passed
to it.
"""

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

# Tolerance for every equality, normalization, and orthonormality check.
# All constants in play are 1/sqrt(3), 1/3, and cube roots of unity, so
# round-off at these dimensions sits many orders of magnitude below this.
TOL = 1e-10

AtomSlot = Literal["given", "auxiliary"]


class ContractViolation(ValueError):
    """An argument broke an operation's precondition."""


class ImpossibleOutcome(ValueError):
    """A projection left (numerically) nothing behind."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitudes over a fixed ordered basis."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1).copy()
        if not np.all(np.isfinite(amps)):
            raise ContractViolation("state amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > TOL:
            raise ContractViolation(
                f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}"
            )
        object.__setattr__(self, "amps", _readonly(amps))

    @property
    def dim(self) -> int:
        return self.amps.shape[0]


def standard_basis_vector(dim: int, index: int) -> StateVector:
    """Unit vector e_index in the given dimension."""
    if not 0 <= index < dim:
        raise ContractViolation(f"index {index} out of range for dimension {dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """An ordered set of dim mutually orthonormal vectors spanning dim space.

    ``matrix`` holds the vectors as columns, for fast Gram and overlap math.
    """

    vectors: tuple[StateVector, ...]
    matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        vectors = tuple(self.vectors)
        if not vectors:
            raise ContractViolation("a basis needs at least one vector")
        dim = vectors[0].dim
        if any(v.dim != dim for v in vectors):
            raise ContractViolation("basis vectors must share one dimension")
        if len(vectors) != dim:
            raise ContractViolation(
                f"a spanning basis in dimension {dim} needs {dim} vectors, "
                f"got {len(vectors)}"
            )
        matrix = np.stack([v.amps for v in vectors], axis=1)
        dev = np.abs(matrix.conj().T @ matrix - np.eye(dim)).max()
        if dev > TOL:
            raise ContractViolation(f"basis is not orthonormal: Gram deviation {dev:.3e}")
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "matrix", _readonly(matrix))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, k: int) -> StateVector:
        return self.vectors[k]

    def __iter__(self):
        return iter(self.vectors)


def standard_basis(dim: int) -> OrthonormalBasis:
    return OrthonormalBasis(tuple(standard_basis_vector(dim, k) for k in range(dim)))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugating a's amplitudes."""
    if a.dim != b.dim:
        raise ContractViolation(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    """Two-atom product state; amplitude a_i * b_j sits at index 3*i + j."""
    if a.dim != 3 or b.dim != 3:
        raise ContractViolation(
            f"tensor_product combines two qutrit states, got dims {a.dim} and {b.dim}"
        )
    return StateVector(np.kron(a.amps, b.amps))


def project_and_normalize(
    state: StateVector, subspace_vector: StateVector, slot: AtomSlot = "given"
) -> StateVector:
    """Collapse one atom of a two-atom state onto a single-atom vector.

    Applies the rank-1 projector onto ``subspace_vector`` on the selected
    atom slot (identity on the other) and renormalizes.  Raises
    ``ImpossibleOutcome`` when the projection is (numerically) zero, i.e.
    the requested outcome cannot occur.
    """
    if state.dim != 9:
        raise ContractViolation(f"expected a two-atom state (dim 9), got dim {state.dim}")
    if subspace_vector.dim != 3:
        raise ContractViolation(
            f"expected a single-atom vector (dim 3), got dim {subspace_vector.dim}"
        )
    grid = state.amps.reshape(3, 3)
    v = subspace_vector.amps
    if slot == "given":
        projected = np.outer(v, v.conj()) @ grid
    elif slot == "auxiliary":
        projected = grid @ np.outer(v.conj(), v)
    else:
        raise ContractViolation(f"unknown atom slot {slot!r}")
    flat = projected.reshape(-1)
    norm = np.linalg.norm(flat)
    if norm < TOL:
        raise ImpossibleOutcome("projection removed the whole state")
    return StateVector(flat / norm)


def born_probabilities(state: StateVector, basis: OrthonormalBasis) -> np.ndarray:
    """|<basis_j|state>|^2 for each j; sums to 1 for any normalized state."""
    if state.dim != basis.dim:
        raise ContractViolation(f"dimension mismatch: state {state.dim}, basis {basis.dim}")
    overlaps = basis.matrix.conj().T @ state.amps
    return np.abs(overlaps) ** 2


def _prepare_distribution(probs) -> tuple[np.ndarray, np.ndarray]:
    """Validate a probability vector and return (outcome indices, cdf).

    Entries below TOL are clamped to exactly zero (and the rest
    renormalized), so an analytically impossible outcome can never be
    drawn because of round-off.
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0 or not np.all(np.isfinite(p)):
        raise ContractViolation("probabilities must be a finite 1-d sequence")
    if p.min() < -TOL or abs(p.sum() - 1.0) > TOL:
        raise ContractViolation(
            f"malformed distribution: min {p.min():.3e}, sum {p.sum():.12f}"
        )
    keep = np.flatnonzero(p >= TOL)
    weights = p[keep]
    return keep, np.cumsum(weights / weights.sum())


def _draw_prepared(keep: np.ndarray, cdf: np.ndarray, rng: np.random.Generator, size: int | None = None):
    draws = rng.random(size)
    picked = np.minimum(np.searchsorted(cdf, draws, side="right"), keep.size - 1)
    outcome = keep[picked]
    return int(outcome) if size is None else outcome


def sample_outcome(probs: Sequence[float] | np.ndarray, rng: np.random.Generator, size: int | None = None):
    """Draw an outcome index from a probability vector.

    Deterministic given the generator state.  With ``size`` given, returns
    that many independent draws as an integer array.
    """
    keep, cdf = _prepare_distribution(probs)
    return _draw_prepared(keep, cdf, rng, size)


def equal_up_to_global_phase(a: StateVector, b: StateVector) -> bool:
    """True iff the normalized states differ by at most a unit-modulus factor."""
    if a.dim != b.dim:
        raise ContractViolation(f"dimension mismatch: {a.dim} vs {b.dim}")
    return bool(abs(np.vdot(a.amps, b.amps)) >= 1.0 - TOL)
