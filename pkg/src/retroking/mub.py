"""Mutually unbiased bases for one qutrit and one qubit, plus tomography.

A collection of orthonormal bases is mutually unbiased when every vector of
one basis has squared overlap 1/d with every vector of any other basis: a
sharp outcome in one basis makes all outcomes of the others equally likely.
The maximal collections built here are the four-basis qutrit set (a
reference basis plus three bases written as unitary column matrices over
cube roots of unity) and the three Pauli eigenbases for a qubit.

The qutrit set is tomographically complete: the twelve outcome
probabilities p[m][k] determine the density matrix uniquely through the
linear reconstruction

    rho = sum_{m,k} |m_k> (p[m][k] - 1/4) <m_k|

implemented in ``density_from_probabilities``.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .linalg import (
    TOL,
    ContractViolation,
    OrthonormalBasis,
    StateVector,
    standard_basis,
)
from .reporting import Check

# Primitive cube root of unity; every non-reference qutrit amplitude is a
# power of it over sqrt(3).
OMEGA = np.exp(2j * np.pi / 3)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def fourier_matrix() -> np.ndarray:
    """The 3x3 unitary with entries OMEGA**(j*k) / sqrt(3)."""
    j, k = np.indices((3, 3))
    return _readonly(OMEGA ** (j * k) / np.sqrt(3))


@lru_cache(maxsize=None)
def qutrit_basis_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Columns of matrix m-1 are the kets of basis m in the reference basis."""
    x = OMEGA
    first = np.array([[x, 1, 1], [1, x, 1], [1, 1, x]], dtype=complex) / np.sqrt(3)
    second = np.array([[x * x, 1, 1], [1, x * x, 1], [1, 1, x * x]], dtype=complex) / np.sqrt(3)
    return _readonly(first), _readonly(second), fourier_matrix()


@dataclass(frozen=True, eq=False)
class MubSet:
    """A complete family of dim+1 pairwise unbiased orthonormal bases."""

    dim: int
    bases: tuple[OrthonormalBasis, ...]

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ContractViolation(f"unsupported dimension {self.dim}")
        bases = tuple(self.bases)
        if len(bases) != self.dim + 1:
            raise ContractViolation(
                f"dimension {self.dim} takes {self.dim + 1} bases, got {len(bases)}"
            )
        if any(b.dim != self.dim for b in bases):
            raise ContractViolation("basis dimension does not match the set dimension")
        for a in range(len(bases)):
            for b in range(a + 1, len(bases)):
                overlap = np.abs(bases[a].matrix.conj().T @ bases[b].matrix) ** 2
                dev = np.abs(overlap - 1.0 / self.dim).max()
                if dev > TOL:
                    raise ContractViolation(
                        f"bases {a} and {b} are not unbiased: deviation {dev:.3e}"
                    )
        object.__setattr__(self, "bases", bases)


@lru_cache(maxsize=None)
def build_qutrit_mubs() -> MubSet:
    """The four complementary spin-1 eigenbases, reference basis first."""

    def columns(matrix: np.ndarray) -> OrthonormalBasis:
        return OrthonormalBasis(tuple(StateVector(col) for col in matrix.T))

    return MubSet(3, (standard_basis(3),) + tuple(columns(m) for m in qutrit_basis_matrices()))


@lru_cache(maxsize=None)
def build_qubit_mubs() -> MubSet:
    """The three Pauli eigenbases: z first, then x = (|+> +- |->)/sqrt(2),
    then y = (|+> +- i|->)/sqrt(2), with the usual phase conventions."""
    s = 2**-0.5
    x_basis = OrthonormalBasis((StateVector([s, s]), StateVector([s, -s])))
    y_basis = OrthonormalBasis((StateVector([s, 1j * s]), StateVector([s, -1j * s])))
    return MubSet(2, (standard_basis(2), x_basis, y_basis))


@dataclass(frozen=True)
class UnbiasednessReport:
    """Worst deviations of a basis family from orthonormality and unbiasedness."""

    dim: int
    same_basis_deviation: float
    cross_basis_deviation: float

    @property
    def passed(self) -> bool:
        return self.same_basis_deviation < TOL and self.cross_basis_deviation < TOL


def certify_unbiasedness(
    bases: MubSet | Sequence[Sequence[StateVector]],
) -> UnbiasednessReport:
    """Measure how far a family of bases is from being mutually unbiased.

    Accepts a MubSet or a raw sequence of vector sequences, so deliberately
    broken fixtures can be certified too (a MubSet cannot be constructed in
    a broken state).
    """
    if isinstance(bases, MubSet):
        grids = [b.matrix for b in bases.bases]
    else:
        grids = [np.stack([v.amps for v in basis], axis=1) for basis in bases]
    dim = grids[0].shape[0]
    same = 0.0
    cross = 0.0
    for a in range(len(grids)):
        gram = grids[a].conj().T @ grids[a]
        same = max(same, float(np.abs(gram - np.eye(dim)).max()))
        for b in range(a + 1, len(grids)):
            overlap = np.abs(grids[a].conj().T @ grids[b]) ** 2
            cross = max(cross, float(np.abs(overlap - 1.0 / dim).max()))
    return UnbiasednessReport(dim, same, cross)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A 3x3 statistical operator: Hermitian, unit trace, positive."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.complex128).copy()
        if m.shape != (3, 3):
            raise ContractViolation(f"expected a 3x3 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ContractViolation("density matrix entries must be finite")
        if np.abs(m - m.conj().T).max() > TOL:
            raise ContractViolation("density matrix must be Hermitian")
        if abs(m.trace() - 1.0) > TOL:
            raise ContractViolation(f"density matrix trace must be 1, got {m.trace():.12f}")
        smallest = np.linalg.eigvalsh(m)[0]
        if smallest < -TOL:
            raise ContractViolation(
                f"density matrix must be positive, smallest eigenvalue {smallest:.3e}"
            )
        object.__setattr__(self, "entries", _readonly(m))


def random_density_matrix(rng: np.random.Generator) -> DensityMatrix:
    """GG*/tr(GG*) for G with independent standard complex Gaussian entries."""
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    m = g @ g.conj().T
    return DensityMatrix(m / m.trace().real)


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """Outcome probabilities p[m][k] for the four qutrit bases; rows sum to 1."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        if v.shape != (4, 3):
            raise ContractViolation(f"expected a 4x3 table, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ContractViolation("probabilities must be finite")
        if v.min() < -TOL or v.max() > 1.0 + TOL:
            raise ContractViolation("probabilities must lie in [0, 1]")
        sums = v.sum(axis=1)
        worst = np.abs(sums - 1.0).max()
        if worst > TOL:
            raise ContractViolation(f"table rows must sum to 1, worst deviation {worst:.3e}")
        object.__setattr__(self, "values", _readonly(np.clip(v, 0.0, 1.0)))


def probabilities_from_density(
    rho: DensityMatrix | np.ndarray, mubs: MubSet
) -> ProbabilityTable:
    """p[m][k] = <m_k| rho |m_k> over the four qutrit bases."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    if mubs.dim != 3:
        raise ContractViolation("tomography is defined for the qutrit set only")
    rows = []
    for basis in mubs.bases:
        raw = np.einsum("ij,ik,kj->j", basis.matrix.conj(), rho.entries, basis.matrix)
        if np.abs(raw.imag).max() > TOL:
            raise ContractViolation("probabilities came out non-real")
        rows.append(raw.real)
    return ProbabilityTable(np.stack(rows))


def density_from_probabilities(
    table: ProbabilityTable | np.ndarray, mubs: MubSet
) -> DensityMatrix:
    """Reconstruct rho = sum_{m,k} |m_k>(p[m][k] - 1/4)<m_k|."""
    if not isinstance(table, ProbabilityTable):
        table = ProbabilityTable(table)
    if mubs.dim != 3:
        raise ContractViolation("tomography is defined for the qutrit set only")
    rho = np.zeros((3, 3), dtype=np.complex128)
    for m, basis in enumerate(mubs.bases):
        for k in range(3):
            v = basis[k].amps
            rho += (table.values[m, k] - 0.25) * np.outer(v, v.conj())
    return DensityMatrix(rho)


def _hermitian_operator_basis() -> list[np.ndarray]:
    """A real basis of the 9-dimensional space of 3x3 Hermitian matrices."""
    ops = []
    for i in range(3):
        e = np.zeros((3, 3), dtype=complex)
        e[i, i] = 1.0
        ops.append(e)
    for i in range(3):
        for j in range(i + 1, 3):
            e = np.zeros((3, 3), dtype=complex)
            e[i, j] = e[j, i] = 1.0
            ops.append(e)
            e = np.zeros((3, 3), dtype=complex)
            e[i, j] = -1j
            e[j, i] = 1j
            ops.append(e)
    return ops


def probability_map_rank(mubs: MubSet) -> int:
    """Rank of the linear map from Hermitian operators to the 12 probabilities.

    Rank 9 means the twelve probabilities carry 8 independent parameters on
    top of the trace, i.e. the four row sums are the only affine constraints
    and the reconstruction above is exact.
    """
    rows = []
    for op in _hermitian_operator_basis():
        rows.append(
            [
                float((basis[k].amps.conj() @ op @ basis[k].amps).real)
                for basis in mubs.bases
                for k in range(3)
            ]
        )
    return int(np.linalg.matrix_rank(np.array(rows).T, tol=TOL))


def invariant_checks(rng: np.random.Generator, trials: int = 100) -> list[Check]:
    """The module's full verification suite as named checks."""
    checks = []
    for name, mubs in (("qutrit", build_qutrit_mubs()), ("qubit", build_qubit_mubs())):
        report = certify_unbiasedness(mubs)
        checks.append(
            Check(f"{name}-basis-gram", report.same_basis_deviation < TOL, report.same_basis_deviation)
        )
        checks.append(
            Check(f"{name}-unbiasedness", report.cross_basis_deviation < TOL, report.cross_basis_deviation)
        )
    qutrit = build_qutrit_mubs()
    worst = 0.0
    for _ in range(trials):
        rho = random_density_matrix(rng)
        rebuilt = density_from_probabilities(probabilities_from_density(rho, qutrit), qutrit)
        worst = max(worst, float(np.abs(rebuilt.entries - rho.entries).max()))
    checks.append(Check("tomography-round-trip", worst < TOL, worst))
    rank = probability_map_rank(qutrit)
    checks.append(Check("probability-map-rank", rank == 9, float(abs(rank - 9))))
    return checks
