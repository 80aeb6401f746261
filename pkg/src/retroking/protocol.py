"""The two-atom retrodiction protocol.

One party (the king) measures one of the four complementary spin-1
observables on a given atom; the other (the physicist) must later name the
result without having been told which observable was measured.  She wins
with certainty by entangling the given atom with an auxiliary one before
the king's measurement and by measuring, afterwards, a basis of nine
two-atom "bracket" states |[k0 k1 k2 k3]> engineered so that outcome j is
impossible unless the king's result in basis m was label_j[m].

Index conventions: the given atom is the left tensor factor; two-atom
amplitudes sit at flat index 3*i + j.  The king's basis choices are
m = 0..3, outcomes k = 0..2, physicist outcomes j = 0..8.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import (
    TOL,
    ContractViolation,
    OrthonormalBasis,
    StateVector,
    _draw_prepared,
    _prepare_distribution,
    born_probabilities,
    inner_product,
    project_and_normalize,
    sample_outcome,
    tensor_product,
)
from .mub import OMEGA, build_qutrit_mubs, fourier_matrix
from .reporting import Check

BracketLabel = tuple[int, int, int, int]

# Auxiliary-atom basis paired with each given-atom basis in the entangled
# preparation, and the paired outcome within that basis.
PARTNER_BASIS = (0, 2, 1, 3)


def partner_outcome(m: int, k: int) -> int:
    return k if m < 3 else (-k) % 3


# Labels of the reference physicist basis, P_0 .. P_8.  Any two agree in
# exactly one coordinate, which is precisely the orthogonality criterion
# for bracket states.
PHYSICIST_LABELS: tuple[BracketLabel, ...] = (
    (0, 0, 0, 0),
    (0, 1, 1, 1),
    (0, 2, 2, 2),
    (1, 0, 1, 2),
    (1, 1, 2, 0),
    (1, 2, 0, 1),
    (2, 0, 2, 1),
    (2, 1, 0, 2),
    (2, 2, 1, 0),
)

ALL_LABELS: tuple[BracketLabel, ...] = tuple(itertools.product((0, 1, 2), repeat=4))


def _check_label(label) -> BracketLabel:
    lab = tuple(int(k) for k in label)
    if len(lab) != 4 or any(k not in (0, 1, 2) for k in lab):
        raise ContractViolation(f"bad bracket label {label!r}")
    return lab


def label_agreement(a: BracketLabel, b: BracketLabel) -> int:
    """Number of coordinates where two labels coincide."""
    return sum(x == y for x, y in zip(_check_label(a), _check_label(b)))


@lru_cache(maxsize=None)
def prepare_psi0() -> StateVector:
    """The entangled two-atom preparation.

    Written in the reference basis it is 3**-0.5 times the sum of the three
    doubly-occupied kets (flat indices 0, 4, 8); summing any basis's trio
    reproduces the very same vector, see ``entangled_forms``.
    """
    amps = np.zeros(9, dtype=np.complex128)
    amps[[0, 4, 8]] = 3**-0.5
    return StateVector(amps)


@dataclass(frozen=True, eq=False)
class TrioTable:
    """The 4 trios of possible two-atom states after the king's measurement.

    ``states[m][k]`` is the product of the given atom's |m_k> with the
    auxiliary atom's partner ket.  Within fixed m the three members are
    mutually orthogonal.
    """

    states: tuple[tuple[StateVector, StateVector, StateVector], ...]

    def state(self, m: int, k: int) -> StateVector:
        return self.states[m][k]


@lru_cache(maxsize=None)
def trio_table() -> TrioTable:
    mubs = build_qutrit_mubs()
    rows = []
    for m in range(4):
        partner = mubs.bases[PARTNER_BASIS[m]]
        rows.append(
            tuple(
                tensor_product(mubs.bases[m][k], partner[partner_outcome(m, k)])
                for k in range(3)
            )
        )
    return TrioTable(tuple(rows))


def entangled_forms() -> tuple[StateVector, StateVector, StateVector, StateVector]:
    """One decomposition of the preparation per king basis: the normalized
    sum of each trio.  All four come out as the same vector."""
    trios = trio_table()
    return tuple(
        StateVector(sum(trios.state(m, k).amps for k in range(3)) / np.sqrt(3))
        for m in range(4)
    )


@lru_cache(maxsize=None)
def build_psi_basis() -> OrthonormalBasis:
    """Nine orthonormal two-atom states underlying the bracket construction.

    Index 0 is the entangled preparation itself; indices 2m+1 and 2m+2 are
    obtained by undoing the Fourier-type mixing on the trio of basis m, so
    that each trio equals (psi_0, psi_2m+1, psi_2m+2) times the mixing
    matrix, exactly and not merely up to phase.
    """
    mixing = fourier_matrix()
    trios = trio_table()
    psi0 = prepare_psi0().amps
    columns = [psi0] + [None] * 8
    for m in range(4):
        t = np.stack([trios.state(m, k).amps for k in range(3)], axis=1)
        unmixed = t @ mixing.conj().T
        assert np.abs(unmixed[:, 0] - psi0).max() < TOL, "shared column drifted"
        columns[2 * m + 1] = unmixed[:, 1]
        columns[2 * m + 2] = unmixed[:, 2]
    return OrthonormalBasis(tuple(StateVector(c) for c in columns))


def bracket_state(label, basis: OrthonormalBasis | None = None) -> StateVector:
    """The two-atom state |[k0 k1 k2 k3]>.

    It is orthogonal to every trio member except the one with outcome k_m
    in each basis m, where the overlap has magnitude 3**-0.5.
    """
    lab = _check_label(label)
    psi = basis if basis is not None else build_psi_basis()
    amps = psi[0].amps / 3.0
    for m, km in enumerate(lab):
        amps = amps + (OMEGA**km * psi[2 * m + 1].amps + OMEGA**-km * psi[2 * m + 2].amps) / 3.0
    return StateVector(amps)


def bracket_overlap(a, b) -> float:
    """Analytic inner product of two bracket states: (matches - 1) / 3."""
    return (label_agreement(a, b) - 1) / 3.0


@dataclass(frozen=True, eq=False)
class PhysicistBasis:
    """An orthonormal two-atom basis of nine bracket states with their labels."""

    basis: OrthonormalBasis
    labels: tuple[BracketLabel, ...]

    def __post_init__(self):
        labels = tuple(_check_label(lab) for lab in self.labels)
        if len(labels) != 9 or self.basis.dim != 9:
            raise ContractViolation("a physicist basis holds nine labelled dim-9 states")
        for a in range(9):
            for b in range(a + 1, 9):
                if label_agreement(labels[a], labels[b]) != 1:
                    raise ContractViolation(
                        f"labels {labels[a]} and {labels[b]} agree in "
                        f"{label_agreement(labels[a], labels[b])} coordinates, want exactly 1"
                    )
        object.__setattr__(self, "labels", labels)


@lru_cache(maxsize=None)
def build_physicist_basis() -> PhysicistBasis:
    """The reference final-measurement basis, labels as in PHYSICIST_LABELS."""
    psi = build_psi_basis()
    vectors = tuple(bracket_state(lab, psi) for lab in PHYSICIST_LABELS)
    return PhysicistBasis(OrthonormalBasis(vectors), PHYSICIST_LABELS)


def infer(m: int, j: int, basis: PhysicistBasis | None = None) -> int:
    """The king's outcome implied by physicist outcome j, given his basis m."""
    if not 0 <= m <= 3:
        raise ContractViolation(f"basis index {m} out of range")
    if not 0 <= j <= 8:
        raise ContractViolation(f"physicist outcome {j} out of range")
    pb = basis if basis is not None else build_physicist_basis()
    return pb.labels[j][m]


def king_outcome_probabilities(psi0: StateVector, m: int) -> np.ndarray:
    """Born probabilities for measuring basis m on the given atom alone."""
    if not 0 <= m <= 3:
        raise ContractViolation(f"basis index {m} out of range")
    basis = build_qutrit_mubs().bases[m]
    grid = psi0.amps.reshape(3, 3)
    return (np.abs(basis.matrix.conj().T @ grid) ** 2).sum(axis=1)


def king_measure(
    psi0: StateVector,
    m: int,
    rng: np.random.Generator | None,
    force_outcome: int | None = None,
) -> tuple[int, StateVector]:
    """Measure basis m on the given atom; return the outcome and the
    collapsed two-atom state.

    ``force_outcome`` bypasses sampling (the collapse is still projective),
    so certainty can be checked for every outcome rather than sampled ones;
    the generator is unused in that case.
    """
    if force_outcome is None:
        if rng is None:
            raise ContractViolation("sampling a king outcome needs a generator")
        k = sample_outcome(king_outcome_probabilities(psi0, m), rng)
    else:
        if not 0 <= m <= 3:
            raise ContractViolation(f"basis index {m} out of range")
        k = int(force_outcome)
        if not 0 <= k <= 2:
            raise ContractViolation(f"forced outcome {k} out of range")
    basis = build_qutrit_mubs().bases[m]
    return k, project_and_normalize(psi0, basis[k], "given")


@dataclass(frozen=True)
class RoundRecord:
    """One full protocol round."""

    king_basis: int
    king_outcome: int
    physicist_outcome: int
    inferred: int
    success: bool
    seed: int | None = None
    round_index: int | None = None


@lru_cache(maxsize=None)
def _round_engine():
    """Per-(m, k) sampling tables for the round loop.

    The king's outcome distribution and, for every collapse, the
    physicist's Born distribution are pure values; they are computed once
    through the projective-measurement path and stored in prepared
    (outcomes, cdf) form.  A round then only draws from them, consuming the
    generator exactly as the unbatched path would.
    """
    psi0 = prepare_psi0()
    pb = build_physicist_basis()
    king = []
    physicist = []
    for m in range(4):
        king.append(_prepare_distribution(king_outcome_probabilities(psi0, m)))
        row = []
        for k in range(3):
            _, collapsed = king_measure(psi0, m, None, force_outcome=k)
            row.append(_prepare_distribution(born_probabilities(collapsed, pb.basis)))
        physicist.append(tuple(row))
    return tuple(king), tuple(physicist), pb


def run_round(
    m: int | None,
    rng: np.random.Generator,
    *,
    seed: int | None = None,
    round_index: int | None = None,
) -> RoundRecord:
    """Play one round: prepare, king measures (basis m, or random when m is
    None), physicist measures her basis, inference is recorded."""
    king_basis = int(rng.integers(4)) if m is None else int(m)
    if not 0 <= king_basis <= 3:
        raise ContractViolation(f"basis index {king_basis} out of range")
    king, physicist, pb = _round_engine()
    k = _draw_prepared(*king[king_basis], rng)
    j = _draw_prepared(*physicist[king_basis][k], rng)
    inferred = infer(king_basis, j, pb)
    return RoundRecord(king_basis, k, j, inferred, inferred == k, seed, round_index)


def round_stream(seed: int, index: int) -> np.random.Generator:
    """The random stream of round ``index``; depends only on (seed, index),
    so rounds can run in any order (or in parallel) with identical results."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def simulate_rounds(rounds: int, seed: int, basis: int | None = None) -> list[RoundRecord]:
    """Run independent rounds, one derived stream per round."""
    if rounds < 1:
        raise ContractViolation(f"rounds must be positive, got {rounds}")
    return [
        run_round(basis, round_stream(seed, i), seed=seed, round_index=i)
        for i in range(rounds)
    ]


@dataclass(frozen=True)
class CertaintyReport:
    """Outcome of the exhaustive collapse-by-collapse verification."""

    passed: bool
    cases_checked: int
    outcomes_checked: int
    max_probability_deviation: float
    failures: tuple[str, ...] = ()


def exhaustive_verify(basis: PhysicistBasis | None = None) -> CertaintyReport:
    """Check every collapse case (m, k): exactly three physicist outcomes
    are possible, each with probability 1/3, and all of them infer k."""
    pb = basis if basis is not None else build_physicist_basis()
    trios = trio_table()
    failures: list[str] = []
    worst = 0.0
    outcomes = 0
    for m in range(4):
        for k in range(3):
            probs = born_probabilities(trios.state(m, k), pb.basis)
            compatible = np.flatnonzero(probs > TOL)
            outcomes += compatible.size
            if compatible.size != 3:
                failures.append(
                    f"(m={m}, k={k}): {compatible.size} compatible outcomes, expected 3"
                )
            for j in compatible:
                guessed = infer(m, int(j), pb)
                if guessed != k:
                    failures.append(f"(m={m}, k={k}, j={int(j)}): inferred {guessed}")
            if compatible.size:
                worst = max(worst, float(np.abs(probs[compatible] - 1.0 / 3.0).max()))
    passed = not failures and worst < TOL
    return CertaintyReport(passed, 12, outcomes, worst, tuple(failures))


def search_bases() -> tuple[tuple[BracketLabel, ...], ...]:
    """Every 9-label set whose members pairwise agree in exactly one
    coordinate, found by backtracking over the 81 labels.

    Each returned set is sorted and the result is sorted, so the output is
    canonical; every set is re-certified at the state level (nine bracket
    states forming an orthonormal basis) before being returned.
    """
    labels = ALL_LABELS
    n = len(labels)
    compatible = [
        frozenset(
            j for j in range(n) if j != i and label_agreement(labels[i], labels[j]) == 1
        )
        for i in range(n)
    ]
    found: list[tuple[int, ...]] = []

    def extend(chain: list[int], candidates: frozenset[int]) -> None:
        if len(chain) == 9:
            found.append(tuple(chain))
            return
        if len(chain) + len(candidates) < 9:
            return
        for v in sorted(candidates):
            extend(chain + [v], frozenset(w for w in candidates & compatible[v] if w > v))

    extend([], frozenset(range(n)))

    psi = build_psi_basis()
    brackets = np.stack([bracket_state(lab, psi).amps for lab in labels], axis=1)
    for indices in found:
        sub = brackets[:, list(indices)]
        dev = np.abs(sub.conj().T @ sub - np.eye(9)).max()
        assert dev < TOL, f"label set {indices} fails state-level orthonormality"
    return tuple(tuple(labels[i] for i in indices) for indices in found)


def invariant_checks() -> list[Check]:
    """The module's full verification suite as named checks."""
    checks = []

    psi0 = prepare_psi0()
    forms = entangled_forms()
    dev = max(1.0 - abs(inner_product(psi0, f)) for f in forms)
    checks.append(Check("entangled-four-forms", dev < TOL, dev))

    psi = build_psi_basis()
    dev = float(np.abs(psi.matrix.conj().T @ psi.matrix - np.eye(9)).max())
    checks.append(Check("psi-basis-gram", dev < TOL, dev))

    mixing = fourier_matrix()
    dev = float(np.abs(mixing.conj().T @ mixing - np.eye(3)).max())
    checks.append(Check("mixing-unitarity", dev < TOL, dev))

    dev = max(
        abs(inner_product(psi[2 * m + 1], psi[2 * m + 2])) for m in range(4)
    )
    checks.append(Check("paired-orthogonality", dev < TOL, dev))

    trios = trio_table()
    dev = 0.0
    for m in range(4):
        triple = np.stack(
            [psi[0].amps, psi[2 * m + 1].amps, psi[2 * m + 2].amps], axis=1
        )
        remixed = triple @ mixing
        for k in range(3):
            dev = max(dev, float(np.abs(remixed[:, k] - trios.state(m, k).amps).max()))
    checks.append(Check("trio-reconstruction", dev < TOL, dev))

    brackets = np.stack([bracket_state(lab, psi).amps for lab in ALL_LABELS], axis=1)
    dev = 0.0
    for m in range(4):
        trio_grid = np.stack([trios.state(m, k).amps for k in range(3)], axis=1)
        overlaps = trio_grid.conj().T @ brackets  # (3, 81): row k, column label
        for i, lab in enumerate(ALL_LABELS):
            for k in range(3):
                if k == lab[m]:
                    dev = max(dev, abs(abs(overlaps[k, i]) ** 2 - 1.0 / 3.0))
                else:
                    dev = max(dev, abs(overlaps[k, i]))
    checks.append(Check("bracket-trio-selectivity", dev < TOL, dev))

    gram = brackets.conj().T @ brackets
    analytic = np.array(
        [[bracket_overlap(a, b) for b in ALL_LABELS] for a in ALL_LABELS]
    )
    dev = float(np.abs(gram - analytic).max())
    checks.append(Check("bracket-overlap-law", dev < TOL, dev))

    pb = build_physicist_basis()
    dev = float(np.abs(pb.basis.matrix.conj().T @ pb.basis.matrix - np.eye(9)).max())
    checks.append(Check("physicist-basis-gram", dev < TOL, dev))

    certainty = exhaustive_verify()
    checks.append(
        Check("retrodiction-certainty", certainty.passed, certainty.max_probability_deviation)
    )
    return checks
