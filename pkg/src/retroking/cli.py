"""Command-line front end.

Subcommands: ``verify`` (full invariant suites), ``tables`` (reference
matrices, labels, inference and overlap tables), ``simulate`` (seeded Monte
Carlo rounds), ``search-bases`` (all valid final-measurement label sets),
``tomography`` (probability table and reconstruction round trip).

All output goes to stdout; reports are deterministic for a fixed command,
flags, and seed, apart from the ``timing`` field.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import mub, protocol
from .linalg import TOL, ContractViolation
from .mub import OMEGA
from .reporting import Check, all_passed

COMMANDS = ("verify", "tables", "simulate", "search-bases", "tomography")
TOMOGRAPHY_STATES = ("random", "mixed", "pure")


@dataclass(frozen=True)
class RunConfig:
    command: str
    rounds: int = 10_000
    seed: int = 0
    basis: int | None = None
    format: str = "text"
    state: str = "random"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ContractViolation(f"unknown command {self.command!r}")
        if self.rounds < 1:
            raise ContractViolation("rounds must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ContractViolation("seed must fit in 64 unsigned bits")
        if self.basis is not None and self.basis not in range(4):
            raise ContractViolation("basis must lie in 0..3")
        if self.format not in ("text", "json"):
            raise ContractViolation(f"unknown format {self.format!r}")
        if self.state not in TOMOGRAPHY_STATES:
            raise ContractViolation(f"unknown tomography state {self.state!r}")


def _complex_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_json(m: np.ndarray) -> list[list[list[float]]]:
    return [[_complex_json(z) for z in row] for row in m]


def _format_complex(z: complex) -> str:
    return f"{z.real:.6g}{z.imag:+.6g}i"


_SYMBOLS = ((1.0 + 0.0j, "1"), (OMEGA, "x"), (OMEGA**2, "x^2"))


def _format_symbolic(z: complex) -> str:
    for value, symbol in _SYMBOLS:
        if abs(z * np.sqrt(3) - value) < 1e-9:
            return f"{symbol}/√3"
    return _format_complex(z)


def _print_matrix(m: np.ndarray, symbolic: bool) -> None:
    fmt = _format_symbolic if symbolic else _format_complex
    cells = [[fmt(z) for z in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    for row in cells:
        print("  [ " + "  ".join(c.rjust(width) for c in row) + " ]")


def cmd_verify(config: RunConfig) -> tuple[list[Check], dict]:
    rng = np.random.default_rng(config.seed)
    checks = mub.invariant_checks(rng) + protocol.invariant_checks()
    return checks, {"tolerance": TOL}


def cmd_tables(config: RunConfig) -> tuple[list[Check], dict]:
    matrices = mub.qutrit_basis_matrices()
    data = {
        "basis_matrices": [_matrix_json(m) for m in matrices],
        "mixing_matrix": _matrix_json(mub.fourier_matrix()),
        "physicist_labels": [list(lab) for lab in protocol.PHYSICIST_LABELS],
        "inference_table": [
            [protocol.infer(m, j) for m in range(4)] for j in range(9)
        ],
        "overlap_by_matches": {str(c): (c - 1) / 3.0 for c in range(5)},
    }
    return [], data


def cmd_simulate(config: RunConfig) -> tuple[list[Check], dict]:
    records = protocol.simulate_rounds(config.rounds, config.seed, config.basis)
    successes = sum(r.success for r in records)
    king_grid = np.zeros((4, 3), dtype=int)
    physicist = np.zeros(9, dtype=int)
    for r in records:
        king_grid[r.king_basis, r.king_outcome] += 1
        physicist[r.physicist_outcome] += 1
    checks = [
        Check("retrodiction-success", successes == config.rounds, float(config.rounds - successes))
    ]
    data = {
        "rounds": config.rounds,
        "successes": int(successes),
        "basis_choices": king_grid.sum(axis=1).tolist(),
        "king_outcomes": king_grid.tolist(),
        "physicist_outcomes": physicist.tolist(),
    }
    return checks, data


def cmd_search(config: RunConfig) -> tuple[list[Check], dict]:
    sets = protocol.search_bases()
    reference = tuple(sorted(protocol.PHYSICIST_LABELS))
    reference_index = sets.index(reference) if reference in sets else None
    psi = protocol.build_psi_basis()
    worst = 0.0
    for labels in sets:
        grid = np.stack([protocol.bracket_state(lab, psi).amps for lab in labels], axis=1)
        worst = max(worst, float(np.abs(grid.conj().T @ grid - np.eye(9)).max()))
    checks = [
        Check("search-reference-present", reference_index is not None,
              0.0 if reference_index is not None else 1.0),
        Check("search-recertification", worst < TOL, worst),
    ]
    data = {
        "count": len(sets),
        "reference_index": reference_index,
        "bases": [[list(lab) for lab in labels] for labels in sets],
    }
    return checks, data


def cmd_tomography(config: RunConfig) -> tuple[list[Check], dict]:
    mubs = mub.build_qutrit_mubs()
    if config.state == "random":
        rho = mub.random_density_matrix(np.random.default_rng(config.seed))
    elif config.state == "mixed":
        rho = mub.DensityMatrix(np.eye(3) / 3.0)
    else:
        rho = mub.DensityMatrix(np.diag([1.0, 0.0, 0.0]))
    table = mub.probabilities_from_density(rho, mubs)
    rebuilt = mub.density_from_probabilities(table, mubs)
    error = float(np.abs(rebuilt.entries - rho.entries).max())
    checks = [Check("tomography-reconstruction", error < TOL, error)]
    data = {
        "source": config.state,
        "density": _matrix_json(rho.entries),
        "probabilities": table.values.tolist(),
        "reconstruction_error": error,
    }
    return checks, data


_HANDLERS = {
    "verify": cmd_verify,
    "tables": cmd_tables,
    "simulate": cmd_simulate,
    "search-bases": cmd_search,
    "tomography": cmd_tomography,
}


def run(config: RunConfig) -> dict:
    """Execute one command and assemble its report."""
    started = time.perf_counter()
    checks, data = _HANDLERS[config.command](config)
    elapsed = time.perf_counter() - started
    echo = {"rounds": config.rounds, "seed": config.seed, "basis": config.basis,
            "format": config.format}
    if config.command == "tomography":
        echo["state"] = config.state
    return {
        "command": config.command,
        "config": echo,
        "checks": [
            {"name": c.name, "pass": c.passed, "max_deviation": c.max_deviation}
            for c in checks
        ],
        "pass": all_passed(checks),
        "data": data,
        "timing": {"elapsed_seconds": elapsed},
    }


def _render_tables(data: dict) -> None:
    for i, matrix in enumerate(data["basis_matrices"], start=1):
        m = np.array([[complex(re, im) for re, im in row] for row in matrix])
        print(f"basis {i} (columns are its kets in the reference basis):")
        _print_matrix(m, symbolic=True)
        _print_matrix(m, symbolic=False)
    m = np.array([[complex(re, im) for re, im in row] for row in data["mixing_matrix"]])
    print("trio mixing matrix:")
    _print_matrix(m, symbolic=True)
    _print_matrix(m, symbolic=False)
    print("physicist basis labels and inference table (outcome j, king basis m):")
    print("   j  label    m=0 m=1 m=2 m=3")
    for j, (label, row) in enumerate(zip(data["physicist_labels"], data["inference_table"])):
        digits = "".join(str(d) for d in label)
        print(f"   {j}  [{digits}]   " + "   ".join(str(k) for k in row))
    print("bracket-state overlap by number of agreeing label coordinates:")
    for c in range(5):
        value = data["overlap_by_matches"][str(c)]
        print(f"   {c} matches -> {value:+.6g}")


def _render_simulate(data: dict) -> None:
    print(f"rounds: {data['rounds']}   successes: {data['successes']}")
    print(f"king basis choices: {data['basis_choices']}")
    print("king outcomes per basis:")
    for m, row in enumerate(data["king_outcomes"]):
        print(f"   m={m}: {row}")
    print(f"physicist outcomes: {data['physicist_outcomes']}")


def _render_search(data: dict) -> None:
    print(f"valid label sets: {data['count']}")
    print(f"reference set index: {data['reference_index']}")
    for i, labels in enumerate(data["bases"]):
        digits = " ".join("".join(str(d) for d in lab) for lab in labels)
        marker = "  <- reference" if i == data["reference_index"] else ""
        print(f"   {i:2d}: {digits}{marker}")


def _render_tomography(data: dict) -> None:
    print(f"source state: {data['source']}")
    rho = np.array([[complex(re, im) for re, im in row] for row in data["density"]])
    print("density matrix:")
    _print_matrix(rho, symbolic=False)
    print("probability table (rows: bases 0..3):")
    for row in data["probabilities"]:
        print("   " + "  ".join(f"{p:.6f}" for p in row))
    print(f"reconstruction error: {data['reconstruction_error']:.3e}")


_RENDERERS = {
    "tables": _render_tables,
    "simulate": _render_simulate,
    "search-bases": _render_search,
    "tomography": _render_tomography,
}


def render_text(report: dict) -> None:
    print(f"retroking {report['command']}")
    print(f"config: {json.dumps(report['config'])}")
    renderer = _RENDERERS.get(report["command"])
    if renderer is not None:
        renderer(report["data"])
    for check in report["checks"]:
        flag = "PASS" if check["pass"] else "FAIL"
        print(f"check {check['name']:<28} max deviation {check['max_deviation']:.3e}  {flag}")
    print(f"result: {'PASS' if report['pass'] else 'FAIL'}")
    print(f"elapsed: {report['timing']['elapsed_seconds']:.3f}s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retroking",
        description="Two-qutrit retrodiction protocol: verification, tables, "
        "simulation, basis search, and tomography.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "verify": "run every invariant suite and report deviations",
        "tables": "emit the reference matrices, labels, and overlap tables",
        "simulate": "run seeded Monte Carlo protocol rounds",
        "search-bases": "enumerate all valid final-measurement label sets",
        "tomography": "reconstruct a density matrix from its probability table",
    }
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=helps[name])
        cmd.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        cmd.add_argument("--format", choices=("text", "json"), default="text",
                         help="report format (default text)")
        if name == "simulate":
            cmd.add_argument("--rounds", type=int, default=10_000,
                             help="number of rounds (default 10000)")
            cmd.add_argument("--basis", type=int, choices=range(4), default=None,
                             help="force the king's basis (default: random per round)")
        if name == "tomography":
            cmd.add_argument("--state", choices=TOMOGRAPHY_STATES, default="random",
                             help="source density matrix (default random)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            rounds=getattr(args, "rounds", 10_000),
            seed=args.seed,
            basis=getattr(args, "basis", None),
            format=args.format,
            state=getattr(args, "state", "random"),
        )
        report = run(config)
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if config.format == "json":
        print(json.dumps(report, indent=2))
    else:
        render_text(report)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
