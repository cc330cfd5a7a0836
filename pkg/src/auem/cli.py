"""Command-line driver.

Exit codes: 0 success, 1 parameter or verification failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import machine as mc
from .circuit import (
    align_phase,
    apply_gates,
    build_auem_circuit,
    circuit_matrix,
    dump_circuit,
    g_target_matrix,
    parse_circuit,
    synthesize_G,
)
from .errors import AuemError
from .measures import eof_two_qubit, fidelity_to_pure
from .qudit import gb_vector, orthogonal_state
from .tensor import TOL_ALG, TOL_EIG, DensityOperator, PureState, make_rng, partial_trace, random_ket
from .verify import SUITES, run_suites

DEFAULT_D = 2
DEFAULT_F = 5 / 6
DEFAULT_PHI = 0.0
DEFAULT_SAMPLES = 100
DEFAULT_SEED = 42


class UsageError(Exception):
    """Bad parameters; maps to exit code 1."""


@dataclass
class RunConfig:
    subcommand: str
    d: int = DEFAULT_D
    fidelity: float = DEFAULT_F
    phi: float = DEFAULT_PHI
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    format: str = "csv"
    output: str | None = None

    def __post_init__(self):
        if self.d < 2:
            raise UsageError(f"--dim must be >= 2, got {self.d}")
        if not (1 / self.d <= self.fidelity <= 1):
            raise UsageError(f"--fidelity must lie in [1/{self.d}, 1], got {self.fidelity}")
        if self.samples < 1:
            raise UsageError(f"--samples must be >= 1, got {self.samples}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"--format must be csv or json, got {self.format}")


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _render_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for r in rows:
        writer.writerow([_fmt(v) for v in r.values()])
    return buf.getvalue()


def _render_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for k, v in report.items():
        writer.writerow([k, _fmt(v)])
    return buf.getvalue()


def symmetric_entangler_point() -> dict:
    """Fidelity and entanglement of formation of the two-qubit symmetric entangler output."""
    psi = PureState((2,), [1, 0])
    perp = orthogonal_state(psi)
    sym = np.kron(psi.amps, perp.amps) + np.kron(perp.amps, psi.amps)
    same = np.kron(psi.amps, psi.amps)
    rho = np.outer(sym, sym.conj()) / 6 + 2 / 3 * np.outer(same, same.conj())
    rho = DensityOperator((2, 2), rho)
    fid = fidelity_to_pure(psi, partial_trace(rho, [0]))
    return {"F": fid, "E_bits": eof_two_qubit(rho), "d": 2}


def cmd_curve(cfg: RunConfig, compare_symmetric: bool = False) -> str:
    rows = [asdict(r) for r in mc.tradeoff_curve(cfg.d, cfg.samples)]
    rows = [{"F": r["F"], "E_bits": r["E"], "d": r["d"]} for r in rows]
    if compare_symmetric and cfg.d == 2:
        rows = [dict(r, source="auem") for r in rows]
        rows.append(dict(symmetric_entangler_point(), source="symmetric_entangler"))
    return _render_rows(rows, cfg.format)


def simulate_report(cfg: RunConfig) -> dict:
    p = mc.params_from_fidelity(cfg.d, cfg.fidelity, cfg.phi)
    target_e = mc.h_d(cfg.d, cfg.fidelity)
    rng = make_rng(cfg.seed)
    dF, dE, fs, fy, fx = [], [], [], [], []
    for _ in range(cfg.samples):
        psi = PureState((cfg.d,), random_ket(cfg.d, rng))
        out = mc.apply_standard(p, psi)
        fid, ent = mc.signal_figures(p, psi)
        dF.append(abs(fid - cfg.fidelity))
        dE.append(abs(ent - target_e))
        fs.append(fid)
        fy.append(fidelity_to_pure(psi, partial_trace(out, [2])))
        fx.append(fidelity_to_pure(psi.conj(), partial_trace(out, [1])))
    return {
        "d": cfg.d,
        "F": cfg.fidelity,
        "phi": cfg.phi,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "alpha_re": p.alpha.real,
        "alpha_im": p.alpha.imag,
        "beta": p.beta,
        "target_entanglement": target_e,
        "mean_fidelity_deviation": float(np.mean(dF)),
        "max_fidelity_deviation": float(np.max(dF)),
        "mean_entanglement_deviation": float(np.mean(dE)),
        "max_entanglement_deviation": float(np.max(dE)),
        "signal_fidelity": float(np.mean(fs)),
        "clone_fidelity": float(np.mean(fy)),
        "conjugate_fidelity": float(np.mean(fx)),
        "clone_fidelity_closed_form": p.clone_fidelity,
        "conjugate_fidelity_closed_form": p.conjugate_fidelity,
    }


def cmd_simulate(cfg: RunConfig) -> str:
    return _render_report(simulate_report(cfg), cfg.format)


def cmd_verify(cfg: RunConfig, suite: str | None, dims, fidelity, phi, fault=None) -> tuple[bool, str]:
    names = None if suite in (None, "all") else [suite]
    checks = run_suites(
        names, dims=dims, fidelity=fidelity, phi=phi, seed=cfg.seed,
        samples=min(cfg.samples, 50), fault=fault,
    )
    rows = [
        {"suite": c.suite, "check": c.name, "residual": c.residual, "tol": c.tol, "passed": c.passed}
        for c in checks
    ]
    ok = all(c.passed for c in checks)
    return ok, _render_rows(rows, cfg.format)


def cmd_optimality_scan(cfg: RunConfig) -> tuple[bool, str]:
    res = mc.optimality_scan(cfg.d, cfg.fidelity, cfg.samples, cfg.seed)
    ok = res.max_entanglement <= res.bound + TOL_EIG
    report = {
        "d": res.d,
        "F": res.F,
        "trials": res.trials,
        "seed": cfg.seed,
        "accepted": res.accepted,
        "max_entanglement": res.max_entanglement,
        "max_random": res.max_random if math.isfinite(res.max_random) else None,
        "optimum": res.optimum,
        "h_d": res.bound,
        "margin": res.margin,
        "passed": ok,
    }
    return ok, _render_report(report, cfg.format)


def cmd_circuit_verify(cfg: RunConfig, text: str) -> tuple[bool, str]:
    """Check a dumped circuit: 2 qubits against G(theta(F)), 3 qubits against the machine."""
    circuit = parse_circuit(text)
    if circuit.n_qubits == 2:
        theta = mc.minimal_interaction_params(2, cfg.fidelity).theta
        err = float(np.max(np.abs(circuit_matrix(circuit) - g_target_matrix(theta))))
        tol, what = TOL_ALG, "G(theta) matrix"
    elif circuit.n_qubits == 3:
        p = mc.params_from_fidelity(2, cfg.fidelity, cfg.phi)
        rng = make_rng(cfg.seed)
        err = 0.0
        for _ in range(cfg.samples):
            v = random_ket(2, rng)
            want = mc.standard_output_vector(p, v)
            got = apply_gates(circuit, np.kron(v, gb_vector(2)))
            err = max(err, float(np.max(np.abs(align_phase(want, got) - want))))
        tol, what = TOL_EIG, "machine output"
    else:
        raise UsageError(f"expected a 2- or 3-qubit circuit, got {circuit.n_qubits} qubits")
    ok = err < tol
    report = {"qubits": circuit.n_qubits, "gates": len(circuit.gates), "check": what,
              "F": cfg.fidelity, "phi": cfg.phi, "residual": err, "tol": tol, "passed": ok}
    return ok, _render_report(report, cfg.format)


def _common(parser: argparse.ArgumentParser, *, fidelity_default=DEFAULT_F, dim_default=DEFAULT_D) -> None:
    parser.add_argument("--dim", type=int, default=dim_default, help="qudit dimension d")
    parser.add_argument("--fidelity", type=float, default=fidelity_default, help="signal fidelity F")
    parser.add_argument("--phi", type=float, default=None, help="free phase (radians)")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--output", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="auem", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="fidelity/entanglement trade-off table")
    _common(p)
    p.add_argument("--compare-symmetric", action="store_true",
                   help="append the symmetric-entangler point (d=2 only)")

    p = sub.add_parser("simulate", help="run the machine on Haar-random inputs")
    _common(p)

    p = sub.add_parser("verify", help="run invariant suites")
    _common(p, fidelity_default=None, dim_default=None)
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--inject-fault", choices=["unitarity"], default=None,
                   help="perturb U_M to confirm the suite can fail")

    p = sub.add_parser("optimality-scan", help="Monte-Carlo search above h_d(F)")
    _common(p)

    p = sub.add_parser("circuit-dump", help="write the one-qubit machine circuit (or G(theta) with --gate)")
    _common(p)
    p.add_argument("--gate", action="store_true", help="dump only G(theta) on two qubits")

    p = sub.add_parser("circuit-verify", help="check a dumped circuit against the closed form")
    _common(p)
    p.add_argument("circuit", help="circuit text file, or - for stdin")
    return parser


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cmd = args.command
    phi = DEFAULT_PHI if args.phi is None else args.phi
    try:
        if cmd == "verify":
            dims = [2, 3] if args.dim is None else [args.dim]
            # fidelity is optional here; 1.0 only stands in for validation
            cfgs = [
                RunConfig(cmd, d=d, fidelity=1.0 if args.fidelity is None else args.fidelity,
                          phi=phi, samples=args.samples, seed=args.seed,
                          format=args.format, output=args.output)
                for d in dims
            ]
            cfg = cfgs[0]
            ok, text = cmd_verify(cfg, args.suite, dims, args.fidelity, args.phi, args.inject_fault)
        else:
            cfg = RunConfig(cmd, d=args.dim, fidelity=args.fidelity, phi=phi, samples=args.samples,
                            seed=args.seed, format=args.format, output=args.output)
            ok = True
            if cmd == "curve":
                text = cmd_curve(cfg, args.compare_symmetric)
            elif cmd == "simulate":
                text = cmd_simulate(cfg)
            elif cmd == "optimality-scan":
                ok, text = cmd_optimality_scan(cfg)
            elif cmd == "circuit-dump":
                if cfg.d != 2:
                    raise UsageError("circuits exist only for qubits (--dim 2)")
                if args.gate:
                    circuit = synthesize_G(mc.minimal_interaction_params(2, cfg.fidelity).theta)
                else:
                    circuit = build_auem_circuit(cfg.fidelity, cfg.phi)
                text = dump_circuit(circuit)
            else:
                try:
                    source = _read(args.circuit)
                except OSError as exc:
                    print(f"auem: cannot read {args.circuit}: {exc}", file=sys.stderr)
                    return 2
                ok, text = cmd_circuit_verify(cfg, source)
    except (UsageError, AuemError, KeyError) as exc:
        print(f"auem: {exc}", file=sys.stderr)
        return 1
    try:
        _write(text, cfg.output)
    except OSError as exc:
        print(f"auem: cannot write output: {exc}", file=sys.stderr)
        return 2
    if not ok:
        print(f"auem: {cmd} failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
