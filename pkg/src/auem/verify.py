"""Invariant suites run by ``auem verify``.

Every check reports a residual and the tolerance it is held to; a suite
passes when all of its residuals are below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import machine as mc
from .circuit import (
    align_phase,
    apply_gates,
    build_auem_circuit,
    circuit_matrix,
    g_target_matrix,
    synthesize_G,
)
from .qkd import check_eve_conditions, extract_eve_states
from .qudit import gb_basis_matrix, gb_eigenphase_check, gb_vector, gp_matrix, root_of_unity
from .tensor import (
    TOL_ALG,
    TOL_EIG,
    PureState,
    make_rng,
    random_ket,
    random_unitary_matrix,
    reduced_matrix,
    unitarity_defect,
)

FIDELITIES = (0.6, 5 / 6, 0.95)
PHASES = (0.0, 1.1)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tol)


def _fidelities(d: int, fidelity: float | None) -> list[float]:
    if fidelity is not None:
        return [fidelity]
    return [F for F in FIDELITIES if F >= 1 / d]


def algebra_suite(dims: Iterable[int], **_) -> list[Check]:
    out = []
    for d in dims:
        w = 0.0  # composition rule U_mn U_kl = w^{nk} U_{m+k, n+l}
        unit = 0.0
        for m in range(d):
            for n in range(d):
                unit = max(unit, unitarity_defect(gp_matrix(d, m, n)))
                for k in range(d):
                    for l in range(d):
                        lhs = gp_matrix(d, m, n) @ gp_matrix(d, k, l)
                        rhs = root_of_unity(n * k, d) * gp_matrix(d, m + k, n + l)
                        w = max(w, float(np.max(np.abs(lhs - rhs))))
        out.append(Check("algebra", f"d={d} GP unitarity", unit, TOL_ALG))
        out.append(Check("algebra", f"d={d} GP composition", w, TOL_ALG))

        gram = gb_basis_matrix(d)
        out.append(Check("algebra", f"d={d} GB orthonormality", unitarity_defect(gram), TOL_ALG))

        psi00, eye = gb_vector(d), np.eye(d)
        local = 0.0
        for m in range(d):
            for n in range(d):
                right = np.kron(eye, gp_matrix(d, m, n)) @ psi00
                left = root_of_unity(-m * n, d) * (np.kron(gp_matrix(d, -m, n), eye) @ psi00)
                target = gb_vector(d, m, n)
                local = max(local, float(np.max(np.abs(right - target))), float(np.max(np.abs(left - target))))
        out.append(Check("algebra", f"d={d} GB from local GP", local, TOL_ALG))

        rng = make_rng(1000 + d)
        v = random_ket(d, rng)
        rho = np.outer(v, v.conj())
        twirl = sum(gp_matrix(d, m, n) @ rho @ gp_matrix(d, m, n).conj().T for m in range(d) for n in range(d)) / d
        out.append(Check("algebra", f"d={d} GP twirl", float(np.max(np.abs(twirl - np.eye(d)))), TOL_ALG))

        eig = 0.0
        try:
            for k in range(d):
                for l in range(d):
                    for m in range(d):
                        for n in range(d):
                            gb_eigenphase_check(k, l, m, n, d)
        except AssertionError:
            eig = np.inf
        out.append(Check("algebra", f"d={d} GB eigenphases", eig, TOL_ALG))

        total = sum(np.kron(gp_matrix(d, m, n), gp_matrix(d, m, -n)) for m in range(d) for n in range(d))
        proj = d * d * np.outer(psi00, psi00.conj())
        out.append(Check("algebra", f"d={d} projector sum", float(np.max(np.abs(total - proj))), TOL_ALG))
    return out


def channel_suite(dims: Iterable[int], fidelity=None, phi=None, seed=42, samples=10, **_) -> list[Check]:
    out = []
    rng = make_rng(seed)
    for d in dims:
        worst = {"completeness": 0.0, "kraus-closed": 0.0, "trace-closed": 0.0, "kraus-trace": 0.0, "branches": 0.0}
        for F in _fidelities(d, fidelity):
            for ph in ([phi] if phi is not None else PHASES):
                p = mc.params_from_fidelity(d, F, ph)
                ks = [k.mat for k in mc.kraus_operators(p)]
                comp = sum(k.conj().T @ k for k in ks)
                worst["completeness"] = max(worst["completeness"], float(np.max(np.abs(comp - np.eye(d)))))
                for _ in range(samples):
                    v = random_ket(d, rng)
                    proj = np.outer(v, v.conj())
                    kraus = sum(k @ proj @ k.conj().T for k in ks)
                    closed = (1 - p.pi_s) * proj + p.pi_s / d * np.eye(d)
                    full = mc.standard_output_vector(p, v)
                    traced = reduced_matrix(full, (d, d, d), [0])
                    branches = sum(
                        np.kron(k @ v, phi_mn.amps) for k, phi_mn in zip(ks, mc.ancilla_basis(p))
                    )
                    for key, val in (
                        ("kraus-closed", kraus - closed),
                        ("trace-closed", traced - closed),
                        ("kraus-trace", kraus - traced),
                        ("branches", branches - full),
                    ):
                        worst[key] = max(worst[key], float(np.max(np.abs(val))))
        for key, val in worst.items():
            out.append(Check("channel", f"d={d} {key}", val, TOL_ALG))
    return out


def unitarity_suite(dims: Iterable[int], fidelity=None, phi=None, fault: str | None = None, **_) -> list[Check]:
    out = []
    for d in dims:
        defect, on_w, mi_defect, mi_w = 0.0, 0.0, 0.0, 0.0
        for F in _fidelities(d, fidelity):
            for ph in ([phi] if phi is not None else PHASES):
                p = mc.params_from_fidelity(d, F, ph)
                u = np.array(mc.build_U_M(p).mat)
                if fault == "unitarity":
                    u[0, 0] += 1e-3
                defect = max(defect, unitarity_defect(u))
                w = mc.input_subspace(d)
                std = np.column_stack([mc.standard_output_vector(p, np.eye(d)[k]) for k in range(d)])
                on_w = max(on_w, float(np.max(np.abs(u @ w - std))))
                if F >= mc.minimal_interaction_bound(d):
                    mi = mc.minimal_interaction_unitary(p).mat
                    mi_defect = max(mi_defect, unitarity_defect(mi))
                    mi_w = max(mi_w, float(np.max(np.abs(mi @ w - std))))
        out += [
            Check("unitarity", f"d={d} U_M unitary", defect, TOL_ALG),
            Check("unitarity", f"d={d} U_M acts as M on inputs", on_w, TOL_ALG),
            Check("unitarity", f"d={d} minimal-interaction unitary", mi_defect, TOL_ALG),
            Check("unitarity", f"d={d} minimal-interaction on inputs", mi_w, TOL_ALG),
        ]
    return out


def covariance_suite(dims: Iterable[int], fidelity=None, phi=None, seed=42, samples=10, **_) -> list[Check]:
    out = []
    rng = make_rng(seed + 1)
    for d in dims:
        worst = 0.0
        for F in _fidelities(d, fidelity):
            p = mc.params_from_fidelity(d, F, phi if phi is not None else 0.0)
            for _ in range(samples):
                u = random_unitary_matrix(d, rng)
                v = random_ket(d, rng)
                lhs = mc.standard_output_vector(p, u @ v)
                rhs = np.kron(np.kron(u, u.conj()), u) @ mc.standard_output_vector(p, v)
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        out.append(Check("covariance", f"d={d} U (x) U* (x) U", worst, TOL_ALG))
    return out


def universality_suite(dims: Iterable[int], fidelity=None, phi=None, seed=42, samples=10, **_) -> list[Check]:
    out = []
    rng = make_rng(seed + 2)
    for d in dims:
        dF, dE = 0.0, 0.0
        for F in _fidelities(d, fidelity):
            for ph in ([phi] if phi is not None else PHASES):
                p = mc.params_from_fidelity(d, F, ph)
                target = mc.h_d(d, F)
                for _ in range(samples):
                    fid, ent = mc.signal_figures(p, PureState((d,), random_ket(d, rng)))
                    dF, dE = max(dF, abs(fid - F)), max(dE, abs(ent - target))
        out.append(Check("universality", f"d={d} fidelity", dF, TOL_EIG))
        out.append(Check("universality", f"d={d} entanglement", dE, TOL_EIG))
    return out


def circuit_suite(dims=(), fidelity=None, phi=None, seed=42, samples=10, **_) -> list[Check]:
    rng = make_rng(seed + 3)
    g_err, auem_err = 0.0, 0.0
    for theta in rng.uniform(-np.pi, np.pi, size=samples):
        g_err = max(g_err, float(np.max(np.abs(circuit_matrix(synthesize_G(theta)) - g_target_matrix(theta)))))
    for _ in range(samples):
        F = fidelity if fidelity is not None else rng.uniform(0.5, 1.0)
        ph = phi if phi is not None else rng.uniform(-np.pi, np.pi)
        p = mc.params_from_fidelity(2, F, ph)
        v = random_ket(2, rng)
        got = apply_gates(build_auem_circuit(F, ph), np.kron(v, gb_vector(2)))
        want = mc.standard_output_vector(p, v)
        auem_err = max(auem_err, float(np.max(np.abs(align_phase(want, got) - want))))
    return [
        Check("circuit", "G(theta) matrix", g_err, TOL_ALG),
        Check("circuit", "machine circuit output", auem_err, TOL_EIG),
    ]


def qkd_suite(dims=(), fidelity=None, phi=None, **_) -> list[Check]:
    grid = [fidelity] if fidelity is not None else np.linspace(0.5, 1.0, 22)[1:-1].tolist()
    phases = [phi] if phi is not None else [0.0, 0.7, np.pi / 2]
    orth, overlap = 0.0, 0.0
    for F in grid:
        for ph in phases:
            report = check_eve_conditions(extract_eve_states(mc.params_from_fidelity(2, F, ph)))
            for r in report.results:
                if r.name.startswith("Re"):
                    overlap = max(overlap, r.residual)
                else:
                    orth = max(orth, r.residual)
    return [
        Check("qkd", "orthogonality conditions", orth, TOL_ALG),
        Check("qkd", "Re<A|C> = 2 - 1/F", overlap, TOL_EIG),
    ]


SUITES: dict[str, Callable[..., list[Check]]] = {
    "algebra": algebra_suite,
    "channel": channel_suite,
    "unitarity": unitarity_suite,
    "covariance": covariance_suite,
    "universality": universality_suite,
    "circuit": circuit_suite,
    "qkd": qkd_suite,
}


def run_suites(names: Iterable[str] | None = None, dims: Iterable[int] = (2, 3), **kwargs) -> list[Check]:
    names = list(SUITES) if names is None else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    dims = list(dims)
    checks = []
    for name in names:
        checks += SUITES[name](dims, **kwargs)
    return checks
