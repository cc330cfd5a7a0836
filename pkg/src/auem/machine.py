"""Construction of the asymmetric universal entangling machine.

Subsystem order is always signal ``S``, then ancilla qudits ``X`` and
``Y``. The ancilla starts in ``|psi_00>_XY`` and the machine maps

    |psi>_S |psi_00>_XY  ->  alpha |psi>_S |psi_00>_XY + beta |psi_00>_SX |psi>_Y

which leaves the signal in a depolarizing channel of fidelity ``F`` and
entangles it with ``XY`` by ``h_d(F)`` bits for every input ``|psi>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import FidelityTooLow, InvalidArgument
from .measures import entanglement_pure, shannon_entropy
from .qudit import gb_vector, gp_matrix, root_of_unity
from .tensor import (
    TOL_ALG,
    TOL_EIG,
    DensityOperator,
    OperatorMatrix,
    PureState,
    complete_orthonormal_vectors,
    reduced_matrix,
)

# bisection target for invert_h_d
_INVERT_TOL = 1e-12
_SCAN_CHUNK = 10_000


@dataclass(frozen=True)
class MachineParams:
    """Parameters of one machine; build with :func:`params_from_fidelity`."""

    d: int
    F: float
    phi: float
    pi_s: float
    a: float
    b: float
    alpha: complex
    beta: float

    def __post_init__(self):
        d = self.d
        checks = {
            "F = 1 - pi_s + pi_s/d": self.F - (1 - self.pi_s + self.pi_s / d),
            "a": self.a - math.sqrt(1 - self.pi_s + self.pi_s / d**2),
            "b": self.b - math.sqrt(self.pi_s) / d,
            "alpha": abs(self.alpha - (self.a * np.exp(1j * self.phi) - self.b)),
            "beta": self.beta - self.b * d,
            "normalization": self.norm_relation() - 1.0,
        }
        bad = {k: v for k, v in checks.items() if abs(v) > TOL_ALG}
        if bad:
            raise InvalidArgument(f"inconsistent machine parameters: {bad}")

    def norm_relation(self) -> float:
        """``|alpha|^2 + (2/d) Re(alpha) beta + beta^2``; identically 1."""
        return abs(self.alpha) ** 2 + 2 / self.d * self.alpha.real * self.beta + self.beta**2

    @property
    def pi_x(self) -> float:
        return abs(self.alpha) ** 2 + self.beta**2

    @property
    def pi_y(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def clone_fidelity(self) -> float:
        """Fidelity of the ``Y`` output to the input."""
        return 1 - self.pi_y + self.pi_y / self.d

    @property
    def conjugate_fidelity(self) -> float:
        """Fidelity of the ``X`` output to the conjugated input, ``|alpha + beta|^2 / d``."""
        return abs(self.alpha + self.beta) ** 2 / self.d

    @property
    def entanglement(self) -> float:
        return h_d(self.d, self.F)

    @property
    def degenerate(self) -> bool:
        """True at ``F = 1`` (no interaction) and ``F = 1/d`` (input discarded)."""
        return self.F == 1.0 or self.F == 1.0 / self.d


@dataclass(frozen=True)
class TradeoffRecord:
    F: float
    E: float
    d: int


def _check_dim(d: int) -> int:
    if int(d) != d or d < 2:
        raise InvalidArgument(f"d must be an integer >= 2, got {d!r}")
    return int(d)


def _check_fidelity(d: int, F: float) -> float:
    F = float(F)
    if not (1.0 / d <= F <= 1.0):
        raise InvalidArgument(f"fidelity {F!r} outside [1/{d}, 1]")
    return F


def params_from_fidelity(d: int, F: float, phi: float = 0.0) -> MachineParams:
    d = _check_dim(d)
    F = _check_fidelity(d, F)
    pi_s = min(1.0, (1.0 - F) * d / (d - 1))
    a = math.sqrt(1 - pi_s + pi_s / d**2)
    b = math.sqrt(pi_s) / d
    alpha = complex(a * np.exp(1j * phi) - b)
    return MachineParams(d=d, F=F, phi=float(phi), pi_s=pi_s, a=a, b=b, alpha=alpha, beta=b * d)


def asymmetric_cloner(d: int, F: float) -> MachineParams:
    """``phi = 0``: real ``alpha``, best possible ``Y`` clone for the given ``F``."""
    return params_from_fidelity(d, F, 0.0)


def symmetric_cloner(d: int) -> MachineParams:
    """``alpha = beta``; both ``S`` and ``Y`` reach ``(d+3)/(2d+2)``."""
    return params_from_fidelity(d, (d + 3) / (2 * d + 2), 0.0)


def symmetric_entangler() -> MachineParams:
    """Qubit symmetric cloner, which doubles as UNOT gate and symmetric entangler."""
    return symmetric_cloner(2)


def minimal_interaction(d: int, F: float) -> MachineParams:
    """Machine with ``phi = phi_0``, where ``M`` itself is unitary on ``S (x) X``."""
    return params_from_fidelity(d, F, minimal_interaction_params(d, F).phi0)


def h_d(d: int, F: float) -> float:
    """Largest entropy of ``d`` probabilities whose largest entry is ``F``, in bits."""
    d = _check_dim(d)
    F = _check_fidelity(d, F)
    out = 0.0
    if F > 0:
        out -= F * math.log2(F)
    if F < 1:
        out -= (1 - F) * math.log2((1 - F) / (d - 1))
    return out


def invert_h_d(d: int, E: float) -> float:
    """Fidelity ``F`` in ``[1/d, 1]`` with ``h_d(F) = E``, by bisection."""
    d = _check_dim(d)
    top = math.log2(d)
    if not (0.0 <= E <= top):
        raise InvalidArgument(f"entanglement {E!r} outside [0, log2({d})]")
    if E == 0.0:
        return 1.0
    if E == top:
        return 1.0 / d
    lo, hi = 1.0 / d, 1.0  # h_d decreasing: h(lo) >= E >= h(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        val = h_d(d, mid)
        if val > E:
            lo = mid
        else:
            hi = mid
        if abs(val - E) < _INVERT_TOL and hi - lo < 1e-15:
            break
    mid = 0.5 * (lo + hi)
    if abs(h_d(d, mid) - E) >= _INVERT_TOL:
        raise ArithmeticError(f"bisection for h_{d}(F) = {E} did not converge")
    return mid


def tradeoff_curve(d: int, samples: int) -> list[TradeoffRecord]:
    """``(F, h_d(F))`` on a uniform grid of ``[1/d, 1]``, endpoints included."""
    d = _check_dim(d)
    if samples < 1:
        raise InvalidArgument("samples must be >= 1")
    if samples == 1:
        grid = [1.0 / d]
    else:
        grid = np.linspace(1.0 / d, 1.0, samples).tolist()
        grid[0], grid[-1] = 1.0 / d, 1.0
    return [TradeoffRecord(F=F, E=h_d(d, F), d=d) for F in grid]


def _check_signal(p: MachineParams, psi: PureState) -> None:
    if psi.dims != (p.d,):
        raise InvalidArgument(f"signal must be one {p.d}-level system, got dims {psi.dims}")


def kraus_operators(p: MachineParams) -> list[OperatorMatrix]:
    """``K_{0,0} = a I`` and ``K_{m,n} = b U_{m,n}`` otherwise, ordered by ``m * d + n``."""
    d = p.d
    ops = []
    for m in range(d):
        for n in range(d):
            weight = p.a if (m, n) == (0, 0) else p.b
            ops.append(OperatorMatrix((d,), weight * gp_matrix(d, m, n)))
    return ops


def kraus_channel(p: MachineParams, rho: DensityOperator | PureState) -> DensityOperator:
    """``sum K rho K^dagger`` over the machine's Kraus operators."""
    if isinstance(rho, PureState):
        _check_signal(p, rho)
        rho = rho.density()
    out = sum(k.mat @ rho.mat @ k.mat.conj().T for k in kraus_operators(p))
    return DensityOperator((p.d,), out)


def depolarize(p: MachineParams, psi: PureState) -> DensityOperator:
    """``(1 - pi_s) |psi><psi| + pi_s I / d``."""
    _check_signal(p, psi)
    proj = np.outer(psi.amps, psi.amps.conj())
    return DensityOperator((p.d,), (1 - p.pi_s) * proj + p.pi_s / p.d * np.eye(p.d))


def ancilla_basis(p: MachineParams) -> list[PureState]:
    """Phase-shifted GB states the Kraus branches are written into, ordered by ``m * d + n``."""
    d = p.d
    out = []
    for m in range(d):
        for n in range(d):
            if (m, n) == (0, 0):
                amps = np.exp(1j * p.phi) * gb_vector(d)
            else:
                amps = root_of_unity(m * n, d) * gb_vector(d, -m, -n)
            out.append(PureState((d, d), amps))
    return out


def kraus_output_state(p: MachineParams, psi: PureState) -> PureState:
    """``sum_{m,n} (K_{m,n}|psi>) (x) |phi_mn>`` on ``S (x) X (x) Y``."""
    _check_signal(p, psi)
    amps = sum(
        np.kron(k.apply(psi), phi.amps)
        for k, phi in zip(kraus_operators(p), ancilla_basis(p))
    )
    return PureState((p.d,) * 3, amps)


def _psi00_projector(d: int) -> np.ndarray:
    v = gb_vector(d)
    return np.outer(v, v.conj())


def operator_M(p: MachineParams) -> OperatorMatrix:
    """``alpha I + beta d |psi_00><psi_00|`` on ``S (x) X``."""
    d = p.d
    mat = p.alpha * np.eye(d * d) + p.beta * d * _psi00_projector(d)
    return OperatorMatrix((d, d), mat)


def input_subspace(d: int) -> np.ndarray:
    """Columns ``|k>_S |psi_00>_XY`` spanning the space of possible machine inputs."""
    return np.column_stack([np.kron(np.eye(d)[k], gb_vector(d)) for k in range(d)])


def build_U_M(p: MachineParams) -> OperatorMatrix:
    """Unitary on ``S (x) X (x) Y`` acting as ``M`` on the input subspace.

    Off that subspace the action pairs the Gram-Schmidt completion of the
    inputs with the Gram-Schmidt completion of their images, in
    construction order.
    """
    d = p.d
    domain = input_subspace(d)
    images = np.kron(operator_M(p).mat, np.eye(d)) @ domain
    domain = np.hstack([domain, complete_orthonormal_vectors(domain)])
    images = np.hstack([images, complete_orthonormal_vectors(images)])
    return OperatorMatrix((d, d, d), images @ domain.conj().T)


def standard_output_vector(p: MachineParams, amps: np.ndarray) -> np.ndarray:
    """Raw-array form of :func:`apply_standard`."""
    psi00 = gb_vector(p.d)
    return p.alpha * np.kron(amps, psi00) + p.beta * np.kron(psi00, amps)


def apply_standard(p: MachineParams, psi: PureState) -> PureState:
    """Machine output for signal ``psi``, on ``S (x) X (x) Y``."""
    _check_signal(p, psi)
    return PureState((p.d,) * 3, standard_output_vector(p, psi.amps))


def machine_input(psi: PureState) -> PureState:
    """``|psi>_S |psi_00>_XY``."""
    d = psi.dims[0]
    return PureState((d,) * 3, np.kron(psi.amps, gb_vector(d)))


def local_outputs(p: MachineParams, psi: PureState) -> tuple[DensityOperator, DensityOperator, DensityOperator]:
    """Closed-form single-system outputs ``(rho_S, rho_X, rho_Y)``."""
    _check_signal(p, psi)
    d = p.d
    eye = np.eye(d) / d
    proj = np.outer(psi.amps, psi.amps.conj())
    proj_conj = proj.conj()
    cross = 2 / d * p.alpha.real * p.beta
    rho_s = (abs(p.alpha) ** 2 + cross) * proj + p.beta**2 * eye
    rho_x = cross * proj_conj + (abs(p.alpha) ** 2 + p.beta**2) * eye
    rho_y = (cross + p.beta**2) * proj + abs(p.alpha) ** 2 * eye
    return tuple(DensityOperator((d,), r) for r in (rho_s, rho_x, rho_y))


def signal_figures(p: MachineParams, psi: PureState) -> tuple[float, float]:
    """Numerically measured ``(fidelity, entanglement)`` of the signal for input ``psi``."""
    out = apply_standard(p, psi)
    rho_s = reduced_matrix(out.amps, out.dims, [0])
    fid = float(np.real(np.vdot(psi.amps, rho_s @ psi.amps)))
    return fid, entanglement_pure(out, [0])


class MinimalInteractionAngles(NamedTuple):
    phi0: float
    theta0: float
    theta: float


def minimal_interaction_bound(d: int) -> float:
    """Smallest fidelity at which ``M`` can be made unitary: ``1 - 4(d-1)/d^3``."""
    return 1 - 4 * (d - 1) / d**3


def minimal_interaction_params(d: int, F: float) -> MinimalInteractionAngles:
    """Angles ``(phi_0, theta_0, theta)`` with ``M = e^{i theta_0} exp(i theta P_SX)``.

    Magnitudes come from the closed-form cosines. Signs follow from
    ``e^{i theta_0} = a e^{i phi_0} - b`` and ``e^{i theta} = 1 + beta d e^{-i theta_0}``,
    which force ``sin theta`` opposite to ``sin theta_0``; we take
    ``theta`` in ``[0, pi]`` and ``phi_0, theta_0`` in ``[-pi, 0]``.
    """
    d = _check_dim(d)
    bound = minimal_interaction_bound(d)
    if F < bound - 1e-12:
        raise FidelityTooLow(F, bound, d)
    F = _check_fidelity(d, F)
    clip = lambda x: min(1.0, max(-1.0, x))  # noqa: E731
    cos_phi0 = -(d**2 - 2) / 2 * math.sqrt((1 - F) / ((d**2 - 1) * F - d + 1))
    cos_theta0 = -math.sqrt(d**3 * (1 - F) / (4 * (d - 1)))
    cos_theta = 1 - d**3 * (1 - F) / (2 * (d - 1))
    phi0 = -math.acos(clip(cos_phi0))

    # Phases taken from the phasors themselves: near the fidelity bound
    # arccos loses half the digits, the phasors do not.
    p = params_from_fidelity(d, F, phi0)
    rot0 = p.alpha
    rot = 1 + p.beta * d / rot0
    if abs(abs(rot0) - 1) > TOL_EIG or abs(abs(rot) - 1) > TOL_EIG:
        raise ArithmeticError(f"M is not unitary at phi_0={phi0} (d={d}, F={F})")
    theta0 = math.atan2(rot0.imag, rot0.real)
    theta = math.atan2(rot.imag, rot.real)
    if theta0 > 0 and abs(theta0 - math.pi) < 1e-7:
        theta0 -= 2 * math.pi  # keep the branch at the boundary
    if abs(math.cos(theta0) - cos_theta0) > TOL_EIG or abs(math.cos(theta) - cos_theta) > TOL_EIG:
        raise ArithmeticError("closed-form angles disagree with the phasor solution")
    return MinimalInteractionAngles(phi0, theta0, theta)


def phase_gate(d: int, angle: float) -> np.ndarray:
    """``exp(i angle |psi_00><psi_00|)`` on two ``d``-level systems."""
    return np.eye(d * d) + (np.exp(1j * angle) - 1) * _psi00_projector(d)


def minimal_interaction_unitary(p: MachineParams) -> OperatorMatrix:
    """``e^{i theta_0} exp(i (phi - phi_0) P_XY) exp(i theta P_SX)`` on ``S (x) X (x) Y``."""
    d = p.d
    ang = minimal_interaction_params(d, p.F)
    eye = np.eye(d)
    g_sx = np.kron(phase_gate(d, ang.theta), eye)
    g_xy = np.kron(eye, phase_gate(d, p.phi - ang.phi0))
    return OperatorMatrix((d, d, d), np.exp(1j * ang.theta0) * (g_xy @ g_sx))


@dataclass(frozen=True)
class ScanResult:
    d: int
    F: float
    trials: int
    accepted: int
    max_entanglement: float
    max_random: float
    optimum: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.max_entanglement


def _entropies(weights: np.ndarray) -> np.ndarray:
    safe = np.where(weights > 0, weights, 1.0)
    return -np.sum(np.where(weights > 0, weights * np.log2(safe), 0.0), axis=1)


def _scan_chunk(d: int, F: float, n: int, rng: np.random.Generator) -> tuple[int, float]:
    lam = -np.sort(-rng.dirichlet(np.ones(d), size=n), axis=1)
    c = rng.dirichlet(np.ones(d), size=n)
    f = np.sum(lam * c, axis=1)
    # Pull c along a segment toward e_1 (raises F) or e_d (lowers F) until
    # the fidelity constraint holds; rows where neither end reaches F are
    # infeasible for that lambda.
    up = f < F
    ok_up = up & (lam[:, 0] >= F)
    ok_down = ~up & (lam[:, -1] <= F)
    ok = ok_up | ok_down
    if not np.any(ok):
        return 0, -np.inf
    lam, c, f = lam[ok], c[ok], f[ok]
    target = np.where(ok_up[ok], 0, d - 1)
    end = lam[np.arange(len(lam)), target]
    denom = np.where(end != f, end - f, 1.0)
    t = np.clip((F - f) / denom, 0.0, 1.0)
    c = c * (1 - t)[:, None]
    c[np.arange(len(c)), target] += t
    fid = np.sum(lam * c, axis=1)
    good = np.abs(fid - F) < 1e-12
    if not np.any(good):
        return 0, -np.inf
    return int(good.sum()), float(np.max(_entropies(lam[good])))


def optimal_schmidt_weights(d: int, F: float) -> np.ndarray:
    """Schmidt weights ``(F, (1-F)/(d-1), ...)`` of the optimal output."""
    return np.array([F] + [(1 - F) / (d - 1)] * (d - 1))


def optimality_scan(d: int, F: float, trials: int, seed: int) -> ScanResult:
    """Random search for output states with more entanglement than ``h_d(F)`` at fidelity ``F``.

    Samples Schmidt weights and input weights uniformly on the simplex,
    projects the input weights onto the fidelity constraint, and records
    the best entropy. The optimal point and the unentangled boundary point
    are always included. Chunks use independent streams spawned from
    ``seed``, so the result does not depend on chunk evaluation order.
    """
    d = _check_dim(d)
    F = _check_fidelity(d, F)
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    bound = h_d(d, F)
    optimum = float(shannon_entropy(optimal_schmidt_weights(d, F)))
    boundary = 0.0  # lambda = (1, 0, ...), c_1 = F
    best_random, accepted = -np.inf, 0
    n_chunks = -(-trials // _SCAN_CHUNK)
    streams = np.random.SeedSequence(int(seed)).spawn(n_chunks)
    for i, ss in enumerate(streams):
        n = min(_SCAN_CHUNK, trials - i * _SCAN_CHUNK)
        rng = np.random.Generator(np.random.Philox(ss))
        got, best = _scan_chunk(d, F, n, rng)
        accepted += got
        best_random = max(best_random, best)
    best_all = max(best_random, optimum, boundary)
    return ScanResult(
        d=d, F=F, trials=trials, accepted=accepted,
        max_entanglement=best_all, max_random=best_random,
        optimum=optimum, bound=bound,
    )
