"""Qubit gate circuits for the phase gate G(theta) and the one-qubit machine.

Qubit 0 is the leftmost (most significant) tensor factor. For the machine
circuit the register is ``(S, X, Y)``.

Text dump format, one gate per line, ``GATE target [control] angle``::

    QUBITS 3
    CNOT 1 0            # target 1, control 0
    RY 0 -1.5707963267948966
    RZ 1 0.25
    GLOBAL_PHASE 0.1

Blank lines and ``#`` comments are ignored. Angles are written with 17
significant digits so a dump reloads bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import FidelityTooLow, InvalidArgument
from .machine import minimal_interaction_bound, minimal_interaction_params, params_from_fidelity
from .qudit import gb_vector
from .tensor import PureState


class GateKind(str, Enum):
    CNOT = "CNOT"
    RZ = "RZ"
    RY = "RY"
    GLOBAL_PHASE = "GLOBAL_PHASE"


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    target: int | None = None
    control: int | None = None
    angle: float = 0.0

    @classmethod
    def cnot(cls, control: int, target: int) -> Gate:
        return cls(GateKind.CNOT, target=target, control=control)

    @classmethod
    def rz(cls, target: int, angle: float) -> Gate:
        return cls(GateKind.RZ, target=target, angle=float(angle))

    @classmethod
    def ry(cls, target: int, angle: float) -> Gate:
        return cls(GateKind.RY, target=target, angle=float(angle))

    @classmethod
    def global_phase(cls, angle: float) -> Gate:
        return cls(GateKind.GLOBAL_PHASE, angle=float(angle))

    def qubits(self) -> tuple[int, ...]:
        if self.kind is GateKind.CNOT:
            return (self.control, self.target)
        if self.kind is GateKind.GLOBAL_PHASE:
            return ()
        return (self.target,)


@dataclass
class GateCircuit:
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidArgument("a circuit needs at least one qubit")
        for g in self.gates:
            _validate(g, self.n_qubits)

    def append(self, gate: Gate) -> None:
        _validate(gate, self.n_qubits)
        self.gates.append(gate)

    def extend(self, gates) -> None:
        for g in gates:
            self.append(g)


def _validate(g: Gate, n: int) -> None:
    qs = g.qubits()
    if any(q is None or not 0 <= q < n for q in qs):
        raise InvalidArgument(f"{g.kind.value} acts on qubits {qs} outside a {n}-qubit register")
    if len(set(qs)) != len(qs):
        raise InvalidArgument(f"{g.kind.value} control and target coincide")


def _rz(xi: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * xi), np.exp(0.5j * xi)])


def _ry(xi: float) -> np.ndarray:
    c, s = math.cos(xi / 2), math.sin(xi / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _apply_1q(t: np.ndarray, mat: np.ndarray, q: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(mat, t, axes=([1], [q])), 0, q)


def _apply_cnot(t: np.ndarray, control: int, target: int) -> np.ndarray:
    t = t.copy()
    sel = [slice(None)] * t.ndim
    sel[control] = 1
    sub = t[tuple(sel)]
    # target axis shifts down by one once the control axis is indexed away
    tgt = target - (target > control)
    t[tuple(sel)] = np.flip(sub, axis=tgt).copy()
    return t


def apply_gates(c: GateCircuit, amps: np.ndarray) -> np.ndarray:
    """Raw-array circuit application, gates in list order."""
    n = c.n_qubits
    t = np.asarray(amps, dtype=complex).reshape((2,) * n)
    for g in c.gates:
        if g.kind is GateKind.CNOT:
            t = _apply_cnot(t, g.control, g.target)
        elif g.kind is GateKind.RZ:
            t = _apply_1q(t, _rz(g.angle), g.target)
        elif g.kind is GateKind.RY:
            t = _apply_1q(t, _ry(g.angle), g.target)
        else:
            t = np.exp(1j * g.angle) * t
    return t.reshape(-1)


def apply_circuit(c: GateCircuit, psi: PureState) -> PureState:
    if psi.dims != (2,) * c.n_qubits:
        raise InvalidArgument(f"state dims {psi.dims} do not match a {c.n_qubits}-qubit register")
    return PureState(psi.dims, apply_gates(c, psi.amps))


def circuit_matrix(c: GateCircuit) -> np.ndarray:
    """Columns are the images of the computational basis states."""
    dim = 2**c.n_qubits
    return np.column_stack([apply_gates(c, np.eye(dim)[:, j]) for j in range(dim)])


def g_gates(theta: float, q0: int, q1: int) -> list[Gate]:
    """Gates realizing G(theta) = e^{-i theta/4} exp(i theta |Phi+><Phi+|) on ``(q0, q1)``.

    CNOT then RY(-pi/2) maps the Bell basis onto the computational basis
    with ``Phi+ -> |00>``. There the target is
    ``exp(i theta/4 (Z0 + Z1 + Z0 Z1))``, which needs no global phase.
    """
    half = -theta / 2
    return [
        Gate.cnot(q0, q1),
        Gate.ry(q0, -math.pi / 2),
        Gate.rz(q0, half),
        Gate.rz(q1, half),
        Gate.cnot(q0, q1),
        Gate.rz(q1, half),
        Gate.cnot(q0, q1),
        Gate.ry(q0, math.pi / 2),
        Gate.cnot(q0, q1),
    ]


def synthesize_G(theta: float) -> GateCircuit:
    return GateCircuit(2, g_gates(theta, 0, 1))


def g_target_matrix(theta: float) -> np.ndarray:
    """Closed form ``e^{-i theta/4} exp(i theta |Phi+><Phi+|)``."""
    v = gb_vector(2)
    proj = np.outer(v, v.conj())
    return np.exp(-0.25j * theta) * (np.eye(4) + (np.exp(1j * theta) - 1) * proj)


def build_auem_circuit(F: float, phi: float = 0.0) -> GateCircuit:
    """G(theta) on ``(S, X)`` then G(phi - phi_0) on ``(X, Y)``.

    A trailing global phase makes the circuit equal to the minimal-interaction
    unitary, not just equal up to phase.
    """
    bound = minimal_interaction_bound(2)
    if F < bound:
        raise FidelityTooLow(F, bound, 2)
    params_from_fidelity(2, F, phi)  # validates F range
    ang = minimal_interaction_params(2, F)
    delta = phi - ang.phi0
    c = GateCircuit(3)
    c.extend(g_gates(ang.theta, 0, 1))
    c.extend(g_gates(delta, 1, 2))
    c.append(Gate.global_phase(ang.theta0 + (ang.theta + delta) / 4))
    return c


def align_phase(reference: np.ndarray, other: np.ndarray) -> np.ndarray:
    """``other`` times the phase that matches ``reference`` on its largest amplitude."""
    k = int(np.argmax(np.abs(reference)))
    if abs(other[k]) == 0:
        return other
    ph = reference[k] / other[k]
    return other * (ph / abs(ph))


def pure_trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Trace distance of two unit kets, via the component of ``b`` orthogonal to ``a``."""
    perp = b - np.vdot(a, b) * a
    return float(np.linalg.norm(perp))


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def dump_circuit(c: GateCircuit) -> str:
    lines = [f"QUBITS {c.n_qubits}"]
    for g in c.gates:
        if g.kind is GateKind.CNOT:
            lines.append(f"CNOT {g.target} {g.control}")
        elif g.kind is GateKind.GLOBAL_PHASE:
            lines.append(f"GLOBAL_PHASE {_fmt(g.angle)}")
        else:
            lines.append(f"{g.kind.value} {g.target} {_fmt(g.angle)}")
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> GateCircuit:
    circuit = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        try:
            if head == "QUBITS":
                if circuit is not None:
                    raise InvalidArgument("duplicate QUBITS line")
                circuit = GateCircuit(int(args[0]))
                continue
            if circuit is None:
                raise InvalidArgument("QUBITS line must come first")
            kind = GateKind(head)
            if kind is GateKind.CNOT:
                (target, control) = args
                gate = Gate.cnot(int(control), int(target))
            elif kind is GateKind.GLOBAL_PHASE:
                (angle,) = args
                gate = Gate.global_phase(float(angle))
            else:
                target, angle = args
                gate = Gate(kind, target=int(target), angle=float(angle))
            circuit.append(gate)
        except (ValueError, IndexError) as exc:
            raise InvalidArgument(f"line {lineno}: cannot parse {raw!r}: {exc}") from exc
    if circuit is None:
        raise InvalidArgument("empty circuit description")
    return circuit
