"""Six-state protocol: the qubit machine as an individual eavesdropping attack.

The optimal individual attack maps

    |0>|chi> -> sqrt(F) |0>|A> + sqrt(1-F) |1>|B>
    |1>|chi> -> sqrt(F) |1>|C> + sqrt(1-F) |0>|D>

with ``{A, C}`` orthogonal to ``B`` and ``D``, ``B`` orthogonal to ``D``,
and ``Re<A|C> = 2 - 1/F``. Here ``|chi> = |Phi+>_XY`` and the ancilla
states are read off the machine output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConfiguration, InvalidArgument
from .machine import MachineParams, standard_output_vector
from .tensor import TOL_ALG, TOL_EIG, PureState

_DEGENERATE_AMP = 1e-12

_S = 1 / math.sqrt(2)


def six_state_bases() -> dict[str, tuple[PureState, PureState]]:
    """Rectilinear, diagonal and circular qubit bases."""
    return {
        "rectilinear": (PureState((2,), [1, 0]), PureState((2,), [0, 1])),
        "diagonal": (PureState((2,), [_S, _S]), PureState((2,), [_S, -_S])),
        "circular": (PureState((2,), [_S, 1j * _S]), PureState((2,), [_S, -1j * _S])),
    }


@dataclass(frozen=True)
class EveStates:
    A: PureState
    B: PureState
    C: PureState
    D: PureState
    F: float


@dataclass(frozen=True)
class ConditionResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tol


@dataclass(frozen=True)
class EveReport:
    results: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[ConditionResult]:
        return [r for r in self.results if not r.passed]

    def max_residual(self) -> float:
        return max(r.residual for r in self.results)


def _normalized(v: np.ndarray, weight: float, label: str) -> PureState:
    if weight < _DEGENERATE_AMP:
        raise DegenerateConfiguration(f"amplitude of |{label}> vanishes (weight {weight})")
    return PureState((2, 2), v / weight)


def extract_eve_states(p: MachineParams) -> EveStates:
    """Project the machine output for ``|0>`` and ``|1>`` onto the signal basis."""
    if p.d != 2:
        raise InvalidArgument(f"the six-state attack is defined for qubits, got d={p.d}")
    outs = [standard_output_vector(p, np.eye(2)[k]).reshape(2, 4) for k in (0, 1)]
    # row s of outs[k] is <s|_S applied to the output for input |k>
    sf, sd = math.sqrt(p.F), math.sqrt(1 - p.F)
    return EveStates(
        A=_normalized(outs[0][0], sf, "A"),
        B=_normalized(outs[0][1], sd, "B"),
        C=_normalized(outs[1][1], sf, "C"),
        D=_normalized(outs[1][0], sd, "D"),
        F=p.F,
    )


def check_eve_conditions(e: EveStates) -> EveReport:
    """Residuals of every condition on the ancilla states."""
    ip = lambda x, y: complex(np.vdot(x.amps, y.amps))  # noqa: E731
    results = [
        ConditionResult(f"<{a}|{b}> = 0", abs(ip(getattr(e, a), getattr(e, b))), TOL_ALG)
        for a, b in (("A", "B"), ("C", "B"), ("A", "D"), ("C", "D"), ("B", "D"))
    ]
    results.append(
        ConditionResult("Re<A|C> = 2 - 1/F", abs(ip(e.A, e.C).real - (2 - 1 / e.F)), TOL_EIG)
    )
    return EveReport(tuple(results))
