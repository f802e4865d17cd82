"""Passive linear-optical elements, loss channels and detector models.

Beamsplitter convention (``convention="real"``, the default): creation
operators transform as

    a_dag -> sqrt(eta) a_dag + sqrt(1 - eta) b_dag
    b_dag -> sqrt(1 - eta) a_dag - sqrt(eta) b_dag

which is real orthogonal.  A ``"symmetric"`` convention with i phases on the
cross terms is provided to demonstrate that physical predictions do not
depend on the choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import (
    DensityOperator,
    FockState,
    append_vacuum_modes,
    make_basis_state,
    partial_trace,
    space,
    superpose,
    traced_with_weights,
)

CONVENTIONS = ("real", "symmetric")


@dataclass(frozen=True)
class BeamsplitterSpec:
    """Two-mode coupler with reflectivity ``eta`` into the first output."""

    eta: float
    modes: tuple[int, int]
    convention: str = "real"

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"reflectivity {self.eta} outside [0, 1]")
        if self.modes[0] == self.modes[1]:
            raise ValueError("beamsplitter needs two distinct modes")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")


@dataclass(frozen=True)
class DetectorModel:
    """Non-number-resolving click detector of efficiency ``efficiency``.

    With ``number_resolving=True`` the click element is the exactly-one-photon
    element efficiency*n*(1-efficiency)^(n-1); this variant exists for
    comparison studies only.
    """

    efficiency: float
    number_resolving: bool = False

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"efficiency {self.efficiency} outside [0, 1]")


@dataclass(frozen=True)
class DistinguishabilitySpec:
    """Mode overlap between one ancilla photon and the signal.

    ``visibility`` equals the two-photon interference visibility the pair
    would show on a balanced beamsplitter.
    """

    visibility: float

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError(f"visibility {self.visibility} outside [0, 1]")


def mode_transfer_matrix(eta: float, convention: str = "real") -> np.ndarray:
    """2x2 matrix S with column j holding the image of input creation op j."""
    r, t = math.sqrt(eta), math.sqrt(1.0 - eta)
    if convention == "real":
        return np.array([[r, t], [t, -r]], dtype=complex)
    if convention == "symmetric":
        return np.array([[r, 1j * t], [1j * t, r]], dtype=complex)
    raise ValueError(f"unknown convention {convention!r}")


@lru_cache(maxsize=256)
def _two_mode_unitary(num_modes, cutoff, mode_a, mode_b, skey) -> np.ndarray:
    """Fock-space unitary of a two-mode coupler, identity on other modes."""
    S = np.array(skey, dtype=complex).reshape(2, 2)
    fspace = space(num_modes, cutoff)
    U = np.zeros((fspace.dim, fspace.dim), dtype=complex)
    fact = [math.factorial(n) for n in range(cutoff + 1)]
    for col, occ in enumerate(fspace.basis):
        na, nb = occ[mode_a], occ[mode_b]
        # Expand (S00 x + S10 y)^na (S01 x + S11 y)^nb over monomials x^p y^q.
        poly = {(0, 0): 1.0 + 0.0j}
        for _ in range(na):
            nxt = {}
            for (p, q), c in poly.items():
                nxt[(p + 1, q)] = nxt.get((p + 1, q), 0.0) + c * S[0, 0]
                nxt[(p, q + 1)] = nxt.get((p, q + 1), 0.0) + c * S[1, 0]
            poly = nxt
        for _ in range(nb):
            nxt = {}
            for (p, q), c in poly.items():
                nxt[(p + 1, q)] = nxt.get((p + 1, q), 0.0) + c * S[0, 1]
                nxt[(p, q + 1)] = nxt.get((p, q + 1), 0.0) + c * S[1, 1]
            poly = nxt
        scale = math.sqrt(fact[na] * fact[nb])
        occ_list = list(occ)
        for (p, q), c in poly.items():
            occ_list[mode_a], occ_list[mode_b] = p, q
            row = fspace.index[tuple(occ_list)]
            U[row, col] += c * math.sqrt(fact[p] * fact[q]) / scale
    return U


def beamsplitter_unitary(fspace, spec: BeamsplitterSpec) -> np.ndarray:
    S = mode_transfer_matrix(spec.eta, spec.convention)
    return _two_mode_unitary(
        fspace.num_modes,
        fspace.cutoff,
        spec.modes[0],
        spec.modes[1],
        tuple(S.ravel()),
    )


def apply_beamsplitter(state, spec: BeamsplitterSpec):
    """Apply the coupler to a FockState or DensityOperator.

    Total photon number is conserved exactly; the operation is unitary on the
    two-mode subspace.
    """
    if isinstance(state, FockState):
        U = beamsplitter_unitary(state.space, spec)
        return FockState(state.space, U @ state.vector)
    if isinstance(state, DensityOperator):
        U = beamsplitter_unitary(state.space, spec)
        return DensityOperator(
            state.space, U @ state.matrix @ U.conj().T, check=False
        )
    raise TypeError(f"cannot apply beamsplitter to {type(state).__name__}")


def loss_channel(rho, mode: int, transmission: float) -> DensityOperator:
    """Photon loss of transmission t on one mode.

    Implemented as a beamsplitter of reflectivity t into a fresh vacuum
    environment mode which is then traced out.  Trace preserving.
    """
    if not 0.0 <= transmission <= 1.0:
        raise ValueError(f"transmission {transmission} outside [0, 1]")
    if isinstance(rho, FockState):
        rho = rho.to_density()
    if transmission == 1.0:
        return rho
    env = rho.num_modes
    big = append_vacuum_modes(rho, 1)
    big = apply_beamsplitter(big, BeamsplitterSpec(transmission, (mode, env)))
    return partial_trace(big, keep=range(rho.num_modes))


def detector_povm(model: DetectorModel, cutoff: int = 3):
    """Diagonal POVM pair (E_noclick, E_click) over photon number 0..cutoff.

    For the default non-resolving detector, <n|E_noclick|n> = (1-d)^n per
    photon, so E_noclick + E_click is exactly the identity.  The
    number-resolving variant returns the exactly-one-photon element in the
    click slot (completeness then requires the discarded remainder).
    """
    d = model.efficiency
    n = np.arange(cutoff + 1)
    e_noclick = (1.0 - d) ** n
    if model.number_resolving:
        with np.errstate(invalid="ignore"):
            e_click = d * n * (1.0 - d) ** np.maximum(n - 1, 0)
        e_click[0] = 0.0
    else:
        e_click = 1.0 - e_noclick
    return e_noclick, e_click


# Click weight models for a physical detector watching a group of modes.
# "event": fires with probability d whenever any photon arrives.  This is the
#   model under which detector inefficiency factors out of every heralding
#   probability as an overall d per click.
# "photon": each photon is missed independently, click weight 1-(1-d)^n.
# "pnr": number-resolved, weight d*n*(1-d)^(n-1) for exactly one detected.
HERALD_MODELS = ("event", "photon", "pnr")


def click_weight(n: int, efficiency: float, model: str = "event") -> float:
    if n == 0:
        return 0.0
    if model == "event":
        return efficiency
    if model == "photon":
        return 1.0 - (1.0 - efficiency) ** n
    if model == "pnr":
        return efficiency * n * (1.0 - efficiency) ** (n - 1)
    raise ValueError(f"unknown herald model {model!r}")


def noclick_weight(n: int, efficiency: float, model: str = "event") -> float:
    if n == 0:
        return 1.0
    if model == "event":
        return 1.0 - efficiency
    if model == "photon":
        return (1.0 - efficiency) ** n
    if model == "pnr":
        # Silent partner of a resolved herald: nothing detected.
        return (1.0 - efficiency) ** n
    raise ValueError(f"unknown herald model {model!r}")


def embed_distinguishability(spec: DistinguishabilitySpec | float) -> FockState:
    """Single photon split over a (matched, orthogonal) mode pair.

    Amplitude sqrt(V) sits in the mode that interferes with the signal and
    sqrt(1-V) in an auxiliary mode that never does; V is then exactly the
    two-photon interference visibility against the signal.
    """
    if not isinstance(spec, DistinguishabilitySpec):
        spec = DistinguishabilitySpec(float(spec))
    v = spec.visibility
    matched = make_basis_state(2, 1, [1, 0])
    ortho = make_basis_state(2, 1, [0, 1])
    if v == 1.0:
        return matched
    if v == 0.0:
        return ortho
    return superpose([(math.sqrt(v), matched), (math.sqrt(1.0 - v), ortho)])


def hom_coincidence_probability(visibility: float, efficiency: float = 1.0) -> float:
    """Coincidence rate for signal vs embedded ancilla on a balanced coupler.

    Modes: 0 signal, 1 ancilla matched, 2 ancilla orthogonal, 3 vacuum
    partner of the orthogonal sector on the signal side.  Detector A watches
    modes (0, 3), detector B watches (1, 2).
    """
    cutoff = 2
    sig = make_basis_state(4, cutoff, [1, 0, 0, 0])
    anc = embed_distinguishability(visibility)
    amp = np.zeros(space(4, cutoff).dim, dtype=complex)
    fspace = space(4, cutoff)
    for occ, a in anc.amplitudes.items():
        full = (1, occ[0], occ[1], 0)
        amp[fspace.index[full]] = a
    state = FockState(fspace, amp)
    state = apply_beamsplitter(state, BeamsplitterSpec(0.5, (0, 1)))
    state = apply_beamsplitter(state, BeamsplitterSpec(0.5, (3, 2)))
    coinc = 0.0
    for occ, a in state.amplitudes.items():
        n_a = occ[0] + occ[3]
        n_b = occ[1] + occ[2]
        coinc += (
            abs(a) ** 2
            * click_weight(n_a, efficiency, "photon")
            * click_weight(n_b, efficiency, "photon")
        )
    return float(coinc)


def hom_visibility(visibility: float, efficiency: float = 1.0) -> float:
    """Measured dip visibility 1 - C(matched) / C(distinguishable)."""
    c_matched = hom_coincidence_probability(visibility, efficiency)
    c_dist = hom_coincidence_probability(0.0, efficiency)
    return float(1.0 - c_matched / c_dist)
