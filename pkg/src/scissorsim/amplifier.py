"""Two-stage heralded noiseless amplifier for a polarization qubit.

The input is a lossy dual-rail qubit on modes (H, V),

    rho_in = gamma0 |00><00| + gamma1 |psi><psi| ,

and each polarization mode is amplified by one heralded scissors stage: an
ancilla photon is split at a variable coupler of reflectivity eta (amplitude
sqrt(eta) toward the stage output), the remaining arm meets the signal mode
on a balanced coupler, and success is heralded by a click on exactly one of
the two detectors behind the balanced coupler.  The amplitude gain is
g = sqrt(eta / (1 - eta)).  Stage 1 acts on V (detectors D1/D2), stage 2 on
H (detectors D3/D4); the stages address disjoint modes, so coherence between
the two polarization arms is kept automatically.

Imperfections covered here:
  * source efficiency tau: each ancilla is a Bernoulli vacuum admixture,
  * herald detector efficiency delta with selectable click model,
  * mode mismatch: an ancilla photon of overlap sqrt(V) with the signal
    carries its residual amplitude in an orthogonal sector mode that never
    interferes with the signal.

Herald click models (see elements.click_weight):
  * "event" (default): a detector fires with probability delta whenever at
    least one photon arrives.  Under this model detector inefficiency only
    rescales heralding probabilities (by delta per click) and the closed-form
    imperfection model below is reproduced exactly.
  * "photon": per-photon misses, 1 - (1-delta)^n.  Deviates from the closed
    form when two photons bunch onto one herald detector.
  * "pnr": number-resolved heralding on exactly one photon.  In the ideal
    limit this realizes the textbook scissors transformation, i.e. the
    output weights (gamma0, g^2 gamma1)/N with N = gamma0 + g^2 gamma1.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .elements import (
    BeamsplitterSpec,
    apply_beamsplitter,
    click_weight,
    embed_distinguishability,
    loss_channel,
    mode_transfer_matrix,
    noclick_weight,
)
from .fock import (
    DensityOperator,
    FockState,
    QubitAmplitudes,
    append_vacuum_modes,
    make_basis_state,
    space,
    superpose,
    tensor,
    traced_with_weights,
)

SQRT_HALF = 1.0 / math.sqrt(2.0)

#: The six canonical polarization inputs.
POLARIZATIONS = {
    "H": QubitAmplitudes(1.0, 0.0),
    "V": QubitAmplitudes(0.0, 1.0),
    "D": QubitAmplitudes(SQRT_HALF, SQRT_HALF),
    "A": QubitAmplitudes(SQRT_HALF, -SQRT_HALF),
    "R": QubitAmplitudes(SQRT_HALF, -1j * SQRT_HALF),
    "L": QubitAmplitudes(SQRT_HALF, 1j * SQRT_HALF),
}

_CONFIG_FIELDS = (
    "gamma1",
    "qubit",
    "eta_H",
    "eta_V",
    "tau",
    "delta",
    "V1",
    "V2",
    "eps_det",
    "eps_path",
    "cutoff",
)


@dataclass(frozen=True)
class CircuitConfig:
    """All physical parameters of the qubit amplifier circuit.

    gamma1\tsingle-photon weight of the input state (gamma0 = 1 - gamma1)
    qubit\tpolarization amplitudes of the single-photon component
    eta_H, eta_V\tvariable coupler reflectivities, g^2 = eta / (1 - eta)
    tau\tancilla source efficiency
    delta\therald detector efficiency
    V1, V2\tmode overlap of stage-1 / stage-2 ancilla with the signal
    eps_det, eps_path\toutput detection and path efficiency (estimator side)
    cutoff\ttotal photon-number cap of the simulation space
    """

    gamma1: float
    qubit: QubitAmplitudes = POLARIZATIONS["R"]
    eta_H: float = 0.5
    eta_V: float = 0.5
    tau: float = 1.0
    delta: float = 1.0
    V1: float = 1.0
    V2: float = 1.0
    eps_det: float = 0.5
    eps_path: float = 0.64
    cutoff: int = 3

    def __post_init__(self):
        if not 0.0 <= self.gamma1 <= 1.0:
            raise ValueError(f"gamma1 {self.gamma1} outside [0, 1]")
        for name in ("eta_H", "eta_V"):
            eta = getattr(self, name)
            if not 0.0 < eta < 1.0:
                raise ValueError(f"{name} {eta} outside (0, 1)")
        for name in ("tau", "delta"):
            val = getattr(self, name)
            if not 0.0 < val <= 1.0:
                raise ValueError(f"{name} {val} outside (0, 1]")
        for name in ("V1", "V2"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} {val} outside [0, 1]")
        for name in ("eps_det", "eps_path"):
            val = getattr(self, name)
            if not 0.0 < val <= 1.0:
                raise ValueError(f"{name} {val} outside (0, 1]")
        if self.cutoff < 3:
            raise ValueError("circuit needs cutoff >= 3 (signal plus two ancillas)")

    @property
    def gamma0(self) -> float:
        return 1.0 - self.gamma1

    @property
    def g2_H(self) -> float:
        return self.eta_H / (1.0 - self.eta_H)

    @property
    def g2_V(self) -> float:
        return self.eta_V / (1.0 - self.eta_V)

    @property
    def g2(self) -> float:
        """Common splitting ratio; geometric mean if the stages differ."""
        if self.eta_H == self.eta_V:
            return self.g2_H
        return math.sqrt(self.g2_H * self.g2_V)

    def with_(self, **changes) -> "CircuitConfig":
        return replace(self, **changes)

    @staticmethod
    def from_g2(g2: float, **kwargs) -> "CircuitConfig":
        if g2 <= 0:
            raise ValueError(f"g2 must be positive, got {g2}")
        eta = g2 / (1.0 + g2)
        kwargs.setdefault("eta_H", eta)
        kwargs.setdefault("eta_V", eta)
        return CircuitConfig(**kwargs)

    def to_json_dict(self) -> dict:
        return {
            "gamma1": self.gamma1,
            "qubit": {
                "alpha": [self.qubit.alpha.real, self.qubit.alpha.imag],
                "beta": [self.qubit.beta.real, self.qubit.beta.imag],
            },
            "eta_H": self.eta_H,
            "eta_V": self.eta_V,
            "tau": self.tau,
            "delta": self.delta,
            "V1": self.V1,
            "V2": self.V2,
            "eps_det": self.eps_det,
            "eps_path": self.eps_path,
            "cutoff": self.cutoff,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @staticmethod
    def from_json_dict(data: dict) -> "CircuitConfig":
        unknown = set(data) - set(_CONFIG_FIELDS)
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        kwargs = dict(data)
        if "qubit" in kwargs:
            q = kwargs["qubit"]
            kwargs["qubit"] = QubitAmplitudes(
                complex(q["alpha"][0], q["alpha"][1]),
                complex(q["beta"][0], q["beta"][1]),
            )
        return CircuitConfig(**kwargs)

    @staticmethod
    def from_json(text: str) -> "CircuitConfig":
        return CircuitConfig.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class HeraldPattern:
    """Which herald detector clicked in each stage; success=False is the
    discard outcome (no valid click combination)."""

    stage1: str | None
    stage2: str | None
    success: bool = True

    @property
    def name(self) -> str:
        if not self.success:
            return "fail"
        return "".join(p for p in (self.stage1, self.stage2) if p)


@dataclass(frozen=True)
class HeraldedOutcome:
    pattern: HeraldPattern
    probability: float
    output: DensityOperator


@dataclass(frozen=True)
class AmplifierResult:
    """Per-pattern heralded outcomes plus their probability-weighted mixture."""

    outcomes: list[HeraldedOutcome]
    combined: DensityOperator
    p_success: float

    @property
    def success_outcomes(self) -> list[HeraldedOutcome]:
        return [o for o in self.outcomes if o.pattern.success]

    @property
    def fail_outcome(self) -> HeraldedOutcome:
        return next(o for o in self.outcomes if not o.pattern.success)


@dataclass(frozen=True)
class AnalyticOutput:
    """Closed-form output of the imperfection model (perfect mode matching).

    L is the vacuum-inflation term from source inefficiency and
    non-number-resolved heralding; P the total success probability over the
    four herald combinations (P/4 each).
    """

    g2: float
    N: float
    L: float
    vacuum_weight: float
    qubit_weight: float
    G_nom: float
    P: float

    @property
    def p_per_pattern(self) -> float:
        return self.P / 4.0

    def to_json_dict(self) -> dict:
        return {
            "g2": self.g2,
            "N": self.N,
            "L": self.L,
            "vacuum_weight": self.vacuum_weight,
            "qubit_weight": self.qubit_weight,
            "G_nom": self.G_nom,
            "P": self.P,
        }


def single_photon_state(qubit: QubitAmplitudes, cutoff: int = 3) -> FockState:
    """alpha |1_H 0_V> + beta |0_H 1_V> on the two polarization modes."""
    h = make_basis_state(2, cutoff, [1, 0])
    v = make_basis_state(2, cutoff, [0, 1])
    return superpose([(qubit.alpha, h), (qubit.beta, v)])


def build_input(config: CircuitConfig) -> DensityOperator:
    """Lossy-channel input state on modes (H, V).

    A pure single-photon qubit is sent through polarization-independent loss
    of transmission gamma1, leaving the vacuum/single-photon mixture with
    weights (gamma0, gamma1).
    """
    if config.gamma1 == 0.0:
        return make_basis_state(2, config.cutoff, [0, 0]).to_density()
    psi = single_photon_state(config.qubit, config.cutoff)
    rho = loss_channel(psi.to_density(), 0, config.gamma1)
    rho = loss_channel(rho, 1, config.gamma1)
    return rho


# ---------------------------------------------------------------------------
# Stage machinery


@dataclass(frozen=True)
class _StageGeometry:
    rho_post: DensityOperator
    labels: tuple[str, ...]
    sig: int
    arm: int
    out: int
    sig_perp: int | None
    arm_perp: int | None
    out_perp: int | None
    eta: float
    convention: str


def _ancilla_block(tau: float, visibility: float) -> DensityOperator:
    """Ancilla state; two modes (matched, orthogonal) when visibility < 1."""
    if visibility < 1.0:
        phi = embed_distinguishability(visibility).to_density()
        vac = make_basis_state(2, 1, [0, 0]).to_density()
    else:
        phi = make_basis_state(1, 1, [1]).to_density()
        vac = make_basis_state(1, 1, [0]).to_density()
    mat = tau * phi.matrix + (1.0 - tau) * vac.matrix
    return DensityOperator(phi.space, mat, check=False)


def _stage_propagate(
    rho: DensityOperator,
    labels: Sequence[str],
    pol: str,
    eta: float,
    tau: float,
    visibility: float,
    convention: str,
) -> _StageGeometry:
    """Inject the ancilla and apply the stage couplers to mode ``pol``."""
    if not 0.0 < eta < 1.0:
        raise ValueError(f"stage reflectivity {eta} is degenerate")
    labels = list(labels)
    s = labels.index(pol)
    m0 = len(labels)
    cutoff = rho.cutoff
    use_perp = visibility < 1.0

    joint = tensor(rho, _ancilla_block(tau, visibility), cutoff=cutoff)
    if use_perp:
        # fresh modes: out(=ancilla matched), out_perp, arm, arm_perp, sig_perp
        out, out_perp = m0, m0 + 1
        joint = append_vacuum_modes(joint, 3)
        arm, arm_perp, sig_perp = m0 + 2, m0 + 3, m0 + 4
        ext = labels + ["_out", "_outp", "_arm", "_armp", "_sigp"]
    else:
        out = m0
        joint = append_vacuum_modes(joint, 1)
        arm = m0 + 1
        out_perp = arm_perp = sig_perp = None
        ext = labels + ["_out", "_arm"]

    joint = apply_beamsplitter(joint, BeamsplitterSpec(eta, (out, arm), convention))
    joint = apply_beamsplitter(joint, BeamsplitterSpec(0.5, (s, arm), convention))
    if use_perp:
        joint = apply_beamsplitter(
            joint, BeamsplitterSpec(eta, (out_perp, arm_perp), convention)
        )
        joint = apply_beamsplitter(
            joint, BeamsplitterSpec(0.5, (sig_perp, arm_perp), convention)
        )
    return _StageGeometry(
        joint, tuple(ext), s, arm, out, sig_perp, arm_perp, out_perp, eta, convention
    )


def _port_phase(geom: _StageGeometry, port: str) -> complex:
    """Conditional phase aligning this herald port with the reference output.

    c0: ancilla travels the herald arm into the clicked port (vacuum output),
    c1: ancilla exits to the output while the signal photon clicks.
    The correction rotates the single-photon output amplitude so both ports
    produce the same conditional state.
    """
    svar = mode_transfer_matrix(geom.eta, geom.convention)
    s5 = mode_transfer_matrix(0.5, geom.convention)
    row = 0 if port == "top" else 1
    c0 = svar[1, 0] * s5[row, 1]
    c1 = svar[0, 0] * s5[row, 0]
    return cmath.exp(1j * (cmath.phase(c0) - cmath.phase(c1)))


def _stage_select(
    geom: _StageGeometry,
    port: str,
    delta: float,
    herald: str,
) -> tuple[DensityOperator, list[str]]:
    """Weight the herald detectors for one outcome class and discard them.

    ``port`` is "top" (signal-side mixer output), "bot", "both" or "none";
    the last two are failure classes used for bookkeeping checks.
    """
    top_group = [geom.sig] + ([geom.sig_perp] if geom.sig_perp is not None else [])
    bot_group = [geom.arm] + ([geom.arm_perp] if geom.arm_perp is not None else [])
    traced = sorted(top_group + bot_group)
    pos = {m: i for i, m in enumerate(traced)}

    def n_top(occ):
        return sum(occ[pos[m]] for m in top_group)

    def n_bot(occ):
        return sum(occ[pos[m]] for m in bot_group)

    if port == "top":
        weight = lambda occ: click_weight(n_top(occ), delta, herald) * noclick_weight(
            n_bot(occ), delta, herald
        )
    elif port == "bot":
        weight = lambda occ: noclick_weight(n_top(occ), delta, herald) * click_weight(
            n_bot(occ), delta, herald
        )
    elif port == "both":
        weight = lambda occ: click_weight(n_top(occ), delta, herald) * click_weight(
            n_bot(occ), delta, herald
        )
    elif port == "none":
        weight = lambda occ: noclick_weight(n_top(occ), delta, herald) * noclick_weight(
            n_bot(occ), delta, herald
        )
    else:
        raise ValueError(f"unknown herald port {port!r}")

    rho = geom.rho_post
    if port in ("top", "bot"):
        phase = _port_phase(geom, port)
        if abs(phase - 1.0) > 1e-15:
            out_modes = [geom.out] + (
                [geom.out_perp] if geom.out_perp is not None else []
            )
            exponents = np.array(
                [sum(occ[m] for m in out_modes) for occ in rho.space.basis]
            )
            d = phase**exponents
            rho = DensityOperator(
                rho.space, rho.matrix * np.outer(d, d.conj()), check=False
            )

    reduced = traced_with_weights(rho, traced, weight)
    labels = [lab for i, lab in enumerate(geom.labels) if i not in traced]
    return reduced, labels


def _run_stage(rho, labels, pol, eta, tau, delta, visibility, herald, convention, ports):
    geom = _stage_propagate(rho, labels, pol, eta, tau, visibility, convention)
    results = {}
    for port in ports:
        reduced, labs = _stage_select(geom, port, delta, herald)
        labs = [
            pol if lab == "_out" else (pol + "_perp" if lab == "_outp" else lab)
            for lab in labs
        ]
        results[port] = (reduced, labs)
    return results


def _fold_sectors(rho: DensityOperator, labels: Sequence[str]) -> DensityOperator:
    """Merge each polarization's orthogonal-sector mode into its main mode.

    The sector label is unobservable to polarization measurements, so the
    folded operator keeps coherence only between entries whose sector-mode
    occupations agree, and photon counts add per polarization.
    """
    labels = list(labels)
    mains, perps = [], []
    for pol in ("H", "V"):
        mains.append(labels.index(pol))
        perp = pol + "_perp"
        perps.append(labels.index(perp) if perp in labels else None)
    out_space = space(2, rho.cutoff)
    out = np.zeros((out_space.dim, out_space.dim), dtype=complex)
    basis = rho.space.basis
    merged_idx = []
    sector_sig = []
    for occ in basis:
        counts = []
        sig = []
        for main, perp in zip(mains, perps):
            n_perp = occ[perp] if perp is not None else 0
            counts.append(occ[main] + n_perp)
            sig.append(n_perp)
        merged_idx.append(out_space.index[tuple(counts)])
        sector_sig.append(tuple(sig))
    nz = np.argwhere(np.abs(rho.matrix) > 0.0)
    for i, j in nz:
        if sector_sig[i] == sector_sig[j]:
            out[merged_idx[i], merged_idx[j]] += rho.matrix[i, j]
    return DensityOperator(out_space, out, check=False)


def _fold_single(rho: DensityOperator, labels: Sequence[str], pol: str) -> DensityOperator:
    labels = list(labels)
    main = labels.index(pol)
    perp = labels.index(pol + "_perp") if pol + "_perp" in labels else None
    out_space = space(1, rho.cutoff)
    out = np.zeros((out_space.dim, out_space.dim), dtype=complex)
    basis = rho.space.basis
    for i, occ_i in enumerate(basis):
        for j, occ_j in enumerate(basis):
            sig_i = occ_i[perp] if perp is not None else 0
            sig_j = occ_j[perp] if perp is not None else 0
            if sig_i != sig_j:
                continue
            ni = occ_i[main] + sig_i
            nj = occ_j[main] + sig_j
            out[out_space.index[(ni,)], out_space.index[(nj,)]] += rho.matrix[i, j]
    return DensityOperator(out_space, out, check=False)


def _check_no_vacuum_coherence(rho: DensityOperator, tol: float = 1e-12):
    """The loss channel produces no vacuum/single-photon coherence and the
    heralding must not create any; surfaced as a hard check."""
    fspace = rho.space
    vac = fspace.index[(0,) * fspace.num_modes]
    for occ in fspace.basis:
        if sum(occ) == 1:
            val = abs(rho.matrix[vac, fspace.index[occ]])
            if val > tol:
                raise AssertionError(
                    f"vacuum coherence {val} to {occ} exceeds {tol}"
                )


def nla_stage(
    rho: DensityOperator | FockState,
    eta: float,
    tau: float = 1.0,
    delta: float = 1.0,
    visibility: float = 1.0,
    herald: str = "event",
    convention: str = "real",
) -> list[HeraldedOutcome]:
    """Single amplifier stage on a one-mode input with support on {0, 1}.

    Returns the two heralded outcomes (detector "D1" = signal-side mixer
    port, "D2" = other port) followed by the discard outcome.  Conditional
    outputs carry the port phase correction, so both success patterns agree.
    """
    if isinstance(rho, FockState):
        rho = rho.to_density()
    if rho.num_modes != 1:
        raise ValueError("nla_stage expects a single-mode state")
    for occ, p in rho.diagonal_probabilities().items():
        if occ[0] > 1 and p > 1e-14:
            raise ValueError("input support must lie in the {0, 1} subspace")
    if rho.cutoff < 3:
        pad = space(1, 3)
        mat = np.zeros((pad.dim, pad.dim), dtype=complex)
        for i, occ_i in enumerate(rho.space.basis):
            for j, occ_j in enumerate(rho.space.basis):
                mat[pad.index[occ_i], pad.index[occ_j]] = rho.matrix[i, j]
        rho = DensityOperator(pad, mat, check=False)
    results = _run_stage(
        rho, ["S"], "S", eta, tau, delta, visibility, herald, convention,
        ports=("top", "bot"),
    )
    outcomes = []
    total = 0.0
    for port, det in (("top", "D1"), ("bot", "D2")):
        reduced, labs = results[port]
        folded = _fold_single(reduced, labs, "S")
        prob = folded.trace
        total += prob
        output = folded.normalized() if prob > 1e-300 else folded
        outcomes.append(
            HeraldedOutcome(HeraldPattern(det, None), float(prob), output)
        )
    vac = make_basis_state(1, rho.cutoff, [0]).to_density()
    outcomes.append(
        HeraldedOutcome(HeraldPattern(None, None, success=False), float(1.0 - total), vac)
    )
    return outcomes


def qubit_amplifier(
    config: CircuitConfig,
    herald: str = "event",
    convention: str = "real",
) -> AmplifierResult:
    """Run the full two-stage amplifier on the configured input.

    Returns all four successful herald combinations (each with its
    probability and normalized two-mode conditional output), the discard
    outcome, and the probability-weighted combined output state.
    """
    rho_in = build_input(config)
    stage1 = _run_stage(
        rho_in, ["H", "V"], "V", config.eta_V, config.tau, config.delta,
        config.V1, herald, convention, ports=("top", "bot"),
    )
    outcomes = []
    weighted = None
    p_total = 0.0
    for p1, det1 in (("top", "D1"), ("bot", "D2")):
        rho1, labels1 = stage1[p1]
        stage2 = _run_stage(
            rho1, labels1, "H", config.eta_H, config.tau, config.delta,
            config.V2, herald, convention, ports=("top", "bot"),
        )
        for p2, det2 in (("top", "D3"), ("bot", "D4")):
            rho2, labels2 = stage2[p2]
            folded = _fold_sectors(rho2, labels2)
            prob = folded.trace
            p_total += prob
            if weighted is None:
                weighted = folded.matrix.copy()
            else:
                weighted = weighted + folded.matrix
            output = folded.normalized() if prob > 1e-300 else folded
            _check_no_vacuum_coherence(output)
            outcomes.append(
                HeraldedOutcome(HeraldPattern(det1, det2), float(prob), output)
            )
    combined = DensityOperator(space(2, config.cutoff), weighted / p_total, check=False)
    _check_no_vacuum_coherence(combined)
    vac = make_basis_state(2, config.cutoff, [0, 0]).to_density()
    outcomes.append(
        HeraldedOutcome(
            HeraldPattern(None, None, success=False), float(1.0 - p_total), vac
        )
    )
    return AmplifierResult(outcomes, combined, float(p_total))


def herald_class_probabilities(
    config: CircuitConfig,
    herald: str = "event",
    convention: str = "real",
) -> dict[tuple[str, str], float]:
    """Probability of every (stage-1 class, stage-2 class) herald combination.

    Classes are "top"/"bot" (one detector fired), "both" and "none".  For the
    complete click models the sixteen entries add to one, which checks the
    detection bookkeeping end to end.
    """
    rho_in = build_input(config)
    classes = ("top", "bot", "both", "none")
    stage1 = _run_stage(
        rho_in, ["H", "V"], "V", config.eta_V, config.tau, config.delta,
        config.V1, herald, convention, ports=classes,
    )
    table = {}
    for c1 in classes:
        rho1, labels1 = stage1[c1]
        if rho1.trace <= 1e-300:
            for c2 in classes:
                table[(c1, c2)] = 0.0
            continue
        stage2 = _run_stage(
            rho1, labels1, "H", config.eta_H, config.tau, config.delta,
            config.V2, herald, convention, ports=classes,
        )
        for c2 in classes:
            table[(c1, c2)] = float(stage2[c2][0].trace)
    return table


# ---------------------------------------------------------------------------
# Closed-form model (perfect mode matching)


def analytic_model(config: CircuitConfig) -> AnalyticOutput:
    """Closed-form output weights and success probability.

    With g^2 = eta/(1-eta), tau the source efficiency and delta the herald
    efficiency, the unnormalized conditional output per herald combination is

        (delta^2 tau^2 (1-eta)^2 / 4) *
            [ (gamma0 + L gamma1) |00><00| + g^2 gamma1 |psi><psi| ] ,

    with L = (1 + (1-tau) g^2) / tau, so the normalized weights follow from
    gamma0 + gamma1 (g^2 + L) and P = delta^2 tau^2 (1-eta)^2 *
    (gamma0 + gamma1 (g^2 + L)).  Derived for perfect mode matching; the
    visibilities in the config are ignored here.
    """
    if config.eta_H != config.eta_V:
        raise ValueError("closed form assumes equal stage reflectivities")
    eta = config.eta_H
    tau = config.tau
    if tau <= 0.0:
        raise ValueError("source efficiency tau must be positive")
    g2 = eta / (1.0 - eta)
    gamma1 = config.gamma1
    gamma0 = 1.0 - gamma1
    L = (1.0 + (1.0 - tau) * g2) / tau
    denom = gamma0 + gamma1 * (g2 + L)
    vacuum_weight = (gamma0 + L * gamma1) / denom
    qubit_weight = g2 * gamma1 / denom
    N = gamma0 + g2 * gamma1
    P = config.delta**2 * tau**2 * (1.0 - eta) ** 2 * denom
    return AnalyticOutput(
        g2=g2,
        N=N,
        L=L,
        vacuum_weight=vacuum_weight,
        qubit_weight=qubit_weight,
        G_nom=g2 / N,
        P=P,
    )


def gain_nominal(g2: float, gamma1: float) -> float:
    """Nominal intensity gain g^2 / (gamma0 + g^2 gamma1)."""
    if g2 < 0:
        raise ValueError(f"g2 must be nonnegative, got {g2}")
    if not 0.0 <= gamma1 <= 1.0:
        raise ValueError(f"gamma1 {gamma1} outside [0, 1]")
    return g2 / (1.0 - gamma1 + g2 * gamma1)


def gain_saturated(config: CircuitConfig) -> float:
    """Single-photon weight gain including the saturation term L.

    Equals the measured intensity gain of the full simulation at perfect
    mode matching.
    """
    if config.gamma1 == 0.0:
        raise ValueError("gain undefined for a vacuum input (gamma1 = 0)")
    model = analytic_model(config)
    return model.qubit_weight / config.gamma1
