"""Polarization analysis of the amplifier output and count-based estimators.

The output analyzer projects the two polarization modes onto one of the
three canonical bases; D5 carries the first projector of the pair, D6 the
second, and heralded pulses with no analyzer click estimate the vacuum
weight.  Reconstruction uses linear inversion of the three basis asymmetries
followed by projection to the closest physical state (eigenvalue clipping
with trace renormalization).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .fock import DensityOperator, QubitAmplitudes, space

_EIG_TOL = 1e-10


@dataclass(frozen=True)
class PolarizationBasis:
    """Pair of orthogonal single-photon analyzer settings."""

    label: str
    plus: QubitAmplitudes
    minus: QubitAmplitudes

    def projector_vectors(self):
        return self.plus.as_array(), self.minus.as_array()


_S = 1.0 / math.sqrt(2.0)

BASES = {
    "HV": PolarizationBasis("H/V", QubitAmplitudes(1, 0), QubitAmplitudes(0, 1)),
    "DA": PolarizationBasis("D/A", QubitAmplitudes(_S, _S), QubitAmplitudes(_S, -_S)),
    "RL": PolarizationBasis(
        "R/L", QubitAmplitudes(_S, -1j * _S), QubitAmplitudes(_S, 1j * _S)
    ),
}


def basis_by_label(label: str) -> PolarizationBasis:
    key = label.replace("/", "").upper()
    if key not in BASES:
        raise ValueError(f"unknown basis {label!r}; expected one of H/V, D/A, R/L")
    return BASES[key]


@dataclass(frozen=True)
class CountsRecord:
    """Coincidence tallies: c3 heralded pulses, c4 with an analyzer click.

    ``breakdown`` maps herald pattern name -> {"C3": .., "D5": .., "D6": ..}.
    Counts are integers in sampled runs and expectations in exact-probability
    runs.
    """

    c3: float
    c4: float
    breakdown: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.c3 < 0 or self.c4 < 0:
            raise ValueError("counts must be nonnegative")
        if self.c4 > self.c3 + 1e-9:
            raise ValueError(f"C4 {self.c4} exceeds C3 {self.c3}")

    def detector_total(self, detector: str) -> float:
        return sum(entry.get(detector, 0.0) for entry in self.breakdown.values())

    @property
    def ratio(self) -> float:
        if self.c3 <= 0:
            raise ValueError("C3 must be positive to form C4/C3")
        return self.c4 / self.c3

    @staticmethod
    def merge(records: "list[CountsRecord]") -> "CountsRecord":
        c3 = sum(r.c3 for r in records)
        c4 = sum(r.c4 for r in records)
        breakdown: dict = {}
        for r in records:
            for pat, entry in r.breakdown.items():
                slot = breakdown.setdefault(pat, {"C3": 0.0, "D5": 0.0, "D6": 0.0})
                for k, v in entry.items():
                    slot[k] = slot.get(k, 0.0) + v
        return CountsRecord(c3, c4, breakdown)


@dataclass(frozen=True)
class QubitState:
    """Qubit-subspace density matrix on {|H>, |V>} plus the vacuum weight."""

    matrix: np.ndarray
    vacuum_weight: float

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (2, 2):
            raise ValueError(f"qubit matrix must be 2x2, got {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-10:
            raise ValueError("qubit matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > 1e-10:
            raise ValueError(f"qubit matrix trace {np.trace(mat).real} != 1")
        if np.linalg.eigvalsh(mat)[0] < -_EIG_TOL:
            raise ValueError("qubit matrix has a negative eigenvalue")
        if not -1e-12 <= self.vacuum_weight <= 1.0 + 1e-12:
            raise ValueError(f"vacuum weight {self.vacuum_weight} outside [0, 1]")
        object.__setattr__(self, "matrix", _readonly_copy(mat))
        object.__setattr__(
            self, "vacuum_weight", float(min(max(self.vacuum_weight, 0.0), 1.0))
        )

    @property
    def qubit_weight(self) -> float:
        return 1.0 - self.vacuum_weight

    def fidelity_to(self, qubit: QubitAmplitudes) -> float:
        """Overlap of the qubit subspace with a pure polarization state."""
        v = qubit.as_array()
        return float(np.real(v.conj() @ self.matrix @ v))

    def output_fidelity(self, qubit: QubitAmplitudes) -> float:
        """Fidelity of the full (vacuum + qubit) state to the pure photon."""
        return self.qubit_weight * self.fidelity_to(qubit)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def bloch_vector(self) -> np.ndarray:
        m = self.matrix
        return np.array(
            [
                2.0 * m[0, 1].real,
                -2.0 * m[0, 1].imag,
                (m[0, 0] - m[1, 1]).real,
            ]
        )

    def to_json_dict(self) -> dict:
        return {
            "modes": 2,
            "cutoff": 1,
            "basis": [[1, 0], [0, 1]],
            "re": np.real(self.matrix).tolist(),
            "im": np.imag(self.matrix).tolist(),
            "vacuum_weight": self.vacuum_weight,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(data: dict) -> "QubitState":
        mat = np.asarray(data["re"], dtype=float) + 1j * np.asarray(
            data["im"], dtype=float
        )
        return QubitState(mat, float(data["vacuum_weight"]))


def _readonly_copy(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


def qubit_state_from_density(rho: DensityOperator, atol: float = 1e-9) -> QubitState:
    """Extract (vacuum weight, normalized qubit matrix) from a two-mode state.

    Population outside the 0- and 1-photon sectors must be negligible.
    """
    if rho.num_modes != 2:
        raise ValueError("expected a state on the two polarization modes")
    fspace = rho.space
    i0 = fspace.index[(0, 0)]
    ih = fspace.index[(1, 0)]
    iv = fspace.index[(0, 1)]
    mat = rho.matrix / rho.trace
    higher = 1.0 - np.real(mat[i0, i0] + mat[ih, ih] + mat[iv, iv])
    if abs(higher) > atol:
        raise ValueError(f"population {higher} outside the vacuum+qubit sectors")
    vac = float(np.real(mat[i0, i0]))
    block = np.array(
        [[mat[ih, ih], mat[ih, iv]], [mat[iv, ih], mat[iv, iv]]], dtype=complex
    )
    qw = np.real(np.trace(block))
    if qw <= 0:
        return QubitState(np.eye(2) / 2.0, 1.0)
    return QubitState(block / qw, vac / (vac + qw))


def measurement_probs(rho_out: DensityOperator, basis) -> tuple[float, float, float]:
    """Ideal analyzer outcome probabilities (p_D5, p_D6, p_none) in a basis."""
    if isinstance(basis, str):
        basis = basis_by_label(basis)
    if rho_out.num_modes != 2:
        raise ValueError("analyzer expects the two polarization output modes")
    fspace = rho_out.space
    mat = rho_out.matrix / rho_out.trace
    ih, iv = fspace.index[(1, 0)], fspace.index[(0, 1)]
    block = np.array(
        [[mat[ih, ih], mat[ih, iv]], [mat[iv, ih], mat[iv, iv]]], dtype=complex
    )
    vp, vm = basis.projector_vectors()
    p5 = float(np.real(vp.conj() @ block @ vp))
    p6 = float(np.real(vm.conj() @ block @ vm))
    return p5, p6, 1.0 - p5 - p6


def project_to_physical(matrix: np.ndarray) -> np.ndarray:
    """Clip negative eigenvalues to zero and renormalize the trace."""
    vals, vecs = np.linalg.eigh(matrix)
    clipped = np.clip(vals, 0.0, None)
    if clipped.sum() <= 0:
        return np.eye(matrix.shape[0], dtype=complex) / matrix.shape[0]
    out = (vecs * clipped) @ vecs.conj().T
    return out / np.trace(out).real


def reconstruct_qubit(
    counts: dict,
    eps_det: float = 1.0,
    eps_path: float = 1.0,
) -> QubitState:
    """Linear-inversion tomography from per-basis coincidence counts.

    ``counts`` maps a basis key ("HV", "DA", "RL") to a CountsRecord whose
    breakdown carries the D5/D6 click totals.  The vacuum weight comes from
    the pooled no-click fraction corrected by the detection and path
    efficiency, mirroring the input-size estimator.
    """
    mat = np.eye(2, dtype=complex) / 2.0
    for key in ("HV", "DA", "RL"):
        if key not in counts:
            raise ValueError(f"missing counts for basis {key}")
        rec = counts[key]
        n_plus = rec.detector_total("D5")
        n_minus = rec.detector_total("D6")
        total = n_plus + n_minus
        if total <= 0:
            raise ValueError(f"no analyzer clicks recorded in basis {key}")
        s = (n_plus - n_minus) / total
        vp, vm = BASES[key].projector_vectors()
        observable = np.outer(vp, vp.conj()) - np.outer(vm, vm.conj())
        mat = mat + 0.5 * s * observable
    mat = project_to_physical(mat)

    c3 = sum(counts[k].c3 for k in ("HV", "DA", "RL"))
    c4 = sum(counts[k].c4 for k in ("HV", "DA", "RL"))
    if c3 <= 0:
        raise ValueError("no heralded pulses recorded")
    qubit_weight = min((c4 / c3) / (eps_det * eps_path), 1.0)
    return QubitState(mat, 1.0 - qubit_weight)


def qubit_fidelity(a: QubitState | np.ndarray, b: QubitState | np.ndarray) -> float:
    """Mixed-state fidelity of two qubit matrices,
    F = Tr(ab) + 2 sqrt(det a det b)."""
    ma = a.matrix if isinstance(a, QubitState) else np.asarray(a, dtype=complex)
    mb = b.matrix if isinstance(b, QubitState) else np.asarray(b, dtype=complex)
    t = float(np.real(np.trace(ma @ mb)))
    da = max(float(np.real(np.linalg.det(ma))), 0.0)
    db = max(float(np.real(np.linalg.det(mb))), 0.0)
    return float(min(t + 2.0 * math.sqrt(da * db), 1.0))


def estimate_gamma1(c4: float, c3: float, eps_det: float, eps_path: float) -> float:
    """Input single-photon weight (C4/C3) / (eps_det * eps_path)."""
    if c3 <= 0:
        raise ValueError("C3 must be positive")
    if c4 < 0:
        raise ValueError("C4 must be nonnegative")
    return (c4 / c3) / (eps_det * eps_path)


@dataclass(frozen=True)
class MeasuredGain:
    """Double-ratio intensity gain with per-herald-combination statistics."""

    value: float
    per_pattern: dict
    mean: float
    std: float
    stderr: float

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "per_pattern": dict(self.per_pattern),
            "mean": self.mean,
            "std": self.std,
            "stderr": self.stderr,
        }


def _pattern_ratio(rec: CountsRecord, pattern: str):
    entry = rec.breakdown.get(pattern)
    if not entry or entry.get("C3", 0.0) <= 0:
        return None
    clicks = entry.get("D5", 0.0) + entry.get("D6", 0.0)
    return clicks / entry["C3"]


def measured_gain(counts_amp: CountsRecord, counts_noamp: CountsRecord) -> MeasuredGain:
    """G = (C4/C3)_amplified / (C4/C3)_reference.

    Also evaluates the ratio per herald combination present in both records
    and reports their mean and standard deviation; the standard error of the
    pooled value follows from binomial counting statistics.
    """
    if counts_amp.c3 <= 0 or counts_noamp.c3 <= 0:
        raise ValueError("both records need C3 > 0")
    r_ref = counts_noamp.ratio
    if r_ref <= 0:
        raise ValueError("reference record has no analyzer clicks")
    value = counts_amp.ratio / r_ref

    per_pattern = {}
    for pattern in counts_amp.breakdown:
        ra = _pattern_ratio(counts_amp, pattern)
        rn = _pattern_ratio(counts_noamp, pattern)
        if ra is not None and rn not in (None, 0.0):
            per_pattern[pattern] = ra / rn
    vals = list(per_pattern.values())
    mean = float(np.mean(vals)) if vals else value
    std = float(np.std(vals)) if vals else 0.0

    rel_var = 0.0
    for rec in (counts_amp, counts_noamp):
        if rec.c4 > 0:
            rel_var += max(1.0 / rec.c4 - 1.0 / rec.c3, 0.0)
    stderr = value * math.sqrt(rel_var)
    return MeasuredGain(float(value), per_pattern, mean, std, float(stderr))


def success_probability_estimate(
    counts_amp: CountsRecord, counts_noamp: CountsRecord
) -> float:
    """Heralding-rate ratio C3_amplified / C3_reference.

    Estimates the success probability conditional on both ancillas being
    delivered and detected (the tau = delta = 1 figure).
    """
    if counts_noamp.c3 <= 0:
        raise ValueError("reference C3 must be positive")
    return counts_amp.c3 / counts_noamp.c3


def apply_unitary_correction(state: QubitState, unitary: np.ndarray) -> QubitState:
    """Undo a systematic single-qubit rotation: U rho U^dag."""
    u = np.asarray(unitary, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("correction must be a 2x2 matrix")
    if np.max(np.abs(u @ u.conj().T - np.eye(2))) > 1e-10:
        raise ValueError("correction matrix is not unitary within 1e-10")
    return QubitState(u @ state.matrix @ u.conj().T, state.vacuum_weight)


# ---------------------------------------------------------------------------
# Counts file format: CSV with columns basis,detector,herald_pattern,C3,C4


def write_counts_csv(fileobj, counts: dict) -> None:
    """Write per-basis counts records; one row per (basis, pattern, detector)."""
    writer = csv.writer(fileobj)
    writer.writerow(["basis", "detector", "herald_pattern", "C3", "C4"])
    for basis_key, rec in counts.items():
        for pattern, entry in rec.breakdown.items():
            for det in ("D5", "D6"):
                writer.writerow(
                    [basis_key, det, pattern, entry.get("C3", 0), entry.get(det, 0)]
                )


def counts_to_csv(counts: dict) -> str:
    buf = io.StringIO()
    write_counts_csv(buf, counts)
    return buf.getvalue()


def read_counts_csv(fileobj) -> dict:
    """Inverse of :func:`write_counts_csv`."""
    reader = csv.DictReader(fileobj)
    staged: dict = {}
    for row in reader:
        basis = row["basis"]
        pattern = row["herald_pattern"]
        det = row["detector"]
        slot = staged.setdefault(basis, {}).setdefault(
            pattern, {"C3": 0.0, "D5": 0.0, "D6": 0.0}
        )
        slot["C3"] = float(row["C3"])
        slot[det] = slot.get(det, 0.0) + float(row["C4"])
    counts = {}
    for basis, patterns in staged.items():
        c3 = sum(entry["C3"] for entry in patterns.values())
        c4 = sum(entry.get("D5", 0.0) + entry.get("D6", 0.0) for entry in patterns.values())
        counts[basis] = CountsRecord(c3, c4, patterns)
    return counts
