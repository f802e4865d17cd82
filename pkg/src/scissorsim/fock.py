"""Pure and mixed states of a few bosonic modes with a total photon-number cutoff.

The Hilbert space is the direct sum of the number sectors 0..cutoff of M
modes, i.e. the span of occupation vectors (n_1, ..., n_M) with
sum(n_i) <= cutoff.  Passive linear optics never leaves this space, so the
truncation is exact for circuits that inject a bounded number of photons.
Occupation vectors are ordered lexicographically; all operators are dense
numpy arrays (dimensions stay below a few hundred for M <= 8, cutoff 3).

Values are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIGENVALUE_TOL = 1e-10
NORM_TOL = 1e-12


@lru_cache(maxsize=None)
def space(num_modes: int, cutoff: int) -> "FockSpace":
    """Return the (cached) truncated Fock space for ``num_modes`` modes."""
    return FockSpace(num_modes, cutoff)


class FockSpace:
    """Enumeration of occupation-number basis vectors with a total-photon cap.

    Attributes
    ----------
    num_modes : int
        Number of bosonic modes M.
    cutoff : int
        Maximum total photon number across all modes.
    basis : tuple[tuple[int, ...], ...]
        All occupation vectors with total <= cutoff, lexicographic order.
    dim : int
        Number of basis vectors, equal to C(M + cutoff, cutoff).
    """

    def __init__(self, num_modes: int, cutoff: int):
        if num_modes < 1:
            raise ValueError(f"need at least one mode, got {num_modes}")
        if cutoff < 0:
            raise ValueError(f"cutoff must be >= 0, got {cutoff}")
        self.num_modes = num_modes
        self.cutoff = cutoff
        self.basis = tuple(
            occ
            for occ in itertools.product(range(cutoff + 1), repeat=num_modes)
            if sum(occ) <= cutoff
        )
        self.index = {occ: i for i, occ in enumerate(self.basis)}
        self.dim = len(self.basis)

    def index_of(self, occupations: Sequence[int]) -> int:
        occ = tuple(int(n) for n in occupations)
        if len(occ) != self.num_modes:
            raise ValueError(
                f"occupation vector has {len(occ)} entries, space has "
                f"{self.num_modes} modes"
            )
        if any(n < 0 for n in occ):
            raise ValueError(f"negative occupation in {occ}")
        if sum(occ) > self.cutoff:
            raise ValueError(
                f"total photon number {sum(occ)} exceeds cutoff {self.cutoff}"
            )
        return self.index[occ]

    def __repr__(self):
        return f"FockSpace(num_modes={self.num_modes}, cutoff={self.cutoff})"


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class FockState:
    """Pure state of a truncated multimode Fock space.

    Construct through :func:`make_basis_state` / :func:`superpose`, or give a
    coefficient vector over ``space(num_modes, cutoff).basis`` directly.
    """

    def __init__(self, fspace: FockSpace, vector: np.ndarray, normalize: bool = False):
        vec = np.asarray(vector, dtype=complex)
        if vec.shape != (fspace.dim,):
            raise ValueError(f"vector shape {vec.shape} != ({fspace.dim},)")
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ValueError("zero vector does not define a state")
        if normalize:
            vec = vec / norm
        elif abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
        self.space = fspace
        self.vector = _readonly(vec)

    @property
    def num_modes(self) -> int:
        return self.space.num_modes

    @property
    def cutoff(self) -> int:
        return self.space.cutoff

    @property
    def amplitudes(self) -> dict[tuple[int, ...], complex]:
        """Map occupation vector -> complex amplitude (nonzero entries only)."""
        return {
            occ: complex(a)
            for occ, a in zip(self.space.basis, self.vector)
            if a != 0
        }

    def overlap(self, other: "FockState") -> complex:
        _check_same_space(self, other)
        return complex(np.vdot(self.vector, other.vector))

    def to_density(self) -> "DensityOperator":
        return DensityOperator(self.space, np.outer(self.vector, self.vector.conj()))

    def __repr__(self):
        terms = ", ".join(
            f"{occ}: {a:.4g}" for occ, a in list(self.amplitudes.items())[:4]
        )
        return f"FockState({self.space.num_modes}m/c{self.space.cutoff}; {terms})"


class DensityOperator:
    """Mixed state (or unnormalized positive operator) on a truncated Fock space.

    The trace of an unnormalized intermediate carries its event probability;
    use :meth:`normalized` to rescale.  Negative eigenvalues within
    ``EIGENVALUE_TOL`` are tolerated but only removed by an explicit
    :meth:`physicalized` call, never silently.
    """

    def __init__(self, fspace: FockSpace, matrix: np.ndarray, check: bool = True):
        mat = np.asarray(matrix, dtype=complex)
        if mat.shape != (fspace.dim, fspace.dim):
            raise ValueError(f"matrix shape {mat.shape} != {(fspace.dim, fspace.dim)}")
        if check and np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        self.space = fspace
        self.matrix = _readonly(mat)

    @property
    def num_modes(self) -> int:
        return self.space.num_modes

    @property
    def cutoff(self) -> int:
        return self.space.cutoff

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def normalized(self) -> "DensityOperator":
        tr = self.trace
        if tr <= 0:
            raise ValueError(f"cannot normalize operator with trace {tr}")
        return DensityOperator(self.space, self.matrix / tr, check=False)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def validate(self, normalized: bool = True) -> "DensityOperator":
        """Raise unless Hermitian, positive semidefinite and (optionally) trace 1."""
        if np.max(np.abs(self.matrix - self.matrix.conj().T)) > HERMITICITY_TOL:
            raise ValueError("density operator not Hermitian within 1e-12")
        if normalized and abs(self.trace - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {self.trace} deviates from 1 beyond {TRACE_TOL}")
        mineig = self.min_eigenvalue()
        if mineig < -EIGENVALUE_TOL:
            raise ValueError(f"negative eigenvalue {mineig} below -{EIGENVALUE_TOL}")
        return self

    def physicalized(self) -> "DensityOperator":
        """Clip small negative eigenvalues to zero and renormalize the trace."""
        vals, vecs = np.linalg.eigh(self.matrix)
        if vals[0] < -EIGENVALUE_TOL:
            raise ValueError(
                f"eigenvalue {vals[0]} too negative to clip (< -{EIGENVALUE_TOL})"
            )
        clipped = np.clip(vals, 0.0, None)
        mat = (vecs * clipped) @ vecs.conj().T
        return DensityOperator(self.space, mat / np.trace(mat).real, check=False)

    def diagonal_probabilities(self) -> dict[tuple[int, ...], float]:
        diag = np.real(np.diag(self.matrix))
        return {occ: float(p) for occ, p in zip(self.space.basis, diag) if p != 0.0}

    def to_json_dict(self) -> dict:
        """JSON-ready form; the basis listing makes ordering explicit."""
        return {
            "modes": self.space.num_modes,
            "cutoff": self.space.cutoff,
            "basis": [list(occ) for occ in self.space.basis],
            "re": np.real(self.matrix).tolist(),
            "im": np.imag(self.matrix).tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(data: Mapping) -> "DensityOperator":
        fspace = space(int(data["modes"]), int(data["cutoff"]))
        listed = [tuple(occ) for occ in data["basis"]]
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
        mat = re + 1j * im
        if listed != list(fspace.basis):
            # Accept any explicit basis ordering and map onto the native one.
            perm = [fspace.index_of(occ) for occ in listed]
            full = np.zeros((fspace.dim, fspace.dim), dtype=complex)
            full[np.ix_(perm, perm)] = mat
            mat = full
        return DensityOperator(fspace, mat)

    @staticmethod
    def from_json(text: str) -> "DensityOperator":
        return DensityOperator.from_json_dict(json.loads(text))

    def __repr__(self):
        return (
            f"DensityOperator({self.space.num_modes}m/c{self.space.cutoff}, "
            f"trace={self.trace:.6g})"
        )


@dataclass(frozen=True)
class QubitAmplitudes:
    """Normalized amplitude pair (alpha, beta) of a polarization qubit."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {norm}, expected 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)


def _check_same_space(a, b):
    if a.space.num_modes != b.space.num_modes or a.space.cutoff != b.space.cutoff:
        raise ValueError(
            f"incompatible spaces: {a.space!r} vs {b.space!r}"
        )


def make_basis_state(num_modes: int, cutoff: int, occupations: Sequence[int]) -> FockState:
    """Unit-amplitude number state |n_1, ..., n_M>.

    Raises ValueError if the total occupation exceeds the cutoff.
    """
    fspace = space(num_modes, cutoff)
    vec = np.zeros(fspace.dim, dtype=complex)
    vec[fspace.index_of(occupations)] = 1.0
    return FockState(fspace, vec)


def superpose(states: Iterable[tuple[complex, FockState]]) -> FockState:
    """Normalized linear combination sum_k c_k |psi_k>.

    All states must share mode count and cutoff; a vanishing result is
    rejected.
    """
    states = list(states)
    if not states:
        raise ValueError("no states to superpose")
    first = states[0][1]
    vec = np.zeros(first.space.dim, dtype=complex)
    for coeff, st in states:
        _check_same_space(first, st)
        vec = vec + complex(coeff) * st.vector
    if np.linalg.norm(vec) < 1e-14:
        raise ValueError("superposition is the zero vector")
    return FockState(first.space, vec, normalize=True)


def tensor(a, b, cutoff: int | None = None):
    """Tensor product on concatenated mode lists.

    The result cutoff defaults to the sum of the operands' cutoffs, which can
    always hold every occupation pair.  A smaller explicit cutoff is accepted
    as long as no populated amplitude would be dropped.
    """
    if isinstance(a, FockState) and isinstance(b, FockState):
        out_cut = a.cutoff + b.cutoff if cutoff is None else cutoff
        fspace = space(a.num_modes + b.num_modes, out_cut)
        vec = np.zeros(fspace.dim, dtype=complex)
        for occ_a, amp_a in a.amplitudes.items():
            for occ_b, amp_b in b.amplitudes.items():
                occ = occ_a + occ_b
                if sum(occ) > out_cut:
                    raise ValueError(
                        f"populated occupation {occ} exceeds tensor cutoff {out_cut}"
                    )
                vec[fspace.index[occ]] = amp_a * amp_b
        return FockState(fspace, vec)
    if isinstance(a, FockState):
        a = a.to_density()
    if isinstance(b, FockState):
        b = b.to_density()
    out_cut = a.cutoff + b.cutoff if cutoff is None else cutoff
    fspace = space(a.num_modes + b.num_modes, out_cut)
    mat = np.zeros((fspace.dim, fspace.dim), dtype=complex)
    nz_a = np.argwhere(np.abs(a.matrix) > 0.0)
    nz_b = np.argwhere(np.abs(b.matrix) > 0.0)
    basis_a, basis_b = a.space.basis, b.space.basis
    for ia, ja in nz_a:
        occ_ra, occ_ca = basis_a[ia], basis_a[ja]
        for ib, jb in nz_b:
            occ_r = occ_ra + basis_b[ib]
            occ_c = occ_ca + basis_b[jb]
            if sum(occ_r) > out_cut or sum(occ_c) > out_cut:
                raise ValueError(
                    "populated occupation exceeds tensor cutoff "
                    f"{out_cut}: {occ_r} / {occ_c}"
                )
            mat[fspace.index[occ_r], fspace.index[occ_c]] = (
                a.matrix[ia, ja] * b.matrix[ib, jb]
            )
    return DensityOperator(fspace, mat, check=False)


def append_vacuum_modes(rho: DensityOperator, k: int) -> DensityOperator:
    """Adjoin k vacuum modes at the end without changing the cutoff."""
    if k == 0:
        return rho
    fspace = space(rho.num_modes + k, rho.cutoff)
    pad = (0,) * k
    idx = np.array([fspace.index[occ + pad] for occ in rho.space.basis])
    mat = np.zeros((fspace.dim, fspace.dim), dtype=complex)
    mat[np.ix_(idx, idx)] = rho.matrix
    return DensityOperator(fspace, mat, check=False)


def permute_modes(rho: DensityOperator, order: Sequence[int]) -> DensityOperator:
    """Reorder modes so new mode i is old mode ``order[i]``."""
    if sorted(order) != list(range(rho.num_modes)):
        raise ValueError(f"{order} is not a permutation of 0..{rho.num_modes - 1}")
    fspace = rho.space
    idx = np.array(
        [fspace.index[tuple(occ[o] for o in order)] for occ in fspace.basis]
    )
    return DensityOperator(fspace, rho.matrix[np.ix_(idx, idx)], check=False)


def traced_with_weights(rho: DensityOperator, traced: Sequence[int], weight_fn=None):
    """Trace out ``traced`` modes, optionally weighting each diagonal block.

    ``weight_fn`` receives the occupation vector of the traced modes and
    returns a nonnegative weight; this implements measure-and-discard with a
    diagonal POVM element in a single pass.  With ``weight_fn=None`` this is
    the ordinary partial trace.
    """
    traced = sorted(set(int(m) for m in traced))
    if any(m < 0 or m >= rho.num_modes for m in traced):
        raise ValueError(f"traced modes {traced} out of range")
    kept = [m for m in range(rho.num_modes) if m not in traced]
    if not kept:
        raise ValueError("cannot trace out every mode")
    out_space = space(len(kept), rho.cutoff)
    out = np.zeros((out_space.dim, out_space.dim), dtype=complex)
    basis = rho.space.basis
    kept_idx = np.array(
        [out_space.index[tuple(occ[m] for m in kept)] for occ in basis]
    )
    disc_occ = [tuple(occ[m] for m in traced) for occ in basis]
    disc_groups: dict[tuple[int, ...], list[int]] = {}
    for i, d in enumerate(disc_occ):
        disc_groups.setdefault(d, []).append(i)
    for d, idxs in disc_groups.items():
        w = 1.0 if weight_fn is None else float(weight_fn(d))
        if w == 0.0:
            continue
        sub = rho.matrix[np.ix_(idxs, idxs)]
        rows = kept_idx[idxs]
        out[np.ix_(rows, rows)] += w * sub
    return DensityOperator(out_space, out, check=False)


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Reduced operator on the ``keep`` modes; preserves the trace exactly."""
    keep = sorted(set(int(m) for m in keep))
    if not keep:
        raise ValueError("keep set must not be empty")
    if any(m < 0 or m >= rho.num_modes for m in keep):
        raise ValueError(f"keep modes {keep} out of range for {rho.num_modes} modes")
    traced = [m for m in range(rho.num_modes) if m not in keep]
    if not traced:
        return rho
    return traced_with_weights(rho, traced)


def fidelity(rho: DensityOperator, psi: FockState) -> float:
    """Overlap <psi| rho |psi> with a pure target, clipped to [0, 1]."""
    if (
        rho.space.num_modes != psi.space.num_modes
        or rho.space.cutoff != psi.space.cutoff
    ):
        raise ValueError(f"dimension mismatch: {rho.space!r} vs {psi.space!r}")
    val = complex(np.vdot(psi.vector, rho.matrix @ psi.vector))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"fidelity has imaginary part {val.imag}")
    f = val.real
    if f < -NORM_TOL or f > 1.0 + NORM_TOL:
        raise ValueError(f"fidelity {f} outside [0, 1] beyond tolerance")
    return float(min(max(f, 0.0), 1.0))


def purity(rho: DensityOperator) -> float:
    """Tr(rho^2) of the normalized operator."""
    tr = rho.trace
    if tr <= 0:
        raise ValueError(f"purity undefined for trace {tr}")
    mat = rho.matrix / tr
    return float(np.real(np.trace(mat @ mat)))


def number_in_modes(occ: Sequence[int], modes: Sequence[int]) -> int:
    return sum(occ[m] for m in modes)


def factorial(n: int) -> int:
    return math.factorial(n)
