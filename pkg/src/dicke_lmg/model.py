"""Physical parameters, basis conventions, and collective-spin operators.

The qubit ensemble lives in the maximal-j Dicke manifold, j = N_a/2, with
states labeled by m in ascending order. Half-integer m (odd N_a) is stored
internally as the integer 2m to keep label comparisons exact. The field-qubit
product basis is ordered photon-major, m-ascending, so fixed-excitation
subspaces are easy to extract.

All values are in absolute energy units; omega_f = 1 is the recommended
scale. All Hamiltonians in scope are real symmetric in these bases, so state
amplitudes are real.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np


def _twice_m(n_atoms: int, m: float) -> int:
    """Convert a Dicke label m to the exact integer 2m, validating range and
    parity (m is half-integer iff n_atoms is odd)."""
    tm = round(2.0 * m)
    if abs(2.0 * m - tm) > 1e-9:
        raise ValueError(f"m = {m} is not an (half-)integer label")
    if (tm - n_atoms) % 2 != 0:
        raise ValueError(f"m = {m} has wrong parity for N_a = {n_atoms}")
    if abs(tm) > n_atoms:
        raise ValueError(f"m = {m} outside [-{n_atoms/2}, {n_atoms/2}]")
    return tm


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the extended Dicke (Dicke-LMG) Hamiltonian.

    omega_f : field frequency (> 0)
    delta   : detuning, qubit frequency minus field frequency
    eta     : inter-qubit coupling
    lam     : field-ensemble coupling (>= 0)
    n_atoms : qubit count (>= 1)

    The qubit transition frequency is derived: omega = omega_f + delta.
    """

    omega_f: float
    delta: float
    eta: float
    lam: float
    n_atoms: int

    def __post_init__(self):
        if not self.omega_f > 0:
            raise ValueError("omega_f must be > 0")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")

    @property
    def omega(self) -> float:
        return self.omega_f + self.delta

    @property
    def j(self) -> float:
        return self.n_atoms / 2.0

    @classmethod
    def from_omega(cls, omega_f: float, omega: float, eta: float, lam: float,
                   n_atoms: int) -> "ModelParams":
        return cls(omega_f=omega_f, delta=omega - omega_f, eta=eta, lam=lam,
                   n_atoms=n_atoms)

    def replace(self, **kwargs) -> "ModelParams":
        return dataclasses.replace(self, **kwargs)


@dataclass(frozen=True)
class DickeBasis:
    """The N_a + 1 symmetric Dicke states |j, m>, j = N_a/2, m ascending."""

    n_atoms: int

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")

    @property
    def dimension(self) -> int:
        return self.n_atoms + 1

    @property
    def twice_m_values(self) -> tuple[int, ...]:
        return tuple(range(-self.n_atoms, self.n_atoms + 1, 2))

    @property
    def m_values(self) -> np.ndarray:
        return np.array(self.twice_m_values, dtype=float) / 2.0

    def index_of(self, m: float) -> int:
        tm = _twice_m(self.n_atoms, m)
        return (tm + self.n_atoms) // 2


def jz_element(n_atoms: int, m: float) -> float:
    """Diagonal matrix element <m| J_z |m> = m."""
    return _twice_m(n_atoms, m) / 2.0


def jpm_element(n_atoms: int, m: float, direction: str) -> float:
    """Ladder matrix element <m +- 1| J_+- |m>.

    Returns sqrt(j(j+1) - m(m +- 1)) with j = N_a/2, and 0 when the target
    leaves the ladder.
    """
    tm = _twice_m(n_atoms, m)
    if direction in ("raise", "+", "up"):
        sign = +1
    elif direction in ("lower", "-", "down"):
        sign = -1
    else:
        raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")
    if abs(tm + 2 * sign) > n_atoms:
        return 0.0
    j = n_atoms / 2.0
    m = tm / 2.0
    return math.sqrt(j * (j + 1.0) - m * (m + sign))


def total_excitation(k: int, m: float, n_atoms: int | None = None) -> float:
    """Eigenvalue of the total excitation operator a^dag a + J_z at |k>|m>."""
    if k < 0:
        raise ValueError("photon count k must be >= 0")
    if n_atoms is not None:
        _twice_m(n_atoms, m)
    return k + m


def jz_matrix(n_atoms: int) -> np.ndarray:
    return np.diag(DickeBasis(n_atoms).m_values)


def jp_matrix(n_atoms: int) -> np.ndarray:
    basis = DickeBasis(n_atoms)
    mat = np.zeros((basis.dimension, basis.dimension))
    for i, m in enumerate(basis.m_values[:-1]):
        mat[i + 1, i] = jpm_element(n_atoms, m, "raise")
    return mat


def jm_matrix(n_atoms: int) -> np.ndarray:
    return jp_matrix(n_atoms).T


def jx_matrix(n_atoms: int) -> np.ndarray:
    jp = jp_matrix(n_atoms)
    return (jp + jp.T) / 2.0


def jy_matrix(n_atoms: int) -> np.ndarray:
    jp = jp_matrix(n_atoms)
    return (jp - jp.T) / 2.0j


@dataclass(frozen=True)
class ProductBasis:
    """Photon-major, m-ascending enumeration of |k>_f |m> product states,
    k = 0..n_cut."""

    n_atoms: int
    n_cut: int

    def __post_init__(self):
        if self.n_cut < 0:
            raise ValueError("n_cut must be >= 0")
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")

    @property
    def dimension(self) -> int:
        return (self.n_cut + 1) * (self.n_atoms + 1)

    def index(self, k: int, m: float) -> int:
        if not 0 <= k <= self.n_cut:
            raise ValueError(f"photon number k = {k} outside [0, {self.n_cut}]")
        tm = _twice_m(self.n_atoms, m)
        return k * (self.n_atoms + 1) + (tm + self.n_atoms) // 2

    def label(self, index: int) -> tuple[int, float]:
        if not 0 <= index < self.dimension:
            raise ValueError("index out of range")
        k, pos = divmod(index, self.n_atoms + 1)
        return k, (2 * pos - self.n_atoms) / 2.0

    def labels(self) -> list[tuple[int, float]]:
        return [self.label(i) for i in range(self.dimension)]


def _label_key(n_atoms: int, label: tuple[float, float]) -> tuple[int, int]:
    k, m = label
    return int(round(k)), _twice_m(n_atoms, m)


@dataclass(frozen=True)
class PureState:
    """Normalized real-amplitude state over labeled |k>_f |m> basis vectors.

    ``labels[i]`` is the (photon number, Dicke m) pair carrying amplitude
    ``amplitudes[i]``. Works both for full product-basis states and for the
    short vectors living in a single RWA excitation subspace.
    """

    amplitudes: np.ndarray
    labels: tuple[tuple[float, float], ...]
    n_atoms: int

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=float)
        object.__setattr__(self, "amplitudes", amp)
        if amp.ndim != 1 or len(self.labels) != amp.size:
            raise ValueError("labels and amplitudes must have equal length")
        if abs(amp @ amp - 1.0) > 1e-12:
            raise ValueError("state is not normalized to 1e-12")

    def overlap(self, other: "PureState") -> float:
        """<self|other>, matching components by (k, m) label."""
        if self.n_atoms != other.n_atoms:
            raise ValueError("states live on different ensembles")
        table = {_label_key(self.n_atoms, lab): a
                 for lab, a in zip(self.labels, self.amplitudes)}
        acc = 0.0
        for lab, a in zip(other.labels, other.amplitudes):
            acc += table.get(_label_key(other.n_atoms, lab), 0.0) * a
        return acc

    def fidelity(self, other: "PureState") -> float:
        return self.overlap(other) ** 2

    def to_dense(self, basis: ProductBasis) -> np.ndarray:
        """Embed into the full product basis (zero-padding elsewhere)."""
        vec = np.zeros(basis.dimension)
        for (k, m), a in zip(self.labels, self.amplitudes):
            vec[basis.index(int(round(k)), m)] = a
        return vec


def fix_sign(vec: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Flip a vector's global sign so its first nonzero component is positive."""
    threshold = tol if tol > 0 else 1e-12 * max(1.0, float(np.abs(vec).max()))
    for v in vec:
        if abs(v) > threshold:
            return vec if v > 0 else -vec
    return vec
