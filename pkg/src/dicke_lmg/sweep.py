"""Phase-diagram engine over (lam, eta) grids.

Evaluates the ground state of either solver at every grid point, records the
energy, phase label and entanglement measures, and extracts phase boundaries
for comparison with the analytic critical-coupling curves. Grid points are
independent tasks; results are collected by grid index so the output order
(eta-major, lam-ascending) never depends on the parallel execution order.
"""

from __future__ import annotations

import concurrent.futures
import os
from dataclasses import dataclass, field

import numpy as np

from . import fullmodel, rwa
from .entanglement import cw_of_ground, entropy_of_ground
from .model import ModelParams, PureState


@dataclass(frozen=True)
class SweepSpec:
    """Grid description: fixed physical parameters plus the two swept axes,
    each given as (min, max, count)."""

    solver: str                      # "rwa" | "full"
    omega_f: float
    delta: float
    n_atoms: int
    lam_axis: tuple[float, float, int]
    eta_axis: tuple[float, float, int]
    tol: float = 1e-8
    tail_threshold: float = 1e-10
    workers: int | None = None
    use_parity_blocks: bool = True   # full solver only
    fidelity_threshold: float = 0.5  # full-model boundary detection

    def __post_init__(self):
        if self.solver not in ("rwa", "full"):
            raise ValueError("solver must be 'rwa' or 'full'")
        for name, (lo, hi, count) in (("lam", self.lam_axis), ("eta", self.eta_axis)):
            if count < 2:
                raise ValueError(f"{name} axis needs at least 2 points")
            if not lo < hi:
                raise ValueError(f"{name} axis min must be < max")
        if self.lam_axis[0] < 0:
            raise ValueError("lam axis min must be >= 0")

    @property
    def lam_values(self) -> np.ndarray:
        lo, hi, count = self.lam_axis
        return np.linspace(lo, hi, count)

    @property
    def eta_values(self) -> np.ndarray:
        lo, hi, count = self.eta_axis
        return np.linspace(lo, hi, count)


@dataclass(frozen=True)
class GridRecord:
    """One grid point: phase_index is the ground subspace (RWA) or the
    converged photon cutoff (full model)."""

    lam: float
    eta: float
    energy: float
    phase_index: int
    cw: float
    entropy_bits: float
    flags: str = ""
    state: PureState | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class BoundarySegment:
    """A cell edge across which the ground state changes phase.

    ``axis`` names the scan direction ('lam' or 'eta'); (lam, eta) is the
    midpoint of the edge; before/after hold the phase indices (RWA) or the
    neighbor fidelity (full model)."""

    axis: str
    lam: float
    eta: float
    before: float
    after: float


def _eval_point(spec: SweepSpec, lam: float, eta: float) -> GridRecord:
    params = ModelParams(omega_f=spec.omega_f, delta=spec.delta, eta=eta,
                         lam=lam, n_atoms=spec.n_atoms)
    try:
        if spec.solver == "rwa":
            result = rwa.ground_state(params)
            state, energy = result.state, result.energy
            phase_index = result.subspace_index
            flags = "at_transition" if result.at_transition else ""
        else:
            result = fullmodel.ground_full(
                params, tol=spec.tol, tail_threshold=spec.tail_threshold,
                use_parity_blocks=spec.use_parity_blocks)
            state, energy = result.state, result.energy
            phase_index = result.n_cut_used
            flags = ""
        return GridRecord(lam=lam, eta=eta, energy=energy,
                          phase_index=phase_index, cw=cw_of_ground(state),
                          entropy_bits=entropy_of_ground(state), flags=flags,
                          state=state)
    except Exception as exc:          # per-point containment, sweep continues
        flag = "noconv" if isinstance(exc, fullmodel.ConvergenceError) else \
            f"error:{type(exc).__name__}"
        return GridRecord(lam=lam, eta=eta, energy=float("nan"), phase_index=-1,
                          cw=float("nan"), entropy_bits=float("nan"), flags=flag)


def run_sweep(spec: SweepSpec) -> list[GridRecord]:
    """Evaluate the whole grid; output is eta-major, lam-ascending, and
    identical regardless of the parallelism width."""
    points = [(float(eta), float(lam))
              for eta in spec.eta_values for lam in spec.lam_values]
    workers = spec.workers or os.cpu_count() or 1
    if workers == 1:
        return [_eval_point(spec, lam, eta) for eta, lam in points]
    results: list[GridRecord | None] = [None] * len(points)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(_eval_point, spec, lam, eta): i
                   for i, (eta, lam) in enumerate(points)}
        for fut in concurrent.futures.as_completed(futures):
            results[futures[fut]] = fut.result()
    return results   # type: ignore[return-value]


def _grid(records: list[GridRecord], spec: SweepSpec) -> list[list[GridRecord]]:
    n_lam = spec.lam_axis[2]
    n_eta = spec.eta_axis[2]
    if len(records) != n_lam * n_eta:
        raise ValueError("records do not cover the grid")
    return [records[i * n_lam:(i + 1) * n_lam] for i in range(n_eta)]


def _changed(spec: SweepSpec, a: GridRecord, b: GridRecord) -> tuple[bool, float, float]:
    if spec.solver == "rwa":
        return a.phase_index != b.phase_index, float(a.phase_index), float(b.phase_index)
    if a.state is None or b.state is None:
        return False, float("nan"), float("nan")
    fid = a.state.fidelity(b.state)
    return fid < spec.fidelity_threshold, fid, fid


def boundary_trace(records: list[GridRecord], spec: SweepSpec) -> list[BoundarySegment]:
    """Cell edges where the ground phase changes: subspace-index changes for
    the RWA, neighbor-fidelity drops for the full model."""
    rows = _grid(records, spec)
    segments = []
    for row in rows:
        for a, b in zip(row, row[1:]):
            hit, before, after = _changed(spec, a, b)
            if hit:
                segments.append(BoundarySegment(
                    axis="lam", lam=0.5 * (a.lam + b.lam), eta=a.eta,
                    before=before, after=after))
    for row_a, row_b in zip(rows, rows[1:]):
        for a, b in zip(row_a, row_b):
            hit, before, after = _changed(spec, a, b)
            if hit:
                segments.append(BoundarySegment(
                    axis="eta", lam=a.lam, eta=0.5 * (a.eta + b.eta),
                    before=before, after=after))
    return segments


def first_lambda_boundaries(records: list[GridRecord],
                            spec: SweepSpec) -> dict[float, float]:
    """For each eta row, the midpoint of the first lam edge where the phase
    changes (rows without a boundary are omitted)."""
    out: dict[float, float] = {}
    for row in _grid(records, spec):
        for a, b in zip(row, row[1:]):
            hit, _, _ = _changed(spec, a, b)
            if hit:
                out[row[0].eta] = 0.5 * (a.lam + b.lam)
                break
    return out
