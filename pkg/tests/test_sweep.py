import numpy as np
import pytest

from dicke_lmg.model import ModelParams
from dicke_lmg.rwa import critical_coupling_1
from dicke_lmg.sweep import (BoundarySegment, SweepSpec, boundary_trace,
                             first_lambda_boundaries, run_sweep)


def _spec(**kw):
    base = dict(solver="rwa", omega_f=1.0, delta=0.0, n_atoms=3,
                lam_axis=(0.1, 1.5, 8), eta_axis=(0.0, 0.5, 3), workers=1)
    base.update(kw)
    return SweepSpec(**base)


class TestSweepSpec:
    def test_axis_values(self):
        spec = _spec(lam_axis=(0.0, 1.0, 5))
        assert np.allclose(spec.lam_values, [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_validation(self):
        with pytest.raises(ValueError):
            _spec(solver="exact")
        with pytest.raises(ValueError):
            _spec(lam_axis=(1.0, 0.5, 4))
        with pytest.raises(ValueError):
            _spec(lam_axis=(-0.1, 1.0, 4))
        with pytest.raises(ValueError):
            _spec(eta_axis=(0.0, 1.0, 1))


class TestRunSweep:
    def test_grid_order_eta_major_lam_ascending(self):
        spec = _spec()
        records = run_sweep(spec)
        assert len(records) == 24
        expected = [(e, l) for e in spec.eta_values for l in spec.lam_values]
        assert [(r.eta, r.lam) for r in records] == expected

    def test_vacuum_region_values(self):
        spec = _spec(lam_axis=(0.1, 0.5, 3), eta_axis=(0.0, 0.1, 2))
        for r in run_sweep(spec):
            assert r.phase_index == 0
            assert r.energy == pytest.approx(-1.5 + r.eta * 0.75, abs=1e-12)
            assert r.cw == pytest.approx(0.0, abs=1e-12)
            assert r.entropy_bits == pytest.approx(0.0, abs=1e-12)
            assert r.flags == ""

    def test_parallel_equals_serial(self):
        serial = run_sweep(_spec(workers=1))
        parallel = run_sweep(_spec(workers=4))
        assert serial == parallel   # GridRecord comparison ignores the state

    def test_runs_repeatably(self):
        assert run_sweep(_spec()) == run_sweep(_spec())

    def test_full_solver_records_cutoff_as_phase_index(self):
        spec = _spec(solver="full", lam_axis=(0.05, 0.2, 2),
                     eta_axis=(0.0, 0.2, 2), n_atoms=2)
        records = run_sweep(spec)
        assert all(r.phase_index >= 16 for r in records)
        assert all(np.isfinite(r.energy) for r in records)


class TestBoundaries:
    def test_rwa_boundary_matches_closed_form_within_one_cell(self):
        spec = _spec(n_atoms=3, lam_axis=(0.5, 1.5, 41), eta_axis=(0.0, 0.6, 4))
        records = run_sweep(spec)
        cell = (1.5 - 0.5) / 40
        firsts = first_lambda_boundaries(records, spec)
        assert len(firsts) == 4
        for eta, lam_mid in firsts.items():
            params = ModelParams(omega_f=1.0, delta=0.0, eta=eta, lam=0.1,
                                 n_atoms=3)
            assert abs(lam_mid - critical_coupling_1(params)) <= cell

    def test_boundary_segments_have_phase_labels(self):
        spec = _spec(lam_axis=(0.5, 1.5, 21), eta_axis=(0.0, 0.2, 2))
        segments = boundary_trace(run_sweep(spec), spec)
        lam_edges = [s for s in segments if s.axis == "lam"]
        assert lam_edges
        for s in lam_edges:
            assert isinstance(s, BoundarySegment)
            assert s.after == s.before + 1.0
        assert any((s.before, s.after) == (0.0, 1.0) for s in lam_edges)

    def test_refinement_moves_boundary_at_most_one_coarse_cell(self):
        coarse = _spec(lam_axis=(0.5, 1.5, 11), eta_axis=(0.0, 0.4, 3))
        fine = _spec(lam_axis=(0.5, 1.5, 21), eta_axis=(0.0, 0.4, 3))
        coarse_b = first_lambda_boundaries(run_sweep(coarse), coarse)
        fine_b = first_lambda_boundaries(run_sweep(fine), fine)
        coarse_cell = 0.1
        for eta in coarse_b:
            assert abs(coarse_b[eta] - fine_b[eta]) <= coarse_cell

    def test_w_region_concurrence_plateau(self):
        # between the first and second transitions at strong eta the ground
        # state is W-like: pair concurrence approaches 2 / N_a
        spec = _spec(n_atoms=5, lam_axis=(0.01, 0.3, 4), eta_axis=(1.6, 2.4, 3))
        records = run_sweep(spec)
        in_w = [r for r in records if r.phase_index == 1]
        assert in_w
        assert max(r.cw for r in in_w) >= 0.399

    def test_error_containment(self, monkeypatch):
        # a failing point is flagged, the sweep itself never raises
        from dicke_lmg import sweep as sweep_mod
        from dicke_lmg.errors import ConvergenceError

        def boom(params, **kwargs):
            raise ConvergenceError("forced failure")

        monkeypatch.setattr(sweep_mod.fullmodel, "ground_full", boom)
        spec = _spec(solver="full", n_atoms=2, lam_axis=(0.1, 0.2, 2),
                     eta_axis=(0.0, 0.1, 2))
        records = run_sweep(spec)
        assert len(records) == 4
        assert all(r.flags == "noconv" for r in records)
        assert all(np.isnan(r.energy) for r in records)
