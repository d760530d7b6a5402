import math

import numpy as np
import pytest

from calindex import (
    BoundaryData,
    GridSpec,
    boundary_face_integral,
    chern_simons_consistency,
    integrate_c1_sphere,
    integrate_ch_4d,
    integrate_degree_ball,
    make_clutching_map,
    make_monopole_pullback,
    make_twisted_caloron,
)
from calindex.quadrature import append_report_csv, field_charge_closed_form

COARSE4 = GridSpec(n3=24, nz=10, nx=20, h_fd=1.0 / 96.0)


@pytest.fixture
def field_su2(data_a):
    return make_monopole_pullback(data_a)


@pytest.fixture
def field_patch(data_a):
    return make_monopole_pullback(data_a, core="patchwise")


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(n3=4).check()
    with pytest.raises(ValueError):
        GridSpec(h_fd=0.0).check()
    GridSpec().check()


class TestSphere:
    def test_c1_examples(self, field_patch):
        rep0 = integrate_c1_sphere(field_patch, 0, grid=GridSpec(n3=32))
        assert rep0.abs_error <= 1e-6 and rep0.closed_form == 1.0
        rep1 = integrate_c1_sphere(field_patch, 1, grid=GridSpec(n3=32))
        assert rep1.abs_error <= 1e-6 and rep1.closed_form == -1.0

    def test_c1_flat_line_exact(self):
        data = BoundaryData.make(1.0, [(0.5, 0), (-0.5, 0)], 0)
        cfg = make_monopole_pullback(data, core="patchwise")
        rep = integrate_c1_sphere(cfg, 0, grid=GridSpec(n3=16))
        assert rep.numeric == 0.0

    def test_c1_higher_charges(self):
        pairs = [(0.1 * (j + 1), k) for j, k in enumerate([-3, -2, -1, 1, 2, 3])]
        data = BoundaryData.make(1.0, pairs, 0)
        cfg = make_monopole_pullback(data, core="patchwise")
        for j, (_, k) in enumerate(pairs):
            rep = integrate_c1_sphere(cfg, j, grid=GridSpec(n3=32))
            assert rep.abs_error <= 1e-6
            assert rep.closed_form == float(k)

    def test_area_measure_oracle(self):
        # the (u, phi) midpoint cells tile the unit sphere area 4*pi exactly
        n_u, n_phi = 32, 64
        du, dphi = 2.0 / n_u, 2.0 * math.pi / n_phi
        assert n_u * n_phi * du * dphi == pytest.approx(4.0 * math.pi, rel=1e-15)

    def test_face_integral_examples(self, field_patch):
        rep = boundary_face_integral(field_patch, grid=GridSpec(n3=32))
        assert rep.closed_form == pytest.approx(-0.6)
        assert rep.abs_error <= 1e-6
        d2 = BoundaryData.make(1.0, [(0.25, 2), (-0.25, -2)], 0)
        rep = boundary_face_integral(make_monopole_pullback(d2, core="patchwise"), grid=GridSpec(n3=32))
        assert rep.closed_form == pytest.approx(-1.0)
        assert rep.abs_error <= 1e-6
        flat = BoundaryData.make(1.0, [(0.4, 0), (0.8, 0)], 0)
        rep = boundary_face_integral(make_monopole_pullback(flat, core="patchwise"), grid=GridSpec(n3=16))
        assert abs(rep.numeric) <= 1e-12


class TestDegreeBall:
    def test_identity_map_exact_zero(self):
        cmap = make_clutching_map(2, 0, 0.45)
        rep = integrate_degree_ball(cmap, GridSpec(n3=16))
        assert rep.numeric == 0.0

    @pytest.mark.parametrize("d", [-1, 1])
    def test_unit_degrees_coarse(self, d):
        cmap = make_clutching_map(2, d, 0.45)
        rep = integrate_degree_ball(cmap, GridSpec(n3=24))
        assert rep.abs_error <= 0.05
        assert rep.details["rounded"] == d

    def test_convergence_order(self):
        cmap = make_clutching_map(2, 1, 0.45)
        coarse = integrate_degree_ball(cmap, GridSpec(n3=24, h_fd=1.0 / 48.0))
        fine = integrate_degree_ball(cmap, GridSpec(n3=48, h_fd=1.0 / 96.0))
        assert coarse.abs_error / fine.abs_error >= 3.0


class TestCh4d:
    def test_flat_field_zero(self):
        data = BoundaryData.make(1.0, [(0.5, 0), (-0.5, 0)], 0)
        flat = make_monopole_pullback(data, core="patchwise", higgs_window=(0.0, 0.0))
        rep = integrate_ch_4d(flat, GridSpec(n3=8, nz=8, nx=8, h_fd=1e-3))
        assert abs(rep.numeric) <= 1e-10

    def test_untwisted_su2_coarse(self, field_su2):
        rep = integrate_ch_4d(field_su2, COARSE4)
        assert rep.closed_form == pytest.approx(-0.6)
        assert rep.abs_error <= 0.01

    def test_untwisted_patchwise_coarse(self, field_patch):
        rep = integrate_ch_4d(field_patch, COARSE4)
        assert rep.abs_error <= 0.01

    def test_twisted_coarse(self, field_su2):
        twisted = make_twisted_caloron(field_su2, make_clutching_map(2, 1, 0.45))
        rep = integrate_ch_4d(twisted, COARSE4)
        assert rep.closed_form == pytest.approx(0.4)
        assert rep.abs_error <= 0.02
        assert field_charge_closed_form(twisted) == pytest.approx(0.4)

    def test_orientation_flip_negates_exactly(self, field_su2):
        tiny = GridSpec(n3=8, nz=8, nx=12, h_fd=1.0 / 96.0)
        plus = integrate_ch_4d(field_su2, tiny, orientation=1)
        minus = integrate_ch_4d(field_su2, tiny, orientation=-1)
        assert plus.numeric == -minus.numeric

    def test_parallel_matches_serial(self, field_su2):
        tiny = GridSpec(n3=8, nz=8, nx=12, h_fd=1.0 / 96.0)
        serial = integrate_ch_4d(field_su2, tiny, workers=1)
        parallel = integrate_ch_4d(field_su2, tiny, workers=2)
        denom = max(1.0, abs(serial.numeric))
        assert abs(serial.numeric - parallel.numeric) / denom <= 1e-12

    def test_convergence_order(self, field_su2):
        coarse = integrate_ch_4d(field_su2, GridSpec(nz=8, nx=12, h_fd=1.0 / 48.0))
        fine = integrate_ch_4d(field_su2, GridSpec(nz=16, nx=24, h_fd=1.0 / 96.0))
        assert coarse.abs_error / fine.abs_error >= 3.0

    def test_h_fd_guard(self, field_su2):
        twisted = make_twisted_caloron(field_su2, make_clutching_map(2, 1, 0.45))
        with pytest.raises(ValueError):
            integrate_ch_4d(twisted, GridSpec(nz=8, nx=12, h_fd=0.08))


class TestConsistency:
    def test_untwisted(self, field_su2):
        rep = chern_simons_consistency(field_su2, COARSE4)
        assert rep.details["consistent"]
        assert rep.details["degree_term"] == 0.0

    def test_flat(self):
        data = BoundaryData.make(1.0, [(0.5, 0), (-0.5, 0)], 0)
        flat = make_monopole_pullback(data, core="patchwise", higgs_window=(0.0, 0.0))
        rep = chern_simons_consistency(flat, GridSpec(n3=8, nz=8, nx=8, h_fd=1e-3))
        assert abs(rep.details["ch_4d"]) <= 1e-10
        assert abs(rep.details["face_term"]) <= 1e-10
        assert rep.details["consistent"]


def test_report_csv_ledger(tmp_path, field_patch):
    rep = integrate_c1_sphere(field_patch, 0, grid=GridSpec(n3=16))
    path = tmp_path / "ledger.csv"
    append_report_csv(path, [rep])
    append_report_csv(path, [rep])
    rows = path.read_text().strip().splitlines()
    assert rows[0].startswith("quantity,")
    assert len(rows) == 3
    assert rows[1] == rows[2]


def test_report_abs_error_recomputed(field_patch):
    rep = integrate_c1_sphere(field_patch, 0, grid=GridSpec(n3=16))
    assert rep.abs_error == abs(rep.numeric - rep.closed_form)
    doc = rep.to_dict()
    assert doc["abs_error"] == rep.abs_error
