import json
import math

import numpy as np
import pytest

import eigenrank as er


def dirichlet_eigenvalue(k, n, length):
    h = length / (n + 1)
    return 4.0 / h**2 * math.sin(k * math.pi * h / (2.0 * length)) ** 2


@pytest.fixture(scope="module")
def line():
    grid = er.make_grid([math.pi], [64])
    op = er.assemble_laplacian(grid)
    return grid, op, er.lowest_eigenpairs(op, 64)


def test_grid_shape(line):
    grid, _, _ = line
    assert grid.dimension == 1
    assert grid.size == 64
    assert grid.spacing(0) == pytest.approx(math.pi / 65)
    assert grid.quadrature_weight == pytest.approx(math.pi / 65)


def test_laplacian_spectrum_matches_closed_form(line):
    grid, _, basis = line
    expected = [dirichlet_eigenvalue(k, 64, math.pi) for k in range(1, 65)]
    np.testing.assert_allclose(basis.values, expected, rtol=1e-10)
    assert basis.complete


def test_eigenvectors_grid_orthonormal(line):
    grid, _, basis = line
    gram = grid.quadrature_weight * basis.vectors.T @ basis.vectors
    np.testing.assert_allclose(gram, np.eye(64), atol=1e-10)


def test_operator_matches_dense_stencil(line):
    grid, op, _ = line
    h = grid.spacing(0)
    dense = (2 * np.eye(64) - np.eye(64, k=1) - np.eye(64, k=-1)) / h**2
    u = np.random.default_rng(3).standard_normal(64)
    np.testing.assert_allclose(op.apply(u), dense @ u, rtol=1e-12)


def test_parseval_for_complete_basis(line):
    grid, _, basis = line
    coeffs = er.expansion_coefficients(basis, basis, 4, 64)
    w = grid.quadrature_weight
    for i in range(4):
        for j in range(i, 4):
            prod = basis.vectors[:, i] * basis.vectors[:, j]
            direct = math.sqrt(w * prod @ prod)
            assert coeffs.product_norms[er.pair_index(i, j)] == pytest.approx(direct, rel=1e-12)
            assert er.tail_l2(coeffs, i, j, 0) == pytest.approx(direct, rel=1e-10)


def test_sine_products_have_two_modes(line):
    # sin^2 x is not a finite sine sum, so its tail decays without vanishing.
    _, _, basis = line
    coeffs = er.expansion_coefficients(basis, basis, 2, 64)
    assert er.tail_l2(coeffs, 0, 0, 0) > er.tail_l2(coeffs, 0, 0, 16) > er.tail_l2(coeffs, 0, 0, 48)


def test_oracle_never_beaten_by_prefix(line):
    _, _, basis = line
    coeffs = er.expansion_coefficients(basis, basis, 8, 64)
    for eps in (1e-1, 1e-2, 1e-3):
        assert er.oracle_rank_l2(basis, 8, eps) <= er.empirical_rank(coeffs, 8, eps)


def test_cutoff_formulas():
    assert er.cutoff_l2(0.1, 4, 1.0, 1) == 40
    assert er.cutoff_hm1(0.1, 4, 1.0, 2) == 20


def test_green_solver_inverts_laplacian(line):
    _, op, _ = line
    green = er.GreenSolver(op)
    rho = np.random.default_rng(1).standard_normal(64)
    u = green.solve(rho)
    np.testing.assert_allclose(op.apply(u), rho, rtol=1e-9, atol=1e-9)


def test_eri_benchmark_certificate(line):
    _, op, basis = line
    coeffs = er.expansion_coefficients(basis, basis, 4, 64)
    result = er.eri_benchmark(4, 1e-2, basis, basis, coeffs, er.GreenSolver(op))
    assert result.bound_violations == 0
    assert result.max_abs_error <= result.certificate + 1e-12
    assert result.cost_ratio < 1.0


def test_exact_eri_symmetry(line):
    _, op, basis = line
    green = er.GreenSolver(op)
    a = er.exact_eri(0, 1, 2, 3, basis, green)
    b = er.exact_eri(2, 3, 0, 1, basis, green)
    assert a == pytest.approx(b, rel=1e-10)


def test_presets_round_trip():
    for name in er.preset_names():
        cfg = er.preset(name)
        again = er.parse_config(cfg.to_json())
        assert json.loads(again.to_json()) == json.loads(cfg.to_json())


def test_config_error_is_value_error():
    with pytest.raises(ValueError):
        er.parse_config('{"grid": {"dimension": 1}}')


def test_run_spectrum(tmp_path):
    cfg = er.preset("flat-1d")
    result = er.Experiment(cfg).run("spectrum", str(tmp_path))
    assert result.exit_code == 0
    assert all(c.passed for c in result.checks)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["command"] == "spectrum"
    rows = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert rows[0].startswith("k,")
    assert len(rows) == 1 + 64
