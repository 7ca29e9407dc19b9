"""End-to-end smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import blr


def crossed_triple():
    return blr.BLDatum.from_maps(
        2,
        [np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]]), np.eye(2)],
        [0.25, 1.0, 0.5],
    )


def loomis_whitney(p1, p2):
    ey = blr.Subspace.span_of(np.array([[0.0], [1.0]]))
    ex = blr.Subspace.span_of(np.array([[1.0], [0.0]]))
    return blr.BLDatum.from_kernels(2, [ey, ex], [p1, p2])


def test_exponents_of_the_crossed_triple():
    d = crossed_triple()
    report = blr.gamma_sup(d)
    assert report.gamma == pytest.approx(0.25, abs=1e-12)
    assert report.certification == "lattice-enumerated"
    assert blr.locbd_exponent(d) == pytest.approx(0.5, abs=1e-12)


def test_subspace_arithmetic():
    x = blr.Subspace.span_of(np.array([[1.0], [0.0]]))
    y = blr.Subspace.span_of(np.array([[0.0], [1.0]]))
    assert blr.subspace_sum(x, y).dim == 2
    assert blr.subspace_intersect(x, y).dim == 0
    assert blr.grassmann_distance(x, y) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        blr.grassmann_distance(x, blr.Subspace.full(3))


def test_witness_cells_and_ratio():
    d = crossed_triple()
    x_axis = blr.Subspace.span_of(np.array([[1.0], [0.0]]))
    w = blr.witness(d, x_axis, 10.0)
    assert [len(cells) for cells in w.cell_sets] == [23, 5, 115]

    halves = loomis_whitney(0.5, 0.5)
    fns = blr.witness_fns(halves, blr.Subspace.full(2), 8.0)
    report = blr.bl_ratio(halves, fns, 8.0, blr.GridSpec(256, 4))
    assert report.ratio == pytest.approx(256.0 / 19.0, rel=0.02)


def test_overlap_of_crossing_strips():
    def strips(which):
        fam = blr.TubeFamily()
        fam.direction_center = blr.random_subspace(2, 1, 0)  # replaced below
        direction = blr.Subspace.span_of(
            np.array([[1.0], [0.0]]) if which == 0 else np.array([[0.0], [1.0]])
        )
        fam.direction_center = direction
        tubes = []
        for c in (-0.75, -0.25, 0.25, 0.75):
            base = np.zeros(2)
            base[1 - which] = c
            tubes.append(blr.Tube(direction, base, 0.125))
        fam.tubes = tubes
        return fam

    overlap = blr.overlap_integral([strips(0), strips(1)], [1.0, 1.0], blr.GridSpec(512, 4))
    assert overlap == pytest.approx(1.0, abs=1e-9)
    bound = blr.kakeya_bound(loomis_whitney(1.0, 1.0), 0.125, [4, 4], 0.0, 4.0)
    assert bound == pytest.approx(1.0, abs=1e-12)


def test_multiscale_schedule():
    omega, ell = blr.multiscale_schedule(1.0 / 16, 1.0, 2.0)
    assert omega == pytest.approx(0.5)
    assert ell == 4


def test_sweep_and_ledger():
    lw = loomis_whitney(1.0, 1.0)
    sweep = blr.delta_sweep(
        lw, 0.05, [1.0 / 32, 1.0 / 16, 1.0 / 8], [16, 16], 0.2,
        blr.GridSpec(256, 4), 11,
    )
    assert len(sweep.rows) == 3
    assert sweep.predicted_slope == pytest.approx(2.0)
    assert sweep.slope > 1.5
    assert all(row.overlap <= row.bound * (1 + 1e-9) for row in sweep.rows)

    sampling = blr.LedgerSampling()
    sampling.families = 2
    sampling.counts = [8, 8]
    sampling.nu = 0.0
    ledger = blr.multiscale_ledger(lw, 0.25, 0.5, sampling, blr.GridSpec(128, 4), 7)
    assert ledger.ell == 2
    assert len(ledger.rows) == 2
    assert ledger.kappa_measured == max(row.kappa_hat for row in ledger.rows)

    assert blr.cell_swallowing_inflation(2, 0.05, 0.25) == pytest.approx(
        2.0 * math.sqrt(2.0) * 0.05 / 0.25
    )


def test_growth_fit_slope():
    halves = loomis_whitney(0.5, 0.5)
    fit = blr.fit_growth(
        halves, [4.0, 8.0, 16.0, 32.0], blr.GridSpec(128, 4),
        witness_of=blr.Subspace.full(2),
    )
    assert abs(fit.slope - 1.0) <= 0.2
    assert blr.fit_loglog([1.0, 2.0, 4.0], [1.0, 4.0, 16.0]).slope == pytest.approx(2.0)


def test_basis_selection():
    lw = loomis_whitney(1.0, 1.0)
    sel = blr.select_basis(lw, trials=2048, seed=1)
    assert sel.margin == pytest.approx(1.0 / math.sqrt(2.0), rel=0.02)
    exponent, match = blr.verify_locbd_exponent(lw, sel)
    assert match
    assert exponent == pytest.approx(blr.locbd_exponent(lw), abs=1e-12)


def test_determinism_and_validation():
    a = blr.random_subspace(3, 2, 42)
    b = blr.random_subspace(3, 2, 42)
    assert np.array_equal(a.basis, b.basis)

    bad = blr.BLDatum.from_maps(2, [np.zeros((1, 2))], [1.0])
    report = blr.validate(bad)
    assert not report.ok()
    assert any("surjective" in issue.what for issue in report.issues)

    d = loomis_whitney(0.5, 0.5)
    scan = blr.stability_scan(d, blr.PerturbationSpec(nu=0.0, seed=3, samples=4))
    assert scan.violations == 0
    assert scan.max_gamma == scan.gamma_base
