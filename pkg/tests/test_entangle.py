import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from geamlab.entangle import (
    DetectionReport,
    build_reference,
    conjugate_geam,
    criterion_F,
    criterion_G,
    isotropic_closed_form,
    example1_reference,
    isotropic_threshold,
    example2_reference,
    werner_p_from_x,
    werner_x_from_p,
)
from geamlab.geam import GeamError, build_geam, validate_geam
from geamlab.linalg import DensityMatrix, make_rng, sample, special_operators


def test_isotropic_endpoints():
    assert np.allclose(build_reference("isotropic", 3, 0).state.matrix, np.eye(9) / 9)
    phi = special_operators(3, "max-entangled")
    assert np.allclose(build_reference("isotropic", 3, 1).state.matrix, np.outer(phi, phi.conj()))


@pytest.mark.parametrize("x", [-1, -0.4, 0.0, 0.5, 1])
def test_werner_qubit_spectrum(x):
    ev = np.sort(np.linalg.eigvalsh(build_reference("werner", 2, x).state.matrix))
    assert np.allclose(ev, np.sort([(1 + x) / 6] * 3 + [(1 - x) / 2]), atol=1e-14)


def test_werner_qubit_form():
    for p in (-1 / 3, 0.2, 1 / 3, 1):
        a = build_reference("werner-qubit", 2, p).state.matrix
        b = build_reference("werner", 2, werner_x_from_p(p)).state.matrix
        assert np.allclose(a, b, atol=1e-15)
    assert werner_p_from_x(-1) == 1


@pytest.mark.parametrize("family,param", [("isotropic", 1.2), ("werner", -1.5), ("werner-qubit", -0.5), ("other", 0)])
def test_reference_errors(family, param):
    with pytest.raises(ValueError):
        build_reference(family, 2, param)


def test_conjugation():
    g = build_geam("mub", 2)
    c = conjugate_geam(g)
    assert np.array_equal(c.frames[0], g.frames[0])  # sigma_x frame is real
    assert np.array_equal(c.frames[2], g.frames[2])
    assert np.allclose(c.frames[1][0] - np.eye(2) / 6, -(g.frames[1][0] - np.eye(2) / 6))
    cc = conjugate_geam(c)
    assert all(np.array_equal(a, b) for a, b in zip(cc.frames, g.frames))
    assert validate_geam(c).to_dict()["checks"].keys() == validate_geam(g).to_dict()["checks"].keys()
    assert validate_geam(c).passed == validate_geam(g).passed


def test_product_of_maximally_mixed():
    g = build_geam("mub", 3)
    rho = DensityMatrix.maximally_mixed(9)
    assert criterion_F(rho, g, conjugate_geam(g), "sld").value == 0
    rep = criterion_G(rho, g, g)
    assert rep.value <= 1e-15 and rep.verdict == "inconclusive"


def test_isotropic_d2_q09():
    g = build_geam("mub", 2)
    rep = criterion_F(build_reference("isotropic", 2, 0.9).state, g, conjugate_geam(g), "sld")
    assert abs(rep.value - 2.16 / 11.4) <= 1e-12
    assert abs(rep.threshold - 2 / 27) <= 1e-15
    assert rep.verdict == "entangled"


def test_werner_g_values():
    g = build_geam("mub", 2)
    S = g.spec.S
    rep = criterion_G(build_reference("werner", 2, -1).state, g, g)
    assert abs(rep.value - 1.5 * S) <= 1e-14 and abs(rep.threshold - S / 2) <= 1e-15
    assert rep.entangled
    rep = criterion_G(build_reference("werner", 2, 0.5).state, g, g)
    assert rep.value <= 1e-15 and not rep.entangled


def test_isotropic_thresholds():
    assert abs(isotropic_threshold(2) - 0.5) <= 1e-15
    assert abs(isotropic_threshold(3) - (7 + np.sqrt(241)) / 48) <= 1e-15
    for d in (2, 3, 4):
        spec = build_geam("mub", d).spec
        q = isotropic_threshold(d)
        assert abs(isotropic_closed_form(d, q, spec) - 2 * spec.S * (d - 1) / spec.N) <= 1e-10
        # q* > 1/(d+1): the criterion is sufficient, not necessary
        assert q > 1 / (d + 1)


def test_werner_values():
    spec = build_geam("mub", 3).spec
    assert example2_reference(3, 0.2, spec)[1] == pytest.approx(-1 / 3, abs=1e-15)
    g2 = build_geam("sic", 2)
    val, xs = example2_reference(2, -1, g2.spec, g2)
    assert xs == 0 and werner_p_from_x(-1) > 1 / 3
    with pytest.raises(ValueError):
        example2_reference(2, 1.5, g2.spec)
    with pytest.raises(ValueError):
        example1_reference(2, 1.5, g2.spec)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("preset", ["mub", "sic", "mum:0.8", "gsic:0.7"])
def test_isotropic_closed_vs_direct(d, preset):
    g = build_geam(preset, d)
    for q in np.arange(1, 10) / 10:
        example1_reference(d, q, g.spec, g)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_werner_closed_vs_direct_random_signs(d):
    rng = make_rng(d)
    for preset in ("mub", "mum:0.8", "gsic:0.7"):
        for _ in range(2):
            spec_n = build_geam(preset, d).N
            g = build_geam(preset, d, signs=rng.choice([-1, 1], spec_n), realization="gell-mann")
            for x in np.linspace(-1, 1, 9):
                example2_reference(d, x, g.spec, g, tol=1e-10)


def test_pair_and_dimension_checks():
    g2, g3 = build_geam("mub", 2), build_geam("mub", 3)
    with pytest.raises(GeamError):
        criterion_G(DensityMatrix.maximally_mixed(6), g2, g3)
    with pytest.raises(ValueError):
        criterion_G(DensityMatrix.maximally_mixed(8), g2, g2)
    gs = build_geam("sic", 2)
    with pytest.raises(GeamError):
        criterion_F(DensityMatrix.maximally_mixed(4), g2, gs, "sld")


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3]), st.sampled_from(["mub", "sic", "mum:0.8"]), st.sampled_from(["sld", "wy", "gwyd:0.2,0.5"]))
def test_no_false_positives_and_scaling(seed, d, preset, f):
    rng = make_rng(seed)
    a = sample("ginibre-mixed", d, rng=rng, rank=int(rng.integers(1, d + 1)))
    b = sample("ginibre-mixed", d, rng=rng, rank=int(rng.integers(1, d + 1)))
    rho = DensityMatrix(np.kron(a.matrix, b.matrix))
    g = build_geam(preset, d)
    for gB in (g, conjugate_geam(g)):
        rf = criterion_F(rho, g, gB, f)
        rg = criterion_G(rho, g, gB)
        assert rf.value <= rf.threshold + 1e-9
        assert rg.value <= rg.threshold + 1e-9
        assert criterion_F(rho, g, gB, f, scaled=True).verdict == rf.verdict
        assert criterion_G(rho, g, gB, scaled=True).verdict == rg.verdict


@given(st.integers(0, 2 ** 32 - 1))
def test_separable_mixture(seed):
    rng = make_rng(seed)
    d = 2
    w = rng.dirichlet(np.ones(3))
    m = sum(wi * np.kron(sample("haar-pure", d, rng=rng).matrix, sample("haar-pure", d, rng=rng).matrix) for wi in w)
    rho = DensityMatrix(m)
    g = build_geam("mub", d)
    assert criterion_F(rho, g, conjugate_geam(g), "wy").value <= 2 * g.spec.S * (d - 1) / g.N + 1e-9
    rep = criterion_G(rho, g, g)
    assert rep.value <= rep.threshold + 1e-9


@pytest.mark.parametrize("family,param,d", [("isotropic", 0.3, 2), ("isotropic", 0.8, 3), ("werner", -0.7, 3), ("werner", 0.2, 2)])
def test_scaled_agreement_reference(family, param, d):
    g = build_geam("mub", d)
    rho = build_reference(family, d, param).state
    assert criterion_F(rho, g, conjugate_geam(g), "sld").verdict == criterion_F(rho, g, conjugate_geam(g), "sld", True).verdict
    assert criterion_G(rho, g, g).verdict == criterion_G(rho, g, g, True).verdict
    scaled = criterion_F(rho, g, conjugate_geam(g), "sld", True)
    plain = criterion_F(rho, g, conjugate_geam(g), "sld")
    assert abs(scaled.value - g.N ** 2 * plain.value) <= 1e-12


def test_detection_report_roundtrip():
    g = build_geam("mub", 2)
    rep = criterion_G(build_reference("werner", 2, -1).state, g, g, family="werner", param=-1.0)
    back = DetectionReport.from_dict(json.loads(rep.to_json()))
    assert back == rep
    assert set(rep.to_dict()) == {"criterion", "value", "threshold", "verdict", "family", "param", "d", "spec", "f"}


def test_preset_thresholds():
    d, b = 3, 0.8
    mum = build_geam(f"mum:{b}", d)
    rep = criterion_F(DensityMatrix.maximally_mixed(d * d), mum, conjugate_geam(mum), "sld")
    assert abs(rep.threshold - 2 * (d * b - 1) / (d + 1) ** 3) <= 1e-15
    gsic = build_geam(f"gsic:{b}", d)
    rep = criterion_F(DensityMatrix.maximally_mixed(d * d), gsic, conjugate_geam(gsic), "sld")
    # the general threshold 2S(d-1)/N gives 2(db-1)/(d(d+1)) for GSIC-POVMs
    assert abs(rep.threshold - 2 * (d * b - 1) / (d * (d + 1))) <= 1e-15


def test_pure_product_ties_are_inconclusive():
    d = 2
    g = build_geam("mub", d)
    for seed in range(20):
        rng = make_rng(seed)
        rho = DensityMatrix(np.kron(sample("haar-pure", d, rng=rng).matrix, sample("haar-pure", d, rng=rng).matrix))
        rep = criterion_F(rho, g, conjugate_geam(g), "wy")
        assert abs(rep.value - rep.threshold) <= 1e-12
        assert rep.verdict == criterion_F(rho, g, conjugate_geam(g), "wy", True).verdict == "inconclusive"
