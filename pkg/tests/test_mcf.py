import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from geamlab.mcf import ZERO_WEIGHT, c_value, construct_mcf, f_tilde_transform, inverse_mean, parse_mcf

FAMILIES = ["sld", "wy", "wyd:0.3", "gwyd:0.2,0.5", "gwyd:0.1,0.1", "wyd:0.85"]
unit = st.floats(1e-6, 1.0)
admissible = st.tuples(st.floats(0.02, 0.98), st.floats(0.02, 0.98)).filter(lambda ab: ab[0] + ab[1] <= 1)


def naive_gwyd_c(x, y, a, b):
    # power form, independent of the log/expm1 evaluation in the package
    g = 1 - a - b
    return (x ** a - y ** a) * (x ** b - y ** b) * (x ** g + y ** g) / (2 * a * b * (x - y) ** 2)


def test_sld_basics():
    f = construct_mcf("sld")
    assert float(f(1.0)) == 1.0
    assert f.f0 == 0.5


def test_wy_value_at_four():
    assert abs(float(parse_mcf("wy")(4.0)) - 9 / 4) < 1e-14


def test_gwyd_reduces_to_wyd():
    grid = np.linspace(0.01, 20, 400)
    assert np.max(np.abs(construct_mcf("gwyd", 0.3, 0.7)(grid) - construct_mcf("wyd", 0.3)(grid))) <= 1e-10


def test_f0_values():
    assert parse_mcf("wy").f0 == 0.25
    assert abs(parse_mcf("wyd:0.3").f0 - 0.21) < 1e-15
    assert abs(parse_mcf("gwyd:0.2,0.5").f0 - 0.2) < 1e-15


@pytest.mark.parametrize(
    "family,args",
    [("wyd", (0.0,)), ("wyd", (1.0,)), ("gwyd", (0.0, 0.5)), ("gwyd", (0.6, 0.6)), ("gwyd", (-0.1, 0.5)), ("nope", ())],
)
def test_domain_errors(family, args):
    with pytest.raises(ValueError):
        construct_mcf(family, *args)


@pytest.mark.parametrize("text", ["sld:1", "wyd", "gwyd:0.2", "wyd:x", "foo"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_mcf(text)


def test_kernel_examples():
    sld, wy = parse_mcf("sld"), parse_mcf("wy")
    assert abs(c_value(sld, 0.75, 0.25) - 2) < 1e-15
    assert abs(c_value(wy, 1.0, 0.0) - 4) < 1e-15
    for text in FAMILIES:
        assert abs(c_value(parse_mcf(text), 0.5, 0.5) - 2) < 1e-15
    assert c_value(wy, 0.0, 0.0) == ZERO_WEIGHT
    assert wy.weight(0.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        c_value(wy, -0.1, 0.5)


def test_mean_examples():
    sld, wy = parse_mcf("sld"), parse_mcf("wy")
    assert abs(inverse_mean(sld, 0.75, 0.25) - 0.5) < 1e-15
    assert inverse_mean(sld, 0.0, 0.0) == 0.0
    assert abs(inverse_mean(wy, 1.0, 1.0) - 1) < 1e-15
    assert abs(inverse_mean(wy, 0.6, 0.0) - 0.6 * 0.25) < 1e-15
    with pytest.raises(ValueError):
        inverse_mean(wy, 0.5, -1.0)


@pytest.mark.parametrize("text", FAMILIES)
def test_symmetry_and_reciprocity(text):
    f = parse_mcf(text)
    rng = np.random.default_rng(5)
    x, y = rng.uniform(1e-12, 1, (2, 10000))
    c = f.c(x, y)
    assert np.max(np.abs(c - f.c(y, x))) <= 1e-12 * np.max(np.abs(c))
    assert np.max(np.abs(f.mean(x, y) * c - 1)) <= 1e-10


@given(admissible, unit, unit)
def test_gwyd_closed_form(ab, x, y):
    a, b = ab
    assume(abs(x - y) > 1e-3 * max(x, y))
    f = construct_mcf("gwyd", a, b)
    assert abs(f.c(x, y) - 1 / (y * float(f(x / y)))) <= 1e-9 * f.c(x, y)
    assert abs(f.c(x, y) - naive_gwyd_c(x, y, a, b)) <= 1e-9 * f.c(x, y)


@pytest.mark.parametrize("text", FAMILIES)
def test_boundary_limit(text):
    # c(x, eps) approaches 1/(x f0) like eps^e, e the smallest positive exponent
    f = parse_mcf(text)
    exps = [1.0] if f.family == "sld" else [e for e in (f.alpha, f.beta, 1 - f.alpha - f.beta) if e > 1e-12]
    x = 0.7
    target = 1 / (x * f.f0)
    errs = []
    for eps in (1e-6, 1e-9):
        rel = abs(float(f.c(x, eps)) - target) / target
        assert rel <= max(1e-3, 4 * eps ** min(exps))
        errs.append(rel)
    assert errs[1] < errs[0]


@pytest.mark.parametrize("text", ["sld", "wy"])
def test_boundary_limit_literal(text):
    # the families whose convergence is fast enough for the flat 1e-3 bound at both eps
    f = parse_mcf(text)
    x = 0.7
    rel = abs(float(f.c(x, 1e-9)) - 1 / (x * f.f0)) * x * f.f0
    assert rel <= 1e-3


@given(admissible)
def test_invariants_hold_for_admissible_parameters(ab):
    f = construct_mcf("gwyd", *ab)
    grid = np.array([0.1, 0.2, 0.5, 0.8, 1.0, 1.25, 2.0, 5.0, 10.0])
    vals = f(grid)
    assert abs(float(f(1.0)) - 1) <= 1e-12
    assert np.max(np.abs(vals - grid * f(1 / grid))) <= 1e-10
    assert np.all(np.diff(vals) >= -1e-12)


def test_near_degenerate_branch_continuity():
    f = parse_mcf("gwyd:0.2,0.5")
    x = 0.4
    for rel in (1e-10, 1e-8, 1e-6):
        assert abs(f.c(x, x * (1 + rel)) - 1 / x) <= 2 * rel / x


@pytest.mark.parametrize("text", FAMILIES)
def test_f_tilde(text):
    f = parse_mcf(text)
    ft = f_tilde_transform(f)
    assert abs(float(ft(1.0)) - 1) < 1e-15
    assert float(ft(0.0)) == 0.0
    # f~(x) -> 0 like x^e with e the smallest positive exponent of f
    exps = [1.0] if f.family == "sld" else [e for e in (f.alpha, f.beta, 1 - f.alpha - f.beta) if e > 1e-12]
    for x in (1e-7, 1e-10):
        assert 0 <= float(ft(x)) <= 4 * x ** min(exps)
    assert ft.mean(0.3, 0.0) == 0.0


def test_f_tilde_sld_closed_form():
    ft = f_tilde_transform(parse_mcf("sld"))
    assert abs(float(ft(3.0)) - 1.5) < 1e-15
    xs = np.linspace(0.01, 10, 50)
    assert np.allclose(ft(xs), 2 * xs / (xs + 1), atol=1e-14)
    assert abs(ft.mean(0.75, 0.25) - 0.75 * float(ft(0.25 / 0.75))) < 1e-15


def test_labels_roundtrip():
    for text in ["sld", "wy", "wyd:0.3", "gwyd:0.2,0.5"]:
        assert parse_mcf(text).label == text
        assert parse_mcf(parse_mcf(text).label) is parse_mcf(text)
