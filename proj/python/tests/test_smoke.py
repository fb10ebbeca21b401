import math

import numpy as np
import pytest

import hdxwalk as hx


def test_complete_complex_shape():
    cx = hx.complete_complex(8, 3)
    assert cx.dimension == 3
    assert cx.vertex_count == 8
    assert cx.level_size(3) == 56
    assert cx.is_complete()
    w = cx.weights(1)
    np.testing.assert_allclose(w, np.full(8, 1 / 8), atol=1e-13)


def test_punctured_complex_weights():
    p8 = hx.punctured_complete_complex(8)
    assert p8.level_size(3) == 55
    idx = p8.index_of(2, [1, 2])
    assert math.isclose(p8.weights(2)[idx], 5 / 165, abs_tol=1e-13)
    assert not p8.has_face([1, 2, 3])


def test_gamma():
    rep = hx.gamma(hx.complete_complex(8, 3))
    assert math.isclose(rep["gamma"], 1 / 6, abs_tol=1e-10)


def test_walks_and_lambdas():
    cx = hx.complete_complex(12, 4)
    n13 = hx.canonical_walk(cx, 3, 1)
    lam = hx.walk_lambdas(n13)
    np.testing.assert_allclose(lam, [1, 0.75, 0.5, 0.25], atol=1e-13)
    m = n13.matrix()
    assert m.shape == (220, 220)
    np.testing.assert_allclose(m.sum(axis=1), np.ones(220), atol=1e-10)
    assert math.isclose(hx.laziness(n13), 0.25, abs_tol=1e-12)

    s13 = hx.parse_walk_spec(cx, "S:3:1")
    np.testing.assert_allclose(hx.walk_lambdas(s13), [1, 2 / 3, 1 / 3, 0], atol=1e-13)


def test_stripping_report():
    cx = hx.complete_complex(12, 4)
    rep = hx.stripping_report(hx.canonical_walk(cx, 3, 1))
    assert rep["pass"]
    assert math.isclose(rep["max_deviation"], 1 / 9, abs_tol=1e-9)
    assert [s["count"] for s in rep["strips"]] == [1, 11, 54, 154]


def test_st_rank():
    cx = hx.complete_complex(16, 6)
    pred, emp = hx.st_rank(hx.swap_walk(cx, 4, 1), 0.5)
    assert pred == 2
    assert emp == 2


def test_decomposition_roundtrip():
    cx = hx.complete_complex(9, 3)
    rng = np.random.default_rng(5)
    f = rng.standard_normal(cx.level_size(3))
    dec = hx.decompose(cx, 3, f)
    assert dec["residual"] < 1e-9
    recon = sum(dec["components"])
    np.testing.assert_allclose(recon, f, atol=1e-9)


def test_nonorthogonality_witness():
    p8 = hx.punctured_complete_complex(8)
    f = hx.link_indicator(p8, 3, [1])
    rep = hx.orthogonality_report(p8, 3, f)
    assert rep["max_cross_overlap"] > 1e-8
    assert rep["max_cross_gram"] < 1e-12


def test_expansion_identity():
    cx = hx.complete_complex(9, 4)
    n13 = hx.canonical_walk(cx, 3, 1)
    prof = hx.link_expansion_profile(n13)
    for entry in prof["links"]:
        assert abs(entry["phi"] - entry["level"] / 4) < 1e-12


def test_bm_fixture():
    cx = hx.complete_complex(12, 4)
    fx = hx.tightness_fixture_bm(cx, 2, 2, 1)
    assert math.isclose(fx["exact_phi"], 0.6, abs_tol=1e-12)
    assert math.isclose(fx["measured_phi"], 0.6, abs_tol=1e-10)


def test_unique_games_pipeline():
    cx = hx.complete_complex(9, 3)
    walk = hx.swap_walk(cx, 2, 1)
    inst, truth, corrupted = hx.plant_instance(walk, 4, 0.0, 7)
    assert corrupted == 0.0
    assert hx.ug_value(inst, truth) == pytest.approx(1.0)
    result = hx.iterated_link_rounding(inst, 0.0, 7)
    assert result["value"] == pytest.approx(1.0)

    inst2, _, _ = hx.plant_instance(walk, 4, 0.05, 7)
    result2 = hx.iterated_link_rounding(inst2, 0.05, 7)
    assert result2["value"] > result2["baseline"]


def test_complex_io_roundtrip(tmp_path):
    cx = hx.complete_complex(6, 2)
    path = tmp_path / "j62.json"
    hx.save_complex(cx, path)
    loaded = hx.load_complex(path)
    assert loaded.level_size(2) == cx.level_size(2)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(hx.HdxError):
        hx.complete_complex(3, 9)
    with pytest.raises(hx.HdxError):
        hx.parse_walk_spec(hx.complete_complex(6, 3), "bogus")
