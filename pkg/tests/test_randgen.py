from statistics import fmean

import pytest

from kclub.graph import complete_graph, density, degree_variance, is_connected
from kclub.randgen import (RNG_ALGORITHM, GenerationExhausted, GenParams, format_metadata, generate,
                           generate_connected, generate_connected_with_attempts, metadata,
                           ndv_presets, parse_metadata, preset)


def test_params_validation():
    with pytest.raises(ValueError):
        GenParams(10, 0.5, 0.4)
    with pytest.raises(ValueError):
        GenParams(10, -0.1, 0.4)
    with pytest.raises(ValueError):
        GenParams(10, 0.1, 1.1)
    with pytest.raises(ValueError):
        GenParams(1, 0.1, 0.1)
    assert GenParams(10, 0.0, 0.2).expected_density == pytest.approx(0.1)


def test_extremes():
    assert generate(GenParams(7, 1, 1, 5)) == complete_graph(7)
    assert generate(GenParams(7, 0, 0, 5)).m == 0
    g, attempts = generate_connected_with_attempts(GenParams(9, 1, 1, 0))
    assert g == complete_graph(9) and attempts == 1


def test_determinism():
    p = GenParams(50, 0.0, 0.2, 1234)
    assert generate(p) == generate(p)
    assert generate_connected(p) == generate_connected(p)
    assert generate(p) != generate(GenParams(50, 0.0, 0.2, 1235))


def test_presets():
    lo, hi = ndv_presets(100, 0.1)
    assert (lo.a, lo.b) == (0.1, 0.1) and (hi.a, hi.b) == (0, 0.2)
    lo, hi = ndv_presets(100, 0.035)
    assert (lo.a, lo.b) == (0.035, 0.035) and (hi.a, hi.b) == (0, 0.07)
    lo, hi = ndv_presets(100, 0.5)
    assert (lo.a, lo.b) == (0.5, 0.5) and (hi.a, hi.b) == (0, 1.0)
    with pytest.raises(ValueError):
        ndv_presets(100, 0.6)
    with pytest.raises(ValueError):
        preset(100, 0.1, "mid")


def test_connected_sparse_max_ndv():
    g = generate_connected(GenParams(100, 0.0, 0.2, 11))
    assert is_connected(g)
    assert abs(density(g) - 0.1) < 0.03


def test_exhaustion():
    with pytest.raises(GenerationExhausted):
        generate_connected(GenParams(100, 0.001, 0.001, 0), max_attempts=5)
    with pytest.raises(ValueError):
        generate_connected(GenParams(10, 0.5, 0.5), max_attempts=0)


def test_density_and_variance_statistics():
    lo = [generate(preset(100, 0.1, "min", s)) for s in range(100)]
    hi = [generate(preset(100, 0.1, "max", s)) for s in range(100)]
    assert abs(fmean(density(g) for g in lo) - 0.1) < 0.01
    assert abs(fmean(density(g) for g in hi) - 0.1) < 0.01
    assert fmean(degree_variance(g) for g in hi) > fmean(degree_variance(g) for g in lo)


def test_metadata_round_trip():
    p = preset(30, 0.2, "max", 9)
    g, attempts = generate_connected_with_attempts(p)
    meta = metadata(p, g, attempts)
    back = parse_metadata(format_metadata(meta))
    assert back["rng"] == RNG_ALGORITHM
    assert int(back["n"]) == 30 and int(back["m"]) == g.m and int(back["seed"]) == 9
    assert float(back["a"]) == 0 and float(back["b"]) == 0.4
    assert int(back["attempts"]) == attempts
    assert float(back["density"]) == pytest.approx(density(g), abs=1e-6)
    assert float(back["degree_variance"]) == pytest.approx(degree_variance(g), abs=1e-6)
