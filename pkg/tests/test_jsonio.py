import numpy as np
import pytest

from hardyglue.jsonio import (
    boundary_from_json,
    boundary_to_json,
    chart_from_json,
    chart_to_json,
    matrix_from_json,
    matrix_to_json,
    nodal_config_from_json,
    nodal_config_to_json,
)
from hardyglue.loops import Loop
from hardyglue.moduli import Component, NodalConfig
from hardyglue.node_model import NodeBoundary, NodeChart, node_chart


def test_matrix_roundtrip():
    rng = np.random.default_rng(1)
    mat = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    assert np.array_equal(matrix_from_json(matrix_to_json(mat)), mat)


def test_boundary_roundtrip():
    xi = Loop.from_modes(1, 3, {1: [1.0]})
    eta = Loop.from_modes(1, 3, {-1: [0.25]})
    b = NodeBoundary(0.25, xi, eta)
    back = boundary_from_json(boundary_to_json(b))
    assert back.z == b.z
    assert np.array_equal(back.xi.coeffs, b.xi.coeffs)
    assert np.array_equal(back.eta.coeffs, b.eta.coeffs)


def test_chart_roundtrip_uses_lambda_key():
    chart = NodeChart(0.1j, Loop.from_modes(2, 3, {2: [1.0, 0.5]}),
                      Loop.zeros(2, 3), np.array([1.0 + 0j, -2.0 + 0j]))
    data = chart_to_json(chart)
    assert "lambda" in data
    back = chart_from_json(data)
    assert back.z == chart.z
    assert np.array_equal(back.lam, chart.lam)
    assert np.array_equal(node_chart(back).xi.coeffs, node_chart(chart).xi.coeffs)


def test_nodal_config_roundtrip():
    cfg = NodalConfig((Component(1), Component(0, ghost=True)),
                      nodes=(((0, 0), (1, 0)),), marks=((1, 1), (1, 2), (1, 3)))
    back = nodal_config_from_json(nodal_config_to_json(cfg))
    assert back == cfg


def test_missing_fields_raise():
    with pytest.raises(ValueError, match="missing"):
        boundary_from_json({"z": [0, 0]})
    with pytest.raises(ValueError, match="missing"):
        chart_from_json({"z": [0, 0]})
    with pytest.raises(ValueError, match="components"):
        nodal_config_from_json({})
