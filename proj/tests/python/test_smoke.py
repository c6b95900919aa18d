import json
import math
import os
import subprocess

import numpy as np
import pytest

import groundstate as gs


def circle(n=128):
    return gs.torus(1, [2 * math.pi], [n])


def test_manifold_basics():
    m = circle(64)
    assert m.n_vertices == 64
    assert m.total_volume == pytest.approx(2 * math.pi)
    k = m.stiffness
    assert k.shape == (64, 64)
    assert abs(k @ np.ones(64)).max() < 1e-12
    sphere = gs.icosphere(2)
    assert sphere.n_vertices == 162
    assert gs.poincare_constant(circle(256)) == pytest.approx(1.0, abs=1e-3)


def test_potential_and_spectrum():
    m = circle()
    v = gs.Potential(m, "cos+0.1")
    assert v.report.admissible
    x = 2 * math.pi * np.arange(128) / 128
    w = gs.Potential(m, np.cos(x) + 0.1)
    assert np.allclose(v.values, w.values)
    r = gs.lowest_eigenpairs(m, v, 0.1, k=2)
    assert r.eigenvalues[0] > 0
    assert abs(r.eigenvalues[0] - 0.005) / 0.005 < 0.2
    assert gs.lowest_eigenpairs(m, v, 1.0).eigenvalues[0] < 0


def test_certificates_and_tstar():
    m = circle()
    v = gs.Potential(m, "cos+0.1")
    cert = gs.positivity_threshold(m, v, poincare=1.0)
    assert cert.threshold == pytest.approx(0.0202, rel=5e-3)
    neg = gs.negativity_certificate(m, v, gs.Scaling.identity())
    assert neg.witness_coupling > cert.threshold
    res = gs.find_tstar(m, v, gs.Scaling.identity())
    assert abs(res.t_star - 0.2) / 0.2 < 0.25
    assert abs(res.lambda_at_tstar) <= 1e-8
    sq = gs.find_tstar(m, v, gs.Scaling.power(2.0))
    assert sq.t_star == pytest.approx(math.sqrt(res.t_star), rel=1e-8)
    sweep = gs.scan_regimes(m, v, gs.Scaling.identity(), [0.1, 0.3])
    assert tuple(sweep["bracket"]) == (0.1, 0.3)


def test_exceptions():
    m = circle(32)
    with pytest.raises(gs.InadmissiblePotential):
        gs.find_tstar(m, gs.Potential(m, "cos"), gs.Scaling.identity())
    bump = gs.Scaling.table([(0, 0), (1, 2), (2, 1), (3, 5)])
    with pytest.raises(gs.NonMonotoneScaling):
        gs.find_tstar(m, gs.Potential(m, "cos+0.1"), bump)
    with pytest.raises(ValueError):
        gs.torus(1, [1.0], [2])
    with pytest.raises(ValueError):
        gs.mesh("/nonexistent.off")


@pytest.mark.skipif("GROUNDSTATE_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_find_tstar():
    cli = os.environ["GROUNDSTATE_CLI"]
    out = subprocess.run(
        [cli, "find-tstar", "--torus", "1:6.283185307179586:128", "--potential", "cos+0.1"],
        capture_output=True, text=True, check=True,
    )
    doc = json.loads(out.stdout)
    assert abs(doc["tstar"]["t_star"] - 0.2) / 0.2 < 0.25
    bad = subprocess.run([cli, "find-tstar", "--torus", "1:6.283185307179586:128", "--potential", "cos"],
                         capture_output=True, text=True)
    assert bad.returncode == 2
    assert json.loads(bad.stderr)["error"] == "inadmissible_potential"
