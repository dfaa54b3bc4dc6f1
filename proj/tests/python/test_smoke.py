import math

import numpy as np
import pytest

import adhesion as ad

REFERENCE = [(1.8, 0.0), (2.5, 1.5), (0.0, 0.0)]


def test_three_sector_classification():
    p = ad.build(*REFERENCE)
    assert p.b == pytest.approx((0.9, 4 / 3), abs=1e-14)
    assert not p.sticky
    r = ad.riemann3_report(p, 0.3)
    assert r["outflow_pair"] == [2, 3]
    assert r["atom_mass_nu"] == pytest.approx(0.1215, abs=1e-14)
    assert r["atom_mass_rho"] == 0.0


def test_equilateral_is_sticky():
    v = [(math.cos(a), math.sin(a)) for a in (math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3)]
    p = ad.build(*v)
    assert p.sticky
    for y in [(0.1, 0.2), (-0.4, 0.3), (0.05, -0.6)]:
        assert ad.exact_X(p, y, 0.3) == pytest.approx(ad.exact_T(p, y, 0.3), abs=1e-12)


def test_collinear_rejected():
    with pytest.raises(ValueError):
        ad.build((0, 0), (1, 1), (2, 2))


def test_hopf_lax_of_linear_data():
    s = ad.PotentialSpec.linear((0.5, -1.0))
    x, t = (0.3, 0.2), 0.7
    # u_t(x) = v.x - t|v|^2 / 2
    assert ad.hopf_lax_u(s, x, t) == pytest.approx(0.5 * 0.3 - 0.2 - 0.7 * 1.25 / 2, abs=1e-12)
    assert ad.cole_hopf_u(s, x, t, 0.1) == pytest.approx(ad.hopf_lax_u(s, x, t), abs=1e-10)


def test_json_round_trip():
    s = ad.PotentialSpec.min_of(REFERENCE)
    back = ad.PotentialSpec.from_json(s.to_json())
    assert back.K == pytest.approx(s.K)
    assert ad.has_exact_flow(s)


def test_convexify_1d():
    x = np.linspace(-2, 2, 81)
    f = np.minimum(x**2, 1.0)
    g = ad.convexify(f, -2.0, 2.0)
    assert np.all(g <= f + 1e-12)
    assert g[0] == pytest.approx(1.0)
    assert np.all(np.diff(g, 2) >= -1e-12)


def test_viscous_paths_approach_limit():
    s = ad.PotentialSpec.min_of(REFERENCE)
    seeds = [(0.1, 0.1), (-0.5, 0.2)]
    limit = np.array([ad.exact_flow(s, y, 0.3) for y in seeds])
    gaps = [np.abs(ad.viscous_paths(s, seeds, [0.0, 0.3], e)[:, 1, :] - limit).max() for e in (0.1, 0.025)]
    assert gaps[1] < gaps[0]


def test_acceptance_subset():
    res = ad.run_acceptance([1, 10])
    assert [r["id"] for r in res] == [1, 10]
    assert all(r["pass"] for r in res)
