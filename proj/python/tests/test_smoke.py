import math

import numpy as np
import pytest

import milburn3 as m


def ref_params(g=0.5, gamma=10.0, alpha=4.0):
    return m.SystemParams(omega=4.0, lambda_=0.5, g=g, gamma=gamma, alpha=alpha)


def test_mixing_angle_and_frequencies():
    p = ref_params()
    assert m.mixing_angle(p) == pytest.approx(0.6154797086703874, abs=1e-14)
    s = m.effective_frequencies(p)
    evals = np.linalg.eigvalsh(m.single_particle_matrix(p))
    assert sorted([s.omega_minus, s.Omega, s.Omega2]) == pytest.approx(list(evals), abs=1e-12)


def test_closed_forms_conserve_and_start_in_mode_one():
    times = np.linspace(0.0, 30.0, 301)
    out = m.mean_photon_numbers(ref_params(), times)
    assert out["n1"][0] == pytest.approx(16.0, abs=1e-12)
    total = out["n1"] + out["n2"] + out["n3"]
    assert np.max(np.abs(total - 16.0)) < 1e-12


def test_per_k_matches_oracle():
    p = ref_params()
    k3 = m.per_k_expectations(p, 3)
    assert k3.as_tuple() == pytest.approx((15.292068283396814, 0.3539658583015931, 0.35396585830159333), abs=1e-10)
    assert m.CoherentOracle(p).per_k(3).as_tuple() == pytest.approx(k3.as_tuple(), abs=1e-10)
    with pytest.raises(ValueError):
        m.per_k_expectations(p, -1)


def test_analytic_agrees_with_oracle():
    p = ref_params(g=0.1)
    times = np.linspace(0.0, 5.0, 51)
    a = m.mean_photon_numbers(p, times)
    o = m.CoherentOracle(p).series(times)
    for key in ("n1", "n2", "n3"):
        assert np.max(np.abs(a[key] - o[key])) < 1e-8


def test_poisson_kmax():
    assert m.poisson_kmax(10.0, 1e-12)[0] == 39
    k, tail = m.poisson_kmax(100.0, 1e-10)
    assert k == 170 and tail <= 1e-10


def test_fock_engine_small_alpha():
    p = ref_params(alpha=1.0)
    e = m.FockSeriesEngine(p, (8, 8, 8), leakage_budget=1e-4)
    n, trace = e.observables(1.0)
    exact = m.coherent_oracle(p, 1.0)
    assert trace <= 1.0 + 1e-12
    assert n.n1 == pytest.approx(exact.n1, abs=1e-6 + e.leakage * 10)
    assert 0.0 < e.purity(1.0) <= 1.0 + 1e-12


def test_fock_truncation_raises():
    with pytest.raises(m.TruncationError):
        m.FockSeriesEngine(ref_params(alpha=4.0), (5, 5, 5))


def test_presets_and_run_scenario():
    names = [c.name for c in m.presets()]
    assert names == ["fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c"]
    cfg = m.preset("fig1b")
    cfg.t_max = 2.0
    cfg.steps = 20
    cfg.engines = ["analytic", "coherent"]
    res = m.run_scenario(cfg)
    assert res["ok"]
    assert [s["engine"] for s in res["series"]] == ["analytic", "coherent"]
    assert len(res["series"][0]["t"]) == 20


def test_validate_and_fault():
    cfg = m.preset("fig1a")
    cfg.t_max = 2.0
    cfg.steps = 20
    cfg.set("engines", "analytic,coherent")
    assert m.validate(cfg)[0]
    assert not m.validate(cfg, omega_shift=0.1)[0]


def test_bad_inputs():
    with pytest.raises(ValueError):
        m.SystemParams(omega=-1.0, lambda_=0.0, g=0.0, gamma=1.0, alpha=1.0)
    with pytest.raises(m.ConfigError):
        m.preset("fig9")
    with pytest.raises(m.ConfigError):
        m.ScenarioConfig().set("gamma", "fast")


def test_unitary_limit():
    p = ref_params(gamma=1e6)
    for t in (0.0, 2.5, 10.0):
        a = m.mean_photon_numbers(p, [t])
        u = m.schrodinger_occupations(p, t)
        assert a["n1"][0] == pytest.approx(u.n1, abs=1e-4)
    assert math.isfinite(m.asymptotic_time(p))
