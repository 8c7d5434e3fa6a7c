import math

import pytest

from beamforge import Params, enumerate_foundation, enumerate_plain
from beamforge.modesets import effective_modes
from beamforge.single_beam import single_beam_residual


def test_plain_dirichlet_amplitudes(dirichlet):
    p = Params(beta=-50.0, varrho=1.0, k=1.0)
    result = enumerate_plain(p, dirichlet)
    assert len(result.unimodal) == 4  # 2|E| with |E| = 2
    by_mode = {}
    for n, a in result.unimodal:
        by_mode.setdefault(n, []).append(a)
    lam1, lam2 = dirichlet.eigenvalue(1), dirichlet.eigenvalue(2)
    assert sorted(by_mode[1]) == pytest.approx(
        [-math.sqrt((50 - lam1) / lam1), math.sqrt((50 - lam1) / lam1)]
    )
    assert max(by_mode[1]) == pytest.approx(2.0163, abs=1e-3)
    assert max(by_mode[2]) == pytest.approx(0.5161, abs=1e-3)
    assert result.bimodal_families == ()
    for n, a in result.unimodal:
        assert a * a == pytest.approx((50.0 - dirichlet.eigenvalue(n)) / dirichlet.eigenvalue(n))
        assert abs(single_beam_residual("plain", p, dirichlet, n, a)) < 1e-10


def test_plain_count_is_twice_effective(scaled):
    for beta in (-0.5, -3.0, -12.0, -33.0):
        p = Params(beta=beta, varrho=1.0, k=5.0)
        assert len(enumerate_plain(p, scaled).unimodal) == 2 * len(
            effective_modes(p, scaled).E
        )


def test_foundation_amplitude_example(scaled):
    p = Params(beta=-15.5, varrho=1.0, k=3.0)
    result = enumerate_foundation(p, scaled)
    amp = max(a for n, a in result.unimodal if n == 1)
    assert amp == pytest.approx(math.sqrt(11.5), abs=1e-12)
    for n, a in result.unimodal:
        assert abs(single_beam_residual("foundation", p, scaled, n, a)) < 1e-10


def test_foundation_bimodal_family(scaled):
    p = Params(beta=-10.0, varrho=1.0, k=4.0)
    result = enumerate_foundation(p, scaled)
    assert ((1, 2), -5.0) in result.bimodal_families  # x^2 + 4 y^2 = 5
    p = Params(beta=-10.0, varrho=1.0, k=3.0)
    assert enumerate_foundation(p, scaled).bimodal_families == ()


def test_foundation_limits_to_plain(scaled):
    beta = -15.5
    plain = enumerate_plain(Params(beta, 1.0, 1.0), scaled)
    nearly = enumerate_foundation(Params(beta, 1.0, 1e-8), scaled)
    assert len(plain.unimodal) == len(nearly.unimodal)
    for (n1, a1), (n2, a2) in zip(sorted(plain.unimodal), sorted(nearly.unimodal)):
        assert n1 == n2
        assert a1 == pytest.approx(a2, rel=1e-3)


def test_foundation_threshold(scaled):
    # mode enters only once k/lam + lam < -beta
    p = Params(beta=-4.9, varrho=1.0, k=4.0)  # k/lam1 + lam1 = 5
    assert all(n != 1 for n, _ in enumerate_foundation(p, scaled).unimodal)
    p = Params(beta=-5.1, varrho=1.0, k=4.0)
    assert any(n == 1 for n, _ in enumerate_foundation(p, scaled).unimodal)


def test_describe_shape(scaled):
    p = Params(beta=-10.0, varrho=1.0, k=4.0)
    doc = enumerate_foundation(p, scaled).describe()
    assert doc["model"] == "foundation"
    assert {"pair": [1, 2], "quadric_constant": -5.0} in doc["bimodal_families"]
