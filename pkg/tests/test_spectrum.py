import math

import pytest
from hypothesis import given, strategies as st

from beamforge import Spectrum, ValidationError


def test_dirichlet_second_eigenvalue():
    spec = Spectrum.dirichlet()
    assert spec.eigenvalue(2) == pytest.approx(4 * math.pi**2, abs=1e-12)
    assert spec.eigenvalue(2) == pytest.approx(39.4784, abs=1e-4)


def test_scaled_third_eigenvalue():
    assert Spectrum.scaled().eigenvalue(3) == 9.0


def test_power_spectrum_value():
    # direct substitution: (2*pi)**(2+1)
    assert Spectrum.power(2).eigenvalue(2) == pytest.approx(8 * math.pi**3, rel=1e-15)


def test_power_one_matches_dirichlet_exactly():
    d = Spectrum.dirichlet()
    p1 = Spectrum.power(1)
    for n in range(1, 65):
        assert d.eigenvalue(n) == p1.eigenvalue(n)


def test_out_of_range_index():
    spec = Spectrum.scaled(n_max=8)
    with pytest.raises(IndexError):
        spec.eigenvalue(9)
    with pytest.raises(IndexError):
        spec.eigenvalue(0)


def test_explicit_validation():
    Spectrum.explicit([1.0, 2.5, 7.0])
    with pytest.raises(ValidationError):
        Spectrum.explicit([1.0, 1.0, 2.0])  # repeated eigenvalues rejected
    with pytest.raises(ValidationError):
        Spectrum.explicit([2.0, 1.0])
    with pytest.raises(ValidationError):
        Spectrum.explicit([-1.0, 2.0])
    with pytest.raises(ValidationError):
        Spectrum.explicit([])


def test_explicit_caps_n_max():
    spec = Spectrum.explicit([1.0, 4.0], n_max=64)
    assert spec.n_max == 2


@given(st.sampled_from(["dirichlet", "scaled", "power:2", "power:3"]), st.integers(1, 63))
def test_strictly_increasing(token, n):
    spec = Spectrum.from_token(token)
    assert spec.eigenvalue(n) < spec.eigenvalue(n + 1)
    assert spec.eigenvalue(n) > 0


def test_from_token_power_and_errors():
    assert Spectrum.from_token("power:3").p == 3
    with pytest.raises(ValidationError):
        Spectrum.from_token("power:x")
    with pytest.raises(ValidationError):
        Spectrum.from_token("weird")
    with pytest.raises(ValidationError):
        Spectrum.from_token("power:0")


def test_from_file(tmp_path):
    path = tmp_path / "spec.txt"
    path.write_text("1.5\n\n4.25\n 9.0 \n", encoding="utf-8")
    spec = Spectrum.from_token(f"file:{path}")
    assert spec.eigenvalue(2) == 4.25
    assert spec.n_max == 3
    bad = tmp_path / "bad.txt"
    bad.write_text("1.5\nabc\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        Spectrum.from_file(bad)


def test_eigenvalues_array(scaled):
    vals = scaled.eigenvalues(4)
    assert list(vals) == [1.0, 4.0, 9.0, 16.0]
