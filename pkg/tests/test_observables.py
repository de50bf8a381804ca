import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weyllab.errors import DegenerateDensity, DimensionMismatch
from weyllab.observables import (
    density,
    helicity,
    spin_closed_form,
    spin_vector,
    total_spin,
    total_spin_closed_form,
)
from weyllab.profiles import Constant, Direction, Event, LinearPhase
from weyllab.solutions import ANTIPARTICLE, PARTICLE, DiracSolution, WeylDirectionalSolution

Z = Direction(0.0)
ORIGIN = Event(0.0, 0.0, 0.0, 0.0)


def dirac(f, g, direction=Z, species=PARTICLE, e=ORIGIN):
    return DiracSolution(species, direction, Constant(f), Constant(g), LinearPhase(1.3))(e)


class TestDensity:
    def test_examples(self):
        assert density([1, 0, 1, 0]) == 2
        assert density(dirac(2, 1)) == pytest.approx(10, rel=1e-15)
        assert density(np.zeros(4)) == 0


class TestSpin:
    def test_pure_particle(self):
        np.testing.assert_allclose(spin_vector(dirac(1, 0)), [0, 0, 0.5], atol=1e-15)
        assert total_spin(dirac(1, 0)) == pytest.approx(0.5, abs=1e-15)

    def test_equal_envelopes(self):
        np.testing.assert_allclose(spin_vector(dirac(1, 1)), 0, atol=1e-15)
        assert total_spin(dirac(3, 3)) == pytest.approx(0, abs=1e-15)

    def test_mixed(self):
        np.testing.assert_allclose(spin_vector(dirac(2, 1)), [0, 0, 0.3], atol=1e-15)
        assert total_spin(dirac(2, 1)) == pytest.approx(0.3, abs=1e-15)

    def test_degenerate_density(self):
        with pytest.raises(DegenerateDensity):
            spin_vector(np.zeros(4))
        with pytest.raises(DegenerateDensity):
            helicity(np.zeros(2), Z)

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            spin_vector(np.ones(2))
        with pytest.raises(DimensionMismatch):
            helicity(np.ones(4), Z)

    def test_closed_form_agreement_and_opposition(self):
        rng = np.random.default_rng(42)
        theta = rng.uniform(0, math.pi, 1000)
        phi = rng.uniform(0, 2 * math.pi, 1000)
        f, g = rng.uniform(-3, 3, (2, 1000))
        w = rng.uniform(-5, 5, 1000)
        worst = 0.0
        for i in range(1000):
            d = Direction(theta[i], phi[i])
            e = Event(0.0, *(w[i] * d.unit))
            sp = spin_vector(dirac(f[i], g[i], d, PARTICLE, e))
            sa = spin_vector(dirac(f[i], g[i], d, ANTIPARTICLE, e))
            worst = max(worst, np.max(np.abs(sp - spin_closed_form(d, f[i], g[i], PARTICLE))))
            worst = max(worst, np.max(np.abs(sa - spin_closed_form(d, f[i], g[i], ANTIPARTICLE))))
            np.testing.assert_allclose(sp, -sa, atol=1e-15)
            assert abs(np.linalg.norm(sp) - np.linalg.norm(sa)) <= 1e-15
        assert worst <= 1e-12

    @given(
        st.floats(0, math.pi),
        st.floats(0, 2 * math.pi, exclude_max=True),
        st.floats(-10, 10),
        st.floats(-10, 10),
        st.floats(-1e3, 1e3).filter(lambda c: abs(c) > 1e-3),
    )
    def test_scale_invariance_and_bounds(self, theta, phi, f, g, c):
        psi = dirac(f, g, Direction(theta, phi))
        if density(psi) <= 1e-20:
            return
        s = spin_vector(psi)
        np.testing.assert_allclose(spin_vector(c * psi), s, atol=1e-13)
        assert 0 <= total_spin(psi) <= 0.5 + 1e-12
        assert total_spin(psi) == pytest.approx(float(total_spin_closed_form(f, g)), abs=1e-12)


class TestHelicity:
    def test_pure_states(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            d = Direction(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            for hel in (1, -1):
                psi = WeylDirectionalSolution(hel, d, Constant(rng.uniform(0.1, 5)), LinearPhase(2))(ORIGIN)
                assert abs(helicity(psi, d) - hel) <= 1e-14

    def test_equal_mix(self):
        plus = WeylDirectionalSolution(1, Z, Constant(1), Constant(0))(ORIGIN)
        minus = WeylDirectionalSolution(-1, Z, Constant(1), Constant(0))(ORIGIN)
        assert abs(helicity((plus + minus) / math.sqrt(2), Z)) <= 1e-15
