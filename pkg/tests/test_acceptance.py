"""Acceptance suite: one criterion mark per check, summarized by conftest.

Run with ``pytest tests/test_acceptance.py`` (or execute this file).  Each
criterion line at the end reads PASS only if every test carrying its mark
passed.  Tolerances are the contract values and are not tuned.
"""

import csv
import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from weyllab.algebra import PAULI
from weyllab.em_gauge import (
    ConstantGauge,
    annihilator,
    potential_for,
    random_gauges,
    separation_field,
    separation_field_supergaussian,
)
from weyllab.fd import FDSpec
from weyllab.observables import helicity, spin_closed_form, spin_vector, total_spin, total_spin_closed_form
from weyllab.profiles import Constant, Direction, ErfChirp, Event, Gaussian, LinearPhase, Reciprocal, SuperGaussian
from weyllab.solutions import (
    ANTIPARTICLE,
    PARTICLE,
    DiracSolution,
    WeylDirectionalSolution,
    WeylTransverseSolution,
)
from weyllab.verifier import (
    RESIDUAL_THRESHOLD,
    FIELD_THRESHOLD,
    annihilator_residual,
    degeneracy_sweep,
    dirac_residual,
    field_crosscheck,
    grid_convergence_order,
    localization_grid,
    residual,
    weyl_residual,
)

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"

FD = FDSpec(4, 0.01)
ENVELOPE = Gaussian(1.0, 1.0, 0.0)
CHIRP = ErfChirp(10.0, 0.5, 0.0)
SEED = 20240601


def random_directions(count=3, seed=SEED):
    """Directions uniform on the sphere."""
    rng = np.random.default_rng(seed)
    cos_t = rng.uniform(-1.0, 1.0, count)
    phi = rng.uniform(0.0, 2 * math.pi, count)
    return [Direction(float(np.arccos(c)), float(p)) for c, p in zip(cos_t, phi)]


DIRECTIONS = random_directions()


def families():
    """(label, solution) for the 8 families, directional ones at 3 random directions."""
    out = []
    for d in DIRECTIONS:
        tag = f"theta={d.theta:.3f},phi={d.phi:.3f}"
        out.append((f"dirac-particle[{tag}]", DiracSolution(PARTICLE, d, ENVELOPE, ENVELOPE, CHIRP)))
        out.append((f"dirac-antiparticle[{tag}]", DiracSolution(ANTIPARTICLE, d, ENVELOPE, ENVELOPE, CHIRP)))
        out.append((f"weyl+[{tag}]", WeylDirectionalSolution(1, d, ENVELOPE, CHIRP)))
        out.append((f"weyl-[{tag}]", WeylDirectionalSolution(-1, d, ENVELOPE, CHIRP)))
    for hel in (1, -1):
        for sense in (1, -1):
            sol = WeylTransverseSolution(hel, sense, SuperGaussian(), ENVELOPE, CHIRP)
            out.append((f"transverse[{hel:+d},{sense:+d}z]", sol))
    return out


FAMILIES = families()


def _summary(rows):
    return "\n".join(f"  {label}: {value:.3e}" for label, value in rows)


# ---------------------------------------------------------------------------
# C1


@pytest.mark.criterion("C1")
def test_c1_solution_validity():
    start = time.perf_counter()
    rows = []
    for label, sol in FAMILIES:
        r = residual(sol, potential_for(sol), localization_grid(sol, 6, 1.0).events(), FD)
        rows.append((label, float(np.max(r))))
    elapsed = time.perf_counter() - start
    worst = max(v for _, v in rows)
    assert elapsed <= 10.0, f"runtime {elapsed:.2f} s"
    assert worst <= RESIDUAL_THRESHOLD, "max residual per case:\n" + _summary(rows)


# ---------------------------------------------------------------------------
# C2


@pytest.mark.criterion("C2")
def test_c2_degeneracy_sweep():
    gauges = random_gauges(np.random.default_rng(SEED), 20)
    rows = []
    for label, sol in FAMILIES:
        rep = degeneracy_sweep(sol, gauges, localization_grid(sol, 6, 1.0), FD)
        rows.append((label, rep.max_norm))
    assert max(v for _, v in rows) <= RESIDUAL_THRESHOLD, "max sweep residual per case:\n" + _summary(rows)


@pytest.mark.criterion("C2")
def test_c2_residual_independent_of_gauge():
    # every sampled s leaves the residual at its s = 0 value up to FD noise
    gauges = random_gauges(np.random.default_rng(SEED), 20)
    worst = 0.0
    for _, sol in FAMILIES:
        rep = degeneracy_sweep(sol, gauges, localization_grid(sol, 6, 1.0), FD)
        worst = max(worst, max(abs(m - rep.baseline_max) for m in rep.details["per_sample_max"]))
    assert worst <= 1e-8


@pytest.mark.criterion("C2")
def test_c2_annihilator_pointwise():
    worst = 0.0
    for _, sol in FAMILIES:
        psi = sol(localization_grid(sol, 6, 1.0).events())
        hel = None if sol.equation == "dirac" else sol.helicity
        r = annihilator_residual(psi, annihilator(sol.direction), hel)
        norm = np.linalg.norm(psi, axis=-1)
        worst = max(worst, float(np.max(r / np.where(norm > 0, norm, 1.0))))
    assert worst <= 1e-13


# ---------------------------------------------------------------------------
# C3

PLANE = DiracSolution(PARTICLE, Direction(0.0), Constant(1.0), Constant(0.0), LinearPhase(1.0))


@pytest.mark.criterion("C3")
def test_c3_mass_control():
    r = dirac_residual(PLANE, None, 0.5, localization_grid(PLANE).events(), FD)
    # 0.70711 is the rounded form of 0.5*sqrt(2)
    assert np.max(np.abs(r - 0.5 * math.sqrt(2))) <= 1e-6


@pytest.mark.criterion("C3")
@pytest.mark.parametrize("hel", [1, -1])
@pytest.mark.parametrize("sense", [1, -1])
def test_c3_zero_potential_transverse(hel, sense):
    sol = WeylTransverseSolution(hel, sense, SuperGaussian(), ENVELOPE, CHIRP)
    r = weyl_residual(sol, None, localization_grid(sol).events(), FD)
    assert np.max(r) >= 1e3 * RESIDUAL_THRESHOLD


@pytest.mark.criterion("C3")
def test_c3_flipped_annihilator():
    rows = []
    for label, sol in FAMILIES + [("plane", PLANE)]:
        flipped = np.concatenate([[1.0], sol.direction.unit])
        r = residual(sol, potential_for(sol, ConstantGauge(1.0), flipped), localization_grid(sol).events(), FD)
        rows.append((label, float(np.max(r))))
    assert min(v for _, v in rows) >= 1e3 * RESIDUAL_THRESHOLD, _summary(rows)


# ---------------------------------------------------------------------------
# C4


@pytest.mark.criterion("C4")
@pytest.mark.parametrize("order,expected", [(4, 4.0), (2, 2.0)])
def test_c4_convergence(order, expected):
    slopes = []
    for d in DIRECTIONS:
        sol = DiracSolution(PARTICLE, d, ENVELOPE, ENVELOPE, CHIRP)
        slopes.append(grid_convergence_order(sol, potential_for(sol), localization_grid(sol), order, [0.04, 0.02, 0.01]))
    assert all(abs(s - expected) <= 0.3 for s in slopes), slopes


# ---------------------------------------------------------------------------
# C5


@pytest.mark.criterion("C5")
def test_c5_spin_closed_forms():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        d = Direction(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)))
        f, g, w = rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-5, 5)
        e = Event(0.0, *(w * d.unit))
        for species in (PARTICLE, ANTIPARTICLE):
            psi = DiracSolution(species, d, Constant(f), Constant(g), CHIRP)(e)
            worst = max(worst, float(np.max(np.abs(spin_vector(psi) - spin_closed_form(d, f, g, species)))))
            worst = max(worst, abs(float(total_spin(psi) - total_spin_closed_form(f, g))))
    assert worst <= 1e-12


@pytest.mark.criterion("C5")
def test_c5_spin_limits_and_opposition():
    e = Event(0.2, 0.4, -0.3, 0.1)
    for d in DIRECTIONS:
        for species in (PARTICLE, ANTIPARTICLE):
            equal = DiracSolution(species, d, Constant(1.7), Constant(1.7), CHIRP)(e)
            pure = DiracSolution(species, d, Constant(1.7), Constant(0.0), CHIRP)(e)
            assert total_spin(equal) <= 1e-15
            assert abs(total_spin(pure) - 0.5) <= 1e-15
        p = spin_vector(DiracSolution(PARTICLE, d, ENVELOPE, Constant(0.3), CHIRP)(e))
        a = spin_vector(DiracSolution(ANTIPARTICLE, d, ENVELOPE, Constant(0.3), CHIRP)(e))
        # the two bilinears sum the same terms in a different order: exact up to rounding
        assert np.max(np.abs(p + a)) <= 1e-15
        assert abs(total_spin(DiracSolution(PARTICLE, d, ENVELOPE, Constant(0.3), CHIRP)(e))
                   - total_spin(DiracSolution(ANTIPARTICLE, d, ENVELOPE, Constant(0.3), CHIRP)(e))) <= 1e-15


@pytest.mark.criterion("C5")
def test_c5_weyl_helicity():
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for _ in range(1000):
        d = Direction(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)))
        e = Event(*rng.uniform(-1, 1, 4))
        for hel in (1, -1):
            psi = WeylDirectionalSolution(hel, d, Constant(rng.uniform(0.1, 3)), CHIRP)(e)
            worst = max(worst, abs(float(helicity(psi, d)) - hel))
    assert worst <= 1e-14


# ---------------------------------------------------------------------------
# C6


@pytest.mark.criterion("C6")
def test_c6_field_dual_oracle():
    gauges = random_gauges(np.random.default_rng(SEED + 1), 5)
    rows = []
    for label, sol in FAMILIES:
        grid = localization_grid(sol, 5, 1.0)
        worst = max(field_crosscheck(sol, g, 1.0, grid, FD).max_norm for g in gauges)
        rows.append((label, worst))
    assert max(v for _, v in rows) <= FIELD_THRESHOLD, _summary(rows)


# ---------------------------------------------------------------------------
# C7

XS, YS = np.meshgrid(np.linspace(-2, 2, 41), np.linspace(-2, 2, 41), indexing="ij")


def from_partials(p, q, branch, x, y):
    """Generic field from the value partials of p alone."""
    pv = p(x, y)
    term = (pv.dx**2 + pv.dy**2 - pv.value * (pv.dxx + pv.dyy)) / pv.value**2
    return (-1.0 if branch == "minus" else 1.0) * term / q


@pytest.mark.criterion("C7")
def test_c7_closed_form_vs_generic():
    worst = 0.0
    for n1 in (1, 2, 3):
        for n2 in (1, 2, 3):
            for branch in ("minus", "plus"):
                args = (1.4, 0.7, 1.1, n1, n2, 0.2, -0.1)
                closed = separation_field_supergaussian(*args, 1.0, branch, XS, YS)
                for generic in (
                    separation_field(SuperGaussian(*args), 1.0, branch, XS, YS),
                    from_partials(SuperGaussian(*args), 1.0, branch, XS, YS),
                ):
                    mask = np.abs(generic) > 1e-6
                    worst = max(worst, float(np.max(np.abs(closed - generic)[mask] / np.abs(generic)[mask])))
    assert worst <= 1e-9


@pytest.mark.criterion("C7")
def test_c7_inversion_flips_sign():
    worst = 0.0
    for n1 in (1, 2, 3):
        for n2 in (1, 2, 3):
            p = SuperGaussian(1.4, 0.7, 1.1, n1, n2, 0.2, -0.1)
            for r1 in (0.5, 1.0, 3.0):
                total = separation_field(p, 1.0, "minus", XS, YS) + separation_field(Reciprocal(p, r1), 1.0, "minus", XS, YS)
                worst = max(worst, float(np.max(np.abs(total))))
    assert worst <= 1e-11


@pytest.mark.criterion("C7")
@pytest.mark.parametrize("q", [1.0, -2.0, 0.5])
def test_c7_gaussian_constant(q):
    bz = separation_field(SuperGaussian(), q, "minus", XS, YS)
    np.testing.assert_allclose(bz, -4.0 / q, rtol=1e-12)


# ---------------------------------------------------------------------------
# C8


def run_cli(*args, env=None):
    return subprocess.run([sys.executable, "-m", "weyllab", *map(str, args)], capture_output=True, text=True, env=env)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


@pytest.mark.criterion("C8")
def test_c8_chirped_waveform(tmp_path):
    proc = run_cli("waveform", "--config", CONFIGS / "chirped_gaussian.cfg", "--out", tmp_path)
    assert proc.returncode == 0, proc.stderr
    header, data = read_csv(tmp_path / "waveform.csv")
    assert header == ["w", "re_c1", "im_c1", "envelope", "local_energy"]
    w, re, im, env, _ = data.T
    modulus = np.hypot(re, im)
    analytic = np.exp(-w**2)  # theta = 0: first component is f(w) e^{ih(w)}
    assert np.max(np.abs(modulus - analytic)) <= 1e-15
    assert np.max(np.abs(env - analytic)) <= 1e-15
    phase = np.unwrap(np.arctan2(im, re))
    dphase = np.gradient(phase, w)
    chirp = 10.0 * np.exp(-0.5 * w**2)
    mask = env > 1e-3
    assert np.max(np.abs(dphase - chirp)[mask] / chirp[mask]) <= 0.01


# ---------------------------------------------------------------------------
# C9

RUNS = [
    ("verify", "planewave.cfg"),
    ("verify", "mass0.5.cfg"),
    ("verify", "chirped_gaussian.cfg"),
    ("verify", "transverse_gaussian.cfg"),
    ("verify", "supergaussian.cfg"),
    ("waveform", "chirped_gaussian.cfg"),
    ("observables", "chirped_gaussian.cfg"),
    ("observables", "oblique_chirp.cfg"),
    ("fields", "transverse_gaussian.cfg"),
    ("separation", "transverse_gaussian.cfg"),
    ("separation", "supergaussian.cfg"),
]


def full_suite(out: Path, threads: int) -> dict:
    env = dict(os.environ, WEYLLAB_THREADS=str(threads))
    files = {}
    for command, cfg in RUNS:
        target = out / f"{command}-{cfg}"
        proc = run_cli(command, "--config", CONFIGS / cfg, "--out", target, env=env)
        assert proc.returncode in (0, 1), proc.stderr
        for path in sorted(target.iterdir()):
            files[f"{target.name}/{path.name}"] = path.read_bytes()
    return files


@pytest.mark.criterion("C9")
def test_c9_determinism(tmp_path):
    first = full_suite(tmp_path / "a", 1)
    second = full_suite(tmp_path / "b", 4)
    third = full_suite(tmp_path / "c", 4)
    assert len(first) == len(RUNS)
    assert first.keys() == second.keys() == third.keys()
    for name in first:
        assert first[name] == second[name] == third[name], name


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
