import numpy as np
import pytest
from scipy.integrate import quad

from criticalgabor import (CoefficientSet, SampledSignal, SIGMA0, atom,
                           atom_inner, field_synthesis, gabor_transform,
                           half_plane_mass, inner, l2norm, synthesize,
                           tail_mass)

T8, H64 = 8.0, 1.0 / 64.0


class TestAtom:
    def test_unit_norm(self):
        assert abs(l2norm(atom((0, 0))) - 1.0) < 1e-10

    def test_modulus_independent_of_frequency(self):
        a0 = atom((0, 0))
        a7 = atom((0, 7.3))
        np.testing.assert_allclose(np.abs(a7.values), np.abs(a0.values), atol=1e-14)

    def test_overlap_against_quadrature_oracle(self):
        # oracle: int 2^{1/2} exp(-pi(x-1)^2 - pi x^2) dx = exp(-pi/2)
        oracle = quad(lambda x: np.sqrt(2) * np.exp(-np.pi * (x - 1) ** 2 - np.pi * x ** 2),
                      -np.inf, np.inf)[0]
        assert abs(oracle - np.exp(-np.pi / 2)) < 1e-12
        val = inner(atom((1, 0)), atom((0, 0)))
        assert abs(val - oracle) < 1e-8

    def test_boundary_margin_enforced(self):
        with pytest.raises(ValueError):
            atom((4.5, 0))
        atom((4.5, 0), margin=3.0)  # explicit relaxation is allowed


class TestAtomInner:
    def test_diagonal(self):
        assert atom_inner((0.3, -1.2), (0.3, -1.2)) == pytest.approx(1.0)

    def test_displaced(self):
        assert atom_inner((1, 0), (0, 0)) == pytest.approx(np.exp(-np.pi / 2))

    def test_lattice_reduction(self):
        # lattice pairs reduce to exp(pi i p theta - pi/2 (p^2+theta^2)) at the difference
        for lam, mu in [((2, 1), (1, 1)), ((0, 3), (-1, 1)), ((-2, -1), (1, 2))]:
            p, t = lam[0] - mu[0], lam[1] - mu[1]
            g = np.exp(1j * np.pi * p * t - np.pi / 2 * (p * p + t * t))
            assert atom_inner(lam, mu) == pytest.approx(g, abs=1e-12)

    def test_agrees_with_quadrature_100_pairs(self, rng):
        worst = 0.0
        for _ in range(100):
            lam = tuple(rng.uniform(-3, 3, 2))
            mu = tuple(rng.uniform(-3, 3, 2))
            quad_val = inner(atom(lam), atom(mu))
            worst = max(worst, abs(quad_val - atom_inner(lam, mu)))
        assert worst < 1e-8


class TestGaborTransform:
    def test_atom_input_gives_gaussian_profile(self):
        mu = (0.5, -0.25)
        field = gabor_transform(atom(mu), box=3.0, dlam=1 / 4)
        P, Th = np.meshgrid(field.p_grid, field.theta_grid, indexing="ij")
        expected = np.exp(-np.pi * ((P - mu[0]) ** 2 + (Th - mu[1]) ** 2) / 2)
        assert np.max(np.abs(np.abs(field.values) - expected)) < 1e-10

    def test_zero_signal(self):
        z = SampledSignal(T8, H64, np.zeros(1025))
        field = gabor_transform(z, box=2.0, dlam=0.5)
        assert np.all(field.values == 0)

    def test_parseval_h2(self, hermites, h2_field):
        ratio = h2_field.mass() / hermites[2].norm() ** 2
        assert abs(ratio - 1.0) < 1e-3

    def test_box_beyond_grid_rejected(self, hermites):
        with pytest.raises(ValueError):
            gabor_transform(hermites[0], box=9.0)

    def test_real_even_signal_symmetry(self, hermites, h2_field):
        vals = np.abs(h2_field.values)
        assert np.max(np.abs(vals - vals[::-1, ::-1])) < 1e-10

    def test_weak_reconstruction(self, hermites):
        for n in range(4):
            field = gabor_transform(hermites[n])
            rec = field_synthesis(field, T8, H64)
            assert (rec - hermites[n]).norm() / hermites[n].norm() < 1e-2

    def test_csv_export(self, tmp_path, hermites):
        field = gabor_transform(hermites[0], box=1.0, dlam=0.5)
        path = tmp_path / "field.csv"
        field.to_csv(path)
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "p,theta,re,im"
        assert len(rows) == 1 + field.values.size


class TestSynthesize:
    def test_single_coefficient_is_atom(self):
        c = CoefficientSet({(1, -1, False): 1.0})
        assert (synthesize(c, T8, H64) - atom((1, -1))).norm() < 1e-14

    def test_sharp_entry_sits_at_midpoint(self):
        c = CoefficientSet({(0, 0, True): 1.0})
        assert (synthesize(c, T8, H64) - atom((0.5, 0.5))).norm() < 1e-14

    def test_sigma0_series_value(self):
        # oracle: direct summation of sum exp(-pi k^2 / 2)
        oracle = sum(np.exp(-np.pi * k * k / 2) for k in range(-40, 41))
        assert abs(oracle - 1.4194954880837662) < 1e-12
        assert abs(SIGMA0 - oracle) < 1e-5

    def test_norm_bound_on_random_sets(self, rng):
        for _ in range(20):
            c = CoefficientSet()
            v = rng.normal(size=(25, 2)) @ np.array([1, 1j])
            v = v / np.linalg.norm(v)
            i = 0
            for k in range(-2, 3):
                for j in range(-2, 3):
                    c.set(k, j, v[i])
                    i += 1
            assert synthesize(c, T8, H64).norm() <= SIGMA0 * c.l2() * (1 + 1e-9)

    def test_out_of_safe_region_rejected(self):
        c = CoefficientSet({(7, 0, False): 1.0})
        with pytest.raises(ValueError):
            synthesize(c, T8, H64)


class TestTailMass:
    def test_zero_coefficients(self):
        measured, bound = tail_mass(CoefficientSet(), 1.0)
        assert measured == 0.0 and bound == 0.0

    def test_single_atom_radius_one(self):
        # the bound is exactly attained in the continuum for one atom; the
        # midpoint-grid measurement approaches it from below
        c = CoefficientSet({(0, 0, False): 1.0})
        measured, bound = tail_mass(c, 1.0, dlam=1 / 16)
        assert bound == pytest.approx(np.exp(-np.pi))
        assert measured <= bound
        assert measured == pytest.approx(bound, rel=5e-2)

    def test_random_sets_respect_bound(self, rng):
        for _ in range(15):
            c = CoefficientSet()
            for k in range(-2, 3):
                for j in range(-2, 3):
                    c.set(k, j, complex(*rng.normal(size=2)))
            for r in (1.0, 2.0):
                measured, bound = tail_mass(c, r)
                assert measured <= bound * (1 + 1e-9)

    def test_radius_must_be_positive(self):
        with pytest.raises(ValueError):
            tail_mass(CoefficientSet({(0, 0, False): 1.0}), 0.0)


class TestHalfPlaneMass:
    def test_whole_line_limit(self, hermites):
        f = hermites[0]
        assert half_plane_mass(f, -T8) >= 0.999 * f.norm() ** 2

    def test_atom_split_at_center(self, e0):
        val = half_plane_mass(e0, 0.0)
        assert abs(val - 0.5 * e0.norm() ** 2) < 0.02 * e0.norm() ** 2

    def test_far_right_vanishes(self, hermites):
        assert half_plane_mass(hermites[0], T8) < 1e-9

    def test_cross_check_against_field_integral(self, hermites):
        f = hermites[1]
        q, dlam = 0.5, 1 / 16
        rhs = half_plane_mass(f, q)
        # midpoint grid in p so the half-plane edge is integrated to O(dlam^2)
        field = gabor_transform(f, box=(q + dlam / 2, 8.0 - dlam / 2, -8.0, 8.0), dlam=dlam)
        lhs = field.mass()
        assert abs(lhs - rhs) / rhs < 1e-3


class TestCoefficientSet:
    def test_json_roundtrip(self):
        c = CoefficientSet({(0, 0, False): 1 + 2j, (1, -2, True): -0.5j},
                           sharp_block=[0.25j], nodes=[(0.5, 0.5)])
        back = CoefficientSet.from_json(c.to_json())
        assert back.entries == c.entries
        assert back.sharp_block == c.sharp_block
        assert [(n.p, n.theta) for n in back.nodes] == [(0.5, 0.5)]

    def test_l2(self):
        c = CoefficientSet({(0, 0, False): 3.0, (1, 0, False): 4.0})
        assert c.l2() == pytest.approx(5.0)

    def test_block_requires_nodes(self):
        with pytest.raises(ValueError):
            CoefficientSet({}, sharp_block=[1.0], nodes=[])
