import math
import os

import numpy as np
import pytest

from claimorder.errors import DomainError
from claimorder.extremes import (
    ClaimCountDistribution,
    ExtremeKind,
    Portfolio,
    cdf_max_random,
    cdf_min_random,
    poisson_counts,
)
from claimorder.severity import Exponential, neg_log
from claimorder.simulate import (
    EmpiricalCurve,
    SimulationConfig,
    dkw_bound,
    ks_distance,
    sample_extreme,
)


def exp_portfolio(p, alpha):
    return Portfolio(Exponential(), neg_log(), np.asarray(p, float), np.asarray(alpha, float))


@pytest.fixture
def portfolio():
    return exp_portfolio([0.3, 0.5, 0.6, 0.4], [1.0, 0.8, 1.5, 2.0])


@pytest.fixture
def counts():
    return poisson_counts(1.3, [2, 3, 4])


class TestConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            SimulationConfig(samples=0, seed=1)
        with pytest.raises(DomainError):
            SimulationConfig(samples=10, seed=-1)
        with pytest.raises(DomainError):
            SimulationConfig(samples=10, seed=2**64)

    def test_count_support_limit(self, portfolio):
        with pytest.raises(DomainError):
            sample_extreme(
                portfolio,
                poisson_counts(1.0, [4, 5]),
                ExtremeKind.MAX,
                SimulationConfig(samples=100, seed=0),
            )


class TestDeterminism:
    def test_identical_seeds_byte_identical(self, portfolio, counts):
        cfg = SimulationConfig(samples=5000, seed=42)
        a = sample_extreme(portfolio, counts, ExtremeKind.MAX, cfg)
        b = sample_extreme(portfolio, counts, ExtremeKind.MAX, cfg)
        assert a.sorted_values.tobytes() == b.sorted_values.tobytes()
        assert a.zero_count == b.zero_count

    def test_different_seeds_differ(self, portfolio, counts):
        a = sample_extreme(
            portfolio, counts, ExtremeKind.MAX, SimulationConfig(samples=5000, seed=1)
        )
        b = sample_extreme(
            portfolio, counts, ExtremeKind.MAX, SimulationConfig(samples=5000, seed=2)
        )
        assert a.sorted_values.tobytes() != b.sorted_values.tobytes()

    def test_parallel_matches_serial(self, portfolio, counts):
        cfg = SimulationConfig(samples=(1 << 17) + 17, seed=7)
        serial = sample_extreme(portfolio, counts, ExtremeKind.MIN, cfg)
        old = os.environ.get("CLAIMORDER_THREADS")
        os.environ["CLAIMORDER_THREADS"] = "4"
        try:
            parallel = sample_extreme(portfolio, counts, ExtremeKind.MIN, cfg)
        finally:
            if old is None:
                del os.environ["CLAIMORDER_THREADS"]
            else:
                os.environ["CLAIMORDER_THREADS"] = old
        assert serial.sorted_values.tobytes() == parallel.sorted_values.tobytes()
        assert serial.zero_count == parallel.zero_count

    def test_bad_thread_env_rejected(self, portfolio, counts):
        os.environ["CLAIMORDER_THREADS"] = "many"
        try:
            with pytest.raises(DomainError):
                sample_extreme(
                    portfolio, counts, ExtremeKind.MIN, SimulationConfig(samples=10, seed=0)
                )
        finally:
            del os.environ["CLAIMORDER_THREADS"]


class TestAgainstClosedForms:
    def test_atom_mass_max_within_3_sigma(self):
        p = np.array([0.3, 0.5, 0.6])
        pf = exp_portfolio(p, [1.0, 0.8, 1.5])
        deg = ClaimCountDistribution.degenerate(3)
        n = 200_000
        emp = sample_extreme(pf, deg, ExtremeKind.MAX, SimulationConfig(samples=n, seed=3))
        expected = float(np.prod(1.0 - p))
        sigma = math.sqrt(expected * (1.0 - expected) / n)
        assert abs(emp.zero_mass - expected) <= 3.0 * sigma

    def test_atom_mass_min_within_3_sigma(self):
        p = np.array([0.3, 0.5, 0.6])
        pf = exp_portfolio(p, [1.0, 0.8, 1.5])
        deg = ClaimCountDistribution.degenerate(3)
        n = 200_000
        emp = sample_extreme(pf, deg, ExtremeKind.MIN, SimulationConfig(samples=n, seed=4))
        expected = 1.0 - float(np.prod(p))
        sigma = math.sqrt(expected * (1.0 - expected) / n)
        assert abs(emp.zero_mass - expected) <= 3.0 * sigma

    def test_single_exponential_survival_oracle(self):
        # one claim, p = 0.5, rate 1: P(T > 1) = 0.5 e^{-1} = 0.18394
        pf = exp_portfolio([0.5], [1.0])
        deg = ClaimCountDistribution.degenerate(1)
        n = 1_000_000
        emp = sample_extreme(pf, deg, ExtremeKind.MIN, SimulationConfig(samples=n, seed=5))
        expected = 0.5 * math.exp(-1.0)
        assert expected == pytest.approx(0.18394, abs=5e-6)
        sigma = math.sqrt(expected * (1.0 - expected) / n)
        assert abs(emp.survival(1.0) - expected) <= 3.0 * sigma

    @pytest.mark.parametrize("kind", [ExtremeKind.MIN, ExtremeKind.MAX])
    def test_ks_within_dkw_band(self, portfolio, counts, kind):
        n = 100_000
        emp = sample_extreme(portfolio, counts, kind, SimulationConfig(samples=n, seed=6))
        cdf = cdf_min_random if kind is ExtremeKind.MIN else cdf_max_random
        d = ks_distance(emp, lambda x: cdf(portfolio, counts, x))
        assert d < dkw_bound(n)

    def test_mismatched_portfolio_exceeds_band(self, portfolio, counts):
        n = 100_000
        emp = sample_extreme(portfolio, counts, ExtremeKind.MAX, SimulationConfig(samples=n, seed=8))
        wrong = exp_portfolio(portfolio.p, portfolio.alpha * 1.5)
        d = ks_distance(emp, lambda x: cdf_max_random(wrong, counts, x))
        assert d > dkw_bound(n)

    def test_ks_decreases_with_samples(self, portfolio, counts):
        inversions = 0
        for seed in range(5):
            ds = []
            for n in (10_000, 100_000):
                emp = sample_extreme(
                    portfolio, counts, ExtremeKind.MAX, SimulationConfig(samples=n, seed=seed)
                )
                ds.append(ks_distance(emp, lambda x: cdf_max_random(portfolio, counts, x)))
            if ds[1] >= ds[0]:
                inversions += 1
        assert inversions <= 1

    def test_antithetic_still_within_band(self, portfolio, counts):
        n = 100_000
        emp = sample_extreme(
            portfolio, counts, ExtremeKind.MAX,
            SimulationConfig(samples=n, seed=9, antithetic=True),
        )
        d = ks_distance(emp, lambda x: cdf_max_random(portfolio, counts, x))
        assert d < dkw_bound(n)


class TestEmpiricalCurve:
    def test_cdf_properties(self):
        values = np.sort(np.array([0.0, 0.0, 0.5, 1.0, 2.0]))
        emp = EmpiricalCurve(values, 2)
        assert emp.cdf(-1.0) == 0.0
        assert emp.cdf(0.0) == pytest.approx(0.4)
        assert emp.cdf(0.5) == pytest.approx(0.6)
        assert emp.cdf(10.0) == 1.0
        xs = np.linspace(-1, 3, 50)
        assert np.all(np.diff(emp.cdf(xs)) >= 0)
        assert emp.zero_mass == pytest.approx(0.4)

    def test_ks_of_curve_against_itself_is_small(self):
        rng = np.random.default_rng(0)
        values = np.sort(rng.exponential(size=1000))
        emp = EmpiricalCurve(values, 0)
        assert ks_distance(emp, emp.cdf) <= 1.0 / emp.n + 1e-12

    def test_dkw_bound_values(self):
        assert dkw_bound(1_000_000) == pytest.approx(
            math.sqrt(math.log(2000.0) / 2e6), rel=1e-12
        )
        with pytest.raises(DomainError):
            dkw_bound(1000, level=0.0)
