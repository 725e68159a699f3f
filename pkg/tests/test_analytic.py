import math
import warnings
from dataclasses import replace

import numpy as np
import pytest

from noma_relay import (
    DuplexMode,
    NetworkRealization,
    Scheme,
    SystemConfig,
    analytic_point,
    asymptotic_outage,
    build_quadrature,
    compute_sinrs,
    compute_thresholds,
    diversity_order_estimate,
    exact_outage,
    rrs_outage,
    srs_outage,
    theta1_conditional,
    throughput,
    trs_outage,
)

FD = DuplexMode.FULL_DUPLEX
HD = DuplexMode.HALF_DUPLEX

FIG2_LIKE = dict(num_relays=2, omega_li_db=-10.0)
FIG7_LIKE = dict(num_relays=3, omega_li_db=-20.0)


def fd_cfg(snr_db=30.0, **kw):
    return SystemConfig(snr_db=snr_db, duplex=FD, **{**FIG2_LIKE, **kw})


def hd_cfg(snr_db=30.0, **kw):
    return SystemConfig(snr_db=snr_db, duplex=HD, **{**FIG2_LIKE, **kw})


class TestSrsOutage:
    def test_vanishing_distant_rate_removes_outage(self):
        cfg = fd_cfg(rate_d2=1e-9)
        assert srs_outage(cfg) < 1e-6

    def test_power_of_k_structure(self):
        single = srs_outage(fd_cfg(num_relays=1))
        assert srs_outage(fd_cfg(num_relays=2)) == pytest.approx(
            single**2, rel=1e-12
        )
        assert srs_outage(fd_cfg(num_relays=4)) == pytest.approx(
            single**4, rel=1e-12
        )

    def test_infeasible_split_means_certain_outage(self):
        cfg = fd_cfg(rate_d2=3.0)
        assert srs_outage(cfg) == 1.0
        assert trs_outage(cfg) == 1.0
        assert rrs_outage(cfg, Scheme.SRS) == 1.0
        assert asymptotic_outage(cfg, Scheme.SRS) == 1.0

    @pytest.mark.parametrize("duplex", [FD, HD])
    def test_nonincreasing_in_k(self, duplex):
        for snr in (10.0, 25.0, 40.0):
            values = [
                srs_outage(
                    SystemConfig(snr_db=snr, duplex=duplex, num_relays=k,
                                 omega_li_db=-10.0)
                )
                for k in range(1, 6)
            ]
            assert all(b <= a for a, b in zip(values, values[1:]))

    def test_fd_error_floor(self):
        p50 = srs_outage(fd_cfg(snr_db=50.0))
        p60 = srs_outage(fd_cfg(snr_db=60.0))
        assert abs(p60 - p50) / p50 < 0.02

    def test_hd_strict_decay(self):
        values = [
            srs_outage(hd_cfg(snr_db=float(s))) for s in range(0, 50, 5)
        ]
        assert all(b < a for a, b in zip(values, values[1:]))


class TestTrsOutage:
    def test_vanishing_nearby_rate_collapses_to_first_stage(self):
        # xi <= tau empties the second stage, leaving the same expression
        # that the single-stage scheme evaluates
        cfg = fd_cfg(rate_d1=1e-9, num_relays=3)
        assert theta1_conditional(cfg).theta1 == 0.0
        assert trs_outage(cfg) == pytest.approx(srs_outage(cfg), rel=1e-12)

    def test_k1_equals_random_selection(self):
        for duplex in (FD, HD):
            cfg = SystemConfig(duplex=duplex, num_relays=1, omega_li_db=-20.0)
            assert trs_outage(cfg) == rrs_outage(
                replace(cfg, num_relays=5), Scheme.TRS
            )

    def test_binomial_sum_equals_power_form(self):
        for duplex in (FD, HD):
            for snr in (15.0, 30.0, 45.0):
                cfg = SystemConfig(
                    snr_db=snr, duplex=duplex, **FIG7_LIKE
                )
                th = compute_thresholds(cfg)
                from noma_relay.analytic import _stage1_success

                q = _stage1_success(cfg, th)
                t1 = theta1_conditional(cfg).theta1
                expected = (1.0 - q * (1.0 - t1)) ** cfg.num_relays
                assert trs_outage(cfg) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("duplex", [FD, HD])
    def test_nonincreasing_in_k(self, duplex):
        for snr in (20.0, 35.0):
            values = [
                trs_outage(
                    SystemConfig(snr_db=snr, duplex=duplex, num_relays=k,
                                 omega_li_db=-20.0)
                )
                for k in range(1, 5)
            ]
            assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))

    def test_hd_strict_decay(self):
        values = [
            trs_outage(SystemConfig(snr_db=float(s), duplex=HD, **FIG7_LIKE))
            for s in range(15, 50, 5)
        ]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_fd_error_floor_develops(self):
        cfg = lambda snr: SystemConfig(
            snr_db=snr, duplex=FD, num_relays=3, omega_li_db=-10.0
        )
        p50, p60 = trs_outage(cfg(50.0)), trs_outage(cfg(60.0))
        assert abs(p60 - p50) / p50 < 0.02


class TestTheta1:
    def test_degenerate_window_gives_zero(self):
        # second-stage scale below the first-stage scale: guaranteed pass
        cfg = fd_cfg(rate_d1=0.01, snr_db=20.0)
        th = compute_thresholds(cfg)
        assert th.xi <= th.tau
        bd = theta1_conditional(cfg)
        assert (bd.m1, bd.m2, bd.m3, bd.theta1) == (0.0, 0.0, 0.0, 0.0)

    @pytest.mark.parametrize("duplex", [FD, HD])
    @pytest.mark.parametrize("snr_db", [5.0, 20.0, 35.0, 50.0])
    def test_theta1_is_a_probability(self, duplex, snr_db):
        cfg = SystemConfig(snr_db=snr_db, duplex=duplex, **FIG7_LIKE)
        bd = theta1_conditional(cfg)
        assert 0.0 <= bd.theta1 <= 1.0
        assert bd.xi2 > 0.0

    def test_infeasible_rejected(self):
        with pytest.raises(ValueError):
            theta1_conditional(fd_cfg(rate_d2=3.0))

    def test_fd_high_snr_limit(self):
        # loop-interference-limited limit with SNR-free chi and psi
        cfg = SystemConfig(snr_db=80.0, duplex=FD, **FIG7_LIKE)
        table = build_quadrature(cfg.quad_order, cfg.disc_radius, cfg.alpha)
        w, c = table.weights, table.c
        th = compute_thresholds(cfg)
        rho_tau = cfg.rho * th.tau
        rho_xi = cfg.rho * th.xi
        chi = 1.0 / (1.0 + rho_tau * c * cfg.omega_li)
        psi = 1.0 / (1.0 + rho_xi * c * cfg.omega_li)
        limit = float(np.sum(w * (chi - psi))) / (
            1.0 - float(np.sum(w * (1.0 - chi)))
        )
        assert theta1_conditional(cfg).theta1 == pytest.approx(limit, rel=1e-3)

    def test_fd_scaled_ei_terms_cancel_in_sum(self):
        # m2 + m3 reduces to a closed exponential product; the residual
        # measures the accuracy of the fused exp-scaled Ei evaluation
        for snr in (10.0, 25.0, 40.0):
            cfg = SystemConfig(snr_db=snr, duplex=FD, **FIG7_LIKE)
            table = build_quadrature(cfg.quad_order, cfg.disc_radius, cfg.alpha)
            w, c = table.weights, table.c
            th = compute_thresholds(cfg)
            a_d1 = 1.0 + cfg.d1**cfg.alpha
            chi = 1.0 / (1.0 + cfg.rho * th.tau * c * cfg.omega_li)
            diff = math.exp(-a_d1 * th.tau) - math.exp(-a_d1 * th.xi)
            closed = diff * (
                1.0 - float(np.sum(w * (1.0 - chi * np.exp(-c * th.tau))))
            )
            bd = theta1_conditional(cfg)
            assert bd.m2 + bd.m3 == pytest.approx(closed, rel=1e-9)

    def test_hd_first_two_terms_match_closed_difference(self):
        for snr in (15.0, 30.0):
            cfg = SystemConfig(snr_db=snr, duplex=HD, **FIG7_LIKE)
            table = build_quadrature(cfg.quad_order, cfg.disc_radius, cfg.alpha)
            w, c = table.weights, table.c
            th = compute_thresholds(cfg)
            a_d1 = 1.0 + cfg.d1**cfg.alpha
            closed = float(
                np.sum(
                    w * c / (a_d1 + c)
                    * (np.exp(-(a_d1 + c) * th.tau)
                       - np.exp(-(a_d1 + c) * th.xi))
                )
            )
            bd = theta1_conditional(cfg)
            assert bd.m1 + bd.m2 == pytest.approx(closed, rel=1e-12)

    @pytest.mark.parametrize("snr_db,li_db", [(10.0, -20.0), (30.0, 5.0)])
    def test_fd_terms_match_double_quadrature_oracle(self, snr_db, li_db):
        # brute-force integration of the defining double integrals, using
        # the same node table for the relay-gain CDF; checks each scaled-Ei
        # term individually, not just their cancellation
        from scipy import integrate

        from noma_relay.analytic import _config_table

        cfg = SystemConfig(
            snr_db=snr_db, omega_li_db=li_db, duplex=FD, num_relays=3
        )
        th = compute_thresholds(cfg)
        table = _config_table(cfg)
        w, c = table.weights, table.c
        a_d1 = 1.0 + cfg.d1**cfg.alpha
        rho, omega = cfg.rho, cfg.omega_li
        tau, xi = th.tau, th.xi

        def f_z(z):
            return math.exp(-z / omega) / omega

        def f_y(y):
            return a_d1 * math.exp(-a_d1 * y)

        def cdf(x):
            return float(np.sum(w * (1.0 - np.exp(-c * x))))

        m2_oracle, _ = integrate.dblquad(
            lambda y, z: f_z(z) * f_y(y)
            * (cdf(y * (rho * z + 1.0)) - cdf(tau * (rho * z + 1.0))),
            0.0, 60.0 * omega, lambda z: tau, lambda z: xi,
            epsabs=1e-12, epsrel=1e-9,
        )
        m3_oracle, _ = integrate.dblquad(
            lambda y, z: f_z(z) * f_y(y) * (1.0 - cdf(y * (rho * z + 1.0))),
            0.0, 60.0 * omega, lambda z: tau, lambda z: xi,
            epsabs=1e-12, epsrel=1e-9,
        )
        bd = theta1_conditional(cfg)
        assert bd.m2 == pytest.approx(m2_oracle, rel=1e-7)
        assert bd.m3 == pytest.approx(m3_oracle, rel=1e-7)

    def test_hd_conditional_matches_pooled_trial_frequency(self):
        # independent trial-level oracle: pool per-relay second-stage
        # failures over relays that survived the first stage
        cfg = SystemConfig(snr_db=20.0, duplex=HD, **FIG7_LIKE)
        th = compute_thresholds(cfg)
        rng = np.random.default_rng(2024)
        n, k = 200_000, cfg.num_relays
        real = NetworkRealization(
            r=cfg.disc_radius * np.sqrt(rng.random((n, k))),
            theta=rng.random((n, k)) * 2.0 * np.pi,
            d_rd1=np.full((n, k), cfg.d1),
            d_rd2=np.full((n, k), cfg.d2),
            g_sr=rng.standard_exponential((n, k)),
            g_rd1=rng.standard_exponential((n, k)),
            g_rd2=rng.standard_exponential((n, k)),
            g_li=rng.standard_exponential((n, k)) * cfg.omega_li,
        )
        s = compute_sinrs(real, cfg)
        admitted = (
            (s.s_relay_x2 >= th.gamma_th2)
            & (s.s_d1_x2 >= th.gamma_th2)
            & (s.s_d2_x2 >= th.gamma_th2)
        )
        stage2_fail = np.minimum(s.s_relay_x1, s.s_d1_x1) < th.gamma_th1
        pooled = int(admitted.sum())
        freq = float((admitted & stage2_fail).sum()) / pooled
        theta1 = theta1_conditional(cfg).theta1
        stderr = math.sqrt(theta1 * (1.0 - theta1) / pooled)
        assert abs(freq - theta1) <= 3.0 * stderr


class TestRrsOutage:
    def test_base_srs_ignores_relay_count(self):
        assert rrs_outage(fd_cfg(num_relays=4), Scheme.SRS) == srs_outage(
            fd_cfg(num_relays=1)
        )

    def test_random_selection_never_beats_best_selection(self):
        cfg = fd_cfg(snr_db=30.0)
        assert rrs_outage(cfg, Scheme.SRS) >= srs_outage(cfg)

    def test_base_trs_coincides_at_k1(self):
        cfg = fd_cfg(num_relays=1)
        assert rrs_outage(cfg, Scheme.TRS) == trs_outage(cfg)

    def test_rejects_non_base_schemes(self):
        with pytest.raises(ValueError):
            rrs_outage(fd_cfg(), Scheme.OMA)


class TestAsymptotics:
    def test_fd_srs_floor_matches_exact_at_high_snr(self):
        cfg = fd_cfg(snr_db=60.0)
        assert asymptotic_outage(cfg, Scheme.SRS) == pytest.approx(
            srs_outage(cfg), rel=0.02
        )

    def test_fd_floor_vanishes_without_loop_interference(self):
        cfg = fd_cfg(snr_db=40.0, omega_li_db=-200.0)
        assert asymptotic_outage(cfg, Scheme.SRS) < 1e-15

    @pytest.mark.parametrize(
        "scheme,kw",
        [(Scheme.SRS, FIG2_LIKE), (Scheme.TRS, FIG7_LIKE)],
    )
    def test_hd_asymptote_tracks_exact_at_45db(self, scheme, kw):
        cfg = SystemConfig(snr_db=45.0, duplex=HD, **kw)
        ratio = asymptotic_outage(cfg, scheme) / exact_outage(cfg, scheme)
        assert abs(ratio - 1.0) < 0.10

    def test_rrs_asymptote_is_k1_case(self):
        cfg = fd_cfg(snr_db=40.0, num_relays=4)
        assert asymptotic_outage(cfg, Scheme.RRS_SRS) == asymptotic_outage(
            replace(cfg, num_relays=1), Scheme.SRS
        )

    def test_oma_has_no_closed_form(self):
        with pytest.raises(ValueError):
            exact_outage(fd_cfg(), Scheme.OMA)
        with pytest.raises(ValueError):
            asymptotic_outage(fd_cfg(), Scheme.OMA)


class TestDiversityOrder:
    def test_hd_srs_matches_relay_count(self):
        for k in (2, 3, 4):
            cfg = SystemConfig(duplex=HD, num_relays=k, omega_li_db=-10.0)
            slope = diversity_order_estimate(cfg, Scheme.SRS, (35.0, 45.0))
            assert slope == pytest.approx(k, abs=0.3)
            exact_slope = diversity_order_estimate(
                cfg, Scheme.SRS, (35.0, 45.0), curve="exact"
            )
            assert exact_slope == pytest.approx(k, abs=0.3)

    def test_fd_srs_has_zero_diversity(self):
        cfg = fd_cfg()
        for k in (1, 3):
            slope = diversity_order_estimate(
                replace(cfg, num_relays=k), Scheme.SRS, (45.0, 60.0)
            )
            assert abs(slope) <= 0.1
        exact_slope = diversity_order_estimate(
            cfg, Scheme.SRS, (45.0, 60.0), curve="exact"
        )
        assert abs(exact_slope) <= 0.1

    def test_hd_random_selection_diversity_one(self):
        cfg = SystemConfig(duplex=HD, num_relays=3, omega_li_db=-10.0)
        for scheme in (Scheme.RRS_SRS, Scheme.RRS_TRS):
            slope = diversity_order_estimate(cfg, scheme, (35.0, 45.0))
            assert slope == pytest.approx(1.0, abs=0.2)
        exact_slope = diversity_order_estimate(
            cfg, Scheme.RRS_SRS, (35.0, 45.0), curve="exact"
        )
        assert exact_slope == pytest.approx(1.0, abs=0.2)

    def test_underflow_reported_unusable(self):
        cfg = SystemConfig(duplex=HD, num_relays=4, omega_li_db=-10.0)
        with pytest.raises(ValueError):
            diversity_order_estimate(cfg, Scheme.SRS, (180.0, 200.0))

    def test_bad_window_rejected(self):
        with pytest.raises(ValueError):
            diversity_order_estimate(fd_cfg(), Scheme.SRS, (45.0, 45.0))


class TestThroughput:
    def test_reference_points(self):
        assert throughput(0.0, 1.0, 0.1) == pytest.approx(1.1)
        assert throughput(1.0, 1.0, 0.1) == 0.0
        assert throughput(0.5, 1.0, 0.1) == pytest.approx(0.55)

    def test_rejects_non_probability(self):
        with pytest.raises(ValueError):
            throughput(1.5, 1.0, 0.1)


class TestWholeChain:
    def test_low_snr_full_duplex_advantage_srs(self):
        for snr in (0.0, 5.0, 10.0):
            assert srs_outage(fd_cfg(snr_db=snr)) < srs_outage(
                hd_cfg(snr_db=snr)
            )

    def test_no_clamp_warnings_on_reference_grid(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for snr in range(0, 65, 5):
                for duplex in (FD, HD):
                    for scheme in (Scheme.SRS, Scheme.TRS, Scheme.RRS_SRS,
                                   Scheme.RRS_TRS):
                        cfg = SystemConfig(
                            snr_db=float(snr), duplex=duplex, **FIG7_LIKE
                        )
                        p = exact_outage(cfg, scheme)
                        assert 0.0 <= p <= 1.0

    def test_analytic_point_bundle(self):
        pt = analytic_point(fd_cfg(), Scheme.SRS)
        assert 0.0 <= pt.p_exact <= 1.0
        assert 0.0 <= pt.p_asymptotic <= 1.0
        assert pt.scheme is Scheme.SRS and pt.duplex is FD
