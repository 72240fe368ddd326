mod common;

use common::{binomial_tail_exact, rel_err, to_f64, Fixed};
use ralp::bounds::{awgn_window_tail_bound, binomial_upper_tail, bsc_bound, gaussian_tail_bound, mbios_bound};
use ralp::channel::{q_function, ChannelModel, LlrConvention, LlrDistribution};

#[test]
fn binomial_tail_matches_rational_sum() {
    for p in [1e-5, 1e-4, 1e-3, 0.01, 0.05, 0.2, 0.45] {
        for m in [1usize, 2, 3, 5, 8, 13, 20, 40] {
            for lo in [0, 1, m.div_ceil(2), m / 2 + 1, m] {
                if lo > m {
                    continue;
                }
                let exact = to_f64(&binomial_tail_exact(m, lo, p));
                let got = binomial_upper_tail(m, lo, p);
                assert!(rel_err(got, exact) < 1e-12, "m={m} lo={lo} p={p}: {got} vs {exact}");
            }
        }
    }
}

#[test]
fn bsc_bound_tail_at_q4_n1024() {
    let r = bsc_bound(4, 1024, 1e-3, 0.0).unwrap();
    assert_eq!(r.g, 4);
    let exact = to_f64(&binomial_tail_exact(2, 1, 1e-3));
    assert!(rel_err(r.tail, exact) < 1e-12);
    // n (2q - 1)^{g/2} = 1024 · 49
    assert!(rel_err(r.wep_exact, 1024.0 * 49.0 * exact) < 1e-12);
}

#[test]
fn fixed_point_constants() {
    let fx = Fixed::new(60);
    assert!(rel_err(fx.to_f64(&fx.pi()), std::f64::consts::PI) < 1e-16);
    assert!(rel_err(fx.to_f64(&fx.exp(&fx.int(1))), std::f64::consts::E) < 1e-16);
    assert!(rel_err(fx.to_f64(&fx.sqrt(&fx.int(2))), std::f64::consts::SQRT_2) < 1e-16);
    // erfc(1) = 0.157299207050285130658...
    assert!(rel_err(fx.to_f64(&fx.erfc(&fx.one())), 0.157_299_207_050_285_13) < 1e-15);
}

#[test]
fn q_function_matches_series() {
    let fx = Fixed::new(90);
    for x in [0.0, 0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0] {
        let exact = fx.to_f64(&fx.q_function(&fx.real(x)));
        let got = q_function(x);
        assert!(rel_err(got, exact) < 1e-12, "Q({x}): {got} vs {exact}");
    }
}

#[test]
fn awgn_window_term_matches_fixed_point() {
    let fx = Fixed::new(80);
    for g in [2usize, 4, 6, 8, 12] {
        for sigma2 in [0.05, 0.1, 0.25, 0.5, 1.0, 2.0] {
            let s2 = fx.real(sigma2);
            let g_fx = fx.int(g as i64);
            let root = fx.sqrt(&fx.div(&s2, &fx.mul(&fx.pi(), &g_fx)));
            let e = fx.exp(&-fx.div(&g_fx, &(&s2 * 4)));
            let exact = fx.to_f64(&fx.mul(&root, &e));
            let got = awgn_window_tail_bound(g, sigma2);
            assert!(rel_err(got, exact) < 1e-12, "g={g} σ²={sigma2}: {got} vs {exact}");
        }
    }
}

#[test]
fn gaussian_tail_inequality_matches_fixed_point() {
    let fx = Fixed::new(80);
    for (s, x) in [(1.0, 2.0), (0.5, 1.0), (2.0, 7.0), (1.0, 0.3)] {
        let (sf, xf) = (fx.real(s), fx.real(x));
        let denom = fx.mul(&xf, &fx.sqrt(&fx.mul(&fx.int(2), &fx.pi())));
        let e = fx.exp(&-fx.div(&fx.mul(&xf, &xf), &(fx.mul(&sf, &sf) * 2)));
        let exact = fx.to_f64(&fx.mul(&fx.div(&sf, &denom), &e));
        let got = gaussian_tail_bound(s, x);
        assert!(rel_err(got, exact) < 1e-12);
        // the bound holds: Q(x / s) ≤ bound
        let q = fx.to_f64(&fx.q_function(&fx.div(&xf, &sf)));
        if x / s >= 1.0 {
            assert!(q <= got);
        }
    }
    assert!((gaussian_tail_bound(1.0, 2.0) - 0.0270).abs() < 5e-5);
    assert!((q_function(2.0) - 0.02275).abs() < 5e-6);
}

#[test]
fn mbios_tails_match_oracles() {
    for p in [1e-4, 1e-3, 0.02, 0.1] {
        let dist = ChannelModel::bsc(p).unwrap().llr_distribution(LlrConvention::Rescaled);
        for g_half in 1..=12 {
            let got = mbios_bound(4, g_half, 256, &dist).unwrap();
            let exact = to_f64(&binomial_tail_exact(g_half, g_half.div_ceil(2), p));
            assert!(rel_err(got.tail, exact) < 1e-12, "p={p} g_half={g_half}");
            assert!(got.tail <= got.chernoff * (1.0 + 1e-12));
        }
    }
    let fx = Fixed::new(90);
    for sigma2 in [0.1, 0.5, 1.0] {
        let dist = LlrDistribution::Gaussian { mean: 1.0, variance: sigma2 };
        for g_half in 1..=6 {
            let got = mbios_bound(4, g_half, 256, &dist).unwrap();
            let arg = fx.real((g_half as f64).sqrt() / sigma2.sqrt());
            let exact = fx.to_f64(&fx.q_function(&arg));
            assert!(rel_err(got.tail, exact) < 1e-12, "σ²={sigma2} g_half={g_half}");
            assert!(got.tail <= awgn_window_tail_bound(2 * g_half, sigma2));
        }
    }
}
