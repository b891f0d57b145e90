use cirmm::mc::{
    d_samples_from, estimate_conditional, estimate_direct, mc_price_conditional, simulate_paths, PriceEstimate,
    SimConfig,
};
use cirmm::mm::mm_coefficients;
use cirmm::rates::{cir_mean_lambda, cir_moment_bundle};
use cirmm::{bs_call_deterministic, CirParams, Contract, GenericRateModel, MarketSpec};

fn table1() -> CirParams {
    CirParams::new(0.6, 0.02, 0.1, 0.001).unwrap()
}

fn combined(a: &PriceEstimate, b: &PriceEstimate) -> f64 {
    (a.std_error.powi(2) + b.std_error.powi(2)).sqrt()
}

#[test]
fn conditional_and_direct_estimators_agree() {
    let model = GenericRateModel::cir(table1());
    let t = 1.0;
    let c = Contract::from_strike(100.0, t).unwrap();
    let paths = simulate_paths(&model, t, &SimConfig::plain(100_000, 1e-3, 5)).unwrap();
    for sigma in [0.2, 0.4] {
        for rho in [-0.9, -0.3, 0.0, 0.3, 0.9] {
            let m = MarketSpec::from_spot(100.0, sigma, rho).unwrap();
            let cond = estimate_conditional(&paths, &m, &c, false).unwrap();
            let direct = estimate_direct(&paths, &m, &c).unwrap();
            let gap = (cond.value - direct.value).abs();
            assert!(gap < 3.0 * combined(&cond, &direct), "sigma={sigma} rho={rho}: {cond:?} vs {direct:?}");
            assert!(cond.std_error < direct.std_error, "sigma={sigma} rho={rho}");
        }
    }
}

#[test]
fn antithetic_pairs_are_unbiased_and_reduce_variance() {
    let model = GenericRateModel::cir(table1());
    let t = 1.0;
    let c = Contract::from_strike(100.0, t).unwrap();
    let plain = simulate_paths(&model, t, &SimConfig::plain(40_000, 1e-3, 8)).unwrap();
    let anti = simulate_paths(&model, t, &SimConfig { antithetic: true, ..SimConfig::plain(40_000, 1e-3, 9) }).unwrap();
    for rho in [-0.9, -0.3, 0.3, 0.9] {
        let m = MarketSpec::from_spot(100.0, 0.2, rho).unwrap();
        let a = estimate_conditional(&plain, &m, &c, false).unwrap();
        let b = estimate_conditional(&anti, &m, &c, false).unwrap();
        assert!((a.value - b.value).abs() < 3.0 * combined(&a, &b), "rho={rho}");
        assert!(b.std_error <= a.std_error, "rho={rho}: {} > {}", b.std_error, a.std_error);
        assert_eq!(b.n_effective, 20_000);
    }
}

#[test]
fn control_variate_is_unbiased() {
    let model = GenericRateModel::cir(table1());
    let c = Contract::from_strike(100.0, 1.0).unwrap();
    let paths = simulate_paths(&model, 1.0, &SimConfig::plain(100_000, 1e-3, 21)).unwrap();
    for rho in [-0.9, 0.0, 0.6] {
        let m = MarketSpec::from_spot(100.0, 0.2, rho).unwrap();
        let plain = estimate_conditional(&paths, &m, &c, false).unwrap();
        let cv = estimate_conditional(&paths, &m, &c, true).unwrap();
        assert!((plain.value - cv.value).abs() < 3.0 * plain.std_error, "rho={rho}: {plain:?} {cv:?}");
        if rho == 0.0 {
            // without correlation the control is constant and drops out
            assert_eq!(cv.value, plain.value);
        } else {
            assert!(cv.std_error < 0.1 * plain.std_error, "rho={rho}");
        }
    }
}

#[test]
fn discretization_error_shrinks_with_the_step() {
    let model = GenericRateModel::cir(table1());
    let m = MarketSpec::from_spot(100.0, 0.2, 0.3).unwrap();
    let c = Contract::from_strike(100.0, 1.0).unwrap();
    let price = |dt: f64| mc_price_conditional(&m, &c, &model, &SimConfig { dt, ..SimConfig::desk(3) }).unwrap();
    let p: Vec<PriceEstimate> = [0.2, 0.1, 0.05, 0.025].iter().map(|&dt| price(dt)).collect();
    let gaps: Vec<f64> = p.windows(2).map(|w| (w[0].value - w[1].value).abs()).collect();
    for w in gaps.windows(2) {
        assert!(w[1] < w[0], "gaps {gaps:?}");
    }
    // first order: halving the step roughly halves the gap
    assert!(gaps[0] / gaps[1] > 1.5 && gaps[1] / gaps[2] > 1.5, "gaps {gaps:?}");
}

#[test]
fn d1_moments_match_the_gaussian_proxy() {
    let p = table1();
    let t = 1.0;
    let c = Contract::from_strike(100.0, t).unwrap();
    let paths = simulate_paths(&GenericRateModel::cir(p), t, &SimConfig::plain(100_000, 1e-3, 12)).unwrap();
    let bundle = cir_moment_bundle(&p, t).unwrap();
    for rho in [-0.6, 0.0, 0.3] {
        let m = MarketSpec::from_spot(100.0, 0.2, rho).unwrap();
        let k = mm_coefficients(&m, &c, &bundle).unwrap();
        let d = d_samples_from(&paths, &m, &c).unwrap();
        let n = d.d1.len() as f64;
        let mean = d.d1.iter().sum::<f64>() / n;
        let c2: Vec<f64> = d.d1.iter().map(|v| (v - mean).powi(2)).collect();
        let m2 = c2.iter().sum::<f64>() / n;
        let m4 = c2.iter().map(|v| v * v).sum::<f64>() / n;
        let var = m2 * n / (n - 1.0);
        let mean_se = (var / n).sqrt();
        let var_se = ((m4 - m2 * m2) / n).sqrt();
        assert!((mean - (k.alpha1 + k.gamma_coef * bundle.lambda_t)).abs() < 3.0 * mean_se, "rho={rho}");
        assert!((var - k.beta_hat_sq_t).abs() < 3.0 * var_se, "rho={rho}: {var} vs {}", k.beta_hat_sq_t);

        let gap = d.d1.iter().zip(&d.d2).map(|(a, b)| a - b).sum::<f64>() / n;
        assert!((gap - 0.2 * (1.0 - rho * rho).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn mean_integrated_rate_matches_closed_form() {
    let p = table1();
    let paths = simulate_paths(&GenericRateModel::cir(p), 1.0, &SimConfig::plain(50_000, 1e-3, 14)).unwrap();
    let lam: Vec<f64> = paths.paths.iter().map(|x| x.lambda_t).collect();
    let n = lam.len() as f64;
    let mean = lam.iter().sum::<f64>() / n;
    let se = (lam.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt();
    assert!((mean - cir_mean_lambda(&p, 1.0).unwrap()).abs() < 3.0 * se);
}

#[test]
fn quiet_rate_reduces_to_black_scholes() {
    let p = CirParams::new(0.6, 0.02, 1e-9, 0.001).unwrap();
    let t = 1.0;
    let m = MarketSpec::from_spot(100.0, 0.2, 0.0).unwrap();
    let c = Contract::from_strike(100.0, t).unwrap();
    let paths = simulate_paths(&GenericRateModel::cir(p), t, &SimConfig::plain(20_000, 1e-3, 4)).unwrap();
    // Euler integral of the deterministic path, not the exact one: the gap is O(dt)
    let bs = bs_call_deterministic(&m, &c, paths.noiseless_lambda);
    let cond = estimate_conditional(&paths, &m, &c, false).unwrap();
    let direct = estimate_direct(&paths, &m, &c).unwrap();
    assert!((cond.value - bs).abs() < 3.0 * cond.std_error.max(1e-12));
    assert!((direct.value - bs).abs() < 3.0 * direct.std_error);
    let exact = bs_call_deterministic(&m, &c, cir_mean_lambda(&p, t).unwrap());
    assert!((cond.value - exact).abs() < 1e-4);
}

#[test]
fn estimates_are_reproducible() {
    let model = GenericRateModel::cir(table1());
    let m = MarketSpec::from_spot(100.0, 0.2, 0.3).unwrap();
    let c = Contract::from_strike(100.0, 1.0).unwrap();
    let cfg = SimConfig { n_paths: 10_000, ..SimConfig::desk(99) };
    let a = mc_price_conditional(&m, &c, &model, &cfg).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| mc_price_conditional(&m, &c, &model, &cfg).unwrap());
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    let other = mc_price_conditional(&m, &c, &model, &SimConfig { seed: 100, ..cfg }).unwrap();
    assert_ne!(a.value, other.value);
}
