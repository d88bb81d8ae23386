use std::f64::consts::PI;

use bpk::asymptotics::{triple_product_approx, ModeTriple};
use bpk::bessel::{self, bessel_zero, z_derivative, z_eval};
use bpk::coeff_db::{c000_quadrature, canonical, GenerationPolicy};
use bpk::fourier_bessel::expand;
use bpk::quadrature::{integrate_default, Factor};
use bpk::two_product::{
    same_order_cross_antideriv, same_scale_norm_antideriv, x3_difference_antideriv, TwoProductParams,
};
use bpk::{GeneralSolution, Order, ProductIntegralSpec};
use proptest::prelude::*;

fn log_x(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn sol() -> impl Strategy<Value = GeneralSolution> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| GeneralSolution::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn reflection_is_exact(n in 0i32..=8, x in log_x(0.1, 50.0), s in sol()) {
        let pos = s.eval(Order(n), x).unwrap();
        let neg = s.eval(Order(-n), x).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(neg, sign * pos);
    }

    #[test]
    fn three_term_recurrence(n in -8i32..=8, x in log_x(0.1, 50.0), s in sol()) {
        let zm = s.eval(Order(n - 1), x).unwrap();
        let z0 = s.eval(Order(n), x).unwrap();
        let zp = s.eval(Order(n + 1), x).unwrap();
        let r = zm + zp - 2.0 * n as f64 / x * z0;
        prop_assert!(r.abs() <= 1e-11 * z0.abs().max(1.0), "n={} x={} r={:e}", n, x, r);
    }

    #[test]
    fn wronskian(n in 0i32..=8, x in log_x(0.1, 50.0)) {
        let j = |k| bessel::bessel_j(Order(k), x).unwrap();
        let y = |k| bessel::bessel_y(Order(k), x).unwrap();
        let w = j(n + 1) * y(n) - j(n) * y(n + 1);
        let want = 2.0 / (PI * x);
        prop_assert!(((w - want) / want).abs() <= 1e-11, "n={} x={} w={}", n, x, w);
    }

    // smooth region: argument past the turning point, where Y_n is no longer steep
    #[test]
    fn derivative_matches_central_difference(n in -6i32..=6, t in 0.0..1.0f64, scale in 0.5..4.0f64, s in sol()) {
        let lo = (n.abs() as f64).max(1.0);
        let x = (lo + t * (60.0 - lo)) / scale;
        let h = 1e-5;
        let d = z_derivative(s, Order(n), scale, x).unwrap();
        let fd = (z_eval(s, Order(n), scale, x + h).unwrap() - z_eval(s, Order(n), scale, x - h).unwrap()) / (2.0 * h);
        prop_assert!((d - fd).abs() <= 1e-7, "d={} fd={}", d, fd);
    }
}

#[test]
fn zeros_interlace() {
    for p in 1..=500 {
        let a = bessel_zero(0, p).unwrap().value;
        let b = bessel_zero(1, p).unwrap().value;
        let c = bessel_zero(0, p + 1).unwrap().value;
        assert!(a < b && b < c, "p={p}: {a} {b} {c}");
    }
}

fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // d/dx of each antiderivative reproduces its integrand
    #[test]
    fn antiderivatives_differentiate_to_integrands(
        n in 0i32..=6,
        alpha in 0.5..30.0f64,
        ratio in 0.3..0.9f64,
        x in 0.5..10.0f64,
        sa in sol(),
        sb in sol(),
    ) {
        let beta = alpha * ratio;
        let h = 1e-5 / alpha.max(1.0);
        let zn = |s: GeneralSolution, k: i32, sc: f64, t: f64| z_eval(s, Order(k), sc, t).unwrap();

        let params = TwoProductParams { alpha, beta, n: Order(n), sol_a: sa, sol_b: sb };
        let d = central(|t| same_order_cross_antideriv(&params, t).unwrap(), x, h);
        let want = x * zn(sa, n, alpha, x) * zn(sb, n, beta, x);
        prop_assert!((d - want).abs() <= 1e-7 * want.abs().max(1.0), "cross d={} want={}", d, want);

        let d = central(|t| same_scale_norm_antideriv(Order(n), alpha, sa, t).unwrap(), x, h);
        let want = x * zn(sa, n, alpha, x).powi(2);
        prop_assert!((d - want).abs() <= 1e-7 * want.abs().max(1.0), "norm d={} want={}", d, want);

        let d = central(|t| x3_difference_antideriv(alpha, sa, t).unwrap(), x, h);
        let want = x.powi(3) * (zn(sa, 0, alpha, x).powi(2) - zn(sa, 1, alpha, x).powi(2));
        prop_assert!((d - want).abs() <= 1e-7 * want.abs().max(1.0), "x3 d={} want={}", d, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn quadrature_is_additive(
        orders in (0i32..4, 0i32..4),
        scales in (0.5..20.0f64, 0.5..20.0f64),
        lo in 0.05..1.0f64,
        len in 1.0..8.0f64,
        split in 0.1..0.9f64,
    ) {
        let f = vec![Factor::j(orders.0, scales.0), Factor::j(orders.1, scales.1)];
        let hi = lo + len;
        let mid = lo + split * len;
        let whole = integrate_default(&ProductIntegralSpec::power(1, f.clone(), lo, hi)).unwrap();
        let a = integrate_default(&ProductIntegralSpec::power(1, f.clone(), lo, mid)).unwrap();
        let b = integrate_default(&ProductIntegralSpec::power(1, f, mid, hi)).unwrap();
        let gap = (whole.value - a.value - b.value).abs();
        let bars = whole.abs_err + a.abs_err + b.abs_err + 1e-14 * whole.value.abs().max(1e-3);
        prop_assert!(gap <= bars, "gap={:e} bars={:e}", gap, bars);
    }

    // x -> λx in every factor with the interval shrunk by λ scales the x-weighted integral by λ^-2
    #[test]
    fn quadrature_scale_covariance(
        orders in (0i32..3, 0i32..3, 0i32..3),
        scales in (0.5..10.0f64, 0.5..10.0f64, 0.5..10.0f64),
        lambda in 0.25..4.0f64,
        lo in 0.0..1.0f64,
        len in 0.5..4.0f64,
    ) {
        let (o, s) = (orders, scales);
        let base = vec![Factor::j(o.0, s.0), Factor::j(o.1, s.1), Factor::j(o.2, s.2)];
        let scaled = vec![Factor::j(o.0, s.0 * lambda), Factor::j(o.1, s.1 * lambda), Factor::j(o.2, s.2 * lambda)];
        let a = integrate_default(&ProductIntegralSpec::power(1, base, lo, lo + len)).unwrap();
        let b = integrate_default(&ProductIntegralSpec::power(1, scaled, lo / lambda, (lo + len) / lambda)).unwrap();
        let want = a.value / (lambda * lambda);
        let tol = 1e-10 * want.abs() + a.abs_err / (lambda * lambda) + b.abs_err + 1e-15;
        prop_assert!((b.value - want).abs() <= tol, "{} vs {}", b.value, want);
    }

    #[test]
    fn triple_approx_permutation_invariant(m in 20u32..200, n in 20u32..200, p in 20u32..200) {
        let v = triple_product_approx(ModeTriple::c000(m, n, p)).unwrap();
        for (a, b, c) in [(m, p, n), (n, m, p), (n, p, m), (p, m, n), (p, n, m)] {
            prop_assert_eq!(triple_product_approx(ModeTriple::c000(a, b, c)).unwrap(), v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn c000_permutation_audit(m in 1u32..60, n in 1u32..60, p in 1u32..60, perm in 0usize..6) {
        let policy = GenerationPolicy::default();
        let (a, b, c) = canonical(m, n, p);
        let order = [(m, n, p), (m, p, n), (n, m, p), (n, p, m), (p, m, n), (p, n, m)][perm];
        let base = c000_quadrature(1, a, b, c, false, &policy).unwrap();
        let other = c000_quadrature(1, order.0, order.1, order.2, false, &policy).unwrap();
        let bars = base.abs_err + other.abs_err + 1e-15;
        prop_assert!((base.value - other.value).abs() <= bars, "{} vs {}", base.value, other.value);
    }
}

#[test]
fn degenerate_limit_is_continuous() {
    let s = GeneralSolution::new(1.0, 0.5);
    let (alpha, n, x0, x1) = (3.0, Order(2), 0.7, 2.9);
    let norm = same_scale_norm_antideriv(n, alpha, s, x1).unwrap() - same_scale_norm_antideriv(n, alpha, s, x0).unwrap();
    let err = |eps: f64| {
        let p = TwoProductParams { alpha, beta: alpha * (1.0 + eps), n, sol_a: s, sol_b: s };
        let v = same_order_cross_antideriv(&p, x1).unwrap() - same_order_cross_antideriv(&p, x0).unwrap();
        (v - norm).abs()
    };
    let (e1, e2) = (err(1e-3), err(1e-4));
    // first order in the separation
    assert!(e2 < e1 / 5.0 && e2 > e1 / 20.0, "{e1:e} {e2:e}");
}

#[test]
fn equilateral_c000_decreases() {
    let policy = GenerationPolicy::default();
    let vals: Vec<f64> = (2..=15)
        .map(|k| {
            let m = 10 * k;
            c000_quadrature(1, m, m, m, m > policy.extended_above, &policy).unwrap().value
        })
        .collect();
    for w in vals.windows(2) {
        assert!(w[1] < w[0], "{vals:?}");
    }
    assert!((vals[0] - 9.061e-5).abs() < 5e-9);
    assert!((vals[13] - 1.649e-6).abs() < 5e-10);
}

#[test]
fn expansion_coefficients_decay() {
    let (m, n) = (1, 2);
    let s = expand(1, 1, 1, m, n, 64).unwrap();
    let max = s.coefficients.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
    let tail = s
        .coefficients
        .iter()
        .filter(|c| c.0 > m + n + 10)
        .map(|c| c.1.abs())
        .fold(0.0, f64::max);
    assert!(tail <= 1e-2 * max, "tail {tail:e} max {max:e}");
}
