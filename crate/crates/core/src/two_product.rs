//! Antiderivatives of products of two general solutions.
//!
//! Every `*_antideriv` function returns the value at `x` of one particular
//! antiderivative; a definite integral over `[x0, x1]` is the difference of
//! two such evaluations. Forms with an `(α² − β²)` denominator refuse
//! scales closer than [`DEGENERACY_REL`] and point at their equal-scale
//! counterparts instead.

use serde::{Deserialize, Serialize};

use crate::bessel::{z01, GeneralSolution, Order};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_default, Factor, ProductIntegralSpec};
use crate::roots::bisect;

/// Relative scale separation below which `α ≠ β` forms are refused.
pub const DEGENERACY_REL: f64 = 1e-6;

/// Scales and solutions of a two-factor product `Z_n(αx) Z̃_n(βx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoProductParams {
    pub alpha: f64,
    pub beta: f64,
    pub n: Order,
    pub sol_a: GeneralSolution,
    pub sol_b: GeneralSolution,
}

pub(crate) fn check_distinct(alpha: f64, beta: f64) -> Result<f64> {
    if (alpha - beta).abs() < DEGENERACY_REL * alpha.abs().max(beta.abs()) {
        return Err(Error::Degenerate { alpha, beta });
    }
    Ok(alpha * alpha - beta * beta)
}

fn z(sol: GeneralSolution, n: Order, arg: f64) -> Result<f64> {
    sol.eval(n, arg)
}

/// Lommel's cross integral. The returned antiderivative is that of
/// `[(α² − β²)x − (p² − q²)/x] U_p(αx) V_q(βx)`:
/// `βx U_p(αx) V_{q−1}(βx) − αx U_{p−1}(αx) V_q(βx) + (p − q) U_p(αx) V_q(βx)`.
#[allow(clippy::too_many_arguments)]
pub fn lommel_cross_antideriv(
    p: Order,
    q: Order,
    alpha: f64,
    beta: f64,
    sol_a: GeneralSolution,
    sol_b: GeneralSolution,
    x: f64,
) -> Result<f64> {
    let up = z(sol_a, p, alpha * x)?;
    let up1 = z(sol_a, p.shift(-1), alpha * x)?;
    let vq = z(sol_b, q, beta * x)?;
    let vq1 = z(sol_b, q.shift(-1), beta * x)?;
    Ok(beta * x * up * vq1 - alpha * x * up1 * vq + (p.0 - q.0) as f64 * up * vq)
}

/// `∫ x Z_n(αx) Z̃_n(βx) dx`, Wronskian form
/// `x/(α² − β²) {Z_n(αx) d/dx Z̃_n(βx) − Z̃_n(βx) d/dx Z_n(αx)}`.
pub fn same_order_cross_antideriv(params: &TwoProductParams, x: f64) -> Result<f64> {
    let TwoProductParams {
        alpha,
        beta,
        n,
        sol_a,
        sol_b,
    } = *params;
    let d = check_distinct(alpha, beta)?;
    let za = z(sol_a, n, alpha * x)?;
    let zb = z(sol_b, n, beta * x)?;
    let dza = crate::bessel::z_derivative(sol_a, n, alpha, x)?;
    let dzb = crate::bessel::z_derivative(sol_b, n, beta, x)?;
    Ok(x / d * (za * dzb - zb * dza))
}

/// Same antiderivative as [`same_order_cross_antideriv`] written with
/// neighbouring orders: `{βx Z_n(αx) Z̃_{n−1}(βx) − αx Z_{n−1}(αx) Z̃_n(βx)}/(α² − β²)`.
pub fn same_order_cross_antideriv_shifted(params: &TwoProductParams, x: f64) -> Result<f64> {
    let TwoProductParams {
        alpha,
        beta,
        n,
        sol_a,
        sol_b,
    } = *params;
    let d = check_distinct(alpha, beta)?;
    let za = z(sol_a, n, alpha * x)?;
    let za1 = z(sol_a, n.shift(-1), alpha * x)?;
    let zb = z(sol_b, n, beta * x)?;
    let zb1 = z(sol_b, n.shift(-1), beta * x)?;
    Ok((beta * x * za * zb1 - alpha * x * za1 * zb) / d)
}

/// `∫ x Z_n(αx)² dx = (x²/2)[Z_n(αx)² − Z_{n−1}(αx) Z_{n+1}(αx)]`.
pub fn same_scale_norm_antideriv(n: Order, alpha: f64, sol: GeneralSolution, x: f64) -> Result<f64> {
    let arg = alpha * x;
    let zn = z(sol, n, arg)?;
    let lo = z(sol, n.shift(-1), arg)?;
    let hi = z(sol, n.shift(1), arg)?;
    Ok(0.5 * x * x * (zn * zn - lo * hi))
}

/// Order-zero specialisation: `(x²/2)[Z_0² + Z_1²]`.
pub fn norm_n0_antideriv(alpha: f64, sol: GeneralSolution, x: f64) -> Result<f64> {
    let (z0, z1) = z01(sol, alpha, x)?;
    Ok(0.5 * x * x * (z0 * z0 + z1 * z1))
}

/// Order-one specialisation: `(x²/2)[Z_1² + Z_0² − (2/αx) Z_0 Z_1]`.
pub fn norm_n1_antideriv(alpha: f64, sol: GeneralSolution, x: f64) -> Result<f64> {
    let (z0, z1) = z01(sol, alpha, x)?;
    Ok(0.5 * x * x * (z1 * z1 + z0 * z0) - x / alpha * z0 * z1)
}

/// Steps `∫ x Z_{n−1}² dx` over `[x0, x1]` up to `∫ x Z_{n+1}² dx`.
pub fn norm_recurrence_step(
    n: Order,
    alpha: f64,
    sol: GeneralSolution,
    x0: f64,
    x1: f64,
    lower: f64,
) -> Result<f64> {
    let boundary = |x: f64| -> Result<f64> {
        let zn = z(sol, n, alpha * x)?;
        Ok(2.0 * n.0 as f64 / (alpha * alpha) * zn * zn)
    };
    Ok(lower - (boundary(x1)? - boundary(x0)?))
}

/// Diagonal norm `∫_1^A x Z_n(αx)² dx` on an annulus whose boundary
/// conditions `Z_n(α) = Z_n(αA) = 0` hold; the equal-scale antiderivative
/// evaluated at both radii. Distinct eigenvalues give exactly zero.
pub fn orthogonality_norm(params: &TwoProductParams, outer: f64) -> Result<f64> {
    if !(outer > 1.0) {
        return Err(Error::InvalidArgument(format!("outer radius {outer} must exceed 1")));
    }
    let TwoProductParams {
        alpha,
        beta,
        n,
        sol_a,
        sol_b,
    } = *params;
    for (s, k) in [(sol_a, alpha), (sol_b, beta)] {
        let amp = s.a.abs() + s.b.abs();
        let inner = z(s, n, k)?;
        let outer_v = z(s, n, k * outer)?;
        let worst = inner.abs().max(outer_v.abs());
        if worst > 1e-6 * amp.max(f64::MIN_POSITIVE) {
            return Err(Error::Precondition(format!(
                "boundary values Z(k)={inner:e}, Z(kA)={outer_v:e} for k={k} are not zero"
            )));
        }
    }
    if check_distinct(alpha, beta).is_ok() {
        return Ok(0.0);
    }
    Ok(same_scale_norm_antideriv(n, alpha, sol_a, outer)? - same_scale_norm_antideriv(n, alpha, sol_a, 1.0)?)
}

/// Eigenmodes of the annulus `1 <= x <= A` with `Z_n(α) = Z_n(αA) = 0`.
/// Returns the first `count` pairs `(α, Z)` with `Z = Y_n(α) J_n − J_n(α) Y_n`
/// scaled to unit coefficient norm.
pub fn annulus_modes(n: Order, outer: f64, count: usize) -> Result<Vec<(f64, GeneralSolution)>> {
    let cross = |k: f64| -> f64 {
        let s = GeneralSolution::new(
            GeneralSolution::Y.eval_unchecked(n, k),
            -GeneralSolution::J.eval_unchecked(n, k),
        );
        s.eval_unchecked(n, k * outer)
    };
    let mut out = Vec::with_capacity(count);
    // roots are spaced by about π/(A − 1); scan finer than that
    let step = 0.05 * std::f64::consts::PI / (outer - 1.0);
    let mut k = step;
    let mut prev = cross(k);
    while out.len() < count {
        let next = k + step;
        let cur = cross(next);
        if prev.signum() != cur.signum() {
            let root = bisect(cross, k, next)
                .ok_or_else(|| Error::Precondition("annulus root bracket lost".into()))?;
            let a = GeneralSolution::Y.eval(n, root)?;
            let b = -GeneralSolution::J.eval(n, root)?;
            let norm = a.hypot(b);
            out.push((root, GeneralSolution::new(a / norm, b / norm)));
        }
        k = next;
        prev = cur;
    }
    Ok(out)
}

/// Closed form of `∫ x³ [Z_0² − Z_1²] dx`: `x³ Z_1 Z_0/α − x² Z_1²/α²`.
pub fn x3_difference_antideriv(alpha: f64, sol: GeneralSolution, x: f64) -> Result<f64> {
    let (z0, z1) = z01(sol, alpha, x)?;
    Ok(x.powi(3) * z1 * z0 / alpha - x * x * z1 * z1 / (alpha * alpha))
}

/// Closed form of `∫ x³ [2 Z_0² + Z_1²] dx = (x⁴/2)[Z_0² + Z_1²]`.
pub fn x3_weighted_sum_antideriv(alpha: f64, sol: GeneralSolution, x: f64) -> Result<f64> {
    let (z0, z1) = z01(sol, alpha, x)?;
    Ok(0.5 * x.powi(4) * (z0 * z0 + z1 * z1))
}

/// `(∫ x³ Z_0² dx, ∫ x³ Z_1² dx)` at `x`.
pub fn x3_same_scale_antiderivs(alpha: f64, sol: GeneralSolution, x: f64) -> Result<(f64, f64)> {
    let (z0, z1) = z01(sol, alpha, x)?;
    let common = x.powi(4) / 6.0 * (z0 * z0 + z1 * z1);
    let cross = x.powi(3) * z1 * z0 / alpha;
    let sq = x * x * z1 * z1 / (alpha * alpha);
    Ok((
        common + cross / 3.0 - sq / 3.0,
        common - 2.0 * cross / 3.0 + 2.0 * sq / 3.0,
    ))
}

/// Steps `∫ x³ Z_{n−1}² dx` over `[x0, x1]` up to `∫ x³ Z_{n+1}² dx`.
pub fn x3_recurrence_step(
    n: Order,
    alpha: f64,
    sol: GeneralSolution,
    x0: f64,
    x1: f64,
    lower: f64,
) -> Result<f64> {
    let nn = n.0 as f64;
    let a2 = alpha * alpha;
    let boundary = |x: f64| -> Result<f64> {
        let zn = z(sol, n, alpha * x)?;
        let norm = same_scale_norm_antideriv(n, alpha, sol, x)?;
        Ok(4.0 * nn / a2 * norm - 2.0 * nn / a2 * x * x * zn * zn)
    };
    if x0 == x1 {
        return Ok(lower);
    }
    Ok(lower + boundary(x1)? - boundary(x0)?)
}

/// `∫ x² Z_1(αx) Z̃_0(βx) dx` for `α ≠ β`.
pub fn w10_antideriv(
    alpha: f64,
    beta: f64,
    sol_a: GeneralSolution,
    sol_b: GeneralSolution,
    x: f64,
) -> Result<f64> {
    let d = check_distinct(alpha, beta)?;
    let (a0, a1) = z01(sol_a, alpha, x)?;
    let (b0, b1) = z01(sol_b, beta, x)?;
    let x2 = x * x;
    Ok(-beta / d * x2 * a1 * b1 - alpha / d * x2 * a0 * b0
        + 2.0 * alpha * alpha / (d * d) * x * a1 * b0
        - 2.0 * alpha * beta / (d * d) * x * a0 * b1)
}

/// `∫ x² Z_1(αx) Z_0(αx) dx = x² Z_1(αx)² / (2α)`.
pub fn w10_equal_scale(alpha: f64, sol: GeneralSolution, x: f64) -> Result<f64> {
    let (_, z1) = z01(sol, alpha, x)?;
    Ok(0.5 / alpha * x * x * z1 * z1)
}

/// `(∫ x³ Z_0(αx) Z̃_0(βx) dx, ∫ x³ Z_1(αx) Z̃_1(βx) dx)` for `α ≠ β`.
pub fn x3_cross_antiderivs(
    alpha: f64,
    beta: f64,
    sol_a: GeneralSolution,
    sol_b: GeneralSolution,
    x: f64,
) -> Result<(f64, f64)> {
    let d = check_distinct(alpha, beta)?;
    let (a0, a1) = z01(sol_a, alpha, x)?;
    let (b0, b1) = z01(sol_b, beta, x)?;
    let (x2, x3) = (x * x, x * x * x);
    let s = alpha * alpha + beta * beta;
    let ab = alpha * beta;
    let d2 = d * d;
    let d3 = d2 * d;
    let zz00 = (alpha * x3 * a1 * b0 - beta * x3 * a0 * b1) / d
        + 4.0 * ab / d2 * x2 * a1 * b1
        + 2.0 * s / d2 * x2 * a0 * b0
        + 4.0 * beta * s / d3 * x * a0 * b1
        - 4.0 * alpha * s / d3 * x * a1 * b0;
    let zz11 = (beta * x3 * a1 * b0 - alpha * x3 * a0 * b1) / d
        + 2.0 * s / d2 * x2 * a1 * b1
        + 4.0 * ab / d2 * x2 * a0 * b0
        + 8.0 * alpha * beta * beta / d3 * x * a0 * b1
        - 8.0 * alpha * alpha * beta / d3 * x * a1 * b0;
    Ok((zz00, zz11))
}

/// `∫ x Z_1(αx) Z̃_1(βx) dx = {βx Z_1(αx) Z̃_0(βx) − αx Z_0(αx) Z̃_1(βx)}/(α² − β²)`.
pub fn w11_antideriv(
    alpha: f64,
    beta: f64,
    sol_a: GeneralSolution,
    sol_b: GeneralSolution,
    x: f64,
) -> Result<f64> {
    let d = check_distinct(alpha, beta)?;
    let (a0, a1) = z01(sol_a, alpha, x)?;
    let (b0, b1) = z01(sol_b, beta, x)?;
    Ok((beta * x * a1 * b0 - alpha * x * a0 * b1) / d)
}

/// `∫ x Z_0(αx) Z̃_0(βx) dx = {αx Z_1(αx) Z̃_0(βx) − βx Z_0(αx) Z̃_1(βx)}/(α² − β²)`.
pub fn w00_antideriv(
    alpha: f64,
    beta: f64,
    sol_a: GeneralSolution,
    sol_b: GeneralSolution,
    x: f64,
) -> Result<f64> {
    let d = check_distinct(alpha, beta)?;
    let (a0, a1) = z01(sol_a, alpha, x)?;
    let (b0, b1) = z01(sol_b, beta, x)?;
    Ok((alpha * x * a1 * b0 - beta * x * a0 * b1) / d)
}

/// Residual of the power-moment relation for `∫ x^p Z_1² dx` over
/// `[x0, x1]`: the left side and both integrals on the right come from the
/// quadrature oracle, the boundary term is exact.
///
/// `∫ x^p Z_1² = −[x^p Z_1 Z_0]/α + ((p−1)/2α²) ∫ x^{p−3} d[x Z_1]² + ∫ x^p Z_0²`,
/// with `d[x Z_1(αx)]² = 2α x² Z_1 Z_0 dx`.
pub fn moment_p_relation_residual(
    p: i32,
    alpha: f64,
    sol: GeneralSolution,
    x0: f64,
    x1: f64,
) -> Result<f64> {
    if p < 1 {
        return Err(Error::InvalidArgument(format!("moment power {p} must be >= 1")));
    }
    let f0 = Factor::new(0, alpha, sol);
    let f1 = Factor::new(1, alpha, sol);
    let lhs = integrate_default(&ProductIntegralSpec::power(p, vec![f1, f1], x0, x1))?.value;
    let z0sq = integrate_default(&ProductIntegralSpec::power(p, vec![f0, f0], x0, x1))?.value;
    let mixed = if p == 1 {
        0.0
    } else {
        integrate_default(&ProductIntegralSpec::power(p - 1, vec![f1, f0], x0, x1))?.value
    };
    let boundary = |x: f64| -> Result<f64> {
        let (z0, z1) = z01(sol, alpha, x)?;
        Ok(-x.powi(p) * z1 * z0 / alpha)
    };
    let rhs = boundary(x1)? - boundary(x0)? + (p - 1) as f64 / alpha * mixed + z0sq;
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::zero;

    fn oracle(power: i32, factors: Vec<Factor>, x0: f64, x1: f64) -> f64 {
        integrate_default(&ProductIntegralSpec::power(power, factors, x0, x1))
            .unwrap()
            .value
    }

    fn diff<F: Fn(f64) -> Result<f64>>(f: F, x0: f64, x1: f64) -> f64 {
        f(x1).unwrap() - f(x0).unwrap()
    }

    #[test]
    fn lommel_identical_factors_integrand_vanishes() {
        let s = GeneralSolution::new(0.3, 0.8);
        let d = diff(
            |x| lommel_cross_antideriv(Order(2), Order(2), 1.3, 1.3, s, s, x),
            0.7,
            3.2,
        );
        assert!(d.abs() < 1e-14);
    }

    #[test]
    fn lommel_p2_q1_against_oracle() {
        let (a, b) = (2.3, 1.1);
        let (p, q) = (2, 1);
        let j = GeneralSolution::J;
        let got = diff(|x| lommel_cross_antideriv(Order(p), Order(q), a, b, j, j, x), 0.5, 4.0);
        let c2 = a * a - b * b;
        let c1 = -((p * p - q * q) as f64);
        let want = c2 * oracle(1, vec![Factor::j(p, a), Factor::j(q, b)], 0.5, 4.0)
            + c1 * oracle(-1, vec![Factor::j(p, a), Factor::j(q, b)], 0.5, 4.0);
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn lommel_p1_q0_is_the_y10_combination() {
        // with p=1, q=0 the form is βxZ_1(αx)Z_{-1}(βx) − αxZ_0(αx)Z_0(βx) + Z_1(αx)Z_0(βx)
        let (a, b) = (1.9, 0.6);
        let sa = GeneralSolution::new(1.0, 0.2);
        let sb = GeneralSolution::new(0.4, -0.5);
        let x = 1.7;
        let (a0, a1) = z01(sa, a, x).unwrap();
        let (b0, b1) = z01(sb, b, x).unwrap();
        let y10 = -b * x * a1 * b1 - a * x * a0 * b0 + a1 * b0;
        let got = lommel_cross_antideriv(Order(1), Order(0), a, b, sa, sb, x).unwrap();
        assert!((got - y10).abs() < 1e-15);
    }

    #[test]
    fn same_order_cross_orthogonal_at_zeros() {
        let p = TwoProductParams {
            alpha: zero(0, 1),
            beta: zero(0, 2),
            n: Order(0),
            sol_a: GeneralSolution::J,
            sol_b: GeneralSolution::J,
        };
        let d = diff(|x| same_order_cross_antideriv(&p, x), 0.0, 1.0);
        assert!(d.abs() < 1e-13, "{d}");
    }

    #[test]
    fn same_order_cross_against_oracle() {
        let s = GeneralSolution::new(1.0, 0.5);
        let p = TwoProductParams {
            alpha: 1.7,
            beta: 0.6,
            n: Order(1),
            sol_a: s,
            sol_b: s,
        };
        let got = diff(|x| same_order_cross_antideriv(&p, x), 0.3, 2.0);
        let want = oracle(1, vec![Factor::new(1, 1.7, s), Factor::new(1, 0.6, s)], 0.3, 2.0);
        assert!((got - want).abs() < 1e-9);
    }

    #[test]
    fn same_order_cross_two_forms_agree() {
        let p = TwoProductParams {
            alpha: 2.9,
            beta: 1.2,
            n: Order(3),
            sol_a: GeneralSolution::new(0.7, -1.1),
            sol_b: GeneralSolution::new(1.3, 0.4),
        };
        for i in 1..30 {
            let x = 0.3 * i as f64;
            let a = same_order_cross_antideriv(&p, x).unwrap();
            let b = same_order_cross_antideriv_shifted(&p, x).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn degenerate_scales_are_refused() {
        let p = TwoProductParams {
            alpha: 2.0,
            beta: 2.0 * (1.0 + 1e-8),
            n: Order(0),
            sol_a: GeneralSolution::J,
            sol_b: GeneralSolution::J,
        };
        assert!(matches!(same_order_cross_antideriv(&p, 1.0), Err(Error::Degenerate { .. })));
        assert!(w10_antideriv(1.0, 1.0, GeneralSolution::J, GeneralSolution::J, 1.0).is_err());
        assert!(x3_cross_antiderivs(1.0, 1.0, GeneralSolution::J, GeneralSolution::J, 1.0).is_err());
        assert!(w00_antideriv(1.0, 1.0, GeneralSolution::J, GeneralSolution::J, 1.0).is_err());
        assert!(w11_antideriv(1.0, 1.0, GeneralSolution::J, GeneralSolution::J, 1.0).is_err());
    }

    #[test]
    fn annulus_norm_matches_oracle() {
        let modes = annulus_modes(Order(0), 2.0, 3).unwrap();
        for (alpha, sol) in modes {
            let p = TwoProductParams {
                alpha,
                beta: alpha,
                n: Order(0),
                sol_a: sol,
                sol_b: sol,
            };
            let norm = orthogonality_norm(&p, 2.0).unwrap();
            let f = Factor::new(0, alpha, sol);
            let want = oracle(1, vec![f, f], 1.0, 2.0);
            assert!((norm - want).abs() < 1e-9 * want.abs(), "{norm} vs {want}");
        }
    }

    #[test]
    fn annulus_distinct_modes_orthogonal() {
        let modes = annulus_modes(Order(1), 3.0, 4).unwrap();
        for i in 0..modes.len() {
            for j in 0..i {
                let (a, sa) = modes[i];
                let (b, sb) = modes[j];
                let cross = oracle(1, vec![Factor::new(1, a, sa), Factor::new(1, b, sb)], 1.0, 3.0);
                assert!(cross.abs() < 1e-11, "{i},{j}: {cross}");
                let p = TwoProductParams {
                    alpha: a,
                    beta: b,
                    n: Order(1),
                    sol_a: sa,
                    sol_b: sb,
                };
                assert_eq!(orthogonality_norm(&p, 3.0).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn orthogonality_norm_checks_boundary() {
        let p = TwoProductParams {
            alpha: 2.0,
            beta: 2.0,
            n: Order(0),
            sol_a: GeneralSolution::J,
            sol_b: GeneralSolution::J,
        };
        assert!(matches!(orthogonality_norm(&p, 2.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn unit_disc_norm() {
        let a = zero(1, 1);
        let got = diff(|x| same_scale_norm_antideriv(Order(1), a, GeneralSolution::J, x), 0.0, 1.0);
        let j2 = libm::jn(2, a);
        assert!((got - 0.5 * j2 * j2).abs() < 1e-12);
        let want = oracle(1, vec![Factor::j(1, a), Factor::j(1, a)], 0.0, 1.0);
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn n0_n1_specialisations() {
        let s = GeneralSolution::new(0.6, 1.4);
        for i in 1..20 {
            let x = 0.25 * i as f64;
            let g0 = same_scale_norm_antideriv(Order(0), 1.3, s, x).unwrap();
            let g1 = same_scale_norm_antideriv(Order(1), 1.3, s, x).unwrap();
            assert!((g0 - norm_n0_antideriv(1.3, s, x).unwrap()).abs() < 1e-13 * g0.abs().max(1.0));
            assert!((g1 - norm_n1_antideriv(1.3, s, x).unwrap()).abs() < 1e-12 * g1.abs().max(1.0));
        }
    }

    #[test]
    fn same_scale_norm_n4_against_oracle() {
        let s = GeneralSolution::new(1.0, -0.3);
        let got = diff(|x| same_scale_norm_antideriv(Order(4), 2.2, s, x), 0.4, 3.1);
        let f = Factor::new(4, 2.2, s);
        let want = oracle(1, vec![f, f], 0.4, 3.1);
        assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn norm_recurrence_from_n0() {
        let s = GeneralSolution::new(1.0, 0.7);
        let (a, x0, x1) = (1.6, 0.5, 2.5);
        // n=1 step: ∫xZ_2² from ∫xZ_0²
        let z0 = diff(|x| norm_n0_antideriv(a, s, x), x0, x1);
        let z2 = norm_recurrence_step(Order(1), a, s, x0, x1, z0).unwrap();
        let direct = diff(|x| same_scale_norm_antideriv(Order(2), a, s, x), x0, x1);
        assert!((z2 - direct).abs() < 1e-11 * direct.abs().max(1.0));
    }

    #[test]
    fn norm_recurrence_chain_to_n6() {
        let s = GeneralSolution::J;
        let (a, x0, x1) = (2.4, 0.2, 3.0);
        let mut even = diff(|x| norm_n0_antideriv(a, s, x), x0, x1);
        for n in [1, 3, 5] {
            even = norm_recurrence_step(Order(n), a, s, x0, x1, even).unwrap();
        }
        let f = Factor::new(6, a, s);
        let want = oracle(1, vec![f, f], x0, x1);
        assert!((even - want).abs() < 1e-9, "{even} vs {want}");
    }

    #[test]
    fn norm_recurrence_scale_covariance() {
        // doubling α and halving the interval scales ∫x Z² by 1/4
        let s = GeneralSolution::new(0.9, 0.1);
        let base = norm_recurrence_step(Order(2), 1.1, s, 0.6, 2.0, 0.3).unwrap();
        let scaled = norm_recurrence_step(Order(2), 2.2, s, 0.3, 1.0, 0.3 / 4.0).unwrap();
        assert!((base / 4.0 - scaled).abs() < 1e-14);
    }

    #[test]
    fn moment_relation_p3_matches_closed_form() {
        let s = GeneralSolution::new(1.0, 0.5);
        let (a, x0, x1) = (1.4, 0.5, 2.0);
        let closed = diff(|x| x3_difference_antideriv(a, s, x), x0, x1);
        let f0 = Factor::new(0, a, s);
        let f1 = Factor::new(1, a, s);
        let want = oracle(3, vec![f0, f0], x0, x1) - oracle(3, vec![f1, f1], x0, x1);
        assert!((closed - want).abs() < 1e-10);
        assert!(moment_p_relation_residual(3, a, s, x0, x1).unwrap().abs() < 1e-10);
    }

    #[test]
    fn moment_relation_p1_and_p5() {
        let s = GeneralSolution::new(0.8, -0.2);
        assert!(moment_p_relation_residual(1, 2.1, s, 0.6, 3.3).unwrap().abs() < 1e-11);
        // p=1 also reduces to the difference of the n=0 and n=1 norms
        let n1 = diff(|x| norm_n1_antideriv(2.1, s, x), 0.6, 3.3);
        let n0 = diff(|x| norm_n0_antideriv(2.1, s, x), 0.6, 3.3);
        let bdry = diff(
            |x| {
                let (z0, z1) = z01(s, 2.1, x)?;
                Ok(-x * z1 * z0 / 2.1)
            },
            0.6,
            3.3,
        );
        assert!((n1 - n0 - bdry).abs() < 1e-13);
        assert!(moment_p_relation_residual(5, 1.3, GeneralSolution::J, 0.1, 2.5).unwrap().abs() < 1e-9);
        assert!(moment_p_relation_residual(0, 1.3, GeneralSolution::J, 0.1, 2.5).is_err());
    }

    #[test]
    fn x3_same_scale_linear_relations() {
        let s = GeneralSolution::new(1.2, 0.3);
        let (a, x) = (0.9, 2.2);
        let (z0sq, z1sq) = x3_same_scale_antiderivs(a, s, x).unwrap();
        let weighted = x3_weighted_sum_antideriv(a, s, x).unwrap();
        let difference = x3_difference_antideriv(a, s, x).unwrap();
        assert!((2.0 * z0sq + z1sq - weighted).abs() < 1e-13 * weighted.abs());
        assert!((z0sq - z1sq - difference).abs() < 1e-13 * weighted.abs());
    }

    #[test]
    fn x3_same_scale_against_oracle() {
        let a = zero(0, 1);
        let j = GeneralSolution::J;
        let (b0, b1) = (
            diff(|x| Ok(x3_same_scale_antiderivs(a, j, x)?.0), 0.0, 1.0),
            diff(|x| Ok(x3_same_scale_antiderivs(a, j, x)?.1), 0.0, 1.0),
        );
        assert!((b0 - oracle(3, vec![Factor::j(0, a), Factor::j(0, a)], 0.0, 1.0)).abs() < 1e-11);
        assert!((b1 - oracle(3, vec![Factor::j(1, a), Factor::j(1, a)], 0.0, 1.0)).abs() < 1e-11);

        let s = GeneralSolution::new(1.0, 1.0);
        let (c0, c1) = (
            diff(|x| Ok(x3_same_scale_antiderivs(0.9, s, x)?.0), 0.5, 3.0),
            diff(|x| Ok(x3_same_scale_antiderivs(0.9, s, x)?.1), 0.5, 3.0),
        );
        let f0 = Factor::new(0, 0.9, s);
        let f1 = Factor::new(1, 0.9, s);
        assert!((c0 - oracle(3, vec![f0, f0], 0.5, 3.0)).abs() < 1e-9);
        assert!((c1 - oracle(3, vec![f1, f1], 0.5, 3.0)).abs() < 1e-9);
    }

    #[test]
    fn x3_recurrence_against_oracle() {
        let s = GeneralSolution::new(1.0, 0.4);
        let (a, x0, x1) = (1.8, 0.5, 2.5);
        let seed = diff(|x| Ok(x3_same_scale_antiderivs(a, s, x)?.0), x0, x1);
        let z2 = x3_recurrence_step(Order(1), a, s, x0, x1, seed).unwrap();
        let f2 = Factor::new(2, a, s);
        assert!((z2 - oracle(3, vec![f2, f2], x0, x1)).abs() < 1e-9);
        let z4 = x3_recurrence_step(Order(3), a, s, x0, x1, z2).unwrap();
        let f4 = Factor::new(4, a, s);
        assert!((z4 - oracle(3, vec![f4, f4], x0, x1)).abs() < 1e-8);
        assert_eq!(x3_recurrence_step(Order(2), a, s, 1.0, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn w10_against_oracle_and_derivative() {
        let j = GeneralSolution::J;
        let got = diff(|x| w10_antideriv(2.1, 0.7, j, j, x), 0.2, 5.0);
        let want = oracle(2, vec![Factor::j(1, 2.1), Factor::j(0, 0.7)], 0.2, 5.0);
        assert!((got - want).abs() < 1e-10);

        let h = 1e-5;
        for i in 1..10 {
            let x = 0.5 * i as f64;
            let fd = (w10_antideriv(2.1, 0.7, j, j, x + h).unwrap()
                - w10_antideriv(2.1, 0.7, j, j, x - h).unwrap())
                / (2.0 * h);
            let integrand = x * x * libm::j1(2.1 * x) * libm::j0(0.7 * x);
            assert!((fd - integrand).abs() < 1e-8);
        }

        let sa = GeneralSolution::new(0.5, 1.5);
        let sb = GeneralSolution::new(-1.0, 0.3);
        let got = diff(|x| w10_antideriv(1.3, 2.9, sa, sb, x), 1.0, 4.0);
        let want = oracle(2, vec![Factor::new(1, 1.3, sa), Factor::new(0, 2.9, sb)], 1.0, 4.0);
        assert!((got - want).abs() < 1e-9);
    }

    #[test]
    fn w10_equal_scale_cases() {
        let a = zero(1, 1);
        let j = GeneralSolution::J;
        let got = diff(|x| w10_equal_scale(a, j, x), 0.0, 1.0);
        let want = oracle(2, vec![Factor::j(1, a), Factor::j(0, a)], 0.0, 1.0);
        assert!((got - want).abs() < 1e-12);
        assert_eq!(w10_equal_scale(a, j, 0.0).unwrap(), 0.0);

        // continuity through the removable degeneracy
        let (a, x0, x1) = (1.7, 0.3, 2.2);
        let near = diff(|x| w10_antideriv(a, a * (1.0 + 1e-6 * 1.5), j, j, x), x0, x1);
        let equal = diff(|x| w10_equal_scale(a, j, x), x0, x1);
        assert!((near - equal).abs() < 1e-4);
    }

    #[test]
    fn x3_cross_against_oracle() {
        let j = GeneralSolution::J;
        let (a, b) = (1.9, 1.1);
        let (v00, v11) = (
            diff(|x| Ok(x3_cross_antiderivs(a, b, j, j, x)?.0), 0.5, 4.0),
            diff(|x| Ok(x3_cross_antiderivs(a, b, j, j, x)?.1), 0.5, 4.0),
        );
        assert!((v00 - oracle(3, vec![Factor::j(0, a), Factor::j(0, b)], 0.5, 4.0)).abs() < 1e-9);
        assert!((v11 - oracle(3, vec![Factor::j(1, a), Factor::j(1, b)], 0.5, 4.0)).abs() < 1e-9);

        let sa = GeneralSolution::new(0.3, -1.2);
        let sb = GeneralSolution::new(1.1, 0.9);
        let (v00, v11) = (
            diff(|x| Ok(x3_cross_antiderivs(a, b, sa, sb, x)?.0), 1.0, 3.0),
            diff(|x| Ok(x3_cross_antiderivs(a, b, sa, sb, x)?.1), 1.0, 3.0),
        );
        let w00 = oracle(3, vec![Factor::new(0, a, sa), Factor::new(0, b, sb)], 1.0, 3.0);
        let w11 = oracle(3, vec![Factor::new(1, a, sa), Factor::new(1, b, sb)], 1.0, 3.0);
        assert!((v00 - w00).abs() < 1e-8);
        assert!((v11 - w11).abs() < 1e-8);
    }

    #[test]
    fn x3_cross_swap_symmetry() {
        let sa = GeneralSolution::new(0.3, -1.2);
        let sb = GeneralSolution::new(1.1, 0.9);
        for i in 1..10 {
            let x = 0.4 * i as f64;
            let (p00, p11) = x3_cross_antiderivs(1.9, 1.1, sa, sb, x).unwrap();
            let (q00, q11) = x3_cross_antiderivs(1.1, 1.9, sb, sa, x).unwrap();
            assert!((p00 - q00).abs() < 1e-12 * p00.abs().max(1.0));
            assert!((p11 - q11).abs() < 1e-12 * p11.abs().max(1.0));
        }
    }

    #[test]
    fn w00_w11_cases() {
        let j = GeneralSolution::J;
        let d = diff(|x| w00_antideriv(zero(0, 1), zero(0, 2), j, j, x), 0.0, 1.0);
        assert!(d.abs() < 1e-13);

        let sa = GeneralSolution::new(1.5, -0.5);
        let sb = GeneralSolution::new(0.2, 1.0);
        let (a, b, x0, x1) = (2.6, 1.3, 0.7, 2.9);
        for (n, f) in [
            (0, w00_antideriv as fn(f64, f64, GeneralSolution, GeneralSolution, f64) -> Result<f64>),
            (1, w11_antideriv),
        ] {
            let got = diff(|x| f(a, b, sa, sb, x), x0, x1);
            let want = oracle(1, vec![Factor::new(n, a, sa), Factor::new(n, b, sb)], x0, x1);
            assert!((got - want).abs() < 1e-9, "order {n}: {got} vs {want}");
            // swapping the factors leaves the antiderivative unchanged
            for i in 1..8 {
                let x = 0.5 * i as f64;
                let p = f(a, b, sa, sb, x).unwrap();
                let q = f(b, a, sb, sa, x).unwrap();
                assert!((p - q).abs() < 1e-13 * p.abs().max(1.0));
            }
        }
    }
}
