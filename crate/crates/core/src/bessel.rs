//! Bessel functions of integral order, the general solution
//! `Z_n(x) = a J_n(x) + b Y_n(x)`, and zeros of `J_0` and `J_1`.
//!
//! `J_n` and `Y_n` for non-negative order come from `libm` (the FreeBSD
//! msun algorithms: rational approximations for orders 0 and 1, Miller
//! backward recurrence for `J_n`, forward recurrence for `Y_n`, Hankel
//! asymptotics for large arguments). Negative orders are always obtained
//! by reflection so that `Z_{-n} = (-1)^n Z_n` holds bit for bit.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::safeguarded_newton;

/// Integral Bessel order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Order(pub i32);

impl Order {
    pub const ZERO: Order = Order(0);
    pub const ONE: Order = Order(1);

    /// `(-1)^n`
    pub fn parity(self) -> f64 {
        if self.0 % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn abs(self) -> Order {
        Order(self.0.abs())
    }

    pub fn shift(self, by: i32) -> Order {
        Order(self.0 + by)
    }
}

impl From<i32> for Order {
    fn from(n: i32) -> Self {
        Order(n)
    }
}

/// Coefficients of `Z_n(x) = a J_n(x) + b Y_n(x)`.
///
/// `(0, 0)` is accepted and evaluates to zero everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralSolution {
    pub a: f64,
    pub b: f64,
}

impl GeneralSolution {
    /// Pure first kind, `J_n`.
    pub const J: GeneralSolution = GeneralSolution { a: 1.0, b: 0.0 };
    /// Pure second kind, `Y_n`.
    pub const Y: GeneralSolution = GeneralSolution { a: 0.0, b: 1.0 };

    pub fn new(a: f64, b: f64) -> Self {
        GeneralSolution { a, b }
    }

    /// True when the solution has no second-kind component and is therefore
    /// regular at the origin.
    pub fn is_regular(&self) -> bool {
        self.b == 0.0
    }

    /// `Z_n(arg)`.
    pub fn eval(&self, n: Order, arg: f64) -> Result<f64> {
        if !arg.is_finite() {
            return Err(Error::Domain {
                what: "argument",
                value: arg,
            });
        }
        if self.b != 0.0 && arg <= 0.0 {
            return Err(Error::Domain {
                what: "second-kind argument",
                value: arg,
            });
        }
        if arg < 0.0 {
            return Err(Error::Domain {
                what: "argument",
                value: arg,
            });
        }
        Ok(self.eval_unchecked(n, arg))
    }

    /// `Z_n(arg)` without domain checks. Callers guarantee `arg >= 0` and
    /// `arg > 0` whenever `b != 0`.
    #[inline]
    pub(crate) fn eval_unchecked(&self, n: Order, arg: f64) -> f64 {
        let m = n.0.abs();
        let mut v = 0.0;
        if self.a != 0.0 {
            v += self.a * j_nonneg(m, arg);
        }
        if self.b != 0.0 {
            v += self.b * y_nonneg(m, arg);
        }
        if n.0 < 0 {
            n.parity() * v
        } else {
            v
        }
    }
}

#[inline]
fn j_nonneg(n: i32, x: f64) -> f64 {
    match n {
        0 => libm::j0(x),
        1 => libm::j1(x),
        _ => libm::jn(n, x),
    }
}

#[inline]
fn y_nonneg(n: i32, x: f64) -> f64 {
    match n {
        0 => libm::y0(x),
        1 => libm::y1(x),
        _ => libm::yn(n, x),
    }
}

/// `J_n(x)` for `x >= 0`.
pub fn bessel_j(n: Order, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain {
            what: "J_n argument",
            value: x,
        });
    }
    Ok(GeneralSolution::J.eval_unchecked(n, x))
}

/// `Y_n(x)` for `x > 0`. `Y_n` diverges at the origin.
pub fn bessel_y(n: Order, x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain {
            what: "Y_n argument",
            value: x,
        });
    }
    Ok(GeneralSolution::Y.eval_unchecked(n, x))
}

/// `a J_n(scale x) + b Y_n(scale x)`.
pub fn z_eval(sol: GeneralSolution, n: Order, scale: f64, x: f64) -> Result<f64> {
    sol.eval(n, scale * x)
}

/// `d/dx Z_n(scale x) = (scale / 2) (Z_{n-1}(scale x) - Z_{n+1}(scale x))`.
pub fn z_derivative(sol: GeneralSolution, n: Order, scale: f64, x: f64) -> Result<f64> {
    let arg = scale * x;
    let lower = sol.eval(n.shift(-1), arg)?;
    let upper = sol.eval(n.shift(1), arg)?;
    Ok(0.5 * scale * (lower - upper))
}

/// `(Z_{n-1}, Z_n, Z_{n+1})` at `scale x`.
pub fn z_triplet(sol: GeneralSolution, n: Order, scale: f64, x: f64) -> Result<(f64, f64, f64)> {
    let arg = scale * x;
    Ok((
        sol.eval(n.shift(-1), arg)?,
        sol.eval(n, arg)?,
        sol.eval(n.shift(1), arg)?,
    ))
}

/// `(Z_0(scale x), Z_1(scale x))`, the pair nearly every closed form needs.
pub fn z01(sol: GeneralSolution, scale: f64, x: f64) -> Result<(f64, f64)> {
    let arg = scale * x;
    Ok((sol.eval(Order::ZERO, arg)?, sol.eval(Order::ONE, arg)?))
}

/// The `p`-th positive zero of `J_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselZero {
    pub q: u32,
    pub p: u32,
    pub value: f64,
}

/// Zeros cached per kind. Built once, read-only afterwards.
const CACHED_ZEROS: usize = 4096;
static ZERO_TABLES: [OnceLock<Vec<f64>>; 2] = [OnceLock::new(), OnceLock::new()];

fn zero_table(q: u32) -> &'static [f64] {
    ZERO_TABLES[q as usize].get_or_init(|| {
        (1..=CACHED_ZEROS as u32)
            .map(|p| compute_zero(q, p))
            .collect()
    })
}

/// McMahon's expansion for the `p`-th zero of `J_q`, good to a few ulps
/// already for moderate `p` and well inside the bracket for `p = 1`.
pub fn mcmahon_estimate(q: u32, p: u32) -> f64 {
    let beta = (p as f64 + 0.5 * q as f64 - 0.25) * PI;
    let mu = 4.0 * (q as f64) * (q as f64);
    let b8 = 8.0 * beta;
    let t1 = (mu - 1.0) / b8;
    let t3 = 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3));
    beta - t1 - t3
}

fn compute_zero(q: u32, p: u32) -> f64 {
    let seed = mcmahon_estimate(q, p);
    let fdf = |x: f64| -> (f64, f64) {
        if q == 0 {
            (libm::j0(x), -libm::j1(x))
        } else {
            let j1 = libm::j1(x);
            (j1, libm::j0(x) - j1 / x)
        }
    };
    // zeros are spaced by more than 2.4, so +/- 1 around the seed brackets exactly one
    safeguarded_newton(fdf, seed - 1.0, seed + 1.0, seed).unwrap_or(seed)
}

/// `j_{q,p}`, the `p`-th positive zero of `J_q` for `q` in `{0, 1}`.
pub fn bessel_zero(q: u32, p: u32) -> Result<BesselZero> {
    if q > 1 {
        return Err(Error::UnsupportedOrder(q as i32));
    }
    if p == 0 {
        return Err(Error::InvalidArgument("zero index is 1-based".into()));
    }
    let value = if (p as usize) <= CACHED_ZEROS {
        zero_table(q)[p as usize - 1]
    } else {
        compute_zero(q, p)
    };
    Ok(BesselZero { q, p, value })
}

/// Shorthand for `bessel_zero(q, p).value` on already validated input.
pub fn zero(q: u32, p: u32) -> f64 {
    bessel_zero(q, p).expect("zero kind must be 0 or 1").value
}

/// All zeros of `J_q` in the open interval `(0, limit)`.
pub fn zeros_below(q: u32, limit: f64) -> Result<Vec<f64>> {
    if q > 1 {
        return Err(Error::UnsupportedOrder(q as i32));
    }
    let mut out = Vec::new();
    let mut p = 1;
    loop {
        let z = bessel_zero(q, p)?.value;
        if z >= limit {
            break;
        }
        out.push(z);
        p += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    // (n, x, J_n(x), Y_n(x)) at 40 digits, rounded to 18
    const REFERENCE: &[(i32, f64, f64, f64)] = &[
        (0, 0.5, 9.38469807240812904e-1, -4.44518733506706557e-1),
        (1, 3.7, 5.38339877454617905e-2, 4.16674372683807493e-1),
        (5, 1.2, 6.10104923748968299e-4, -1.07651349338768947e+2),
        (8, 0.1, 9.68542923159465055e-16, -4.10842855308170212e+13),
        (20, 35.0, -1.09274173971780365e-1, 1.01027841525940173e-1),
        (64, 10.0, 2.90493602872910926e-45, -1.73341367103870111e+42),
        (64, 80.0, 1.1112833093796254e-1, -2.99042058759013295e-2),
        (64, 999.0, 8.23711345626431535e-3, 2.38897188073218163e-2),
        (3, 600.0, -2.38672463873972353e-2, -2.21675528308443817e-2),
        (0, 630.1, 1.72842694748452328e-2, 2.66758488756875942e-2),
        (40, 25.3, 2.43581748716022811e-6, -4.22057040494379154e+3),
        (2, 0.001, 1.24999989583333664e-7, -1.27323986304566743e+6),
        (30, 31.0, 1.83087226192137996e-1, -1.72959248368787977e-1),
        (7, 1000.0, -5.32178307644361535e-3, 2.46640206658589347e-2),
    ];

    #[test]
    fn matches_reference_values() {
        for &(n, x, j, y) in REFERENCE {
            let jj = bessel_j(Order(n), x).unwrap();
            let yy = bessel_y(Order(n), x).unwrap();
            assert!(((jj - j) / j).abs() <= 1e-13, "J_{n}({x}) = {jj}, want {j}");
            assert!(((yy - y) / y).abs() <= 1e-12, "Y_{n}({x}) = {yy}, want {y}");
        }
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(Order(0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(Order(1), 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(Order(-3), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_j(Order(0), f64::NAN), Err(Error::Domain { .. })));
        assert!(matches!(bessel_j(Order(0), f64::INFINITY), Err(Error::Domain { .. })));
        assert!(matches!(bessel_j(Order(0), -1.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_y(Order(0), 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_y(Order(2), -3.0), Err(Error::Domain { .. })));
        let sol = GeneralSolution::new(1.0, 0.5);
        assert!(z_eval(sol, Order(1), 2.0, 0.0).is_err());
    }

    #[test]
    fn y0_diverges_logarithmically() {
        assert!(bessel_y(Order(0), 1e-6).unwrap() < -8.0);
    }

    #[test]
    fn negative_order_reflection_for_y() {
        assert_eq!(
            bessel_y(Order(-1), 2.0).unwrap(),
            -bessel_y(Order(1), 2.0).unwrap()
        );
    }

    #[test]
    fn first_zero_of_j0_by_bisection() {
        // bisection on J_0 over [2, 3] is the oracle
        let root = crate::roots::bisect(|x| libm::j0(x), 2.0, 3.0).unwrap();
        assert!((root - 2.404825557695773).abs() < 1e-15);
        assert!(bessel_j(Order(0), 2.404825557695773).unwrap().abs() < 1e-12);
    }

    #[test]
    fn first_zero_of_y0() {
        let root = crate::roots::bisect(|x| bessel_y(Order(0), x).unwrap(), 0.5, 1.5).unwrap();
        assert!((root - 0.8935769662791675).abs() < 1e-15);
        assert!(bessel_y(Order(0), 0.8935769662791675).unwrap().abs() < 1e-10);
    }

    #[test]
    fn z_eval_examples() {
        assert_eq!(z_eval(GeneralSolution::J, Order(0), 1.0, 0.0).unwrap(), 1.0);
        assert_eq!(z_eval(GeneralSolution::new(0.0, 0.0), Order(3), 2.0, 5.0).unwrap(), 0.0);
        let want = 2.0 * bessel_j(Order(1), 1.5).unwrap() - bessel_y(Order(1), 1.5).unwrap();
        let got = z_eval(GeneralSolution::new(2.0, -1.0), Order(1), 1.5, 1.0).unwrap();
        assert!((got - want).abs() <= 1e-15 * want.abs());
    }

    #[test]
    fn derivative_of_z0_is_minus_z1() {
        for i in 1..50 {
            let x = 0.37 * i as f64;
            let d = z_derivative(GeneralSolution::J, Order(0), 1.0, x).unwrap();
            let j1 = bessel_j(Order(1), x).unwrap();
            assert!((d + j1).abs() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn derivative_of_x_z1() {
        // d/dx [x Z_1(alpha x)] = alpha x Z_0(alpha x)
        let sol = GeneralSolution::new(0.8, -0.6);
        let alpha = 1.7;
        for i in 1..40 {
            let x = 0.2 + 0.25 * i as f64;
            let lhs = z_eval(sol, Order(1), alpha, x).unwrap()
                + x * z_derivative(sol, Order(1), alpha, x).unwrap();
            let rhs = alpha * x * z_eval(sol, Order(0), alpha, x).unwrap();
            assert!((lhs - rhs).abs() < 1e-13 * (1.0 + rhs.abs()), "x = {x}");
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let sol = GeneralSolution::new(1.0, 0.4);
        let h = 1e-5;
        let x = 3.7;
        let fd = (z_eval(sol, Order(2), 1.0, x + h).unwrap()
            - z_eval(sol, Order(2), 1.0, x - h).unwrap())
            / (2.0 * h);
        let d = z_derivative(sol, Order(2), 1.0, x).unwrap();
        assert!((fd - d).abs() < 1e-8);
    }

    #[test]
    fn triplet_examples() {
        let (a, b, c) = z_triplet(GeneralSolution::J, Order(1), 1.0, 1.0).unwrap();
        assert_eq!(a, bessel_j(Order(0), 1.0).unwrap());
        assert!((a + c - 2.0 * b).abs() < 1e-15);

        let (m1, _, p1) = z_triplet(GeneralSolution::new(0.3, 1.1), Order(0), 1.0, 2.5).unwrap();
        assert_eq!(m1, -p1);

        let (m, z, p) = z_triplet(GeneralSolution::new(1.0, 1.0), Order(5), 2.0, 4.0).unwrap();
        let resid = (m + p - 2.0 * 5.0 / 8.0 * z).abs();
        assert!(resid < 1e-12 * z.abs().max(1.0));
    }

    #[test]
    fn first_zeros_by_bisection_oracle() {
        let j0 = crate::roots::bisect(|x| libm::j0(x), 2.0, 3.0).unwrap();
        let j1 = crate::roots::bisect(|x| libm::j1(x), 3.0, 4.0).unwrap();
        assert!((bessel_zero(0, 1).unwrap().value - j0).abs() < 4e-16 * j0);
        assert!((bessel_zero(1, 1).unwrap().value - j1).abs() < 4e-16 * j1);
        assert!((j0 - 2.404825557695773).abs() < 1e-15);
        assert!((j1 - 3.8317059702075123).abs() < 1e-15);
    }

    #[test]
    fn large_index_zero_is_offset_by_quarter_period() {
        // j_{1,150} = 472.0235017514582 (40-digit reference); the offset
        // from 150 pi tends to pi / 4 rather than zero
        let z = bessel_zero(1, 150).unwrap().value;
        assert!((z - 472.023501751458202766).abs() < 1e-11);
        let offset = z - 150.0 * PI;
        assert!((offset - PI / 4.0).abs() < 0.01);
    }

    #[test]
    fn zero_errors() {
        assert!(matches!(bessel_zero(2, 1), Err(Error::UnsupportedOrder(2))));
        assert!(bessel_zero(0, 0).is_err());
    }

    #[test]
    fn zeros_are_zeros_and_increase() {
        for q in 0..2 {
            let mut prev = 0.0;
            for p in 1..=600 {
                let z = bessel_zero(q, p).unwrap().value;
                let f = if q == 0 { libm::j0(z) } else { libm::j1(z) };
                assert!(f.abs() <= 1e-13, "q={q} p={p} J={f}");
                assert!(z > prev);
                if p >= 3 {
                    assert!((z - prev - PI).abs() <= 0.3);
                }
                prev = z;
            }
        }
    }

    #[test]
    fn uncached_zero_agrees_with_mcmahon() {
        let z = bessel_zero(1, 5000).unwrap().value;
        assert!(libm::j1(z).abs() < 1e-13);
        assert!((z - mcmahon_estimate(1, 5000)).abs() < 1e-9);
    }
}
