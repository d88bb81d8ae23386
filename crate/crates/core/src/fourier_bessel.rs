//! Fourier-Bessel expansion of a product of two Bessel functions:
//!
//! `J_j(j_{i,m}x) J_k(j_{i,n}x) = Σ_p c_p J_i(j_{i,p}x)`,
//! `c_p = 2 J_{i+1}(j_{i,p})⁻² ∫₀¹ x J_j(j_{i,m}x) J_k(j_{i,n}x) J_i(j_{i,p}x) dx`.
//!
//! All zeros are those of `J_i`; the summation index `p` is distinct from
//! the factor indices `m, n`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::ModeTriple;
use crate::bessel::{bessel_j, zero, Order};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_default, Factor, ProductIntegralSpec};

/// Truncated series `Σ_{p=1}^{N} c_p J_i(j_{i,p}x)` for the product
/// `J_j(j_{i,m}x) J_k(j_{i,n}x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSeries {
    pub i: u8,
    pub j: u8,
    pub k: u8,
    pub m: u32,
    pub n: u32,
    /// `(p, c_p)` for `p = 1..=N`.
    pub coefficients: Vec<(u32, f64)>,
}

impl ExpansionSeries {
    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }

    /// The product being expanded, evaluated directly.
    pub fn target(&self, x: f64) -> f64 {
        let q = self.i as u32;
        let a = bessel_j(Order(self.j as i32), zero(q, self.m) * x).unwrap_or(f64::NAN);
        let b = bessel_j(Order(self.k as i32), zero(q, self.n) * x).unwrap_or(f64::NAN);
        a * b
    }

    /// `Σ_p (c_p)² ‖J_i(j_{i,p}x)‖²` with `‖·‖² = J_{i+1}(j_{i,p})²/2`.
    pub fn parseval_sum(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|&(p, c)| c * c * mode_norm(self.i, p))
            .sum()
    }

    /// `∫₀¹ x [product]² dx` by quadrature.
    pub fn target_energy(&self) -> Result<f64> {
        let q = self.i as u32;
        // a squared product has four factors, so integrate it as a plain function
        let f = |x: f64| {
            let v = self.target(x);
            x * v * v
        };
        let spacing = std::f64::consts::PI / zero(q, self.m.max(self.n));
        let mut total = 0.0;
        let mut a = 0.0;
        while a < 1.0 {
            let b = (a + spacing).min(1.0);
            total += crate::quadrature::integrate_fn(f, a, b, 1e-13, 1e-17)?.value;
            a = b;
        }
        Ok(total)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["p", "c"]).map_err(csv_err)?;
        for &(p, c) in &self.coefficients {
            w.write_record([p.to_string(), format!("{c:.16e}")]).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// `∫₀¹ x J_i(j_{i,p}x)² dx = J_{i+1}(j_{i,p})²/2`.
pub fn mode_norm(i: u8, p: u32) -> f64 {
    let v = bessel_j(Order(i as i32 + 1), zero(i as u32, p)).unwrap_or(f64::NAN);
    0.5 * v * v
}

fn check_orders(i: u8, j: u8, k: u8) -> Result<()> {
    if i > 1 {
        return Err(Error::UnsupportedOrder(i as i32));
    }
    if j > 1 || k > 1 {
        return Err(Error::UnsupportedOrder(j.max(k) as i32));
    }
    Ok(())
}

/// `C_ijk^{mnp} = ∫₀¹ x J_j(j_{i,m}x) J_k(j_{i,n}x) J_i(j_{i,p}x) dx` by
/// quadrature; `mode.q` is ignored in favour of `i`.
pub fn product_moment(mode: ModeTriple) -> Result<f64> {
    check_orders(mode.i, mode.j, mode.k)?;
    if mode.m == 0 || mode.n == 0 || mode.p == 0 {
        return Err(Error::InvalidArgument("zero indices start at 1".into()));
    }
    let q = mode.i as u32;
    let spec = ProductIntegralSpec::power(
        1,
        vec![
            Factor::j(mode.j as i32, zero(q, mode.m)),
            Factor::j(mode.k as i32, zero(q, mode.n)),
            Factor::j(mode.i as i32, zero(q, mode.p)),
        ],
        0.0,
        1.0,
    );
    Ok(integrate_default(&spec)?.value)
}

/// `c_p = 2 J_{i+1}(j_{i,p})⁻² C_ijk^{mnp}`.
pub fn expansion_coefficient(mode: ModeTriple) -> Result<f64> {
    let c = product_moment(mode)?;
    Ok(c / mode_norm(mode.i, mode.p))
}

/// The first `terms` coefficients of the expansion.
pub fn expand(i: u8, j: u8, k: u8, m: u32, n: u32, terms: usize) -> Result<ExpansionSeries> {
    check_orders(i, j, k)?;
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("zero indices start at 1".into()));
    }
    let coefficients = (1..=terms as u32)
        .into_par_iter()
        .map(|p| {
            let mode = ModeTriple { m, n, p, i, j, k, q: i };
            expansion_coefficient(mode).map(|c| (p, c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpansionSeries {
        i,
        j,
        k,
        m,
        n,
        coefficients,
    })
}

/// Partial sum of the series at `x`.
pub fn reconstruct(series: &ExpansionSeries, x: f64) -> f64 {
    let q = series.i as u32;
    let order = Order(series.i as i32);
    series
        .coefficients
        .iter()
        .map(|&(p, c)| c * bessel_j(order, zero(q, p) * x).unwrap_or(f64::NAN))
        .sum()
}

/// Root-mean-square reconstruction error on `points` midpoints of (0, 1).
pub fn rms_error(series: &ExpansionSeries, points: usize) -> f64 {
    let sum: f64 = (0..points)
        .map(|k| {
            let x = (k as f64 + 0.5) / points as f64;
            let d = reconstruct(series, x) - series.target(x);
            d * d
        })
        .sum();
    (sum / points as f64).sqrt()
}

/// Relative Parseval gap `1 − Σ c_p² ‖·‖² / ∫ x [product]²`.
pub fn parseval_gap(series: &ExpansionSeries) -> Result<f64> {
    let e = series.target_energy()?;
    Ok(1.0 - series.parseval_sum() / e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::GeneralSolution;
    use crate::two_product::same_scale_norm_antideriv;

    #[test]
    fn coefficients_against_direct_quadrature() {
        let series = expand(1, 1, 1, 1, 2, 8).unwrap();
        for &(p, c) in &series.coefficients {
            let direct = {
                let spec = ProductIntegralSpec::power(
                    1,
                    vec![
                        Factor::j(1, zero(1, 1)),
                        Factor::j(1, zero(1, 2)),
                        Factor::j(1, zero(1, p)),
                    ],
                    0.0,
                    1.0,
                );
                let j2 = libm::jn(2, zero(1, p));
                2.0 / (j2 * j2) * integrate_default(&spec).unwrap().value
            };
            assert!((c - direct).abs() <= 1e-10 * direct.abs().max(1e-3), "p={p}: {c} vs {direct}");
        }
    }

    #[test]
    fn norm_matches_closed_form() {
        for i in 0..2u8 {
            for p in [1, 5, 40] {
                let a = zero(i as u32, p);
                let closed = same_scale_norm_antideriv(Order(i as i32), a, GeneralSolution::J, 1.0).unwrap();
                assert!((mode_norm(i, p) - closed).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn reconstruction_and_convergence() {
        let s64 = expand(1, 1, 1, 1, 2, 64).unwrap();
        let r64 = rms_error(&s64, 512);
        assert!(r64 <= 1e-3, "{r64}");
        let s32 = ExpansionSeries {
            coefficients: s64.coefficients[..32].to_vec(),
            ..s64.clone()
        };
        assert!(rms_error(&s32, 512) > r64);
        let empty = ExpansionSeries {
            coefficients: vec![],
            ..s64.clone()
        };
        assert_eq!(reconstruct(&empty, 0.3), 0.0);
        let gap = parseval_gap(&s64).unwrap();
        assert!((0.0..=0.02).contains(&gap), "{gap}");
        let peak = s64.coefficients.iter().fold(0.0f64, |m, c| m.max(c.1.abs()));
        let tail = s64.coefficients[13..].iter().fold(0.0f64, |m, c| m.max(c.1.abs()));
        assert!(tail <= 1e-2 * peak, "{tail} vs {peak}");
    }

    #[test]
    fn csv_export() {
        let s = expand(0, 0, 0, 1, 1, 3).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("p,c\n1,"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn rejects_unsupported() {
        assert!(expand(2, 0, 0, 1, 1, 3).is_err());
        assert!(expand(0, 0, 0, 0, 1, 3).is_err());
    }
}
