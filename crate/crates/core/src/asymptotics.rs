//! Fresnel integrals and the large-mode approximation of the unit-disc
//! triple-product coefficients.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::{zero, Order};
use crate::error::{Error, Result};
use crate::table1::TABLE1;

/// `S(t) = ∫₀ᵗ sin(πu²/2) du` and `C(t) = ∫₀ᵗ cos(πu²/2) du`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FresnelPair {
    pub s: f64,
    pub c: f64,
}

const FRESNEL_SERIES_MAX: f64 = 1.5;

/// Fresnel integrals for `t >= 0`: power series below 1.5, a Lentz
/// continued fraction for the complementary error function above.
pub fn fresnel(t: f64) -> Result<FresnelPair> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            what: "fresnel argument",
            value: t,
        });
    }
    if t < 1e-150 {
        return Ok(FresnelPair { s: 0.0, c: t });
    }
    Ok(if t <= FRESNEL_SERIES_MAX {
        fresnel_series(t)
    } else {
        fresnel_cf(t)
    })
}

fn fresnel_series(t: f64) -> FresnelPair {
    let x = FRAC_PI_2 * t * t;
    let mut term = t;
    let (mut c, mut s) = (t, 0.0);
    let mut k = 1u32;
    loop {
        term *= x / k as f64;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let contrib = sign * term / (2 * k + 1) as f64;
        if k % 2 == 1 {
            s += contrib;
        } else {
            c += contrib;
        }
        if term < 1e-18 * c.abs().max(s.abs()).max(1e-300) {
            break;
        }
        k += 1;
    }
    FresnelPair { s, c }
}

fn fresnel_cf(t: f64) -> FresnelPair {
    let tiny = 1e-300;
    let pix2 = PI * t * t;
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1.0 / tiny, 0.0);
    let mut d = one / b;
    let mut h = d;
    let mut n = -1.0;
    for _ in 0..10_000 {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += Complex64::new(4.0, 0.0);
        d = one / (d * a + b);
        cc = b + Complex64::new(a, 0.0) / cc;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(t, -t);
    let phase = Complex64::from_polar(1.0, 0.5 * pix2);
    let cs = Complex64::new(0.5, 0.5) * (one - phase * h);
    FresnelPair { s: cs.im, c: cs.re }
}

/// Leading large-argument form `√(2/(πx)) cos(x − nπ/2 − π/4)`.
pub fn asymptotic_j(n: Order, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            what: "asymptotic argument",
            value: x,
        });
    }
    Ok((2.0 / (PI * x)).sqrt() * (x - n.0 as f64 * FRAC_PI_2 - FRAC_PI_4).cos())
}

/// Approximation of `∫₀¹ ξ² J_0(j_p' ξ) J_0(j_p ξ) dξ` (zeros of `J_1`),
/// with the bracket and the `2/(π√(j j'))` factor exactly as printed.
pub fn two_product_approx(p: u32, p_prime: u32) -> Result<f64> {
    two_product_approx_scaled(p, p_prime, 2.0)
}

/// Same bracket with the `1/(π√(j j'))` factor that the leading asymptotic
/// form produces, continuous with the `p = p'` branch.
pub fn two_product_approx_consistent(p: u32, p_prime: u32) -> Result<f64> {
    two_product_approx_scaled(p, p_prime, 1.0)
}

fn two_product_approx_scaled(p: u32, p_prime: u32, numerator: f64) -> Result<f64> {
    if p == 0 || p_prime == 0 {
        return Err(Error::InvalidArgument("zero indices start at 1".into()));
    }
    let (j, jp) = (zero(1, p), zero(1, p_prime));
    if p == p_prime {
        return Ok(1.0 / (2.0 * PI * j));
    }
    let parity = if (p + p_prime) % 2 == 0 { 1.0 } else { -1.0 };
    let dm = (jp - j) * (jp - j);
    let bracket = -1.0 / dm + parity / dm - parity / (jp + j);
    Ok(numerator / (PI * (jp * j).sqrt()) * bracket)
}

fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `∫₀¹ ξ^{−1/2} cos(Pπξ + Qπ) dξ` in terms of Fresnel integrals.
pub fn half_power_cosine_integral(big_p: f64, big_q: f64) -> f64 {
    let (cq, sq) = ((big_q * PI).cos(), (big_q * PI).sin());
    if big_p == 0.0 {
        return 2.0 * cq;
    }
    let t = (2.0 * big_p.abs()).sqrt();
    let f = fresnel(t).expect("finite non-negative argument");
    2.0 * cq * f.c / t - 2.0 * sq * sign0(big_p) * f.s / t
}

/// Zero indices `m, n, p`, factor orders `i, j, k` and the zero kind `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeTriple {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub i: u8,
    pub j: u8,
    pub k: u8,
    pub q: u8,
}

impl ModeTriple {
    /// `i = j = k = 0` at zeros of `J_1`, the tabulated configuration.
    pub fn c000(m: u32, n: u32, p: u32) -> Self {
        ModeTriple {
            m,
            n,
            p,
            i: 0,
            j: 0,
            k: 0,
            q: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 || self.p == 0 {
            return Err(Error::InvalidArgument("zero indices start at 1".into()));
        }
        if self.i > 1 || self.j > 1 || self.k > 1 {
            return Err(Error::UnsupportedOrder(self.i.max(self.j).max(self.k) as i32));
        }
        if self.q > 1 {
            return Err(Error::UnsupportedOrder(self.q as i32));
        }
        Ok(())
    }
}

/// Which overall constant multiplies the approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Prefactor {
    /// Pinned against the tabulated right-hand sides.
    #[default]
    Calibrated,
    /// `(2/π)^{3/2}/4` from the leading asymptotic form with `j ≈ pπ`.
    Derived,
}

/// How the zeros inside the formula are modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ZeroModel {
    /// `j_p ≈ pπ`.
    #[default]
    MultipleOfPi,
    /// Actual zeros of `J_q`.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ApproxOptions {
    pub prefactor: Prefactor,
    pub zeros: ZeroModel,
}

/// `K` in `prefactor = K/√(mnp)` obtained from the leading asymptotic
/// form: `(2/π)^{3/2} π^{−3/2} / 4 = 1/(√2 π³)`.
pub fn derived_prefactor() -> f64 {
    1.0 / (std::f64::consts::SQRT_2 * PI.powi(3))
}

/// Outcome of pinning `K` against the tabulated right-hand sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Median of the per-row ratios.
    pub constant: f64,
    pub row_ratios: Vec<f64>,
    pub derived: f64,
    /// `derived / constant`.
    pub derived_ratio: f64,
}

impl Calibration {
    /// Do the derived and calibrated constants agree to `digits`
    /// significant figures?
    pub fn agrees(&self, digits: i32) -> bool {
        same_sig_figs(self.derived, self.constant, digits)
    }

    pub fn discrepancy_report(&self) -> String {
        format!(
            "derived prefactor constant {:.6e} vs calibrated {:.6e} (ratio {:.5}); row ratios span [{:.6e}, {:.6e}]",
            self.derived,
            self.constant,
            self.derived_ratio,
            self.row_ratios.iter().cloned().fold(f64::INFINITY, f64::min),
            self.row_ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        )
    }
}

/// `true` when `a` and `b` round to the same value at `digits`
/// significant figures, judged on the scale of `b`.
pub fn same_sig_figs(a: f64, b: f64, digits: i32) -> bool {
    if b == 0.0 {
        return a == 0.0;
    }
    let unit = 10f64.powi(b.abs().log10().floor() as i32 - (digits - 1));
    (a - b).abs() <= 0.5 * unit * (1.0 + 1e-9)
}

/// Per-row ratio `printed / (sum/√(mnp))` over the tabulated rows; the
/// calibrated constant is their median.
pub fn calibrate_prefactor() -> Calibration {
    let mut ratios: Vec<f64> = TABLE1
        .iter()
        .map(|r| {
            let unit = approx_with_constant(ModeTriple::c000(r.m, r.n, r.p), 1.0, ZeroModel::MultipleOfPi);
            r.rhs / unit
        })
        .collect();
    let row_ratios = ratios.clone();
    ratios.sort_by(f64::total_cmp);
    let mid = ratios.len() / 2;
    let constant = if ratios.len() % 2 == 1 {
        ratios[mid]
    } else {
        0.5 * (ratios[mid - 1] + ratios[mid])
    };
    let derived = derived_prefactor();
    Calibration {
        constant,
        row_ratios,
        derived,
        derived_ratio: derived / constant,
    }
}

/// The calibrated constant, computed once.
pub fn calibrated_prefactor() -> f64 {
    static K: OnceLock<f64> = OnceLock::new();
    *K.get_or_init(|| calibrate_prefactor().constant)
}

/// Large-mode approximation of `qC_ijk^{mnp}` with the calibrated
/// constant and `j ≈ pπ`.
pub fn triple_product_approx(mode: ModeTriple) -> Result<f64> {
    triple_product_approx_with(mode, ApproxOptions::default())
}

pub fn triple_product_approx_with(mode: ModeTriple, opts: ApproxOptions) -> Result<f64> {
    mode.validate()?;
    let k = match opts.prefactor {
        Prefactor::Calibrated => calibrated_prefactor(),
        Prefactor::Derived => derived_prefactor(),
    };
    Ok(approx_with_constant(mode, k, opts.zeros))
}

fn approx_with_constant(mode: ModeTriple, k: f64, zeros: ZeroModel) -> f64 {
    let (m, n, p) = match zeros {
        ZeroModel::MultipleOfPi => (mode.m as f64, mode.n as f64, mode.p as f64),
        ZeroModel::Exact => {
            let q = mode.q as u32;
            (zero(q, mode.m) / PI, zero(q, mode.n) / PI, zero(q, mode.p) / PI)
        }
    };
    let (i, j, kk) = (mode.i as f64, mode.j as f64, mode.k as f64);
    let mut terms = [
        (m + n + p, -0.5 * (i + j + kk) - 0.75),
        (m - n - p, -0.5 * (i - j - kk) + 0.25),
        (m + n - p, -0.5 * (i + j - kk) - 0.25),
        (m - n + p, -0.5 * (i - j + kk) - 0.25),
    ];
    // the integrand is even under (P, Q) → (−P, −Q); a canonical order makes
    // permuted mode triples sum identically
    for t in terms.iter_mut() {
        if t.0 < 0.0 {
            *t = (-t.0, -t.1);
        }
    }
    terms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let sum: f64 = terms.iter().map(|&(pp, qq)| half_power_cosine_integral(pp, qq)).sum();
    k / (m * n * p).sqrt() * sum
}
