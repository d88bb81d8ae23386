//! Ground-truth integration of weighted products of Bessel-type factors.
//!
//! The interval is first cut at the zeros of the fastest-oscillating factor
//! so every starting panel covers at most one lobe. Each panel is integrated
//! with the 21-point Gauss-Kronrod rule; the panel with the largest error
//! estimate is bisected until the total estimate meets the tolerance.
//! Panels are processed and summed in a fixed order so the result is
//! bit-reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bessel::{self, GeneralSolution, Order};
use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-12;
pub const DEFAULT_ABS_TOL: f64 = 1e-15;
pub const DEFAULT_MAX_PANELS: usize = 200_000;

/// Weight multiplying the factor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weight {
    /// `x^k`, `k >= -1`
    Power(i32),
    /// `x^(-1/2)`, integrated after the substitution `x = t^2`
    InvSqrt,
}

/// One factor `Z_n(scale * x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub order: Order,
    pub scale: f64,
    pub sol: GeneralSolution,
}

impl Factor {
    pub fn new(order: impl Into<Order>, scale: f64, sol: GeneralSolution) -> Self {
        Factor {
            order: order.into(),
            scale,
            sol,
        }
    }

    /// First-kind factor `J_n(scale * x)`.
    pub fn j(order: i32, scale: f64) -> Self {
        Factor::new(order, scale, GeneralSolution::J)
    }
}

/// Declarative description of `∫ w(x) Π Z_{n_i}(s_i x) dx` over `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductIntegralSpec {
    pub weight: Weight,
    pub factors: Vec<Factor>,
    pub lo: f64,
    pub hi: f64,
}

impl ProductIntegralSpec {
    pub fn new(weight: Weight, factors: Vec<Factor>, lo: f64, hi: f64) -> Self {
        ProductIntegralSpec {
            weight,
            factors,
            lo,
            hi,
        }
    }

    /// `∫ x^power Π factors` on `[lo, hi]`.
    pub fn power(power: i32, factors: Vec<Factor>, lo: f64, hi: f64) -> Self {
        Self::new(Weight::Power(power), factors, lo, hi)
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() || self.factors.len() > 3 {
            return Err(Error::InvalidArgument(format!(
                "between one and three factors required, got {}",
                self.factors.len()
            )));
        }
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo < 0.0 || self.hi <= self.lo {
            return Err(Error::InvalidArgument(format!(
                "interval [{}, {}] must satisfy 0 <= lo < hi",
                self.lo, self.hi
            )));
        }
        for f in &self.factors {
            if !(f.scale > 0.0) || !f.scale.is_finite() {
                return Err(Error::InvalidArgument(format!("scale {} must be positive", f.scale)));
            }
            if !f.sol.is_regular() && self.lo <= 0.0 {
                return Err(Error::Domain {
                    what: "lower limit for a second-kind factor",
                    value: self.lo,
                });
            }
        }
        match self.weight {
            Weight::Power(k) if k < -1 => {
                return Err(Error::InvalidArgument(format!("weight power {k} below -1")))
            }
            Weight::Power(k) if k < 0 && self.lo <= 0.0 => {
                // x^-1 is only integrable at 0 when the factors vanish there
                let vanishing: i32 = self.factors.iter().map(|f| f.order.0.abs()).sum();
                if vanishing + k < 0 {
                    return Err(Error::Domain {
                        what: "lower limit for x^-1 weight",
                        value: self.lo,
                    });
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Index of the factor that sets the panel grid: largest scale, first on ties.
    fn fastest_factor(&self) -> usize {
        let mut best = 0;
        for (i, f) in self.factors.iter().enumerate() {
            if f.scale > self.factors[best].scale {
                best = i;
            }
        }
        best
    }

    /// Panel boundaries in `x`, including both endpoints.
    fn breakpoints(&self) -> Vec<f64> {
        let f = self.factors[self.fastest_factor()];
        let mut pts = vec![self.lo];
        let n = f.order.0.unsigned_abs();
        if f.sol.is_regular() && n <= 1 {
            let mut p = 1;
            loop {
                let x = bessel::zero(n, p) / f.scale;
                if x >= self.hi {
                    break;
                }
                if x > self.lo {
                    pts.push(x);
                }
                p += 1;
            }
        } else {
            let step = PI / f.scale;
            let mut x = self.lo + step;
            while x < self.hi {
                pts.push(x);
                x += step;
            }
        }
        // drop slivers next to the upper end
        while pts.len() > 1 && self.hi - pts[pts.len() - 1] < 1e-12 * self.hi {
            pts.pop();
        }
        pts.push(self.hi);
        pts
    }

    #[inline]
    fn product(&self, x: f64) -> f64 {
        self.factors
            .iter()
            .map(|f| f.sol.eval_unchecked(f.order, f.scale * x))
            .product()
    }
}

/// Integral estimate with its error bar and work counters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_err: f64,
    pub panels: usize,
    pub evals: usize,
    /// Set when every remaining panel sat at its rounding floor before the
    /// requested tolerance was met.
    pub roundoff_limited: bool,
}

/// Knobs for the adaptive driver.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub compensated: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            max_panels: DEFAULT_MAX_PANELS,
            compensated: false,
        }
    }
}

/// Integrate a product spec in plain double precision.
pub fn integrate(spec: &ProductIntegralSpec, rel_tol: f64, abs_tol: f64) -> Result<QuadratureResult> {
    integrate_with(
        spec,
        Options {
            rel_tol,
            abs_tol,
            ..Options::default()
        },
    )
}

/// Same contract as [`integrate`], with error-free transformations used to
/// accumulate the rule sums and the panel totals.
pub fn integrate_extended(spec: &ProductIntegralSpec, rel_tol: f64) -> Result<QuadratureResult> {
    integrate_with(
        spec,
        Options {
            rel_tol,
            abs_tol: DEFAULT_ABS_TOL,
            compensated: true,
            ..Options::default()
        },
    )
}

/// Integrate with the default tolerances.
pub fn integrate_default(spec: &ProductIntegralSpec) -> Result<QuadratureResult> {
    integrate(spec, DEFAULT_REL_TOL, DEFAULT_ABS_TOL)
}

pub fn integrate_with(spec: &ProductIntegralSpec, opts: Options) -> Result<QuadratureResult> {
    if !(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    spec.validate()?;
    let breaks = spec.breakpoints();
    match spec.weight {
        Weight::Power(k) => {
            let f = |x: f64| {
                let w = if k == 0 { 1.0 } else { x.powi(k) };
                w * spec.product(x)
            };
            adaptive(f, &breaks, opts)
        }
        Weight::InvSqrt => {
            // x = t^2, x^-1/2 dx = 2 dt
            let f = |t: f64| 2.0 * spec.product(t * t);
            let tbreaks: Vec<f64> = breaks.iter().map(|x| x.sqrt()).collect();
            adaptive(f, &tbreaks, opts)
        }
    }
}

/// Adaptive Gauss-Kronrod integration of an arbitrary smooth function over
/// `[a, b]`. Used by tests as an independent oracle for closed forms that
/// are not Bessel products.
pub fn integrate_fn<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    if !(b > a) {
        return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
    }
    adaptive(
        f,
        &[a, b],
        Options {
            rel_tol,
            abs_tol,
            ..Options::default()
        },
    )
}

// 21-point Kronrod extension of the 10-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    floor: f64,
}

impl Panel {
    fn refinable(&self) -> bool {
        let mid = 0.5 * (self.a + self.b);
        self.err > self.floor && mid > self.a && mid < self.b
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, compensated: bool) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = Accumulator::new(compensated);
    let mut gauss = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    kronrod.add(WGK[10] * fc);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod.add(WGK[j] * f1);
        kronrod.add(WGK[j] * f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let k = kronrod.total();
    let mean = 0.5 * k;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = k * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((k - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    Panel {
        a,
        b,
        value,
        err,
        floor,
    }
}

#[derive(PartialEq)]
struct Queued {
    err: f64,
    idx: usize,
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger error first, lower index breaks ties
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: F, breaks: &[f64], opts: Options) -> Result<QuadratureResult> {
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .map(|w| gk21(&f, w[0], w[1], opts.compensated))
        .collect();
    let mut evals = 21 * panels.len();
    let mut heap: BinaryHeap<Queued> = panels
        .iter()
        .enumerate()
        .filter(|(_, p)| p.refinable())
        .map(|(idx, p)| Queued { err: p.err, idx })
        .collect();

    let (mut value, mut err) = totals(&panels, false);
    let mut roundoff_limited = false;
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * value.abs());
        if err <= tol {
            break;
        }
        let Some(top) = heap.pop() else {
            roundoff_limited = true;
            break;
        };
        if panels.len() >= opts.max_panels {
            return Err(Error::Convergence {
                estimate: value,
                abs_err: err,
                panels: panels.len(),
            });
        }
        let p = panels[top.idx];
        let mid = 0.5 * (p.a + p.b);
        let left = gk21(&f, p.a, mid, opts.compensated);
        let right = gk21(&f, mid, p.b, opts.compensated);
        evals += 42;
        value += left.value + right.value - p.value;
        err += left.err + right.err - p.err;
        panels[top.idx] = left;
        panels.push(right);
        let ridx = panels.len() - 1;
        if left.refinable() {
            heap.push(Queued {
                err: left.err,
                idx: top.idx,
            });
        }
        if right.refinable() {
            heap.push(Queued {
                err: right.err,
                idx: ridx,
            });
        }
    }

    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let (value, abs_err) = totals(&panels, opts.compensated);
    Ok(QuadratureResult {
        value,
        abs_err,
        panels: panels.len(),
        evals,
        roundoff_limited,
    })
}

fn totals(panels: &[Panel], compensated: bool) -> (f64, f64) {
    let mut v = Accumulator::new(compensated);
    let mut e = 0.0;
    for p in panels {
        v.add(p.value);
        e += p.err;
    }
    (v.total(), e)
}

/// Running sum, optionally kept as an unevaluated double-double pair.
#[derive(Debug, Clone, Copy)]
pub struct Accumulator {
    hi: f64,
    lo: f64,
    compensated: bool,
}

impl Accumulator {
    pub fn new(compensated: bool) -> Self {
        Accumulator {
            hi: 0.0,
            lo: 0.0,
            compensated,
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        if self.compensated {
            let (s, e) = two_sum(self.hi, x);
            self.hi = s;
            self.lo += e;
        } else {
            self.hi += x;
        }
    }

    pub fn total(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Knuth's TwoSum: `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}
