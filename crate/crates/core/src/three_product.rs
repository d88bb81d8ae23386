//! Relations among integrals of products of three general solutions.
//!
//! Notation: for legs `(α, Z), (β, Z̃), (γ, Ẑ)`
//!
//! * `I_ijk^{αβγ} = ∫ x Z_i(αx) Z̃_j(βx) Ẑ_k(γx) dx`
//! * `K_ijk^{αβγ} = ∫ Z_i(αx) Z̃_j(βx) Ẑ_k(γx) dx`
//!
//! Superscripts `βγα` and `γαβ` denote the cyclic rotations of the legs.
//! Everything here works on definite integrals over `[x0, x1]`, so every
//! boundary bracket `[B(x)]` below means `B(x1) − B(x0)`.
//!
//! No closed form is known for `I_000`; it is the one input that always
//! comes from quadrature.

use serde::{Deserialize, Serialize};

use crate::bessel::{zero, z01, GeneralSolution};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with, Factor, Options, ProductIntegralSpec, QuadratureResult};
use crate::two_product::{check_distinct, w00_antideriv, w11_antideriv};

/// One factor of a triple product: a scale and the solution it multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub scale: f64,
    pub sol: GeneralSolution,
}

impl Leg {
    pub fn new(scale: f64, sol: GeneralSolution) -> Self {
        Leg { scale, sol }
    }

    pub fn j(scale: f64) -> Self {
        Leg::new(scale, GeneralSolution::J)
    }
}

/// Three legs and the interval of integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleParams {
    pub legs: [Leg; 3],
    pub x0: f64,
    pub x1: f64,
}

impl TripleParams {
    pub fn new(legs: [Leg; 3], x0: f64, x1: f64) -> Result<Self> {
        for l in &legs {
            if !(l.scale > 0.0) || !l.scale.is_finite() {
                return Err(Error::Domain {
                    what: "triple-product scale",
                    value: l.scale,
                });
            }
        }
        if !(x0 >= 0.0 && x1 >= x0 && x1.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad interval [{x0}, {x1}]")));
        }
        if x0 == 0.0 && legs.iter().any(|l| !l.sol.is_regular()) {
            return Err(Error::InvalidArgument(
                "second-kind factors need an interval away from 0".into(),
            ));
        }
        Ok(TripleParams { legs, x0, x1 })
    }

    pub fn j_only(alpha: f64, beta: f64, gamma: f64, x0: f64, x1: f64) -> Result<Self> {
        Self::new([Leg::j(alpha), Leg::j(beta), Leg::j(gamma)], x0, x1)
    }

    /// `(α, β, γ) → (β, γ, α)`.
    pub fn rotate(&self) -> Self {
        let [a, b, c] = self.legs;
        TripleParams {
            legs: [b, c, a],
            ..*self
        }
    }

    pub fn scales(&self) -> (f64, f64, f64) {
        (self.legs[0].scale, self.legs[1].scale, self.legs[2].scale)
    }

    /// `(Z_0, Z_1)` of the three legs at `x`.
    fn at(&self, x: f64) -> Result<[(f64, f64); 3]> {
        let mut out = [(0.0, 0.0); 3];
        for (o, l) in out.iter_mut().zip(&self.legs) {
            *o = z01(l.sol, l.scale, x)?;
        }
        Ok(out)
    }

    /// `B(x1) − B(x0)` for a boundary expression built from leg values.
    fn bracket<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64, &[(f64, f64); 3]) -> f64,
    {
        let hi = f(self.x1, &self.at(self.x1)?);
        let lo = f(self.x0, &self.at(self.x0)?);
        Ok(hi - lo)
    }

    fn integrate(&self, orders: [i32; 3], power: i32, opts: &Options) -> Result<QuadratureResult> {
        let factors = orders
            .iter()
            .zip(&self.legs)
            .map(|(&o, l)| Factor::new(o, l.scale, l.sol))
            .collect();
        integrate_with(&ProductIntegralSpec::power(power, factors, self.x0, self.x1), *opts)
    }
}

/// Where a family entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Quadrature,
    ClosedFormFromIdentity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub value: f64,
    pub abs_err: f64,
    pub provenance: Provenance,
}

impl Entry {
    fn quad(r: QuadratureResult) -> Self {
        Entry {
            value: r.value,
            abs_err: r.abs_err,
            provenance: Provenance::Quadrature,
        }
    }

    pub fn derived(value: f64, abs_err: f64) -> Self {
        Entry {
            value,
            abs_err,
            provenance: Provenance::ClosedFormFromIdentity,
        }
    }
}

/// The full set of triple-product integrals over one interval. Cyclic
/// arrays are ordered `[αβγ, βγα, γαβ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleFamilyValues {
    pub i000: Entry,
    pub i110: [Entry; 3],
    pub i001: [Entry; 3],
    pub i111: Entry,
    pub k110: [Entry; 3],
    pub k111: Entry,
    pub k000: Entry,
}

fn values<const N: usize>(e: &[Entry; N]) -> [f64; N] {
    e.map(|x| x.value)
}

/// Every family member by direct quadrature.
pub fn family_by_quadrature(params: &TripleParams, opts: &Options) -> Result<TripleFamilyValues> {
    let rot = [*params, params.rotate(), params.rotate().rotate()];
    let cyc = |orders: [i32; 3], power: i32| -> Result<[Entry; 3]> {
        Ok([
            Entry::quad(rot[0].integrate(orders, power, opts)?),
            Entry::quad(rot[1].integrate(orders, power, opts)?),
            Entry::quad(rot[2].integrate(orders, power, opts)?),
        ])
    };
    Ok(TripleFamilyValues {
        i000: Entry::quad(params.integrate([0, 0, 0], 1, opts)?),
        i110: cyc([1, 1, 0], 1)?,
        i001: cyc([0, 0, 1], 1)?,
        i111: Entry::quad(params.integrate([1, 1, 1], 1, opts)?),
        k110: cyc([1, 1, 0], 0)?,
        k111: Entry::quad(params.integrate([1, 1, 1], 0, opts)?),
        k000: Entry::quad(params.integrate([0, 0, 0], 0, opts)?),
    })
}

/// `∫ x^power Z_o0 Z_o1 Z_o2` over the interval, by quadrature.
pub fn triple_quadrature(
    params: &TripleParams,
    orders: [i32; 3],
    power: i32,
    opts: &Options,
) -> Result<QuadratureResult> {
    params.integrate(orders, power, opts)
}

/// `I_110^{αβγ}` from `I_000^{αβγ}`:
/// `I_000 (α² + β² − γ²)/(2αβ) + (2αβ)⁻¹[γxZ_1(γ)Z_0(α)Z_0(β) − αxZ_1(α)Z_0(β)Z_0(γ) − βxZ_1(β)Z_0(γ)Z_0(α)]`.
pub fn i110_from_i000(params: &TripleParams, i000: f64) -> Result<f64> {
    let (a, b, c) = params.scales();
    let ab2 = 2.0 * a * b;
    if ab2 == 0.0 || !ab2.is_finite() {
        return Err(Error::Degenerate { alpha: a, beta: b });
    }
    Ok(i000 * (a * a + b * b - c * c) / ab2 + i110_boundary(params)?)
}

fn i110_boundary(params: &TripleParams) -> Result<f64> {
    let (a, b, c) = params.scales();
    let bdry = params.bracket(|x, z| {
        let (a0, a1) = z[0];
        let (b0, b1) = z[1];
        let (c0, c1) = z[2];
        c * x * c1 * a0 * b0 - a * x * a1 * b0 * c0 - b * x * b1 * c0 * a0
    })?;
    Ok(bdry / (2.0 * a * b))
}

/// The three cyclic `I_110` values by solving the 3×3 linear system
/// `[[β,0,γ],[α,γ,0],[0,β,α]] · [I^{αβγ}, I^{βγα}, I^{γαβ}] = r` directly.
pub fn matrix_system_solve(params: &TripleParams, i000: f64) -> Result<[f64; 3]> {
    let (a, b, c) = params.scales();
    let det = 2.0 * a * b * c;
    if det == 0.0 || !det.is_finite() {
        return Err(Error::InvalidArgument("singular cyclic system".into()));
    }
    // r_k = s_k I_000 − [x Z_1(s_k x) × other two Z_0]
    let r = [
        a * i000 - params.bracket(|x, z| x * z[0].1 * z[1].0 * z[2].0)?,
        b * i000 - params.bracket(|x, z| x * z[1].1 * z[2].0 * z[0].0)?,
        c * i000 - params.bracket(|x, z| x * z[2].1 * z[0].0 * z[1].0)?,
    ];
    let m = [[b, 0.0, c], [a, c, 0.0], [0.0, b, a]];
    Ok(solve3(m, r))
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut r: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        r.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut s = r[row];
        for k in row + 1..3 {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    x
}

/// `|I_000 − [W_00^{αβ} Z_0(γx)] − γα/(α²−β²) I_110^{γαβ} + βγ/(α²−β²) I_110^{βγα}|`.
pub fn alt_relation_residual(params: &TripleParams, i000: f64, i110: [f64; 3]) -> Result<f64> {
    let (a, b, c) = params.scales();
    let d = check_distinct(a, b)?;
    let [la, lb, lc] = params.legs;
    let w = |x: f64| -> Result<f64> {
        let (c0, _) = z01(lc.sol, c, x)?;
        Ok(w00_antideriv(a, b, la.sol, lb.sol, x)? * c0)
    };
    let bdry = w(params.x1)? - w(params.x0)?;
    Ok((i000 - bdry - c * a / d * i110[2] + b * c / d * i110[1]).abs())
}

/// Coefficient `((α²+β²−γ²)² − 4α²β²)` shared by several relations.
pub fn triangle_discriminant(a: f64, b: f64, c: f64) -> f64 {
    let s = a * a + b * b - c * c;
    s * s - 4.0 * a * a * b * b
}

/// Boundary part of the `K_111` relation.
fn k111_boundary(params: &TripleParams) -> Result<f64> {
    let (a, b, c) = params.scales();
    let (a2, b2, c2) = (a * a, b * b, c * c);
    params.bracket(|x, z| {
        let (a0, a1) = z[0];
        let (b0, b1) = z[1];
        let (c0, c1) = z[2];
        (a2 - b2 - c2) / (4.0 * b * c) * x * a1 * b0 * c0
            + (b2 - c2 - a2) / (4.0 * c * a) * x * b1 * c0 * a0
            + (c2 - a2 - b2) / (4.0 * a * b) * x * c1 * a0 * b0
            - 0.5 * x * c1 * a1 * b1
    })
}

/// `K_111^{αβγ}` from `I_000^{αβγ}`.
pub fn k111_from_i000(params: &TripleParams, i000: f64) -> Result<f64> {
    let (a, b, c) = params.scales();
    if a * b * c == 0.0 {
        return Err(Error::Degenerate { alpha: a, beta: b });
    }
    Ok(k111_boundary(params)? - i000 * triangle_discriminant(a, b, c) / (4.0 * a * b * c))
}

/// Residuals of the two cyclic-sum relations:
/// `γI_110^{αβγ} + αI_110^{βγα} + βI_110^{γαβ} − [xZ_1Z_1Z_1] − 2K_111` and
/// `γI_001^{αβγ} + αI_001^{βγα} + βI_001^{γαβ} + [xZ_0Z_0Z_0] − K_000`.
pub fn cyclic_sum_residuals(params: &TripleParams, family: &TripleFamilyValues) -> Result<(f64, f64)> {
    let (a, b, c) = params.scales();
    let i110 = values(&family.i110);
    let i001 = values(&family.i001);
    let b111 = params.bracket(|x, z| x * z[0].1 * z[1].1 * z[2].1)?;
    let b000 = params.bracket(|x, z| x * z[0].0 * z[1].0 * z[2].0)?;
    let r1 = c * i110[0] + a * i110[1] + b * i110[2] - b111 - 2.0 * family.k111.value;
    let r2 = c * i001[0] + a * i001[1] + b * i001[2] + b000 - family.k000.value;
    Ok((r1, r2))
}

/// `I_001^{αβγ}` from the `K_110` cyclics and `I_111`:
/// `2αβ I_001 = αK^{βγα} + βK^{γαβ} − γK^{αβγ} + (α²+β²−γ²) I_111
///   + [αxZ_0(α)Z_1(β)Z_1(γ) + βxZ_0(β)Z_1(γ)Z_1(α) − γxZ_0(γ)Z_1(α)Z_1(β)]`.
pub fn i001_from_k110(params: &TripleParams, k110: [f64; 3], i111: f64) -> Result<f64> {
    let (a, b, c) = params.scales();
    let bdry = params.bracket(|x, z| {
        let (a0, a1) = z[0];
        let (b0, b1) = z[1];
        let (c0, c1) = z[2];
        a * x * a0 * b1 * c1 + b * x * b0 * c1 * a1 - c * x * c0 * a1 * b1
    })?;
    Ok((a * k110[1] + b * k110[2] - c * k110[0] + i111 * (a * a + b * b - c * c) + bdry) / (2.0 * a * b))
}

/// All three cyclic `I_001` from [`i001_from_k110`] applied to each rotation.
pub fn i001_cyclics_from_k110(params: &TripleParams, k110: [f64; 3], i111: f64) -> Result<[f64; 3]> {
    let r1 = params.rotate();
    let r2 = r1.rotate();
    Ok([
        i001_from_k110(params, k110, i111)?,
        i001_from_k110(&r1, [k110[1], k110[2], k110[0]], i111)?,
        i001_from_k110(&r2, [k110[2], k110[0], k110[1]], i111)?,
    ])
}

/// Residuals of the `I_111` / `I_001` relations, in order: the `W_11`
/// expansion of `I_111`, the single cyclic equation linking `I_001`, `K_110`
/// and `I_111`, and its solved form for `I_001^{αβγ}`.
pub fn i111_i001_relations_residual(
    params: &TripleParams,
    family: &TripleFamilyValues,
) -> Result<(f64, f64, f64)> {
    let (a, b, c) = params.scales();
    let d = check_distinct(a, b)?;
    let i001 = values(&family.i001);
    let k110 = values(&family.k110);
    let i111 = family.i111.value;
    let [la, lb, lc] = params.legs;

    let w = |x: f64| -> Result<f64> {
        let (_, c1) = z01(lc.sol, c, x)?;
        Ok(w11_antideriv(a, b, la.sol, lb.sol, x)? * c1)
    };
    let wb = w(params.x1)? - w(params.x0)?;
    let r48 = i111 - wb + b * c / d * i001[1] - c * a / d * i001[2] - b / d * k110[2] + a / d * k110[1];

    let b49 = params.bracket(|x, z| z[2].0 * x * z[0].1 * z[1].1)?;
    let r49 = b * i001[1] + a * i001[2] - k110[0] - c * i111 - b49;

    let r50 = i001[0] - i001_from_k110(params, k110, i111)?;
    Ok((r48, r49, r50))
}

/// Builds the whole family from the quadrature inputs `I_000`, `K_110`
/// (cyclics), `I_111` and `K_000`; `I_110`, `K_111` and `I_001` follow
/// from the identities.
///
/// `I_111` cannot be derived as well: writing each `I_001` through the
/// solved cyclic relation and substituting into the `W_11` expansion
/// cancels `I_111` identically, so that expansion is a check on `K_110`.
pub fn family_from_inputs(
    params: &TripleParams,
    i000: Entry,
    k110: [Entry; 3],
    i111: Entry,
    k000: Entry,
) -> Result<TripleFamilyValues> {
    let (a, b, c) = params.scales();
    let rot1 = params.rotate();
    let rot2 = rot1.rotate();
    let i110 = [
        i110_from_i000(params, i000.value)?,
        i110_from_i000(&rot1, i000.value)?,
        i110_from_i000(&rot2, i000.value)?,
    ];
    let i001 = i001_cyclics_from_k110(params, values(&k110), i111.value)?;

    // error bars: the inputs' errors scaled by the size of their coefficients
    let ratio = |s: [f64; 3]| (s[0] * s[0] + s[1] * s[1] - s[2] * s[2]).abs() / (2.0 * s[0] * s[1]);
    let kerr = k110.iter().fold(0.0f64, |m, e| m.max(e.abs_err));
    let i001_err = |s: [f64; 3]| (kerr * (s[0] + s[1] + s[2])) / (2.0 * s[0] * s[1]) + i111.abs_err * ratio(s);
    Ok(TripleFamilyValues {
        i000,
        i110: [
            Entry::derived(i110[0], i000.abs_err * ratio([a, b, c])),
            Entry::derived(i110[1], i000.abs_err * ratio([b, c, a])),
            Entry::derived(i110[2], i000.abs_err * ratio([c, a, b])),
        ],
        i001: [
            Entry::derived(i001[0], i001_err([a, b, c])),
            Entry::derived(i001[1], i001_err([b, c, a])),
            Entry::derived(i001[2], i001_err([c, a, b])),
        ],
        i111,
        k110,
        k111: Entry::derived(
            k111_from_i000(params, i000.value)?,
            i000.abs_err * triangle_discriminant(a, b, c).abs() / (4.0 * a * b * c),
        ),
        k000,
    })
}

/// Family from quadrature `I_000`, `K_110`, `I_111`, `K_000` plus the identities.
pub fn family_by_identities(params: &TripleParams, opts: &Options) -> Result<TripleFamilyValues> {
    let rot = [*params, params.rotate(), params.rotate().rotate()];
    let k110 = [
        Entry::quad(rot[0].integrate([1, 1, 0], 0, opts)?),
        Entry::quad(rot[1].integrate([1, 1, 0], 0, opts)?),
        Entry::quad(rot[2].integrate([1, 1, 0], 0, opts)?),
    ];
    family_from_inputs(
        params,
        Entry::quad(params.integrate([0, 0, 0], 1, opts)?),
        k110,
        Entry::quad(params.integrate([1, 1, 1], 1, opts)?),
        Entry::quad(params.integrate([0, 0, 0], 0, opts)?),
    )
}

/// Finite-difference residuals of the scale-derivative relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffResiduals {
    /// `(1/s)∂_s(s ∂_s I_000) + ∫x³Z_0Z_0Z_0` for `s = α, β, γ`.
    pub second_order: [f64; 3],
    /// `∂_β I_000 + (1/α)∂_α(α I_110^{αβγ})` and the same with `α ↔ β`.
    pub first_order: [f64; 2],
}

impl DiffResiduals {
    pub fn max_abs(&self) -> f64 {
        self.second_order
            .iter()
            .chain(&self.first_order)
            .fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Richardson combination `(4 r(h/2) − r(h)) / 3` of two step sizes.
    pub fn richardson(coarse: &Self, fine: &Self) -> Self {
        let f = |c: f64, f: f64| (4.0 * f - c) / 3.0;
        DiffResiduals {
            second_order: std::array::from_fn(|i| f(coarse.second_order[i], fine.second_order[i])),
            first_order: std::array::from_fn(|i| f(coarse.first_order[i], fine.first_order[i])),
        }
    }
}

fn with_scale(params: &TripleParams, leg: usize, scale: f64) -> TripleParams {
    let mut p = *params;
    p.legs[leg].scale = scale;
    p
}

/// Signed residuals of the scale-derivative relations by central
/// differences of step `h` on quadrature values.
pub fn diff_relations(params: &TripleParams, h: f64, opts: &Options) -> Result<DiffResiduals> {
    let (a, b, c) = params.scales();
    let min = 1e-7 * a.max(b).max(c);
    if !(h >= min) {
        return Err(Error::StepTooSmall { h, min });
    }
    let i000 = |p: &TripleParams| -> Result<f64> { Ok(p.integrate([0, 0, 0], 1, opts)?.value) };
    let centre = i000(params)?;
    let x3 = params.integrate([0, 0, 0], 3, opts)?.value;

    let mut second_order = [0.0; 3];
    let mut first_deriv = [0.0; 3];
    for leg in 0..3 {
        let s = params.legs[leg].scale;
        let up = i000(&with_scale(params, leg, s + h))?;
        let dn = i000(&with_scale(params, leg, s - h))?;
        let d1 = (up - dn) / (2.0 * h);
        let d2 = (up - 2.0 * centre + dn) / (h * h);
        first_deriv[leg] = d1;
        second_order[leg] = d2 + d1 / s + x3;
    }

    // (1/s)∂_s(s I_110) for the leg `leg` (I_110 taken with legs 0, 1 as the order-1 factors)
    let weighted = |leg: usize| -> Result<f64> {
        let s = params.legs[leg].scale;
        let up = (s + h) * with_scale(params, leg, s + h).integrate([1, 1, 0], 1, opts)?.value;
        let dn = (s - h) * with_scale(params, leg, s - h).integrate([1, 1, 0], 1, opts)?.value;
        Ok((up - dn) / (2.0 * h) / s)
    };
    let first_order = [first_deriv[1] + weighted(0)?, first_deriv[0] + weighted(1)?];
    Ok(DiffResiduals {
        second_order,
        first_order,
    })
}

/// Maximum absolute residuals `(second-order relations, first relation,
/// second relation)` at step `h`.
pub fn diff_relations_residual(params: &TripleParams, h: f64) -> Result<(f64, f64, f64)> {
    let r = diff_relations(params, h, &Options::default())?;
    let so = r.second_order.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((so, r.first_order[0].abs(), r.first_order[1].abs()))
}

/// `F(α, β, γ) = 2α(β² + γ² − α²) / ((α²+β²−γ²)² − 4α²β²)`.
pub fn ode_f(a: f64, b: f64, c: f64) -> Result<f64> {
    let den = triangle_discriminant(a, b, c);
    let s = a * a + b * b;
    if den.abs() < 1e-8 * s * s {
        return Err(Error::Resonant { denominator: den });
    }
    Ok(2.0 * a * (b * b + c * c - a * a) / den)
}

/// Point value of `G(α, β, γ, x)` with `s = α² + β² − γ²`:
/// `G · ((α²+β²−γ²)² − 4α²β²) = sγ x²Z_1(α)Z_0(β)Z_1(γ) + α(α²−β²−γ²) x²Z_0Z_0Z_0
///   + β(α²−β²+γ²) x²Z_1(α)Z_1(β)Z_0(γ) − 2αβγ x²Z_0(α)Z_1(β)Z_1(γ)`.
pub fn ode_g_point(legs: &[Leg; 3], x: f64) -> Result<f64> {
    let (a, b, c) = (legs[0].scale, legs[1].scale, legs[2].scale);
    let den = triangle_discriminant(a, b, c);
    let s2 = a * a + b * b;
    if den.abs() < 1e-8 * s2 * s2 {
        return Err(Error::Resonant { denominator: den });
    }
    let (a0, a1) = z01(legs[0].sol, a, x)?;
    let (b0, b1) = z01(legs[1].sol, b, x)?;
    let (c0, c1) = z01(legs[2].sol, c, x)?;
    let s = a * a + b * b - c * c;
    let x2 = x * x;
    let num = s * c * x2 * a1 * b0 * c1 + a * (a * a - b * b - c * c) * x2 * a0 * b0 * c0
        + b * (a * a - b * b + c * c) * x2 * a1 * b1 * c0
        - 2.0 * a * b * c * x2 * a0 * b1 * c1;
    Ok(num / den)
}

/// `(F, G(x1) − G(x0))`, the coefficients of the first-order scale ODE
/// `∂_α I_000 − F I_000 = G` for the definite integral.
pub fn ode_rhs_eval(params: &TripleParams) -> Result<(f64, f64)> {
    let (a, b, c) = params.scales();
    let f = ode_f(a, b, c)?;
    let g = ode_g_point(&params.legs, params.x1)? - ode_g_point(&params.legs, params.x0)?;
    Ok((f, g))
}

/// `|∂_α I_000 − F I_000 − G|` with the derivative by central differences.
pub fn ode_residual(params: &TripleParams, h: f64) -> Result<f64> {
    let (a, b, c) = params.scales();
    let min = 1e-7 * a.max(b).max(c);
    if !(h >= min) {
        return Err(Error::StepTooSmall { h, min });
    }
    let opts = Options::default();
    let i = |p: &TripleParams| -> Result<f64> { Ok(p.integrate([0, 0, 0], 1, &opts)?.value) };
    let d = (i(&with_scale(params, 0, a + h))? - i(&with_scale(params, 0, a - h))?) / (2.0 * h);
    let (f, g) = ode_rhs_eval(params)?;
    Ok((d - f * i(params)? - g).abs())
}

fn zeros3(q: u32, m: u32, n: u32, p: u32) -> Result<(f64, f64, f64)> {
    if q > 1 {
        return Err(Error::UnsupportedOrder(q as i32));
    }
    if m == 0 || n == 0 || p == 0 {
        return Err(Error::InvalidArgument("zero indices start at 1".into()));
    }
    Ok((zero(q, m), zero(q, n), zero(q, p)))
}

/// Parameters of the unit-interval integrals with scales at zeros of `J_q`.
pub fn unit_params(q: u32, m: u32, n: u32, p: u32) -> Result<TripleParams> {
    let (a, b, c) = zeros3(q, m, n, p)?;
    TripleParams::j_only(a, b, c, 0.0, 1.0)
}

/// `qC_110^{mnp}` from `qC_000^{mnp}`; the boundary bracket vanishes at
/// `x = 1` for zeros of either `J_0` or `J_1`.
pub fn c110_from_c000(q: u32, m: u32, n: u32, p: u32, c000: f64) -> Result<f64> {
    let (a, b, c) = zeros3(q, m, n, p)?;
    Ok(c000 * (a * a + b * b - c * c) / (2.0 * a * b))
}

/// `qD_111^{mnp}` from `qC_000^{mnp}`. For `q = 1` the boundary part
/// vanishes; for `q = 0` the term `−½J_1(j_m)J_1(j_n)J_1(j_p)` survives and
/// is included.
pub fn d111_from_c000(q: u32, m: u32, n: u32, p: u32, c000: f64) -> Result<f64> {
    let (a, b, c) = zeros3(q, m, n, p)?;
    let bracket = d111_boundary_term(q, m, n, p)?;
    Ok(bracket - c000 * triangle_discriminant(a, b, c) / (4.0 * a * b * c))
}

/// Boundary part of the `C_110` relation over `[0, 1]`; zero up to
/// rounding of the tabulated zeros.
pub fn c110_boundary_term(q: u32, m: u32, n: u32, p: u32) -> Result<f64> {
    i110_boundary(&unit_params(q, m, n, p)?)
}

/// Boundary part of the `D_111` relation over `[0, 1]`.
pub fn d111_boundary_term(q: u32, m: u32, n: u32, p: u32) -> Result<f64> {
    let params = unit_params(q, m, n, p)?;
    k111_boundary(&params)
}
