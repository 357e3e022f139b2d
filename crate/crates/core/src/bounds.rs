//! Upper and lower bounds on the coarse Lipschitz constant `K` of the
//! systole map, and the table that puts them side by side.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixing::mixing_number;
use crate::round;
use crate::spectral::{
    root_log_dilatation_closed_form, spectral_radius_with, SpectralOptions, ROOT_BOUND_SLACK,
};
use crate::surfaces::{
    cover_invariants, ray_collar_constant, CollarFamily, RationalRay, RayPoint, Surface,
};
use crate::twist::lifted_root_matrix;

/// Additive constant accompanying [`k_upper_bound`].
pub const K_UPPER_ADDITIVE: f64 = 2.0;

/// Multiplicative coefficient `2 / log(|χ| / N)`, rounded up.
pub fn k_upper_bound(s: &Surface, n: f64) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "collar constant must be positive, got {n}"
        )));
    }
    let abs_chi = s.abs_euler();
    let ratio = abs_chi as f64 / n;
    if !(ratio > 1.0) {
        return Err(Error::VacuousBound { abs_chi, n });
    }
    Ok(round::up(2.0 / ratio.ln()))
}

/// Lower bound on the Teichmüller distance from the length of one curve
/// measured on both surfaces: `max(0, log(lY / lX))`.
pub fn wolpert_distance_lower_bound(l_x: f64, l_y: f64) -> Result<f64> {
    if !(l_x > 0.0 && l_y > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "curve lengths must be positive, got {l_x} and {l_y}"
        )));
    }
    Ok(round::down((l_y / l_x).ln()).max(0.0))
}

/// True when `N e^{dT} lX / lY <= |χ|`, which bounds the intersection
/// number of the two systoles below `|χ|` so they cannot fill.
///
/// Requires `lX <= lY` and `dT <= log(|χ| / N)`.
pub fn nonfilling_check(l_x: f64, l_y: f64, d_t: f64, s: &Surface, n: f64) -> Result<bool> {
    if !(l_x > 0.0 && l_y > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "curve lengths must be positive, got {l_x} and {l_y}"
        )));
    }
    if !(n > 0.0) || d_t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need N > 0 and dT >= 0, got N = {n}, dT = {d_t}"
        )));
    }
    if l_x > l_y {
        return Err(Error::OutOfDomain(format!("lX = {l_x} exceeds lY = {l_y}")));
    }
    let abs_chi = s.abs_euler() as f64;
    let radius = (abs_chi / n).ln();
    if d_t > radius * (1.0 + round::COMPARISON_TOLERANCE) {
        return Err(Error::OutOfDomain(format!(
            "dT = {d_t} exceeds log(|chi|/N) = {radius}"
        )));
    }
    Ok(n * d_t.exp() * l_x / l_y <= abs_chi * (1.0 + round::COMPARISON_TOLERANCE))
}

/// `1 / ((2 + 2p + q) log(16i + 9))`.
pub fn k_lower_closed_form(ray: &RationalRay, i: u64) -> f64 {
    let bound = (16 * i + 9) as f64;
    1.0 / (ray.mixing_cap(1) as f64 * bound.ln())
}

/// Inputs to a ray lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerInputs {
    /// `log(16i + 9) / i`, the denominator used.
    pub log_dilatation_upper: f64,
    /// Certified upper bound on the Perron root of the root matrix.
    pub lambda_upper: f64,
    /// True if `log(lambda_upper)` stays within the closed form.
    pub dilatation_certified: bool,
    pub mixing_number: Option<usize>,
    pub mixing_cap: usize,
    /// `1/r` with `r` the mixing number, or the cap when none was found.
    pub translation_lower_bound: f64,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayLowerBound {
    pub value: f64,
    pub closed_form: f64,
    /// Mixing number within the cap and dilatation within the closed form.
    pub certified: bool,
    pub inputs: LowerInputs,
}

/// Lower bound on `K` along a ray from the root map at index `i`.
pub fn k_lower_bound_ray(ray: &RationalRay, i: u64) -> Result<RayLowerBound> {
    if i < 2 {
        return Err(Error::InvalidArgument(format!(
            "cover degree must be at least 2, got {i}"
        )));
    }
    let m = lifted_root_matrix(ray, i)?;
    let cap = ray.mixing_cap(i);
    let mixing = mixing_number(&m, cap)?;

    let log_bound = root_log_dilatation_closed_form(i);
    // Only the inequality is needed, so stop as soon as it is certified.
    let threshold = (log_bound + ROOT_BOUND_SLACK).exp();
    let opts = SpectralOptions {
        stop_below: Some(threshold),
        ..Default::default()
    };
    let spectral = spectral_radius_with(&m, &opts)?;
    let dilatation_certified = round::up(spectral.upper.ln()) <= log_bound + ROOT_BOUND_SLACK;

    let r = mixing.mixing_number.unwrap_or(cap);
    let translation = 1.0 / r as f64;
    Ok(RayLowerBound {
        value: round::down(translation / log_bound),
        closed_form: k_lower_closed_form(ray, i),
        certified: mixing.mixing_number.is_some() && dilatation_certified,
        inputs: LowerInputs {
            log_dilatation_upper: log_bound,
            lambda_upper: spectral.upper,
            dilatation_certified,
            mixing_number: mixing.mixing_number,
            mixing_cap: cap,
            translation_lower_bound: translation,
            dimension: m.dim(),
        },
    })
}

/// `1 / (C1 C2 log|χ|)`. Conditional on the cited constants.
pub fn k_lower_bound_fixed_genus(g: u64, n: u64, c1: f64, c2: f64) -> Result<f64> {
    if g < 2 {
        return Err(Error::OutOfDomain(format!(
            "fixed-genus bound needs g >= 2, got {g}"
        )));
    }
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "constants must be positive, got C1 = {c1}, C2 = {c2}"
        )));
    }
    let abs_chi = Surface::new(g, n)?.abs_euler();
    if abs_chi < 3 {
        return Err(Error::OutOfDomain(format!(
            "need |chi| >= 3, got {abs_chi}"
        )));
    }
    Ok(round::down(1.0 / (c1 * c2 * (abs_chi as f64).ln())))
}

/// A family of surfaces indexed by an integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TableFamily {
    /// Covers `S_{pi, qi}` indexed by `i`.
    Ray(RationalRay),
    /// `S_{g, n}` indexed by `n`, with the constants of the cited bounds.
    FixedGenus { genus: u64, c1: f64, c2: f64 },
}

impl TableFamily {
    pub fn collar_family(&self) -> CollarFamily {
        match *self {
            TableFamily::Ray(ray) => CollarFamily::Ray(ray),
            TableFamily::FixedGenus { genus, .. } => CollarFamily::FixedGenus(genus),
        }
    }

    pub fn surface(&self, index: u64) -> Result<Surface> {
        match *self {
            TableFamily::Ray(ray) => Ok(cover_invariants(&RayPoint::new(ray, index)?)),
            TableFamily::FixedGenus { genus, .. } => Surface::new(genus, index),
        }
    }
}

/// One row of the sandwich table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub index: u64,
    pub surface: Option<Surface>,
    pub abs_chi: Option<u64>,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "K_upper")]
    pub k_upper: Option<f64>,
    #[serde(rename = "K_upper_additive")]
    pub k_upper_additive: f64,
    #[serde(rename = "K_lower")]
    pub k_lower: Option<f64>,
    pub lower_inputs: Option<LowerInputs>,
    pub fixed_genus_constants: Option<(f64, f64)>,
    #[serde(rename = "K_upper_log_chi")]
    pub k_upper_log_chi: Option<f64>,
    #[serde(rename = "K_lower_log_chi")]
    pub k_lower_log_chi: Option<f64>,
    /// Both bounds present, the lower one from certified inputs, and in order.
    pub certified: bool,
    /// `ok`, or the reasons the row is incomplete, separated by `; `.
    pub status: String,
}

impl BoundsReport {
    fn empty(index: u64, n: f64) -> Self {
        Self {
            index,
            surface: None,
            abs_chi: None,
            n,
            k_upper: None,
            k_upper_additive: K_UPPER_ADDITIVE,
            k_lower: None,
            lower_inputs: None,
            fixed_genus_constants: None,
            k_upper_log_chi: None,
            k_lower_log_chi: None,
            certified: false,
            status: String::new(),
        }
    }

    /// True if the row contradicts `K_lower <= K_upper`.
    pub fn sandwich_violated(&self) -> bool {
        matches!((self.k_lower, self.k_upper), (Some(lo), Some(hi)) if lo > hi)
    }

    /// True if a computed quantity broke a claimed bound: the sandwich, the
    /// mixing cap, or the closed-form dilatation.
    pub fn is_falsification(&self) -> bool {
        self.sandwich_violated()
            || self
                .lower_inputs
                .as_ref()
                .is_some_and(|x| x.mixing_number.is_none() || !x.dilatation_certified)
    }
}

/// Both bounds for one member of a family.
pub fn bounds_report(family: &TableFamily, index: u64, n: f64) -> BoundsReport {
    let mut row = BoundsReport::empty(index, n);
    let mut notes = Vec::new();
    let s = match family.surface(index) {
        Ok(s) => s,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    let abs_chi = s.abs_euler();
    let log_chi = (abs_chi as f64).ln();
    row.surface = Some(s);
    row.abs_chi = Some(abs_chi);

    match k_upper_bound(&s, n) {
        Ok(k) => row.k_upper = Some(k),
        Err(e) => notes.push(format!("upper: {e}")),
    }

    let mut lower_certified = false;
    match *family {
        TableFamily::Ray(ray) => match k_lower_bound_ray(&ray, index) {
            Ok(lb) => {
                row.k_lower = Some(lb.value);
                lower_certified = lb.certified;
                if lb.inputs.mixing_number.is_none() {
                    notes.push(format!(
                        "lower: no mixing number within cap {}",
                        lb.inputs.mixing_cap
                    ));
                }
                if !lb.inputs.dilatation_certified {
                    notes.push("lower: dilatation exceeds log(16i+9)/i".into());
                }
                row.lower_inputs = Some(lb.inputs);
            }
            Err(e) => notes.push(format!("lower: {e}")),
        },
        TableFamily::FixedGenus { genus, c1, c2 } => {
            row.fixed_genus_constants = Some((c1, c2));
            match k_lower_bound_fixed_genus(genus, index, c1, c2) {
                Ok(k) => {
                    row.k_lower = Some(k);
                    notes.push("lower: conditional on cited constants".into());
                }
                Err(e) => notes.push(format!("lower: {e}")),
            }
        }
    }

    row.k_upper_log_chi = row.k_upper.map(|k| k * log_chi);
    row.k_lower_log_chi = row.k_lower.map(|k| k * log_chi);
    if row.sandwich_violated() {
        notes.push("sandwich violated: K_lower > K_upper".into());
    }
    row.certified = lower_certified && row.k_upper.is_some() && !row.sandwich_violated();
    row.status = if notes.is_empty() {
        "ok".into()
    } else {
        notes.join("; ")
    };
    row
}

/// Rows for every index, computed in parallel, in index order. `n_override`
/// replaces the family's collar constant.
pub fn sandwich_table(
    family: &TableFamily,
    indices: &[u64],
    n_override: Option<f64>,
) -> Result<Vec<BoundsReport>> {
    let n = match n_override {
        Some(n) if n > 0.0 => n,
        Some(n) => {
            return Err(Error::InvalidArgument(format!(
                "collar constant must be positive, got {n}"
            )))
        }
        None => ray_collar_constant(&family.collar_family())?,
    };
    Ok(indices
        .par_iter()
        .map(|&i| bounds_report(family, i, n))
        .collect())
}

/// Column order of [`to_csv`].
pub const CSV_HEADER: [&str; 12] = [
    "g",
    "n",
    "abs_chi",
    "N",
    "K_upper",
    "K_lower",
    "mixing_number",
    "lambda_upper",
    "K_upper_log_chi",
    "K_lower_log_chi",
    "certified",
    "status",
];

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with a fixed header and LF line endings; missing values are empty.
pub fn to_csv(rows: &[BoundsReport]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        let inputs = r.lower_inputs.as_ref();
        w.write_record([
            opt(r.surface.map(|s| s.genus())),
            opt(r.surface.map(|s| s.punctures())),
            opt(r.abs_chi),
            r.n.to_string(),
            opt(r.k_upper),
            opt(r.k_lower),
            opt(inputs.and_then(|x| x.mixing_number)),
            opt(inputs.map(|x| x.lambda_upper)),
            opt(r.k_upper_log_chi),
            opt(r.k_lower_log_chi),
            r.certified.to_string(),
            r.status.clone(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii fields")
}

pub fn to_json(rows: &[BoundsReport]) -> String {
    serde_json::to_string_pretty(rows).expect("plain data serializes") + "\n"
}

/// Which bound a plot file tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotSeries {
    Upper,
    Lower,
}

/// Two whitespace-separated columns `|χ|  K log|χ|`, skipping rows where
/// the bound is missing.
pub fn plot_data(rows: &[BoundsReport], series: PlotSeries) -> String {
    let mut out = String::new();
    for r in rows {
        let y = match series {
            PlotSeries::Upper => r.k_upper_log_chi,
            PlotSeries::Lower => r.k_lower_log_chi,
        };
        if let (Some(x), Some(y)) = (r.abs_chi, y) {
            writeln!(out, "{x} {y}").expect("string write");
        }
    }
    out
}

/// Ratio of the largest to the smallest value, if all are positive.
pub fn window_ratio(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for v in values {
        if !(v > 0.0) {
            return None;
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (hi > 0.0).then(|| hi / lo)
}
