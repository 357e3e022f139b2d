//! Certified enclosures of the Perron root of a nonnegative integer matrix.
//!
//! For any nonnegative `W` and any positive vector `v`,
//!
//! ```text
//! min_k (Wv)_k / v_k  <=  ρ(W)  <=  max_k (Wv)_k / v_k
//! ```
//!
//! The iteration keeps `v` as a positive integer vector, evaluates both
//! ratios exactly, and only rounds (outward) when converting to `f64`.
//! Because the bounds hold for every positive `v`, the vector may be
//! truncated between steps without affecting rigour. When progress stalls
//! the working matrix is squared, so the enclosure is on `ρ(M)^K` for some
//! power of two `K` and is converted back by a `K`-th root.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::TransitionMatrix;
use crate::round;
use crate::surfaces::RationalRay;
use crate::twist::{column_sum_bound, lifted_root_matrix, max_column_sum, max_row_sum};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Allowed excess of the computed log-dilatation over the closed-form bound.
pub const ROOT_BOUND_SLACK: f64 = 1e-6;

/// Bits kept in the iteration vector.
const VECTOR_BITS: u64 = 192;
/// Iterations between progress checks.
const CHECK_EVERY: usize = 32;
/// Do not square once entries are this large.
const MAX_SQUARING_BITS: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralResult {
    /// Certified lower bound on the Perron root.
    pub lower: f64,
    /// Certified upper bound on the Perron root.
    pub upper: f64,
    /// Matrix-vector products performed.
    pub iterations: usize,
    /// Power of the matrix the final enclosure was computed on.
    pub power: u64,
    /// False if the enclosure did not reach the tolerance within the cap;
    /// the bounds are still valid but not tight.
    pub converged: bool,
}

impl SpectralResult {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_squarings: u32,
    /// Stop as soon as the upper bound drops to this value.
    pub stop_below: Option<f64>,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: 200_000,
            max_squarings: 12,
            stop_below: None,
        }
    }
}

/// Enclose the Perron root of `m` to within `tol`.
pub fn spectral_radius(m: &TransitionMatrix, tol: f64) -> Result<SpectralResult> {
    spectral_radius_with(
        m,
        &SpectralOptions {
            tolerance: tol,
            ..Default::default()
        },
    )
}

/// An exact positive ratio `num / den`.
#[derive(Debug, Clone)]
struct Ratio {
    num: BigUint,
    den: BigUint,
}

impl Ratio {
    fn lt(&self, other: &Ratio) -> bool {
        &self.num * &other.den < &other.num * &self.den
    }

    /// Bounds on `log2(num/den)`; `None` for a zero numerator.
    fn log2_bounds(&self) -> Option<(f64, f64)> {
        if self.num.is_zero() {
            return None;
        }
        // Scale so the integer quotient carries about 62 bits.
        let shift = self.den.bits() as i64 - self.num.bits() as i64 + 62;
        let q = if shift >= 0 {
            (&self.num << shift as u64) / &self.den
        } else {
            &self.num / (&self.den << (-shift) as u64)
        };
        let q = q.to_u64().expect("quotient fits in 64 bits") as f64;
        let lo = round::down(round::down(q.log2()) - shift as f64);
        let hi = round::up(round::up((q + 1.0).log2()) - shift as f64);
        Some((lo, hi))
    }
}

/// Turn an enclosure of `ρ^power` into one of `ρ`.
fn root_bounds(lo: &Ratio, hi: &Ratio, power: u64) -> (f64, f64) {
    let k = power as f64;
    let lower = match lo.log2_bounds() {
        None => 0.0,
        Some((l, _)) => round::down((round::down(l / k)).exp2()),
    };
    let upper = match hi.log2_bounds() {
        None => 0.0,
        Some((_, h)) => round::up((round::up(h / k)).exp2()),
    };
    (lower.max(0.0), upper)
}

fn normalize(v: &mut [BigUint]) {
    let bits = v.iter().map(BigUint::bits).max().unwrap_or(0);
    if bits > VECTOR_BITS {
        let shift = bits - VECTOR_BITS;
        for x in v.iter_mut() {
            *x >>= shift;
            if x.is_zero() {
                *x = BigUint::one();
            }
        }
    }
}

pub fn spectral_radius_with(
    m: &TransitionMatrix,
    opts: &SpectralOptions,
) -> Result<SpectralResult> {
    if !(opts.tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            opts.tolerance
        )));
    }
    let d = m.dim();
    if d == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }

    let mut work = m.clone();
    let mut power: u64 = 1;
    let mut squarings = 0;
    let mut v = vec![BigUint::one(); d];
    // Best enclosure of ρ(M), across all powers used so far.
    let mut best = (0.0_f64, f64::INFINITY);
    let mut width_at_check = f64::INFINITY;
    let mut iterations = 0;

    loop {
        let w = work.mul_vec(&v);
        iterations += 1;

        let ratios: Vec<Ratio> = w
            .iter()
            .zip(&v)
            .map(|(a, b)| Ratio {
                num: a.clone(),
                den: b.clone(),
            })
            .collect();
        let mut lo = &ratios[0];
        let mut hi = &ratios[0];
        for r in &ratios[1..] {
            if r.lt(lo) {
                lo = r;
            }
            if hi.lt(r) {
                hi = r;
            }
        }
        let (lower, upper) = root_bounds(lo, hi, power);
        best = (best.0.max(lower), best.1.min(upper));

        let done = best.1 - best.0 <= opts.tolerance;
        let early = opts.stop_below.is_some_and(|t| best.1 <= t);
        if done || early || iterations >= opts.max_iterations {
            return Ok(SpectralResult {
                lower: best.0,
                upper: best.1,
                iterations,
                power,
                converged: done,
            });
        }

        // Next vector; a zero coordinate means (W + I)v keeps it positive.
        let has_zero = w.iter().any(BigUint::is_zero);
        v = if has_zero {
            w.into_iter().zip(&v).map(|(a, b)| a + b).collect()
        } else {
            w
        };
        normalize(&mut v);

        if iterations % CHECK_EVERY == 0 {
            let width = best.1 - best.0;
            let stalled = !(width < 0.5 * width_at_check);
            if stalled
                && squarings < opts.max_squarings
                && work.max_entry_bits() < MAX_SQUARING_BITS
            {
                work = work.mul(&work)?;
                power *= 2;
                squarings += 1;
            }
            width_at_check = width;
        }
    }
}

/// Interval for the Perron root from row and column sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerronSums {
    #[serde(serialize_with = "decimal")]
    pub min_column_sum: BigUint,
    #[serde(serialize_with = "decimal")]
    pub max_column_sum: BigUint,
    #[serde(serialize_with = "decimal")]
    pub min_row_sum: BigUint,
    #[serde(serialize_with = "decimal")]
    pub max_row_sum: BigUint,
}

fn decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

impl PerronSums {
    pub fn lower(&self) -> &BigUint {
        (&self.min_column_sum).max(&self.min_row_sum)
    }

    /// The smaller of the maximum row and column sums.
    pub fn upper(&self) -> &BigUint {
        (&self.max_column_sum).min(&self.max_row_sum)
    }
}

pub fn perron_sums(m: &TransitionMatrix) -> PerronSums {
    let cols = m.column_sums();
    let rows = m.row_sums();
    PerronSums {
        min_column_sum: cols.iter().min().cloned().unwrap_or_default(),
        max_column_sum: max_column_sum(m),
        min_row_sum: rows.iter().min().cloned().unwrap_or_default(),
        max_row_sum: max_row_sum(m),
    }
}

/// Closed-form and computed log-dilatation of the root map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootDilatation {
    pub index: u64,
    /// `log(16i + 9) / i`.
    pub closed_form: f64,
    pub computed: SpectralResult,
    /// `log` of the computed upper bound.
    pub computed_log_upper: f64,
    pub dimension: usize,
}

/// `log(16i + 9) / i`, rounded up.
pub fn root_log_dilatation_closed_form(i: u64) -> f64 {
    round::up((column_sum_bound(i) as f64).ln() / i as f64)
}

/// The closed-form log-dilatation bound for the root map, checked against
/// the computed spectral radius of [`lifted_root_matrix`].
pub fn root_dilatation_bound(ray: &RationalRay, i: u64) -> Result<RootDilatation> {
    root_dilatation_bound_with(ray, i, &SpectralOptions::default())
}

pub fn root_dilatation_bound_with(
    ray: &RationalRay,
    i: u64,
    opts: &SpectralOptions,
) -> Result<RootDilatation> {
    if i < 2 {
        return Err(Error::InvalidArgument(format!(
            "cover degree must be at least 2, got {i}"
        )));
    }
    let m = lifted_root_matrix(ray, i)?;
    let closed_form = root_log_dilatation_closed_form(i);
    let computed = spectral_radius_with(&m, opts)?;
    let computed_log_upper = round::up(computed.upper.ln());
    if computed_log_upper > closed_form + ROOT_BOUND_SLACK {
        return Err(Error::Falsified(format!(
            "root map for ray {ray}, i = {i}: log λ <= {computed_log_upper} exceeds log(16i+9)/i = {closed_form}; matrix {}",
            m.to_json()
        )));
    }
    Ok(RootDilatation {
        index: i,
        closed_form,
        computed,
        computed_log_upper,
        dimension: m.dim(),
    })
}
