//! Transition matrices of Dehn-twist products on curve chains.
//!
//! Measures are row vectors indexed by the curves of a [`CurveSystem`]. A
//! twist of power `k` about a curve `t` adds `|k| · i(t, m) · μ_m` to `μ_t`
//! for every curve `m` meeting `t`; the sign of `k` only chooses the
//! smoothing, so every transition matrix is nonnegative. Maps act on the
//! right (`μ ↦ μ M`), so a product of twists is the matrix product taken in
//! the order the twists are applied. This is [`CONVENTION`]; it is the only
//! one of the four orderings that reproduces the published matrix for
//! `τ_B ∘ τ_A^{-i} ∘ τ_c`.

use std::fmt;

use num_bigint::BigUint;

use crate::chains::{build_base_chain, lift_chain, Color, CurveChain, CurveSystem, LiftedChain};
use crate::error::{Error, Result};
use crate::matrix::TransitionMatrix;
use crate::surfaces::RationalRay;

/// How a list of elementary matrices is turned into the matrix of a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Row vectors, factors multiplied in application order.
    RowActionApplicationOrder,
    /// Row vectors, factors multiplied in written (`∘`) order.
    RowActionWrittenOrder,
    /// Column vectors (transposed factors), multiplied in written order.
    ColumnActionWrittenOrder,
    /// Column vectors (transposed factors), multiplied in application order.
    ColumnActionApplicationOrder,
}

pub const CONVENTION: Convention = Convention::RowActionApplicationOrder;

impl Convention {
    pub const ALL: [Convention; 4] = [
        Convention::RowActionApplicationOrder,
        Convention::RowActionWrittenOrder,
        Convention::ColumnActionWrittenOrder,
        Convention::ColumnActionApplicationOrder,
    ];

    /// Multiply row-action elementary matrices listed in application order.
    pub fn realize(self, applied: &[TransitionMatrix]) -> Result<TransitionMatrix> {
        let (transpose, reverse) = match self {
            Convention::RowActionApplicationOrder => (false, false),
            Convention::RowActionWrittenOrder => (false, true),
            Convention::ColumnActionWrittenOrder => (true, true),
            Convention::ColumnActionApplicationOrder => (true, false),
        };
        let mut factors: Vec<TransitionMatrix> = if transpose {
            applied.iter().map(TransitionMatrix::transpose).collect()
        } else {
            applied.to_vec()
        };
        if reverse {
            factors.reverse();
        }
        product(&factors)
    }
}

fn product(factors: &[TransitionMatrix]) -> Result<TransitionMatrix> {
    let mut it = factors.iter();
    let Some(first) = it.next() else {
        return Err(Error::InvalidArgument(
            "empty product has no dimension".into(),
        ));
    };
    it.try_fold(first.clone(), |acc, m| acc.mul(m))
}

/// One factor `τ_target^power` of a twist word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistFactor {
    pub label: String,
    pub curves: Vec<usize>,
    pub power: i64,
}

/// A product of multitwists, optionally followed by the deck rotation.
/// Factors are stored in application order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwistWord {
    factors: Vec<TwistFactor>,
    rotation: bool,
}

impl TwistWord {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a twist applied after everything already in the word.
    pub fn then(mut self, label: impl Into<String>, curves: Vec<usize>, power: i64) -> Self {
        self.factors.push(TwistFactor {
            label: label.into(),
            curves,
            power,
        });
        self
    }

    /// Finish with the deck rotation.
    pub fn then_rotate(mut self) -> Self {
        self.rotation = true;
        self
    }

    pub fn factors(&self) -> &[TwistFactor] {
        &self.factors
    }

    pub fn has_rotation(&self) -> bool {
        self.rotation
    }
}

/// Written in composition order, rightmost applied first.
impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rotation {
            parts.push("ρ".into());
        }
        for factor in self.factors.iter().rev() {
            if factor.power == 1 {
                parts.push(format!("τ_{}", factor.label));
            } else {
                parts.push(format!("τ_{}^{}", factor.label, factor.power));
            }
        }
        if parts.is_empty() {
            return write!(f, "id");
        }
        write!(f, "{}", parts.join(" ∘ "))
    }
}

/// Matrix of the multitwist `τ_{t_1 ∪ … ∪ t_r}^power` about pairwise
/// disjoint curves.
pub fn elementary_twist_matrix<S: CurveSystem>(
    system: &S,
    targets: &[usize],
    power: i64,
) -> Result<TransitionMatrix> {
    if power == 0 {
        return Err(Error::InvalidArgument("twist power must be nonzero".into()));
    }
    let dim = system.curve_count();
    if let Some(&bad) = targets.iter().find(|&&t| t >= dim) {
        return Err(Error::InvalidArgument(format!(
            "curve {bad} is not in a system of {dim} curves"
        )));
    }
    for (x, &a) in targets.iter().enumerate() {
        for &b in &targets[x + 1..] {
            if a == b || system.intersection(a, b) > 0 {
                return Err(Error::NotMulticurve(a, b));
            }
        }
    }
    let magnitude = power.unsigned_abs();
    let mut m = TransitionMatrix::identity(dim);
    for &t in targets {
        for (nb, w) in system.neighbors(t) {
            m.add_to(nb, t, magnitude * w as u64);
        }
    }
    Ok(m)
}

/// Combine matrices listed in `∘` order (leftmost applied last) into the
/// matrix of the composite under [`CONVENTION`]. The empty list has no
/// dimension and is rejected; use [`TransitionMatrix::identity`].
pub fn compose(mats: &[TransitionMatrix]) -> Result<TransitionMatrix> {
    if let Some(first) = mats.first() {
        if let Some(bad) = mats.iter().find(|m| m.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                left: first.dim(),
                right: bad.dim(),
            });
        }
    }
    let applied: Vec<TransitionMatrix> = mats.iter().rev().cloned().collect();
    let label: Vec<&str> = mats.iter().map(TransitionMatrix::provenance).collect();
    Ok(CONVENTION
        .realize(&applied)?
        .with_provenance(label.join(" ∘ ")))
}

/// Elementary matrices of a word, in application order.
pub fn word_factors<S: CurveSystem>(system: &S, word: &TwistWord) -> Result<Vec<TransitionMatrix>> {
    word.factors
        .iter()
        .map(|f| {
            Ok(elementary_twist_matrix(system, &f.curves, f.power)?
                .with_provenance(format!("τ_{}^{}", f.label, f.power)))
        })
        .collect()
}

/// Matrix of a twist word on a chain (no rotation allowed).
pub fn word_matrix(chain: &CurveChain, word: &TwistWord) -> Result<TransitionMatrix> {
    if word.rotation {
        return Err(Error::InvalidArgument(
            "a base chain has no deck rotation".into(),
        ));
    }
    let mut applied = word_factors(chain, word)?;
    if applied.is_empty() {
        applied.push(TransitionMatrix::identity(chain.len()));
    }
    Ok(CONVENTION
        .realize(&applied)?
        .with_provenance(word.to_string()))
}

/// `τ_B ∘ τ_A^{-i} ∘ τ_c` on a chain.
pub fn base_word(chain: &CurveChain, i: u64) -> TwistWord {
    TwistWord::new()
        .then("c", chain.color_class(Color::C), 1)
        .then("A", chain.color_class(Color::A), -(i as i64))
        .then("B", chain.color_class(Color::B), 1)
}

pub fn transition_matrix_for_chain(chain: &CurveChain, i: u64) -> Result<TransitionMatrix> {
    if i == 0 {
        return Err(Error::InvalidArgument(
            "twist exponent i must be at least 1".into(),
        ));
    }
    word_matrix(chain, &base_word(chain, i))
}

/// The `(2p+q)`-dimensional transition matrix of `τ_B ∘ τ_A^{-i} ∘ τ_c` on
/// the default chain for `ray`.
pub fn transition_matrix_base(ray: &RationalRay, i: u64) -> Result<TransitionMatrix> {
    transition_matrix_for_chain(&build_base_chain(ray, None)?, i)
}

/// Twist block `τ_{B_j} ∘ τ_{A_j}^{-i} ∘ τ_{c_j}` on one sheet of a lift.
pub fn sheet_word(lifted: &LiftedChain, sheet: usize, i: u64) -> TwistWord {
    let j = sheet + 1;
    TwistWord::new()
        .then(format!("c{j}"), lifted.sheet_class(sheet, Color::C), 1)
        .then(
            format!("A{j}"),
            lifted.sheet_class(sheet, Color::A),
            -(i as i64),
        )
        .then(format!("B{j}"), lifted.sheet_class(sheet, Color::B), 1)
}

fn rotation_matrix(lifted: &LiftedChain) -> Result<TransitionMatrix> {
    let perm: Vec<usize> = (0..lifted.curve_count())
        .map(|k| lifted.index_of(lifted.rotate(lifted.curve_at(k))))
        .collect();
    TransitionMatrix::permutation(&perm)
}

/// Root map `ρ ∘ τ_{B_1} ∘ τ_{A_1}^{-i} ∘ τ_{c_1}` on a lifted chain.
pub fn root_matrix_for_lift(lifted: &LiftedChain, i: u64) -> Result<TransitionMatrix> {
    let word = sheet_word(lifted, 0, i).then_rotate();
    let mut applied = word_factors(lifted, &word)?;
    applied.push(rotation_matrix(lifted)?);
    Ok(CONVENTION
        .realize(&applied)?
        .with_provenance(word.to_string()))
}

/// Matrix of the `i`-th root of the lifted map on the degree-`i` cover,
/// dimension `i·(2p+q)`.
pub fn lifted_root_matrix(ray: &RationalRay, i: u64) -> Result<TransitionMatrix> {
    if i < 2 {
        return Err(Error::InvalidArgument(format!(
            "cover degree must be at least 2, got {i}"
        )));
    }
    let lifted = lift_chain(&build_base_chain(ray, None)?, i as usize)?;
    root_matrix_for_lift(&lifted, i)
}

/// The full lifted map `T_2 ∘ T_3 ∘ … ∘ T_i ∘ T_1`, where `T_j` is the twist
/// block on sheet `j`.
pub fn full_lift_matrix(lifted: &LiftedChain, i: u64) -> Result<TransitionMatrix> {
    let sheets = lifted.sheets();
    let order = std::iter::once(0).chain((1..sheets).rev());
    let mut applied = Vec::new();
    for sheet in order {
        applied.extend(word_factors(lifted, &sheet_word(lifted, sheet, i))?);
    }
    Ok(CONVENTION
        .realize(&applied)?
        .with_provenance("lifted full map"))
}

pub fn max_column_sum(m: &TransitionMatrix) -> BigUint {
    m.column_sums().into_iter().max().unwrap_or_default()
}

pub fn max_row_sum(m: &TransitionMatrix) -> BigUint {
    m.row_sums().into_iter().max().unwrap_or_default()
}

/// `16i + 9`, the claimed column-sum bound for the base matrix.
pub fn column_sum_bound(i: u64) -> u64 {
    16 * i + 9
}

/// Largest column sum of `m`, or a falsification error if it exceeds
/// `16i + 9`.
pub fn check_column_sum_bound(m: &TransitionMatrix, i: u64) -> Result<BigUint> {
    let sum = max_column_sum(m);
    if sum > BigUint::from(column_sum_bound(i)) {
        return Err(Error::Falsified(format!(
            "max column sum {sum} exceeds 16i+9 = {} for {}",
            column_sum_bound(i),
            m.provenance()
        )));
    }
    Ok(sum)
}
