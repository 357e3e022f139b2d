//! Dense square matrices of nonnegative big integers.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A transition matrix on train-track measures.
///
/// Entries are stored row-major. `provenance` records the twist word and
/// curve system that produced the matrix, for display only; it does not
/// take part in equality.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    dim: usize,
    entries: Vec<BigUint>,
    provenance: String,
}

impl PartialEq for TransitionMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

impl Eq for TransitionMatrix {}

impl TransitionMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.entries[k * dim + k] = BigUint::one();
        }
        m.provenance = "id".into();
        m
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![BigUint::zero(); dim * dim],
            provenance: String::new(),
        }
    }

    pub fn from_rows<T: Into<BigUint> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(Self {
            dim,
            entries,
            provenance: String::new(),
        })
    }

    /// Permutation matrix sending basis vector `k` to `perm[k]` under the
    /// row-vector action: entry `(k, perm[k])` is 1.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        let mut seen = vec![false; dim];
        let mut m = Self::zeros(dim);
        for (k, &target) in perm.iter().enumerate() {
            if target >= dim || std::mem::replace(&mut seen[target], true) {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            m.entries[k * dim + target] = BigUint::one();
        }
        m.provenance = "perm".into();
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn get(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigUint) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: u64) {
        self.entries[row * self.dim + col] += value;
    }

    pub fn row(&self, row: usize) -> &[BigUint] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigUint]> {
        self.entries.chunks(self.dim.max(1)).take(self.dim)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.entries[c * d + r] = self.entries[r * d + c].clone();
            }
        }
        out.provenance = format!("({})^T", self.provenance);
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let d = self.dim;
        let entries: Vec<BigUint> = (0..d)
            .into_par_iter()
            .flat_map_iter(|r| {
                let lhs_row = self.row(r);
                let mut acc = vec![BigUint::zero(); d];
                for (k, a) in lhs_row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (slot, b) in acc.iter_mut().zip(rhs.row(k)) {
                        if !b.is_zero() {
                            *slot += a * b;
                        }
                    }
                }
                acc
            })
            .collect();
        Ok(Self {
            dim: d,
            entries,
            provenance: String::new(),
        })
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        acc
    }

    /// `M v` for a column vector.
    pub fn mul_vec(&self, v: &[BigUint]) -> Vec<BigUint> {
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(BigUint::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn column_sums(&self) -> Vec<BigUint> {
        let mut sums = vec![BigUint::zero(); self.dim];
        for row in self.rows() {
            for (s, x) in sums.iter_mut().zip(row) {
                *s += x;
            }
        }
        sums
    }

    pub fn row_sums(&self) -> Vec<BigUint> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    /// True if every entry is nonzero.
    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|x| !x.is_zero())
    }

    /// Entrywise `self >= other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries.iter().zip(&other.entries).all(|(a, b)| a >= b)
    }

    pub fn max_entry_bits(&self) -> u64 {
        self.entries.iter().map(BigUint::bits).max().unwrap_or(0)
    }

    pub fn to_document(&self) -> MatrixDocument {
        MatrixDocument {
            dimension: self.dim,
            entries: self
                .rows()
                .map(|r| r.iter().map(|x| x.to_str_radix(10)).collect())
                .collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_document(doc: &MatrixDocument) -> Result<Self> {
        if doc.entries.len() != doc.dimension {
            return Err(Error::DimensionMismatch {
                left: doc.dimension,
                right: doc.entries.len(),
            });
        }
        let mut rows = Vec::with_capacity(doc.dimension);
        for row in &doc.entries {
            let parsed = row
                .iter()
                .map(|s| {
                    BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "matrix entry {s:?} is not a decimal integer"
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(parsed);
        }
        Ok(Self::from_rows(&rows)?.with_provenance(doc.provenance.clone()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MatrixDocument = serde_json::from_str(s)
            .map_err(|e| Error::InvalidArgument(format!("bad matrix JSON: {e}")))?;
        Self::from_document(&doc)
    }

    /// Small matrices as `u64` rows, for tests and bindings.
    pub fn to_u64_rows(&self) -> Option<Vec<Vec<u64>>> {
        self.rows()
            .map(|r| r.iter().map(|x| x.to_u64()).collect())
            .collect()
    }
}

/// JSON form: dimension plus row-major entries as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub dimension: usize,
    pub entries: Vec<Vec<String>>,
    #[serde(default)]
    pub provenance: String,
}

/// Right-aligned grid for human inspection.
impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|x| x.to_str_radix(10)).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for row in cells.chunks(self.dim.max(1)).take(self.dim) {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_products() {
        let m = TransitionMatrix::from_rows(&[vec![1u32, 2], vec![3, 4]]).unwrap();
        let i = TransitionMatrix::identity(2);
        assert_eq!(i.mul(&m).unwrap(), m);
        assert_eq!(m.mul(&i).unwrap(), m);
        let sq = m.mul(&m).unwrap();
        assert_eq!(sq.to_u64_rows().unwrap(), vec![vec![7, 10], vec![15, 22]]);
        assert_eq!(m.pow(2), sq);
        assert_eq!(m.pow(0), i);
        assert!(TransitionMatrix::identity(3).mul(&m).is_err());
    }

    #[test]
    fn sums_and_predicates() {
        let m = TransitionMatrix::from_rows(&[vec![1u32, 0], vec![3, 4]]).unwrap();
        assert_eq!(
            m.column_sums(),
            vec![BigUint::from(4u32), BigUint::from(4u32)]
        );
        assert_eq!(m.row_sums(), vec![BigUint::from(1u32), BigUint::from(7u32)]);
        assert!(!m.is_positive());
        assert!(m.dominates(&TransitionMatrix::identity(2)));
        assert!(TransitionMatrix::from_rows(&[vec![1u32, 2]]).is_err());
    }

    #[test]
    fn permutations() {
        let p = TransitionMatrix::permutation(&[1, 2, 0]).unwrap();
        assert_eq!(p.pow(3), TransitionMatrix::identity(3));
        assert!(TransitionMatrix::permutation(&[0, 0, 1]).is_err());
    }

    #[test]
    fn json_round_trip_with_big_entries() {
        let big = BigUint::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let mut m = TransitionMatrix::identity(3).with_provenance("t");
        m.set(0, 2, big);
        let back = TransitionMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.provenance(), "t");
        assert!(TransitionMatrix::from_json(r#"{"dimension":1,"entries":[["x"]]}"#).is_err());
    }

    #[test]
    fn text_grid_is_aligned() {
        let m = TransitionMatrix::from_rows(&[vec![1u32, 10], vec![100, 1]]).unwrap();
        assert_eq!(m.to_string(), "  1  10\n100   1\n");
    }
}
