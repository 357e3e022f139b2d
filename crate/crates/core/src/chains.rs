//! Curve systems carrying the twist maps: the building-block chain on
//! `S_{p,q+2}`, its lift to the cyclic covers, and the cell-count identity
//! behind the filling intersection bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surfaces::{RationalRay, Surface};

/// Intersection number of the first two curves in the default chain.
pub const DEFAULT_FIRST_INTERSECTION: u32 = 2;
/// Intersection number of every other adjacent pair in the default chain.
pub const DEFAULT_INTERSECTION: u32 = 1;
/// Intersection number where the end of one sheet's chain meets the start
/// of the next sheet's chain in a lift.
pub const DEFAULT_LINK_INTERSECTION: u32 = 1;

/// Colour classes of the chain. `C` is the single distinguished first
/// curve; `A` and `B` alternate after it and are each a multicurve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "c")]
    C,
    A,
    B,
}

impl Color {
    /// Colour of the curve at 0-based position `k` along a chain.
    pub fn at(k: usize) -> Color {
        match k {
            0 => Color::C,
            k if k % 2 == 1 => Color::A,
            _ => Color::B,
        }
    }
}

/// Anything the twist engine can act on: a finite set of curves with
/// symmetric intersection numbers between some pairs.
pub trait CurveSystem {
    fn curve_count(&self) -> usize;

    /// `(neighbour, intersection number)` for every curve meeting `k`.
    fn neighbors(&self, k: usize) -> Vec<(usize, u32)>;

    fn color(&self, k: usize) -> Color;

    fn intersection(&self, a: usize, b: usize) -> u32 {
        self.neighbors(a)
            .into_iter()
            .filter(|&(m, _)| m == b)
            .map(|(_, w)| w)
            .sum()
    }
}

/// An ordered chain `α_1 … α_m` where only consecutive curves meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveChain {
    intersections: Vec<u32>,
    ray: Option<RationalRay>,
}

impl CurveChain {
    /// A chain of `intersections.len() + 1` curves with the given adjacent
    /// intersection numbers, each of which must be 1 or 2.
    pub fn from_intersections(intersections: Vec<u32>) -> Result<Self> {
        if let Some((k, &w)) = intersections
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 1 && w != 2)
        {
            return Err(Error::InvalidArgument(format!(
                "intersection I_{{{},{}}} = {w} is not 1 or 2",
                k + 1,
                k + 2
            )));
        }
        Ok(Self {
            intersections,
            ray: None,
        })
    }

    pub fn len(&self) -> usize {
        self.intersections.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ray(&self) -> Option<RationalRay> {
        self.ray
    }

    /// Adjacent intersection numbers `I_{k,k+1}`, 0-based by `k`.
    pub fn adjacent_intersections(&self) -> &[u32] {
        &self.intersections
    }

    pub fn color_class(&self, color: Color) -> Vec<usize> {
        (0..self.len()).filter(|&k| Color::at(k) == color).collect()
    }

    pub fn to_document(&self) -> ChainDocument {
        ChainDocument {
            ray: self.ray.map(|r| r.to_string()),
            curves: (0..self.len())
                .map(|k| CurveEntry {
                    index: k + 1,
                    color: Color::at(k),
                })
                .collect(),
            intersections: self
                .intersections
                .iter()
                .enumerate()
                .map(|(k, &w)| IntersectionEntry {
                    a: k + 1,
                    b: k + 2,
                    count: w,
                })
                .collect(),
        }
    }
}

impl CurveSystem for CurveChain {
    fn curve_count(&self) -> usize {
        self.len()
    }

    fn neighbors(&self, k: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::with_capacity(2);
        if k > 0 {
            out.push((k - 1, self.intersections[k - 1]));
        }
        if k + 1 < self.len() {
            out.push((k + 1, self.intersections[k]));
        }
        out
    }

    fn color(&self, k: usize) -> Color {
        Color::at(k)
    }
}

/// Serialized form of a chain: 1-based curve list, colours and adjacent
/// intersection numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDocument {
    pub ray: Option<String>,
    pub curves: Vec<CurveEntry>,
    pub intersections: Vec<IntersectionEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub index: usize,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionEntry {
    pub a: usize,
    pub b: usize,
    pub count: u32,
}

/// The `2p + q` curve chain on `S_{p,q+2}`.
///
/// Without an override the first pair meets twice and every other pair
/// once. An override must list all `2p + q - 1` adjacent intersection
/// numbers.
pub fn build_base_chain(ray: &RationalRay, pattern: Option<&[u32]>) -> Result<CurveChain> {
    let n = ray.chain_length();
    let intersections = match pattern {
        Some(p) if p.len() != n - 1 => {
            return Err(Error::InvalidArgument(format!(
                "chain of {n} curves needs {} intersection numbers, got {}",
                n - 1,
                p.len()
            )))
        }
        Some(p) => p.to_vec(),
        None => std::iter::once(DEFAULT_FIRST_INTERSECTION)
            .chain(std::iter::repeat(DEFAULT_INTERSECTION))
            .take(n - 1)
            .collect(),
    };
    let mut chain = CurveChain::from_intersections(intersections)?;
    chain.ray = Some(*ray);
    Ok(chain)
}

/// A curve of a lifted chain: sheet `j` and position `k` in the base chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LiftedCurve {
    pub sheet: usize,
    pub position: usize,
}

/// `i` copies of a base chain joined into a single cyclic chain: the last
/// curve of sheet `j` meets the first curve of sheet `j + 1 (mod i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedChain {
    base: CurveChain,
    sheets: usize,
    link: u32,
}

pub fn lift_chain(chain: &CurveChain, sheets: usize) -> Result<LiftedChain> {
    lift_chain_with_link(chain, sheets, DEFAULT_LINK_INTERSECTION)
}

pub fn lift_chain_with_link(chain: &CurveChain, sheets: usize, link: u32) -> Result<LiftedChain> {
    if sheets < 2 {
        return Err(Error::InvalidArgument(format!(
            "a lift needs at least 2 sheets, got {sheets}"
        )));
    }
    if link != 1 && link != 2 {
        return Err(Error::InvalidArgument(format!(
            "sheet link intersection {link} is not 1 or 2"
        )));
    }
    Ok(LiftedChain {
        base: chain.clone(),
        sheets,
        link,
    })
}

impl LiftedChain {
    pub fn base(&self) -> &CurveChain {
        &self.base
    }

    pub fn sheets(&self) -> usize {
        self.sheets
    }

    pub fn link_intersection(&self) -> u32 {
        self.link
    }

    /// Flat index of a lifted curve, sheet-major.
    pub fn index_of(&self, c: LiftedCurve) -> usize {
        c.sheet * self.base.len() + c.position
    }

    pub fn curve_at(&self, index: usize) -> LiftedCurve {
        let n = self.base.len();
        LiftedCurve {
            sheet: index / n,
            position: index % n,
        }
    }

    /// The deck rotation `(j, k) -> (j + 1 mod i, k)`.
    pub fn rotate(&self, c: LiftedCurve) -> LiftedCurve {
        LiftedCurve {
            sheet: (c.sheet + 1) % self.sheets,
            ..c
        }
    }

    /// Flat indices of the curves of one colour on one sheet.
    pub fn sheet_class(&self, sheet: usize, color: Color) -> Vec<usize> {
        self.base
            .color_class(color)
            .into_iter()
            .map(|position| self.index_of(LiftedCurve { sheet, position }))
            .collect()
    }
}

impl CurveSystem for LiftedChain {
    fn curve_count(&self) -> usize {
        self.sheets * self.base.len()
    }

    fn neighbors(&self, index: usize) -> Vec<(usize, u32)> {
        let c = self.curve_at(index);
        let n = self.base.len();
        let prev_sheet = (c.sheet + self.sheets - 1) % self.sheets;
        let next_sheet = (c.sheet + 1) % self.sheets;
        let mut out = Vec::with_capacity(2);
        if c.position > 0 {
            out.push((index - 1, self.base.intersections[c.position - 1]));
        } else {
            let prev = LiftedCurve {
                sheet: prev_sheet,
                position: n - 1,
            };
            out.push((self.index_of(prev), self.link));
        }
        if c.position + 1 < n {
            out.push((index + 1, self.base.intersections[c.position]));
        } else {
            let next = LiftedCurve {
                sheet: next_sheet,
                position: 0,
            };
            out.push((self.index_of(next), self.link));
        }
        out
    }

    fn color(&self, index: usize) -> Color {
        Color::at(self.curve_at(index).position)
    }
}

/// Cell counts of the complement of a filling pair `α ∪ β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingCellCount {
    /// `i(α, β)`; the union has this many vertices and twice as many edges.
    pub intersections: u64,
    pub discs: u64,
    pub punctured_discs: u64,
}

/// Any filling pair on `s` meets at least `|χ(s)|` times.
pub fn filling_intersection_lower_bound(s: &Surface) -> u64 {
    s.abs_euler()
}

/// `i(α,β) - D = 2g - 2 + n`: the Euler count `V - E + F` for the cell
/// decomposition, with punctured discs contributing nothing.
pub fn check_filling_euler(count: &FillingCellCount, s: &Surface) -> bool {
    count.intersections as i64 - count.discs as i64 == s.abs_euler() as i64
}
