//! Surface invariants, rational rays and their cyclic covers, and the
//! systole / collar estimates that feed the upper bound on the Lipschitz
//! constant.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::round;

/// A finite-type surface `S_{g,n}` of negative Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surface {
    genus: u64,
    punctures: u64,
}

impl Surface {
    pub fn new(genus: u64, punctures: u64) -> Result<Self> {
        let chi = 2 - 2 * genus as i64 - punctures as i64;
        if chi >= 0 {
            return Err(Error::NotHyperbolic {
                genus,
                punctures,
                chi,
            });
        }
        Ok(Self { genus, punctures })
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn punctures(&self) -> u64 {
        self.punctures
    }

    /// `2 - 2g - n`, always negative.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64
    }

    /// `|χ| = 2g - 2 + n`.
    pub fn abs_euler(&self) -> u64 {
        2 * self.genus + self.punctures - 2
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{{{},{}}}", self.genus, self.punctures)
    }
}

pub fn euler_characteristic(s: &Surface) -> i64 {
    s.euler_characteristic()
}

/// A ray of slope `p/q` in the (punctures, genus) plane, in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalRay {
    p: u64,
    q: u64,
}

impl RationalRay {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidRay {
                p,
                q,
                reason: "p and q must be positive",
            });
        }
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidRay {
                p,
                q,
                reason: "p and q must be coprime",
            });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Genus-to-puncture ratio of every cover on the ray.
    pub fn slope(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// Number of curves in the building-block chain, `2p + q`.
    pub fn chain_length(&self) -> usize {
        (2 * self.p + self.q) as usize
    }

    /// `(2 + 2p + q) · i`, the claimed mixing bound for the root map at index `i`.
    pub fn mixing_cap(&self, index: u64) -> usize {
        ((2 + 2 * self.p + self.q) * index) as usize
    }
}

impl fmt::Display for RationalRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RationalRay {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse ray {s:?}, expected p/q"));
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        RationalRay::new(p, q)
    }
}

/// The integral point of index `i` on a ray, i.e. the degree-`i` cyclic cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RayPoint {
    ray: RationalRay,
    index: u64,
}

impl RayPoint {
    pub fn new(ray: RationalRay, index: u64) -> Result<Self> {
        if index < 2 {
            return Err(Error::InvalidArgument(format!(
                "cover degree must be at least 2, got {index}"
            )));
        }
        Ok(Self { ray, index })
    }

    pub fn ray(&self) -> RationalRay {
        self.ray
    }

    pub fn index(&self) -> u64 {
        self.index
    }
}

/// The building-block surface `S_{p, q+2}` carrying the twist chain.
pub fn base_surface(ray: &RationalRay) -> Result<Surface> {
    Surface::new(ray.p, ray.q + 2)
}

/// The degree-`i` cyclic cover of the base surface.
///
/// The cover is cut along an arc joining two punctures; both endpoints are
/// totally branched and then filled, so the cover has `q·i` punctures and,
/// by Riemann–Hurwitz, genus `p·i`.
pub fn cover_invariants(point: &RayPoint) -> Surface {
    let i = point.index;
    Surface {
        genus: point.ray.p * i,
        punctures: point.ray.q * i,
    }
}

/// The individual systole-length inequalities that apply to a surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystoleBounds {
    /// `2 arccosh((6g - 3)/2)`, one puncture.
    pub one_puncture: Option<f64>,
    /// `2 arccosh((12g + 5n + 13)/2)`, two or more punctures.
    pub linear: Option<f64>,
    /// `4 arccosh((6g - 6 + 3n)/n)`, two or more punctures.
    pub ratio: Option<f64>,
}

impl SystoleBounds {
    pub fn min(&self) -> Option<f64> {
        [self.one_puncture, self.linear, self.ratio]
            .into_iter()
            .flatten()
            .reduce(f64::min)
    }
}

pub fn systole_bounds(s: &Surface) -> Result<SystoleBounds> {
    let g = s.genus as f64;
    let n = s.punctures as f64;
    match s.punctures {
        0 => Err(Error::OutOfDomain(format!(
            "no systole bound is available for the closed surface {s}"
        ))),
        1 => Ok(SystoleBounds {
            one_puncture: Some(2.0 * ((6.0 * g - 3.0) / 2.0).acosh()),
            linear: None,
            ratio: None,
        }),
        _ => Ok(SystoleBounds {
            one_puncture: None,
            linear: Some(2.0 * ((12.0 * g + 5.0 * n + 13.0) / 2.0).acosh()),
            ratio: Some(4.0 * ((6.0 * g - 6.0 + 3.0 * n) / n).acosh()),
        }),
    }
}

/// Upper bound on the length of a systole of any hyperbolic metric on `s`,
/// rounded up.
pub fn systole_upper_bound(s: &Surface) -> Result<f64> {
    let bounds = systole_bounds(s)?;
    // Non-empty for every n >= 1.
    Ok(round::up(
        bounds.min().expect("at least one inequality applies"),
    ))
}

/// Half-width of the standard collar about a simple closed geodesic of length `l`.
pub fn collar_width(l: f64) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "geodesic length must be positive and finite, got {l}"
        )));
    }
    Ok((1.0 / (l / 2.0).sinh()).asinh())
}

/// A one-parameter family of surfaces along which the collar constant is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CollarFamily {
    /// `S_{g,n}` for fixed `g` and all `n >= 1`.
    FixedGenus(u64),
    /// The cyclic covers `S_{p·i, q·i}`, `i >= 2`.
    Ray(RationalRay),
}

impl fmt::Display for CollarFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollarFamily::FixedGenus(g) => write!(f, "genus {g}"),
            CollarFamily::Ray(r) => write!(f, "ray {r}"),
        }
    }
}

impl CollarFamily {
    /// Supremum of the systole upper bound over the family.
    ///
    /// Along a ray both inequalities increase with the index, so the sup is
    /// the limit `4 arccosh(3 + 6p/q)`. For fixed genus `g >= 2` the ratio
    /// inequality decreases in `n` while the linear one increases, so the
    /// sup is attained at finite `n` and the scan stops once the ratio
    /// inequality is the binding one.
    pub fn systole_supremum(&self) -> Result<f64> {
        match *self {
            CollarFamily::FixedGenus(g) => {
                if g < 2 {
                    return Err(Error::OutOfDomain(format!(
                        "fixed-genus family needs g >= 2, got {g}"
                    )));
                }
                let mut sup = f64::NEG_INFINITY;
                for n in 1.. {
                    let b = systole_bounds(&Surface::new(g, n)?)?;
                    sup = sup.max(b.min().expect("n >= 1"));
                    if let (Some(linear), Some(ratio)) = (b.linear, b.ratio) {
                        if linear >= ratio {
                            break;
                        }
                    }
                }
                Ok(sup.max(4.0 * 3.0_f64.acosh()))
            }
            CollarFamily::Ray(ray) => {
                let limit = 4.0 * (3.0 + 6.0 * ray.slope()).acosh();
                let mut sup = limit;
                for i in 2..=64 {
                    let s = cover_invariants(&RayPoint::new(ray, i)?);
                    sup = sup.max(systole_upper_bound(&s)?);
                }
                Ok(sup)
            }
        }
    }
}

/// The constant `N` with `l(α)/N <= w(l(α))` for a systole `α` of any
/// surface in the family, rounded up.
///
/// `l / w(l)` is increasing in `l`, so `N` is its value at the supremum of
/// the systole bound over the family.
pub fn ray_collar_constant(family: &CollarFamily) -> Result<f64> {
    let l = family.systole_supremum()?;
    if !l.is_finite() {
        return Err(Error::OutOfDomain(format!(
            "systole bound unbounded along {family}"
        )));
    }
    Ok(round::up(l / collar_width(l)?))
}
