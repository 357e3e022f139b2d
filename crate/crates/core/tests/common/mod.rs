//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sysmap_core::matrix::TransitionMatrix;

/// The reference symbolic template instantiated with `inter[k] = I_{k+1,k+2}`
/// (1-based curves) and twist power `i`.
///
/// The template is given for even chain length; for odd length only the
/// rows above the last two are meaningful.
pub fn reference_template(inter: &[u64], i: u64) -> Vec<Vec<u64>> {
    let n = inter.len() + 1;
    assert!(n >= 4, "template needs at least four curves");
    // I(x, y) for 1-based adjacent curves.
    let ii = |x: usize, y: usize| -> u64 {
        assert_eq!(y, x + 1);
        inter[x - 1]
    };
    let mut m = vec![vec![0u64; n]; n];
    let mut put = |r: usize, c: usize, v: u64| {
        if c >= 1 && c <= n {
            m[r - 1][c - 1] = v;
        }
    };
    put(1, 1, 1);
    put(1, 2, 2 * i);
    put(1, 3, 2 * ii(2, 3));
    put(2, 1, ii(1, 2));
    put(2, 2, ii(1, 2) * i + 1);
    put(2, 3, ii(2, 3) * (ii(1, 2) * i + 1));
    let last = if n.is_multiple_of(2) { n } else { n - 2 };
    for k in 3..=last {
        if k % 2 == 1 {
            if k >= 5 {
                put(k, k - 2, ii(k - 2, k - 1) * ii(k - 1, k) * i);
            }
            put(k, k - 1, ii(k - 1, k) * i);
            put(k, k, 1 + ii(k - 1, k).pow(2) * i + ii(k, k + 1).pow(2) * i);
            put(k, k + 1, ii(k, k + 1) * i);
            if k + 2 <= n {
                put(k, k + 2, ii(k, k + 1) * ii(k + 1, k + 2) * i);
            }
        } else {
            put(k, k - 1, ii(k - 1, k));
            put(k, k, 1);
            if k < n {
                put(k, k + 1, ii(k, k + 1));
            }
        }
    }
    m
}

pub type Poly = Vec<BigRational>;

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn big(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// Characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier, with
/// coefficients listed from the constant term up.
pub fn char_poly(m: &TransitionMatrix) -> Poly {
    let n = m.dim();
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| (0..n).map(|c| big(m.get(r, c))).collect())
        .collect();
    let matmul = |x: &Vec<Vec<BigRational>>, y: &Vec<Vec<BigRational>>| {
        let mut out = vec![vec![BigRational::zero(); n]; n];
        for r in 0..n {
            for k in 0..n {
                if x[r][k].is_zero() {
                    continue;
                }
                for c in 0..n {
                    out[r][c] += &x[r][k] * &y[k][c];
                }
            }
        }
        out
    };
    // coeffs[n - k] = c_k with p(x) = sum c_k x^{n-k}, c_0 = 1.
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = vec![vec![BigRational::zero(); n]; n];
    let mut c_prev = BigRational::one();
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I; c_k = -tr(A M_k) / k.
        let mut next = matmul(&a, &mk);
        for (d, row) in next.iter_mut().enumerate() {
            row[d] += &c_prev;
        }
        mk = next;
        let am = matmul(&a, &mk);
        let tr: BigRational = (0..n).map(|d| am[d][d].clone()).sum();
        let c = -tr / rat(k as i64);
        coeffs[n - k] = c.clone();
        c_prev = c;
    }
    coeffs
}

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &Poly) -> Poly {
    let mut d: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * rat(k as i64))
        .collect();
    if d.is_empty() {
        d.push(BigRational::zero());
    }
    d
}

fn degree(p: &Poly) -> usize {
    p.len() - 1
}

fn is_zero_poly(p: &Poly) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Remainder of `a / b`.
fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    trim(&mut r);
    let mut b = b.clone();
    trim(&mut b);
    let lead = b.last().unwrap().clone();
    while !is_zero_poly(&r) && degree(&r) >= degree(&b) {
        let shift = degree(&r) - degree(&b);
        let f = r.last().unwrap() / &lead;
        for (k, c) in b.iter().enumerate() {
            r[k + shift] -= &f * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn div_exact(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    trim(&mut r);
    let mut b = b.clone();
    trim(&mut b);
    let lead = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); degree(&r) - degree(&b) + 1];
    while !is_zero_poly(&r) && degree(&r) >= degree(&b) {
        let shift = degree(&r) - degree(&b);
        let f = r.last().unwrap() / &lead;
        for (k, c) in b.iter().enumerate() {
            r[k + shift] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        trim(&mut r);
    }
    q
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !is_zero_poly(&b) {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    trim(&mut a);
    a
}

/// Sturm sequence of the square-free part of `p`.
fn sturm(p: &Poly) -> Vec<Poly> {
    let g = gcd(p, &derivative(p));
    let sq = if degree(&g) == 0 {
        p.clone()
    } else {
        div_exact(p, &g)
    };
    let mut seq = vec![sq.clone(), derivative(&sq)];
    loop {
        let n = seq.len();
        if is_zero_poly(&seq[n - 1]) {
            seq.pop();
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if is_zero_poly(&r) {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = eval(p, x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn cauchy_bound(p: &Poly) -> BigRational {
    let mut p = p.clone();
    trim(&mut p);
    let lead = p.last().unwrap().abs();
    rat(1)
        + p[..p.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(BigRational::zero(), |a, b| a.max(b))
}

/// Distinct real roots of `p` in `(a, b]`, for `a` not a root.
fn roots_in(seq: &[Poly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

/// Exact test that the largest real root of `p` lies in `[lo, hi]`.
pub fn largest_root_in(p: &Poly, lo: f64, hi: f64) -> bool {
    let lo = BigRational::from_float(lo).unwrap();
    let hi = BigRational::from_float(hi).unwrap();
    let seq = sturm(p);
    let top = cauchy_bound(p) + rat(1);
    let above = |x: &BigRational| -> usize {
        if eval(&seq[0], x).is_zero() {
            // Nudge off the root; only counts strictly above matter.
            let eps = BigRational::new(BigInt::one(), BigInt::from(1u64) << 200);
            roots_in(&seq, &(x + &eps), &top)
        } else {
            roots_in(&seq, x, &top)
        }
    };
    let none_above_hi = above(&hi) == 0;
    let some_at_or_above_lo = eval(&seq[0], &lo).is_zero() || above(&lo) > 0;
    none_above_hi && some_at_or_above_lo
}

/// Largest real root of `p`, to about `1e-15` relative precision.
pub fn largest_root(p: &Poly) -> f64 {
    let seq = sturm(p);
    let mut hi = cauchy_bound(p) + rat(1);
    let mut lo = -hi.clone();
    for _ in 0..80 {
        let mid = (&lo + &hi) / rat(2);
        let mid_adj = if eval(&seq[0], &mid).is_zero() {
            &mid + BigRational::new(BigInt::one(), BigInt::from(1u64) << 200)
        } else {
            mid.clone()
        };
        if roots_in(&seq, &mid_adj, &hi) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v = (&lo + &hi) / rat(2);
    num_traits::ToPrimitive::to_f64(&v).unwrap()
}
