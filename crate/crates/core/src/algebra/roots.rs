//! Exact integer and rational roots by Sturm-sequence bisection.
//!
//! No divisor enumeration is involved, so coefficients of any size are fine: the
//! Cauchy bound brackets every real root and the bisection only ever evaluates the
//! Sturm chain at half-integers, which are never roots of a monic integer polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::UniPoly;

type RatPoly = Vec<BigRational>;

fn to_rat(p: &UniPoly) -> RatPoly {
    p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rat_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let q = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &q * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn rat_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rat_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn rat_div(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let db = b.len() - 1;
    let mut r = a.clone();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db)];
    let lb = b.last().unwrap().clone();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
    }
    q
}

fn rat_eval(p: &RatPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

struct Sturm {
    chain: Vec<RatPoly>,
}

impl Sturm {
    fn new(p: &UniPoly) -> Self {
        let p = to_rat(p);
        let dp: RatPoly = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        // square-free part
        let g = rat_gcd(&p, &dp);
        let sf = if g.len() > 1 { rat_div(&p, &g) } else { p };
        let dsf: RatPoly = sf
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        let mut chain = vec![sf, dsf];
        loop {
            let n = chain.len();
            if chain[n - 1].is_empty() {
                chain.pop();
                break;
            }
            let r = rat_rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        Sturm { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = rat_eval(p, x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

fn half_integer(k: &BigInt) -> BigRational {
    // k + 1/2
    BigRational::new(k * 2 + 1, BigInt::from(2))
}

/// Distinct integer roots of a monic integer polynomial, ascending.
fn monic_integer_roots(p: &UniPoly) -> Vec<BigInt> {
    let d = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    debug_assert!(p.leading().is_one());
    let bound: BigInt = p.coeffs()[..d]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
        + 1;
    let sturm = Sturm::new(p);
    let mut roots = Vec::new();
    // Intervals (lo + 1/2, hi + 1/2) contain the integers lo+1..=hi.
    let mut stack = vec![(-&bound - 1, bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let count = sturm.variations(&half_integer(&lo)) - sturm.variations(&half_integer(&hi));
        if count == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if p.eval(&hi).is_zero() {
                roots.push(hi);
            }
            continue;
        }
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    roots
}

/// Distinct integer roots of an integer polynomial, ascending.
pub fn integer_roots(p: &UniPoly) -> Vec<BigInt> {
    rational_roots(p)
        .into_iter()
        .filter(|r| r.is_integer())
        .map(|r| r.to_integer())
        .collect()
}

/// Distinct rational roots of an integer polynomial, ascending.
///
/// With `l` the leading coefficient and `n` the degree, `l^(n-1) p(y/l)` is monic with
/// integer coefficients, so its rational roots are integers `y` and `x = y/l`.
pub fn rational_roots(p: &UniPoly) -> Vec<BigRational> {
    let n = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    let l = p.leading();
    let mut pow = BigInt::one();
    let mut monic = vec![BigInt::zero(); n + 1];
    for i in (0..n).rev() {
        monic[i] = p.coeff(i) * &pow;
        pow *= &l;
    }
    monic[n] = BigInt::one();
    let q = UniPoly::new(monic);
    let mut out: Vec<BigRational> = monic_integer_roots(&q)
        .into_iter()
        .map(|y| BigRational::new(y, l.clone()))
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn cubic_with_three_integer_roots() {
        // (u-2)(u+2)(u-4)
        let r = integer_roots(&p(&[16, -4, -4, 1]));
        assert_eq!(r, vec![BigInt::from(-2), BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn repeated_and_zero_roots() {
        // x^2 (x-3)^2
        let r = integer_roots(&p(&[0, 0, 9, -6, 1]));
        assert_eq!(r, vec![BigInt::zero(), BigInt::from(3)]);
    }

    #[test]
    fn rational_non_integer_roots() {
        // (2x - 1)(3x + 2) = 6x^2 + x - 2
        let r = rational_roots(&p(&[-2, 1, 6]));
        assert_eq!(
            r,
            vec![
                BigRational::new(BigInt::from(-2), BigInt::from(3)),
                BigRational::new(BigInt::from(1), BigInt::from(2))
            ]
        );
        assert!(integer_roots(&p(&[-2, 1, 6])).is_empty());
    }

    #[test]
    fn no_real_roots() {
        assert!(rational_roots(&p(&[1, 0, 1])).is_empty());
        assert!(rational_roots(&p(&[1, 0, 4, 0, 1])).is_empty());
    }

    #[test]
    fn huge_root() {
        let big: BigInt = BigInt::from(10).pow(30) + 7;
        let f = &UniPoly::new(vec![-big.clone(), BigInt::one()]) * &p(&[1, 1, 1]);
        assert_eq!(integer_roots(&f), vec![big]);
    }
}
