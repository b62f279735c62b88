//! Exhaustive scans over coprime pairs in a box.
//!
//! Forms whose values provably fit in `i128` on the box are evaluated row by row with
//! machine integers; callers fall back to `BigInt` evaluation otherwise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::algebra::BinaryForm;

/// A form whose values on `|p|, |q| <= bound`, times a multiplier, fit in `i128`.
#[derive(Debug, Clone)]
pub(crate) struct SmallForm {
    coeffs: Vec<i128>,
}

impl SmallForm {
    /// `None` unless `sum |c_i| * bound^d * |multiplier|` stays below 2^125.
    pub(crate) fn try_new(f: &BinaryForm, bound: u64, multiplier: &BigInt) -> Option<Self> {
        let d = f.degree() as u32;
        let total: BigInt = f.coeffs().iter().map(|c| c.abs()).sum::<BigInt>()
            * BigInt::from(bound.max(1)).pow(d)
            * multiplier.abs().max(BigInt::from(1));
        if total.bits() > 125 {
            return None;
        }
        let coeffs = f.coeffs().iter().map(|c| c.to_i128()).collect::<Option<Vec<_>>>()?;
        Some(SmallForm { coeffs })
    }

    /// Coefficients `c_i * q^i`, ready for Horner evaluation in `p`.
    pub(crate) fn row(&self, q: i64) -> Vec<i128> {
        let mut qpow: i128 = 1;
        self.coeffs
            .iter()
            .map(|c| {
                let r = c * qpow;
                qpow *= q as i128;
                r
            })
            .collect()
    }
}

/// Reduction of a form modulo the Mersenne prime 2^61 - 1, used as an exact filter
/// for forms whose values do not fit in `i128`: hits are re-checked in `BigInt`.
#[derive(Debug, Clone)]
pub(crate) struct ModForm {
    coeffs: Vec<u64>,
}

pub(crate) const MOD_P: u64 = (1 << 61) - 1;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

pub(crate) fn reduce_mod(n: &BigInt) -> u64 {
    let r = n.mod_floor(&BigInt::from(MOD_P));
    r.to_u64().expect("residue fits")
}

#[inline]
fn reduce_i64(n: i64) -> u64 {
    n.rem_euclid(MOD_P as i64) as u64
}

impl ModForm {
    pub(crate) fn new(f: &BinaryForm) -> Self {
        ModForm { coeffs: f.coeffs().iter().map(reduce_mod).collect() }
    }

    pub(crate) fn row(&self, q: i64) -> Vec<u64> {
        let q = reduce_i64(q);
        let mut qpow = 1u64;
        self.coeffs
            .iter()
            .map(|&c| {
                let r = mulmod(c, qpow);
                qpow = mulmod(qpow, q);
                r
            })
            .collect()
    }

    #[inline]
    pub(crate) fn horner(row: &[u64], p: i64) -> u64 {
        let p = reduce_i64(p);
        row.iter().fold(0u64, |acc, &c| (mulmod(acc, p) + c) % MOD_P)
    }
}

#[inline]
pub(crate) fn horner(row: &[i128], p: i64) -> i128 {
    let p = p as i128;
    row.iter().fold(0i128, |acc, c| acc * p + c)
}

/// Representatives of coprime pairs up to sign in the box: `(1, 0)` and every
/// `(p, q)` with `q >= 1`, `|p| <= bound`, `gcd(p, q) = 1`. The `(0, 1)` axis pair is
/// always included, even for `bound == 0`.
///
/// `row(q)` prepares per-row data once; `hit(&row, p, q)` is called for each pair and
/// the accepted pairs are returned sorted. Rows are processed in parallel.
pub(crate) fn scan_rows<R, M, F>(bound: u64, row: M, hit: F) -> Vec<(i64, i64)>
where
    M: Fn(i64) -> R + Sync,
    F: Fn(&R, i64, i64) -> bool + Sync,
{
    let b = bound as i64;
    let mut out: Vec<(i64, i64)> = (1..=b.max(1))
        .into_par_iter()
        .flat_map_iter(|q| {
            let (lo, hi) = if q > b { (0, 0) } else { (-b, b) };
            let r = row(q);
            let hit = &hit;
            (lo..=hi)
                .filter(|&p| hit(&r, p, q) && p.gcd(&q) == 1)
                .map(move |p| (p, q))
                .collect::<Vec<_>>()
        })
        .collect();
    if hit(&row(0), 1, 0) {
        out.push((1, 0));
    }
    out.sort_unstable();
    out
}

/// [`scan_rows`] without per-row data.
pub(crate) fn scan_pairs<F>(bound: u64, hit: F) -> Vec<(i64, i64)>
where
    F: Fn(i64, i64) -> bool + Sync,
{
    scan_rows(bound, |_| (), |_, p, q| hit(p, q))
}

/// Canonical representative of `±(p, q)`: first nonzero coordinate positive.
pub fn canonical_pair(p: BigInt, q: BigInt) -> (BigInt, BigInt) {
    if p.is_negative() || (p.sign() == num_bigint::Sign::NoSign && q.is_negative()) {
        (-p, -q)
    } else {
        (p, q)
    }
}

/// `i128` perfect-square test.
#[inline]
pub(crate) fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as u128).isqrt();
    r * r == n as u128
}
