//! Index of an element from discriminants, independent of the reduction.
//!
//! For `α = c1 ξ + c2 ξ^2 + c3 ξ^3` with characteristic polynomial `g`,
//! `disc(g) = (Z[ξ] : Z[α])^2 disc(f)`. When `Z[ξ]` is the full ring of integers this
//! index is `I(α)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{arith::perfect_square_root, discriminant, is_squarefree_poly, resultant, UniPoly};
use crate::error::{Error, Result};
use crate::reduction::{index_form_value, ElementTriple, QuarticPoly, ReductionProblem};
use crate::serial;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexVerdict {
    pub generates: bool,
    #[serde(serialize_with = "opt_big")]
    pub index: Option<BigInt>,
}

fn opt_big<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => serial::big(n, s),
        None => s.serialize_none(),
    }
}

/// Polynomial through `(xs[i], ys[i])`, required to have integer coefficients.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Result<UniPoly> {
    let n = xs.len();
    let mut acc = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (x - xs[j]) / (xs[i] - xs[j])
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for j in (0..n).filter(|&j| j != i) {
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRational::from_integer(xs[j].clone());
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = BigRational::new(ys[i].clone(), denom);
        for (k, c) in basis.into_iter().enumerate() {
            acc[k] += c * &scale;
        }
    }
    let coeffs = acc
        .into_iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::Internal(format!("non-integral interpolated coefficient {c}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::new(coeffs))
}

/// Characteristic polynomial `Res_s(f(s), T - (c1 s + c2 s^2 + c3 s^3))`, monic of
/// degree 4, found by evaluating the resultant at `T = 0..4` and interpolating.
pub fn element_minpoly(f: &QuarticPoly, e: &ElementTriple) -> UniPoly {
    let fp = f.to_poly();
    let xs: Vec<BigInt> = (0..5).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|t| {
            let h = UniPoly::new(vec![t.clone(), -&e.c1, -&e.c2, -&e.c3]);
            if h.is_zero() {
                BigInt::zero()
            } else {
                resultant(&fp, &h).expect("both polynomials are nonzero")
            }
        })
        .collect();
    interpolate(&xs, &ys).expect("resultant of integer polynomials interpolates integrally")
}

/// Generation and index of `e` from `disc(g) / disc(f)`.
pub fn element_index(f: &QuarticPoly, e: &ElementTriple) -> Result<IndexVerdict> {
    let g = element_minpoly(f, e);
    if g.degree() != Some(4) || !is_squarefree_poly(&g) {
        return Ok(IndexVerdict { generates: false, index: None });
    }
    let dg = discriminant(&g)?;
    let df = f.discriminant();
    if df.is_zero() {
        return Err(Error::InvalidProblem(format!("{f} has a repeated root")));
    }
    let (ratio, r) = dg.div_rem(&df);
    if !r.is_zero() || !ratio.is_positive() {
        return Err(Error::Internal(format!("disc ratio {dg}/{df} is not a positive integer")));
    }
    let index = perfect_square_root(&ratio)
        .ok_or_else(|| Error::Internal(format!("disc ratio {ratio} is not a square")))?;
    Ok(IndexVerdict { generates: true, index: Some(index) })
}

/// Both routes to the index of one element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteCheck {
    /// `F(Q1(e), Q2(e))`.
    #[serde(serialize_with = "serial::big")]
    pub form_value: BigInt,
    pub oracle: IndexVerdict,
}

impl RouteCheck {
    pub fn form_says_generator(&self) -> bool {
        self.form_value.abs().is_one()
    }

    pub fn oracle_says_generator(&self) -> bool {
        self.oracle.index.as_ref().is_some_and(One::is_one)
    }

    pub fn agree(&self) -> bool {
        let oracle_index = self.oracle.index.clone().unwrap_or_else(BigInt::zero);
        self.form_value.abs() == oracle_index
    }
}

pub fn check_routes(f: &QuarticPoly, e: &ElementTriple) -> Result<RouteCheck> {
    let prob = ReductionProblem::unit(f.clone());
    Ok(RouteCheck { form_value: index_form_value(&prob, e), oracle: element_index(f, e)? })
}

/// True iff `e` generates a power integral basis; the index form value and the
/// discriminant ratio must agree.
pub fn verify_generator(f: &QuarticPoly, e: &ElementTriple) -> Result<bool> {
    let rc = check_routes(f, e)?;
    if rc.form_says_generator() != rc.oracle_says_generator() || !rc.agree() {
        return Err(Error::RouteDisagreement { form: rc.form_value, oracle: format!("{:?}", rc.oracle) });
    }
    Ok(rc.form_says_generator())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x2(t: i64) -> QuarticPoly {
        QuarticPoly::from_i64s([0, 4 * t, 0, 1])
    }

    fn e(c: [i64; 3]) -> ElementTriple {
        ElementTriple::from_i64s(c)
    }

    #[test]
    fn minpoly_of_xi_is_f() {
        for f in [x2(1), QuarticPoly::from_i64s([-2, -2, 6, -2]), QuarticPoly::from_i64s([3, -1, 4, 7])] {
            assert_eq!(element_minpoly(&f, &e([1, 0, 0])), f.to_poly());
        }
    }

    #[test]
    fn xi_squared_in_v4_field() {
        // ξ^2 is a root of T^2 + 4T + 1 when ξ^4 + 4ξ^2 + 1 = 0
        let g = element_minpoly(&x2(1), &e([0, 1, 0]));
        let q = UniPoly::from_i64s(&[1, 4, 1]);
        assert_eq!(g, &q * &q);
        let v = element_index(&x2(1), &e([0, 1, 0])).unwrap();
        assert!(!v.generates);
        assert!(!verify_generator(&x2(1), &e([0, 1, 0])).unwrap());
    }

    #[test]
    fn second_x2_generator() {
        let f = x2(1);
        let g = element_minpoly(&f, &e([4, 0, 1]));
        assert!(is_squarefree_poly(&g));
        assert_eq!(discriminant(&g).unwrap(), f.discriminant());
        assert_eq!(element_index(&f, &e([1, 0, 0])).unwrap().index, Some(BigInt::one()));
        assert!(verify_generator(&f, &e([4, 0, 1])).unwrap());
    }

    #[test]
    fn index_matches_form_value() {
        let f = x2(1);
        let rc = check_routes(&f, &e([1, 0, 2])).unwrap();
        assert!(rc.agree());
        assert!(rc.oracle.generates);
        assert!(rc.oracle.index.unwrap() > BigInt::one());
    }

    #[test]
    fn zero_element() {
        let v = element_index(&x2(1), &e([0, 0, 0])).unwrap();
        assert!(!v.generates);
    }

    #[test]
    fn x3_generator_at_five() {
        let f = QuarticPoly::from_i64s([24 * 5, 12 * 5 + 4, 4, 1]);
        assert!(verify_generator(&f, &e([17, 478, 4])).unwrap());
    }
}
