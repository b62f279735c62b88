use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::arith::perfect_square_root;
use super::form::BinaryForm;
use super::poly::UniPoly;
use super::roots::{integer_roots, rational_roots};
use crate::error::{Error, Result};

/// Factorization over the integers: `content * product(factors) == p`.
///
/// Each factor is primitive, irreducible over the rationals and has a positive leading
/// coefficient. Repeated factors appear repeatedly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<UniPoly>,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.content.clone()), |acc, f| &acc * f)
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }
}

/// Factors a nonzero polynomial of degree at most 4.
///
/// Linear factors come from exact rational roots. A quartic without rational roots is
/// tested for a split into two quadratics through the integer roots of its resolvent
/// cubic, which fixes the constant terms of both quadratic factors.
pub fn factor_univariate_deg_le4(p: &UniPoly) -> Result<Factorization> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg > 4 {
        return Err(Error::DegreeTooHigh { degree: deg, max: 4 });
    }
    let mut content = p.content();
    if p.leading().is_negative() {
        content = -content;
    }
    let mut rest = p.primitive_part();
    let mut factors = Vec::new();

    loop {
        if rest.degree().unwrap_or(0) < 1 {
            break;
        }
        let roots = rational_roots(&rest);
        let Some(r) = roots.into_iter().next() else {
            break;
        };
        // r = a/b in lowest terms -> factor b*x - a
        let lin = UniPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        rest = rest
            .div_exact(&lin)
            .ok_or_else(|| Error::Internal("rational root did not divide".into()))?;
        factors.push(lin);
    }

    match rest.degree() {
        Some(4) => match split_quartic(&rest) {
            Some((a, b)) => {
                factors.push(a);
                factors.push(b);
            }
            None => factors.push(rest),
        },
        Some(0) => {
            // primitive part reduced to the unit 1
            debug_assert!(rest.leading().is_one());
        }
        _ => factors.push(rest),
    }
    factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    let out = Factorization { content, factors };
    if out.expand() != *p {
        return Err(Error::Internal(format!("factorization of {p} does not multiply back")));
    }
    Ok(out)
}

/// Splits a primitive quartic without rational roots into two integer quadratics.
fn split_quartic(p: &UniPoly) -> Option<(UniPoly, UniPoly)> {
    // Work with the monic y^4 + A y^3 + B y^2 + C y + D = l^3 p(y/l).
    let l = p.leading();
    let big_a = p.coeff(3);
    let big_b = p.coeff(2) * &l;
    let big_c = p.coeff(1) * &l * &l;
    let big_d = p.coeff(0) * &l * &l * &l;

    // Roots of z^3 - B z^2 + (AC - 4D) z - (A^2 D - 4BD + C^2) are q + s for the
    // constant terms q, s of a split (y^2 + p y + q)(y^2 + r y + s).
    let resolvent = UniPoly::new(vec![
        -(&big_a * &big_a * &big_d - BigInt::from(4) * &big_b * &big_d + &big_c * &big_c),
        &big_a * &big_c - BigInt::from(4) * &big_d,
        -big_b.clone(),
        BigInt::one(),
    ]);
    for theta in integer_roots(&resolvent) {
        let disc = &theta * &theta - BigInt::from(4) * &big_d;
        let Some(sq) = perfect_square_root(&disc) else {
            continue;
        };
        if (&theta + &sq) % 2 != BigInt::zero() {
            continue;
        }
        let q: BigInt = (&theta + &sq) / 2;
        let s: BigInt = (&theta - &sq) / 2;
        let candidates: Vec<(BigInt, BigInt)> = if q != s {
            // p s + q r = C with r = A - p
            let num: BigInt = &big_c - &big_a * &q;
            let den: BigInt = &s - &q;
            if (&num % &den).is_zero() {
                let pp = num / den;
                vec![(pp.clone(), &big_a - pp)]
            } else {
                vec![]
            }
        } else {
            // p + r = A, p r = B - 2q
            let d2 = &big_a * &big_a - BigInt::from(4) * (&big_b - &q * 2);
            match perfect_square_root(&d2) {
                Some(r2) if (&big_a + &r2).is_even() => {
                    vec![((&big_a + &r2) / 2, (&big_a - &r2) / 2)]
                }
                _ => vec![],
            }
        };
        for (pp, rr) in candidates {
            let f1 = UniPoly::new(vec![q.clone(), pp, BigInt::one()]);
            let f2 = UniPoly::new(vec![s.clone(), rr, BigInt::one()]);
            let monic = UniPoly::new(vec![
                big_d.clone(),
                big_c.clone(),
                big_b.clone(),
                big_a.clone(),
                BigInt::one(),
            ]);
            if &f1 * &f2 != monic {
                continue;
            }
            // back to x: y = l x, primitive parts carry the factorization of p
            let g1 = f1.scale_arg(&l).primitive_part();
            let g2 = f2.scale_arg(&l).primitive_part();
            if &g1 * &g2 == *p {
                return Some((g1, g2));
            }
        }
    }
    None
}

/// Factorization of a binary form into forms irreducible over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormFactorization {
    pub content: BigInt,
    pub factors: Vec<BinaryForm>,
}

impl FormFactorization {
    pub fn expand(&self, degree: usize) -> BinaryForm {
        let mut acc = BinaryForm::new(vec![self.content.clone()]);
        for f in &self.factors {
            acc = acc.mul(f);
        }
        debug_assert_eq!(acc.degree(), degree);
        acc
    }

    pub fn all_linear(&self) -> bool {
        self.factors.iter().all(|f| f.degree() == 1)
    }
}

/// Factors a nonzero binary form of degree at most 4 through `F(x, 1)`; missing
/// degree becomes powers of the linear form `v`.
pub fn factor_form(f: &BinaryForm) -> Result<FormFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.degree();
    let uni = f.dehomogenize();
    let fac = factor_univariate_deg_le4(&uni)?;
    let e = uni.degree().unwrap_or(0);
    let mut factors: Vec<BinaryForm> = fac
        .factors
        .iter()
        .map(|g| {
            let gd = g.degree().unwrap();
            BinaryForm::new((0..=gd).map(|i| g.coeff(gd - i)).collect())
        })
        .collect();
    for _ in e..d {
        factors.push(BinaryForm::linear(BigInt::zero(), BigInt::one()));
    }
    Ok(FormFactorization { content: fac.content, factors })
}
