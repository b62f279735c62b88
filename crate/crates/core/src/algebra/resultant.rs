use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::UniPoly;
use crate::error::{Error, Result};

/// Resultant of two nonzero polynomials by the subresultant pseudo-remainder sequence.
pub fn resultant(p: &UniPoly, q: &UniPoly) -> Result<BigInt> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut sign = false;
    let (mut da, mut db) = (a.degree().unwrap(), b.degree().unwrap());
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        sign = da % 2 == 1 && db % 2 == 1;
    }
    if db == 0 {
        let r = num_traits::pow(b.leading(), da);
        return Ok(if sign { -r } else { r });
    }

    let ca = a.content();
    let cb = b.content();
    a = UniPoly::new(a.coeffs().iter().map(|c| c / &ca).collect());
    b = UniPoly::new(b.coeffs().iter().map(|c| c / &cb).collect());
    let scale = num_traits::pow(ca, db) * num_traits::pow(cb, da);

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = UniPoly::new(r.coeffs().iter().map(|c| exact_div(c, &divisor)).collect());
        g = a.leading();
        h = if delta == 0 {
            h
        } else {
            exact_div(&num_traits::pow(g.clone(), delta), &num_traits::pow(h.clone(), delta - 1))
        };
        if b.degree().unwrap() == 0 {
            break;
        }
    }
    let da = a.degree().unwrap();
    let h = exact_div(&num_traits::pow(b.leading(), da), &num_traits::pow(h, da - 1));
    let r = scale * h;
    Ok(if sign { -r } else { r })
}

fn exact_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    debug_assert!(r.is_zero(), "inexact division {n} / {d}");
    q
}

/// `disc(p) = (-1)^(d(d-1)/2) * res(p, p') / lc(p)`.
pub fn discriminant(p: &UniPoly) -> Result<BigInt> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d < 2 {
        return Err(Error::DegreeTooLow { degree: d, min: 2 });
    }
    let r = resultant(p, &p.derivative())?;
    let q = exact_div(&r, &p.leading());
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}

/// Gcd over the integers, normalized to positive leading coefficient.
pub fn poly_gcd(p: &UniPoly, q: &UniPoly) -> UniPoly {
    if p.is_zero() {
        return q.primitive_part().scale(&q.content());
    }
    if q.is_zero() {
        return p.primitive_part().scale(&p.content());
    }
    let c = p.content().gcd(&q.content());
    let (mut a, mut b) = (p.primitive_part(), q.primitive_part());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.pseudo_rem(&b);
        a = b;
        b = r.primitive_part();
    }
    a.primitive_part().scale(&c)
}

/// True when `p` has no repeated factor of positive degree.
pub fn is_squarefree_poly(p: &UniPoly) -> bool {
    match p.degree() {
        None => false,
        Some(0) => true,
        Some(_) => poly_gcd(p, &p.derivative()).degree() == Some(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn linear_resultant() {
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-3, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[0, 1])).unwrap(), BigInt::from(1));
    }

    #[test]
    fn resultant_rejects_zero() {
        assert_eq!(resultant(&UniPoly::zero(), &p(&[1, 1])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn quadratic_discriminants() {
        assert_eq!(discriminant(&p(&[-1, 0, 1])).unwrap(), BigInt::from(4));
        assert_eq!(discriminant(&p(&[1, 1, 1])).unwrap(), BigInt::from(-3));
        assert!(matches!(discriminant(&p(&[1, 1])), Err(Error::DegreeTooLow { .. })));
    }

    #[test]
    fn cubic_discriminant_formula() {
        // x^3 + a x + b: disc = -4a^3 - 27b^2
        for (a, b) in [(-4i64, 16i64), (2, 3), (-7, 6), (0, 1)] {
            let expect = -4 * a * a * a - 27 * b * b;
            assert_eq!(discriminant(&p(&[b, a, 0, 1])).unwrap(), BigInt::from(expect));
        }
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let f = p(&[2, -3, 0, 1]);
        assert_eq!(poly_gcd(&f, &f.derivative()), p(&[-1, 1]));
        assert!(!is_squarefree_poly(&f));
        assert!(is_squarefree_poly(&p(&[1, 0, 4, 0, 1])));
        assert_eq!(discriminant(&f).unwrap(), BigInt::zero());
    }
}
