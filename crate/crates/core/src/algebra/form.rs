use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::UniPoly;
use crate::error::{Error, Result};

/// Homogeneous binary form of degree `d` over the integers.
///
/// `coeffs[i]` is the coefficient of `u^(d-i) * v^i`, i.e. ascending powers of `v`.
/// The degree is part of the value, so the zero form still knows its degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    /// Builds a form of degree `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![BigInt::zero(); degree + 1])
    }

    /// `m11*u + m12*v` style linear form.
    pub fn linear(a: BigInt, b: BigInt) -> Self {
        Self::new(vec![a, b])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, u: &BigInt, v: &BigInt) -> BigInt {
        // Horner in u; the i-th coefficient picks up v^i on the way in.
        let mut acc = BigInt::zero();
        let mut vpow = BigInt::one();
        for c in &self.coeffs {
            acc = acc * u + c * &vpow;
            vpow *= v;
        }
        acc
    }

    pub fn eval_i64(&self, u: i64, v: i64) -> BigInt {
        self.eval(&BigInt::from(u), &BigInt::from(v))
    }

    /// `F(x, 1)` as a univariate polynomial in `x`.
    pub fn dehomogenize(&self) -> UniPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        UniPoly::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> BinaryForm {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn neg(&self) -> BinaryForm {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degree");
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> BinaryForm {
        let mut acc = BinaryForm::new(vec![BigInt::one()]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

/// `v^d * p(u/v)`.
pub fn homogenize(p: &UniPoly, d: usize) -> Result<BinaryForm> {
    let deg = p.degree().unwrap_or(0);
    if deg > d {
        return Err(Error::DegreeTooHigh { degree: deg, max: d });
    }
    Ok(BinaryForm::new((0..=d).map(|i| p.coeff(d - i)).collect()))
}

/// `F(m11*a + m12*b, m21*a + m22*b)`, expanded.
pub fn form_substitute(
    f: &BinaryForm,
    m11: &BigInt,
    m12: &BigInt,
    m21: &BigInt,
    m22: &BigInt,
) -> BinaryForm {
    let d = f.degree();
    let first = BinaryForm::linear(m11.clone(), m12.clone());
    let second = BinaryForm::linear(m21.clone(), m22.clone());
    let first_pows: Vec<BinaryForm> = (0..=d).map(|e| first.pow(e)).collect();
    let second_pows: Vec<BinaryForm> = (0..=d).map(|e| second.pow(e)).collect();
    let mut acc = BinaryForm::zero(d);
    for (i, c) in f.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = first_pows[d - i].mul(&second_pows[i]).scale(c);
        acc = acc.add(&term);
    }
    acc
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm({self})")
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mut mono = Vec::new();
            match d - i {
                0 => {}
                1 => mono.push("u".to_string()),
                e => mono.push(format!("u^{e}")),
            }
            match i {
                0 => {}
                1 => mono.push("v".to_string()),
                e => mono.push(format!("v^{e}")),
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integer quadratic form in three variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TernaryQuadratic {
    pub xx: BigInt,
    pub xy: BigInt,
    pub yy: BigInt,
    pub xz: BigInt,
    pub yz: BigInt,
    pub zz: BigInt,
}

impl TernaryQuadratic {
    pub fn new(xx: BigInt, xy: BigInt, yy: BigInt, xz: BigInt, yz: BigInt, zz: BigInt) -> Self {
        TernaryQuadratic { xx, xy, yy, xz, yz, zz }
    }

    pub fn from_i64s(c: [i64; 6]) -> Self {
        let [xx, xy, yy, xz, yz, zz] = c.map(BigInt::from);
        Self::new(xx, xy, yy, xz, yz, zz)
    }

    /// Coefficients in the order x², xy, y², xz, yz, z².
    pub fn coeffs(&self) -> [&BigInt; 6] {
        [&self.xx, &self.xy, &self.yy, &self.xz, &self.yz, &self.zz]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt, z: &BigInt) -> BigInt {
        &self.xx * x * x
            + &self.xy * x * y
            + &self.yy * y * y
            + &self.xz * x * z
            + &self.yz * y * z
            + &self.zz * z * z
    }

    pub fn eval_triple(&self, t: &[BigInt; 3]) -> BigInt {
        self.eval(&t[0], &t[1], &t[2])
    }

    /// `a*self + b*other`, coefficientwise.
    pub fn combine(&self, a: &BigInt, other: &TernaryQuadratic, b: &BigInt) -> TernaryQuadratic {
        let l = self.coeffs();
        let r = other.coeffs();
        let c: Vec<BigInt> = l.iter().zip(r.iter()).map(|(x, y)| a * *x + b * *y).collect();
        TernaryQuadratic::new(
            c[0].clone(),
            c[1].clone(),
            c[2].clone(),
            c[3].clone(),
            c[4].clone(),
            c[5].clone(),
        )
    }

    /// Symmetric Gram matrix doubled, so entries stay integral: `2*Q(w) = w^T M w`.
    pub fn doubled_matrix(&self) -> [[BigInt; 3]; 3] {
        let two = BigInt::from(2);
        [
            [&self.xx * &two, self.xy.clone(), self.xz.clone()],
            [self.xy.clone(), &self.yy * &two, self.yz.clone()],
            [self.xz.clone(), self.yz.clone(), &self.zz * &two],
        ]
    }

    /// Substitutes three binary forms of equal degree for x, y, z.
    pub fn compose(&self, fx: &BinaryForm, fy: &BinaryForm, fz: &BinaryForm) -> BinaryForm {
        let terms = [
            (&self.xx, fx, fx),
            (&self.xy, fx, fy),
            (&self.yy, fy, fy),
            (&self.xz, fx, fz),
            (&self.yz, fy, fz),
            (&self.zz, fz, fz),
        ];
        let mut acc = BinaryForm::zero(2 * fx.degree());
        for (c, a, b) in terms {
            if !c.is_zero() {
                acc = acc.add(&a.mul(b).scale(c));
            }
        }
        acc
    }
}

impl fmt::Display for TernaryQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x^2", "x*y", "y^2", "x*z", "y*z", "z^2"];
        let mut first = true;
        for (c, m) in self.coeffs().iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn homogenize_examples() {
        let f = UniPoly::from_i64s(&[1, 0, 4, 0, 1]);
        assert_eq!(homogenize(&f, 4).unwrap(), BinaryForm::from_i64s(&[1, 0, 4, 0, 1]));
        let g = UniPoly::from_i64s(&[-1, 1]);
        assert_eq!(homogenize(&g, 1).unwrap(), BinaryForm::from_i64s(&[1, -1]));
        assert!(matches!(homogenize(&f, 3), Err(Error::DegreeTooHigh { .. })));
    }

    #[test]
    fn identity_and_swap_substitution() {
        let f = BinaryForm::from_i64s(&[1, 0, 4, 0, 1]);
        assert_eq!(form_substitute(&f, &b(1), &b(0), &b(0), &b(1)), f);
        assert_eq!(form_substitute(&f, &b(0), &b(1), &b(1), &b(0)), f);
        let g = BinaryForm::from_i64s(&[1, 2, 3, 4, 5]);
        let swapped = form_substitute(&g, &b(0), &b(1), &b(1), &b(0));
        assert_eq!(swapped, BinaryForm::from_i64s(&[5, 4, 3, 2, 1]));
    }

    #[test]
    fn shear_substitution_matches_hand_expansion() {
        // (a + 2b)^2 - (a + 2b) b = a^2 + 3ab + 2b^2
        let f = BinaryForm::from_i64s(&[1, -1, 0]);
        let g = form_substitute(&f, &b(1), &b(2), &b(0), &b(1));
        assert_eq!(g, BinaryForm::from_i64s(&[1, 3, 2]));
    }

    #[test]
    fn ternary_eval_and_compose() {
        // y^2 - xz + 4z^2 composed with (p^2 + 4q^2, pq, q^2) vanishes
        let q = TernaryQuadratic::from_i64s([0, 0, 1, -1, 0, 4]);
        let fx = BinaryForm::from_i64s(&[1, 0, 4]);
        let fy = BinaryForm::from_i64s(&[0, 1, 0]);
        let fz = BinaryForm::from_i64s(&[0, 0, 1]);
        assert!(q.compose(&fx, &fy, &fz).is_zero());
        assert_eq!(q.eval(&b(1), &b(0), &b(0)), b(0));
        assert_eq!(q.eval(&b(0), &b(0), &b(1)), b(4));
    }

    #[test]
    fn display() {
        assert_eq!(BinaryForm::from_i64s(&[1, -4, -4, 16]).to_string(), "u^3 - 4*u^2*v - 4*u*v^2 + 16*v^3");
        assert_eq!(TernaryQuadratic::from_i64s([0, 0, 1, -1, 0, 4]).to_string(), "y^2 - x*z + 4*z^2");
    }
}
