//! Binary form equations `F(u, v) = ±c` of degree 3 and 4.
//!
//! Forms with a rational linear factor are solved exactly: all divisor splittings for
//! products of linear forms, and a line parametrization plus exact integer roots when
//! only one factor is linear. Definite quartics get an explicit a priori bound. Anything
//! else is an exhaustive search in a box, and the result says so.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{ExtendedGcd, Integer};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{factor_form, form_substitute, integer_roots, signed_divisors, BinaryForm, UniPoly};
use crate::error::{Error, Result};
use crate::scan::{canonical_pair, horner, reduce_mod, scan_rows, ModForm, SmallForm};
use crate::serial;

/// Whether a solution set is provably complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    Exact,
    /// Complete among pairs with max-norm at most the bound.
    BoundedSearch(u64),
}

impl Completeness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Completeness::Exact)
    }
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Completeness::Exact => write!(f, "exact"),
            Completeness::BoundedSearch(b) => write!(f, "bounded search (max-norm <= {b})"),
        }
    }
}

/// How a solution set was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Reducible,
    LinearFactor,
    Definite,
    Bounded,
}

/// Primitive solutions of `F(u, v) = ±c`, one per `±` pair, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThueSolutionSet {
    #[serde(skip)]
    form: BinaryForm,
    #[serde(serialize_with = "serial::big")]
    rhs: BigInt,
    #[serde(serialize_with = "serialize_pairs")]
    solutions: Vec<(BigInt, BigInt)>,
    completeness: Completeness,
    strategy: Strategy,
}

fn serialize_pairs<S: serde::Serializer>(v: &[(BigInt, BigInt)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (p, q) in v {
        seq.serialize_element(&[serial::json_num(p), serial::json_num(q)])?;
    }
    seq.end()
}

impl ThueSolutionSet {
    pub fn new(form: BinaryForm, rhs: BigInt, completeness: Completeness, strategy: Strategy) -> Self {
        ThueSolutionSet { form, rhs, solutions: Vec::new(), completeness, strategy }
    }

    /// Adds `±(u, v)` after checking `F(u, v) = ±c`; returns whether it was new.
    pub fn insert(&mut self, u: BigInt, v: BigInt) -> Result<bool> {
        if self.form.eval(&u, &v).abs() != self.rhs.abs() {
            return Err(Error::Internal(format!("({u}, {v}) does not solve {} = ±{}", self.form, self.rhs)));
        }
        let pair = canonical_pair(u, v);
        match self.solutions.binary_search(&pair) {
            Ok(_) => Ok(false),
            Err(i) => {
                self.solutions.insert(i, pair);
                Ok(true)
            }
        }
    }

    pub fn solutions(&self) -> &[(BigInt, BigInt)] {
        &self.solutions
    }

    pub fn contains(&self, u: &BigInt, v: &BigInt) -> bool {
        self.solutions.binary_search(&canonical_pair(u.clone(), v.clone())).is_ok()
    }

    pub fn contains_i64(&self, u: i64, v: i64) -> bool {
        self.contains(&BigInt::from(u), &BigInt::from(v))
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn rhs(&self) -> &BigInt {
        &self.rhs
    }

    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    /// Pairs as `i64` when they fit, for tests and display.
    pub fn to_i64_pairs(&self) -> Vec<(i64, i64)> {
        self.solutions
            .iter()
            .filter_map(|(u, v)| Some((u.to_i64()?, v.to_i64()?)))
            .collect()
    }
}

/// Largest box searched exhaustively to finish off a definite form.
pub const DEFINITE_SCAN_LIMIT: u64 = 1 << 14;

/// Solves `F(u, v) = ±c` with the strongest applicable method.
pub fn solve(f: &BinaryForm, c: &BigInt, bound: u64) -> Result<ThueSolutionSet> {
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    let d = f.degree();
    if !(3..=4).contains(&d) {
        return Err(Error::UnsupportedDegree(d));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fac = factor_form(f)?;
    let (reduced, r) = c.div_rem(&fac.content);
    if fac.factors.iter().any(|g| g.degree() == 1) {
        let mut out = if !r.is_zero() {
            // the content does not divide c: no solutions at all
            ThueSolutionSet::new(f.clone(), c.clone(), Completeness::Exact, Strategy::Reducible)
        } else if fac.all_linear() {
            let factors: Vec<BinaryForm> = fac.factors.clone();
            match solve_reducible(&factors, &reduced) {
                Ok(s) => s,
                Err(Error::SingularFactors) => return solve_bounded(f, c, bound),
                Err(e) => return Err(e),
            }
        } else {
            let idx = fac.factors.iter().position(|g| g.degree() == 1).unwrap();
            let lin = fac.factors[idx].clone();
            let rest = fac
                .factors
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != idx)
                .fold(BinaryForm::new(vec![BigInt::one()]), |acc, (_, g)| acc.mul(g));
            solve_with_linear_factor(&lin, &rest, &reduced)?
        };
        // re-express against the original form and right-hand side
        let mut full = ThueSolutionSet::new(f.clone(), c.clone(), Completeness::Exact, out.strategy);
        for (u, v) in std::mem::take(&mut out.solutions) {
            full.insert(u, v)?;
        }
        return Ok(full);
    }
    if d == 4 {
        if let Some(b) = definite_bound(f, c) {
            if b <= DEFINITE_SCAN_LIMIT {
                let mut s = solve_bounded(f, c, b)?;
                s.completeness = Completeness::Exact;
                s.strategy = Strategy::Definite;
                return Ok(s);
            }
        }
    }
    solve_bounded(f, c, bound)
}

/// Products of linear forms: every splitting of `±c` into factor values.
pub fn solve_reducible(factors: &[BinaryForm], c: &BigInt) -> Result<ThueSolutionSet> {
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    if factors.iter().any(|g| g.degree() != 1) {
        return Err(Error::InvalidProblem("solve_reducible takes linear forms".into()));
    }
    let product = factors.iter().fold(BinaryForm::new(vec![BigInt::one()]), |acc, g| acc.mul(g));
    if product.degree() < 2 {
        return Err(Error::DegreeTooLow { degree: product.degree(), min: 2 });
    }
    let coef = |g: &BinaryForm| (g.coeffs()[0].clone(), g.coeffs()[1].clone());
    let (i, j, det) = (0..factors.len())
        .flat_map(|i| (i + 1..factors.len()).map(move |j| (i, j)))
        .find_map(|(i, j)| {
            let (a1, b1) = coef(&factors[i]);
            let (a2, b2) = coef(&factors[j]);
            let det = &a1 * &b2 - &a2 * &b1;
            (!det.is_zero()).then_some((i, j, det))
        })
        .ok_or(Error::SingularFactors)?;
    let (a1, b1) = coef(&factors[i]);
    let (a2, b2) = coef(&factors[j]);
    let mut out = ThueSolutionSet::new(product.clone(), c.clone(), Completeness::Exact, Strategy::Reducible);
    for e1 in signed_divisors(c) {
        let rest = c / &e1;
        for e2 in signed_divisors(&rest) {
            // a1 u + b1 v = e1, a2 u + b2 v = e2
            let un = &e1 * &b2 - &e2 * &b1;
            let vn = &a1 * &e2 - &a2 * &e1;
            if !(&un % &det).is_zero() || !(&vn % &det).is_zero() {
                continue;
            }
            let (u, v) = (un / &det, vn / &det);
            if u.gcd(&v).is_one() && product.eval(&u, &v).abs() == c.abs() {
                out.insert(u, v)?;
            }
        }
    }
    Ok(out)
}

/// `lin * quad = ±c` with an irreducible quadratic factor.
pub fn solve_linear_quadratic(lin: &BinaryForm, quad: &BinaryForm, c: &BigInt) -> Result<ThueSolutionSet> {
    solve_with_linear_factor(lin, quad, c)
}

/// `lin * rest = ±c`: on each line `lin = e` the cofactor is a polynomial in one
/// integer parameter, whose integer roots are found exactly.
pub fn solve_with_linear_factor(lin: &BinaryForm, rest: &BinaryForm, c: &BigInt) -> Result<ThueSolutionSet> {
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    if lin.degree() != 1 {
        return Err(Error::InvalidProblem("first factor must be linear".into()));
    }
    let product = lin.mul(rest);
    let mut out = ThueSolutionSet::new(product.clone(), c.clone(), Completeness::Exact, Strategy::LinearFactor);
    let (a, b) = (&lin.coeffs()[0], &lin.coeffs()[1]);
    let g = a.gcd(b);
    if g.is_zero() {
        return Err(Error::SingularFactors);
    }
    let ExtendedGcd { gcd, x, y, .. } = a.extended_gcd(b);
    for e in signed_divisors(c) {
        if !(&e % &gcd).is_zero() {
            continue;
        }
        let k = &e / &gcd;
        let (u0, v0) = (&x * &k, &y * &k);
        // u = u0 + (b/g) s, v = v0 - (a/g) s
        let (du, dv) = (b / &gcd, -(a / &gcd));
        let along = form_substitute(rest, &du, &u0, &dv, &v0).dehomogenize();
        let target = c / &e;
        for sign in [BigInt::one(), -BigInt::one()] {
            let poly = &along - &UniPoly::constant(&target * &sign);
            if poly.is_zero() {
                return Err(Error::SingularFactors);
            }
            for s in integer_roots(&poly) {
                let u = &u0 + &du * &s;
                let v = &v0 + &dv * &s;
                if u.gcd(&v).is_one() {
                    out.insert(u, v)?;
                }
            }
        }
    }
    Ok(out)
}

/// A bound on `max(|p|, |q|)` over solutions of a definite quartic `F = ±c`.
///
/// By AM-GM, `|p^3 q| <= (3p^4 + q^4)/4`, `|p q^3| <= (p^4 + 3q^4)/4` and
/// `p^2 q^2 <= (p^4 + q^4)/2`, so `4|F| >= A p^4 + B q^4` with explicit `A`, `B`; when
/// both are positive every solution has `p^4 <= 4|c|/A` and `q^4 <= 4|c|/B`.
pub fn definite_bound(f: &BinaryForm, c: &BigInt) -> Option<u64> {
    if f.degree() != 4 {
        return None;
    }
    let lead = &f.coeffs()[0];
    let g = if lead.is_negative() { f.neg() } else { f.clone() };
    let k = g.coeffs();
    let neg_mid = if k[2].is_negative() { -&k[2] } else { BigInt::zero() };
    let a: BigInt = &k[0] * 4 - k[1].abs() * 3 - k[3].abs() - &neg_mid * 2;
    let b: BigInt = &k[4] * 4 - k[1].abs() - k[3].abs() * 3 - &neg_mid * 2;
    if !a.is_positive() || !b.is_positive() {
        return None;
    }
    let c4: BigInt = c.abs() * 4;
    let ba = (&c4 / &a).nth_root(4);
    let bb = (&c4 / &b).nth_root(4);
    ba.max(bb).to_u64()
}

/// Exhaustive search over coprime pairs with max-norm at most `bound`.
pub fn solve_bounded(f: &BinaryForm, c: &BigInt, bound: u64) -> Result<ThueSolutionSet> {
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut out = ThueSolutionSet::new(f.clone(), c.clone(), Completeness::BoundedSearch(bound), Strategy::Bounded);
    let hits = match SmallForm::try_new(f, bound, &BigInt::one()) {
        Some(small) if c.abs().bits() < 120 => {
            let c = c.abs().to_i128().unwrap();
            scan_rows(bound, |q| small.row(q), |row, p, _| horner(row, p).abs() == c)
        }
        _ => {
            let m = ModForm::new(f);
            let (cp, cn) = (reduce_mod(c), reduce_mod(&-c));
            scan_rows(
                bound,
                |q| m.row(q),
                |row, p, q| {
                    let r = ModForm::horner(row, p);
                    (r == cp || r == cn) && f.eval_i64(p, q).abs() == c.abs()
                },
            )
        }
    };
    for (p, q) in hits {
        out.insert(BigInt::from(p), BigInt::from(q))?;
    }
    Ok(out)
}
