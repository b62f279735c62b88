//! Index form reduction for quartic fields.
//!
//! For `f = x^4 + a1 x^3 + a2 x^2 + a3 x + a4` the index of `c1 ξ + c2 ξ^2 + c3 ξ^3`
//! is `F(Q1, Q2)` with a cubic resolvent form `F` and two ternary quadratics. A unit
//! value `F(u, v) = ±i_m` fixes the conic `u Q2 - v Q1 = 0`; parametrizing it by a
//! rational point turns `Q1 = ±u`, `Q2 = ±v` into quartic Thue equations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::algebra::{
    arith::perfect_square_root, discriminant, factor_univariate_deg_le4, signed_divisors, BinaryForm,
    TernaryQuadratic, UniPoly,
};
use crate::error::{Error, Result};
use crate::scan::{horner, is_square_i128, scan_pairs, scan_rows, SmallForm};
use crate::serial;

/// Monic quartic `x^4 + a1 x^3 + a2 x^2 + a3 x + a4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuarticPoly {
    #[serde(serialize_with = "serial::big")]
    pub a1: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub a2: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub a3: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub a4: BigInt,
}

impl QuarticPoly {
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt) -> Self {
        QuarticPoly { a1, a2, a3, a4 }
    }

    pub fn from_i64s(a: [i64; 4]) -> Self {
        let [a1, a2, a3, a4] = a.map(BigInt::from);
        Self::new(a1, a2, a3, a4)
    }

    /// `[a1, a2, a3, a4]`.
    pub fn coeffs(&self) -> [&BigInt; 4] {
        [&self.a1, &self.a2, &self.a3, &self.a4]
    }

    pub fn to_poly(&self) -> UniPoly {
        UniPoly::new(vec![
            self.a4.clone(),
            self.a3.clone(),
            self.a2.clone(),
            self.a1.clone(),
            BigInt::one(),
        ])
    }

    pub fn is_irreducible(&self) -> bool {
        factor_univariate_deg_le4(&self.to_poly())
            .map(|f| f.is_irreducible())
            .unwrap_or(false)
    }

    pub fn discriminant(&self) -> BigInt {
        discriminant(&self.to_poly()).expect("quartic has degree 4")
    }
}

impl fmt::Display for QuarticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// The equation `I(α) = m` for elements `α = (a + x ξ + y ξ^2 + z ξ^3) / d` of a field
/// generated by a root `ξ` of index `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionProblem {
    pub f: QuarticPoly,
    pub m: BigInt,
    pub d: BigInt,
    pub n: BigInt,
    pub i_m: BigInt,
}

impl ReductionProblem {
    pub fn new(f: QuarticPoly, m: BigInt, d: BigInt, n: BigInt) -> Result<Self> {
        for (name, x) in [("m", &m), ("d", &d), ("n", &n)] {
            if !x.is_positive() {
                return Err(Error::InvalidProblem(format!("{name} must be positive, got {x}")));
            }
        }
        let num = num_traits::pow(d.clone(), 6) * &m;
        let (i_m, r) = num.div_rem(&n);
        if !r.is_zero() {
            return Err(Error::InvalidProblem(format!("d^6 m = {num} is not divisible by n = {n}")));
        }
        Ok(ReductionProblem { f, m, d, n, i_m })
    }

    /// `m = d = n = 1`: generators of power integral bases.
    pub fn unit(f: QuarticPoly) -> Self {
        Self::new(f, BigInt::one(), BigInt::one(), BigInt::one()).expect("unit problem is valid")
    }
}

/// `α = c1 ξ + c2 ξ^2 + c3 ξ^3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementTriple {
    pub c1: BigInt,
    pub c2: BigInt,
    pub c3: BigInt,
}

impl ElementTriple {
    pub fn new(c1: BigInt, c2: BigInt, c3: BigInt) -> Self {
        ElementTriple { c1, c2, c3 }
    }

    pub fn from_i64s(c: [i64; 3]) -> Self {
        let [c1, c2, c3] = c.map(BigInt::from);
        Self::new(c1, c2, c3)
    }

    pub fn from_array(c: [BigInt; 3]) -> Self {
        let [c1, c2, c3] = c;
        Self::new(c1, c2, c3)
    }

    pub fn coords(&self) -> [&BigInt; 3] {
        [&self.c1, &self.c2, &self.c3]
    }

    pub fn to_array(&self) -> [BigInt; 3] {
        [self.c1.clone(), self.c2.clone(), self.c3.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.c1, -&self.c2, -&self.c3)
    }

    /// Representative with first nonzero coordinate positive.
    pub fn canonical(&self) -> Self {
        match self.coords().into_iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }
}

impl fmt::Display for ElementTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c1, self.c2, self.c3)
    }
}

impl Serialize for ElementTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serial::big_seq(self.coords(), s)
    }
}

/// `F(u, v) = u^3 - a2 u^2 v + (a1 a3 - 4 a4) u v^2 + (4 a2 a4 - a3^2 - a1^2 a4) v^3`.
pub fn cubic_resolvent_of(f: &QuarticPoly) -> BinaryForm {
    let QuarticPoly { a1, a2, a3, a4 } = f;
    BinaryForm::new(vec![
        BigInt::one(),
        -a2,
        a1 * a3 - a4 * 4,
        a2 * a4 * 4 - a3 * a3 - a1 * a1 * a4,
    ])
}

pub fn cubic_resolvent(prob: &ReductionProblem) -> BinaryForm {
    cubic_resolvent_of(&prob.f)
}

/// `(Q1, Q2)` with `I(c1 ξ + c2 ξ^2 + c3 ξ^3) = F(Q1(c), Q2(c))`.
pub fn quadratic_forms(f: &QuarticPoly) -> (TernaryQuadratic, TernaryQuadratic) {
    let QuarticPoly { a1, a2, a3, a4 } = f;
    let q1 = TernaryQuadratic::new(
        BigInt::one(),
        -a1,
        a2.clone(),
        a1 * a1 - a2 * 2,
        a3 - a1 * a2,
        -(a1 * a3) + a2 * a2 + a4,
    );
    let q2 = TernaryQuadratic::new(
        BigInt::zero(),
        BigInt::zero(),
        BigInt::one(),
        BigInt::from(-1),
        -a1,
        a2.clone(),
    );
    (q1, q2)
}

/// `u Q2 - v Q1`.
pub fn q_zero(u: &BigInt, v: &BigInt, q1: &TernaryQuadratic, q2: &TernaryQuadratic) -> Result<TernaryQuadratic> {
    if u.is_zero() && v.is_zero() {
        return Err(Error::InvalidProblem("(u, v) = (0, 0) does not define a conic".into()));
    }
    Ok(q2.combine(u, q1, &-v))
}

fn square_coeff(q: &TernaryQuadratic, i: usize) -> &BigInt {
    [&q.xx, &q.yy, &q.zz][i]
}

fn cross_coeff(q: &TernaryQuadratic, i: usize, j: usize) -> &BigInt {
    match (i.min(j), i.max(j)) {
        (0, 1) => &q.xy,
        (0, 2) => &q.xz,
        (1, 2) => &q.yz,
        _ => unreachable!("cross coefficient needs distinct indices"),
    }
}

fn primitive_canonical(t: [BigInt; 3]) -> [BigInt; 3] {
    let g = t.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let e = ElementTriple::from_array(t.map(|c| if g.is_zero() { c } else { c / &g }));
    e.canonical().to_array()
}

/// Ranking for zeros found in the same shell: more zero coordinates, smaller max-norm,
/// then lexicographically larger.
fn zero_rank(t: &[BigInt; 3]) -> (usize, std::cmp::Reverse<BigInt>, [BigInt; 3]) {
    let zeros = t.iter().filter(|c| c.is_zero()).count();
    let norm = t.iter().map(|c| c.abs()).max().unwrap();
    (zeros, std::cmp::Reverse(norm), t.clone())
}

/// A primitive nonzero zero of `q0`, or `None` if there is none with the two enumerated
/// coordinates of max-norm at most `bound`.
///
/// Coordinate axes are tried first. Otherwise all three square coefficients are
/// nonzero; `y` and `z` run over growing max-norm shells and `x` is solved exactly from
/// the quadratic, so zeros with a large `x` are still found.
pub fn nontrivial_zero(q0: &TernaryQuadratic, bound: u64) -> Option<[BigInt; 3]> {
    if q0.is_zero() {
        return None;
    }
    for i in 0..3 {
        if square_coeff(q0, i).is_zero() {
            let mut t = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
            t[i] = BigInt::one();
            return Some(t);
        }
    }
    let small = SmallConic::new(q0, bound);
    for r in 1..=bound as i64 {
        let mut best: Option<[BigInt; 3]> = None;
        let mut consider = |t: [BigInt; 3]| {
            let t = primitive_canonical(t);
            if best.as_ref().is_none_or(|b| zero_rank(&t) > zero_rank(b)) {
                best = Some(t);
            }
        };
        // shell max(|y|, |z|) = r, one of each ± pair
        let shell = (-r..=r)
            .map(|z| (r, z))
            .chain((-r + 1..r).map(|y| (y, r)));
        for (y, z) in shell {
            match &small {
                Some(s) => s.solve_x(y, z, &mut consider),
                None => solve_x_big(q0, &BigInt::from(y), &BigInt::from(z), &mut consider),
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Outcome of lattice reduction of an indefinite ternary form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndefiniteReduction {
    /// A nonzero integer zero met along the way.
    Isotropic([BigInt; 3]),
    /// Rows form a unimodular basis in which the form has small coefficients.
    Basis([[BigInt; 3]; 3]),
}

type Mat3 = [[BigInt; 3]; 3];

fn gram(g: &Mat3, b: &Mat3) -> Mat3 {
    let mut out: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = BigInt::zero();
            for k in 0..3 {
                for l in 0..3 {
                    acc += &b[i][k] * &g[k][l] * &b[j][l];
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

/// LLL on the symmetric matrix `g` with absolute values in the Lovász test, which
/// terminates for indefinite forms as well and either reduces `g` or stumbles on an
/// isotropic vector.
pub fn reduce_indefinite(g: &Mat3) -> IndefiniteReduction {
    use num_rational::BigRational;
    let mut b: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| BigInt::from(u8::from(i == j))));
    let c = BigRational::new(BigInt::from(99), BigInt::from(100));
    let mut k = 1;
    for _ in 0..10_000 {
        if k >= 3 {
            break;
        }
        let gb = gram(g, &b);
        let mut mu: [[BigRational; 3]; 3] = Default::default();
        let mut r: [BigRational; 3] = Default::default();
        for i in 0..3 {
            for j in 0..i {
                let mut v = BigRational::from_integer(gb[i][j].clone());
                for l in 0..j {
                    v -= &mu[j][l] * &mu[i][l] * &r[l];
                }
                mu[i][j] = v / &r[j];
            }
            let mut v = BigRational::from_integer(gb[i][i].clone());
            for l in 0..i {
                v -= &mu[i][l] * &mu[i][l] * &r[l];
            }
            if v.is_zero() {
                // b*_i is isotropic; expand it in the b_j
                let coef = star_coeffs(&mu, i);
                let den = coef.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
                let ints: [BigInt; 3] = std::array::from_fn(|j| (&coef[j] * BigRational::from_integer(den.clone())).to_integer());
                let v: [BigInt; 3] = std::array::from_fn(|col| (0..3).map(|j| &ints[j] * &b[j][col]).sum());
                return IndefiniteReduction::Isotropic(v);
            }
            r[i] = v;
        }
        // size reduction of b_k
        for j in (0..k).rev() {
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = BigRational::from_integer(q.clone());
                let mj = mu[j][..j].to_vec();
                for (x, y) in mu[k].iter_mut().zip(&mj) {
                    *x -= &qr * y;
                }
                mu[k][j] -= BigRational::from_integer(q);
            }
        }
        let m = &mu[k][k - 1];
        let swapped = (&r[k] + m * m * &r[k - 1]).abs();
        if swapped < &c * r[k - 1].abs() {
            b.swap(k, k - 1);
            k = k.saturating_sub(1).max(1);
        } else {
            k += 1;
        }
    }
    IndefiniteReduction::Basis(b)
}

/// Coefficients of `b*_l` on `b_0..b_l` from the Gram-Schmidt `mu`.
fn star_coeffs(mu: &[[num_rational::BigRational; 3]; 3], l: usize) -> [num_rational::BigRational; 3] {
    use num_rational::BigRational;
    let mut out: [BigRational; 3] = Default::default();
    out[l] = BigRational::one();
    for j in (0..l).rev() {
        let s = star_coeffs(mu, j);
        for (o, x) in out.iter_mut().zip(s.iter()).take(j + 1) {
            *o -= &mu[l][j] * x;
        }
    }
    out
}

/// A zero of `q0`: small shells first, then a search in a reduced basis, then larger
/// shells.
pub fn conic_zero(q0: &TernaryQuadratic) -> Option<[BigInt; 3]> {
    for b in [8, 64] {
        if let Some(z) = nontrivial_zero(q0, b) {
            return Some(z);
        }
    }
    match reduce_indefinite(&q0.doubled_matrix()) {
        IndefiniteReduction::Isotropic(v) => return Some(primitive_canonical(v)),
        IndefiniteReduction::Basis(basis) => {
            let g = gram(&q0.doubled_matrix(), &basis);
            let half = |x: &BigInt| x / 2;
            let reduced = TernaryQuadratic::new(
                half(&g[0][0]),
                g[0][1].clone(),
                half(&g[1][1]),
                g[0][2].clone(),
                g[1][2].clone(),
                half(&g[2][2]),
            );
            for b in [8, 64, 512] {
                if let Some(y) = nontrivial_zero(&reduced, b) {
                    let x = std::array::from_fn(|col| (0..3).map(|j| &y[j] * &basis[j][col]).sum());
                    return Some(primitive_canonical(x));
                }
            }
        }
    }
    [512, 2048].into_iter().find_map(|b| nontrivial_zero(q0, b))
}

fn solve_x_big(q0: &TernaryQuadratic, y: &BigInt, z: &BigInt, out: &mut impl FnMut([BigInt; 3])) {
    let a = &q0.xx;
    let b = &q0.xy * y + &q0.xz * z;
    let c = &q0.yy * y * y + &q0.yz * y * z + &q0.zz * z * z;
    let disc = &b * &b - a * &c * 4;
    let Some(s) = perfect_square_root(&disc) else {
        return;
    };
    let two_a: BigInt = a * 2;
    let cands: [BigInt; 2] = [-&b + &s, -&b - &s];
    for num in cands {
        if (&num % &two_a).is_zero() {
            out([num / &two_a, y.clone(), z.clone()]);
        }
    }
}

/// `i128` version of the shell solve when every intermediate provably fits.
struct SmallConic {
    c: [i128; 6],
}

impl SmallConic {
    fn new(q0: &TernaryQuadratic, bound: u64) -> Option<Self> {
        let max_bits = q0.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0);
        let bound_bits = 64 - bound.leading_zeros() as u64;
        // |b|, |c| < 4 * 2^(cb + 2 bb); disc < 2^(2 cb + 4 bb + 7)
        if 2 * max_bits + 4 * bound_bits + 8 > 126 {
            return None;
        }
        let c = q0.coeffs().map(|c| c.to_i128().unwrap());
        Some(SmallConic { c })
    }

    fn solve_x(&self, y: i64, z: i64, out: &mut impl FnMut([BigInt; 3])) {
        let [xx, xy, yy, xz, yz, zz] = self.c;
        let (y1, z1) = (y as i128, z as i128);
        let b = xy * y1 + xz * z1;
        let c = yy * y1 * y1 + yz * y1 * z1 + zz * z1 * z1;
        let disc = b * b - 4 * xx * c;
        if !is_square_i128(disc) {
            return;
        }
        let s = (disc as u128).isqrt() as i128;
        for num in [-b + s, -b - s] {
            if num % (2 * xx) == 0 {
                out([BigInt::from(num / (2 * xx)), BigInt::from(y), BigInt::from(z)]);
            }
        }
    }
}

/// Conic parametrization through a known zero.
///
/// With `i` the first nonzero coordinate of the zero `P0`, the line `r P0 + W` with
/// `W_i = 0` and the other coordinates `(p, q)` meets the conic again at
/// `L(W) W - Q0(W) P0`, where `L` is the polar form at `P0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamForms {
    pub fx: BinaryForm,
    pub fy: BinaryForm,
    pub fz: BinaryForm,
    /// `det(C) / D^2` when that is a nonzero integer.
    pub k_quotient: Option<BigInt>,
    pub zero: [BigInt; 3],
}

impl ParamForms {
    pub fn forms(&self) -> [&BinaryForm; 3] {
        [&self.fx, &self.fy, &self.fz]
    }

    pub fn eval(&self, p: &BigInt, q: &BigInt) -> [BigInt; 3] {
        [self.fx.eval(p, q), self.fy.eval(p, q), self.fz.eval(p, q)]
    }

    /// Divisors of `k_quotient` with both signs; empty without a quotient. Factors the
    /// quotient, which can be slow when it is large.
    pub fn k_candidates(&self) -> Vec<BigInt> {
        self.k_quotient.as_ref().map(signed_divisors).unwrap_or_default()
    }

    /// `k = ±1` is the only division the parametrization can need.
    pub fn k_is_unit(&self) -> bool {
        self.k_quotient.as_ref().is_some_and(|k| k.abs().is_one())
    }

    /// Rows `Fx, Fy, Fz`, columns `p^2, pq, q^2`.
    pub fn matrix(&self) -> [[BigInt; 3]; 3] {
        self.forms().map(|f| [f.coeffs()[0].clone(), f.coeffs()[1].clone(), f.coeffs()[2].clone()])
    }
}

fn det3(m: &[[BigInt; 3]; 3]) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

pub fn parametrize(q0: &TernaryQuadratic, zero: &[BigInt; 3]) -> Result<ParamForms> {
    let Some(i) = zero.iter().position(|c| !c.is_zero()) else {
        return Err(Error::InvalidProblem("base zero must be nonzero".into()));
    };
    if !q0.eval_triple(zero).is_zero() {
        return Err(Error::NotAZero(zero[0].clone(), zero[1].clone(), zero[2].clone()));
    }
    let free: Vec<usize> = (0..3).filter(|&c| c != i).collect();
    let (j, k) = (free[0], free[1]);
    let m = q0.doubled_matrix();
    let polar = |c: usize| (0..3).map(|a| &zero[a] * &m[a][c]).sum::<BigInt>();
    let lin = BinaryForm::linear(polar(j), polar(k));
    let qw = BinaryForm::new(vec![
        square_coeff(q0, j).clone(),
        cross_coeff(q0, j, k).clone(),
        square_coeff(q0, k).clone(),
    ]);
    let w = |c: usize| {
        if c == j {
            BinaryForm::linear(BigInt::one(), BigInt::zero())
        } else if c == k {
            BinaryForm::linear(BigInt::zero(), BigInt::one())
        } else {
            BinaryForm::zero(1)
        }
    };
    let mut comps: Vec<BinaryForm> = (0..3).map(|c| lin.mul(&w(c)).add(&qw.scale(&-&zero[c]))).collect();
    let first = comps.iter().flat_map(|f| f.coeffs()).find(|c| !c.is_zero()).cloned();
    match first {
        None => return Err(Error::Internal(format!("degenerate parametrization of {q0}"))),
        Some(c) if c.is_negative() => comps = comps.iter().map(BinaryForm::neg).collect(),
        _ => {}
    }
    let [fx, fy, fz]: [BinaryForm; 3] = comps.try_into().unwrap();
    if !q0.compose(&fx, &fy, &fz).is_zero() {
        return Err(Error::Internal(format!("parametrization of {q0} does not lie on the conic")));
    }
    let mut pf = ParamForms { fx, fy, fz, k_quotient: None, zero: zero.clone() };
    let mat = pf.matrix();
    let det = det3(&mat);
    let dd = mat.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c));
    let dd2 = &dd * &dd;
    if !det.is_zero() && (&det % &dd2).is_zero() {
        pf.k_quotient = Some(det / dd2);
    }
    Ok(pf)
}

/// `F1 = Q1 ∘ (Fx, Fy, Fz)` and `F2 = Q2 ∘ (Fx, Fy, Fz)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticForms {
    pub f1: BinaryForm,
    pub f2: BinaryForm,
    /// The form carrying the Thue equation (`F1`, or `F2` when `F1` vanishes) is zero
    /// or has a repeated factor.
    pub degenerate: bool,
}

pub fn quartic_forms(q1: &TernaryQuadratic, q2: &TernaryQuadratic, pf: &ParamForms) -> QuarticForms {
    let f1 = q1.compose(&pf.fx, &pf.fy, &pf.fz);
    let f2 = q2.compose(&pf.fx, &pf.fy, &pf.fz);
    let main = if f1.is_zero() { &f2 } else { &f1 };
    let degenerate = main.is_zero() || discriminant(&main.dehomogenize()).map_or(true, |d| d.is_zero());
    QuarticForms { f1, f2, degenerate }
}

/// `F(Q1(c), Q2(c))`.
pub fn index_form_value(prob: &ReductionProblem, e: &ElementTriple) -> BigInt {
    let (q1, q2) = quadratic_forms(&prob.f);
    let t = e.to_array();
    cubic_resolvent(prob).eval(&q1.eval_triple(&t), &q2.eval_triple(&t))
}

/// Search bounds tried in turn for a zero of the conic.
pub const ZERO_BOUNDS: [u64; 4] = [8, 64, 512, 2048];

/// Everything computed for one solution `(u, v)` of the resolvent equation.
#[derive(Debug, Clone)]
pub struct Branch {
    pub u: BigInt,
    pub v: BigInt,
    pub q0: TernaryQuadratic,
    pub param: ParamForms,
    pub forms: QuarticForms,
    /// Coprime `(p, q)` yielding a solution, canonical up to sign.
    pub pairs: Vec<(BigInt, BigInt)>,
    /// Canonical triples with `Q1 = ±u`, `Q2 = ±v`, sorted.
    pub triples: Vec<ElementTriple>,
    pub bound: u64,
}

/// Builds the conic and its parametrization for a branch, without searching.
pub fn branch_setup(prob: &ReductionProblem, u: &BigInt, v: &BigInt) -> Result<(TernaryQuadratic, ParamForms, QuarticForms)> {
    let value = cubic_resolvent(prob).eval(u, v);
    if value.abs() != prob.i_m {
        return Err(Error::InvalidProblem(format!("F({u}, {v}) = {value} is not ±{}", prob.i_m)));
    }
    let (q1, q2) = quadratic_forms(&prob.f);
    let q0 = q_zero(u, v, &q1, &q2)?;
    let zero = conic_zero(&q0).ok_or(Error::NoZeroFound(*ZERO_BOUNDS.last().unwrap()))?;
    let param = parametrize(&q0, &zero)?;
    let forms = quartic_forms(&q1, &q2, &param);
    Ok((q0, param, forms))
}

/// The integer multiple `s P` of a primitive conic point with `Q1 = ε u`, `Q2 = ε v`.
pub fn lift_point(
    q1: &TernaryQuadratic,
    q2: &TernaryQuadratic,
    u: &BigInt,
    v: &BigInt,
    point: &[BigInt; 3],
) -> Option<ElementTriple> {
    let (target, val) = if !u.is_zero() { (u, q1.eval_triple(point)) } else { (v, q2.eval_triple(point)) };
    if val.is_zero() {
        return None;
    }
    let (ratio, r) = target.div_rem(&val);
    if !r.is_zero() {
        return None;
    }
    let s = perfect_square_root(&ratio.abs())?;
    let e = ElementTriple::from_array(point.clone().map(|c| c * &s));
    let eps = if ratio.is_negative() { -BigInt::one() } else { BigInt::one() };
    let t = e.to_array();
    (q1.eval_triple(&t) == &eps * u && q2.eval_triple(&t) == &eps * v).then(|| e.canonical())
}

/// All triples `α` with `(Q1(α), Q2(α)) = ±(u, v)` coming from coprime `(p, q)` with
/// max-norm at most `bound`, plus multiples of the base zero.
pub fn generators_for_uv(prob: &ReductionProblem, u: &BigInt, v: &BigInt, bound: u64) -> Result<Vec<ElementTriple>> {
    Ok(branch(prob, u, v, bound)?.triples)
}

pub fn branch(prob: &ReductionProblem, u: &BigInt, v: &BigInt, bound: u64) -> Result<Branch> {
    let (q0, param, forms) = branch_setup(prob, u, v)?;
    let (q1, q2) = quadratic_forms(&prob.f);
    let (form, target) = if !u.is_zero() { (&forms.f1, u) } else { (&forms.f2, v) };

    let mut pairs = Vec::new();
    let mut triples = Vec::new();
    if !form.is_zero() {
        // s^2 F(p,q) = ±target g^2 forces |F(p,q) * target| to be a square
        let hits = match SmallForm::try_new(form, bound, target) {
            Some(small) => {
                let t = target.to_i128().unwrap();
                scan_rows(
                    bound,
                    |q| small.row(q),
                    |row, p, _| {
                        let val = horner(row, p);
                        val != 0 && is_square_i128((val * t).abs())
                    },
                )
            }
            None => scan_pairs(bound, |p, q| {
                let val = form.eval_i64(p, q);
                !val.is_zero() && perfect_square_root(&(val * target).abs()).is_some()
            }),
        };
        for (p, q) in hits {
            let (p, q) = (BigInt::from(p), BigInt::from(q));
            let vals = param.eval(&p, &q);
            let g = vals.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
            if g.is_zero() {
                continue;
            }
            let point = vals.map(|c| c / &g);
            if let Some(e) = lift_point(&q1, &q2, u, v, &point) {
                pairs.push((p, q));
                triples.push(e);
            }
        }
    }
    if let Some(e) = lift_point(&q1, &q2, u, v, &param.zero) {
        triples.push(e);
    }
    triples.sort();
    triples.dedup();
    for e in &triples {
        if index_form_value(prob, e).abs() != prob.i_m {
            return Err(Error::Internal(format!("triple {e} does not solve the index form equation")));
        }
    }
    Ok(Branch { u: u.clone(), v: v.clone(), q0, param, forms, pairs, triples, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::homogenize;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn x2(t: i64) -> QuarticPoly {
        QuarticPoly::from_i64s([0, 4 * t, 0, 1])
    }

    fn x5(t: i64) -> QuarticPoly {
        QuarticPoly::from_i64s([-2, -2, 6, 4 * t - 2])
    }

    fn x3(t: i64) -> QuarticPoly {
        QuarticPoly::from_i64s([24 * t, 12 * t + 4, 4, 1])
    }

    fn conic_check(q: &TernaryQuadratic, z: &[BigInt; 3]) {
        assert!(z.iter().any(|c| !c.is_zero()));
        assert!(q.eval_triple(z).is_zero(), "{z:?} is not a zero of {q}");
    }

    #[test]
    fn reduction_finds_far_zeros() {
        // a branch conic whose only small zeros have a middle coordinate near 2000
        let q = TernaryQuadratic::from_i64s([1, 20, -15840699, 39522945, -62811146600, 327465851148681]);
        assert_eq!(nontrivial_zero(&q, 64), None);
        let z = conic_zero(&q).unwrap();
        conic_check(&q, &z);
        let q = TernaryQuadratic::from_i64s([1, 8, -61551, 152019, -14922440, 4798035774]);
        conic_check(&q, &conic_zero(&q).unwrap());
    }

    #[test]
    fn reduction_of_isotropic_and_definite_forms() {
        let q = TernaryQuadratic::from_i64s([1, 0, 1, 0, 0, -1]);
        match reduce_indefinite(&q.doubled_matrix()) {
            IndefiniteReduction::Isotropic(v) => conic_check(&q, &v),
            IndefiniteReduction::Basis(m) => {
                let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                    - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                    + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
                assert_eq!(det.abs(), b(1));
            }
        }
        // positive definite: no zero at all
        assert_eq!(conic_zero(&TernaryQuadratic::from_i64s([1, 0, 1, 0, 0, 1])), None);
    }

    #[test]
    fn resolvent_examples() {
        for t in [-3i64, 0, 1, 7] {
            let f = cubic_resolvent_of(&x2(t));
            assert_eq!(f, BinaryForm::from_i64s(&[1, -4 * t, -4, 16 * t]));
            let g = cubic_resolvent_of(&x5(t));
            assert_eq!(g, BinaryForm::from_i64s(&[1, 2, -4 - 16 * t, -48 * t - 12]));
        }
        let prod = BinaryForm::from_i64s(&[1, -2]).mul(&BinaryForm::from_i64s(&[1, 2])).mul(&BinaryForm::from_i64s(&[1, -4]));
        assert_eq!(cubic_resolvent_of(&x2(1)), prod);
        assert_eq!(cubic_resolvent_of(&QuarticPoly::from_i64s([0; 4])), BinaryForm::from_i64s(&[1, 0, 0, 0]));
    }

    #[test]
    fn quadratic_form_examples() {
        let t = 3i64;
        let (q1, q2) = quadratic_forms(&x2(t));
        assert_eq!(q1, TernaryQuadratic::from_i64s([1, 0, 4 * t, -8 * t, 0, 16 * t * t + 1]));
        assert_eq!(q2, TernaryQuadratic::from_i64s([0, 0, 1, -1, 0, 4 * t]));
        let (q1, q2) = quadratic_forms(&x5(t));
        assert_eq!(q1, TernaryQuadratic::from_i64s([1, 2, -2, 8, 2, 14 + 4 * t]));
        assert_eq!(q2, TernaryQuadratic::from_i64s([0, 0, 1, -1, 2, -2]));
        let (q1, q2) = quadratic_forms(&QuarticPoly::from_i64s([0; 4]));
        assert_eq!(q1, TernaryQuadratic::from_i64s([1, 0, 0, 0, 0, 0]));
        assert_eq!(q2, TernaryQuadratic::from_i64s([0, 0, 1, -1, 0, 0]));
    }

    #[test]
    fn q_zero_examples() {
        let (q1, q2) = quadratic_forms(&QuarticPoly::from_i64s([2, 2, 4, 7]));
        assert_eq!(q_zero(&b(1), &b(0), &q1, &q2).unwrap(), q2);
        let neg = q_zero(&b(0), &b(1), &q1, &q2).unwrap();
        assert_eq!(neg, q1.combine(&b(-1), &q2, &b(0)));
        assert!(q_zero(&b(0), &b(0), &q1, &q2).is_err());
    }

    #[test]
    fn zeros_of_family_conics() {
        let one = [b(1), b(0), b(0)];
        let (_, q2) = quadratic_forms(&x2(5));
        assert_eq!(nontrivial_zero(&q2, 10), Some(one.clone()));
        let (_, q2) = quadratic_forms(&x3(-2));
        assert_eq!(nontrivial_zero(&q2, 10), Some(one));
        assert_eq!(nontrivial_zero(&TernaryQuadratic::from_i64s([1, 0, 1, 0, 0, 1]), 50), None);
    }

    #[test]
    fn zero_with_large_solved_coordinate() {
        // 2x^2 + 4xy - 61xz + 73y^2 + 158yz + 634z^2: x runs past the search bound
        let q0 = TernaryQuadratic::from_i64s([2, 4, 73, -61, 158, 634]);
        assert_eq!(nontrivial_zero(&q0, 10), None);
        let z = nontrivial_zero(&q0, 64).expect("zero found by solving for x");
        assert!(q0.eval_triple(&z).is_zero());
        assert_eq!(z, [b(185), b(-17), b(11)]);
    }

    #[test]
    fn parametrizations_through_unit_zero() {
        let one = [b(1), b(0), b(0)];
        let t = 4i64;
        let (_, q2) = quadratic_forms(&x2(t));
        let pf = parametrize(&q2, &one).unwrap();
        assert_eq!(pf.fx, BinaryForm::from_i64s(&[1, 0, 4 * t]));
        assert_eq!(pf.fy, BinaryForm::from_i64s(&[0, 1, 0]));
        assert_eq!(pf.fz, BinaryForm::from_i64s(&[0, 0, 1]));
        assert_eq!(pf.k_candidates(), vec![b(-1), b(1)]);
        assert!(pf.k_is_unit());

        let (_, q2) = quadratic_forms(&x3(t));
        let pf = parametrize(&q2, &one).unwrap();
        assert_eq!(pf.fx, BinaryForm::from_i64s(&[1, -24 * t, 12 * t + 4]));

        let (_, q2) = quadratic_forms(&x5(t));
        let pf = parametrize(&q2, &one).unwrap();
        assert_eq!(pf.fx, BinaryForm::from_i64s(&[1, 2, -2]));
        assert!(parametrize(&q2, &[b(0), b(1), b(0)]).is_err());
    }

    #[test]
    fn quartic_forms_of_x2_and_x4() {
        let one = [b(1), b(0), b(0)];
        let t = 3i64;
        let (q1, q2) = quadratic_forms(&x2(t));
        let pf = parametrize(&q2, &one).unwrap();
        let qf = quartic_forms(&q1, &q2, &pf);
        assert_eq!(qf.f1, BinaryForm::from_i64s(&[1, 0, 4 * t, 0, 1]));
        assert!(qf.f2.is_zero());
        assert!(!qf.degenerate);

        let x4 = QuarticPoly::from_i64s([2, 2, 4 * t, 36 * t * t - 16 * t + 2]);
        let (q1, q2) = quadratic_forms(&x4);
        let pf = parametrize(&q2, &one).unwrap();
        let qf = quartic_forms(&q1, &q2, &pf);
        assert_eq!(qf.f1, BinaryForm::from_i64s(&[1, -6, 14, 4 * t - 16, 36 * t * t - 24 * t + 10]));
        assert!(qf.f2.is_zero());
        // p = a + 2b, q = b gives back the family polynomial
        let sub = crate::algebra::form_substitute(&qf.f1, &b(1), &b(2), &b(0), &b(1));
        assert_eq!(sub, homogenize(&x4.to_poly(), 4).unwrap());
    }

    #[test]
    fn index_form_values_at_x2_one() {
        let prob = ReductionProblem::unit(x2(1));
        assert_eq!(index_form_value(&prob, &ElementTriple::from_i64s([1, 0, 0])), b(1));
        assert_eq!(index_form_value(&prob, &ElementTriple::from_i64s([4, 0, 1])).abs(), b(1));
        assert_eq!(index_form_value(&prob, &ElementTriple::from_i64s([0, 1, 0])), b(0));
        let e = ElementTriple::from_i64s([3, -2, 5]);
        assert_eq!(index_form_value(&prob, &e), index_form_value(&prob, &e.neg()));
    }

    #[test]
    fn problem_validation() {
        let f = x2(1);
        assert_eq!(ReductionProblem::new(f.clone(), b(3), b(2), b(4)).unwrap().i_m, b(48));
        assert!(ReductionProblem::new(f.clone(), b(1), b(1), b(2)).is_err());
        assert!(ReductionProblem::new(f, b(0), b(1), b(1)).is_err());
    }

    #[test]
    fn x2_branch_generators() {
        let prob = ReductionProblem::unit(x2(1));
        let g = generators_for_uv(&prob, &b(1), &b(0), 100).unwrap();
        assert_eq!(g, vec![ElementTriple::from_i64s([1, 0, 0]), ElementTriple::from_i64s([4, 0, 1])]);

        let a = 2i64;
        let prob = ReductionProblem::unit(x2(-a * a));
        let g = generators_for_uv(&prob, &b(1), &b(0), 100).unwrap();
        let mut expected: Vec<ElementTriple> = [
            [1, 0, 0],
            [-4 * a * a, 0, 1],
            [0, 2 * a, 1],
            [0, -2 * a, 1],
            [1 - 16 * a.pow(4), 2 * a, 4 * a * a],
            [1 - 16 * a.pow(4), -2 * a, 4 * a * a],
        ]
        .into_iter()
        .map(|t| ElementTriple::from_i64s(t).canonical())
        .collect();
        expected.sort();
        assert_eq!(g, expected);
        assert!(g.contains(&ElementTriple::from_i64s([255, 4, -16])));
    }

    #[test]
    fn x5_t95_second_branch_is_empty() {
        let prob = ReductionProblem::unit(x5(95));
        assert_eq!(cubic_resolvent(&prob).eval(&b(77), &b(-2)).abs(), b(1));
        let br = branch(&prob, &b(77), &b(-2), 100).unwrap();
        assert!(br.triples.is_empty());
        assert!(br.pairs.is_empty());
    }

    #[test]
    fn branch_rejects_non_solutions() {
        let prob = ReductionProblem::unit(x2(1));
        assert!(generators_for_uv(&prob, &b(1), &b(1), 10).is_err());
    }

    #[test]
    fn triple_canonical_sign() {
        assert_eq!(ElementTriple::from_i64s([0, -6, -1]).canonical(), ElementTriple::from_i64s([0, 6, 1]));
        assert_eq!(ElementTriple::from_i64s([0, 0, 0]).canonical(), ElementTriple::from_i64s([0, 0, 0]));
        assert_eq!(serde_json::to_string(&ElementTriple::from_i64s([17, -2, 4])).unwrap(), "[17,-2,4]");
    }
}
