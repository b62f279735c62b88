//! Five parametric families of monogenic quartics and their known generators.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{arith::perfect_square_root, form_substitute, squarefree_integer, BinaryForm};
use crate::error::{Error, Result};
use crate::reduction::{branch_setup, index_form_value, ElementTriple, ParamForms, QuarticForms, QuarticPoly, ReductionProblem};
use crate::serial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyId {
    X2,
    X3,
    X4,
    X5,
    C4,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] = [FamilyId::X2, FamilyId::X3, FamilyId::X4, FamilyId::X5, FamilyId::C4];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::X2 => "X2",
            FamilyId::X3 => "X3",
            FamilyId::X4 => "X4",
            FamilyId::X5 => "X5",
            FamilyId::C4 => "C4",
        }
    }

    /// Galois group of the splitting field, as metadata.
    pub fn galois_group(self) -> &'static str {
        match self {
            FamilyId::X2 => "V4",
            FamilyId::X3 => "D4",
            FamilyId::X4 => "A4",
            FamilyId::X5 => "S4",
            FamilyId::C4 => "C4",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidProblem(format!("unknown family {s:?}; expected one of X2, X3, X4, X5, C4")))
    }
}

/// `sum c_i t^i` for small integer coefficients.
fn poly_t(coeffs: &[i64], t: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, &c| acc * t + c)
}

pub fn family_poly(id: FamilyId, t: &BigInt) -> QuarticPoly {
    let p = |c: &[i64]| poly_t(c, t);
    match id {
        FamilyId::X2 => QuarticPoly::new(p(&[0]), p(&[0, 4]), p(&[0]), p(&[1])),
        FamilyId::X3 => QuarticPoly::new(p(&[0, 24]), p(&[4, 12]), p(&[4]), p(&[1])),
        FamilyId::X4 => QuarticPoly::new(p(&[2]), p(&[2]), p(&[0, 4]), p(&[2, -16, 36])),
        FamilyId::X5 => QuarticPoly::new(p(&[-2]), p(&[-2]), p(&[6]), p(&[-2, 4])),
        FamilyId::C4 => QuarticPoly::new(
            p(&[0, -4]),
            -p(&[-4, 0, 74, 0, -512, 0, 1536]),
            -p(&[0, 24, 0, -540, 0, 4608, 0, -19456, 0, 32768]),
            p(&[2, 0, 4, 0, -719, 0, 9216, 0, -54784, 0, 163840, 0, -196608]),
        ),
    }
}

/// Verdict of the square-freeness criterion with the integers it was applied to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Monogenicity {
    pub monogenic: bool,
    #[serde(serialize_with = "serial::big_vec")]
    pub witnesses: Vec<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// The integers whose square-freeness makes the family polynomial monogenic.
pub fn condition_integers(id: FamilyId, t: &BigInt) -> Vec<BigInt> {
    let p = |c: &[i64]| poly_t(c, t);
    match id {
        FamilyId::X2 => vec![p(&[-1, 0, 4])],
        FamilyId::X3 => vec![p(&[-1, 0, 36])],
        FamilyId::X4 => vec![p(&[-1, 4]) * p(&[7, -54, 108])],
        FamilyId::X5 => vec![p(&[1, 4]), p(&[-7, 4]), p(&[13, 64])],
        FamilyId::C4 => vec![p(&[-2, 0, 16]), p(&[2, 0, -64, 0, 64])],
    }
}

pub fn monogenicity_condition(id: FamilyId, t: &BigInt) -> Monogenicity {
    let witnesses = condition_integers(id, t);
    if let Some(z) = witnesses.iter().position(Zero::is_zero) {
        return Monogenicity {
            monogenic: false,
            witnesses,
            diagnostic: Some(format!("condition integer {} vanishes", z + 1)),
        };
    }
    let monogenic = witnesses.iter().all(|w| squarefree_integer(w).expect("nonzero"));
    Monogenicity { monogenic, witnesses, diagnostic: None }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyInstance {
    pub id: FamilyId,
    #[serde(serialize_with = "serial::big")]
    pub t: BigInt,
    pub f: QuarticPoly,
    pub monogenicity: Monogenicity,
}

impl FamilyInstance {
    pub fn new(id: FamilyId, t: BigInt) -> Self {
        let f = family_poly(id, &t);
        let monogenicity = monogenicity_condition(id, &t);
        FamilyInstance { id, t, f, monogenicity }
    }

    pub fn from_i64(id: FamilyId, t: i64) -> Self {
        Self::new(id, BigInt::from(t))
    }

    pub fn monogenic(&self) -> bool {
        self.monogenicity.monogenic
    }

    pub fn problem(&self) -> ReductionProblem {
        ReductionProblem::unit(self.f.clone())
    }
}

/// 2x2 integer matrix `[[m11, m12], [m21, m22]]` sending `(a, b)` to
/// `(p, q) = (m11 a + m12 b, m21 a + m22 b)`.
pub type Substitution = [[BigInt; 2]; 2];

fn subst(m: [[i64; 2]; 2], t: &BigInt, t_col: Option<i64>) -> Substitution {
    let mut s = m.map(|r| r.map(BigInt::from));
    if let Some(k) = t_col {
        s[0][1] = t * k;
    }
    s
}

/// Unimodular change of variables taking `F1` of the `(1, 0)` branch to
/// `homogenize(f, 4)`.
pub fn family_substitution(id: FamilyId, t: &BigInt) -> Substitution {
    match id {
        FamilyId::X2 => subst([[1, 0], [0, 1]], t, None),
        FamilyId::X3 => subst([[1, 0], [0, 1]], t, Some(24)),
        FamilyId::X4 => subst([[1, 2], [0, 1]], t, None),
        FamilyId::X5 => subst([[1, -2], [0, 1]], t, None),
        FamilyId::C4 => subst([[1, 0], [0, 1]], t, Some(-4)),
    }
}

/// The C4 substitution `p = a + 2tb`, `q = -b` behind the form `G`.
pub fn c4_printed_substitution(t: &BigInt) -> Substitution {
    [[BigInt::one(), t * 2], [BigInt::zero(), BigInt::from(-1)]]
}

pub fn substitution_det(m: &Substitution) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn apply_substitution(m: &Substitution, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    (&m[0][0] * a + &m[0][1] * b, &m[1][0] * a + &m[1][1] * b)
}

pub fn substitute_form(f: &BinaryForm, m: &Substitution) -> BinaryForm {
    form_substitute(f, &m[0][0], &m[0][1], &m[1][0], &m[1][1])
}

/// Conic data of the `(u, v) = (1, 0)` branch.
pub fn unit_branch(inst: &FamilyInstance) -> Result<(ParamForms, QuarticForms)> {
    let (_, param, forms) = branch_setup(&inst.problem(), &BigInt::one(), &BigInt::zero())?;
    Ok((param, forms))
}

/// `F1` of the unit branch after the family substitution.
pub fn ab_form(inst: &FamilyInstance) -> Result<BinaryForm> {
    let (_, forms) = unit_branch(inst)?;
    Ok(substitute_form(&forms.f1, &family_substitution(inst.id, &inst.t)))
}

/// `G(a, b) = F1(a + 2tb, -b)` for the C4 family.
pub fn c4_g_form(t: &BigInt) -> Result<BinaryForm> {
    let inst = FamilyInstance::new(FamilyId::C4, t.clone());
    let (_, forms) = unit_branch(&inst)?;
    Ok(substitute_form(&forms.f1, &c4_printed_substitution(t)))
}

/// `(64t^4 - 12t^2 + 1, 4t)`, a solution of `G(a, b) = ±1` for every `t`.
pub fn c4_parametric_solution(t: &BigInt) -> (BigInt, BigInt) {
    (poly_t(&[1, 0, -12, 0, 64], t), t * 4)
}

pub fn canonical_triple(e: &ElementTriple) -> ElementTriple {
    e.canonical()
}

/// Maps a solution of the `(a, b)`-form back to an element through the unit branch
/// parametrization.
pub fn reconstruct_generator(id: FamilyId, t: &BigInt, ab: (&BigInt, &BigInt)) -> Result<ElementTriple> {
    let inst = FamilyInstance::new(id, t.clone());
    let (param, _) = unit_branch(&inst)?;
    reconstruct_with(&inst, &param, &family_substitution(id, t), ab)
}

pub fn reconstruct_with(
    inst: &FamilyInstance,
    param: &ParamForms,
    sub: &Substitution,
    (a, b): (&BigInt, &BigInt),
) -> Result<ElementTriple> {
    let (p, q) = apply_substitution(sub, a, b);
    let vals = param.eval(&p, &q);
    let prob = inst.problem();
    let mut last = BigInt::one();
    for k in param.k_candidates().iter().filter(|k| k.is_positive()) {
        last = k.clone();
        if vals.iter().any(|v| !(v % k).is_zero()) {
            continue;
        }
        let e = ElementTriple::from_array(vals.clone().map(|v| v / k));
        if index_form_value(&prob, &e).abs().is_one() {
            return Ok(e.canonical());
        }
    }
    Err(Error::KDoesNotDivide(last))
}

/// Where a catalog entry comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntrySource {
    /// Stated in the literature and confirmed.
    Published,
    /// Published value was wrong; this is the recomputed one.
    Corrected,
    /// Not in the published list; found by the pipeline and confirmed by the oracle.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub tag: String,
    pub triple: ElementTriple,
    pub source: EntrySource,
}

/// Known generators of one instance, plus published values that fail verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorCatalog {
    pub entries: Vec<CatalogEntry>,
    pub printed_errata: Vec<CatalogEntry>,
    /// The entries are claimed to be all generators; otherwise only their existence is.
    pub complete: bool,
}

impl GeneratorCatalog {
    /// Distinct canonical triples, sorted.
    pub fn triples(&self) -> Vec<ElementTriple> {
        let mut v: Vec<ElementTriple> = self.entries.iter().map(|e| e.triple.canonical()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// `(t, (a, b), pipeline triple, printed triple)`.
pub type SporadicRow = (i64, (i64, i64), [i64; 3], [i64; 3]);

/// The nine sporadic X5 parameters.
pub const X5_SPORADIC: [SporadicRow; 9] = [
    (-736, (7, -1), [61, -9, 1], [101, -9, 1]),
    (-620, (23, 3), [373, 51, 9], [205, 51, 9]),
    (-414, (7, 1), [33, 5, 1], [17, 5, 1]),
    (-198, (5, -1), [33, -7, 1], [65, -7, 1]),
    (-88, (5, 1), [13, 3, 1], [5, 3, 1]),
    (-24, (3, -1), [13, -5, 1], [37, -5, 1]),
    (-6, (3, 1), [1, 1, 1], [1, 1, 1]),
    (0, (1, 1), [3, 1, -1], [5, -1, 1]),
    (2, (1, -1), [1, -3, 1], [17, -3, 1]),
];

/// `n >= 1` with `1 - 12t = (n + 1)^2`, the X3 parameters with two extra generators.
pub fn x3_conditional_n(t: &BigInt) -> Option<BigInt> {
    let s = perfect_square_root(&(BigInt::one() - t * 12))?;
    let n = s - 1;
    (n >= BigInt::one()).then_some(n)
}

/// `a >= 1` with `t = -a^2`.
pub fn x2_conditional_a(t: &BigInt) -> Option<BigInt> {
    if !t.is_negative() {
        return None;
    }
    perfect_square_root(&-t)
}

fn tri(c: [BigInt; 3]) -> ElementTriple {
    ElementTriple::from_array(c).canonical()
}

fn entry(tag: impl Into<String>, triple: ElementTriple, source: EntrySource) -> CatalogEntry {
    CatalogEntry { tag: tag.into(), triple: triple.canonical(), source }
}

pub fn expected_generators(id: FamilyId, t: &BigInt) -> GeneratorCatalog {
    use EntrySource::*;
    let b = |v: i64| BigInt::from(v);
    let mut entries = vec![entry("xi", ElementTriple::from_i64s([1, 0, 0]), Published)];
    let mut printed_errata = Vec::new();
    match id {
        FamilyId::X2 => {
            entries.push(entry("4t xi + xi^3", tri([t * 4, b(0), b(1)]), Published));
            if let Some(a) = x2_conditional_a(t) {
                let a4: BigInt = num_traits::pow(a.clone(), 4);
                for s in [1i64, -1] {
                    let two_a: BigInt = &a * 2 * s;
                    entries.push(entry(format!("t=-a^2, a={a}: {}2a xi^2 + xi^3", sign(s)), tri([b(0), two_a.clone(), b(1)]), Published));
                    entries.push(entry(
                        format!("t=-a^2, a={a}: (1-16a^4) xi {}2a xi^2 + 4a^2 xi^3", sign(s)),
                        tri([b(1) - &a4 * 16, two_a, &a * &a * 4]),
                        Published,
                    ));
                }
            }
        }
        FamilyId::X3 => {
            entries.push(entry("(12t+4) xi + 24t xi^2 + xi^3", tri([t * 12 + 4, t * 24, b(1)]), Published));
            entries.push(entry("17 xi + (96t-2) xi^2 + 4 xi^3", tri([b(17), t * 96 - 2, b(4)]), Published));
            if let Some(n) = x3_conditional_n(t) {
                let p = |c: &[i64]| poly_t(c, &n);
                entries.push(entry(
                    format!("1-12t=(n+1)^2, n={n}: first"),
                    tri([p(&[1, 0, 0, -4, -1]), p(&[0, 1, 0, -4, -2]), p(&[0, 0, 1])]),
                    Corrected,
                ));
                entries.push(entry(
                    format!("1-12t=(n+1)^2, n={n}: second"),
                    tri([p(&[17, 16, 0, -4, -1]), p(&[-2, -17, -24, -12, -2]), p(&[4, 4, 1])]),
                    Corrected,
                ));
            }
            if t.is_zero() {
                entries.push(entry("t=0, branch (u,v)=(1,-1)", ElementTriple::from_i64s([9, -1, 2]), Derived));
            }
        }
        FamilyId::X4 => {
            if t.is_zero() {
                entries.push(entry("t=0: xi + xi^2", ElementTriple::from_i64s([1, 1, 0]), Published));
            }
        }
        FamilyId::X5 => {
            if let Some(&(tt, _, fixed, printed)) = X5_SPORADIC.iter().find(|r| BigInt::from(r.0) == *t) {
                let source = if fixed == printed { Published } else { Corrected };
                entries.push(entry(format!("sporadic t={tt}"), ElementTriple::from_i64s(fixed), source));
                if fixed != printed {
                    printed_errata.push(entry(format!("sporadic t={tt}, as printed"), ElementTriple::from_i64s(printed), Published));
                }
            }
        }
        FamilyId::C4 => {
            let (fixed, printed) = c4_second_generator(t);
            entries.push(entry("second generator", fixed, Corrected));
            printed_errata.push(entry("second generator, as printed", printed, Published));
        }
    }
    // equal triples under different tags (X2 and C4 at t = 0) are listed once
    let mut seen = Vec::new();
    entries.retain(|e| {
        if seen.contains(&e.triple) {
            false
        } else {
            seen.push(e.triple.clone());
            true
        }
    });
    GeneratorCatalog { entries, printed_errata, complete: id != FamilyId::C4 }
}

/// Solutions of the `(a, b)`-form known in closed form, in `family_substitution`
/// coordinates. They can lie far outside any search box.
pub fn known_ab_solutions(id: FamilyId, t: &BigInt) -> Vec<(BigInt, BigInt)> {
    match id {
        FamilyId::C4 => {
            // the parametric solution, moved from the printed substitution to ours
            let (a, b) = c4_parametric_solution(t);
            let (p, q) = apply_substitution(&c4_printed_substitution(t), &a, &b);
            let back = [[BigInt::one(), t * 4], [BigInt::zero(), BigInt::one()]];
            vec![apply_substitution(&back, &p, &q)]
        }
        _ => Vec::new(),
    }
}

fn sign(s: i64) -> &'static str {
    if s > 0 {
        "+"
    } else {
        "-"
    }
}

/// The C4 second generator from the pipeline, and as printed.
pub fn c4_second_generator(t: &BigInt) -> (ElementTriple, ElementTriple) {
    let p = |c: &[i64]| poly_t(c, t);
    let fixed = tri([
        p(&[1, 0, 40, 0, -976, 0, 6656, 0, -20480]),
        p(&[0, -4, 0, 16, 0, -256]),
        p(&[0, 0, 16]),
    ]);
    let printed = tri([
        p(&[1, 0, 56, 0, -1104, 0, 7680, 0, -20480]),
        p(&[0, -4, 0, -16, 0, -256]),
        p(&[0, 0, 16]),
    ]);
    (fixed, printed)
}

/// `t` as `i64`, for the small-parameter tables.
pub fn t_i64(t: &BigInt) -> Option<i64> {
    t.to_i64()
}
