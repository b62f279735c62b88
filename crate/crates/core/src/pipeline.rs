//! End-to-end runs: one family instance, a sweep over `t`, or an arbitrary quartic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{
    expected_generators, family_substitution, known_ab_solutions, reconstruct_with, substitute_form, CatalogEntry, FamilyId,
    FamilyInstance,
};
use crate::oracle::check_routes;
use crate::reduction::{branch, branch_setup, cubic_resolvent, quadratic_forms, ElementTriple, QuarticPoly, ReductionProblem};
use crate::serial;
use crate::thue::{self, Completeness, Strategy, ThueSolutionSet};
use crate::algebra::{BinaryForm, TernaryQuadratic};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    /// Box for the cubic resolvent equation when no exact method applies.
    pub cubic: u64,
    /// Box for the quartic stage when no exact method applies.
    pub quartic: u64,
}

impl SearchBounds {
    pub fn uniform(b: u64) -> Self {
        SearchBounds { cubic: b, quartic: b }
    }
}

fn form_coeffs<S: Serializer>(f: &BinaryForm, s: S) -> std::result::Result<S::Ok, S::Error> {
    serial::big_seq(f.coeffs(), s)
}

fn opt_form_coeffs<S: Serializer>(f: &Option<BinaryForm>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match f {
        Some(f) => form_coeffs(f, s),
        None => s.serialize_none(),
    }
}

fn ternary_coeffs<S: Serializer>(q: &TernaryQuadratic, s: S) -> std::result::Result<S::Ok, S::Error> {
    serial::big_seq(q.coeffs(), s)
}

fn big_triple<S: Serializer>(v: &[BigInt; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    serial::big_seq(v, s)
}

fn big_pair<S: Serializer>(v: &(BigInt, BigInt), s: S) -> std::result::Result<S::Ok, S::Error> {
    serial::big_seq([&v.0, &v.1], s)
}

fn big_pairs<S: Serializer>(v: &[(BigInt, BigInt)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (p, q) in v {
        seq.serialize_element(&[serial::json_num(p), serial::json_num(q)])?;
    }
    seq.end()
}

fn opt_big<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => serial::big(n, s),
        None => s.serialize_none(),
    }
}

fn form_list<S: Serializer>(v: &[BinaryForm; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for f in v {
        let c: Vec<_> = f.coeffs().iter().map(serial::json_num).collect();
        seq.serialize_element(&c)?;
    }
    seq.end()
}

/// How a branch of the resolvent equation was handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `F1` after the family substitution, solved as a Thue equation and mapped back.
    Family,
    /// Search over parameters of the conic, keeping points that lift to solutions.
    Generic,
}

/// Parameter pairs found on one branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairSolutions {
    #[serde(serialize_with = "big_pairs")]
    pub pairs: Vec<(BigInt, BigInt)>,
    pub completeness: Completeness,
    pub strategy: Strategy,
}

impl From<&ThueSolutionSet> for PairSolutions {
    fn from(s: &ThueSolutionSet) -> Self {
        PairSolutions { pairs: s.solutions().to_vec(), completeness: s.completeness(), strategy: s.strategy() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchRecord {
    #[serde(serialize_with = "serial::big")]
    pub u: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub v: BigInt,
    pub route: Route,
    #[serde(serialize_with = "ternary_coeffs")]
    pub conic: TernaryQuadratic,
    #[serde(serialize_with = "big_triple")]
    pub conic_zero: [BigInt; 3],
    /// Coefficients of the three parametrizing quadratic forms.
    #[serde(serialize_with = "form_list")]
    pub parametrization: [BinaryForm; 3],
    /// `det / D^2` of the parametrization; `k` runs over its divisors.
    #[serde(serialize_with = "opt_big")]
    pub k_quotient: Option<BigInt>,
    #[serde(serialize_with = "form_coeffs")]
    pub f1: BinaryForm,
    #[serde(serialize_with = "form_coeffs")]
    pub f2: BinaryForm,
    /// `F1` after the family substitution (family route only).
    #[serde(serialize_with = "opt_form_coeffs")]
    pub ab_form: Option<BinaryForm>,
    pub solutions: PairSolutions,
    pub triples: Vec<ElementTriple>,
}

impl BranchRecord {
    pub fn is_exact(&self) -> bool {
        self.solutions.completeness.is_exact()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorRecord {
    pub triple: ElementTriple,
    #[serde(serialize_with = "big_pair")]
    pub branch: (BigInt, BigInt),
    /// `F(Q1, Q2)` at the triple.
    #[serde(serialize_with = "serial::big")]
    pub form_value: BigInt,
    /// Index from the discriminant ratio; absent when the element does not generate
    /// the field.
    #[serde(serialize_with = "opt_big")]
    pub oracle_index: Option<BigInt>,
    /// The oracle agrees the index is `i_m`.
    pub oracle_confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErratumCheck {
    pub tag: String,
    pub triple: ElementTriple,
    #[serde(serialize_with = "serial::big")]
    pub form_value: BigInt,
    #[serde(serialize_with = "opt_big")]
    pub oracle_index: Option<BigInt>,
    pub oracle_confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogMatch {
    pub matches: bool,
    /// Every stage of this instance was solved exactly, so the generator list is complete.
    pub exhaustive: bool,
    pub expected: Vec<CatalogEntry>,
    pub missing: Vec<ElementTriple>,
    /// Found but not listed; a mismatch only when the catalog claims completeness.
    pub unexpected: Vec<ElementTriple>,
    /// Published values that the catalog replaces, with their check results.
    pub printed_errata: Vec<ErratumCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunError {
    pub kind: &'static str,
    pub message: String,
}

impl RunError {
    fn from_error(e: &Error) -> Self {
        let kind = match e {
            Error::RouteDisagreement { .. } => "route_disagreement",
            Error::Internal(_) => "internal",
            Error::NoZeroFound(_) => "no_conic_zero",
            Error::KDoesNotDivide(_) => "k_does_not_divide",
            _ => "other",
        };
        RunError { kind, message: e.to_string() }
    }

    pub fn is_route_disagreement(&self) -> bool {
        self.kind == "route_disagreement"
    }
}

/// One value of `t` in a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TRecord {
    #[serde(serialize_with = "serial::big")]
    pub t: BigInt,
    pub f: QuarticPoly,
    pub monogenic: bool,
    #[serde(serialize_with = "serial::big_vec")]
    pub witnesses: Vec<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    /// Reducible instances are listed and skipped.
    pub irreducible: bool,
    pub cubic_solutions: Option<ThueSolutionSet>,
    pub branches: Vec<BranchRecord>,
    pub generators: Vec<GeneratorRecord>,
    pub catalog_match: Option<CatalogMatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<RunError>,
}

impl TRecord {
    /// No errors, and a catalog match wherever the catalog applies.
    pub fn ok(&self) -> bool {
        self.error.is_none() && (!self.monogenic || !self.irreducible || self.catalog_match.as_ref().is_some_and(|m| m.matches))
    }

    /// The reduction ran on this instance.
    pub fn ran(&self) -> bool {
        self.cubic_solutions.is_some()
    }

    pub fn generator_triples(&self) -> Vec<ElementTriple> {
        self.generators.iter().map(|g| g.triple.clone()).collect()
    }

    pub fn branch(&self, u: i64, v: i64) -> Option<&BranchRecord> {
        self.branches.iter().find(|b| b.u == BigInt::from(u) && b.v == BigInt::from(v))
    }

    /// The branch handled through the family substitution, if any.
    pub fn family_branch(&self) -> Option<&BranchRecord> {
        self.branches.iter().find(|b| b.route == Route::Family)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TRange {
    pub t_min: i64,
    pub t_max: i64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub monogenic: usize,
    /// Catalog comparisons, counted over monogenic instances.
    pub matched: usize,
    pub mismatched: usize,
    pub errors: usize,
    pub route_disagreements: usize,
    pub exhaustive: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub family: FamilyId,
    pub galois_group: &'static str,
    pub range: TRange,
    pub bound: SearchBounds,
    pub tool_version: &'static str,
    pub summary: SweepSummary,
    pub records: Vec<TRecord>,
}

impl SweepReport {
    pub fn all_match(&self) -> bool {
        self.records.iter().all(TRecord::ok)
    }

    pub fn record(&self, t: i64) -> Option<&TRecord> {
        self.records.iter().find(|r| r.t == BigInt::from(t))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn branch_family(
    inst: &FamilyInstance,
    prob: &ReductionProblem,
    u: &BigInt,
    v: &BigInt,
    bounds: SearchBounds,
) -> Result<Option<BranchRecord>> {
    if !(u.is_one() && v.is_zero()) {
        return Ok(None);
    }
    let (q0, param, forms) = branch_setup(prob, u, v)?;
    if !param.k_is_unit() {
        return Ok(None);
    }
    let sub = family_substitution(inst.id, &inst.t);
    let ab = substitute_form(&forms.f1, &sub);
    let mut sols = thue::solve(&ab, &BigInt::one(), bounds.quartic)?;
    for (a, b) in known_ab_solutions(inst.id, &inst.t) {
        sols.insert(a, b)?;
    }
    let mut triples = sols
        .solutions()
        .iter()
        .map(|(a, b)| reconstruct_with(inst, &param, &sub, (a, b)))
        .collect::<Result<Vec<_>>>()?;
    triples.sort();
    triples.dedup();
    Ok(Some(BranchRecord {
        u: u.clone(),
        v: v.clone(),
        route: Route::Family,
        conic: q0,
        conic_zero: param.zero.clone(),
        parametrization: [param.fx.clone(), param.fy.clone(), param.fz.clone()],
        k_quotient: param.k_quotient.clone(),
        f1: forms.f1,
        f2: forms.f2,
        ab_form: Some(ab),
        solutions: PairSolutions::from(&sols),
        triples,
    }))
}

fn branch_generic(prob: &ReductionProblem, u: &BigInt, v: &BigInt, bounds: SearchBounds) -> Result<BranchRecord> {
    let br = branch(prob, u, v, bounds.quartic)?;
    Ok(BranchRecord {
        u: br.u,
        v: br.v,
        route: Route::Generic,
        conic: br.q0,
        conic_zero: br.param.zero.clone(),
        parametrization: [br.param.fx.clone(), br.param.fy.clone(), br.param.fz.clone()],
        k_quotient: br.param.k_quotient.clone(),
        f1: br.forms.f1,
        f2: br.forms.f2,
        ab_form: None,
        solutions: PairSolutions { pairs: br.pairs, completeness: Completeness::BoundedSearch(br.bound), strategy: Strategy::Bounded },
        triples: br.triples,
    })
}

/// Cubic stage, every branch, and both index routes for each triple found.
pub struct PipelineRun {
    pub cubic: ThueSolutionSet,
    pub branches: Vec<BranchRecord>,
    pub generators: Vec<GeneratorRecord>,
}

impl PipelineRun {
    pub fn exhaustive(&self) -> bool {
        self.cubic.completeness().is_exact() && self.branches.iter().all(BranchRecord::is_exact)
    }
}

/// Runs the reduction. With a family instance, the `(1, 0)` branch goes through the
/// family substitution when the parametrization needs no division.
pub fn run_pipeline(prob: &ReductionProblem, family: Option<&FamilyInstance>, bounds: SearchBounds) -> Result<PipelineRun> {
    let cubic = thue::solve(&cubic_resolvent(prob), &prob.i_m, bounds.cubic)?;
    let mut branches = Vec::new();
    for (u, v) in cubic.solutions() {
        let fam = match family {
            Some(inst) => branch_family(inst, prob, u, v, bounds)?,
            None => None,
        };
        let rec = match fam {
            Some(r) => r,
            None => branch_generic(prob, u, v, bounds)?,
        };
        branches.push(rec);
    }
    let mut generators: Vec<GeneratorRecord> = Vec::new();
    for br in &branches {
        for e in &br.triples {
            if generators.iter().any(|g| &g.triple == e) {
                continue;
            }
            let rc = check_routes(&prob.f, e)?;
            if !rc.agree() {
                return Err(Error::RouteDisagreement { form: rc.form_value, oracle: format!("{:?}", rc.oracle) });
            }
            let oracle_confirmed = rc.oracle.index.as_ref() == Some(&prob.i_m);
            generators.push(GeneratorRecord {
                triple: e.clone(),
                branch: (br.u.clone(), br.v.clone()),
                form_value: rc.form_value,
                oracle_index: rc.oracle.index,
                oracle_confirmed,
            });
        }
    }
    generators.sort_by(|a, b| a.triple.cmp(&b.triple));
    Ok(PipelineRun { cubic, branches, generators })
}

fn erratum_check(f: &QuarticPoly, entry: &CatalogEntry) -> Result<ErratumCheck> {
    let rc = check_routes(f, &entry.triple)?;
    Ok(ErratumCheck {
        tag: entry.tag.clone(),
        triple: entry.triple.clone(),
        form_value: rc.form_value.clone(),
        oracle_confirmed: rc.oracle_says_generator() && rc.form_says_generator(),
        oracle_index: rc.oracle.index,
    })
}

fn catalog_match(inst: &FamilyInstance, run: &PipelineRun) -> Result<CatalogMatch> {
    let cat = expected_generators(inst.id, &inst.t);
    let expected = cat.triples();
    let found: Vec<ElementTriple> = run.generators.iter().map(|g| g.triple.clone()).collect();
    let missing: Vec<_> = expected.iter().filter(|e| !found.contains(e)).cloned().collect();
    let unexpected: Vec<_> = found.iter().filter(|e| !expected.contains(e)).cloned().collect();
    let printed_errata = cat.printed_errata.iter().map(|e| erratum_check(&inst.f, e)).collect::<Result<Vec<_>>>()?;
    let confirmed = run.generators.iter().all(|g| g.oracle_confirmed);
    Ok(CatalogMatch {
        matches: missing.is_empty() && (unexpected.is_empty() || !cat.complete) && confirmed,
        exhaustive: run.exhaustive(),
        expected: cat.entries,
        missing,
        unexpected,
        printed_errata,
    })
}

/// Full treatment of one family instance.
///
/// The reduction runs whenever `f` is irreducible: for non-monogenic `t` its triples
/// still satisfy `Z[α] = Z[ξ]`, but the catalog is only compared for monogenic `t`.
pub fn run_instance(inst: &FamilyInstance, bounds: SearchBounds) -> TRecord {
    let irreducible = inst.f.is_irreducible();
    let mut diagnostic = inst.monogenicity.diagnostic.clone();
    if !irreducible {
        diagnostic = Some("reducible polynomial".into());
    }
    let mut rec = TRecord {
        t: inst.t.clone(),
        f: inst.f.clone(),
        monogenic: inst.monogenic(),
        witnesses: inst.monogenicity.witnesses.clone(),
        diagnostic,
        irreducible,
        cubic_solutions: None,
        branches: Vec::new(),
        generators: Vec::new(),
        catalog_match: None,
        error: None,
    };
    if !irreducible {
        return rec;
    }
    let result = run_pipeline(&inst.problem(), Some(inst), bounds).and_then(|run| {
        let m = if inst.monogenic() { Some(catalog_match(inst, &run)?) } else { None };
        Ok((run, m))
    });
    match result {
        Ok((run, m)) => {
            rec.cubic_solutions = Some(run.cubic);
            rec.branches = run.branches;
            rec.generators = run.generators;
            rec.catalog_match = m;
        }
        Err(e) => rec.error = Some(RunError::from_error(&e)),
    }
    rec
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub family: FamilyId,
    pub t_min: i64,
    pub t_max: i64,
    pub bounds: SearchBounds,
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
}

fn summarize(records: &[TRecord]) -> SweepSummary {
    let mut s = SweepSummary { instances: records.len(), ..Default::default() };
    for r in records {
        s.monogenic += usize::from(r.monogenic);
        match (&r.error, &r.catalog_match) {
            (Some(e), _) => {
                s.errors += 1;
                if e.is_route_disagreement() {
                    s.route_disagreements += 1;
                }
            }
            (None, Some(m)) => {
                if m.matches {
                    s.matched += 1;
                } else {
                    s.mismatched += 1;
                }
                if m.exhaustive {
                    s.exhaustive += 1;
                }
            }
            (None, None) => {}
        }
    }
    s
}

pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.t_min > cfg.t_max {
        return Err(Error::InvalidProblem(format!("empty range: t_min {} > t_max {}", cfg.t_min, cfg.t_max)));
    }
    let work = || -> Vec<TRecord> {
        let mut records: Vec<TRecord> = (cfg.t_min..=cfg.t_max)
            .into_par_iter()
            .map(|t| run_instance(&FamilyInstance::from_i64(cfg.family, t), cfg.bounds))
            .collect();
        records.sort_by(|a, b| a.t.cmp(&b.t));
        records
    };
    let records = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(SweepReport {
        family: cfg.family,
        galois_group: cfg.family.galois_group(),
        range: TRange { t_min: cfg.t_min, t_max: cfg.t_max },
        bound: cfg.bounds,
        tool_version: TOOL_VERSION,
        summary: summarize(&records),
        records,
    })
}

/// Result of the reduction applied to an arbitrary quartic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReduceReport {
    pub f: QuarticPoly,
    #[serde(serialize_with = "serial::big")]
    pub m: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub d: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub n: BigInt,
    #[serde(serialize_with = "serial::big")]
    pub i_m: BigInt,
    pub bound: SearchBounds,
    pub tool_version: &'static str,
    #[serde(serialize_with = "form_coeffs")]
    pub resolvent: BinaryForm,
    #[serde(serialize_with = "ternary_coeffs")]
    pub q1: TernaryQuadratic,
    #[serde(serialize_with = "ternary_coeffs")]
    pub q2: TernaryQuadratic,
    pub cubic_solutions: ThueSolutionSet,
    pub branches: Vec<BranchRecord>,
    pub generators: Vec<GeneratorRecord>,
    /// True when every stage was solved exactly.
    pub exhaustive: bool,
}

impl ReduceReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// The generic pipeline on `f`; rejects reducible polynomials.
pub fn reduce(prob: &ReductionProblem, bounds: SearchBounds) -> Result<ReduceReport> {
    if !prob.f.is_irreducible() {
        return Err(Error::Reducible);
    }
    let run = run_pipeline(prob, None, bounds)?;
    let (q1, q2) = quadratic_forms(&prob.f);
    let exhaustive = run.exhaustive();
    Ok(ReduceReport {
        f: prob.f.clone(),
        m: prob.m.clone(),
        d: prob.d.clone(),
        n: prob.n.clone(),
        i_m: prob.i_m.clone(),
        bound: bounds,
        tool_version: TOOL_VERSION,
        resolvent: cubic_resolvent(prob),
        q1,
        q2,
        cubic_solutions: run.cubic,
        branches: run.branches,
        generators: run.generators,
        exhaustive,
    })
}

/// Index checks of one triple against one family instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub family: FamilyId,
    #[serde(serialize_with = "serial::big")]
    pub t: BigInt,
    pub monogenic: bool,
    pub triple: ElementTriple,
    pub canonical: ElementTriple,
    #[serde(serialize_with = "serial::big")]
    pub form_value: BigInt,
    #[serde(serialize_with = "opt_big")]
    pub oracle_index: Option<BigInt>,
    pub form_says_generator: bool,
    pub oracle_says_generator: bool,
    pub routes_agree: bool,
}

impl VerifyReport {
    pub fn generator(&self) -> bool {
        self.routes_agree && self.form_says_generator
    }
}

pub fn verify_triple(inst: &FamilyInstance, e: &ElementTriple) -> Result<VerifyReport> {
    let rc = check_routes(&inst.f, e)?;
    Ok(VerifyReport {
        family: inst.id,
        t: inst.t.clone(),
        monogenic: inst.monogenic(),
        triple: e.clone(),
        canonical: e.canonical(),
        form_says_generator: rc.form_says_generator(),
        oracle_says_generator: rc.oracle_says_generator(),
        routes_agree: rc.agree() && rc.form_says_generator() == rc.oracle_says_generator(),
        form_value: rc.form_value.abs(),
        oracle_index: rc.oracle.index,
    })
}
