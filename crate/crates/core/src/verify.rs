//! Verification suites over seeded and hand-built instances.
//!
//! Each suite pairs a characterization result with the audits or deciders
//! that test it. Instances run in parallel; the report is assembled in seed
//! order, so it is a pure function of the suites, seeds and parameters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    analyze, build_cbt_witness, build_incompleteness_witness, AnalysisError, AnalysisReport, Intersection,
};
use crate::axioms::{generate_act_grid, AuditContext, AuditReport, AxiomError, AxiomKind, Battery, Verdict, Witness};
use crate::builtin;
use crate::generate::{generate_instance, GenError, GenParams};
use crate::margins::{margin_profile, Model, ModelKind};
use crate::model::{utility_vector, Act, Instance, UtilityVector};
use crate::rational::{self, ratio, Rational};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "AMBIPREF_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Thm2,
    Thm3,
    Thm4,
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Prop6,
    Lemma3,
    Fig4,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Thm2,
        Suite::Thm3,
        Suite::Thm4,
        Suite::Prop1,
        Suite::Prop2,
        Suite::Prop3,
        Suite::Prop4,
        Suite::Prop5,
        Suite::Prop6,
        Suite::Lemma3,
        Suite::Fig4,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
            Suite::Thm4 => "thm4",
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Prop3 => "prop3",
            Suite::Prop4 => "prop4",
            Suite::Prop5 => "prop5",
            Suite::Prop6 => "prop6",
            Suite::Lemma3 => "lemma3",
            Suite::Fig4 => "fig4",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Suite::Thm2 => "disjunctive model passes completeness",
            Suite::Thm3 => "conjunctive model passes constant-bound transitivity",
            Suite::Thm4 => "half mixture passes completeness and constant-bound transitivity",
            Suite::Prop1 => "maxmin = minmax everywhere iff complete and constant-bound transitive",
            Suite::Prop2 => "two states, complete and constant-bound transitive: expected utility under p*",
            Suite::Prop3 => "incomplete iff a cutting hyperplane exists",
            Suite::Prop4 => "constant-bound transitive iff the belief sets pairwise intersect",
            Suite::Prop5 => "conjunctive model passes negative completeness",
            Suite::Prop6 => "disjunctive model passes negative constant-bound transitivity",
            Suite::Lemma3 => "completeness and negative constant-bound transitivity agree on the closed battery",
            Suite::Fig4 => "an unequal mixture violates completeness or constant-bound transitivity",
        }
    }

    /// Suites that hold when no counterexample appears; `fig4` instead
    /// needs at least one finding.
    pub fn is_search(self) -> bool {
        self == Suite::Fig4
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        Suite::ALL
            .into_iter()
            .find(|x| x.id() == t)
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Suite {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `"thm2,prop4"` or `"all"`.
pub fn parse_suites(list: &str) -> Result<Vec<Suite>, VerifyError> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out: Vec<Suite> = list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(VerifyError::UnknownSuite(list.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("bad seed range {0:?} (expected A..B with A <= B)")]
    BadSeedRange(String),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error("audit failed to run: {0}")]
    Audit(#[from] AxiomError),
    #[error("analysis failed to run: {0}")]
    Analysis(#[from] AnalysisError),
    #[error("invalid {THREADS_ENV}: {0:?}")]
    Threads(String),
}

/// Inclusive seed range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub first: u64,
    pub last: u64,
}

impl SeedRange {
    pub fn new(first: u64, last: u64) -> Self {
        Self { first, last }
    }

    pub fn len(&self) -> u64 {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl FromStr for SeedRange {
    type Err = VerifyError;

    /// `"A..B"` (both ends included) or a single seed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || VerifyError::BadSeedRange(s.to_string());
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| err());
        let (first, last) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if first > last {
            return Err(err());
        }
        Ok(Self { first, last })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyParams {
    /// state counts, cycled by seed
    pub states: Vec<usize>,
    pub num_sets: usize,
    pub vertices_per_set: usize,
    pub denominator_bound: u32,
    pub resolution: u32,
    #[serde(with = "rational::serde_str")]
    pub radius: Rational,
    /// also run the hand-built instances
    pub include_builtins: bool,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            states: vec![2, 3],
            num_sets: 3,
            vertices_per_set: 3,
            denominator_bound: 20,
            resolution: 2,
            radius: Rational::one(),
            include_builtins: true,
        }
    }
}

impl VerifyParams {
    pub fn gen_params(&self, seed: u64) -> GenParams {
        let states = if self.states.is_empty() {
            2
        } else {
            self.states[(seed % self.states.len() as u64) as usize]
        };
        GenParams {
            num_states: states,
            num_sets: self.num_sets,
            vertices_per_set: self.vertices_per_set,
            denominator_bound: self.denominator_bound,
            family: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub instance: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

/// A replayed violation by the unequal mixture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixtureFinding {
    pub instance: String,
    pub axiom: AxiomKind,
    pub phi: UtilityVector,
    #[serde(with = "rational::serde_str")]
    pub maxmin: Rational,
    #[serde(with = "rational::serde_str")]
    pub minmax: Rational,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteEntry {
    pub suite: Suite,
    pub statement: String,
    pub instances: usize,
    pub batteries: Vec<String>,
    pub verdict: Verdict,
    pub counterexamples: Vec<Counterexample>,
    pub boundary_flags: u64,
    /// named counts describing how the checks split across instances
    pub tallies: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<MixtureFinding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub seeds: SeedRange,
    pub params: VerifyParams,
    pub suites: Vec<SuiteEntry>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn entry(&self, suite: Suite) -> Option<&SuiteEntry> {
        self.suites.iter().find(|e| e.suite == suite)
    }
}

/// Findings kept per suite entry.
const MAX_FINDINGS: usize = 5;

#[derive(Default)]
struct Outcome {
    counterexamples: Vec<Counterexample>,
    boundary_flags: u64,
    tallies: BTreeMap<String, u64>,
    findings: Vec<MixtureFinding>,
    batteries: BTreeSet<String>,
}

impl Outcome {
    fn tally(&mut self, key: &str) {
        *self.tallies.entry(key.to_string()).or_default() += 1;
    }

    fn fail(&mut self, label: &str, detail: impl Into<String>, witnesses: Vec<Witness>) {
        self.counterexamples.push(Counterexample {
            instance: label.to_string(),
            detail: detail.into(),
            witnesses,
        });
    }

    fn audited(&mut self, report: &AuditReport) {
        self.boundary_flags += report.boundary_flags;
        self.batteries.insert(report.battery.description.clone());
    }

    /// Expects the audit to pass; records the first witnesses otherwise.
    fn expect_pass(&mut self, label: &str, report: &AuditReport) {
        self.audited(report);
        self.tally(&format!("{}_{}", report.axiom, if report.passed() { "passed" } else { "failed" }));
        if !report.passed() {
            self.fail(
                label,
                format!("{} fails {} ({} violations)", report.model, report.axiom, report.violations),
                report.witnesses.iter().take(2).cloned().collect(),
            );
        }
    }
}

struct Case {
    label: String,
    inst: Instance,
}

/// Lazily built per-instance data shared by the suites.
struct Workspace<'a> {
    case: &'a Case,
    battery: Battery,
    analysis: Option<AnalysisReport>,
}

impl<'a> Workspace<'a> {
    fn analysis(&mut self) -> Result<&AnalysisReport, VerifyError> {
        if self.analysis.is_none() {
            let vectors: Vec<UtilityVector> =
                self.battery.acts.iter().map(|a| utility_vector(self.case.inst.utility(), a)).collect();
            self.analysis = Some(analyze(&self.case.inst, &vectors)?);
        }
        Ok(self.analysis.as_ref().expect("just set"))
    }

    fn context(&self, kind: &ModelKind) -> Result<AuditContext<'_>, VerifyError> {
        Ok(AuditContext::new(kind, &self.case.inst, &self.battery)?)
    }

    fn extended(&self, extra: &[&Act], what: &str) -> Battery {
        let mut acts = self.battery.acts.clone();
        acts.extend(extra.iter().map(|&a| a.clone()));
        Battery::new(format!("{} plus {what}", self.battery.description), acts)
    }
}

fn run_case(case: &Case, suites: &[Suite], params: &VerifyParams) -> Result<Vec<Outcome>, VerifyError> {
    let battery = generate_act_grid(&case.inst, params.resolution, &params.radius)?;
    let mut ws = Workspace {
        case,
        battery,
        analysis: None,
    };
    suites.iter().map(|&s| run_suite(s, &mut ws)).collect()
}

fn run_suite(suite: Suite, ws: &mut Workspace<'_>) -> Result<Outcome, VerifyError> {
    let mut out = Outcome::default();
    let label = ws.case.label.clone();
    match suite {
        Suite::Thm2 => {
            let r = ws.context(&ModelKind::Disjunctive)?.audit(AxiomKind::Completeness)?;
            out.expect_pass(&label, &r);
        }
        Suite::Thm3 => {
            let r = ws.context(&ModelKind::Conjunctive)?.audit(AxiomKind::ConstantBoundTransitivity)?;
            out.expect_pass(&label, &r);
        }
        Suite::Thm4 => {
            let ctx = ws.context(&ModelKind::HalfMixture)?;
            for axiom in [AxiomKind::Completeness, AxiomKind::ConstantBoundTransitivity] {
                let r = ctx.audit(axiom)?;
                out.expect_pass(&label, &r);
            }
        }
        Suite::Prop5 => {
            let r = ws.context(&ModelKind::Conjunctive)?.audit(AxiomKind::NegativeCompleteness)?;
            out.expect_pass(&label, &r);
        }
        Suite::Prop6 => {
            let r = ws.context(&ModelKind::Disjunctive)?.audit(AxiomKind::NegativeConstantBoundTransitivity)?;
            out.expect_pass(&label, &r);
        }
        Suite::Prop1 => prop1(ws, &mut out)?,
        Suite::Prop2 => prop2(ws, &mut out)?,
        Suite::Prop3 => prop3(ws, &mut out)?,
        Suite::Prop4 => prop4(ws, &mut out)?,
        Suite::Lemma3 => lemma3(ws, &mut out)?,
        Suite::Fig4 => fig4(ws, &mut out)?,
    }
    Ok(out)
}

fn prop1(ws: &mut Workspace<'_>, out: &mut Outcome) -> Result<(), VerifyError> {
    let label = ws.case.label.clone();
    let coll = ws.case.inst.collection().clone();
    let report = ws.analysis()?.clone();
    out.batteries.insert(ws.battery.description.clone());
    let both = report.complete_param && report.cbt_param;
    out.tally(if both { "complete_and_cbt" } else { "not_complete_or_not_cbt" });
    out.tally(if report.commutes.holds { "commutes_on_battery" } else { "commutation_fails_on_battery" });
    if both && !report.commutes.holds {
        let c = report.commutes.counterexample.as_ref().expect("failing verdict has a counterexample");
        out.fail(
            &label,
            format!(
                "parameters say complete and CBT but maxmin {} != minmax {} at {}",
                rational::format(&c.maxmin),
                rational::format(&c.minmax),
                c.phi
            ),
            vec![],
        );
    }
    // the certificate of a failed parameter is itself a direction where the operators differ
    let mut directions = Vec::new();
    if let Some(cut) = &report.cutting {
        directions.push(("cutting normal", cut.normal.shift(&-cut.offset.clone())));
    }
    if let Some((_, _, cert)) = report.pairwise_intersections.first_failure() {
        directions.push(("separation direction", cert.phi1.clone()));
    }
    for (what, phi) in directions {
        let p = margin_profile(&coll, &phi);
        if p.maxmin == p.minmax {
            out.fail(&label, format!("{what} {phi} does not separate maxmin from minmax"), vec![]);
        } else {
            out.tally("certificate_direction_breaks_commutation");
        }
    }
    Ok(())
}

fn prop2(ws: &mut Workspace<'_>, out: &mut Outcome) -> Result<(), VerifyError> {
    if ws.case.inst.num_states() != 2 {
        out.tally("skipped_not_binary");
        return Ok(());
    }
    let label = ws.case.label.clone();
    let report = ws.analysis()?.clone();
    out.batteries.insert(ws.battery.description.clone());
    if !(report.complete_param && report.cbt_param) {
        out.tally("binary_not_both");
        return Ok(());
    }
    out.tally("binary_complete_and_cbt");
    let Some(prior) = report.seu_collapse.clone() else {
        out.fail(&label, "complete and CBT but no collapse prior", vec![]);
        return Ok(());
    };
    let gb = ws.context(&ModelKind::GeneralizedBewley)?;
    let seu = ws.context(&ModelKind::Seu(prior.clone()))?;
    let utils = gb.utilities();
    let mut mismatches = 0u64;
    for f in utils {
        for g in utils {
            let phi = f.sub(g);
            if gb.model().margin(&phi).is_negative() != seu.model().margin(&phi).is_negative() {
                mismatches += 1;
            }
        }
    }
    if mismatches > 0 {
        out.fail(&label, format!("SEU({prior}) disagrees with the model on {mismatches} pairs"), vec![]);
    } else {
        out.tally("seu_matches_on_every_pair");
    }
    Ok(())
}

fn prop3(ws: &mut Workspace<'_>, out: &mut Outcome) -> Result<(), VerifyError> {
    let label = ws.case.label.clone();
    let inst = ws.case.inst.clone();
    let report = ws.analysis()?.clone();
    match &report.cutting {
        Some(cut) => {
            out.tally("cutting_hyperplane");
            let w = build_incompleteness_witness(inst.collection(), cut, &inst)?;
            if !w.replays(&inst) {
                out.fail(&label, "incompleteness witness does not replay", vec![]);
                return Ok(());
            }
            let extended = ws.extended(&[&w.f, &w.x0], "the incompleteness witness");
            let r = AuditContext::new(&ModelKind::GeneralizedBewley, &inst, &extended)?.audit(AxiomKind::Completeness)?;
            out.audited(&r);
            if r.passed() {
                out.fail(&label, "completeness audit misses the witness pair", vec![]);
            } else {
                out.tally("witness_replayed_and_audit_fails");
            }
        }
        None => {
            out.tally("no_cutting_hyperplane");
            let r = ws.context(&ModelKind::GeneralizedBewley)?.audit(AxiomKind::Completeness)?;
            out.expect_pass(&label, &r);
        }
    }
    Ok(())
}

fn prop4(ws: &mut Workspace<'_>, out: &mut Outcome) -> Result<(), VerifyError> {
    let label = ws.case.label.clone();
    let inst = ws.case.inst.clone();
    let report = ws.analysis()?.clone();
    let coll = inst.collection();
    for pair in &report.pairwise_intersections.pairs {
        let (a, b) = (coll.get(&pair.first).expect("named"), coll.get(&pair.second).expect("named"));
        if pair.intersection.verify(a, b) {
            out.tally(match pair.intersection {
                Intersection::CommonPrior { .. } => "pairs_common_prior_verified",
                Intersection::Disjoint { .. } => "pairs_certificate_verified",
            });
        } else {
            out.fail(&label, format!("evidence for {} and {} does not verify", pair.first, pair.second), vec![]);
        }
    }
    match report.pairwise_intersections.first_failure() {
        Some((_, _, cert)) => {
            out.tally("disjoint_pair");
            let w = build_cbt_witness(coll, cert, &inst)?;
            if !w.replays(&inst) {
                out.fail(&label, "CBT witness does not replay", vec![]);
                return Ok(());
            }
            let extended = ws.extended(&[&w.x0, &w.f, &w.x_eps], "the CBT witness");
            let r = AuditContext::new(&ModelKind::GeneralizedBewley, &inst, &extended)?
                .audit(AxiomKind::ConstantBoundTransitivity)?;
            out.audited(&r);
            if r.passed() {
                out.fail(&label, "CBT audit misses the witness triple", vec![]);
            } else {
                out.tally("witness_replayed_and_audit_fails");
            }
        }
        None => {
            out.tally("pairwise_intersecting");
            let r = ws.context(&ModelKind::GeneralizedBewley)?.audit(AxiomKind::ConstantBoundTransitivity)?;
            out.expect_pass(&label, &r);
        }
    }
    Ok(())
}

/// Acts that turn each incomparable pair of the battery into a
/// negative-CBT violation: the center constant `c` and `c + (u(f) - u(g))/2`
/// for every pair `f, g` compared neither way.
pub fn completeness_closure(ctx: &AuditContext<'_>, inst: &Instance) -> Result<Vec<Act>, VerifyError> {
    let u = inst.utility();
    let center = (u.min_value() + u.max_value()) / rational::int(2);
    let half = ratio(1, 2);
    let utils = ctx.utilities();
    let mut seen: BTreeSet<Vec<Rational>> = utils.iter().map(|v| v.entries().to_vec()).collect();
    let mut acts = Vec::new();
    let mut push = |v: UtilityVector, acts: &mut Vec<Act>| -> Result<(), VerifyError> {
        if seen.insert(v.entries().to_vec()) {
            acts.push(inst.act_with_utility(&v).map_err(AxiomError::from)?);
        }
        Ok(())
    };
    let model = ctx.model();
    for (i, f) in utils.iter().enumerate() {
        for g in &utils[i + 1..] {
            let phi = f.sub(g);
            if model.margin(&phi).is_negative() && model.margin(&phi.neg()).is_negative() {
                if acts.is_empty() {
                    push(UtilityVector::constant(center.clone(), inst.num_states()), &mut acts)?;
                }
                push(phi.scale(&half).shift(&center), &mut acts)?;
                push(phi.neg().scale(&half).shift(&center), &mut acts)?;
            }
        }
    }
    Ok(acts)
}

fn lemma3(ws: &mut Workspace<'_>, out: &mut Outcome) -> Result<(), VerifyError> {
    let label = ws.case.label.clone();
    let inst = ws.case.inst.clone();
    let ctx = ws.context(&ModelKind::GeneralizedBewley)?;
    let complete = ctx.audit(AxiomKind::Completeness)?;
    let ncbt = ctx.audit(AxiomKind::NegativeConstantBoundTransitivity)?;
    out.audited(&complete);
    out.audited(&ncbt);
    out.tally(match (complete.passed(), ncbt.passed()) {
        (true, true) => "grid_both_pass",
        (false, false) => "grid_both_fail",
        (false, true) => "grid_only_completeness_fails",
        (true, false) => "grid_only_ncbt_fails",
    });
    let closure = completeness_closure(&ctx, &inst)?;
    drop(ctx);
    let (complete, ncbt) = if closure.is_empty() {
        (complete, ncbt)
    } else {
        let refs: Vec<&Act> = closure.iter().collect();
        let extended = ws.extended(&refs, "its completeness closure");
        let ctx = AuditContext::new(&ModelKind::GeneralizedBewley, &inst, &extended)?;
        let (c, n) = (ctx.audit(AxiomKind::Completeness)?, ctx.audit(AxiomKind::NegativeConstantBoundTransitivity)?);
        out.audited(&c);
        out.audited(&n);
        (c, n)
    };
    out.tally(if complete.passed() { "closed_both_pass" } else { "closed_both_fail" });
    if complete.verdict != ncbt.verdict {
        let mut witnesses: Vec<Witness> = complete.witnesses.iter().take(1).cloned().collect();
        witnesses.extend(ncbt.witnesses.iter().take(1).cloned());
        out.fail(
            &label,
            format!("completeness {:?} but negative CBT {:?}", complete.verdict, ncbt.verdict),
            witnesses,
        );
    }
    Ok(())
}

/// Mixture weight searched for by `fig4`.
pub fn search_alpha() -> Rational {
    ratio(3, 4)
}

/// With `M` the mixture margin, `M(φ) + M(-φ) = (2α - 1)(maxmin - minmax)`.
/// A positive sum yields constants `x < y` with `x ≿ f ≿ y`; a negative sum
/// yields an act incomparable with a constant. Returns the acts and the
/// axiom they break, or `None` when the operators agree at `phi`.
pub fn mixture_violation(
    inst: &Instance,
    alpha: &Rational,
    phi: &UtilityVector,
) -> Result<Option<(AxiomKind, Battery)>, VerifyError> {
    let model = Model::new(ModelKind::AlphaMixture(alpha.clone()), inst.collection()).map_err(AxiomError::from)?;
    let u = inst.utility();
    let center = (u.min_value() + u.max_value()) / rational::int(2);
    let half = (u.max_value() - u.min_value()) / rational::int(2);
    let fit = |v: &UtilityVector| {
        let size = v.max_abs();
        if size > half {
            v.scale(&(&half / size))
        } else {
            v.clone()
        }
    };
    let (m, m_neg) = (model.margin(phi), model.margin(&phi.neg()));
    let sum = &m + &m_neg;
    if sum.is_zero() {
        return Ok(None);
    }
    if sum.is_positive() {
        // x ≿ f and f ≿ y hold with margin 0, and y - x = sum
        let phi = fit(phi);
        let (m, m_neg) = (model.margin(&phi), model.margin(&phi.neg()));
        let x = inst.constant_act_with_utility(&(&center - m_neg)).map_err(AxiomError::from)?;
        let f = inst.act_with_utility(&phi.shift(&center)).map_err(AxiomError::from)?;
        let y = inst.constant_act_with_utility(&(&center + m)).map_err(AxiomError::from)?;
        Ok(Some((AxiomKind::ConstantBoundTransitivity, Battery::new("x, f, y", vec![x, f, y]))))
    } else {
        // shifting equalizes the two margins at sum / 2 < 0
        let shift = (&m_neg - &m) / rational::int(2);
        let g = fit(&phi.shift(&shift));
        let f = inst.act_with_utility(&g.shift(&center)).map_err(AxiomError::from)?;
        let x0 = inst.constant_act_with_utility(&center).map_err(AxiomError::from)?;
        Ok(Some((AxiomKind::Completeness, Battery::new("f, x0", vec![f, x0]))))
    }
}

fn fig4(ws: &mut Workspace<'_>, out: &mut Outcome) -> Result<(), VerifyError> {
    let label = ws.case.label.clone();
    let inst = &ws.case.inst;
    let alpha = search_alpha();
    let kind = ModelKind::AlphaMixture(alpha.clone());
    let vectors: Vec<UtilityVector> = ws.battery.acts.iter().map(|a| utility_vector(inst.utility(), a)).collect();
    out.batteries.insert(ws.battery.description.clone());
    for phi in &vectors {
        let p = margin_profile(inst.collection(), phi);
        if p.maxmin == p.minmax {
            continue;
        }
        let Some((axiom, acts)) = mixture_violation(inst, &alpha, phi)? else {
            continue;
        };
        let r = AuditContext::new(&kind, inst, &acts)?.audit(axiom)?;
        let model = Model::new(kind.clone(), inst.collection()).map_err(AxiomError::from)?;
        match r.witnesses.first() {
            Some(w) if w.replays(&model) => {
                out.tally(match axiom {
                    AxiomKind::Completeness => "completeness_violation",
                    _ => "cbt_violation",
                });
                out.findings.push(MixtureFinding {
                    instance: label.clone(),
                    axiom,
                    phi: phi.clone(),
                    maxmin: p.maxmin,
                    minmax: p.minmax,
                    witness: w.clone(),
                });
            }
            _ => out.fail(&label, format!("constructed {axiom} violation at {phi} does not replay"), vec![]),
        }
        return Ok(());
    }
    out.tally("operators_agree_on_battery");
    Ok(())
}

fn cases(seeds: SeedRange, params: &VerifyParams) -> Result<Vec<Case>, VerifyError> {
    let mut out = Vec::new();
    for seed in seeds.first..=seeds.last {
        out.push(Case {
            label: format!("seed {seed}"),
            inst: generate_instance(seed, &params.gen_params(seed))?,
        });
    }
    if params.include_builtins {
        for (name, inst) in builtin::all() {
            out.push(Case {
                label: format!("builtin {name}"),
                inst,
            });
        }
    }
    Ok(out)
}

fn thread_pool() -> Result<rayon::ThreadPool, VerifyError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| VerifyError::Threads(v.clone()))?;
        if n == 0 {
            return Err(VerifyError::Threads(v));
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| VerifyError::Threads(e.to_string()))
}

pub fn verify(suites: &[Suite], seeds: SeedRange, params: &VerifyParams) -> Result<VerificationReport, VerifyError> {
    let cases = cases(seeds, params)?;
    let pool = thread_pool()?;
    let per_case: Vec<Vec<Outcome>> = pool.install(|| {
        cases
            .par_iter()
            .map(|c| run_case(c, suites, params))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut entries = Vec::with_capacity(suites.len());
    for (i, &suite) in suites.iter().enumerate() {
        let mut merged = Outcome::default();
        for outcomes in &per_case {
            let o = &outcomes[i];
            merged.counterexamples.extend(o.counterexamples.iter().cloned());
            merged.boundary_flags += o.boundary_flags;
            for (k, v) in &o.tallies {
                *merged.tallies.entry(k.clone()).or_default() += v;
            }
            merged.findings.extend(o.findings.iter().cloned());
            merged.batteries.extend(o.batteries.iter().cloned());
        }
        let found = merged.tallies.get("completeness_violation").copied().unwrap_or(0)
            + merged.tallies.get("cbt_violation").copied().unwrap_or(0);
        let ok = merged.counterexamples.is_empty() && (!suite.is_search() || found > 0);
        merged.findings.truncate(MAX_FINDINGS);
        entries.push(SuiteEntry {
            suite,
            statement: suite.statement().to_string(),
            instances: cases.len(),
            batteries: merged.batteries.into_iter().collect(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            counterexamples: merged.counterexamples,
            boundary_flags: merged.boundary_flags,
            tallies: merged.tallies,
            findings: merged.findings,
        });
    }
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        seeds,
        params: params.clone(),
        passed: entries.iter().all(|e| e.verdict == Verdict::Pass),
        suites: entries,
    })
}
