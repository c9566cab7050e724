//! Parametric properties of belief collections.
//!
//! Whether a generalized Bewley preference is complete or satisfies
//! constant-bound transitivity depends only on its belief collection. This
//! module decides both conditions exactly with linear programs and turns a
//! negative answer into concrete acts that break the axiom.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::lp::{self, Bounds, Comparator, Constraint, LinearProgram, LpOutcome};
use crate::margins::{margin_profile, set_min, ModelKind, Model};
use crate::model::{
    utility_vector, Act, BeliefCollection, BeliefSet, Instance, ModelError, Prior, UtilityVector,
};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("dimension mismatch: expected {expected} states, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation needs exactly two states, instance has {0}")]
    WrongDimension(usize),
    #[error("cutting hyperplane does not straddle every belief set")]
    InvalidCut,
    #[error("separation certificate does not verify")]
    InvalidCertificate,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `phi1 = -phi2`, with every prior of the first set giving `phi1` at least
/// `slack` and every prior of the second giving `phi2` at least `slack`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SametCertificate {
    pub phi1: UtilityVector,
    pub phi2: UtilityVector,
    #[serde(with = "rational::serde_str")]
    pub slack: Rational,
}

impl SametCertificate {
    pub fn verify(&self, first: &BeliefSet, second: &BeliefSet) -> bool {
        self.phi1.add(&self.phi2).is_zero()
            && self.slack.is_positive()
            && self.slack == set_min(first, &self.phi1).min(set_min(second, &self.phi2))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Intersection {
    CommonPrior {
        prior: Prior,
        #[serde(with = "rational::serde_str::vec")]
        weights_first: Vec<Rational>,
        #[serde(with = "rational::serde_str::vec")]
        weights_second: Vec<Rational>,
    },
    Disjoint {
        certificate: SametCertificate,
    },
}

impl Intersection {
    pub fn intersects(&self) -> bool {
        matches!(self, Intersection::CommonPrior { .. })
    }

    /// Re-checks the evidence against the two sets exactly.
    pub fn verify(&self, first: &BeliefSet, second: &BeliefSet) -> bool {
        match self {
            Intersection::CommonPrior {
                prior,
                weights_first,
                weights_second,
            } => {
                is_mixture(first, weights_first, prior) && is_mixture(second, weights_second, prior)
            }
            Intersection::Disjoint { certificate } => certificate.verify(first, second),
        }
    }
}

fn is_mixture(set: &BeliefSet, weights: &[Rational], target: &Prior) -> bool {
    if weights.len() != set.vertices().len()
        || weights.iter().any(|w| w.is_negative())
        || weights.iter().sum::<Rational>() != Rational::one()
    {
        return false;
    }
    (0..set.dim()).all(|s| {
        let mixed: Rational = set
            .vertices()
            .iter()
            .zip(weights)
            .map(|(v, w)| w * &v.probabilities()[s])
            .sum();
        mixed == target.probabilities()[s]
    })
}

fn check_dims(first: &BeliefSet, second: &BeliefSet) -> Result<(), AnalysisError> {
    if first.dim() != second.dim() {
        return Err(AnalysisError::DimensionMismatch {
            expected: first.dim(),
            found: second.dim(),
        });
    }
    Ok(())
}

fn common_prior(first: &BeliefSet, second: &BeliefSet) -> Option<Intersection> {
    let (k1, k2, n) = (first.vertices().len(), second.vertices().len(), first.dim());
    let vars = k1 + k2;
    let mut constraints = Vec::with_capacity(n + 2);
    let mut sum1 = vec![Rational::zero(); vars];
    sum1[..k1].fill(Rational::one());
    constraints.push(Constraint::new(sum1, Comparator::Eq, Rational::one()));
    let mut sum2 = vec![Rational::zero(); vars];
    sum2[k1..].fill(Rational::one());
    constraints.push(Constraint::new(sum2, Comparator::Eq, Rational::one()));
    for s in 0..n {
        let coeffs = first
            .vertices()
            .iter()
            .map(|v| v.probabilities()[s].clone())
            .chain(second.vertices().iter().map(|w| -w.probabilities()[s].clone()))
            .collect();
        constraints.push(Constraint::new(coeffs, Comparator::Eq, Rational::zero()));
    }
    let point = lp::feasible_point(vars, constraints, vec![Bounds::nonnegative(); vars])
        .expect("dimensions are consistent by construction")?;
    let (weights_first, weights_second) = (point[..k1].to_vec(), point[k1..].to_vec());
    let probabilities = (0..n)
        .map(|s| {
            first
                .vertices()
                .iter()
                .zip(&weights_first)
                .map(|(v, w)| w * &v.probabilities()[s])
                .sum()
        })
        .collect();
    let prior = Prior::new(probabilities).expect("a mixture of priors is a prior");
    Some(Intersection::CommonPrior {
        prior,
        weights_first,
        weights_second,
    })
}

/// `max t` s.t. `<v, φ> ≥ t` on `first`, `<w, -φ> ≥ t` on `second`, `φ ∈ [-1, 1]^S`.
fn separation(first: &BeliefSet, second: &BeliefSet) -> (Rational, UtilityVector) {
    let n = first.dim();
    let mut constraints = Vec::new();
    for (set, sign) in [(first, Rational::one()), (second, -Rational::one())] {
        for v in set.vertices() {
            let mut coeffs: Vec<Rational> = v.probabilities().iter().map(|p| &sign * p).collect();
            coeffs.push(-Rational::one());
            constraints.push(Constraint::new(coeffs, Comparator::Ge, Rational::zero()));
        }
    }
    let mut objective = vec![Rational::zero(); n];
    objective.push(Rational::one());
    let mut bounds = vec![Bounds::between(-Rational::one(), Rational::one()); n];
    bounds.push(Bounds::free());
    let program = LinearProgram::new(objective, constraints, bounds).expect("consistent");
    match lp::solve(&program) {
        LpOutcome::Optimal { value, point } => (value, UtilityVector::new(point[..n].to_vec())),
        other => unreachable!("separation program is feasible and bounded, got {other:?}"),
    }
}

/// Either a prior common to both hulls or a certificate that they are disjoint.
pub fn polytopes_intersect(first: &BeliefSet, second: &BeliefSet) -> Result<Intersection, AnalysisError> {
    check_dims(first, second)?;
    if let Some(found) = common_prior(first, second) {
        return Ok(found);
    }
    let (t, phi) = separation(first, second);
    let phi2 = phi.neg();
    let slack = set_min(first, &phi).min(set_min(second, &phi2));
    debug_assert_eq!(slack, t);
    let certificate = SametCertificate {
        phi1: phi,
        phi2,
        slack,
    };
    if !certificate.verify(first, second) {
        return Err(AnalysisError::InvalidCertificate);
    }
    Ok(Intersection::Disjoint { certificate })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairIntersection {
    pub first: String,
    pub second: String,
    pub intersection: Intersection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairwiseIntersections {
    pub holds: bool,
    /// `matrix[i][j]` tells whether sets `i` and `j` meet.
    pub matrix: Vec<Vec<bool>>,
    pub pairs: Vec<PairIntersection>,
}

impl PairwiseIntersections {
    /// The first disjoint pair and its certificate.
    pub fn first_failure(&self) -> Option<(&str, &str, &SametCertificate)> {
        self.pairs.iter().find_map(|p| match &p.intersection {
            Intersection::Disjoint { certificate } => Some((p.first.as_str(), p.second.as_str(), certificate)),
            _ => None,
        })
    }
}

pub fn pairwise_intersection_holds(collection: &BeliefCollection) -> PairwiseIntersections {
    let sets = collection.sets();
    let k = sets.len();
    let mut matrix = vec![vec![true; k]; k];
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let intersection =
                polytopes_intersect(&sets[i], &sets[j]).expect("sets in a collection share a dimension");
            matrix[i][j] = intersection.intersects();
            matrix[j][i] = matrix[i][j];
            pairs.push(PairIntersection {
                first: sets[i].name().to_string(),
                second: sets[j].name().to_string(),
                intersection,
            });
        }
    }
    PairwiseIntersections {
        holds: pairs.iter().all(|p| p.intersection.intersects()),
        matrix,
        pairs,
    }
}

/// A functional `normal` and threshold `offset` strictly straddled by
/// every set: `straddles[i] = (above, below)` indexes vertices of set `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuttingHyperplane {
    pub normal: UtilityVector,
    #[serde(with = "rational::serde_str")]
    pub offset: Rational,
    pub straddles: Vec<(usize, usize)>,
}

impl CuttingHyperplane {
    pub fn is_valid(&self, collection: &BeliefCollection) -> bool {
        self.straddles.len() == collection.len()
            && collection.sets().iter().zip(&self.straddles).all(|(set, &(above, below))| {
                let vs = set.vertices();
                above < vs.len()
                    && below < vs.len()
                    && vs[above].expectation(&self.normal) > self.offset
                    && self.offset > vs[below].expectation(&self.normal)
            })
    }
}

/// `max t` s.t. `<v+, φ> ≥ t` and `<v-, φ> ≤ -t` for each assigned pair.
fn straddle_lp(collection: &BeliefCollection, pairs: &[(usize, usize)]) -> (Rational, UtilityVector) {
    let n = collection.dim();
    let mut constraints = Vec::with_capacity(2 * pairs.len());
    for (set, &(above, below)) in collection.sets().iter().zip(pairs) {
        let mut up: Vec<Rational> = set.vertices()[above].probabilities().to_vec();
        up.push(-Rational::one());
        constraints.push(Constraint::new(up, Comparator::Ge, Rational::zero()));
        let mut down: Vec<Rational> = set.vertices()[below].probabilities().to_vec();
        down.push(Rational::one());
        constraints.push(Constraint::new(down, Comparator::Le, Rational::zero()));
    }
    let mut objective = vec![Rational::zero(); n];
    objective.push(Rational::one());
    let mut bounds = vec![Bounds::between(-Rational::one(), Rational::one()); n];
    bounds.push(Bounds::free());
    let program = LinearProgram::new(objective, constraints, bounds).expect("consistent");
    match lp::solve(&program) {
        LpOutcome::Optimal { value, point } => (value, UtilityVector::new(point[..n].to_vec())),
        other => unreachable!("straddle program is feasible and bounded, got {other:?}"),
    }
}

/// Searches vertex-pair assignments depth first in lexicographic order,
/// pruning any partial assignment whose program has optimum `t ≤ 0`. The
/// threshold is normalized to zero. Flipping every pair maps a solution
/// `φ` to `-φ`, so the first set only tries pairs with `above < below`.
pub fn find_cutting_hyperplane(collection: &BeliefCollection) -> Option<CuttingHyperplane> {
    if collection.sets().iter().any(|s| s.vertices().len() < 2) {
        return None;
    }
    let mut pairs = Vec::with_capacity(collection.len());
    search(collection, &mut pairs)
}

fn search(collection: &BeliefCollection, pairs: &mut Vec<(usize, usize)>) -> Option<CuttingHyperplane> {
    let level = pairs.len();
    if level == collection.len() {
        let (t, normal) = straddle_lp(collection, pairs);
        return t.is_positive().then(|| CuttingHyperplane {
            normal,
            offset: Rational::zero(),
            straddles: pairs.clone(),
        });
    }
    let k = collection.sets()[level].vertices().len();
    for above in 0..k {
        for below in 0..k {
            if above == below || (level == 0 && above > below) {
                continue;
            }
            pairs.push((above, below));
            let feasible = pairs.len() == collection.len() || straddle_lp(collection, pairs).0.is_positive();
            if feasible {
                if let Some(found) = search(collection, pairs) {
                    return Some(found);
                }
            }
            pairs.pop();
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutativityCounterexample {
    pub phi: UtilityVector,
    #[serde(with = "rational::serde_str")]
    pub maxmin: Rational,
    #[serde(with = "rational::serde_str")]
    pub minmax: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutativityVerdict {
    pub holds: bool,
    pub checked: usize,
    pub counterexample: Option<CommutativityCounterexample>,
}

/// Whether `maxmin(φ) = minmax(φ)` for every `φ` in the battery.
pub fn check_commutativity(collection: &BeliefCollection, battery: &[UtilityVector]) -> CommutativityVerdict {
    for (i, phi) in battery.iter().enumerate() {
        let profile = margin_profile(collection, phi);
        if profile.maxmin != profile.minmax {
            return CommutativityVerdict {
                holds: false,
                checked: i + 1,
                counterexample: Some(CommutativityCounterexample {
                    phi: phi.clone(),
                    maxmin: profile.maxmin,
                    minmax: profile.minmax,
                }),
            };
        }
    }
    CommutativityVerdict {
        holds: true,
        checked: battery.len(),
        counterexample: None,
    }
}

/// For two states: the prior `(a, 1 - a)` when the largest lower end of the
/// first coordinate over sets equals the smallest upper end.
pub fn seu_collapse_binary(collection: &BeliefCollection) -> Result<Option<Prior>, AnalysisError> {
    if collection.dim() != 2 {
        return Err(AnalysisError::WrongDimension(collection.dim()));
    }
    let first = |p: &Prior| p.probabilities()[0].clone();
    let lows = collection
        .sets()
        .iter()
        .map(|s| s.vertices().iter().map(first).min().expect("nonempty"));
    let highs = collection
        .sets()
        .iter()
        .map(|s| s.vertices().iter().map(first).max().expect("nonempty"));
    let a = lows.max().expect("nonempty");
    let b = highs.min().expect("nonempty");
    Ok((a == b).then(|| Prior::new(vec![a.clone(), Rational::one() - a]).expect("valid prior")))
}

/// Center of the utility range and a scale bringing `v` inside it.
fn placement(inst: &Instance, v: &UtilityVector) -> (Rational, Rational) {
    let u = inst.utility();
    let center = (u.min_value() + u.max_value()) / rational::int(2);
    let half = (u.max_value() - u.min_value()) / rational::int(2);
    let size = v.max_abs();
    let scale = if size > half { half / size } else { Rational::one() };
    (center, scale)
}

/// An act `f` and a constant act `x0` that no generalized Bewley
/// preference with this collection can rank either way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncompletenessWitness {
    #[serde(skip)]
    pub f: Act,
    #[serde(skip)]
    pub x0: Act,
    pub f_utility: UtilityVector,
    pub x0_utility: UtilityVector,
    /// margin of `u(f) - u(x0)`
    #[serde(with = "rational::serde_str")]
    pub forward_margin: Rational,
    /// margin of `u(x0) - u(f)`
    #[serde(with = "rational::serde_str")]
    pub backward_margin: Rational,
}

impl IncompletenessWitness {
    pub fn is_violation(&self) -> bool {
        self.forward_margin.is_negative() && self.backward_margin.is_negative()
    }

    /// Recomputes both margins from the acts.
    pub fn replays(&self, inst: &Instance) -> bool {
        let phi = utility_vector(inst.utility(), &self.f).sub(&utility_vector(inst.utility(), &self.x0));
        let model = Model::new(ModelKind::GeneralizedBewley, inst.collection()).expect("valid");
        model.margin(&phi) == self.forward_margin
            && model.margin(&phi.neg()) == self.backward_margin
            && self.is_violation()
    }
}

pub fn build_incompleteness_witness(
    collection: &BeliefCollection,
    cut: &CuttingHyperplane,
    inst: &Instance,
) -> Result<IncompletenessWitness, AnalysisError> {
    if collection.dim() != inst.num_states() {
        return Err(AnalysisError::DimensionMismatch {
            expected: inst.num_states(),
            found: collection.dim(),
        });
    }
    if !cut.is_valid(collection) {
        return Err(AnalysisError::InvalidCut);
    }
    let shifted = cut.normal.shift(&-cut.offset.clone());
    let (center, scale) = placement(inst, &shifted);
    let phi = shifted.scale(&scale);
    let f_utility = phi.shift(&center);
    let x0_utility = UtilityVector::constant(center.clone(), inst.num_states());
    let f = inst.act_with_utility(&f_utility)?;
    let x0 = inst.constant_act_with_utility(&center)?;
    let model = Model::new(ModelKind::GeneralizedBewley, collection).expect("no names to resolve");
    Ok(IncompletenessWitness {
        f,
        x0,
        forward_margin: model.margin(&phi),
        backward_margin: model.margin(&phi.neg()),
        f_utility,
        x0_utility,
    })
}

/// Constants `x0` below `x_eps` with `x0 ≿ f ≿ x_eps`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CbtWitness {
    #[serde(skip)]
    pub x0: Act,
    #[serde(skip)]
    pub f: Act,
    #[serde(skip)]
    pub x_eps: Act,
    #[serde(with = "rational::serde_str")]
    pub x0_utility: Rational,
    pub f_utility: UtilityVector,
    #[serde(with = "rational::serde_str")]
    pub x_eps_utility: Rational,
    /// margin of `x0` over `f`
    #[serde(with = "rational::serde_str")]
    pub x0_over_f: Rational,
    /// margin of `f` over `x_eps`
    #[serde(with = "rational::serde_str")]
    pub f_over_x_eps: Rational,
    /// margin of `x0` over `x_eps`
    #[serde(with = "rational::serde_str")]
    pub x0_over_x_eps: Rational,
}

impl CbtWitness {
    pub fn is_violation(&self) -> bool {
        !self.x0_over_f.is_negative()
            && !self.f_over_x_eps.is_negative()
            && self.x0_over_x_eps.is_negative()
            && self.x_eps_utility > self.x0_utility
    }

    pub fn replays(&self, inst: &Instance) -> bool {
        let u = |a: &Act| utility_vector(inst.utility(), a);
        let (x0, f, xe) = (u(&self.x0), u(&self.f), u(&self.x_eps));
        let model = Model::new(ModelKind::GeneralizedBewley, inst.collection()).expect("valid");
        model.margin(&x0.sub(&f)) == self.x0_over_f
            && model.margin(&f.sub(&xe)) == self.f_over_x_eps
            && model.margin(&x0.sub(&xe)) == self.x0_over_x_eps
            && f == self.f_utility
            && self.is_violation()
    }
}

pub fn build_cbt_witness(
    collection: &BeliefCollection,
    cert: &SametCertificate,
    inst: &Instance,
) -> Result<CbtWitness, AnalysisError> {
    if collection.dim() != inst.num_states() || cert.phi1.dim() != inst.num_states() {
        return Err(AnalysisError::DimensionMismatch {
            expected: inst.num_states(),
            found: cert.phi1.dim(),
        });
    }
    if !cert.slack.is_positive() || !cert.phi1.add(&cert.phi2).is_zero() {
        return Err(AnalysisError::InvalidCertificate);
    }
    let (center, scale) = placement(inst, &cert.phi1);
    let eps = &scale * &cert.slack / rational::int(2);
    let f_utility = cert.phi1.scale(&scale).shift(&center);
    let x_eps_utility = &center + &eps;
    let n = inst.num_states();
    let x0 = inst.constant_act_with_utility(&center)?;
    let f = inst.act_with_utility(&f_utility)?;
    let x_eps = inst.constant_act_with_utility(&x_eps_utility)?;
    let model = Model::new(ModelKind::GeneralizedBewley, collection).expect("no names to resolve");
    let x0_vec = UtilityVector::constant(center.clone(), n);
    let xe_vec = UtilityVector::constant(x_eps_utility.clone(), n);
    Ok(CbtWitness {
        x0,
        f,
        x_eps,
        x0_over_f: model.margin(&x0_vec.sub(&f_utility)),
        f_over_x_eps: model.margin(&f_utility.sub(&xe_vec)),
        x0_over_x_eps: model.margin(&x0_vec.sub(&xe_vec)),
        x0_utility: center,
        f_utility,
        x_eps_utility,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub pairwise_intersections: PairwiseIntersections,
    pub cutting: Option<CuttingHyperplane>,
    /// no cutting hyperplane: the generalized Bewley preference is complete
    pub complete_param: bool,
    /// all pairs intersect: constant-bound transitivity holds
    pub cbt_param: bool,
    pub commutes: CommutativityVerdict,
    pub seu_collapse: Option<Prior>,
    pub incompleteness_witness: Option<IncompletenessWitness>,
    pub cbt_witness: Option<CbtWitness>,
}

/// Runs every decider on the instance's collection; commutativity is
/// checked on `battery`.
pub fn analyze(inst: &Instance, battery: &[UtilityVector]) -> Result<AnalysisReport, AnalysisError> {
    let collection = inst.collection();
    if let Some(bad) = battery.iter().find(|phi| phi.dim() != collection.dim()) {
        return Err(AnalysisError::DimensionMismatch {
            expected: collection.dim(),
            found: bad.dim(),
        });
    }
    let pairwise = pairwise_intersection_holds(collection);
    let cutting = find_cutting_hyperplane(collection);
    let incompleteness_witness = cutting
        .as_ref()
        .map(|cut| build_incompleteness_witness(collection, cut, inst))
        .transpose()?;
    let cbt_witness = pairwise
        .first_failure()
        .map(|(_, _, cert)| build_cbt_witness(collection, cert, inst))
        .transpose()?;
    let seu_collapse = if collection.dim() == 2 {
        seu_collapse_binary(collection)?
    } else {
        None
    };
    Ok(AnalysisReport {
        complete_param: cutting.is_none(),
        cbt_param: pairwise.holds,
        commutes: check_commutativity(collection, battery),
        pairwise_intersections: pairwise,
        cutting,
        seu_collapse,
        incompleteness_witness,
        cbt_witness,
    })
}
