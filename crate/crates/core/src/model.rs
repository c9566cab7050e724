//! States, prizes, lotteries, acts, priors and belief collections.
//!
//! All types are validated on construction and immutable afterwards. Lotteries
//! and priors are stored densely, indexed by the declared prize and state
//! order; labels only matter at the JSON boundary (see [`crate::format`]).

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("mixture weight {0} is outside [0, 1]")]
    AlphaOutOfRange(String),
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new(labels: Vec<String>) -> Result<Self, ModelError> {
        if labels.is_empty() {
            return Err(ModelError::Invalid("state space is empty".into()));
        }
        check_unique(&labels, "state")?;
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrizeSet {
    labels: Vec<String>,
}

impl PrizeSet {
    pub fn new(labels: Vec<String>) -> Result<Self, ModelError> {
        if labels.len() < 2 {
            return Err(ModelError::Invalid(format!(
                "prize set needs at least 2 prizes, found {}",
                labels.len()
            )));
        }
        check_unique(&labels, "prize")?;
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn check_unique(labels: &[String], what: &str) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(ModelError::Invalid(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

/// Checks that `weights` is a point of the probability simplex.
fn check_simplex(weights: &[Rational]) -> Result<(), String> {
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(format!("negative weight {}", rational::format(w)));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(format!("weights sum to {}", rational::format(&total)));
    }
    Ok(())
}

/// A finite-support distribution over the prize set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lottery {
    weights: Vec<Rational>,
}

impl Lottery {
    pub fn new(weights: Vec<Rational>) -> Result<Self, ModelError> {
        check_simplex(&weights).map_err(|e| ModelError::Invalid(format!("lottery: {e}")))?;
        Ok(Self { weights })
    }

    pub fn degenerate(num_prizes: usize, prize: usize) -> Self {
        let weights = (0..num_prizes)
            .map(|i| if i == prize { Rational::one() } else { Rational::zero() })
            .collect();
        Self { weights }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// `alpha * self + (1 - alpha) * other`, prizewise.
    fn mix(&self, alpha: &Rational, other: &Lottery) -> Lottery {
        let beta = Rational::one() - alpha;
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| alpha * a + &beta * b)
            .collect();
        Lottery { weights }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityFunction {
    values: Vec<Rational>,
}

impl UtilityFunction {
    pub fn new(values: Vec<Rational>) -> Result<Self, ModelError> {
        match values.first() {
            None => Err(ModelError::Invalid("utility has no values".into())),
            Some(first) if values.iter().all(|v| v == first) => {
                Err(ModelError::Invalid("utility is constant".into()))
            }
            Some(_) => Ok(Self { values }),
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Affine extension: the expectation of prize utilities under `x`.
    pub fn of_lottery(&self, x: &Lottery) -> Rational {
        self.values
            .iter()
            .zip(x.weights())
            .map(|(u, w)| u * w)
            .sum()
    }

    pub fn min_value(&self) -> &Rational {
        self.values.iter().min().expect("nonempty")
    }

    pub fn max_value(&self) -> &Rational {
        self.values.iter().max().expect("nonempty")
    }

    fn argmin(&self) -> usize {
        let min = self.min_value();
        self.values.iter().position(|v| v == min).expect("nonempty")
    }

    fn argmax(&self) -> usize {
        let max = self.max_value();
        self.values.iter().position(|v| v == max).expect("nonempty")
    }

    /// The lottery over the two extreme prizes whose utility is `target`.
    pub fn lottery_with_utility(
        &self,
        target: &Rational,
        num_prizes: usize,
    ) -> Result<Lottery, ModelError> {
        let (lo, hi) = (self.min_value(), self.max_value());
        if target < lo || target > hi {
            return Err(ModelError::Invalid(format!(
                "utility {} outside reachable range [{}, {}]",
                rational::format(target),
                rational::format(lo),
                rational::format(hi)
            )));
        }
        let top = (target - lo) / (hi - lo);
        let mut weights = vec![Rational::zero(); num_prizes];
        weights[self.argmax()] = top.clone();
        weights[self.argmin()] = Rational::one() - top;
        Ok(Lottery { weights })
    }
}

/// A map from states to lotteries, stored in state order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Act {
    lotteries: Vec<Lottery>,
}

impl Act {
    pub fn new(lotteries: Vec<Lottery>) -> Result<Self, ModelError> {
        if lotteries.is_empty() {
            return Err(ModelError::Invalid("act over no states".into()));
        }
        let width = lotteries[0].weights.len();
        if let Some(l) = lotteries.iter().find(|l| l.weights.len() != width) {
            return Err(ModelError::DimensionMismatch {
                context: "act lotteries".into(),
                expected: width,
                found: l.weights.len(),
            });
        }
        Ok(Self { lotteries })
    }

    pub fn constant(x: Lottery, num_states: usize) -> Self {
        Self {
            lotteries: vec![x; num_states],
        }
    }

    pub fn lotteries(&self) -> &[Lottery] {
        &self.lotteries
    }

    pub fn lottery(&self, state: usize) -> &Lottery {
        &self.lotteries[state]
    }

    pub fn num_states(&self) -> usize {
        self.lotteries.len()
    }

    pub fn is_constant(&self) -> bool {
        self.lotteries.windows(2).all(|w| w[0] == w[1])
    }
}

/// The utility profile `u(f)` of an act, indexed by state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UtilityVector(#[serde(with = "rational::serde_str::vec")] Vec<Rational>);

impl UtilityVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self(entries)
    }

    pub fn constant(value: Rational, dim: usize) -> Self {
        Self(vec![value; dim])
    }

    pub fn zeros(dim: usize) -> Self {
        Self::constant(Rational::zero(), dim)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| rational::int(v)).collect())
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sub(&self, other: &UtilityVector) -> UtilityVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &UtilityVector) -> UtilityVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &Rational) -> UtilityVector {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> UtilityVector {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn shift(&self, c: &Rational) -> UtilityVector {
        Self(self.0.iter().map(|a| a + c).collect())
    }

    /// `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, alpha: &Rational, other: &UtilityVector) -> UtilityVector {
        let beta = Rational::one() - alpha;
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| alpha * a + &beta * b)
                .collect(),
        )
    }

    pub fn max_abs(&self) -> Rational {
        self.0
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &UtilityVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl fmt::Display for UtilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", rational::format(v))?;
        }
        write!(f, ")")
    }
}

/// A probability distribution over states.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Prior(Vec<Rational>);

impl Prior {
    pub fn new(probabilities: Vec<Rational>) -> Result<Self, ModelError> {
        check_simplex(&probabilities).map_err(|e| ModelError::Invalid(format!("prior: {e}")))?;
        Ok(Self(probabilities))
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Exact inner product with a utility profile.
    pub fn expectation(&self, phi: &UtilityVector) -> Rational {
        debug_assert_eq!(self.dim(), phi.dim());
        self.0.iter().zip(phi.entries()).map(|(p, v)| p * v).sum()
    }
}

impl TryFrom<Vec<String>> for Prior {
    type Error = String;

    fn try_from(texts: Vec<String>) -> Result<Self, Self::Error> {
        let values = texts
            .iter()
            .map(|t| rational::parse(t).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        Prior::new(values).map_err(|e| e.to_string())
    }
}

impl From<Prior> for Vec<String> {
    fn from(p: Prior) -> Self {
        p.0.iter().map(rational::format).collect()
    }
}

impl fmt::Display for Prior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", UtilityVector(self.0.clone()))
    }
}

/// A credal polytope given by its generating priors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefSet {
    name: String,
    vertices: Vec<Prior>,
}

impl BeliefSet {
    pub fn new(name: impl Into<String>, vertices: Vec<Prior>) -> Result<Self, ModelError> {
        let name = name.into();
        let Some(first) = vertices.first() else {
            return Err(ModelError::Invalid(format!("belief set {name:?} has no vertices")));
        };
        let dim = first.dim();
        if let Some(v) = vertices.iter().find(|v| v.dim() != dim) {
            return Err(ModelError::DimensionMismatch {
                context: format!("belief set {name:?}"),
                expected: dim,
                found: v.dim(),
            });
        }
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v) {
                return Err(ModelError::Invalid(format!(
                    "belief set {name:?} repeats vertex {v}"
                )));
            }
        }
        Ok(Self { name, vertices })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[Prior] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

/// A finite family of belief sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefCollection {
    sets: Vec<BeliefSet>,
}

impl BeliefCollection {
    pub fn new(sets: Vec<BeliefSet>) -> Result<Self, ModelError> {
        let Some(first) = sets.first() else {
            return Err(ModelError::Invalid("belief collection is empty".into()));
        };
        let dim = first.dim();
        if let Some(s) = sets.iter().find(|s| s.dim() != dim) {
            return Err(ModelError::DimensionMismatch {
                context: format!("belief set {:?}", s.name()),
                expected: dim,
                found: s.dim(),
            });
        }
        let names: Vec<String> = sets.iter().map(|s| s.name.clone()).collect();
        check_unique(&names, "belief set")?;
        Ok(Self { sets })
    }

    pub fn sets(&self) -> &[BeliefSet] {
        &self.sets
    }

    pub fn get(&self, name: &str) -> Option<&BeliefSet> {
        self.sets.iter().find(|s| s.name == name)
    }

    pub fn dim(&self) -> usize {
        self.sets[0].dim()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// A complete decision problem: the `(u, collection)` pair plus named acts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    states: StateSpace,
    prizes: PrizeSet,
    utility: UtilityFunction,
    collection: BeliefCollection,
    acts: BTreeMap<String, Act>,
}

impl Instance {
    pub fn new(
        states: StateSpace,
        prizes: PrizeSet,
        utility: UtilityFunction,
        collection: BeliefCollection,
        acts: BTreeMap<String, Act>,
    ) -> Result<Self, ModelError> {
        let mismatch = |context: String, expected, found| ModelError::DimensionMismatch {
            context,
            expected,
            found,
        };
        if utility.values().len() != prizes.len() {
            return Err(mismatch("utility".into(), prizes.len(), utility.values().len()));
        }
        if collection.dim() != states.len() {
            return Err(mismatch("belief collection".into(), states.len(), collection.dim()));
        }
        for (name, act) in &acts {
            if act.num_states() != states.len() {
                return Err(mismatch(format!("act {name:?}"), states.len(), act.num_states()));
            }
            if act.lottery(0).weights.len() != prizes.len() {
                return Err(mismatch(
                    format!("act {name:?} lotteries"),
                    prizes.len(),
                    act.lottery(0).weights.len(),
                ));
            }
        }
        Ok(Self {
            states,
            prizes,
            utility,
            collection,
            acts,
        })
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn prizes(&self) -> &PrizeSet {
        &self.prizes
    }

    pub fn utility(&self) -> &UtilityFunction {
        &self.utility
    }

    pub fn collection(&self) -> &BeliefCollection {
        &self.collection
    }

    pub fn acts(&self) -> &BTreeMap<String, Act> {
        &self.acts
    }

    pub fn act(&self, name: &str) -> Option<&Act> {
        self.acts.get(name)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn with_collection(&self, collection: BeliefCollection) -> Result<Self, ModelError> {
        Self::new(
            self.states.clone(),
            self.prizes.clone(),
            self.utility.clone(),
            collection,
            self.acts.clone(),
        )
    }

    /// Builds an act whose utility profile is exactly `target`, mixing the
    /// two extreme prizes statewise.
    pub fn act_with_utility(&self, target: &UtilityVector) -> Result<Act, ModelError> {
        if target.dim() != self.num_states() {
            return Err(ModelError::DimensionMismatch {
                context: "target utility vector".into(),
                expected: self.num_states(),
                found: target.dim(),
            });
        }
        let lotteries = target
            .entries()
            .iter()
            .map(|v| self.utility.lottery_with_utility(v, self.prizes.len()))
            .collect::<Result<Vec<_>, _>>()?;
        Act::new(lotteries)
    }

    pub fn constant_act_with_utility(&self, value: &Rational) -> Result<Act, ModelError> {
        let x = self.utility.lottery_with_utility(value, self.prizes.len())?;
        Ok(Act::constant(x, self.num_states()))
    }
}

pub fn utility_of_lottery(u: &UtilityFunction, x: &Lottery) -> Rational {
    u.of_lottery(x)
}

pub fn utility_vector(u: &UtilityFunction, f: &Act) -> UtilityVector {
    UtilityVector(f.lotteries.iter().map(|x| u.of_lottery(x)).collect())
}

pub fn expected_value(p: &Prior, phi: &UtilityVector) -> Rational {
    p.expectation(phi)
}

/// Statewise mixture `alpha f + (1 - alpha) g`.
pub fn mix_acts(alpha: &Rational, f: &Act, g: &Act) -> Result<Act, ModelError> {
    if alpha.is_negative() || alpha > &Rational::one() {
        return Err(ModelError::AlphaOutOfRange(rational::format(alpha)));
    }
    if f.num_states() != g.num_states() {
        return Err(ModelError::DimensionMismatch {
            context: "mixed acts".into(),
            expected: f.num_states(),
            found: g.num_states(),
        });
    }
    let lotteries = f
        .lotteries
        .iter()
        .zip(&g.lotteries)
        .map(|(x, y)| x.mix(alpha, y))
        .collect();
    Ok(Act { lotteries })
}

/// `f(s)` is weakly better than `g(s)` in every state, judged by utility.
pub fn statewise_dominates(inst: &Instance, f: &Act, g: &Act) -> bool {
    let u = inst.utility();
    f.lotteries
        .iter()
        .zip(&g.lotteries)
        .all(|(x, y)| u.of_lottery(x) >= u.of_lottery(y))
}
