//! The instance file format and its validator.
//!
//! ```json
//! { "states": ["s1","s2"], "prizes": ["z1","z2"],
//!   "utility": {"z1":"0","z2":"1"},
//!   "belief_collection": [ {"name":"P1","vertices":[["1/5","4/5"],["2/5","3/5"]]} ],
//!   "acts": { "f": {"s1":{"z2":"1"},"s2":{"z1":"1"}} } }
//! ```
//!
//! Rationals are strings (`"num/den"`) or JSON integers. Vertex arrays follow
//! the declared state order and lottery maps may omit zero-weight prizes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::model::{
    Act, BeliefCollection, BeliefSet, Instance, Lottery, PrizeSet, Prior, StateSpace,
    UtilityFunction,
};
use crate::rational::{self, Rational};

/// A rational as it appears in JSON: a string or an integer literal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawRational {
    Text(String),
    Integer(i64),
}

impl RawRational {
    fn parse(&self) -> Result<Rational, String> {
        match self {
            RawRational::Text(t) => rational::parse(t).map_err(|e| e.to_string()),
            RawRational::Integer(n) => Ok(rational::int(*n)),
        }
    }
}

impl From<&Rational> for RawRational {
    fn from(q: &Rational) -> Self {
        RawRational::Text(rational::format(q))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawBeliefSet {
    pub name: String,
    pub vertices: Vec<Vec<RawRational>>,
}

/// Unvalidated instance, exactly as parsed from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawInstance {
    pub states: Vec<String>,
    pub prizes: Vec<String>,
    pub utility: BTreeMap<String, RawRational>,
    pub belief_collection: Vec<RawBeliefSet>,
    #[serde(default)]
    pub acts: BTreeMap<String, BTreeMap<String, BTreeMap<String, RawRational>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    NonSimplexPrior { set: String, vertex: usize, reason: String },
    NonSimplexLottery { act: String, state: String, reason: String },
    ConstantUtility,
    EmptyCollection,
    EmptyBeliefSet { set: String },
    DuplicateVertex { set: String, vertex: usize },
    DuplicateLabel { what: String, label: String },
    DimensionMismatch { context: String, expected: usize, found: usize },
    UnknownLabel { what: String, label: String },
    MissingLabel { what: String, label: String },
    BadRational { context: String, reason: String },
    TooFewPrizes { found: usize },
    EmptyStateSpace,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            NonSimplexPrior { set, vertex, reason } => {
                write!(f, "vertex {vertex} of {set:?} is not a prior: {reason}")
            }
            NonSimplexLottery { act, state, reason } => {
                write!(f, "act {act:?} at {state:?} is not a lottery: {reason}")
            }
            ConstantUtility => write!(f, "utility is constant"),
            EmptyCollection => write!(f, "belief collection is empty"),
            EmptyBeliefSet { set } => write!(f, "belief set {set:?} has no vertices"),
            DuplicateVertex { set, vertex } => {
                write!(f, "vertex {vertex} of {set:?} duplicates an earlier vertex")
            }
            DuplicateLabel { what, label } => write!(f, "duplicate {what} {label:?}"),
            DimensionMismatch { context, expected, found } => {
                write!(f, "{context}: expected {expected} entries, found {found}")
            }
            UnknownLabel { what, label } => write!(f, "unknown {what} {label:?}"),
            MissingLabel { what, label } => write!(f, "missing {what} {label:?}"),
            BadRational { context, reason } => write!(f, "{context}: {reason}"),
            TooFewPrizes { found } => write!(f, "need at least 2 prizes, found {found}"),
            EmptyStateSpace => write!(f, "no states declared"),
        }
    }
}

/// Every problem found in a raw instance.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ValidationErrors(pub Vec<ValidationIssue>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} validation issue(s)", self.0.len())?;
        for issue in &self.0 {
            write!(f, "; {issue}")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] ValidationErrors),
}

fn simplex_problem(weights: &[Rational]) -> Option<String> {
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Some(format!("negative weight {}", rational::format(w)));
    }
    let total: Rational = weights.iter().sum();
    (!total.is_one()).then(|| format!("weights sum to {}", rational::format(&total)))
}

fn duplicates<'a>(labels: &'a [String], what: &str, issues: &mut Vec<ValidationIssue>) {
    let mut seen = std::collections::HashSet::<&'a str>::new();
    for l in labels {
        if !seen.insert(l) {
            issues.push(ValidationIssue::DuplicateLabel {
                what: what.into(),
                label: l.clone(),
            });
        }
    }
}

/// Validates a parsed description, reporting every violation rather than the
/// first one.
pub fn validate_instance(raw: &RawInstance) -> Result<Instance, ValidationErrors> {
    let mut issues = Vec::new();
    let n_states = raw.states.len();
    if raw.states.is_empty() {
        issues.push(ValidationIssue::EmptyStateSpace);
    }
    if raw.prizes.len() < 2 {
        issues.push(ValidationIssue::TooFewPrizes {
            found: raw.prizes.len(),
        });
    }
    duplicates(&raw.states, "state", &mut issues);
    duplicates(&raw.prizes, "prize", &mut issues);

    // utility
    let mut utility = vec![Rational::zero(); raw.prizes.len()];
    for label in raw.utility.keys() {
        if !raw.prizes.contains(label) {
            issues.push(ValidationIssue::UnknownLabel {
                what: "utility prize".into(),
                label: label.clone(),
            });
        }
    }
    for (i, prize) in raw.prizes.iter().enumerate() {
        match raw.utility.get(prize) {
            None => issues.push(ValidationIssue::MissingLabel {
                what: "utility prize".into(),
                label: prize.clone(),
            }),
            Some(v) => match v.parse() {
                Ok(q) => utility[i] = q,
                Err(reason) => issues.push(ValidationIssue::BadRational {
                    context: format!("utility of {prize:?}"),
                    reason,
                }),
            },
        }
    }
    if raw.prizes.len() >= 2 && utility.windows(2).all(|w| w[0] == w[1]) {
        issues.push(ValidationIssue::ConstantUtility);
    }

    // belief collection
    if raw.belief_collection.is_empty() {
        issues.push(ValidationIssue::EmptyCollection);
    }
    let set_names: Vec<String> = raw.belief_collection.iter().map(|s| s.name.clone()).collect();
    duplicates(&set_names, "belief set", &mut issues);
    let mut sets = Vec::new();
    for set in &raw.belief_collection {
        if set.vertices.is_empty() {
            issues.push(ValidationIssue::EmptyBeliefSet {
                set: set.name.clone(),
            });
        }
        let mut vertices: Vec<Prior> = Vec::new();
        for (k, vertex) in set.vertices.iter().enumerate() {
            if vertex.len() != n_states {
                issues.push(ValidationIssue::DimensionMismatch {
                    context: format!("vertex {k} of {:?}", set.name),
                    expected: n_states,
                    found: vertex.len(),
                });
                continue;
            }
            let parsed: Result<Vec<Rational>, String> = vertex.iter().map(RawRational::parse).collect();
            let probs = match parsed {
                Ok(p) => p,
                Err(reason) => {
                    issues.push(ValidationIssue::BadRational {
                        context: format!("vertex {k} of {:?}", set.name),
                        reason,
                    });
                    continue;
                }
            };
            if let Some(reason) = simplex_problem(&probs) {
                issues.push(ValidationIssue::NonSimplexPrior {
                    set: set.name.clone(),
                    vertex: k,
                    reason,
                });
                continue;
            }
            let prior = Prior::new(probs).expect("checked simplex");
            if vertices.contains(&prior) {
                issues.push(ValidationIssue::DuplicateVertex {
                    set: set.name.clone(),
                    vertex: k,
                });
                continue;
            }
            vertices.push(prior);
        }
        sets.push((set.name.clone(), vertices));
    }

    // acts
    let mut acts = BTreeMap::new();
    for (name, assignment) in &raw.acts {
        for state in assignment.keys() {
            if !raw.states.contains(state) {
                issues.push(ValidationIssue::UnknownLabel {
                    what: format!("state in act {name:?}"),
                    label: state.clone(),
                });
            }
        }
        let mut lotteries = Vec::new();
        for state in &raw.states {
            let Some(lottery) = assignment.get(state) else {
                issues.push(ValidationIssue::MissingLabel {
                    what: format!("state in act {name:?}"),
                    label: state.clone(),
                });
                continue;
            };
            let mut weights = vec![Rational::zero(); raw.prizes.len()];
            let mut ok = true;
            for (prize, w) in lottery {
                let Some(i) = raw.prizes.iter().position(|p| p == prize) else {
                    issues.push(ValidationIssue::UnknownLabel {
                        what: format!("prize in act {name:?}"),
                        label: prize.clone(),
                    });
                    ok = false;
                    continue;
                };
                match w.parse() {
                    Ok(q) => weights[i] = q,
                    Err(reason) => {
                        issues.push(ValidationIssue::BadRational {
                            context: format!("act {name:?} at {state:?}"),
                            reason,
                        });
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            if let Some(reason) = simplex_problem(&weights) {
                issues.push(ValidationIssue::NonSimplexLottery {
                    act: name.clone(),
                    state: state.clone(),
                    reason,
                });
                continue;
            }
            lotteries.push(Lottery::new(weights).expect("checked simplex"));
        }
        if lotteries.len() == raw.states.len() && !lotteries.is_empty() {
            acts.insert(name.clone(), Act::new(lotteries).expect("uniform widths"));
        }
    }

    if !issues.is_empty() {
        return Err(ValidationErrors(issues));
    }

    let build = || -> Result<Instance, crate::model::ModelError> {
        let sets = sets
            .into_iter()
            .map(|(name, vertices)| BeliefSet::new(name, vertices))
            .collect::<Result<Vec<_>, _>>()?;
        Instance::new(
            StateSpace::new(raw.states.clone())?,
            PrizeSet::new(raw.prizes.clone())?,
            UtilityFunction::new(utility)?,
            BeliefCollection::new(sets)?,
            acts,
        )
    };
    build().map_err(|e| {
        ValidationErrors(vec![ValidationIssue::BadRational {
            context: "instance".into(),
            reason: e.to_string(),
        }])
    })
}

pub fn parse_instance(json: &str) -> Result<Instance, LoadError> {
    let raw: RawInstance = serde_json::from_str(json)?;
    Ok(validate_instance(&raw)?)
}

/// The canonical raw form of a validated instance (zero lottery weights
/// omitted, rationals as strings).
pub fn to_raw(inst: &Instance) -> RawInstance {
    let prizes = inst.prizes().labels();
    let states = inst.states().labels();
    let utility = prizes
        .iter()
        .zip(inst.utility().values())
        .map(|(p, v)| (p.clone(), RawRational::from(v)))
        .collect();
    let belief_collection = inst
        .collection()
        .sets()
        .iter()
        .map(|s| RawBeliefSet {
            name: s.name().to_string(),
            vertices: s
                .vertices()
                .iter()
                .map(|v| v.probabilities().iter().map(RawRational::from).collect())
                .collect(),
        })
        .collect();
    let acts = inst
        .acts()
        .iter()
        .map(|(name, act)| {
            let assignment = states
                .iter()
                .zip(act.lotteries())
                .map(|(s, x)| {
                    let weights = prizes
                        .iter()
                        .zip(x.weights())
                        .filter(|(_, w)| !w.is_zero())
                        .map(|(p, w)| (p.clone(), RawRational::from(w)))
                        .collect();
                    (s.clone(), weights)
                })
                .collect();
            (name.clone(), assignment)
        })
        .collect();
    RawInstance {
        states: states.to_vec(),
        prizes: prizes.to_vec(),
        utility,
        belief_collection,
        acts,
    }
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&to_raw(inst)).expect("raw instance serializes")
}
