//! Expectation margins and the preference models built from them.
//!
//! Every model judges `f ≿ g` by the sign of a margin computed from the
//! utility difference `φ = u(f) − u(g)`. Min and max over a belief set are
//! taken over its vertices; a linear functional on a polytope attains both
//! at a vertex.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::model::{utility_vector, Act, BeliefCollection, BeliefSet, Instance, Prior, UtilityVector};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MarginError {
    #[error("unknown belief set {0:?}")]
    UnknownBeliefSetName(String),
    #[error("mixture weight {0} is outside [0, 1]")]
    AlphaOutOfRange(String),
    #[error("prior has {found} entries, instance has {expected} states")]
    PriorDimension { expected: usize, found: usize },
    #[error("unrecognized model {0:?}")]
    UnknownModel(String),
}

pub fn set_min(set: &BeliefSet, phi: &UtilityVector) -> Rational {
    set.vertices()
        .iter()
        .map(|p| p.expectation(phi))
        .min()
        .expect("belief sets are nonempty")
}

pub fn set_max(set: &BeliefSet, phi: &UtilityVector) -> Rational {
    set.vertices()
        .iter()
        .map(|p| p.expectation(phi))
        .max()
        .expect("belief sets are nonempty")
}

/// Both collection operators evaluated at one utility difference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginProfile {
    /// max over sets of the min over priors
    #[serde(with = "rational::serde_str")]
    pub maxmin: Rational,
    /// min over sets of the max over priors
    #[serde(with = "rational::serde_str")]
    pub minmax: Rational,
}

pub fn margin_profile(collection: &BeliefCollection, phi: &UtilityVector) -> MarginProfile {
    let mut maxmin: Option<Rational> = None;
    let mut minmax: Option<Rational> = None;
    for set in collection.sets() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for p in set.vertices() {
            let e = p.expectation(phi);
            if lo.as_ref().is_none_or(|l| &e < l) {
                lo = Some(e.clone());
            }
            if hi.as_ref().is_none_or(|h| &e > h) {
                hi = Some(e);
            }
        }
        let (lo, hi) = (lo.expect("nonempty"), hi.expect("nonempty"));
        if maxmin.as_ref().is_none_or(|m| &lo > m) {
            maxmin = Some(lo);
        }
        if minmax.as_ref().is_none_or(|m| &hi < m) {
            minmax = Some(hi);
        }
    }
    MarginProfile {
        maxmin: maxmin.expect("collections are nonempty"),
        minmax: minmax.expect("collections are nonempty"),
    }
}

/// The preference models.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ModelKind {
    GeneralizedBewley,
    Disjunctive,
    Conjunctive,
    HalfMixture,
    AlphaMixture(Rational),
    Bewley(String),
    Justifiable(String),
    Seu(Prior),
}

impl ModelKind {
    /// Whether the margin is a function of the [`MarginProfile`] alone.
    pub fn uses_profile(&self) -> bool {
        matches!(
            self,
            ModelKind::GeneralizedBewley
                | ModelKind::Disjunctive
                | ModelKind::Conjunctive
                | ModelKind::HalfMixture
                | ModelKind::AlphaMixture(_)
        )
    }

    /// Margin from a precomputed profile; `None` for the single-set and
    /// single-prior models.
    pub fn margin_from_profile(&self, profile: &MarginProfile) -> Option<Rational> {
        let MarginProfile { maxmin, minmax } = profile;
        Some(match self {
            ModelKind::GeneralizedBewley => maxmin.clone(),
            ModelKind::Disjunctive => maxmin.max(minmax).clone(),
            ModelKind::Conjunctive => maxmin.min(minmax).clone(),
            ModelKind::HalfMixture => (maxmin + minmax) / rational::int(2),
            ModelKind::AlphaMixture(alpha) => alpha * maxmin + (Rational::one() - alpha) * minmax,
            _ => return None,
        })
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::GeneralizedBewley => write!(f, "generalized-bewley"),
            ModelKind::Disjunctive => write!(f, "disjunctive"),
            ModelKind::Conjunctive => write!(f, "conjunctive"),
            ModelKind::HalfMixture => write!(f, "half-mixture"),
            ModelKind::AlphaMixture(a) => write!(f, "alpha-mixture:{}", rational::format(a)),
            ModelKind::Bewley(s) => write!(f, "bewley:{s}"),
            ModelKind::Justifiable(s) => write!(f, "justifiable:{s}"),
            ModelKind::Seu(p) => {
                let parts: Vec<String> = p.probabilities().iter().map(rational::format).collect();
                write!(f, "seu:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for ModelKind {
    type Err = MarginError;

    /// Accepts the [`Display`](fmt::Display) forms plus the short aliases
    /// `gb`, `disj`, `conj`, `half`, `alpha:Q`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || MarginError::UnknownModel(text.to_string());
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (text.trim(), None),
        };
        let kind = match (head.to_ascii_lowercase().as_str(), arg) {
            ("generalized-bewley" | "gb", None) => ModelKind::GeneralizedBewley,
            ("disjunctive" | "disj", None) => ModelKind::Disjunctive,
            ("conjunctive" | "conj", None) => ModelKind::Conjunctive,
            ("half-mixture" | "half", None) => ModelKind::HalfMixture,
            ("alpha-mixture" | "alpha", Some(a)) => {
                let alpha = rational::parse(a).map_err(|_| bad())?;
                check_alpha(&alpha)?;
                ModelKind::AlphaMixture(alpha)
            }
            ("bewley", Some(s)) => ModelKind::Bewley(s.to_string()),
            ("justifiable", Some(s)) => ModelKind::Justifiable(s.to_string()),
            ("seu", Some(p)) => {
                let probs = p
                    .split(',')
                    .map(rational::parse)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                ModelKind::Seu(Prior::new(probs).map_err(|_| bad())?)
            }
            _ => return Err(bad()),
        };
        Ok(kind)
    }
}

impl Serialize for ModelKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ModelKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

fn check_alpha(alpha: &Rational) -> Result<(), MarginError> {
    if alpha.is_negative() || alpha > &Rational::one() {
        Err(MarginError::AlphaOutOfRange(rational::format(alpha)))
    } else {
        Ok(())
    }
}

/// A model kind resolved against a concrete belief collection.
#[derive(Debug, Clone)]
pub struct Model<'a> {
    kind: ModelKind,
    collection: &'a BeliefCollection,
    set: Option<&'a BeliefSet>,
}

impl<'a> Model<'a> {
    pub fn new(kind: ModelKind, collection: &'a BeliefCollection) -> Result<Self, MarginError> {
        let set = match &kind {
            ModelKind::Bewley(name) | ModelKind::Justifiable(name) => Some(
                collection
                    .get(name)
                    .ok_or_else(|| MarginError::UnknownBeliefSetName(name.clone()))?,
            ),
            ModelKind::AlphaMixture(alpha) => {
                check_alpha(alpha)?;
                None
            }
            ModelKind::Seu(p) if p.dim() != collection.dim() => {
                return Err(MarginError::PriorDimension {
                    expected: collection.dim(),
                    found: p.dim(),
                })
            }
            _ => None,
        };
        Ok(Self {
            kind,
            collection,
            set,
        })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn collection(&self) -> &'a BeliefCollection {
        self.collection
    }

    pub fn margin(&self, phi: &UtilityVector) -> Rational {
        match &self.kind {
            ModelKind::Bewley(_) => set_min(self.set.expect("resolved"), phi),
            ModelKind::Justifiable(_) => set_max(self.set.expect("resolved"), phi),
            ModelKind::Seu(p) => p.expectation(phi),
            kind => kind
                .margin_from_profile(&margin_profile(self.collection, phi))
                .expect("profile model"),
        }
    }

    /// Same as [`Model::margin`], reusing a profile already computed for `phi`.
    pub fn margin_with_profile(&self, phi: &UtilityVector, profile: &MarginProfile) -> Rational {
        self.kind
            .margin_from_profile(profile)
            .unwrap_or_else(|| self.margin(phi))
    }
}

pub fn model_margin(
    kind: &ModelKind,
    collection: &BeliefCollection,
    phi: &UtilityVector,
) -> Result<Rational, MarginError> {
    Ok(Model::new(kind.clone(), collection)?.margin(phi))
}

/// How two acts compare under a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    StrictlyPreferred,
    StrictlyDispreferred,
    Indifferent,
    Incomparable,
}

impl Relation {
    pub fn from_judgments(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (true, false) => Relation::StrictlyPreferred,
            (false, true) => Relation::StrictlyDispreferred,
            (true, true) => Relation::Indifferent,
            (false, false) => Relation::Incomparable,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::StrictlyPreferred => "strictly_preferred",
            Relation::StrictlyDispreferred => "strictly_dispreferred",
            Relation::Indifferent => "indifferent",
            Relation::Incomparable => "incomparable",
        };
        f.write_str(s)
    }
}

fn difference(inst: &Instance, f: &Act, g: &Act) -> UtilityVector {
    let u = inst.utility();
    utility_vector(u, f).sub(&utility_vector(u, g))
}

pub fn weakly_prefers(kind: &ModelKind, inst: &Instance, f: &Act, g: &Act) -> Result<bool, MarginError> {
    let m = model_margin(kind, inst.collection(), &difference(inst, f, g))?;
    Ok(!m.is_negative())
}

/// The robust subrelation: the margin must be strictly positive.
pub fn robust_weakly_prefers(
    kind: &ModelKind,
    inst: &Instance,
    f: &Act,
    g: &Act,
) -> Result<bool, MarginError> {
    let m = model_margin(kind, inst.collection(), &difference(inst, f, g))?;
    Ok(m.is_positive())
}

pub fn classify(kind: &ModelKind, inst: &Instance, f: &Act, g: &Act) -> Result<Relation, MarginError> {
    Ok(Relation::from_judgments(
        weakly_prefers(kind, inst, f, g)?,
        weakly_prefers(kind, inst, g, f)?,
    ))
}

/// Both directed margins and the resulting relation for a pair of acts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub model: ModelKind,
    pub relation: Relation,
    #[serde(with = "rational::serde_str")]
    pub forward_margin: Rational,
    #[serde(with = "rational::serde_str")]
    pub backward_margin: Rational,
    pub forward_profile: MarginProfile,
    pub backward_profile: MarginProfile,
    pub difference: UtilityVector,
}

pub fn evaluate(kind: &ModelKind, inst: &Instance, f: &Act, g: &Act) -> Result<Evaluation, MarginError> {
    let model = Model::new(kind.clone(), inst.collection())?;
    let phi = difference(inst, f, g);
    let back = phi.neg();
    let forward_margin = model.margin(&phi);
    let backward_margin = model.margin(&back);
    Ok(Evaluation {
        model: kind.clone(),
        relation: Relation::from_judgments(!forward_margin.is_negative(), !backward_margin.is_negative()),
        forward_profile: margin_profile(inst.collection(), &phi),
        backward_profile: margin_profile(inst.collection(), &back),
        forward_margin,
        backward_margin,
        difference: phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use num_traits::Zero;

    fn prior(a: (i64, i64), b: (i64, i64)) -> Prior {
        Prior::new(vec![ratio(a.0, a.1), ratio(b.0, b.1)]).unwrap()
    }

    fn interval_set(name: &str, lo: (i64, i64), hi: (i64, i64)) -> BeliefSet {
        BeliefSet::new(
            name,
            vec![
                prior(lo, (lo.1 - lo.0, lo.1)),
                prior(hi, (hi.1 - hi.0, hi.1)),
            ],
        )
        .unwrap()
    }

    /// P1 = hull{(1/5,4/5),(2/5,3/5)}, P2 = hull{(3/5,2/5),(4/5,1/5)}.
    fn disjoint_pair() -> BeliefCollection {
        BeliefCollection::new(vec![
            interval_set("P1", (1, 5), (2, 5)),
            interval_set("P2", (3, 5), (4, 5)),
        ])
        .unwrap()
    }

    fn phi() -> UtilityVector {
        UtilityVector::from_ints(&[1, -1])
    }

    #[test]
    fn set_extremes_on_interval() {
        let coll = disjoint_pair();
        let p1 = &coll.sets()[0];
        assert_eq!(set_min(p1, &phi()), ratio(-3, 5));
        assert_eq!(set_max(p1, &phi()), ratio(-1, 5));
        let single = BeliefSet::new("s", vec![prior((1, 5), (4, 5))]).unwrap();
        assert_eq!(set_min(&single, &phi()), ratio(-3, 5));
        assert_eq!(set_max(&single, &phi()), ratio(-3, 5));
        let c = UtilityVector::constant(ratio(7, 2), 2);
        assert_eq!(set_min(p1, &c), ratio(7, 2));
        assert_eq!(set_max(p1, &c), ratio(7, 2));
    }

    #[test]
    fn profile_of_disjoint_pair() {
        let prof = margin_profile(&disjoint_pair(), &phi());
        assert_eq!(prof.maxmin, ratio(1, 5));
        assert_eq!(prof.minmax, ratio(-1, 5));
    }

    #[test]
    fn model_margins_of_disjoint_pair() {
        let coll = disjoint_pair();
        let m = |k: ModelKind| model_margin(&k, &coll, &phi()).unwrap();
        assert_eq!(m(ModelKind::GeneralizedBewley), ratio(1, 5));
        assert_eq!(m(ModelKind::Disjunctive), ratio(1, 5));
        assert_eq!(m(ModelKind::Conjunctive), ratio(-1, 5));
        assert_eq!(m(ModelKind::HalfMixture), int(0));
        assert_eq!(m(ModelKind::AlphaMixture(ratio(3, 4))), ratio(1, 10));
        assert_eq!(m(ModelKind::Bewley("P2".into())), ratio(1, 5));
        assert_eq!(m(ModelKind::Justifiable("P1".into())), ratio(-1, 5));
        assert_eq!(m(ModelKind::Seu(prior((1, 2), (1, 2)))), int(0));
        assert_eq!(
            model_margin(&ModelKind::Bewley("nope".into()), &coll, &phi()),
            Err(MarginError::UnknownBeliefSetName("nope".into()))
        );
    }

    #[test]
    fn zero_vector_has_zero_margin_everywhere() {
        let coll = disjoint_pair();
        let zero = UtilityVector::zeros(2);
        for kind in [
            ModelKind::GeneralizedBewley,
            ModelKind::Disjunctive,
            ModelKind::Conjunctive,
            ModelKind::HalfMixture,
            ModelKind::AlphaMixture(ratio(1, 3)),
            ModelKind::Bewley("P1".into()),
            ModelKind::Justifiable("P2".into()),
            ModelKind::Seu(prior((1, 3), (2, 3))),
        ] {
            assert!(model_margin(&kind, &coll, &zero).unwrap().is_zero(), "{kind}");
        }
    }

    #[test]
    fn specializations_collapse() {
        let set = interval_set("P", (1, 5), (2, 5));
        let single = BeliefCollection::new(vec![set.clone()]).unwrap();
        let prof = margin_profile(&single, &phi());
        assert_eq!(prof.maxmin, set_min(&set, &phi()));
        assert_eq!(prof.minmax, set_max(&set, &phi()));
        let singletons = BeliefCollection::new(
            set.vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| BeliefSet::new(format!("v{i}"), vec![v.clone()]).unwrap())
                .collect(),
        )
        .unwrap();
        let prof = margin_profile(&singletons, &phi());
        assert_eq!(prof.maxmin, ratio(-1, 5));
        assert_eq!(prof.minmax, ratio(-3, 5));
    }

    #[test]
    fn model_kind_text_round_trip() {
        for text in [
            "generalized-bewley",
            "disjunctive",
            "conjunctive",
            "half-mixture",
            "alpha-mixture:3/4",
            "bewley:P1",
            "justifiable:P2",
            "seu:1/3,2/3",
        ] {
            let kind: ModelKind = text.parse().unwrap();
            assert_eq!(kind.to_string(), text);
        }
        assert_eq!("gb".parse::<ModelKind>().unwrap(), ModelKind::GeneralizedBewley);
        assert!("alpha:3/2".parse::<ModelKind>().is_err());
        assert!("seu:1/2,1/3".parse::<ModelKind>().is_err());
        assert!("maxmin-eu".parse::<ModelKind>().is_err());
    }

    #[test]
    fn relation_table() {
        assert_eq!(Relation::from_judgments(true, false), Relation::StrictlyPreferred);
        assert_eq!(Relation::from_judgments(false, true), Relation::StrictlyDispreferred);
        assert_eq!(Relation::from_judgments(true, true), Relation::Indifferent);
        assert_eq!(Relation::from_judgments(false, false), Relation::Incomparable);
    }

    mod with_instance {
        use super::*;
        use crate::model::{Instance, PrizeSet, StateSpace, UtilityFunction};
        use std::collections::BTreeMap;

        fn inst(coll: BeliefCollection) -> Instance {
            Instance::new(
                StateSpace::new(vec!["s1".into(), "s2".into()]).unwrap(),
                PrizeSet::new(vec!["lo".into(), "hi".into()]).unwrap(),
                UtilityFunction::new(vec![int(-1), int(1)]).unwrap(),
                coll,
                BTreeMap::new(),
            )
            .unwrap()
        }

        fn act(inst: &Instance, a: (i64, i64), b: (i64, i64)) -> Act {
            inst.act_with_utility(&UtilityVector::new(vec![ratio(a.0, a.1), ratio(b.0, b.1)]))
                .unwrap()
        }

        #[test]
        fn judgments_on_disjoint_pair() {
            let inst = inst(disjoint_pair());
            let f = act(&inst, (1, 2), (-1, 2));
            let g = act(&inst, (0, 1), (0, 1));
            assert!(weakly_prefers(&ModelKind::GeneralizedBewley, &inst, &f, &g).unwrap());
            assert!(!weakly_prefers(&ModelKind::Conjunctive, &inst, &f, &g).unwrap());
            assert_eq!(
                classify(&ModelKind::GeneralizedBewley, &inst, &f, &g).unwrap(),
                Relation::Indifferent
            );
            assert_eq!(
                classify(&ModelKind::Conjunctive, &inst, &f, &g).unwrap(),
                Relation::Incomparable
            );
            assert!(!robust_weakly_prefers(&ModelKind::Conjunctive, &inst, &f, &g).unwrap());
        }

        #[test]
        fn identical_acts_are_indifferent_not_robust() {
            let inst = inst(disjoint_pair());
            let f = act(&inst, (1, 3), (-1, 4));
            for kind in [ModelKind::GeneralizedBewley, ModelKind::Conjunctive, ModelKind::Bewley("P1".into())] {
                assert_eq!(classify(&kind, &inst, &f, &f).unwrap(), Relation::Indifferent);
                assert!(!robust_weakly_prefers(&kind, &inst, &f, &f).unwrap());
            }
        }

        #[test]
        fn dominance_implies_preference() {
            let inst = inst(disjoint_pair());
            let f = act(&inst, (1, 2), (1, 1));
            let g = act(&inst, (1, 4), (1, 2));
            for kind in [
                ModelKind::GeneralizedBewley,
                ModelKind::Disjunctive,
                ModelKind::Conjunctive,
                ModelKind::HalfMixture,
                ModelKind::Justifiable("P1".into()),
            ] {
                assert!(weakly_prefers(&kind, &inst, &f, &g).unwrap());
                assert!(robust_weakly_prefers(&kind, &inst, &f, &g).unwrap());
            }
        }

        #[test]
        fn bewley_strict_when_min_positive() {
            let inst = inst(disjoint_pair());
            let f = act(&inst, (1, 1), (-1, 2));
            let g = act(&inst, (-1, 1), (-1, 1));
            assert_eq!(
                classify(&ModelKind::Bewley("P2".into()), &inst, &f, &g).unwrap(),
                Relation::StrictlyPreferred
            );
        }

        #[test]
        fn evaluation_reports_both_directions() {
            let inst = inst(disjoint_pair());
            let f = act(&inst, (1, 2), (-1, 2));
            let g = act(&inst, (0, 1), (0, 1));
            let ev = evaluate(&ModelKind::GeneralizedBewley, &inst, &f, &g).unwrap();
            assert_eq!(ev.forward_margin, ratio(1, 10));
            assert_eq!(ev.backward_margin, ratio(1, 10));
            assert_eq!(ev.relation, Relation::Indifferent);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn prior3() -> impl Strategy<Value = Prior> {
            (0i64..=12, 0i64..=12).prop_map(|(a, b)| {
                let (a, b) = (a.min(b), a.max(b));
                Prior::new(vec![ratio(a, 12), ratio(b - a, 12), ratio(12 - b, 12)]).unwrap()
            })
        }

        fn collection3() -> impl Strategy<Value = BeliefCollection> {
            proptest::collection::vec(proptest::collection::btree_set(prior3(), 1..4), 1..4).prop_map(
                |sets| {
                    BeliefCollection::new(
                        sets.into_iter()
                            .enumerate()
                            .map(|(i, vs)| BeliefSet::new(format!("P{i}"), vs.into_iter().collect()).unwrap())
                            .collect(),
                    )
                    .unwrap()
                },
            )
        }

        fn vec3() -> impl Strategy<Value = UtilityVector> {
            proptest::collection::vec((-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d)), 3)
                .prop_map(UtilityVector::new)
        }

        fn kinds() -> Vec<ModelKind> {
            vec![
                ModelKind::GeneralizedBewley,
                ModelKind::Disjunctive,
                ModelKind::Conjunctive,
                ModelKind::HalfMixture,
                ModelKind::AlphaMixture(ratio(3, 4)),
                ModelKind::Bewley("P0".into()),
                ModelKind::Justifiable("P0".into()),
            ]
        }

        proptest! {
            #[test]
            fn positive_homogeneity(coll in collection3(), phi in vec3(), n in 1i64..9, d in 1i64..9) {
                let lambda = ratio(n, d);
                for kind in kinds() {
                    let scaled = model_margin(&kind, &coll, &phi.scale(&lambda)).unwrap();
                    prop_assert_eq!(scaled, &lambda * model_margin(&kind, &coll, &phi).unwrap());
                }
            }

            #[test]
            fn diagonal_translation(coll in collection3(), phi in vec3(), c in -5i64..5) {
                let c = int(c);
                for kind in kinds() {
                    let shifted = model_margin(&kind, &coll, &phi.shift(&c)).unwrap();
                    prop_assert_eq!(shifted, model_margin(&kind, &coll, &phi).unwrap() + &c);
                }
            }

            #[test]
            fn antisymmetry_bridge(coll in collection3(), phi in vec3()) {
                let a = margin_profile(&coll, &phi.neg());
                let b = margin_profile(&coll, &phi);
                prop_assert_eq!(a.maxmin, -b.minmax);
            }

            #[test]
            fn max_min_duality(coll in collection3(), phi in vec3()) {
                for set in coll.sets() {
                    prop_assert_eq!(set_max(set, &phi), -set_min(set, &phi.neg()));
                }
            }

            #[test]
            fn conjunctive_half_disjunctive_ordering(coll in collection3(), phi in vec3()) {
                let m = |k: ModelKind| model_margin(&k, &coll, &phi).unwrap();
                let (c, h, d) = (m(ModelKind::Conjunctive), m(ModelKind::HalfMixture), m(ModelKind::Disjunctive));
                prop_assert!(c <= h && h <= d);
                prop_assert_eq!(m(ModelKind::AlphaMixture(ratio(1, 2))), h);
            }

            #[test]
            fn single_set_specializations(set in proptest::collection::btree_set(prior3(), 1..5), phi in vec3()) {
                let set = BeliefSet::new("P", set.into_iter().collect()).unwrap();
                let single = BeliefCollection::new(vec![set.clone()]).unwrap();
                let sign = |k: ModelKind, c: &BeliefCollection| !model_margin(&k, c, &phi).unwrap().is_negative();
                let bewley = sign(ModelKind::Bewley("P".into()), &single);
                let justifiable = sign(ModelKind::Justifiable("P".into()), &single);
                prop_assert_eq!(sign(ModelKind::GeneralizedBewley, &single), bewley);
                prop_assert_eq!(sign(ModelKind::Conjunctive, &single), bewley);
                prop_assert_eq!(sign(ModelKind::Disjunctive, &single), justifiable);

                let singletons = BeliefCollection::new(
                    set.vertices().iter().enumerate()
                        .map(|(i, v)| BeliefSet::new(format!("v{i}"), vec![v.clone()]).unwrap())
                        .collect(),
                ).unwrap();
                prop_assert_eq!(sign(ModelKind::GeneralizedBewley, &singletons), justifiable);
                prop_assert_eq!(sign(ModelKind::Disjunctive, &singletons), justifiable);
                prop_assert_eq!(sign(ModelKind::Conjunctive, &singletons), bewley);
            }
        }
    }
}
