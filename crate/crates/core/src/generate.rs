//! Seeded random instances.
//!
//! Priors are integer compositions of a common denominator `D` drawn by
//! stick-breaking and then shuffled across states, so every entry is a
//! multiple of `1/D`. The utility is fixed to two prizes at -1 and 1.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{BeliefCollection, BeliefSet, Instance, PrizeSet, Prior, StateSpace, UtilityFunction};
use crate::rational::{int, ratio};

pub const MAX_STATES: usize = 4;
pub const MAX_SETS: usize = 4;
pub const MAX_VERTICES: usize = 6;
pub const MAX_DENOMINATOR: u32 = 10_000;

/// How the belief sets relate to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// every set drawn on its own
    Independent,
    /// every set contains one shared prior
    Anchored,
    /// anchored, and the last set is that prior alone
    AnchoredSingleton,
}

impl Family {
    /// The family used for `seed` when none is fixed.
    pub fn for_seed(seed: u64) -> Self {
        match seed % 3 {
            0 => Family::Independent,
            1 => Family::Anchored,
            _ => Family::AnchoredSingleton,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    pub num_states: usize,
    pub num_sets: usize,
    pub vertices_per_set: usize,
    pub denominator_bound: u32,
    /// `None` cycles through the families by seed
    pub family: Option<Family>,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            num_states: 2,
            num_sets: 3,
            vertices_per_set: 3,
            denominator_bound: 20,
            family: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("parameters out of range: {0}")]
    ParamsOutOfRange(String),
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1u64, |acc, i| acc.saturating_mul(n - k + i) / i)
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::ParamsOutOfRange(msg));
        if !(2..=MAX_STATES).contains(&self.num_states) {
            return bad(format!("num_states must be in 2..={MAX_STATES}, got {}", self.num_states));
        }
        if !(1..=MAX_SETS).contains(&self.num_sets) {
            return bad(format!("num_sets must be in 1..={MAX_SETS}, got {}", self.num_sets));
        }
        if !(1..=MAX_VERTICES).contains(&self.vertices_per_set) {
            return bad(format!("vertices_per_set must be in 1..={MAX_VERTICES}, got {}", self.vertices_per_set));
        }
        if !(1..=MAX_DENOMINATOR).contains(&self.denominator_bound) {
            return bad(format!("denominator_bound must be in 1..={MAX_DENOMINATOR}, got {}", self.denominator_bound));
        }
        let d = u64::from(self.denominator_bound);
        let k = self.num_states as u64 - 1;
        let points = binomial(d + k, k);
        if points < self.vertices_per_set as u64 + 1 {
            return bad(format!(
                "denominator_bound {d} gives only {points} priors over {} states, too few for {} distinct vertices",
                self.num_states, self.vertices_per_set
            ));
        }
        Ok(())
    }
}

fn draw_prior(rng: &mut ChaCha8Rng, states: usize, denominator: u32) -> Prior {
    let mut units = Vec::with_capacity(states);
    let mut left = denominator;
    for _ in 0..states - 1 {
        let take = rng.gen_range(0..=left);
        units.push(take);
        left -= take;
    }
    units.push(left);
    units.shuffle(rng);
    let d = i64::from(denominator);
    Prior::new(units.into_iter().map(|u| ratio(i64::from(u), d)).collect()).expect("units sum to the denominator")
}

/// Fills `vertices` up to `count` with fresh priors, redrawing duplicates.
fn fill(rng: &mut ChaCha8Rng, vertices: &mut Vec<Prior>, count: usize, params: &GenParams) {
    while vertices.len() < count {
        let p = draw_prior(rng, params.num_states, params.denominator_bound);
        if !vertices.contains(&p) {
            vertices.push(p);
        }
    }
}

pub fn generate_instance(seed: u64, params: &GenParams) -> Result<Instance, GenError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = params.family.unwrap_or_else(|| Family::for_seed(seed));
    let anchor = draw_prior(&mut rng, params.num_states, params.denominator_bound);
    let mut sets = Vec::with_capacity(params.num_sets);
    for i in 0..params.num_sets {
        let mut vertices = Vec::with_capacity(params.vertices_per_set);
        let singleton = family == Family::AnchoredSingleton && i + 1 == params.num_sets;
        if family != Family::Independent {
            vertices.push(anchor.clone());
        }
        if !singleton {
            fill(&mut rng, &mut vertices, params.vertices_per_set, params);
        }
        sets.push(BeliefSet::new(format!("P{}", i + 1), vertices).expect("distinct vertices"));
    }
    let collection = BeliefCollection::new(sets).expect("uniform dimension and names");
    let states = StateSpace::new((1..=params.num_states).map(|i| format!("s{i}")).collect()).expect("nonempty");
    let prizes = PrizeSet::new(vec!["lo".into(), "hi".into()]).expect("two prizes");
    let utility = UtilityFunction::new(vec![int(-1), int(1)]).expect("nonconstant");
    Ok(Instance::new(states, prizes, utility, collection, BTreeMap::new()).expect("consistent by construction"))
}
