//! Axiom audits on finite act batteries.
//!
//! An audit evaluates one axiom for one model over every tuple of a battery
//! the axiom quantifies over. All pairwise judgments are computed once into
//! bitset tables, so the triple-quantified axioms reduce to subset tests.
//! Verdicts mean "holds on this battery"; witnesses are replayable.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::margins::{MarginError, Model, ModelKind};
use crate::model::{mix_acts, utility_vector, Act, Instance, ModelError, UtilityFunction, UtilityVector};
use crate::rational::{self, ratio, Rational};

/// Witness lists are cut off here; `violations` keeps the full count.
pub const MAX_WITNESSES: usize = 10;

/// Spot-check acts used as the common mixing partner in Independence.
const INDEPENDENCE_PARTNERS: usize = 8;

fn mixing_grid() -> [Rational; 3] {
    [ratio(1, 4), ratio(1, 2), ratio(3, 4)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomKind {
    NonTriviality,
    Reflexivity,
    UnambiguousCompleteness,
    UnambiguousTransitivity,
    Monotonicity,
    Independence,
    Completeness,
    Transitivity,
    ConstantBoundTransitivity,
    FavorableMixing,
    NegativeCompleteness,
    NegativeConstantBoundTransitivity,
}

impl AxiomKind {
    pub const ALL: [AxiomKind; 12] = [
        AxiomKind::NonTriviality,
        AxiomKind::Reflexivity,
        AxiomKind::UnambiguousCompleteness,
        AxiomKind::UnambiguousTransitivity,
        AxiomKind::Monotonicity,
        AxiomKind::Independence,
        AxiomKind::Completeness,
        AxiomKind::Transitivity,
        AxiomKind::ConstantBoundTransitivity,
        AxiomKind::FavorableMixing,
        AxiomKind::NegativeCompleteness,
        AxiomKind::NegativeConstantBoundTransitivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomKind::NonTriviality => "non-triviality",
            AxiomKind::Reflexivity => "reflexivity",
            AxiomKind::UnambiguousCompleteness => "unambiguous-completeness",
            AxiomKind::UnambiguousTransitivity => "unambiguous-transitivity",
            AxiomKind::Monotonicity => "monotonicity",
            AxiomKind::Independence => "independence",
            AxiomKind::Completeness => "completeness",
            AxiomKind::Transitivity => "transitivity",
            AxiomKind::ConstantBoundTransitivity => "constant-bound-transitivity",
            AxiomKind::FavorableMixing => "favorable-mixing",
            AxiomKind::NegativeCompleteness => "negative-completeness",
            AxiomKind::NegativeConstantBoundTransitivity => "negative-constant-bound-transitivity",
        }
    }

    /// Axioms whose quantifier ranges over constant acts.
    pub fn needs_constants(self) -> bool {
        matches!(
            self,
            AxiomKind::UnambiguousCompleteness
                | AxiomKind::ConstantBoundTransitivity
                | AxiomKind::NegativeConstantBoundTransitivity
        )
    }
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let alias = match t.as_str() {
            "cbt" => Some(AxiomKind::ConstantBoundTransitivity),
            "ncbt" => Some(AxiomKind::NegativeConstantBoundTransitivity),
            "nc" => Some(AxiomKind::NegativeCompleteness),
            _ => None,
        };
        alias
            .or_else(|| AxiomKind::ALL.into_iter().find(|a| a.name() == t))
            .ok_or_else(|| format!("unknown axiom {s:?}"))
    }
}

impl Serialize for AxiomKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for AxiomKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AxiomError {
    #[error("radius {radius} exceeds the utility range [{min}, {max}]")]
    RadiusExceedsUtilityRange { radius: String, min: String, max: String },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("{0} quantifies over constant acts but the battery has none")]
    BatteryMissingConstants(AxiomKind),
    #[error("battery is empty")]
    EmptyBattery,
    #[error("battery act {index} does not fit the instance")]
    ActMismatch { index: usize },
    #[error(transparent)]
    Margin(#[from] MarginError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A finite set of acts with a human-readable description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Battery {
    pub description: String,
    pub acts: Vec<Act>,
}

impl Battery {
    pub fn new(description: impl Into<String>, acts: Vec<Act>) -> Self {
        Self {
            description: description.into(),
            acts,
        }
    }

    pub fn len(&self) -> usize {
        self.acts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.acts.is_empty()
    }
}

/// Lattice `{-r, -r + r/res, ..., r}^dim`, first coordinate most significant.
pub fn utility_lattice(dim: usize, resolution: u32, radius: &Rational) -> Vec<UtilityVector> {
    let res = i64::from(resolution);
    let levels: Vec<Rational> = (-res..=res)
        .map(|k| radius * Rational::from_integer(k.into()) / Rational::from_integer(res.into()))
        .collect();
    let mut out = Vec::with_capacity(levels.len().pow(dim as u32));
    let mut idx = vec![0usize; dim];
    loop {
        out.push(UtilityVector::new(idx.iter().map(|&i| levels[i].clone()).collect()));
        let mut pos = dim;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < levels.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Largest battery `generate_act_grid` will build.
pub const MAX_GRID_ACTS: usize = 20_000;

/// Acts realizing every point of the utility lattice, constants included.
pub fn generate_act_grid(inst: &Instance, resolution: u32, radius: &Rational) -> Result<Battery, AxiomError> {
    if resolution == 0 {
        return Err(AxiomError::InvalidGrid("resolution must be positive".into()));
    }
    if !radius.is_positive() {
        return Err(AxiomError::InvalidGrid("radius must be positive".into()));
    }
    let u = inst.utility();
    if &-radius.clone() < u.min_value() || radius > u.max_value() {
        return Err(AxiomError::RadiusExceedsUtilityRange {
            radius: rational::format(radius),
            min: rational::format(u.min_value()),
            max: rational::format(u.max_value()),
        });
    }
    let levels = 2 * resolution as usize + 1;
    let size = (levels as f64).powi(inst.num_states() as i32);
    if size > MAX_GRID_ACTS as f64 {
        return Err(AxiomError::InvalidGrid(format!("{size} acts exceeds the limit of {MAX_GRID_ACTS}")));
    }
    let acts = utility_lattice(inst.num_states(), resolution, radius)
        .iter()
        .map(|v| inst.act_with_utility(v))
        .collect::<Result<Vec<_>, _>>()?;
    let description = format!(
        "lattice resolution {resolution} radius {} over {} states ({} acts)",
        rational::format(radius),
        inst.num_states(),
        acts.len()
    );
    Ok(Battery::new(description, acts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One directed judgment `left ≿ right` (or `≿⁺` when `robust`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Judgment {
    pub left: String,
    pub right: String,
    pub left_utility: UtilityVector,
    pub right_utility: UtilityVector,
    #[serde(with = "rational::serde_str")]
    pub margin: Rational,
    pub robust: bool,
    pub holds: bool,
}

impl Judgment {
    fn decide(margin: &Rational, robust: bool) -> bool {
        if robust {
            margin.is_positive()
        } else {
            !margin.is_negative()
        }
    }

    /// Recomputes the margin from the stored utilities.
    pub fn replays(&self, model: &Model<'_>) -> bool {
        let m = model.margin(&self.left_utility.sub(&self.right_utility));
        m == self.margin && Judgment::decide(&m, self.robust) == self.holds
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.robust { "≿⁺" } else { "≿" };
        let neg = if self.holds { "" } else { "not " };
        write!(f, "{neg}{} {rel} {} (margin {})", self.left, self.right, rational::format(&self.margin))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// battery indices of the acts involved
    pub acts: Vec<usize>,
    pub judgments: Vec<Judgment>,
    pub description: String,
}

impl Witness {
    pub fn replays(&self, model: &Model<'_>) -> bool {
        self.judgments.iter().all(|j| j.replays(model))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatterySummary {
    pub description: String,
    pub size: usize,
    pub constants: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub axiom: AxiomKind,
    pub model: ModelKind,
    pub battery: BatterySummary,
    pub verdict: Verdict,
    /// tuples examined
    pub checked: u64,
    pub violations: u64,
    pub witnesses: Vec<Witness>,
    /// judgments in the quantified range decided at margin exactly zero
    pub boundary_flags: u64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

struct Collector {
    checked: u64,
    violations: u64,
    witnesses: Vec<Witness>,
}

impl Collector {
    fn new() -> Self {
        Self {
            checked: 0,
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    /// Counts a violation; builds the witness only while under the cap.
    fn violation(&mut self, build: impl FnOnce() -> Witness) {
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(build());
        }
    }
}

/// Precomputed judgments for one model on one battery. Reuse it to run
/// several axioms without recomputing margins.
pub struct AuditContext<'a> {
    model: Model<'a>,
    utility: &'a UtilityFunction,
    battery: &'a Battery,
    utils: Vec<UtilityVector>,
    is_constant: FixedBitSet,
    constants: Vec<usize>,
    /// `diff_of[f * n + g]` indexes `diffs` with `u(f) - u(g)`
    diff_of: Vec<u32>,
    diffs: Vec<UtilityVector>,
    margins: Vec<Rational>,
    /// `weak[f]` holds `g` when `f ≿ g`
    weak: Vec<FixedBitSet>,
    /// `weak_by[g]` holds `f` when `f ≿ g`
    weak_by: Vec<FixedBitSet>,
    /// `dom[f]` holds `g` when `f` statewise dominates `g`
    dom: Vec<FixedBitSet>,
    /// `zero[f]` holds `g` when the margin of `u(f) - u(g)` is exactly zero
    zero: Vec<FixedBitSet>,
}

impl<'a> AuditContext<'a> {
    pub fn new(kind: &ModelKind, inst: &'a Instance, battery: &'a Battery) -> Result<Self, AxiomError> {
        if battery.is_empty() {
            return Err(AxiomError::EmptyBattery);
        }
        let model = Model::new(kind.clone(), inst.collection())?;
        for (index, act) in battery.acts.iter().enumerate() {
            if act.num_states() != inst.num_states() || act.lottery(0).weights().len() != inst.prizes().len() {
                return Err(AxiomError::ActMismatch { index });
            }
        }
        let n = battery.len();
        let utils: Vec<UtilityVector> = battery.acts.iter().map(|a| utility_vector(inst.utility(), a)).collect();
        let mut is_constant = FixedBitSet::with_capacity(n);
        for (i, a) in battery.acts.iter().enumerate() {
            is_constant.set(i, a.is_constant());
        }
        let constants = is_constant.ones().collect();

        let mut ids: HashMap<UtilityVector, u32> = HashMap::new();
        let mut diffs = Vec::new();
        let mut diff_of = Vec::with_capacity(n * n);
        for f in &utils {
            for g in &utils {
                let d = f.sub(g);
                let next = diffs.len() as u32;
                let id = *ids.entry(d).or_insert_with_key(|d| {
                    diffs.push(d.clone());
                    next
                });
                diff_of.push(id);
            }
        }
        let margins: Vec<Rational> = diffs.iter().map(|d| model.margin(d)).collect();

        let mut weak = vec![FixedBitSet::with_capacity(n); n];
        let mut weak_by = vec![FixedBitSet::with_capacity(n); n];
        let mut zero = vec![FixedBitSet::with_capacity(n); n];
        let mut dom = vec![FixedBitSet::with_capacity(n); n];
        for f in 0..n {
            for g in 0..n {
                let m = &margins[diff_of[f * n + g] as usize];
                if !m.is_negative() {
                    weak[f].insert(g);
                    weak_by[g].insert(f);
                }
                if m.is_zero() {
                    zero[f].insert(g);
                }
                if utils[f].dominates(&utils[g]) {
                    dom[f].insert(g);
                }
            }
        }
        Ok(Self {
            model,
            utility: inst.utility(),
            battery,
            utils,
            is_constant,
            constants,
            diff_of,
            diffs,
            margins,
            weak,
            weak_by,
            dom,
            zero,
        })
    }

    pub fn model(&self) -> &Model<'a> {
        &self.model
    }

    pub fn utilities(&self) -> &[UtilityVector] {
        &self.utils
    }

    /// Number of distinct utility differences in the battery.
    pub fn distinct_differences(&self) -> usize {
        self.diffs.len()
    }

    fn n(&self) -> usize {
        self.utils.len()
    }

    fn margin(&self, f: usize, g: usize) -> &Rational {
        &self.margins[self.diff_of[f * self.n() + g] as usize]
    }

    fn prefers(&self, f: usize, g: usize) -> bool {
        self.weak[f].contains(g)
    }

    fn robust(&self, f: usize, g: usize) -> bool {
        self.margin(f, g).is_positive()
    }

    fn judgment(&self, f: usize, g: usize, robust: bool) -> Judgment {
        let margin = self.margin(f, g).clone();
        Judgment {
            left: format!("a{f}"),
            right: format!("a{g}"),
            left_utility: self.utils[f].clone(),
            right_utility: self.utils[g].clone(),
            holds: Judgment::decide(&margin, robust),
            margin,
            robust,
        }
    }

    fn mixed_judgment(&self, left: (String, UtilityVector), right: (String, UtilityVector)) -> Judgment {
        let margin = self.model.margin(&left.1.sub(&right.1));
        Judgment {
            left: left.0,
            right: right.0,
            left_utility: left.1,
            right_utility: right.1,
            holds: Judgment::decide(&margin, false),
            margin,
            robust: false,
        }
    }

    fn witness(&self, acts: Vec<usize>, judgments: Vec<Judgment>) -> Witness {
        let description = judgments.iter().map(|j| j.to_string()).collect::<Vec<_>>().join("; ");
        Witness {
            acts,
            judgments,
            description,
        }
    }

    fn summary(&self) -> BatterySummary {
        BatterySummary {
            description: self.battery.description.clone(),
            size: self.n(),
            constants: self.constants.len(),
        }
    }

    /// Zero-margin judgments among ordered pairs `f != g` with `g` in `mask[f]`.
    fn zeros_within(&self, rows: impl Iterator<Item = usize>, mask: impl Fn(usize) -> Option<FixedBitSet>) -> u64 {
        rows.map(|f| {
            let mut z = self.zero[f].clone();
            z.set(f, false);
            if let Some(m) = mask(f) {
                z.intersect_with(&m);
            }
            z.count_ones(..) as u64
        })
        .sum()
    }

    fn boundary_flags(&self, axiom: AxiomKind, extra: u64) -> u64 {
        let n = self.n();
        match axiom {
            AxiomKind::Reflexivity => (0..n).filter(|&f| self.zero[f].contains(f)).count() as u64,
            AxiomKind::UnambiguousCompleteness => {
                self.zeros_within(self.constants.iter().copied(), |_| Some(self.is_constant.clone()))
            }
            AxiomKind::Monotonicity => self.zeros_within(0..n, |f| Some(self.dom[f].clone())),
            AxiomKind::ConstantBoundTransitivity | AxiomKind::NegativeConstantBoundTransitivity => {
                self.zeros_within(0..n, |f| {
                    if self.is_constant.contains(f) {
                        None
                    } else {
                        Some(self.is_constant.clone())
                    }
                })
            }
            AxiomKind::Independence | AxiomKind::FavorableMixing => extra,
            _ => self.zeros_within(0..n, |_| None),
        }
    }

    pub fn audit(&self, axiom: AxiomKind) -> Result<AuditReport, AxiomError> {
        if axiom.needs_constants() && self.constants.is_empty() {
            return Err(AxiomError::BatteryMissingConstants(axiom));
        }
        let mut c = Collector::new();
        let mut extra_flags = 0;
        match axiom {
            AxiomKind::NonTriviality => self.non_triviality(&mut c),
            AxiomKind::Reflexivity => self.reflexivity(&mut c),
            AxiomKind::UnambiguousCompleteness => self.completeness_over(&mut c, &self.constants, false),
            AxiomKind::UnambiguousTransitivity => self.unambiguous_transitivity(&mut c),
            AxiomKind::Monotonicity => self.monotonicity(&mut c),
            AxiomKind::Independence => extra_flags = self.independence(&mut c),
            AxiomKind::Completeness => {
                let all: Vec<usize> = (0..self.n()).collect();
                self.completeness_over(&mut c, &all, false)
            }
            AxiomKind::Transitivity => self.transitivity(&mut c),
            AxiomKind::ConstantBoundTransitivity => self.cbt(&mut c),
            AxiomKind::FavorableMixing => extra_flags = self.favorable_mixing(&mut c),
            AxiomKind::NegativeCompleteness => {
                let all: Vec<usize> = (0..self.n()).collect();
                self.completeness_over(&mut c, &all, true)
            }
            AxiomKind::NegativeConstantBoundTransitivity => self.ncbt(&mut c),
        }
        Ok(AuditReport {
            axiom,
            model: self.model.kind().clone(),
            battery: self.summary(),
            verdict: if c.violations == 0 { Verdict::Pass } else { Verdict::Fail },
            checked: c.checked,
            violations: c.violations,
            witnesses: c.witnesses,
            boundary_flags: self.boundary_flags(axiom, extra_flags),
        })
    }

    fn non_triviality(&self, c: &mut Collector) {
        let n = self.n();
        c.checked = (n * n) as u64;
        let strict = (0..n).any(|f| self.weak[f].ones().any(|g| !self.prefers(g, f)));
        if !strict {
            c.violation(|| Witness {
                acts: Vec::new(),
                judgments: Vec::new(),
                description: "no strictly ranked pair in the battery".into(),
            });
        }
    }

    fn reflexivity(&self, c: &mut Collector) {
        for f in 0..self.n() {
            c.checked += 1;
            if !self.prefers(f, f) {
                c.violation(|| self.witness(vec![f], vec![self.judgment(f, f, false)]));
            }
        }
    }

    /// Plain completeness over `acts`, or its negative form with `≿⁺`.
    fn completeness_over(&self, c: &mut Collector, acts: &[usize], negative: bool) {
        for (i, &f) in acts.iter().enumerate() {
            for &g in &acts[i + 1..] {
                c.checked += 1;
                let bad = if negative {
                    self.robust(f, g) && self.robust(g, f)
                } else {
                    !self.prefers(f, g) && !self.prefers(g, f)
                };
                if bad {
                    c.violation(|| {
                        self.witness(vec![f, g], vec![self.judgment(f, g, negative), self.judgment(g, f, negative)])
                    });
                }
            }
        }
    }

    fn transitivity(&self, c: &mut Collector) {
        let n = self.n() as u64;
        c.checked = n * n * n;
        for f in 0..self.n() {
            for g in self.weak[f].ones() {
                for h in self.weak[g].difference(&self.weak[f]) {
                    c.violation(|| {
                        self.witness(
                            vec![f, g, h],
                            vec![self.judgment(f, g, false), self.judgment(g, h, false), self.judgment(f, h, false)],
                        )
                    });
                }
            }
        }
    }

    fn unambiguous_transitivity(&self, c: &mut Collector) {
        let n = self.n();
        c.checked = 2 * (n * n * n) as u64;
        // (i) f dominates g and g ≿ h
        for f in 0..n {
            for g in self.dom[f].ones() {
                for h in self.weak[g].difference(&self.weak[f]) {
                    c.violation(|| {
                        let mut w = self.witness(
                            vec![f, g, h],
                            vec![self.judgment(g, h, false), self.judgment(f, h, false)],
                        );
                        w.description = format!("a{f} dominates a{g}; {}", w.description);
                        w
                    });
                }
            }
        }
        // (ii) f ≿ g and g dominates h
        for g in 0..n {
            for h in self.dom[g].ones() {
                for f in self.weak_by[g].difference(&self.weak_by[h]) {
                    c.violation(|| {
                        let mut w = self.witness(
                            vec![f, g, h],
                            vec![self.judgment(f, g, false), self.judgment(f, h, false)],
                        );
                        w.description = format!("a{g} dominates a{h}; {}", w.description);
                        w
                    });
                }
            }
        }
    }

    fn monotonicity(&self, c: &mut Collector) {
        for f in 0..self.n() {
            for g in self.dom[f].ones() {
                c.checked += 1;
                if !self.prefers(f, g) {
                    c.violation(|| {
                        let mut w = self.witness(vec![f, g], vec![self.judgment(f, g, false)]);
                        w.description = format!("a{f} dominates a{g}; {}", w.description);
                        w
                    });
                }
            }
        }
    }

    fn cbt(&self, c: &mut Collector) {
        let n = self.n() as u64;
        for &x in &self.constants {
            for &y in &self.constants {
                c.checked += n;
                if self.prefers(x, y) {
                    continue;
                }
                let mut between = self.weak[x].clone();
                between.intersect_with(&self.weak_by[y]);
                for f in between.ones() {
                    c.violation(|| {
                        self.witness(
                            vec![x, f, y],
                            vec![self.judgment(x, f, false), self.judgment(f, y, false), self.judgment(x, y, false)],
                        )
                    });
                }
            }
        }
    }

    fn ncbt(&self, c: &mut Collector) {
        let n = self.n();
        for &x in &self.constants {
            for &y in &self.constants {
                c.checked += n as u64;
                if !self.prefers(x, y) {
                    continue;
                }
                for f in 0..n {
                    if !self.prefers(x, f) && !self.prefers(f, y) {
                        c.violation(|| {
                            self.witness(
                                vec![x, f, y],
                                vec![
                                    self.judgment(x, f, false),
                                    self.judgment(f, y, false),
                                    self.judgment(x, y, false),
                                ],
                            )
                        });
                    }
                }
            }
        }
    }

    fn mix(&self, alpha: &Rational, f: usize, h: usize) -> (String, UtilityVector) {
        let beta = Rational::from_integer(1.into()) - alpha;
        (
            format!("{}·a{f} + {}·a{h}", rational::format(alpha), rational::format(&beta)),
            self.utils[f].mix(alpha, &self.utils[h]),
        )
    }

    /// Exact homogeneity on each distinct difference, plus sign agreement
    /// of `αf + (1-α)h` against `αg + (1-α)h` for a spread of partners `h`.
    fn independence(&self, c: &mut Collector) -> u64 {
        let n = self.n();
        let mut representative: Vec<Option<(usize, usize)>> = vec![None; self.diffs.len()];
        for f in 0..n {
            for g in 0..n {
                let slot = &mut representative[self.diff_of[f * n + g] as usize];
                if slot.is_none() {
                    *slot = Some((f, g));
                }
            }
        }
        let step = (n / INDEPENDENCE_PARTNERS).max(1);
        let partners: Vec<usize> = (0..n).step_by(step).take(INDEPENDENCE_PARTNERS).collect();
        let mut zeros = 0;
        for (f, g) in representative.into_iter().flatten() {
            let base = self.margin(f, g);
            for alpha in mixing_grid() {
                // with h = f the mixed difference is exactly α(u(f) - u(g))
                c.checked += 1;
                let scaled = self.mixed_judgment(self.mix(&alpha, f, f), self.mix(&alpha, g, f));
                if scaled.margin.is_zero() {
                    zeros += 1;
                }
                if scaled.margin != &alpha * base {
                    c.violation(|| self.witness(vec![f, g], vec![self.judgment(f, g, false), scaled.clone()]));
                }
                for &h in &partners {
                    c.checked += 1;
                    let mf = mix_acts(&alpha, &self.battery.acts[f], &self.battery.acts[h]).expect("alpha in grid");
                    let mg = mix_acts(&alpha, &self.battery.acts[g], &self.battery.acts[h]).expect("alpha in grid");
                    let (lf, lg) = (self.mix(&alpha, f, h).0, self.mix(&alpha, g, h).0);
                    let uf = utility_vector(self.utility, &mf);
                    let ug = utility_vector(self.utility, &mg);
                    let mixed = self.mixed_judgment((lf, uf), (lg, ug));
                    if mixed.margin.is_zero() {
                        zeros += 1;
                    }
                    if mixed.holds != self.prefers(f, g) {
                        c.violation(|| self.witness(vec![f, g, h], vec![self.judgment(f, g, false), mixed.clone()]));
                    }
                }
            }
        }
        zeros
    }

    /// `g ≻ f` and `αf + (1-α)h ≿ g` must give `λf + (1-λ)h ≿ g` for `λ < α`.
    fn favorable_mixing(&self, c: &mut Collector) -> u64 {
        let n = self.n();
        let grid = mixing_grid();
        let mut cache: HashMap<UtilityVector, bool> = HashMap::new();
        let mut zeros = 0;
        for f in 0..n {
            let mixes: Vec<Vec<UtilityVector>> = (0..n)
                .map(|h| grid.iter().map(|a| self.utils[f].mix(a, &self.utils[h])).collect())
                .collect();
            for g in 0..n {
                if !(self.prefers(g, f) && !self.prefers(f, g)) {
                    continue;
                }
                for (h, row) in mixes.iter().enumerate() {
                    let weak: Vec<bool> = row
                        .iter()
                        .map(|m| {
                            let d = m.sub(&self.utils[g]);
                            *cache.entry(d).or_insert_with_key(|d| {
                                let margin = self.model.margin(d);
                                if margin.is_zero() {
                                    zeros += 1;
                                }
                                !margin.is_negative()
                            })
                        })
                        .collect();
                    for a in 0..grid.len() {
                        for l in 0..a {
                            c.checked += 1;
                            if weak[a] && !weak[l] {
                                c.violation(|| {
                                    let g_side = (format!("a{g}"), self.utils[g].clone());
                                    self.witness(
                                        vec![f, g, h],
                                        vec![
                                            self.judgment(g, f, false),
                                            self.judgment(f, g, false),
                                            self.mixed_judgment(self.mix(&grid[a], f, h), g_side.clone()),
                                            self.mixed_judgment(self.mix(&grid[l], f, h), g_side),
                                        ],
                                    )
                                });
                            }
                        }
                    }
                }
            }
        }
        zeros
    }
}

pub fn audit(
    axiom: AxiomKind,
    kind: &ModelKind,
    inst: &Instance,
    battery: &Battery,
) -> Result<AuditReport, AxiomError> {
    AuditContext::new(kind, inst, battery)?.audit(axiom)
}

/// Every applicable axiom, in [`AxiomKind::ALL`] order. Axioms needing
/// constants are skipped when the battery has none.
pub fn audit_suite(kind: &ModelKind, inst: &Instance, battery: &Battery) -> Result<Vec<AuditReport>, AxiomError> {
    let ctx = AuditContext::new(kind, inst, battery)?;
    AxiomKind::ALL
        .into_iter()
        .filter(|a| !(a.needs_constants() && ctx.constants.is_empty()))
        .map(|a| ctx.audit(a))
        .collect()
}
