//! Cross-sections of the preference cones on planes through the diagonal.
//!
//! A plane is spanned by `e1 = (1, ..., 1)` and the part of a direction `d`
//! orthogonal to it. Directions around the circle are rational points from
//! the tangent half-angle map, so every sign below is exact; floats only
//! appear in the decimal columns of the JSON export.

use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::margins::margin_profile;
use crate::model::{BeliefCollection, UtilityVector};
use crate::rational::{self, ratio, Rational};

/// Denominator for the rounded half-angle tangents.
const TAN_DENOMINATOR: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SliceError {
    #[error("direction is parallel to the diagonal")]
    DegenerateDirection,
    #[error("direction has {found} entries, collection has {expected} states")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("need at least 8 samples, got {0}")]
    TooFewSamples(usize),
    #[error("alpha {0} outside [0, 1]")]
    AlphaOutOfRange(String),
    #[error("unknown export format {0:?} (expected csv or json)")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlicePlane {
    pub direction: UtilityVector,
    pub e1: UtilityVector,
    /// `d - mean(d)·1`, scaled so its largest entry has absolute value 1
    pub e2: UtilityVector,
}

impl SlicePlane {
    pub fn new(direction: UtilityVector) -> Result<Self, SliceError> {
        let n = direction.dim();
        if n == 0 || direction.is_constant() {
            return Err(SliceError::DegenerateDirection);
        }
        let mean: Rational = direction.entries().iter().sum::<Rational>() / Rational::from_integer(n.into());
        let centered = direction.shift(&-mean);
        let e2 = centered.scale(&(Rational::one() / centered.max_abs()));
        Ok(Self {
            e1: UtilityVector::constant(Rational::one(), n),
            e2,
            direction,
        })
    }

    /// `cos·e1 + sin·e2` for a rational point on the unit circle.
    pub fn point(&self, cos: &Rational, sin: &Rational) -> UtilityVector {
        self.e1.scale(cos).add(&self.e2.scale(sin))
    }
}

/// Rational unit vectors for `k/n` of a turn. For even `n` the second half
/// is the exact negation of the first.
pub fn circle_samples(n: usize) -> Vec<(Rational, Rational)> {
    let direct = |k: usize| {
        if 2 * k == n {
            return (-Rational::one(), Rational::zero());
        }
        let t = (PI * k as f64 / n as f64).tan();
        let t = ratio((t * TAN_DENOMINATOR as f64).round() as i64, TAN_DENOMINATOR);
        let denom = Rational::one() + &t * &t;
        ((Rational::one() - &t * &t) / &denom, (&t + &t) / denom)
    };
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(n);
    for k in 0..n {
        if n.is_multiple_of(2) && 2 * k >= n {
            let (c, s) = &out[k - n / 2];
            out.push((-c.clone(), -s.clone()));
        } else {
            out.push(direct(k));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceSample {
    /// sample index; the angle is `k/n` of a turn
    pub k: usize,
    #[serde(with = "rational::serde_str")]
    pub cos: Rational,
    #[serde(with = "rational::serde_str")]
    pub sin: Rational,
    pub phi: UtilityVector,
    #[serde(with = "rational::serde_str")]
    pub maxmin: Rational,
    #[serde(with = "rational::serde_str")]
    pub minmax: Rational,
    #[serde(with = "rational::serde_str")]
    pub half: Rational,
    #[serde(with = "rational::serde_str::option")]
    pub alpha: Option<Rational>,
}

/// A maximal run of samples, wrapping around the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub start: usize,
    pub len: usize,
}

/// Sign arcs for each cone, as runs of sample indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcSummary {
    /// `maxmin ≥ 0`
    pub maxmin: Vec<Arc>,
    /// `minmax ≥ 0`
    pub minmax: Vec<Arc>,
    /// both `≥ 0`
    pub conjunctive: Vec<Arc>,
    /// both `< 0`: the complement of the disjunctive cone
    pub disjunctive_complement: Vec<Arc>,
    pub half: Vec<Arc>,
    pub alpha: Option<Vec<Arc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceProfile {
    pub plane: SlicePlane,
    pub n: usize,
    #[serde(with = "rational::serde_str::option")]
    pub alpha: Option<Rational>,
    pub samples: Vec<SliceSample>,
    pub arcs: ArcSummary,
}

/// Maximal circular runs of `true`.
pub fn circular_arcs(mask: &[bool]) -> Vec<Arc> {
    let n = mask.len();
    if mask.iter().all(|&b| b) {
        return if n == 0 { vec![] } else { vec![Arc { start: 0, len: n }] };
    }
    // start scanning just after a false entry so no run is split
    let origin = mask.iter().position(|&b| !b).expect("some entry is false");
    let mut arcs = Vec::new();
    let mut run: Option<Arc> = None;
    for step in 1..=n {
        let i = (origin + step) % n;
        match (mask[i], run.as_mut()) {
            (true, Some(r)) => r.len += 1,
            (true, None) => run = Some(Arc { start: i, len: 1 }),
            (false, _) => arcs.extend(run.take()),
        }
    }
    arcs.extend(run);
    arcs.sort_by_key(|a| a.start);
    arcs
}

pub fn slice_profile(
    collection: &BeliefCollection,
    plane: &SlicePlane,
    n: usize,
    alpha: Option<&Rational>,
) -> Result<SliceProfile, SliceError> {
    if n < 8 {
        return Err(SliceError::TooFewSamples(n));
    }
    if plane.direction.dim() != collection.dim() {
        return Err(SliceError::DimensionMismatch {
            expected: collection.dim(),
            found: plane.direction.dim(),
        });
    }
    if let Some(a) = alpha {
        if a.is_negative() || a > &Rational::one() {
            return Err(SliceError::AlphaOutOfRange(rational::format(a)));
        }
    }
    let two = rational::int(2);
    let samples: Vec<SliceSample> = circle_samples(n)
        .into_iter()
        .enumerate()
        .map(|(k, (cos, sin))| {
            let phi = plane.point(&cos, &sin);
            let p = margin_profile(collection, &phi);
            let half = (&p.maxmin + &p.minmax) / &two;
            let alpha = alpha.map(|a| a * &p.maxmin + (Rational::one() - a) * &p.minmax);
            SliceSample {
                k,
                cos,
                sin,
                phi,
                maxmin: p.maxmin,
                minmax: p.minmax,
                half,
                alpha,
            }
        })
        .collect();
    let mask = |f: &dyn Fn(&SliceSample) -> bool| samples.iter().map(f).collect::<Vec<bool>>();
    let nonneg = |r: &Rational| !r.is_negative();
    let arcs = ArcSummary {
        maxmin: circular_arcs(&mask(&|s| nonneg(&s.maxmin))),
        minmax: circular_arcs(&mask(&|s| nonneg(&s.minmax))),
        conjunctive: circular_arcs(&mask(&|s| nonneg(&s.maxmin) && nonneg(&s.minmax))),
        disjunctive_complement: circular_arcs(&mask(&|s| s.maxmin.is_negative() && s.minmax.is_negative())),
        half: circular_arcs(&mask(&|s| nonneg(&s.half))),
        alpha: alpha.map(|_| circular_arcs(&mask(&|s| s.alpha.as_ref().is_some_and(nonneg)))),
    };
    Ok(SliceProfile {
        plane: plane.clone(),
        n,
        alpha: alpha.cloned(),
        samples,
        arcs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cone {
    /// `maxmin ≥ 0`
    GeneralizedBewley,
    /// `minmax ≥ 0`
    Dual,
    Conjunctive,
    Disjunctive,
    HalfMixture,
    AlphaMixture,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexityVerdict {
    pub cone: Cone,
    pub passes: bool,
    /// arcs that were tested: the complement's for the disjunctive cone
    pub arcs: Vec<Arc>,
    pub detail: String,
}

/// Sampled convexity: the cone's nonnegative samples (the complement's,
/// for the disjunctive cone) form one circular arc of at most a half turn.
/// The half-mixture cone must cover exactly a half turn.
pub fn certify_slice_convexity(profile: &SliceProfile, cone: Cone) -> ConvexityVerdict {
    let n = profile.n;
    let half_turn = n / 2 + 1;
    let arcs = match cone {
        Cone::GeneralizedBewley => profile.arcs.maxmin.clone(),
        Cone::Dual => profile.arcs.minmax.clone(),
        Cone::Conjunctive => profile.arcs.conjunctive.clone(),
        Cone::Disjunctive => profile.arcs.disjunctive_complement.clone(),
        Cone::HalfMixture => profile.arcs.half.clone(),
        Cone::AlphaMixture => profile.arcs.alpha.clone().unwrap_or_default(),
    };
    let (passes, detail) = match arcs.as_slice() {
        [only] => match cone {
            Cone::HalfMixture => {
                // n/2 rounded down, plus one when the boundary hits a sample
                let ok = only.len == n / 2 || only.len == n / 2 + 1;
                (ok, format!("one arc of {} samples, half turn is {}", only.len, n as f64 / 2.0))
            }
            Cone::Conjunctive | Cone::Disjunctive => (
                only.len <= half_turn,
                format!("one arc of {} samples (at most {half_turn} allowed)", only.len),
            ),
            _ => (true, format!("one arc of {} samples", only.len)),
        },
        [] => (false, "no samples in the region".to_string()),
        many => (false, format!("{} separate arcs", many.len())),
    };
    ConvexityVerdict {
        cone,
        passes,
        arcs,
        detail,
    }
}

#[derive(Serialize)]
struct ExportValue {
    exact: String,
    decimal: f64,
}

impl ExportValue {
    fn of(r: &Rational) -> Self {
        Self {
            exact: rational::format(r),
            decimal: rational::to_f64(r),
        }
    }
}

#[derive(Serialize)]
struct ExportRow {
    theta: ExportValue,
    maxmin: ExportValue,
    minmax: ExportValue,
    half: ExportValue,
    alpha: Option<ExportValue>,
    phi: UtilityVector,
}

pub const CSV_HEADER: &str = "theta,maxmin,minmax,half,alpha";

/// `csv` with exact cells, or `json` with exact and decimal values.
/// The angle is in turns.
pub fn export_slice(profile: &SliceProfile, format: &str) -> Result<String, SliceError> {
    let theta = |k: usize| ratio(k as i64, profile.n as i64);
    match format {
        "csv" => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for s in &profile.samples {
                let alpha = s.alpha.as_ref().map(rational::format).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    rational::format(&theta(s.k)),
                    rational::format(&s.maxmin),
                    rational::format(&s.minmax),
                    rational::format(&s.half),
                    alpha
                ));
            }
            Ok(out)
        }
        "json" => {
            let rows: Vec<ExportRow> = profile
                .samples
                .iter()
                .map(|s| ExportRow {
                    theta: ExportValue::of(&theta(s.k)),
                    maxmin: ExportValue::of(&s.maxmin),
                    minmax: ExportValue::of(&s.minmax),
                    half: ExportValue::of(&s.half),
                    alpha: s.alpha.as_ref().map(ExportValue::of),
                    phi: s.phi.clone(),
                })
                .collect();
            Ok(serde_json::to_string_pretty(&rows).expect("rows serialize"))
        }
        other => Err(SliceError::UnknownFormat(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::model::{BeliefSet, Prior};

    fn plane(d: &[i64]) -> SlicePlane {
        SlicePlane::new(UtilityVector::from_ints(d)).unwrap()
    }

    #[test]
    fn samples_lie_on_the_unit_circle() {
        for n in [8, 9, 64] {
            let s = circle_samples(n);
            assert_eq!(s.len(), n);
            for (c, si) in &s {
                assert_eq!(c * c + si * si, Rational::one());
            }
            assert_eq!(s[0], (Rational::one(), Rational::zero()));
        }
        let s = circle_samples(16);
        for k in 0..8 {
            assert_eq!(s[k + 8], (-s[k].0.clone(), -s[k].1.clone()));
        }
    }

    #[test]
    fn diagonal_directions_are_rejected() {
        assert_eq!(SlicePlane::new(UtilityVector::from_ints(&[2, 2])), Err(SliceError::DegenerateDirection));
        let p = plane(&[1, -1]);
        assert!(p.e2.entries().iter().sum::<Rational>().is_zero());
    }

    #[test]
    fn arcs_wrap_around() {
        assert_eq!(circular_arcs(&[true, false, false, true]), vec![Arc { start: 3, len: 2 }]);
        assert_eq!(circular_arcs(&[false, false]), vec![]);
        assert_eq!(circular_arcs(&[true; 3]), vec![Arc { start: 0, len: 3 }]);
        assert_eq!(
            circular_arcs(&[true, false, true, false]),
            vec![Arc { start: 0, len: 1 }, Arc { start: 2, len: 1 }]
        );
    }

    #[test]
    fn singleton_prior_gives_one_half_plane() {
        let coll = BeliefCollection::new(vec![BeliefSet::new(
            "p",
            vec![Prior::new(vec![ratio(1, 3), ratio(2, 3)]).unwrap()],
        )
        .unwrap()])
        .unwrap();
        let prof = slice_profile(&coll, &plane(&[1, -1]), 64, None).unwrap();
        let a = &prof.arcs;
        assert_eq!(a.maxmin, a.minmax);
        assert_eq!(a.maxmin, a.conjunctive);
        assert_eq!(a.maxmin, a.half);
        assert!(certify_slice_convexity(&prof, Cone::HalfMixture).passes);
    }

    #[test]
    fn disjoint_pair_cone_sizes() {
        let inst = builtin::disjoint_pair();
        let prof = slice_profile(inst.collection(), &plane(&[1, -1]), 64, Some(&ratio(3, 4))).unwrap();
        let len = |arcs: &Vec<Arc>| arcs.iter().map(|a| a.len).sum::<usize>();
        assert!(len(&prof.arcs.maxmin) > 33);
        assert!(len(&prof.arcs.minmax) < 32);
        let half = len(&prof.arcs.half);
        assert!(half == 32 || half == 33);
        for s in &prof.samples {
            assert_eq!(s.half, (&s.maxmin + &s.minmax) / rational::int(2));
        }
        for cone in [Cone::Conjunctive, Cone::Disjunctive, Cone::HalfMixture] {
            assert!(certify_slice_convexity(&prof, cone).passes, "{cone:?}");
        }
    }

    #[test]
    fn antipodal_identity() {
        let inst = builtin::cutting_intervals();
        let prof = slice_profile(inst.collection(), &plane(&[3, -1]), 32, None).unwrap();
        for k in 0..16 {
            assert_eq!(prof.samples[k + 16].maxmin, -prof.samples[k].minmax.clone());
        }
        // k = 0 is the positive diagonal, where every margin is 1
        assert_eq!(prof.samples[0].maxmin, Rational::one());
        assert_eq!(prof.samples[16].half, -Rational::one());
    }

    #[test]
    fn exports() {
        let inst = builtin::touching_intervals();
        let prof = slice_profile(inst.collection(), &plane(&[1, 0]), 8, None).unwrap();
        let csv = export_slice(&prof, "csv").unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 9);
        assert!(lines[1].starts_with("0,1,1,1,"));
        let json: serde_json::Value = serde_json::from_str(&export_slice(&prof, "json").unwrap()).unwrap();
        let rows = json.as_array().unwrap();
        assert_eq!(rows.len(), 8);
        for (row, s) in rows.iter().zip(&prof.samples) {
            let exact = row["maxmin"]["exact"].as_str().unwrap();
            assert_eq!(rational::parse(exact).unwrap(), s.maxmin);
        }
        assert_eq!(export_slice(&prof, "svg"), Err(SliceError::UnknownFormat("svg".into())));
    }

    #[test]
    fn preconditions() {
        let inst = builtin::touching_intervals();
        assert_eq!(
            slice_profile(inst.collection(), &plane(&[1, 0]), 4, None),
            Err(SliceError::TooFewSamples(4))
        );
        assert!(slice_profile(inst.collection(), &plane(&[1, 0, 0]), 8, None).is_err());
        assert!(slice_profile(inst.collection(), &plane(&[1, 0]), 8, Some(&ratio(3, 2))).is_err());
    }
}
