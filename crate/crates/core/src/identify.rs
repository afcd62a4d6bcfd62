//! Equality and distinctness of gradient Gibbs measures built from the
//! solved families, and the classification of those measures at fixed `tau`.
//!
//! Parameters follow the z-representation: a period-2 law is `(1, a)`, a
//! period-4 law is `(1, a, 1, b)`. Period-3 laws are named by their
//! u-value `c`, i.e. `u = (1, c, c)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ggm::{single_bond_marginal, two_bond_marginal};
use crate::model::{PeriodicBoundaryLaw, TemperatureParams};
use crate::solver::{solution_catalog, SolutionCatalog, SolutionLabel};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    Distinct,
    Undetermined,
}

/// The condition behind a verdict, with the values needed to recheck it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `a = b`
    SameParameter {
        left: f64,
        right: f64,
    },
    /// `a b = 1`
    ReciprocalParameters {
        left: f64,
        right: f64,
        product: f64,
    },
    /// Neither `a = b` nor `a b = 1`.
    ParameterGap {
        left: f64,
        right: f64,
    },
    /// Sums `a + b` of two period-4 pairs and their product.
    PairSums {
        left: f64,
        right: f64,
        product: f64,
    },
    /// A period-3 parameter `c` against a period-4 pair `(a, b)`.
    CrossFamily {
        c: f64,
        a: f64,
        b: f64,
    },
    SingleBondGap {
        zeta: i64,
        left: f64,
        right: f64,
    },
    TwoBondGap {
        zeta1: i64,
        zeta2: i64,
        left: f64,
        right: f64,
    },
    /// All compared marginals agree; `max_gap` is the largest difference.
    MarginalsAgree {
        compared: usize,
        max_gap: f64,
    },
    /// `z'_(i + shift) = scale * z_i` for all `i`, up to `distance`.
    ShiftScale {
        shift: usize,
        scale: f64,
        distance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceVerdict {
    pub verdict: Verdict,
    pub witness: Witness,
}

impl EquivalenceVerdict {
    fn new(verdict: Verdict, witness: Witness) -> Self {
        Self { verdict, witness }
    }

    pub fn is_equal(&self) -> bool {
        self.verdict == Verdict::Equal
    }

    pub fn is_distinct(&self) -> bool {
        self.verdict == Verdict::Distinct
    }
}

fn same(a: f64, b: f64) -> bool {
    tolerance::close(a, b, tolerance::PARAMETER_EQUAL)
}

/// Period-2 laws `(1, a)` and `(1, b)` give the same measure iff `a = b` or
/// `a b = 1`.
pub fn same_ggm_2per(a: f64, b: f64) -> EquivalenceVerdict {
    if same(a, b) {
        EquivalenceVerdict::new(Verdict::Equal, Witness::SameParameter { left: a, right: b })
    } else if same(a * b, 1.0) {
        EquivalenceVerdict::new(
            Verdict::Equal,
            Witness::ReciprocalParameters {
                left: a,
                right: b,
                product: a * b,
            },
        )
    } else {
        EquivalenceVerdict::new(
            Verdict::Distinct,
            Witness::ParameterGap { left: a, right: b },
        )
    }
}

/// Equal period-4 measures force `a1 + b1 = a2 + b2` or
/// `(a1 + b1)(a2 + b2) = 4`; when both fail the measures are distinct.
/// The condition is only necessary, so equality is never concluded.
pub fn distinct_4per(pair1: (f64, f64), pair2: (f64, f64)) -> EquivalenceVerdict {
    let s1 = pair1.0 + pair1.1;
    let s2 = pair2.0 + pair2.1;
    let witness = Witness::PairSums {
        left: s1,
        right: s2,
        product: s1 * s2,
    };
    if !same(s1, s2) && !same(s1 * s2, 4.0) {
        EquivalenceVerdict::new(Verdict::Distinct, witness)
    } else {
        EquivalenceVerdict::new(Verdict::Undetermined, witness)
    }
}

/// Period-3 laws `(1, c1, c1)` and `(1, c2, c2)` give the same measure iff
/// `c1 = c2`.
pub fn same_ggm_3per(c1: f64, c2: f64) -> EquivalenceVerdict {
    if same(c1, c2) {
        EquivalenceVerdict::new(
            Verdict::Equal,
            Witness::SameParameter {
                left: c1,
                right: c2,
            },
        )
    } else {
        EquivalenceVerdict::new(
            Verdict::Distinct,
            Witness::ParameterGap {
                left: c1,
                right: c2,
            },
        )
    }
}

/// A non-constant period-3 law never gives the measure of a period-4 law.
pub fn cross_3_4_distinct(c: f64, pair: (f64, f64)) -> EquivalenceVerdict {
    let witness = Witness::CrossFamily {
        c,
        a: pair.0,
        b: pair.1,
    };
    if same(c, 1.0) {
        EquivalenceVerdict::new(Verdict::Undetermined, witness)
    } else {
        EquivalenceVerdict::new(Verdict::Distinct, witness)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn common_embedding(
    law1: &PeriodicBoundaryLaw,
    law2: &PeriodicBoundaryLaw,
) -> Result<(PeriodicBoundaryLaw, PeriodicBoundaryLaw)> {
    if law1.k() != law2.k() {
        return Err(Error::Domain(format!(
            "laws for different tree orders ({} and {})",
            law1.k(),
            law2.k()
        )));
    }
    let (q1, q2) = (law1.period(), law2.period());
    let q = q1 / gcd(q1, q2) * q2;
    Ok((law1.embed(q)?, law2.embed(q)?))
}

/// Compares single-bond marginals for `|zeta| <= zmax` and two-bond marginals
/// for `|zeta1|, |zeta2| <= zmax`. A gap above [`tolerance::MARGINAL_GAP`]
/// proves the measures differ; agreement proves nothing.
pub fn numeric_distinguisher(
    law1: &PeriodicBoundaryLaw,
    law2: &PeriodicBoundaryLaw,
    theta: f64,
    zmax: i64,
) -> Result<EquivalenceVerdict> {
    let (l1, l2) = common_embedding(law1, law2)?;
    let mut max_gap: f64 = 0.0;
    let mut compared = 0;
    for zeta in -zmax..=zmax {
        let left = single_bond_marginal(&l1, theta, zeta)?;
        let right = single_bond_marginal(&l2, theta, zeta)?;
        compared += 1;
        max_gap = max_gap.max((left - right).abs());
        if (left - right).abs() > tolerance::MARGINAL_GAP {
            return Ok(EquivalenceVerdict::new(
                Verdict::Distinct,
                Witness::SingleBondGap { zeta, left, right },
            ));
        }
    }
    for zeta1 in -zmax..=zmax {
        for zeta2 in -zmax..=zmax {
            let left = two_bond_marginal(&l1, theta, zeta1, zeta2)?;
            let right = two_bond_marginal(&l2, theta, zeta1, zeta2)?;
            compared += 1;
            max_gap = max_gap.max((left - right).abs());
            if (left - right).abs() > tolerance::MARGINAL_GAP {
                return Ok(EquivalenceVerdict::new(
                    Verdict::Distinct,
                    Witness::TwoBondGap {
                        zeta1,
                        zeta2,
                        left,
                        right,
                    },
                ));
            }
        }
    }
    Ok(EquivalenceVerdict::new(
        Verdict::Undetermined,
        Witness::MarginalsAgree { compared, max_gap },
    ))
}

/// Smallest relative distance between `law2` and a shifted, rescaled copy of
/// `law1`, as `(shift, scale, distance)`.
pub fn shift_scale_distance(
    law1: &PeriodicBoundaryLaw,
    law2: &PeriodicBoundaryLaw,
) -> Result<(usize, f64, f64)> {
    let (l1, l2) = common_embedding(law1, law2)?;
    let (z1, z2) = (l1.z(), l2.z());
    let q = z1.len();
    let mut best = (0, 1.0, f64::INFINITY);
    for shift in 0..q {
        let scale = z2[shift] / z1[0];
        let distance = (0..q)
            .map(|i| (z1[i] * scale - z2[(i + shift) % q]).abs() / z2[(i + shift) % q])
            .fold(0.0, f64::max);
        if distance < best.2 {
            best = (shift, scale, distance);
        }
    }
    Ok(best)
}

/// Which criterion a pairwise comparison was judged by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    TwoPeriodic,
    FourPeriodic,
    ThreePeriodic,
    CrossThreeFour,
    /// No criterion covers the pair.
    None,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::TwoPeriodic => "two-periodic criterion (a = b or ab = 1)",
            Criterion::FourPeriodic => "four-periodic criterion (pair sums)",
            Criterion::ThreePeriodic => "three-periodic criterion (c1 = c2)",
            Criterion::CrossThreeFour => "three/four-periodic criterion (c = 1)",
            Criterion::None => "no criterion",
        })
    }
}

/// What a merge or split decision rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// The laws agree up to shift and scale.
    ShiftScale,
    /// The criterion says equal and no marginal gap was found.
    Criterion,
    /// The criterion and a marginal gap both say distinct.
    CriterionAndMarginals,
    /// Only a marginal gap says distinct.
    Marginals,
    /// The laws nearly coincide, so no marginal gap is expected; the
    /// criterion alone decides (split), or, with no criterion, the laws are
    /// treated as one (merge).
    NearCoincident,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDecision {
    pub left: SolutionLabel,
    pub right: SolutionLabel,
    pub criterion: Criterion,
    pub analytic: EquivalenceVerdict,
    pub numeric: EquivalenceVerdict,
    /// Best alignment of the two laws up to shift and scale.
    pub alignment: Witness,
    pub merged: bool,
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GGMClass {
    pub representative: SolutionLabel,
    pub law: PeriodicBoundaryLaw,
    pub members: Vec<SolutionLabel>,
}

impl GGMClass {
    pub fn in_four_periodic_family(&self) -> bool {
        self.members.iter().any(|m| m.in_four_periodic_family())
    }
}

/// The distinct measures among the solved families at `(tau, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GGMCatalog {
    pub tau: f64,
    pub k: usize,
    pub solutions: SolutionCatalog,
    pub classes: Vec<GGMClass>,
    pub decisions: Vec<PairDecision>,
}

impl GGMCatalog {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    /// Classes containing a law of the `(1, a, 1, b)` type, the constant law
    /// included.
    pub fn four_periodic_count(&self) -> usize {
        self.classes
            .iter()
            .filter(|c| c.in_four_periodic_family())
            .count()
    }

    /// Classes made of non-constant period-3 laws only.
    pub fn three_periodic_count(&self) -> usize {
        self.count() - self.four_periodic_count()
    }
}

/// Parameters of a catalog law as seen by the criteria.
fn four_pair(law: &PeriodicBoundaryLaw) -> (f64, f64) {
    match law.period() {
        1 => (1.0, 1.0),
        2 => (law.z()[1], law.z()[1]),
        _ => (law.z()[1], law.z()[3]),
    }
}

fn criterion_verdict(
    left: (SolutionLabel, &PeriodicBoundaryLaw),
    right: (SolutionLabel, &PeriodicBoundaryLaw),
) -> (Criterion, EquivalenceVerdict) {
    use SolutionLabel::*;
    let two = |l: SolutionLabel| matches!(l, Trivial | TwoPeriodicA1 | TwoPeriodicA2);
    let (l1, law1) = left;
    let (l2, law2) = right;
    if two(l1) && two(l2) {
        return (
            Criterion::TwoPeriodic,
            same_ggm_2per(four_pair(law1).0, four_pair(law2).0),
        );
    }
    if l1.in_four_periodic_family() && l2.in_four_periodic_family() {
        return (
            Criterion::FourPeriodic,
            distinct_4per(four_pair(law1), four_pair(law2)),
        );
    }
    if l1.in_three_periodic_family() && l2.in_three_periodic_family() {
        return (
            Criterion::ThreePeriodic,
            same_ggm_3per(law1.u()[1], law2.u()[1]),
        );
    }
    if l1.in_three_periodic_family() && l2.in_four_periodic_family() {
        return (
            Criterion::CrossThreeFour,
            cross_3_4_distinct(law1.u()[1], four_pair(law2)),
        );
    }
    if l2.in_three_periodic_family() && l1.in_four_periodic_family() {
        return (
            Criterion::CrossThreeFour,
            cross_3_4_distinct(law2.u()[1], four_pair(law1)),
        );
    }
    (
        Criterion::None,
        EquivalenceVerdict::new(
            Verdict::Undetermined,
            Witness::MarginalsAgree {
                compared: 0,
                max_gap: 0.0,
            },
        ),
    )
}

/// Marginal window used by [`classify`].
pub const CLASSIFY_ZMAX: i64 = 3;

fn decide(
    left: (SolutionLabel, &PeriodicBoundaryLaw),
    right: (SolutionLabel, &PeriodicBoundaryLaw),
    theta: f64,
) -> Result<PairDecision> {
    let (criterion, analytic) = criterion_verdict(left, right);
    let numeric = numeric_distinguisher(left.1, right.1, theta, CLASSIFY_ZMAX)?;
    let (shift, scale, distance) = shift_scale_distance(left.1, right.1)?;
    let conflict = |why: &str| {
        Error::ClassificationConflict(format!(
            "{} vs {}: {why} ({criterion}: {:?}, marginals: {:?}, law distance {distance:e})",
            left.0, right.0, analytic, numeric
        ))
    };
    let near = distance <= tolerance::NEAR_COINCIDENT;
    let (merged, basis) = if analytic.is_equal() {
        if numeric.is_distinct() {
            return Err(conflict("criterion says equal but marginals differ"));
        }
        (true, Basis::Criterion)
    } else if distance <= tolerance::LAW_MATCH {
        if numeric.is_distinct() {
            return Err(conflict("laws coincide but marginals differ"));
        }
        (true, Basis::ShiftScale)
    } else {
        match (analytic.verdict, numeric.verdict) {
            (Verdict::Equal, _) => unreachable!("handled above"),
            (Verdict::Distinct, Verdict::Distinct) => (false, Basis::CriterionAndMarginals),
            (Verdict::Undetermined, Verdict::Distinct) => (false, Basis::Marginals),
            (Verdict::Distinct, _) if near => (false, Basis::NearCoincident),
            (Verdict::Undetermined, _) if near => (true, Basis::NearCoincident),
            (Verdict::Distinct, _) => {
                return Err(conflict("criterion says distinct but no marginal gap"))
            }
            (Verdict::Undetermined, _) => return Err(conflict("no test separates the laws")),
        }
    };
    Ok(PairDecision {
        left: left.0,
        right: right.0,
        criterion,
        analytic,
        numeric,
        alignment: Witness::ShiftScale {
            shift,
            scale,
            distance,
        },
        merged,
        basis,
    })
}

/// Groups the solutions of the solved families at `(tau, k)` into distinct
/// gradient Gibbs measures.
///
/// Every pair of classes is certified distinct by a criterion and a marginal
/// gap; pairs that are merged are equal by a criterion or up to shift and
/// scale.
pub fn classify(tau: f64, k: usize) -> Result<GGMCatalog> {
    let theta = TemperatureParams::from_tau(tau)?.theta();
    let solutions = solution_catalog(tau, k)?;
    let mut classes: Vec<GGMClass> = Vec::new();
    let mut decisions = Vec::new();
    for entry in &solutions.entries {
        let mut home = None;
        for (i, class) in classes.iter().enumerate() {
            let d = decide(
                (class.representative, &class.law),
                (entry.label, &entry.law),
                theta,
            )?;
            let merged = d.merged;
            decisions.push(d);
            if merged {
                home = Some(i);
                break;
            }
        }
        match home {
            Some(i) => classes[i].members.push(entry.label),
            None => classes.push(GGMClass {
                representative: entry.label,
                law: entry.law.clone(),
                members: vec![entry.label],
            }),
        }
    }
    Ok(GGMCatalog {
        tau,
        k,
        solutions,
        classes,
        decisions,
    })
}
