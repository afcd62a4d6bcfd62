//! Periodic solutions of the boundary-law equation and their verification.

pub mod families;
pub mod fixed_point;
pub mod generic;
pub mod recurrence;
mod roots;

use std::fmt;

use serde::Serialize;

pub use families::{
    psi_k, solve_2periodic, solve_3periodic, solve_4periodic, tau_0, tau_c, tau_five_solutions,
    CriticalPoint, FourPeriodicKind, FourPeriodicPair,
};
pub use fixed_point::{verify_fixed_point, verify_fixed_point_truncated, TruncatedResidual};
pub use generic::solve_periodic_generic;
pub use recurrence::{
    check_u_constant, recurrence_generate, residual_v, side_series, SideSeries, USequenceWindow,
};

use crate::error::{Error, Result};
use crate::model::{PeriodicBoundaryLaw, TemperatureParams};
use crate::tolerance;

/// Name of a solution inside a [`SolutionCatalog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionLabel {
    Trivial,
    TwoPeriodicA1,
    TwoPeriodicA2,
    FourPeriodicA3b3,
    FourPeriodicA5b5,
    ThreePeriodicB1,
    ThreePeriodicB2,
    Generic,
}

impl SolutionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolutionLabel::Trivial => "trivial",
            SolutionLabel::TwoPeriodicA1 => "two-periodic-a1",
            SolutionLabel::TwoPeriodicA2 => "two-periodic-a2",
            SolutionLabel::FourPeriodicA3b3 => "four-periodic-a3b3",
            SolutionLabel::FourPeriodicA5b5 => "four-periodic-a5b5",
            SolutionLabel::ThreePeriodicB1 => "three-periodic-b1",
            SolutionLabel::ThreePeriodicB2 => "three-periodic-b2",
            SolutionLabel::Generic => "generic",
        }
    }

    /// Whether the law is of the `(1, a, 1, b)` type (including `a = b`).
    pub fn in_four_periodic_family(&self) -> bool {
        matches!(
            self,
            SolutionLabel::Trivial
                | SolutionLabel::TwoPeriodicA1
                | SolutionLabel::TwoPeriodicA2
                | SolutionLabel::FourPeriodicA3b3
                | SolutionLabel::FourPeriodicA5b5
        )
    }

    pub fn in_three_periodic_family(&self) -> bool {
        matches!(
            self,
            SolutionLabel::ThreePeriodicB1 | SolutionLabel::ThreePeriodicB2
        )
    }
}

impl fmt::Display for SolutionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where `tau` sits relative to the thresholds of the period-4 family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FourPeriodicRegime {
    /// `tau <= 4`
    Unique,
    /// `4 < tau <= 6`
    TwoSolutions,
    /// `6 < tau < 2 + 2 sqrt 5`
    FourSolutions,
    /// `tau >= 2 + 2 sqrt 5`
    FiveSolutions,
    /// Not solved in closed form for `k != 2`.
    NotApplicable,
}

impl FourPeriodicRegime {
    pub fn of(tau: f64, k: usize) -> Self {
        if k != 2 {
            FourPeriodicRegime::NotApplicable
        } else if tau <= families::TAU_FOUR_PERIODIC {
            FourPeriodicRegime::Unique
        } else if tau <= families::TAU_TWO_PERIODIC {
            FourPeriodicRegime::TwoSolutions
        } else if tau < tau_five_solutions() {
            FourPeriodicRegime::FourSolutions
        } else {
            FourPeriodicRegime::FiveSolutions
        }
    }

    pub fn solution_count(&self) -> Option<usize> {
        match self {
            FourPeriodicRegime::Unique => Some(1),
            FourPeriodicRegime::TwoSolutions => Some(2),
            FourPeriodicRegime::FourSolutions => Some(4),
            FourPeriodicRegime::FiveSolutions => Some(5),
            FourPeriodicRegime::NotApplicable => None,
        }
    }
}

/// Where `tau` sits relative to `tau_c(k)` and `tau_0(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThreePeriodicRegime {
    BelowCritical,
    Critical,
    /// Two roots, neither equal to 1.
    TwoRoots,
    /// `tau = tau_0`: two roots, one of which is 1.
    AtTau0,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regime {
    pub four_periodic: FourPeriodicRegime,
    pub three_periodic: ThreePeriodicRegime,
    pub tau_c: f64,
    pub tau_0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub label: SolutionLabel,
    pub law: PeriodicBoundaryLaw,
    /// Residual of the boundary-law equation.
    pub residual: f64,
}

/// All solutions of the solved families at one `(tau, k)`.
///
/// For `k = 2` the catalog holds the period-4 family (which contains the
/// period-2 laws and the constant law); for every `k` it holds the non-trivial
/// period-3 laws. Period-3 roots equal to 1 are the constant law and are not
/// repeated.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCatalog {
    pub tau: f64,
    pub k: usize,
    pub entries: Vec<CatalogEntry>,
    pub regime: Regime,
}

impl SolutionCatalog {
    pub fn get(&self, label: SolutionLabel) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of period-4 family members (1 / 2 / 4 / 5 for `k = 2`).
    pub fn four_periodic_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.label.in_four_periodic_family())
            .count()
    }

    pub fn three_periodic_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.label.in_three_periodic_family())
            .count()
    }
}

fn four_periodic_law(a: f64, b: f64) -> Result<PeriodicBoundaryLaw> {
    PeriodicBoundaryLaw::from_u(2, &[1.0, a, 1.0, b])
}

/// Collects every solution of the solved families at `(tau, k)` and checks
/// each one against the boundary-law equation.
pub fn solution_catalog(tau: f64, k: usize) -> Result<SolutionCatalog> {
    let temp = TemperatureParams::from_tau(tau)?;
    let crit = tau_c(k)?;
    let t0 = tau_0(k)?;
    let mut laws: Vec<(SolutionLabel, PeriodicBoundaryLaw)> = Vec::new();

    if k == 2 {
        for pair in solve_4periodic(tau)? {
            let (label, law) = match pair.kind {
                FourPeriodicKind::Trivial => {
                    (SolutionLabel::Trivial, PeriodicBoundaryLaw::trivial(2)?)
                }
                FourPeriodicKind::DiagonalLow => (
                    SolutionLabel::TwoPeriodicA1,
                    PeriodicBoundaryLaw::from_u(2, &[1.0, pair.a])?,
                ),
                FourPeriodicKind::DiagonalHigh => (
                    SolutionLabel::TwoPeriodicA2,
                    PeriodicBoundaryLaw::from_u(2, &[1.0, pair.a])?,
                ),
                FourPeriodicKind::SumPlus => (
                    SolutionLabel::FourPeriodicA3b3,
                    four_periodic_law(pair.a, pair.b)?,
                ),
                FourPeriodicKind::SumMinus => (
                    SolutionLabel::FourPeriodicA5b5,
                    four_periodic_law(pair.a, pair.b)?,
                ),
            };
            laws.push((label, law));
        }
    } else {
        laws.push((SolutionLabel::Trivial, PeriodicBoundaryLaw::trivial(k)?));
    }

    let roots = solve_3periodic(tau, k)?;
    // b1 is the larger root, b2 the smaller
    for (label, a) in [
        SolutionLabel::ThreePeriodicB1,
        SolutionLabel::ThreePeriodicB2,
    ]
    .into_iter()
    .zip(roots.iter().rev())
    {
        if (a - 1.0).abs() > tolerance::PARAMETER_EQUAL {
            laws.push((label, PeriodicBoundaryLaw::from_u(k, &[1.0, *a, *a])?));
        }
    }

    let three_periodic = if roots.is_empty() {
        ThreePeriodicRegime::BelowCritical
    } else if roots.len() == 1 {
        ThreePeriodicRegime::Critical
    } else if roots
        .iter()
        .any(|a| (a - 1.0).abs() <= tolerance::PARAMETER_EQUAL)
    {
        ThreePeriodicRegime::AtTau0
    } else {
        ThreePeriodicRegime::TwoRoots
    };

    let mut entries = Vec::with_capacity(laws.len());
    for (label, law) in laws {
        let residual = verify_fixed_point(&law, temp);
        if residual > tolerance::FIXED_POINT {
            return Err(Error::ClassificationConflict(format!(
                "{label} at tau = {tau} fails the boundary-law equation (residual {residual:e})"
            )));
        }
        entries.push(CatalogEntry {
            label,
            law,
            residual,
        });
    }

    Ok(SolutionCatalog {
        tau,
        k,
        entries,
        regime: Regime {
            four_periodic: FourPeriodicRegime::of(tau, k),
            three_periodic,
            tau_c: crit.tau_c,
            tau_0: t0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_counts_binary_tree() {
        for (tau, four, three) in [(3.0, 1, 0), (5.0, 2, 1), (6.2, 4, 2), (7.0, 5, 2)] {
            let c = solution_catalog(tau, 2).unwrap();
            assert_eq!(c.four_periodic_count(), four, "tau = {tau}");
            assert_eq!(c.three_periodic_count(), three, "tau = {tau}");
            assert_eq!(
                c.regime.four_periodic.solution_count(),
                Some(c.four_periodic_count())
            );
        }
    }

    #[test]
    fn catalog_for_higher_order() {
        let c = solution_catalog(5.0, 3).unwrap();
        assert_eq!(c.four_periodic_count(), 1);
        assert_eq!(c.three_periodic_count(), 2);
        assert_eq!(c.regime.four_periodic, FourPeriodicRegime::NotApplicable);
        let at_t0 = solution_catalog(3.5, 3).unwrap();
        assert_eq!(at_t0.regime.three_periodic, ThreePeriodicRegime::AtTau0);
        assert_eq!(at_t0.three_periodic_count(), 1);
    }

    #[test]
    fn labels_are_unique() {
        let c = solution_catalog(7.0, 2).unwrap();
        let mut labels: Vec<_> = c.entries.iter().map(|e| e.label).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), c.len());
    }
}
