use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CollarError, CollarFamily, Result};
use crate::qlin::{lcm, rat, rationally_independent, Rational, ScalarK};

/// Why an orbit was judged not closed.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum NonClosedWitness {
    /// Trivial bundle: a component of the base direction is irrational.
    IrrationalComponent { index: usize, value: ScalarK },
    /// Nontrivial bundle over `T²`: the two components are linearly
    /// independent over the rationals.
    IndependentComponents,
}

/// Exact verdict on the leaves of the characteristic foliation of a slice.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum OrbitVerdict {
    /// Every leaf is closed; `period` is the return time of the flow of
    /// the field `y_c + v`.
    Closed {
        #[cfg_attr(feature = "serde", serde(with = "crate::qlin::serde_rat"))]
        period: Rational,
    },
    NonClosed { witness: NonClosedWitness },
    /// Nontrivial bundle with nonzero, rationally dependent direction; the
    /// answer depends on holonomy data the model does not decide.
    Undetermined { reason: String },
}

impl OrbitVerdict {
    pub fn is_closed(&self) -> bool {
        matches!(self, OrbitVerdict::Closed { .. })
    }

    pub fn is_non_closed(&self) -> bool {
        matches!(self, OrbitVerdict::NonClosed { .. })
    }
}

/// Classifies the leaves of the slice foliation with base direction `c`.
///
/// For the trivial bundle the flow of `(c, 1)` on `T^m × S¹` is periodic
/// iff all of `c` is rational, with period the lcm of the denominators.
/// For a nontrivial bundle over `T²` leaves are fibers when `c = 0` and
/// never close when the components are rationally independent.
pub fn classify_orbit(c: &[ScalarK], euler_k: i64) -> OrbitVerdict {
    if euler_k == 0 {
        if let Some((index, value)) = c.iter().enumerate().find(|(_, x)| !x.is_rational()) {
            return OrbitVerdict::NonClosed {
                witness: NonClosedWitness::IrrationalComponent { index, value: value.clone() },
            };
        }
        let period = c
            .iter()
            .map(|x| x.rational_part().denom().clone())
            .fold(BigInt::one(), |acc, d| lcm(&acc, &d));
        return OrbitVerdict::Closed { period: Rational::from_integer(period) };
    }
    if c.iter().all(ScalarK::is_zero) {
        return OrbitVerdict::Closed { period: Rational::one() };
    }
    if rationally_independent(c) {
        return OrbitVerdict::NonClosed { witness: NonClosedWitness::IndependentComponents };
    }
    OrbitVerdict::Undetermined {
        reason: "nontrivial bundle with a nonzero rationally dependent direction".to_string(),
    }
}

/// Which branch of the perturbation criterion a family falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Branch {
    /// Trivial bundle, nonzero `φ`.
    #[cfg_attr(feature = "serde", serde(rename = "i"))]
    I,
    /// Bundle over `T²` (any Euler number), rationally independent `φ`.
    #[cfg_attr(feature = "serde", serde(rename = "ii"))]
    II,
}

/// The set of perturbation parameters for which the criterion guarantees
/// that no slice has a closed leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Guarantee {
    AllButCountablyMany,
    AllNonzeroU,
}

/// One exactly evaluated `(u, s)` sample.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamSample {
    pub u: ScalarK,
    pub s: ScalarK,
    pub direction: Vec<ScalarK>,
    pub verdict: OrbitVerdict,
    /// Whether the sample lies in the certified range `|u|, |s| ≤ δ`.
    pub within_delta: bool,
}

/// Outcome of checking the perturbation criterion on a family.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamReport {
    pub branch: Branch,
    pub guarantee: Guarantee,
    pub samples: Vec<ParamSample>,
    /// Samples that could not be evaluated exactly, with the reason.
    pub skipped: Vec<String>,
}

impl ParamReport {
    /// Samples that lie in the guaranteed set but have a closed leaf.
    ///
    /// Branch (i) allows countably many exceptional `u`, so only branch (ii)
    /// samples with `u ≠ 0` are counted against the guarantee.
    pub fn violations(&self) -> Vec<&ParamSample> {
        self.samples
            .iter()
            .filter(|p| self.guarantee == Guarantee::AllNonzeroU && !p.u.is_zero() && !p.verdict.is_non_closed())
            .collect()
    }
}

/// Default `u` samples, as fractions of `δ`.
fn default_u_fractions() -> Vec<Rational> {
    vec![rat(1, 3), rat(-1, 5), rat(1, 7), rat(-2, 9)]
}

/// Default `s` samples, as fractions of `δ`.
fn default_s_fractions() -> Vec<Rational> {
    vec![rat(-1, 2), Rational::zero(), rat(1, 2)]
}

/// Checks the hypotheses of the perturbation criterion and evaluates the
/// exact per-parameter decision on a default grid inside `|u|, |s| ≤ δ`.
pub fn aperiodic_params(fam: &CollarFamily) -> Result<ParamReport> {
    let d = fam.delta.clone();
    let us: Vec<Rational> = default_u_fractions().into_iter().map(|f| f * &d).collect();
    let ss: Vec<Rational> = default_s_fractions().into_iter().map(|f| f * &d).collect();
    aperiodic_params_on(fam, &us, &ss)
}

/// As [`aperiodic_params`], on an explicit grid of rational parameters.
///
/// In branch (i) with rational `φ` and `β = 0`, every `u` is rational-times-
/// a fresh tag `u`, standing for a generic (transcendental) parameter; the
/// rational grid values then give the tag's coefficient.
pub fn aperiodic_params_on(fam: &CollarFamily, us: &[Rational], ss: &[Rational]) -> Result<ParamReport> {
    fam.validate()?;
    let (branch, guarantee) = if fam.euler_k == 0 {
        if fam.phi.iter().all(ScalarK::is_zero) {
            return Err(CollarError::CriterionNotMet("phi = 0: the perturbation does not move the slices".to_string()));
        }
        (Branch::I, Guarantee::AllButCountablyMany)
    } else {
        if !rationally_independent(&fam.phi) {
            return Err(CollarError::CriterionNotMet(
                "the components of phi are rationally dependent".to_string(),
            ));
        }
        (Branch::II, Guarantee::AllNonzeroU)
    };
    let phi_rational = fam.phi.iter().all(ScalarK::is_rational);
    let generic_u = branch == Branch::I && phi_rational && fam.beta.is_zero();
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for u in us {
        for s in ss {
            let uk = if generic_u { ScalarK::tagged("u", u.clone()) } else { ScalarK::rational(u.clone()) };
            let sk = ScalarK::rational(s.clone());
            match fam.kernel_direction(&uk, &sk) {
                Ok(direction) => {
                    let verdict = classify_orbit(&direction, fam.euler_k);
                    samples.push(ParamSample {
                        within_delta: fam.in_parameter_range(u, s),
                        u: uk,
                        s: sk,
                        direction,
                        verdict,
                    });
                }
                Err(e) => skipped.push(alloc::format!("u={uk}, s={sk}: {e}")),
            }
        }
    }
    Ok(ParamReport { branch, guarantee, samples, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collardyn::family::standard_j;
    use crate::qlin::{int, QMatrix};

    #[test]
    fn classify_examples() {
        let c = vec![ScalarK::rational(rat(1, 2)), ScalarK::rational(rat(1, 3))];
        assert_eq!(classify_orbit(&c, 0), OrbitVerdict::Closed { period: int(6) });
        let c = vec![ScalarK::tag("alpha"), ScalarK::one()];
        assert!(classify_orbit(&c, 0).is_non_closed());
        let c = vec![ScalarK::zero(), ScalarK::zero()];
        assert_eq!(classify_orbit(&c, -1), OrbitVerdict::Closed { period: int(1) });
        let c = vec![ScalarK::one(), ScalarK::tag("alpha")];
        assert!(classify_orbit(&c, -1).is_non_closed());
        let c = vec![ScalarK::one(), ScalarK::int(2)];
        assert!(matches!(classify_orbit(&c, 3), OrbitVerdict::Undetermined { .. }));
    }

    #[test]
    fn zehnder_branch_i() {
        let m = 2;
        let phi = vec![ScalarK::one(), ScalarK::zero()];
        let fam = CollarFamily::simple(m, phi, 0).unwrap();
        let rep = aperiodic_params(&fam).unwrap();
        assert_eq!(rep.branch, Branch::I);
        assert_eq!(rep.guarantee, Guarantee::AllButCountablyMany);
        assert!(!rep.samples.is_empty());
        let c = fam.kernel_direction(&ScalarK::tagged("alpha", rat(1, 7)), &ScalarK::zero()).unwrap();
        assert!(classify_orbit(&c, 0).is_non_closed());
    }

    #[test]
    fn branch_ii_all_nonzero_u() {
        let phi = vec![ScalarK::one(), ScalarK::tag("alpha")];
        let fam = CollarFamily::simple(2, phi, -1).unwrap();
        let rep = aperiodic_params_on(&fam, &[rat(1, 3)], &[rat(-1, 4), Rational::zero(), rat(1, 4)]).unwrap();
        assert_eq!(rep.branch, Branch::II);
        assert_eq!(rep.guarantee, Guarantee::AllNonzeroU);
        assert_eq!(rep.samples.len(), 3);
        assert!(rep.samples.iter().all(|p| p.verdict.is_non_closed()));
        assert!(rep.violations().is_empty());
    }

    #[test]
    fn criterion_not_met() {
        let phi = vec![ScalarK::zero(), ScalarK::zero()];
        let fam = CollarFamily::simple(2, phi, 0).unwrap();
        assert!(matches!(aperiodic_params(&fam), Err(CollarError::CriterionNotMet(_))));
        let phi = vec![ScalarK::one(), ScalarK::int(2)];
        let fam = CollarFamily::simple(2, phi, -1).unwrap();
        assert!(matches!(aperiodic_params(&fam), Err(CollarError::CriterionNotMet(_))));
        let z4 = QMatrix::zeros(4, 4);
        let phi = vec![ScalarK::zero(); 4];
        let fam = CollarFamily::new(standard_j(4), z4.clone(), z4, phi, 0, rat(1, 2), None).unwrap();
        assert!(aperiodic_params(&fam).is_err());
    }
}
