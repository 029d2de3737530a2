use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{CollarError, Result};
use crate::qlin::{int, KMatrix, Poly, QMatrix, Rational, ScalarK};

/// The perturbed collar family around a circle-bundle hypersurface
/// `Y → V = T^m`.
///
/// On a slice `{s} × Y` the form restricts to `p^*N(u,s) + u·α∧φ` with
/// `N(u,s) = B + u·β + s·γ`, where `B` is the symplectic form of `V`,
/// `β` a closed perturbation, `γ = dα` the curvature and `φ` a constant
/// 1-form. Two-forms are stored as antisymmetric matrices
/// (`Σ_{i<j} M_ij dx^i∧dx^j`).
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CollarFamily {
    pub m: usize,
    pub b: QMatrix,
    pub beta: QMatrix,
    pub gamma: QMatrix,
    pub phi: Vec<ScalarK>,
    pub euler_k: i64,
    #[cfg_attr(feature = "serde", serde(with = "crate::qlin::serde_rat"))]
    pub eps: Rational,
    #[cfg_attr(feature = "serde", serde(with = "crate::qlin::serde_rat"))]
    pub delta: Rational,
}

/// The standard symplectic matrix `J₂ = [[0,1],[-1,0]]`.
pub fn j2() -> QMatrix {
    QMatrix::from_ints(&[&[0, 1], &[-1, 0]])
}

/// Block-diagonal `J₂ ⊕ … ⊕ J₂` of size `m` (even).
pub fn standard_j(m: usize) -> QMatrix {
    QMatrix::from_fn(m, m, |i, j| {
        if i % 2 == 0 && j == i + 1 {
            int(1)
        } else if j % 2 == 0 && i == j + 1 {
            int(-1)
        } else {
            Rational::zero()
        }
    })
}

/// Curvature representative of a bundle over `T²` with Euler number `k`:
/// the 2-form `-k dx¹∧dx²`.
pub fn curvature_for(euler_k: i64) -> QMatrix {
    j2().scale(&int(-euler_k))
}

impl CollarFamily {
    /// Builds and validates a family. `delta = None` selects the certified
    /// default from [`CollarFamily::certified_delta`].
    pub fn new(
        b: QMatrix,
        beta: QMatrix,
        gamma: QMatrix,
        phi: Vec<ScalarK>,
        euler_k: i64,
        eps: Rational,
        delta: Option<Rational>,
    ) -> Result<Self> {
        let m = b.nrows();
        let mut fam = CollarFamily { m, b, beta, gamma, phi, euler_k, eps, delta: Rational::one() };
        fam.validate_shape()?;
        fam.delta = match delta {
            Some(d) => d,
            None => fam.certified_delta()?,
        };
        fam.validate()?;
        Ok(fam)
    }

    /// Family over `T^m` with `B` standard, `β = 0`, curvature determined
    /// by `euler_k`, collar half-width `1/2` and the certified `δ`.
    pub fn simple(m: usize, phi: Vec<ScalarK>, euler_k: i64) -> Result<Self> {
        let gamma = if euler_k == 0 { QMatrix::zeros(m, m) } else { curvature_for(euler_k) };
        CollarFamily::new(standard_j(m), QMatrix::zeros(m, m), gamma, phi, euler_k, Rational::new(1.into(), 2.into()), None)
    }

    fn validate_shape(&self) -> Result<()> {
        let m = self.m;
        let invalid = |msg: &str| Err(CollarError::Invalid(msg.to_string()));
        if m == 0 || !m.is_multiple_of(2) {
            return invalid("base dimension m must be even and positive");
        }
        for (name, mat) in [("B", &self.b), ("beta", &self.beta), ("gamma", &self.gamma)] {
            if mat.nrows() != m || mat.ncols() != m {
                return Err(CollarError::Invalid(format!("{name} must be {m}x{m}")));
            }
            if !mat.is_antisymmetric() {
                return Err(CollarError::Invalid(format!("{name} must be antisymmetric")));
            }
        }
        if self.phi.len() != m {
            return Err(CollarError::Invalid(format!("phi must have {m} components")));
        }
        Ok(())
    }

    /// Checks every structural invariant of the family.
    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        let invalid = |msg: &str| Err(CollarError::Invalid(msg.to_string()));
        if self.b.det().map_err(CollarError::Linear)?.is_zero() {
            return invalid("B must be invertible");
        }
        if self.euler_k == 0 && !self.gamma.is_zero() {
            return invalid("a trivial bundle (euler_k = 0) needs gamma = 0");
        }
        if self.euler_k != 0 && self.m != 2 {
            return invalid("a nontrivial bundle (euler_k != 0) is only modelled over T^2");
        }
        if self.m == 2 && self.gamma != curvature_for(self.euler_k) {
            return invalid("over T^2 gamma must equal -euler_k dx1^dx2");
        }
        if !self.eps.is_positive() {
            return invalid("eps must be positive");
        }
        if !self.delta.is_positive() {
            return invalid("delta must be positive");
        }
        Ok(())
    }

    /// Every violated invariant, each as a one-line message (empty when the
    /// family is valid). Unlike [`CollarFamily::validate`] this does not
    /// stop at the first problem.
    pub fn violations(&self) -> Vec<String> {
        let m = self.m;
        let mut out = Vec::new();
        if m == 0 || !m.is_multiple_of(2) {
            out.push(format!("base dimension m must be even and positive (got {m})"));
        }
        let mut shapes_ok = true;
        for (name, mat) in [("B", &self.b), ("beta", &self.beta), ("gamma", &self.gamma)] {
            if mat.nrows() != m || mat.ncols() != m {
                out.push(format!("{name} must be {m}x{m} (got {}x{})", mat.nrows(), mat.ncols()));
                shapes_ok = false;
            } else if !mat.is_antisymmetric() {
                out.push(format!("{name} antisymmetric: {name} must equal minus its transpose"));
            }
        }
        if self.phi.len() != m {
            out.push(format!("phi must have {m} components (got {})", self.phi.len()));
        }
        if shapes_ok && matches!(self.b.det(), Ok(d) if d.is_zero()) {
            out.push("B must be invertible".to_string());
        }
        if self.euler_k == 0 && shapes_ok && !self.gamma.is_zero() {
            out.push("a trivial bundle (euler_k = 0) needs gamma = 0".to_string());
        }
        if self.euler_k != 0 && m != 2 {
            out.push("a nontrivial bundle (euler_k != 0) is only modelled over T^2".to_string());
        }
        if m == 2 && shapes_ok && self.gamma != curvature_for(self.euler_k) {
            out.push("over T^2 gamma must equal -euler_k dx1^dx2".to_string());
        }
        if !self.eps.is_positive() {
            out.push("eps must be positive".to_string());
        }
        if !self.delta.is_positive() {
            out.push("delta must be positive".to_string());
        }
        out
    }

    /// `N(u,s) = B + u·β + s·γ`.
    pub fn n_matrix(&self, u: &ScalarK, s: &ScalarK) -> Result<KMatrix> {
        let b = self.b.to_k();
        let ub = self.beta.to_k().scale_k(u).map_err(CollarError::Linear)?;
        let sg = self.gamma.to_k().scale_k(s).map_err(CollarError::Linear)?;
        b.add_k(&ub).and_then(|x| x.add_k(&sg)).map_err(CollarError::Linear)
    }

    /// Solves `N(u,s)·c = u·φ`. Requires `N(u,s)` to have rational entries;
    /// the right-hand side may carry tags, and `c` is then solved tag by tag.
    pub fn kernel_direction(&self, u: &ScalarK, s: &ScalarK) -> Result<Vec<ScalarK>> {
        let n = self.n_matrix(u, s)?;
        let nq = n.to_rational().map_err(|_| CollarError::NotExactlySolvable {
            u: u.to_string(),
            s: s.to_string(),
        })?;
        let rhs: Vec<ScalarK> = self
            .phi
            .iter()
            .map(|p| p.try_mul(u))
            .collect::<core::result::Result<_, _>>()
            .map_err(CollarError::Linear)?;
        let inv = nq.inverse().map_err(|_| CollarError::Singular { u: u.to_string(), s: s.to_string() })?;
        let c = inv.to_k().mul_rational_vec_k(&rhs).map_err(CollarError::Linear)?;
        debug_assert!(dot(&c, &self.phi).is_zero(), "characteristic direction orthogonal to phi");
        Ok(c)
    }

    /// The scalar `n(u,s)` with `N(u,s) = n(u,s)·J₂` (only for `m = 2`).
    pub fn pfaffian_scalar(&self, u: &ScalarK, s: &ScalarK) -> Result<ScalarK> {
        if self.m != 2 {
            return Err(CollarError::Invalid("the Pfaffian scalar is defined for m = 2".to_string()));
        }
        Ok(self.n_matrix(u, s)?.get(0, 1).clone())
    }

    /// `det N(u,s)` as a polynomial in the indeterminates `u` and `s`.
    pub fn det_polynomial(&self) -> Poly {
        let u = Poly::var("u");
        let s = Poly::var("s");
        let m = self.m;
        let entries: Vec<Vec<Poly>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        &(&Poly::from(self.b.get(i, j).clone())
                            + &(&u * &Poly::from(self.beta.get(i, j).clone())))
                            + &(&s * &Poly::from(self.gamma.get(i, j).clone()))
                    })
                    .collect()
            })
            .collect();
        let cols: Vec<usize> = (0..m).collect();
        laplace_det(&entries, 0, &cols)
    }

    /// A rational `δ ∈ (0, 1]` such that `N(u,s)` is invertible whenever
    /// `|u|, |s| ≤ δ`.
    ///
    /// With `p = det N = p₀ + (terms of degree ≥ 1)` and `S` the sum of the
    /// absolute values of the nonconstant coefficients, every nonconstant
    /// monomial is bounded by `δ ≤ 1`, so `|p − p₀| ≤ S·δ ≤ |p₀|/2`.
    pub fn certified_delta(&self) -> Result<Rational> {
        let p = self.det_polynomial();
        let mut p0 = Rational::zero();
        let mut s = Rational::zero();
        for (mono, c) in p.terms() {
            if mono.degree() == 0 {
                p0 = c.clone();
            } else {
                s += c.abs();
            }
        }
        if p0.is_zero() {
            return Err(CollarError::Invalid("B must be invertible".to_string()));
        }
        if s.is_zero() {
            return Ok(Rational::one());
        }
        let bound = p0.abs() / (s * Rational::from_integer(BigInt::from(2)));
        Ok(if bound > Rational::one() { Rational::one() } else { bound })
    }

    /// True iff `|u|, |s| ≤ δ` for rational parameters.
    pub fn in_parameter_range(&self, u: &Rational, s: &Rational) -> bool {
        u.abs() <= self.delta && s.abs() <= self.delta
    }
}

/// `Σ aᵢ bᵢ` as a polynomial in the tags.
pub fn dot(a: &[ScalarK], b: &[ScalarK]) -> Poly {
    a.iter().zip(b).fold(Poly::zero(), |acc, (x, y)| &acc + &(&Poly::from(x) * &Poly::from(y)))
}

fn laplace_det(m: &[Vec<Poly>], row: usize, cols: &[usize]) -> Poly {
    if cols.is_empty() {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * &laplace_det(m, row + 1, &rest);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

impl KMatrix {
    /// `A·v` for a rational matrix `A` (stored as tagged) and a tagged
    /// vector `v`.
    pub(crate) fn mul_rational_vec_k(&self, v: &[ScalarK]) -> crate::qlin::Result<Vec<ScalarK>> {
        if self.ncols() != v.len() {
            return Err(crate::qlin::Error::DimensionMismatch { expected: self.ncols(), found: v.len() });
        }
        (0..self.nrows())
            .map(|i| {
                let mut acc = ScalarK::zero();
                for (k, x) in v.iter().enumerate() {
                    acc += &self.get(i, k).try_mul(x)?;
                }
                Ok(acc)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlin::rat;
    use alloc::vec;

    fn fam_ii() -> CollarFamily {
        CollarFamily::simple(2, vec![ScalarK::one(), ScalarK::tag("alpha")], -1).unwrap()
    }

    #[test]
    fn violations_are_listed() {
        assert!(fam_ii().violations().is_empty());
        let mut f = fam_ii();
        f.b = QMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        f.eps = Rational::zero();
        let v = f.violations();
        assert!(v.iter().any(|m| m.starts_with("B antisymmetric")));
        assert!(v.iter().any(|m| m == "eps must be positive"));
    }

    #[test]
    fn n_matrix_examples() {
        let z = QMatrix::zeros(2, 2);
        let f = CollarFamily::new(j2(), z.clone(), z.clone(), vec![ScalarK::one(), ScalarK::zero()], 0, rat(1, 2), None).unwrap();
        let any = ScalarK::rational(rat(5, 7));
        assert_eq!(f.n_matrix(&any, &any).unwrap(), j2().to_k());
        let f = CollarFamily::new(j2(), j2(), z, vec![ScalarK::one(), ScalarK::zero()], 0, rat(1, 2), None).unwrap();
        assert_eq!(f.n_matrix(&ScalarK::one(), &ScalarK::zero()).unwrap(), j2().scale(&int(2)).to_k());
        // gamma = J2 corresponds to euler_k = -1.
        let f = fam_ii();
        assert_eq!(f.gamma, j2());
        let n = f.n_matrix(&ScalarK::zero(), &ScalarK::rational(rat(1, 2))).unwrap();
        assert_eq!(n, j2().scale(&rat(3, 2)).to_k());
    }

    #[test]
    fn kernel_direction_examples() {
        let f = fam_ii();
        let c = f.kernel_direction(&ScalarK::zero(), &ScalarK::zero()).unwrap();
        assert!(c.iter().all(ScalarK::is_zero));
        let z = QMatrix::zeros(2, 2);
        let f = CollarFamily::new(j2(), z.clone(), z, vec![ScalarK::one(), ScalarK::tag("alpha")], 0, rat(1, 2), None).unwrap();
        let c = f.kernel_direction(&ScalarK::rational(rat(1, 2)), &ScalarK::zero()).unwrap();
        assert_eq!(c, vec![ScalarK::tagged("alpha", rat(-1, 2)), ScalarK::rational(rat(1, 2))]);
        assert!(dot(&c, &f.phi).is_zero());
    }

    #[test]
    fn pfaffian_formula() {
        let f = fam_ii();
        for (u, s) in [(rat(1, 3), rat(-1, 4)), (rat(-1, 5), rat(1, 7))] {
            let (uk, sk) = (ScalarK::rational(u.clone()), ScalarK::rational(s));
            let n = f.pfaffian_scalar(&uk, &sk).unwrap().as_rational().unwrap();
            let jphi = [f.phi[1].clone(), -&f.phi[0]];
            let expect: Vec<ScalarK> = jphi.iter().map(|x| x.scale(&(-u.clone() / n.clone()))).collect();
            assert_eq!(f.kernel_direction(&uk, &sk).unwrap(), expect);
        }
    }

    #[test]
    fn certified_delta_keeps_n_invertible() {
        let f = fam_ii();
        // det N = (1 + s)^2 → p0 = 1, S = 3.
        assert_eq!(f.delta, rat(1, 6));
        let d = f.delta.clone();
        for u in [-d.clone(), Rational::zero(), d.clone()] {
            for s in [-d.clone(), d.clone()] {
                let n = f.n_matrix(&ScalarK::rational(u.clone()), &ScalarK::rational(s)).unwrap();
                assert!(!n.to_rational().unwrap().det().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn invalid_families() {
        let z = QMatrix::zeros(2, 2);
        let phi = vec![ScalarK::one(), ScalarK::zero()];
        assert!(CollarFamily::new(z.clone(), z.clone(), z.clone(), phi.clone(), 0, rat(1, 2), None).is_err());
        assert!(CollarFamily::new(j2(), z.clone(), j2(), phi.clone(), 0, rat(1, 2), None).is_err());
        let z4 = QMatrix::zeros(4, 4);
        let phi4 = vec![ScalarK::one(), ScalarK::zero(), ScalarK::zero(), ScalarK::zero()];
        assert!(CollarFamily::new(standard_j(4), z4.clone(), z4, phi4, 1, rat(1, 2), None).is_err());
    }
}
