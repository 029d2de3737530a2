use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{CollarError, CollarFamily, Result};
use crate::qlin::{int, Poly, Rational, ScalarK};

/// Piecewise-cubic bump `f(s)`: `f ≡ 1` on `|s| < ε/2`, `f ≡ 0` for
/// `|s| ≥ ε`, and on the transition `f = 1 − 3t² + 2t³` with
/// `t = (|s| − ε/2)/(ε/2)`. It is `C¹` and its derivative is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BumpSpec {
    #[cfg_attr(feature = "serde", serde(with = "crate::qlin::serde_rat"))]
    pub eps: Rational,
}

impl BumpSpec {
    pub fn new(eps: Rational) -> Self {
        BumpSpec { eps }
    }

    fn transition(&self, s: &Rational) -> Option<Rational> {
        let half = &self.eps / int(2);
        let a = s.abs();
        if a < half || a >= self.eps {
            None
        } else {
            Some((a - &half) / half)
        }
    }

    pub fn value(&self, s: &Rational) -> Rational {
        if s.abs() >= self.eps {
            return Rational::zero();
        }
        match self.transition(s) {
            None => Rational::one(),
            Some(t) => Rational::one() - int(3) * &t * &t + int(2) * &t * &t * &t,
        }
    }

    pub fn derivative(&self, s: &Rational) -> Rational {
        match self.transition(s) {
            None => Rational::zero(),
            Some(t) => {
                let dfdt = int(-6) * &t + int(6) * &t * &t;
                let dtds = int(2) / &self.eps;
                let sign = if s.is_negative() { -Rational::one() } else { Rational::one() };
                dfdt * dtds * sign
            }
        }
    }
}

/// A point of the collar `T^m × S¹ × (−ε, ε)` with exact coordinates, in
/// the gauge `α = dθ + Σ_{i<j} γ_ij x_i dx^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CollarPoint {
    #[cfg_attr(feature = "serde", serde(with = "crate::qlin::serde_rat::vec"))]
    pub x: Vec<Rational>,
    #[cfg_attr(feature = "serde", serde(with = "crate::qlin::serde_rat"))]
    pub theta: Rational,
    #[cfg_attr(feature = "serde", serde(with = "crate::qlin::serde_rat"))]
    pub s: Rational,
}

/// Coefficients of the connection form `α` at `x` in the coordinates
/// `(x₁, …, x_m, θ, s)`.
fn connection_form(fam: &CollarFamily, x: &[Rational]) -> Vec<Rational> {
    let m = fam.m;
    let mut a = alloc::vec![Rational::zero(); m + 2];
    for j in 0..m {
        for (i, xi) in x.iter().enumerate().take(j) {
            a[j] += fam.gamma.get(i, j) * xi;
        }
    }
    a[m] = Rational::one();
    a
}

/// The Hamiltonian vector field of `H = f(s)` for `ω_u`, in coordinates
/// `(x₁, …, x_m, θ, s)`: `f′(s)·(c, 1 − Σ_{i<j} γ_ij x_i c_j, 0)`, i.e.
/// `f′(s)` times the horizontal lift of `c(u,s)` plus the fiber generator.
pub fn hamiltonian_field(fam: &CollarFamily, u: &ScalarK, bump: &BumpSpec, pt: &CollarPoint) -> Result<Vec<ScalarK>> {
    check_point(fam, bump, pt)?;
    let m = fam.m;
    let fp = bump.derivative(&pt.s);
    let c = fam.kernel_direction(u, &ScalarK::rational(pt.s.clone()))?;
    let a = connection_form(fam, &pt.x);
    let mut fiber = ScalarK::one();
    for (j, cj) in c.iter().enumerate() {
        fiber -= &cj.scale(&a[j]);
    }
    let mut field: Vec<ScalarK> = c.iter().map(|cj| cj.scale(&fp)).collect();
    field.push(fiber.scale(&fp));
    field.push(ScalarK::zero());
    debug_assert_eq!(field.len(), m + 2);
    Ok(field)
}

fn check_point(fam: &CollarFamily, bump: &BumpSpec, pt: &CollarPoint) -> Result<()> {
    if pt.x.len() != fam.m {
        return Err(CollarError::Invalid(alloc::format!("collar point needs {} base coordinates", fam.m)));
    }
    if pt.s.abs() >= fam.eps || pt.s.abs() >= bump.eps {
        return Err(CollarError::OutsideCollar);
    }
    Ok(())
}

/// Matrix `Ω_ij = ω_u(e_i, e_j)` of `ω_u = p^*N(u,s) + u·α∧φ + ds∧α` at a
/// collar point, with polynomial entries in the tags.
pub fn collar_form_matrix(fam: &CollarFamily, u: &ScalarK, pt: &CollarPoint) -> Result<Vec<Vec<Poly>>> {
    let m = fam.m;
    let n = fam.n_matrix(u, &ScalarK::rational(pt.s.clone()))?;
    let a: Vec<Poly> = connection_form(fam, &pt.x).into_iter().map(Poly::from).collect();
    let mut phi: Vec<Poly> = fam.phi.iter().map(Poly::from).collect();
    phi.extend([Poly::zero(), Poly::zero()]);
    let mut ds = alloc::vec![Poly::zero(); m + 2];
    ds[m + 1] = Poly::one();
    let up = Poly::from(u);
    let mut omega = alloc::vec![alloc::vec![Poly::zero(); m + 2]; m + 2];
    for i in 0..m + 2 {
        for j in 0..m + 2 {
            let mut e = Poly::zero();
            if i < m && j < m {
                e = Poly::from(n.get(i, j));
            }
            let wedge_a_phi = &(&a[i] * &phi[j]) - &(&phi[i] * &a[j]);
            let wedge_ds_a = &(&ds[i] * &a[j]) - &(&a[i] * &ds[j]);
            e = &(&e + &(&up * &wedge_a_phi)) + &wedge_ds_a;
            omega[i][j] = e;
        }
    }
    Ok(omega)
}

/// Components of `ι_{X_H}ω_u + dH` on the coordinate directions; all zero
/// exactly when `X_H` is the Hamiltonian field of `H = f(s)`
/// (convention `ω(X_H, ·) = −dH`).
pub fn hamiltonian_residual(fam: &CollarFamily, u: &ScalarK, bump: &BumpSpec, pt: &CollarPoint) -> Result<Vec<Poly>> {
    let x = hamiltonian_field(fam, u, bump, pt)?;
    let omega = collar_form_matrix(fam, u, pt)?;
    let m = fam.m;
    let xp: Vec<Poly> = x.iter().map(Poly::from).collect();
    let fp = Poly::from(bump.derivative(&pt.s));
    Ok((0..m + 2)
        .map(|j| {
            let mut r = (0..m + 2).fold(Poly::zero(), |acc, i| &acc + &(&xp[i] * &omega[i][j]));
            if j == m + 1 {
                r = &r + &fp;
            }
            r
        })
        .collect())
}
