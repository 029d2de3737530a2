//! Invariant-form model of a circle bundle `p: Y → T^m` with curvature
//! `γ = dα`, and its Gysin sequence.
//!
//! Invariant `d`-forms on `Y` are pairs `(λ, μ)` standing for `λ + α∧μ`
//! with `λ ∈ Λ^d`, `μ ∈ Λ^{d−1}` constant forms on the base. Since constant
//! forms are closed, `d(λ + α∧μ) = γ∧μ`. Hence
//!
//! - `H^d(Y) = Λ^d / (γ∧Λ^{d−2}) ⊕ ker(γ∧· : Λ^{d−1} → Λ^{d+1})`,
//! - `p^*λ = [(λ, 0)]` and `p_![(λ, μ)] = μ` (integration over the fiber),
//!
//! so `Im p_! = ker(γ∧·)` and `p_! ∘ p^* = 0`. The functions below build
//! these maps as explicit matrices so the statements can be checked by
//! rank computations rather than assumed.

use alloc::vec::Vec;

use super::{CollarError, Result};
use crate::qlin::{ConstForm, QMatrix, Rational, Subspace};

/// Strictly increasing multi-indices of length `d` in `0..m`, in
/// lexicographic order: the standard basis of `Λ^d`.
pub fn basis_indices(m: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d <= m {
        rec(0, m, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Matrix (columns = basis of `Λ^d`, rows = basis of `Λ^{d+2}`) of
/// `μ ↦ γ∧μ` for the 2-form with antisymmetric matrix `gamma`.
pub fn wedge_gamma_matrix(gamma: &QMatrix, d: usize) -> Result<QMatrix> {
    let m = gamma.nrows();
    let g = ConstForm::from_antisymmetric(gamma).map_err(CollarError::Linear)?;
    let src = basis_indices(m, d);
    let dst = basis_indices(m, d + 2);
    let mut mat = QMatrix::zeros(dst.len(), src.len());
    for (j, idx) in src.iter().enumerate() {
        let mu = ConstForm::monomial(m, idx, Rational::from_integer(1.into())).map_err(CollarError::Linear)?;
        if d + 2 > m {
            continue;
        }
        let w = g.wedge(&mu).map_err(CollarError::Linear)?;
        for (i, out) in dst.iter().enumerate() {
            mat.set(i, j, w.coeff(out));
        }
    }
    Ok(mat)
}

/// `Im(p_! : H²(Y) → H¹(T^m)) = ker(γ∧· : Λ¹ → Λ³)`.
pub fn image_p_shriek_invariant(gamma: &QMatrix) -> Result<Subspace> {
    Ok(Subspace::kernel_of(&wedge_gamma_matrix(gamma, 1)?))
}

/// The maps around `H^d(Y)` in the invariant model, as matrices on the
/// cochain level.
#[derive(Clone, Debug)]
pub struct GysinDegree {
    pub d: usize,
    /// Basis of closed invariant `d`-forms, as vectors in `Λ^d ⊕ Λ^{d−1}`.
    pub closed: Subspace,
    /// Exact invariant `d`-forms.
    pub exact: Subspace,
    /// `p^* : Λ^d → Λ^d ⊕ Λ^{d−1}`.
    pub pullback: QMatrix,
    /// `p_! : Λ^d ⊕ Λ^{d−1} → Λ^{d−1}`.
    pub pushforward: QMatrix,
    /// `γ∧· : Λ^{d−2} → Λ^d` (the Euler-class map into `H^d(V)`).
    pub euler_in: QMatrix,
}

impl GysinDegree {
    pub fn new(gamma: &QMatrix, d: usize) -> Result<Self> {
        let m = gamma.nrows();
        let nl = basis_indices(m, d).len();
        let nm = if d >= 1 { basis_indices(m, d - 1).len() } else { 0 };
        let total = nl + nm;
        // Differential on Λ^d ⊕ Λ^{d−1}: (λ, μ) ↦ (γ∧μ, 0) ∈ Λ^{d+1} ⊕ Λ^d.
        let n_next = basis_indices(m, d + 1).len();
        let g_mu = if d >= 1 { wedge_gamma_matrix(gamma, d - 1)? } else { QMatrix::zeros(n_next, 0) };
        let diff = QMatrix::from_fn(n_next + nl, total, |i, j| {
            if i < n_next && j >= nl {
                g_mu.get(i, j - nl).clone()
            } else {
                Rational::from_integer(0.into())
            }
        });
        let closed = Subspace::kernel_of(&diff);
        // Image of the previous differential: (γ∧ν, 0) for ν ∈ Λ^{d−2}.
        let euler_in = if d >= 2 { wedge_gamma_matrix(gamma, d - 2)? } else { QMatrix::zeros(nl, 0) };
        let exact_vectors: Vec<Vec<Rational>> = (0..euler_in.ncols())
            .map(|j| {
                let mut v = euler_in.column(j);
                v.resize(total, Rational::from_integer(0.into()));
                v
            })
            .collect();
        let exact = Subspace::span(total, exact_vectors).map_err(CollarError::Linear)?;
        let pullback = QMatrix::from_fn(total, nl, |i, j| Rational::from_integer(((i == j) as i64).into()));
        let pushforward = QMatrix::from_fn(nm, total, |i, j| Rational::from_integer(((j == nl + i) as i64).into()));
        Ok(GysinDegree { d, closed, exact, pullback, pushforward, euler_in })
    }

    /// `dim H^d(Y)`.
    pub fn betti(&self) -> usize {
        self.closed.dim() - self.exact.dim()
    }

    /// `p_! ∘ p^* = 0` on the cochain level.
    pub fn composite_vanishes(&self) -> Result<bool> {
        Ok(self.pushforward.mul(&self.pullback).map_err(CollarError::Linear)?.is_zero())
    }

    /// `p_!(closed forms)` as a subspace of `Λ^{d−1}`.
    pub fn image_pushforward(&self) -> Result<Subspace> {
        self.closed.map(&self.pushforward).map_err(CollarError::Linear)
    }

    /// Exactness at `H^d(Y)`: `ker p_! = Im p^* + exact` inside the closed
    /// forms, compared as subspaces.
    pub fn exact_at_total_space(&self) -> Result<bool> {
        let ker_push = Subspace::kernel_of(&self.pushforward)
            .intersect(&self.closed)
            .map_err(CollarError::Linear)?;
        let im_pull = Subspace::image_of(&self.pullback).sum(&self.exact).map_err(CollarError::Linear)?;
        Ok(ker_push == im_pull)
    }

    /// Exactness at `H^d(V) = Λ^d`: `ker p^* = Im(γ∧·)`, where `λ` is in
    /// `ker p^*` iff `p^*λ` is exact.
    pub fn exact_at_base(&self) -> Result<bool> {
        let n = self.pullback.ncols();
        // p^* is the inclusion of the first block, so its preimage of the
        // exact forms is the projection of (Im p^*) ∩ exact.
        let image = Subspace::image_of(&self.pullback).intersect(&self.exact).map_err(CollarError::Linear)?;
        let restrict = QMatrix::from_fn(n, self.pullback.nrows(), |i, j| {
            Rational::from_integer(((i == j) as i64).into())
        });
        let ker_pull = image.map(&restrict).map_err(CollarError::Linear)?;
        let im_euler = Subspace::image_of(&self.euler_in);
        Ok(ker_pull == im_euler)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collardyn::family::{curvature_for, standard_j};

    #[test]
    fn surface_base_is_always_surjective() {
        for k in [-3, 0, 1, 9] {
            let g = if k == 0 { QMatrix::zeros(2, 2) } else { curvature_for(k) };
            assert_eq!(image_p_shriek_invariant(&g).unwrap(), Subspace::full(2));
        }
    }

    #[test]
    fn four_torus_base() {
        let g = standard_j(4);
        // γ = dx1∧dx2 + dx3∧dx4 is nondegenerate: γ∧φ ≠ 0 for φ ≠ 0.
        assert_eq!(image_p_shriek_invariant(&g).unwrap().dim(), 0);
        let g = QMatrix::from_ints(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        // γ = dx1∧dx2: kernel of γ∧· is span{dx1, dx2}.
        assert_eq!(image_p_shriek_invariant(&g).unwrap().dim(), 2);
        for d in 0..=4 {
            let gd = GysinDegree::new(&g, d).unwrap();
            assert!(gd.composite_vanishes().unwrap());
            assert!(gd.exact_at_total_space().unwrap());
            assert!(gd.exact_at_base().unwrap());
        }
        // Heisenberg manifold × T²: b1 = 2 + 2.
        assert_eq!(GysinDegree::new(&g, 1).unwrap().betti(), 4);
        // Trivial bundle over T²: Y = T³.
        let t3 = GysinDegree::new(&QMatrix::zeros(2, 2), 2).unwrap();
        assert_eq!(t3.betti(), 3);
        // Euler number 1 over T²: b2 of the Heisenberg manifold is 2.
        assert_eq!(GysinDegree::new(&curvature_for(1), 2).unwrap().betti(), 2);
    }
}
