use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CollarError, Result};
use crate::qlin::{lcm, smith_normal_form, IntMatrix, QMatrix, Rational, ScalarK, Subspace, Tag};

/// The affine map `x ↦ A·x + b` of `R^m / Z^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AffineTorusMap {
    pub a: IntMatrix,
    pub b: Vec<ScalarK>,
}

/// Answer for one iterate `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodicPointAnswer {
    pub n: u32,
    pub exists: bool,
    /// A point `x` with `Aⁿx + Σ_{j<n} A^j b ≡ x (mod Z^m)`.
    pub witness: Option<Vec<ScalarK>>,
}

impl AffineTorusMap {
    pub fn new(a: IntMatrix, b: Vec<ScalarK>) -> Result<Self> {
        if !a.is_square() || a.nrows() != b.len() {
            return Err(CollarError::Invalid("A must be square with one row per component of b".to_string()));
        }
        if !a.det().map_err(CollarError::Linear)?.abs().is_one() {
            return Err(CollarError::Invalid("A must have determinant ±1".to_string()));
        }
        Ok(AffineTorusMap { a, b })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// `F(x) = A·x + b` on tagged points (no reduction mod 1).
    pub fn apply(&self, x: &[ScalarK]) -> Vec<ScalarK> {
        let m = self.dim();
        (0..m)
            .map(|i| {
                let mut acc = self.b[i].clone();
                for (j, xj) in x.iter().enumerate() {
                    acc += &xj.scale(&Rational::from_integer(self.a.get(i, j).clone()));
                }
                acc
            })
            .collect()
    }

    /// True iff `Fⁿ(x) − x ∈ Z^m`, checked by exact iteration.
    pub fn is_periodic_point(&self, x: &[ScalarK], n: u32) -> bool {
        let mut y = x.to_vec();
        for _ in 0..n {
            y = self.apply(&y);
        }
        y.iter().zip(x).all(|(yi, xi)| {
            let d = yi - xi;
            d.as_rational().is_some_and(|q| q.is_integer())
        })
    }
}

fn tags_of(v: &[ScalarK]) -> BTreeSet<Tag> {
    v.iter().flat_map(|x| x.irrational_tags().cloned()).collect()
}

/// Scales rational rows to primitive integer rows.
fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let den = r.iter().fold(BigInt::one(), |acc, q| lcm(&acc, q.denom()));
            let ints: Vec<BigInt> = r.iter().map(|q| (q * Rational::from_integer(den.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, z| acc.gcd(z));
            if g.is_zero() {
                ints
            } else {
                ints.into_iter().map(|z| z / &g).collect()
            }
        })
        .collect()
}

/// Decides, for `n = 1, …, max_n`, whether `F = A·x + b` has a point of
/// period dividing `n`, i.e. whether `(Aⁿ − I)x ≡ −Σ_{j<n} A^j b (mod Z^m)`
/// has a real solution.
///
/// With `M = Aⁿ − I`, `w = Σ_{j<n} A^j b` and `P` an integer basis of the
/// left null space of `M`, a solution exists iff `P·w_t = 0` for every
/// irrational tag `t` and `P·w₁ ∈ P·Z^m` (decided with the Smith normal
/// form of `P`).
pub fn affine_periodic_points(map: &AffineTorusMap, max_n: u32) -> Result<Vec<PeriodicPointAnswer>> {
    if max_n == 0 {
        return Err(CollarError::Invalid("max_n must be at least 1".to_string()));
    }
    let m = map.dim();
    let a = map.a.to_q();
    let id = QMatrix::identity(m);
    let mut power = QMatrix::identity(m);
    // w_n = Σ_{j<n} A^j b, updated as w_{n+1} = A·w_n + b.
    let mut w: Vec<ScalarK> = vec![ScalarK::zero(); m];
    let mut out = Vec::with_capacity(max_n as usize);
    for n in 1..=max_n {
        power = power.mul(&a).map_err(CollarError::Linear)?;
        w = map.apply(&w);
        let mm = power.sub(&id).map_err(CollarError::Linear)?;
        let answer = decide(&mm, &w).inspect(|witness| {
            debug_assert!(map.is_periodic_point(witness, n));
        });
        out.push(PeriodicPointAnswer { n, exists: answer.is_some(), witness: answer });
    }
    Ok(out)
}

/// Finds `x` with `M x ≡ −w (mod Z^m)`, or `None`.
fn decide(mm: &QMatrix, w: &[ScalarK]) -> Option<Vec<ScalarK>> {
    let m = w.len();
    let left = mm.left_kernel();
    let p_rows = integer_rows(&left);
    let tags = tags_of(w);
    let coeff = |t: &Tag| -> Vec<Rational> { w.iter().map(|x| x.coeff(t)).collect() };
    // Irrational parts must lie in the image of M.
    for t in &tags {
        let wt = coeff(t);
        for row in &p_rows {
            let s: Rational = row.iter().zip(&wt).map(|(p, q)| Rational::from_integer(p.clone()) * q).sum();
            if !s.is_zero() {
                return None;
            }
        }
    }
    // Rational part: find an integer z with P z = P w₁.
    let w1 = coeff(&Tag::unit());
    let z: Vec<BigInt> = if p_rows.is_empty() {
        vec![BigInt::zero(); m]
    } else {
        let p = IntMatrix::from_rows(p_rows.clone()).expect("rows of equal length");
        let pw: Vec<Rational> = p_rows
            .iter()
            .map(|row| row.iter().zip(&w1).map(|(a, q)| Rational::from_integer(a.clone()) * q).sum())
            .collect();
        let snf = smith_normal_form(&p);
        // D y = U·(P w₁) with z = V y.
        let upw: Vec<Rational> = (0..snf.u.nrows())
            .map(|i| (0..snf.u.ncols()).map(|k| Rational::from_integer(snf.u.get(i, k).clone()) * &pw[k]).sum())
            .collect();
        let mut y = vec![BigInt::zero(); m];
        for (i, rhs) in upw.iter().enumerate() {
            let d = if i < m { snf.d.get(i, i).clone() } else { BigInt::zero() };
            if d.is_zero() {
                if !rhs.is_zero() {
                    return None;
                }
                continue;
            }
            let q = rhs / Rational::from_integer(d);
            if !q.is_integer() {
                return None;
            }
            y[i] = q.to_integer();
        }
        (0..m).map(|i| (0..m).map(|k| snf.v.get(i, k) * &y[k]).sum()).collect()
    };
    // Solve M x = z − w tag by tag.
    let mut x = vec![ScalarK::zero(); m];
    let rhs1: Vec<Rational> = (0..m).map(|i| Rational::from_integer(z[i].clone()) - &w1[i]).collect();
    let x1 = mm.solve_any(&rhs1).ok()??;
    for (xi, q) in x.iter_mut().zip(x1) {
        *xi += &ScalarK::rational(q);
    }
    for t in &tags {
        let rhs: Vec<Rational> = coeff(t).into_iter().map(|q| -q).collect();
        let xt = mm.solve_any(&rhs).ok()??;
        for (xi, q) in x.iter_mut().zip(xt) {
            *xi += &ScalarK::tagged(t.as_str(), q);
        }
    }
    Some(x)
}

/// `ker(I − ψᵀ)`: the classes in `H¹(T^m)` invariant under the monodromy,
/// equal to the image of the fiber restriction of the mapping torus.
pub fn mapping_torus_invariant(psi: &IntMatrix) -> Result<Subspace> {
    if !psi.is_square() {
        return Err(CollarError::Invalid("psi must be square".to_string()));
    }
    let m = psi.nrows();
    let mm = QMatrix::identity(m).sub(&psi.to_q().transpose()).map_err(CollarError::Linear)?;
    Ok(Subspace::kernel_of(&mm))
}

/// True iff `ψ` is an integer matrix with `det ψ = 1` and `ψᵀ J ψ = J` for
/// the standard block-diagonal `J`.
pub fn is_sp_sl(psi: &IntMatrix) -> Result<bool> {
    if !psi.is_square() || !psi.nrows().is_multiple_of(2) {
        return Err(CollarError::Invalid("psi must be square of even size".to_string()));
    }
    let m = psi.nrows();
    if !psi.det().map_err(CollarError::Linear)?.is_one() {
        return Ok(false);
    }
    let j = super::family::standard_j(m).to_int().expect("integer J");
    let lhs = psi.transpose().mul(&j).and_then(|x| x.mul(psi)).map_err(CollarError::Linear)?;
    Ok(lhs == j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlin::{int, rat};

    #[test]
    fn shear_with_irrational_translation_has_no_periodic_points() {
        let map = AffineTorusMap::new(IntMatrix::from_i64(&[&[1, 0], &[1, 1]]), vec![ScalarK::tag("alpha"), ScalarK::zero()]).unwrap();
        let ans = affine_periodic_points(&map, 10).unwrap();
        assert!(ans.iter().all(|a| !a.exists));
    }

    #[test]
    fn identity_fixes_everything() {
        let map = AffineTorusMap::new(IntMatrix::identity(2), vec![ScalarK::zero(), ScalarK::zero()]).unwrap();
        assert!(affine_periodic_points(&map, 5).unwrap().iter().all(|a| a.exists));
    }

    #[test]
    fn shear_with_third_translation() {
        let map = AffineTorusMap::new(IntMatrix::from_i64(&[&[1, 0], &[1, 1]]), vec![ScalarK::rational(rat(1, 3)), ScalarK::zero()]).unwrap();
        let ans = affine_periodic_points(&map, 6).unwrap();
        let exists: Vec<bool> = ans.iter().map(|a| a.exists).collect();
        assert_eq!(exists, vec![false, false, true, false, false, true]);
        for a in &ans {
            if let Some(w) = &a.witness {
                assert!(map.is_periodic_point(w, a.n));
            }
        }
        // Brute force over denominators up to 9.
        let has_point = |n: u32| {
            (1..=9).any(|d| {
                (0..d).any(|i| (0..d).any(|j| map.is_periodic_point(&[ScalarK::rational(rat(i, d)), ScalarK::rational(rat(j, d))], n)))
            })
        };
        assert!(has_point(3));
        assert!(!has_point(1) && !has_point(2));
    }

    #[test]
    fn mapping_torus_examples() {
        assert_eq!(mapping_torus_invariant(&IntMatrix::identity(2)).unwrap().dim(), 2);
        let kt = mapping_torus_invariant(&IntMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(kt.basis(), &[vec![int(0), int(1)]]);
        assert_eq!(mapping_torus_invariant(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap().dim(), 0);
    }

    #[test]
    fn sp_sl_examples() {
        assert!(is_sp_sl(&IntMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap());
        assert!(is_sp_sl(&IntMatrix::identity(4)).unwrap());
        assert!(!is_sp_sl(&IntMatrix::from_i64(&[&[2, 0], &[0, 1]])).unwrap());
        assert!(is_sp_sl(&IntMatrix::from_i64(&[&[1, 2, 3]])).is_err());
    }
}
