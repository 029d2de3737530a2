//! Independent oracles for the sum bookkeeping: Mayer–Vietoris for the
//! Euler characteristic, Novikov additivity for the signature, and the
//! round-trip contracts, on randomized records.

use alloc::string::String;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::qlin::{rat, IntMatrix, ScalarK};

/// `e(M ∖ ν T) = e(M) − e(T²) + e(∂ν T) = e(M)` (both `T²` and `T³` have
/// Euler characteristic zero).
fn euler_of_complement(e: i64) -> i64 {
    let e_torus = 0;
    let e_boundary = 0;
    e - e_torus + e_boundary
}

/// Novikov: `σ(M) = σ(M ∖ ν T) + σ(ν T)` and the disk bundle of Euler
/// number `k` has signature `sign(k)`.
fn signature_of_complement(sigma: i64, self_int: i64) -> i64 {
    sigma - self_int.signum()
}

fn mayer_vietoris_euler(spec: &SumSpec) -> i64 {
    // X = (M₊ ∖ ν) ∪_{T³} (M₋ ∖ ν)
    let e_t3 = 0;
    euler_of_complement(spec.left.euler_char) + euler_of_complement(spec.right.euler_char) - e_t3
}

fn novikov_signature(spec: &SumSpec) -> i64 {
    let kl = spec.left.torus(&spec.left_torus).unwrap().self_int;
    let kr = spec.right.torus(&spec.right_torus).unwrap().self_int;
    signature_of_complement(spec.left.signature.unwrap(), kl)
        + signature_of_complement(spec.right.signature.unwrap(), kr)
}

fn torus(label: &str, k: i64, area: i64, map: H1Map, sc: bool) -> MarkedTorus {
    let mut t = MarkedTorus::new(label, k, ScalarK::int(area), map);
    t.complement_simply_connected = sc;
    t
}

prop_compose! {
    fn summand(name: &'static str, k: i64, area: i64)(
        half_bplus in 0i64..4,
        bminus in 0i64..20,
        sc in any::<bool>(),
        comp_sc in any::<bool>(),
        b1 in 0usize..4,
        entries in proptest::collection::vec(-2i64..3, 8),
        extra in 0usize..3,
    ) -> Summand {
        // Betti numbers of an almost complex four-manifold: 1 − b₁ + b⁺ even.
        let b1 = if sc { 0 } else { b1 };
        let bplus = 2 * half_bplus + 1 + (b1 as i64 % 2);
        let e = 2 - 2 * b1 as i64 + bplus + bminus;
        let sigma = bplus - bminus;
        let mut s = if sc {
            Summand::simply_connected(name, e, sigma)
        } else {
            Summand::four_manifold(name, e, sigma, Some(H1Data::free(b1)))
        };
        let map = |offset: usize| if sc || b1 == 0 {
            H1Map::Zero
        } else {
            let rows: Vec<Vec<i64>> = (0..b1).map(|i| vec![entries[(offset + 2 * i) % 8], entries[(offset + 2 * i + 1) % 8]]).collect();
            let rows: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            H1Map::Matrix(IntMatrix::from_i64(&rows))
        };
        s.tori.push(torus("N", k, area, map(0), comp_sc));
        for i in 0..extra {
            s.tori.push(torus(["A", "B", "C"][i], 0, 1 + i as i64, map(i + 1), false));
        }
        s
    }
}

prop_compose! {
    fn sum_spec()(k in -9i64..10, area in 1i64..5)(
        left in summand("L", k, area),
        right in summand("R", -k, area),
        phi_class in "[a-z]{0,3}",
    ) -> SumSpec {
        SumSpec { left, left_torus: "N".into(), right, right_torus: "N".into(), case_i_attested: false, phi_class }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_matches_oracles(spec in sum_spec()) {
        let r = symplectic_sum(&spec).unwrap();
        let m = &r.manifold;
        prop_assert_eq!(m.euler_char, mayer_vietoris_euler(&spec));
        prop_assert_eq!(m.signature, Some(novikov_signature(&spec)));
        prop_assert_eq!(m.c().unwrap(), spec.left.c().unwrap() + spec.right.c().unwrap());
        prop_assert_eq!(m.chi_h().unwrap(), spec.left.chi_h().unwrap() + spec.right.chi_h().unwrap());
        // Verdict invariants.
        match &r.verdict {
            Verdict::Aperiodic { branch: crate::collardyn::Branch::I, .. } => {
                prop_assert_eq!(r.neck_euler_k, 0);
                prop_assert!(r.image_subspace.dim() >= 1);
            }
            Verdict::Aperiodic { .. } => {
                prop_assert!(r.neck_euler_k != 0);
                prop_assert_eq!(r.image_subspace.dim(), 2);
            }
            Verdict::Unknown { .. } => {}
        }
        prop_assert!(violations(m).is_empty(), "{:?}", violations(m));
        prop_assert_eq!(cut(&r).unwrap(), spec);
    }

    #[test]
    fn blow_down_inverts_blow_up(spec in sum_spec(), on in 0usize..3) {
        let s = spec.left;
        let label: Option<String> = match on {
            0 => None,
            _ => s.tori.get(on - 1).map(|t| t.label.clone()),
        };
        let up = blow_up_with_area(&s, label.as_deref(), &ScalarK::rational(rat(1, 1000))).unwrap();
        prop_assert_eq!(up.euler_char, s.euler_char + 1);
        prop_assert_eq!(blow_down(&up, label.as_deref()).unwrap(), s);
    }
}
