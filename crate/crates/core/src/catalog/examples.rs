//! The example families: tori, mapping tori, elliptic surfaces and their
//! surgeries, Gompf's manifolds, and sums along tori with nontrivial
//! normal bundle.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::group::GroupPresentation;
use super::{CatalogEntry, CatalogError, Result};
use crate::collardyn::{is_sp_sl, mapping_torus_invariant, Branch, CollarError, CollarFamily};
use crate::qlin::{IntMatrix, Rational, ScalarK, Subspace};
use crate::sumcalc::{
    aperiodicity_verdict, blow_down, blow_up, rescale, symplectic_sum, AperiodicCertificate, AperiodicFlag, H1Data,
    H1Map, MarkedTorus, SumResult, SumSpec, Summand, Verdict,
};

/// The collar family realizing an aperiodic verdict: standard `B`,
/// `β = 0`, and the verdict's `φ` and neck Euler number.
pub fn collar_family_for(verdict: &Verdict, neck_euler_k: i64) -> Option<core::result::Result<CollarFamily, CollarError>> {
    match verdict {
        Verdict::Aperiodic { branch: Branch::I, phi, .. } => Some(CollarFamily::simple(phi.len(), phi.clone(), 0)),
        Verdict::Aperiodic { branch: Branch::II, phi, .. } => Some(CollarFamily::simple(2, phi.clone(), neck_euler_k)),
        Verdict::Unknown { .. } => None,
    }
}

fn flag_for(verdict: &Verdict, reason: &str) -> AperiodicFlag {
    match verdict {
        Verdict::Aperiodic { branch, phi, guarantee } => AperiodicFlag::Yes(AperiodicCertificate {
            reason: reason.to_string(),
            branch: Some(*branch),
            phi: Some(phi.clone()),
            guarantee: Some(*guarantee),
            disjoint_from: Vec::new(),
            caveats: Vec::new(),
        }),
        Verdict::Unknown { .. } => AperiodicFlag::Unknown,
    }
}

fn spec(left: Summand, lt: &str, right: Summand, rt: &str) -> SumSpec {
    SumSpec {
        left,
        left_torus: lt.to_string(),
        right,
        right_torus: rt.to_string(),
        case_i_attested: false,
        phi_class: String::new(),
    }
}

/// `T^{2n}` cut along `x_{2n} = 0`: the cut is `T^{2n−2} × S²` summed
/// with itself along `T^{2n−2} × {0}` and `T^{2n−2} × {∞}`. The two
/// inclusions are homotopic, so case (i) applies and the image is all of
/// `H¹(T^{2n−2})`.
pub fn zehnder_torus(n: i64) -> Result<CatalogEntry> {
    if n < 2 {
        return Err(CatalogError::Invalid(format!("zehnder_torus needs n >= 2 (got {n})")));
    }
    let m = (2 * n - 2) as usize;
    let dim = (2 * n) as u32;
    let image = Subspace::full(m);
    let verdict = aperiodicity_verdict(0, &image);
    let family = collar_family_for(&verdict, 0).transpose()?;
    let manifold = Summand {
        name: format!("T^{dim}"),
        euler_char: 0,
        signature: (dim == 4).then_some(0),
        h1: Some(H1Data::free(dim as usize)),
        simply_connected: false,
        dim,
        tori: Vec::new(),
        aperiodic_flag: flag_for(&verdict, "the hypersurface x_2n = 0 satisfies the criterion"),
        exceptional: Vec::new(),
        annotations: vec!["the perturbed forms are Zehnder's constant forms".to_string()],
    };
    Ok(CatalogEntry {
        name: format!("zehnder{dim}"),
        description: format!("T^{dim} with its standard form; Y = {{x_{dim} = 0}}"),
        manifold,
        image,
        neck_euler_k: 0,
        verdict,
        family,
        sums: Vec::new(),
        trace: vec![
            format!("cut of T^{dim} along Y is T^{m} x S^2 with i+ and i- homotopic (case (i))"),
            format!("(i+)_* - (i-)_* = 0, so Im(p_! o i*) = H^1(T^{m}; R)"),
        ],
    })
}

/// `X_ψ = S¹ × T_ψ`, the sum of `T^m × S²` with itself where `i₋` is
/// twisted by `ψ`. The image is `ker(1 − ψ*)`, computed from the mapping
/// torus rather than from the sum lemma.
pub fn kodaira_thurston(psi: &IntMatrix) -> Result<CatalogEntry> {
    if !is_sp_sl(psi)? {
        return Err(CatalogError::Invalid("psi must lie in SL(m, Z) ∩ Sp(m, R)".to_string()));
    }
    let m = psi.nrows();
    let dim = (m + 2) as u32;
    let image = mapping_torus_invariant(psi)?;
    let verdict = aperiodicity_verdict(0, &image);
    let family = collar_family_for(&verdict, 0).transpose()?;
    // H₁(S¹ × T_ψ) = Z (circle) ⊕ Z (base of T_ψ) ⊕ coker(ψ − 1).
    let relations = IntMatrix::from_fn(m + 2, m, |i, j| {
        if i < 2 {
            0.into()
        } else {
            let d: num_bigint::BigInt = if i - 2 == j { 1.into() } else { 0.into() };
            psi.get(i - 2, j) - d
        }
    });
    let manifold = Summand {
        name: "X_psi".to_string(),
        euler_char: 0,
        signature: (dim == 4).then_some(0),
        h1: Some(H1Data { generators: m + 2, relations }),
        simply_connected: false,
        dim,
        tori: Vec::new(),
        aperiodic_flag: flag_for(&verdict, "the fiber hypersurface S^1 x V satisfies the criterion"),
        exceptional: Vec::new(),
        annotations: Vec::new(),
    };
    Ok(CatalogEntry {
        name: "X_psi".to_string(),
        description: format!("S^1 x T_psi for psi = {:?}", psi.to_rows()),
        manifold,
        neck_euler_k: 0,
        trace: vec![format!(
            "Im(p_! o i*) = Im(H^1(T_psi) -> H^1(V)) = ker(1 - psi^*) has rank {}",
            image.dim()
        )],
        image,
        verdict,
        family,
        sums: Vec::new(),
    })
}

/// `CP²` with a smooth cubic (a torus of self-intersection 9) and a line
/// class of area 1.
pub fn cp2_with_cubic() -> Summand {
    Summand::simply_connected("CP2", 3, 1).with_torus(MarkedTorus::new("C", 9, ScalarK::int(3), H1Map::Zero))
}

/// `E(1)`: `CP²` blown up at the nine base points of a cubic pencil. The
/// proper transform of the cubic is the fiber `T(1)`; a second fiber `T'`
/// is marked as well.
pub fn elliptic_e1() -> Result<Summand> {
    let mut s = cp2_with_cubic();
    for _ in 0..9 {
        s = blow_up(&s, Some("C"))?;
    }
    s.rename_torus("C", "T(1)");
    s.name = "E(1)".to_string();
    let fiber = s.torus("T(1)").expect("renamed").clone();
    let mut t2 = fiber.clone();
    t2.label = "T'".to_string();
    s.tori.push(t2);
    s.annotations.push("E(1) = CP2 # 9 CP2bar; fibers have simply connected complement".to_string());
    Ok(s)
}

/// `E(n)` as a record carrying only its fiber `T(n)`.
fn elliptic_record(n: i64) -> Result<Summand> {
    let mut s = if n == 1 { elliptic_e1()? } else { elliptic_e(n)?.manifold };
    let label = format!("T({n})");
    s.tori.retain(|t| t.label == label);
    if let AperiodicFlag::Yes(c) = &mut s.aperiodic_flag {
        c.disjoint_from.retain(|l| *l == label);
    }
    Ok(s)
}

/// `E(n) = E(n−1) ⊞ E(1)` along `T(n−1)` and a fiber of `E(1)`.
pub fn elliptic_e(n: i64) -> Result<CatalogEntry> {
    if n < 1 {
        return Err(CatalogError::Invalid(format!("E(n) needs n >= 1 (got {n})")));
    }
    if n == 1 {
        let manifold = elliptic_e1()?;
        return Ok(CatalogEntry {
            name: "E(1)".to_string(),
            description: "rational elliptic surface".to_string(),
            manifold,
            image: Subspace::zero(2),
            neck_euler_k: 0,
            verdict: Verdict::Unknown { reason: "E(1) is not built as a sum; it has b+ = 1".to_string() },
            family: None,
            sums: Vec::new(),
            trace: vec!["CP2 blown up nine times on a cubic".to_string()],
        });
    }
    let mut sums: Vec<SumResult> = Vec::new();
    let mut current = elliptic_record(1)?;
    for j in 2..=n {
        let r = symplectic_sum(&spec(current, &format!("T({})", j - 1), elliptic_e1()?, "T(1)"))?;
        current = r.manifold.clone();
        current.name = format!("E({j})");
        current.rename_torus("T'", &format!("T({j})"));
        sums.push(SumResult { manifold: current.clone(), ..r });
    }
    CatalogEntry::from_sum(
        format!("E({n})"),
        format!("elliptic surface E({n}) built by {} fiber sums with E(1)", n - 1),
        sums,
        Vec::new(),
    )
}

/// Public wrapper used by [`super::lookup`].
pub fn elliptic_e3_plus_cp2() -> Result<CatalogEntry> {
    let mut e3 = elliptic_e(3)?.manifold;
    // T₃: a fiber smoothed together with nine disjoint (−3)-sections;
    // (F + ΣSᵢ)² = 2·9 − 27 = −9. It meets the fiber T(3), which is
    // therefore no longer marked.
    e3.tori.clear();
    if let AperiodicFlag::Yes(c) = &mut e3.aperiodic_flag {
        c.disjoint_from.clear();
    }
    e3.tori.push(MarkedTorus::new("T_3", -9, ScalarK::int(3), H1Map::Zero));
    let r = symplectic_sum(&spec(e3, "T_3", cp2_with_cubic(), "C"))?;
    CatalogEntry::from_sum(
        "E(3)+CP2".to_string(),
        "E(3) summed with CP2 along a self-intersection -9 torus and a cubic".to_string(),
        vec![r],
        vec!["area of T_3 normalized to the cubic's area 3".to_string()],
    )
}

fn rational_area(t: &MarkedTorus) -> Result<Rational> {
    t.area.as_rational().ok_or_else(|| CatalogError::Invalid(format!("torus {} has irrational area", t.label)))
}

/// `X_k = E_k ⊞ U_k`: blow down `k` exceptional spheres of `E(1)` (fiber
/// self-intersection `+k`), blow up `k` points on the fiber `T(m)` of
/// `U = E(m)` (self-intersection `−k`), equalize areas and sum. The neck is
/// a circle bundle over `T²` with Euler number `k`.
pub fn ek_plus_uk(k: i64, m: i64) -> Result<CatalogEntry> {
    if !(1..=9).contains(&k) {
        return Err(CatalogError::Invalid(format!("k must satisfy 1 <= k <= 9 (got {k})")));
    }
    let mut ek = elliptic_record(1)?;
    for _ in 0..k {
        ek = blow_down(&ek, Some("T(1)"))?;
    }
    ek.name = format!("E_{k}");
    let tu = format!("T({m})");
    let mut uk = elliptic_record(m)?;
    for _ in 0..k {
        uk = blow_up(&uk, Some(&tu))?;
    }
    uk.name = format!("U_{k}");
    let ratio = rational_area(ek.torus("T(1)").expect("fiber"))? / rational_area(uk.torus(&tu).expect("fiber"))?;
    let uk = rescale(&uk, &ScalarK::rational(ratio.clone()))?;
    let r = symplectic_sum(&spec(ek, "T(1)", uk, &tu))?;
    CatalogEntry::from_sum(
        format!("E_{k}+U_{k}"),
        format!("E_{k} = CP2 # {} CP2bar summed with E({m}) blown up {k} times on a fiber", 9 - k),
        vec![r],
        vec![format!("U_{k} rescaled by {ratio} to equalize areas")],
    )
}

/// `E(n)_{p,q}`: two logarithmic transforms performed near singular fibers,
/// away from the aperiodic hypersurface. Only `E(n)`, `n ≥ 2`, is accepted.
pub fn log_transform(s: &Summand, p: i64, q: i64) -> Result<Summand> {
    if p < 1 || q < 1 {
        return Err(CatalogError::Invalid("log transform orders must be positive".to_string()));
    }
    let n: i64 = s
        .name
        .strip_prefix("E(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| CatalogError::Unsupported(format!("log transforms are only modelled on E(n) records, not {:?}", s.name)))?;
    if n < 2 {
        return Err(CatalogError::Unsupported("no aperiodicity claim is made for E(1)_{p,q}".to_string()));
    }
    if p == 1 && q == 1 {
        return Ok(s.clone());
    }
    let mut out = s.clone();
    out.name = format!("E({n})_{{{p},{q}}}");
    out.h1 = None;
    out.simply_connected = false;
    for t in &mut out.tori {
        t.h1_map = H1Map::Unknown;
        t.complement_simply_connected = false;
    }
    out.annotations.push("fundamental group not tracked through logarithmic transforms".to_string());
    if let AperiodicFlag::Yes(c) = &mut out.aperiodic_flag {
        c.caveats.push("surgery disjoint from Y (performed near singular fibers)".to_string());
        c.caveats.push("perturbation parameter u must stay small enough for the singular fibers to remain symplectic".to_string());
    }
    Ok(out)
}

/// Declared data of a knot (nothing is computed from a diagram).
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KnotData {
    pub name: String,
    pub fibered: bool,
    pub seifert_genus: u32,
    pub alexander_nontrivial: bool,
}

impl KnotData {
    pub fn named(name: &str) -> Option<KnotData> {
        let (fibered, g, alex) = match name {
            "unknot" => (true, 0, false),
            "trefoil" => (true, 1, true),
            "figure8" => (true, 1, true),
            "5_1" => (true, 2, true),
            "5_2" => (false, 1, true),
            _ => return None,
        };
        Some(KnotData { name: name.to_string(), fibered, seifert_genus: g, alexander_nontrivial: alex })
    }
}

/// `E(n)_K = E(n−1) ⊞ E(1)_K` with `E(1)_K = E(1) ⊞ (S¹ × M_K)` along a
/// fiber and the section torus `T_K`.
pub fn knot_surgery(n: i64, knot: &KnotData) -> Result<CatalogEntry> {
    if !knot.fibered {
        return Err(CatalogError::Invalid(format!("knot {} is not fibered", knot.name)));
    }
    if n < 2 {
        return Err(CatalogError::Invalid(format!("knot surgery aperiodicity needs n >= 2 (got {n})")));
    }
    let e1 = elliptic_e1()?;
    // S¹ × M_K fibers over T² with fiber a genus-g surface; the section T_K
    // maps H₁ isomorphically and its meridian normally generates π₁(M_K).
    let mut tk = MarkedTorus::new("T_K", 0, ScalarK::one(), H1Map::Matrix(IntMatrix::from_i64(&[&[1, 0], &[0, 1]])));
    tk.pi1_normally_generates = true;
    let smk = Summand::four_manifold(format!("S1 x M_{}", knot.name), 0, 0, Some(H1Data::free(2))).with_torus(tk);
    let area = e1.torus("T'").expect("second fiber").area.clone();
    let smk = rescale(&smk, &area)?;
    let r1 = symplectic_sum(&spec(e1, "T'", smk, "T_K"))?;
    let mut e1k = r1.manifold.clone();
    e1k.name = format!("E(1)_{}", knot.name);
    e1k.rename_torus("T(1)", "T");
    let r2 = symplectic_sum(&spec(elliptic_record(n - 1)?, &format!("T({})", n - 1), e1k, "T"))?;
    let mut entry = CatalogEntry::from_sum(
        format!("E({n})_{}", knot.name),
        format!("Fintushel-Stern knot surgery on E({n}) with the fibered knot {}", knot.name),
        vec![r1, r2],
        vec![format!("S1 x M_K rescaled by {area} to match the fiber area")],
    )?;
    entry.manifold.annotations.push(format!("homeomorphic to E({n})"));
    if knot.alexander_nontrivial {
        entry.manifold.annotations.push("not diffeomorphic to E(n): Alexander polynomial nontrivial (unchecked)".to_string());
    }
    Ok(entry)
}

/// Gompf's `X_G`: `F × T²` (genus of `F` = number of generators) summed
/// with `E(1)` along `{z} × T²`, then along tori `T_i ≈ γ_i × α` for the
/// curves `γ_i` (the relators in the `a`-generators followed by the `b_j`).
pub fn gompf_manifold(p: &GroupPresentation) -> Result<CatalogEntry> {
    p.validate()?;
    let g = p.rank();
    let gens = 2 * g + 2;
    let (x, y) = (2 * g, 2 * g + 1);
    let col = |v: &[i64]| -> Vec<i64> { v.to_vec() };
    let mut gammas: Vec<Vec<i64>> = p
        .relators
        .iter()
        .map(|w| {
            let mut v = vec![0; gens];
            v[..g].copy_from_slice(&p.exponent_sums(w));
            v
        })
        .collect();
    for j in 0..g {
        let mut v = vec![0; gens];
        v[g + j] = 1;
        gammas.push(v);
    }
    let torus_map = |c1: &[i64], c2: &[i64]| {
        IntMatrix::from_fn(gens, 2, |i, j| if j == 0 { c1[i].into() } else { c2[i].into() })
    };
    let mut ex = vec![0; gens];
    ex[x] = 1;
    let mut ey = vec![0; gens];
    ey[y] = 1;
    let mut fxt2 = Summand::four_manifold(format!("F_{g} x T2"), 0, 0, Some(H1Data::free(gens)));
    for label in ["Z", "W"] {
        fxt2.tori.push(MarkedTorus::new(label, 0, ScalarK::one(), H1Map::Matrix(torus_map(&ex, &ey))));
    }
    for (i, gamma) in gammas.iter().enumerate() {
        fxt2.tori.push(MarkedTorus::new(
            format!("T_{}", i + 1),
            0,
            ScalarK::one(),
            H1Map::Matrix(torus_map(&col(gamma), &ex)),
        ));
    }
    let e1 = elliptic_e1()?;
    let scale = e1.torus("T(1)").expect("fiber").area.as_rational().expect("rational").recip();
    let e1 = rescale(&e1, &ScalarK::rational(scale))?;

    let mut sums = Vec::new();
    let mut current = fxt2;
    let necks: Vec<String> = core::iter::once("Z".to_string()).chain((1..=gammas.len()).map(|i| format!("T_{i}"))).collect();
    for (k, neck) in necks.iter().enumerate() {
        let r = symplectic_sum(&spec(current, neck, e1.clone(), "T(1)"))?;
        current = r.manifold.clone();
        current.name = format!("X_G^{}", k + 1);
        sums.push(SumResult { manifold: current.clone(), ..r });
    }
    let mut entry = CatalogEntry::from_sum(
        "X_G".to_string(),
        format!("Gompf's manifold for a presentation with {g} generators and {} relators", p.relators.len()),
        sums,
        vec![format!("{} curves gamma_i: the relators followed by b_1..b_{g}", gammas.len())],
    )?;
    entry.manifold.annotations.push("pi_1 = G (van Kampen through simply connected E(1) complements)".to_string());
    Ok(entry)
}
