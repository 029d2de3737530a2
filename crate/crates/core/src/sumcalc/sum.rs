//! Symplectic sum and cut of four-manifold records along tori.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::types::{AperiodicCertificate, AperiodicFlag, H1Data, H1Map, MarkedTorus, SumResult, SumSpec, Summand, Verdict};
use super::{Result, SumError};
use crate::collardyn::{j2, Branch, Guarantee};
use crate::qlin::{QMatrix, ScalarK, Subspace};

fn find_torus<'a>(s: &'a Summand, label: &str) -> Result<&'a MarkedTorus> {
    s.torus(label)
        .ok_or_else(|| SumError::UnknownTorus { summand: s.name.clone(), label: label.to_string() })
}

fn neck_tori(spec: &SumSpec) -> Result<(&MarkedTorus, &MarkedTorus)> {
    Ok((find_torus(&spec.left, &spec.left_torus)?, find_torus(&spec.right, &spec.right_torus)?))
}

/// Kernel of `H₁(T; Q) → H₁(M; Q)` as a subspace of `Q²` (coordinates in
/// the torus's own basis of `H₁(T)`).
pub fn torus_kernel(s: &Summand, t: &MarkedTorus) -> Result<Subspace> {
    match &t.h1_map {
        H1Map::Zero => Ok(Subspace::full(2)),
        H1Map::Unknown => Err(SumError::UnknownH1Map(t.label.clone())),
        H1Map::Matrix(m) => {
            if m.ncols() != 2 {
                return Err(SumError::Invalid(format!("H_1 map of torus {:?} must have 2 columns", t.label)));
            }
            let h = s.h1.clone().unwrap_or_else(|| H1Data::free(m.nrows()));
            if h.generators != m.nrows() {
                return Err(SumError::Invalid(format!(
                    "H_1 map of torus {:?} has {} rows but H_1 has {} generators",
                    t.label,
                    m.nrows(),
                    h.generators
                )));
            }
            let composite = h.rational_annihilator().mul(&m.to_q())?;
            Ok(Subspace::kernel_of(&composite))
        }
    }
}

/// Poincaré duality `H₁(T²; Q) → H¹(T²; Q)`: the class of the `x₁`-circle
/// goes to `−dx₂` and the `x₂`-circle to `dx₁`, i.e. `(v₁, v₂) ↦ (v₂, −v₁)`.
fn poincare_dual() -> QMatrix {
    j2()
}

/// `Im(p_! ∘ i^*) = Im p_! ∩ PD(ker((i₊)_* − (i₋)_*)) ⊂ H¹(T²; R)`.
///
/// The tori sit on distinct summands, so the kernel of the difference is
/// the intersection of the two kernels (with the tori identified through
/// their marked bases by the gluing). Over a surface base `p_!` is onto.
pub fn image_p_shriek(spec: &SumSpec) -> Result<Subspace> {
    let (tl, tr) = neck_tori(spec)?;
    let independent = tl.homologically_nontrivial && tr.homologically_nontrivial;
    if !(independent || spec.case_i_attested) {
        return Err(SumError::HypothesisNotMet);
    }
    let kernel = torus_kernel(&spec.left, tl)?.intersect(&torus_kernel(&spec.right, tr)?)?;
    let dual = kernel.map(&poincare_dual())?;
    let image_p = Subspace::full(2);
    Ok(dual.intersect(&image_p)?)
}

/// The perturbation criterion applied to the neck hypersurface: a trivial
/// neck bundle needs a nonzero image, a nontrivial one (only over `T²`)
/// needs all of `H¹`. The image may live in `H¹(T^m)` for any `m`.
pub fn aperiodicity_verdict(neck_euler_k: i64, image: &Subspace) -> Verdict {
    let rank = image.dim();
    if neck_euler_k == 0 && rank >= 1 {
        let phi = image.basis()[0].iter().cloned().map(ScalarK::rational).collect();
        Verdict::Aperiodic { branch: Branch::I, phi, guarantee: Guarantee::AllButCountablyMany }
    } else if neck_euler_k != 0 && rank == 2 && image.ambient_dim() == 2 {
        Verdict::Aperiodic {
            branch: Branch::II,
            phi: vec![ScalarK::one(), ScalarK::tag("alpha")],
            guarantee: Guarantee::AllNonzeroU,
        }
    } else if neck_euler_k == 0 {
        Verdict::Unknown { reason: "trivial neck bundle but Im(p_! o i*) = 0".to_string() }
    } else {
        Verdict::Unknown {
            reason: format!("neck bundle has Euler number {neck_euler_k} but Im(p_! o i*) has rank {rank} < 2"),
        }
    }
}

/// `π₁` of the sum when the *other* side's neck complement is simply
/// connected: `π₁(X) = π₁(M)/⟨⟨π₁(T)⟩⟩`. Returns `(H₁, simply connected)`.
fn quotient_by_torus(s: &Summand, t: &MarkedTorus) -> (Option<H1Data>, bool) {
    if s.simply_connected || t.pi1_normally_generates {
        return (Some(H1Data::trivial()), true);
    }
    match (&s.h1, &t.h1_map) {
        (Some(h), H1Map::Zero) => (Some(h.clone()), false),
        (Some(h), H1Map::Matrix(m)) if m.nrows() == h.generators => (Some(h.quotient(m)), false),
        _ => (None, false),
    }
}

fn unique_label(label: &str, taken: &[String]) -> String {
    let mut out = label.to_string();
    while taken.contains(&out) {
        out.push_str("-R");
    }
    out
}

/// Flag carried over from a summand whose aperiodic hypersurface avoids
/// the neck torus, restricted to the surviving tori of that side.
fn inherited_flag(side: &Summand, neck: &str, survivors: &[String]) -> Option<AperiodicFlag> {
    let cert = side.aperiodic_flag.certificate()?;
    if !cert.disjoint_from.iter().any(|l| l == neck) {
        return None;
    }
    let mut c = cert.clone();
    c.reason = format!("inherited neighborhood: the aperiodic hypersurface of {} is disjoint from {}", side.name, neck);
    c.disjoint_from.retain(|l| survivors.contains(l));
    Some(AperiodicFlag::Yes(c))
}

/// Symplectic sum of two four-manifold records along marked tori.
pub fn symplectic_sum(spec: &SumSpec) -> Result<SumResult> {
    for s in [&spec.left, &spec.right] {
        if s.dim != 4 || s.signature.is_none() {
            return Err(SumError::NotFourDimensional(s.name.clone()));
        }
    }
    let (tl, tr) = neck_tori(spec)?;
    if tl.self_int + tr.self_int != 0 {
        return Err(SumError::SelfIntersectionMismatch { left: tl.self_int, right: tr.self_int });
    }
    if tl.area != tr.area {
        return Err(SumError::AreaMismatch { left: tl.area.to_string(), right: tr.area.to_string() });
    }
    let (l, r) = (&spec.left, &spec.right);
    let k = tl.self_int;
    let mut trace = vec![format!(
        "neck: {}:{} (self-intersection {}) glued to {}:{} (self-intersection {}); neck circle bundle has Euler number {}",
        l.name, tl.label, tl.self_int, r.name, tr.label, tr.self_int, k
    )];

    let euler_char = l.euler_char + r.euler_char;
    let signature = l.signature.unwrap_or(0) + r.signature.unwrap_or(0);
    trace.push(format!("e = {} + {} = {} (the glued neck has e(T^2) = 0)", l.euler_char, r.euler_char, euler_char));
    trace.push(format!(
        "sigma = {} + {} = {}",
        l.signature.unwrap_or(0),
        r.signature.unwrap_or(0),
        signature
    ));

    // π₁ / H₁ via van Kampen, only in the simply-connected-complement pattern.
    let left_kills = tl.complement_simply_connected;
    let right_kills = tr.complement_simply_connected;
    let from_right = left_kills.then(|| quotient_by_torus(r, tr));
    let from_left = right_kills.then(|| quotient_by_torus(l, tl));
    // Which side's presentation H₁(X) is expressed in.
    #[derive(PartialEq)]
    enum Side {
        Left,
        Right,
        None,
    }
    let pick = [(Side::Right, from_right), (Side::Left, from_left)]
        .into_iter()
        .filter_map(|(side, q)| q.map(|q| (side, q)))
        .max_by_key(|(_, (h, sc))| (*sc, h.is_some()));
    let (h1, simply_connected, side) = match pick {
        Some((side, (h1, sc))) => (h1, sc, side),
        None => (None, false, Side::None),
    };
    let side = if h1.is_none() { Side::None } else { side };
    trace.push(if simply_connected {
        "pi_1 = 1: a neck complement is simply connected and the other side's torus kills its pi_1".to_string()
    } else if let Some(h) = &h1 {
        format!(
            "H_1 = quotient of H_1 of {} by the neck torus image: b1 = {}, torsion {:?}",
            if side == Side::Left { &l.name } else { &r.name },
            h.b1(),
            h.torsion()
        )
    } else {
        "pi_1 and b1 not determined by the recorded data".to_string()
    });

    // Surviving tori.
    let map_for = |t: &MarkedTorus, this_kills: bool, this_side: Side| -> H1Map {
        if simply_connected || this_kills {
            H1Map::Zero
        } else if this_side == side {
            t.h1_map.clone()
        } else {
            H1Map::Unknown
        }
    };
    let mut tori = Vec::new();
    for t in l.tori.iter().filter(|t| t.label != tl.label) {
        let mut t2 = t.clone();
        t2.h1_map = map_for(t, left_kills, Side::Left);
        t2.complement_simply_connected = t.complement_simply_connected && right_kills;
        t2.pi1_normally_generates = false;
        tori.push(t2);
    }
    let left_labels: Vec<String> = tori.iter().map(|t| t.label.clone()).collect();
    let mut right = r.clone();
    for t in r.tori.iter().filter(|t| t.label != tr.label) {
        let fresh = unique_label(&t.label, &left_labels);
        if fresh != t.label {
            trace.push(format!("right torus {} relabelled {}", t.label, fresh));
            right.rename_torus(&t.label, &fresh);
        }
    }
    for t in right.tori.iter().filter(|t| t.label != tr.label) {
        let mut t2 = t.clone();
        t2.h1_map = map_for(t, right_kills, Side::Right);
        t2.complement_simply_connected = t.complement_simply_connected && left_kills;
        t2.pi1_normally_generates = false;
        tori.push(t2);
    }
    let right_labels: Vec<String> =
        tori.iter().skip(left_labels.len()).map(|t| t.label.clone()).collect();
    let survivors: Vec<String> = tori.iter().map(|t| t.label.clone()).collect();

    // Exceptional spheres through a neck torus are cut open by the sum.
    let mut exceptional = Vec::new();
    for (s, neck) in [(l, &tl.label), (&right, &tr.label)] {
        for e in &s.exceptional {
            if e.meets.as_deref() == Some(neck.as_str()) {
                continue;
            }
            exceptional.push(e.clone());
        }
    }
    let dropped = l.exceptional.len() + r.exceptional.len() - exceptional.len();
    if dropped > 0 {
        trace.push(format!("{dropped} exceptional class(es) meeting the neck tori are no longer tracked"));
    }

    // Cohomological criterion for the neck hypersurface.
    let (image_subspace, verdict) = match image_p_shriek(spec) {
        Ok(img) => {
            trace.push(format!(
                "Im(p_! o i*) = Im p_! ∩ PD(ker i+ ∩ ker i-) has rank {} in H^1(T^2; R)",
                img.dim()
            ));
            let v = aperiodicity_verdict(k, &img);
            (img, v)
        }
        Err(e) => {
            trace.push(format!("image computation unavailable: {e}"));
            (Subspace::zero(2), Verdict::Unknown { reason: e.to_string() })
        }
    };
    let aperiodic_flag = match &verdict {
        Verdict::Aperiodic { branch, phi, guarantee } => {
            trace.push(format!("verdict: aperiodic, branch {branch:?}"));
            AperiodicFlag::Yes(AperiodicCertificate {
                reason: "the neck hypersurface satisfies the perturbation criterion".to_string(),
                branch: Some(*branch),
                phi: Some(phi.clone()),
                guarantee: Some(*guarantee),
                disjoint_from: survivors.clone(),
                caveats: Vec::new(),
            })
        }
        Verdict::Unknown { reason } => {
            trace.push(format!("verdict: unknown ({reason})"));
            match inherited_flag(l, &tl.label, &left_labels).or_else(|| inherited_flag(&right, &tr.label, &right_labels)) {
                Some(f) => {
                    trace.push("aperiodicity inherited from a summand whose hypersurface avoids the neck".to_string());
                    f
                }
                None => AperiodicFlag::Unknown,
            }
        }
    };

    let manifold = Summand {
        name: format!("{} ⊞ {}", l.name, r.name),
        euler_char,
        signature: Some(signature),
        h1,
        simply_connected,
        dim: 4,
        tori,
        aperiodic_flag,
        exceptional,
        annotations: Vec::new(),
    };
    if let Some(bp) = manifold.b_plus() {
        trace.push(format!("b+ = {bp}"));
    }
    Ok(SumResult {
        manifold,
        neck_euler_k: k,
        image_subspace,
        verdict,
        provenance: Some(Box::new(spec.clone())),
        trace,
    })
}

/// Inverse of [`symplectic_sum`] on data: returns the originating
/// specification after checking that it reproduces the result.
pub fn cut(result: &SumResult) -> Result<SumSpec> {
    let spec = result.provenance.as_deref().ok_or(SumError::MissingProvenance)?;
    let again = symplectic_sum(spec)?;
    let (a, b) = (&again.manifold, &result.manifold);
    let same = a.euler_char == b.euler_char
        && a.signature == b.signature
        && a.h1 == b.h1
        && a.simply_connected == b.simply_connected
        && a.tori == b.tori
        && again.neck_euler_k == result.neck_euler_k
        && again.image_subspace == result.image_subspace
        && again.verdict == result.verdict;
    if !same {
        return Err(SumError::ProvenanceMismatch);
    }
    Ok(spec.clone())
}

/// Sum an aperiodic summand with anything along a torus its aperiodic
/// hypersurface avoids; the hypersurface survives in the sum.
pub fn sum_away_from_neck(
    aperiodic: &Summand,
    aperiodic_torus: &str,
    other: &Summand,
    other_torus: &str,
) -> Result<SumResult> {
    let spec = SumSpec {
        left: aperiodic.clone(),
        left_torus: aperiodic_torus.to_string(),
        right: other.clone(),
        right_torus: other_torus.to_string(),
        case_i_attested: false,
        phi_class: String::new(),
    };
    match &aperiodic.aperiodic_flag {
        AperiodicFlag::Unknown => symplectic_sum(&spec),
        AperiodicFlag::Yes(cert) => {
            if !cert.disjoint_from.iter().any(|l| l == aperiodic_torus) {
                return Err(SumError::MissingDisjointness(aperiodic_torus.to_string()));
            }
            let mut result = symplectic_sum(&spec)?;
            let survivors: Vec<String> = aperiodic
                .tori
                .iter()
                .filter(|t| t.label != aperiodic_torus)
                .map(|t| t.label.clone())
                .collect();
            result.manifold.aperiodic_flag =
                inherited_flag(aperiodic, aperiodic_torus, &survivors).expect("disjointness checked above");
            result.trace.push(format!("aperiodic flag forced: inherited neighborhood from {}", aperiodic.name));
            Ok(result)
        }
    }
}
