//! Invariant checks on hand-written records, reported as messages rather
//! than errors so that every problem in a file is listed at once.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::types::{rational_sign_positive, AperiodicFlag, H1Map, SumSpec, Summand};

/// Violated invariants of a single record (empty when valid).
pub fn violations(s: &Summand) -> Vec<String> {
    let mut out = Vec::new();
    if !s.dim.is_multiple_of(2) || s.dim == 0 {
        out.push(format!("dimension must be a positive even number (got {})", s.dim));
    }
    if s.dim == 4 && s.signature.is_none() {
        out.push("four-manifolds must record a signature".into());
    }
    if let Some(h) = &s.h1 {
        if h.relations.nrows() != h.generators && h.relations.ncols() > 0 {
            out.push(format!(
                "H_1 relation matrix has {} rows but {} generators",
                h.relations.nrows(),
                h.generators
            ));
        } else if s.simply_connected && !h.is_trivial() {
            out.push("simply connected record must have trivial H_1".into());
        }
    }
    if s.simply_connected && s.h1.is_none() {
        out.push("simply connected record must have trivial H_1".into());
    }
    if s.simply_connected && s.dim == 4 {
        if let Some(sig) = s.signature {
            let twice = s.euler_char - 2 + sig;
            if twice < 0 || twice % 2 != 0 {
                out.push(format!("b+ = (e - 2 + sigma)/2 must be a non-negative integer (e = {}, sigma = {sig})", s.euler_char));
            }
        }
    }
    let mut labels = BTreeSet::new();
    for t in &s.tori {
        if !labels.insert(t.label.as_str()) {
            out.push(format!("duplicate torus label {:?}", t.label));
        }
        if t.area.is_zero() || rational_sign_positive(&t.area) == Some(false) {
            out.push(format!("torus {:?}: area must be positive", t.label));
        }
        if !t.homologically_nontrivial {
            out.push(format!("torus {:?}: symplectic tori are homologically nontrivial", t.label));
        }
        match &t.h1_map {
            H1Map::Zero | H1Map::Unknown => {}
            H1Map::Matrix(m) => {
                if s.simply_connected {
                    out.push(format!("torus {:?}: H_1 map must be Zero in a simply connected record", t.label));
                }
                if m.ncols() != 2 {
                    out.push(format!("torus {:?}: H_1 map must have 2 columns", t.label));
                }
                if let Some(h) = &s.h1 {
                    if m.nrows() != h.generators {
                        out.push(format!(
                            "torus {:?}: H_1 map has {} rows but H_1 has {} generators",
                            t.label,
                            m.nrows(),
                            h.generators
                        ));
                    }
                }
            }
        }
    }
    if let AperiodicFlag::Yes(c) = &s.aperiodic_flag {
        for l in &c.disjoint_from {
            if !labels.contains(l.as_str()) {
                out.push(format!("aperiodicity certificate names unknown torus {l:?}"));
            }
        }
    }
    for e in &s.exceptional {
        if let Some(l) = &e.meets {
            if !labels.contains(l.as_str()) {
                out.push(format!("exceptional class meets unknown torus {l:?}"));
            }
        }
    }
    out
}

/// Violated invariants of a sum specification, including those of both
/// summands (prefixed with the side).
pub fn spec_violations(spec: &SumSpec) -> Vec<String> {
    let mut out = Vec::new();
    for (side, s) in [("left", &spec.left), ("right", &spec.right)] {
        out.extend(violations(s).into_iter().map(|v| format!("{side}: {v}")));
        if s.dim != 4 {
            out.push(format!("{side}: summands must be four-manifolds"));
        }
    }
    let tl = spec.left.torus(&spec.left_torus);
    let tr = spec.right.torus(&spec.right_torus);
    if tl.is_none() {
        out.push(format!("left: no marked torus {:?}", spec.left_torus));
    }
    if tr.is_none() {
        out.push(format!("right: no marked torus {:?}", spec.right_torus));
    }
    if let (Some(a), Some(b)) = (tl, tr) {
        if a.self_int + b.self_int != 0 {
            out.push(format!("opposite self-intersection required (got {} and {})", a.self_int, b.self_int));
        }
        if a.area != b.area {
            out.push(format!("tori must have equal area (got {} and {})", a.area, b.area));
        }
    }
    out
}
