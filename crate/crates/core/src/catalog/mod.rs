//! Constructors for the standard example families, each returning the
//! records, the sums that build them and the expected verdict, plus the
//! geography coverage predicate.

mod examples;
mod geography;
mod group;

pub use examples::{
    collar_family_for, elliptic_e, elliptic_e1, elliptic_e3_plus_cp2, ek_plus_uk, gompf_manifold, knot_surgery,
    kodaira_thurston, log_transform, zehnder_torus, KnotData,
};
pub use geography::{
    geography_covered, geography_enumerate, geography_witness, GeographyPoint, GeographyStatus, GeographyWitness,
    RangeLabel,
};
pub use group::{GroupPresentation, Word};

use alloc::string::String;
use alloc::vec::Vec;

use crate::collardyn::{CollarError, CollarFamily};
use crate::qlin::Subspace;
use crate::sumcalc::{SumError, SumResult, Summand, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Sum(#[from] SumError),
    #[error(transparent)]
    Collar(#[from] CollarError),
}

pub type Result<T, E = CatalogError> = core::result::Result<T, E>;

/// A catalog example: the manifold record, how it was built, and the
/// verdict for its distinguished hypersurface.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub manifold: Summand,
    /// `Im(p_! ∘ i^*) ⊂ H¹(V; R)` for the distinguished hypersurface.
    pub image: Subspace,
    pub neck_euler_k: i64,
    pub verdict: Verdict,
    /// Collar family whose perturbation realizes the verdict (present iff
    /// the verdict is aperiodic).
    pub family: Option<CollarFamily>,
    /// Symplectic sums performed, in order.
    pub sums: Vec<SumResult>,
    pub trace: Vec<String>,
}

impl CatalogEntry {
    fn from_sum(name: String, description: String, sums: Vec<SumResult>, mut trace: Vec<String>) -> Result<Self> {
        let last = sums.last().ok_or_else(|| CatalogError::Invalid("empty construction".into()))?;
        for (i, s) in sums.iter().enumerate() {
            trace.push(alloc::format!("sum {}: {}", i + 1, s.manifold.name));
            trace.extend(s.trace.iter().map(|l| alloc::format!("  {l}")));
        }
        let family = collar_family_for(&last.verdict, last.neck_euler_k).transpose()?;
        let mut manifold = last.manifold.clone();
        manifold.name = name.clone();
        Ok(CatalogEntry {
            name,
            description,
            manifold,
            image: last.image_subspace.clone(),
            neck_euler_k: last.neck_euler_k,
            verdict: last.verdict.clone(),
            family,
            sums,
            trace,
        })
    }
}

/// Names accepted by [`lookup`], with a one-line description each.
pub fn catalog_names() -> Vec<(&'static str, &'static str)> {
    alloc::vec![
        ("zehnder<2n>", "T^{2n} with the standard form, e.g. zehnder4"),
        ("KT", "Kodaira-Thurston manifold S^1 x T_psi, psi = [[1,1],[0,1]]"),
        ("X_identity", "S^1 x T_psi with psi = identity (the 4-torus)"),
        ("X_anosov", "S^1 x T_psi with psi = [[2,1],[1,1]]"),
        ("E<n>", "elliptic surface E(n), e.g. E1, E2"),
        ("E<n>_<p>_<q>", "log transforms E(n)_{p,q}, e.g. E2_2_3"),
        ("E<n>_K_<knot>", "knot surgery E(n)_K for knot in {trefoil, unknot, figure8, 5_1, 5_2}"),
        ("XG_trivial", "Gompf manifold for <a | a>"),
        ("XG_Z2", "Gompf manifold for <a, b | [a, b]>"),
        ("XG_Z3", "Gompf manifold for <a | a^3>"),
        ("E3+CP2", "E(3) summed with CP^2 along T_3 and a cubic (Euler number -9 neck)"),
        ("Ek+Uk_<k>", "E_k summed with E(1) blown up k times on a fiber, 1 <= k <= 9"),
    ]
}

fn parse_num(s: &str) -> Option<i64> {
    s.parse().ok()
}

/// Looks up a catalog entry by name (see [`catalog_names`]).
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    let unknown = || CatalogError::UnknownName(name.into());
    if let Some(rest) = name.strip_prefix("zehnder") {
        let dim = parse_num(rest).ok_or_else(unknown)?;
        if dim % 2 != 0 {
            return Err(unknown());
        }
        return zehnder_torus(dim / 2);
    }
    match name {
        "KT" => return kodaira_thurston(&crate::qlin::IntMatrix::from_i64(&[&[1, 1], &[0, 1]])),
        "X_identity" => return kodaira_thurston(&crate::qlin::IntMatrix::from_i64(&[&[1, 0], &[0, 1]])),
        "X_anosov" => return kodaira_thurston(&crate::qlin::IntMatrix::from_i64(&[&[2, 1], &[1, 1]])),
        "XG_trivial" => return gompf_manifold(&GroupPresentation::parse("a | a").expect("valid")),
        "XG_Z2" => return gompf_manifold(&GroupPresentation::parse("a, b | a b a^-1 b^-1").expect("valid")),
        "XG_Z3" => return gompf_manifold(&GroupPresentation::parse("a | a^3").expect("valid")),
        "E3+CP2" => return elliptic_e3_plus_cp2(),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("Ek+Uk_") {
        return ek_plus_uk(parse_num(rest).ok_or_else(unknown)?, 1);
    }
    if let Some(rest) = name.strip_prefix('E') {
        let mut parts = rest.splitn(2, '_');
        let n = parse_num(parts.next().unwrap_or("")).ok_or_else(unknown)?;
        return match parts.next() {
            None => elliptic_e(n),
            Some(tail) => {
                if let Some(knot) = tail.strip_prefix("K_") {
                    let k = KnotData::named(knot).ok_or_else(unknown)?;
                    knot_surgery(n, &k)
                } else {
                    let (p, q) = tail.split_once('_').ok_or_else(unknown)?;
                    let (p, q) = (parse_num(p).ok_or_else(unknown)?, parse_num(q).ok_or_else(unknown)?);
                    let mut entry = elliptic_e(n)?;
                    entry.manifold = log_transform(&entry.manifold, p, q)?;
                    entry.name = entry.manifold.name.clone();
                    entry.description = alloc::format!("E({n}) after logarithmic transforms of orders {p} and {q}");
                    Ok(entry)
                }
            }
        };
    }
    Err(unknown())
}
