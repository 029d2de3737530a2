//! Finite group presentations and their abelianizations.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{CatalogError, Result};
use crate::qlin::IntMatrix;
use crate::sumcalc::H1Data;

/// A word as a list of `(generator index, exponent)` syllables.
pub type Word = Vec<(usize, i64)>;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let p = GroupPresentation { generators, relators };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(CatalogError::Invalid("empty presentation".to_string()));
        }
        for w in &self.relators {
            if let Some((g, _)) = w.iter().find(|(g, _)| *g >= self.generators.len()) {
                return Err(CatalogError::Invalid(format!("relator uses unknown generator index {g}")));
            }
        }
        Ok(())
    }

    /// Parses `"a, b | a b a^-1 b^-1, a^2"`: comma-separated generator
    /// names, then comma-separated relators whose syllables are `x` or
    /// `x^n`.
    pub fn parse(s: &str) -> Result<Self> {
        let (gens, rels) = s.split_once('|').unwrap_or((s, ""));
        let generators: Vec<String> =
            gens.split(',').map(str::trim).filter(|g| !g.is_empty()).map(String::from).collect();
        let mut relators = Vec::new();
        for r in rels.split(',').map(str::trim).filter(|r| !r.is_empty()) {
            let mut word = Vec::new();
            for syl in r.split_whitespace() {
                let (name, exp) = match syl.split_once('^') {
                    Some((n, e)) => {
                        (n, e.parse::<i64>().map_err(|_| CatalogError::Invalid(format!("bad exponent in {syl:?}")))?)
                    }
                    None => (syl, 1),
                };
                let idx = generators
                    .iter()
                    .position(|g| g == name)
                    .ok_or_else(|| CatalogError::Invalid(format!("unknown generator {name:?}")))?;
                word.push((idx, exp));
            }
            relators.push(word);
        }
        GroupPresentation::new(generators, relators)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Exponent-sum vector of a word.
    pub fn exponent_sums(&self, w: &Word) -> Vec<i64> {
        let mut v = alloc::vec![0; self.rank()];
        for (g, e) in w {
            v[*g] += e;
        }
        v
    }

    /// The relation matrix (generators × relators) of exponent sums.
    pub fn relation_matrix(&self) -> IntMatrix {
        let g = self.rank();
        IntMatrix::from_fn(g, self.relators.len(), |i, j| self.exponent_sums(&self.relators[j])[i].into())
    }

    /// `G^ab = Z^g / (relation columns)`.
    pub fn abelianization(&self) -> H1Data {
        H1Data { generators: self.rank(), relations: self.relation_matrix() }
    }
}
