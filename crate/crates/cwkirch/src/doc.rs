//! Structured text documents for complexes and network problems.
//!
//! Documents are JSON with a fixed canonical layout. Boundary matrices are
//! sparse triplet lists `[degree, row, col, value]` so files stay
//! hand-auditable; rationals serialize as lowest-terms `"p/q"` strings
//! (plain `"n"` for integers). Parsing and serialization round-trip exactly
//! on canonicalized documents.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::complex::{CellComplex, ChainVector, SubcomplexSpec};
use crate::linalg::{IntMatrix, LatticeBasis};
use crate::matrix_tree::SubgroupSpec;
use crate::torsion::TruncationData;
use crate::{parse_rat, Error, Int, Rat, Result};

/// On-disk form of a cell complex.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexDocument {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub dimension: usize,
    pub cell_counts: Vec<usize>,
    /// Sparse entries `[degree, row, col, value]`, one per nonzero.
    pub boundaries: Vec<[i64; 4]>,
    /// Per-degree weight lists as exact rational strings.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weights: BTreeMap<usize, Vec<String>>,
    /// Optional display names per degree.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cell_names: BTreeMap<usize, Vec<String>>,
}

impl ComplexDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(format!("complex document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Converts to a [`CellComplex`], checking shape coherence of the raw
    /// fields. The chain-complex invariants themselves are the business of
    /// [`CellComplex::validate`].
    pub fn to_complex(&self) -> Result<CellComplex> {
        if self.cell_counts.len() != self.dimension + 1 {
            return Err(Error::Document(format!(
                "cell_counts has {} entries for dimension {}",
                self.cell_counts.len(),
                self.dimension
            )));
        }
        let mut boundaries = Vec::with_capacity(self.dimension);
        for k in 1..=self.dimension {
            boundaries.push(IntMatrix::zero(
                self.cell_counts[k - 1],
                self.cell_counts[k],
            ));
        }
        for &[k, row, col, value] in &self.boundaries {
            let k = usize::try_from(k)
                .ok()
                .filter(|k| (1..=self.dimension).contains(k))
                .ok_or_else(|| Error::Document(format!("boundary degree {k} out of range")))?;
            let (rows, cols) = (self.cell_counts[k - 1], self.cell_counts[k]);
            let (row, col) = (
                usize::try_from(row)
                    .ok()
                    .filter(|r| *r < rows)
                    .ok_or_else(|| Error::Document(format!("row {row} out of range in D_{k}")))?,
                usize::try_from(col)
                    .ok()
                    .filter(|c| *c < cols)
                    .ok_or_else(|| Error::Document(format!("col {col} out of range in D_{k}")))?,
            );
            boundaries[k - 1][(row, col)] = Int::from(value);
        }
        let mut c =
            CellComplex::new(self.cell_counts.clone(), boundaries).with_name(self.name.clone());
        for (&degree, strings) in &self.weights {
            if degree > self.dimension {
                return Err(Error::Document(format!(
                    "weights given for degree {degree} beyond dimension"
                )));
            }
            let parsed: Result<Vec<Rat>> = strings.iter().map(|s| parse_rat(s)).collect();
            c = c.with_weights(degree, Some(parsed?));
        }
        Ok(c)
    }

    /// Canonical document for a complex: triplets sorted by
    /// `(degree, col, row)`, weights in lowest terms.
    pub fn from_complex(c: &CellComplex) -> Self {
        let mut boundaries = Vec::new();
        for k in 1..=c.dim() {
            let m = c.boundary(k);
            for col in 0..m.cols() {
                for row in 0..m.rows() {
                    if !m[(row, col)].is_zero() {
                        let value: i64 = m[(row, col)]
                            .to_string()
                            .parse()
                            .expect("corpus-scale entries fit in i64");
                        boundaries.push([k as i64, row as i64, col as i64, value]);
                    }
                }
            }
        }
        let mut weights = BTreeMap::new();
        for degree in 0..=c.dim() {
            if let Some(w) = c.raw_weights(degree) {
                weights.insert(degree, w.iter().map(|r| r.to_string()).collect());
            }
        }
        ComplexDocument {
            name: c.name().to_string(),
            dimension: c.dim(),
            cell_counts: c.cell_counts().to_vec(),
            boundaries,
            weights,
            cell_names: BTreeMap::new(),
        }
    }
}

/// Sparse rational chain in one degree.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct SparseChain {
    pub degree: usize,
    /// `[index, value]` pairs.
    #[serde(default)]
    pub entries: Vec<(usize, String)>,
}

impl SparseChain {
    pub fn to_chain(&self, c: &CellComplex) -> Result<ChainVector> {
        let len = c.cell_count(self.degree);
        let mut v = ChainVector::zero(self.degree, len);
        for (index, value) in &self.entries {
            if *index >= len {
                return Err(Error::Document(format!(
                    "chain index {index} out of range in degree {}",
                    self.degree
                )));
            }
            v.coords[*index] = parse_rat(value)?;
        }
        Ok(v)
    }

    pub fn from_chain(v: &ChainVector) -> Self {
        SparseChain {
            degree: v.degree,
            entries: v
                .coords
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.to_string()))
                .collect(),
        }
    }
}

/// On-disk form of a network problem and optional verification inputs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProblemDocument {
    /// Path of the complex document, relative to this file.
    pub complex: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<SparseChain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<SparseChain>,
    /// Basis vectors of a subgroup of the (d-1)-chains, as integer rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<Vec<i64>>>,
    /// Per-degree tree and truncation cell sets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TruncationDocument {
    pub trees: Vec<Vec<usize>>,
    pub vees: Vec<Vec<usize>>,
}

impl ProblemDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(format!("problem document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn p_chain(&self, c: &CellComplex) -> Result<ChainVector> {
        match &self.p {
            Some(s) => s.to_chain(c),
            None => Ok(ChainVector::zero(c.dim() - 1, c.cell_count(c.dim() - 1))),
        }
    }

    pub fn q_chain(&self, c: &CellComplex) -> Result<ChainVector> {
        match &self.q {
            Some(s) => s.to_chain(c),
            None => Ok(ChainVector::zero(c.dim(), c.cell_count(c.dim()))),
        }
    }

    pub fn subgroup_spec(&self, c: &CellComplex) -> Result<Option<SubgroupSpec>> {
        let Some(rows) = &self.subgroup else {
            return Ok(None);
        };
        let n = c.cell_count(c.dim() - 1);
        let vectors: Vec<Vec<Int>> = rows
            .iter()
            .map(|row| {
                if row.len() != n {
                    return Err(Error::Document(format!(
                        "subgroup vector has {} entries, expected {n}",
                        row.len()
                    )));
                }
                Ok(row.iter().map(|&x| Int::from(x)).collect())
            })
            .collect::<Result<_>>()?;
        let basis = LatticeBasis::new(n, vectors)?;
        Ok(Some(SubgroupSpec::new(basis)))
    }

    pub fn truncation_data(&self) -> Option<TruncationData> {
        self.truncation.as_ref().map(|t| TruncationData {
            trees: t
                .trees
                .iter()
                .map(|v| SubcomplexSpec::new(v.iter().copied()))
                .collect(),
            vees: t
                .vees
                .iter()
                .map(|v| SubcomplexSpec::new(v.iter().copied()))
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn round_trip_on_corpus() {
        for c in corpus::all() {
            let doc = ComplexDocument::from_complex(&c);
            let text = doc.to_json();
            let parsed = ComplexDocument::parse(&text).unwrap();
            assert_eq!(doc, parsed, "{}", c.name());
            let again = ComplexDocument::from_complex(&parsed.to_complex().unwrap());
            assert_eq!(doc, again, "{}", c.name());
        }
    }

    #[test]
    fn round_trip_with_weights() {
        let theta = corpus::theta().with_top_weights(vec![
            Rat::new(Int::from(1), Int::from(2)),
            Rat::from(Int::from(3)),
            Rat::new(Int::from(7), Int::from(5)),
        ]);
        let doc = ComplexDocument::from_complex(&theta);
        assert_eq!(doc.weights[&1], vec!["1/2", "3", "7/5"]);
        let back = doc.to_complex().unwrap();
        assert_eq!(back.top_weights(), theta.top_weights());
    }

    #[test]
    fn parse_errors_carry_context() {
        let err = ComplexDocument::parse("{ not json").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("line"), "{text}");

        let doc = r#"{"dimension": 1, "cell_counts": [2, 1], "boundaries": [[1, 5, 0, -1]]}"#;
        let err = ComplexDocument::parse(doc)
            .unwrap()
            .to_complex()
            .unwrap_err();
        assert!(err.to_string().contains("row 5"), "{err}");
    }

    #[test]
    fn problem_document_parses() {
        let text = r#"{
            "complex": "theta.json",
            "p": {"degree": 0, "entries": [[0, "-1"], [1, "1"]]},
            "q": {"degree": 1, "entries": []}
        }"#;
        let doc = ProblemDocument::parse(text).unwrap();
        let theta = corpus::theta();
        let p = doc.p_chain(&theta).unwrap();
        assert_eq!(p.coords[0], Rat::from(Int::from(-1)));
        let q = doc.q_chain(&theta).unwrap();
        assert!(q.is_zero());
        let round = ProblemDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(doc, round);
    }
}
