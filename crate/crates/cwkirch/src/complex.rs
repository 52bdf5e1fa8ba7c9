//! Finite CW complexes encoded as integer boundary matrices.
//!
//! A complex of dimension `d` is the data of cell counts `n_0..n_d`, boundary
//! matrices `D_k` of shape `n_{k-1} x n_k` for `k = 1..d`, and optional
//! positive rational weights per cell. Cells are identified by
//! `(degree, index)` in a fixed global ordering; orientations are whatever
//! the input matrices encode.

use num_traits::{One, Signed, Zero};

use crate::linalg::IntMatrix;
use crate::{Error, Rat, Result};

/// A finite CW complex given by its integer boundary matrices.
///
/// Immutable after construction; all operations return new values.
#[derive(Clone, Debug)]
pub struct CellComplex {
    name: String,
    counts: Vec<usize>,
    boundaries: Vec<IntMatrix>,
    weights: Vec<Option<Vec<Rat>>>,
}

impl CellComplex {
    /// Builds a complex from cell counts and boundary matrices `D_1..D_d`.
    ///
    /// The data is stored as given; use [`CellComplex::validate`] to check
    /// the chain-complex invariants.
    pub fn new(counts: Vec<usize>, boundaries: Vec<IntMatrix>) -> Self {
        assert!(!counts.is_empty(), "a complex needs at least degree 0");
        assert_eq!(
            boundaries.len(),
            counts.len() - 1,
            "expected one boundary matrix per degree 1..=d"
        );
        let weights = vec![None; counts.len()];
        CellComplex {
            name: String::new(),
            counts,
            boundaries,
            weights,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces the weights of one degree; `None` means unweighted (all 1).
    pub fn with_weights(mut self, degree: usize, weights: Option<Vec<Rat>>) -> Self {
        assert!(degree <= self.dim());
        self.weights[degree] = weights;
        self
    }

    /// Convenience for replacing the top-degree weights.
    pub fn with_top_weights(self, weights: Vec<Rat>) -> Self {
        let d = self.dim();
        self.with_weights(d, Some(weights))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn cell_count(&self, degree: usize) -> usize {
        self.counts.get(degree).copied().unwrap_or(0)
    }

    /// The boundary matrix `D_k: C_k -> C_{k-1}` for `1 <= k <= dim`.
    pub fn boundary(&self, k: usize) -> &IntMatrix {
        assert!(k >= 1 && k <= self.dim(), "no boundary matrix D_{k}");
        &self.boundaries[k - 1]
    }

    /// Raw per-degree weights, if any were assigned.
    pub fn raw_weights(&self, degree: usize) -> Option<&Vec<Rat>> {
        self.weights.get(degree).and_then(|w| w.as_ref())
    }

    /// Weights of a degree, materializing the all-ones default.
    pub fn degree_weights(&self, degree: usize) -> Vec<Rat> {
        match self.raw_weights(degree) {
            Some(w) => w.clone(),
            None => vec![Rat::one(); self.cell_count(degree)],
        }
    }

    /// Top-degree weights (the resistances of the d-cells).
    pub fn top_weights(&self) -> Vec<Rat> {
        self.degree_weights(self.dim())
    }

    /// Checks every structural invariant and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let d = self.dim();
        if self.counts[0] == 0 {
            failures.push(ValidationFailure::NoVertices);
        }
        let mut shapes_ok = vec![true; d + 1];
        for k in 1..=d {
            let m = &self.boundaries[k - 1];
            let expected = (self.counts[k - 1], self.counts[k]);
            if (m.rows(), m.cols()) != expected {
                failures.push(ValidationFailure::BoundaryShape {
                    degree: k,
                    expected,
                    found: (m.rows(), m.cols()),
                });
                shapes_ok[k] = false;
            }
        }
        for k in 2..=d {
            if !(shapes_ok[k - 1] && shapes_ok[k]) {
                continue;
            }
            let prod = self.boundaries[k - 2].mul(&self.boundaries[k - 1]);
            for i in 0..prod.rows() {
                for j in 0..prod.cols() {
                    if !prod[(i, j)].is_zero() {
                        failures.push(ValidationFailure::BoundaryComposition {
                            degree: k,
                            row: i,
                            col: j,
                        });
                    }
                }
            }
        }
        for (degree, w) in self.weights.iter().enumerate() {
            if let Some(w) = w {
                if w.len() != self.counts[degree] {
                    failures.push(ValidationFailure::WeightCount {
                        degree,
                        expected: self.counts[degree],
                        found: w.len(),
                    });
                } else {
                    for (index, r) in w.iter().enumerate() {
                        if !r.is_positive() {
                            failures.push(ValidationFailure::NonpositiveWeight { degree, index });
                        }
                    }
                }
            }
        }
        if d == 0 {
            if self.counts[0] != 1 {
                failures.push(ValidationFailure::Disconnected {
                    rank_d1: 0,
                    vertices: self.counts[0],
                });
            }
        } else if shapes_ok[1] && self.counts[0] > 0 {
            let rank = self.boundaries[0].rank();
            if rank + 1 != self.counts[0] {
                failures.push(ValidationFailure::Disconnected {
                    rank_d1: rank,
                    vertices: self.counts[0],
                });
            }
        }
        ValidationReport { failures }
    }

    /// The k-skeleton: drops all cells above degree `k`, keeping weights.
    pub fn skeleton(&self, k: usize) -> Result<CellComplex> {
        if k > self.dim() {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                dim: self.dim(),
            });
        }
        Ok(CellComplex {
            name: self.name.clone(),
            counts: self.counts[..=k].to_vec(),
            boundaries: self.boundaries[..k].to_vec(),
            weights: self.weights[..=k].to_vec(),
        })
    }

    /// Restricts the top degree to the cells in `spec`, keeping the whole
    /// lower skeleton; `D_d` is column-restricted and weights follow.
    pub fn restrict_top(&self, spec: &SubcomplexSpec) -> Result<CellComplex> {
        let d = self.dim();
        assert!(d >= 1, "restrict_top needs dimension >= 1");
        spec.check_range(self.counts[d], d)?;
        let cols: Vec<usize> = spec.iter().collect();
        let mut boundaries = self.boundaries.clone();
        boundaries[d - 1] = self.boundaries[d - 1].select_columns(&cols);
        let mut counts = self.counts.clone();
        counts[d] = cols.len();
        let mut weights = self.weights.clone();
        weights[d] = self.weights[d]
            .as_ref()
            .map(|w| cols.iter().map(|&j| w[j].clone()).collect());
        Ok(CellComplex {
            name: self.name.clone(),
            counts,
            boundaries,
            weights,
        })
    }

    /// Betti number `beta_k = n_k - rank D_k - rank D_{k+1}`.
    pub fn betti(&self, k: usize) -> Result<usize> {
        if k > self.dim() {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                dim: self.dim(),
            });
        }
        let rank_k = if k >= 1 { self.boundary(k).rank() } else { 0 };
        let rank_k1 = if k < self.dim() {
            self.boundary(k + 1).rank()
        } else {
            0
        };
        Ok(self.counts[k] - rank_k - rank_k1)
    }

    /// Euler characteristic as the alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

/// A subset of top-dimensional cells defining a subcomplex that keeps the
/// entire lower skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcomplexSpec {
    cells: std::collections::BTreeSet<usize>,
}

impl SubcomplexSpec {
    pub fn new(cells: impl IntoIterator<Item = usize>) -> Self {
        SubcomplexSpec {
            cells: cells.into_iter().collect(),
        }
    }

    pub fn all(count: usize) -> Self {
        Self::new(0..count)
    }

    pub fn empty() -> Self {
        Self::new(std::iter::empty())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.cells.contains(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().copied()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.cells.iter().copied().collect()
    }

    pub fn insert(&self, index: usize) -> Self {
        let mut cells = self.cells.clone();
        cells.insert(index);
        SubcomplexSpec { cells }
    }

    pub fn remove(&self, index: usize) -> Self {
        let mut cells = self.cells.clone();
        cells.remove(&index);
        SubcomplexSpec { cells }
    }

    fn check_range(&self, count: usize, degree: usize) -> Result<()> {
        if let Some(&max) = self.cells.iter().next_back() {
            if max >= count {
                return Err(Error::CellIndexOutOfRange {
                    degree,
                    index: max,
                    count,
                });
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for SubcomplexSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.cells.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A chain with rational coordinates in a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVector {
    pub degree: usize,
    pub coords: Vec<Rat>,
}

impl ChainVector {
    pub fn zero(degree: usize, len: usize) -> Self {
        ChainVector {
            degree,
            coords: vec![Rat::zero(); len],
        }
    }

    /// The chain `1 * cell` for a single cell.
    pub fn basis(degree: usize, len: usize, index: usize) -> Self {
        let mut v = Self::zero(degree, len);
        v.coords[index] = Rat::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn check_len(&self, c: &CellComplex) -> Result<()> {
        let expected = c.cell_count(self.degree);
        if self.coords.len() != expected {
            return Err(Error::ChainLength {
                expected,
                found: self.coords.len(),
            });
        }
        Ok(())
    }
}

/// Outcome of [`CellComplex::validate`]: every violated invariant, if any.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed() {
            write!(f, "valid")
        } else {
            for failure in &self.failures {
                writeln!(f, "{failure}")?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    NoVertices,
    BoundaryShape {
        degree: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// `(D_{degree-1} D_degree)[row, col] != 0`: the pair of a
    /// `(degree-2)`-cell and a `degree`-cell witnessing `dd != 0`.
    BoundaryComposition {
        degree: usize,
        row: usize,
        col: usize,
    },
    NonpositiveWeight {
        degree: usize,
        index: usize,
    },
    WeightCount {
        degree: usize,
        expected: usize,
        found: usize,
    },
    Disconnected {
        rank_d1: usize,
        vertices: usize,
    },
}

impl std::fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationFailure::NoVertices => write!(f, "complex has no vertices"),
            ValidationFailure::BoundaryShape {
                degree,
                expected,
                found,
            } => write!(
                f,
                "D_{degree} has shape {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            ValidationFailure::BoundaryComposition { degree, row, col } => write!(
                f,
                "D_{} * D_{} is nonzero at cell pair (degree {} cell {}, degree {} cell {})",
                degree - 1,
                degree,
                degree - 2,
                row,
                degree,
                col
            ),
            ValidationFailure::NonpositiveWeight { degree, index } => {
                write!(f, "nonpositive weight on degree {degree} cell {index}")
            }
            ValidationFailure::WeightCount {
                degree,
                expected,
                found,
            } => write!(
                f,
                "degree {degree} has {found} weights, expected {expected}"
            ),
            ValidationFailure::Disconnected { rank_d1, vertices } => write!(
                f,
                "complex is disconnected: rank D_1 = {rank_d1} with {vertices} vertices"
            ),
        }
    }
}
