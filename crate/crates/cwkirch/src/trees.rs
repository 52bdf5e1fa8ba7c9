//! Higher-dimensional spanning trees.
//!
//! A spanning tree of a d-dimensional complex is a subcomplex containing the
//! whole (d-1)-skeleton whose top cells index a maximal Q-independent set of
//! columns of `D_d`. Each tree carries the torsion order `theta_T` of its
//! top-minus-one homology, the fundamental-cycle operator `tbar`, and the
//! cycle coefficients `t_b` of the cells outside the tree.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::complex::{CellComplex, SubcomplexSpec};
use crate::linalg::{kernel_lattice_basis, IntMatrix, RatMatrix};
use crate::{Error, Int, Rat, Result};

/// A spanning tree with its cached invariants.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    top_cells: SubcomplexSpec,
    theta: Int,
    t_values: BTreeMap<usize, Int>,
    tbar: RatMatrix,
}

impl SpanningTree {
    /// Cells of the tree in the top degree.
    pub fn top_cells(&self) -> &SubcomplexSpec {
        &self.top_cells
    }

    /// Order of the torsion subgroup of `H_{d-1}(T; Z)`.
    pub fn theta(&self) -> &Int {
        &self.theta
    }

    /// The nonzero cycle coefficient `t_b` for each top cell `b` outside the
    /// tree; `|t_b|` is the order of `[∂b]` in `H_{d-1}(T; Z)`.
    pub fn t_values(&self) -> &BTreeMap<usize, Int> {
        &self.t_values
    }

    /// The operator sending each top cell outside the tree to its normalized
    /// fundamental cycle, and tree cells to zero. Columns indexed by d-cells.
    pub fn tbar(&self) -> &RatMatrix {
        &self.tbar
    }

    /// Tree weight `theta_T^2 * prod_{b in T} r_b^{-1}` for resistances `r`.
    pub fn weight_with(&self, r: &[Rat]) -> Rat {
        let theta2 = Rat::from(&self.theta * &self.theta);
        self.top_cells.iter().fold(theta2, |acc, b| acc / &r[b])
    }
}

/// Whether some real d-cycle carries the cell `b` with nonzero coefficient.
///
/// Equivalent to: deleting column `b` from `D_d` does not drop the rank.
pub fn is_essential(c: &CellComplex, b: usize) -> Result<bool> {
    let d = c.dim();
    assert!(d >= 1, "essential cells need dimension >= 1");
    let n = c.cell_count(d);
    if b >= n {
        return Err(Error::CellIndexOutOfRange {
            degree: d,
            index: b,
            count: n,
        });
    }
    let dd = c.boundary(d);
    let without: Vec<usize> = (0..n).filter(|&j| j != b).collect();
    Ok(dd.select_columns(&without).rank() == dd.rank())
}

/// Greedy spanning-tree construction: repeatedly remove the first essential
/// cell until the top Betti number vanishes.
pub fn find_spanning_tree(c: &CellComplex) -> Result<SpanningTree> {
    let d = c.dim();
    assert!(d >= 1, "spanning trees need dimension >= 1");
    let dd = c.boundary(d);
    let target_rank = dd.rank();
    let mut kept: Vec<usize> = (0..c.cell_count(d)).collect();
    let mut removed = 0usize;
    while kept.len() > target_rank {
        let mut found = None;
        for (pos, _) in kept.iter().enumerate() {
            let without: Vec<usize> = kept
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &j)| j)
                .collect();
            if dd.select_columns(&without).rank() == target_rank {
                found = Some(pos);
                break;
            }
        }
        let pos = found.expect("an essential cell exists while beta_d > 0");
        kept.remove(pos);
        removed += 1;
    }
    debug_assert_eq!(removed, c.cell_count(d) - target_rank);
    SpanningTree::build(c, &SubcomplexSpec::new(kept))
}

/// Enumerates the cell sets of all spanning trees in lexicographic order.
///
/// Depth-first over columns of `D_d` with exact rank pruning: a partial
/// selection is extended only while its columns stay independent.
pub fn enumerate_tree_cells(c: &CellComplex) -> Vec<SubcomplexSpec> {
    let d = c.dim();
    assert!(d >= 1, "spanning trees need dimension >= 1");
    let dd = c.boundary(d).to_rational();
    let n = dd.cols();
    let target = c.boundary(d).rank();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    // reduced pivot stack: (pivot row, reduced column)
    let mut pivots: Vec<(usize, Vec<Rat>)> = Vec::new();
    dfs(&dd, n, target, 0, &mut chosen, &mut pivots, &mut out);
    out
}

fn dfs(
    dd: &RatMatrix,
    n: usize,
    target: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    pivots: &mut Vec<(usize, Vec<Rat>)>,
    out: &mut Vec<SubcomplexSpec>,
) {
    if chosen.len() == target {
        out.push(SubcomplexSpec::new(chosen.iter().copied()));
        return;
    }
    let needed = target - chosen.len();
    for j in start..n {
        if n - j < needed {
            break;
        }
        let mut col = dd.column(j);
        for (prow, pcol) in pivots.iter() {
            if !col[*prow].is_zero() {
                let factor = &col[*prow] / &pcol[*prow];
                for i in 0..col.len() {
                    let v = &col[i] - &(&factor * &pcol[i]);
                    col[i] = v;
                }
            }
        }
        let Some(prow) = col.iter().position(|x| !x.is_zero()) else {
            continue; // dependent on the current partial set
        };
        pivots.push((prow, col));
        chosen.push(j);
        dfs(dd, n, target, j + 1, chosen, pivots, out);
        chosen.pop();
        pivots.pop();
    }
}

/// Enumerates all spanning trees with their cached invariants, in
/// lexicographic order of their cell sets.
pub fn enumerate_spanning_trees(c: &CellComplex) -> Vec<SpanningTree> {
    enumerate_tree_cells(c)
        .into_iter()
        .map(|cells| SpanningTree::build(c, &cells).expect("enumerated set is a tree"))
        .collect()
}

/// Torsion order of `H_{d-1}(T; Z)` for the subcomplex on the given cells.
///
/// Errors unless the cells define a spanning tree.
pub fn tree_theta(c: &CellComplex, cells: &SubcomplexSpec) -> Result<Int> {
    let restricted = check_tree(c, cells)?;
    Ok(crate::linalg::torsion_order_cokernel(&restricted))
}

/// Weight `theta_T^2 * prod_{b in T} r_b^{-1}` under the complex's own
/// top-degree weights (all 1 when unweighted).
pub fn tree_weight(c: &CellComplex, tree: &SpanningTree) -> Rat {
    tree.weight_with(&c.top_weights())
}

/// The fundamental-cycle operator of a tree together with the `t_b` values.
pub fn tbar_matrix(
    c: &CellComplex,
    cells: &SubcomplexSpec,
) -> Result<(RatMatrix, BTreeMap<usize, Int>)> {
    let tree = SpanningTree::build(c, cells)?;
    Ok((tree.tbar, tree.t_values))
}

impl SpanningTree {
    /// Validates the cell set and computes theta, the `t_b`, and `tbar`.
    pub fn build(c: &CellComplex, cells: &SubcomplexSpec) -> Result<SpanningTree> {
        let restricted = check_tree(c, cells)?;
        let theta = crate::linalg::torsion_order_cokernel(&restricted);
        let d = c.dim();
        let n = c.cell_count(d);
        let dd = c.boundary(d);
        let tree_cols: Vec<usize> = cells.iter().collect();
        let mut tbar = RatMatrix::zero(n, n);
        let mut t_values = BTreeMap::new();
        for b in 0..n {
            if cells.contains(b) {
                continue;
            }
            let mut cols = tree_cols.clone();
            cols.push(b);
            cols.sort_unstable();
            let pos_b = cols.iter().position(|&j| j == b).unwrap();
            let kernel = kernel_lattice_basis(&dd.select_columns(&cols));
            assert_eq!(kernel.rank(), 1, "adding one cell to a tree yields Z");
            let mut gen = kernel.vectors()[0].clone();
            // normalize: first nonzero coordinate positive
            if let Some(first) = gen.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    for x in gen.iter_mut() {
                        *x = -x.clone();
                    }
                }
            }
            let t_b = gen[pos_b].clone();
            assert!(!t_b.is_zero(), "generator must carry the added cell");
            for (pos, &j) in cols.iter().enumerate() {
                tbar[(j, b)] = Rat::new(gen[pos].clone(), t_b.clone());
            }
            t_values.insert(b, t_b);
        }
        Ok(SpanningTree {
            top_cells: cells.clone(),
            theta,
            t_values,
            tbar,
        })
    }
}

/// Checks the spanning-tree conditions and returns the restricted `D_d`.
fn check_tree(c: &CellComplex, cells: &SubcomplexSpec) -> Result<IntMatrix> {
    let d = c.dim();
    assert!(d >= 1, "spanning trees need dimension >= 1");
    let n = c.cell_count(d);
    if let Some(max) = cells.iter().max() {
        if max >= n {
            return Err(Error::CellIndexOutOfRange {
                degree: d,
                index: max,
                count: n,
            });
        }
    }
    let dd = c.boundary(d);
    let rank = dd.rank();
    if cells.len() != rank {
        return Err(Error::NotSpanningTree {
            reason: format!("{} cells given, rank of D_d is {rank}", cells.len()),
        });
    }
    let restricted = dd.select_columns(&cells.indices());
    if restricted.rank() != rank {
        return Err(Error::NotSpanningTree {
            reason: "restricted columns are dependent".to_string(),
        });
    }
    Ok(restricted)
}
