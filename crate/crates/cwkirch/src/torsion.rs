//! Squared Reidemeister torsion of a finite connected CW complex, computed
//! four independent ways:
//!
//! 1. [`milnor_torsion_squared`]: the alternating product of change-of-basis
//!    determinants for chains split into boundaries, homology lifts, and
//!    lifted lower boundaries;
//! 2. [`torsion_squared_laplacian`]: alternating determinants of the
//!    degree-wise weighted Laplacians times cell-weight and homology-covolume
//!    factors;
//! 3. [`torsion_squared_tree`]: spanning-tree sums `delta_k * sum theta_T^2`
//!    over the skeleta (unweighted form);
//! 4. [`torsion_squared_truncation`]: torsion orders and projection data of
//!    a spanning tree and homology truncation in each degree.
//!
//! Only the square of the torsion is ever produced; it is a positive rational
//! and all four methods must agree exactly.

use num_traits::{One, Signed, Zero};

use crate::complex::{CellComplex, SubcomplexSpec};
use crate::linalg::{
    dot_weighted, gram_determinant, image_lattice_basis, kernel_lattice_basis,
    torsion_order_cokernel, IntMatrix, LatticeBasis, RatMatrix,
};
use crate::matrix_tree::restricted_laplacian;
use crate::trees::{enumerate_tree_cells, find_spanning_tree, tree_theta, SpanningTree};
use crate::{Error, Int, Rat, Result};

/// Integer cycle representatives whose classes form a basis of the
/// torsion-free image of integral homology, one matrix per degree
/// (`n_k` rows, `beta_k` columns).
#[derive(Clone, Debug)]
pub struct CombinatorialBasis {
    per_degree: Vec<IntMatrix>,
}

impl CombinatorialBasis {
    pub fn new(per_degree: Vec<IntMatrix>) -> Self {
        CombinatorialBasis { per_degree }
    }

    pub fn degree(&self, k: usize) -> &IntMatrix {
        &self.per_degree[k]
    }

    /// Cycle columns of one degree as rational vectors.
    fn columns(&self, k: usize) -> Vec<Vec<Rat>> {
        let m = &self.per_degree[k];
        (0..m.cols())
            .map(|j| m.column(j).iter().map(|x| Rat::from(x.clone())).collect())
            .collect()
    }
}

/// Positive rational weights on every cell of every degree.
#[derive(Clone, Debug)]
pub struct DegreeWeights {
    per_degree: Vec<Vec<Rat>>,
}

impl DegreeWeights {
    pub fn ones(c: &CellComplex) -> Self {
        DegreeWeights {
            per_degree: (0..=c.dim())
                .map(|k| vec![Rat::one(); c.cell_count(k)])
                .collect(),
        }
    }

    /// The complex's own stored weights (all 1 where absent).
    pub fn of_complex(c: &CellComplex) -> Self {
        DegreeWeights {
            per_degree: (0..=c.dim()).map(|k| c.degree_weights(k)).collect(),
        }
    }

    pub fn validated(c: &CellComplex, per_degree: Vec<Vec<Rat>>) -> Result<Self> {
        if per_degree.len() != c.dim() + 1 {
            return Err(Error::WeightCount {
                degree: per_degree.len(),
                expected: c.dim() + 1,
                found: per_degree.len(),
            });
        }
        for (degree, w) in per_degree.iter().enumerate() {
            if w.len() != c.cell_count(degree) {
                return Err(Error::WeightCount {
                    degree,
                    expected: c.cell_count(degree),
                    found: w.len(),
                });
            }
            for (index, r) in w.iter().enumerate() {
                if !r.is_positive() {
                    return Err(Error::NonpositiveWeight { degree, index });
                }
            }
        }
        Ok(DegreeWeights { per_degree })
    }

    pub fn degree(&self, k: usize) -> &[Rat] {
        &self.per_degree[k]
    }
}

/// `D_k`, substituting the empty matrix of the right shape at the ends.
fn boundary_or_zero(c: &CellComplex, k: usize) -> IntMatrix {
    if k == 0 {
        IntMatrix::zero(0, c.cell_count(0))
    } else if k > c.dim() {
        IntMatrix::zero(c.cell_count(c.dim()), 0)
    } else {
        c.boundary(k).clone()
    }
}

/// Homology lattice machinery for one degree: the integer cycle lattice, the
/// boundary sublattice, and Smith-form coordinates splitting off the free
/// quotient.
struct HomologyDegree {
    kernel: LatticeBasis,
    rank_b: usize,
    beta: usize,
    /// Unimodular transform putting the boundary sublattice into Smith
    /// coordinates inside the cycle lattice.
    u: IntMatrix,
    u_inv: IntMatrix,
}

impl HomologyDegree {
    fn new(c: &CellComplex, k: usize) -> Self {
        let kernel = kernel_lattice_basis(&boundary_or_zero(c, k));
        let image = image_lattice_basis(&boundary_or_zero(c, k + 1));
        let z = kernel.rank();
        let rank_b = image.rank();
        let beta = z - rank_b;
        if z == 0 {
            return HomologyDegree {
                kernel,
                rank_b,
                beta,
                u: IntMatrix::identity(0),
                u_inv: IntMatrix::identity(0),
            };
        }
        // coordinates of the boundary basis inside the cycle lattice
        let coords = kernel
            .to_rational()
            .solve_matrix(&image.to_rational())
            .expect("boundaries are cycles");
        let mut m = IntMatrix::zero(z, rank_b);
        for i in 0..z {
            for j in 0..rank_b {
                debug_assert!(coords[(i, j)].is_integer(), "cycle basis spans all cycles");
                m[(i, j)] = coords[(i, j)].to_integer();
            }
        }
        let s = crate::linalg::snf(&m);
        let u_inv_rat =
            s.u.to_rational()
                .inverse()
                .expect("Smith transform is unimodular");
        let mut u_inv = IntMatrix::zero(z, z);
        for i in 0..z {
            for j in 0..z {
                debug_assert!(u_inv_rat[(i, j)].is_integer());
                u_inv[(i, j)] = u_inv_rat[(i, j)].to_integer();
            }
        }
        HomologyDegree {
            kernel,
            rank_b,
            beta,
            u: s.u,
            u_inv,
        }
    }

    /// Cycle representatives whose classes freely generate the torsion-free
    /// image of integral homology in this degree.
    fn free_basis_cycles(&self) -> IntMatrix {
        let n = self.kernel.ambient_dim();
        let mut out = IntMatrix::zero(n, self.beta);
        let kmat = self.kernel.matrix();
        for j in 0..self.beta {
            let w = self.u_inv.column(self.rank_b + j);
            let cycle = kmat.mul_vec(&w);
            for i in 0..n {
                out[(i, j)] = cycle[i].clone();
            }
        }
        out
    }

    /// Coordinates of the class of an integer cycle in the free-quotient
    /// basis; `None` when the vector is not an integral cycle here.
    fn class_coords(&self, cycle: &[Int]) -> Option<Vec<Int>> {
        let target: Vec<Rat> = cycle.iter().map(|x| Rat::from(x.clone())).collect();
        let coords = self.kernel.to_rational().solve(&target)?;
        let mut int_coords = Vec::with_capacity(coords.len());
        for x in &coords {
            if !x.is_integer() {
                return None;
            }
            int_coords.push(x.to_integer());
        }
        let transformed = self.u.mul_vec(&int_coords);
        Some(transformed[self.rank_b..].to_vec())
    }
}

/// Cycle representatives of the torsion-free homology image in each degree,
/// computed through Smith coordinates of the boundary-in-cycle inclusion.
pub fn default_combinatorial_basis(c: &CellComplex) -> CombinatorialBasis {
    let per_degree = (0..=c.dim())
        .map(|k| HomologyDegree::new(c, k).free_basis_cycles())
        .collect();
    CombinatorialBasis { per_degree }
}

/// Checks that `h` consists of integral cycles with independent classes that
/// generate the torsion-free homology image.
pub fn validate_combinatorial_basis(c: &CellComplex, h: &CombinatorialBasis) -> Result<()> {
    if h.per_degree.len() != c.dim() + 1 {
        return Err(Error::DegenerateBasis {
            reason: format!(
                "{} degrees given, expected {}",
                h.per_degree.len(),
                c.dim() + 1
            ),
        });
    }
    for k in 0..=c.dim() {
        let hd = HomologyDegree::new(c, k);
        let m = h.degree(k);
        if m.cols() != hd.beta || m.rows() != c.cell_count(k) {
            return Err(Error::DegenerateBasis {
                reason: format!("degree {k}: expected {} cycles", hd.beta),
            });
        }
        if hd.beta == 0 {
            continue;
        }
        let dk = boundary_or_zero(c, k).to_rational();
        let mut q = IntMatrix::zero(hd.beta, hd.beta);
        for j in 0..m.cols() {
            let col = m.column(j);
            let colq: Vec<Rat> = col.iter().map(|x| Rat::from(x.clone())).collect();
            if !dk.mul_vec(&colq).iter().all(|x| x.is_zero()) {
                return Err(Error::DegenerateBasis {
                    reason: format!("degree {k} column {j} is not a cycle"),
                });
            }
            let coords = hd
                .class_coords(&col)
                .ok_or_else(|| Error::DegenerateBasis {
                    reason: format!("degree {k} column {j} is not an integral cycle"),
                })?;
            for i in 0..hd.beta {
                q[(i, j)] = coords[i].clone();
            }
        }
        if q.det().abs() != Int::one() {
            return Err(Error::DegenerateBasis {
                reason: format!("degree {k}: classes do not generate the homology lattice"),
            });
        }
    }
    Ok(())
}

/// Explicit alternative choices for the Milnor computation: unimodular
/// changes of the boundary bases and integer shifts of the splittings.
#[derive(Clone, Debug, Default)]
pub struct MilnorChoices {
    /// Per degree `k`: unimodular `rank B_k x rank B_k` transform of the
    /// boundary basis.
    pub b_change: Vec<Option<IntMatrix>>,
    /// Per degree `k`: integer matrix (`dim ker D_k x rank B_{k-1}`) of cycle
    /// shifts added to the lifted lower-boundary basis.
    pub s_shift: Vec<Option<IntMatrix>>,
    /// Per degree `k`: integer matrix (`rank B_k x beta_k`) of boundary
    /// shifts added to the homology lifts.
    pub t_shift: Vec<Option<IntMatrix>>,
}

impl MilnorChoices {
    pub fn none(c: &CellComplex) -> Self {
        MilnorChoices {
            b_change: vec![None; c.dim() + 1],
            s_shift: vec![None; c.dim() + 1],
            t_shift: vec![None; c.dim() + 1],
        }
    }

    fn get(v: &[Option<IntMatrix>], k: usize) -> Option<&IntMatrix> {
        v.get(k).and_then(|o| o.as_ref())
    }
}

/// Milnor's squared torsion with explicit basis and splitting choices.
///
/// Accepts any `h` whose columns are independent cycles; the invariance
/// properties of the result are asserted by the callers and the tests.
pub fn milnor_torsion_squared_with(
    c: &CellComplex,
    h: &CombinatorialBasis,
    choices: &MilnorChoices,
) -> Result<Rat> {
    let d = c.dim();
    let mut tau2 = Rat::one();
    for k in 0..=d {
        let n = c.cell_count(k);
        let b_here = image_lattice_basis(&boundary_or_zero(c, k + 1));
        let b_below = image_lattice_basis(&boundary_or_zero(c, k));
        let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(n);

        // boundary basis of this degree, optionally transformed
        let mut b_mat = b_here.matrix();
        if let Some(u) = MilnorChoices::get(&choices.b_change, k) {
            assert_eq!(u.det().abs(), Int::one(), "basis change must be unimodular");
            b_mat = b_mat.mul(u);
        }
        for j in 0..b_mat.cols() {
            columns.push(
                b_mat
                    .column(j)
                    .iter()
                    .map(|x| Rat::from(x.clone()))
                    .collect(),
            );
        }

        // homology lifts: the given cycle representatives, optionally shifted
        // by boundaries
        let mut h_cols = h.columns(k);
        if let Some(shift) = MilnorChoices::get(&choices.t_shift, k) {
            let base = b_here.matrix();
            for (j, col) in h_cols.iter_mut().enumerate() {
                let extra = base.mul_vec(&shift.column(j));
                for (x, e) in col.iter_mut().zip(&extra) {
                    *x += Rat::from(e.clone());
                }
            }
        }
        columns.extend(h_cols);

        // lifts of the lower boundary basis through D_k, optionally shifted
        // by cycles
        if k >= 1 {
            let dk = c.boundary(k).to_rational();
            let below_mat = {
                let mut m = b_below.matrix();
                if let Some(u) = MilnorChoices::get(&choices.b_change, k - 1) {
                    m = m.mul(u);
                }
                m
            };
            let kernel = kernel_lattice_basis(c.boundary(k));
            for j in 0..below_mat.cols() {
                let target: Vec<Rat> = below_mat
                    .column(j)
                    .iter()
                    .map(|x| Rat::from(x.clone()))
                    .collect();
                let mut lift = dk
                    .solve(&target)
                    .expect("lower boundary vectors lift through D_k");
                if let Some(shift) = MilnorChoices::get(&choices.s_shift, k) {
                    let extra = kernel.matrix().mul_vec(&shift.column(j));
                    for (x, e) in lift.iter_mut().zip(&extra) {
                        *x += Rat::from(e.clone());
                    }
                }
                columns.push(lift);
            }
        }

        if columns.len() != n {
            return Err(Error::DegenerateBasis {
                reason: format!(
                    "degree {k}: {} basis vectors for {} cells",
                    columns.len(),
                    n
                ),
            });
        }
        let m = RatMatrix::from_columns(n, &columns);
        let det = m.det();
        if det.is_zero() {
            return Err(Error::DegenerateBasis {
                reason: format!("degree {k}: chain basis is singular"),
            });
        }
        let det2 = &det * &det;
        if k % 2 == 0 {
            tau2 *= det2;
        } else {
            tau2 /= det2;
        }
    }
    Ok(tau2)
}

/// Milnor's squared torsion with canonical choices, recomputed against a
/// deterministic second choice of bases and splittings.
pub fn milnor_torsion_squared(c: &CellComplex, h: &CombinatorialBasis) -> Result<Rat> {
    let canonical = milnor_torsion_squared_with(c, h, &MilnorChoices::none(c))?;
    let alt = milnor_torsion_squared_with(c, h, &second_choice(c))?;
    assert_eq!(
        canonical, alt,
        "torsion must not depend on basis and splitting choices"
    );
    Ok(canonical)
}

/// A fixed nontrivial set of choices: shear-and-negate each boundary basis,
/// shift every splitting by the first available cycle or boundary.
fn second_choice(c: &CellComplex) -> MilnorChoices {
    let d = c.dim();
    let mut choices = MilnorChoices::none(c);
    for k in 0..=d {
        let rank_b = image_lattice_basis(&boundary_or_zero(c, k + 1)).rank();
        if rank_b >= 1 {
            let mut u = IntMatrix::identity(rank_b);
            u[(0, 0)] = Int::from(-1);
            if rank_b >= 2 {
                u[(0, 1)] = Int::from(2);
            }
            choices.b_change[k] = Some(u);
        }
        let beta = HomologyDegree::new(c, k).beta;
        if rank_b >= 1 && beta >= 1 {
            let mut shift = IntMatrix::zero(rank_b, beta);
            for j in 0..beta {
                shift[(0, j)] = Int::from(1 + j as i64);
            }
            choices.t_shift[k] = Some(shift);
        }
        if k >= 1 {
            let kernel_rank = kernel_lattice_basis(c.boundary(k)).rank();
            let below = image_lattice_basis(&boundary_or_zero(c, k)).rank();
            if kernel_rank >= 1 && below >= 1 {
                let mut shift = IntMatrix::zero(kernel_rank, below);
                for j in 0..below {
                    shift[(0, j)] = Int::from(1);
                }
                choices.s_shift[k] = Some(shift);
            }
        }
    }
    choices
}

/// Torsion order of `H_k(X; Z)`.
pub fn theta_k(c: &CellComplex, k: usize) -> Int {
    torsion_order_cokernel(&boundary_or_zero(c, k + 1))
}

/// Squared covolume of the boundary lattice `B_k(X; Z)` in the standard
/// metric (1 when the lattice is trivial).
pub fn mu_k(c: &CellComplex, k: usize) -> Rat {
    let basis = image_lattice_basis(&boundary_or_zero(c, k + 1));
    gram_determinant(&basis, None).expect("image basis is independent")
}

/// Squared covolume of the homology lattice spanned by the classes of `h` in
/// degree `k`, in the metric induced on harmonic representatives by the
/// (optionally weighted) inner product on chains.
pub fn eta_k(c: &CellComplex, h: &CombinatorialBasis, k: usize, w: Option<&DegreeWeights>) -> Rat {
    let cols = h.columns(k);
    if cols.is_empty() {
        return Rat::one();
    }
    let default_w;
    let w = match w {
        Some(w) => w,
        None => {
            default_w = DegreeWeights::ones(c);
            &default_w
        }
    };
    let r = w.degree(k);
    let b = image_lattice_basis(&boundary_or_zero(c, k + 1));
    let harmonic: Vec<Vec<Rat>> = if b.rank() == 0 {
        cols
    } else {
        // project away from the boundary space in the weighted metric
        let s = b.to_rational();
        let rm = RatMatrix::diagonal(r);
        let st_r = s.transpose().mul(&rm);
        let gram = st_r.mul(&s);
        let inv = gram.inverse().expect("boundary Gram matrix is invertible");
        let proj = s.mul(&inv).mul(&st_r);
        cols.iter()
            .map(|col| {
                let p = proj.mul_vec(col);
                col.iter().zip(&p).map(|(a, b)| a - b).collect()
            })
            .collect()
    };
    let m = harmonic.len();
    let mut g = RatMatrix::zero(m, m);
    for i in 0..m {
        for j in i..m {
            let v = dot_weighted(&harmonic[i], &harmonic[j], r);
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    g.det()
}

/// The combined factor `delta_k = eta_k mu_k / theta_k^2` (unweighted).
pub fn delta_k(c: &CellComplex, h: &CombinatorialBasis, k: usize) -> Rat {
    let theta = theta_k(c, k);
    eta_k(c, h, k, None) * mu_k(c, k) / Rat::from(&theta * &theta)
}

/// Squared torsion from the degree-wise weighted Laplacians:
/// alternating `det L_k(W)`, alternating cell-weight products, and
/// alternating homology covolumes `eta_k`.
pub fn torsion_squared_laplacian(
    c: &CellComplex,
    h: &CombinatorialBasis,
    w: Option<&DegreeWeights>,
) -> Result<Rat> {
    let d = c.dim();
    let default_w;
    let w = match w {
        Some(w) => w,
        None => {
            default_w = DegreeWeights::ones(c);
            &default_w
        }
    };
    let mut tau2 = Rat::one();
    for k in 0..=d {
        let det_l = degree_laplacian_det(c, k, w);
        let cell_product = w.degree(k).iter().fold(Rat::one(), |acc, r| acc * r);
        let eta = eta_k(c, h, k, Some(w));
        let factor = det_l * eta / cell_product;
        if k % 2 == 0 {
            tau2 *= factor;
        } else {
            tau2 /= factor;
        }
    }
    Ok(tau2)
}

/// `det` of `L_k(W)` on the boundary lattice basis of degree `k`.
pub fn degree_laplacian_det(c: &CellComplex, k: usize, w: &DegreeWeights) -> Rat {
    let d_next = boundary_or_zero(c, k + 1);
    let r_next: Vec<Rat> = if k < c.dim() {
        w.degree(k + 1).to_vec()
    } else {
        Vec::new()
    };
    restricted_laplacian(&d_next, &r_next, w.degree(k)).det
}

/// Squared torsion as the alternating product of
/// `delta_k * sum_{T in trees(X^(k+1))} theta_T^2` (unweighted form).
pub fn torsion_squared_tree(c: &CellComplex, h: &CombinatorialBasis) -> Result<Rat> {
    let d = c.dim();
    let mut tau2 = Rat::one();
    for k in 0..=d {
        let tree_sum = if k < d {
            tree_theta_square_sum(&c.skeleton(k + 1)?)?
        } else {
            // at the top the only tree is X itself, and H_d(X; Z) is a
            // subgroup of a free group, so its torsion order is 1
            Rat::one()
        };
        let factor = delta_k(c, h, k) * tree_sum;
        if k % 2 == 0 {
            tau2 *= factor;
        } else {
            tau2 /= factor;
        }
    }
    Ok(tau2)
}

/// `sum_T theta_T^2` over all spanning trees of a complex.
pub fn tree_theta_square_sum(c: &CellComplex) -> Result<Rat> {
    let dd = c.boundary(c.dim());
    let mut sum = Rat::zero();
    // enumerated sets are trees by construction, so the torsion order is
    // computed directly instead of through the revalidating tree_theta
    for cells in enumerate_tree_cells(c) {
        let theta = torsion_order_cokernel(&dd.select_columns(&cells.indices()));
        sum += Rat::from(&theta * &theta);
    }
    Ok(sum)
}

/// Per-degree spanning trees and homology truncations: `trees[k]` is the
/// tree of the k-skeleton (`trees[0]` is empty by convention) and `vees[k]`
/// the k-cells of the truncation `V^k`, with `T^k ⊆ V^k`.
#[derive(Clone, Debug)]
pub struct TruncationData {
    pub trees: Vec<SubcomplexSpec>,
    pub vees: Vec<SubcomplexSpec>,
}

/// Spanning trees of every skeleton, via greedy essential-cell removal.
pub fn default_truncation_trees(c: &CellComplex) -> Result<Vec<SubcomplexSpec>> {
    let mut trees = vec![SubcomplexSpec::empty()];
    for k in 1..=c.dim() {
        let sk = c.skeleton(k)?;
        trees.push(find_spanning_tree(&sk)?.top_cells().clone());
    }
    Ok(trees)
}

/// Builds homology truncations subordinate to the given skeleton trees:
/// `V^k` extends `T^k` by greedily chosen cells whose fundamental cycles
/// have independent homology classes, until the classes span `H_k(X; R)`.
pub fn find_truncation(c: &CellComplex, trees: &[SubcomplexSpec]) -> Result<TruncationData> {
    let d = c.dim();
    assert_eq!(trees.len(), d + 1, "one tree per degree, empty at degree 0");
    let mut vees = vec![SubcomplexSpec::new([0])];
    for k in 1..=d {
        let sk = c.skeleton(k)?;
        let tree = SpanningTree::build(&sk, &trees[k])?;
        let beta = c.betti(k)?;
        // classes are tracked modulo boundaries: a candidate is accepted when
        // it raises the rank of [boundary basis | accepted cycles]
        let b = image_lattice_basis(&boundary_or_zero(c, k + 1));
        let mut span: Vec<Vec<Rat>> = (0..b.rank())
            .map(|j| {
                b.matrix()
                    .column(j)
                    .iter()
                    .map(|x| Rat::from(x.clone()))
                    .collect()
            })
            .collect();
        let mut rank = RatMatrix::from_columns(c.cell_count(k), &span).rank();
        let mut chosen = trees[k].clone();
        let mut picked = 0;
        for cell in 0..sk.cell_count(k) {
            if picked == beta {
                break;
            }
            if trees[k].contains(cell) {
                continue;
            }
            let candidate = tree.tbar().column(cell);
            let mut trial = span.clone();
            trial.push(candidate.clone());
            let m = RatMatrix::from_columns(c.cell_count(k), &trial);
            if m.rank() > rank {
                span = trial;
                rank += 1;
                chosen = chosen.insert(cell);
                picked += 1;
            }
        }
        if picked != beta {
            return Err(Error::InvalidTruncation {
                degree: k,
                reason: "could not complete a homology basis".to_string(),
            });
        }
        vees.push(chosen);
    }
    let td = TruncationData {
        trees: trees.to_vec(),
        vees,
    };
    validate_truncation(c, &td)?;
    Ok(td)
}

/// Rank checks for a truncation: each `V^k` contains `T^k`, has cycle space
/// of dimension `beta_k(X)`, and its cycle classes are independent in
/// homology. `V^0` must be a single vertex.
pub fn validate_truncation(c: &CellComplex, td: &TruncationData) -> Result<()> {
    let d = c.dim();
    if td.trees.len() != d + 1 || td.vees.len() != d + 1 {
        return Err(Error::InvalidTruncation {
            degree: 0,
            reason: "need tree and truncation data in every degree".to_string(),
        });
    }
    if td.vees[0].len() != 1 {
        return Err(Error::InvalidTruncation {
            degree: 0,
            reason: "V^0 must be a single vertex".to_string(),
        });
    }
    if !td.trees[0].is_empty() {
        return Err(Error::InvalidTruncation {
            degree: 0,
            reason: "the degree-0 tree is empty by convention".to_string(),
        });
    }
    for k in 1..=d {
        let sk = c.skeleton(k)?;
        // the tree must be a spanning tree of the skeleton
        tree_theta(&sk, &td.trees[k])?;
        for cell in td.trees[k].iter() {
            if !td.vees[k].contains(cell) {
                return Err(Error::InvalidTruncation {
                    degree: k,
                    reason: format!("tree cell {cell} missing from V^{k}"),
                });
            }
        }
        let beta = c.betti(k)?;
        let cells = td.vees[k].indices();
        if cells.iter().any(|&i| i >= c.cell_count(k)) {
            return Err(Error::InvalidTruncation {
                degree: k,
                reason: "cell index out of range".to_string(),
            });
        }
        let restricted = boundary_or_zero(c, k).select_columns(&cells);
        let z_v = kernel_lattice_basis(&restricted);
        if z_v.rank() != beta {
            return Err(Error::InvalidTruncation {
                degree: k,
                reason: format!(
                    "V^{k} has cycle rank {}, expected beta_{k} = {beta}",
                    z_v.rank()
                ),
            });
        }
        // classes independent: [boundary basis | V-cycles] has full rank
        let b = image_lattice_basis(&boundary_or_zero(c, k + 1));
        let mut cols: Vec<Vec<Rat>> = (0..b.rank())
            .map(|j| {
                b.matrix()
                    .column(j)
                    .iter()
                    .map(|x| Rat::from(x.clone()))
                    .collect()
            })
            .collect();
        for v in z_v.vectors() {
            let mut full = vec![Rat::zero(); c.cell_count(k)];
            for (pos, &cell) in cells.iter().enumerate() {
                full[cell] = Rat::from(v[pos].clone());
            }
            cols.push(full);
        }
        let m = RatMatrix::from_columns(c.cell_count(k), &cols);
        if m.rank() != b.rank() + beta {
            return Err(Error::InvalidTruncation {
                degree: k,
                reason: format!("V^{k} cycle classes are dependent in homology"),
            });
        }
    }
    Ok(())
}

/// Per-degree ingredients of the truncation formula.
#[derive(Clone, Debug)]
pub struct TruncationDegree {
    pub theta_tree: Int,
    pub theta_vee: Int,
    pub t_q: Int,
    pub chi: Rat,
}

/// Squared torsion from spanning-tree and truncation data: the alternating
/// product of `theta_{T^k}^2 t(q_k)^2 / (theta_{V^k}^2 chi_k)`.
pub fn torsion_squared_truncation(c: &CellComplex, td: &TruncationData) -> Result<Rat> {
    let (tau2, _) = torsion_squared_truncation_detailed(c, td)?;
    Ok(tau2)
}

/// As [`torsion_squared_truncation`], also returning the per-degree factors.
pub fn torsion_squared_truncation_detailed(
    c: &CellComplex,
    td: &TruncationData,
) -> Result<(Rat, Vec<TruncationDegree>)> {
    validate_truncation(c, td)?;
    let d = c.dim();
    let mut tau2 = Rat::one();
    let mut degrees = Vec::with_capacity(d + 1);
    for k in 0..=d {
        // torsion orders of H_{k-1} of the tree and the truncation
        let theta_tree = if k == 0 {
            Int::one()
        } else {
            torsion_order_cokernel(&boundary_or_zero(c, k).select_columns(&td.trees[k].indices()))
        };
        let theta_vee = if k == 0 {
            Int::one()
        } else {
            torsion_order_cokernel(&boundary_or_zero(c, k).select_columns(&td.vees[k].indices()))
        };
        let t_q = t_q_k(c, td, k)?;
        let chi = chi_k(c, td, k)?;
        let num = Rat::from(&theta_tree * &theta_tree) * Rat::from(&t_q * &t_q);
        let den = Rat::from(&theta_vee * &theta_vee) * &chi;
        let factor = num / den;
        if k % 2 == 0 {
            tau2 *= factor;
        } else {
            tau2 /= factor;
        }
        degrees.push(TruncationDegree {
            theta_tree,
            theta_vee,
            t_q,
            chi,
        });
    }
    Ok((tau2, degrees))
}

/// Cokernel order of `q_k`: the boundary basis of the degree-(k+1) tree
/// projected onto the k-cells outside `V^k`. In the top degree the tree is
/// `X` itself and the matrix is empty.
fn t_q_k(c: &CellComplex, td: &TruncationData, k: usize) -> Result<Int> {
    let d = c.dim();
    let (cols, matrix) = if k < d {
        let cells = td.trees[k + 1].indices();
        (cells.len(), c.boundary(k + 1).select_columns(&cells))
    } else {
        (0, IntMatrix::zero(c.cell_count(d), 0))
    };
    let outside: Vec<usize> = (0..c.cell_count(k))
        .filter(|i| !td.vees[k].contains(*i))
        .collect();
    if outside.len() != cols {
        return Err(Error::InvalidTruncation {
            degree: k,
            reason: format!("q_{k} is {}x{}, not square", outside.len(), cols),
        });
    }
    if cols == 0 {
        return Ok(Int::one());
    }
    let q = matrix.select_rows(&outside);
    let det = q.det();
    if det.is_zero() {
        return Err(Error::InvalidTruncation {
            degree: k,
            reason: format!("q_{k} is not a real isomorphism"),
        });
    }
    Ok(det.abs())
}

/// Squared index of the image of `H_k(V^k; Z)` inside the torsion-free
/// homology lattice of `X`.
fn chi_k(c: &CellComplex, td: &TruncationData, k: usize) -> Result<Rat> {
    let hd = HomologyDegree::new(c, k);
    if hd.beta == 0 {
        return Ok(Rat::one());
    }
    let cells = td.vees[k].indices();
    let restricted = boundary_or_zero(c, k).select_columns(&cells);
    let z_v = kernel_lattice_basis(&restricted);
    let mut q = IntMatrix::zero(hd.beta, hd.beta);
    for (j, v) in z_v.vectors().iter().enumerate() {
        let mut full = vec![Int::zero(); c.cell_count(k)];
        for (pos, &cell) in cells.iter().enumerate() {
            full[cell] = v[pos].clone();
        }
        let coords = hd
            .class_coords(&full)
            .ok_or_else(|| Error::InvalidTruncation {
                degree: k,
                reason: "truncation cycle is not integral".to_string(),
            })?;
        for i in 0..hd.beta {
            q[(i, j)] = coords[i].clone();
        }
    }
    let det = q.det();
    if det.is_zero() {
        return Err(Error::InvalidTruncation {
            degree: k,
            reason: format!("H_{k}(V^{k}) does not inject into homology"),
        });
    }
    Ok(Rat::from(&det * &det))
}

/// Everything the four torsion computations produce, with per-degree
/// intermediates.
#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub tau2_milnor: Rat,
    pub tau2_laplacian: Rat,
    pub tau2_tree: Rat,
    pub tau2_truncation: Rat,
    pub degrees: Vec<TorsionDegreeData>,
}

#[derive(Clone, Debug)]
pub struct TorsionDegreeData {
    pub theta: Int,
    pub mu: Rat,
    pub eta: Rat,
    pub delta: Rat,
    pub det_laplacian: Rat,
    pub tree_sum_theta2: Rat,
    pub theta_tree: Int,
    pub theta_vee: Int,
    pub t_q: Int,
    pub chi: Rat,
}

impl TorsionReport {
    /// Exact agreement of all four methods.
    pub fn agree(&self) -> bool {
        self.tau2_milnor == self.tau2_laplacian
            && self.tau2_milnor == self.tau2_tree
            && self.tau2_milnor == self.tau2_truncation
    }

    pub fn tau2(&self) -> &Rat {
        &self.tau2_milnor
    }
}

/// Runs all four torsion computations with defaults filled in.
pub fn torsion_report(
    c: &CellComplex,
    h: Option<&CombinatorialBasis>,
    td: Option<&TruncationData>,
    w: Option<&DegreeWeights>,
) -> Result<TorsionReport> {
    let default_h;
    let h = match h {
        Some(h) => {
            validate_combinatorial_basis(c, h)?;
            h
        }
        None => {
            default_h = default_combinatorial_basis(c);
            &default_h
        }
    };
    let default_td;
    let td = match td {
        Some(td) => td,
        None => {
            default_td = find_truncation(c, &default_truncation_trees(c)?)?;
            &default_td
        }
    };
    let tau2_milnor = milnor_torsion_squared(c, h)?;
    let tau2_laplacian = torsion_squared_laplacian(c, h, w)?;
    let tau2_tree = torsion_squared_tree(c, h)?;
    let (tau2_truncation, trunc_degrees) = torsion_squared_truncation_detailed(c, td)?;
    let weights = match w {
        Some(w) => w.clone(),
        None => DegreeWeights::ones(c),
    };
    let mut degrees = Vec::with_capacity(c.dim() + 1);
    for k in 0..=c.dim() {
        let tree_sum = if k < c.dim() {
            tree_theta_square_sum(&c.skeleton(k + 1)?)?
        } else {
            Rat::one()
        };
        degrees.push(TorsionDegreeData {
            theta: theta_k(c, k),
            mu: mu_k(c, k),
            eta: eta_k(c, h, k, None),
            delta: delta_k(c, h, k),
            det_laplacian: degree_laplacian_det(c, k, &weights),
            tree_sum_theta2: tree_sum,
            theta_tree: trunc_degrees[k].theta_tree.clone(),
            theta_vee: trunc_degrees[k].theta_vee.clone(),
            t_q: trunc_degrees[k].t_q.clone(),
            chi: trunc_degrees[k].chi.clone(),
        });
    }
    Ok(TorsionReport {
        tau2_milnor,
        tau2_laplacian,
        tau2_tree,
        tau2_truncation,
        degrees,
    })
}
