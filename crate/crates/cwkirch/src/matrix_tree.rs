//! Weighted restricted Laplacians and matrix-tree identities.
//!
//! The Laplacian `D diag(1/r) D^t` preserves the boundary space `B_{d-1}`;
//! restricted to an integer basis of the boundary lattice it is invertible
//! with positive rational determinant. This module computes that determinant
//! and the lattice prefactors exactly and verifies:
//!
//! * the weighted matrix-tree identity `det L = gamma_X * sum_T w_T`,
//! * its generalization to a subgroup `A` with projection data `p_A`,
//! * the tree-sum decomposition `det L_A = sum_T det L_A^T`,
//! * the low-temperature limit `det L^T / det L -> 1` for good weights.
//!
//! Weights are always handled multiplicatively as exact rationals; inverse
//! temperature enters as the exponent in `r^beta`.

use num_traits::{One, Signed, Zero};

use crate::complex::{CellComplex, SubcomplexSpec};
use crate::linalg::{
    gram_determinant, image_lattice_basis, torsion_order_cokernel, IntMatrix, LatticeBasis,
    RatMatrix,
};
use crate::trees::{enumerate_tree_cells, tree_theta, SpanningTree};
use crate::{Error, Int, Rat, Result};

/// Positive rational resistances, one per top-dimensional cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    values: Vec<Rat>,
}

impl WeightAssignment {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        for (index, r) in values.iter().enumerate() {
            if !r.is_positive() {
                return Err(Error::NonpositiveWeight { degree: 0, index });
            }
        }
        Ok(WeightAssignment { values })
    }

    pub fn ones(c: &CellComplex) -> Self {
        WeightAssignment {
            values: vec![Rat::one(); c.cell_count(c.dim())],
        }
    }

    /// The complex's own top-degree weights.
    pub fn of_complex(c: &CellComplex) -> Self {
        WeightAssignment {
            values: c.top_weights(),
        }
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Componentwise power `r^beta`, the inverse-temperature scaling.
    pub fn pow(&self, beta: u32) -> Self {
        WeightAssignment {
            values: self.values.iter().map(|r| r.pow(beta as i32)).collect(),
        }
    }
}

/// The boundary-space Laplacian expressed on an integer basis of the
/// boundary lattice `B_{d-1}(X; Z)`.
#[derive(Clone, Debug)]
pub struct RestrictedLaplacian {
    pub basis: LatticeBasis,
    pub matrix: RatMatrix,
    pub det: Rat,
}

/// The operator `D diag(1/r_next) D^t diag(r_here)` restricted to the image
/// lattice basis of `D`. With `r_here = 1` this is the top-level weighted
/// Laplacian; the general form appears in the torsion formulas.
pub(crate) fn restricted_laplacian(
    d_next: &IntMatrix,
    r_next: &[Rat],
    r_here: &[Rat],
) -> RestrictedLaplacian {
    let basis = image_lattice_basis(d_next);
    if basis.rank() == 0 {
        return RestrictedLaplacian {
            basis,
            matrix: RatMatrix::zero(0, 0),
            det: Rat::one(),
        };
    }
    let matrix = laplacian_on_basis(d_next, r_next, r_here, &basis);
    let det = matrix.det();
    RestrictedLaplacian { basis, matrix, det }
}

/// Matrix of the ambient Laplacian restricted to a basis of a subspace it
/// preserves: solves `M S = S A` for `A`.
fn laplacian_on_basis(
    d_next: &IntMatrix,
    r_next: &[Rat],
    r_here: &[Rat],
    basis: &LatticeBasis,
) -> RatMatrix {
    let m = ambient_laplacian(d_next, r_next, r_here);
    let s = basis.to_rational();
    let ms = m.mul(&s);
    s.solve_matrix(&ms)
        .expect("the Laplacian preserves the boundary space")
}

fn ambient_laplacian(d_next: &IntMatrix, r_next: &[Rat], r_here: &[Rat]) -> RatMatrix {
    let d = d_next.to_rational();
    let inv_next: Vec<Rat> = r_next.iter().map(|x| x.recip()).collect();
    let mut m = d.mul(&RatMatrix::diagonal(&inv_next)).mul(&d.transpose());
    if !r_here.iter().all(|x| x.is_one()) {
        m = m.mul(&RatMatrix::diagonal(r_here));
    }
    m
}

/// The weighted Laplacian of the top degree on the boundary lattice basis.
pub fn laplacian(c: &CellComplex, w: &WeightAssignment) -> RestrictedLaplacian {
    let d = c.dim();
    assert!(d >= 1, "the restricted Laplacian needs dimension >= 1");
    let ones = vec![Rat::one(); c.cell_count(d - 1)];
    restricted_laplacian(c.boundary(d), w.values(), &ones)
}

/// Torsion order of `H_{d-1}(X; Z)`.
pub fn theta_x(c: &CellComplex) -> Int {
    torsion_order_cokernel(c.boundary(c.dim()))
}

/// Squared covolume of the boundary lattice `B_{d-1}(X; Z)`.
pub fn mu_x(c: &CellComplex) -> Rat {
    let basis = image_lattice_basis(c.boundary(c.dim()));
    gram_determinant(&basis, None).expect("image basis is independent")
}

/// The matrix-tree prefactor `gamma_X = mu_X / theta_X^2`.
pub fn gamma_x(c: &CellComplex) -> Rat {
    let theta = theta_x(c);
    mu_x(c) / Rat::from(&theta * &theta)
}

/// Two sides of an exact identity, for reporting.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl std::fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} {} {} ({})",
            self.name,
            self.lhs,
            if self.passed() { "=" } else { "!=" },
            self.rhs,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Sum of tree weights `Delta = sum_T w_T` under the given resistances.
pub fn tree_weight_sum(c: &CellComplex, w: &WeightAssignment) -> Rat {
    let mut delta = Rat::zero();
    for cells in enumerate_tree_cells(c) {
        let theta = tree_theta(c, &cells).expect("enumerated set is a tree");
        let theta2 = Rat::from(&theta * &theta);
        let w_t = cells.iter().fold(theta2, |acc, b| acc / &w.values()[b]);
        delta += w_t;
    }
    delta
}

/// Checks `det L(W) = gamma_X * sum_T w_T` with full tree enumeration.
pub fn verify_matrix_tree(c: &CellComplex, w: &WeightAssignment) -> IdentityReport {
    let lhs = laplacian(c, w).det;
    let rhs = gamma_x(c) * tree_weight_sum(c, w);
    IdentityReport {
        name: "det L = gamma_X * sum_T w_T".to_string(),
        lhs,
        rhs,
    }
}

/// A subgroup `A` of the (d-1)-chain lattice, given by independent integer
/// basis vectors.
#[derive(Clone, Debug)]
pub struct SubgroupSpec {
    basis: LatticeBasis,
}

impl SubgroupSpec {
    pub fn new(basis: LatticeBasis) -> Self {
        SubgroupSpec { basis }
    }

    /// The full boundary lattice `B_{d-1}(X; Z)` itself.
    pub fn boundary_lattice(c: &CellComplex) -> Self {
        SubgroupSpec {
            basis: image_lattice_basis(c.boundary(c.dim())),
        }
    }

    /// The saturation of the boundary lattice, `span(B) ∩ Z^{n_{d-1}}`.
    pub fn saturated_boundary_lattice(c: &CellComplex) -> Self {
        SubgroupSpec {
            basis: crate::linalg::saturate(&image_lattice_basis(c.boundary(c.dim()))),
        }
    }

    /// The coordinate lattice on a subset of (d-1)-cells.
    pub fn coordinate_lattice(c: &CellComplex, cells: &[usize]) -> Self {
        let n = c.cell_count(c.dim() - 1);
        let vectors = cells
            .iter()
            .map(|&i| {
                let mut v = vec![Int::zero(); n];
                v[i] = Int::one();
                v
            })
            .collect();
        SubgroupSpec {
            basis: LatticeBasis::new(n, vectors).expect("coordinate vectors are independent"),
        }
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }
}

/// Outcome of the projection-hypothesis check for a subgroup `A`.
#[derive(Clone, Debug)]
pub struct HypothesisCheck {
    /// The integer matrix of `p_A` (columns: images of the boundary-lattice
    /// basis in the `A`-basis), when the projection is integral.
    pub p_a: Option<IntMatrix>,
    /// Cokernel order `t(p_A) = |det p_A|`, when `p_A` exists and is a real
    /// isomorphism.
    pub t_p_a: Option<Int>,
    pub reason: String,
}

impl HypothesisCheck {
    pub fn passed(&self) -> bool {
        self.t_p_a.is_some()
    }
}

/// Projects the boundary-lattice basis orthogonally onto `span(A)` and
/// decides whether the projection is induced by an integer real isomorphism
/// `p_A: B_{d-1}(X; Z) -> A`.
pub fn hypothesis_check(c: &CellComplex, a: &SubgroupSpec) -> HypothesisCheck {
    let b = image_lattice_basis(c.boundary(c.dim()));
    if b.rank() != a.basis.rank() {
        return HypothesisCheck {
            p_a: None,
            t_p_a: None,
            reason: format!(
                "rank mismatch: rank A = {}, rank B = {}",
                a.basis.rank(),
                b.rank()
            ),
        };
    }
    if b.rank() == 0 {
        return HypothesisCheck {
            p_a: Some(IntMatrix::zero(0, 0)),
            t_p_a: Some(Int::one()),
            reason: "trivial".to_string(),
        };
    }
    let s_a = a.basis.to_rational();
    let gram = s_a.transpose().mul(&s_a);
    let gram_inv = gram.inverse().expect("subgroup basis is independent");
    let coords = gram_inv.mul(&s_a.transpose()).mul(&b.to_rational());
    let mut p_a = IntMatrix::zero(coords.rows(), coords.cols());
    for i in 0..coords.rows() {
        for j in 0..coords.cols() {
            if !coords[(i, j)].is_integer() {
                return HypothesisCheck {
                    p_a: None,
                    t_p_a: None,
                    reason: format!("projection coordinate ({i}, {j}) is not an integer"),
                };
            }
            p_a[(i, j)] = coords[(i, j)].to_integer();
        }
    }
    let det = p_a.det();
    if det.is_zero() {
        return HypothesisCheck {
            p_a: Some(p_a),
            t_p_a: None,
            reason: "projection is not injective".to_string(),
        };
    }
    HypothesisCheck {
        t_p_a: Some(det.abs()),
        p_a: Some(p_a),
        reason: "ok".to_string(),
    }
}

/// `det` of the operator `P_A D diag(1/r) D^t` restricted to `A` (in the
/// `A`-basis), optionally with `D` column-restricted to a tree.
fn det_laplacian_on_subgroup(
    c: &CellComplex,
    w: &WeightAssignment,
    a: &SubgroupSpec,
    tree: Option<&SubcomplexSpec>,
) -> Rat {
    if a.basis.rank() == 0 {
        return Rat::one();
    }
    let d = c.dim();
    let (dd, r): (IntMatrix, Vec<Rat>) = match tree {
        Some(cells) => {
            let cols = cells.indices();
            (
                c.boundary(d).select_columns(&cols),
                cols.iter().map(|&j| w.values()[j].clone()).collect(),
            )
        }
        None => (c.boundary(d).clone(), w.values().to_vec()),
    };
    let ones = vec![Rat::one(); c.cell_count(d - 1)];
    let m = ambient_laplacian(&dd, &r, &ones);
    let s_a = a.basis.to_rational();
    let gram = s_a.transpose().mul(&s_a);
    let gram_inv = gram.inverse().expect("subgroup basis is independent");
    let op = gram_inv.mul(&s_a.transpose()).mul(&m).mul(&s_a);
    op.det()
}

/// Report for the generalized matrix-tree identity on a subgroup `A`.
#[derive(Clone, Debug)]
pub struct GeneralizedReport {
    pub identity: IdentityReport,
    pub gamma_a: Rat,
    pub mu_a: Rat,
    pub t_p_a: Int,
    pub theta_x: Int,
    /// Per-tree data `(cells, t(p_A^T), theta_T)`; the tree-local prefactor
    /// `mu(A) t(p_A^T)^2 / theta_T^2` must reproduce `gamma_A` for each.
    pub tree_local: Vec<(SubcomplexSpec, Int, Int)>,
}

impl GeneralizedReport {
    pub fn passed(&self) -> bool {
        self.identity.passed() && self.tree_local_consistent()
    }

    /// `t(p_A^T) * theta_X = t(p_A) * theta_T` for every tree, the invariant
    /// form of the tree-local prefactor identity.
    pub fn tree_local_consistent(&self) -> bool {
        self.tree_local
            .iter()
            .all(|(_, t_pat, theta_t)| t_pat * &self.theta_x == &self.t_p_a * theta_t)
    }
}

/// Checks `det L_A = gamma_A * sum_T w_T` with
/// `gamma_A = mu(A) t(p_A)^2 / theta_X^2`, plus the tree-local prefactor
/// consistency for every spanning tree.
pub fn verify_generalized(
    c: &CellComplex,
    w: &WeightAssignment,
    a: &SubgroupSpec,
) -> Result<GeneralizedReport> {
    let check = hypothesis_check(c, a);
    let Some(t_p_a) = check.t_p_a.clone() else {
        return Err(Error::HypothesisFailed {
            reason: check.reason,
        });
    };
    let p_a = check.p_a.expect("hypothesis passed");
    let mu_a = gram_determinant(&a.basis, None).unwrap_or_else(|_| Rat::one());
    let theta = theta_x(c);
    let gamma_a = &mu_a * Rat::from(&t_p_a * &t_p_a) / Rat::from(&theta * &theta);
    let lhs = det_laplacian_on_subgroup(c, w, a, None);
    let rhs = &gamma_a * tree_weight_sum(c, w);
    let identity = IdentityReport {
        name: "det L_A = gamma_A * sum_T w_T".to_string(),
        lhs,
        rhs,
    };
    // tree-local data: p_A^T = p_A * (tree columns in the B-lattice basis)
    let b = image_lattice_basis(c.boundary(c.dim()));
    let mut tree_local = Vec::new();
    for cells in enumerate_tree_cells(c) {
        let theta_t = tree_theta(c, &cells)?;
        let t_pat = if b.rank() == 0 {
            Int::one()
        } else {
            let cols = c.boundary(c.dim()).select_columns(&cells.indices());
            let coords = b
                .to_rational()
                .solve_matrix(&cols.to_rational())
                .expect("tree columns lie in the boundary lattice");
            let mut m_t = IntMatrix::zero(coords.rows(), coords.cols());
            for i in 0..coords.rows() {
                for j in 0..coords.cols() {
                    debug_assert!(coords[(i, j)].is_integer());
                    m_t[(i, j)] = coords[(i, j)].to_integer();
                }
            }
            p_a.mul(&m_t).det().abs()
        };
        tree_local.push((cells, t_pat, theta_t));
    }
    Ok(GeneralizedReport {
        identity,
        gamma_a,
        mu_a,
        t_p_a,
        theta_x: theta,
        tree_local,
    })
}

/// Report for the tree-sum decomposition of the subgroup Laplacian.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub identity: IdentityReport,
    /// `det L_A^T` per tree, in enumeration order.
    pub terms: Vec<Rat>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.identity.passed()
    }
}

/// Checks `det L_A = sum_T det L_A^T`; with `A` absent the boundary lattice
/// is used, which in the unweighted case is the decomposition
/// `det L = sum_T mu_T`.
pub fn verify_sum_decomposition(
    c: &CellComplex,
    w: &WeightAssignment,
    a: Option<&SubgroupSpec>,
) -> Result<DecompositionReport> {
    let default_a;
    let a = match a {
        Some(a) => {
            let check = hypothesis_check(c, a);
            if !check.passed() {
                return Err(Error::HypothesisFailed {
                    reason: check.reason,
                });
            }
            a
        }
        None => {
            default_a = SubgroupSpec::boundary_lattice(c);
            &default_a
        }
    };
    let lhs = det_laplacian_on_subgroup(c, w, a, None);
    let mut terms = Vec::new();
    let mut rhs = Rat::zero();
    for cells in enumerate_tree_cells(c) {
        let term = det_laplacian_on_subgroup(c, w, a, Some(&cells));
        rhs += &term;
        terms.push(term);
    }
    Ok(DecompositionReport {
        identity: IdentityReport {
            name: "det L_A = sum_T det L_A^T".to_string(),
            lhs,
            rhs,
        },
        terms,
    })
}

/// Exact ratio schedule for the low-temperature limit.
#[derive(Clone, Debug)]
pub struct LowTempReport {
    pub betas: Vec<u32>,
    /// `det L^T(r^beta) / det L(r^beta)` per beta.
    pub ratios: Vec<Rat>,
    /// `|ratio - 1|` per beta.
    pub deviations: Vec<Rat>,
    pub tolerance: Rat,
}

impl LowTempReport {
    /// Final deviation within tolerance.
    pub fn converged(&self) -> bool {
        match self.deviations.last() {
            Some(dev) => dev < &self.tolerance,
            None => false,
        }
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.deviations.windows(2).all(|w| w[1] < w[0])
    }
}

/// Default convergence tolerance `1/10^6` for the low-temperature check.
pub fn default_low_temp_tolerance() -> Rat {
    Rat::new(Int::one(), Int::from(1_000_000))
}

/// Computes `det L^T(r^beta) / det L(r^beta)` for each beta in the schedule.
///
/// Requires `w` to be good for the tree in the multiplicative sense:
/// `r_g * (min_{a in T} r_a)^k > prod_{a in T} r_a` for every cell `g`
/// outside the tree, with `k` the number of top cells.
pub fn low_temperature_check(
    c: &CellComplex,
    tree: &SpanningTree,
    w: &WeightAssignment,
    betas: &[u32],
    tolerance: &Rat,
) -> Result<LowTempReport> {
    let d = c.dim();
    let n = c.cell_count(d);
    // goodness in multiplicative form (vacuous for the empty tree)
    if !tree.top_cells().is_empty() {
        let tree_r: Vec<Rat> = tree
            .top_cells()
            .iter()
            .map(|b| w.values()[b].clone())
            .collect();
        let min_r = tree_r.iter().min().expect("nonempty");
        let prod_r = tree_r.iter().fold(Rat::one(), |acc, r| acc * r);
        let bound = prod_r / min_r.pow(n as i32);
        for g in 0..n {
            if tree.top_cells().contains(g) {
                continue;
            }
            if w.values()[g] <= bound {
                return Err(Error::WeightsNotGood { cell: g });
            }
        }
    }
    let tree_cells = tree.top_cells().indices();
    let mut ratios = Vec::with_capacity(betas.len());
    let mut deviations = Vec::with_capacity(betas.len());
    for &beta in betas {
        let wb = w.pow(beta);
        let full = laplacian(c, &wb).det;
        let dd_t = c.boundary(d).select_columns(&tree_cells);
        let r_t: Vec<Rat> = tree_cells.iter().map(|&j| wb.values()[j].clone()).collect();
        let ones = vec![Rat::one(); c.cell_count(d - 1)];
        let restricted = restricted_laplacian(&dd_t, &r_t, &ones).det;
        let ratio = restricted / full;
        deviations.push((&ratio - Rat::one()).abs());
        ratios.push(ratio);
    }
    Ok(LowTempReport {
        betas: betas.to_vec(),
        ratios,
        deviations,
        tolerance: tolerance.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::trees::enumerate_spanning_trees;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    fn int(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    #[test]
    fn laplacian_examples() {
        let theta = corpus::theta();
        let l = laplacian(&theta, &WeightAssignment::ones(&theta));
        assert_eq!(l.matrix, RatMatrix::diagonal(&[int(6)]));
        assert_eq!(l.det, int(6));

        let rp2 = corpus::rp2_min();
        let l = laplacian(&rp2, &WeightAssignment::ones(&rp2));
        assert_eq!(l.basis.vectors(), &[vec![Int::from(2)]]);
        assert_eq!(l.det, int(4));

        let torus = corpus::torus_min();
        let l = laplacian(&torus, &WeightAssignment::ones(&torus));
        assert_eq!(l.basis.rank(), 0);
        assert_eq!(l.det, Rat::one());
    }

    #[test]
    fn laplacian_det_invariant_under_unimodular_basis_change() {
        let k4 = corpus::k4();
        let w = WeightAssignment::ones(&k4);
        let l = laplacian(&k4, &w);
        // change of basis by an explicit unimodular matrix
        let r = l.basis.rank();
        let mut u = IntMatrix::identity(r);
        u[(0, 1)] = Int::from(3);
        u[(2, 0)] = Int::from(-2);
        let s = l.basis.matrix().mul(&u);
        let new_basis =
            LatticeBasis::new(s.rows(), (0..s.cols()).map(|j| s.column(j)).collect()).unwrap();
        let m = laplacian_on_basis(k4.boundary(1), w.values(), &vec![Rat::one(); 4], &new_basis);
        assert_eq!(m.det(), l.det);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_x(&corpus::k4()), int(4));
        assert_eq!(gamma_x(&corpus::rp2_min()), int(1));
        assert_eq!(gamma_x(&corpus::theta()), int(2));
    }

    #[test]
    fn matrix_tree_identity_examples() {
        // K4: 64 = 4 * 16
        let k4 = corpus::k4();
        let report = verify_matrix_tree(&k4, &WeightAssignment::ones(&k4));
        assert!(report.passed());
        assert_eq!(report.lhs, int(64));

        // rp2_min: 4 = 1 * 4
        let rp2 = corpus::rp2_min();
        let report = verify_matrix_tree(&rp2, &WeightAssignment::ones(&rp2));
        assert!(report.passed());
        assert_eq!(report.lhs, int(4));

        // weighted theta: det = 2 * (1/2 + 1/3 + 1/5) = 31/15
        let theta = corpus::theta();
        let w = WeightAssignment::new(vec![int(2), int(3), int(5)]).unwrap();
        let report = verify_matrix_tree(&theta, &w);
        assert!(report.passed());
        assert_eq!(report.lhs, rat(31, 15));
    }

    #[test]
    fn matrix_tree_identity_on_whole_corpus() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc0);
        for c in corpus::all().iter().filter(|c| c.dim() >= 1) {
            let n = c.cell_count(c.dim());
            let mut assignments = vec![WeightAssignment::ones(c)];
            for _ in 0..3 {
                let r: Vec<Rat> = (0..n)
                    .map(|_| {
                        Rat::new(
                            Int::from(rng.random_range(1..=9i64)),
                            Int::from(rng.random_range(1..=9i64)),
                        )
                    })
                    .collect();
                assignments.push(WeightAssignment::new(r).unwrap());
            }
            for w in &assignments {
                let report = verify_matrix_tree(c, w);
                assert!(report.passed(), "{}: {report}", c.name());
                assert!(report.lhs.is_positive());
            }
        }
    }

    #[test]
    fn sum_decomposition_examples() {
        // theta: 6 = 2 + 2 + 2
        let theta = corpus::theta();
        let report =
            verify_sum_decomposition(&theta, &WeightAssignment::ones(&theta), None).unwrap();
        assert!(report.passed());
        assert_eq!(report.identity.lhs, int(6));
        assert_eq!(report.terms, vec![int(2), int(2), int(2)]);

        // rp2_double: 8 = 4 + 4
        let rp2d = corpus::rp2_double();
        let report = verify_sum_decomposition(&rp2d, &WeightAssignment::ones(&rp2d), None).unwrap();
        assert!(report.passed());
        assert_eq!(report.identity.lhs, int(8));
        assert_eq!(report.terms, vec![int(4), int(4)]);

        // rp2_min: single-term sum 4 = 4
        let rp2 = corpus::rp2_min();
        let report = verify_sum_decomposition(&rp2, &WeightAssignment::ones(&rp2), None).unwrap();
        assert!(report.passed());
        assert_eq!(report.terms, vec![int(4)]);
    }

    #[test]
    fn per_tree_determinant_factorization() {
        // det L^T = (w_T / theta_T^2) det(D_T D_T^t) and mu_T = det(D_T^t D_T)
        for c in corpus::all().iter().filter(|c| c.dim() >= 1) {
            let n = c.cell_count(c.dim());
            let w = WeightAssignment::new((0..n).map(|i| rat(2 + i as i64, 3)).collect()).unwrap();
            for tree in enumerate_spanning_trees(c) {
                let cells = tree.top_cells().indices();
                let dd_t = c.boundary(c.dim()).select_columns(&cells);
                let mu_t = dd_t.transpose().mul(&dd_t).to_rational().det();
                // unimodular-invariant Gram route
                let mu_t_lattice = gram_determinant(&image_lattice_basis(&dd_t), None).unwrap();
                assert_eq!(mu_t, mu_t_lattice, "{}", c.name());
                let r_t: Vec<Rat> = cells.iter().map(|&j| w.values()[j].clone()).collect();
                let ones = vec![Rat::one(); c.cell_count(c.dim() - 1)];
                let det_lt = restricted_laplacian(&dd_t, &r_t, &ones).det;
                let theta2 = Rat::from(tree.theta() * tree.theta());
                let w_t = tree.weight_with(w.values());
                assert_eq!(det_lt, w_t / theta2 * mu_t, "{}", c.name());
            }
        }
    }

    #[test]
    fn hypothesis_examples() {
        let theta = corpus::theta();
        // A = B itself
        let a = SubgroupSpec::boundary_lattice(&theta);
        let check = hypothesis_check(&theta, &a);
        assert!(check.passed());
        assert_eq!(check.t_p_a.unwrap(), Int::one());
        assert_eq!(check.p_a.unwrap(), IntMatrix::identity(1));

        // A = Z * v_0: the projection of (1, -1) onto the first coordinate
        let a = SubgroupSpec::coordinate_lattice(&theta, &[0]);
        let check = hypothesis_check(&theta, &a);
        assert!(check.passed());
        assert_eq!(check.t_p_a.unwrap(), Int::one());
    }

    #[test]
    fn generalized_identity_examples() {
        // rp2_min with A = Z e (saturation of 2Z e): gamma_A = 1 * 4 / 4 = 1
        let rp2 = corpus::rp2_min();
        let a = SubgroupSpec::saturated_boundary_lattice(&rp2);
        let report = verify_generalized(&rp2, &WeightAssignment::ones(&rp2), &a).unwrap();
        assert!(report.passed(), "{}", report.identity);
        assert_eq!(report.t_p_a, Int::from(2));
        assert_eq!(report.gamma_a, int(1));

        // A = B reduces to the matrix-tree identity
        let theta = corpus::theta();
        let a = SubgroupSpec::boundary_lattice(&theta);
        let w = WeightAssignment::new(vec![int(2), int(3), int(5)]).unwrap();
        let report = verify_generalized(&theta, &w, &a).unwrap();
        assert!(report.passed());
        assert_eq!(report.identity.lhs, verify_matrix_tree(&theta, &w).lhs);

        // theta with the vertex coordinate lattice
        let a = SubgroupSpec::coordinate_lattice(&theta, &[0]);
        let report = verify_generalized(&theta, &WeightAssignment::ones(&theta), &a).unwrap();
        assert!(report.passed());
        assert_eq!(report.identity.lhs, int(3));
    }

    #[test]
    fn generalized_decomposition_with_subgroup() {
        let rp2d = corpus::rp2_double();
        let a = SubgroupSpec::saturated_boundary_lattice(&rp2d);
        let w = WeightAssignment::new(vec![rat(1, 2), int(3)]).unwrap();
        let report = verify_sum_decomposition(&rp2d, &w, Some(&a)).unwrap();
        assert!(report.passed(), "{}", report.identity);
        let general = verify_generalized(&rp2d, &w, &a).unwrap();
        assert!(general.passed());
    }

    #[test]
    fn hypothesis_failure_is_an_error() {
        // rank-mismatched subgroup
        let theta = corpus::theta();
        let a = SubgroupSpec::coordinate_lattice(&theta, &[0, 1]);
        let check = hypothesis_check(&theta, &a);
        assert!(!check.passed());
        assert!(matches!(
            verify_generalized(&theta, &WeightAssignment::ones(&theta), &a),
            Err(Error::HypothesisFailed { .. })
        ));
    }

    #[test]
    fn low_temperature_example() {
        // rp2_double with r = (1, 64): ratio = 1 / (1 + 64^{-beta})
        let rp2d = corpus::rp2_double();
        let tree = SpanningTree::build(&rp2d, &SubcomplexSpec::new([0])).unwrap();
        let w = WeightAssignment::new(vec![int(1), int(64)]).unwrap();
        let betas: Vec<u32> = (1..=12).collect();
        let report =
            low_temperature_check(&rp2d, &tree, &w, &betas, &default_low_temp_tolerance()).unwrap();
        for (i, &beta) in betas.iter().enumerate() {
            let denom = Rat::one() + int(64).pow(-(beta as i32));
            assert_eq!(report.ratios[i], denom.recip());
        }
        assert!(report.converged());
        assert!(report.strictly_decreasing());
    }

    #[test]
    fn low_temperature_rejects_flat_weights() {
        let rp2d = corpus::rp2_double();
        let tree = SpanningTree::build(&rp2d, &SubcomplexSpec::new([0])).unwrap();
        let w = WeightAssignment::ones(&rp2d);
        let err = low_temperature_check(&rp2d, &tree, &w, &[1], &default_low_temp_tolerance());
        assert!(matches!(err, Err(Error::WeightsNotGood { cell: 1 })));
    }

    #[test]
    fn low_temperature_theta() {
        let theta = corpus::theta();
        let tree = SpanningTree::build(&theta, &SubcomplexSpec::new([0])).unwrap();
        let w = WeightAssignment::new(vec![int(1), int(1000), int(1000)]).unwrap();
        let betas: Vec<u32> = (1..=8).collect();
        let report =
            low_temperature_check(&theta, &tree, &w, &betas, &default_low_temp_tolerance())
                .unwrap();
        assert!(report.converged());
    }

    #[test]
    fn positivity_and_unimodular_invariance_over_corpus() {
        for c in corpus::all().iter().filter(|c| c.dim() >= 1) {
            let dets: Vec<Rat> = [
                WeightAssignment::ones(c),
                WeightAssignment::new(vec![rat(3, 2); c.cell_count(c.dim())]).unwrap(),
            ]
            .iter()
            .map(|w| laplacian(c, w).det)
            .collect();
            for det in dets {
                assert!(det.is_positive(), "{}", c.name());
            }
        }
    }
}
