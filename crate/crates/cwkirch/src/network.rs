//! The higher-dimensional resistive network problem.
//!
//! A network problem on a weighted d-complex consists of a boundary current
//! `p` in `B_{d-1}` and a cycle voltage `q` in `Z_d`. A solution is a pair
//! `(V, J)` of top-degree chains with
//!
//! * `V = R J`              (Ohm's law),
//! * `D_d J = p`            (current law),
//! * `<V, z> = <q, z>`      for every cycle `z` (voltage law),
//!
//! where `R` is the diagonal resistance operator. The problem is solved
//! both directly (exact elimination) and through the spanning-tree
//! projection formula, and the two routes are cross-checked in the tests.

use num_traits::Zero;

use crate::complex::{CellComplex, ChainVector};
use crate::linalg::{dot, kernel_lattice_basis, RatMatrix};
use crate::trees::enumerate_spanning_trees;
use crate::{Error, Rat, Result};

/// A network problem: complex with top-degree resistances, boundary current
/// `p` (degree d-1) and cycle voltage `q` (degree d).
#[derive(Clone, Debug)]
pub struct NetworkProblem {
    complex: CellComplex,
    p: ChainVector,
    q: ChainVector,
}

impl NetworkProblem {
    /// Validates shapes and the membership conditions `p in B_{d-1}` and
    /// `q in Z_d` up front.
    pub fn new(complex: CellComplex, p: ChainVector, q: ChainVector) -> Result<Self> {
        let d = complex.dim();
        assert!(d >= 1, "network problems need dimension >= 1");
        if p.degree != d - 1 {
            return Err(Error::DegreeOutOfRange {
                degree: p.degree,
                dim: d,
            });
        }
        if q.degree != d {
            return Err(Error::DegreeOutOfRange {
                degree: q.degree,
                dim: d,
            });
        }
        p.check_len(&complex)?;
        q.check_len(&complex)?;
        let dd = complex.boundary(d).to_rational();
        if dd.solve(&p.coords).is_none() {
            return Err(Error::NotABoundaryCurrent);
        }
        if !dd.mul_vec(&q.coords).iter().all(|x| x.is_zero()) {
            return Err(Error::NotACycleVoltage);
        }
        Ok(NetworkProblem { complex, p, q })
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn p(&self) -> &ChainVector {
        &self.p
    }

    pub fn q(&self) -> &ChainVector {
        &self.q
    }
}

/// A solution pair `(V, J)` of top-degree chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSolution {
    pub voltage: ChainVector,
    pub current: ChainVector,
}

/// Exact residuals of the three network laws for a candidate solution.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    /// `V - R J`, one entry per d-cell.
    pub ohm: Vec<Rat>,
    /// `D_d J - p`, one entry per (d-1)-cell.
    pub current: Vec<Rat>,
    /// `<V - q, z>` over the integer kernel basis of `D_d`.
    pub voltage: Vec<Rat>,
}

impl ResidualReport {
    pub fn all_zero(&self) -> bool {
        self.ohm.iter().all(|x| x.is_zero())
            && self.current.iter().all(|x| x.is_zero())
            && self.voltage.iter().all(|x| x.is_zero())
    }
}

/// The orthogonal projection of `C_d` onto the cycle space `Z_d` in the
/// modified inner product `<a, b>_R = sum r_i a_i b_i`.
///
/// Computed as `S (S^t R S)^{-1} S^t R` on an integer kernel basis `S`;
/// the zero matrix when `Z_d = 0`.
pub fn projection_direct(c: &CellComplex) -> RatMatrix {
    let d = c.dim();
    assert!(d >= 1, "projection needs dimension >= 1");
    let n = c.cell_count(d);
    let kernel = kernel_lattice_basis(c.boundary(d));
    if kernel.rank() == 0 {
        return RatMatrix::zero(n, n);
    }
    let s = kernel.to_rational();
    let r = RatMatrix::diagonal(&c.top_weights());
    let st_r = s.transpose().mul(&r);
    let gram = st_r.mul(&s);
    let inv = gram.inverse().expect("kernel Gram matrix is invertible");
    s.mul(&inv).mul(&st_r)
}

/// The projection onto `Z_d` as the weighted spanning-tree sum
/// `(1/Delta) * sum_T w_T tbar_T` with `Delta = sum_T w_T`.
pub fn projection_tree_formula(c: &CellComplex) -> RatMatrix {
    let d = c.dim();
    assert!(d >= 1, "projection needs dimension >= 1");
    let n = c.cell_count(d);
    let r = c.top_weights();
    let mut sum = RatMatrix::zero(n, n);
    let mut delta = Rat::zero();
    for tree in enumerate_spanning_trees(c) {
        let w = tree.weight_with(&r);
        sum = sum.add(&tree.tbar().scale(&w));
        delta += w;
    }
    sum.scale(&delta.recip())
}

/// Solves the network problem exactly.
///
/// `J_0` is the unique preimage of `p` in the R-orthogonal complement of the
/// cycle space, obtained from `L y = p` with `L = D diag(1/r) D^t` and
/// `J_0 = diag(1/r) D^t y`; `J_1` is the R-orthogonal projection of
/// `R^{-1} q` onto the cycle space.
pub fn solve_direct(np: &NetworkProblem) -> NetworkSolution {
    let c = np.complex();
    let d = c.dim();
    let r = c.top_weights();
    let dd = c.boundary(d).to_rational();
    let r_inv: Vec<Rat> = r.iter().map(|x| x.recip()).collect();
    let l = dd.mul(&RatMatrix::diagonal(&r_inv)).mul(&dd.transpose());
    let y = l
        .solve(&np.p.coords)
        .expect("p lies in the boundary space, so L y = p is consistent");
    let j0: Vec<Rat> = {
        let dt_y = dd.transpose().mul_vec(&y);
        dt_y.iter().zip(&r_inv).map(|(a, s)| a * s).collect()
    };
    let proj = projection_direct(c);
    let r_inv_q: Vec<Rat> = np.q.coords.iter().zip(&r_inv).map(|(a, s)| a * s).collect();
    let j1 = proj.mul_vec(&r_inv_q);
    let j: Vec<Rat> = j0.iter().zip(&j1).map(|(a, b)| a + b).collect();
    let v: Vec<Rat> = j.iter().zip(&r).map(|(a, s)| a * s).collect();
    NetworkSolution {
        voltage: ChainVector {
            degree: d,
            coords: v,
        },
        current: ChainVector {
            degree: d,
            coords: j,
        },
    }
}

/// The unique cycle `z` with `V - R z` in the unweighted coboundary space,
/// computed branch by branch from the spanning-tree sum:
/// `<z, b> = (1/Delta) sum_T (w_T / r_b) <V, tbar_T(b)>`.
pub fn branch_current(c: &CellComplex, v: &ChainVector) -> Result<ChainVector> {
    let d = c.dim();
    assert!(d >= 1, "branch currents need dimension >= 1");
    if v.degree != d {
        return Err(Error::DegreeOutOfRange {
            degree: v.degree,
            dim: d,
        });
    }
    v.check_len(c)?;
    let n = c.cell_count(d);
    let r = c.top_weights();
    let mut z = vec![Rat::zero(); n];
    let mut delta = Rat::zero();
    for tree in enumerate_spanning_trees(c) {
        let w = tree.weight_with(&r);
        for b in 0..n {
            let pairing = dot(&v.coords, &tree.tbar().column(b));
            z[b] += &w / &r[b] * pairing;
        }
        delta += w;
    }
    let inv = delta.recip();
    for x in z.iter_mut() {
        *x = &*x * &inv;
    }
    Ok(ChainVector {
        degree: d,
        coords: z,
    })
}

/// Exact residuals of the three laws for a candidate solution.
pub fn verify_solution(np: &NetworkProblem, s: &NetworkSolution) -> Result<ResidualReport> {
    let c = np.complex();
    let d = c.dim();
    s.voltage.check_len(c)?;
    s.current.check_len(c)?;
    let r = c.top_weights();
    let ohm: Vec<Rat> = s
        .voltage
        .coords
        .iter()
        .zip(s.current.coords.iter().zip(&r))
        .map(|(v, (j, rb))| v - &(j * rb))
        .collect();
    let dd = c.boundary(d).to_rational();
    let current: Vec<Rat> = dd
        .mul_vec(&s.current.coords)
        .iter()
        .zip(&np.p.coords)
        .map(|(a, b)| a - b)
        .collect();
    let kernel = kernel_lattice_basis(c.boundary(d));
    let voltage: Vec<Rat> = kernel
        .vectors()
        .iter()
        .map(|zv| {
            let zq: Vec<Rat> = zv.iter().map(|x| Rat::from(x.clone())).collect();
            dot(&s.voltage.coords, &zq) - dot(&np.q.coords, &zq)
        })
        .collect();
    Ok(ResidualReport {
        ohm,
        current,
        voltage,
    })
}
