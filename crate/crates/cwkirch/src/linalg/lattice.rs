//! Integer lattices: canonical bases, covolumes, and inclusion indices.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use super::snf::snf;
use crate::{Error, Int, Rat, Result};

/// A list of Q-linearly independent integer vectors spanning a lattice in
/// `Z^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<Int>>,
}

impl LatticeBasis {
    /// Wraps explicit basis vectors; returns an error if they are dependent.
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<Int>>) -> Result<Self> {
        for v in &vectors {
            assert_eq!(v.len(), ambient_dim, "vector length mismatch");
        }
        let b = LatticeBasis {
            ambient_dim,
            vectors,
        };
        if b.matrix().rank() != b.rank() {
            return Err(Error::DependentVectors);
        }
        Ok(b)
    }

    pub fn empty(ambient_dim: usize) -> Self {
        LatticeBasis {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Int>] {
        &self.vectors
    }

    /// The basis as an `ambient_dim x rank` matrix with the vectors as columns.
    pub fn matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.ambient_dim, self.vectors.len());
        for (j, v) in self.vectors.iter().enumerate() {
            for i in 0..self.ambient_dim {
                m[(i, j)] = v[i].clone();
            }
        }
        m
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.matrix().to_rational()
    }
}

/// Canonical column-style Hermite normal form of the column lattice of `m`.
///
/// The resulting columns have strictly increasing pivot rows, positive
/// pivots, and entries in earlier columns reduced modulo the pivot, so equal
/// lattices yield identical bases.
pub fn column_hnf(m: &IntMatrix) -> Vec<Vec<Int>> {
    let rows = m.rows();
    let cols = m.cols();
    let mut w: Vec<Vec<Int>> = (0..cols).map(|j| m.column(j)).collect();
    let mut cur = 0;
    for row in 0..rows {
        if cur == cols {
            break;
        }
        loop {
            let mut best: Option<(Int, usize)> = None;
            for (j, col) in w.iter().enumerate().skip(cur) {
                if col[row].is_zero() {
                    continue;
                }
                let a = col[row].abs();
                match &best {
                    Some((b, _)) if *b <= a => {}
                    _ => best = Some((a, j)),
                }
            }
            let Some((_, jmin)) = best else {
                break;
            };
            w.swap(cur, jmin);
            let mut clean = true;
            for j in cur + 1..cols {
                if w[j][row].is_zero() {
                    continue;
                }
                let q = &w[j][row] / &w[cur][row];
                if !q.is_zero() {
                    for i in 0..rows {
                        let d = &q * &w[cur][i];
                        w[j][i] -= d;
                    }
                }
                if !w[j][row].is_zero() {
                    clean = false;
                }
            }
            if clean {
                if w[cur][row].is_negative() {
                    for x in w[cur].iter_mut() {
                        *x = -x.clone();
                    }
                }
                // reduce earlier columns at this pivot row into [0, pivot)
                for j in 0..cur {
                    let q = w[j][row].div_floor(&w[cur][row]);
                    if !q.is_zero() {
                        for i in 0..rows {
                            let d = &q * &w[cur][i];
                            w[j][i] -= d;
                        }
                    }
                }
                cur += 1;
                break;
            }
        }
    }
    w.truncate(cur);
    w
}

/// Z-basis of the image lattice `m(Z^c)` in canonical Hermite form.
pub fn image_lattice_basis(m: &IntMatrix) -> LatticeBasis {
    LatticeBasis {
        ambient_dim: m.rows(),
        vectors: column_hnf(m),
    }
}

/// Z-basis of `ker(m)` over the integers.
///
/// The kernel of an integer matrix is automatically saturated (the quotient
/// `Z^c / ker` embeds in the image, which is free). The basis is read off
/// the unimodular column transform of the Smith form and canonicalized by
/// Hermite reduction, so it generates all of it.
pub fn kernel_lattice_basis(m: &IntMatrix) -> LatticeBasis {
    let r = snf(m);
    let rank = r.rank();
    let cols = m.cols();
    let gens = IntMatrix::zero(cols, cols - rank);
    let mut gens = gens;
    for j in rank..cols {
        for i in 0..cols {
            gens[(i, j - rank)] = r.v[(i, j)].clone();
        }
    }
    LatticeBasis {
        ambient_dim: cols,
        vectors: column_hnf(&gens),
    }
}

/// Gram determinant of the basis, i.e. the squared covolume of the lattice.
///
/// `metric`, when given, lists the positive squared lengths of the ambient
/// basis vectors (a diagonal modified inner product). The empty basis has
/// Gram determinant 1. Dependent vectors are rejected: a vanishing Gram
/// determinant signals an ill-posed covolume.
pub fn gram_determinant(basis: &LatticeBasis, metric: Option<&[Rat]>) -> Result<Rat> {
    if let Some(r) = metric {
        assert_eq!(r.len(), basis.ambient_dim(), "metric length mismatch");
    }
    let n = basis.rank();
    let mut g = RatMatrix::zero(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = Rat::zero();
            for l in 0..basis.ambient_dim() {
                let term = Rat::from(&basis.vectors[i][l] * &basis.vectors[j][l]);
                match metric {
                    Some(r) => s += term * &r[l],
                    None => s += term,
                }
            }
            g[(i, j)] = s.clone();
            g[(j, i)] = s;
        }
    }
    let det = g.det();
    if det.is_zero() {
        return Err(Error::DependentVectors);
    }
    Ok(det)
}

/// Index `[sup : sub]` of one lattice in another.
///
/// Requires equal ranks and genuine containment of `sub` in `sup`; the index
/// is the absolute determinant of the (integer) change-of-basis matrix.
pub fn inclusion_index(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<Int> {
    if sub.rank() != sup.rank() {
        return Err(Error::LatticeRankMismatch {
            sub: sub.rank(),
            sup: sup.rank(),
        });
    }
    assert_eq!(sub.ambient_dim(), sup.ambient_dim());
    let change = sup
        .to_rational()
        .solve_matrix(&sub.to_rational())
        .ok_or(Error::NotContained)?;
    for i in 0..change.rows() {
        for j in 0..change.cols() {
            if !change[(i, j)].is_integer() {
                return Err(Error::NotContained);
            }
        }
    }
    let det = change.det();
    if det.is_zero() {
        return Err(Error::DependentVectors);
    }
    Ok(det.to_integer().abs())
}

/// The saturation `span_Q(basis) ∩ Z^n` of a lattice.
pub fn saturate(basis: &LatticeBasis) -> LatticeBasis {
    let n = basis.ambient_dim();
    if basis.rank() == 0 {
        return LatticeBasis::empty(n);
    }
    // integer spanning set of the orthogonal complement of the span
    let comp = basis.to_rational().transpose().nullspace();
    if comp.is_empty() {
        // full-rank lattice: the saturation is all of Z^n
        return image_lattice_basis(&IntMatrix::identity(n));
    }
    let mut m = IntMatrix::zero(comp.len(), n);
    for (i, v) in comp.iter().enumerate() {
        let lcm = v.iter().fold(Int::one(), |a, x| a.lcm(x.denom()));
        for (j, x) in v.iter().enumerate() {
            m[(i, j)] = (x * Rat::from(lcm.clone())).to_integer();
        }
    }
    kernel_lattice_basis(&m)
}
