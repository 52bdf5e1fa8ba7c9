//! Bundled example complexes used by the test suite and the CLI.
//!
//! All boundary matrices are written down explicitly; orientation conventions
//! live here, not in the algorithms.

use crate::complex::CellComplex;
use crate::linalg::IntMatrix;

/// Complete graph on four vertices; edges in lexicographic order
/// (01, 02, 03, 12, 13, 23), each oriented from the smaller vertex.
pub fn k4() -> CellComplex {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    CellComplex::new(vec![4, 6], vec![incidence(4, &edges)]).with_name("k4")
}

/// Two vertices joined by three parallel edges, all oriented v0 -> v1.
pub fn theta() -> CellComplex {
    let edges = [(0, 1), (0, 1), (0, 1)];
    CellComplex::new(vec![2, 3], vec![incidence(2, &edges)]).with_name("theta")
}

/// One vertex with a single loop edge.
pub fn circle() -> CellComplex {
    CellComplex::new(vec![1, 1], vec![IntMatrix::zero(1, 1)]).with_name("circle")
}

/// Two vertices joined by a single edge.
pub fn segment() -> CellComplex {
    CellComplex::new(vec![2, 1], vec![incidence(2, &[(0, 1)])]).with_name("segment")
}

/// Minimal CW structure on the real projective plane: one cell per degree,
/// the 2-cell attached along the loop with degree 2.
pub fn rp2_min() -> CellComplex {
    moore(2).with_name("rp2_min")
}

/// One vertex, one loop, and two 2-cells each attached with degree 2.
pub fn rp2_double() -> CellComplex {
    CellComplex::new(
        vec![1, 1, 2],
        vec![IntMatrix::zero(1, 1), IntMatrix::from_rows(&[vec![2, 2]])],
    )
    .with_name("rp2_double")
}

/// Minimal CW torus: one vertex, two loops, one 2-cell with zero boundary.
pub fn torus_min() -> CellComplex {
    CellComplex::new(
        vec![1, 2, 1],
        vec![IntMatrix::zero(1, 2), IntMatrix::zero(2, 1)],
    )
    .with_name("torus_min")
}

/// Moore complex for Z/n in degree 1: one vertex, one loop, one 2-cell
/// attached with degree n.
pub fn moore(n: i64) -> CellComplex {
    CellComplex::new(
        vec![1, 1, 1],
        vec![IntMatrix::zero(1, 1), IntMatrix::from_rows(&[vec![n]])],
    )
    .with_name(format!("moore_{n}"))
}

/// The six-vertex triangulation of the real projective plane: 6 vertices,
/// all 15 edges of K6, and 10 triangles, every edge in exactly two of them.
pub fn rp2_six() -> CellComplex {
    let facets: [[usize; 3]; 10] = [
        [0, 1, 2],
        [0, 1, 3],
        [0, 2, 4],
        [0, 3, 5],
        [0, 4, 5],
        [1, 2, 5],
        [1, 3, 4],
        [1, 4, 5],
        [2, 3, 4],
        [2, 3, 5],
    ];
    simplicial_surface("rp2_six", 6, &facets)
}

/// Builds the 2-complex of a simplicial surface on `n` vertices whose edge
/// set is all pairs appearing in the facets, lexicographically ordered.
fn simplicial_surface(name: &str, n: usize, facets: &[[usize; 3]]) -> CellComplex {
    let mut edge_set = std::collections::BTreeSet::new();
    for f in facets {
        let [a, b, c] = *f;
        edge_set.insert((a.min(b), a.max(b)));
        edge_set.insert((a.min(c), a.max(c)));
        edge_set.insert((b.min(c), b.max(c)));
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    let edge_index = |a: usize, b: usize| {
        edges
            .binary_search(&(a.min(b), a.max(b)))
            .expect("edge present")
    };
    let d1 = incidence(n, &edges);
    let mut d2 = IntMatrix::zero(edges.len(), facets.len());
    for (j, f) in facets.iter().enumerate() {
        let mut s = *f;
        s.sort_unstable();
        let [a, b, c] = s;
        // boundary of [a,b,c] = [b,c] - [a,c] + [a,b]
        d2[(edge_index(b, c), j)] = crate::Int::from(1);
        d2[(edge_index(a, c), j)] = crate::Int::from(-1);
        d2[(edge_index(a, b), j)] = crate::Int::from(1);
    }
    CellComplex::new(vec![n, edges.len(), facets.len()], vec![d1, d2]).with_name(name)
}

fn incidence(vertices: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut m = IntMatrix::zero(vertices, edges.len());
    for (j, &(a, b)) in edges.iter().enumerate() {
        if a == b {
            continue; // loop edge: zero boundary
        }
        m[(a, j)] = crate::Int::from(-1);
        m[(b, j)] = crate::Int::from(1);
    }
    m
}

/// Every bundled complex, sorted by name.
pub fn all() -> Vec<CellComplex> {
    let mut v = vec![
        k4(),
        theta(),
        circle(),
        segment(),
        rp2_min(),
        rp2_double(),
        torus_min(),
        moore(3),
        moore(5),
        rp2_six(),
    ];
    v.sort_by(|a, b| a.name().cmp(b.name()));
    v
}

/// The connected graphs (dimension-one complexes) in the corpus.
pub fn graphs() -> Vec<CellComplex> {
    all().into_iter().filter(|c| c.dim() == 1).collect()
}
