//! A larger fixed surface: the seven-vertex triangulation of the torus
//! (vertices Z/7, facets {i, i+1, i+3} and {i, i+2, i+3}). Its 1-skeleton is
//! the complete graph K7, so the degree-0 tree sum runs over 16807 spanning
//! trees while the four torsion methods must still agree exactly.

use cwkirch::complex::CellComplex;
use cwkirch::linalg::IntMatrix;
use cwkirch::matrix_tree::{verify_matrix_tree, verify_sum_decomposition, WeightAssignment};
use cwkirch::torsion::torsion_report;
use cwkirch::{Int, Rat};

fn torus_seven() -> CellComplex {
    let n = 7usize;
    let mut edge_set = std::collections::BTreeSet::new();
    let mut facets = Vec::new();
    for i in 0..n {
        for offsets in [[0, 1, 3], [0, 2, 3]] {
            let mut f: Vec<usize> = offsets.iter().map(|o| (i + o) % n).collect();
            f.sort_unstable();
            for pair in [(f[0], f[1]), (f[0], f[2]), (f[1], f[2])] {
                edge_set.insert(pair);
            }
            facets.push(f);
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    assert_eq!(edges.len(), 21);
    let edge_index = |a: usize, b: usize| edges.binary_search(&(a.min(b), a.max(b))).unwrap();
    let mut d1 = IntMatrix::zero(n, edges.len());
    for (j, &(a, b)) in edges.iter().enumerate() {
        d1[(a, j)] = Int::from(-1);
        d1[(b, j)] = Int::from(1);
    }
    let mut d2 = IntMatrix::zero(edges.len(), facets.len());
    for (j, f) in facets.iter().enumerate() {
        d2[(edge_index(f[1], f[2]), j)] = Int::from(1);
        d2[(edge_index(f[0], f[2]), j)] = Int::from(-1);
        d2[(edge_index(f[0], f[1]), j)] = Int::from(1);
    }
    CellComplex::new(vec![n, edges.len(), facets.len()], vec![d1, d2]).with_name("torus_seven")
}

#[test]
fn triangulated_torus_identities() {
    let c = torus_seven();
    assert!(c.validate().passed());
    assert_eq!(c.euler_characteristic(), 0);
    assert_eq!(c.betti(0).unwrap(), 1);
    assert_eq!(c.betti(1).unwrap(), 2);
    assert_eq!(c.betti(2).unwrap(), 1);

    let w = WeightAssignment::ones(&c);
    assert!(verify_matrix_tree(&c, &w).passed());
    assert!(verify_sum_decomposition(&c, &w, None).unwrap().passed());

    let report = torsion_report(&c, None, None, None).unwrap();
    assert!(
        report.agree(),
        "milnor={} laplacian={} tree={} truncation={}",
        report.tau2_milnor,
        report.tau2_laplacian,
        report.tau2_tree,
        report.tau2_truncation
    );
    assert_eq!(report.tau2_milnor, Rat::from(Int::from(1)));
    // the degree-0 factor enumerates the spanning trees of K7
    assert_eq!(
        report.degrees[0].tree_sum_theta2,
        Rat::from(Int::from(16807))
    );
}
