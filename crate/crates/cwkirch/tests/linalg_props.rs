//! Property tests for the exact linear algebra layer.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use cwkirch::linalg::{
    gram_determinant, image_lattice_basis, inclusion_index, kernel_lattice_basis, snf,
    torsion_order_cokernel, IntMatrix, LatticeBasis,
};
use cwkirch::{Int, Rat};

fn small_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn square_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(-9i64..=9, n), n)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

/// Elementary integer row operations, to build unimodular transforms.
#[derive(Clone, Debug)]
enum ElementaryOp {
    Add { from: usize, to: usize, factor: i64 },
    Negate { row: usize },
    Swap { a: usize, b: usize },
}

fn elementary_ops(n: usize) -> impl Strategy<Value = Vec<ElementaryOp>> {
    let op = prop_oneof![
        (0..n, 0..n, -2i64..=2).prop_map(|(from, to, factor)| ElementaryOp::Add {
            from,
            to,
            factor
        }),
        (0..n).prop_map(|row| ElementaryOp::Negate { row }),
        (0..n, 0..n).prop_map(|(a, b)| ElementaryOp::Swap { a, b }),
    ];
    proptest::collection::vec(op, 0..12)
}

fn unimodular_from(n: usize, ops: &[ElementaryOp]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    let in_range = |op: &ElementaryOp| match *op {
        ElementaryOp::Add { from, to, .. } => from < n && to < n,
        ElementaryOp::Negate { row } => row < n,
        ElementaryOp::Swap { a, b } => a < n && b < n,
    };
    for op in ops.iter().filter(|op| in_range(op)) {
        match *op {
            ElementaryOp::Add { from, to, factor } if from != to => {
                for col in 0..n {
                    let add = Int::from(factor) * &m[(from, col)];
                    m[(to, col)] += add;
                }
            }
            ElementaryOp::Negate { row } => {
                for col in 0..n {
                    let neg = -m[(row, col)].clone();
                    m[(row, col)] = neg;
                }
            }
            ElementaryOp::Swap { a, b } if a != b => {
                for col in 0..n {
                    let x = m[(a, col)].clone();
                    let y = m[(b, col)].clone();
                    m[(a, col)] = y;
                    m[(b, col)] = x;
                }
            }
            _ => {}
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_round_trip(m in small_matrix(6)) {
        let r = snf(&m);
        prop_assert_eq!(r.u.mul(&m).mul(&r.v), r.s.clone());
        prop_assert_eq!(r.u.det().abs(), Int::one());
        prop_assert_eq!(r.v.det().abs(), Int::one());
        let factors = r.invariant_factors();
        for w in factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert_eq!(factors.len(), m.rank());
        for i in 0..r.s.rows() {
            for j in 0..r.s.cols() {
                if i != j {
                    prop_assert!(r.s[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn det_is_cokernel_torsion_order(m in square_matrix(6)) {
        let det = m.det();
        prop_assume!(!det.is_zero());
        prop_assert_eq!(det.abs(), torsion_order_cokernel(&m));
    }

    #[test]
    fn kernel_and_image_bases_are_coherent(m in small_matrix(6)) {
        let kernel = kernel_lattice_basis(&m);
        for v in kernel.vectors() {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(kernel.rank(), m.cols() - m.rank());
        // saturated: the kernel basis extends to a basis of the ambient lattice
        if kernel.rank() > 0 {
            let factors = snf(&kernel.matrix()).invariant_factors();
            prop_assert!(factors.iter().all(|d| d.is_one()));
        }
        // every column of m is an integer combination of the image basis
        let image = image_lattice_basis(&m);
        prop_assert_eq!(image.rank(), m.rank());
        if image.rank() > 0 {
            let coords = image
                .to_rational()
                .solve_matrix(&m.to_rational())
                .expect("columns lie in the image span");
            for i in 0..coords.rows() {
                for j in 0..coords.cols() {
                    prop_assert!(coords[(i, j)].is_integer());
                }
            }
        }
    }

    #[test]
    fn gram_determinant_is_a_lattice_invariant(
        m in small_matrix(5),
        ops in elementary_ops(5),
    ) {
        let basis = image_lattice_basis(&m);
        prop_assume!(basis.rank() > 0);
        let gram = gram_determinant(&basis, None).unwrap();
        prop_assert!(gram.is_positive());
        let u = unimodular_from(basis.rank(), &ops[..ops.len().min(8)]);
        let transformed = basis.matrix().mul(&u);
        let new_basis = LatticeBasis::new(
            transformed.rows(),
            (0..transformed.cols()).map(|j| transformed.column(j)).collect(),
        )
        .unwrap();
        prop_assert_eq!(gram_determinant(&new_basis, None).unwrap(), gram);
    }

    #[test]
    fn inclusion_index_scales_squared_covolume(
        m in small_matrix(4),
        ops in elementary_ops(4),
        scale in 1i64..=3,
    ) {
        let sup = image_lattice_basis(&m);
        prop_assume!(sup.rank() > 0);
        // a genuine sublattice: unimodular transform followed by scaling one
        // basis vector
        let u = unimodular_from(sup.rank(), &ops[..ops.len().min(6)]);
        let mut change = u.clone();
        for i in 0..change.rows() {
            let scaled = &change[(i, 0)] * Int::from(scale);
            change[(i, 0)] = scaled;
        }
        let sub_matrix = sup.matrix().mul(&change);
        let sub = LatticeBasis::new(
            sub_matrix.rows(),
            (0..sub_matrix.cols()).map(|j| sub_matrix.column(j)).collect(),
        )
        .unwrap();
        let index = inclusion_index(&sub, &sup).unwrap();
        prop_assert_eq!(index.clone(), Int::from(scale));
        // index^2 * covolume(sup)^2 = covolume(sub)^2, both stored squared
        let gram_sup = gram_determinant(&sup, None).unwrap();
        let gram_sub = gram_determinant(&sub, None).unwrap();
        prop_assert_eq!(Rat::from(&index * &index) * gram_sup, gram_sub);
    }
}
