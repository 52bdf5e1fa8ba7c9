//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the values it checked. Every comparison is an exact equality of
//! arbitrary-precision rationals; the only tolerances are the stated rational
//! bounds of the low-temperature criterion and the wall-clock budgets.

use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cwkirch::complex::{CellComplex, ChainVector, SubcomplexSpec};
use cwkirch::corpus;
use cwkirch::linalg::{kernel_lattice_basis, IntMatrix};
use cwkirch::matrix_tree::{self, default_low_temp_tolerance, SubgroupSpec, WeightAssignment};
use cwkirch::network;
use cwkirch::torsion::{self, MilnorChoices};
use cwkirch::trees::{enumerate_spanning_trees, SpanningTree};
use cwkirch::{Int, Rat};

fn int(n: i64) -> Rat {
    Rat::from(Int::from(n))
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

fn random_positive_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(
        Int::from(rng.random_range(1..=9i64)),
        Int::from(rng.random_range(1..=9i64)),
    )
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    Rat::new(
        Int::from(sign * rng.random_range(0..=9i64)),
        Int::from(rng.random_range(1..=9i64)),
    )
}

#[test]
fn criterion_01_classical_reduction_on_k4() {
    let start = Instant::now();
    let k4 = corpus::k4();
    let trees = enumerate_spanning_trees(&k4);
    assert_eq!(trees.len(), 16);
    let w = WeightAssignment::ones(&k4);
    let det = matrix_tree::laplacian(&k4, &w).det;
    assert_eq!(det, int(64));
    assert_eq!(matrix_tree::gamma_x(&k4), int(4));
    let report = matrix_tree::verify_matrix_tree(&k4, &w);
    assert!(report.passed());
    assert_eq!(report.rhs, int(64));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}");
    println!("criterion 01: PASS - K4: 16 trees, det L = 64 = 4 * 16 exactly ({elapsed:?})");
}

#[test]
fn criterion_02_projective_plane_chain() {
    let start = Instant::now();
    let rp2 = corpus::rp2_min();
    assert_eq!(matrix_tree::theta_x(&rp2), Int::from(2));
    assert_eq!(matrix_tree::mu_x(&rp2), int(4));
    assert_eq!(matrix_tree::gamma_x(&rp2), int(1));
    let w = WeightAssignment::ones(&rp2);
    assert_eq!(matrix_tree::laplacian(&rp2, &w).det, int(4));
    let trees = enumerate_spanning_trees(&rp2);
    assert_eq!(trees.len(), 1);
    assert_eq!(trees[0].theta(), &Int::from(2));
    let report = torsion::torsion_report(&rp2, None, None, None).unwrap();
    assert!(report.agree());
    assert_eq!(report.tau2_milnor, rat(1, 4));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}");
    println!(
        "criterion 02: PASS - rp2_min: theta=2 mu=4 gamma=1 detL=4, tau^2 = 1/4 by all four methods ({elapsed:?})"
    );
}

#[test]
fn criterion_03_graph_torsion_is_one() {
    let start = Instant::now();
    let graphs = corpus::graphs();
    assert!(!graphs.is_empty());
    for g in &graphs {
        let report = torsion::torsion_report(g, None, None, None).unwrap();
        assert!(report.agree(), "{}", g.name());
        assert_eq!(report.tau2_milnor, int(1), "{}", g.name());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}");
    println!(
        "criterion 03: PASS - tau^2 = 1 on {} connected graphs ({elapsed:?})",
        graphs.len()
    );
}

#[test]
fn criterion_04_projection_identity_with_random_weights() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1c4);
    let mut cases = 0;
    for c in corpus::all().iter().filter(|c| c.dim() >= 1) {
        let n = c.cell_count(c.dim());
        let mut weighted = vec![c.clone()];
        for _ in 0..3 {
            let r: Vec<Rat> = (0..n).map(|_| random_positive_rat(&mut rng)).collect();
            weighted.push(c.clone().with_top_weights(r));
        }
        for wc in &weighted {
            assert_eq!(
                network::projection_tree_formula(wc),
                network::projection_direct(wc),
                "{}",
                c.name()
            );
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    println!(
        "criterion 04: PASS - tree-sum projector equals direct projector in {cases} weighted cases ({elapsed:?})"
    );
}

#[test]
fn criterion_05_branch_currents_and_solutions() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1c5);
    let mut current_checks = 0;
    let mut solve_checks = 0;
    for c in corpus::all().iter().filter(|c| c.dim() >= 1) {
        let d = c.dim();
        let n = c.cell_count(d);
        let proj = network::projection_direct(c);
        let r = c.top_weights();
        for _ in 0..10 {
            let v = ChainVector {
                degree: d,
                coords: (0..n).map(|_| random_rat(&mut rng)).collect(),
            };
            let z = network::branch_current(c, &v).unwrap();
            let rv: Vec<Rat> = v.coords.iter().zip(&r).map(|(a, s)| a / s).collect();
            assert_eq!(z.coords, proj.mul_vec(&rv), "{}", c.name());
            current_checks += 1;
        }
        // random solvable problems: p = D x, q a random cycle combination
        let dd = c.boundary(d).to_rational();
        let kernel = kernel_lattice_basis(c.boundary(d));
        for _ in 0..3 {
            let x: Vec<Rat> = (0..n).map(|_| random_rat(&mut rng)).collect();
            let p = ChainVector {
                degree: d - 1,
                coords: dd.mul_vec(&x),
            };
            let mut q = ChainVector::zero(d, n);
            for kv in kernel.vectors() {
                let coefficient = random_rat(&mut rng);
                for (slot, entry) in q.coords.iter_mut().zip(kv) {
                    *slot += &coefficient * Rat::from(entry.clone());
                }
            }
            let np = network::NetworkProblem::new(c.clone(), p, q).unwrap();
            let s = network::solve_direct(&np);
            assert!(
                network::verify_solution(&np, &s).unwrap().all_zero(),
                "{}",
                c.name()
            );
            solve_checks += 1;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 05: PASS - {current_checks} branch-current identities and {solve_checks} exact network solutions ({elapsed:?})"
    );
}

#[test]
fn criterion_06_tree_sum_decompositions() {
    let start = Instant::now();
    // cited values first
    let theta = corpus::theta();
    let report =
        matrix_tree::verify_sum_decomposition(&theta, &WeightAssignment::ones(&theta), None)
            .unwrap();
    assert!(report.passed());
    assert_eq!(report.identity.lhs, int(6));
    assert_eq!(report.terms, vec![int(2), int(2), int(2)]);

    let rp2d = corpus::rp2_double();
    let report =
        matrix_tree::verify_sum_decomposition(&rp2d, &WeightAssignment::ones(&rp2d), None).unwrap();
    assert!(report.passed());
    assert_eq!(report.identity.lhs, int(8));
    assert_eq!(report.terms, vec![int(4), int(4)]);

    let mut nontrivial = 0;
    for c in corpus::all().iter().filter(|c| c.dim() >= 1) {
        let w = WeightAssignment::of_complex(c);
        // A = boundary lattice itself
        let report = matrix_tree::verify_sum_decomposition(c, &w, None).unwrap();
        assert!(report.passed(), "{}", c.name());
        // a second subgroup: the saturation when it differs, otherwise a
        // coordinate lattice on all but the last (d-1)-cell
        let boundary = SubgroupSpec::boundary_lattice(c);
        let saturated = SubgroupSpec::saturated_boundary_lattice(c);
        let a = if saturated.basis().matrix() != boundary.basis().matrix() {
            Some(saturated)
        } else if boundary.basis().rank() > 0
            && boundary.basis().rank() == c.cell_count(c.dim() - 1) - 1
        {
            let cells: Vec<usize> = (0..c.cell_count(c.dim() - 1) - 1).collect();
            Some(SubgroupSpec::coordinate_lattice(c, &cells))
        } else {
            None
        };
        if let Some(a) = a {
            if matrix_tree::hypothesis_check(c, &a).passed() {
                let report = matrix_tree::verify_sum_decomposition(c, &w, Some(&a)).unwrap();
                assert!(report.passed(), "{} with nontrivial subgroup", c.name());
                let general = matrix_tree::verify_generalized(c, &w, &a).unwrap();
                assert!(general.passed(), "{} generalized identity", c.name());
                nontrivial += 1;
            }
        }
    }
    assert!(nontrivial >= 5, "only {nontrivial} nontrivial subgroups");
    let elapsed = start.elapsed();
    println!(
        "criterion 06: PASS - det L = sum of per-tree determinants on the corpus, {nontrivial} nontrivial subgroups included ({elapsed:?})"
    );
}

#[test]
fn criterion_07_determinant_equals_cokernel_order() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1c7);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.random_range(1..=6usize);
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            rows.push(
                (0..n)
                    .map(|_| rng.random_range(-9..=9i64))
                    .collect::<Vec<i64>>(),
            );
        }
        let m = IntMatrix::from_rows(&rows);
        let det = m.det();
        if det.is_zero() {
            continue;
        }
        assert_eq!(det.abs(), cwkirch::linalg::torsion_order_cokernel(&m));
        checked += 1;
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 07: PASS - |det| equals the cokernel torsion order on 200 random nonsingular matrices ({elapsed:?})"
    );
}

#[test]
fn criterion_08_low_temperature_limit() {
    let start = Instant::now();
    let rp2d = corpus::rp2_double();
    let tree = SpanningTree::build(&rp2d, &SubcomplexSpec::new([0])).unwrap();
    let w = WeightAssignment::new(vec![int(1), int(64)]).unwrap();
    let betas: Vec<u32> = (1..=12).collect();
    let report =
        matrix_tree::low_temperature_check(&rp2d, &tree, &w, &betas, &default_low_temp_tolerance())
            .unwrap();
    assert!(report.strictly_decreasing(), "deviations must shrink");
    assert!(report.converged(), "final deviation above 1/10^6");
    let final_dev = report.deviations.last().unwrap();
    assert!(final_dev < &rat(1, 1_000_000));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}");
    println!(
        "criterion 08: PASS - rp2_double ratios rise to 1, final |ratio-1| = {final_dev} < 1/1000000 ({elapsed:?})"
    );
}

#[test]
fn criterion_09_milnor_invariance_under_resampling() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1c9);
    let mut resamples = 0;
    for c in corpus::all() {
        let h = torsion::default_combinatorial_basis(&c);
        let reference =
            torsion::milnor_torsion_squared_with(&c, &h, &MilnorChoices::none(&c)).unwrap();
        for _ in 0..5 {
            let choices = random_choices(&c, &mut rng);
            let resampled = torsion::milnor_torsion_squared_with(&c, &h, &choices).unwrap();
            assert_eq!(resampled, reference, "{}", c.name());
            resamples += 1;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 09: PASS - Milnor torsion invariant under {resamples} random basis/splitting resamples ({elapsed:?})"
    );
}

#[test]
fn criterion_10_full_suite_within_budget() {
    let start = Instant::now();
    let all = corpus::all();
    let names: Vec<&str> = all.iter().map(|c| c.name()).collect();
    for required in [
        "k4",
        "theta",
        "circle",
        "segment",
        "rp2_min",
        "rp2_double",
        "torus_min",
        "moore_3",
        "moore_5",
        "rp2_six",
    ] {
        assert!(names.contains(&required), "missing {required}");
    }
    assert!(corpus::rp2_six().cell_count(2) >= 10);
    for c in &all {
        assert!(c.validate().passed(), "{}", c.name());
        if c.dim() >= 1 {
            let w = WeightAssignment::of_complex(c);
            assert_eq!(
                network::projection_tree_formula(c),
                network::projection_direct(c),
                "{}",
                c.name()
            );
            assert!(
                matrix_tree::verify_matrix_tree(c, &w).passed(),
                "{}",
                c.name()
            );
            assert!(
                matrix_tree::verify_sum_decomposition(c, &w, None)
                    .unwrap()
                    .passed(),
                "{}",
                c.name()
            );
        }
        let report = torsion::torsion_report(c, None, None, None).unwrap();
        assert!(report.agree(), "{}", c.name());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 10: PASS - full identity suite over {} complexes in {elapsed:?} (< 60 s)",
        all.len()
    );
}

/// Random unimodular basis changes and splitting shifts for one run.
fn random_choices(c: &CellComplex, rng: &mut ChaCha8Rng) -> MilnorChoices {
    let mut choices = MilnorChoices::none(c);
    for k in 0..=c.dim() {
        let rank_b = boundary_rank(c, k + 1);
        if rank_b >= 1 {
            choices.b_change[k] = Some(random_unimodular(rank_b, rng));
        }
        let beta = c.betti(k).unwrap();
        if rank_b >= 1 && beta >= 1 {
            choices.t_shift[k] = Some(random_small(rank_b, beta, rng));
        }
        if k >= 1 {
            let kernel_rank = kernel_lattice_basis(c.boundary(k)).rank();
            let below = boundary_rank(c, k);
            if kernel_rank >= 1 && below >= 1 {
                choices.s_shift[k] = Some(random_small(kernel_rank, below, rng));
            }
        }
    }
    choices
}

fn boundary_rank(c: &CellComplex, k: usize) -> usize {
    if k >= 1 && k <= c.dim() {
        c.boundary(k).rank()
    } else {
        0
    }
}

fn random_small(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut m = IntMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = Int::from(rng.random_range(-3..=3i64));
        }
    }
    m
}

/// Product of random elementary row operations applied to the identity.
fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..3 * n {
        match rng.random_range(0..3u8) {
            0 => {
                // add a small multiple of one row to another
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                if i != j {
                    let factor = Int::from(rng.random_range(-2..=2i64));
                    for col in 0..n {
                        let add = &factor * &m[(j, col)];
                        m[(i, col)] += add;
                    }
                }
            }
            1 => {
                let i = rng.random_range(0..n);
                for col in 0..n {
                    let neg = -m[(i, col)].clone();
                    m[(i, col)] = neg;
                }
            }
            _ => {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                if i != j {
                    for col in 0..n {
                        let a = m[(i, col)].clone();
                        let b = m[(j, col)].clone();
                        m[(i, col)] = b;
                        m[(j, col)] = a;
                    }
                }
            }
        }
    }
    assert_eq!(m.det().abs(), Int::one());
    m
}
