use std::collections::HashSet;

use proptest::prelude::*;
use qcasc_cascade::generate::{mn_cascade, Family};
use qcasc_cascade::MnCascade;
use qcasc_grid2d::{compile_mn_2d, embed_tree, lightcone_bound, route_permutation, Grid2dError, GridLayout};
use qcasc_ir::{depth, Circuit, Connectivity, Gate};
use qcasc_numerics::{Mat, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Follows the labels through a swap circuit: `out[cell]` is the label that
/// ends on `cell` when cell `i` starts with label `i`.
fn track(c: &Circuit) -> Vec<usize> {
    let mut at: Vec<usize> = (0..c.total_qubits()).collect();
    for g in &c.gates {
        match g {
            Gate::Swap { a, b } => at.swap(*a, *b),
            other => panic!("unexpected {} gate", other.kind()),
        }
    }
    at
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.random_range(0..=i));
    }
    p
}

fn realizes(c: &Circuit, perm: &[usize]) -> bool {
    let at = track(c);
    (0..perm.len()).all(|i| at[perm[i]] == i)
}

/// Largest deviation of the compiled data block from the naive staircase,
/// with the ancilla leak.
fn data_error(c: &MnCascade, compiled: &Circuit) -> (f64, f64) {
    let reference = c.lower_naive().unitary_of().unwrap();
    let dim = reference.rows();
    let (mut worst, mut leak) = (0.0f64, 0.0f64);
    for col in 0..dim {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[col] = C64::new(1.0, 0.0);
        let (out, residual) = compiled.apply_sparse(&e, 1e-14).unwrap();
        leak = leak.max(residual);
        for row in 0..dim {
            worst = worst.max((out[row] - reference[(row, col)]).norm());
        }
    }
    (worst, leak)
}

fn antidiagonal(m: usize, seed: u64) -> MnCascade {
    mn_cascade(m, Family::AntiDiagonal, seed)
}

#[test]
fn four_leaves_fit_small_grid() {
    let e = embed_tree(4).unwrap();
    assert!(e.width <= 4 && e.height <= 4);
    assert!(e.max_edge_length <= 2);
    assert_eq!(e.leaf_count(), 4);
}

#[test]
fn one_leaf_is_one_cell() {
    let e = embed_tree(1).unwrap();
    assert_eq!((e.width, e.height, e.cells.len()), (1, 1, 1));
    assert!(e.edges.is_empty());
    assert!(matches!(embed_tree(0), Err(Grid2dError::NoLeaves)));
}

#[test]
fn embedding_is_planar_and_compact() {
    for leaves in [2usize, 3, 8, 16, 64, 256, 1024] {
        let e = embed_tree(leaves).unwrap();
        assert!(e.leaf_count() >= leaves);
        let vertices: HashSet<_> = e.cells.iter().copied().collect();
        assert_eq!(vertices.len(), e.cells.len(), "vertices share a cell");
        assert!(e.cells.iter().all(|&(x, y)| x < e.width && y < e.height));
        assert!(e.cell_count() <= 4 * e.leaf_count(), "{} cells for {} leaves", e.cell_count(), e.leaf_count());
        let mut used = HashSet::new();
        for edge in &e.edges {
            assert_eq!(edge.cells[0], e.cells[edge.parent]);
            assert_eq!(*edge.cells.last().unwrap(), e.cells[edge.child]);
            for w in edge.cells.windows(2) {
                assert_eq!(w[0].0.abs_diff(w[1].0) + w[0].1.abs_diff(w[1].1), 1);
            }
            for &cell in &edge.cells[1..edge.cells.len() - 1] {
                assert!(!vertices.contains(&cell), "edge runs through a vertex");
                assert!(used.insert(cell), "edges overlap");
            }
        }
        let total: usize = e.per_level_edge_lengths.iter().sum();
        assert!((total as f64) <= 2.0 * (e.leaf_count() as f64).sqrt(), "level sum {total}");
        assert_eq!(e, embed_tree(leaves).unwrap());
    }
}

#[test]
fn edge_lengths_shrink_towards_leaves() {
    let e = embed_tree(1024).unwrap();
    let l = &e.per_level_edge_lengths;
    for d in 2..l.len() {
        assert!(l[d] * 2 <= l[d - 2].max(1) + 1, "{l:?}");
    }
}

#[test]
fn identity_routes_to_nothing() {
    let c = route_permutation(&(0..12).collect::<Vec<_>>(), 4, 3).unwrap();
    assert!(c.gates.is_empty());
}

#[test]
fn neighbour_swap_is_one_gate() {
    for (a, b) in [(0usize, 1usize), (5, 9), (10, 11)] {
        let mut perm: Vec<usize> = (0..12).collect();
        perm.swap(a, b);
        let c = route_permutation(&perm, 4, 3).unwrap();
        assert_eq!(c.gates.len(), 1, "{a} <-> {b}");
        assert!(realizes(&c, &perm));
    }
}

#[test]
fn non_bijection_is_rejected() {
    assert!(matches!(route_permutation(&[0, 0, 1, 2], 2, 2), Err(Grid2dError::NotABijection { .. })));
    assert!(matches!(route_permutation(&[0, 1, 2], 2, 2), Err(Grid2dError::NotABijection { .. })));
    assert!(matches!(route_permutation(&[0, 1, 2, 4], 2, 2), Err(Grid2dError::NotABijection { .. })));
}

#[test]
fn staircase_layout_uses_every_cell() {
    for m in [1usize, 2, 4, 5, 9, 64] {
        let l = GridLayout::for_staircase(m).unwrap();
        assert_eq!(l.placement.len(), l.embedding.cell_count());
        let cells: HashSet<_> = l.placement.iter().copied().collect();
        assert_eq!(cells.len(), l.placement.len());
    }
    assert!(matches!(GridLayout::for_staircase(0), Err(Grid2dError::Empty)));
}

#[test]
fn single_gate_compiles_to_neighbours() {
    let x = Mat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let c = MnCascade::new(vec![x]).unwrap();
    let out = compile_mn_2d(&c).unwrap();
    assert!(out.circuit.adjacency_violations().is_empty());
    assert!(matches!(out.circuit.connectivity, Connectivity::Grid2D { .. }));
    let (err, leak) = data_error(&c, &out.circuit);
    assert!(err < 1e-9 && leak < 1e-9, "{err} {leak}");
}

#[test]
fn small_staircases_match_naive() {
    for m in 1..=6usize {
        for family in [Family::Haar, Family::AntiDiagonal] {
            let c = mn_cascade(m, family, 17 + m as u64);
            let out = compile_mn_2d(&c).unwrap();
            assert!(out.circuit.adjacency_violations().is_empty(), "m = {m}");
            out.circuit.validate().unwrap();
            let (err, leak) = data_error(&c, &out.circuit);
            assert!(err < 1e-6 && leak < 1e-6, "m = {m}: {err} {leak}");
            assert_eq!(out.report.ancilla_count, out.circuit.num_ancilla);
            assert_eq!(out.circuit.total_qubits(), GridLayout::for_staircase(m).unwrap().embedding.cell_count());
        }
    }
}

#[test]
fn four_gates_fit_twenty_two_qubits() {
    let c = mn_cascade(4, Family::Haar, 3);
    let out = compile_mn_2d(&c).unwrap();
    assert!(out.circuit.total_qubits() <= 22);
}

#[test]
fn depth_grows_like_square_root() {
    let d = |m: usize| compile_mn_2d(&antidiagonal(m, 5)).unwrap().report.depth_basis as f64;
    let (d16, d64, d256) = (d(16), d(64), d(256));
    for r in [d64 / d16, d256 / d64] {
        assert!((1.6..=2.6).contains(&r), "depths {d16} {d64} {d256}");
    }
}

#[test]
fn depth_respects_lightcone() {
    for m in [3usize, 8, 32, 100] {
        let out = compile_mn_2d(&antidiagonal(m, 1)).unwrap();
        assert!(depth(&out.circuit).unwrap() >= lightcone_bound(&out.circuit, 0, m));
        assert!(out.circuit.adjacency_violations().is_empty());
    }
}

#[test]
fn empty_staircase_is_rejected() {
    assert!(matches!(compile_mn_2d(&MnCascade::new(vec![]).unwrap()), Err(Grid2dError::Empty)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routing_realizes_permutation(w in 1usize..7, h in 1usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perm = random_perm(w * h, &mut rng);
        let c = route_permutation(&perm, w, h).unwrap();
        prop_assert!(realizes(&c, &perm));
        prop_assert!(c.adjacency_violations().is_empty());
        prop_assert!(depth(&c).unwrap() <= 3 * (w + h));
        let back = track(&c.inverse());
        let forward = track(&c);
        prop_assert!((0..w * h).all(|i| forward[back[i]] == i || back[forward[i]] == i));
    }

    #[test]
    fn reversed_network_undoes_routing(w in 1usize..6, h in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perm = random_perm(w * h, &mut rng);
        let mut c = route_permutation(&perm, w, h).unwrap();
        let rev = c.inverse();
        c.gates.extend(rev.gates);
        prop_assert_eq!(track(&c), (0..w * h).collect::<Vec<_>>());
    }

    #[test]
    fn compiled_staircase_matches_naive(m in 1usize..6, seed in any::<u64>()) {
        let c = mn_cascade(m, Family::Haar, seed);
        let out = compile_mn_2d(&c).unwrap();
        prop_assert!(out.circuit.adjacency_violations().is_empty());
        let (err, leak) = data_error(&c, &out.circuit);
        prop_assert!(err < 1e-6 && leak < 1e-6);
    }
}
