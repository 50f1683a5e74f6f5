use proptest::prelude::*;
use qcasc_cascade::generate::{control_cascade, mn_cascade, Family};
use qcasc_cascade::{ControlCascade, MnCascade};
use qcasc_ir::std_gates::{h, phase_turns, x};
use qcasc_ir::{depth, fuse_basis, lower_to_basis, Circuit, Gate};
use qcasc_numerics::{op_norm_distance, random_phase, Mat, C64, ONE, ZERO};
use qcasc_parallel::{
    compile_exact_diagonal, compile_load_approx, compile_mn_log_depth, compile_select_exact, multiplexed_phase_load,
    multiplexed_phase_select, phase_tables_of, ApproxBudget,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Data-register block of `c` with ancillae fed and read in |0>, column by
/// column, plus the largest norm left outside the ancilla ground state.
fn data_block(c: &Circuit) -> (Mat, f64) {
    let d = 1usize << c.num_data_qubits;
    let mut m = Mat::zeros(d, d);
    let mut worst: f64 = 0.0;
    for j in 0..d {
        let mut e = vec![ZERO; d];
        e[j] = ONE;
        let (col, rest) = c.apply_sparse(&e, 1e-14).unwrap();
        worst = worst.max(rest);
        for (i, z) in col.into_iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    (m, worst)
}

fn naive_unitary(c: &ControlCascade) -> Mat {
    c.lower_naive().unitary_of().unwrap()
}

fn seeded_cascade(k: usize, m: usize, seed: u64) -> ControlCascade {
    control_cascade(k, m, Family::Haar, seed)
}

/// The controlled diagonal rebuilt from its two multiplexed phase gates.
fn phase_pair_circuit(d: &[C64]) -> Circuit {
    let k = d.len().trailing_zeros() as usize;
    let t = phase_tables_of(d).unwrap();
    let mut c = Circuit::new(k + 1);
    let controls: Vec<usize> = (0..k).collect();
    let cases = |a: &[f64]| {
        let mut v = vec![Mat::identity(2); a.len()];
        v.extend(a.iter().map(|&t| phase_turns(t)));
        v
    };
    c.push(Gate::multiplexer(controls.clone(), vec![k], cases(&t.theta)));
    c.push(Gate::one(k, x()));
    c.push(Gate::multiplexer(controls, vec![k], cases(&t.phi)));
    c.push(Gate::one(k, x()));
    c
}

#[test]
fn phase_tables_examples() {
    let t = phase_tables_of(&[ONE; 4]).unwrap();
    assert!(t.theta.iter().chain(&t.phi).all(|&a| a == 0.0));
    let t = phase_tables_of(&[ONE, C64::new(0.0, 1.0)]).unwrap();
    assert_eq!(t.phi, vec![0.0]);
    assert!((t.theta[0] - 0.25).abs() < 1e-15);
    assert!(phase_tables_of(&[ONE, C64::new(2.0, 0.0)]).is_err());
}

#[test]
fn phase_tables_reassemble() {
    let mut r = rng(3);
    let d: Vec<C64> = (0..8).map(|_| random_phase(&mut r)).collect();
    let t = phase_tables_of(&d).unwrap();
    let back = t.diagonal();
    assert!(d.iter().zip(&back).all(|(a, b)| (a - b).norm() < 1e-12));
    let mut full = vec![ONE; 8];
    full.extend_from_slice(&d);
    let mut target = Circuit::new(4);
    target.push(Gate::diagonal(vec![0, 1, 2, 3], full));
    let err = phase_pair_circuit(&d).unitary_of().unwrap().max_abs_diff(&target.unitary_of().unwrap());
    assert!(err < 1e-12);
}

#[test]
fn truncation_examples() {
    let b = ApproxBudget { epsilon: 0.1, r: 4 };
    assert_eq!(b.truncate(1.0 / 3.0), 5.0 / 16.0);
    assert_eq!(b.bits(0.5), vec![true, false, false, false]);
    let expect = (ONE - C64::from_polar(1.0, std::f64::consts::TAU * (1.0 / 3.0 - 5.0 / 16.0))).norm();
    assert!((b.phase_error(1.0 / 3.0) - expect).abs() < 1e-15);
    let b = ApproxBudget::new(2, 1e-3).unwrap();
    assert_eq!(b.r, 11);
    assert!(b.nominal(2) <= 2e-3);
    assert!(ApproxBudget::new(2, 0.0).is_err() && ApproxBudget::new(2, 1.0).is_err());
}

#[test]
fn exact_single_block() {
    let c = seeded_cascade(2, 1, 4);
    let out = compile_exact_diagonal(&c).unwrap();
    assert!(out.circuit.unitary_of().unwrap().max_abs_diff(&naive_unitary(&c)) < 1e-9);
}

#[test]
fn exact_grouped_staircase() {
    let mn = mn_cascade(4, Family::Haar, 8);
    let c = mn.group(2).unwrap().to_control_cascade().unwrap();
    let out = compile_exact_diagonal(&c).unwrap();
    let err = op_norm_distance(&out.circuit.unitary_of().unwrap(), &mn.lower_naive().unitary_of().unwrap()).unwrap();
    assert!(err < 1e-8, "{err}");
}

#[test]
fn exact_seeded_k2_m3() {
    let c = seeded_cascade(2, 3, 11);
    let out = compile_exact_diagonal(&c).unwrap();
    assert_eq!(out.report.ancilla_count, 0);
    assert_eq!(out.circuit.total_qubits(), 7);
    let err = op_norm_distance(&out.circuit.unitary_of().unwrap(), &naive_unitary(&c)).unwrap();
    assert!(err < 1e-8, "{err}");
    assert!(out.circuit.is_lowered());
    assert_eq!(out.report.depth_basis, depth(&out.circuit).unwrap());
}

#[test]
fn exact_guard() {
    let c = seeded_cascade(7, 1, 0);
    assert!(compile_exact_diagonal(&c).is_err());
}

#[test]
fn r_multiplexers_pack_into_two_commuting_layers() {
    let c = seeded_cascade(2, 4, 12);
    let out = compile_exact_diagonal(&c).unwrap();
    let rs: Vec<&Gate> = out.structured.gates.iter().filter(|g| matches!(g, Gate::Multiplexer { .. })).collect();
    assert_eq!(rs.len(), 4);
    let mut sub = out.structured.clone();
    sub.gates = rs.iter().map(|g| (*g).clone()).collect();
    // Each half is wire-disjoint.
    for half in [&sub.gates[..2], &sub.gates[2..]] {
        let (a, b) = (half[0].qubits(), half[1].qubits());
        assert!(a.iter().all(|q| !b.contains(q)));
    }
    let n = sub.total_qubits();
    for i in 0..4 {
        for j in i + 1..4 {
            let mut ab = Circuit::new(n);
            ab.extend([sub.gates[i].clone(), sub.gates[j].clone()]);
            let mut ba = Circuit::new(n);
            ba.extend([sub.gates[j].clone(), sub.gates[i].clone()]);
            assert!(ab.unitary_of().unwrap().max_abs_diff(&ba.unitary_of().unwrap()) < 1e-10);
        }
    }
}

#[test]
fn select_identity_blocks() {
    let c = control_cascade(1, 2, Family::Identity, 0);
    let out = compile_select_exact(&c).unwrap();
    assert_eq!(out.report.ancilla_count, 8);
    let (m, rest) = data_block(&out.circuit);
    assert!(m.max_abs_diff(&Mat::identity(8)) < 1e-9 && rest < 1e-9);
}

#[test]
fn select_single_phase_gate() {
    // Control 0, index 1, bottom 2, then sel 3..5 and fan 5..7.
    let g = multiplexed_phase_select(0, &[1], 2, &[0.0, 0.25], &[3, 4], &[5, 6]);
    let mut c = Circuit::with_ancilla(3, 4);
    c.extend(g.prepare);
    c.extend(g.apply);
    c.extend(g.unprepare);
    let (m, rest) = data_block(&c);
    let mut expect = vec![ONE; 8];
    expect[7] = C64::new(0.0, 1.0);
    assert!(m.max_abs_diff(&Mat::diag(&expect)) < 1e-12 && rest < 1e-12);
}

#[test]
fn select_seeded_k1_m2() {
    let c = seeded_cascade(1, 2, 21);
    let out = compile_select_exact(&c).unwrap();
    let (m, rest) = data_block(&out.circuit);
    let err = op_norm_distance(&m, &naive_unitary(&c)).unwrap();
    assert!(err < 1e-8 && rest < 1e-9, "{err} {rest}");
}

#[test]
fn select_k2() {
    let c = seeded_cascade(2, 2, 22);
    let out = compile_select_exact(&c).unwrap();
    assert_eq!(out.report.ancilla_count, 16);
    let (m, rest) = data_block(&out.structured);
    let err = op_norm_distance(&m, &naive_unitary(&c)).unwrap();
    assert!(err < 1e-8 && rest < 1e-9, "{err} {rest}");
}

#[test]
fn load_exact_angles() {
    let budget = ApproxBudget { epsilon: 0.1, r: 3 };
    let g = multiplexed_phase_load(0, &[1], 2, &[0.375, 0.875], &budget, &[3, 4, 5], &[6, 7, 8]);
    let mut c = Circuit::with_ancilla(3, 6);
    c.extend(g.prepare);
    c.extend(g.apply);
    c.extend(g.unprepare);
    let (m, rest) = data_block(&c);
    let mut expect = vec![ONE; 8];
    expect[5] = C64::from_polar(1.0, std::f64::consts::TAU * 0.375);
    expect[7] = C64::from_polar(1.0, std::f64::consts::TAU * 0.875);
    assert!(m.max_abs_diff(&Mat::diag(&expect)) < 1e-9 && rest < 1e-12);
}

#[test]
fn load_third_with_four_bits() {
    let budget = ApproxBudget { epsilon: 0.1, r: 4 };
    let g = multiplexed_phase_load(0, &[], 1, &[1.0 / 3.0], &budget, &[2, 3, 4, 5], &[6, 7, 8, 9]);
    let mut c = Circuit::with_ancilla(2, 8);
    c.extend(g.prepare);
    c.extend(g.apply);
    c.extend(g.unprepare);
    let (m, _) = data_block(&c);
    let ideal = Mat::diag(&[ONE, ONE, ONE, C64::from_polar(1.0, std::f64::consts::TAU / 3.0)]);
    let err = op_norm_distance(&m, &ideal).unwrap();
    let expect = (ONE - C64::from_polar(1.0, std::f64::consts::TAU * (1.0 / 3.0 - 5.0 / 16.0))).norm();
    assert!((err - expect).abs() < 1e-9, "{err} vs {expect}");
}

#[test]
fn load_seeded_k1_m2() {
    let c = seeded_cascade(1, 2, 31);
    let out = compile_load_approx(&c, 1e-3).unwrap();
    assert_eq!(out.report.ancilla_count, 4 * 2 * 11);
    let (m, rest) = data_block(&out.structured);
    let err = op_norm_distance(&m, &naive_unitary(&c)).unwrap();
    assert!(rest < 1e-9);
    assert!(err <= out.report.apriori_error + 1e-9);
    assert!(err <= 1e-3, "{err}");
}

#[test]
fn load_rejects_bad_epsilon() {
    let c = seeded_cascade(1, 2, 31);
    assert!(compile_load_approx(&c, 0.0).is_err());
    assert!(compile_load_approx(&c, 1.5).is_err());
}

#[test]
fn mn_single_gate() {
    let c = MnCascade::new(vec![h()]).unwrap();
    let out = compile_mn_log_depth(&c, 2).unwrap();
    assert_eq!(out.structured.gates.len(), 1);
    assert!(out.circuit.unitary_of().unwrap().max_abs_diff(&c.lower_naive().unitary_of().unwrap()) < 1e-12);
}

#[test]
fn mn_hadamards() {
    let c = MnCascade::new(vec![h(); 8]).unwrap();
    let out = compile_mn_log_depth(&c, 2).unwrap();
    assert_eq!(out.report.ancilla_count, 0);
    let err = op_norm_distance(&out.circuit.unitary_of().unwrap(), &c.lower_naive().unitary_of().unwrap()).unwrap();
    assert!(err < 1e-7, "{err}");
}

#[test]
fn mn_seeded_ten() {
    let c = mn_cascade(10, Family::Haar, 10);
    let out = compile_mn_log_depth(&c, 2).unwrap();
    let err = op_norm_distance(&out.circuit.unitary_of().unwrap(), &c.lower_naive().unitary_of().unwrap()).unwrap();
    assert!(err < 1e-7, "{err}");
}

#[test]
fn log_depth_overtakes_naive() {
    let c = mn_cascade(512, Family::Haar, 5);
    let naive = fuse_basis(&lower_to_basis(&c.lower_naive()).unwrap()).unwrap();
    let out = compile_mn_log_depth(&c, 2).unwrap();
    assert_eq!(depth(&naive).unwrap(), 512);
    assert!(out.report.depth_basis < 512 / 2, "{}", out.report.depth_basis);
}

#[test]
fn log_depth_grows_by_a_constant_per_doubling() {
    let d: Vec<usize> = [16usize, 32, 64, 128]
        .iter()
        .map(|&m| compile_mn_log_depth(&mn_cascade(m, Family::AntiDiagonal, m as u64), 2).unwrap().report.depth_basis)
        .collect();
    let steps: Vec<usize> = d.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(steps.iter().all(|&s| s == steps[0]), "{d:?}");
}

#[test]
fn mn_rejects_block_size_one() {
    assert!(compile_mn_log_depth(&mn_cascade(4, Family::Haar, 0), 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn exact_matches_naive(seed in any::<u64>(), k in 1usize..=2, m in 1usize..=3) {
        let c = seeded_cascade(k, m, seed);
        let out = compile_exact_diagonal(&c).unwrap();
        prop_assert!(out.circuit.unitary_of().unwrap().max_abs_diff(&naive_unitary(&c)) < 1e-8);
    }

    #[test]
    fn mn_matches_naive(seed in any::<u64>(), m in 1usize..=9, b in 2usize..=3) {
        let c = mn_cascade(m, Family::Haar, seed);
        let out = compile_mn_log_depth(&c, b).unwrap();
        prop_assert!(out.circuit.unitary_of().unwrap().max_abs_diff(&c.lower_naive().unitary_of().unwrap()) < 1e-8);
    }

    #[test]
    fn load_error_within_bounds(seed in any::<u64>(), k in 1usize..=2, e in 1u32..=6) {
        let eps = 10f64.powi(-(e as i32));
        let c = seeded_cascade(k, 2, seed);
        let out = compile_load_approx(&c, eps).unwrap();
        let budget = ApproxBudget::new(2, eps).unwrap();
        prop_assert_eq!(out.report.ancilla_count, 4 * 2 * budget.r);
        prop_assert!(out.report.apriori_error <= budget.nominal(2));
        let (m, rest) = data_block(&out.structured);
        prop_assert!(rest < 1e-9);
        let err = op_norm_distance(&m, &naive_unitary(&c)).unwrap();
        prop_assert!(err <= out.report.apriori_error + 1e-9, "{} > {}", err, out.report.apriori_error);
    }

    #[test]
    fn select_matches_naive(seed in any::<u64>(), m in 1usize..=3) {
        let c = seeded_cascade(1, m, seed);
        let out = compile_select_exact(&c).unwrap();
        prop_assert_eq!(out.report.ancilla_count, m * 4);
        let (u, rest) = data_block(&out.circuit);
        prop_assert!(rest < 1e-9);
        prop_assert!(op_norm_distance(&u, &naive_unitary(&c)).unwrap() < 1e-8);
    }
}
