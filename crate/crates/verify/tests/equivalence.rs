use proptest::prelude::*;
use qcasc_cascade::generate::{control_cascade, mn_cascade, Family};
use qcasc_ir::std_gates::{h, x, z};
use qcasc_ir::{Circuit, Control, Gate};
use qcasc_numerics::Mat;
use qcasc_parallel::{compile_mn_log_depth, compile_select_exact};
use qcasc_verify::{check_exact, check_exact_modulo_phase, check_sampled, data_block, Mode, VerifyError};

fn bell_pair() -> Circuit {
    let mut c = Circuit::new(2);
    c.push(Gate::one(0, h()));
    c.push(Gate::cnot(0, 1));
    c
}

/// CNOT computed into an ancilla, copied out and uncomputed.
fn cnot_via_ancilla() -> Circuit {
    let mut c = Circuit::with_ancilla(2, 1);
    c.push(Gate::cnot(0, 2));
    c.push(Gate::cnot(2, 1));
    c.push(Gate::cnot(0, 2));
    c
}

#[test]
fn circuit_equals_itself() {
    let c = bell_pair();
    let r = check_exact(&c, &c).unwrap();
    assert_eq!(r.mode, Mode::Exact);
    assert!(r.distance < 1e-15);
    assert_eq!(r.seed, None);
}

#[test]
fn global_phase_is_visible() {
    let a = bell_pair();
    let mut b = a.clone();
    b.push(Gate::GlobalPhase { angle: std::f64::consts::PI });
    let r = check_exact(&a, &b).unwrap();
    assert!((r.distance - 2.0).abs() < 1e-12, "{}", r.distance);
    assert!(check_exact_modulo_phase(&a, &b).unwrap().distance < 1e-12);
}

#[test]
fn ancilla_copy_matches_direct_gate() {
    let mut direct = Circuit::new(2);
    direct.push(Gate::cnot(0, 1));
    let r = check_exact(&direct, &cnot_via_ancilla()).unwrap();
    assert!(r.distance < 1e-14 && r.ancilla_clean());
}

#[test]
fn dirty_ancilla_is_flagged() {
    let mut c = Circuit::with_ancilla(1, 1);
    c.push(Gate::cnot(0, 1));
    let (block, leak) = data_block(&c).unwrap();
    assert!((block[(0, 0)].re - 1.0).abs() < 1e-15 && block[(1, 1)].norm() < 1e-15);
    assert!((leak - 1.0).abs() < 1e-12);
    let r = check_sampled(&c, &c, 4, 1).unwrap();
    assert!(!r.ancilla_clean());
}

#[test]
fn data_width_mismatch_is_rejected() {
    assert!(matches!(check_exact(&Circuit::new(2), &Circuit::new(3)), Err(VerifyError::DataMismatch(2, 3))));
}

#[test]
fn exact_guard_applies_to_data_width() {
    let c = Circuit::new(14);
    assert!(matches!(check_exact(&c, &c), Err(VerifyError::GuardExceeded { .. })));
    let r = check_sampled(&c, &c, 2, 0).unwrap();
    assert_eq!(r.distance, 0.0);
    assert!(matches!(check_sampled(&Circuit::new(27), &Circuit::new(27), 1, 0), Err(VerifyError::GuardExceeded { .. })));
}

#[test]
fn identical_circuits_sample_to_zero() {
    let c = bell_pair();
    let r = check_sampled(&c, &c, 8, 3).unwrap();
    assert_eq!((r.mode, r.trials, r.seed, r.distance), (Mode::Sampled, 8, Some(3), 0.0));
}

#[test]
fn z_on_clean_ancilla_is_invisible() {
    let a = cnot_via_ancilla();
    let mut b = a.clone();
    b.push(Gate::one(2, z()));
    let r = check_sampled(&a, &b, 8, 11).unwrap();
    assert_eq!(r.distance, 0.0);
    assert_eq!(r.ancilla_residual, 0.0);
}

#[test]
fn wide_ancilla_registers_use_sparse_simulation() {
    let mut a = Circuit::with_ancilla(2, 40);
    let mut b = Circuit::new(2);
    a.push(Gate::one(0, h()));
    b.push(Gate::one(0, h()));
    for q in 2..42 {
        a.push(Gate::cnot(0, q));
    }
    a.push(Gate::controlled(vec![Control::closed(41)], vec![1], x()));
    b.push(Gate::cnot(0, 1));
    for q in (2..42).rev() {
        a.push(Gate::cnot(0, q));
    }
    let r = check_exact(&a, &b).unwrap();
    assert!(r.distance < 1e-14 && r.ancilla_clean(), "{r:?}");
    assert!(check_sampled(&a, &b, 4, 2).unwrap().within(1e-14));
}

#[test]
fn compiled_staircase_of_eight() {
    let c = mn_cascade(8, Family::Haar, 8);
    let out = compile_mn_log_depth(&c, 2).unwrap();
    let r = check_exact(&c.lower_naive(), &out.circuit).unwrap();
    assert!(r.within(1e-7), "{r:?}");
}

#[test]
fn compiled_staircase_of_sixteen_sampled() {
    let c = mn_cascade(16, Family::Haar, 16);
    let out = compile_mn_log_depth(&c, 2).unwrap();
    let r = check_sampled(&c.lower_naive(), &out.circuit, 16, 5).unwrap();
    assert!(r.within(1e-7), "{r:?}");
}

#[test]
fn results_are_reproducible() {
    let c = mn_cascade(6, Family::Haar, 1);
    let out = compile_mn_log_depth(&c, 2).unwrap();
    let a = check_sampled(&c.lower_naive(), &out.circuit, 5, 9).unwrap();
    let b = check_sampled(&c.lower_naive(), &out.circuit, 5, 9).unwrap();
    assert_eq!(a, b);
    let json = serde_json::to_string(&a).unwrap();
    assert!(json.contains("\"mode\":\"sampled\"") && json.contains("\"seed\":9"));
}

#[test]
fn sampled_bounds_exact_on_select_pass() {
    let c = control_cascade(1, 2, Family::Haar, 4);
    let out = compile_select_exact(&c).unwrap();
    let naive = c.lower_naive();
    let exact = check_exact(&naive, &out.circuit).unwrap();
    let sampled = check_sampled(&naive, &out.circuit, 16, 4).unwrap();
    assert!(exact.within(1e-8), "{exact:?}");
    assert!(sampled.distance <= exact.distance + 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampled_never_exceeds_exact(theta in 0.0f64..6.3, seed in any::<u64>()) {
        let a = bell_pair();
        let mut b = a.clone();
        b.push(Gate::one(1, Mat::from_real(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])));
        let exact = check_exact(&a, &b).unwrap();
        let sampled = check_sampled(&a, &b, 16, seed).unwrap();
        prop_assert!(sampled.distance <= exact.distance + 1e-12);
        prop_assert!((exact.distance - 2.0 * (theta / 2.0).sin().abs()).abs() < 1e-9);
    }

    #[test]
    fn compiled_staircases_check_clean(m in 1usize..8, seed in any::<u64>()) {
        let c = mn_cascade(m, Family::Haar, seed);
        let out = compile_mn_log_depth(&c, 2).unwrap();
        let r = check_exact(&c.lower_naive(), &out.circuit).unwrap();
        prop_assert!(r.within(1e-7));
        prop_assert!(check_exact(&out.circuit, &out.circuit).unwrap().distance == 0.0);
    }
}
