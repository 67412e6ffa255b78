use coherent_id::coherent::{
    apply_beamsplitter, build_ui2_circuit, run_circuit, sample_clicks, ui2_input, BeamsplitterOp, Circuit,
    ComplexAmplitude, CoherentRegister, Ui2Truth, UI2_MODE_A, UI2_MODE_C,
};
use coherent_id::database::{
    build_database_circuit, copy_mode, database_input, success_probability_closed_form, circuit_constant,
    success_probability, unknown_mode, DatabaseSpec,
};
use coherent_id::fock::{beamsplitter_fock, coherent_fock};
use coherent_id::povm::blocks::{e0_block_eigenvalues, q3_matrix, q6_matrix};
use coherent_id::povm::{build_hayashi_povm, haar_state, identification_prob};
use coherent_id::strategies::{p_bs, p_bs_delta_sq, verify_ordering, Priors, Strategy as Curve};
use coherent_id::Real;
use proptest::prelude::*;

fn amplitude(bound: f64) -> impl Strategy<Value = ComplexAmplitude<f64>> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| ComplexAmplitude::new(re, im).unwrap())
}

fn sorted_eigs(m: nalgebra::DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn beamsplitter_conserves_energy(a in amplitude(5.0), b in amplitude(5.0), t in 0.0f64..=1.0) {
        let reg = CoherentRegister::new(vec![a, b]).unwrap();
        let out = apply_beamsplitter(&reg, &BeamsplitterOp::new(0, 1, t).unwrap()).unwrap();
        let before = reg.energy();
        let after = out.energy();
        prop_assert!((after - before).abs() <= 1e-12 * before.max(1.0));
    }

    #[test]
    fn ui2_vacuum_port_is_empty(a1 in amplitude(4.0), a2 in amplitude(4.0), t1 in 0.001f64..0.999) {
        let circuit = build_ui2_circuit(t1).unwrap();
        let out1 = run_circuit(&circuit, &ui2_input(a1, a2, Ui2Truth::First).unwrap()).unwrap();
        let out2 = run_circuit(&circuit, &ui2_input(a1, a2, Ui2Truth::Second).unwrap()).unwrap();
        prop_assert!(out1.get(UI2_MODE_A).unwrap().abs() <= 1e-12);
        prop_assert!(out2.get(UI2_MODE_C).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn ui2_vacuum_port_is_empty_in_single_precision(re in -3.0f32..3.0, im in -3.0f32..3.0, t1 in 0.01f32..0.99) {
        let a1 = ComplexAmplitude::new(re, im).unwrap();
        let a2 = ComplexAmplitude::new(im, -re).unwrap();
        let circuit = build_ui2_circuit(t1).unwrap();
        let out = run_circuit(&circuit, &ui2_input(a1, a2, Ui2Truth::First).unwrap()).unwrap();
        prop_assert!(out.get(UI2_MODE_A).unwrap().abs() <= 64.0 * <f32 as Real>::epsilon() * (1.0 + a1.abs()));
    }

    #[test]
    fn click_sampling_is_deterministic(a in amplitude(2.0), seed in any::<u64>(), shot in any::<u64>()) {
        let circuit = Circuit::new(2, vec![BeamsplitterOp::new(0, 1, 0.5).unwrap()], vec![
            serde_json::from_str("0").unwrap(),
            serde_json::from_str("1").unwrap(),
        ]).unwrap();
        let out = run_circuit(&circuit, &CoherentRegister::new(vec![a, ComplexAmplitude::zero()]).unwrap()).unwrap();
        prop_assert_eq!(
            sample_clicks(&out, &circuit, seed, shot).unwrap(),
            sample_clicks(&out, &circuit, seed, shot).unwrap()
        );
    }

    #[test]
    fn circuit_json_round_trip(t1 in 0.01f64..0.99) {
        let c = build_ui2_circuit(t1).unwrap();
        prop_assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn curves_are_monotone_from_zero(x in 0.0f64..6.0, dx in 0.0f64..1.0) {
        for s in Curve::ALL {
            prop_assert_eq!(s.probability(0.0f64), 0.0);
            let (lo, hi) = (s.probability(x), s.probability(x + dx));
            prop_assert!(lo <= hi);
            prop_assert!((0.0..=1.0).contains(&lo));
        }
    }

    #[test]
    fn balanced_setup_closed_form(a1 in amplitude(4.0), a2 in amplitude(4.0)) {
        let p = p_bs(a1, a2, 0.5, Priors::equal()).unwrap();
        prop_assert!((p - (1.0 - (-(a1 - a2).norm_sqr() / 3.0).exp())).abs() <= 1e-14);
    }

    #[test]
    fn balanced_transmittivity_is_critical(delta_sq in 0.01f64..20.0) {
        let h = 1e-5;
        let f = |t| p_bs_delta_sq(delta_sq, t, Priors::equal()).unwrap();
        let derivative = (f(0.5 + h) - f(0.5 - h)) / (2.0 * h);
        prop_assert!(derivative.abs() <= 1e-6, "{}", derivative);
    }

    #[test]
    fn ordering_holds_on_random_grids(grid in prop::collection::vec(0.0f64..10.0, 1..64)) {
        let report = verify_ordering(&grid).unwrap();
        prop_assert!(report.holds(), "{:?}", report);
    }

    #[test]
    fn block_spectra_match_closed_form(c1 in 0.0f64..=1.0, c2 in 0.0f64..=1.0) {
        let closed = e0_block_eigenvalues(c1, c2).unwrap();
        for (num, cf) in sorted_eigs(q3_matrix(c1, c2)).iter().zip(closed.lambda3.iter()) {
            prop_assert!((num - cf).abs() <= 1e-12);
        }
        for (num, cf) in sorted_eigs(q6_matrix(c1, c2)).iter().zip(closed.lambda6.iter()) {
            prop_assert!((num - cf).abs() <= 1e-12);
        }
        prop_assert!(closed.lambda3.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(closed.lambda6.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn hayashi_probability_law(seed in any::<u64>()) {
        let povm = build_hayashi_povm::<f64>(3).unwrap();
        let a = haar_state::<f64>(3, seed, 0).unwrap();
        let b = haar_state::<f64>(3, seed, 1).unwrap();
        let p = identification_prob(&povm, &a, &b, Priors::equal()).unwrap();
        prop_assert!((p - (1.0 - a.dotc(&b).norm_sqr()) / 3.0).abs() <= 1e-10);
    }

    #[test]
    fn database_matching_detector_is_dark(
        refs in prop::collection::vec(amplitude(3.0), 2..6),
        pick in any::<prop::sample::Index>(),
    ) {
        let n = refs.len();
        let j = pick.index(n);
        let circuit = build_database_circuit::<f64>(n).unwrap();
        prop_assert_eq!(circuit.ops.len(), 2 * n - 1);
        let out = run_circuit(&circuit, &database_input(&refs, refs[j]).unwrap()).unwrap();
        let dark = circuit.monitored[j].mode;
        prop_assert!(out.get(dark).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn database_distribution_is_even(alpha in amplitude(4.0), n in 2usize..8) {
        let dist = Circuit::new(
            2 * n,
            build_database_circuit::<f64>(n).unwrap().ops[..n - 1].to_vec(),
            vec![],
        ).unwrap();
        let mut amps = vec![ComplexAmplitude::zero(); 2 * n];
        amps[unknown_mode(n)] = alpha;
        let out = run_circuit(&dist, &CoherentRegister::new(amps).unwrap()).unwrap();
        let target = alpha * (1.0 / (n as f64).sqrt());
        for k in 1..=n {
            prop_assert!((out.get(copy_mode(n, k)).unwrap() - target).abs() <= 1e-14);
        }
    }

    #[test]
    fn database_probability_matches_closed_form(refs in prop::collection::vec(amplitude(2.0), 2..6)) {
        let spec = DatabaseSpec::uniform(refs, 0).unwrap();
        let a = success_probability(&spec).unwrap();
        let b = success_probability_closed_form(&spec, circuit_constant(spec.n_refs())).unwrap();
        prop_assert!((a - b).abs() <= 1e-13);
    }

    #[test]
    fn fock_beamsplitter_tracks_coherent_map(a in amplitude(1.0), b in amplitude(1.0), t in 0.0f64..=1.0) {
        let n = 30;
        let input = coherent_fock(a, n).tensor(&coherent_fock(b, n)).unwrap();
        let (a2, b2) = BeamsplitterOp::new(0, 1, t).unwrap().mix(a, b);
        let expected = coherent_fock(a2, n).tensor(&coherent_fock(b2, n)).unwrap();
        let u = beamsplitter_fock(t, n).unwrap();
        prop_assert!(u.sector_leakage() <= 1e-14);
        let fid = expected.inner(&u.apply(&input).unwrap()).unwrap().norm_sqr();
        prop_assert!(fid >= 1.0 - 10.0 * input.tail_mass.max(expected.tail_mass) - 1e-12, "{}", fid);
    }
}
