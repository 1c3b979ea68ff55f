mod common;

use std::f64::consts::{LN_2, PI};

use common::*;
use num_complex::Complex64;
use varexp::embed::{embed, embedded_modular, g_decompose, G2_BOUND_RADIUS};
use varexp::exponent::{check_log_holder, SampleGrid};
use varexp::hilbert::{
    continuous_hilbert_step, discrete_hilbert, finite_section_norm, largest_singular_value, operator_matrix,
    pointwise_bound, HilbertOptions,
};
use varexp::multiplier::{apply_multiplier, check_hypotheses, mikhlin_check, RealLineVerdict, Symbol};
use varexp::space::{luxemburg_norm_seq, luxemburg_norm_step, modular_seq, modular_step, DEFAULT_TOL};
use varexp::verify::{estimate_operator_norm_with, EstimateConfig};
use varexp::*;

#[test]
fn two_exponent_norm_matches_bisection() {
    let b = Sequence::new(0, vec![1.0, 1.0]);
    let p = ExponentSequence::new(0, vec![1.0, 2.0], 2.0).unwrap();
    let oracle = bisect_norm(|l| 1.0 / l + 1.0 / (l * l));
    assert!((oracle - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    let got = luxemburg_norm_seq(&b, &p, DEFAULT_TOL).unwrap().value;
    assert!((got - oracle).abs() < 1e-10);
}

#[test]
fn modular_examples() {
    let p = ExponentSequence::new(0, vec![1.0, 2.0], 2.0).unwrap();
    assert_eq!(modular_seq(&Sequence::new(0, vec![0.5, 0.5]), &p), 0.75);
    let p3 = ExponentSequence::new(0, vec![3.0], 3.0).unwrap();
    assert_eq!(modular_seq(&Sequence::new(0, vec![2.0]), &p3), 8.0);
}

#[test]
fn step_modular_matches_rectangle_rule() {
    let e = embed(&Sequence::basis(0), &ExponentSequence::constant(2.0).unwrap());
    let quad = midpoint(|x| e.f.eval(x).abs().powf(e.pfun.eval(x)), -1.0, 1.0, 1e-4);
    assert!((quad - 2.0 * PI * PI).abs() < 1e-9);
    assert!((modular_step(&e.f, &e.pfun) - 2.0 * PI * PI).abs() < 1e-12);
}

#[test]
fn embedded_step_norm_matches_bisection() {
    let b = Sequence::new(0, vec![1.0, 1.0]);
    let p = ExponentSequence::new(0, vec![1.0, 2.0], 2.0).unwrap();
    let e = embed(&b, &p);
    let a = 2.0 * PI;
    let oracle = bisect_norm(|l| 0.5 * (a / l) + 0.5 * (a / l).powi(2));
    let got = luxemburg_norm_step(&e.f, &e.pfun, DEFAULT_TOL).unwrap().value;
    assert!((got - oracle).abs() < 1e-10 * oracle);
}

#[test]
fn indicator_norm_is_classical() {
    let g = StepFunction::new(vec![0, 2], vec![2.0]).unwrap();
    let p = ExponentFunction::constant(2.0).unwrap();
    let got = luxemburg_norm_step(&g, &p, DEFAULT_TOL).unwrap().value;
    assert!((got - 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn pointwise_constant_matches_series() {
    for (p_bar, expect) in [(2.0, 6.828_427_124_746_192), (4.0, 17.777_268_370_518_115)] {
        let r = 2f64.powf(-1.0 / p_bar);
        let series: f64 = 4.0 * (1..5000).map(|j| r.powi(j + 1)).sum::<f64>();
        let c = pointwise_bound(p_bar).unwrap().constant;
        assert!((c - series).abs() < 1e-9 * c);
        assert!((c - expect).abs() < 1e-9);
    }
    let grid: Vec<f64> = (0..60).map(|i| pointwise_bound(1.05 + 0.25 * i as f64).unwrap().constant).collect();
    assert!(grid.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn continuous_transform_matches_quadrature() {
    let e = embed(&Sequence::basis(0), &ExponentSequence::constant(2.0).unwrap());
    let pieces: Vec<_> = e.f.pieces().collect();
    let at_one = continuous_hilbert_step(&e.f, 1.0).unwrap();
    assert!((at_one - 2.0 * (5.0f64 / 3.0).ln()).abs() < 1e-12);
    assert!((at_one - pv_hilbert_pieces(&pieces, 1.0, 1e-12)).abs() < 1e-8);
    assert_eq!(continuous_hilbert_step(&e.f, 0.0).unwrap(), 0.0);

    let b = Sequence::new(-2, vec![0.3, -1.0, 0.7, 0.0, 2.0]);
    let f = embed(&b, &ExponentSequence::constant(2.0).unwrap()).f;
    let pieces: Vec<_> = f.pieces().collect();
    for x in [-2.6, -1.1, -0.1, 0.05, 0.49, 1.3, 2.2, 7.5] {
        let got = continuous_hilbert_step(&f, x).unwrap();
        assert!((got - pv_hilbert_pieces(&pieces, x, 1e-12)).abs() < 1e-8, "x = {x}");
    }
    assert_eq!(continuous_hilbert_step(&StepFunction::zero(), 0.3).unwrap(), 0.0);
}

#[test]
fn discrete_transform_matches_plain_sums() {
    let mut r = rng(5);
    let b = Sequence::new(-40, uniform_values(&mut r, 81));
    let out = Window::inclusive(-60, 60);
    for opts in [HilbertOptions::direct(), HilbertOptions::fft()] {
        let hb = discrete_hilbert(&b, out, &opts).unwrap();
        for (n, v) in hb.iter() {
            assert!((v - hilbert_sum(-40, b.values(), n)).abs() < 1e-12);
        }
    }
    let two = Sequence::new(-1, vec![1.0, 0.0, 1.0]);
    let hb = discrete_hilbert(&two, Window::inclusive(-1, 1), &HilbertOptions::direct()).unwrap();
    assert_eq!(hb.values(), &[-0.5, 0.0, 0.5]);
}

#[test]
fn section_matrix_matches_transform() {
    let m = operator_matrix(Window::new(0, 2), Window::new(0, 2));
    assert_eq!(m.as_slice(), &[0.0, 1.0, -1.0, 0.0]);
    let input = Window::inclusive(-5, 7);
    let out = Window::inclusive(-9, 3);
    let m = operator_matrix(input, out);
    let b = Sequence::new(-5, uniform_values(&mut rng(2), 13));
    let mv = &m * nalgebra::DVector::from_column_slice(b.values());
    let hb = discrete_hilbert(&b, out, &HilbertOptions::direct()).unwrap();
    for (x, y) in mv.iter().zip(hb.values()) {
        assert!((x - y).abs() < 1e-14);
    }
    let sq = operator_matrix(Window::symmetric(6), Window::symmetric(6));
    assert_eq!(sq.transpose(), -sq);
}

#[test]
fn lanczos_section_norm_matches_dense_svd() {
    for h in [16, 64, 128] {
        let w = Window::symmetric(h);
        let dense = largest_singular_value(&operator_matrix(w, w));
        let lanczos = finite_section_norm(w, 300).unwrap();
        assert!((dense - lanczos).abs() < 1e-9, "h = {h}: {dense} vs {lanczos}");
        assert!(dense < PI);
    }
}

#[test]
fn centre_column_oracle() {
    let p = ExponentSequence::constant(2.0).unwrap();
    let est = estimate_operator_norm_with(&p, Window::symmetric(8), &EstimateConfig::basis_only()).unwrap();
    let oracle = (1..=8).map(|k| 2.0 / (k * k) as f64).sum::<f64>().sqrt();
    assert!((est.lower_bound - oracle).abs() < 1e-12);
}

#[test]
fn decomposition_far_from_the_bump() {
    let e = embed(&Sequence::basis(0), &ExponentSequence::constant(2.0).unwrap());
    let g = g_decompose(&e, 5).unwrap();
    assert!((g.f_value - 0.2).abs() < 1e-15);
    assert_eq!(g.g2_at(5.1).unwrap(), 0.0);
    let pieces: Vec<_> = e.f.pieces().collect();
    let hf = pv_hilbert_pieces(&pieces, 5.1, 1e-13);
    assert!((g.g1_at(5.1).unwrap() - (hf - 0.2)).abs() < 1e-9);
}

#[test]
fn own_cell_bound_radius() {
    let e = embed(&Sequence::basis(0), &ExponentSequence::constant(2.0).unwrap());
    let g = g_decompose(&e, 0).unwrap();
    let at_edge = g.g2_at(G2_BOUND_RADIUS).unwrap();
    assert!((at_edge - 2.0 * LN_2).abs() < 1e-12);
    assert!(g.g2_at(0.9 * G2_BOUND_RADIUS).unwrap().abs() < g.g2_bound());
    assert!(g.g2_at(1.1 * G2_BOUND_RADIUS).unwrap().abs() > g.g2_bound());
}

#[test]
fn modular_identity_on_random_inputs() {
    let mut r = rng(31);
    for _ in 0..50 {
        let vals = uniform_values(&mut r, 9);
        let exps: Vec<f64> = (0..9).map(|_| 1.0 + 2.0 * rand::Rng::gen::<f64>(&mut r)).collect();
        let b = Sequence::new(-4, vals.clone());
        let p = ExponentSequence::new(-4, exps.clone(), 2.0).unwrap();
        let oracle: f64 = vals.iter().zip(&exps).map(|(v, q)| 0.5 * (2.0 * PI * v.abs()).powf(*q)).sum();
        let e = embed(&b, &p);
        assert!((modular_step(&e.f, &e.pfun) - oracle).abs() < 1e-12 * oracle.max(1.0));
        assert!((embedded_modular(&b, &p) - oracle).abs() < 1e-12 * oracle.max(1.0));
    }
}

#[test]
fn multiplier_closed_forms() {
    let b = Sequence::new(-3, vec![1.0, -2.0, 0.5, 4.0]);
    let shifted = apply_multiplier(&Symbol::shift(1), &b, 8).unwrap();
    for n in shifted.window().indices() {
        assert_eq!(shifted.get(n), Complex64::new(b.get(n - 1), 0.0));
    }
    for grid in [1024usize, 4096] {
        let t = apply_multiplier(&Symbol::sgn(), &Sequence::basis(0), grid).unwrap();
        let err = t.iter().map(|(n, v)| (v - sgn_coefficient(n)).norm()).fold(0.0, f64::max);
        assert!(err <= 10.0 / grid as f64, "grid {grid}: {err}");
    }
}

#[test]
fn mikhlin_registry_examples() {
    let one = mikhlin_check(&Symbol::one(), 1.0 + 1e-9, 1024);
    assert!(one.passed);
    assert_eq!(one.max_ratio_per_order, [1.0, 0.0, 0.0, 0.0]);
    let sgn = mikhlin_check(&Symbol::sgn(), 1.0 + 1e-9, 1024);
    assert!(sgn.passed);
    assert_eq!(&sgn.max_ratio_per_order[1..], &[0.0, 0.0, 0.0]);
    let linear = mikhlin_check(&Symbol::linear(), 1.0 + 1e-9, 1024);
    assert!(linear.passed && linear.domain_limited);
    assert_eq!(linear.real_line, RealLineVerdict::NotMikhlin);
    assert!((linear.max_ratio_per_order[0] - 0.5).abs() < 1e-3);
}

#[test]
fn hypothesis_arithmetic() {
    let two = check_hypotheses(&ExponentFunction::constant(2.0).unwrap(), true).unwrap();
    assert!(two.satisfied && two.d_intervals.is_empty());
    assert!((two.q - 1.0).abs() < 1e-15);
    let p = ExponentSequence::new(-2, vec![1.5; 5], 1.5).unwrap();
    let h = check_hypotheses(&ExponentFunction::from_sequence(&p), true).unwrap();
    assert!(h.satisfied);
    assert!((h.q - 1.2).abs() < 1e-12);
    let p = ExponentSequence::new(0, vec![1.5], 1.8).unwrap();
    let h = check_hypotheses(&ExponentFunction::from_sequence(&p), true).unwrap();
    assert!(!h.satisfied && h.d_measure.is_none());
    assert!(h.d_intervals.iter().any(|&(a, b)| a.is_infinite() || b.is_infinite()));
}

#[test]
fn log_holder_examples() {
    let flat = ExponentFunction::constant(2.0).unwrap();
    let r = check_log_holder(&flat, &SampleGrid { lo: -20.0, hi: 20.0, step: 0.25 }).unwrap();
    assert!(r.passed_local && r.passed_infinity);
    assert_eq!((r.c0, r.c_inf), (Some(0.0), Some(0.0)));

    let jump = ExponentFunction::new(vec![0.0], vec![2.0, 3.0], "jump").unwrap();
    let r = check_log_holder(&jump, &SampleGrid { lo: -5.0, hi: 5.0, step: 0.25 }).unwrap();
    assert!(!r.passed_local);
}
