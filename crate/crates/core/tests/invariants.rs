use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;

use fspt::analysis::{cosine_fit, envelope_crossing, make_engine, EngineKind};
use fspt::fermion::{pfaffian, quasienergy_spectrum, CovarianceMatrix, FloquetStep};
use fspt::model::{FloquetParams, ProductState, Sign};
use fspt::runner::Grid;

fn antisymmetric(n: usize, entries: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let mut it = entries.iter().cycle();
    for i in 0..n {
        for j in i + 1..n {
            let v = *it.next().unwrap();
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

fn signs_state(bits: &[bool]) -> ProductState {
    ProductState::new(
        bits.iter()
            .map(|&b| if b { Sign::Minus } else { Sign::Plus })
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pfaffian_squares_to_determinant(half in 1usize..10, entries in prop::collection::vec(-1.0f64..1.0, 1..200)) {
        let m = antisymmetric(2 * half, &entries);
        let pf = pfaffian(&m).unwrap();
        let det = m.clone().determinant();
        prop_assert!((pf * pf - det).abs() <= 1e-9 * det.abs().max(1.0));
    }

    #[test]
    fn floquet_map_is_special_orthogonal(alpha in -PI..PI, beta in -PI..PI, sites in 2usize..16) {
        let p = FloquetParams::new(alpha, beta, sites).unwrap();
        let o = FloquetStep::new(&p).to_map();
        prop_assert!(o.orthogonality_defect() < 1e-12);
        prop_assert!((o.determinant() - 1.0).abs() < 1e-10);
        let spec = quasienergy_spectrum(&o).unwrap();
        prop_assert!(spec.pairing_defect() < 1e-8);
    }

    #[test]
    fn evolution_preserves_purity_and_bounds(
        drive in prop::collection::vec((-PI..PI, -PI..PI), 1..25),
        bits in prop::collection::vec(any::<bool>(), 2..14),
    ) {
        let sites = bits.len();
        let init = signs_state(&bits);
        let mut gamma = CovarianceMatrix::initial(&init);
        for &(a, b) in &drive {
            gamma.apply_step(&FloquetStep::new(&FloquetParams::new(a, b, sites).unwrap())).unwrap();
        }
        prop_assert!(gamma.purity_defect() < 1e-10);
        for l_a in 1..=sites {
            let s = gamma.s1_even(l_a).unwrap();
            prop_assert!((-1e-10..=1.0 + 1e-10).contains(&s));
        }
        for x in gamma.x_expectations() {
            prop_assert!(x.abs() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn engines_agree_on_random_drives(
        drive in prop::collection::vec((-PI..PI, -PI..PI), 1..15),
        bits in prop::collection::vec(any::<bool>(), 2..8),
    ) {
        let sites = bits.len();
        let init = signs_state(&bits);
        let mut a = make_engine(EngineKind::Fermion, &init).unwrap();
        let mut b = make_engine(EngineKind::Statevector, &init).unwrap();
        for &(al, be) in &drive {
            let p = FloquetParams::new(al, be, sites).unwrap();
            a.apply(&p).unwrap();
            b.apply(&p).unwrap();
        }
        for l_a in 1..=sites {
            prop_assert!((a.s1_even(l_a).unwrap() - b.s1_even(l_a).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn cosine_fit_is_shift_covariant(
        amp in 0.05f64..0.5,
        omega in 0.2f64..2.9,
        phase in -PI..PI,
        shift in 1usize..20,
    ) {
        let series = |k: usize| -> Vec<f64> {
            (0..64).map(|n| amp * (omega * (n + k) as f64 + phase).cos() + 0.5).collect()
        };
        let f0 = cosine_fit(&series(0)).unwrap();
        let f1 = cosine_fit(&series(shift)).unwrap();
        prop_assert!((f0.amplitude - amp).abs() < 1e-6);
        prop_assert!((f0.frequency - omega).abs() < 1e-6);
        prop_assert!((f1.amplitude - f0.amplitude).abs() < 1e-6);
        prop_assert!((f1.frequency - f0.frequency).abs() < 1e-6);
        let dphi = (f1.phase - f0.phase - f0.frequency * shift as f64).rem_euclid(2.0 * PI);
        prop_assert!(dphi.min(2.0 * PI - dphi) < 1e-5);
    }

    #[test]
    fn crossing_ignores_pair_order(
        pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 6..60),
    ) {
        prop_assume!(pairs[0].0 != pairs[0].1);
        let series: Vec<f64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let swapped: Vec<f64> = pairs.iter().flat_map(|&(a, b)| [b, a]).collect();
        prop_assert_eq!(envelope_crossing(&series).unwrap(), envelope_crossing(&swapped).unwrap());
    }

    #[test]
    fn crossing_ratio_is_a_fraction(series in prop::collection::vec(0.0f64..1.0, 11..200)) {
        if let Some(r) = envelope_crossing(&series).unwrap() {
            prop_assert!(r.n_c <= r.n_steps);
            prop_assert!((0.0..=1.0).contains(&r.ratio));
        }
    }

    #[test]
    fn integer_grids_are_ordered_and_inclusive(start in 0usize..50, len in 0usize..50, step in 1usize..7) {
        let stop = start + len;
        let v = Grid::Range { start, stop, step }.values().unwrap();
        prop_assert_eq!(v[0], start);
        prop_assert!(v.windows(2).all(|w| w[1] == w[0] + step));
        prop_assert!(*v.last().unwrap() <= stop && *v.last().unwrap() + step > stop);
        let json = format!(r#"{{"start": {start}, "stop": {stop}, "step": {step}}}"#);
        let parsed: Grid<usize> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(parsed.values().unwrap(), v);
    }
}
