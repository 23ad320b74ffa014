//! Invariants that cut across modules.

#[cfg(test)]
mod tests {
    use crate::carleson::{carleson_constant, reproducing_constant};
    use crate::interpolation::eis_constant;
    use crate::kernels::build_gram;
    use crate::spectral::jacobi_eigenvalues;
    use crate::sweep::{sweep, CSV_HEADER};
    use crate::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn opts() -> EigenOptions {
        EigenOptions::default()
    }

    fn point() -> impl Strategy<Value = GapPoint> {
        (-3.1f64..3.1, 0.05f64..0.9).prop_map(|(a, g)| GapPoint::new(a, g).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hardy_constant_is_bounded_by_the_model_constant(
            pts in prop::collection::vec(point(), 2..6), mass in 0.05f64..2.0, angle in -3.1f64..3.1,
        ) {
            let Ok(seq) = BlaschkeSequence::from_points(pts) else { return Ok(()) };
            let theta = InnerFunction::atomic(mass, angle).unwrap();
            let w = seq.window(1, seq.len()).unwrap();
            let kappa = seq.points().iter().map(|p| theta.eval(p).upper).fold(0.0, f64::max);
            let hardy = eis_constant(&KernelFamily::Hardy, &seq, w, &opts(), Exec::Sequential);
            let model = eis_constant(&KernelFamily::Model(theta), &seq, w, &opts(), Exec::Sequential);
            if let (Ok(h), Ok(m)) = (hardy, model) {
                prop_assert!(h <= m / (1.0 - kappa * kappa).sqrt() * (1.0 + 1e-9), "{h} {m} {kappa}");
            }
        }

        #[test]
        fn model_chain_on_random_windows(
            pts in prop::collection::vec(point(), 2..5), mass in 0.05f64..2.0, angle in -3.1f64..3.1,
        ) {
            let Ok(seq) = BlaschkeSequence::from_points(pts) else { return Ok(()) };
            let theta = InnerFunction::atomic(mass, angle).unwrap();
            let model = KernelFamily::Model(theta.clone());
            let w = seq.window(1, seq.len()).unwrap();
            let sigma = DiscreteMeasure::sigma(&seq, &theta, w).unwrap();
            let grid = GridSpec { levels: 12, angles: 32, refine_steps: 10 };
            let c = carleson_constant(&sigma, &model, &seq, &opts(), Exec::Sequential).unwrap();
            let r = reproducing_constant(&sigma, &model, &seq, &grid, Exec::Sequential).unwrap();
            prop_assert!(r.value >= 1.0 - 1e-12);
            prop_assert!(r.value <= c.value * (1.0 + 1e-9));
        }

        #[test]
        fn beurling_systems_are_dual_on_thin_windows(start in 3usize..14) {
            let seq = BlaschkeSequence::generate(Generator::RadialSuperexp { q: 0.5 }, start + 5).unwrap();
            let zeros = seq.points()[start - 1..].to_vec();
            for construction in [Construction::KernelSquared, Construction::damped_for(&zeros).unwrap()] {
                let s = BeurlingSystem::new(zeros.clone(), construction).unwrap();
                for j in 0..zeros.len() {
                    for (k, z) in zeros.iter().enumerate() {
                        let want = Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0);
                        prop_assert!((s.eval(j, z) - want).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn model_constant_tracks_hardy_when_kappa_vanishes() {
        let seq = BlaschkeSequence::generate(Generator::RadialFactorial, 15).unwrap();
        let theta = InnerFunction::atomic(1.0, 0.0).unwrap();
        for n in 10..=14 {
            let w = seq.window(n, 15).unwrap();
            let kappa = theta.tail_kappa(&seq, n).unwrap();
            let h = eis_constant(&KernelFamily::Hardy, &seq, w, &opts(), Exec::Sequential).unwrap();
            let m = eis_constant(&KernelFamily::Model(theta.clone()), &seq, w, &opts(), Exec::Sequential).unwrap();
            assert!(m <= h / (1.0 - kappa * kappa).sqrt() * (1.0 + 1e-10));
        }
    }

    #[test]
    fn duality_on_the_corpus() {
        for g in [Generator::RadialFactorial, Generator::RadialSuperexp { q: 0.5 }, Generator::RadialGeometric { q: 0.5 }] {
            let seq = BlaschkeSequence::generate(g, 12).unwrap();
            for n in 1..=8 {
                let w = seq.window(n, 12).unwrap();
                let e = eis_constant(&KernelFamily::Hardy, &seq, w, &opts(), Exec::Parallel).unwrap();
                let g = build_gram(&KernelFamily::Hardy, &seq, w, Exec::Parallel).unwrap();
                let lmin = jacobi_eigenvalues(g.matrix())[0];
                assert!((e * e * lmin - 1.0).abs() < 1e-10, "{g:?} {n}");
            }
        }
    }

    #[test]
    fn sweep_is_deterministic_and_ordered() {
        let seq = BlaschkeSequence::generate(Generator::RadialFactorial, 12).unwrap();
        let cfg = SweepConfig {
            window: WindowPolicy { n_min: 1, n_max: 10, cutoff: Cutoff::Last },
            theta: Some(InnerFunction::atomic(1.0, 0.0).unwrap()),
            eigen: opts(),
            grid: GridSpec { levels: 20, angles: 32, refine_steps: 10 },
            tail_tol: 1e-8,
        };
        let a = sweep(&seq, &cfg, Exec::Parallel).unwrap();
        let b = sweep(&seq, &cfg, Exec::Parallel).unwrap();
        let c = sweep(&seq, &cfg, Exec::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.rows.iter().map(|r| r.n).collect::<Vec<_>>(), (1..=10).collect::<Vec<_>>());
        for r in &a.rows {
            assert_eq!(r.csv_record().len(), CSV_HEADER.len());
            assert!(r.row_error.is_none(), "{:?}", r.row_error);
        }
    }
}
