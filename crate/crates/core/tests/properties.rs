use hemispec::fem::{CsrMatrix, SkylineCholesky};
use hemispec::spectra::{harmonic_dim, hemisphere_multiplicity, jacobi_spectrum, strong_index, weak_index, Cutoff};
use hemispec::verify::{alencar_inequality, alpha_h, p_h, simons_residual};
use hemispec::{HalvedFactor, ModelHypersurface};
use proptest::prelude::*;

fn any_model() -> impl Strategy<Value = ModelHypersurface> {
    (2usize..=7, 0usize..4, 0.05f64..0.95, any::<bool>()).prop_map(|(n, kind, r, first)| {
        let k = 1 + (r * 1000.0) as usize % (n - 1);
        let halved = if first { HalvedFactor::First } else { HalvedFactor::Second };
        match kind {
            0 => ModelHypersurface::equator(n).unwrap(),
            1 => ModelHypersurface::umbilical_cap(n, r).unwrap(),
            2 => ModelHypersurface::minimal_clifford_half(n, k).unwrap().with_halved(halved),
            _ => ModelHypersurface::h_torus_half(n, k, r).unwrap().with_halved(halved),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn descriptor_round_trip(m in any_model()) {
        let s = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(s.parse::<ModelHypersurface>().unwrap(), m);
    }

    #[test]
    fn constant_mode_is_lowest(m in any_model()) {
        let c = m.geometric_data().potential;
        let s = jacobi_spectrum(&m, Cutoff::Lowest(6)).unwrap();
        prop_assert!((s.lines[0].value + c).abs() <= 1e-12 * c.max(1.0));
        let values = s.expanded(6);
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn weak_is_strong_minus_one(m in any_model()) {
        let s = strong_index(&m).unwrap();
        let w = weak_index(&m).unwrap();
        prop_assert!(s.strong_index >= 1);
        prop_assert_eq!(w.weak_index, s.strong_index - 1);
        prop_assert!(s.lambda1 <= s.lambda1_weak);
    }

    #[test]
    fn invariants_consistent(m in any_model()) {
        let g = m.geometric_data();
        let n = g.n as f64;
        prop_assert!(g.norm_a0_2 >= -1e-12);
        prop_assert!((g.norm_a2 - g.h * g.h / n - g.norm_a0_2).abs() <= 1e-10 * g.norm_a2.max(1.0));
        prop_assert!((g.potential - g.norm_a2 - n).abs() <= 1e-12 * g.potential);
        prop_assert!(simons_residual(&m).pass);
    }

    #[test]
    fn alencar_random(n in 2usize..=8, raw in proptest::collection::vec(-10.0f64..10.0, 8)) {
        let mut t = raw[..n].to_vec();
        let mean = t.iter().sum::<f64>() / n as f64;
        t.iter_mut().for_each(|x| *x -= mean);
        let fix = t.iter().sum::<f64>();
        t[0] -= fix;
        prop_assert!(alencar_inequality(&t).unwrap().pass);
    }

    #[test]
    fn alpha_is_root(n in 3usize..=12, h in 0.0f64..50.0) {
        let a = alpha_h(n, h);
        prop_assert!(a > 0.0);
        prop_assert!(p_h(n, h, a).abs() <= 1e-12 * (1.0 + h * h));
    }

    #[test]
    fn hemisphere_counts_bounded(m in 1usize..=10, l in 0usize..=12) {
        let e = hemisphere_multiplicity(m, l).unwrap();
        prop_assert!(e <= harmonic_dim(m, l).unwrap());
        if l == 1 {
            prop_assert_eq!(e, m as u64);
        }
    }

    #[test]
    fn skyline_solves_spd(n in 3usize..40, seed in 0u64..1000, b in proptest::collection::vec(-1.0f64..1.0, 40)) {
        // sparse random graph Laplacian plus identity
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 1.0));
            for j in [(i * 7 + seed as usize) % n, (i + 1) % n] {
                if j != i {
                    t.extend([(i, i, 1.0), (j, j, 1.0), (i, j, -1.0), (j, i, -1.0)]);
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, t);
        let f = SkylineCholesky::factor(&a).unwrap();
        let x = f.solve(&b[..n]);
        let r = a.mul(&x);
        for (ri, bi) in r.iter().zip(&b[..n]) {
            prop_assert!((ri - bi).abs() < 1e-10);
        }
    }
}
