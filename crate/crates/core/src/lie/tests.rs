use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;

const N: usize = DEFAULT_RESOLUTION;

fn random_point(rng: &mut ChaCha8Rng, dim: usize, r: f64) -> Point {
    let mut p = [0.0; 3];
    for c in p.iter_mut().take(dim) {
        *c = rng.random_range(-r..r);
    }
    p
}

#[test]
fn catalog_charts_validate() {
    for g in catalog().unwrap() {
        assert!(g.validate().is_ok(), "{}", g.name);
    }
    let mut broken = (*chart("aff").unwrap()).clone();
    broken.density = |_| 1.0;
    assert!(matches!(broken.validate(), Err(Error::Numeric(_))));
    let mut broken = (*chart("heis").unwrap()).clone();
    broken.inv = |x| [-x[0], -x[1], -x[2]];
    assert!(broken.validate().is_err());
    assert!(chart("so3").is_err());
}

#[test]
fn density_is_left_invariant_under_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in catalog().unwrap() {
        let bounds = vec![(-5.0, 5.0); g.dim];
        let base = midpoint_integral(&bounds, 160, |x| gaussian(x) * g.density(x));
        for _ in 0..3 {
            let h = random_point(&mut rng, g.dim, 0.5);
            let moved = midpoint_integral(&bounds, 160, |x| gaussian(&g.mul(&h, x)) * g.density(x));
            assert!((moved - base).abs() <= 1e-3 * base, "{} {moved} {base}", g.name);
        }
    }
}

#[test]
fn abelian_plane_is_unimodular() {
    let g = chart("r2").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let x = random_point(&mut rng, 2, 3.0);
        assert!((modular_function(&g, &x, N).unwrap() - 1.0).abs() <= 1e-6);
    }
}

/// `ℓ(S)/ℓ(Sg)` for the box `S = [-1/2, 1/2]²` and density `e^{-s}`, integrated by
/// hand: the translate `Sg = {(s + s₀, b + eˢ b₀)}` has unit-length `b`-fibres
/// over `[s₀ - 1/2, s₀ + 1/2]`, so `ℓ(Sg) = e^{-s₀} ℓ(S)`.
fn aff_oracle(g: &Point) -> f64 {
    let box_integral = |lo: f64, hi: f64| (-lo).exp() - (-hi).exp();
    box_integral(-0.5, 0.5) / box_integral(g[0] - 0.5, g[0] + 0.5)
}

#[test]
fn affine_group_modular_function() {
    let aff = chart("aff").unwrap();
    let g = aff.standard_point(&[2.0, 0.0]).unwrap();
    assert!((g[0] - 2f64.ln()).abs() < 1e-15);
    let delta = modular_function(&aff, &g, N).unwrap();
    assert!((delta - aff_oracle(&g)).abs() <= 1e-6);
    assert!((delta - 2.0).abs() <= 1e-6);
    let back = modular_function(&aff, &aff.inv(&g), N).unwrap();
    assert!((delta * back - 1.0).abs() <= 1e-3);
    assert!((delta - 1.0).abs() > 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let x = random_point(&mut rng, 2, 2.0);
        assert!((modular_function(&aff, &x, N).unwrap() - aff_oracle(&x)).abs() <= 1e-6 * aff_oracle(&x));
    }
    assert!(matches!(aff.standard_point(&[-1.0, 0.0]), Err(Error::Domain(_))));
}

#[test]
fn sol_is_unimodular() {
    let sol = chart("sol").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let g = random_point(&mut rng, 3, 2.0);
        assert!((modular_function(&sol, &g, N).unwrap() - 1.0).abs() <= 1e-3);
    }
}

#[test]
fn cocycle_and_inverse_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in catalog().unwrap() {
        for _ in 0..100 {
            let a = random_point(&mut rng, g.dim, 1.0);
            let b = random_point(&mut rng, g.dim, 1.0);
            let mu = |x: &Point| modular_function(&g, x, N).unwrap();
            assert!((mu(&g.mul(&a, &b)) - mu(&a) * mu(&b)).abs() <= 5e-3, "{}", g.name);
            assert!((mu(&a) * mu(&g.inv(&a)) - 1.0).abs() <= 1e-3);
        }
    }
}

#[test]
fn unimodularity_matches_declared_flags() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for g in catalog().unwrap() {
        let deviation = (0..20)
            .map(|_| (modular_function(&g, &random_point(&mut rng, g.dim, 1.0), N).unwrap() - 1.0).abs())
            .fold(0.0f64, f64::max);
        assert_eq!(deviation <= 1e-3, g.unimodular, "{} {deviation}", g.name);
    }
    let aff = chart("aff").unwrap();
    let g = aff.standard_point(&[2.0, 0.0]).unwrap();
    assert!((modular_function(&aff, &g, N).unwrap() - 1.0).abs() > 0.5);
}

#[test]
fn report_carries_the_convention() {
    let aff = chart("aff").unwrap();
    let g = aff.standard_point(&[2.0, 0.0]).unwrap();
    let r = ModularReport::compute(&aff, &g, N).unwrap();
    assert_eq!(r.convention, MODULAR_CONVENTION);
    assert_eq!(r.resolution, N);
    assert!(r.richardson_delta < 1e-6);
    assert_eq!(r.element.len(), 2);
}

#[test]
fn quadrature_is_deterministic_across_thread_counts() {
    let heis = chart("heis").unwrap();
    let g = [0.3, -0.2, 0.7];
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| modular_function(&heis, &g, 48).unwrap())
    };
    assert_eq!(run(1).to_bits(), run(4).to_bits());
}

#[test]
fn translate_leaving_the_chart_is_a_domain_error() {
    let mut interval = (*chart("r").unwrap()).clone();
    interval.domain = |x| x[0].abs() < 1.2;
    assert!(matches!(modular_function(&interval, &[0.5, 0.0, 0.0], N), Err(Error::Domain(_))));
    assert!(matches!(modular_function(&interval, &[2.0, 0.0, 0.0], N), Err(Error::Domain(_))));
    interval.reference_box = vec![(-0.5, 0.5)];
    assert!((modular_function(&interval, &[0.5, 0.0, 0.0], N).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn invariant_measure_criterion() {
    let t = ADMITS_TOLERANCE;
    assert!(admits_invariant_measure(&subgroup("sol", "n").unwrap(), N, t).unwrap().admits);
    assert!(admits_invariant_measure(&subgroup("aff", "translations").unwrap(), N, t).unwrap().admits);
    let scalings = admits_invariant_measure(&subgroup("aff", "scalings").unwrap(), N, t).unwrap();
    assert!(!scalings.admits);
    assert!(scalings.margin > 0.5);
    assert!(admits_invariant_measure(&subgroup("aff", "aff").unwrap(), N, t).unwrap().admits);
    assert!(admits_invariant_measure(&subgroup("heis", "x-axis").unwrap(), N, t).unwrap().admits);

    let mut far = subgroup("r", "z").unwrap().with_spacing(1.0);
    let mut r = (*far.parent).clone();
    r.domain = |x| x[0].abs() < 0.5;
    far.parent = std::sync::Arc::new(r);
    assert!(matches!(admits_invariant_measure(&far, N, t), Err(Error::Precondition(_))));
}

#[test]
fn unimodular_subgroups_of_the_affine_group_lie_in_the_kernel() {
    let aff = chart("aff").unwrap();
    for h in subgroups(&aff) {
        let r = admits_invariant_measure(&h, N, ADMITS_TOLERANCE).unwrap();
        if r.admits && h.trivially_unimodular() {
            for s in h.samples() {
                assert!((modular_function(&aff, &s, N).unwrap() - 1.0).abs() <= ADMITS_TOLERANCE, "{}", h.name);
            }
        }
    }
}

#[test]
fn catalog_subgroups_are_closed() {
    for g in catalog().unwrap() {
        for h in subgroups(&g) {
            assert!(h.is_closed_on_samples(1e-12), "{} in {}", h.name, g.name);
        }
    }
}

#[test]
fn normalized_haar_examples() {
    let f = BumpFunction::default();
    let r = chart("r").unwrap();
    let trivial = HaarHandle::new(&subgroup("r", "trivial").unwrap(), &f, None).unwrap();
    assert_eq!(trivial.len(), 1);
    assert_eq!(trivial.weights().next().unwrap().1, 1.0);
    assert_eq!(f.eval(&r, &r.identity), 1.0);

    // f(-1) + f(0) + f(1) = 1/3 + 1 + 1/3
    let z = HaarHandle::new(&subgroup("r", "z").unwrap(), &f, None).unwrap();
    for (p, w) in z.weights() {
        assert!((w - 3.0 / 5.0).abs() < 1e-15, "{p:?}");
    }

    for g in catalog().unwrap() {
        for h in subgroups(&g) {
            let m = HaarHandle::new(&h, &f, None).unwrap();
            assert!((m.integrate(|x| f.eval(&g, x)) - 1.0).abs() <= 1e-6, "{}", h.name);
        }
    }
}

#[test]
fn normalized_haar_is_left_invariant() {
    let f = BumpFunction::default();
    for g in catalog().unwrap() {
        for h in subgroups(&g) {
            let m = HaarHandle::new(&h, &f, None).unwrap();
            let base = m.integrate(gaussian);
            for s in h.samples() {
                let moved = m.integrate(|x| gaussian(&g.mul(&s, x)));
                assert!((moved - base).abs() <= 1e-3, "{} in {}: {moved} vs {base}", h.name, g.name);
            }
        }
    }
}

#[test]
fn divergent_normalization_is_reported() {
    // Aff in (a, b) coordinates; the scalings t ↦ (eᵗ, 0) carry Haar measure dt = da/a,
    // and the triangular bump about a = 1 does not vanish as a → 0.
    let ab = LieGroupChart {
        name: "aff-ab".into(),
        dim: 2,
        mul: |x, y| [x[0] * y[0], x[1] + x[0] * y[1], 0.0],
        inv: |x| [1.0 / x[0], -x[1] / x[0], 0.0],
        identity: [1.0, 0.0, 0.0],
        density: |x| 1.0 / (x[0] * x[0]),
        density_id: "1/a^2".into(),
        domain: |x| x[0] > 0.0,
        reference_box: vec![(0.5, 1.5), (-0.5, 0.5)],
        unimodular: false,
        from_standard: |p| Some(*p),
    };
    ab.validate().unwrap();
    let scalings =
        ClosedSubgroupChart::new("scalings", std::sync::Arc::new(ab), SubgroupKind::Continuous { dim: 1 }, |t| {
            [t[0].exp(), 0.0, 0.0]
        });
    let err = HaarHandle::new(&scalings, &BumpFunction::default(), None).unwrap_err();
    assert!(matches!(err, Error::Numeric(_)));
}

#[test]
fn continuity_along_families() {
    let f = BumpFunction::default();
    let fam = family("lattice-in-r").unwrap();
    let r = continuity_probe(&fam, &f, gaussian, CONTINUITY_TOLERANCE).unwrap();
    assert!(r.converged);
    assert!(r.final_difference < r.differences[7]);
    // ∫ g dm_f(ℝ) = ∫ e^{-x²} / ∫ f = √π / 1.5
    assert!((r.limit - std::f64::consts::PI.sqrt() / 1.5).abs() < 1e-4);

    let constant = continuity_probe(&family("constant-sol-n").unwrap(), &f, gaussian, CONTINUITY_TOLERANCE).unwrap();
    assert!(constant.differences.iter().all(|&d| d == 0.0));

    for fam in families().unwrap() {
        let r = continuity_probe(&fam, &f, gaussian, CONTINUITY_TOLERANCE).unwrap();
        assert!(r.converged, "{} {}", fam.name, r.final_difference);
        assert_eq!(r.indices.len(), 64);
    }
}

#[test]
fn closedness_along_families() {
    for name in ["lattice-in-r", "translation-lattices-in-aff", "constant-sol-n"] {
        let r = closedness_probe(&family(name).unwrap(), N, ADMITS_TOLERANCE).unwrap();
        assert!(r.closed, "{name}");
    }
}

#[test]
fn catalog_file_round_trip() {
    let text = catalog_value().unwrap().to_string();
    let loaded = load_catalog(&text).unwrap();
    assert_eq!(loaded.len(), 5);
    let custom = r#"{"groups": [{"name": "aff", "box": [[-0.25, 0.25], [-1, 1]], "density": "exp(-s)"}]}"#;
    let aff = &load_catalog(custom).unwrap()[0];
    assert_eq!(aff.reference_box, vec![(-0.25, 0.25), (-1.0, 1.0)]);
    assert!((modular_function(aff, &[1.0, 0.5, 0.0], N).unwrap() - 1f64.exp()).abs() < 1e-6);
    assert!(load_catalog(r#"{"groups": [{"name": "gl2"}]}"#).is_err());
    assert!(load_catalog(r#"{"groups": [{"name": "sol", "density": "exp(-s)"}]}"#).is_err());
    assert!(load_catalog(r#"{"groups": [{"name": "r", "dim": 2}]}"#).is_err());
}
