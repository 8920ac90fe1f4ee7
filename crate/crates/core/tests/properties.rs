use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use yamabe::algebra::{invariant_factors, smith_normal_form, FinAbGroup, IntMatrix, PrimePower};
use yamabe::analysis::{product_bound, toda_bound, warped_scalar_curvature, ProductBoundParams, TodaBoundParams};
use yamabe::geometry::{curvature_class, enumerate_generators, shuffle_toda, CurvatureClass, GeneratorTerm};
use yamabe::homology::{
    homology_of_abelian, poincare_series_closed, poincare_series_recursive, AbelianGroupSpec, CoefficientRing,
};
use yamabe::structure::{atoral_split, split_coefficients, SplitTag};
use yamabe::verdict::{classify_manifold, ClassLabel, ManifoldQuery, SpinStatus};

fn prime_power() -> impl Strategy<Value = PrimePower> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..=3).prop_map(|(p, k)| PrimePower::new(p, k).unwrap())
}

fn group() -> impl Strategy<Value = FinAbGroup> {
    (0usize..=2, prop::collection::vec(prime_power(), 0..=4)).prop_map(|(f, t)| FinAbGroup::new(f, t))
}

fn p_group(p: u64, max_factors: usize) -> impl Strategy<Value = AbelianGroupSpec> {
    prop::collection::vec(1u32..=2, 1..=max_factors)
        .prop_map(move |ks| AbelianGroupSpec::new(0, ks.into_iter().map(|k| PrimePower::new(p, k).unwrap()).collect()))
}

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-20i64..=20, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(g in group()) {
        let once = g.canonicalize();
        prop_assert_eq!(once.canonicalize(), once.clone());
        prop_assert_eq!(once.to_string().parse::<FinAbGroup>().unwrap(), once);
    }

    #[test]
    fn tensor_is_associative(a in group(), b in group(), c in group()) {
        prop_assert_eq!(a.tensor(&b).tensor(&c), a.tensor(&b.tensor(&c)));
    }

    #[test]
    fn smith_form_of_rectangular_matrices(m in matrix(12)) {
        let s = smith_normal_form(&m);
        let product = s.left.checked_mul(&m).and_then(|x| x.checked_mul(&s.right)).unwrap();
        prop_assert_eq!(product, s.diagonal_matrix());
        let nz: Vec<&BigInt> = s.diagonal.iter().take_while(|x| !x.is_zero()).collect();
        prop_assert!(s.diagonal[nz.len()..].iter().all(Zero::is_zero));
        prop_assert!(nz.iter().all(|x| x.is_positive()));
        for w in nz.windows(2) {
            prop_assert!(w[1].is_multiple_of(w[0]));
        }
        prop_assert_eq!(invariant_factors(&m), s.diagonal.clone());
    }

    #[test]
    fn homology_ignores_factor_order(mut factors in prop::collection::vec(prime_power(), 1..=3), seed in any::<u64>()) {
        let before = homology_of_abelian(&AbelianGroupSpec::new(0, factors.clone()), CoefficientRing::Integers, 6).unwrap();
        let n = factors.len();
        factors.rotate_left((seed as usize) % n);
        factors.swap(0, (seed as usize / 7) % n);
        let after = homology_of_abelian(&AbelianGroupSpec::new(0, factors), CoefficientRing::Integers, 6).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn spec_round_trips_through_display(free in 0usize..=2, factors in prop::collection::vec(prime_power(), 0..=4)) {
        let spec = AbelianGroupSpec::new(free, factors);
        prop_assert_eq!(spec.to_string().parse::<AbelianGroupSpec>().unwrap(), spec);
    }

    #[test]
    fn poincare_routes_agree(r in 1usize..=7, d in 0usize..=16) {
        prop_assert_eq!(poincare_series_recursive(r, d).unwrap(), poincare_series_closed(r, d).unwrap());
    }

    #[test]
    fn split_partitions_homology(spec in prop_oneof![p_group(2, 3), p_group(3, 3), p_group(5, 2)], d in 0usize..=7) {
        let coeff = split_coefficients(&spec).unwrap();
        let split = atoral_split(&spec, coeff, d).unwrap();
        let h = homology_of_abelian(&spec, coeff, d).unwrap();
        for (n, basis) in split.bases().iter().enumerate() {
            prop_assert_eq!(&basis.group(), h.get(n).unwrap());
            prop_assert_eq!(basis.count(SplitTag::Toral) + basis.count(SplitTag::Atoral), basis.entries.len());
        }
    }

    #[test]
    fn generators_have_the_right_dimension(spec in prop_oneof![p_group(2, 2), p_group(3, 3)], d in 0usize..=6) {
        let coeff = split_coefficients(&spec).unwrap();
        for g in enumerate_generators(&spec, coeff, d).unwrap() {
            prop_assert_eq!(g.generator.dimension(), d);
        }
    }
}

fn leaf() -> impl Strategy<Value = GeneratorTerm> {
    prop_oneof![
        Just(GeneratorTerm::circle()),
        Just(GeneratorTerm::point()),
        (prop::sample::select(vec![2u64, 3, 5]), 1u32..=2, 0usize..=3).prop_map(|(p, k, n)| GeneratorTerm::lens(
            p,
            k,
            2 * n + 1
        )
        .unwrap()),
        (1usize..=5).prop_map(|d| GeneratorTerm::real_proj(d).unwrap()),
    ]
}

fn term() -> impl Strategy<Value = GeneratorTerm> {
    leaf().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..=3).prop_map(GeneratorTerm::product),
            (inner.clone(), prime_power(), inner.clone()).prop_map(|(l, q, r)| GeneratorTerm::toda(l, q, r)),
            inner.prop_map(GeneratorTerm::transfer),
        ]
    })
}

/// A term with one hole.
#[derive(Clone, Debug)]
enum Ctx {
    Hole,
    Product(Vec<GeneratorTerm>, Box<Ctx>, Vec<GeneratorTerm>),
    TodaLeft(Box<Ctx>, GeneratorTerm),
    TodaRight(GeneratorTerm, Box<Ctx>),
    Transfer(Box<Ctx>),
}

impl Ctx {
    fn fill(&self, t: &GeneratorTerm) -> GeneratorTerm {
        let q = PrimePower::new(3, 1).unwrap();
        match self {
            Ctx::Hole => t.clone(),
            Ctx::Product(a, c, b) => {
                let mut v = a.clone();
                v.push(c.fill(t));
                v.extend(b.iter().cloned());
                GeneratorTerm::product(v)
            }
            Ctx::TodaLeft(c, r) => GeneratorTerm::toda(c.fill(t), q, r.clone()),
            Ctx::TodaRight(l, c) => GeneratorTerm::toda(l.clone(), q, c.fill(t)),
            Ctx::Transfer(c) => GeneratorTerm::transfer(c.fill(t)),
        }
    }
}

fn ctx() -> impl Strategy<Value = Ctx> {
    Just(Ctx::Hole).prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (prop::collection::vec(term(), 0..=2), inner.clone(), prop::collection::vec(term(), 0..=2))
                .prop_map(|(a, c, b)| Ctx::Product(a, Box::new(c), b)),
            (inner.clone(), term()).prop_map(|(c, r)| Ctx::TodaLeft(Box::new(c), r)),
            (term(), inner.clone()).prop_map(|(l, c)| Ctx::TodaRight(l, Box::new(c))),
            inner.prop_map(|c| Ctx::Transfer(Box::new(c))),
        ]
    })
}

fn torus(n: usize) -> GeneratorTerm {
    GeneratorTerm::product(vec![GeneratorTerm::circle(); n])
}

/// Same-dimension fillers of differing status; dimension 2 is left out
/// because the bracket exclusion makes a 2-dimensional psc piece weaker
/// than a flat one.
fn fillers(dim: usize) -> Vec<GeneratorTerm> {
    let q = PrimePower::new(3, 1).unwrap();
    let rp = |d| GeneratorTerm::real_proj(d).unwrap();
    let lens = |d| GeneratorTerm::lens(3, 1, d).unwrap();
    match dim {
        3 => vec![torus(3), lens(3), rp(3), GeneratorTerm::toda(lens(1), q, lens(1))],
        4 => vec![
            torus(4),
            rp(4),
            GeneratorTerm::toda(GeneratorTerm::circle(), q, rp(2)),
            GeneratorTerm::product(vec![GeneratorTerm::circle(), lens(3)]),
        ],
        _ => vec![torus(5), lens(5), GeneratorTerm::toda(torus(2), q, rp(2))],
    }
}

fn lens_circle_leaf() -> impl Strategy<Value = GeneratorTerm> {
    prop_oneof![
        Just(GeneratorTerm::circle()),
        (1u32..=2, 0usize..=2).prop_map(|(k, n)| GeneratorTerm::lens(3, k, 2 * n + 1).unwrap()),
    ]
}

proptest! {
    #[test]
    fn product_status_ignores_order(mut fs in prop::collection::vec(term(), 1..=4), seed in any::<usize>()) {
        let before = curvature_class(&GeneratorTerm::product(fs.clone()));
        let n = fs.len();
        fs.rotate_left(seed % n);
        fs.swap(0, (seed / 5) % n);
        prop_assert_eq!(curvature_class(&GeneratorTerm::product(fs)), before);
    }

    #[test]
    fn upgrading_a_subterm_never_downgrades(c in ctx(), dim in prop::sample::select(vec![3usize, 4, 5]), i in 0usize..4, j in 0usize..4) {
        let fs = fillers(dim);
        let (a, b) = (&fs[i % fs.len()], &fs[j % fs.len()]);
        let (lo, hi) = if curvature_class(a) <= curvature_class(b) { (a, b) } else { (b, a) };
        prop_assert!(curvature_class(&c.fill(lo)) <= curvature_class(&c.fill(hi)));
    }

    #[test]
    fn shuffle_preserves_dimension(prefix in prop::collection::vec(term(), 0..=2), last in term(), right in term(), q in prime_power()) {
        let mut fs = prefix;
        fs.push(last);
        let g = GeneratorTerm::toda(GeneratorTerm::product(fs), q, right);
        if let Ok(s) = shuffle_toda(&g) {
            prop_assert_eq!(s.dimension(), g.dimension());
        }
    }

    #[test]
    fn shuffle_never_downgrades_lens_brackets(
        prefix in prop::collection::vec(lens_circle_leaf(), 0..=3),
        k in 1u32..=2,
        n in 0usize..=2,
        right in lens_circle_leaf(),
        s in 1u32..=2,
    ) {
        let s = s.min(k);
        let mut fs = prefix;
        fs.push(GeneratorTerm::lens(3, k, 2 * n + 1).unwrap());
        let g = GeneratorTerm::toda(GeneratorTerm::product(fs), PrimePower::new(3, s).unwrap(), right);
        let shuffled = shuffle_toda(&g).unwrap();
        prop_assert_eq!(shuffled.dimension(), g.dimension());
        prop_assert!(curvature_class(&shuffled) >= curvature_class(&g));
        prop_assert_ne!(curvature_class(&g), CurvatureClass::Unknown);
    }
}

fn spin() -> impl Strategy<Value = SpinStatus> {
    prop_oneof![Just(SpinStatus::Spin), Just(SpinStatus::UniversalCoverNonSpin)]
}

fn label() -> impl Strategy<Value = ClassLabel> {
    prop_oneof![Just(ClassLabel::Toral), Just(ClassLabel::Atoral), Just(ClassLabel::Unspecified)]
}

proptest! {
    #[test]
    fn verdict_ignores_factor_order(
        mut factors in prop::collection::vec(prime_power(), 1..=5),
        n in 1usize..=9,
        spin in spin(),
        orientable in any::<bool>(),
        label in label(),
        seed in any::<usize>(),
    ) {
        let q = ManifoldQuery { group: AbelianGroupSpec::new(0, factors.clone()), dimension: n, spin, orientable, class_label: label };
        let before = classify_manifold(&q);
        let len = factors.len();
        factors.rotate_left(seed % len);
        factors.swap(0, (seed / 3) % len);
        let after = classify_manifold(&ManifoldQuery { group: AbelianGroupSpec::new(0, factors), ..q });
        prop_assert_eq!(before, after);
    }

    #[test]
    fn verdict_is_the_weakest_sylow_part(
        a in p_group(3, 4),
        b in p_group(5, 3),
        c in p_group(2, 3),
        use_two in any::<bool>(),
        n in 5usize..=8,
        spin in spin(),
        label in label(),
    ) {
        let mut parts = vec![a, b];
        if use_two {
            parts.push(c);
        }
        let whole = AbelianGroupSpec::new(0, parts.iter().flat_map(|p| p.factors.clone()).collect());
        let query = |g: AbelianGroupSpec| ManifoldQuery { group: g, dimension: n, spin, orientable: true, class_label: label };
        let v = classify_manifold(&query(whole)).unwrap();
        let min = parts.iter().map(|p| classify_manifold(&query(p.clone())).unwrap().status).min().unwrap();
        prop_assert_eq!(v.status, min);
        prop_assert!(v.status == yamabe::verdict::VerdictStatus::NotCovered || !v.citations.is_empty());
    }

    #[test]
    fn toda_bound_grows_with_eps(
        n0 in 1usize..=4, n1 in 1usize..=4,
        c in (0.1f64..3.0, 0.1f64..3.0, 0.0f64..3.0, 0.0f64..3.0),
        t in (0.01f64..0.99, 0.01f64..0.99),
        l in 0.1f64..50.0,
        eps in 0.0f64..2.0,
        bump in 0.0f64..2.0,
    ) {
        let p = TodaBoundParams { n0, n1, c0: c.0, c1: c.1, d0: c.2, d1: c.3, t0: t.0, t1: t.1, l, eps };
        let q = TodaBoundParams { eps: eps + bump, ..p };
        prop_assert!(toda_bound(&p) <= toda_bound(&q));
    }

    #[test]
    fn warped_curvature_is_homogeneous_in_the_fiber(s in -50.0f64..50.0, lambda in -10.0f64..10.0, n in 1usize..=8) {
        let base = warped_scalar_curvature(1.0, 0.0, 0.0, s, n).unwrap();
        let scaled = warped_scalar_curvature(1.0, 0.0, 0.0, lambda * s, n).unwrap();
        prop_assert!((scaled - lambda * base).abs() <= 1e-12 * (lambda * base).abs().max(1.0));
    }

    #[test]
    fn product_bound_decays(m in 0usize..=4, n in 1usize..=4, c in 0.0f64..5.0) {
        let at = |t: f64| product_bound(&ProductBoundParams { m, n, c, t, eps: 1.0 / (t * t) });
        prop_assert!(at(10.0) >= at(100.0) && at(100.0) >= at(1000.0));
        prop_assert!(at(1000.0) <= (c + 1.0).powf((n + m) as f64 / 2.0) * 1000f64.powi(-(n as i32)) * (1.0 + 1e-9));
    }
}
