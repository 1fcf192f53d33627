use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use fcring::cyclo::{gcd_u64, Cyclotomic};
use fcring::fcsets::{closure, dual, enumerate_fcsets, is_fc, join, meet, FcSet};
use fcring::fusion::{FusionData, ModularData};
use fcring::galois::galois_action;
use fcring::io::{catalog, parse_model, write_model, ModelFile};
use fcring::RunConfig;

const CONDUCTORS: &[u32] = &[1, 3, 4, 5, 8, 12, 15, 16];

/// A random element of `Q(ζ_n)` as a rational combination of roots of unity.
fn cyclo() -> impl Strategy<Value = Cyclotomic> {
    (prop::sample::select(CONDUCTORS), prop::collection::vec((-6i64..=6, 1i64..=4, 0i64..16), 1..4)).prop_map(
        |(n, terms)| {
            terms
                .into_iter()
                .map(|(a, b, k)| &Cyclotomic::from_frac(a, b) * &Cyclotomic::root_of_unity(k, n))
                .sum()
        },
    )
}

fn unit_mod(n: i64) -> impl Strategy<Value = i64> {
    (1..=4 * n).prop_filter("unit", move |&l| gcd_u64(l as u64, n as u64) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in cyclo(), b in cyclo(), c in cyclo()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert!(a.abs_squared().is_real());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn galois_is_a_field_automorphism(a in cyclo(), b in cyclo(), l in unit_mod(240), m in unit_mod(240)) {
        let s = |x: &Cyclotomic, k: i64| x.galois(k).unwrap();
        prop_assert_eq!(s(&(&a * &b), l), &s(&a, l) * &s(&b, l));
        prop_assert_eq!(s(&(&a + &b), l), &s(&a, l) + &s(&b, l));
        prop_assert_eq!(s(&s(&a, m), l), s(&a, l * m));
        prop_assert_eq!(s(&a, -1), a.conj());
    }

    #[test]
    fn literals_round_trip(a in cyclo(), k in 1u32..3) {
        let m = a.conductor() * k;
        let lit = a.to_literal(m).unwrap();
        prop_assert_eq!(Cyclotomic::parse_literal(&lit, m).unwrap(), a);
    }
}

/// Random structurally valid model text: arbitrary fusion entries, not
/// necessarily satisfying the fusion axioms.
fn model() -> impl Strategy<Value = ModelFile> {
    (1usize..5).prop_flat_map(|rank| {
        (
            prop::collection::vec((0i64..40, 1i64..40), rank),
            prop::collection::vec((0..rank, 0..rank, 0..rank, 1u32..4), 0..12),
        )
            .prop_map(move |(w, e)| {
                let labels: Vec<String> = (0..rank).map(|i| format!("p{i}")).collect();
                let weights = w.into_iter().map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b))).collect();
                let fd = FusionData::from_entries("random", labels, weights, &e).unwrap();
                ModelFile::from_fusion_data(&fd, None)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn write_then_parse_is_identity(m in model()) {
        // parsing canonicalizes (implicit vacuum entries); after that,
        // parse and write are mutually inverse
        let canon = parse_model(&write_model(&m)).unwrap();
        let text = write_model(&canon);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, &canon);
        prop_assert_eq!(write_model(&back), text);
    }
}

fn catalog_models() -> &'static [ModularData] {
    static MODELS: OnceLock<Vec<ModularData>> = OnceLock::new();
    MODELS.get_or_init(|| {
        let cfg = RunConfig::default();
        catalog::catalog(&cfg).unwrap().iter().map(|m| m.modular_data(&cfg).unwrap()).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_and_dual_laws(which in 0usize..10, bits in any::<u16>(), other in any::<u16>()) {
        let models = catalog_models();
        let md = &models[which % models.len()];
        let pick = |b: u16| FcSet::from_indices(md.rank(), (0..md.rank()).filter(|i| b >> i & 1 == 1));
        let s = pick(bits);
        let g = closure(&s, md);
        prop_assert!(is_fc(&g, md));
        prop_assert!(s.is_subset(&g));
        prop_assert_eq!(closure(&g, md), g.clone());
        let h = closure(&pick(other), md);

        let gd = dual(&g, md).unwrap();
        prop_assert!(is_fc(&gd, md));
        prop_assert_eq!(dual(&gd, md).unwrap(), g.clone());
        // duality reverses order and swaps meet and join
        let m = meet(&g, &h);
        let j = join(&g, &h, md).unwrap();
        prop_assert!(is_fc(&m, md) && is_fc(&j, md));
        prop_assert_eq!(dual(&j, md).unwrap(), meet(&gd, &dual(&h, md).unwrap()));
        if g.is_subset(&h) {
            prop_assert!(dual(&h, md).unwrap().is_subset(&gd));
        }
    }

    #[test]
    fn galois_permutations_compose(which in 0usize..10, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let models = catalog_models();
        let md = &models[which % models.len()];
        let ga = galois_action(md).unwrap();
        let l = ga.units[i.index(ga.units.len())];
        let m = ga.units[j.index(ga.units.len())];
        let lm = ((u64::from(l) * u64::from(m)) % u64::from(ga.field.max(1))) as u32;
        let composed: Vec<usize> = ga.perm(m).iter().map(|&p| ga.perm(l)[p]).collect();
        prop_assert_eq!(ga.perm(lm), composed.as_slice());
        // signs are normalized by ε(0) = 1, which turns the cocycle rule into
        // ε_{ℓm}(p) = ε_m(p) ε_ℓ(π_m p) ε_ℓ(π_m 0)
        let pm = ga.perm(m);
        for p in 0..md.rank() {
            prop_assert_eq!(ga.sign(lm, p), ga.sign(m, p) * ga.sign(l, pm[p]) * ga.sign(l, pm[0]));
        }
        let _ = enumerate_fcsets(md, &RunConfig::default()).unwrap();
    }
}

/// Pointed model on `Z_n` with twist `h_k = a k² / n` (odd `n`) or
/// `a k² / 2n` (even `n`), `a` a unit.
fn pointed(n: usize, a: i64) -> FusionData {
    let den = if n % 2 == 1 { n as i64 } else { 2 * n as i64 };
    let labels = (0..n).map(|k| k.to_string()).collect();
    let weights = (0..n as i64)
        .map(|k| BigRational::new(BigInt::from((a * k * k).rem_euclid(den)), BigInt::from(den)))
        .collect();
    let mut e = Vec::new();
    for x in 0..n {
        for y in x..n {
            e.push((x, y, (x + y) % n, 1));
        }
    }
    FusionData::from_entries(format!("z{n}a{a}"), labels, weights, &e).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn every_suite_holds_on_pointed_models(n in 2usize..8, a in 1i64..16) {
        let den = if n % 2 == 1 { n as i64 } else { 2 * n as i64 };
        prop_assume!(gcd_u64(a as u64, den as u64) == 1);
        let cfg = RunConfig::default();
        let md = fcring::fusion::build_modular_data(&pointed(n, a), &cfg).unwrap();
        let lat = enumerate_fcsets(&md, &cfg).unwrap();
        let ga = galois_action(&md).unwrap();
        let checks = fcring::suite::full_suite(&md, &lat, &ga, &cfg);
        let bad: Vec<String> = checks.iter().filter(|c| !c.check.passed).map(|c| format!("[{}] {}", c.set, c.check)).collect();
        prop_assert!(bad.is_empty(), "{}", bad.join("; "));
        // subgroups of Z_n: one FC set per divisor
        prop_assert_eq!(lat.len(), (1..=n).filter(|d| n % d == 0).count());
    }
}
