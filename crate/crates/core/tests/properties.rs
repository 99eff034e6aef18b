use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use icosa_core::context::Context;
use icosa_core::field::{valid_primes, SCREENING_PRIME_START};
use icosa_core::picard::{sandwich_term, DivisorClass, D, H};
use icosa_core::symbolic::vanishing_matrix;
use icosa_core::{FieldElement, HomogeneousPolynomial, ModularImage, ProjectivePoint};

fn arb_class() -> impl Strategy<Value = DivisorClass> {
    (-60i64..60, -20i64..20, -20i64..20, -20i64..20).prop_map(|(h, a, b, c)| DivisorClass::new(h, a, b, c))
}

fn arb_element() -> impl Strategy<Value = FieldElement> {
    (-5i64..=5, -5i64..=5).prop_map(|(a, b)| FieldElement::from_ints(a, b))
}

fn point(i: usize) -> ProjectivePoint {
    Context::shared().unwrap().arrangement.all_points()[i % 31].clone()
}

/// A product of `k` lines through `p`, each given by a random direction.
fn lines_through(p: &ProjectivePoint, dirs: &[[FieldElement; 3]]) -> HomogeneousPolynomial {
    let c = p.coords();
    dirs.iter()
        .filter_map(|v| {
            let l = [
                &(&c[1] * &v[2]) - &(&c[2] * &v[1]),
                &(&c[2] * &v[0]) - &(&c[0] * &v[2]),
                &(&c[0] * &v[1]) - &(&c[1] * &v[0]),
            ];
            let f = HomogeneousPolynomial::linear(l);
            (!f.is_zero()).then_some(f)
        })
        .fold(HomogeneousPolynomial::constant(FieldElement::from_ints(1, 0)), |acc, l| acc.mul(&l))
}

fn arb_dirs(n: usize) -> impl Strategy<Value = Vec<[FieldElement; 3]>> {
    proptest::collection::vec([arb_element(), arb_element(), arb_element()], 0..=n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn class_text_round_trips(c in arb_class()) {
        let back: DivisorClass = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn intersection_is_symmetric_bilinear(a in arb_class(), b in arb_class(), c in arb_class(), k in -5i64..5) {
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.add(&b.scale(k)).intersect(&c), a.intersect(&c) + k * b.intersect(&c));
    }

    #[test]
    fn euler_series(k in 1i64..5000) {
        let c = D.scale(k).add(&H.scale(2));
        prop_assert_eq!(c.euler_char().unwrap(), 6 + 30 * i128::from(k));
        prop_assert_eq!(c.intersect(&D), 80);
    }

    #[test]
    fn sandwich_terms_decrease_to_the_bound(k in 1i64..10_000) {
        let bound = BigRational::new(BigInt::from(11), BigInt::from(2));
        prop_assert!(sandwich_term(k) > bound);
        prop_assert!(sandwich_term(k + 1) < sandwich_term(k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplicity_is_additive(i in 0usize..31, f in arb_dirs(3), g in arb_dirs(3), u in arb_element()) {
        let p = point(i);
        let f = lines_through(&p, &f);
        // Shift g by a form that is nonzero at p so that its multiplicity is
        // not always the number of lines.
        let g = lines_through(&p, &g);
        let g = if u == FieldElement::from_ints(0, 0) || g.degree() == 0 {
            g
        } else {
            g.add(&HomogeneousPolynomial::linear(p.coords().clone()).pow(g.degree()).scale(&u))
        };
        prop_assume!(!g.is_zero());
        let mf = f.multiplicity_at(&p).unwrap();
        let mg = g.multiplicity_at(&p).unwrap();
        prop_assert_eq!(f.mul(&g).multiplicity_at(&p).unwrap(), mf + mg);
        prop_assert!(f.has_multiplicity_at_least(&p, mf));
        prop_assert!(!f.has_multiplicity_at_least(&p, mf + 1));
    }

    #[test]
    fn modular_rank_matches_exact(
        picks in proptest::collection::btree_set(0usize..31, 1..8),
        m in 1u32..=3,
        d in 1u32..=6,
    ) {
        let pts: Vec<ProjectivePoint> = picks.into_iter().map(point).collect();
        let sys = vanishing_matrix(&pts, m, d);
        let img = ModularImage::new(valid_primes(SCREENING_PRIME_START).next().unwrap()).unwrap();
        prop_assert_eq!(sys.rank_mod(&img).unwrap(), sys.rank_exact());
        for f in sys.kernel_forms() {
            prop_assert!(pts.iter().all(|p| f.has_multiplicity_at_least(p, m)));
        }
    }
}
