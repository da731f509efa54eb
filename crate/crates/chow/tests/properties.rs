//! Property tests: canonical form, ring axioms, order axioms, the mod-p
//! homomorphism, and Groebner confluence on random inputs.

use chow::groebner::{buchberger, normal_form, Ideal};
use chow::monomial::{Monomial, MonomialOrder};
use chow::poly::{MultiPoly, RingCtx, DEFAULT_ORDER};
use chow::scalar::Scalar;
use chow::{FieldTag, Limits};
use proptest::prelude::*;
use std::cmp::Ordering;
use std::sync::Arc;

fn arb_monomial(nvars: usize, max_exp: u32) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0..=max_exp, nvars).prop_map(Monomial)
}

fn arb_poly(ring: Arc<RingCtx>, terms: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    let nvars = ring.nvars();
    proptest::collection::vec((arb_monomial(nvars, max_exp), -6i64..=6), 0..=terms).prop_map(
        move |pairs| {
            MultiPoly::from_terms(
                &ring,
                DEFAULT_ORDER,
                pairs
                    .into_iter()
                    .map(|(m, c)| (m, Scalar::from_int(ring.field, c)))
                    .collect(),
            )
        },
    )
}

fn qring() -> Arc<RingCtx> {
    RingCtx::rational(&["x", "y", "z"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_strictly_descending(f in arb_poly(qring(), 8, 4), g in arb_poly(qring(), 8, 4)) {
        for op in 0..3 {
            let h = match op {
                0 => f.add(&g).unwrap(),
                1 => f.sub(&g).unwrap(),
                _ => f.mul(&g).unwrap(),
            };
            for w in h.terms.windows(2) {
                prop_assert_eq!(h.order.cmp(&w[0].0, &w[1].0), Ordering::Greater);
            }
            prop_assert!(h.terms.iter().all(|(_, c)| !c.is_zero()));
        }
    }

    #[test]
    fn ring_axioms(
        f in arb_poly(qring(), 6, 3),
        g in arb_poly(qring(), 6, 3),
        h in arb_poly(qring(), 6, 3),
    ) {
        // associativity and commutativity of + and *
        let ab = f.add(&g).unwrap();
        prop_assert_eq!(ab.add(&h).unwrap(), f.add(&g.add(&h).unwrap()).unwrap());
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        let fg = f.mul(&g).unwrap();
        prop_assert_eq!(fg.mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        // distributivity
        let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduce_mod_p_is_a_ring_homomorphism(
        f in arb_poly(qring(), 6, 3),
        g in arb_poly(qring(), 6, 3),
    ) {
        for p in [5u64, 13] {
            let lhs_sum = f.add(&g).unwrap().reduce_mod_p(p).unwrap();
            let rhs_sum = f.reduce_mod_p(p).unwrap().add(&g.reduce_mod_p(p).unwrap()).unwrap();
            prop_assert_eq!(lhs_sum, rhs_sum);
            let lhs_prod = f.mul(&g).unwrap().reduce_mod_p(p).unwrap();
            let rhs_prod = f.reduce_mod_p(p).unwrap().mul(&g.reduce_mod_p(p).unwrap()).unwrap();
            prop_assert_eq!(lhs_prod, rhs_prod);
        }
    }

    #[test]
    fn monomial_orders_are_total_and_multiplicative(
        a in arb_monomial(3, 5),
        b in arb_monomial(3, 5),
        w in arb_monomial(3, 4),
    ) {
        for order in [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::Block { split: 1 }] {
            // totality with antisymmetry
            let ab = order.cmp(&a, &b);
            let ba = order.cmp(&b, &a);
            prop_assert_eq!(ab, ba.reverse());
            if ab == Ordering::Equal {
                prop_assert_eq!(&a, &b);
            }
            // 1 is minimal
            let one = Monomial::one(3);
            prop_assert_ne!(order.cmp(&one, &a), Ordering::Greater);
            // multiplicativity: a < b implies aw < bw
            let aw = a.mul(&w).unwrap();
            let bw = b.mul(&w).unwrap();
            prop_assert_eq!(order.cmp(&aw, &bw), ab);
        }
    }

    #[test]
    fn homogenize_dehomogenize_roundtrip(f in arb_poly(qring(), 6, 3)) {
        let h = f.homogenize("w").unwrap();
        prop_assert!(h.is_homogeneous());
        prop_assert_eq!(h.dehomogenize(3), f);
    }

    #[test]
    fn normal_form_against_reduced_basis_is_confluent(
        f in arb_poly(qring(), 6, 3),
        g1 in arb_poly(qring(), 4, 2),
        g2 in arb_poly(qring(), 4, 2),
    ) {
        prop_assume!(!g1.is_zero() && !g2.is_zero());
        let limits = Limits::default();
        let basis = buchberger(&[g1, g2], DEFAULT_ORDER, &limits).unwrap();
        if basis.is_empty() {
            return Ok(());
        }
        let r1 = normal_form(&f, &basis, DEFAULT_ORDER);
        // reversed basis order must give the same normal form
        let reversed: Vec<MultiPoly> = basis.iter().rev().cloned().collect();
        let r2 = normal_form(&f, &reversed, DEFAULT_ORDER);
        prop_assert_eq!(r1, r2);
    }
}

#[test]
fn membership_soundness_on_a_mixed_corpus() {
    let limits = Limits::default();
    let rings = [
        RingCtx::rational(&["x", "y"]),
        RingCtx::prime(7, &["x", "y"]).unwrap(),
    ];
    for ring in &rings {
        let x = MultiPoly::var(ring, 0);
        let y = MultiPoly::var(ring, 1);
        let ideals = vec![
            vec![x.pow(3).unwrap().sub(&y.pow(2).unwrap()).unwrap()],
            vec![
                x.pow(2).unwrap().add(&y.pow(2).unwrap()).unwrap(),
                x.mul(&y).unwrap().sub(&MultiPoly::one(ring)).unwrap(),
            ],
            vec![
                x.pow(2).unwrap().sub(&y).unwrap(),
                y.pow(2).unwrap().sub(&x).unwrap(),
            ],
        ];
        for gens in ideals {
            let ideal = Ideal::new(ring, gens.clone()).unwrap();
            let gb = ideal
                .groebner_basis(MonomialOrder::GrevLex, &limits)
                .unwrap();
            for g in &gens {
                assert!(gb.contains(g), "generator escapes its own basis");
            }
        }
    }
}

#[test]
fn univariate_factor_multiplies_back_on_random_inputs() {
    use chow::univar::{factor_unipoly, UniPoly};
    use chow::util::DetRng;
    let limits = Limits::default();
    let mut rng = DetRng::new(7);
    for field in [FieldTag::Rational, FieldTag::Prime(13)] {
        for _ in 0..40 {
            let deg = 1 + rng.below(6) as usize;
            let coeffs: Vec<Scalar> = (0..=deg)
                .map(|i| {
                    let c = if i == deg {
                        1 + rng.below(3) as i64
                    } else {
                        rng.range_i64(-5, 5)
                    };
                    Scalar::from_int(field, c)
                })
                .collect();
            let f = UniPoly::from_coeffs(field, coeffs);
            if f.is_zero() || f.is_constant() {
                continue;
            }
            let (unit, factors) = factor_unipoly(&f, &limits).unwrap();
            let mut prod = UniPoly::constant(field, unit);
            for (g, e) in &factors {
                for _ in 0..*e {
                    prod = prod.mul(g);
                }
            }
            assert_eq!(prod, f);
        }
    }
}
