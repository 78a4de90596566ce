mod common;

use pgrl::nilring::{
    basis_commutators_check, commutator, commutes_by_form, enumerate_group, group_inv, group_mul, group_pow,
    kernel_exponent_check, lift_form, quotient_type_check, reduce_mod_p, ring_mul, GroupElement,
    NilRingElement, VectorForm,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Pair = (Vec<u64>, Vec<u64>);

fn pair(s: &NilRingElement) -> Pair {
    (
        s.a.iter().map(|&x| x as u64).collect(),
        s.b.iter().map(|&x| x as u64).collect(),
    )
}

fn params() -> impl Strategy<Value = (u32, u32, usize, usize, u64)> {
    (
        prop_oneof![Just(2u32), Just(3)],
        1u32..=2,
        1usize..=6,
        1usize..=3,
        any::<u64>(),
    )
}

fn setup((p, r, n, k, seed): (u32, u32, usize, usize, u64)) -> (VectorForm, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let form = VectorForm::random(p, r, n, k, &mut rng).unwrap();
    (form, rng)
}

fn elem(form: &VectorForm, rng: &mut ChaCha8Rng) -> GroupElement {
    GroupElement {
        s: NilRingElement::random(form, rng),
    }
}

proptest! {
    #[test]
    fn cube_of_the_ring_is_zero(params in params()) {
        let (form, mut rng) = setup(params);
        for _ in 0..20 {
            let s = NilRingElement::random(&form, &mut rng);
            let t = NilRingElement::random(&form, &mut rng);
            let u = NilRingElement::random(&form, &mut rng);
            let st = ring_mul(&s, &t, &form);
            prop_assert!(st.a.iter().all(|&x| x == 0));
            prop_assert_eq!(pair(&st), common::nil_mul(&form, &pair(&s), &pair(&t)));
            prop_assert!(ring_mul(&st, &u, &form).is_zero());
            prop_assert!(ring_mul(&u, &st, &form).is_zero());
        }
    }

    #[test]
    fn group_law_matches_oracle(params in params()) {
        let (form, mut rng) = setup(params);
        let id = GroupElement::identity(&form);
        for _ in 0..20 {
            let g = elem(&form, &mut rng);
            let h = elem(&form, &mut rng);
            let l = elem(&form, &mut rng);
            prop_assert_eq!(pair(&group_mul(&g, &h, &form).s), common::unit_mul(&form, &pair(&g.s), &pair(&h.s)));
            prop_assert_eq!(pair(&group_inv(&g, &form).s), common::unit_inv(&form, &pair(&g.s)));
            prop_assert_eq!(group_mul(&g, &group_inv(&g, &form), &form), id.clone());
            prop_assert_eq!(
                group_mul(&group_mul(&g, &h, &form), &l, &form),
                group_mul(&g, &group_mul(&h, &l, &form), &form)
            );
            prop_assert_eq!(pair(&commutator(&g, &h, &form).s), common::unit_commutator(&form, &pair(&g.s), &pair(&h.s)));
        }
    }

    #[test]
    fn nilpotent_of_class_two(params in params()) {
        let (form, mut rng) = setup(params);
        for _ in 0..20 {
            let g = elem(&form, &mut rng);
            let h = elem(&form, &mut rng);
            let x = elem(&form, &mut rng);
            let c = commutator(&g, &h, &form);
            prop_assert!(c.in_b());
            prop_assert!(commutator(&c, &x, &form).is_identity());
            prop_assert_eq!(commutes_by_form(&g, &h, &form), c.is_identity());
        }
    }

    #[test]
    fn power_matches_repeated_product(params in params(), e in 0u64..40) {
        let (form, mut rng) = setup(params);
        let g = elem(&form, &mut rng);
        let mut acc = GroupElement::identity(&form);
        for _ in 0..e {
            acc = group_mul(&acc, &g, &form);
        }
        prop_assert_eq!(group_pow(&g, e, &form), acc);
    }

    #[test]
    fn structural_checks(params in params(), seed in any::<u64>()) {
        let (form, _) = setup(params);
        prop_assert!(basis_commutators_check(&form));
        prop_assert!(quotient_type_check(&form));
        prop_assert!(kernel_exponent_check(&form, 50, seed));
    }

    #[test]
    fn lift_and_reduce(p in prop_oneof![Just(2u32), Just(3)], n in 1usize..=5, k in 1usize..=3, r in 1u32..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = VectorForm::random(p, 1, n, k, &mut rng).unwrap();
        let lifted = lift_form(&base, r).unwrap();
        prop_assert_eq!(lifted.r(), r);
        prop_assert_eq!(&lifted.reduce_mod_p(), &base);
        prop_assert!(quotient_type_check(&lifted));
        let g = elem(&lifted, &mut rng);
        let h = elem(&lifted, &mut rng);
        // Reduction modulo p is a homomorphism.
        prop_assert_eq!(
            reduce_mod_p(&group_mul(&g, &h, &lifted), &lifted),
            group_mul(&reduce_mod_p(&g, &lifted), &reduce_mod_p(&h, &lifted), &base)
        );
    }
}

#[test]
fn small_group_is_a_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let form = VectorForm::random(2, 1, 3, 2, &mut rng).unwrap();
    let all = enumerate_group(&form, 1 << 12).unwrap();
    assert_eq!(all.len(), 32);
    let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
    for g in &all {
        for h in &all {
            assert!(set.contains(&group_mul(g, h, &form)));
        }
    }
    let center = all
        .iter()
        .filter(|g| all.iter().all(|h| commutator(g, h, &form).is_identity()))
        .count();
    assert!(center >= 4, "B is central");
}
