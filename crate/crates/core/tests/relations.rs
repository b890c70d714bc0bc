use proptest::prelude::*;
use qrel_core::generators::random::{random_qset, random_relation};
use qrel_core::{QSet, Relation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sets(seed: u64, n: usize) -> (ChaCha8Rng, Vec<QSet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..n).map(|k| random_qset(&mut rng, &format!("X{k}"), 2, 2)).collect();
    (rng, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative_and_unital(seed in any::<u64>()) {
        let (mut rng, x) = sets(seed, 4);
        let r = random_relation(&mut rng, &x[0], &x[1]);
        let s = random_relation(&mut rng, &x[1], &x[2]);
        let t = random_relation(&mut rng, &x[2], &x[3]);
        let left = t.compose(&s).unwrap().compose(&r).unwrap();
        let right = t.compose(&s.compose(&r).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right));
        prop_assert!(Relation::identity(&x[1]).compose(&r).unwrap().approx_eq(&r));
        prop_assert!(r.compose(&Relation::identity(&x[0])).unwrap().approx_eq(&r));
    }

    #[test]
    fn composition_is_monotone(seed in any::<u64>()) {
        let (mut rng, x) = sets(seed, 3);
        let r = random_relation(&mut rng, &x[0], &x[1]);
        let r2 = r.join(&random_relation(&mut rng, &x[0], &x[1])).unwrap();
        let s = random_relation(&mut rng, &x[1], &x[2]);
        prop_assert!(s.compose(&r).unwrap().leq(&s.compose(&r2).unwrap()).unwrap());
    }

    #[test]
    fn bending_is_a_bijection(seed in any::<u64>()) {
        let (mut rng, x) = sets(seed, 2);
        let r = random_relation(&mut rng, &x[0], &x[1]);
        let b = r.bend().unwrap();
        prop_assert_eq!(b.rank(), r.rank());
        prop_assert!(b.unbend(&x[0], &x[1]).unwrap().approx_eq(&r));
    }

    #[test]
    fn negation_is_blockwise_complement(seed in any::<u64>()) {
        let (mut rng, x) = sets(seed, 2);
        let r = random_relation(&mut rng, &x[0], &x[1]);
        let top = Relation::top(&x[0], &x[1]);
        prop_assert!(r.join(&r.neg()).unwrap().approx_eq(&top));
        prop_assert!(r.meet(&r.neg()).unwrap().is_bottom());
        prop_assert!(r.perp(&r.neg()).unwrap());
    }
}
