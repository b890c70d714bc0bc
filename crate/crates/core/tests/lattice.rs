use proptest::prelude::*;
use qrel_core::generators::random::{gaussian, haar_unitary, random_subspace};
use qrel_core::{CMatrix, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two subspaces sharing a random common part, so the meet is usually nonzero.
fn overlapping(rng: &mut ChaCha8Rng, r: usize, c: usize) -> (Subspace, Subspace, usize) {
    let n = r * c;
    let k = rng.random_range(0..=n / 2);
    let extra_a = rng.random_range(0..=(n - k) / 2);
    let extra_b = rng.random_range(0..=(n - k) / 2);
    let common = gaussian(rng, n, k);
    let pa = CMatrix::from_fn(n, k + extra_a, |i, j| if j < k { common[(i, j)] } else { gaussian(rng, 1, 1)[(0, 0)] });
    let pb = CMatrix::from_fn(n, k + extra_b, |i, j| if j < k { common[(i, j)] } else { gaussian(rng, 1, 1)[(0, 0)] });
    (Subspace::from_vectors(r, c, pa), Subspace::from_vectors(r, c, pb), k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn meet_and_join_satisfy_the_dimension_formula(seed in any::<u64>(), r in 1usize..=5, c in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, k) = overlapping(&mut rng, r, c);
        let m = a.meet(&b).unwrap();
        let j = a.join(&b).unwrap();
        prop_assert_eq!(m.rank() + j.rank(), a.rank() + b.rank());
        prop_assert!(m.rank() >= k);
        prop_assert!(m.leq(&a) && m.leq(&b));
        prop_assert!(a.leq(&j) && b.leq(&j));
    }

    #[test]
    fn lattice_operations_commute_with_unitaries(seed in any::<u64>(), r in 1usize..=4, c in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, _) = overlapping(&mut rng, r, c);
        let u = haar_unitary(&mut rng, r * c);
        let rot = |s: &Subspace| Subspace::from_vectors(r, c, &u * s.basis());
        prop_assert!(rot(&a.meet(&b).unwrap()).approx_eq(&rot(&a).meet(&rot(&b)).unwrap()));
        prop_assert!(rot(&a.join(&b).unwrap()).approx_eq(&rot(&a).join(&rot(&b)).unwrap()));
        prop_assert!(rot(&a.complement()).approx_eq(&rot(&a).complement()));
    }

    #[test]
    fn meet_of_cylinders_is_the_tensor(seed in any::<u64>(), d in 3usize..=4, e in 3usize..=4) {
        // clustered zero singular values in a few hundred dimensions
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ks = rng.random_range(1..d * d);
        let kt = rng.random_range(1..e * e);
        let s = random_subspace(&mut rng, d, d, ks).unwrap();
        let t = random_subspace(&mut rng, e, e, kt).unwrap();
        let left = s.tensor(&Subspace::full(e, e));
        let right = Subspace::full(d, d).tensor(&t);
        let m = left.meet(&right).unwrap();
        prop_assert_eq!(m.rank(), ks * kt);
        prop_assert!(m.approx_eq(&s.tensor(&t)));
    }

    #[test]
    fn complement_is_an_orthocomplement(seed in any::<u64>(), r in 1usize..=6, c in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.random_range(0..=r * c);
        let a = random_subspace(&mut rng, r, c, k).unwrap();
        let ac = a.complement();
        prop_assert_eq!(ac.rank(), r * c - k);
        prop_assert!(a.orth_margin(&ac) < 1e-10);
        prop_assert!(ac.complement().approx_eq(&a));
    }
}
