mod common;

use pgrl::matalg::MatAlgebra;
use pgrl::zeroideal::{extract_zero_ideal, verify_certificate, ZeroIdealCertificate};
use pgrl::PrimeModulus;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn flat_basis(alg: &MatAlgebra) -> Vec<Vec<u64>> {
    alg.basis().iter().map(|m| m.data().iter().map(|&x| x as u64).collect()).collect()
}

/// Kernel dimension of the algebra, counted over all vectors.
fn kernel_dim(alg: &MatAlgebra) -> usize {
    let p = alg.modulus().get() as u64;
    let n = alg.n();
    let mats: Vec<common::Mat> = alg.basis().iter().map(common::to_mat).collect();
    let count = common::all_vectors(p, n)
        .into_iter()
        .filter(|v| {
            mats.iter()
                .all(|a| a.iter().all(|row| row.iter().zip(v).map(|(x, y)| x * y).sum::<u64>() % p == 0))
        })
        .count();
    (count as f64).log(p as f64).round() as usize
}

/// Checks the output against the oracles and returns its codimension.
fn check_output(alg: &MatAlgebra, b: &MatAlgebra, cert: &ZeroIdealCertificate) -> usize {
    let p = alg.modulus().get() as u64;
    let n = alg.n();
    let a_basis = flat_basis(alg);
    let b_basis = flat_basis(b);
    for v in &b_basis {
        assert!(common::in_span(p, &a_basis, v), "B is not inside A");
    }
    let a_mats: Vec<common::Mat> = alg.basis().iter().map(common::to_mat).collect();
    let b_mats: Vec<common::Mat> = b.basis().iter().map(common::to_mat).collect();
    for x in &b_mats {
        for y in &b_mats {
            assert!(common::mat_mul(p, x, y).iter().flatten().all(|&e| e == 0), "B^2 != 0");
        }
        for a in &a_mats {
            assert!(common::in_span(p, &b_basis, &common::flatten(&common::mat_mul(p, a, x))));
        }
    }
    let k = kernel_dim(alg);
    let codim = alg.dim() - b.dim();
    assert!(codim <= n - k, "codim {codim} > n - k = {}", n - k);
    assert_eq!(cert.k, k);
    assert_eq!(cert.final_codim, codim);
    assert!(cert.steps.len() <= n - k + 1);
    for w in cert.steps.windows(2) {
        assert!(w[0].l < w[1].l);
    }
    assert!(cert.steps.iter().all(|s| s.l <= n - k));
    assert!(verify_certificate(alg, cert));
    codim
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn postconditions(p in prop_oneof![Just(2u32), Just(3), Just(5)], n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = common::random_commutative_algebra(&mut rng, p, n);
        let (b, cert) = extract_zero_ideal(&alg).unwrap();
        check_output(&alg, &b, &cert);
        prop_assert_eq!(&cert.output, &b);
    }

    #[test]
    fn against_brute_force_maximum(p in prop_oneof![Just(2u32), Just(3)], n in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = common::random_commutative_algebra(&mut rng, p, n);
        let (b, cert) = extract_zero_ideal(&alg).unwrap();
        let codim = check_output(&alg, &b, &cert);
        let best = common::max_square_zero_ideal_dim(p as u64, n, &flat_basis(&alg));
        let min_codim = alg.dim() - best;
        prop_assert!(min_codim <= codim);
        prop_assert!(min_codim <= n - kernel_dim(&alg));
    }

    #[test]
    fn tampered_certificates_fail(p in prop_oneof![Just(2u32), Just(3)], n in 2usize..=5, seed in any::<u64>(), which in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = common::random_commutative_algebra(&mut rng, p, n);
        let (_, mut cert) = extract_zero_ideal(&alg).unwrap();
        match which {
            0 => cert.final_codim += 1,
            1 => cert.k += 1,
            _ => {
                // Replacing B by A is only wrong when A is not square-zero.
                prop_assume!(!alg.is_square_zero());
                cert.output = alg.clone();
                cert.final_codim = 0;
            }
        }
        prop_assert!(!verify_certificate(&alg, &cert));
    }
}

#[test]
fn diagonal_algebra_is_tight() {
    for p in [2u32, 3] {
        for n in [2usize, 3] {
            let alg = MatAlgebra::diagonal(PrimeModulus::new(p as u64).unwrap(), n);
            let (b, cert) = extract_zero_ideal(&alg).unwrap();
            assert_eq!(check_output(&alg, &b, &cert), n);
            assert_eq!(common::max_square_zero_ideal_dim(p as u64, n, &flat_basis(&alg)), 0);
            // Subspaces of F_p^n: 5 for (2, 2), 16 for (2, 3), 6 for (3, 2), 28 for (3, 3).
            let subs = common::all_subspaces(p as u64, n * n, &flat_basis(&alg)).len();
            assert_eq!(subs, [[5, 16], [6, 28]][(p - 2) as usize][n - 2]);
        }
    }
}
