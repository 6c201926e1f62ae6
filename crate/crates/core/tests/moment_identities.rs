use num_bigint::BigInt;
use num_traits::Zero;
use rwa_core::distributions::arcsine_moment;
use rwa_core::exact::{binomial, HalfInteger, Rational};
use rwa_core::moments::{
    all_non_negative, dirichlet_joint_moment, hankel_leading_minors, lemma_lhs, lemma_rhs,
    psc_moment, rwa_moment_closed, rwa_moment_closed_any, rwa_moment_closed_final,
    rwa_moment_closed_intermediate, rwa_moment_oracle, DirichletParams,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Values from an independent brute-force enumeration over all of
/// {0..r}^n with exact fractions (binomial form of the arcsine moments).
const FROZEN: [(u32, u32, i64, i64); 10] = [
    (2, 2, 1, 3),
    (3, 2, 1, 4),
    (3, 4, 1, 8),
    (3, 6, 5, 64),
    (4, 4, 3, 35),
    (4, 6, 1, 21),
    (5, 4, 1, 16),
    (5, 6, 1, 32),
    (6, 8, 5, 429),
    (8, 4, 1, 33),
];

#[test]
fn oracle_matches_frozen_enumeration() {
    for (n, r, num, den) in FROZEN {
        assert_eq!(rwa_moment_oracle(n, r), q(num, den), "n={n} r={r}");
        assert_eq!(rwa_moment_closed(n, r / 2), q(num, den), "n={n} r={r}");
    }
}

#[test]
fn theorem_identity_small_sweep() {
    for n in 2..=6 {
        for k in 0..=6 {
            assert_eq!(rwa_moment_oracle(n, 2 * k), rwa_moment_closed(n, k));
            assert!(rwa_moment_oracle(n, 2 * k + 1).is_zero());
        }
    }
}

#[test]
fn closed_forms_agree() {
    for n in 2..=12 {
        for k in 0..=15 {
            assert_eq!(
                rwa_moment_closed_final(n, k),
                rwa_moment_closed_intermediate(n, k)
            );
        }
    }
}

#[test]
fn lemma_identity_grid() {
    let values: Vec<HalfInteger> = (1..=5)
        .map(|t| HalfInteger::from_twice(t).unwrap())
        .collect();
    for n in 1..=3usize {
        // every list of length n over the value set
        let mut idx = vec![0usize; n];
        loop {
            let d = DirichletParams::new(idx.iter().map(|&i| values[i]).collect()).unwrap();
            for r in 0..=6 {
                assert_eq!(lemma_lhs(&d, r), lemma_rhs(&d, r), "{:?} r={r}", d.params());
            }
            let mut pos = 0;
            while pos < n {
                idx[pos] += 1;
                if idx[pos] < values.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
}

#[test]
fn lambda_reduction_chain() {
    for n in 2..=9u32 {
        for k in 0..=8 {
            assert_eq!(psc_moment(n as u64 - 1, k), rwa_moment_closed(n, k));
        }
    }
    for k in 0..=10 {
        assert_eq!(psc_moment(0, k), arcsine_moment(2 * k));
        let catalan = binomial(2 * k as u64, k as u64) / (k as u64 + 1);
        let scaled = psc_moment(2, k) * Rational::from_integer(BigInt::from(4u32).pow(k));
        assert_eq!(scaled, Rational::from_integer(catalan.into()));
    }
    // uniform law: E X^{2k} = 1/(2k+1)
    for k in 0..=8 {
        assert_eq!(psc_moment(1, k), q(1, 2 * k as i64 + 1));
    }
}

#[test]
fn moments_strictly_decrease() {
    for n in 2..=8 {
        for k in 1..10 {
            assert!(rwa_moment_closed(n, k + 1) < rwa_moment_closed(n, k));
        }
    }
}

#[test]
fn hankel_minors_non_negative() {
    for n in 2..=8 {
        let moments: Vec<Rational> = (0..=8).map(|r| rwa_moment_closed_any(n, r)).collect();
        let minors = hankel_leading_minors(&moments, 5);
        assert_eq!(minors.len(), 5);
        assert!(all_non_negative(&minors), "n={n}: {minors:?}");
        assert_eq!(minors[0], q(1, 1));
    }
    // a sequence that is not a moment sequence: m2 < m1^2
    let bad = [q(1, 1), q(1, 1), q(1, 2)];
    assert!(!all_non_negative(&hankel_leading_minors(&bad, 2)));
}

#[test]
fn dirichlet_means_and_second_moments() {
    assert_eq!(dirichlet_joint_moment(&[1, 0, 0, 0]), q(1, 4));
    assert_eq!(dirichlet_joint_moment(&[2, 0, 0]), q(1, 6));
    // all mixed moments sum to the multinomial expansion of (ΣR)^2 = 1
    let n = 4usize;
    let mut total = Rational::zero();
    for c in rwa_core::exact::compositions(2, n) {
        let m = rwa_core::exact::multinomial(2, &c).unwrap();
        total += Rational::from_integer(m.into()) * dirichlet_joint_moment(c.parts());
    }
    assert_eq!(total, q(1, 1));
}
