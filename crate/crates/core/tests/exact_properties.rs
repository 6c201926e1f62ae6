use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rwa_core::exact::{
    binomial, compositions, multinomial, rising_gamma_ratio, HalfInteger, Rational,
};

proptest! {
    #[test]
    fn rising_ratio_functional_equation(twice in 1u64..12, m1 in 0u64..8, m2 in 0u64..8) {
        let q = HalfInteger::from_twice(twice).unwrap();
        let whole = rising_gamma_ratio(q, m1 + m2);
        let split = rising_gamma_ratio(q, m1) * rising_gamma_ratio(q.add_integer(m1), m2);
        prop_assert_eq!(whole.clone(), split);
        prop_assert!(whole > Rational::zero());
    }

    #[test]
    fn composition_stream_is_complete(r in 0u32..9, n in 1usize..6) {
        let all: Vec<Vec<u32>> = compositions(r, n).map(|c| c.parts().to_vec()).collect();
        let expected = binomial(r as u64 + n as u64 - 1, n as u64 - 1);
        prop_assert_eq!(BigUint::from(all.len()), expected);
        prop_assert!(all.iter().all(|c| c.len() == n && c.iter().sum::<u32>() == r));
        let distinct: HashSet<_> = all.iter().collect();
        prop_assert_eq!(distinct.len(), all.len());
        // strictly descending lexicographic order
        prop_assert!(all.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn multinomial_theorem(r in 0u32..9, n in 1usize..6) {
        let total: BigUint = compositions(r, n).map(|c| multinomial(r, &c).unwrap()).sum();
        prop_assert_eq!(total, BigUint::from(n).pow(r));
    }

    #[test]
    fn rational_addition_is_exact(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let x = Rational::new(a.into(), b.into());
        let y = Rational::new(c.into(), d.into());
        let sum = &x + &y;
        prop_assert_eq!(sum.clone(), Rational::new(BigInt::from(a * d + c * b), BigInt::from(b * d)));
        prop_assert_eq!(&sum - &y, x);
        prop_assert!(sum.denom() > &BigInt::zero());
        prop_assert!(num_integer::Integer::gcd(sum.numer(), sum.denom()).is_one());
    }
}

#[test]
fn large_stream_is_lazy() {
    // 888 030 compositions; consumed without materializing.
    let mut stream = compositions(20, 8);
    let mut count = 0u64;
    while let Some(parts) = stream.advance() {
        debug_assert_eq!(parts.iter().sum::<u32>(), 20);
        count += 1;
    }
    assert_eq!(count, 888_030);
}
