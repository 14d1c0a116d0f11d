use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use infocoh::fixtures;
use infocoh::functionals::{
    condition_prob, entropy, push_counts, push_prob, restrict_counts, CountingFunction, EntropyOrder,
    ProbabilityLaw,
};

fn law(raw: &[u32]) -> Vec<BigRational> {
    let total: u32 = raw.iter().sum();
    raw.iter()
        .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
        .collect()
}

#[test]
fn entropy_of_uniform_laws() {
    let s = fixtures::full_product(&[2, 2, 2]);
    let x = s.lookup("X1X2X3").unwrap();
    let p = ProbabilityLaw::new(&s, x, law(&[1; 8])).unwrap();
    assert!((entropy(EntropyOrder::shannon(), &p) - 8f64.ln()).abs() < 1e-12);
    // S_2(uniform on 8) = 1 − 1/8.
    assert!((entropy(EntropyOrder::new(2.0).unwrap(), &p) - 0.875).abs() < 1e-12);
    assert!(EntropyOrder::new(0.0).is_err());
}

proptest! {
    #[test]
    fn pushforward_composes(counts in prop::collection::vec(0u32..6, 8)) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let s = fixtures::full_product(&[2, 2, 2]);
        let (x, mid, y) = (s.lookup("X1X2X3").unwrap(), s.lookup("X1X2").unwrap(), s.lookup("X1").unwrap());
        let nu = CountingFunction::new(&s, x, counts).unwrap();
        let direct = push_counts(&s, (x, y), &nu).unwrap();
        let staged = push_counts(&s, (mid, y), &push_counts(&s, (x, mid), &nu).unwrap()).unwrap();
        prop_assert_eq!(direct.counts(), staged.counts());
        prop_assert_eq!(direct.magnitude(), nu.magnitude());
    }

    #[test]
    fn restrictions_partition_the_mass(counts in prop::collection::vec(0u32..6, 6)) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let s = fixtures::full_product(&[2, 3]);
        let (x, y) = (s.lookup("X1X2").unwrap(), s.lookup("X2").unwrap());
        let nu = CountingFunction::new(&s, x, counts.clone()).unwrap();
        let mut sum = vec![0u32; counts.len()];
        for label in s.variable(y).outcomes().labels() {
            if let Some(part) = restrict_counts(&s, (x, y), &nu, label).unwrap() {
                for (acc, c) in sum.iter_mut().zip(part.counts()) {
                    *acc += c;
                }
            }
        }
        prop_assert_eq!(sum, counts);
    }

    #[test]
    fn conditioning_recombines_to_the_law(raw in prop::collection::vec(0u32..6, 6)) {
        prop_assume!(raw.iter().any(|&c| c > 0));
        let s = fixtures::full_product(&[2, 3]);
        let (x, y) = (s.lookup("X1X2").unwrap(), s.lookup("X1").unwrap());
        let p = ProbabilityLaw::new(&s, x, law(&raw)).unwrap();
        let marginal = push_prob(&s, (x, y), &p).unwrap();
        let mut total = vec![BigRational::zero(); raw.len()];
        for (label, mass) in s.variable(y).outcomes().labels().iter().zip(marginal.weights()) {
            match condition_prob(&s, (x, y), &p, label) {
                Ok(cond) => {
                    for (acc, w) in total.iter_mut().zip(cond.weights()) {
                        *acc += mass * w;
                    }
                }
                Err(_) => prop_assert!(mass.is_zero()),
            }
        }
        prop_assert_eq!(total, p.weights().to_vec());
    }
}
