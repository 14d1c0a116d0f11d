use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use infocoh::asymptotics::{
    chain_rule_limit_check, default_sizes, entropy_limit_check, largest_remainder, ln_fw, sandwich_bounds,
};
use infocoh::fixtures;
use infocoh::functionals::ProbabilityLaw;
use infocoh::AdmissibleSequence;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[test]
fn log_multinomial_matches_big_integers() {
    let fact = |n: u32| (1..=n).fold(BigUint::one(), |acc, i| acc * i);
    for counts in [[300u32, 500, 224], [1, 0, 1023], [700, 700, 700]] {
        let n: u32 = counts.iter().sum();
        let exact = counts.iter().fold(fact(n), |acc, &c| acc / fact(c));
        let got = ln_fw(&AdmissibleSequence::natural(), &counts).unwrap();
        assert!((got - ln_big(&exact)).abs() < 1e-9 * got.max(1.0), "{counts:?}");
    }
}

#[test]
fn natural_limit_is_shannon_entropy() {
    let p = [r(1, 2), r(1, 2)];
    let rep = entropy_limit_check(&AdmissibleSequence::natural(), 1.0, &p, 0.01, &default_sizes(1.0)).unwrap();
    assert_eq!(rep.samples.last().unwrap().0, 4096);
    assert!((rep.limit - std::f64::consts::LN_2).abs() < 0.01);
    assert!(rep.passed());
}

#[test]
fn gaussian_limit_is_quadratic_entropy() {
    let p = [r(1, 2), r(1, 2)];
    let d = AdmissibleSequence::gaussian_int(2);
    let rep = entropy_limit_check(&d, 2.0, &p, 0.01, &default_sizes(2.0)).unwrap();
    assert!((rep.target - std::f64::consts::LN_2 / 4.0).abs() < 1e-15);
    assert!((rep.limit - rep.target).abs() < 0.01, "{}", rep.limit);
}

#[test]
fn sandwich_holds_for_alpha_family() {
    for k in [1.0, -1.0] {
        for alpha in [0.5, 2.0] {
            let d = AdmissibleSequence::alpha(k, alpha).unwrap();
            for sample in sandwich_bounds(&d, &default_sizes(alpha)).unwrap() {
                assert!(sample.holds, "K={k} α={alpha} {sample:?}");
            }
        }
    }
}

#[test]
fn chain_rule_survives_the_limit() {
    let s = fixtures::two_variable_example();
    let (x1, x2) = (s.lookup("X1").unwrap(), s.lookup("X2").unwrap());
    let joint = s.meet_id(x1, x2).unwrap();
    let k = s.outcome_count(joint);
    let weights: Vec<BigRational> = (1..=k as i64).map(|i| r(2 * i, (k * (k + 1)) as i64)).collect();
    let p = ProbabilityLaw::new(&s, joint, weights).unwrap();
    let rep = chain_rule_limit_check(&s, &AdmissibleSequence::natural(), 1.0, x1, &p, 0.01, &default_sizes(1.0)).unwrap();
    assert!(rep.residual < 0.01, "{}", rep.residual);
}

proptest! {
    #[test]
    fn rounding_is_close_and_exact_in_total(raw in prop::collection::vec(1i64..20, 1..6), n in 1u32..500) {
        let total: i64 = raw.iter().sum();
        let p: Vec<BigRational> = raw.iter().map(|&w| r(w, total)).collect();
        let counts = largest_remainder(&p, n);
        prop_assert_eq!(counts.iter().sum::<u32>(), n);
        for (c, w) in counts.iter().zip(&p) {
            let gap = (BigRational::from_integer((*c).into()) - w * BigRational::from_integer(n.into())).to_f64().unwrap();
            prop_assert!(gap.abs() < 1.0);
        }
    }
}
