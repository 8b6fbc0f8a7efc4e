use std::cmp::Ordering;

use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;

fn big(sym: &Sym, t: &TowerNat) -> BigUint {
    sym.to_biguint(t, 1 << 16).unwrap().expect("materializable")
}

fn tn(sym: &Sym, runs: &[(u64, u64)]) -> TowerNat {
    sym.from_runs(runs.iter().map(|&(d, c)| (d, TowerNat::Small(c))))
        .unwrap()
}

#[test]
fn natural_numbers_have_run_views() {
    let sym = Sym::new(10);
    let t = sym.from_natural(11111);
    assert_eq!(t, TowerNat::Small(11111));
    let segs = sym.segments(&t).unwrap();
    assert_eq!(
        segs,
        vec![Segment {
            digit: 1,
            count: TowerNat::Small(5)
        }]
    );
    assert_eq!(sym.modulo(&t, 7).unwrap(), 11111 % 7);
    assert_eq!(sym.modulo(&t, 7).unwrap(), 2);
}

#[test]
fn power_digit_sum_of_nine_run() {
    // 233192 nines followed by 20958.
    let sym = Sym::new(10);
    let nines = sym
        .pad_run(9, &TowerNat::Small(5), &TowerNat::Small(233192))
        .unwrap();
    let h = sym
        .add_disjoint(&nines, &TowerNat::Small(20958), &TowerNat::Small(5))
        .unwrap();
    assert_eq!(
        sym.power_digit_sum(&h, 2).unwrap(),
        TowerNat::Small(18888726)
    );
    assert_eq!(sym.digit_count(&h).unwrap(), TowerNat::Small(233197));
}

#[test]
fn scale_small_examples() {
    let sym = Sym::new(10);
    assert_eq!(
        sym.scale_small(&TowerNat::Small(999), 81).unwrap(),
        TowerNat::Small(80919)
    );
    // 10^30 - 1 times 81 = 80999...9919
    let t = tn(&sym, &[(9, 30)]);
    let want = (BigUint::from(10u32).pow(30) - 1u32) * 81u32;
    assert_eq!(big(&sym, &sym.scale_small(&t, 81).unwrap()), want);
}

#[test]
fn canonical_forms_collapse() {
    let sym = Sym::new(10);
    let t = sym
        .from_runs([
            (3, TowerNat::Small(1)),
            (3, TowerNat::Small(2)),
            (0, TowerNat::Small(4)),
        ])
        .unwrap();
    assert_eq!(t, TowerNat::Small(333));
    let huge = tn(&sym, &[(1, 30)]);
    assert!(matches!(huge, TowerNat::Runs(_)));
    let back = sym.sub(&huge, &tn(&sym, &[(1, 29)])).unwrap();
    assert_eq!(big(&sym, &back), BigUint::from(10u32).pow(29));
}

#[test]
fn nested_counts() {
    let sym = Sym::new(10);
    // c = 10^25 ones-count, far beyond materializing.
    let c = sym.pow_base(&TowerNat::Small(25)).unwrap();
    let ones = sym.pad_ones(&TowerNat::ZERO, &c).unwrap();
    assert_eq!(ones.depth(), 2);
    assert_eq!(sym.digit_count(&ones).unwrap(), c);
    assert_eq!(sym.power_digit_sum(&ones, 2).unwrap(), c);
    // R(c) + 1 ends in 2 and R(c) * 9 + 1 = 10^c.
    let nine = sym.scale_small(&ones, 9).unwrap();
    let p = sym.add(&nine, &TowerNat::ONE).unwrap();
    assert_eq!(p, sym.pow_base(&c).unwrap());
    assert_eq!(sym.sub(&p, &TowerNat::ONE).unwrap(), nine);
    assert_eq!(sym.cmp(&nine, &p).unwrap(), Ordering::Less);
    assert!(sym.materialize(&ones, 1000).unwrap().is_none());
}

#[test]
fn modulo_of_nested_repunit() {
    let sym = Sym::new(10);
    // 10^k mod m for k = 10^25 via Euler; ones of length 10^25 mod 81 and 7.
    let c = sym.pow_base(&TowerNat::Small(25)).unwrap();
    let ones = sym.pad_ones(&TowerNat::ZERO, &c).unwrap();
    // R(c) mod 9 = c mod 9 = 1; R(c) mod 81 = c mod 81 since 10 = 1 + 9.
    assert_eq!(sym.modulo(&ones, 9).unwrap(), 1);
    let c81 = crate::numtheory::mod_pow(10, 25, 81);
    // R(c) = sum of 10^j with 10^j = 1 + 9j mod 81,
    // so R(c) = c + 9 c(c-1)/2 mod 81, and c(c-1)/2 mod 9 depends on c mod 18 = 10.
    let want = (c81 as i128 + 9 * (10 * 9 / 2)).rem_euclid(81) as u64;
    assert_eq!(sym.modulo(&ones, 81).unwrap(), want);
    // R(c) mod 7: period 6 in c, 10^25 = 4 mod 6, R(4) = 1111.
    assert_eq!(sym.modulo(&ones, 7).unwrap(), 1111 % 7);
    // divisible by 2 and 5 parts: R(c) is odd and ends in 1.
    assert_eq!(sym.modulo(&ones, 1000).unwrap(), 111);
}

#[test]
fn pad_checks_disjointness() {
    let sym = Sym::new(10);
    let t = sym
        .pad_ones(&TowerNat::Small(3), &TowerNat::Small(30))
        .unwrap();
    assert!(sym
        .add_disjoint(&t, &TowerNat::Small(999), &TowerNat::Small(3))
        .is_ok());
    assert!(sym
        .add_disjoint(&t, &TowerNat::Small(1000), &TowerNat::Small(3))
        .is_err());
    assert!(sym
        .add_disjoint(&t, &TowerNat::Small(5), &TowerNat::Small(4))
        .is_err());
}

#[test]
fn depth_limit_is_enforced() {
    let sym = Sym::with_depth_limit(10, 2);
    let mut t = TowerNat::Small(40);
    let mut err = None;
    for _ in 0..4 {
        match sym.pad_ones(&TowerNat::ZERO, &t) {
            Ok(next) => t = next,
            Err(e) => {
                err = Some(e);
                break;
            }
        }
    }
    assert!(matches!(err, Some(Error::DepthLimit { limit: 2, .. })));
}

#[test]
fn base_mismatch_is_rejected() {
    let ten = Sym::new(10);
    let t = tn(&ten, &[(1, 40)]);
    assert!(Sym::new(16).add(&t, &TowerNat::ONE).is_err());
}

#[test]
fn serde_round_trip() {
    let sym = Sym::new(10);
    let c = sym.pow_base(&TowerNat::Small(25)).unwrap();
    let t = sym
        .add(
            &sym.pad_ones(&TowerNat::Small(4), &c).unwrap(),
            &TowerNat::Small(1234),
        )
        .unwrap();
    let json = serde_json::to_string(&t).unwrap();
    let back: TowerNat = serde_json::from_str(&json).unwrap();
    assert_eq!(back, t);
    let small: TowerNat = serde_json::from_str(r#"{"small": 7}"#).unwrap();
    assert_eq!(small, TowerNat::Small(7));
    // non-canonical input collapses
    let odd: TowerNat =
        serde_json::from_str(r#"{"base": 10, "runs": [[1, {"small": 2}], [1, {"small": 1}]]}"#)
            .unwrap();
    assert_eq!(odd, TowerNat::Small(111));
}

#[test]
fn display_shows_runs() {
    let sym = Sym::new(10);
    let t = sym
        .add(&tn(&sym, &[(0, 2), (7, 25)]), &TowerNat::Small(5))
        .unwrap();
    assert_eq!(t.to_string(), "<7x25 0 5>_10");
}

fn arb_runs(base: u64) -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec((0..base, 1u64..40), 0..8)
}

proptest! {
    #[test]
    fn arithmetic_matches_bigint(base in 2u64..40,
                                 ra in arb_runs(40), rb in arb_runs(40), k in 0u64..5000, m in 1u64..100_000) {
        let sym = Sym::new(base);
        let fix = |r: &Vec<(u64, u64)>| r.iter().map(|&(d, c)| (d % base, c)).collect::<Vec<_>>();
        let a = tn(&sym, &fix(&ra));
        let b = tn(&sym, &fix(&rb));
        let (ba, bb) = (big(&sym, &a), big(&sym, &b));
        prop_assert_eq!(big(&sym, &sym.add(&a, &b).unwrap()), &ba + &bb);
        prop_assert_eq!(sym.cmp(&a, &b).unwrap(), ba.cmp(&bb));
        if ba >= bb {
            prop_assert_eq!(big(&sym, &sym.sub(&a, &b).unwrap()), &ba - &bb);
        } else {
            prop_assert!(sym.sub(&a, &b).is_err());
        }
        prop_assert_eq!(big(&sym, &sym.scale_small(&a, k).unwrap()), &ba * k);
        let m_big = BigUint::from(m);
        prop_assert_eq!(BigUint::from(sym.modulo(&a, m).unwrap()), &ba % &m_big);
        prop_assert_eq!(sym.from_biguint(&ba).unwrap(), a.clone());
        let digits = ba.to_radix_le(base as u32).len() as u64;
        let digits = if ba == BigUint::from(0u32) { 0 } else { digits };
        prop_assert_eq!(sym.digit_count(&a).unwrap(), TowerNat::Small(digits));
    }

    #[test]
    fn power_digit_sum_matches_digits(base in 2u64..17, e in 1u32..5, ra in arb_runs(17)) {
        let sym = Sym::new(base);
        let a = tn(&sym, &ra.iter().map(|&(d, c)| (d % base, c)).collect::<Vec<_>>());
        let digits = sym.materialize(&a, 1 << 16).unwrap().unwrap();
        let want: u64 = digits.iter().map(|d| d.pow(e)).sum();
        prop_assert_eq!(sym.power_digit_sum(&a, e).unwrap(), TowerNat::Small(want));
    }

    #[test]
    fn modulo_is_additive_on_nested_values(exp in 20u64..60, low in any::<u64>(), m in 1u64..1_000_000, base in 2u64..20) {
        let sym = Sym::new(base);
        let c = sym.pow_base(&TowerNat::Small(exp)).unwrap();
        let ones = sym.pad_ones(&TowerNat::Small(70), &c).unwrap();
        let sum = sym.add(&ones, &TowerNat::Small(low)).unwrap();
        let lhs = sym.modulo(&sum, m).unwrap();
        let rhs = (sym.modulo(&ones, m).unwrap() as u128 + (low % m) as u128) % m as u128;
        prop_assert_eq!(lhs as u128, rhs);
        // (b - 1) R(c) b^70 + b^70 = b^(c + 70)
        let lifted = sym.add(&sym.scale_small(&ones, base - 1).unwrap(), &sym.pow_base(&TowerNat::Small(70)).unwrap()).unwrap();
        let top = sym.add(&c, &TowerNat::Small(70)).unwrap();
        prop_assert_eq!(&lifted, &sym.pow_base(&top).unwrap());
        prop_assert_eq!(sym.modulo(&lifted, m).unwrap(), sym.base_pow_mod(&top, m).unwrap());
    }
}

proptest! {
    #[test]
    fn nested_residues_match_bigint_modpow(exp in 20u32..200, m in 1u64..5_000_000, base in 2u64..50, d in 1u64..50) {
        let sym = Sym::new(base);
        let d = d % base;
        prop_assume!(d > 0);
        let c = sym.pow_base(&TowerNat::Small(exp as u64)).unwrap();
        let big_c = BigUint::from(base).pow(exp);
        // b^c mod m
        let want_pow = BigUint::from(base).modpow(&big_c, &BigUint::from(m));
        prop_assert_eq!(BigUint::from(sym.base_pow_mod(&c, m).unwrap()), want_pow);
        // d R(c) b^3 mod m, from b^c mod m(b-1)
        let wide = BigUint::from(m) * (base - 1);
        let rep = (BigUint::from(base).modpow(&big_c, &wide) + &wide - 1u32) % &wide / (base - 1);
        let want = rep * d * base.pow(3) % m;
        let t = sym.pad_run(d, &TowerNat::Small(3), &c).unwrap();
        prop_assert_eq!(BigUint::from(sym.modulo(&t, m).unwrap()), want);
    }
}

proptest! {
    // residues of deep towers are consistent across moduli, with no value to compare against
    #[test]
    fn residues_reduce_across_moduli(levels in 1usize..6, m1 in 1u64..3000, m2 in 1u64..3000, base in 2u64..40, seed in 1u64..1000) {
        let sym = Sym::new(base);
        let mut t = TowerNat::Small(seed);
        for k in 0..levels {
            let shifted = sym.pad_ones(&TowerNat::Small(k as u64 + 2), &t).unwrap();
            t = sym.add(&shifted, &TowerNat::Small(seed % base)).unwrap();
        }
        let wide = sym.modulo(&t, m1 * m2).unwrap();
        prop_assert_eq!(wide % m1, sym.modulo(&t, m1).unwrap());
        prop_assert_eq!(wide % m2, sym.modulo(&t, m2).unwrap());
    }
}
