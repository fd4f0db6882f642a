use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaPair {
    #[serde(serialize_with = "decimal")]
    pub a: BigUint,
    #[serde(serialize_with = "decimal")]
    pub b: BigUint,
}

fn decimal<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}

/// `a mod (1 + (i+1)*b)`.
pub fn beta(a: &BigUint, b: &BigUint, i: &BigUint) -> BigUint {
    a % (BigUint::one() + (i + 1u32) * b)
}

fn modulus(b: &BigUint, i: usize) -> BigUint {
    BigUint::one() + BigUint::from(i + 1) * b
}

/// Merge `x = r1 (mod m1)` with `x = r2 (mod m2)`; `None` if incompatible.
fn crt_merge(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    let e = m1.extended_gcd(m2);
    let g = e.gcd;
    let diff = r2 - r1;
    if !(&diff % &g).is_zero() {
        return None;
    }
    let lcm = m1 / &g * m2;
    let k = (&diff / &g * e.x).mod_floor(&(m2 / &g));
    Some(((r1 + m1 * k).mod_floor(&lcm), lcm))
}

/// Smallest `a` with `beta(a, b, i) = seq[i]` for every `i`, if any.
fn solve_for_b(seq: &[BigUint], b: &BigUint) -> Option<BigUint> {
    let (mut r, mut m) = (BigInt::zero(), BigInt::one());
    for (i, s) in seq.iter().enumerate() {
        let mi = modulus(b, i);
        if *s >= mi {
            return None;
        }
        (r, m) = crt_merge(&r, &m, &BigInt::from(s.clone()), &BigInt::from(mi))?;
    }
    debug_assert!(!r.is_negative());
    r.to_biguint()
}

const LINEAR_SEARCH: u32 = 10_000;

/// The pair with the smallest `b >= 1`, and for that `b` the smallest `a`,
/// such that `beta(a, b, i) = seq[i]` for every index.
///
/// Falls back to the classical choice of `b` as a multiple of `n!` (which
/// makes the moduli pairwise coprime) if no pair turns up after a linear scan.
pub fn beta_find(seq: &[BigUint]) -> BetaPair {
    assert!(!seq.is_empty(), "beta_find needs a nonempty sequence");
    let mut b = seq
        .iter()
        .enumerate()
        .map(|(i, s)| Integer::div_ceil(s, &BigUint::from(i + 1)))
        .max()
        .unwrap_or_default()
        .max(BigUint::one());
    for _ in 0..LINEAR_SEARCH {
        if let Some(a) = solve_for_b(seq, &b) {
            return BetaPair { a, b };
        }
        b += 1u32;
    }
    let fact: BigUint = (1..=seq.len()).map(BigUint::from).product();
    let b = Integer::div_ceil(&b, &fact) * &fact;
    let a = solve_for_b(seq, &b).expect("moduli are pairwise coprime and exceed every entry");
    BetaPair { a, b }
}
