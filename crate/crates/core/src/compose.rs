//! Dirichlet composition of binary quadratic forms, shared by the definite
//! and indefinite modules.
//!
//! Given primitive forms `(a1, b1, c1)` and `(a2, b2, c2)` of equal
//! discriminant `D`, the composed coefficients are found by solving the
//! concordance congruences with `g = gcd(a1, a2, (b1 + b2)/2)`:
//!
//! ```text
//! A = a1 a2 / g²
//! B ≡ b2 + 2 (a2/g) (y·(b1 − b2)/2 − z·c2)   (mod 2A)
//! C = (B² − D) / (4A)
//! ```
//!
//! where `x a1 + y a2 + z (b1+b2)/2 = g` is a Bézout relation. The result is
//! primitive with the same discriminant; callers reduce it to their canonical
//! representative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Raw composed coefficients, not reduced. Leading coefficients must be
/// nonzero; forms must be primitive with equal discriminant (checked by
/// callers, re-asserted in debug builds).
pub(crate) fn dirichlet_compose(
    f: (&BigInt, &BigInt, &BigInt),
    g: (&BigInt, &BigInt, &BigInt),
) -> (BigInt, BigInt, BigInt) {
    let (a1, b1, c1) = f;
    let (a2, b2, c2) = g;
    debug_assert!(!a1.is_zero() && !a2.is_zero());
    let disc = b1 * b1 - BigInt::from(4) * a1 * c1;
    debug_assert_eq!(disc, b2 * b2 - BigInt::from(4) * a2 * c2);

    let half_sum = (b1 + b2) / 2; // b1 ≡ b2 (mod 2) since both ≡ D
    let half_diff = (b1 - b2) / 2;

    // Two-stage extended gcd: d0 = u·a1 + v·a2, then gg = u1·d0 + w·half_sum,
    // so gg = gcd(a1, a2, half_sum) with Bézout coefficients (u1·u, u1·v, w).
    let e1 = a1.extended_gcd(a2);
    let e2 = e1.gcd.extended_gcd(&half_sum);
    let gg = e2.gcd;
    let y = &e2.x * &e1.y; // coefficient on a2
    let w = e2.y; // coefficient on half_sum

    let a = (a1 * a2) / (&gg * &gg);
    let inner = &y * &half_diff - &w * c2;
    let b_raw = b2 + BigInt::from(2) * (a2 / &gg) * inner;
    let (b, _) = normalize_b(&b_raw, &a);
    let c = (&b * &b - &disc) / (BigInt::from(4) * &a);
    (a, b, c)
}

/// Reduce `b` modulo `2|a|` into the half-open interval `(−|a|, |a|]`,
/// returning the normalized value and the multiplier applied.
pub(crate) fn normalize_b(b: &BigInt, a: &BigInt) -> (BigInt, BigInt) {
    let abs_a = a.magnitude().clone();
    let abs_a = BigInt::from(abs_a);
    let two_a = BigInt::from(2) * &abs_a;
    let mut r = b.mod_floor(&two_a); // [0, 2|a|)
    let mut k = (b - &r) / &two_a;
    if r > abs_a {
        r -= &two_a;
        k += 1;
    }
    (r, k)
}
