//! Integer utilities: square roots, primality, factorization, square-freeness.
//!
//! Factorization runs a fixed pipeline — trial division, perfect-power
//! detection, Miller–Rabin, then Pollard's rho (Brent variant) with
//! deterministic polynomial seeds — so results are reproducible for a fixed
//! [`FactorBudget`]. Values that fit in `u64` take a machine-word fast path;
//! everything else falls back to `BigUint` arithmetic.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed Miller–Rabin witness set: deterministic for all inputs below
/// 3,317,044,064,679,887,385,961,981 (≈ 3.3·10²⁴).
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Extra pseudo-random rounds applied above the deterministic threshold.
/// Combined with the fixed bases this pushes the heuristic error probability
/// below 2⁻⁸⁰; base selection is a deterministic function of the input.
const MR_EXTRA_ROUNDS: usize = 28;

static MR_DETERMINISTIC_LIMIT: LazyLock<BigUint> = LazyLock::new(|| {
    BigUint::parse_bytes(b"3317044064679887385961981", 10).expect("literal parses")
});

static SMALL_PRIMES: LazyLock<Vec<u64>> = LazyLock::new(|| sieve(DEFAULT_TRIAL_BOUND));

const DEFAULT_TRIAL_BOUND: u64 = 10_000;
const DEFAULT_RHO_ITERATIONS: u64 = 4_000_000;

/// Effort limits for [`factorize`] and everything built on it.
///
/// `trial_bound` caps the trial-division stage (primes `< trial_bound`);
/// `rho_iterations` is the total Pollard-rho iteration allowance shared by
/// all splitting attempts on one input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iterations: DEFAULT_RHO_ITERATIONS,
        }
    }
}

impl FactorBudget {
    /// Budget with a custom rho-iteration cap and the default trial bound.
    pub fn with_rho_iterations(rho_iterations: u64) -> Self {
        FactorBudget {
            rho_iterations,
            ..FactorBudget::default()
        }
    }
}

/// Whether a factorization accounts for the whole input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorStatus {
    /// All prime factors found; `cofactor == 1`.
    Complete,
    /// Budget ran out; `cofactor` is a composite (non-prime-power) remnant.
    Partial,
}

/// Result of [`factorize`]: sorted `(prime, exponent)` pairs plus any
/// unfactored cofactor. The product of `p^e` terms times `cofactor` always
/// equals the input, and the cofactor is coprime to every listed prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
    pub status: FactorStatus,
}

impl Factorization {
    /// Reassemble the input value (used by consistency checks).
    pub fn product(&self) -> BigUint {
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }
}

/// Three-valued square-freeness verdict; `Unknown` arises only when the
/// factorization budget leaves a composite cofactor that is not a perfect
/// power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquarefreeStatus {
    Yes,
    No,
    Unknown,
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(x: &BigInt) -> Result<BigInt> {
    if x.is_negative() {
        return Err(Error::domain(format!("isqrt of negative value {x}")));
    }
    Ok(x.sqrt())
}

/// True iff `x` is a perfect square.
pub fn is_perfect_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let r = x.sqrt();
    &r * &r == *x
}

/// Miller–Rabin primality test. Deterministic below ≈ 3.3·10²⁴ via the fixed
/// 13-prime witness set; above that, extra witnesses derived deterministically
/// from the input push the error probability below 2⁻⁸⁰.
pub fn is_probable_prime(x: &BigUint) -> bool {
    if let Some(n) = x.to_u64() {
        return is_prime_u64(n);
    }
    // Even values other than 2 were handled by the u64 path or are composite.
    if x.is_even() {
        return false;
    }
    for &b in &MR_BASES {
        if !miller_rabin_round_big(x, &BigUint::from(b)) {
            return false;
        }
    }
    if *x >= *MR_DETERMINISTIC_LIMIT {
        // Deterministic pseudo-random witnesses seeded from the input itself.
        let mut state = splitmix_seed(x);
        let span = x - 3u32;
        for _ in 0..MR_EXTRA_ROUNDS {
            let base = 2u32 + draw_below(&mut state, &span);
            if !miller_rabin_round_big(x, &base) {
                return false;
            }
        }
    }
    true
}

/// Deterministic Miller–Rabin for machine-word inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &MR_BASES {
        let mut x = powmod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor `x ≥ 1` within the given budget.
pub fn factorize(x: &BigUint, budget: &FactorBudget) -> Result<Factorization> {
    if x.is_zero() {
        return Err(Error::domain("factorize requires a positive integer"));
    }
    let mut counts: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut remaining = x.clone();

    // Stage 1: trial division by primes below the trial bound.
    for &p in trial_primes(budget.trial_bound).iter() {
        if remaining.is_one() {
            break;
        }
        let bp = BigUint::from(p);
        if &bp * &bp > remaining {
            // Remnant is 1 or prime; the prime case is recorded below.
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = remaining.div_rem(&bp);
            if r.is_zero() {
                remaining = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            counts.insert(bp, e);
        }
    }

    // Stages 2-4: perfect powers, primality, rho splitting, on a work stack.
    // Pieces of a split may share primes; the final merge pass fixes
    // multiplicities against the cofactor.
    let mut rho_left = budget.rho_iterations;
    let mut cofactor = BigUint::one();
    let mut stack = vec![remaining];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *counts.entry(m).or_insert(0) += 1;
            continue;
        }
        if let Some((root, k)) = perfect_power(&m) {
            for _ in 0..k {
                stack.push(root.clone());
            }
            continue;
        }
        match pollard_split(&m, &mut rho_left) {
            Some(d) => {
                let q = &m / &d;
                stack.push(d);
                stack.push(q);
            }
            None => cofactor *= &m,
        }
    }

    // Merge pass: pull any leftover copies of listed primes out of the
    // cofactor so exponents are exact and the cofactor is coprime to them.
    for (p, e) in counts.iter_mut() {
        loop {
            let (q, r) = cofactor.div_rem(p);
            if r.is_zero() {
                cofactor = q;
                *e += 1;
            } else {
                break;
            }
        }
    }

    let status = if cofactor.is_one() {
        FactorStatus::Complete
    } else {
        FactorStatus::Partial
    };
    Ok(Factorization {
        factors: counts.into_iter().collect(),
        cofactor,
        status,
    })
}

/// Decide whether `x ≥ 1` is square-free, within the factorization budget.
///
/// Returns `No` as soon as any square divisor is certain (a repeated listed
/// prime, or a perfect-power cofactor), `Yes` only on complete square-free
/// factorizations, and `Unknown` otherwise.
pub fn squarefree_status(x: &BigUint, budget: &FactorBudget) -> Result<SquarefreeStatus> {
    let f = factorize(x, budget)?;
    if f.factors.iter().any(|(_, e)| *e >= 2) {
        return Ok(SquarefreeStatus::No);
    }
    match f.status {
        FactorStatus::Complete => Ok(SquarefreeStatus::Yes),
        FactorStatus::Partial => {
            if perfect_power(&f.cofactor).is_some() {
                // A composite perfect power p^k (k ≥ 2) contributes a square.
                Ok(SquarefreeStatus::No)
            } else {
                Ok(SquarefreeStatus::Unknown)
            }
        }
    }
}

/// Largest prime divisor of `x ≥ 2`.
pub fn largest_prime_divisor(x: &BigUint, budget: &FactorBudget) -> Result<BigUint> {
    if *x < BigUint::from(2u32) {
        return Err(Error::domain("largest_prime_divisor requires x >= 2"));
    }
    let f = factorize(x, budget)?;
    if f.status == FactorStatus::Partial {
        return Err(Error::budget(format!(
            "factorization of {x} incomplete; largest prime divisor undetermined"
        )));
    }
    Ok(f.factors
        .last()
        .expect("x >= 2 has at least one prime factor")
        .0
        .clone())
}

/// If `m` is a perfect power `r^k` with `k ≥ 2`, return the pair with `k`
/// prime (recursion in the caller handles higher powers).
pub fn perfect_power(m: &BigUint) -> Option<(BigUint, u32)> {
    if *m < BigUint::from(4u32) {
        return None;
    }
    let bits = m.bits() as u32;
    for k in 2..=bits {
        if !is_prime_u64(k as u64) {
            continue;
        }
        let r = m.nth_root(k);
        if r.pow(k) == *m {
            return Some((r, k));
        }
        if r <= BigUint::one() {
            break;
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Internal helpers
// ---------------------------------------------------------------------------

fn sieve(bound: u64) -> Vec<u64> {
    let bound = bound.max(3) as usize;
    let mut composite = vec![false; bound];
    let mut primes = Vec::new();
    for i in 2..bound {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j < bound {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Primes below `bound`, reusing the default sieve when possible.
fn trial_primes(bound: u64) -> std::borrow::Cow<'static, [u64]> {
    if bound <= DEFAULT_TRIAL_BOUND {
        let cut = SMALL_PRIMES.partition_point(|&p| p < bound);
        std::borrow::Cow::Borrowed(&SMALL_PRIMES[..cut])
    } else {
        std::borrow::Cow::Owned(sieve(bound))
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_round_big(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let base = base % n;
    if base.is_zero() {
        return true;
    }
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// SplitMix64 step; used only to derive deterministic extra MR witnesses.
fn splitmix_next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn splitmix_seed(x: &BigUint) -> u64 {
    let mut seed = 0x0123_4567_89AB_CDEFu64;
    for limb in x.to_u64_digits() {
        seed = splitmix_next(&mut seed) ^ limb;
    }
    seed
}

/// Deterministic draw in `[0, span)` for witness generation.
fn draw_below(state: &mut u64, span: &BigUint) -> BigUint {
    let bytes = (span.bits() as usize).div_ceil(8);
    loop {
        let mut buf = Vec::with_capacity(bytes);
        while buf.len() < bytes {
            buf.extend_from_slice(&splitmix_next(state).to_le_bytes());
        }
        buf.truncate(bytes);
        let candidate = BigUint::from_bytes_le(&buf);
        if &candidate < span {
            return candidate;
        }
    }
}

/// Try to split composite `m` with Brent's cycle-finding rho, deterministic
/// polynomial constants `c = 1, 2, 3, …` and start point 2. Decrements
/// `budget` by iterations used; `None` once it reaches zero.
fn pollard_split(m: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if m.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(n) = m.to_u64() {
        return pollard_brent_u64(n, budget).map(BigUint::from);
    }
    pollard_brent_big(m, budget)
}

fn pollard_brent_u64(n: u64, budget: &mut u64) -> Option<u64> {
    for c in 1u64.. {
        if *budget == 0 {
            return None;
        }
        if let Some(d) = brent_attempt_u64(n, c, budget) {
            return Some(d);
        }
    }
    unreachable!()
}

/// One Brent attempt with polynomial x² + c; `None` means cycle exhausted or
/// budget ran out without a split.
fn brent_attempt_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let f = |x: u64| (mulmod_u64(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let (mut g, mut x, mut ys) = (1u64, 0u64, 0u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let batch = 128.min(r - k).min(*budget);
            if batch == 0 {
                return None;
            }
            for _ in 0..batch {
                y = f(y);
                q = mulmod_u64(q, x.abs_diff(y), n);
            }
            *budget -= batch;
            g = gcd_u64(q, n);
            k += batch;
        }
        r *= 2;
    }
    if g == n {
        // Batch overshot; replay one step at a time.
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None // cycle degenerate for this c; caller advances the constant
    } else {
        Some(g)
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn pollard_brent_big(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u64.. {
        if *budget == 0 {
            return None;
        }
        let cbig = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cbig) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = BigUint::zero();
        let mut ys = BigUint::zero();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let batch = 64.min(r - k).min(*budget);
                if batch == 0 {
                    return None;
                }
                for _ in 0..batch {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                *budget -= batch;
                g = q.gcd(n);
                k += batch;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n && g > one {
            return Some(g);
        }
        // Degenerate cycle: advance c and retry while budget remains.
    }
    unreachable!()
}
