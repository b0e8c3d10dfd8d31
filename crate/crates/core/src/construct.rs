//! Parameterized discriminant constructions.
//!
//! From parameters `(a, b, c, n)` with `a, b, c ≥ 1` and `n ≥ 2`, build the
//! power sum `S = a^(n-1) + a^(n-2) b + … + b^(n-1)` and the discriminant
//!
//! * imaginary mode: `d = 2 (a^n + b^n) c^n − S² − (a−b)² c^(2n)`, the field
//!   being `Q(√−d)` when `d > 0`;
//! * real mode: `Δ = S² + (a−b)² c^(2n) − 2 (a^n + b^n) c^n` (the negation),
//!   the field being `Q(√Δ)` when `Δ > 0`.
//!
//! Both modes share the witness pairs `(x1, y1) = (S + (a−b) c^n, a c)` and
//! `(x2, y2) = (S + (b−a) c^n, b c)`, which satisfy `x² − 4 y^n = −d` (resp.
//! `= Δ`). These make `((x + √disc)/2)` an n-th ideal power, which is what the
//! verification layer exploits.
//!
//! [`check_hypotheses`] evaluates the sufficient conditions under which the
//! construction provably yields class-group n-rank ≥ 2 (or ≥ 1 for the
//! `a = b = 1` family), without doing any class-group work itself.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, FactorBudget, SquarefreeStatus};
use crate::error::{Error, Result};
use crate::jsonnum;

/// Which quadratic field the discriminant is aimed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Imaginary,
    Real,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Imaginary => write!(f, "imaginary"),
            Mode::Real => write!(f, "real"),
        }
    }
}

/// Hypothesis set used to gate instances.
///
/// * `Strict` — the general sufficient bound (imaginary `d ≥ 4(abc²)^ℓ`,
///   real `Δ ≥ 16(abc²)^(2ℓ)` with `n ≡ 0 mod 4`), `ℓ` = largest prime
///   divisor of `n`.
/// * `RelaxedPrime` — prime `n` only; the bound relaxes to `d > 4abc²`.
/// * `Corollary` — the `a = b = 1` family `d = 4c^n − n²`, which certifies
///   rank ≥ 1 when `d > c^ℓ`.
/// * `Any` — no gating: every square-free instance is verified. The report
///   still records the strict bound for reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Strict,
    RelaxedPrime,
    Corollary,
    Any,
}

impl std::fmt::Display for Policy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Policy::Strict => write!(f, "strict"),
            Policy::RelaxedPrime => write!(f, "relaxed_prime"),
            Policy::Corollary => write!(f, "corollary"),
            Policy::Any => write!(f, "any"),
        }
    }
}

/// Two published variants of the strict imaginary bound differ in where the
/// constant sits: `Statement` uses `4·(abc²)^ℓ`, `Proof` uses `(4abc²)^ℓ`.
/// `Statement` is the default; `Proof` is exposed for experimentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundVariant {
    #[default]
    Statement,
    Proof,
}

/// A fully evaluated parameter instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub mode: Mode,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub n: u64,
    /// Power sum `S`; always positive.
    #[serde(with = "jsonnum")]
    pub s: BigInt,
    /// `d` (imaginary) or `Δ` (real). May be ≤ 0, which later stages flag.
    #[serde(with = "jsonnum")]
    pub disc: BigInt,
    #[serde(with = "jsonnum")]
    pub x1: BigInt,
    #[serde(with = "jsonnum")]
    pub y1: BigInt,
    #[serde(with = "jsonnum")]
    pub x2: BigInt,
    #[serde(with = "jsonnum")]
    pub y2: BigInt,
}

impl Construction {
    /// |disc| as an unsigned value (for factorization).
    pub fn abs_disc(&self) -> num_bigint::BigUint {
        self.disc.magnitude().clone()
    }
}

/// `S(a, b, n) = Σ_{i=1..n} a^(n−i) b^(i−1)`, the degree-(n−1) complete
/// homogeneous power sum. Satisfies `(a − b)·S = a^n − b^n`.
pub fn power_sum(a: u64, b: u64, n: u64) -> Result<BigInt> {
    if a < 1 || b < 1 || n < 1 {
        return Err(Error::domain("power_sum requires a, b, n >= 1"));
    }
    let n32 = exponent(n)?;
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let mut s = BigInt::zero();
    let mut pow_a = a.pow(n32 - 1);
    let mut pow_b = BigInt::one();
    for i in 0..n32 {
        s += &pow_a * &pow_b;
        if i + 1 < n32 {
            pow_a = &pow_a / &a; // exact: exponent still >= 1
            pow_b *= &b;
        }
    }
    Ok(s)
}

fn exponent(n: u64) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::domain(format!("exponent {n} out of range")))
}

fn build(mode: Mode, a: u64, b: u64, c: u64, n: u64) -> Result<Construction> {
    if a < 1 || b < 1 || c < 1 {
        return Err(Error::domain("construction requires a, b, c >= 1"));
    }
    if n < 2 {
        return Err(Error::domain("construction requires n >= 2"));
    }
    let n32 = exponent(n)?;
    let s = power_sum(a, b, n)?;
    let (ab, bb, cb) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    let c_n = cb.pow(n32);
    let a_n = ab.pow(n32);
    let b_n = bb.pow(n32);
    let diff = &ab - &bb;
    // Real-orientation value: S² + (a−b)² c^(2n) − 2 (a^n + b^n) c^n.
    let real_disc = &s * &s + &diff * &diff * &c_n * &c_n
        - BigInt::from(2) * (&a_n + &b_n) * &c_n;
    let disc = match mode {
        Mode::Imaginary => -&real_disc,
        Mode::Real => real_disc.clone(),
    };
    let x1 = &s + &diff * &c_n;
    let x2 = &s - &diff * &c_n;
    let y1 = &ab * &cb;
    let y2 = &bb * &cb;
    Ok(Construction {
        mode,
        a,
        b,
        c,
        n,
        s,
        disc,
        x1,
        y1,
        x2,
        y2,
    })
}

/// Imaginary-mode construction `d = 2(a^n + b^n)c^n − S² − (a−b)²c^(2n)`.
pub fn build_imaginary(a: u64, b: u64, c: u64, n: u64) -> Result<Construction> {
    build(Mode::Imaginary, a, b, c, n)
}

/// Real-mode construction `Δ = S² + (a−b)²c^(2n) − 2(a^n + b^n)c^n`.
pub fn build_real(a: u64, b: u64, c: u64, n: u64) -> Result<Construction> {
    build(Mode::Real, a, b, c, n)
}

/// The `a = b = 1` imaginary family, which collapses to `d = 4c^n − n²`.
pub fn build_corollary(c: u64, n: u64) -> Result<Construction> {
    build(Mode::Imaginary, 1, 1, c, n)
}

/// Outcome of the hypothesis evaluation for one construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    /// `disc > 0` (both modes orient the interesting case positively).
    pub positive: bool,
    pub squarefree: SquarefreeStatus,
    /// Largest prime divisor of `n`.
    pub ell: u64,
    /// The bound the policy demands of `disc` (`disc ≥ bound_required`).
    #[serde(with = "jsonnum")]
    pub bound_required: BigInt,
    pub bound_ok: bool,
    pub policy: Policy,
    pub bound_variant: BoundVariant,
    /// Imaginary: `a ≠ b`. Real: `a`, `b`, `c` pairwise distinct.
    pub distinct_ab: bool,
    /// Real mode only: `n ≡ 0 (mod 4)`; `null` in imaginary mode.
    pub n_mod4_ok: Option<bool>,
    /// All policy conditions hold; a verified admissible instance is a
    /// certified family member.
    pub admissible: bool,
}

/// Evaluate the policy's sufficient conditions for `cons`.
///
/// The factorization budget is consumed by the square-freeness check of
/// `|disc|`. Policy/mode mismatches (corollary without `a = b = 1`,
/// relaxed with composite `n`, real mode with an imaginary-only policy)
/// are domain errors.
pub fn check_hypotheses(
    cons: &Construction,
    policy: Policy,
    variant: BoundVariant,
    budget: &FactorBudget,
) -> Result<HypothesisReport> {
    let n = cons.n;
    let ell_big = arith::largest_prime_divisor(&num_bigint::BigUint::from(n), budget)?;
    let ell: u64 = num_traits::ToPrimitive::to_u64(&ell_big)
        .ok_or_else(|| Error::internal("largest prime divisor of n exceeds u64"))?;
    let ell32 = exponent(ell)?;

    match (cons.mode, policy) {
        (Mode::Imaginary, Policy::RelaxedPrime) => {
            if !arith::is_prime_u64(n) {
                return Err(Error::domain(format!(
                    "relaxed_prime policy requires prime n (got n = {n})"
                )));
            }
        }
        (Mode::Imaginary, Policy::Corollary) => {
            if cons.a != 1 || cons.b != 1 {
                return Err(Error::domain(
                    "corollary policy requires a = b = 1".to_string(),
                ));
            }
        }
        (Mode::Real, Policy::RelaxedPrime | Policy::Corollary) => {
            return Err(Error::domain(format!(
                "policy {policy} applies to imaginary mode only"
            )));
        }
        _ => {}
    }

    let positive = cons.disc.is_positive();
    let squarefree = if cons.disc.is_zero() {
        SquarefreeStatus::No
    } else {
        arith::squarefree_status(&cons.abs_disc(), budget)?
    };

    let abc2 = BigInt::from(cons.a) * BigInt::from(cons.b) * BigInt::from(cons.c * cons.c);
    let bound_required = match (cons.mode, policy) {
        (Mode::Imaginary, Policy::Strict | Policy::Any) => match variant {
            BoundVariant::Statement => BigInt::from(4) * abc2.pow(ell32),
            BoundVariant::Proof => (BigInt::from(4) * &abc2).pow(ell32),
        },
        (Mode::Imaginary, Policy::RelaxedPrime) => BigInt::from(4) * &abc2 + BigInt::one(),
        (Mode::Imaginary, Policy::Corollary) => BigInt::from(cons.c).pow(ell32) + BigInt::one(),
        (Mode::Real, _) => BigInt::from(16) * abc2.pow(2 * ell32),
    };
    let bound_ok = cons.disc >= bound_required;

    let (distinct_ab, n_mod4_ok) = match cons.mode {
        Mode::Imaginary => (cons.a != cons.b, None),
        Mode::Real => (
            cons.a != cons.b && cons.b != cons.c && cons.a != cons.c,
            Some(n % 4 == 0),
        ),
    };

    let side_conditions = match (cons.mode, policy) {
        // The a = b = 1 family only claims rank ≥ 1; no distinctness needed.
        (Mode::Imaginary, Policy::Corollary) => degenerate_ok(&cons.disc),
        (Mode::Imaginary, _) => distinct_ab && degenerate_ok(&cons.disc),
        (Mode::Real, _) => distinct_ab && n_mod4_ok == Some(true) && cons.disc > BigInt::one(),
    };

    let admissible =
        positive && squarefree == SquarefreeStatus::Yes && bound_ok && side_conditions;

    Ok(HypothesisReport {
        positive,
        squarefree,
        ell,
        bound_required,
        bound_ok,
        policy,
        bound_variant: variant,
        distinct_ab,
        n_mod4_ok,
        admissible,
    })
}

/// Imaginary discriminants 1 and 3 sit outside the admissible range (the
/// corresponding fields have extra units).
fn degenerate_ok(disc: &BigInt) -> bool {
    *disc != BigInt::one() && *disc != BigInt::from(3)
}
