//! Positive definite binary quadratic forms `Ax² + Bxy + Cy²` (discriminant
//! `D = B² − 4AC < 0`, `A > 0`), reduction to the canonical representative,
//! Dirichlet composition, and class-group computations for imaginary
//! quadratic fields.
//!
//! The canonical reduced representative satisfies `|B| ≤ A ≤ C` with `B ≥ 0`
//! whenever `|B| = A` or `A = C`; it is unique per proper equivalence class,
//! so class arithmetic is plain value arithmetic on reduced forms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::abelian::{self, AbelianStructure};
use crate::compose::{dirichlet_compose, normalize_b};
use crate::error::{Error, Result};

/// Default ceiling on `|D|` for whole-group enumerations.
pub const DEFAULT_ENUMERATION_CEILING: u64 = 100_000_000;

/// A positive definite integral binary quadratic form. Values are always
/// valid forms (negative discriminant, positive leading coefficient,
/// primitive) but not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefiniteForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl Serialize for DefiniteForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Compact `[A, B, C]` triple in JSON output.
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&crate::jsonnum::Wrapper(&self.a))?;
        t.serialize_element(&crate::jsonnum::Wrapper(&self.b))?;
        t.serialize_element(&crate::jsonnum::Wrapper(&self.c))?;
        t.end()
    }
}

impl std::fmt::Display for DefiniteForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl DefiniteForm {
    /// Validate and build a form. Requires `A > 0`, `B² − 4AC < 0`, and
    /// `gcd(A, B, C) = 1`.
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::domain(format!(
                "definite form needs positive leading coefficient, got {a}"
            )));
        }
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        if !disc.is_negative() {
            return Err(Error::domain(format!(
                "definite form needs negative discriminant, got {disc}"
            )));
        }
        if a.gcd(&b).gcd(&c) != BigInt::one() {
            return Err(Error::domain(format!(
                "form ({a}, {b}, {c}) is imprimitive"
            )));
        }
        Ok(DefiniteForm { a, b, c })
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// Canonical-reduced test: `|B| ≤ A ≤ C`, with `B ≥ 0` on the boundary
    /// cases `|B| = A` or `A = C`.
    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        if !(abs_b <= self.a && self.a <= self.c) {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    /// Canonical reduced representative of this form's class.
    pub fn reduce(&self) -> DefiniteForm {
        let disc = self.discriminant();
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        let mut c = self.c.clone();
        loop {
            // Normalize B into (−A, A].
            if b.abs() > a {
                let (nb, _) = normalize_b(&b, &a);
                b = nb;
                c = (&b * &b - &disc) / (BigInt::from(4) * &a);
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            break;
        }
        // Boundary convention: B ≥ 0 when |B| = A or A = C.
        if b.is_negative() && (b.abs() == a || a == c) {
            b = -b;
        }
        let out = DefiniteForm { a, b, c };
        debug_assert!(out.is_reduced());
        debug_assert_eq!(out.discriminant(), disc);
        out
    }

    /// Class inverse: reduce `(A, −B, C)`.
    pub fn inverse(&self) -> DefiniteForm {
        DefiniteForm {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
        }
        .reduce()
    }

    /// Whether this form's class is the principal class.
    pub fn is_principal(&self) -> bool {
        let r = self.reduce();
        r == principal_form(&r.discriminant()).expect("valid discriminant")
    }
}

/// The principal (identity-class) form of discriminant `D < 0`:
/// `(1, 1, (1−D)/4)` for odd `D`, `(1, 0, −D/4)` for `D ≡ 0 (mod 4)`.
pub fn principal_form(d: &BigInt) -> Result<DefiniteForm> {
    if !d.is_negative() {
        return Err(Error::domain(format!(
            "principal form of definite type needs D < 0, got {d}"
        )));
    }
    let rem = d.mod_floor(&BigInt::from(4));
    if rem == BigInt::one() {
        let c = (BigInt::one() - d) / BigInt::from(4);
        Ok(DefiniteForm {
            a: BigInt::one(),
            b: BigInt::one(),
            c,
        })
    } else if rem.is_zero() {
        let c = -d / BigInt::from(4);
        Ok(DefiniteForm {
            a: BigInt::one(),
            b: BigInt::zero(),
            c,
        })
    } else {
        Err(Error::domain(format!(
            "{d} is not a discriminant (D ≡ 0 or 1 mod 4 required)"
        )))
    }
}

/// Dirichlet composition on classes: compose and reduce. Both forms must
/// share a discriminant.
pub fn compose(f: &DefiniteForm, g: &DefiniteForm) -> Result<DefiniteForm> {
    if f.discriminant() != g.discriminant() {
        return Err(Error::domain(format!(
            "cannot compose forms of different discriminants {} and {}",
            f.discriminant(),
            g.discriminant()
        )));
    }
    let (a, b, c) = dirichlet_compose(
        (&f.a, &f.b, &f.c),
        (&g.a, &g.b, &g.c),
    );
    let out = DefiniteForm { a, b, c }.reduce();
    debug_assert_eq!(out.discriminant(), f.discriminant());
    out.validate_primitive()?;
    Ok(out)
}

impl DefiniteForm {
    fn validate_primitive(&self) -> Result<()> {
        if self.a.gcd(&self.b).gcd(&self.c) != BigInt::one() {
            return Err(Error::internal(format!(
                "composition produced imprimitive form {self}"
            )));
        }
        Ok(())
    }
}

/// `k`-th power of a class by binary exponentiation; `pow(f, 0)` is the
/// principal class.
pub fn pow(f: &DefiniteForm, k: u64) -> Result<DefiniteForm> {
    let mut acc = principal_form(&f.discriminant())?;
    let mut base = f.reduce();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = compose(&acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = compose(&base, &base)?;
        }
    }
    Ok(acc)
}

/// All canonical reduced forms of discriminant `D < 0`, sorted by `(A, B)`.
/// Their count is the class number `h(D)`. The `ceiling` guards the
/// enumeration cost: `|D| > ceiling` is a budget error.
pub fn enumerate_reduced(d: &BigInt, ceiling: u64) -> Result<Vec<DefiniteForm>> {
    if !d.is_negative() {
        return Err(Error::domain(format!("enumeration needs D < 0, got {d}")));
    }
    let rem = d.mod_floor(&BigInt::from(4));
    if !rem.is_zero() && rem != BigInt::one() {
        return Err(Error::domain(format!(
            "{d} is not a discriminant (D ≡ 0 or 1 mod 4 required)"
        )));
    }
    let abs_d = (-d).to_u64().filter(|&v| v <= ceiling).ok_or_else(|| {
        Error::budget(format!(
            "|D| = {} exceeds the enumeration ceiling {ceiling}",
            -d
        ))
    })?;

    // a ≤ √(|D|/3) for reduced forms; b ranges over −a < b ≤ a with
    // b ≡ D (mod 2) and 4a | b² − D.
    let mut out = Vec::new();
    let a_max = (abs_d / 3).isqrt();
    let d_i128 = -(abs_d as i128);
    for a in 1..=a_max.max(1) {
        let a_i = a as i128;
        let parity = (abs_d & 1) as i128; // |D| and D share parity
        let b_start = -(a_i) + 1;
        for b in b_start..=a_i {
            if (b - parity).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d_i128;
            let den = 4 * a_i;
            if num % den != 0 {
                continue;
            }
            let c = num / den;
            if c < a_i {
                continue;
            }
            let form = DefiniteForm {
                a: BigInt::from(a_i),
                b: BigInt::from(b),
                c: BigInt::from(c),
            };
            if !form.is_reduced() {
                continue; // boundary sign convention
            }
            if form.a.gcd(&form.b).gcd(&form.c) != BigInt::one() {
                continue;
            }
            out.push(form);
        }
    }
    out.sort();
    Ok(out)
}

/// Order of the class of `f` in its class group: the least `k ≥ 1` with
/// `f^k` principal. Runs in `O(order)` compositions.
pub fn order_of(f: &DefiniteForm) -> u64 {
    let identity = principal_form(&f.discriminant()).expect("valid discriminant");
    let base = f.reduce();
    let mut acc = base.clone();
    let mut k = 1u64;
    while acc != identity {
        acc = compose(&acc, &base).expect("same discriminant");
        k += 1;
    }
    k
}

/// Least divisor `k` of `m` with `f^k` principal, or `None` if `f^m` is not
/// principal. Cheap even for huge discriminants when `m` is small.
pub fn order_dividing(f: &DefiniteForm, m: u64) -> Option<u64> {
    let identity = principal_form(&f.discriminant()).ok()?;
    let base = f.reduce();
    abelian::order_dividing(&base, m, &identity, |x, y| {
        compose(x, y).expect("same discriminant")
    })
}

/// Invariant factors of the class group `Cl(D)` by reduced-form enumeration
/// plus order counting.
pub fn class_group_structure(d: &BigInt, ceiling: u64) -> Result<AbelianStructure> {
    let forms = enumerate_reduced(d, ceiling)?;
    let identity = principal_form(d)?;
    abelian::structure_from_elements(&forms, &identity, |x, y| {
        compose(x, y).expect("same discriminant")
    })
}

/// Structure of the subgroup generated by the classes of `f` and `g`
/// (equal discriminants), via closure of `{f^i g^j}`.
pub fn span(f: &DefiniteForm, g: &DefiniteForm) -> Result<AbelianStructure> {
    if f.discriminant() != g.discriminant() {
        return Err(Error::domain(
            "span requires forms of equal discriminant".to_string(),
        ));
    }
    let identity = principal_form(&f.discriminant())?;
    let ord_f = order_of(f);
    let ord_g = order_of(g);
    let fr = f.reduce();
    let gr = g.reduce();

    let mut elements: Vec<DefiniteForm> = Vec::new();
    let mut seen: HashMap<DefiniteForm, ()> = HashMap::new();
    let mut fi = identity.clone();
    for _ in 0..ord_f {
        let mut fij = fi.clone();
        for _ in 0..ord_g {
            if seen.insert(fij.clone(), ()).is_none() {
                elements.push(fij.clone());
            }
            fij = compose(&fij, &gr)?;
        }
        fi = compose(&fi, &fr)?;
    }
    abelian::structure_from_elements(&elements, &identity, |x, y| {
        compose(x, y).expect("same discriminant")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> DefiniteForm {
        DefiniteForm::new(BigInt::from(a), BigInt::from(b), BigInt::from(c)).unwrap()
    }

    fn d(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn principal_forms() {
        assert_eq!(principal_form(&d(-23)).unwrap(), f(1, 1, 6));
        assert_eq!(principal_form(&d(-15)).unwrap(), f(1, 1, 4));
        assert_eq!(principal_form(&d(-84)).unwrap(), f(1, 0, 21));
        assert!(principal_form(&d(-6)).is_err()); // −6 ≡ 2 (mod 4)
        assert!(principal_form(&d(23)).is_err());
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(f(2, 3, 4).reduce(), f(2, -1, 3)); // disc −23
        assert_eq!(f(4, 15, 16).reduce(), f(2, 1, 4)); // disc −31
        // Reduction is idempotent and the boundary convention forces B ≥ 0.
        assert_eq!(f(2, -1, 3).reduce(), f(2, -1, 3));
        assert_eq!(f(2, -1, 2).reduce(), f(2, 1, 2)); // A = C boundary
        assert_eq!(f(3, -3, 5).reduce(), f(3, 3, 5)); // |B| = A boundary
    }

    #[test]
    fn reduction_preserves_discriminant_and_class_size_bound() {
        // a ≤ √(|D|/3) for all reduced forms.
        for (a, b, c) in [(7, 5, 11), (12, 1, 9), (100, 37, 200), (5, -19, 31)] {
            let form = f(a, b, c);
            let r = form.reduce();
            assert_eq!(r.discriminant(), form.discriminant());
            assert!(r.is_reduced());
            let bound = (r.discriminant().magnitude().to_u64().unwrap() / 3).isqrt();
            assert!(r.coefficients().0.to_u64().unwrap() <= bound.max(1));
        }
    }

    #[test]
    fn composition_examples() {
        // disc −23: (2,1,3) ∘ (2,−1,3) = principal, (2,1,3)² = (2,−1,3).
        assert_eq!(compose(&f(2, 1, 3), &f(2, -1, 3)).unwrap(), f(1, 1, 6));
        assert_eq!(compose(&f(2, 1, 3), &f(2, 1, 3)).unwrap(), f(2, -1, 3));
        // disc −31: (2,−1,4)³ = principal.
        assert_eq!(pow(&f(2, -1, 4), 3).unwrap(), f(1, 1, 8));
        assert_eq!(pow(&f(2, -1, 4), 1).unwrap(), f(2, -1, 4));
        assert_eq!(pow(&f(2, -1, 4), 0).unwrap(), f(1, 1, 8));
    }

    #[test]
    fn composition_rejects_mixed_discriminants() {
        assert!(compose(&f(2, 1, 3), &f(2, 1, 4)).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_reduced(&d(-15), 1_000_000).unwrap(),
            vec![f(1, 1, 4), f(2, 1, 2)]
        );
        assert_eq!(
            enumerate_reduced(&d(-23), 1_000_000).unwrap(),
            vec![f(1, 1, 6), f(2, -1, 3), f(2, 1, 3)]
        );
        assert_eq!(
            enumerate_reduced(&d(-84), 1_000_000).unwrap(),
            vec![f(1, 0, 21), f(2, 2, 11), f(3, 0, 7), f(5, 4, 5)]
        );
        assert_eq!(enumerate_reduced(&d(-47), 1_000_000).unwrap().len(), 5);
        // h(−3) = h(−4) = 1.
        assert_eq!(enumerate_reduced(&d(-3), 1_000_000).unwrap().len(), 1);
        assert_eq!(enumerate_reduced(&d(-4), 1_000_000).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_ceiling_is_budget_error() {
        match enumerate_reduced(&d(-1_000_003), 1_000_000) {
            Err(Error::Budget(_)) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(f(2, 1, 3).inverse(), f(2, -1, 3));
        assert_eq!(f(2, 1, 2).inverse(), f(2, 1, 2)); // ambiguous class, disc −15
        assert_eq!(f(1, 1, 6).inverse(), f(1, 1, 6));
        // f ∘ f⁻¹ is principal.
        let g = f(3, 1, 4); // disc −47
        assert_eq!(compose(&g, &g.inverse()).unwrap(), principal_form(&d(-47)).unwrap());
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_of(&f(2, 1, 3)), 3); // disc −23
        assert_eq!(order_of(&f(2, 1, 2)), 2); // disc −15
        assert_eq!(order_of(&f(1, 1, 6)), 1);
        assert_eq!(order_dividing(&f(2, 1, 3), 3), Some(3));
        assert_eq!(order_dividing(&f(2, 1, 3), 6), Some(3));
        assert_eq!(order_dividing(&f(2, 1, 3), 4), None);
    }

    #[test]
    fn class_group_structures() {
        let ceil = 1_000_000;
        assert_eq!(
            class_group_structure(&d(-23), ceil).unwrap().invariant_factors(),
            &[3]
        );
        assert_eq!(
            class_group_structure(&d(-84), ceil).unwrap().invariant_factors(),
            &[2, 2]
        );
        assert_eq!(
            class_group_structure(&d(-47), ceil).unwrap().invariant_factors(),
            &[5]
        );
        assert_eq!(
            class_group_structure(&d(-3), ceil).unwrap(),
            AbelianStructure::trivial()
        );
    }

    #[test]
    fn span_examples() {
        // disc −31: the two generators are inverse classes; span is Z/3.
        let s = span(&f(2, -1, 4), &f(2, 1, 4)).unwrap();
        assert_eq!(s.invariant_factors(), &[3]);
        // Span of principal with itself is trivial.
        let s = span(&f(1, 1, 8), &f(1, 1, 8)).unwrap();
        assert_eq!(s, AbelianStructure::trivial());
        // disc −84: two distinct 2-torsion classes span the four group.
        let s = span(&f(2, 2, 11), &f(3, 0, 7)).unwrap();
        assert_eq!(s.invariant_factors(), &[2, 2]);
    }

    #[test]
    fn group_laws_on_sample_discriminant() {
        // Full table checks on disc −47 (h = 5): associativity via cyclic
        // structure, identity, inverses.
        let forms = enumerate_reduced(&d(-47), 1_000_000).unwrap();
        let e = principal_form(&d(-47)).unwrap();
        for x in &forms {
            assert_eq!(compose(x, &e).unwrap(), *x);
            assert_eq!(compose(&x.inverse(), x).unwrap(), e);
            for y in &forms {
                assert_eq!(compose(x, y).unwrap(), compose(y, x).unwrap());
                for z in &forms {
                    let left = compose(&compose(x, y).unwrap(), z).unwrap();
                    let right = compose(x, &compose(y, z).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn rejects_invalid_forms() {
        assert!(DefiniteForm::new(d(-2), d(1), d(3)).is_err()); // A < 0
        assert!(DefiniteForm::new(d(1), d(5), d(1)).is_err()); // disc > 0
        assert!(DefiniteForm::new(d(2), d(2), d(4)).is_err()); // imprimitive
    }
}
