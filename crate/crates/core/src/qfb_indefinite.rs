//! Indefinite binary quadratic forms (discriminant `Δ > 0`, non-square) for
//! real quadratic fields: the reduction operator `ρ`, cycles of reduced
//! forms, the narrow class group, the fundamental unit, and the passage to
//! the wide class group.
//!
//! A form is reduced iff `0 < B < √Δ` and `√Δ − B < 2|A| < √Δ + B`. Reduced
//! forms of a discriminant partition into cycles under `ρ`; two forms are
//! properly equivalent iff they land in the same cycle, so a class is
//! represented by its cycle (canonically: the lexicographically least
//! member). Consecutive cycle members alternate the sign of `A`, hence all
//! cycle lengths are even.
//!
//! The fundamental unit `(t + u√Δ)/2`, `t² − Δu² = ±4` with `u` minimal,
//! comes from the purely periodic continued fraction of `(P₀ + √Δ)/2` in
//! exact integer arithmetic; its norm decides whether the wide class group
//! equals the narrow one or is the quotient by the class of the negated
//! principal form.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::abelian::{self, AbelianStructure};
use crate::arith;
use crate::compose::dirichlet_compose;
use crate::error::{Error, Result};

/// An indefinite integral binary quadratic form: `B² − 4AC > 0` non-square,
/// `A ≠ 0`, primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndefiniteForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl Serialize for IndefiniteForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&crate::jsonnum::Wrapper(&self.a))?;
        t.serialize_element(&crate::jsonnum::Wrapper(&self.b))?;
        t.serialize_element(&crate::jsonnum::Wrapper(&self.c))?;
        t.end()
    }
}

impl std::fmt::Display for IndefiniteForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl IndefiniteForm {
    /// Validate and build: `A ≠ 0`, positive non-square discriminant,
    /// primitive coefficients.
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::domain(
                "indefinite form needs a nonzero leading coefficient".to_string(),
            ));
        }
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        if !disc.is_positive() || arith::is_perfect_square(&disc) {
            return Err(Error::domain(format!(
                "indefinite form needs a positive non-square discriminant, got {disc}"
            )));
        }
        if a.gcd(&b).gcd(&c) != BigInt::one() {
            return Err(Error::domain(format!(
                "form ({a}, {b}, {c}) is imprimitive"
            )));
        }
        Ok(IndefiniteForm { a, b, c })
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// Reduced iff `0 < B < √Δ` and `√Δ − B < 2|A| < √Δ + B` (exact integer
    /// comparisons; equality cannot occur since `Δ` is non-square).
    pub fn is_reduced(&self) -> bool {
        if !self.b.is_positive() {
            return false;
        }
        let disc = self.discriminant();
        if &self.b * &self.b >= disc {
            return false;
        }
        let two_abs_a = BigInt::from(2) * self.a.abs();
        // √Δ < 2|A| + B
        let upper = &two_abs_a + &self.b;
        if &upper * &upper <= disc {
            return false;
        }
        // 2|A| − B < √Δ
        let lower = &two_abs_a - &self.b;
        if lower.is_positive() && &lower * &lower >= disc {
            return false;
        }
        true
    }

    /// One standard reduction step: the trailing coefficient becomes leading,
    /// and the middle coefficient is replaced by its canonical residue
    /// `B' ≡ −B (mod 2|C|)` inside the target window. Maps reduced forms to
    /// their cycle successor and is invertible on reduced forms.
    pub fn rho_step(&self) -> IndefiniteForm {
        let disc = self.discriminant();
        let s = disc.sqrt(); // ⌊√Δ⌋
        let abs_c = self.c.abs();
        let two_abs_c = BigInt::from(2) * &abs_c;
        let mut r = (-&self.b).mod_floor(&two_abs_c); // [0, 2|C|)
        if abs_c > s {
            // Window (−|C|, |C|].
            if r > abs_c {
                r -= &two_abs_c;
            }
        } else {
            // Window (√Δ − 2|C|, √Δ]: shift maximally while staying ≤ ⌊√Δ⌋.
            let k = (&s - &r).div_floor(&two_abs_c);
            r += k * &two_abs_c;
        }
        let new_c = (&r * &r - &disc) / (BigInt::from(4) * &self.c);
        IndefiniteForm {
            a: self.c.clone(),
            b: r,
            c: new_c,
        }
    }

    /// Apply `ρ` until reduced. Termination is geometric in the coefficient
    /// size; the step bound is asserted generously.
    pub fn reduce(&self) -> IndefiniteForm {
        let mut cur = self.clone();
        let max_bits = self
            .a
            .magnitude()
            .bits()
            .max(self.b.magnitude().bits())
            .max(self.c.magnitude().bits());
        let cap = 4 * max_bits + 64;
        for _ in 0..cap {
            if cur.is_reduced() {
                return cur;
            }
            cur = cur.rho_step();
        }
        unreachable!("reduction did not terminate within {cap} steps for {self}");
    }
}

/// The principal indefinite form of discriminant `Δ`: `(1, 1, (1−Δ)/4)` for
/// odd `Δ`, `(1, 0, −Δ/4)` for `Δ ≡ 0 (mod 4)`.
pub fn principal_form(delta: &BigInt) -> Result<IndefiniteForm> {
    validate_discriminant(delta)?;
    let (b, c) = if delta.is_odd() {
        (BigInt::one(), (BigInt::one() - delta) / BigInt::from(4))
    } else {
        (BigInt::zero(), -delta / BigInt::from(4))
    };
    Ok(IndefiniteForm {
        a: BigInt::one(),
        b,
        c,
    })
}

fn validate_discriminant(delta: &BigInt) -> Result<()> {
    if !delta.is_positive() {
        return Err(Error::domain(format!(
            "indefinite discriminant must be positive, got {delta}"
        )));
    }
    let rem = delta.mod_floor(&BigInt::from(4));
    if !rem.is_zero() && rem != BigInt::one() {
        return Err(Error::domain(format!(
            "{delta} is not a discriminant (Δ ≡ 0 or 1 mod 4 required)"
        )));
    }
    if arith::is_perfect_square(delta) {
        return Err(Error::domain(format!(
            "{delta} is a perfect square; no real quadratic field"
        )));
    }
    Ok(())
}

/// A cycle of reduced forms under `ρ`, stored in traversal order starting
/// from its lexicographically least member. Cycles are in bijection with
/// narrow classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    forms: Vec<IndefiniteForm>,
}

impl Cycle {
    pub fn forms(&self) -> &[IndefiniteForm] {
        &self.forms
    }

    /// Canonical class representative: the lexicographically least member.
    pub fn canonical(&self) -> &IndefiniteForm {
        &self.forms[0]
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn contains(&self, f: &IndefiniteForm) -> bool {
        self.forms.contains(f)
    }
}

/// The full `ρ`-cycle through the class of `f`.
pub fn cycle_of(f: &IndefiniteForm) -> Cycle {
    let start = f.reduce();
    let mut forms = vec![start.clone()];
    let mut cur = start.rho_step();
    while cur != start {
        debug_assert!(cur.is_reduced());
        forms.push(cur.clone());
        cur = cur.rho_step();
    }
    // Rotate so the lexicographically least member leads.
    let min_pos = forms
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.cmp(y))
        .map(|(i, _)| i)
        .unwrap_or(0);
    forms.rotate_left(min_pos);
    Cycle { forms }
}

/// Proper equivalence test: same discriminant and same cycle.
pub fn equivalent(f: &IndefiniteForm, g: &IndefiniteForm) -> Result<bool> {
    if f.discriminant() != g.discriminant() {
        return Err(Error::domain(
            "equivalence requires equal discriminants".to_string(),
        ));
    }
    let gr = g.reduce();
    Ok(cycle_of(f).contains(&gr))
}

/// All reduced forms of discriminant `Δ ≤ ceiling`, sorted lexicographically.
pub fn enumerate_reduced(delta: &BigInt, ceiling: u64) -> Result<Vec<IndefiniteForm>> {
    validate_discriminant(delta)?;
    let d = delta.to_u64().filter(|&v| v <= ceiling).ok_or_else(|| {
        Error::budget(format!(
            "Δ = {delta} exceeds the enumeration ceiling {ceiling}"
        ))
    })?;
    let s = d.isqrt();
    let mut out = Vec::new();
    let b0 = if d % 2 == 0 { 2 } else { 1 };
    let mut b = b0;
    while b <= s {
        let m = (d - b * b) / 4; // |AC|; divisibility is guaranteed by parity
        if (d - b * b) % 4 == 0 && m > 0 {
            let mut a = 1u64;
            while a * a <= m {
                if m % a == 0 {
                    for a_abs in [a, m / a] {
                        let c_abs = m / a_abs;
                        // Window: √Δ − b < 2a_abs < √Δ + b, exact in integers.
                        let hi = 2 * a_abs + b;
                        if hi * hi <= d {
                            continue;
                        }
                        if 2 * a_abs > b {
                            let lo = 2 * a_abs - b;
                            if lo * lo >= d {
                                continue;
                            }
                        }
                        if gcd3(a_abs, b, c_abs) != 1 {
                            continue;
                        }
                        out.push(IndefiniteForm {
                            a: BigInt::from(a_abs),
                            b: BigInt::from(b),
                            c: -BigInt::from(c_abs),
                        });
                        out.push(IndefiniteForm {
                            a: -BigInt::from(a_abs),
                            b: BigInt::from(b),
                            c: BigInt::from(c_abs),
                        });
                        if a_abs == c_abs {
                            break; // avoid duplicating the square divisor
                        }
                    }
                }
                a += 1;
            }
        }
        b += 2;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    let mut g = a.gcd(&b);
    g = g.gcd(&c);
    g
}

/// The narrow class group of discriminant `Δ`: all cycles plus a lookup
/// table from reduced forms to class indices. Class composition picks a
/// positive-leading representative, composes, reduces, and looks up.
pub struct NarrowClassGroup {
    delta: BigInt,
    cycles: Vec<Cycle>,
    index: HashMap<IndefiniteForm, usize>,
    principal: usize,
}

impl NarrowClassGroup {
    pub fn h_plus(&self) -> u64 {
        self.cycles.len() as u64
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn principal_index(&self) -> usize {
        self.principal
    }

    /// Class index of an arbitrary form of this discriminant.
    pub fn class_of(&self, f: &IndefiniteForm) -> Result<usize> {
        if f.discriminant() != self.delta {
            return Err(Error::domain(
                "form does not belong to this class group".to_string(),
            ));
        }
        let r = f.reduce();
        self.index
            .get(&r)
            .copied()
            .ok_or_else(|| Error::internal(format!("reduced form {r} missing from index")))
    }

    /// Compose two classes by index.
    pub fn compose_classes(&self, i: usize, j: usize) -> usize {
        let f = positive_rep(&self.cycles[i]);
        let g = positive_rep(&self.cycles[j]);
        let (a, b, c) = dirichlet_compose(
            (&f.a, &f.b, &f.c),
            (&g.a, &g.b, &g.c),
        );
        let reduced = IndefiniteForm { a, b, c }.reduce();
        *self
            .index
            .get(&reduced)
            .expect("composition stays within the form set")
    }

    /// Invariant factors of the narrow class group.
    pub fn structure(&self) -> Result<AbelianStructure> {
        let elements: Vec<usize> = (0..self.cycles.len()).collect();
        abelian::structure_from_elements(&elements, &self.principal, |&x, &y| {
            self.compose_classes(x, y)
        })
    }
}

/// Representative with positive leading coefficient (exists in every cycle
/// since signs alternate); required by the composition kernel.
fn positive_rep(cycle: &Cycle) -> &IndefiniteForm {
    cycle
        .forms()
        .iter()
        .find(|f| f.a.is_positive())
        .expect("cycles alternate the sign of A")
}

/// Build the narrow class group of `Δ` (with `Δ ≤ ceiling`).
pub fn narrow_class_group(delta: &BigInt, ceiling: u64) -> Result<NarrowClassGroup> {
    let forms = enumerate_reduced(delta, ceiling)?;
    let mut cycles: Vec<Cycle> = Vec::new();
    let mut index: HashMap<IndefiniteForm, usize> = HashMap::new();
    for f in &forms {
        if index.contains_key(f) {
            continue;
        }
        let cycle = cycle_of(f);
        let idx = cycles.len();
        for member in cycle.forms() {
            index.insert(member.clone(), idx);
        }
        cycles.push(cycle);
    }
    let total: usize = cycles.iter().map(|c| c.len()).sum();
    if total != forms.len() {
        return Err(Error::internal(format!(
            "cycle partition covers {total} of {} reduced forms",
            forms.len()
        )));
    }
    let principal = principal_form(delta)?.reduce();
    let principal_idx = *index
        .get(&principal)
        .ok_or_else(|| Error::internal("principal form missing from cycle partition"))?;
    Ok(NarrowClassGroup {
        delta: delta.clone(),
        cycles,
        index,
        principal: principal_idx,
    })
}

/// Fundamental solution of `t² − Δu² = ±4` (minimal `u ≥ 1`), i.e. the
/// fundamental unit `(t + u√Δ)/2` of the order of discriminant `Δ`, computed
/// by the purely periodic continued fraction of `(P₀ + √Δ)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitInfo {
    #[serde(with = "crate::jsonnum")]
    pub t: BigInt,
    #[serde(with = "crate::jsonnum")]
    pub u: BigInt,
    /// Norm of the unit: `(t² − Δu²)/4 = ±1`.
    pub norm: i8,
    /// Continued-fraction period length; the norm is `(−1)^period`.
    pub period: u64,
}

pub fn fundamental_unit(delta: &BigInt) -> Result<UnitInfo> {
    validate_discriminant(delta)?;
    let s = delta.sqrt();
    // P₀ ≡ Δ (mod 2), as large as possible below √Δ; Q₀ = 2 makes
    // (P₀ + √Δ)/Q₀ reduced, hence purely periodic.
    let p0 = if s.is_odd() == delta.is_odd() {
        s.clone()
    } else {
        &s - BigInt::one()
    };
    let q0 = BigInt::from(2);
    let mut p = p0.clone();
    let mut q = q0.clone();
    // Convergent denominators q_{k}: seeded with q_{−2} = 1, q_{−1} = 0.
    let mut q_prev = BigInt::one();
    let mut q_curr = BigInt::zero();
    let mut period = 0u64;
    loop {
        let a_k = (&p + &s).div_floor(&q);
        let p_next = &a_k * &q - &p;
        let q_next = (delta - &p_next * &p_next) / &q;
        let q_new = &a_k * &q_curr + &q_prev;
        q_prev = std::mem::replace(&mut q_curr, q_new);
        period += 1;
        p = p_next;
        q = q_next;
        if p == p0 && q == q0 {
            break;
        }
    }
    let u = q_curr;
    let t = &p0 * &u + BigInt::from(2) * &q_prev;
    let norm: i8 = if period % 2 == 1 { -1 } else { 1 };
    debug_assert_eq!(
        &t * &t - delta * &u * &u,
        BigInt::from(4 * norm as i64),
        "Pell identity for Δ = {delta}"
    );
    Ok(UnitInfo {
        t,
        u,
        norm,
        period,
    })
}

/// Invariant factors of the wide (ordinary) class group: equal to the
/// narrow group when the fundamental unit has norm −1, otherwise the
/// quotient of the narrow group by the order-≤2 class of the negated
/// principal form.
pub fn wide_class_structure(delta: &BigInt, ceiling: u64) -> Result<AbelianStructure> {
    let unit = fundamental_unit(delta)?;
    let group = narrow_class_group(delta, ceiling)?;
    if unit.norm == -1 {
        return group.structure();
    }
    // j = class of (−1, b₀, (Δ − b₀²)/4).
    let b0 = if delta.is_odd() {
        BigInt::one()
    } else {
        BigInt::zero()
    };
    let c0 = (delta - &b0 * &b0) / BigInt::from(4);
    let j_form = IndefiniteForm {
        a: -BigInt::one(),
        b: b0,
        c: c0,
    };
    let j = group.class_of(&j_form)?;

    // Quotient by ⟨j⟩: coset key = min(i, i·j).
    let key = |i: usize| -> usize { i.min(group.compose_classes(i, j)) };
    let mut elements: Vec<usize> = (0..group.cycles.len()).map(key).collect();
    elements.sort_unstable();
    elements.dedup();
    let identity = key(group.principal_index());
    abelian::structure_from_elements(&elements, &identity, |&x, &y| {
        key(group.compose_classes(x, y))
    })
}

/// Compose two indefinite forms of equal discriminant; the result is some
/// reduced representative of the product class.
pub fn compose(f: &IndefiniteForm, g: &IndefiniteForm) -> Result<IndefiniteForm> {
    if f.discriminant() != g.discriminant() {
        return Err(Error::domain(format!(
            "cannot compose forms of different discriminants {} and {}",
            f.discriminant(),
            g.discriminant()
        )));
    }
    let fr = positive_leading(&f.reduce());
    let gr = positive_leading(&g.reduce());
    let (a, b, c) = dirichlet_compose(
        (&fr.a, &fr.b, &fr.c),
        (&gr.a, &gr.b, &gr.c),
    );
    Ok(IndefiniteForm { a, b, c }.reduce())
}

/// `k`-th power of the class of `f`, as a reduced representative.
pub fn pow(f: &IndefiniteForm, k: u64) -> Result<IndefiniteForm> {
    let mut acc = principal_form(&f.discriminant())?.reduce();
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

/// A reduced representative with positive leading coefficient (one `ρ` step
/// away at most, staying in the class).
fn positive_leading(f: &IndefiniteForm) -> IndefiniteForm {
    if f.a.is_positive() {
        f.clone()
    } else {
        let step = f.rho_step();
        debug_assert!(step.a.is_positive(), "reduced forms alternate sign of A");
        step
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> IndefiniteForm {
        IndefiniteForm::new(BigInt::from(a), BigInt::from(b), BigInt::from(c)).unwrap()
    }

    fn d(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn validation() {
        assert!(IndefiniteForm::new(d(0), d(3), d(-1)).is_err()); // A = 0
        assert!(IndefiniteForm::new(d(1), d(2), d(-3)).is_err()); // disc 16 square
        assert!(IndefiniteForm::new(d(2), d(2), d(-2)).is_err()); // imprimitive
        assert!(IndefiniteForm::new(d(1), d(1), d(1)).is_err()); // negative disc
    }

    #[test]
    fn reduced_recognition() {
        assert!(f(1, 1, -1).is_reduced()); // Δ = 5
        assert!(f(-1, 1, 1).is_reduced());
        assert!(f(1, 3, -1).is_reduced()); // Δ = 13
        assert!(!f(1, 1, -3).is_reduced()); // Δ = 13, B too small
        assert!(!f(1, -3, 1).is_reduced()); // negative B
    }

    #[test]
    fn rho_cycles_delta_5() {
        // Δ = 5 has exactly two reduced forms forming one cycle.
        let forms = enumerate_reduced(&d(5), 10_000).unwrap();
        assert_eq!(forms, vec![f(-1, 1, 1), f(1, 1, -1)]);
        let cycle = cycle_of(&f(1, 1, -1));
        assert_eq!(cycle.len(), 2);
        assert_eq!(cycle.canonical(), &f(-1, 1, 1));
        assert!(cycle.contains(&f(1, 1, -1)));
    }

    #[test]
    fn principal_cycle_delta_13() {
        // (1, 1, −3) reduces into the principal cycle, which contains (1, 3, −1).
        let p = principal_form(&d(13)).unwrap();
        assert_eq!(p, f(1, 1, -3));
        let cycle = cycle_of(&p);
        assert!(cycle.contains(&f(1, 3, -1)));
    }

    #[test]
    fn rho_preserves_class_and_discriminant() {
        for form in [f(1, 3, -1), f(2, 2, -1), f(3, 1, -4), f(1, 7, -3)] {
            let stepped = form.rho_step();
            assert_eq!(stepped.discriminant(), form.discriminant());
            assert!(equivalent(&form, &stepped).unwrap());
        }
    }

    #[test]
    fn cycle_lengths_are_even_and_partition() {
        for delta in [5i64, 8, 12, 13, 17, 21, 24, 229, 316] {
            let forms = enumerate_reduced(&d(delta), 10_000).unwrap();
            let group = narrow_class_group(&d(delta), 10_000).unwrap();
            let total: usize = group.cycles().iter().map(|c| c.len()).sum();
            assert_eq!(total, forms.len(), "Δ = {delta}");
            for cycle in group.cycles() {
                assert!(cycle.len() % 2 == 0, "Δ = {delta}: odd cycle");
            }
        }
    }

    #[test]
    fn narrow_class_numbers() {
        assert_eq!(narrow_class_group(&d(5), 10_000).unwrap().h_plus(), 1);
        assert_eq!(narrow_class_group(&d(12), 10_000).unwrap().h_plus(), 2);
        assert_eq!(narrow_class_group(&d(13), 10_000).unwrap().h_plus(), 1);
        assert_eq!(narrow_class_group(&d(229), 10_000).unwrap().h_plus(), 3);
    }

    #[test]
    fn narrow_structures() {
        let g229 = narrow_class_group(&d(229), 10_000).unwrap();
        assert_eq!(g229.structure().unwrap().invariant_factors(), &[3]);
        let g5 = narrow_class_group(&d(5), 10_000).unwrap();
        assert_eq!(g5.structure().unwrap(), AbelianStructure::trivial());
    }

    #[test]
    fn fundamental_units() {
        let u5 = fundamental_unit(&d(5)).unwrap();
        assert_eq!((u5.t, u5.u, u5.norm), (d(1), d(1), -1));
        let u13 = fundamental_unit(&d(13)).unwrap();
        assert_eq!((u13.t, u13.u, u13.norm), (d(3), d(1), -1));
        let u12 = fundamental_unit(&d(12)).unwrap();
        assert_eq!((u12.t, u12.u, u12.norm), (d(4), d(1), 1));
        let u17 = fundamental_unit(&d(17)).unwrap();
        assert_eq!((u17.t, u17.u, u17.norm), (d(8), d(2), -1));
        // Conductor-3 order inside Q(√5).
        let u45 = fundamental_unit(&d(45)).unwrap();
        assert_eq!((u45.t, u45.u, u45.norm), (d(7), d(1), 1));
    }

    #[test]
    fn unit_satisfies_pell_identity() {
        for delta in [5i64, 8, 12, 13, 17, 21, 24, 28, 29, 40, 44, 229, 1021] {
            let unit = fundamental_unit(&d(delta)).unwrap();
            let lhs = &unit.t * &unit.t - d(delta) * &unit.u * &unit.u;
            assert_eq!(lhs, d(4 * unit.norm as i64), "Δ = {delta}");
        }
    }

    #[test]
    fn unit_minimality_against_scan() {
        // Direct scan oracle over u for small Δ.
        for delta in 5i64..200 {
            if delta % 4 > 1 {
                continue;
            }
            let db = d(delta);
            if arith::is_perfect_square(&db) {
                continue;
            }
            let unit = fundamental_unit(&db).unwrap();
            let mut found: Option<(i64, i64)> = None;
            'outer: for u in 1i64..100_000 {
                for sign in [4i64, -4] {
                    let t2 = delta * u * u + sign;
                    if t2 < 0 {
                        continue;
                    }
                    let t = (t2 as u64).isqrt() as i64;
                    if t * t == t2 {
                        found = Some((t, u));
                        break 'outer;
                    }
                }
            }
            let (t, u) = found.expect("scan finds the unit for small Δ");
            assert_eq!(unit.t, d(t), "Δ = {delta}");
            assert_eq!(unit.u, d(u), "Δ = {delta}");
        }
    }

    #[test]
    fn wide_structures() {
        // Norm −1: wide = narrow.
        assert_eq!(
            wide_class_structure(&d(229), 10_000).unwrap().invariant_factors(),
            &[3]
        );
        assert_eq!(
            wide_class_structure(&d(5), 10_000).unwrap(),
            AbelianStructure::trivial()
        );
        // Norm +1 with h⁺ = 2: quotient collapses to the trivial group
        // (h(Q(√3)) = 1).
        assert_eq!(
            wide_class_structure(&d(12), 10_000).unwrap(),
            AbelianStructure::trivial()
        );
    }

    #[test]
    fn composition_group_laws_sample() {
        let group = narrow_class_group(&d(229), 10_000).unwrap();
        let n = group.h_plus() as usize;
        let e = group.principal_index();
        for i in 0..n {
            assert_eq!(group.compose_classes(i, e), i);
            for j in 0..n {
                assert_eq!(
                    group.compose_classes(i, j),
                    group.compose_classes(j, i)
                );
                for k in 0..n {
                    let left = group.compose_classes(group.compose_classes(i, j), k);
                    let right = group.compose_classes(i, group.compose_classes(j, k));
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn pow_and_principality() {
        // Δ = 229: the class group is Z/3, any non-principal class cubes to
        // the principal cycle.
        let group = narrow_class_group(&d(229), 10_000).unwrap();
        let non_principal = (0..group.h_plus() as usize)
            .find(|&i| i != group.principal_index())
            .unwrap();
        let rep = positive_rep(&group.cycles()[non_principal]).clone();
        let cubed = pow(&rep, 3).unwrap();
        assert!(equivalent(&cubed, &principal_form(&d(229)).unwrap()).unwrap());
        let squared = pow(&rep, 2).unwrap();
        assert!(!equivalent(&squared, &principal_form(&d(229)).unwrap()).unwrap());
    }
}
