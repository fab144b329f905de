//! Residue classes of ordinary integers and the arities they support.
//!
//! The class `[a]_b = { a + b*k : k in Z }` is closed under m-ary addition
//! exactly when `(m-1)*a = 0 (mod b)`, and under n-ary multiplication
//! exactly when `a^n = a (mod b)`. Minimal such arities give the class an
//! "arity shape" `(m, n)` together with the integer closure invariants
//! `I = (m-1)*a/b` and `J = (a^n - a)/b`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Errors from residue-class construction and polyadic operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResidueError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("representative {a} is not canonical for modulus {b} (need 0 <= a < b)")]
    RepresentativeOutOfRange { a: u64, b: u64 },
    #[error("arity must be at least 2, got {0}")]
    InvalidArity(u64),
    #[error("{m}-ary addition is not closed on this class")]
    AdditionNotClosed { m: u64 },
    #[error("{n}-ary multiplication is not closed on this class")]
    MultiplicationNotClosed { n: u64 },
    #[error("expected {expected} operands, got {got}")]
    WrongOperandCount { expected: u64, got: usize },
    #[error("element does not belong to the class")]
    NotInClass,
}

/// The congruence class `[a]_b` with canonical representative `0 <= a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    a: u64,
    b: u64,
}

/// An element of a class, carrying both its integer value and the
/// coordinate `k` with `value = a + b*k`. Keeping `k` makes querelement
/// and closure bookkeeping exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassElement {
    value: BigInt,
    k: BigInt,
}

impl ClassElement {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn coordinate(&self) -> &BigInt {
        &self.k
    }
}

impl fmt::Display for ClassElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl ResidueClass {
    /// Requires the canonical representative: `0 <= a < b`. The degenerate
    /// class `[0]_1` (all of Z) is admitted.
    pub fn new(a: u64, b: u64) -> Result<Self, ResidueError> {
        if b == 0 {
            return Err(ResidueError::ZeroModulus);
        }
        if a >= b {
            return Err(ResidueError::RepresentativeOutOfRange { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn representative_value(&self) -> u64 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.b
    }

    /// The element `a + b*k`.
    pub fn representative<K: Into<BigInt>>(&self, k: K) -> ClassElement {
        let k = k.into();
        let value = BigInt::from(self.a) + BigInt::from(self.b) * &k;
        ClassElement { value, k }
    }

    /// Recovers the coordinate of a raw integer value.
    pub fn element_from_value(&self, x: &BigInt) -> Result<ClassElement, ResidueError> {
        let (k, r) = (x - BigInt::from(self.a)).div_rem(&BigInt::from(self.b));
        if r.is_zero() {
            Ok(ClassElement {
                value: x.clone(),
                k,
            })
        } else {
            Err(ResidueError::NotInClass)
        }
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        ((x - BigInt::from(self.a)) % BigInt::from(self.b)).is_zero()
    }

    /// A class misses 0 exactly when its canonical representative is nonzero.
    pub fn is_zeroless(&self) -> bool {
        !self.contains(&BigInt::zero())
    }

    /// Whether `(m-1)*a = 0 (mod b)`.
    pub fn is_add_closed(&self, m: u64) -> bool {
        m >= 2 && (u128::from(m - 1) * u128::from(self.a)) % u128::from(self.b) == 0
    }

    /// Whether `a^n = a (mod b)`.
    pub fn is_mul_closed(&self, n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let b = BigInt::from(self.b);
        let a = BigInt::from(self.a);
        a.modpow(&BigInt::from(n), &b) == &a % &b
    }

    /// `b + 1`, a cap that suffices for both arity searches: the minimal
    /// addition arity is `1 + b/gcd(a,b)`, and the power residues
    /// `a^n mod b` revisit `a` within `b + 1` steps if ever.
    pub fn default_arity_cap(&self) -> u64 {
        self.b + 1
    }

    /// Smallest `m` in `[2, m_cap]` closing addition. The closed form
    /// `1 + b/gcd(a, b)` gives the unconditional minimum.
    pub fn min_add_arity(&self, m_cap: u64) -> Option<u64> {
        let m = 1 + self.b / self.a.gcd(&self.b);
        (m <= m_cap).then_some(m)
    }

    /// Smallest `n` in `[2, n_cap]` closing multiplication.
    pub fn min_mul_arity(&self, n_cap: u64) -> Option<u64> {
        (2..=n_cap).find(|&n| self.is_mul_closed(n))
    }

    /// Minimal arities plus their closure invariants. Absent when no
    /// multiplication arity exists, and for the degenerate `a = 0` column
    /// (those classes are plain binary rings `b*Z`).
    pub fn arity_shape(&self) -> Option<ArityShape> {
        if self.a == 0 {
            return None;
        }
        let cap = self.default_arity_cap();
        let m = self.min_add_arity(cap)?;
        let n = self.min_mul_arity(cap)?;
        Some(ArityShape {
            m,
            n,
            add_invariant: self.add_invariant(m),
            mul_invariant: self.mul_invariant(n),
        })
    }

    /// `I = (m-1)*a/b`, the integer certifying m-ary additive closure.
    /// Callers must pass an `m` for which the class is closed.
    pub fn add_invariant(&self, m: u64) -> BigInt {
        assert!(self.is_add_closed(m));
        (BigInt::from(m - 1) * BigInt::from(self.a)) / BigInt::from(self.b)
    }

    /// `J = (a^n - a)/b`, the integer certifying n-ary multiplicative closure.
    pub fn mul_invariant(&self, n: u64) -> BigInt {
        assert!(self.is_mul_closed(n));
        (BigInt::from(self.a).pow(n as u32) - BigInt::from(self.a)) / BigInt::from(self.b)
    }

    fn check_member(&self, e: &ClassElement) -> Result<(), ResidueError> {
        if e.value == BigInt::from(self.a) + BigInt::from(self.b) * &e.k {
            Ok(())
        } else {
            Err(ResidueError::NotInClass)
        }
    }

    fn check_operands(&self, arity: u64, elems: &[ClassElement]) -> Result<(), ResidueError> {
        if elems.len() != arity as usize {
            return Err(ResidueError::WrongOperandCount {
                expected: arity,
                got: elems.len(),
            });
        }
        elems.iter().try_for_each(|e| self.check_member(e))
    }

    /// m-ary addition: the sum of `m` class elements, which lands back in
    /// the class when addition is m-ary closed.
    pub fn polyadic_add(
        &self,
        m: u64,
        elems: &[ClassElement],
    ) -> Result<ClassElement, ResidueError> {
        if m < 2 {
            return Err(ResidueError::InvalidArity(m));
        }
        if !self.is_add_closed(m) {
            return Err(ResidueError::AdditionNotClosed { m });
        }
        self.check_operands(m, elems)?;
        let value: BigInt = elems.iter().map(|e| &e.value).sum();
        self.element_from_value(&value)
    }

    /// n-ary multiplication: the product of `n` class elements.
    pub fn polyadic_mul(
        &self,
        n: u64,
        elems: &[ClassElement],
    ) -> Result<ClassElement, ResidueError> {
        if n < 2 {
            return Err(ResidueError::InvalidArity(n));
        }
        if !self.is_mul_closed(n) {
            return Err(ResidueError::MultiplicationNotClosed { n });
        }
        self.check_operands(n, elems)?;
        let value: BigInt = elems.iter().map(|e| &e.value).product();
        self.element_from_value(&value)
    }

    /// The querelement of `r` for m-ary addition: the unique class element
    /// `q` with `r + ... + r + q = r` (with `m - 1` copies of `r`), i.e.
    /// `q = (2 - m)*r`. On coordinates, `k` maps to `(2 - m)*k - I`.
    pub fn add_querelement(&self, m: u64, r: &ClassElement) -> Result<ClassElement, ResidueError> {
        if m < 2 {
            return Err(ResidueError::InvalidArity(m));
        }
        if !self.is_add_closed(m) {
            return Err(ResidueError::AdditionNotClosed { m });
        }
        self.check_member(r)?;
        let factor = BigInt::from(2) - BigInt::from(m);
        let value = &factor * &r.value;
        let k = factor * &r.k - self.add_invariant(m);
        debug_assert_eq!(value, BigInt::from(self.a) + BigInt::from(self.b) * &k);
        Ok(ClassElement { value, k })
    }

    /// A polyadic multiplicative identity: a class element `e` with
    /// `e^{n-1} * r = r` for every integer `r`, forcing `e^{n-1} = 1` over
    /// the integers. Only `1` and (for odd `n`) `-1` qualify; `1` is
    /// preferred when both are present.
    pub fn mul_identity(&self, n: u64) -> Result<Option<ClassElement>, ResidueError> {
        if n < 2 {
            return Err(ResidueError::InvalidArity(n));
        }
        if !self.is_mul_closed(n) {
            return Err(ResidueError::MultiplicationNotClosed { n });
        }
        for e in [BigInt::one(), -BigInt::one()] {
            if e.pow(n as u32 - 1).is_one() {
                if let Ok(elem) = self.element_from_value(&e) {
                    return Ok(Some(elem));
                }
            }
        }
        Ok(None)
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.a, self.b)
    }
}

/// Minimal arities and closure invariants of one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArityShape {
    pub m: u64,
    pub n: u64,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub add_invariant: BigInt,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub mul_invariant: BigInt,
}

/// One grid cell: the class and its shape, when a shape exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeCell {
    pub a: u64,
    pub b: u64,
    pub shape: Option<ArityShape>,
}

/// The arity-shape grid: for each `b` in `[2, b_max]`, the classes with
/// `1 <= a <= min(a_max, b-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeTable {
    pub a_max: u64,
    pub b_max: u64,
    pub cells: Vec<ShapeCell>,
}

impl ShapeTable {
    /// Computes every cell of the grid. Rows are independent, so they are
    /// evaluated in parallel; the collected order is deterministic
    /// (ascending `a`, then ascending `b`).
    pub fn compute(a_max: u64, b_max: u64) -> Self {
        let cells = (1..=a_max)
            .into_par_iter()
            .flat_map_iter(|a| {
                (a + 1..=b_max).map(move |b| {
                    let class = ResidueClass::new(a, b).expect("0 < a < b");
                    ShapeCell {
                        a,
                        b,
                        shape: class.arity_shape(),
                    }
                })
            })
            .collect();
        Self {
            a_max,
            b_max,
            cells,
        }
    }

    pub fn cell(&self, a: u64, b: u64) -> Option<&ShapeCell> {
        self.cells.iter().find(|c| c.a == a && c.b == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(a: u64, b: u64) -> ResidueClass {
        ResidueClass::new(a, b).unwrap()
    }

    fn shape(a: u64, b: u64) -> Option<(u64, u64, i64, i64)> {
        class(a, b).arity_shape().map(|s| {
            (
                s.m,
                s.n,
                i64::try_from(&s.add_invariant).unwrap(),
                i64::try_from(&s.mul_invariant).unwrap(),
            )
        })
    }

    #[test]
    fn rejects_noncanonical_representatives() {
        assert_eq!(ResidueClass::new(1, 0), Err(ResidueError::ZeroModulus));
        assert_eq!(
            ResidueClass::new(7, 4),
            Err(ResidueError::RepresentativeOutOfRange { a: 7, b: 4 })
        );
        assert_eq!(
            ResidueClass::new(4, 4),
            Err(ResidueError::RepresentativeOutOfRange { a: 4, b: 4 })
        );
        assert!(ResidueClass::new(0, 1).is_ok());
    }

    #[test]
    fn representatives_carry_coordinates() {
        let r = class(3, 4).representative(1);
        assert_eq!(r.value(), &BigInt::from(7));
        assert_eq!(r.coordinate(), &BigInt::from(1));
        assert_eq!(class(3, 4).representative(0).value(), &BigInt::from(3));
        assert_eq!(class(2, 7).representative(-3).value(), &BigInt::from(-19));
    }

    #[test]
    fn membership_and_value_recovery() {
        let c = class(3, 4);
        assert!(c.contains(&BigInt::from(-21)));
        assert!(!c.contains(&BigInt::from(4)));
        assert!(class(0, 1).contains(&BigInt::from(17)));

        let e = c.element_from_value(&BigInt::from(-21)).unwrap();
        assert_eq!(e.coordinate(), &BigInt::from(-6));
        assert_eq!(
            c.element_from_value(&BigInt::from(6)),
            Err(ResidueError::NotInClass)
        );
    }

    #[test]
    fn zeroless_iff_nonzero_representative() {
        assert!(class(3, 4).is_zeroless());
        assert!(!class(0, 4).is_zeroless());
        assert!(!class(0, 1).is_zeroless());
    }

    #[test]
    fn closure_predicates() {
        let c = class(3, 4);
        assert!(c.is_add_closed(5));
        assert!(!c.is_add_closed(4));
        assert!(c.is_mul_closed(3));
        assert!(!c.is_mul_closed(2));
        assert!(!c.is_add_closed(1));
        assert!(!c.is_mul_closed(1));
    }

    #[test]
    fn minimal_arities() {
        assert_eq!(class(3, 4).min_add_arity(5), Some(5));
        assert_eq!(class(3, 4).min_add_arity(4), None);
        assert_eq!(class(1, 2).min_add_arity(10), Some(3));
        assert_eq!(class(0, 5).min_add_arity(10), Some(2));

        assert_eq!(class(3, 4).min_mul_arity(5), Some(3));
        assert_eq!(class(2, 7).min_mul_arity(8), Some(4));
        assert_eq!(class(2, 4).min_mul_arity(5), None);
    }

    #[test]
    fn minimal_arities_match_scan() {
        for b in 1..=50u64 {
            for a in 0..b {
                let c = class(a, b);
                let cap = c.default_arity_cap();
                let m = c.min_add_arity(cap).expect("add arity is at most b + 1");
                assert!(c.is_add_closed(m), "m-closure fails at [{a}]_{b}");
                assert!(
                    (2..m).all(|t| !c.is_add_closed(t)),
                    "m not minimal at [{a}]_{b}"
                );
                if let Some(n) = c.min_mul_arity(cap) {
                    assert!(
                        (2..n).all(|t| !c.is_mul_closed(t)),
                        "n not minimal at [{a}]_{b}"
                    );
                }
            }
        }
    }

    #[test]
    fn known_shapes() {
        assert_eq!(shape(3, 4), Some((5, 3, 3, 6)));
        assert_eq!(shape(2, 3), Some((4, 3, 2, 2)));
        assert_eq!(shape(5, 9), Some((10, 7, 5, 8680)));
        assert_eq!(shape(5, 7), Some((8, 7, 5, 11160)));
        assert_eq!(shape(1, 2), Some((3, 2, 1, 0)));
        assert_eq!(shape(2, 4), None);
        assert_eq!(shape(6, 9), None);
        // The a = 0 column is degenerate: a plain binary ring, no shape.
        assert_eq!(shape(0, 5), None);
    }

    #[test]
    fn polyadic_add_stays_in_class() {
        let c = class(3, 4);
        let elems: Vec<ClassElement> = [0, 1, 2, 3, 4].map(|k| c.representative(k)).to_vec();
        let sum = c.polyadic_add(5, &elems).unwrap();
        assert_eq!(sum.value(), &BigInt::from(55));
        assert_eq!(sum.coordinate(), &BigInt::from(13));

        assert_eq!(
            c.polyadic_add(2, &elems[..2]),
            Err(ResidueError::AdditionNotClosed { m: 2 })
        );
        assert_eq!(
            c.polyadic_add(5, &elems[..3]),
            Err(ResidueError::WrongOperandCount {
                expected: 5,
                got: 3
            })
        );
        let alien = class(1, 4).representative(0);
        let mut bad = elems.clone();
        bad[2] = alien;
        assert_eq!(c.polyadic_add(5, &bad), Err(ResidueError::NotInClass));
    }

    #[test]
    fn binary_ring_case() {
        // [0]_1 with (m, n) = (2, 2) is ordinary integer arithmetic.
        let z = class(0, 1);
        let x = z.element_from_value(&BigInt::from(17)).unwrap();
        let y = z.element_from_value(&BigInt::from(-4)).unwrap();
        let sum = z.polyadic_add(2, &[x.clone(), y.clone()]).unwrap();
        assert_eq!(sum.value(), &BigInt::from(13));
        let prod = z.polyadic_mul(2, &[x, y]).unwrap();
        assert_eq!(prod.value(), &BigInt::from(-68));
    }

    #[test]
    fn polyadic_mul_stays_in_class() {
        let c = class(3, 4);
        let threes = vec![c.representative(0); 3];
        assert_eq!(
            c.polyadic_mul(3, &threes).unwrap().value(),
            &BigInt::from(27)
        );

        let c23 = class(2, 3);
        let elems: Vec<ClassElement> = [0, 1, 2].map(|k| c23.representative(k)).to_vec();
        let prod = c23.polyadic_mul(3, &elems).unwrap();
        assert_eq!(prod.value(), &BigInt::from(80));
        assert!(c23.contains(prod.value()));

        assert_eq!(
            c.polyadic_mul(2, &threes[..2]),
            Err(ResidueError::MultiplicationNotClosed { n: 2 })
        );
    }

    #[test]
    fn querelement_values() {
        let c = class(3, 4);
        let quer = |value: i64| {
            let r = c.element_from_value(&BigInt::from(value)).unwrap();
            i64::try_from(c.add_querelement(5, &r).unwrap().value()).unwrap()
        };
        assert_eq!(quer(7), -21);
        assert_eq!(quer(-5), 15);
        assert_eq!(quer(-1), 3);
    }

    #[test]
    fn querelement_neutralizes() {
        let c = class(3, 4);
        let r = c.representative(1);
        let q = c.add_querelement(5, &r).unwrap();
        assert!(c.contains(q.value()));
        let mut ops = vec![r.clone(); 4];
        ops.push(q);
        assert_eq!(c.polyadic_add(5, &ops).unwrap(), r);
    }

    #[test]
    fn querelement_coordinate_law() {
        // On coordinates the quermapping is k -> (2-m)k - I.
        let c = class(3, 4);
        let m = 5u64;
        let i = c.add_invariant(m);
        for k in -6i64..=6 {
            let q = c.add_querelement(m, &c.representative(k)).unwrap();
            let expected = (BigInt::from(2) - BigInt::from(m)) * BigInt::from(k) - &i;
            assert_eq!(q.coordinate(), &expected);
        }
    }

    #[test]
    fn identity_selection() {
        let e = class(3, 4).mul_identity(3).unwrap().unwrap();
        assert_eq!(e.value(), &BigInt::from(-1));
        assert_eq!(e.coordinate(), &BigInt::from(-1));

        let e = class(1, 5).mul_identity(2).unwrap().unwrap();
        assert_eq!(e.value(), &BigInt::from(1));

        // [2]_3 contains -1 = 2 + 3*(-1) and (-1)^2 = 1, so -1 qualifies.
        let e = class(2, 3).mul_identity(3).unwrap().unwrap();
        assert_eq!(e.value(), &BigInt::from(-1));

        // [2]_5 contains neither 1 nor -1.
        assert_eq!(class(2, 5).mul_identity(5).unwrap(), None);

        assert_eq!(
            class(3, 4).mul_identity(2),
            Err(ResidueError::MultiplicationNotClosed { n: 2 })
        );
    }

    #[test]
    fn shape_table_grid() {
        let table = ShapeTable::compute(9, 10);
        assert_eq!(table.cells.len(), 45);
        let empty: Vec<(u64, u64)> = table
            .cells
            .iter()
            .filter(|c| c.shape.is_none())
            .map(|c| (c.a, c.b))
            .collect();
        assert_eq!(empty, vec![(2, 4), (2, 8), (3, 9), (4, 8), (6, 8), (6, 9)]);

        let s = table.cell(5, 7).unwrap().shape.as_ref().unwrap();
        assert_eq!((s.m, s.n), (8, 7));
        assert_eq!(s.mul_invariant, BigInt::from(11160));

        let small = ShapeTable::compute(3, 4);
        let s = small.cell(2, 3).unwrap().shape.as_ref().unwrap();
        assert_eq!((s.m, s.n), (4, 3));
        assert_eq!(s.add_invariant, BigInt::from(2));
        assert_eq!(s.mul_invariant, BigInt::from(2));
    }

    #[test]
    fn shape_table_is_deterministic() {
        let t1 = ShapeTable::compute(9, 10);
        let t2 = ShapeTable::compute(9, 10);
        assert_eq!(t1, t2);
        let order: Vec<(u64, u64)> = t1.cells.iter().map(|c| (c.a, c.b)).collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
    }
}
