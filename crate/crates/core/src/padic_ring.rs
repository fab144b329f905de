//! Polyadic ring structure on residue classes of truncated p-adic integers.
//!
//! The class `[a]_b = { a + b*k }` over truncated p-adic integers is closed
//! under m-ary addition exactly when `b` divides `(m-1)*a`, and under n-ary
//! multiplication exactly when `b` divides `a^n - a`. Divisibility by
//! `b = p^v * unit` is decided by the valuation, so all closure questions
//! reduce to the first `v` digits of `a`; [`lift_digits`] recovers the
//! admissible digit prefixes one level at a time.

use crate::padic::{check_prime, PAdicError, PAdicInt};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

/// Exact division in the truncated ring: the quotient `q` with
/// `b * q = c`, which exists iff `valuation(c) >= valuation(b)`.
///
/// The quotient carries `N - valuation(b)` digits; the low `valuation(b)`
/// digits of precision are consumed by the division. A zero truncation `c`
/// divides as the zero quotient. Zero-extending the quotient back to `N`
/// digits reproduces `c` exactly: `b * zero_extend(q) = c (mod p^N)`.
pub fn p_divide(c: &PAdicInt, b: &PAdicInt) -> Result<Option<PAdicInt>, PAdicError> {
    c.check_compat(b)?;
    let v = b.valuation().ok_or(PAdicError::ZeroDivisor)?;
    match c.valuation() {
        None => Ok(Some(PAdicInt::zero(c.prime(), c.precision() - v)?)),
        Some(w) if w < v => Ok(None),
        Some(_) => {
            let unit = b.shifted_down(v);
            Ok(Some(c.shifted_down(v).mul(&unit.invert()?)?))
        }
    }
}

/// The coordinate of the additive querelement: `k` maps to `(2-m)*k - I`,
/// where `I` is the m-ary addition invariant. `I` is adjusted to the
/// precision of `k` by zero extension.
pub fn quer_coordinate(
    k: &PAdicInt,
    m: u64,
    add_invariant: &PAdicInt,
) -> Result<PAdicInt, PAdicError> {
    if m < 2 {
        return Err(PAdicError::InvalidArity(m));
    }
    if k.prime() != add_invariant.prime() {
        return Err(PAdicError::PrimeMismatch(k.prime(), add_invariant.prime()));
    }
    let factor = PAdicInt::from_integer(
        k.prime(),
        k.precision(),
        &(BigInt::from(2) - BigInt::from(m)),
    )?;
    factor
        .mul(k)?
        .sub(&add_invariant.with_precision(k.precision()))
}

fn valuation_text(x: &PAdicInt) -> String {
    match x.valuation() {
        Some(w) => w.to_string(),
        None => format!(">={}", x.precision()),
    }
}

/// The class `[a]_b` of truncated p-adic integers, `b` not the zero
/// truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicClass {
    a: PAdicInt,
    b: PAdicInt,
    v: usize,
}

/// An element of a p-adic class, carrying the coordinate `k` alongside the
/// value `a + b*k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicRepresentative {
    k: PAdicInt,
    value: PAdicInt,
}

impl PAdicRepresentative {
    pub fn coordinate(&self) -> &PAdicInt {
        &self.k
    }

    pub fn value(&self) -> &PAdicInt {
        &self.value
    }
}

impl PAdicClass {
    pub fn new(a: PAdicInt, b: PAdicInt) -> Result<Self, PAdicError> {
        a.check_compat(&b)?;
        let v = b.valuation().ok_or(PAdicError::ZeroDivisor)?;
        Ok(Self { a, b, v })
    }

    pub fn a(&self) -> &PAdicInt {
        &self.a
    }

    pub fn b(&self) -> &PAdicInt {
        &self.b
    }

    pub fn prime(&self) -> u64 {
        self.a.prime()
    }

    pub fn precision(&self) -> usize {
        self.a.precision()
    }

    /// `v = valuation(b)`; divisibility by `b` is divisibility by `p^v`.
    pub fn modulus_valuation(&self) -> usize {
        self.v
    }

    pub fn contains(&self, x: &PAdicInt) -> Result<bool, PAdicError> {
        let diff = x.sub(&self.a)?;
        Ok(match diff.valuation() {
            None => true,
            Some(w) => w >= self.v,
        })
    }

    /// The element `a + b*k`.
    pub fn representative(&self, k: &PAdicInt) -> Result<PAdicRepresentative, PAdicError> {
        let value = self.a.add(&self.b.mul(k)?)?;
        Ok(PAdicRepresentative {
            k: k.clone(),
            value,
        })
    }

    /// Recovers a coordinate for a value in the class. Coordinates are only
    /// determined mod `p^(N-v)` at this precision; the recovered one has
    /// zero top digits.
    pub fn representative_from_value(
        &self,
        value: &PAdicInt,
    ) -> Result<PAdicRepresentative, PAdicError> {
        let diff = value.sub(&self.a)?;
        let k = p_divide(&diff, &self.b)?
            .ok_or(PAdicError::NotInClass)?
            .zero_extend(self.precision());
        Ok(PAdicRepresentative {
            k,
            value: value.clone(),
        })
    }

    /// `I` with `(m-1)*a = b*I`, at precision `N - v`; present iff m-ary
    /// addition is closed on the class.
    pub fn add_invariant(&self, m: u64) -> Result<Option<PAdicInt>, PAdicError> {
        if m < 2 {
            return Err(PAdicError::InvalidArity(m));
        }
        let lhs = self.scalar(&BigInt::from(m - 1)).mul(&self.a)?;
        p_divide(&lhs, &self.b)
    }

    /// `J` with `a^n - a = b*J`, at precision `N - v`; present iff n-ary
    /// multiplication is closed on the class.
    pub fn mul_invariant(&self, n: u64) -> Result<Option<PAdicInt>, PAdicError> {
        if n < 2 {
            return Err(PAdicError::InvalidArity(n));
        }
        let lhs = self.a.pow(n).sub(&self.a)?;
        p_divide(&lhs, &self.b)
    }

    pub fn is_add_closed(&self, m: u64) -> bool {
        matches!(self.add_invariant(m), Ok(Some(_)))
    }

    pub fn is_mul_closed(&self, n: u64) -> bool {
        matches!(self.mul_invariant(n), Ok(Some(_)))
    }

    fn scalar(&self, s: &BigInt) -> PAdicInt {
        PAdicInt::from_integer(self.prime(), self.precision(), s).expect("validated prime")
    }

    fn check_rep(&self, r: &PAdicRepresentative) -> Result<(), PAdicError> {
        if r.value == self.a.add(&self.b.mul(&r.k)?)? {
            Ok(())
        } else {
            Err(PAdicError::NotInClass)
        }
    }

    fn check_operands(&self, arity: u64, reps: &[PAdicRepresentative]) -> Result<(), PAdicError> {
        if reps.len() != arity as usize {
            return Err(PAdicError::WrongOperandCount {
                expected: arity,
                got: reps.len(),
            });
        }
        reps.iter().try_for_each(|r| self.check_rep(r))
    }

    /// m-ary addition: digit-exact sum of the values, with the coordinate
    /// recovered as `k_1 + ... + k_m + I`.
    pub fn polyadic_add(
        &self,
        m: u64,
        reps: &[PAdicRepresentative],
    ) -> Result<PAdicRepresentative, PAdicError> {
        let i = self
            .add_invariant(m)?
            .ok_or(PAdicError::AdditionNotClosed(m))?
            .zero_extend(self.precision());
        self.check_operands(m, reps)?;
        let mut value = reps[0].value.clone();
        let mut k = reps[0].k.clone();
        for r in &reps[1..] {
            value = value.add(&r.value)?;
            k = k.add(&r.k)?;
        }
        let k = k.add(&i)?;
        debug_assert_eq!(value, self.a.add(&self.b.mul(&k).unwrap()).unwrap());
        Ok(PAdicRepresentative { k, value })
    }

    /// n-ary multiplication: digit-exact product of the values, with the
    /// coordinate recovered by exact division of `value - a` by `b`.
    pub fn polyadic_mul(
        &self,
        n: u64,
        reps: &[PAdicRepresentative],
    ) -> Result<PAdicRepresentative, PAdicError> {
        self.mul_invariant(n)?
            .ok_or(PAdicError::MultiplicationNotClosed(n))?;
        self.check_operands(n, reps)?;
        let mut value = reps[0].value.clone();
        for r in &reps[1..] {
            value = value.mul(&r.value)?;
        }
        // The product differs from a by a multiple of b: expanding
        // prod(a + b*k_i) leaves a^n plus b-multiples, and a^n - a = b*J.
        let diff = value.sub(&self.a)?;
        let k = p_divide(&diff, &self.b)?
            .expect("closure guarantees divisibility of the product")
            .zero_extend(self.precision());
        Ok(PAdicRepresentative { k, value })
    }

    /// The querelement for m-ary addition: coordinate `(2-m)*k - I`, the
    /// unique solution of `nu_m[r, ..., r, q] = r` at this precision.
    pub fn querelement(
        &self,
        m: u64,
        r: &PAdicRepresentative,
    ) -> Result<PAdicRepresentative, PAdicError> {
        let i = self
            .add_invariant(m)?
            .ok_or(PAdicError::AdditionNotClosed(m))?;
        self.check_rep(r)?;
        let k = quer_coordinate(&r.k, m, &i)?;
        self.representative(&k)
    }

    fn random_rep(&self, rng: &mut (impl Rng + ?Sized)) -> Result<PAdicRepresentative, PAdicError> {
        let k = PAdicInt::random(self.prime(), self.precision(), rng)?;
        self.representative(&k)
    }

    fn sample_add_closure(
        &self,
        m: u64,
        samples: u64,
        rng: &mut (impl Rng + ?Sized),
    ) -> Result<LawStatus, PAdicError> {
        for _ in 0..samples {
            let reps = self.random_tuple(m, rng)?;
            let sum = self.polyadic_add(m, &reps)?;
            if !self.contains(sum.value())? {
                return Ok(LawStatus::Refuted {
                    witness: format!(
                        "sampled sum {} leaves the class",
                        sum.value().to_digit_string()
                    ),
                });
            }
        }
        Ok(LawStatus::Passed { cases: samples })
    }

    fn refute_add_closure(&self, m: u64) -> Result<LawStatus, PAdicError> {
        let sum = self.scalar(&BigInt::from(m)).mul(&self.a)?;
        let diff = sum.sub(&self.a)?;
        Ok(LawStatus::Refuted {
            witness: format!(
                "sum of {} copies of a is {}; (sum - a) = {} has valuation {}, below required {}",
                m,
                sum.to_digit_string(),
                diff.to_digit_string(),
                valuation_text(&diff),
                self.v
            ),
        })
    }

    fn sample_mul_closure(
        &self,
        n: u64,
        samples: u64,
        rng: &mut (impl Rng + ?Sized),
    ) -> Result<LawStatus, PAdicError> {
        for _ in 0..samples {
            let reps = self.random_tuple(n, rng)?;
            let prod = self.polyadic_mul(n, &reps)?;
            if !self.contains(prod.value())? {
                return Ok(LawStatus::Refuted {
                    witness: format!(
                        "sampled product {} leaves the class",
                        prod.value().to_digit_string()
                    ),
                });
            }
        }
        Ok(LawStatus::Passed { cases: samples })
    }

    fn refute_mul_closure(&self, n: u64) -> Result<LawStatus, PAdicError> {
        let prod = self.a.pow(n);
        let diff = prod.sub(&self.a)?;
        Ok(LawStatus::Refuted {
            witness: format!(
                "product of {} copies of a is {}; (product - a) = {} has valuation {}, below required {}",
                n,
                prod.to_digit_string(),
                diff.to_digit_string(),
                valuation_text(&diff),
                self.v
            ),
        })
    }

    fn check_querelement_law(
        &self,
        m: u64,
        samples: u64,
        rng: &mut (impl Rng + ?Sized),
    ) -> Result<LawStatus, PAdicError> {
        for _ in 0..samples {
            let r = self.random_rep(rng)?;
            let q = self.querelement(m, &r)?;
            let mut ops = vec![r.clone(); (m - 1) as usize];
            ops.push(q);
            let back = self.polyadic_add(m, &ops)?;
            if back != r {
                return Ok(LawStatus::Refuted {
                    witness: format!(
                        "k = {}: querelement round trip gives {} instead of {}",
                        r.k.to_digit_string(),
                        back.value.to_digit_string(),
                        r.value.to_digit_string()
                    ),
                });
            }
        }
        Ok(LawStatus::Passed { cases: samples })
    }

    fn random_tuple(
        &self,
        arity: u64,
        rng: &mut (impl Rng + ?Sized),
    ) -> Result<Vec<PAdicRepresentative>, PAdicError> {
        (0..arity).map(|_| self.random_rep(rng)).collect()
    }

    fn check_add_associativity(
        &self,
        m: u64,
        spot: u64,
        rng: &mut (impl Rng + ?Sized),
    ) -> Result<LawStatus, PAdicError> {
        let m_us = m as usize;
        for _ in 0..spot {
            let xs = self.random_tuple(2 * m - 1, rng)?;
            let mut left_ops = vec![self.polyadic_add(m, &xs[..m_us])?];
            left_ops.extend_from_slice(&xs[m_us..]);
            let left = self.polyadic_add(m, &left_ops)?;

            let mut right_ops = vec![xs[0].clone(), self.polyadic_add(m, &xs[1..=m_us])?];
            right_ops.extend_from_slice(&xs[m_us + 1..]);
            let right = self.polyadic_add(m, &right_ops)?;

            if left != right {
                return Ok(LawStatus::Refuted {
                    witness: format!(
                        "bracketing mismatch: {} vs {}",
                        left.value.to_digit_string(),
                        right.value.to_digit_string()
                    ),
                });
            }
        }
        Ok(LawStatus::Passed { cases: spot })
    }

    fn check_mul_associativity(
        &self,
        n: u64,
        spot: u64,
        rng: &mut (impl Rng + ?Sized),
    ) -> Result<LawStatus, PAdicError> {
        let n_us = n as usize;
        for _ in 0..spot {
            let xs = self.random_tuple(2 * n - 1, rng)?;
            let mut left_ops = vec![self.polyadic_mul(n, &xs[..n_us])?];
            left_ops.extend_from_slice(&xs[n_us..]);
            let left = self.polyadic_mul(n, &left_ops)?;

            let mut right_ops = vec![xs[0].clone(), self.polyadic_mul(n, &xs[1..=n_us])?];
            right_ops.extend_from_slice(&xs[n_us + 1..]);
            let right = self.polyadic_mul(n, &right_ops)?;

            if left != right {
                return Ok(LawStatus::Refuted {
                    witness: format!(
                        "bracketing mismatch: {} vs {}",
                        left.value.to_digit_string(),
                        right.value.to_digit_string()
                    ),
                });
            }
        }
        Ok(LawStatus::Passed { cases: spot })
    }

    fn check_distributivity(
        &self,
        m: u64,
        n: u64,
        spot: u64,
        rng: &mut (impl Rng + ?Sized),
    ) -> Result<LawStatus, PAdicError> {
        // Coordinates recovered through different routes agree only up to
        // the working precision of division; compare them over N - v digits
        // and the values over all N.
        let w = self.precision() - self.v;
        for _ in 0..spot {
            let ys = self.random_tuple(m, rng)?;
            let xs = self.random_tuple(n - 1, rng)?;

            let mut left_ops = vec![self.polyadic_add(m, &ys)?];
            left_ops.extend_from_slice(&xs);
            let left = self.polyadic_mul(n, &left_ops)?;

            let parts: Vec<PAdicRepresentative> = ys
                .iter()
                .map(|y| {
                    let mut ops = vec![y.clone()];
                    ops.extend_from_slice(&xs);
                    self.polyadic_mul(n, &ops)
                })
                .collect::<Result<_, _>>()?;
            let right = self.polyadic_add(m, &parts)?;

            if left.value != right.value || left.k.truncate(w) != right.k.truncate(w) {
                return Ok(LawStatus::Refuted {
                    witness: format!(
                        "distributing gives {} vs {}",
                        left.value.to_digit_string(),
                        right.value.to_digit_string()
                    ),
                });
            }
        }
        Ok(LawStatus::Passed { cases: spot })
    }

    /// Checks the (m,n)-ring laws on randomized samples: closure of both
    /// operations, the querelement law, and associativity/distributivity
    /// spot checks (capped at 100 tuples each). Refutations carry a
    /// concrete witness; checks that depend on a refuted closure are
    /// skipped.
    pub fn verify_ring(
        &self,
        m: u64,
        n: u64,
        samples: u64,
        rng: &mut (impl Rng + ?Sized),
    ) -> Result<RingReport, PAdicError> {
        if m < 2 {
            return Err(PAdicError::InvalidArity(m));
        }
        if n < 2 {
            return Err(PAdicError::InvalidArity(n));
        }
        let spot = samples.min(100);
        let add_closed = self.is_add_closed(m);
        let mul_closed = self.is_mul_closed(n);
        let add_skip = || LawStatus::Skipped {
            reason: format!("{m}-ary addition is not closed"),
        };
        let mul_skip = || LawStatus::Skipped {
            reason: format!("{n}-ary multiplication is not closed"),
        };

        let mut checks = Vec::new();
        checks.push(LawCheck {
            law: "m-ary addition closure".into(),
            status: if add_closed {
                self.sample_add_closure(m, samples, rng)?
            } else {
                self.refute_add_closure(m)?
            },
        });
        checks.push(LawCheck {
            law: "n-ary multiplication closure".into(),
            status: if mul_closed {
                self.sample_mul_closure(n, samples, rng)?
            } else {
                self.refute_mul_closure(n)?
            },
        });
        checks.push(LawCheck {
            law: "querelement law".into(),
            status: if add_closed {
                self.check_querelement_law(m, samples, rng)?
            } else {
                add_skip()
            },
        });
        checks.push(LawCheck {
            law: "m-ary addition associativity".into(),
            status: if add_closed {
                self.check_add_associativity(m, spot, rng)?
            } else {
                add_skip()
            },
        });
        checks.push(LawCheck {
            law: "n-ary multiplication associativity".into(),
            status: if mul_closed {
                self.check_mul_associativity(n, spot, rng)?
            } else {
                mul_skip()
            },
        });
        checks.push(LawCheck {
            law: "distributivity".into(),
            status: if add_closed && mul_closed {
                self.check_distributivity(m, n, spot, rng)?
            } else if add_closed {
                mul_skip()
            } else {
                add_skip()
            },
        });

        Ok(RingReport {
            m,
            n,
            samples,
            degenerate: self.contains(&PAdicInt::zero(self.prime(), self.precision())?)?,
            checks,
        })
    }
}

/// Outcome of one law check inside [`RingReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LawStatus {
    Passed { cases: u64 },
    Refuted { witness: String },
    Skipped { reason: String },
}

impl LawStatus {
    pub fn is_refuted(&self) -> bool {
        matches!(self, LawStatus::Refuted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub law: String,
    #[serde(flatten)]
    pub status: LawStatus,
}

/// The result of [`PAdicClass::verify_ring`]. `degenerate` marks classes
/// containing 0 (every law is then trivial).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingReport {
    pub m: u64,
    pub n: u64,
    pub samples: u64,
    pub degenerate: bool,
    pub checks: Vec<LawCheck>,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.status.is_refuted())
    }
}

/// Result of the digit-lifting search: all residues `a mod p^v` whose
/// truncations satisfy both closure conditions. Conditions at level `i`
/// are congruences mod `p^(i+1)`, so every digit from index `v` on is
/// unconstrained (`free_from = v`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftSolution {
    pub p: u64,
    pub m: u64,
    pub n: u64,
    pub v: usize,
    pub modulus: u64,
    pub admissible: Vec<u64>,
    pub free_from: usize,
}

/// Finds every `a mod p^v` with `v_p((m-1)a) >= v` and `v_p(a^n - a) >= v`
/// by extending admissible digit prefixes one level at a time: level `i`
/// keeps the prefixes satisfying both congruences mod `p^(i+1)`. The
/// result equals brute-force enumeration over `Z/p^v`. `precision` is the
/// working precision the caller intends for `a` and must be at least `v`.
pub fn lift_digits(
    p: u64,
    m: u64,
    n: u64,
    v: usize,
    precision: usize,
) -> Result<LiftSolution, PAdicError> {
    check_prime(p)?;
    if m < 2 {
        return Err(PAdicError::InvalidArity(m));
    }
    if n < 2 {
        return Err(PAdicError::InvalidArity(n));
    }
    if v < 1 || v > precision {
        return Err(PAdicError::InvalidValuation { v, precision });
    }
    let modulus = (0..v)
        .try_fold(1u64, |acc, _| acc.checked_mul(p))
        .filter(|&x| x <= (1u64 << 32))
        .ok_or(PAdicError::SearchSpaceTooLarge)?;

    let m1 = BigUint::from(m - 1);
    let n_exp = BigUint::from(n);
    let mut level_modulus = 1u64;
    let mut admissible: Vec<u64> = vec![0];
    for _ in 0..v {
        let place = level_modulus;
        level_modulus *= p;
        let lm = BigUint::from(level_modulus);
        let mut next = Vec::new();
        for &prefix in &admissible {
            for digit in 0..p {
                let cand = prefix + digit * place;
                let a = BigUint::from(cand);
                let add_ok = ((&m1 * &a) % &lm).is_zero();
                let mul_ok = add_ok && a.modpow(&n_exp, &lm) == &a % &lm;
                if mul_ok {
                    next.push(cand);
                }
            }
        }
        admissible = next;
    }
    admissible.sort_unstable();
    Ok(LiftSolution {
        p,
        m,
        n,
        v,
        modulus,
        admissible,
        free_from: v,
    })
}

/// [`lift_digits`] for an explicit modulus: only `valuation(b)` matters,
/// since the unit part of `b` divides everything.
pub fn lift_digits_for_modulus(b: &PAdicInt, m: u64, n: u64) -> Result<LiftSolution, PAdicError> {
    let v = b.valuation().ok_or(PAdicError::ZeroDivisor)?;
    if v == 0 {
        return Err(PAdicError::InvalidValuation {
            v,
            precision: b.precision(),
        });
    }
    lift_digits(b.prime(), m, n, v, b.precision())
}
