//! Truncated p-adic integers.
//!
//! A [`PAdicInt`] is a prime `p` together with a little-endian digit vector
//! of fixed length `N` (the precision); the represented value is
//! `sum(digits[i] * p^i)` taken modulo `p^N`. All ring operations are
//! carry-based digit arithmetic, so the first `i` digits of a result depend
//! only on the first `i` digits of the operands.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use std::fmt;
use std::str::FromStr;

/// Largest supported prime. Digits are `u64`; keeping `p < 2^32` lets the
/// schoolbook multiply accumulate column sums in `u128` without overflow.
pub const MAX_PRIME: u64 = (1 << 32) - 1;

/// Errors from p-adic construction, parsing, and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PAdicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported bound {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("digit {digit} out of range for base {p}")]
    DigitOutOfRange { digit: u64, p: u64 },
    #[error("operands have different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("operands have different precisions ({0} vs {1})")]
    PrecisionMismatch(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by a zero truncation")]
    ZeroDivisor,
    #[error("not a unit: valuation is positive or indeterminate")]
    NotAUnit,
    #[error("arity must be at least 2, got {0}")]
    InvalidArity(u64),
    #[error("expected {expected} operands, got {got}")]
    WrongOperandCount { expected: u64, got: usize },
    #[error("m-ary addition with m = {0} is not closed for this class")]
    AdditionNotClosed(u64),
    #[error("n-ary multiplication with n = {0} is not closed for this class")]
    MultiplicationNotClosed(u64),
    #[error("element does not belong to the class")]
    NotInClass,
    #[error("required valuation {v} must satisfy 1 <= v <= precision {precision}")]
    InvalidValuation { v: usize, precision: usize },
    #[error("search modulus p^v does not fit the supported range")]
    SearchSpaceTooLarge,
}

/// Deterministic trial-division primality test for the supported range.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<(), PAdicError> {
    if p > MAX_PRIME {
        return Err(PAdicError::PrimeTooLarge(p));
    }
    if !is_prime(p) {
        return Err(PAdicError::NotPrime(p));
    }
    Ok(())
}

/// A p-adic integer truncated to a fixed number of digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    p: u64,
    digits: Vec<u64>,
}

impl PAdicInt {
    /// Builds a value from explicit little-endian digits.
    pub fn from_digits(p: u64, digits: Vec<u64>) -> Result<Self, PAdicError> {
        check_prime(p)?;
        if digits.is_empty() {
            return Err(PAdicError::ZeroPrecision);
        }
        if let Some(&digit) = digits.iter().find(|&&d| d >= p) {
            return Err(PAdicError::DigitOutOfRange { digit, p });
        }
        Ok(Self { p, digits })
    }

    /// Embeds an ordinary integer as its canonical residue mod `p^N`.
    /// Negative values take the p-adic complement.
    pub fn from_integer(p: u64, precision: usize, value: &BigInt) -> Result<Self, PAdicError> {
        check_prime(p)?;
        if precision == 0 {
            return Err(PAdicError::ZeroPrecision);
        }
        let modulus = BigInt::from(p).pow(precision as u32);
        let mut residue = value % &modulus;
        if residue.is_negative() {
            residue += &modulus;
        }
        let mut rest = residue
            .to_biguint()
            .expect("canonical residue is non-negative");
        let p_big = BigUint::from(p);
        let mut digits = Vec::with_capacity(precision);
        for _ in 0..precision {
            let (q, r) = rest.div_rem(&p_big);
            digits.push(u64::try_from(&r).expect("remainder below p"));
            rest = q;
        }
        Ok(Self { p, digits })
    }

    pub fn from_i64(p: u64, precision: usize, value: i64) -> Result<Self, PAdicError> {
        Self::from_integer(p, precision, &BigInt::from(value))
    }

    pub fn zero(p: u64, precision: usize) -> Result<Self, PAdicError> {
        Self::from_i64(p, precision, 0)
    }

    pub fn one(p: u64, precision: usize) -> Result<Self, PAdicError> {
        Self::from_i64(p, precision, 1)
    }

    /// Uniformly random digit vector, for property sampling.
    pub fn random<R: Rng + ?Sized>(
        p: u64,
        precision: usize,
        rng: &mut R,
    ) -> Result<Self, PAdicError> {
        check_prime(p)?;
        if precision == 0 {
            return Err(PAdicError::ZeroPrecision);
        }
        let digits = (0..precision).map(|_| rng.gen_range(0..p)).collect();
        Ok(Self { p, digits })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    /// Little-endian digits; `digits()[0]` is the unit digit.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Canonical representative in `[0, p^N)`.
    pub fn to_integer(&self) -> BigUint {
        let p_big = BigUint::from(self.p);
        let mut acc = BigUint::zero();
        for &d in self.digits.iter().rev() {
            acc = acc * &p_big + BigUint::from(d);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub(crate) fn check_compat(&self, rhs: &Self) -> Result<(), PAdicError> {
        if self.p != rhs.p {
            return Err(PAdicError::PrimeMismatch(self.p, rhs.p));
        }
        if self.digits.len() != rhs.digits.len() {
            return Err(PAdicError::PrecisionMismatch(
                self.digits.len(),
                rhs.digits.len(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, PAdicError> {
        self.check_compat(rhs)?;
        let p = u128::from(self.p);
        let mut digits = Vec::with_capacity(self.digits.len());
        let mut carry = 0u128;
        for (&a, &b) in self.digits.iter().zip(&rhs.digits) {
            let t = u128::from(a) + u128::from(b) + carry;
            digits.push((t % p) as u64);
            carry = t / p;
        }
        Ok(Self { p: self.p, digits })
    }

    /// Additive inverse `p^N - x`, i.e. the p-adic complement.
    pub fn neg(&self) -> Self {
        match self.valuation() {
            None => self.clone(),
            Some(v) => {
                let mut digits = self.digits.clone();
                digits[v] = self.p - self.digits[v];
                for d in digits.iter_mut().skip(v + 1) {
                    *d = self.p - 1 - *d;
                }
                Self { p: self.p, digits }
            }
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, PAdicError> {
        self.check_compat(rhs)?;
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, PAdicError> {
        self.check_compat(rhs)?;
        let n = self.digits.len();
        let p = u128::from(self.p);
        // Column sums fit u128: each product is < 2^64 and there are at most N terms.
        let mut columns = vec![0u128; n];
        for (i, &a) in self.digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.digits.iter().take(n - i).enumerate() {
                columns[i + j] += u128::from(a) * u128::from(b);
            }
        }
        let mut digits = Vec::with_capacity(n);
        let mut carry = 0u128;
        for c in columns {
            let t = c + carry;
            digits.push((t % p) as u64);
            carry = t / p;
        }
        Ok(Self { p: self.p, digits })
    }

    /// Repeated-squaring power; `x^0` is the one truncation.
    pub fn pow(&self, exp: u64) -> Self {
        let mut result = Self::one(self.p, self.precision()).expect("validated prime");
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same prime and precision");
            }
            base = base.mul(&base).expect("same prime and precision");
            e >>= 1;
        }
        result
    }

    /// Index of the first nonzero digit; `None` when every stored digit is
    /// zero, meaning only "valuation >= N" is known at this precision.
    pub fn valuation(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d != 0)
    }

    /// Multiplicative inverse mod `p^N`; requires valuation 0.
    pub fn invert(&self) -> Result<Self, PAdicError> {
        if self.valuation() != Some(0) {
            return Err(PAdicError::NotAUnit);
        }
        let modulus = BigInt::from(self.p).pow(self.precision() as u32);
        let value = BigInt::from_biguint(Sign::Plus, self.to_integer());
        let ext = value.extended_gcd(&modulus);
        debug_assert!(ext.gcd.is_one());
        let mut inv = ext.x % &modulus;
        if inv.is_negative() {
            inv += &modulus;
        }
        Self::from_integer(self.p, self.precision(), &inv)
    }

    /// First `new_precision` digits.
    pub fn truncate(&self, new_precision: usize) -> Self {
        assert!(new_precision >= 1 && new_precision <= self.precision());
        Self {
            p: self.p,
            digits: self.digits[..new_precision].to_vec(),
        }
    }

    /// Pads with zero digits up to `new_precision`.
    pub fn zero_extend(&self, new_precision: usize) -> Self {
        assert!(new_precision >= self.precision());
        let mut digits = self.digits.clone();
        digits.resize(new_precision, 0);
        Self { p: self.p, digits }
    }

    /// Adjusts to exactly `new_precision` digits by truncating or padding.
    pub fn with_precision(&self, new_precision: usize) -> Self {
        if new_precision <= self.precision() {
            self.truncate(new_precision)
        } else {
            self.zero_extend(new_precision)
        }
    }

    /// Drops the `shift` lowest digits, i.e. exact division by `p^shift`
    /// with a precision loss of `shift` digits.
    pub(crate) fn shifted_down(&self, shift: usize) -> Self {
        assert!(shift < self.precision());
        Self {
            p: self.p,
            digits: self.digits[shift..].to_vec(),
        }
    }

    /// The reduced coherent sequence of partial sums.
    pub fn partial_sums(&self) -> PartialSums {
        let p_big = BigUint::from(self.p);
        let mut power = BigUint::one();
        let mut acc = BigUint::zero();
        let mut sums = Vec::with_capacity(self.digits.len());
        for &d in &self.digits {
            acc += BigUint::from(d) * &power;
            sums.push(acc.clone());
            power *= &p_big;
        }
        PartialSums { sums }
    }

    /// Digit-by-digit comparison over the shared precision: strict requires
    /// `<` in every component, nonstrict `<=`.
    pub fn componentwise_less(&self, rhs: &Self, strict: bool) -> Result<bool, PAdicError> {
        self.check_compat(rhs)?;
        Ok(self
            .digits
            .iter()
            .zip(&rhs.digits)
            .all(|(&a, &b)| if strict { a < b } else { a <= b }))
    }

    /// Right-to-left positional rendering, e.g. `.0011 (2-adic)`.
    /// For p > 10 the digits are dot-separated decimal numerals.
    pub fn to_positional_string(&self) -> String {
        let body = if self.p > 10 {
            self.digits
                .iter()
                .rev()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(".")
        } else {
            self.digits.iter().rev().map(|d| d.to_string()).collect()
        };
        format!(".{} ({}-adic)", body, self.p)
    }

    /// Parses the output of [`PAdicInt::to_positional_string`].
    pub fn parse_positional(s: &str) -> Result<Self, PAdicError> {
        let err = |msg: &str| PAdicError::Parse(format!("{msg}: {s:?}"));
        let (body, suffix) = s
            .split_once(" (")
            .ok_or_else(|| err("missing base annotation"))?;
        let p: u64 = suffix
            .strip_suffix("-adic)")
            .ok_or_else(|| err("missing base annotation"))?
            .parse()
            .map_err(|_| err("bad base"))?;
        let body = body
            .strip_prefix('.')
            .ok_or_else(|| err("missing radix point"))?;
        let digits_be: Vec<u64> = if p > 10 {
            body.split('.')
                .map(|t| t.parse().map_err(|_| err("bad digit")))
                .collect::<Result<_, _>>()?
        } else {
            body.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(u64::from)
                        .ok_or_else(|| err("bad digit"))
                })
                .collect::<Result<_, _>>()?
        };
        Self::from_digits(p, digits_be.into_iter().rev().collect())
    }

    /// Machine format `p:N:d0,d1,...,d{N-1}` (little-endian digit list).
    pub fn to_digit_string(&self) -> String {
        let list = self
            .digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("{}:{}:{}", self.p, self.digits.len(), list)
    }
}

impl FromStr for PAdicInt {
    type Err = PAdicError;

    /// Parses the `p:N:d0,d1,...` digit-string format.
    fn from_str(s: &str) -> Result<Self, PAdicError> {
        let err = |msg: &str| PAdicError::Parse(format!("{msg}: {s:?}"));
        let mut parts = s.splitn(3, ':');
        let p: u64 = parts
            .next()
            .ok_or_else(|| err("missing prime"))?
            .parse()
            .map_err(|_| err("bad prime"))?;
        let n: usize = parts
            .next()
            .ok_or_else(|| err("missing precision"))?
            .parse()
            .map_err(|_| err("bad precision"))?;
        let digits: Vec<u64> = parts
            .next()
            .ok_or_else(|| err("missing digits"))?
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| err("bad digit")))
            .collect::<Result<_, _>>()?;
        if digits.len() != n {
            return Err(err("digit count does not match precision"));
        }
        Self::from_digits(p, digits)
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_digit_string())
    }
}

/// Partial sums `y_i = d0 + d1*p + ... + d{i-1}*p^{i-1}` for `i = 1..=N`.
/// Construction guarantees the reduced coherent form: `y_{i+1} = y_i (mod p^i)`
/// and `0 <= y_i < p^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSums {
    sums: Vec<BigUint>,
}

impl PartialSums {
    pub fn values(&self) -> &[BigUint] {
        &self.sums
    }
}
