//! Deterministic input builders shared by the criterion benches.

use polyadic::PAdicInt;

/// A truncated p-adic integer with every digit nonzero-ish: digit i is
/// (3 + 7i) mod p, which cycles through all residues for the primes used in
/// the benches and keeps carries busy.
pub fn dense_padic(p: u64, precision: usize) -> PAdicInt {
    let digits = (0..precision as u64).map(|i| (3 + 7 * i) % p).collect();
    PAdicInt::from_digits(p, digits).expect("valid digits")
}

/// A companion operand with a different digit pattern so products do not
/// collapse into squares.
pub fn sparse_padic(p: u64, precision: usize) -> PAdicInt {
    let digits = (0..precision as u64)
        .map(|i| if i % 3 == 0 { (1 + i) % p } else { 0 })
        .collect();
    PAdicInt::from_digits(p, digits).expect("valid digits")
}
