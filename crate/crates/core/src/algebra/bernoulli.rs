use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Classical Bernoulli number `B_n` (with `B_1 = -1/2`), via the
/// Akiyama–Tanigawa transform.
pub fn bernoulli_classical(n: u32) -> BigRational {
    let n = n as usize;
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
    }
    let b = a.swap_remove(0);
    if n == 1 {
        -b
    } else {
        b
    }
}

/// Topologists' Bernoulli number: `B_r = |B_{2r}|`, so `B_1 = 1/6`, `B_2 = 1/30`.
///
/// `r = 0` is outside the convention and returns zero.
pub fn bernoulli(r: u32) -> BigRational {
    if r == 0 {
        return BigRational::zero();
    }
    bernoulli_classical(2 * r).abs()
}
