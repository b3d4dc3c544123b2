//! Fibonacci numbers with the F(1) = F(2) = 1 convention.

use crate::error::{Error, Result};

/// F(k) for k >= 1; F(1) = F(2) = 1. Errors on k = 0 or u64 overflow (k > 93).
pub fn fib(k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "fibonacci index starts at 1".into(),
        ));
    }
    let (mut a, mut b) = (1u64, 1u64); // F(1), F(2)
    for _ in 2..k {
        let next = a.checked_add(b).ok_or_else(|| {
            Error::InvalidArgument(format!("fibonacci overflow at index {k}"))
        })?;
        a = b;
        b = next;
    }
    Ok(if k == 1 { 1 } else { b })
}

/// Number of legal label paths of `len` steps between hard-core boundary
/// occupations `from` and `to` (occupations in {0,1}, adjacent 1s forbidden).
///
/// len = 0 counts the empty path: 1 if from == to else 0.
pub fn walk_count(from: u8, to: u8, len: u32) -> u64 {
    debug_assert!(from <= 1 && to <= 1);
    if len == 0 {
        return u64::from(from == to);
    }
    // w[b] = legal paths of the current length from `from` ending at occupation b;
    // a step may enter occupation 1 only from occupation 0
    let mut w1 = u64::from(from == 0);
    let mut w0 = 1u64;
    for _ in 1..len {
        let (p1, p0) = (w1, w0);
        w1 = p0;
        w0 = p0 + p1;
    }
    if to == 1 {
        w1
    } else {
        w0
    }
}
