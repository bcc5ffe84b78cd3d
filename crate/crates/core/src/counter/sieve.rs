//! Segmented sieve of Eratosthenes.

use super::CounterError;

pub const DEFAULT_SIEVE_CAP: u64 = 1 << 34;

/// Odd numbers per segment; one byte each, sized to stay in L1/L2.
const SEGMENT: usize = 1 << 16;

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes `≤ limit` in ascending order.
pub fn sieve_primes(limit: u64) -> Result<Vec<u64>, CounterError> {
    sieve_primes_with_cap(limit, DEFAULT_SIEVE_CAP)
}

pub fn sieve_primes_with_cap(limit: u64, cap: u64) -> Result<Vec<u64>, CounterError> {
    let mut out = Vec::new();
    for_each_prime(limit, cap, |p| out.push(p))?;
    Ok(out)
}

/// Calls `f` on every prime `≤ limit`, ascending.
pub fn for_each_prime(limit: u64, cap: u64, mut f: impl FnMut(u64)) -> Result<(), CounterError> {
    if limit > cap {
        return Err(CounterError::SieveCap { limit, cap });
    }
    if limit < 2 {
        return Ok(());
    }
    f(2);
    let root = (limit as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = small_primes(root).into_iter().filter(|&p| p > 2).collect();
    // segment covers odd n = lo + 2i
    let mut seg = vec![false; SEGMENT];
    let mut lo = 3u64;
    while lo <= limit {
        let hi = (lo + 2 * SEGMENT as u64 - 2).min(limit | 1);
        seg.iter_mut().for_each(|b| *b = false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = (p * p).max(lo.div_ceil(p) * p);
            if start % 2 == 0 {
                start += p;
            }
            let mut j = ((start - lo) / 2) as usize;
            let last = ((hi - lo) / 2) as usize;
            while j <= last {
                seg[j] = true;
                j += p as usize;
            }
        }
        let count = ((hi - lo) / 2) as usize + 1;
        for (i, &c) in seg[..count].iter().enumerate() {
            let n = lo + 2 * i as u64;
            if !c && n <= limit {
                f(n);
            }
        }
        lo = hi + 2;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_limits() {
        assert_eq!(sieve_primes(30).unwrap(), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(sieve_primes(1).unwrap().is_empty());
        assert_eq!(sieve_primes(2).unwrap(), vec![2]);
        assert_eq!(sieve_primes(3).unwrap(), vec![2, 3]);
        assert_eq!(sieve_primes(9).unwrap(), vec![2, 3, 5, 7]);
    }

    #[test]
    fn agrees_with_simple_sieve_across_segments() {
        let limit = 3 * SEGMENT as u64 + 12345;
        assert_eq!(sieve_primes(limit).unwrap(), small_primes(limit));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(sieve_primes_with_cap(1000, 999).is_err());
    }
}
