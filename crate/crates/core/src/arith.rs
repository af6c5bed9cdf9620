//! Integer machinery: Moebius sieve, square-free flags, gcd/lcm, divisors.

use crate::error::{Error, Result};

/// Moebius values and square-free flags for `1..=limit`.
///
/// Built by a linear sieve over smallest prime factors; immutable once
/// constructed.
#[derive(Debug, Clone)]
pub struct MoebiusTable {
    limit: usize,
    // index 0 unused
    mu: Vec<i8>,
}

impl MoebiusTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    /// `mu(l)` for `1 <= l <= limit`.
    pub fn mu(&self, l: usize) -> i8 {
        assert!(l >= 1 && l <= self.limit, "index {l} outside 1..={}", self.limit);
        self.mu[l]
    }

    pub fn is_squarefree(&self, l: usize) -> bool {
        self.mu(l) != 0
    }

    /// `(l, mu(l))` for `l = 1..=limit`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.mu.iter().copied().enumerate().skip(1)
    }

    pub fn squarefree_up_to(&self, n: usize) -> Vec<usize> {
        (1..=n.min(self.limit)).filter(|&l| self.mu[l] != 0).collect()
    }
}

pub fn sieve_moebius(limit: usize) -> Result<MoebiusTable> {
    if limit == 0 {
        return Err(Error::domain("Moebius sieve limit must be at least 1"));
    }
    let mut mu = vec![0i8; limit + 1];
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    mu[1] = 1;
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            mu[i] = -1;
            primes.push(i);
        }
        for &p in &primes {
            let Some(ip) = i.checked_mul(p).filter(|&v| v <= limit) else {
                break;
            };
            spf[ip] = p as u32;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(MoebiusTable { limit, mu })
}

/// True iff `sum_{l | n} mu(l) = [n = 1]` for all `n <= n_max`.
pub fn verify_recurrence(table: &MoebiusTable, n_max: usize) -> bool {
    let n_max = n_max.min(table.limit);
    let mut sums = vec![0i64; n_max + 1];
    for l in 1..=n_max {
        let m = table.mu[l] as i64;
        if m == 0 {
            continue;
        }
        for n in (l..=n_max).step_by(l) {
            sums[n] += m;
        }
    }
    sums.iter()
        .enumerate()
        .skip(1)
        .all(|(n, &s)| s == i64::from(n == 1))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple, failing on overflow.
pub fn lcm(l: u64, m: u64) -> Result<u64> {
    if l == 0 || m == 0 {
        return Err(Error::domain("lcm takes positive integers"));
    }
    (l / gcd(l, m))
        .checked_mul(m)
        .ok_or_else(|| Error::Capacity(format!("lcm({l}, {m}) overflows u64")))
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
