//! Small integer helpers shared by the group, ring and bound code.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in ascending prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `(p, e)` with `n = p^e` when `n` is a prime power greater than one.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Smallest `k >= 0` with `k * (k - 1) >= need`.
pub fn min_pairs_size(need: u64) -> u64 {
    if need == 0 {
        return 0;
    }
    let mut k = ((need as f64).sqrt() as u64).max(1);
    while k > 1 && (k - 1) * (k - 2) >= need {
        k -= 1;
    }
    while k * (k - 1) < need {
        k += 1;
    }
    k
}

/// Smallest integer `s` with `s * s >= n`.
pub fn ceil_sqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s > n {
        s -= 1;
    }
    while s * s < n {
        s += 1;
    }
    s
}

/// Largest integer `s` with `s * s <= n`.
pub fn floor_sqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_round_trips() {
        for n in 1..2000u64 {
            let f = factorize(n);
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn pair_sizes() {
        assert_eq!(min_pairs_size(0), 0);
        assert_eq!(min_pairs_size(1), 2);
        assert_eq!(min_pairs_size(2), 2);
        assert_eq!(min_pairs_size(3), 3);
        assert_eq!(min_pairs_size(6), 3);
        assert_eq!(min_pairs_size(7), 4);
        for need in 1..5000u64 {
            let k = min_pairs_size(need);
            assert!(k * (k - 1) >= need);
            assert!((k - 1) * (k.saturating_sub(2)) < need);
        }
    }

    #[test]
    fn sqrt_helpers() {
        for n in 0..10_000u64 {
            let c = ceil_sqrt(n);
            assert!(c * c >= n && (c == 0 || (c - 1) * (c - 1) < n));
            let f = floor_sqrt(n);
            assert!(f * f <= n && (f + 1) * (f + 1) > n);
        }
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(lcm(4, 6), 12);
    }
}
