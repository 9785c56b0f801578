//! Certified integer factorization at desk scale.
//!
//! Strategy: trial division by every prime below 10^6, then Miller-Rabin
//! primality on the cofactors and Pollard-Brent rho to split composites.
//! The rho stage runs under a fixed iteration budget; exhausting it aborts
//! with [`Error::FactorizationFailed`] rather than returning an unverified
//! factorization. The final product is checked against the input exactly.

use crate::error::Error;
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

const TRIAL_BOUND: u64 = 1_000_000;
/// Rho budget per split attempt; well beyond what 10^12-scale inputs need.
const RHO_BUDGET: u64 = 1 << 22;

/// Miller-Rabin witnesses proving primality for all n < 3.317e24.
const MR_WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// Deterministic Miller-Rabin for n < 3.317e24; for larger n the same
/// witness set is a (very strong) probable-prime test. Inputs that large
/// do not arise at the coefficient scales this crate targets.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &big(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let bp = big(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in MR_WITNESSES {
        let mut x = big(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent rho; returns a nontrivial factor of composite odd `n`,
/// or None when the iteration budget runs out.
fn pollard_brent(n: &BigInt) -> Option<BigInt> {
    let one = BigInt::one();
    // Deterministic parameter sweep keeps runs reproducible.
    for c in 1u64..20 {
        let cc = big(c);
        let mut y = big(2);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent: u64 = 0;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &cc) % n;
            }
            let mut k: u64 = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = (&y * &y + &cc) % n;
                    q = (&q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
                spent += m;
                if spent > RHO_BUDGET {
                    return None;
                }
            }
            r *= 2;
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &cc) % n;
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n && g > one {
            return Some(g);
        }
    }
    None
}

/// Factors |n| into primes with multiplicity. `n` must be nonzero.
/// The returned map multiplies back to |n| exactly (asserted).
pub fn factor_int(n: &BigInt) -> Result<BTreeMap<BigInt, u32>> {
    if n.is_zero() {
        return Err(Error::PolyInput("factor_int(0) is undefined".into()));
    }
    let mut m = n.abs();
    let mut out: BTreeMap<BigInt, u32> = BTreeMap::new();
    let push = |map: &mut BTreeMap<BigInt, u32>, p: BigInt, e: u32| {
        *map.entry(p).or_insert(0) += e;
    };
    // Trial division: 2, 3, then a 6k±1 wheel.
    for p in [2u64, 3] {
        let bp = big(p);
        while (&m % &bp).is_zero() {
            m /= &bp;
            push(&mut out, bp.clone(), 1);
        }
    }
    let mut p: u64 = 5;
    while p <= TRIAL_BOUND {
        for q in [p, p + 2] {
            let bq = big(q);
            while (&m % &bq).is_zero() {
                m /= &bq;
                push(&mut out, bq.clone(), 1);
            }
        }
        p += 6;
        if &big(p) * &big(p) > m {
            break;
        }
    }
    // Split what remains with rho.
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if &c < &(big(TRIAL_BOUND) * big(TRIAL_BOUND)) || is_prime(&c) {
            // Below the trial bound squared everything left is prime.
            push(&mut out, c, 1);
            continue;
        }
        match pollard_brent(&c) {
            Some(d) => {
                stack.push(&c / &d);
                stack.push(d);
            }
            None => return Err(Error::FactorizationFailed(c.to_string())),
        }
    }
    // Certify: multiply back.
    let mut prod = BigInt::one();
    for (pf, e) in &out {
        for _ in 0..*e {
            prod *= pf;
        }
    }
    if prod != n.abs() {
        return Err(Error::Internal(format!(
            "factorization of {n} failed to multiply back"
        )));
    }
    Ok(out)
}

/// Squarefree part of a nonzero integer, sign included:
/// n = squarefree_part(n) * square. 1 and -1 represent the trivial classes.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let f = factor_int(n)?;
    let mut out = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    for (p, e) in f {
        if e % 2 == 1 {
            out *= p;
        }
    }
    Ok(out)
}

/// Exact integer square root test: Some(r) with r*r == n when n is a
/// perfect square, None otherwise.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_basics() {
        assert!(is_prime(&big(2)));
        assert!(is_prime(&big(1_000_003)));
        assert!(!is_prime(&big(1)));
        assert!(!is_prime(&(big(1_000_003) * big(998_244_353))));
        // Carmichael number.
        assert!(!is_prime(&big(561)));
    }

    #[test]
    fn factors_semiprime_beyond_trial_bound() {
        let n = big(1_000_003) * big(1_000_033);
        let f = factor_int(&n).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[&big(1_000_003)], 1);
        assert_eq!(f[&big(1_000_033)], 1);
    }

    #[test]
    fn squarefree_part_signs_and_squares() {
        assert_eq!(squarefree_part(&big(18)).unwrap(), big(2));
        assert_eq!(squarefree_part(&BigInt::from(-4)).unwrap(), BigInt::from(-1));
        assert_eq!(squarefree_part(&big(1)).unwrap(), big(1));
        assert_eq!(squarefree_part(&big(360)).unwrap(), big(10));
    }

    #[test]
    fn exact_sqrt_detects_squares_only() {
        assert_eq!(exact_sqrt(&big(144)), Some(big(12)));
        assert_eq!(exact_sqrt(&big(145)), None);
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
    }

    #[test]
    fn zero_is_rejected() {
        assert!(factor_int(&BigInt::zero()).is_err());
    }
}
