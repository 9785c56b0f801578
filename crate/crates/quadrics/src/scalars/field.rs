//! Field abstraction shared by the linear algebra and polynomial code.
//!
//! A `Field` value is a descriptor (possibly carrying a modulus); elements
//! are plain data. All arithmetic goes through the descriptor, which keeps
//! element representations canonical so `PartialEq` is semantic equality.

use crate::scalars::Rat;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

/// A field of characteristic 0 or odd characteristic.
///
/// Implementations must keep elements canonical: two elements are equal as
/// field elements iff they compare equal as data.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// None exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// True for finite fields of characteristic 2; congruence
    /// diagonalization refuses to run there.
    fn char_is_two(&self) -> bool {
        false
    }

    /// Human-readable form for reports and errors.
    fn elem_to_string(&self, a: &Self::Elem) -> String;
}

/// The rational numbers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat::from(num_bigint::BigInt::from(n))
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn inv(&self, a: &Rat) -> Option<Rat> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn elem_to_string(&self, a: &Rat) -> String {
        a.to_string()
    }
}

/// Sign of a rational as -1, 0, or 1.
pub fn rat_sign(a: &Rat) -> i32 {
    if a.is_zero() {
        0
    } else if a.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn invmod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // Extended Euclid on signed 128-bit; p is far below 2^63.
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of unit mod prime");
    Some(s0.rem_euclid(p as i128) as u64)
}

/// Prime field F_p. `p` must be prime; trusted by construction sites.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2);
        Fp { p }
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Euler criterion; `a` may be 0 (a square).
    pub fn is_square(&self, a: u64) -> bool {
        if a % self.p == 0 {
            return true;
        }
        self.pow(a, (self.p - 1) / 2) == 1
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        base %= self.p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base, self.p);
            }
            base = mulmod(base, base, self.p);
            e >>= 1;
        }
        acc
    }
}

impl Field for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        invmod(*a, self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.p == 0
    }
    fn char_is_two(&self) -> bool {
        self.p == 2
    }
    fn elem_to_string(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Finite field F_{p^k} as F_p[x]/(m) with `m` monic irreducible of
/// degree k. Elements are coefficient vectors of length exactly k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fq {
    pub p: u64,
    /// Monic modulus, lowest degree first, length k+1, last entry 1.
    pub modulus: std::sync::Arc<Vec<u64>>,
}

impl Fq {
    /// `modulus` must be monic irreducible over F_p; irreducibility is the
    /// caller's responsibility (checked in debug builds by root search for
    /// degrees <= 3).
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        assert!(modulus.len() >= 2, "modulus must have degree >= 1");
        assert_eq!(*modulus.last().unwrap() % p, 1, "modulus must be monic");
        #[cfg(debug_assertions)]
        if modulus.len() <= 4 {
            let fp = Fp::new(p);
            for r in 0..p {
                let mut acc = 0u64;
                for &c in modulus.iter().rev() {
                    acc = (mulmod(acc, r, p) + c) % p;
                }
                debug_assert!(
                    acc != 0 || modulus.len() == 2,
                    "modulus {:?} has root {} mod {}",
                    modulus,
                    r,
                    fp.p
                );
            }
        }
        Fq {
            p,
            modulus: std::sync::Arc::new(modulus),
        }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Field size p^k.
    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    pub fn embed_base(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = a % self.p;
        v
    }

    /// The class of x, a generator of the extension over F_p.
    pub fn gen(&self) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        if self.degree() >= 2 {
            v[1] = 1;
        } else {
            // Degree-1 modulus x + c: class of x is -c.
            v[0] = (self.p - self.modulus[0] % self.p) % self.p;
        }
        v
    }

    fn reduce(&self, mut c: Vec<u64>) -> Vec<u64> {
        let k = self.degree();
        while c.len() > k {
            let top = c.pop().unwrap() % self.p;
            if top != 0 {
                let d = c.len() - k;
                for i in 0..k {
                    let s = mulmod(top, self.modulus[i], self.p);
                    c[d + i] = (c[d + i] + self.p - s) % self.p;
                }
            }
        }
        c.resize(k, 0);
        c
    }

    pub fn pow(&self, a: &Vec<u64>, mut e: u64) -> Vec<u64> {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius x -> x^p, the generator of Gal(F_{p^k}/F_p).
    pub fn frobenius(&self, a: &Vec<u64>) -> Vec<u64> {
        self.pow(a, self.p)
    }

    /// Euler criterion in F_{p^k} (p odd).
    pub fn is_square(&self, a: &Vec<u64>) -> bool {
        assert!(self.p != 2, "square test requires odd characteristic");
        if self.is_zero(a) {
            return true;
        }
        self.pow(a, (self.order() - 1) / 2) == self.one()
    }

    /// Enumerates all field elements in lexicographic coefficient order.
    pub fn all_elements(&self) -> Vec<Vec<u64>> {
        let k = self.degree();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = vec![0u64; k];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.p {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

impl Field for Fq {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        self.embed_base(1)
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.embed_base(n.rem_euclid(self.p as i64) as u64)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.p - y % self.p) % self.p)
            .collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| (self.p - x % self.p) % self.p).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let k = self.degree();
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(x, y, self.p)) % self.p;
            }
        }
        self.reduce(prod)
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        // Extended Euclid in F_p[x] between a (trimmed) and the modulus.
        let p = self.p;
        let trim = |mut v: Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        let mut r0: Vec<u64> = self.modulus.as_ref().clone();
        let mut r1 = trim(a.clone());
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // Divide r0 by r1.
            let lc = *r1.last().unwrap();
            let lcinv = invmod(lc, p).unwrap();
            let mut rem = r0.clone();
            let mut q: Vec<u64> = vec![0; rem.len().saturating_sub(r1.len()) + 1];
            while rem.len() >= r1.len() && !rem.is_empty() {
                let c = mulmod(*rem.last().unwrap(), lcinv, p);
                let d = rem.len() - r1.len();
                if c != 0 {
                    q[d] = c;
                    for i in 0..r1.len() {
                        let s = mulmod(c, r1[i], p);
                        rem[d + i] = (rem[d + i] + p - s) % p;
                    }
                }
                rem = trim(rem);
                if rem.len() < r1.len() {
                    break;
                }
            }
            // s_new = s0 - q*s1
            let mut qs1 = vec![0u64; q.len() + s1.len()];
            for (i, &qc) in q.iter().enumerate() {
                if qc == 0 {
                    continue;
                }
                for (j, &sc) in s1.iter().enumerate() {
                    qs1[i + j] = (qs1[i + j] + mulmod(qc, sc, p)) % p;
                }
            }
            let n = s0.len().max(qs1.len());
            let mut snew = vec![0u64; n];
            for i in 0..n {
                let a0 = s0.get(i).copied().unwrap_or(0);
                let b0 = qs1.get(i).copied().unwrap_or(0);
                snew[i] = (a0 + p - b0) % p;
            }
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = trim(snew);
        }
        // r0 = gcd (a unit since the modulus is irreducible).
        let lcinv = invmod(*r0.last().unwrap(), p)?;
        let mut out = vec![0u64; self.degree()];
        for (i, &c) in s0.iter().enumerate() {
            if i < out.len() {
                out[i] = mulmod(c, lcinv, p);
            }
        }
        let out = self.reduce(out);
        debug_assert!(self.is_one(&self.mul(a, &out)));
        Some(out)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x % self.p == 0)
    }
    fn char_is_two(&self) -> bool {
        self.p == 2
    }
    fn elem_to_string(&self, a: &Vec<u64>) -> String {
        format!(
            "[{}]",
            a.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        )
    }
}

/// Fields with a finite, indexable element set.
pub trait FiniteField: Field {
    fn order_u64(&self) -> u64;
    /// The i-th element under a fixed enumeration, 0 <= i < order.
    fn element_by_index(&self, i: u64) -> Self::Elem;
    fn elem_is_square(&self, a: &Self::Elem) -> bool;
}

impl FiniteField for Fp {
    fn order_u64(&self) -> u64 {
        self.p
    }
    fn element_by_index(&self, i: u64) -> u64 {
        debug_assert!(i < self.p);
        i
    }
    fn elem_is_square(&self, a: &u64) -> bool {
        self.is_square(*a)
    }
}

impl FiniteField for Fq {
    fn order_u64(&self) -> u64 {
        self.order()
    }
    fn element_by_index(&self, mut i: u64) -> Vec<u64> {
        debug_assert!(i < self.order());
        let mut out = vec![0u64; self.degree()];
        for c in out.iter_mut() {
            *c = i % self.p;
            i /= self.p;
        }
        out
    }
    fn elem_is_square(&self, a: &Vec<u64>) -> bool {
        self.is_square(a)
    }
}

/// Fields where square roots can be computed exactly. `Ok(None)` means
/// the element is certified not to be a square; failure to decide is an
/// error, never a silent None.
pub trait ExactSqrt: Field {
    fn sqrt_elem(&self, a: &Self::Elem) -> crate::Result<Option<Self::Elem>>;
}

impl ExactSqrt for Rationals {
    fn sqrt_elem(&self, a: &Rat) -> crate::Result<Option<Rat>> {
        Ok(super::squares::rat_exact_sqrt(a))
    }
}

impl ExactSqrt for Fp {
    fn sqrt_elem(&self, a: &u64) -> crate::Result<Option<u64>> {
        if self.p > 100_000 {
            return Err(crate::Error::EnumerationTooLarge(format!(
                "square root search in F_{}",
                self.p
            )));
        }
        Ok((0..self.p).find(|&x| mulmod(x, x, self.p) == a % self.p))
    }
}

impl ExactSqrt for Fq {
    fn sqrt_elem(&self, a: &Vec<u64>) -> crate::Result<Option<Vec<u64>>> {
        if self.order() > 100_000 {
            return Err(crate::Error::EnumerationTooLarge(format!(
                "square root search in a field of order {}",
                self.order()
            )));
        }
        Ok(self.all_elements().into_iter().find(|x| self.mul(x, x) == *a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse_round_trips() {
        let f = Fp::new(10_007);
        for a in [1u64, 2, 5_003, 10_006] {
            let i = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &i), 1);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn fp_squares_match_enumeration() {
        let f = Fp::new(13);
        let squares: std::collections::BTreeSet<u64> = (0..13).map(|x| x * x % 13).collect();
        for a in 0..13 {
            assert_eq!(f.is_square(a), squares.contains(&a), "a = {a}");
        }
    }

    #[test]
    fn f27_field_axioms_spotcheck() {
        // x^3 - x + 1 is irreducible over F_3 (no roots).
        let f = Fq::new(3, vec![1, 2, 0, 1]);
        assert_eq!(f.order(), 27);
        let g = f.gen();
        // Nonzero elements form a group of order 26.
        assert_eq!(f.pow(&g, 26), f.one());
        assert_ne!(f.pow(&g, 13), f.one());
        for a in f.all_elements() {
            if f.is_zero(&a) {
                assert!(f.inv(&a).is_none());
                continue;
            }
            let i = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &i), f.one(), "a = {:?}", a);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_base_field() {
        let f = Fq::new(3, vec![1, 2, 0, 1]);
        let fixed: Vec<_> = f
            .all_elements()
            .into_iter()
            .filter(|a| f.frobenius(a) == *a)
            .collect();
        assert_eq!(fixed.len(), 3);
    }
}
