//! Exact factorization in Q[t].
//!
//! Pipeline: Yun squarefree decomposition over Q, then for each squarefree
//! primitive integer part a Zassenhaus round: factor modulo a good small
//! prime (distinct-degree plus Cantor-Zassenhaus splitting), Hensel-lift
//! the modular factors above the Mignotte bound, and recombine subsets by
//! exact trial division. Everything is deterministic: the equal-degree
//! splitter draws from a fixed-seed ChaCha stream.
//!
//! Inputs are desk scale (degree <= 16, coefficients around 10^12); the
//! round completes well inside a second there.

use crate::error::Error;
use crate::scalars::poly::Poly;
use crate::scalars::{QPoly, Rat, Rationals};
use crate::Result;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// ---- F_p[x] helpers (coefficients lowest first, trimmed) ----

fn mulmod_u64(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fpp_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fpp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod_u64(x, y, p)) % p;
        }
    }
    fpp_trim(out)
}

fn fpp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y % p) % p;
    }
    fpp_trim(out)
}

fn fpp_invmod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i128) as u64
}

fn fpp_divrem(a: &[u64], d: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!d.is_empty());
    if a.len() < d.len() {
        return (vec![], a.to_vec());
    }
    let lcinv = fpp_invmod(*d.last().unwrap(), p);
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len() - d.len() + 1];
    for k in (0..quot.len()).rev() {
        let top = rem[k + d.len() - 1] % p;
        if top == 0 {
            continue;
        }
        let q = mulmod_u64(top, lcinv, p);
        quot[k] = q;
        for i in 0..d.len() {
            let s = mulmod_u64(q, d[i], p);
            rem[k + i] = (rem[k + i] + p - s) % p;
        }
    }
    (fpp_trim(quot), fpp_trim(rem))
}

fn fpp_monic(a: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() {
        return vec![];
    }
    let inv = fpp_invmod(*a.last().unwrap(), p);
    a.iter().map(|&c| mulmod_u64(c, inv, p)).collect()
}

fn fpp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let (_, r) = fpp_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    fpp_monic(&a, p)
}

/// (gcd, s, t) with s*a + t*b = gcd, gcd monic.
fn fpp_extgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut s0: Vec<u64> = vec![1];
    let mut s1: Vec<u64> = vec![];
    let mut t0: Vec<u64> = vec![];
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = fpp_divrem(&r0, &r1, p);
        let snew = fpp_sub(&s0, &fpp_mul(&q, &s1, p), p);
        let tnew = fpp_sub(&t0, &fpp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = snew;
        t0 = t1;
        t1 = tnew;
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let inv = fpp_invmod(*r0.last().unwrap(), p);
    let scale = |v: &[u64]| v.iter().map(|&c| mulmod_u64(c, inv, p)).collect::<Vec<_>>();
    (scale(&r0), scale(&s0), scale(&t0))
}

fn fpp_derivative(a: &[u64], p: u64) -> Vec<u64> {
    if a.len() <= 1 {
        return vec![];
    }
    let v = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod_u64(c, (i as u64) % p, p))
        .collect::<Vec<_>>();
    fpp_trim(v)
}

fn fpp_powmod_big(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = vec![1];
    let (_, b) = fpp_divrem(base, m, p);
    for bit in (0..e.bits()).rev() {
        acc = fpp_divrem(&fpp_mul(&acc, &acc, p), m, p).1;
        if e.bit(bit) {
            acc = fpp_divrem(&fpp_mul(&acc, &b, p), m, p).1;
        }
    }
    acc
}

// ---- factorization over F_p ----

/// Distinct-degree decomposition of a squarefree monic f: returns
/// (product-of-degree-d factors, d) pairs in increasing d.
fn fp_distinct_degree(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut out = vec![];
    let mut f = f.to_vec();
    let mut h: Vec<u64> = vec![0, 1]; // x
    let mut d = 0usize;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push((f.clone(), f.len() - 1));
            break;
        }
        h = fpp_powmod_big(&h, &BigUint::from(p), &f, p);
        let hx = fpp_sub(&h, &[0, 1], p);
        let g = fpp_gcd(&hx, &f, p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = fpp_divrem(&f, &g, p).0;
            h = fpp_divrem(&h, &f, p).1;
        }
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting (p odd).
fn fp_equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a: Vec<u64> = fpp_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.is_empty() {
            continue;
        }
        let g = fpp_gcd(&a, f, p);
        let split = if g.len() > 1 && g.len() < f.len() {
            g
        } else {
            let b = fpp_powmod_big(&a, &exp, f, p);
            let bm1 = fpp_sub(&b, &[1], p);
            let g = fpp_gcd(&bm1, f, p);
            if g.len() > 1 && g.len() < f.len() {
                g
            } else {
                continue;
            }
        };
        let rest = fpp_divrem(f, &split, p).0;
        let mut out = fp_equal_degree(&split, d, p, rng);
        out.extend(fp_equal_degree(&rest, d, p, rng));
        return out;
    }
}

/// Full factorization of a squarefree monic polynomial over F_p (p odd).
fn fp_factor_squarefree(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0051_ADD5 ^ p);
    let mut out = vec![];
    for (g, d) in fp_distinct_degree(f, p) {
        out.extend(fp_equal_degree(&g, d, p, &mut rng));
    }
    out.sort();
    out
}

// ---- Z/m[x] helpers for Hensel lifting ----

fn zm_norm(v: &mut Vec<BigInt>, m: &BigInt) {
    for c in v.iter_mut() {
        *c = c.mod_floor(m);
    }
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zm_norm(&mut out, m);
    out
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        out[i] = a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default();
    }
    zm_norm(&mut out, m);
    out
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        out[i] = a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default();
    }
    zm_norm(&mut out, m);
    out
}

/// Division by a monic divisor over Z/m.
fn zm_divrem_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    assert!(d.last().is_some_and(|c| c.is_one()), "divisor must be monic");
    if a.len() < d.len() {
        return (vec![], a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - d.len() + 1];
    for k in (0..quot.len()).rev() {
        let top = rem[k + d.len() - 1].mod_floor(m);
        if top.is_zero() {
            continue;
        }
        for i in 0..d.len() {
            let s = &top * &d[i];
            rem[k + i] = (&rem[k + i] - s).mod_floor(m);
        }
        quot[k] = top;
    }
    zm_norm(&mut rem, m);
    zm_norm(&mut quot, m);
    (quot, rem)
}

/// One quadratic Hensel step: from f = g*h, s*g + t*h = 1 (mod m) to the
/// same congruences mod m^2. g is monic and g* stays monic; divisions
/// happen only by g or g*. With e = f - g*h one has
/// e = g*(s*e) + h*(t*e) mod m^2, so the degree-reduced increment of g is
/// the remainder of t*e by g and h absorbs the rest.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = zm_sub(f, &zm_mul(g, h, &m2), &m2);
    let (q, r) = zm_divrem_monic(&zm_mul(t, &e, &m2), g, &m2);
    let gs = zm_add(g, &r, &m2);
    let hs = zm_add(h, &zm_add(&zm_mul(s, &e, &m2), &zm_mul(&q, h, &m2), &m2), &m2);
    // Refresh the Bezout pair the same way, with b in place of e.
    let one = vec![BigInt::one()];
    let b = zm_sub(&zm_add(&zm_mul(s, &gs, &m2), &zm_mul(t, &hs, &m2), &m2), &one, &m2);
    let (c, d) = zm_divrem_monic(&zm_mul(t, &b, &m2), &gs, &m2);
    let ts = zm_sub(t, &d, &m2);
    let ss = zm_sub(
        s,
        &zm_add(&zm_mul(s, &b, &m2), &zm_mul(&c, &hs, &m2), &m2),
        &m2,
    );
    (gs, hs, ss, ts)
}

/// Lifts the pair (g, h) with f = g*h mod p up to modulus >= bound.
/// Returns (g*, h*, attained modulus).
fn hensel_lift_pair(
    f: &[BigInt],
    g0: &[u64],
    h0: &[u64],
    p: u64,
    bound: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, BigInt) {
    let (gg, s0, t0) = fpp_extgcd(g0, h0, p);
    debug_assert_eq!(gg, vec![1u64], "modular factors must be coprime");
    let to_big = |v: &[u64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    let mut m = BigInt::from(p);
    let mut g = to_big(g0);
    let mut h = to_big(h0);
    let mut s = to_big(&s0);
    let mut t = to_big(&t0);
    while &m < bound {
        let mut fm = f.to_vec();
        let m2 = &m * &m;
        zm_norm(&mut fm, &m2);
        let (gs, hs, ss, ts) = hensel_step(&fm, &g, &h, &s, &t, &m);
        g = gs;
        h = hs;
        s = ss;
        t = ts;
        m = m2;
    }
    (g, h, m)
}

// ---- integer-polynomial utilities ----

fn zp_content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
    }
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

fn zp_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut c = zp_content(v);
    if v.last().is_some_and(|lc| lc.is_negative()) {
        c = -c;
    }
    v.iter().map(|x| x / &c).collect()
}

fn zp_to_qpoly(v: &[BigInt]) -> QPoly {
    Poly::new(
        Rationals,
        v.iter().map(|c| Rat::from(c.clone())).collect(),
    )
}

fn qpoly_to_primitive_z(f: &QPoly) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in f.coeffs() {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    zp_primitive(&ints)
}

/// Exact divisibility test over Z[x]; returns the quotient when g | f.
fn zp_try_divide(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    if g.is_empty() {
        return None;
    }
    let (q, r) = zp_to_qpoly(f).divrem(&zp_to_qpoly(g));
    if !r.is_zero() {
        return None;
    }
    let mut out = Vec::with_capacity(q.coeffs().len());
    for c in q.coeffs() {
        if !c.denom().is_one() {
            return None;
        }
        out.push(c.numer().clone());
    }
    Some(out)
}

fn symmetric_lift(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    v.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

// ---- Zassenhaus on a squarefree primitive integer polynomial ----

const FACTOR_PRIMES: [u64; 20] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
];

fn reduce_mod_p(f: &[BigInt], p: u64) -> Vec<u64> {
    fpp_trim(
        f.iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
            .collect(),
    )
}

fn zassenhaus_squarefree(f: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = f.len() - 1;
    if n <= 1 {
        return Ok(vec![f.to_vec()]);
    }
    let lc = f.last().unwrap().clone();

    // Pick the prime giving the fewest modular factors among the first
    // few good ones; deterministic.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut seen = 0;
    for &p in FACTOR_PRIMES.iter() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce_mod_p(f, p);
        if fp.len() != n + 1 {
            continue;
        }
        let fpm = fpp_monic(&fp, p);
        let der = fpp_derivative(&fpm, p);
        if fpp_gcd(&fpm, &der, p).len() != 1 {
            continue; // not squarefree mod p
        }
        let factors = fp_factor_squarefree(&fpm, p);
        let better = match &best {
            None => true,
            Some((_, cur)) => factors.len() < cur.len(),
        };
        if better {
            best = Some((p, factors));
        }
        seen += 1;
        if seen >= 4 {
            break;
        }
    }
    let (p, modular) = best.ok_or_else(|| {
        Error::PolyInput("no admissible prime for modular factorization".into())
    })?;
    if modular.len() == 1 {
        return Ok(vec![f.to_vec()]);
    }

    // Mignotte-style bound: |coeff of lc * (factor of f)| <= 2^n * |f|_1 * |lc|.
    let l1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = (BigInt::one() << n) * l1 * lc.abs() * 2 + 1;

    // Lift all modular factors to a common modulus by peeling.
    let mut lifted: Vec<Vec<BigInt>> = Vec::with_capacity(modular.len());
    let mut modulus = BigInt::zero();
    {
        let mut current: Vec<BigInt> = f.to_vec();
        let mut remaining: Vec<Vec<u64>> = modular.clone();
        while remaining.len() > 1 {
            let g0 = remaining.remove(0);
            // Cofactor mod p = lc * product of the rest.
            let mut h0: Vec<u64> = vec![current
                .last()
                .unwrap()
                .mod_floor(&BigInt::from(p))
                .to_u64()
                .unwrap()];
            for r in &remaining {
                h0 = fpp_mul(&h0, r, p);
            }
            let (g, h, m) = hensel_lift_pair(&current, &g0, &h0, p, &bound);
            lifted.push(g);
            modulus = m;
            current = h;
        }
        // Last cofactor = lc * (last monic factor) mod modulus.
        let lcinv_mod = {
            // lc is invertible mod p hence mod p^k.
            let (g, s, _) = bigint_extgcd(&lc.mod_floor(&modulus), &modulus);
            debug_assert!(g.is_one());
            s.mod_floor(&modulus)
        };
        let mut last: Vec<BigInt> = current
            .iter()
            .map(|c| (c * &lcinv_mod).mod_floor(&modulus))
            .collect();
        zm_norm(&mut last, &modulus);
        lifted.push(last);
    }

    // Recombination by subsets of increasing size.
    let mut factors_out: Vec<Vec<BigInt>> = vec![];
    let mut f_cur: Vec<BigInt> = f.to_vec();
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut size = 1usize;
    'outer: while 2 * size <= pool.len() {
        let idxs: Vec<usize> = (0..pool.len()).collect();
        for combo in combinations(&idxs, size) {
            let lc_cur = f_cur.last().unwrap().clone();
            let mut cand: Vec<BigInt> = vec![lc_cur.mod_floor(&modulus)];
            for &i in &combo {
                cand = zm_mul(&cand, &pool[i], &modulus);
            }
            let cand = zp_primitive(&symmetric_lift(&cand, &modulus));
            if cand.len() <= 1 {
                continue;
            }
            if let Some(q) = zp_try_divide(&f_cur, &cand) {
                factors_out.push(cand);
                f_cur = zp_primitive(&q);
                let keep: Vec<Vec<BigInt>> = pool
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                pool = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if f_cur.len() > 1 {
        factors_out.push(zp_primitive(&f_cur));
    }
    Ok(factors_out)
}

fn bigint_extgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // Advance.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// ---- public interface ----

/// Yun squarefree decomposition over Q: monic squarefree parts with their
/// multiplicities, product over parts^mult = input/leading.
pub fn squarefree_decomposition(f: &QPoly) -> Result<Vec<(QPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::PolyInput("squarefree decomposition of zero".into()));
    }
    let f = f.monic();
    if f.is_constant() {
        return Ok(vec![]);
    }
    let mut out = vec![];
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.divrem(&a0).0;
    let mut c = df.divrem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1u32;
    while !b.is_constant() {
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        b = b.divrem(&a).0;
        c = d.divrem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    Ok(out)
}

/// Exact factorization over Q: `f = constant * prod factors[i]^mult[i]`
/// with monic irreducible factors, sorted by (degree, coefficients).
///
/// Errors on the zero polynomial. A nonzero constant yields an empty
/// factor list.
pub fn factor_over_q(f: &QPoly) -> Result<(Rat, Vec<(QPoly, u32)>)> {
    if f.is_zero() {
        return Err(Error::PolyInput("cannot factor the zero polynomial".into()));
    }
    let constant = f.leading().unwrap().clone();
    if f.is_constant() {
        return Ok((constant, vec![]));
    }
    let mut out: Vec<(QPoly, u32)> = vec![];
    for (part, mult) in squarefree_decomposition(f)? {
        let z = qpoly_to_primitive_z(&part);
        for zf in zassenhaus_squarefree(&z)? {
            out.push((zp_to_qpoly(&zf).monic(), mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.deg0()
            .cmp(&b.deg0())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    // Exactness check: multiply back.
    let mut prod = Poly::constant(Rationals, constant.clone());
    for (q, m) in &out {
        prod = prod.mul(&q.pow(*m));
    }
    if &prod != f {
        return Err(Error::Internal("factorization failed to multiply back".into()));
    }
    Ok((constant, out))
}

/// True iff `f` is irreducible over Q (degree >= 1).
pub fn is_irreducible_over_q(f: &QPoly) -> Result<bool> {
    if f.is_zero() || f.is_constant() {
        return Ok(false);
    }
    let (_, factors) = factor_over_q(f)?;
    Ok(factors.len() == 1 && factors[0].1 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn p(coeffs: &[i64]) -> QPoly {
        Poly::from_i64(Rationals, coeffs)
    }

    #[test]
    fn factors_product_of_linears() {
        // (t-1)(t-2)(t-3)
        let f = p(&[-1, 1]).mul(&p(&[-2, 1])).mul(&p(&[-3, 1]));
        let (c, fs) = factor_over_q(&f).unwrap();
        assert_eq!(c, rat(1, 1));
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn factors_cyclotomic_like_product() {
        // (t^2+1)(t^2-2)(t-5)^2, scaled by 3.
        let f = p(&[1, 0, 1])
            .mul(&p(&[-2, 0, 1]))
            .mul(&p(&[-5, 1]).pow(2))
            .scale(&rat(3, 1));
        let (c, fs) = factor_over_q(&f).unwrap();
        assert_eq!(c, rat(3, 1));
        let degs: Vec<(usize, u32)> = fs.iter().map(|(q, m)| (q.deg0(), *m)).collect();
        assert_eq!(degs, vec![(1, 2), (2, 1), (2, 1)]);
    }

    #[test]
    fn detects_irreducible_quartic() {
        // x^4 - 14x^2 + 9 = minimal polynomial of sqrt(2)+sqrt(5).
        let f = p(&[9, 0, -14, 0, 1]);
        assert!(is_irreducible_over_q(&f).unwrap());
        // x^4 - 10x^2 + 1 likewise (sqrt(2)+sqrt(3)).
        assert!(is_irreducible_over_q(&p(&[1, 0, -10, 0, 1])).unwrap());
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // (x^2-2)(x^2-3)(x^2-6): splits into many modular factors at every
        // prime, exercising subset recombination.
        let f = p(&[-2, 0, 1]).mul(&p(&[-3, 0, 1])).mul(&p(&[-6, 0, 1]));
        let (_, fs) = factor_over_q(&f).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(q, _)| q.deg0() == 2));
    }

    #[test]
    fn rational_coefficients_are_handled() {
        // (t - 1/2)(t + 1/3) with leading 6 -> constant 6 after monic split.
        let f = p(&[1, 2]).mul(&p(&[-1, 3])).scale(&rat(1, 1));
        let (c, fs) = factor_over_q(&f).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(c, rat(6, 1));
        for (q, _) in &fs {
            assert!(q.leading().unwrap() == &rat(1, 1));
        }
    }

    #[test]
    fn constant_and_zero_edge_cases() {
        assert!(factor_over_q(&p(&[])).is_err());
        let (c, fs) = factor_over_q(&p(&[7])).unwrap();
        assert_eq!(c, rat(7, 1));
        assert!(fs.is_empty());
    }

    #[test]
    fn degree_16_in_budget() {
        // Product of two irreducible octics (from shifted cyclotomic-like
        // data) must factor exactly.
        let mut f = p(&[1]);
        for k in 1..=8 {
            f = f.mul(&p(&[-(k as i64), 1]));
        }
        // f = (t-1)...(t-8); square it partially and add an irreducible part.
        let g = f.mul(&p(&[1, 0, 0, 0, 0, 0, 0, 0, 1])); // t^8 + 1 irreducible
        let t0 = std::time::Instant::now();
        let (_, fs) = factor_over_q(&g).unwrap();
        assert_eq!(fs.len(), 9);
        assert!(t0.elapsed().as_secs_f64() < 1.0, "degree-16 budget exceeded");
    }
}
