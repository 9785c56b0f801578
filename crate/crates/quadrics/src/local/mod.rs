//! Local and global invariants of quadratic forms over Q: Hilbert
//! symbols, Hasse invariants, Witt indices at each place, global
//! hyperbolic-splitting and isotropy decisions, and bounded point
//! searches on an intersection of two quadrics.
//!
//! All p-adic questions are answered through closed-form invariant
//! rules plus bounded-precision integer arithmetic; there is no general
//! p-adic field type. Global statements are decided on the finite
//! checking set {Real} union {p dividing 2 * prod of a diagonalization},
//! outside of which the form is unimodular and its behavior is forced.

pub mod oracle;

use crate::error::Error;
use crate::forms::{Mat, QuadraticForm};
use crate::pencil::Pencil;
use crate::scalars::field::{invmod, mulmod, Fp};
use crate::scalars::intfactor::{factor_int, is_prime, squarefree_part};
use crate::scalars::squares::square_class;
use crate::scalars::{rat_int, Rat, Rationals};
use crate::{par, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// A place of Q. The derived order puts Real first, then primes
/// ascending, which is the deterministic merge order everywhere.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LocalPlace {
    Real,
    Prime(u64),
}

impl LocalPlace {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(&BigInt::from(p)) {
            return Err(Error::Precondition(format!("{} is not prime", p)));
        }
        Ok(LocalPlace::Prime(p))
    }
}

impl fmt::Display for LocalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalPlace::Real => write!(f, "real"),
            LocalPlace::Prime(p) => write!(f, "{}", p),
        }
    }
}

/// Local invariants of a form at one place, computed on the
/// nondegenerate quotient (dim = rank); the radical dimension is
/// reported alongside.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittData {
    pub place: LocalPlace,
    pub dim: usize,
    pub radical_dim: usize,
    pub disc_class: BigInt,
    pub hasse: i32,
    pub signature: Option<(usize, usize)>,
    pub witt_index: usize,
}

/// p-adic valuation and unit part of a nonzero rational.
fn val_and_unit(a: &Rat, p: u64) -> (i64, Rat) {
    assert!(!a.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut num = a.numer().clone();
    let mut den = a.denom().clone();
    let mut v: i64 = 0;
    while (&num % &pb).is_zero() {
        num /= &pb;
        v += 1;
    }
    while (&den % &pb).is_zero() {
        den /= &pb;
        v -= 1;
    }
    (v, Rat::new(num, den))
}

/// Residue of a p-unit rational modulo m (m a power of the same p).
fn unit_residue(u: &Rat, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let num = u.numer().mod_floor(&mb).to_u64().unwrap();
    let den = u.denom().mod_floor(&mb).to_u64().unwrap();
    mulmod(num, invmod(den, m).expect("denominator is a unit"), m)
}

/// Whether a nonzero rational is a square in the completion at v.
pub fn is_square_local(a: &Rat, v: LocalPlace) -> bool {
    assert!(!a.is_zero(), "square test on zero");
    match v {
        LocalPlace::Real => a.is_positive(),
        LocalPlace::Prime(2) => {
            let (val, u) = val_and_unit(a, 2);
            val % 2 == 0 && unit_residue(&u, 8) == 1
        }
        LocalPlace::Prime(p) => {
            let (val, u) = val_and_unit(a, p);
            val % 2 == 0 && Fp::new(p).is_square(unit_residue(&u, p))
        }
    }
}

/// Hilbert symbol (a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a
/// nontrivial solution over the completion. Classical closed forms:
/// signs at Real, Legendre symbols and valuations at odd p, the unit
/// square-class table at 2.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: LocalPlace) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "hilbert symbol needs nonzero arguments");
    match v {
        LocalPlace::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        LocalPlace::Prime(2) => {
            let (alpha, u) = val_and_unit(a, 2);
            let (beta, w) = val_and_unit(b, 2);
            let u8 = unit_residue(&u, 8);
            let w8 = unit_residue(&w, 8);
            // eps(u) = (u-1)/2 mod 2, omega(u) = (u^2-1)/8 mod 2
            let eps = |r: u64| (r % 4 == 3) as i64;
            let omega = |r: u64| (r == 3 || r == 5) as i64;
            let e = eps(u8) * eps(w8) + alpha * omega(w8) + beta * omega(u8);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        LocalPlace::Prime(p) => {
            let (alpha, u) = val_and_unit(a, p);
            let (beta, w) = val_and_unit(b, p);
            let fp = Fp::new(p);
            let leg = |x: &Rat| if fp.is_square(unit_residue(x, p)) { 0i64 } else { 1 };
            let mut e = leg(&u) * beta + leg(&w) * alpha;
            if (p - 1) / 2 % 2 == 1 {
                e += alpha * beta;
            }
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
    }
}

/// Hasse invariant of a diagonal form: prod_{i<j} (d_i, d_j)_v.
pub fn hasse_invariant(d: &[Rat], v: LocalPlace) -> i32 {
    let mut h = 1;
    for i in 0..d.len() {
        for j in 0..i {
            h *= hilbert_symbol(&d[j], &d[i], v);
        }
    }
    h
}

/// Isotropy over the completion from (rank, disc class, hasse) alone,
/// by the classical conditions in each rank.
fn isotropic_by_invariants(n: usize, disc: &BigInt, eps: i32, v: LocalPlace) -> bool {
    let d = Rat::from(disc.clone());
    match n {
        0 | 1 => false,
        2 => is_square_local(&(-&d), v),
        3 => eps == hilbert_symbol(&rat_int(-1), &(-&d), v),
        4 => !(is_square_local(&d, v) && eps == -hilbert_symbol(&rat_int(-1), &rat_int(-1), v)),
        _ => true,
    }
}

/// Local invariants and Witt index of a rational form at one place.
/// Degenerate input is reduced modulo its radical first; the Witt
/// index reported is that of the nondegenerate quotient.
pub fn witt_index_local(q: &QuadraticForm<Rationals>, v: LocalPlace) -> Result<WittData> {
    let diag = q.diagonalize()?;
    let entries: Vec<Rat> = diag.diag.iter().filter(|e| !e.is_zero()).cloned().collect();
    let rank = entries.len();
    let radical_dim = q.dim() - rank;
    let mut prod = Rat::one();
    for e in &entries {
        prod *= e;
    }
    let disc_class = if rank == 0 { BigInt::one() } else { square_class(&prod)? };
    let hasse = hasse_invariant(&entries, v);

    if v == LocalPlace::Real {
        let pos = entries.iter().filter(|e| e.is_positive()).count();
        let neg = rank - pos;
        return Ok(WittData {
            place: v,
            dim: rank,
            radical_dim,
            disc_class,
            hasse,
            signature: Some((pos, neg)),
            witt_index: pos.min(neg),
        });
    }

    // Split hyperbolic planes off by invariant bookkeeping: if q = H
    // perp q', then disc q' = class(-disc q) and hasse q = hasse q'
    // times (-1, disc q')_v.
    let mut n = rank;
    let mut disc = disc_class.clone();
    let mut eps = hasse;
    let mut witt = 0;
    while isotropic_by_invariants(n, &disc, eps, v) {
        let next = squarefree_part(&-&disc)?;
        eps *= hilbert_symbol(&rat_int(-1), &Rat::from(next.clone()), v);
        disc = next;
        n -= 2;
        witt += 1;
    }
    debug_assert!(n <= 4, "anisotropic dimension over a p-adic field is at most 4");
    Ok(WittData {
        place: v,
        dim: rank,
        radical_dim,
        disc_class,
        hasse,
        signature: None,
        witt_index: witt,
    })
}

/// The finite set of places where a diagonal form can fail to be
/// unimodular: Real, 2, and every prime dividing a numerator or
/// denominator of an entry. Sorted Real-first, primes ascending.
pub fn checking_places(entries: &[Rat]) -> Result<Vec<LocalPlace>> {
    let mut primes: Vec<u64> = vec![2];
    for e in entries {
        assert!(!e.is_zero(), "checking set needs nonzero entries");
        for part in [e.numer().abs(), e.denom().abs()] {
            for p in factor_int(&part)?.keys() {
                let p = p.to_u64().ok_or_else(|| {
                    Error::Internal("prime exceeds word size".into())
                })?;
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
    }
    primes.sort_unstable();
    let mut out = vec![LocalPlace::Real];
    out.extend(primes.into_iter().map(LocalPlace::Prime));
    Ok(out)
}

/// Whether q splits m hyperbolic planes over Q.
///
/// By the Hasse principle for equivalence this holds iff it holds at
/// every completion. Off the checking set the form is unimodular at an
/// odd prime, where the anisotropic kernel has dimension at most 2, so
/// the Witt index is at least (rank - 2)/2; that covers every m with
/// 2m + 2 <= rank. The extreme case 2m = rank additionally needs the
/// discriminant class of m hyperbolic planes, (-1)^m; with that in
/// hand the unimodular odd places are forced hyperbolic, and again the
/// checking set decides.
pub fn splits_m_hyperbolic_global(q: &QuadraticForm<Rationals>, m: usize) -> Result<bool> {
    let diag = q.diagonalize()?;
    let entries: Vec<Rat> = diag.diag.iter().filter(|e| !e.is_zero()).cloned().collect();
    let rank = entries.len();
    if 2 * m > rank {
        return Ok(false);
    }
    if m == 0 {
        return Ok(true);
    }
    if 2 * m == rank {
        // Totally hyperbolic forces disc = (-1)^m up to squares; with
        // that in hand the excluded unimodular odd places are forced
        // hyperbolic too (a binary anisotropic kernel would need
        // -u1 u2 nonsquare, contradicting the disc class).
        let mut prod = Rat::one();
        for e in &entries {
            prod *= e;
        }
        if m % 2 == 1 {
            prod = -prod;
        }
        if square_class(&prod)? != BigInt::one() {
            return Ok(false);
        }
    } else {
        assert!(
            2 * m + 2 <= rank || rank % 2 == 1,
            "checking-set reduction needs excluded places split at least m"
        );
    }
    for place in checking_places(&entries)? {
        if witt_index_local(q, place)?.witt_index < m {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hasse-Minkowski isotropy decision for a single rational form.
pub fn isotropic_over_q(q: &QuadraticForm<Rationals>) -> Result<bool> {
    let diag = q.diagonalize()?;
    let entries: Vec<Rat> = diag.diag.iter().filter(|e| !e.is_zero()).cloned().collect();
    let rank = entries.len();
    if rank == 0 && q.dim() == 0 {
        return Err(Error::Precondition("empty form".into()));
    }
    if rank < q.dim() {
        // Radical vectors are nontrivial zeros.
        return Ok(true);
    }
    match rank {
        1 => Ok(false),
        2 => {
            let prod = -(entries[0].clone() * entries[1].clone());
            Ok(square_class(&prod)? == BigInt::one())
        }
        _ => {
            // Rank >= 3 is isotropic at every place off the checking
            // set (unimodular odd reduction of rank >= 3 is isotropic
            // over F_p and lifts), so the set decides.
            for place in checking_places(&entries)? {
                if witt_index_local(q, place)?.witt_index == 0 {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Outcome of the bounded smooth-point search over Q_p. NotFoundUpTo
/// is inconclusive: it certifies only that the enumeration up to the
/// stated precision produced no liftable point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LocalPointSearch {
    FoundSmoothLift { point: Vec<BigInt>, modulus: BigInt },
    NotFoundUpTo { precision: u32 },
}

/// Primitive integer Gram matrices of the two forms, the integral
/// model used for reduction.
fn integer_grams(x: &Pencil) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let take = |q: &QuadraticForm<Rationals>| {
        let (m, _) = q.gram().primitive_integer();
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).numer().clone()).collect())
            .collect()
    };
    (take(x.f()), take(x.g()))
}

fn reduce_gram(g: &[Vec<BigInt>], m: u64) -> Vec<Vec<u64>> {
    let mb = BigInt::from(m);
    g.iter()
        .map(|row| row.iter().map(|e| e.mod_floor(&mb).to_u64().unwrap()).collect())
        .collect()
}

fn eval_mod(g: &[Vec<u64>], x: &[u64], m: u64) -> u64 {
    let n = x.len();
    let mut acc = 0u64;
    for i in 0..n {
        for j in 0..n {
            acc = (acc + mulmod(g[i][j], mulmod(x[i], x[j], m), m)) % m;
        }
    }
    acc
}

fn grad_mod(g: &[Vec<u64>], x: &[u64], m: u64) -> Vec<u64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut acc = 0u64;
            for j in 0..n {
                acc = (acc + mulmod(g[i][j], x[j], m)) % m;
            }
            mulmod(2 % m, acc, m)
        })
        .collect()
}

fn eval_big(g: &[Vec<BigInt>], x: &[BigInt]) -> BigInt {
    let n = x.len();
    let mut acc = BigInt::zero();
    for i in 0..n {
        for j in 0..n {
            acc += &g[i][j] * &x[i] * &x[j];
        }
    }
    acc
}

fn grad_big(g: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut acc = BigInt::zero();
            for j in 0..n {
                acc += &g[i][j] * &x[j];
            }
            acc * 2
        })
        .collect()
}

fn val_p_big(a: &BigInt, p: u64) -> u32 {
    assert!(!a.is_zero());
    let pb = BigInt::from(p);
    let mut a = a.clone();
    let mut v = 0;
    while (&a % &pb).is_zero() {
        a /= &pb;
        v += 1;
    }
    v
}

/// Newton iteration on two selected coordinates. Requires the starting
/// point to satisfy F = G = 0 mod p^(2t+1) with a 2x2 Jacobian minor of
/// valuation t; returns the point reduced mod p^target after an exact
/// final verification, or None if the iteration stalls.
fn newton_lift(
    f: &[Vec<BigInt>],
    g: &[Vec<BigInt>],
    base: &[u64],
    p: u64,
    t: u32,
    target: u32,
) -> Option<(Vec<BigInt>, BigInt)> {
    let pb = BigInt::from(p);
    let big_mod = pb.pow(target + t + 2);
    let target_mod = pb.pow(target);
    let mut x: Vec<BigInt> = base.iter().map(|&c| BigInt::from(c)).collect();
    for _ in 0..64 {
        let hf = eval_big(f, &x).mod_floor(&big_mod);
        let hg = eval_big(g, &x).mod_floor(&big_mod);
        if (&hf % &target_mod).is_zero() && (&hg % &target_mod).is_zero() {
            // Canonicalize: first unit coordinate scaled to exactly 1.
            let mut out: Vec<BigInt> = x.iter().map(|c| c.mod_floor(&target_mod)).collect();
            let lead = out.iter().position(|c| !(c % &pb).is_zero())?;
            let inv = mod_inverse_big(&out[lead], &target_mod)?;
            for c in out.iter_mut() {
                *c = (&*c * &inv).mod_floor(&target_mod);
            }
            debug_assert!(eval_big(f, &out).mod_floor(&target_mod).is_zero());
            debug_assert!(eval_big(g, &out).mod_floor(&target_mod).is_zero());
            return Some((out, target_mod));
        }
        let gf = grad_big(f, &x);
        let gg = grad_big(g, &x);
        // Most unit-like 2x2 minor, first by valuation then by index.
        let n = x.len();
        let mut best: Option<(u32, usize, usize, BigInt)> = None;
        for c1 in 0..n {
            for c2 in c1 + 1..n {
                let det = (&gf[c1] * &gg[c2] - &gf[c2] * &gg[c1]).mod_floor(&big_mod);
                if det.is_zero() {
                    continue;
                }
                let v = val_p_big(&det, p);
                if best.as_ref().map_or(true, |(bv, ..)| v < *bv) {
                    best = Some((v, c1, c2, det));
                }
            }
        }
        let (v, c1, c2, det) = best?;
        if v > t {
            return None;
        }
        let unit = &det / pb.pow(v);
        let unit_inv = mod_inverse_big(&unit, &big_mod)?;
        // delta = -adj(J_S) H / det, with the p-power divided out exactly.
        let n1 = -(&gg[c2] * &hf - &gf[c2] * &hg);
        let n2 = -(-&gg[c1] * &hf + &gf[c1] * &hg);
        let pv = pb.pow(v);
        if !(&n1 % &pv).is_zero() || !(&n2 % &pv).is_zero() {
            return None;
        }
        x[c1] = (&x[c1] + (&n1 / &pv) * &unit_inv).mod_floor(&big_mod);
        x[c2] = (&x[c2] + (&n2 / &pv) * &unit_inv).mod_floor(&big_mod);
    }
    None
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Bounded search for a smooth Q_p-point on F = G = 0, by enumerating
/// the projective points of the reduction and Hensel-lifting the first
/// smooth one. For p = 2 the enumeration refines modulo 2^5 so the
/// extra valuation of the Jacobian (every gradient is even) is covered.
pub fn local_point_search_intersection(
    x: &Pencil,
    p: u64,
    precision: u32,
) -> Result<LocalPointSearch> {
    if !is_prime(&BigInt::from(p)) {
        return Err(Error::Precondition(format!("{} is not prime", p)));
    }
    if precision == 0 {
        return Err(Error::Precondition("precision must be at least 1".into()));
    }
    let digits = BigInt::from(p).pow(precision);
    if digits > BigInt::from(10u64.pow(18)) {
        return Err(Error::PrecisionTooLarge(format!(
            "p^precision = {}^{} exceeds 10^18",
            p, precision
        )));
    }
    let n = x.dim();
    let (fz, gz) = integer_grams(x);
    if p == 2 {
        return search_dyadic(&fz, &gz, n, precision);
    }
    // Enumeration work is roughly n^2 operations per candidate.
    let cost = (p as f64).powi(n as i32) * (n * n) as f64;
    if cost > 1e9 {
        return Err(Error::EnumerationTooLarge(format!(
            "{}^{} projective candidates at dimension {}",
            p, n, n
        )));
    }
    let fp = reduce_gram(&fz, p);
    let gp = reduce_gram(&gz, p);

    // Strata by position of the leading 1; within a stratum an odometer
    // over the trailing coordinates, parallel over the stratum index.
    let found = par::find_map_first(n, |lead| {
        let free = n - lead - 1;
        let mut coords = vec![0u64; n];
        coords[lead] = 1;
        let total = (p as u128).pow(free as u32);
        let mut idx: u128 = 0;
        while idx < total {
            let mut rem = idx;
            for k in 0..free {
                coords[lead + 1 + k] = (rem % p as u128) as u64;
                rem /= p as u128;
            }
            if eval_mod(&fp, &coords, p) == 0 && eval_mod(&gp, &coords, p) == 0 {
                let gf = grad_mod(&fp, &coords, p);
                let gg = grad_mod(&gp, &coords, p);
                if jacobian_rank2_mod_p(&gf, &gg, p) {
                    return Some(coords.clone());
                }
            }
            idx += 1;
        }
        None
    });
    match found {
        Some(base) => match newton_lift(&fz, &gz, &base, p, 0, precision) {
            Some((point, modulus)) => Ok(LocalPointSearch::FoundSmoothLift { point, modulus }),
            None => Err(Error::Internal(
                "smooth residue point failed to lift".into(),
            )),
        },
        None => Ok(LocalPointSearch::NotFoundUpTo { precision: 1 }),
    }
}

fn jacobian_rank2_mod_p(gf: &[u64], gg: &[u64], p: u64) -> bool {
    for c1 in 0..gf.len() {
        for c2 in c1 + 1..gf.len() {
            let d = (mulmod(gf[c1], gg[c2], p) + p - mulmod(gf[c2], gg[c1], p)) % p;
            if d != 0 {
                return true;
            }
        }
    }
    false
}

/// Level-by-level refinement mod 2, 4, ..., 32 with canonicalized
/// states, then a Newton lift where a Jacobian minor has valuation
/// exactly 2 (the generic smooth case at 2). A blown node budget makes
/// the verdict inconclusive at the level reached.
fn search_dyadic(
    fz: &[Vec<BigInt>],
    gz: &[Vec<BigInt>],
    n: usize,
    precision: u32,
) -> Result<LocalPointSearch> {
    const BUDGET: usize = 200_000;
    let mut states: Vec<Vec<u64>> = Vec::new();
    let f2 = reduce_gram(fz, 2);
    let g2 = reduce_gram(gz, 2);
    for mask in 1u64..(1 << n) {
        let coords: Vec<u64> = (0..n).map(|i| (mask >> i) & 1).collect();
        if eval_mod(&f2, &coords, 2) == 0 && eval_mod(&g2, &coords, 2) == 0 {
            states.push(coords);
        }
    }
    for level in 1..5u32 {
        let m = 1u64 << (level + 1);
        let fm = reduce_gram(fz, m);
        let gm = reduce_gram(gz, m);
        let mut next = std::collections::BTreeSet::new();
        for s in &states {
            for mask in 0u64..(1 << n) {
                let mut y: Vec<u64> = (0..n)
                    .map(|i| s[i] + ((mask >> i) & 1) * (1 << level))
                    .collect();
                if eval_mod(&fm, &y, m) != 0 || eval_mod(&gm, &y, m) != 0 {
                    continue;
                }
                // Scale the first odd coordinate to 1 mod 2^(level+1).
                let lead = y.iter().position(|c| c % 2 == 1).expect("primitive state");
                let inv = invmod(y[lead], m).unwrap();
                for c in y.iter_mut() {
                    *c = mulmod(*c, inv, m);
                }
                next.insert(y);
            }
            if next.len() > BUDGET {
                return Ok(LocalPointSearch::NotFoundUpTo { precision: level });
            }
        }
        states = next.into_iter().collect();
    }
    let m32 = 1u64 << 5;
    for s in &states {
        let gf = grad_mod(&reduce_gram(fz, m32), s, m32);
        let gg = grad_mod(&reduce_gram(gz, m32), s, m32);
        let mut liftable = false;
        'minors: for c1 in 0..n {
            for c2 in c1 + 1..n {
                let d = (mulmod(gf[c1], gg[c2], m32) + m32 - mulmod(gf[c2], gg[c1], m32)) % m32;
                if d % 8 == 4 {
                    // valuation exactly 2
                    liftable = true;
                    break 'minors;
                }
            }
        }
        if liftable {
            if let Some((point, modulus)) = newton_lift(fz, gz, s, 2, 2, precision) {
                return Ok(LocalPointSearch::FoundSmoothLift { point, modulus });
            }
        }
    }
    Ok(LocalPointSearch::NotFoundUpTo { precision: 5 })
}

/// Exhaustive search for a rational point on F = G = 0 among primitive
/// integer vectors with |x_i| <= height. The last coordinate is solved
/// from the quadratic it satisfies instead of enumerated. Returns the
/// first point in scan order, canonicalized (gcd 1, leading sign +).
pub fn rational_point_search(x: &Pencil, height: u32) -> Option<Vec<BigInt>> {
    assert!(height >= 1, "height bound must be positive");
    let n = x.dim();
    let (fz, gz) = integer_grams(x);
    let to_i64 = |g: &[Vec<BigInt>]| -> Option<Vec<Vec<i64>>> {
        g.iter()
            .map(|row| row.iter().map(|e| e.to_i64()).collect())
            .collect()
    };
    let (ff, gg) = (to_i64(&fz)?, to_i64(&gz)?);
    let h = height as i64;

    // Leading coordinate stratum: x_0 in 0..=h (first nonzero must be
    // positive, checked at the leaf for later coordinates).
    let hit = par::find_map_first((h + 1) as usize, |x0| {
        let mut prefix = vec![0i64; n - 1];
        prefix[0] = x0 as i64;
        search_tail(&ff, &gg, &mut prefix, 1, h)
    });
    hit.map(|v| canonical_primitive(&v))
}

fn search_tail(
    ff: &[Vec<i64>],
    gg: &[Vec<i64>],
    prefix: &mut Vec<i64>,
    depth: usize,
    h: i64,
) -> Option<Vec<i64>> {
    let n = ff.len();
    if depth == n - 1 {
        // Common integer roots of the two quadratics in the last
        // coordinate.
        let solve = |g: &[Vec<i64>]| -> (i128, i128, i128) {
            let a = g[n - 1][n - 1] as i128;
            let mut b: i128 = 0;
            let mut c: i128 = 0;
            for i in 0..n - 1 {
                b += 2 * g[n - 1][i] as i128 * prefix[i] as i128;
                for j in 0..n - 1 {
                    c += g[i][j] as i128 * prefix[i] as i128 * prefix[j] as i128;
                }
            }
            (a, b, c)
        };
        let (fa, fb, fc) = solve(ff);
        for t in quadratic_integer_roots(fa, fb, fc, h) {
            let (ga, gb, gc) = solve(gg);
            if ga * (t * t) + gb * t + gc == 0 {
                let mut v: Vec<i64> = prefix.clone();
                v.push(t as i64);
                if v.iter().any(|&c| c != 0) {
                    let first = v.iter().find(|&&c| c != 0).copied().unwrap();
                    if first > 0 {
                        return Some(v);
                    }
                }
            }
        }
        return None;
    }
    let lo = if prefix[..depth].iter().all(|&c| c == 0) { 0 } else { -h };
    for val in lo..=h {
        prefix[depth] = val;
        if let Some(v) = search_tail(ff, gg, prefix, depth + 1, h) {
            return Some(v);
        }
    }
    prefix[depth] = 0;
    None
}

/// Integer roots of a t^2 + b t + c = 0 with |t| <= h, in ascending
/// order; handles the degenerate linear and identically-zero cases.
fn quadratic_integer_roots(a: i128, b: i128, c: i128, h: i64) -> Vec<i128> {
    let mut out = Vec::new();
    if a == 0 {
        if b == 0 {
            if c == 0 {
                out.extend((-h..=h).map(|t| t as i128));
            }
            return out;
        }
        if c % b == 0 {
            let t = -c / b;
            if t.unsigned_abs() <= h as u128 {
                out.push(t);
            }
        }
        return out;
    }
    let disc = b * b - 4 * a * c;
    if disc < 0 {
        return out;
    }
    let r = int_sqrt_i128(disc);
    if r * r != disc {
        return out;
    }
    for s in [-r, r] {
        let num = -b + s;
        if num % (2 * a) == 0 {
            let t = num / (2 * a);
            if t.unsigned_abs() <= h as u128 && !out.contains(&t) {
                out.push(t);
            }
        }
        if r == 0 {
            break;
        }
    }
    out.sort_unstable();
    out
}

fn int_sqrt_i128(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as i128 + 2;
    while x * x > n {
        x -= 1;
    }
    x
}

/// Divide by the gcd and make the leading nonzero coordinate positive.
fn canonical_primitive(v: &[i64]) -> Vec<BigInt> {
    let mut g: i64 = 0;
    for &c in v {
        g = num_integer::gcd(g, c.abs());
    }
    let g = if g == 0 { 1 } else { g };
    let sign = v.iter().find(|&&c| c != 0).map_or(1, |&c| c.signum());
    v.iter().map(|&c| BigInt::from(c / g * sign)).collect()
}

/// A rational isotropic vector of a single form among primitive integer
/// vectors with |x_i| <= height, last coordinate solved exactly.
pub fn isotropic_vector_search(
    q: &QuadraticForm<Rationals>,
    height: u32,
) -> Option<Vec<Rat>> {
    let n = q.dim();
    if n == 0 {
        return None;
    }
    let (m, _) = q.gram().primitive_integer();
    let gi: Option<Vec<Vec<i64>>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).numer().to_i64()).collect())
        .collect();
    let gi = gi?;
    let h = height as i64;
    if n == 1 {
        return if gi[0][0] == 0 { Some(vec![rat_int(1)]) } else { None };
    }
    let mut prefix = vec![0i64; n - 1];
    let found = search_isotropic_tail(&gi, &mut prefix, 0, h)?;
    Some(
        canonical_primitive(&found)
            .into_iter()
            .map(Rat::from)
            .collect(),
    )
}

fn search_isotropic_tail(
    gi: &[Vec<i64>],
    prefix: &mut Vec<i64>,
    depth: usize,
    h: i64,
) -> Option<Vec<i64>> {
    let n = gi.len();
    if depth == n - 1 {
        let a = gi[n - 1][n - 1] as i128;
        let mut b: i128 = 0;
        let mut c: i128 = 0;
        for i in 0..n - 1 {
            b += 2 * gi[n - 1][i] as i128 * prefix[i] as i128;
            for j in 0..n - 1 {
                c += gi[i][j] as i128 * prefix[i] as i128 * prefix[j] as i128;
            }
        }
        for t in quadratic_integer_roots(a, b, c, h) {
            let mut v = prefix.clone();
            v.push(t as i64);
            if v.iter().any(|&x| x != 0) {
                return Some(v);
            }
        }
        return None;
    }
    let lo = if prefix[..depth].iter().all(|&c| c == 0) { 0 } else { -h };
    for val in lo..=h {
        prefix[depth] = val;
        if let Some(v) = search_isotropic_tail(gi, prefix, depth + 1, h) {
            return Some(v);
        }
    }
    prefix[depth] = 0;
    None
}

/// Constructive global hyperbolic splitting: peel m planes off q by
/// bounded isotropic-vector search and exact complement passage. The
/// returned basis vectors pair up into hyperbolic planes (Gram checked
/// exactly); None means the bounded search failed, not a disproof.
pub fn split_hyperbolic_constructive(
    q: &QuadraticForm<Rationals>,
    m: usize,
    height: u32,
) -> Option<Vec<Vec<Rat>>> {
    let mut current = q.clone();
    // Rows of `transport` express the current coordinates in the
    // original ones.
    let mut transport: Vec<Vec<Rat>> = (0..q.dim())
        .map(|i| {
            (0..q.dim())
                .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
                .collect()
        })
        .collect();
    let mut pairs: Vec<Vec<Rat>> = Vec::new();
    for _ in 0..m {
        let n = current.dim();
        if n < 2 {
            return None;
        }
        let v = isotropic_vector_search(&current, height)?;
        // Partner with b(v, w) != 0; exists since the form is
        // nondegenerate on the complement chain by construction.
        let bv: Vec<Rat> = (0..n)
            .map(|j| {
                let e: Vec<Rat> = (0..n)
                    .map(|k| if k == j { rat_int(1) } else { rat_int(0) })
                    .collect();
                current.bilinear(&v, &e)
            })
            .collect();
        let wj = bv.iter().position(|b| !b.is_zero())?;
        let scale = bv[wj].clone();
        let mut w: Vec<Rat> = (0..n)
            .map(|k| if k == wj { rat_int(1) } else { rat_int(0) })
            .collect();
        // Normalize b(v, w) = 1 and make w isotropic: w -> w - q(w)/2 v.
        for c in w.iter_mut() {
            *c /= &scale;
        }
        let qw = current.eval(&w);
        let half_qw = qw / rat_int(2);
        for (wc, vc) in w.iter_mut().zip(&v) {
            *wc -= &half_qw * vc;
        }
        debug_assert!(current.eval(&w).is_zero());
        debug_assert!(current.bilinear(&v, &w) == rat_int(1));
        let lift = |vec: &[Rat]| -> Vec<Rat> {
            let mut out = vec![rat_int(0); q.dim()];
            for (c, row) in vec.iter().zip(&transport) {
                for (o, r) in out.iter_mut().zip(row) {
                    *o += c * r;
                }
            }
            out
        };
        pairs.push(lift(&v));
        pairs.push(lift(&w));
        if pairs.len() == 2 * m {
            break;
        }
        // Exact orthogonal complement of span(v, w).
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for j in 0..n {
            let mut e: Vec<Rat> = (0..n)
                .map(|k| if k == j { rat_int(1) } else { rat_int(0) })
                .collect();
            // e -> e - b(e,w) v - b(e,v) w   (projection off the plane)
            let bw = current.bilinear(&e, &w);
            let bvv = current.bilinear(&e, &v);
            for k in 0..n {
                let adj = &bw * &v[k] + &bvv * &w[k];
                e[k] -= adj;
            }
            rows.push(e);
        }
        let basis = independent_rows(&rows, n - 2)?;
        let new_transport: Vec<Vec<Rat>> = basis.iter().map(|b| lift(b)).collect();
        let bmat = Mat::from_rows(Rationals, basis);
        let gram = bmat
            .matmul(&current.gram().clone())
            .matmul(&bmat.transpose());
        current = QuadraticForm::new(gram).ok()?;
        transport = new_transport;
    }
    // Certificate: the pair Gram blocks are exactly hyperbolic.
    for k in 0..m {
        let v = &pairs[2 * k];
        let w = &pairs[2 * k + 1];
        if !q.eval(v).is_zero() || !q.eval(w).is_zero() || q.bilinear(v, w) != rat_int(1) {
            return None;
        }
    }
    Some(pairs)
}

/// First `want` linearly independent rows, by exact rank growth.
fn independent_rows(rows: &[Vec<Rat>], want: usize) -> Option<Vec<Vec<Rat>>> {
    let mut picked: Vec<Vec<Rat>> = Vec::new();
    for r in rows {
        if picked.len() == want {
            break;
        }
        let mut trial = picked.clone();
        trial.push(r.clone());
        let m = Mat::from_rows(Rationals, trial.clone());
        if m.rank() == trial.len() {
            picked = trial;
        }
    }
    if picked.len() == want {
        Some(picked)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;
    use proptest::prelude::*;

    fn places() -> Vec<LocalPlace> {
        vec![
            LocalPlace::Real,
            LocalPlace::Prime(2),
            LocalPlace::Prime(3),
            LocalPlace::Prime(5),
            LocalPlace::Prime(7),
        ]
    }

    #[test]
    fn hilbert_symbol_pinned_values() {
        for v in places() {
            assert_eq!(hilbert_symbol(&rat_int(1), &rat_int(17), v), 1);
        }
        assert_eq!(hilbert_symbol(&rat_int(-1), &rat_int(-1), LocalPlace::Real), -1);
        assert_eq!(hilbert_symbol(&rat_int(-1), &rat_int(-1), LocalPlace::Prime(2)), -1);
        for p in [3, 5, 7, 11, 13] {
            assert_eq!(
                hilbert_symbol(&rat_int(-1), &rat_int(-1), LocalPlace::Prime(p)),
                1
            );
        }
        // (2, 3)_3: 3 = odd valuation, 2 a nonresidue mod 3.
        assert_eq!(hilbert_symbol(&rat_int(2), &rat_int(3), LocalPlace::Prime(3)), -1);
        // Rational arguments with denominators.
        assert_eq!(
            hilbert_symbol(&rat(1, 2), &rat(-3, 4), LocalPlace::Prime(2)),
            hilbert_symbol(&rat_int(2), &rat_int(-3), LocalPlace::Prime(2))
        );
    }

    #[test]
    fn hilbert_symbol_matches_solvability_oracle() {
        // Small deterministic sweep cross-checked against the brute
        // oracle for z^2 = a x^2 + b y^2.
        for p in [2u64, 3, 5, 7] {
            for a in [-6i64, -5, -3, -2, -1, 1, 2, 3, 5, 6] {
                for b in [-6i64, -5, -2, -1, 1, 2, 5, 6] {
                    let lhs = hilbert_symbol(&rat_int(a), &rat_int(b), LocalPlace::Prime(p));
                    let rhs = oracle::hilbert_symbol_oracle(a, b, p);
                    assert_eq!(lhs, rhs, "(a,b,p) = ({},{},{})", a, b, p);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn hilbert_symbol_identities(
            an in -40i64..40, bn in -40i64..40, cn in -40i64..40,
        ) {
            prop_assume!(an != 0 && bn != 0 && cn != 0);
            let (a, b, c) = (rat_int(an), rat_int(bn), rat_int(cn));
            for v in places() {
                // symmetry
                prop_assert_eq!(hilbert_symbol(&a, &b, v), hilbert_symbol(&b, &a, v));
                // bilinearity
                prop_assert_eq!(
                    hilbert_symbol(&(&a * &c), &b, v),
                    hilbert_symbol(&a, &b, v) * hilbert_symbol(&c, &b, v)
                );
                // (a, -a) = 1
                prop_assert_eq!(hilbert_symbol(&a, &(-&a), v), 1);
            }
        }
    }

    #[test]
    fn product_formula_over_support() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a: i64 = loop {
                let x = rng.gen_range(-500..=500);
                if x != 0 {
                    break x;
                }
            };
            let b: i64 = loop {
                let x = rng.gen_range(-500..=500);
                if x != 0 {
                    break x;
                }
            };
            let places =
                checking_places(&[rat_int(a), rat_int(b)]).unwrap();
            let mut prod = 1;
            for v in places {
                prod *= hilbert_symbol(&rat_int(a), &rat_int(b), v);
            }
            assert_eq!(prod, 1, "reciprocity failed for ({}, {})", a, b);
        }
    }

    #[test]
    fn hasse_invariant_basics() {
        let ones = vec![rat_int(1); 6];
        for v in places() {
            assert_eq!(hasse_invariant(&ones, v), 1);
        }
        assert_eq!(
            hasse_invariant(&[rat_int(-1), rat_int(-1)], LocalPlace::Real),
            -1
        );
    }

    fn diag_form(entries: &[i64]) -> QuadraticForm<Rationals> {
        QuadraticForm::from_diag(Rationals, &entries.iter().map(|&e| rat_int(e)).collect::<Vec<_>>())
    }

    #[test]
    fn witt_index_pinned_values() {
        let hyper = diag_form(&[1, -1]);
        for v in places() {
            assert_eq!(witt_index_local(&hyper, v).unwrap().witt_index, 1);
        }
        for p in [2u64, 3, 5, 7] {
            let w = witt_index_local(&diag_form(&[1, 1, 1, 1, 1]), LocalPlace::Prime(p)).unwrap();
            assert!(w.witt_index >= 1, "rank 5 must be isotropic at {}", p);
            assert!(w.dim - 2 * w.witt_index <= 4);
        }
        let real = witt_index_local(&diag_form(&[1, 1, 1, 1]), LocalPlace::Real).unwrap();
        assert_eq!(real.witt_index, 0);
        assert_eq!(real.signature, Some((4, 0)));
    }

    #[test]
    fn witt_index_handles_radical_and_reports_it() {
        let q = diag_form(&[1, -1, 0, 0]);
        let w = witt_index_local(&q, LocalPlace::Prime(3)).unwrap();
        assert_eq!(w.dim, 2);
        assert_eq!(w.radical_dim, 2);
        assert_eq!(w.witt_index, 1);
    }

    #[test]
    fn witt_index_agrees_with_oracle_spot_checks() {
        let fixtures: Vec<Vec<i64>> = vec![
            vec![1, 1],
            vec![1, -2],
            vec![2, 3, 5],
            vec![1, 1, 1, 1],
            vec![1, -1, 2, -2],
            vec![1, 2, 3, 5, -5],
            vec![-3, -3, 5, 5],
            vec![2, 2, 2, 2, 2],
        ];
        for p in [2u64, 3, 5, 7] {
            for d in &fixtures {
                let q = diag_form(d);
                let formula = witt_index_local(&q, LocalPlace::Prime(p)).unwrap().witt_index;
                let brute = oracle::witt_index_oracle(&q, p);
                assert_eq!(formula, brute, "entries {:?} at p = {}", d, p);
            }
        }
    }

    #[test]
    fn splitting_fixtures() {
        let mut anti = Mat::zeros(Rationals, 8, 8);
        for i in 0..4 {
            anti.set(2 * i, 2 * i + 1, rat_int(1));
            anti.set(2 * i + 1, 2 * i, rat_int(1));
        }
        let hyper8 = QuadraticForm::new(anti).unwrap();
        assert!(splits_m_hyperbolic_global(&hyper8, 4).unwrap());
        assert!(!splits_m_hyperbolic_global(&diag_form(&[1; 8]), 1).unwrap());
        assert!(splits_m_hyperbolic_global(&diag_form(&[1, 1, 1, -1, -1, -1, 2, -2]), 3).unwrap());
        // m over rank/2 is flatly false.
        assert!(!splits_m_hyperbolic_global(&hyper8, 5).unwrap());
    }

    #[test]
    fn splitting_matches_constructive_search_on_fixtures() {
        let fixtures: Vec<(Vec<i64>, usize)> = vec![
            (vec![1, -1, 1, -1], 2),
            (vec![1, -1, 2, -2, 3, -3], 3),
            (vec![1, 1, -1, -1], 2),
            (vec![1, 1, 1, -1, -1, -1, 2, -2], 3),
        ];
        for (entries, m) in fixtures {
            let q = diag_form(&entries);
            let predicate = splits_m_hyperbolic_global(&q, m).unwrap();
            let constructed = split_hyperbolic_constructive(&q, m, 6);
            // Constructive success must imply the predicate; on these
            // fixtures the bounded search is also expected to succeed.
            if constructed.is_some() {
                assert!(predicate);
            }
            assert_eq!(predicate, constructed.is_some());
        }
    }

    #[test]
    fn isotropy_over_q_pinned() {
        assert!(isotropic_over_q(&diag_form(&[1, 1, -1])).unwrap());
        assert!(!isotropic_over_q(&diag_form(&[1, 1, 1])).unwrap());
        assert!(!isotropic_over_q(&diag_form(&[1, 1, -3])).unwrap());
        // A radical makes the degenerate form trivially isotropic.
        assert!(isotropic_over_q(&diag_form(&[1, 0])).unwrap());
        assert!(!isotropic_over_q(&diag_form(&[5])).unwrap());
    }

    #[test]
    fn perturbation_stability_at_p() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [3u64, 5] {
            let q = diag_form(&[1, -1, 2, -2, 3, -3]);
            let base = witt_index_local(&q, LocalPlace::Prime(p)).unwrap().witt_index;
            // valuation gap of the fixture entries is 1 at p = 3;
            // margin 3 on top.
            let n = 4u32;
            let scale = rat_int((p as i64).pow(n));
            for _ in 0..10 {
                let mut gram = q.gram().clone();
                for i in 0..6 {
                    for j in 0..=i {
                        let bump = rat_int(rng.gen_range(-4i64..=4)) * &scale;
                        let v = gram.get(i, j).clone() + &bump;
                        gram.set(i, j, v.clone());
                        if i != j {
                            gram.set(j, i, v);
                        }
                    }
                }
                let perturbed = QuadraticForm::new(gram).unwrap();
                assert_eq!(
                    witt_index_local(&perturbed, LocalPlace::Prime(p)).unwrap().witt_index,
                    base
                );
            }
        }
    }

    fn spec_pencil() -> Pencil {
        // F = x0x1 + x2x3 + x4x5 + x6x7, G with block scalings 1,-1,2,3.
        let mut f = Mat::zeros(Rationals, 8, 8);
        let mut g = Mat::zeros(Rationals, 8, 8);
        for (i, s) in [1i64, -1, 2, 3].iter().enumerate() {
            f.set(2 * i, 2 * i + 1, rat_int(1));
            f.set(2 * i + 1, 2 * i, rat_int(1));
            g.set(2 * i, 2 * i + 1, rat_int(*s));
            g.set(2 * i + 1, 2 * i, rat_int(*s));
        }
        Pencil::new(
            QuadraticForm::new(f).unwrap(),
            QuadraticForm::new(g).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn local_search_finds_smooth_lift_at_5() {
        let x = spec_pencil();
        match local_point_search_intersection(&x, 5, 4).unwrap() {
            LocalPointSearch::FoundSmoothLift { point, modulus } => {
                assert_eq!(modulus, BigInt::from(625));
                let (fz, gz) = integer_grams(&x);
                assert!(eval_big(&fz, &point).mod_floor(&modulus).is_zero());
                assert!(eval_big(&gz, &point).mod_floor(&modulus).is_zero());
            }
            other => panic!("expected a lift, got {:?}", other),
        }
    }

    #[test]
    fn local_search_reports_inconclusive_mod_3() {
        // Two quaternionic blocks at 3: every common zero mod 3 has a
        // fully vanishing Jacobian, so nothing smooth exists to lift.
        let f = QuadraticForm::from_diag(
            Rationals,
            &[1, 1, 3, 3, 0, 0, 0, 0].map(rat_int),
        );
        let g = QuadraticForm::from_diag(
            Rationals,
            &[0, 0, 0, 0, 1, 1, 3, 3].map(rat_int),
        );
        let x = Pencil::new(f, g).unwrap();
        assert_eq!(
            local_point_search_intersection(&x, 3, 4).unwrap(),
            LocalPointSearch::NotFoundUpTo { precision: 1 }
        );
    }

    #[test]
    fn local_search_guards() {
        let x = spec_pencil();
        assert!(matches!(
            local_point_search_intersection(&x, 4, 2),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            local_point_search_intersection(&x, 5, 40),
            Err(Error::PrecisionTooLarge(_))
        ));
    }

    #[test]
    fn rational_search_finds_coordinate_point() {
        let x = spec_pencil();
        let pt = rational_point_search(&x, 1).unwrap();
        let (fz, gz) = integer_grams(&x);
        assert!(eval_big(&fz, &pt).is_zero());
        assert!(eval_big(&gz, &pt).is_zero());
    }

    #[test]
    fn rational_search_exhausts_definite_fixture() {
        // x0 x1 + sum of squares against a second definite-tail form:
        // no rational point at small height.
        let f = QuadraticForm::from_diag(
            Rationals,
            &[0, 0, 1, 1, 1, 1, 1, 1].map(rat_int),
        );
        let mut fg = f.gram().clone();
        fg.set(0, 1, rat_int(1));
        fg.set(1, 0, rat_int(1));
        let f = QuadraticForm::new(fg).unwrap();
        let g = QuadraticForm::from_diag(
            Rationals,
            &[1, 1, 1, 2, 3, 4, 5, 6].map(rat_int),
        );
        let x = Pencil::new(f, g).unwrap();
        assert_eq!(rational_point_search(&x, 2), None);
    }
}
