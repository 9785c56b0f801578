//! Real root isolation by Sturm chains, plus the smallest-denominator
//! rational in a closed interval (Stern-Brocot descent). Both are exact.

use crate::scalars::{rat_int, QPoly, Rat};
use num_traits::{Signed, Zero};

fn sturm_chain(f: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            return chain;
        }
        chain.push(r);
    }
}

fn sign_variations(chain: &[QPoly], x: &Rat) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None; // sign as is_positive
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Upper bound M with every real root of f in (-M, M); f nonzero.
pub fn cauchy_bound(f: &QPoly) -> Rat {
    let lead = f.leading().expect("cauchy bound of zero polynomial").abs();
    let mut m = rat_int(0);
    for c in f.coeffs().iter().take(f.coeffs().len().saturating_sub(1)) {
        let q = c.abs() / lead.clone();
        if q > m {
            m = q;
        }
    }
    m + rat_int(1)
}

/// Number of real roots of the squarefree part of f inside (a, b].
pub fn count_roots_in(f: &QPoly, a: &Rat, b: &Rat) -> usize {
    let sf = f.squarefree_part();
    let chain = sturm_chain(&sf);
    sign_variations(&chain, a) - sign_variations(&chain, b)
}

/// A split point strictly inside (a, b) that is not a root of f.
fn non_root_split(f: &QPoly, a: &Rat, b: &Rat) -> Rat {
    let width = b - a;
    for k in 2.. {
        let m = a + width.clone() / rat_int(k);
        if !f.eval(&m).is_zero() {
            return m;
        }
    }
    unreachable!("polynomial has finitely many roots");
}

/// Isolating open intervals for the distinct real roots of f, in
/// increasing order. Each interval (a, b) has rational non-root endpoints
/// and contains exactly one real root; the input is replaced by its
/// squarefree part first. Consecutive intervals may share an endpoint.
pub fn isolate_real_roots(f: &QPoly) -> Vec<(Rat, Rat)> {
    assert!(!f.is_zero(), "root isolation of the zero polynomial");
    let sf = f.squarefree_part();
    if sf.is_constant() {
        return vec![];
    }
    let chain = sturm_chain(&sf);
    let m = cauchy_bound(&sf);
    let lo = -m.clone();
    let hi = m;
    let mut out = vec![];
    // Work stack of (a, b, variations at a, variations at b); depth-first
    // left-first keeps the output sorted.
    let va = sign_variations(&chain, &lo);
    let vb = sign_variations(&chain, &hi);
    let mut stack = vec![(lo, hi, va, vb)];
    while let Some((a, b, va, vb)) = stack.pop() {
        let n = va - vb;
        if n == 0 {
            continue;
        }
        if n == 1 {
            // Endpoints of the initial interval are beyond the Cauchy
            // bound and later split points are chosen off the roots, so
            // (a, b) is already an isolating open interval.
            out.push((a, b));
            continue;
        }
        let mid = non_root_split(&sf, &a, &b);
        let vm = sign_variations(&chain, &mid);
        // Push right first so the left half is processed first.
        stack.push((mid.clone(), b, vm, vb));
        stack.push((a, mid, va, vm));
    }
    out
}

/// The rational with the smallest denominator in the closed interval
/// [a, b] (ties broken toward zero), via Stern-Brocot descent.
pub fn simplest_rational_in(a: &Rat, b: &Rat) -> Rat {
    assert!(a <= b, "interval endpoints out of order");
    if a.is_negative() && !b.is_negative() {
        return rat_int(0);
    }
    if b.is_negative() {
        return -simplest_rational_in(&-b.clone(), &-a.clone());
    }
    // Now 0 <= a <= b.
    let ceil_a = a.ceil();
    if ceil_a <= b.floor() {
        return ceil_a;
    }
    let n = a.floor();
    let fa = a - &n;
    let fb = b - &n;
    if fa.is_zero() {
        return n;
    }
    // Recurse on the reciprocal of the fractional parts (order swaps).
    n + (rat_int(1) / simplest_rational_in(&(rat_int(1) / fb), &(rat_int(1) / fa)))
}

/// Convenience: does f have any real root at all (squarefree part)?
pub fn has_real_root(f: &QPoly) -> bool {
    !isolate_real_roots(f).is_empty()
}
