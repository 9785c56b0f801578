//! Square classes of rationals and square tests in quadratic fields.
//!
//! A nonzero rational q has a unique writing q = s * r^2 with s a
//! squarefree integer and r a positive rational; s is the square class.
//! Squares in Q(sqrt(d)) reduce to rational square tests through the norm
//! form: u + v sqrt(d) is a square iff u^2 - d v^2 = w^2 for some rational
//! w and (u + w)/2 or (u - w)/2 is a nonzero rational square (v != 0).

use crate::error::Error;
use crate::scalars::intfactor::{exact_sqrt, squarefree_part};
use crate::scalars::numberfield::{NfElem, NumberField};
use crate::scalars::{rat_int, Rat};
use crate::Result;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Squarefree integer s with q = s * (positive rational)^2. Errors on zero
/// or when an integer factorization inside exceeds its budget.
pub fn square_class(q: &Rat) -> Result<BigInt> {
    if q.is_zero() {
        return Err(Error::PolyInput("square class of zero requested".into()));
    }
    squarefree_part(&(q.numer() * q.denom()))
}

/// Decomposes q = s * r^2 with s squarefree and r > 0. Errors on zero.
pub fn rat_sqrt_decompose(q: &Rat) -> Result<(BigInt, Rat)> {
    let s = square_class(q)?;
    let ratio = q / Rat::from(s.clone());
    // ratio is a positive rational square by construction.
    let num = exact_sqrt(ratio.numer()).ok_or_else(|| {
        Error::Internal("square-part decomposition produced a non-square".into())
    })?;
    let den = exact_sqrt(ratio.denom()).ok_or_else(|| {
        Error::Internal("square-part decomposition produced a non-square".into())
    })?;
    Ok((s, Rat::new(num, den)))
}

/// True iff q is the square of a rational (zero counts).
pub fn rat_is_square(q: &Rat) -> bool {
    if q.is_zero() {
        return true;
    }
    if q.is_negative() {
        return false;
    }
    exact_sqrt(q.numer()).is_some() && exact_sqrt(q.denom()).is_some()
}

/// Exact rational square root when it exists.
pub fn rat_exact_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_zero() {
        return Some(rat_int(0));
    }
    if q.is_negative() {
        return None;
    }
    Some(Rat::new(exact_sqrt(q.numer())?, exact_sqrt(q.denom())?))
}

/// Square test for u + v*sqrt(d) in Q(sqrt(d)), d a non-square integer.
pub fn is_square_in_quadratic(u: &Rat, v: &Rat, d: &BigInt) -> bool {
    if v.is_zero() {
        if u.is_zero() {
            return true;
        }
        // u is a square of Q(sqrt d) iff u or u/d is a rational square.
        return rat_is_square(u) || rat_is_square(&(u / Rat::from(d.clone())));
    }
    // Norm condition: u^2 - d v^2 must be a rational square w^2; then a
    // square root x + y sqrt(d) has x^2 = (u +- w)/2.
    let norm = u * u - Rat::from(d.clone()) * v * v;
    let Some(w) = rat_exact_sqrt(&norm) else {
        return false;
    };
    let two = Rat::from(BigInt::from(2));
    for cand in [(u + &w) / &two, (u - &w) / &two] {
        if !cand.is_zero() && rat_is_square(&cand) {
            return true;
        }
    }
    false
}

/// Square test in a number field of degree 1 or 2; larger degrees are
/// reported as unsupported so callers can surface the limitation.
pub fn nf_is_square(k: &NumberField, e: &NfElem) -> Result<bool> {
    match k.degree() {
        1 => Ok(rat_is_square(&k.as_rat(e).expect("degree-1 element is rational"))),
        2 => {
            let (u, v, s) = k.sqrt_coordinates(e)?;
            Ok(is_square_in_quadratic(&u, &v, &s))
        }
        d => Err(Error::UnsupportedResidueField(format!(
            "square test needs degree <= 2, got degree {}",
            d
        ))),
    }
}

/// True iff a and b land in the same rational square class.
pub fn same_square_class(a: &Rat, b: &Rat) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::PolyInput("square-class comparison with zero".into()));
    }
    Ok(rat_is_square(&(a / b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::Field;
    use crate::scalars::rat;

    #[test]
    fn square_class_normalizes() {
        assert_eq!(square_class(&rat(8, 1)).unwrap(), BigInt::from(2));
        assert_eq!(square_class(&rat(-4, 9)).unwrap(), BigInt::from(-1));
        assert_eq!(square_class(&rat(12, 5)).unwrap(), BigInt::from(15));
        let (s, r) = rat_sqrt_decompose(&rat(12, 5)).unwrap();
        assert_eq!(s, BigInt::from(15));
        assert_eq!(rat(12, 5), Rat::from(s) * &r * &r);
        assert!(r.is_positive());
    }

    #[test]
    fn quadratic_square_detection() {
        let d = BigInt::from(2);
        // (1 + sqrt 2)^2 = 3 + 2 sqrt 2
        assert!(is_square_in_quadratic(&rat(3, 1), &rat(2, 1), &d));
        // sqrt(2) itself is not a square in Q(sqrt 2).
        assert!(!is_square_in_quadratic(&rat(0, 1), &rat(1, 1), &d));
        // 2 = (sqrt 2)^2 is a square even though it is not one in Q.
        assert!(is_square_in_quadratic(&rat(2, 1), &rat(0, 1), &d));
        assert!(!is_square_in_quadratic(&rat(3, 1), &rat(0, 1), &d));
        // -1 is not a square in a real quadratic field.
        assert!(!is_square_in_quadratic(&rat(-1, 1), &rat(0, 1), &d));
        // In Q(sqrt(-1)): 2i = (1 + i)^2.
        assert!(is_square_in_quadratic(
            &rat(0, 1),
            &rat(2, 1),
            &BigInt::from(-1)
        ));
    }

    #[test]
    fn nf_square_matches_direct_test() {
        let (k, s2) = NumberField::quadratic(&BigInt::from(2)).unwrap();
        let e = k.mul(
            &k.add(&k.one(), &s2),
            &k.add(&k.one(), &s2),
        );
        assert!(nf_is_square(&k, &e).unwrap());
        assert!(!nf_is_square(&k, &s2).unwrap());
    }

    #[test]
    fn zero_inputs_are_rejected_where_meaningless() {
        assert!(square_class(&rat(0, 1)).is_err());
        assert!(same_square_class(&rat(0, 1), &rat(1, 1)).is_err());
        assert!(same_square_class(&rat(18, 1), &rat(2, 1)).unwrap());
        assert!(!same_square_class(&rat(18, 1), &rat(3, 1)).unwrap());
    }
}
