//! Splitting fields for the root sets arising from the four-rank-6 case:
//! every root of a list of irreducible rational polynomials is expressed
//! inside a single number field of degree at most 4.
//!
//! Supported shapes: rational roots only; one quadratic extension; two
//! quadratic extensions (primitive element sqrt(d1) + sqrt(d2)); a cubic
//! with square discriminant (cyclic, so the cubic field already splits
//! it); an irreducible quartic with Klein four Galois action (by Euler's
//! resolvent). Cubics with nonsquare discriminant and quartics with
//! larger Galois groups are rejected with a dedicated error rather than
//! silently extending to degree > 4. Every claimed root is verified
//! exactly against its polynomial before return.

use crate::error::Error;
use crate::scalars::factor::factor_over_q;
use crate::scalars::field::Field;
use crate::scalars::numberfield::{NfElem, NumberField};
use crate::scalars::poly::Poly;
use crate::scalars::squares::{rat_exact_sqrt, rat_is_square, rat_sqrt_decompose};
use crate::scalars::{rat, rat_int, QPoly, Rat, Rationals};
use crate::Result;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A common field containing every root of the input polynomials, with
/// the roots listed in input-polynomial order.
#[derive(Clone, Debug)]
pub struct SplitRoots {
    pub field: NumberField,
    pub roots: Vec<NfElem>,
}

/// Builds the splitting data for a list of distinct irreducible monic
/// polynomials whose degrees sum to at most 4.
pub fn split_roots(parts: &[QPoly]) -> Result<SplitRoots> {
    let degs: Vec<usize> = parts.iter().map(|q| q.deg0()).collect();
    let total: usize = degs.iter().sum();
    if total > 4 {
        return Err(Error::SplittingFieldUnsupported(format!(
            "root count {} exceeds 4",
            total
        )));
    }
    let max_deg = degs.iter().copied().max().unwrap_or(0);

    let out = match max_deg {
        0 => SplitRoots {
            field: trivial_field()?,
            roots: vec![],
        },
        1 => {
            let field = trivial_field()?;
            let roots = parts
                .iter()
                .map(|q| field.from_rat(-q.coeff(0).clone()))
                .collect();
            SplitRoots { field, roots }
        }
        2 => split_with_quadratics(parts)?,
        3 => split_with_cubic(parts)?,
        4 => split_quartic(&parts[0])?,
        _ => unreachable!(),
    };

    // Exact verification: each polynomial vanishes on its claimed roots,
    // and the roots are pairwise distinct.
    let mut idx = 0;
    for q in parts {
        for _ in 0..q.deg0() {
            let v = out.field.eval_qpoly(q, &out.roots[idx]);
            if !out.field.is_zero(&v) {
                return Err(Error::Internal(format!(
                    "claimed root {} of {} does not vanish",
                    out.field.elem_to_string(&out.roots[idx]),
                    q
                )));
            }
            idx += 1;
        }
    }
    for i in 0..out.roots.len() {
        for j in 0..i {
            if out.roots[i] == out.roots[j] {
                return Err(Error::Internal("repeated root in splitting data".into()));
            }
        }
    }
    Ok(SplitRoots {
        field: out.field,
        roots: out.roots,
    })
}

/// Q itself, presented as the degree-1 field Q[x]/(x).
fn trivial_field() -> Result<NumberField> {
    NumberField::new(Poly::new(Rationals, vec![rat_int(0), rat_int(1)]))
}

/// Roots of an irreducible quadratic inside a field containing sqrt(d),
/// where d is the squarefree part of its discriminant.
fn quadratic_roots(
    k: &NumberField,
    sqrt_d: &NfElem,
    q: &QPoly,
) -> Result<(NfElem, NfElem)> {
    let b = q.coeff(1).clone();
    let c = q.coeff(0).clone();
    let disc = b.clone() * b.clone() - rat(4, 1) * c;
    let (_, m) = rat_sqrt_decompose(&disc)?;
    // roots = (-b +- m*sqrt(d)) / 2
    let half = k.from_rat(rat(1, 2));
    let mb = k.from_rat(-b);
    let ms = k.mul(&k.from_rat(m), sqrt_d);
    let r1 = k.mul(&k.add(&mb, &ms), &half);
    let r2 = k.mul(&k.sub(&mb, &ms), &half);
    Ok((r1, r2))
}

fn split_with_quadratics(parts: &[QPoly]) -> Result<SplitRoots> {
    // Discriminant square classes of the quadratic factors.
    let mut classes: Vec<BigInt> = vec![];
    for q in parts.iter().filter(|q| q.deg0() == 2) {
        let b = q.coeff(1).clone();
        let c = q.coeff(0).clone();
        let disc = b.clone() * b - rat(4, 1) * c;
        let (d, _) = rat_sqrt_decompose(&disc)?;
        if !classes.contains(&d) {
            classes.push(d);
        }
    }
    let (field, sqrts): (NumberField, Vec<(BigInt, NfElem)>) = match classes.len() {
        1 => {
            let d = classes[0].clone();
            let (k, s) = NumberField::quadratic(&d)?;
            (k, vec![(d, s)])
        }
        2 => biquadratic(&classes[0], &classes[1])?,
        n => {
            return Err(Error::SplittingFieldUnsupported(format!(
                "{} distinct quadratic extensions needed",
                n
            )))
        }
    };
    let mut roots = vec![];
    for q in parts {
        if q.deg0() == 1 {
            roots.push(field.from_rat(-q.coeff(0).clone()));
            continue;
        }
        let b = q.coeff(1).clone();
        let c = q.coeff(0).clone();
        let disc = b.clone() * b - rat(4, 1) * c;
        let (d, _) = rat_sqrt_decompose(&disc)?;
        let s = &sqrts.iter().find(|(dd, _)| dd == &d).expect("class collected").1;
        let (r1, r2) = quadratic_roots(&field, s, q)?;
        roots.push(r1);
        roots.push(r2);
    }
    Ok(SplitRoots { field, roots })
}

/// Q(sqrt(d1), sqrt(d2)) as Q(beta), beta = sqrt(d1) + sqrt(d2), for
/// distinct squarefree non-squares. Returns the field and both square
/// roots as elements.
fn biquadratic(d1: &BigInt, d2: &BigInt) -> Result<(NumberField, Vec<(BigInt, NfElem)>)> {
    let d1r = Rat::from(d1.clone());
    let d2r = Rat::from(d2.clone());
    // minimal polynomial x^4 - 2(d1+d2)x^2 + (d1-d2)^2
    let sum = &d1r + &d2r;
    let diff = &d1r - &d2r;
    let minpoly = Poly::new(
        Rationals,
        vec![
            &diff * &diff,
            rat_int(0),
            rat(-2, 1) * sum,
            rat_int(0),
            rat_int(1),
        ],
    );
    let k = NumberField::new(minpoly)?;
    let beta = k.gen();
    // sqrt(d1) = (beta^3 - (3 d1 + d2) beta) / (2 (d2 - d1))
    let beta3 = k.mul(&beta, &k.mul(&beta, &beta));
    let coef = k.from_rat(rat(3, 1) * &d1r + &d2r);
    let num = k.sub(&beta3, &k.mul(&coef, &beta));
    let den = k.from_rat(rat(2, 1) * (&d2r - &d1r));
    let s1 = k.mul(&num, &k.inv(&den).expect("d1 != d2"));
    let s2 = k.sub(&beta, &s1);
    for (s, d) in [(&s1, &d1r), (&s2, &d2r)] {
        let sq = k.mul(s, s);
        if k.as_rat(&sq) != Some(d.clone()) {
            return Err(Error::Internal("square root extraction failed".into()));
        }
    }
    Ok((k, vec![(d1.clone(), s1), (d2.clone(), s2)]))
}

fn split_with_cubic(parts: &[QPoly]) -> Result<SplitRoots> {
    let cubic = parts
        .iter()
        .find(|q| q.deg0() == 3)
        .expect("caller checked a cubic is present");
    if parts.iter().any(|q| q.deg0() == 2) {
        return Err(Error::SplittingFieldUnsupported(
            "cubic and quadratic factors together need degree 6".into(),
        ));
    }
    let a = cubic.coeff(2).clone();
    let b = cubic.coeff(1).clone();
    let c = cubic.coeff(0).clone();
    // disc = 18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2
    let disc = rat(18, 1) * &a * &b * &c - rat(4, 1) * &a * &a * &a * &c
        + &a * &a * &b * &b
        - rat(4, 1) * &b * &b * &b
        - rat(27, 1) * &c * &c;
    let Some(d) = rat_exact_sqrt(&disc) else {
        return Err(Error::SplittingFieldTooLarge(
            "cubic factor with nonsquare discriminant splits in degree 6".into(),
        ));
    };
    let k = NumberField::new(cubic.clone())?;
    let theta = k.gen();
    // Other roots: ((-a - theta) +- sqrt(disc)/cubic'(theta)) / 2.
    let deriv = k.eval_qpoly(&cubic.derivative(), &theta);
    let dinv = k.inv(&deriv).expect("separable root");
    let sum = k.sub(&k.from_rat(-a), &theta);
    let quot = k.mul(&k.from_rat(d), &dinv);
    let half = k.from_rat(rat(1, 2));
    let theta2 = k.mul(&k.add(&sum, &quot), &half);
    let theta3 = k.sub(&sum, &theta2);
    let mut roots = vec![];
    for q in parts {
        if q.deg0() == 1 {
            roots.push(k.from_rat(-q.coeff(0).clone()));
        } else {
            roots.push(theta.clone());
            roots.push(theta2.clone());
            roots.push(theta3.clone());
        }
    }
    Ok(SplitRoots { field: k, roots })
}

fn split_quartic(q: &QPoly) -> Result<SplitRoots> {
    assert_eq!(q.deg0(), 4);
    let a3 = q.coeff(3).clone();
    let a2 = q.coeff(2).clone();
    let a1 = q.coeff(1).clone();
    let a0 = q.coeff(0).clone();
    // Depressed form y^4 + p y^2 + qq y + r, x = y - a3/4.
    let p = &a2 - rat(3, 8) * &a3 * &a3;
    let qq = &a1 - rat(1, 2) * &a3 * &a2 + rat(1, 8) * &a3 * &a3 * &a3;
    let r = &a0 - rat(1, 4) * &a3 * &a1 + rat(1, 16) * &a3 * &a3 * &a2
        - rat(3, 256) * &a3 * &a3 * &a3 * &a3;
    let shift = rat(1, 4) * &a3;

    if qq.is_zero() {
        // Biquadratic: y^2 solves z^2 + pz + r.
        if let Some(rho) = rat_exact_sqrt(&r) {
            // Klein four action; all roots live in Q[x]/(q).
            let k = NumberField::new(q.clone())?;
            let x1 = k.gen();
            let y1 = k.add(&x1, &k.from_rat(shift.clone()));
            let y1inv = k.inv(&y1).expect("root of irreducible quartic is nonzero");
            let y3 = k.mul(&k.from_rat(rho), &y1inv);
            let sh = k.from_rat(shift);
            let roots = vec![
                x1,
                k.sub(&k.neg(&y1), &sh),
                k.sub(&y3, &sh),
                k.sub(&k.neg(&y3), &sh),
            ];
            return Ok(SplitRoots { field: k, roots });
        }
        let disc2 = &p * &p - rat(4, 1) * &r;
        if rat_is_square(&(&r * &disc2)) {
            return Err(Error::SplittingFieldUnsupported(
                "cyclic quartic; root expressions not constructed".into(),
            ));
        }
        return Err(Error::SplittingFieldTooLarge(
            "dihedral quartic splits in degree 8".into(),
        ));
    }

    // Euler resolvent z^3 + 2p z^2 + (p^2 - 4r) z - qq^2; its roots are
    // the squares of (y_i + y_j)/1 pairings and multiply to qq^2.
    let resolvent = Poly::new(
        Rationals,
        vec![
            -(&qq * &qq),
            &p * &p - rat(4, 1) * &r,
            rat(2, 1) * &p,
            rat_int(1),
        ],
    );
    let (_, rfac) = factor_over_q(&resolvent)?;
    let linear: Vec<Rat> = rfac
        .iter()
        .filter(|(f, _)| f.deg0() == 1)
        .map(|(f, _)| -f.coeff(0).clone())
        .collect();
    match linear.len() {
        3 => {}
        1 => {
            return Err(Error::SplittingFieldUnsupported(
                "cyclic or dihedral quartic; root expressions not constructed".into(),
            ))
        }
        _ => {
            return Err(Error::SplittingFieldTooLarge(
                "quartic with alternating or symmetric action splits in degree 12 or 24"
                    .into(),
            ))
        }
    }
    let (s1, m1) = rat_sqrt_decompose(&linear[0])?;
    let (s2, m2) = rat_sqrt_decompose(&linear[1])?;
    if s1.is_one() || s2.is_one() || s1 == s2 {
        return Err(Error::Internal(
            "resolvent square classes degenerate for an irreducible quartic".into(),
        ));
    }
    let (k, sqrts) = biquadratic(&s1, &s2)?;
    let w1 = k.mul(&k.from_rat(m1), &sqrts[0].1);
    let w2 = k.mul(&k.from_rat(m2), &sqrts[1].1);
    // Third square root pinned by w1 w2 w3 = -qq.
    let prod_inv = k.inv(&k.mul(&w1, &w2)).expect("nonzero");
    let w3 = k.mul(&k.from_rat(-qq), &prod_inv);
    let z3 = k.mul(&w3, &w3);
    if k.as_rat(&z3) != Some(linear[2].clone()) {
        return Err(Error::Internal("resolvent root mismatch".into()));
    }
    let half = k.from_rat(rat(1, 2));
    let sh = k.from_rat(shift);
    let mut roots = vec![];
    for (e1, e2, e3) in [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)] {
        let sgn = |w: &NfElem, e: i32| if e > 0 { w.clone() } else { k.neg(w) };
        let y = k.mul(
            &k.add(&k.add(&sgn(&w1, e1), &sgn(&w2, e2)), &sgn(&w3, e3)),
            &half,
        );
        roots.push(k.sub(&y, &sh));
    }
    Ok(SplitRoots { field: k, roots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(cs: &[i64]) -> QPoly {
        Poly::from_i64(Rationals, cs)
    }

    #[test]
    fn rational_roots_only() {
        let s = split_roots(&[qp(&[-1, 1]), qp(&[-2, 1]), qp(&[3, 1])]).unwrap();
        assert_eq!(s.field.degree(), 1);
        let vals: Vec<Rat> = s.roots.iter().map(|r| s.field.as_rat(r).unwrap()).collect();
        assert_eq!(vals, vec![rat(1, 1), rat(2, 1), rat(-3, 1)]);
    }

    #[test]
    fn one_quadratic_with_rationals() {
        let s = split_roots(&[qp(&[-5, 1]), qp(&[-2, 0, 1])]).unwrap();
        assert_eq!(s.field.degree(), 2);
        assert_eq!(s.roots.len(), 3);
        // The two conjugate roots sum to zero.
        let sum = s.field.add(&s.roots[1], &s.roots[2]);
        assert!(s.field.is_zero(&sum));
    }

    #[test]
    fn two_quadratics_same_class_share_a_field() {
        // x^2 - 2 and x^2 - 8 both need sqrt(2).
        let s = split_roots(&[qp(&[-2, 0, 1]), qp(&[-8, 0, 1])]).unwrap();
        assert_eq!(s.field.degree(), 2);
        assert_eq!(s.roots.len(), 4);
    }

    #[test]
    fn two_quadratics_distinct_classes_need_degree_4() {
        let s = split_roots(&[qp(&[-3, 0, 1]), qp(&[-5, 0, 1])]).unwrap();
        assert_eq!(s.field.degree(), 4);
        assert_eq!(s.roots.len(), 4);
        // sqrt(3)^2 = 3 inside the biquadratic field.
        let sq = s.field.mul(&s.roots[0], &s.roots[0]);
        assert_eq!(s.field.as_rat(&sq), Some(rat(3, 1)));
    }

    #[test]
    fn cyclic_cubic_splits_in_its_own_field() {
        // x^3 - 3x - 1: discriminant 81.
        let s = split_roots(&[qp(&[-1, -3, 0, 1])]).unwrap();
        assert_eq!(s.field.degree(), 3);
        assert_eq!(s.roots.len(), 3);
        // Roots sum to zero (no x^2 term).
        let sum = s
            .field
            .add(&s.roots[0], &s.field.add(&s.roots[1], &s.roots[2]));
        assert!(s.field.is_zero(&sum));
    }

    #[test]
    fn generic_cubic_is_rejected_as_too_large() {
        // x^3 - 2: discriminant -108, not a square.
        let e = split_roots(&[qp(&[-2, 0, 0, 1])]);
        assert!(matches!(e, Err(Error::SplittingFieldTooLarge(_))));
    }

    #[test]
    fn biquadratic_quartic_with_square_constant() {
        // x^4 - 14x^2 + 9 = minpoly of sqrt(2) + sqrt(5); V4 with r = 9.
        let s = split_roots(&[qp(&[9, 0, -14, 0, 1])]).unwrap();
        assert_eq!(s.field.degree(), 4);
        assert_eq!(s.roots.len(), 4);
    }

    #[test]
    fn shifted_v4_quartic_goes_through_the_resolvent() {
        // (x-1) shift of x^4 - 10x^2 + 1: still V4, but with a cubic term,
        // so the Euler resolvent path is exercised.
        let base = qp(&[1, 0, -10, 0, 1]);
        let shift = qp(&[1, 1]); // x + 1
        // compose: base(x+1)
        let mut comp = Poly::zero(Rationals);
        for (i, c) in base.coeffs().iter().enumerate() {
            comp = comp.add(&shift.pow(i as u32).scale(c));
        }
        let s = split_roots(&[comp.clone()]).unwrap();
        assert_eq!(s.field.degree(), 4);
        for r in &s.roots {
            assert!(s.field.is_zero(&s.field.eval_qpoly(&comp, r)));
        }
    }

    #[test]
    fn cyclic_quartic_is_unsupported() {
        // x^4 + x^3 + x^2 + x + 1 (5th cyclotomic): C4.
        let e = split_roots(&[qp(&[1, 1, 1, 1, 1])]);
        assert!(matches!(e, Err(Error::SplittingFieldUnsupported(_))));
    }

    #[test]
    fn generic_quartic_is_too_large() {
        // x^4 - x - 1 has Galois group S4.
        let e = split_roots(&[qp(&[-1, -1, 0, 0, 1])]);
        assert!(matches!(e, Err(Error::SplittingFieldTooLarge(_))));
    }
}
