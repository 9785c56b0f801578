//! Number fields Q[a]/(m(a)) for a monic irreducible m, with exact
//! arithmetic on elements represented by their reduced coordinate vectors.
//!
//! Degrees stay tiny here (at most 4: quadratic and biquadratic splitting
//! fields, cubic fields, residue fields of closed points), so the dense
//! representation and extended-gcd inversion are entirely adequate.

use crate::error::Error;
use crate::scalars::factor::is_irreducible_over_q;
use crate::scalars::field::Field;
use crate::scalars::poly::Poly;
use crate::scalars::{rat, rat_int, QPoly, Rat, Rationals};
use crate::Result;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

/// Element of a number field: coordinates in the power basis
/// 1, a, ..., a^(deg-1), always of length exactly deg.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NfElem(pub Vec<Rat>);

/// Field descriptor for Q[a]/(minpoly).
#[derive(Clone, Debug)]
pub struct NumberField {
    minpoly: Arc<QPoly>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}
impl Eq for NumberField {}

impl NumberField {
    /// Builds the field, verifying the modulus is monic irreducible of
    /// degree >= 1. Degree 1 is allowed and behaves like Q.
    pub fn new(minpoly: QPoly) -> Result<Self> {
        let deg = minpoly
            .degree()
            .ok_or_else(|| Error::PolyInput("number field modulus is zero".into()))?;
        if deg < 1 {
            return Err(Error::PolyInput("number field modulus is constant".into()));
        }
        if minpoly.leading() != Some(&rat(1, 1)) {
            return Err(Error::PolyInput("number field modulus must be monic".into()));
        }
        if deg > 1 && !is_irreducible_over_q(&minpoly)? {
            return Err(Error::PolyInput(format!(
                "number field modulus {} is reducible",
                minpoly
            )));
        }
        Ok(NumberField {
            minpoly: Arc::new(minpoly),
        })
    }

    /// Q(sqrt(d)) for a non-square integer d; second component is sqrt(d).
    pub fn quadratic(d: &BigInt) -> Result<(Self, NfElem)> {
        let m = Poly::new(
            Rationals,
            vec![Rat::from(-d.clone()), rat_int(0), rat_int(1)],
        );
        let k = Self::new(m)?;
        let s = k.gen();
        Ok((k, s))
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg0()
    }

    /// The class of the variable; for degree 1 this is the rational root.
    pub fn gen(&self) -> NfElem {
        if self.degree() == 1 {
            let root = self.minpoly.coeff(0).clone() * rat(-1, 1);
            return NfElem(vec![root]);
        }
        let mut v = vec![rat_int(0); self.degree()];
        v[1] = rat_int(1);
        NfElem(v)
    }

    pub fn from_rat(&self, q: Rat) -> NfElem {
        let mut v = vec![rat_int(0); self.degree()];
        v[0] = q;
        NfElem(v)
    }

    /// Reduces an arbitrary polynomial in the generator.
    pub fn from_poly(&self, f: &QPoly) -> NfElem {
        let r = f.rem(&self.minpoly);
        let mut v = r.coeffs().to_vec();
        v.resize(self.degree(), rat_int(0));
        NfElem(v)
    }

    pub fn to_poly(&self, e: &NfElem) -> QPoly {
        Poly::new(Rationals, e.0.clone())
    }

    /// Evaluates a rational polynomial at a field element.
    pub fn eval_qpoly(&self, f: &QPoly, x: &NfElem) -> NfElem {
        let mut acc = self.zero();
        for c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.from_rat(c.clone()));
        }
        acc
    }

    /// The rational value of an element that lies in Q, if it does.
    pub fn as_rat(&self, e: &NfElem) -> Option<Rat> {
        if e.0.iter().skip(1).all(|c| c.is_zero()) {
            Some(e.0[0].clone())
        } else {
            None
        }
    }

    /// Nontrivial field automorphism of a degree-2 field:
    /// the generator maps to the other root -b - a of x^2 + bx + c.
    pub fn conjugate_quadratic(&self, e: &NfElem) -> NfElem {
        assert_eq!(self.degree(), 2, "conjugation needs a quadratic field");
        let b = self.minpoly.coeff(1).clone();
        // u + v*a -> u - v*b - v*a
        let u = e.0[0].clone();
        let v = e.0[1].clone();
        NfElem(vec![u - v.clone() * b, -v])
    }

    /// Norm down to Q of a quadratic-field element.
    pub fn norm_quadratic(&self, e: &NfElem) -> Rat {
        let c = self.conjugate_quadratic(e);
        let n = self.mul(e, &c);
        self.as_rat(&n)
            .expect("norm of a quadratic element is rational")
    }

    /// Trace down to Q of a quadratic-field element.
    pub fn trace_quadratic(&self, e: &NfElem) -> Rat {
        let c = self.conjugate_quadratic(e);
        let s = self.add(e, &c);
        self.as_rat(&s)
            .expect("trace of a quadratic element is rational")
    }

    /// Writes a quadratic-field element as U + V*sqrt(s) with s the
    /// squarefree part of the discriminant of the minimal polynomial.
    /// Returns (U, V, s).
    pub fn sqrt_coordinates(&self, e: &NfElem) -> Result<(Rat, Rat, BigInt)> {
        assert_eq!(self.degree(), 2);
        let b = self.minpoly.coeff(1).clone();
        let c = self.minpoly.coeff(0).clone();
        let disc = b.clone() * b.clone() - rat(4, 1) * c;
        let (s, r) = super::squares::rat_sqrt_decompose(&disc)?;
        // a = (-b + r*sqrt(s)) / 2, so u + v*a = (u - v*b/2) + (v*r/2) sqrt(s).
        let u = e.0[0].clone();
        let v = e.0[1].clone();
        let big_u = u - v.clone() * b / rat(2, 1);
        let big_v = v * r / rat(2, 1);
        Ok((big_u, big_v, s))
    }
}

impl Field for NumberField {
    type Elem = NfElem;

    fn zero(&self) -> NfElem {
        NfElem(vec![rat_int(0); self.degree()])
    }

    fn one(&self) -> NfElem {
        self.from_rat(rat_int(1))
    }

    fn from_i64(&self, n: i64) -> NfElem {
        self.from_rat(rat_int(n))
    }

    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        )
    }

    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.clone() - y.clone())
                .collect(),
        )
    }

    fn neg(&self, a: &NfElem) -> NfElem {
        NfElem(a.0.iter().map(|x| -x.clone()).collect())
    }

    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        let pa = self.to_poly(a);
        let pb = self.to_poly(b);
        self.from_poly(&pa.mul(&pb))
    }

    fn inv(&self, a: &NfElem) -> Option<NfElem> {
        if self.is_zero(a) {
            return None;
        }
        // Extended gcd of a(t) with the irreducible modulus is a unit.
        let mut r0 = self.minpoly.as_ref().clone();
        let mut r1 = self.to_poly(a);
        let mut t0: QPoly = Poly::zero(Rationals);
        let mut t1: QPoly = Poly::constant(Rationals, rat_int(1));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let tn = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = tn;
        }
        // r0 = gcd (a nonzero constant, since the modulus is irreducible).
        let c = r0.coeff(0).clone();
        debug_assert!(r0.is_constant() && !c.is_zero());
        let inv = t0.scale(&(rat_int(1) / c));
        let out = self.from_poly(&inv);
        debug_assert!(self.is_one(&self.mul(a, &out)));
        Some(out)
    }

    fn is_zero(&self, a: &NfElem) -> bool {
        a.0.iter().all(|c| c.is_zero())
    }

    fn elem_to_string(&self, a: &NfElem) -> String {
        self.to_poly(a).to_string_var("a")
    }
}

impl super::field::ExactSqrt for NumberField {
    /// Constructive square roots for degree <= 2; in Q(sqrt(s)) a root
    /// of U + V*sqrt(s) is recovered from the rational square root of
    /// the norm U^2 - s V^2.
    fn sqrt_elem(&self, e: &NfElem) -> crate::Result<Option<NfElem>> {
        use super::squares::{rat_exact_sqrt, rat_sqrt_decompose};
        if self.is_zero(e) {
            return Ok(Some(self.zero()));
        }
        match self.degree() {
            1 => Ok(rat_exact_sqrt(&self.as_rat(e).expect("degree-1 element is rational"))
                .map(|r| self.from_rat(r))),
            2 => {
                let (u, v, s) = self.sqrt_coordinates(e)?;
                let sd = Rat::from(s);
                let two = rat_int(2);
                let mut root_uv: Option<(Rat, Rat)> = None;
                if v.is_zero() {
                    if let Some(x) = rat_exact_sqrt(&u) {
                        root_uv = Some((x, rat_int(0)));
                    } else if let Some(y) = rat_exact_sqrt(&(&u / &sd)) {
                        root_uv = Some((rat_int(0), y));
                    }
                } else if let Some(w) = rat_exact_sqrt(&(&u * &u - &sd * &v * &v)) {
                    // (x + y sqrt(s))^2 = e forces x^2 = (u +- w)/2,
                    // then y = v / 2x.
                    for cand in [(&u + &w) / &two, (&u - &w) / &two] {
                        if cand.is_zero() {
                            continue;
                        }
                        if let Some(x) = rat_exact_sqrt(&cand) {
                            let y = &v / (&two * &x);
                            root_uv = Some((x, y));
                            break;
                        }
                    }
                }
                let Some((x, y)) = root_uv else {
                    return Ok(None);
                };
                // Back to the power basis: sqrt(s) = (2a + b)/r where
                // a is the generator and b^2 - 4c = r^2 s.
                let b = self.minpoly.coeff(1).clone();
                let c = self.minpoly.coeff(0).clone();
                let disc = b.clone() * b.clone() - rat_int(4) * c;
                let (_, r) = rat_sqrt_decompose(&disc)?;
                let root = NfElem(vec![x + &y * &b / &r, &two * &y / &r]);
                debug_assert_eq!(self.mul(&root, &root), *e);
                Ok(Some(root))
            }
            d => Err(crate::Error::Precondition(format!(
                "exact square roots need a number field of degree <= 2, got degree {}",
                d
            ))),
        }
    }
}

/// Pretty form "U + V*sqrt(s)" used in reports for quadratic data.
pub fn quadratic_display(u: &Rat, v: &Rat, s: &BigInt) -> String {
    if v.is_zero() {
        return format!("{}", u);
    }
    let vs = if v.is_one() {
        format!("sqrt({})", s)
    } else if (-v.clone()).is_one() {
        format!("-sqrt({})", s)
    } else {
        format!("{}*sqrt({})", v, s)
    };
    if u.is_zero() {
        vs
    } else if v.is_negative() {
        format!("{} - {}", u, vs.trim_start_matches('-'))
    } else {
        format!("{} + {}", u, vs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(cs: &[i64]) -> QPoly {
        Poly::from_i64(Rationals, cs)
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(NumberField::new(qp(&[-1, 0, 1])).is_err()); // x^2 - 1
        assert!(NumberField::new(qp(&[0, 1]).scale(&rat(2, 1))).is_err()); // not monic
    }

    #[test]
    fn sqrt2_arithmetic() {
        let (k, s) = NumberField::quadratic(&BigInt::from(2)).unwrap();
        let two = k.mul(&s, &s);
        assert_eq!(k.as_rat(&two), Some(rat(2, 1)));
        let inv = k.inv(&s).unwrap();
        // 1/sqrt(2) = sqrt(2)/2
        assert_eq!(inv, NfElem(vec![rat_int(0), rat(1, 2)]));
        assert_eq!(k.norm_quadratic(&s), rat(-2, 1));
        assert_eq!(k.trace_quadratic(&s), rat(0, 1));
    }

    #[test]
    fn cubic_inverse_roundtrip() {
        // x^3 - 3x - 1: cyclic cubic.
        let k = NumberField::new(qp(&[-1, -3, 0, 1])).unwrap();
        let a = k.gen();
        let e = k.add(&k.mul(&a, &a), &k.from_i64(2)); // a^2 + 2
        let inv = k.inv(&e).unwrap();
        assert!(k.is_one(&k.mul(&e, &inv)));
        // The generator satisfies its minimal polynomial.
        let val = k.eval_qpoly(&qp(&[-1, -3, 0, 1]), &a);
        assert!(k.is_zero(&val));
    }

    #[test]
    fn sqrt_coordinates_of_shifted_generator() {
        // x^2 + 2x - 1 has roots -1 +- sqrt(2).
        let k = NumberField::new(qp(&[-1, 2, 1])).unwrap();
        let a = k.gen();
        let (u, v, s) = k.sqrt_coordinates(&a).unwrap();
        assert_eq!((u, v, s), (rat(-1, 1), rat(1, 1), BigInt::from(2)));
    }

    #[test]
    fn degree_one_field_behaves_like_q() {
        let k = NumberField::new(qp(&[-5, 1])).unwrap(); // x - 5
        assert_eq!(k.as_rat(&k.gen()), Some(rat(5, 1)));
        let e = k.from_rat(rat(3, 7));
        assert_eq!(k.as_rat(&k.inv(&e).unwrap()), Some(rat(7, 3)));
    }
}
