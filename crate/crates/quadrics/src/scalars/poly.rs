//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored lowest degree first with no trailing zeros; the
//! zero polynomial has an empty coefficient vector. Degree is `None` for
//! zero, matching the convention deg 0 = nonzero constant.

use crate::scalars::field::Field;

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    pub field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        Poly { field, coeffs: vec![] }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    pub fn one(field: F) -> Self {
        let c = field.one();
        Poly::new(field, vec![c])
    }

    /// The monomial t.
    pub fn x(field: F) -> Self {
        let (z, o) = (field.zero(), field.one());
        Poly::new(field, vec![z, o])
    }

    pub fn from_i64(field: F, coeffs: &[i64]) -> Self {
        let v = coeffs.iter().map(|&c| field.from_i64(c)).collect();
        Poly::new(field, v)
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    /// Coefficient of t^i (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree with deg(0) = 0; convenient for size math.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = &self.field;
        let v = (0..n)
            .map(|i| f.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Poly::new(self.field.clone(), v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = &self.field;
        let v = (0..n)
            .map(|i| f.sub(&self.coeff(i), &other.coeff(i)))
            .collect();
        Poly::new(self.field.clone(), v)
    }

    pub fn neg(&self) -> Self {
        let v = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        Poly::new(self.field.clone(), v)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let v = self.coeffs.iter().map(|a| self.field.mul(a, c)).collect();
        Poly::new(self.field.clone(), v)
    }

    /// Multiply by t^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(self.field.clone(), v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field.clone());
        }
        let f = &self.field;
        let mut v = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(a, b));
            }
        }
        Poly::new(self.field.clone(), v)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; panics on zero divisor (caller's contract).
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = self.field.clone();
        let dl = d.coeffs.len();
        if self.coeffs.len() < dl {
            return (Poly::zero(f), self.clone());
        }
        let lcinv = f.inv(d.leading().unwrap()).expect("unit leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - dl + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dl - 1].clone();
            if f.is_zero(&top) {
                continue;
            }
            let q = f.mul(&top, &lcinv);
            for i in 0..dl {
                let s = f.mul(&q, &d.coeffs[i]);
                rem[k + i] = f.sub(&rem[k + i], &s);
            }
            quot[k] = q;
        }
        (Poly::new(f.clone(), quot), Poly::new(f, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.field.clone());
        }
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        Poly::new(self.field.clone(), v)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// Largest squarefree divisor f / gcd(f, f'); characteristic-0 use only.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() || self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut parts = vec![];
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.elem_to_string(c);
            let term = match i {
                0 => cs,
                1 if f.is_one(c) => var.to_string(),
                1 => format!("{cs}*{var}"),
                _ if f.is_one(c) => format!("{var}^{i}"),
                _ => format!("{cs}*{var}^{i}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl<F: Field> std::fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_string_var("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::Rationals;

    fn p(coeffs: &[i64]) -> Poly<Rationals> {
        Poly::from_i64(Rationals, coeffs)
    }

    #[test]
    fn divrem_reconstructs() {
        let a = p(&[2, 0, -3, 1, 5]);
        let b = p(&[1, 4, 2]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg0() < b.deg0());
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[-1, 1]); // t - 1
        let b = p(&[1, 1]); // t + 1
        let c = p(&[-2, 1]); // t - 2
        let g = a.mul(&b).gcd(&a.mul(&c));
        assert_eq!(g, a.monic());
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let f = p(&[-1, 1]).pow(3).mul(&p(&[1, 1]));
        assert_eq!(f.squarefree_part(), p(&[-1, 1]).mul(&p(&[1, 1])).monic());
    }

    #[test]
    fn eval_horner() {
        let f = p(&[1, -2, 1]); // (t-1)^2
        assert_eq!(f.eval(&crate::scalars::rat_int(3)), crate::scalars::rat_int(4));
        assert!(f.eval(&crate::scalars::rat_int(1)) == crate::scalars::rat_int(0));
    }

    #[test]
    fn zero_polynomial_degree_is_none() {
        assert_eq!(p(&[]).degree(), None);
        assert_eq!(p(&[0]).degree(), None);
        assert_eq!(p(&[7]).degree(), Some(0));
    }
}
