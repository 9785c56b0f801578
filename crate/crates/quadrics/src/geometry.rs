//! Geometric constructions on the intersection X = {F = G = 0}: tangent
//! spaces at smooth points, the dual quadric A B^{-1} A and the tangency
//! correspondence, cone sections, quadrilateral detection for pairs of
//! singular lines, and finite-field enumeration of points and isotropic
//! subspaces.
//!
//! Everything is exact. Functions are generic over the coefficient field
//! where the construction is field-agnostic; the cone section works on a
//! rational pencil because it consults member ranks.

use crate::forms::{Mat, QuadraticForm, Subspace};
use crate::par;
use crate::pencil::Pencil;
use crate::scalars::{ExactSqrt, Field, FiniteField, Fp, Fq, Rat, Rationals};
use crate::{Error, Result};
use num_traits::Zero;

/// Projective point, stored canonically: the first nonzero coordinate
/// is 1, so data equality is projective equality.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint<F: Field> {
    field: F,
    coords: Vec<F::Elem>,
}

impl<F: Field> ProjPoint<F> {
    pub fn new(field: F, coords: Vec<F::Elem>) -> Result<Self> {
        let lead = coords
            .iter()
            .position(|c| !field.is_zero(c))
            .ok_or_else(|| Error::Precondition("zero vector is not a projective point".into()))?;
        let inv = field.inv(&coords[lead]).expect("nonzero leading coordinate");
        let coords = coords.iter().map(|c| field.mul(c, &inv)).collect();
        Ok(ProjPoint { field, coords })
    }

    pub fn from_i64(field: F, coords: &[i64]) -> Result<Self> {
        let coords = coords.iter().map(|&c| field.from_i64(c)).collect();
        Self::new(field, coords)
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn field(&self) -> &F {
        &self.field
    }
}

/// Tangent space to X = {f = g = 0} at a smooth point: the kernel of
/// the 2 x n Jacobian (rows A_f p and A_g p; the factor 2 is dropped,
/// which changes nothing away from characteristic 2).
pub fn tangent_space<F: Field>(
    f: &QuadraticForm<F>,
    g: &QuadraticForm<F>,
    p: &ProjPoint<F>,
) -> Result<Subspace<F>> {
    let field = f.field().clone();
    if field.char_is_two() {
        return Err(Error::Precondition(
            "tangent spaces are not defined in characteristic 2".into(),
        ));
    }
    if f.dim() != g.dim() || p.coords().len() != f.dim() {
        return Err(Error::Precondition("dimension mismatch".into()));
    }
    if !field.is_zero(&f.eval(p.coords())) || !field.is_zero(&g.eval(p.coords())) {
        return Err(Error::Precondition("point is not on the intersection".into()));
    }
    let rows = vec![f.gram().mul_vec(p.coords()), g.gram().mul_vec(p.coords())];
    let jac = Mat::from_rows(field, rows);
    if jac.rank() != 2 {
        return Err(Error::Precondition("singular point".into()));
    }
    Ok(Subspace::kernel_of(&jac))
}

/// Rank of the member lam*f + mu*g restricted to the tangent space of X
/// at p.
pub fn tangent_restriction_rank<F: Field>(
    f: &QuadraticForm<F>,
    g: &QuadraticForm<F>,
    p: &ProjPoint<F>,
    lam: &F::Elem,
    mu: &F::Elem,
) -> Result<usize> {
    let t = tangent_space(f, g, p)?;
    let gram = f.gram().scale(lam).add(&g.gram().scale(mu));
    let member = QuadraticForm::new(gram)?;
    Ok(member.restrict(&t.basis_rows()).rank())
}

/// The dual quadric A B^{-1} A of a pair of distinct forms with B
/// nondegenerate. Its intersection with Q_A is the locus of smooth
/// points of Q_A whose tangent hyperplane is tangent to Q_B.
pub fn dual_quadric<F: Field>(
    a: &QuadraticForm<F>,
    b: &QuadraticForm<F>,
) -> Result<QuadraticForm<F>> {
    let n = a.dim();
    if n < 2 {
        return Err(Error::Precondition(
            "dual quadric needs at least 2 variables".into(),
        ));
    }
    if b.dim() != n {
        return Err(Error::Precondition("dimension mismatch".into()));
    }
    if a.gram() == b.gram() {
        return Err(Error::Precondition("the two forms must be distinct".into()));
    }
    let binv = b
        .gram()
        .inverse()
        .ok_or_else(|| Error::Precondition("second form is degenerate".into()))?;
    QuadraticForm::new(a.gram().matmul(&binv).matmul(a.gram()))
}

/// The intersection X cut down to the tangent space at a smooth point:
/// a cone over a complete intersection Y in one dimension lower. The
/// base forms present Y on the reduced-echelon complement of the vertex
/// inside the tangent space.
#[derive(Clone, Debug)]
pub struct ConeSection {
    pub vertex: ProjPoint<Rationals>,
    pub tangent: Subspace<Rationals>,
    pub base_forms: (QuadraticForm<Rationals>, QuadraticForm<Rationals>),
    /// Ranks of (F, G) restricted to the complement.
    pub base_ranks: (usize, usize),
    /// Largest member rank of the restricted pencil over the sampled
    /// parameters; equals the variable count at a generic point.
    pub max_member_rank: usize,
}

pub fn cone_section(x: &Pencil, p: &ProjPoint<Rationals>) -> Result<ConeSection> {
    let n = x.dim();
    let tangent = tangent_space(x.f(), x.g(), p)?;
    let basis = tangent.basis_rows();
    let pivots = tangent.pivots().to_vec();
    // Coordinates of p in the echelon basis can be read off the pivot
    // columns; drop the first basis vector that carries p.
    let lead = (0..basis.len())
        .position(|i| !p.coords()[pivots[i]].is_zero())
        .expect("tangent space contains the point");
    let complement: Vec<Vec<Rat>> = (0..basis.len())
        .filter(|&i| i != lead)
        .map(|i| basis[i].clone())
        .collect();
    let f_base = x.f().restrict(&complement);
    let g_base = x.g().restrict(&complement);
    let vars = n - 3;
    let mut max_rank = f_base.rank().max(g_base.rank());
    for t in 1..=(vars as i64 + 1) {
        let gram = f_base
            .gram()
            .add(&g_base.gram().scale(&crate::scalars::rat_int(t)));
        max_rank = max_rank.max(gram.rank());
    }
    if max_rank < vars {
        return Err(Error::Precondition("non-generic point".into()));
    }
    Ok(ConeSection {
        vertex: p.clone(),
        tangent,
        base_ranks: (f_base.rank(), g_base.rank()),
        base_forms: (f_base, g_base),
        max_member_rank: max_rank,
    })
}

fn enumeration_guard<F: FiniteField>(field: &F, vars: usize) -> Result<()> {
    let cost = (field.order_u64() as f64).powi(vars as i32);
    if cost > 1e9 {
        return Err(Error::EnumerationTooLarge(format!(
            "{}^{} projective candidates",
            field.order_u64(),
            vars
        )));
    }
    Ok(())
}

/// All canonical representatives of P^{vars-1} over a finite field, in
/// a fixed order (stratified by the position of the leading 1).
pub fn enumerate_projective<F: FiniteField>(field: &F, vars: usize) -> Result<Vec<ProjPoint<F>>> {
    enumeration_guard(field, vars)?;
    let q = field.order_u64();
    let strata = par::map_range(vars, |lead| {
        let free = vars - lead - 1;
        let total = (q as u128).pow(free as u32);
        let mut out = Vec::new();
        let mut idx: u128 = 0;
        while idx < total {
            let mut coords = vec![field.zero(); vars];
            coords[lead] = field.one();
            let mut rem = idx;
            for k in 0..free {
                coords[lead + 1 + k] = field.element_by_index((rem % q as u128) as u64);
                rem /= q as u128;
            }
            out.push(ProjPoint {
                field: field.clone(),
                coords,
            });
            idx += 1;
        }
        out
    });
    Ok(strata.into_iter().flatten().collect())
}

/// Points of the common zero locus of the given forms over a finite
/// field, canonicalized, in enumeration order.
pub fn enumerate_points_fq<F: FiniteField>(
    forms: &[&QuadraticForm<F>],
) -> Result<Vec<ProjPoint<F>>> {
    let first = forms
        .first()
        .ok_or_else(|| Error::Precondition("need at least one form".into()))?;
    let field = first.field().clone();
    let vars = first.dim();
    if forms.iter().any(|f| f.dim() != vars) {
        return Err(Error::Precondition("dimension mismatch".into()));
    }
    let pts = enumerate_projective(&field, vars)?;
    Ok(pts
        .into_iter()
        .filter(|p| forms.iter().all(|f| field.is_zero(&f.eval(p.coords()))))
        .collect())
}

/// Witt index of a form over a finite field of odd characteristic,
/// computed from rank and discriminant class of the nondegenerate part.
pub fn witt_index_fq<F: FiniteField>(q: &QuadraticForm<F>) -> Result<usize> {
    let field = q.field().clone();
    let diag = q.diagonalize()?;
    let entries: Vec<F::Elem> = diag
        .diag
        .into_iter()
        .filter(|e| !field.is_zero(e))
        .collect();
    let r = entries.len();
    if r % 2 == 1 {
        return Ok((r - 1) / 2);
    }
    if r == 0 {
        return Ok(0);
    }
    let mut disc = field.one();
    for e in &entries {
        disc = field.mul(&disc, e);
    }
    // (-1)^(r/2) * disc square <=> the form is a sum of hyperbolic
    // planes.
    if (r / 2) % 2 == 1 {
        disc = field.neg(&disc);
    }
    Ok(if field.elem_is_square(&disc) {
        r / 2
    } else {
        r / 2 - 1
    })
}

/// Exhaustive search for a projective m-dimensional subspace contained
/// in the quadric and meeting its singular locus nowhere. Splitting off
/// the radical first keeps the search honest and small: a subspace
/// clear of the radical is the same thing as a totally isotropic
/// subspace of the nondegenerate quotient, so candidates are drawn from
/// a fixed complement of the radical where far fewer points live.
pub fn isotropic_subspace_fq<F: FiniteField>(
    q: &QuadraticForm<F>,
    m: usize,
) -> Result<Option<Subspace<F>>> {
    let field = q.field().clone();
    let n = q.dim();
    let target = m + 1;
    let radical = q.radical();
    if target + radical.len() > n {
        return Ok(None);
    }
    // Standard basis vectors off the radical pivots span a complement.
    let radical_span = Subspace::from_rows(field.clone(), n, radical);
    let pivot_cols = radical_span.pivots();
    let complement: Vec<Vec<F::Elem>> = (0..n)
        .filter(|j| !pivot_cols.contains(j))
        .map(|j| {
            let mut e = vec![field.zero(); n];
            e[j] = field.one();
            e
        })
        .collect();
    let reduced = q.restrict(&complement);
    let pts: Vec<ProjPoint<F>> = enumerate_points_fq(&[&reduced])?;
    let mut chosen: Vec<Vec<F::Elem>> = Vec::new();
    if !extend_isotropic(&reduced, &field, &pts, &mut chosen, 0, target) {
        return Ok(None);
    }
    let rows = chosen
        .iter()
        .map(|w| {
            let mut v = vec![field.zero(); n];
            for (coef, basis_row) in w.iter().zip(&complement) {
                for (vi, bi) in v.iter_mut().zip(basis_row) {
                    *vi = field.add(vi, &field.mul(coef, bi));
                }
            }
            v
        })
        .collect();
    Ok(Some(Subspace::from_rows(field, n, rows)))
}

fn extend_isotropic<F: Field>(
    q: &QuadraticForm<F>,
    field: &F,
    pts: &[ProjPoint<F>],
    chosen: &mut Vec<Vec<F::Elem>>,
    start: usize,
    target: usize,
) -> bool {
    if chosen.len() == target {
        return true;
    }
    for i in start..pts.len() {
        let v = pts[i].coords();
        if !chosen
            .iter()
            .all(|c| field.is_zero(&q.bilinear(c, v)))
        {
            continue;
        }
        let mut rows = chosen.clone();
        rows.push(v.to_vec());
        if Mat::from_rows(field.clone(), rows).rank() != chosen.len() + 1 {
            continue;
        }
        chosen.push(v.to_vec());
        if extend_isotropic(q, field, pts, chosen, i + 1, target) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Orbit size of a point of P^n(F_{p^k}) under the Frobenius x -> x^p;
/// the degree of its field of definition over F_p.
pub fn frobenius_orbit_size(field: &Fq, p: &ProjPoint<Fq>) -> usize {
    let mut current = p.clone();
    for step in 1..=field.degree() {
        let coords = current.coords().iter().map(|c| field.frobenius(c)).collect();
        current = ProjPoint::new(field.clone(), coords).expect("Frobenius preserves nonzero");
        if current == *p {
            return step;
        }
    }
    unreachable!("Frobenius order divides the extension degree");
}

/// The 27-element field F_3[x]/(x^3 - x + 1).
pub fn f27() -> Fq {
    Fq::new(3, vec![1, 2, 0, 1])
}

/// F_{p^k} with the lexicographically first monic irreducible modulus,
/// so the same (p, k) always names the same field. Requires k >= 2;
/// use Fp for the prime field itself.
pub fn extension_field(p: u64, k: usize) -> Result<Fq> {
    if !crate::scalars::intfactor::is_prime(&num_bigint::BigInt::from(p)) {
        return Err(Error::Precondition(format!("{} is not prime", p)));
    }
    if k < 2 {
        return Err(Error::Precondition(
            "extension degree must be at least 2".into(),
        ));
    }
    let order = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if order > 100_000 {
        return Err(Error::EnumerationTooLarge(format!(
            "field of order {}^{} is too large to search",
            p, k
        )));
    }
    let fp = Fp::new(p);
    let poly_of = |coeffs: &[u64]| {
        let mut full = coeffs.to_vec();
        full.push(1);
        crate::scalars::Poly::new(fp, full)
    };
    // Low-degree monic candidates for trial division; a proper factor
    // of degree <= k/2 exists whenever the candidate is reducible.
    let mut divisors: Vec<crate::scalars::Poly<Fp>> = Vec::new();
    for d in 1..=(k / 2) {
        let mut idx = vec![0u64; d];
        loop {
            divisors.push(poly_of(&idx));
            let mut carry = 0usize;
            loop {
                idx[carry] += 1;
                if idx[carry] < p {
                    break;
                }
                idx[carry] = 0;
                carry += 1;
                if carry == d {
                    break;
                }
            }
            if carry == d {
                break;
            }
        }
    }
    let mut coeffs = vec![0u64; k];
    loop {
        let candidate = poly_of(&coeffs);
        if divisors.iter().all(|g| !candidate.rem(g).is_zero()) {
            let mut modulus = coeffs.clone();
            modulus.push(1);
            return Ok(Fq::new(p, modulus));
        }
        let mut carry = 0usize;
        loop {
            coeffs[carry] += 1;
            if coeffs[carry] < p {
                break;
            }
            coeffs[carry] = 0;
            carry += 1;
            if carry == k {
                return Err(Error::Internal(
                    "no monic irreducible modulus found".into(),
                ));
            }
        }
    }
}

/// Reduction of a rational form modulo p; fails if any denominator is
/// divisible by p.
pub fn reduce_form_mod_p(q: &QuadraticForm<Rationals>, fp: &Fp) -> Result<QuadraticForm<Fp>> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let n = q.dim();
    let pb = num_bigint::BigInt::from(fp.p);
    let mut gram = Mat::zeros(*fp, n, n);
    for i in 0..n {
        for j in 0..n {
            let e = q.gram().get(i, j);
            let den = e.denom().mod_floor(&pb).to_u64().unwrap();
            let inv = crate::scalars::field::invmod(den, fp.p).ok_or(Error::BadReduction {
                prime: fp.p,
                detail: format!("denominator of entry ({}, {}) vanishes mod p", i, j),
            })?;
            let num = e.numer().mod_floor(&pb).to_u64().unwrap();
            gram.set(i, j, crate::scalars::field::mulmod(num, inv, fp.p));
        }
    }
    QuadraticForm::new(gram)
}

/// The same form viewed over an extension F_{p^k} of its prime field.
pub fn extend_form_to_fq(q: &QuadraticForm<Fp>, fq: &Fq) -> QuadraticForm<Fq> {
    assert_eq!(q.field().p, fq.p, "extension must have the same characteristic");
    let gram = q.gram().map(fq.clone(), |e| fq.embed_base(*e));
    QuadraticForm::new(gram).expect("symmetry is preserved by embedding")
}

/// Verdict of the skew-quadrilateral test for X cut by the span of two
/// disjoint lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadrilateralOutcome {
    /// Four distinct vertices spanning the 3-space.
    Gauche,
    Degenerate(String),
}

/// Checks whether X meets the span of two disjoint lines in a skew
/// quadrilateral: two distinct vertices on each line, jointly spanning
/// the 3-dimensional ambient span.
pub fn quadrilateral_check<F: Field + ExactSqrt>(
    f: &QuadraticForm<F>,
    g: &QuadraticForm<F>,
    l1: &Subspace<F>,
    l2: &Subspace<F>,
) -> Result<QuadrilateralOutcome> {
    let field = f.field().clone();
    let n = f.dim();
    if l1.dim() != 2 || l2.dim() != 2 || l1.ambient() != n || l2.ambient() != n || g.dim() != n {
        return Err(Error::Precondition("expected two lines in the ambient space".into()));
    }
    let mut span_rows = l1.basis_rows();
    span_rows.extend(l2.basis_rows());
    let plane = Subspace::from_rows(field.clone(), n, span_rows);
    if plane.dim() != 4 {
        return Err(Error::Precondition("the lines intersect".into()));
    }
    let mut vertices: Vec<Vec<F::Elem>> = Vec::new();
    for line in [l1, l2] {
        match line_vertices(f, g, line)? {
            LineCut::Contained => {
                return Ok(QuadrilateralOutcome::Degenerate(
                    "line contained in X".into(),
                ))
            }
            LineCut::Points(pts) => match pts.len() {
                2 => vertices.extend(pts),
                1 => {
                    return Ok(QuadrilateralOutcome::Degenerate(
                        "coincident points".into(),
                    ))
                }
                _ => {
                    return Ok(QuadrilateralOutcome::Degenerate(
                        "line misses X".into(),
                    ))
                }
            },
        }
    }
    // Coordinates in the echelon basis of the span are read off the
    // pivot columns; the four vertices are skew iff they span it.
    let pivots = plane.pivots();
    let rows: Vec<Vec<F::Elem>> = vertices
        .iter()
        .map(|v| pivots.iter().map(|&c| v[c].clone()).collect())
        .collect();
    if field.is_zero(&Mat::from_rows(field.clone(), rows).det()) {
        Ok(QuadrilateralOutcome::Degenerate("coplanar vertices".into()))
    } else {
        Ok(QuadrilateralOutcome::Gauche)
    }
}

enum LineCut<F: Field> {
    Contained,
    /// Distinct intersection points, ambient coordinates.
    Points(Vec<Vec<F::Elem>>),
}

fn line_vertices<F: Field + ExactSqrt>(
    f: &QuadraticForm<F>,
    g: &QuadraticForm<F>,
    line: &Subspace<F>,
) -> Result<LineCut<F>> {
    let field = f.field().clone();
    let basis = line.basis_rows();
    let coeffs = |q: &QuadraticForm<F>| -> [F::Elem; 3] {
        let r = q.restrict(&basis);
        let m = r.gram();
        [
            m.get(0, 0).clone(),
            field.add(m.get(0, 1), m.get(1, 0)),
            m.get(1, 1).clone(),
        ]
    };
    let bf = coeffs(f);
    let bg = coeffs(g);
    let zero_f = bf.iter().all(|c| field.is_zero(c));
    let zero_g = bg.iter().all(|c| field.is_zero(c));
    if zero_f && zero_g {
        return Ok(LineCut::Contained);
    }
    let minor = |x: &F::Elem, y: &F::Elem, u: &F::Elem, v: &F::Elem| {
        field.sub(&field.mul(x, v), &field.mul(y, u))
    };
    let proportional = zero_f
        || zero_g
        || ([(0, 1), (0, 2), (1, 2)]
            .iter()
            .all(|&(i, j)| field.is_zero(&minor(&bf[i], &bf[j], &bg[i], &bg[j]))));
    let eval_binary = |c: &[F::Elem; 3], s: &F::Elem, t: &F::Elem| {
        let s2 = field.mul(s, s);
        let st = field.mul(s, t);
        let t2 = field.mul(t, t);
        field.add(
            &field.add(&field.mul(&c[0], &s2), &field.mul(&c[1], &st)),
            &field.mul(&c[2], &t2),
        )
    };
    let roots = if proportional {
        let effective = if zero_f { &bg } else { &bf };
        binary_roots(&field, effective)?.ok_or_else(|| {
            Error::Precondition("vertices are not rational over the coefficient field".into())
        })?
    } else {
        // Non-proportional binary quadratics share no irrational roots,
        // so rational candidates from either side suffice.
        let candidates = match binary_roots(&field, &bf)? {
            Some(r) => r,
            None => binary_roots(&field, &bg)?.unwrap_or_default(),
        };
        candidates
            .into_iter()
            .filter(|(s, t)| {
                field.is_zero(&eval_binary(&bf, s, t)) && field.is_zero(&eval_binary(&bg, s, t))
            })
            .collect()
    };
    // Deduplicate canonical parameter pairs.
    let mut distinct: Vec<(F::Elem, F::Elem)> = Vec::new();
    for r in roots {
        if !distinct.contains(&r) {
            distinct.push(r);
        }
    }
    let ambient = distinct
        .into_iter()
        .map(|(s, t)| {
            (0..line.ambient())
                .map(|k| {
                    field.add(
                        &field.mul(&s, &basis[0][k]),
                        &field.mul(&t, &basis[1][k]),
                    )
                })
                .collect()
        })
        .collect();
    Ok(LineCut::Points(ambient))
}

/// Projective roots of a nonzero binary quadratic over F, canonical
/// (first nonzero parameter 1), with multiplicity collapsed by the
/// caller. None means the roots exist only in a quadratic extension.
fn binary_roots<F: Field + ExactSqrt>(
    field: &F,
    c: &[F::Elem; 3],
) -> Result<Option<Vec<(F::Elem, F::Elem)>>> {
    let canon = |s: F::Elem, t: F::Elem| -> (F::Elem, F::Elem) {
        if !field.is_zero(&s) {
            let inv = field.inv(&s).unwrap();
            (field.one(), field.mul(&t, &inv))
        } else {
            (field.zero(), field.one())
        }
    };
    if field.is_zero(&c[0]) {
        if field.is_zero(&c[1]) {
            // c2 t^2: double root at t = 0.
            return Ok(Some(vec![canon(field.one(), field.zero()); 2]));
        }
        // t (c1 s + c2 t): (1:0) and (-c2 : c1).
        let other = canon(field.neg(&c[2]), c[1].clone());
        return Ok(Some(vec![canon(field.one(), field.zero()), other]));
    }
    // Dehomogenize at t = 1: c0 s^2 + c1 s + c2.
    let four = field.from_i64(4);
    let disc = field.sub(
        &field.mul(&c[1], &c[1]),
        &field.mul(&four, &field.mul(&c[0], &c[2])),
    );
    let Some(r) = field.sqrt_elem(&disc)? else {
        return Ok(None);
    };
    let two_a = field.add(&c[0], &c[0]);
    let inv = field.inv(&two_a).expect("leading coefficient nonzero");
    let s1 = field.mul(&field.sub(&r, &c[1]), &inv);
    let s2 = field.mul(&field.sub(&field.neg(&c[1]), &r), &inv);
    Ok(Some(vec![canon(s1, field.one()), canon(s2, field.one())]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, rat_int, NumberField};
    use num_bigint::BigInt;

    /// F = sum of x_{2i} x_{2i+1} blocks, G the same blocks scaled.
    fn block_pair(scales: [i64; 4]) -> (QuadraticForm<Rationals>, QuadraticForm<Rationals>) {
        let mut f = Mat::zeros(Rationals, 8, 8);
        let mut g = Mat::zeros(Rationals, 8, 8);
        for (i, s) in scales.iter().enumerate() {
            f.set(2 * i, 2 * i + 1, rat_int(1));
            f.set(2 * i + 1, 2 * i, rat_int(1));
            g.set(2 * i, 2 * i + 1, rat_int(*s));
            g.set(2 * i + 1, 2 * i, rat_int(*s));
        }
        (
            QuadraticForm::new(f).unwrap(),
            QuadraticForm::new(g).unwrap(),
        )
    }

    #[test]
    fn tangent_space_at_a_smooth_point_has_codimension_two() {
        let (f, g) = block_pair([1, -1, 2, 3]);
        let p = ProjPoint::from_i64(Rationals, &[1, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        let t = tangent_space(&f, &g, &p).unwrap();
        assert_eq!(t.dim(), 6);
        assert!(t.contains(p.coords()));
    }

    #[test]
    fn tangent_space_rejects_off_points_and_singular_points() {
        let (f, g) = block_pair([1, -1, 2, 3]);
        let off = ProjPoint::from_i64(Rationals, &[1, 1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(matches!(
            tangent_space(&f, &g, &off),
            Err(Error::Precondition(m)) if m.contains("not on")
        ));
        // At e0 both gradients are proportional: a singular point of X.
        let sing = ProjPoint::from_i64(Rationals, &[1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(matches!(
            tangent_space(&f, &g, &sing),
            Err(Error::Precondition(m)) if m.contains("singular")
        ));
    }

    #[test]
    fn tangent_space_commutes_with_a_change_of_basis() {
        let (f, g) = block_pair([1, -1, 2, 3]);
        // Unimodular shear x0 -> x0 + x2.
        let mut c = Mat::identity(Rationals, 8);
        c.set(0, 2, rat_int(1));
        let fc = QuadraticForm::new(f.gram().congruence(&c)).unwrap();
        let gc = QuadraticForm::new(g.gram().congruence(&c)).unwrap();
        let p = ProjPoint::from_i64(Rationals, &[1, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        // Pull the point back through the substitution x = C y.
        let cinv = c.inverse().unwrap();
        let q = ProjPoint::new(Rationals, cinv.mul_vec(p.coords())).unwrap();
        let t = tangent_space(&f, &g, &p).unwrap();
        let tc = tangent_space(&fc, &gc, &q).unwrap();
        // C maps the transformed tangent space onto the original one.
        for row in tc.basis_rows() {
            assert!(t.contains(&c.mul_vec(&row)));
        }
        assert_eq!(t.dim(), tc.dim());
    }

    #[test]
    fn dual_quadric_of_identity_collapses_to_the_inverse() {
        let a = QuadraticForm::from_diag(Rationals, &vec![rat_int(1); 4]);
        let b = QuadraticForm::from_diag(
            Rationals,
            &[rat_int(1), rat_int(1), rat_int(1), rat_int(2)],
        );
        let d = dual_quadric(&a, &b).unwrap();
        assert_eq!(*d.gram(), b.gram().inverse().unwrap());
        // Guards: equal forms, tiny dimension, degenerate B.
        assert!(dual_quadric(&a, &a).is_err());
        let one = QuadraticForm::from_diag(Rationals, &[rat_int(2)]);
        let one_b = QuadraticForm::from_diag(Rationals, &[rat_int(1)]);
        assert!(dual_quadric(&one, &one_b).is_err());
        let degenerate = QuadraticForm::from_diag(
            Rationals,
            &[rat_int(1), rat_int(0), rat_int(1), rat_int(1)],
        );
        assert!(dual_quadric(&a, &degenerate).is_err());
    }

    #[test]
    fn dual_quadric_cuts_exactly_the_tangency_locus() {
        // Tangency checked independently: the hyperplane section of Q_B
        // by the tangent hyperplane at p must be degenerate.
        let cases: Vec<(u64, Vec<Vec<i64>>, Vec<Vec<i64>>)> = vec![
            (
                5,
                vec![
                    vec![1, 0, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 1],
                ],
                vec![
                    vec![1, 0, 0, 0],
                    vec![0, 2, 0, 0],
                    vec![0, 0, 3, 0],
                    vec![0, 0, 0, 4],
                ],
            ),
            (
                3,
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                vec![vec![1, 0, 1], vec![0, 2, 0], vec![1, 0, 2]],
            ),
        ];
        for (p, ga, gb) in cases {
            let fp = Fp::new(p);
            let to_form = |rows: &Vec<Vec<i64>>| {
                let m = Mat::from_rows(
                    fp,
                    rows.iter()
                        .map(|r| r.iter().map(|&e| fp.reduce_i64(e)).collect())
                        .collect(),
                );
                QuadraticForm::new(m).unwrap()
            };
            let qa = to_form(&ga);
            let qb = to_form(&gb);
            let n = qa.dim();
            let dual = dual_quadric(&qa, &qb).unwrap();
            for pt in enumerate_points_fq(&[&qa]).unwrap() {
                let grad = qa.gram().mul_vec(pt.coords());
                if grad.iter().all(|c| fp.is_zero(c)) {
                    continue;
                }
                let hyperplane = Subspace::kernel_of(&Mat::from_rows(fp, vec![grad]));
                let tangent_to_b = qb.restrict(&hyperplane.basis_rows()).rank() < n - 1;
                let on_dual = fp.is_zero(&dual.eval(pt.coords()));
                assert_eq!(tangent_to_b, on_dual, "p = {}, pt = {:?}", p, pt.coords());
            }
            // The incidence never degenerates into proportionality.
            let cross_ok = (0..n).any(|i| {
                (0..n).any(|j| {
                    (0..n).any(|k| {
                        (0..n).any(|l| {
                            !fp.is_zero(&fp.sub(
                                &fp.mul(qa.gram().get(i, j), dual.gram().get(k, l)),
                                &fp.mul(qa.gram().get(k, l), dual.gram().get(i, j)),
                            ))
                        })
                    })
                })
            });
            assert!(cross_ok, "dual quadric must not be proportional to A");
        }
    }

    #[test]
    fn smooth_quadric_point_counts_follow_the_classical_formula() {
        for q in [3u64, 5] {
            let fp = Fp::new(q);
            // Conic in P^2: always q + 1 points.
            let conic = QuadraticForm::from_diag(fp, &[1, 1, 1].map(|e| fp.reduce_i64(e)));
            assert_eq!(
                enumerate_points_fq(&[&conic]).unwrap().len() as u64,
                q + 1
            );
            // Surface in P^3: q^2 + q + 1 +- q by discriminant type.
            for diag in [[1i64, 1, 1, 1], [1, 1, 1, 2]] {
                let form =
                    QuadraticForm::from_diag(fp, &diag.map(|e| fp.reduce_i64(e)));
                let count = enumerate_points_fq(&[&form]).unwrap().len() as u64;
                let eps = if witt_index_fq(&form).unwrap() == 2 { 1i64 } else { -1 };
                assert_eq!(count as i64, (q * q + q + 1) as i64 + eps * q as i64);
            }
        }
    }

    #[test]
    fn projective_enumeration_counts_match() {
        let f3 = Fp::new(3);
        assert_eq!(enumerate_projective(&f3, 3).unwrap().len(), 13);
        let f5 = Fp::new(5);
        assert_eq!(enumerate_projective(&f5, 4).unwrap().len(), 156);
    }

    #[test]
    fn isotropic_subspace_small_fixtures() {
        let f3 = Fp::new(3);
        let hyperbolic_q = QuadraticForm::from_diag(f3, &[1, 2, 1, 2]);
        assert!(isotropic_subspace_fq(&hyperbolic_q, 0).unwrap().is_some());
        let anisotropic = QuadraticForm::from_diag(f3, &[1, 1]);
        assert!(isotropic_subspace_fq(&anisotropic, 0).unwrap().is_none());
    }

    #[test]
    fn isotropic_plane_avoiding_the_radical_tracks_the_witt_index() {
        let f3 = Fp::new(3);
        // Rank 6 with a 2-dimensional radical; witt index 3 of the
        // nondegenerate part admits a plane clear of the radical.
        let split = QuadraticForm::from_diag(f3, &[1, 2, 1, 2, 1, 2, 0, 0]);
        assert_eq!(witt_index_fq(&split).unwrap(), 3);
        let plane = isotropic_subspace_fq(&split, 2).unwrap().expect("plane");
        assert_eq!(plane.dim(), 3);
        let restricted = split.restrict(&plane.basis_rows());
        assert_eq!(restricted.rank(), 0);
        let mut rows = plane.basis_rows();
        rows.extend(split.radical());
        assert_eq!(Mat::from_rows(f3, rows).rank(), 5);
        // Witt index 2 blocks any such plane.
        let blocked = QuadraticForm::from_diag(f3, &[1, 1, 1, 1, 1, 1, 0, 0]);
        assert_eq!(witt_index_fq(&blocked).unwrap(), 2);
        assert!(isotropic_subspace_fq(&blocked, 2).unwrap().is_none());
    }

    #[test]
    fn witt_index_matches_subspace_search_in_low_dimensions() {
        let f3 = Fp::new(3);
        for n in 2..=5usize {
            for ones in 0..=n {
                let entries: Vec<u64> = (0..n).map(|i| if i < ones { 1 } else { 2 }).collect();
                let q = QuadraticForm::from_diag(f3, &entries);
                let witt = witt_index_fq(&q).unwrap();
                for m in 0..=1usize {
                    let found = isotropic_subspace_fq(&q, m).unwrap().is_some();
                    assert_eq!(found, witt >= m + 1, "diag {:?}, m = {}", entries, m);
                }
            }
        }
    }

    #[test]
    fn frobenius_orbit_sizes_split_by_field_of_definition() {
        let k = f27();
        let base = ProjPoint::new(k.clone(), vec![k.one(), k.from_i64(2), k.one()]).unwrap();
        assert_eq!(frobenius_orbit_size(&k, &base), 1);
        let movable = ProjPoint::new(k.clone(), vec![k.one(), k.gen(), k.zero()]).unwrap();
        assert_eq!(frobenius_orbit_size(&k, &movable), 3);
    }

    fn line(field: Rationals, a: usize, b: usize, n: usize) -> Subspace<Rationals> {
        let mut r1 = vec![rat_int(0); n];
        r1[a] = rat_int(1);
        let mut r2 = vec![rat_int(0); n];
        r2[b] = rat_int(1);
        Subspace::from_rows(field, n, vec![r1, r2])
    }

    #[test]
    fn quadrilateral_paths_over_q() {
        // X = {x0 x1 + x2 x3 = x0 x1 - x2 x3 = 0} in P^3.
        let mut fg = Mat::zeros(Rationals, 4, 4);
        fg.set(0, 1, rat_int(1));
        fg.set(1, 0, rat_int(1));
        fg.set(2, 3, rat_int(1));
        fg.set(3, 2, rat_int(1));
        let f = QuadraticForm::new(fg.clone()).unwrap();
        let mut gg = fg.clone();
        gg.set(2, 3, rat_int(-1));
        gg.set(3, 2, rat_int(-1));
        let g = QuadraticForm::new(gg).unwrap();
        let l1 = line(Rationals, 0, 1, 4);
        let l2 = line(Rationals, 2, 3, 4);
        assert_eq!(
            quadrilateral_check(&f, &g, &l1, &l2).unwrap(),
            QuadrilateralOutcome::Gauche
        );
        // The line spanned by e1, e3 lies on X entirely.
        let inside = line(Rationals, 1, 3, 4);
        assert_eq!(
            quadrilateral_check(&f, &g, &inside, &line(Rationals, 0, 2, 4)).unwrap(),
            QuadrilateralOutcome::Degenerate("line contained in X".into())
        );
        // Intersecting lines are rejected.
        let m1 = line(Rationals, 0, 1, 4);
        let m2 = line(Rationals, 1, 2, 4);
        assert!(quadrilateral_check(&f, &g, &m1, &m2).is_err());
    }

    #[test]
    fn quadrilateral_tangency_gives_coincident_points() {
        // F and G both restrict to s^2 on the line (e0, e1).
        let mut fg = Mat::zeros(Rationals, 4, 4);
        fg.set(0, 0, rat_int(1));
        fg.set(2, 3, rat_int(1));
        fg.set(3, 2, rat_int(1));
        let f = QuadraticForm::new(fg.clone()).unwrap();
        let mut gg = fg.clone();
        gg.set(2, 3, rat_int(-1));
        gg.set(3, 2, rat_int(-1));
        let g = QuadraticForm::new(gg).unwrap();
        let verdict =
            quadrilateral_check(&f, &g, &line(Rationals, 0, 1, 4), &line(Rationals, 2, 3, 4))
                .unwrap();
        assert_eq!(
            verdict,
            QuadrilateralOutcome::Degenerate("coincident points".into())
        );
    }

    #[test]
    fn quadrilateral_with_irrational_vertices_is_an_error() {
        let f = QuadraticForm::from_diag(
            Rationals,
            &[rat_int(1), rat_int(-2), rat_int(1), rat_int(-2)],
        );
        // G differs off the first line but restricts proportionally.
        let g = QuadraticForm::from_diag(
            Rationals,
            &[rat_int(1), rat_int(-2), rat_int(2), rat_int(-1)],
        );
        let verdict =
            quadrilateral_check(&f, &g, &line(Rationals, 0, 1, 4), &line(Rationals, 2, 3, 4));
        assert!(matches!(
            verdict,
            Err(Error::Precondition(m)) if m.contains("rational")
        ));
    }

    #[test]
    fn quadrilateral_over_a_quadratic_field() {
        let (k, _i) = NumberField::quadratic(&BigInt::from(-1)).unwrap();
        let base = |entries: &Mat<Rationals>| {
            let gram = entries.map(k.clone(), |r| k.from_rat(r.clone()));
            QuadraticForm::new(gram).unwrap()
        };
        let mut fg = Mat::zeros(Rationals, 4, 4);
        fg.set(0, 0, rat_int(1));
        fg.set(1, 1, rat_int(1));
        fg.set(2, 3, rat_int(1));
        fg.set(3, 2, rat_int(1));
        let mut gg = fg.clone();
        gg.set(2, 3, rat_int(-1));
        gg.set(3, 2, rat_int(-1));
        let f = base(&fg);
        let g = base(&gg);
        let unit = |a: usize, b: usize| {
            let mut r1 = vec![k.zero(); 4];
            r1[a] = k.one();
            let mut r2 = vec![k.zero(); 4];
            r2[b] = k.one();
            Subspace::from_rows(k.clone(), 4, vec![r1, r2])
        };
        // x0^2 + x1^2 splits over Q(i): vertices (1 : +-i : 0 : 0).
        assert_eq!(
            quadrilateral_check(&f, &g, &unit(0, 1), &unit(2, 3)).unwrap(),
            QuadrilateralOutcome::Gauche
        );
    }

    #[test]
    fn cone_section_at_a_generic_point() {
        // Diagonal pencil through the all-ones point; both coefficient
        // vectors sum to zero so the point lies on the intersection.
        let a = [1i64, -1, 2, -2, 3, -3, 4, -4].map(rat_int);
        let b = [1i64, 1, -1, -1, 2, 2, -2, -2].map(rat_int);
        let f = QuadraticForm::from_diag(Rationals, &a);
        let g = QuadraticForm::from_diag(Rationals, &b);
        let x = Pencil::new(f, g).unwrap();
        let p = ProjPoint::from_i64(Rationals, &[1; 8]).unwrap();
        let cone = cone_section(&x, &p).unwrap();
        assert_eq!(cone.base_forms.0.dim(), 5);
        assert_eq!(cone.max_member_rank, 5);
        assert_eq!(cone.vertex, p);
        assert!(cone.tangent.contains(p.coords()));
    }

    #[test]
    fn cone_section_rejects_non_generic_points() {
        // Two rank-2 members: every restriction has tiny rank.
        let mut fg = Mat::zeros(Rationals, 8, 8);
        fg.set(0, 1, rat_int(1));
        fg.set(1, 0, rat_int(1));
        let mut gg = Mat::zeros(Rationals, 8, 8);
        gg.set(2, 3, rat_int(1));
        gg.set(3, 2, rat_int(1));
        let x = Pencil::new(
            QuadraticForm::new(fg).unwrap(),
            QuadraticForm::new(gg).unwrap(),
        )
        .unwrap();
        let p = ProjPoint::from_i64(Rationals, &[1, 0, 1, 0, 1, 0, 1, 0]).unwrap();
        assert!(matches!(
            cone_section(&x, &p),
            Err(Error::Precondition(m)) if m.contains("non-generic")
        ));
    }

    #[test]
    fn reduction_mod_p_guards_denominators() {
        let q = QuadraticForm::from_diag(Rationals, &[rat(1, 3), rat_int(2)]);
        assert!(matches!(
            reduce_form_mod_p(&q, &Fp::new(3)),
            Err(Error::BadReduction { prime: 3, .. })
        ));
        let r = reduce_form_mod_p(&q, &Fp::new(5)).unwrap();
        // 1/3 = 2 mod 5.
        assert_eq!(*r.gram().get(0, 0), 2);
        assert_eq!(*r.gram().get(1, 1), 2);
    }

    #[test]
    fn extension_fields_pick_canonical_moduli() {
        assert_eq!(extension_field(3, 3).unwrap(), f27());
        let f4 = extension_field(2, 2).unwrap();
        assert_eq!(f4.order(), 4);
        // x^2 + x + 1 is the only monic irreducible quadratic over F_2.
        let x = vec![0u64, 1];
        let sq = f4.mul(&x, &x);
        assert_eq!(sq, f4.add(&x, &f4.one()));
        assert!(matches!(extension_field(4, 2), Err(Error::Precondition(_))));
        assert!(matches!(extension_field(3, 1), Err(Error::Precondition(_))));
        assert!(matches!(
            extension_field(2, 30),
            Err(Error::EnumerationTooLarge(_))
        ));
    }
}
