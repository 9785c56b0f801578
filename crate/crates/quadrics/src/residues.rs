//! Residues of the pencil's Clifford class along the parameter line.
//!
//! The member F + tG is a nondegenerate quadratic form over Q(t) once the
//! characteristic polynomial is nonzero. At each closed point of the
//! parameter line the form diagonalizes over the local ring with entries
//! of valuation 0 or 1; the reduced unit parts of the valuation-1 entries
//! carry the residue of the Clifford class as a signed discriminant.
//! Testing those residues on the double cover y^2 = disc(F + tG) decides
//! whether the intersection contains a plane over almost every
//! completion of Q.

use crate::forms::Mat;
use crate::par;
use crate::pencil::Pencil;
use crate::scalars::factor::factor_over_q;
use crate::scalars::numberfield::{NfElem, NumberField};
use crate::scalars::squares::{nf_is_square, rat_is_square, square_class};
use crate::scalars::{rat_int, Field, QPoly, Rat, Rationals};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

/// Element of Q(t): numerator over a monic denominator, coprime.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: QPoly::one(Rationals),
            };
        }
        let g = num.gcd(&den);
        let (num, r) = num.divrem(&g);
        debug_assert!(r.is_zero());
        let (den, r) = den.divrem(&g);
        debug_assert!(r.is_zero());
        let lead = den.leading().expect("nonzero denominator").clone();
        let inv = Rationals.inv(&lead).expect("nonzero leading coefficient");
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(num: QPoly) -> Self {
        RatFunc {
            num,
            den: QPoly::one(Rationals),
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    /// pi-adic valuation; None for the zero function.
    fn val(&self, pi: &QPoly) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        Some(multiplicity(&self.num, pi) as i64 - multiplicity(&self.den, pi) as i64)
    }

    pub fn to_display(&self) -> String {
        if self.den.is_constant() {
            self.num.to_string_var("t")
        } else {
            format!(
                "({}) / ({})",
                self.num.to_string_var("t"),
                self.den.to_string_var("t")
            )
        }
    }
}

/// Largest power of pi dividing a nonzero polynomial.
fn multiplicity(f: &QPoly, pi: &QPoly) -> u32 {
    let mut m = 0;
    let mut rest = f.clone();
    loop {
        let (q, r) = rest.divrem(pi);
        if !r.is_zero() {
            return m;
        }
        m += 1;
        rest = q;
    }
}

/// The rational function field Q(t) as a scalar domain, so the generic
/// matrix machinery applies to the pencil's generic member.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct FunctionField;

impl Field for FunctionField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::from_poly(QPoly::zero(Rationals))
    }

    fn one(&self) -> RatFunc {
        RatFunc::from_poly(QPoly::one(Rationals))
    }

    fn from_i64(&self, n: i64) -> RatFunc {
        RatFunc::from_poly(QPoly::constant(Rationals, rat_int(n)))
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        RatFunc::new(
            a.num.mul(&b.den).add(&b.num.mul(&a.den)),
            a.den.mul(&b.den),
        )
    }

    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: a.num.neg(),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        RatFunc::new(a.num.mul(&b.num), a.den.mul(&b.den))
    }

    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        if a.num.is_zero() {
            return None;
        }
        Some(RatFunc::new(a.den.clone(), a.num.clone()))
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_zero()
    }

    fn elem_to_string(&self, a: &RatFunc) -> String {
        a.to_display()
    }
}

/// Closed point of the parameter line: a monic irreducible polynomial,
/// or the point at infinity with uniformizer 1/t.
#[derive(Clone, PartialEq, Debug)]
pub enum ClosedPoint {
    Finite(QPoly),
    Infinity,
}

impl ClosedPoint {
    pub fn finite(pi: QPoly) -> Result<Self> {
        match pi.degree() {
            Some(d) if d >= 1 => {}
            _ => return Err(Error::PolyInput("closed point needs positive degree".into())),
        }
        if pi.leading() != Some(&rat_int(1)) {
            return Err(Error::PolyInput("closed point must be monic".into()));
        }
        Ok(ClosedPoint::Finite(pi))
    }

    pub fn degree(&self) -> usize {
        match self {
            ClosedPoint::Finite(pi) => pi.deg0(),
            ClosedPoint::Infinity => 1,
        }
    }

    /// Local coordinate on the chart the point lives in: pi itself on
    /// the finite chart, u on the chart at infinity.
    fn uniformizer(&self) -> QPoly {
        match self {
            ClosedPoint::Finite(pi) => pi.clone(),
            ClosedPoint::Infinity => QPoly::x(Rationals),
        }
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedPoint::Finite(pi) => write!(f, "{}", pi.to_string_var("t")),
            ClosedPoint::Infinity => write!(f, "infinity"),
        }
    }
}

/// Value in the residue field of a closed point.
#[derive(Clone, PartialEq, Debug)]
pub enum ResidueValue {
    Rational(Rat),
    Algebraic { field: NumberField, value: NfElem },
}

impl ResidueValue {
    pub fn is_square(&self) -> Result<bool> {
        match self {
            ResidueValue::Rational(q) => Ok(rat_is_square(q)),
            ResidueValue::Algebraic { field, value } => nf_is_square(field, value),
        }
    }

    pub fn is_trivial_class(&self) -> Result<bool> {
        self.is_square()
    }

    fn mul(&self, other: &ResidueValue) -> ResidueValue {
        match (self, other) {
            (ResidueValue::Rational(a), ResidueValue::Rational(b)) => {
                ResidueValue::Rational(a * b)
            }
            (ResidueValue::Algebraic { field, value }, ResidueValue::Rational(b))
            | (ResidueValue::Rational(b), ResidueValue::Algebraic { field, value }) => {
                ResidueValue::Algebraic {
                    field: field.clone(),
                    value: field.mul(value, &field.from_rat(b.clone())),
                }
            }
            (
                ResidueValue::Algebraic { field, value },
                ResidueValue::Algebraic {
                    field: f2,
                    value: v2,
                },
            ) => {
                assert_eq!(field, f2, "residue values from different fields");
                ResidueValue::Algebraic {
                    field: field.clone(),
                    value: field.mul(value, v2),
                }
            }
        }
    }

    fn neg(&self) -> ResidueValue {
        match self {
            ResidueValue::Rational(q) => ResidueValue::Rational(-q),
            ResidueValue::Algebraic { field, value } => ResidueValue::Algebraic {
                field: field.clone(),
                value: field.neg(value),
            },
        }
    }

    pub fn to_display(&self) -> String {
        match self {
            ResidueValue::Rational(q) => q.to_string(),
            ResidueValue::Algebraic { field, value } => field.elem_to_string(value),
        }
    }
}

/// The pencil viewed as a quadratic form over Q(t), with its
/// characteristic polynomial pinned down once.
pub struct ResidueContext {
    pencil: Pencil,
    chi: QPoly,
}

impl ResidueContext {
    /// Fails with DegeneratePencil when every member is singular.
    pub fn new(pencil: Pencil) -> Result<Self> {
        let (chi, _) = pencil.char_poly();
        if chi.is_zero() {
            return Err(Error::DegeneratePencil);
        }
        Ok(ResidueContext { pencil, chi })
    }

    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    pub fn chi(&self) -> &QPoly {
        &self.chi
    }

    /// Gram matrix of F + tG on the chart containing the point: entries
    /// a + bt on the finite chart, (au + b)/u in the coordinate u = 1/t
    /// at infinity.
    fn local_gram(&self, point: &ClosedPoint) -> Mat<FunctionField> {
        let n = self.pencil.dim();
        let mut m = Mat::zeros(FunctionField, n, n);
        for i in 0..n {
            for j in 0..n {
                let a = self.pencil.f().gram().get(i, j).clone();
                let b = self.pencil.g().gram().get(i, j).clone();
                let e = match point {
                    ClosedPoint::Finite(_) => {
                        RatFunc::from_poly(QPoly::new(Rationals, vec![a, b]))
                    }
                    ClosedPoint::Infinity => RatFunc::new(
                        QPoly::new(Rationals, vec![b, a]),
                        QPoly::x(Rationals),
                    ),
                };
                m.set(i, j, e);
            }
        }
        m
    }
}

/// Orthogonal basis of the pencil over the local ring at one point:
/// every diagonal entry is a unit or a uniformizer times a unit.
#[derive(Clone, Debug)]
pub struct DvrDiagonal {
    pub point: ClosedPoint,
    pub unit_entries: Vec<RatFunc>,
    pub uniformizer_entries: Vec<RatFunc>,
    pub change_of_basis: Mat<FunctionField>,
}

/// Congruence diagonalization over the local ring at the point, pivoting
/// on entries of minimal valuation. Even powers of the uniformizer are
/// absorbed into the basis so every entry ends with valuation 0 or 1,
/// units first. The congruence identity is re-checked exactly over the
/// fraction field before returning.
pub fn dvr_diagonalize(ctx: &ResidueContext, point: &ClosedPoint) -> Result<DvrDiagonal> {
    let k = FunctionField;
    let n = ctx.pencil.dim();
    let pi = point.uniformizer();
    let original = ctx.local_gram(point);
    let mut g = original.clone();
    let mut b = Mat::identity(k, n);

    // Basis operation e_dst <- e_dst + c e_src, applied symmetrically.
    fn add_multiple(
        g: &mut Mat<FunctionField>,
        b: &mut Mat<FunctionField>,
        dst: usize,
        src: usize,
        c: &RatFunc,
    ) {
        let k = FunctionField;
        let n = g.rows();
        for i in 0..n {
            let v = k.add(g.get(i, dst), &k.mul(c, g.get(i, src)));
            g.set(i, dst, v);
        }
        for j in 0..n {
            let v = k.add(g.get(dst, j), &k.mul(c, g.get(src, j)));
            g.set(dst, j, v);
        }
        for i in 0..n {
            let v = k.add(b.get(i, dst), &k.mul(c, b.get(i, src)));
            b.set(i, dst, v);
        }
    }

    fn swap_basis(g: &mut Mat<FunctionField>, b: &mut Mat<FunctionField>, x: usize, y: usize) {
        if x == y {
            return;
        }
        let n = g.rows();
        for i in 0..n {
            let (u, v) = (g.get(i, x).clone(), g.get(i, y).clone());
            g.set(i, x, v);
            g.set(i, y, u);
        }
        for j in 0..n {
            let (u, v) = (g.get(x, j).clone(), g.get(y, j).clone());
            g.set(x, j, v);
            g.set(y, j, u);
        }
        for i in 0..n {
            let (u, v) = (b.get(i, x).clone(), b.get(i, y).clone());
            b.set(i, x, v);
            b.set(i, y, u);
        }
    }

    fn scale_basis(g: &mut Mat<FunctionField>, b: &mut Mat<FunctionField>, x: usize, c: &RatFunc) {
        let k = FunctionField;
        let n = g.rows();
        for i in 0..n {
            let v = k.mul(g.get(i, x), c);
            g.set(i, x, v);
        }
        for j in 0..n {
            let v = k.mul(g.get(x, j), c);
            g.set(x, j, v);
        }
        for i in 0..n {
            let v = k.mul(b.get(i, x), c);
            b.set(i, x, v);
        }
    }

    for step in 0..n {
        let mut min_val: Option<i64> = None;
        for i in step..n {
            for j in step..=i {
                if let Some(v) = g.get(i, j).val(&pi) {
                    min_val = Some(min_val.map_or(v, |m| m.min(v)));
                }
            }
        }
        let v_star = min_val.ok_or_else(|| {
            Error::Internal("diagonalization hit a zero block on a nondegenerate pencil".into())
        })?;
        let mut pivot = (step..n).find(|&i| g.get(i, i).val(&pi) == Some(v_star));
        if pivot.is_none() {
            // Only off-diagonal entries attain the minimum; fold one onto
            // the diagonal. The cross term dominates because both diagonal
            // partners have strictly larger valuation.
            'outer: for i in step..n {
                for j in i + 1..n {
                    if g.get(i, j).val(&pi) == Some(v_star) {
                        add_multiple(&mut g, &mut b, i, j, &k.one());
                        pivot = Some(i);
                        break 'outer;
                    }
                }
            }
        }
        let p = pivot.expect("minimal valuation is attained on the diagonal after folding");
        swap_basis(&mut g, &mut b, step, p);
        for j in step + 1..n {
            if k.is_zero(g.get(step, j)) {
                continue;
            }
            let c = k
                .div(g.get(step, j), g.get(step, step))
                .expect("pivot is nonzero");
            add_multiple(&mut g, &mut b, j, step, &k.neg(&c));
        }
    }

    // Normalize valuations into {0, 1} by rescaling basis vectors.
    for i in 0..n {
        let v = g
            .get(i, i)
            .val(&pi)
            .ok_or_else(|| Error::Internal("zero diagonal entry after pivoting".into()))?;
        let e = v.rem_euclid(2);
        let s = (v - e) / 2;
        if s != 0 {
            let c = pi_power(&pi, -s);
            scale_basis(&mut g, &mut b, i, &c);
        }
    }

    let mut unit_idx = Vec::new();
    let mut uni_idx = Vec::new();
    for i in 0..n {
        match g.get(i, i).val(&pi) {
            Some(0) => unit_idx.push(i),
            Some(1) => uni_idx.push(i),
            v => {
                return Err(Error::Internal(format!(
                    "normalized diagonal entry has valuation {:?}",
                    v
                )))
            }
        }
    }
    let order: Vec<usize> = unit_idx.iter().chain(uni_idx.iter()).copied().collect();
    let unit_entries: Vec<RatFunc> = unit_idx.iter().map(|&i| g.get(i, i).clone()).collect();
    let uniformizer_entries: Vec<RatFunc> = uni_idx.iter().map(|&i| g.get(i, i).clone()).collect();
    let basis_rows: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| order.iter().map(|&j| b.get(i, j).clone()).collect())
        .collect();
    let change_of_basis = Mat::from_rows(k, basis_rows);

    // Exact congruence identity over the fraction field.
    let mut diag = Mat::zeros(k, n, n);
    for (slot, e) in unit_entries
        .iter()
        .chain(uniformizer_entries.iter())
        .enumerate()
    {
        diag.set(slot, slot, e.clone());
    }
    let check = change_of_basis.transpose().matmul(&original).matmul(&change_of_basis);
    if check != diag {
        return Err(Error::Internal(
            "local diagonalization failed its congruence identity".into(),
        ));
    }

    Ok(DvrDiagonal {
        point: point.clone(),
        unit_entries,
        uniformizer_entries,
        change_of_basis,
    })
}

fn pi_power(pi: &QPoly, e: i64) -> RatFunc {
    let p = pi.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        RatFunc::from_poly(p)
    } else {
        RatFunc::new(QPoly::one(Rationals), p)
    }
}

/// Residue of the Clifford class at one closed point: the signed
/// discriminant of the reduced unit parts of the uniformizer entries.
#[derive(Clone, Debug)]
pub struct CliffordResidue {
    pub diagonal: DvrDiagonal,
    pub class: ResidueValue,
}

pub fn residue_of_clifford(ctx: &ResidueContext, point: &ClosedPoint) -> Result<CliffordResidue> {
    let diagonal = dvr_diagonalize(ctx, point)?;
    let pi = point.uniformizer();
    let k = FunctionField;
    let one_over_pi = pi_power(&pi, -1);
    let mut class = residue_one(point)?;
    for entry in &diagonal.uniformizer_entries {
        let unit_part = k.mul(entry, &one_over_pi);
        class = class.mul(&reduce_at(&unit_part, point)?);
    }
    // disc of an m-dimensional form carries the sign (-1)^(m(m-1)/2).
    let m = diagonal.uniformizer_entries.len();
    if (m * (m.saturating_sub(1)) / 2) % 2 == 1 {
        class = class.neg();
    }
    Ok(CliffordResidue { diagonal, class })
}

fn residue_one(point: &ClosedPoint) -> Result<ResidueValue> {
    match point {
        ClosedPoint::Finite(pi) if pi.deg0() >= 2 => {
            let field = NumberField::new(pi.clone())?;
            let value = field.one();
            Ok(ResidueValue::Algebraic { field, value })
        }
        _ => Ok(ResidueValue::Rational(rat_int(1))),
    }
}

/// Reduction of a valuation-0 rational function into the residue field
/// of the point; both charts share the code path because the uniformizer
/// is a monic polynomial in the chart coordinate either way.
fn reduce_at(w: &RatFunc, point: &ClosedPoint) -> Result<ResidueValue> {
    let pi = point.uniformizer();
    assert_eq!(w.val(&pi), Some(0), "reduction needs a valuation-0 unit");
    let strip = |f: &QPoly| {
        let mut rest = f.clone();
        loop {
            let (q, r) = rest.divrem(&pi);
            if !r.is_zero() {
                return rest;
            }
            rest = q;
        }
    };
    let num = strip(&w.num);
    let den = strip(&w.den);
    if pi.deg0() == 1 {
        let root = -pi.coeff(0);
        let d = den.eval(&root);
        debug_assert!(!d.is_zero());
        Ok(ResidueValue::Rational(num.eval(&root) / d))
    } else {
        let field = NumberField::new(pi.clone())?;
        let theta = field.gen();
        let nv = field.eval_qpoly(&num, &theta);
        let dv = field.eval_qpoly(&den, &theta);
        let value = field
            .div(&nv, &dv)
            .ok_or_else(|| Error::Internal("unit reduced to zero".into()))?;
        Ok(ResidueValue::Algebraic { field, value })
    }
}

/// The double cover y^2 = disc(F + tG), split as an exact constant times
/// square times squarefree factorization.
#[derive(Clone, Debug)]
pub struct CurveC {
    pub disc_poly: QPoly,
    pub constant: Rat,
    pub square_part: QPoly,
    pub squarefree_part: QPoly,
    pub constant_class: BigInt,
    pub geometrically_reducible: bool,
}

pub fn build_curve_c(ctx: &ResidueContext) -> Result<CurveC> {
    let n = ctx.pencil.dim();
    let mut disc_poly = ctx.chi.clone();
    if (n * (n - 1) / 2) % 2 == 1 {
        disc_poly = disc_poly.neg();
    }
    let (constant, factors) = factor_over_q(&disc_poly)?;
    let mut square_part = QPoly::one(Rationals);
    let mut squarefree_part = QPoly::one(Rationals);
    for (f, mult) in &factors {
        for _ in 0..mult / 2 {
            square_part = square_part.mul(f);
        }
        if mult % 2 == 1 {
            squarefree_part = squarefree_part.mul(f);
        }
    }
    let rebuilt = square_part
        .mul(&square_part)
        .mul(&squarefree_part)
        .scale(&constant);
    if rebuilt != disc_poly {
        return Err(Error::Internal(
            "discriminant factorization failed to rebuild".into(),
        ));
    }
    let geometrically_reducible = squarefree_part.is_constant();
    let constant_class = square_class(&constant)?;
    Ok(CurveC {
        disc_poly,
        constant,
        square_part,
        squarefree_part,
        constant_class,
        geometrically_reducible,
    })
}

/// Twist defining the residue field of the cover above the point: the
/// value of constant * squarefree_part there, None when the point
/// ramifies (squarefree part vanishing, or odd degree at infinity).
fn cover_twist(curve: &CurveC, point: &ClosedPoint) -> Result<Option<ResidueValue>> {
    let s = &curve.squarefree_part;
    match point {
        ClosedPoint::Finite(pi) => {
            if s.rem(pi).is_zero() {
                return Ok(None);
            }
            let value = if pi.deg0() == 1 {
                let root = -pi.coeff(0);
                ResidueValue::Rational(s.eval(&root) * &curve.constant)
            } else {
                let field = NumberField::new(pi.clone())?;
                let v = field.eval_qpoly(s, &field.gen());
                let value = field.mul(&v, &field.from_rat(curve.constant.clone()));
                ResidueValue::Algebraic { field, value }
            };
            Ok(Some(value))
        }
        ClosedPoint::Infinity => {
            if s.deg0() % 2 == 1 {
                return Ok(None);
            }
            // s is monic, so the leading data of c * s at infinity is c.
            Ok(Some(ResidueValue::Rational(curve.constant.clone())))
        }
    }
}

/// Whether one point's residue obstructs the plane criterion.
#[derive(Clone, Debug)]
pub enum Contribution {
    Trivial,
    Obstruction(ResidueValue),
    Unsupported(String),
}

/// Residues at every closed point that can carry one: the roots of chi
/// and the point at infinity, in ascending (degree, coefficients) order
/// with infinity last.
pub fn point_contributions(ctx: &ResidueContext) -> Result<Vec<(CliffordResidue, Contribution)>> {
    let curve = build_curve_c(ctx)?;
    let (_, factors) = factor_over_q(&ctx.chi)?;
    let mut points: Vec<ClosedPoint> = factors
        .iter()
        .map(|(f, _)| ClosedPoint::Finite(f.clone()))
        .collect();
    points.sort_by(|a, b| point_key(a).cmp(&point_key(b)));
    points.push(ClosedPoint::Infinity);
    let rows = par::map_range(points.len(), |i| -> Result<(CliffordResidue, Contribution)> {
        let residue = residue_of_clifford(ctx, &points[i])?;
        let contribution = classify_contribution(&residue, &curve, &points[i]);
        Ok((residue, contribution?))
    });
    rows.into_iter().collect()
}

fn point_key(p: &ClosedPoint) -> (usize, Vec<Rat>) {
    match p {
        ClosedPoint::Finite(pi) => (pi.deg0(), pi.coeffs().to_vec()),
        ClosedPoint::Infinity => (usize::MAX, Vec::new()),
    }
}

fn classify_contribution(
    residue: &CliffordResidue,
    curve: &CurveC,
    point: &ClosedPoint,
) -> Result<Contribution> {
    if residue.diagonal.uniformizer_entries.is_empty() {
        return Ok(Contribution::Trivial);
    }
    // A ramified point of the cover doubles the class, killing two-torsion.
    let Some(twist) = cover_twist(curve, point)? else {
        return Ok(Contribution::Trivial);
    };
    let delta = &residue.class;
    let verdict = delta
        .is_square()
        .and_then(|sq| Ok(sq || delta.mul(&twist).is_square()?));
    match verdict {
        Ok(true) => Ok(Contribution::Trivial),
        Ok(false) => Ok(Contribution::Obstruction(delta.clone())),
        Err(Error::UnsupportedResidueField(msg)) => Ok(Contribution::Unsupported(msg)),
        Err(e) => Err(e),
    }
}

/// Outcome of the plane criterion for an eight-variable pencil.
#[derive(Clone, Debug)]
pub enum PlaneCriterionVerdict {
    ResiduesAllTrivial,
    ObstructionAt {
        point: ClosedPoint,
        class: ResidueValue,
    },
    Unsupported {
        reason: String,
    },
}

/// Decides whether the intersection contains a plane over almost every
/// completion: all residues trivial means yes, any surviving residue
/// names a point witnessing failure at infinitely many places.
pub fn plane_criterion(ctx: &ResidueContext) -> Result<PlaneCriterionVerdict> {
    if ctx.pencil.dim() != 8 {
        return Err(Error::Precondition(format!(
            "the plane criterion is stated for forms in eight variables, got {}",
            ctx.pencil.dim()
        )));
    }
    for member in ctx.pencil.singular_members()? {
        if member.rank_at_root <= 5 {
            return Err(Error::Precondition(format!(
                "every singular member must have rank at least 6, found rank {}",
                member.rank_at_root
            )));
        }
    }
    for (residue, contribution) in point_contributions(ctx)? {
        match contribution {
            Contribution::Trivial => {}
            Contribution::Obstruction(class) => {
                return Ok(PlaneCriterionVerdict::ObstructionAt {
                    point: residue.diagonal.point,
                    class,
                })
            }
            Contribution::Unsupported(reason) => {
                return Ok(PlaneCriterionVerdict::Unsupported { reason })
            }
        }
    }
    Ok(PlaneCriterionVerdict::ResiduesAllTrivial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::QuadraticForm;
    use crate::scalars::squares::same_square_class;
    use rand::{Rng, SeedableRng};

    fn diag_pencil(a: &[i64], b: &[i64]) -> ResidueContext {
        let f = QuadraticForm::from_diag(Rationals, &a.iter().map(|&x| rat_int(x)).collect::<Vec<_>>());
        let g = QuadraticForm::from_diag(Rationals, &b.iter().map(|&x| rat_int(x)).collect::<Vec<_>>());
        ResidueContext::new(Pencil::new(f, g).unwrap()).unwrap()
    }

    /// Rank-6 F with two fresh variables in G only.
    fn singular_family(b: &[i64; 8]) -> ResidueContext {
        diag_pencil(&[0, 0, 1, 1, 1, 1, 1, 1], b)
    }

    fn regular_fixture() -> ResidueContext {
        diag_pencil(&[1, 2, 3, 4, 5, 6, 7, 8], &[1; 8])
    }

    fn point_at(coeffs: &[i64]) -> ClosedPoint {
        ClosedPoint::finite(QPoly::from_i64(Rationals, coeffs)).unwrap()
    }

    fn rational_class(v: &ResidueValue) -> BigInt {
        match v {
            ResidueValue::Rational(q) => square_class(q).unwrap(),
            other => panic!("expected a rational residue value, got {:?}", other),
        }
    }

    #[test]
    fn singular_family_splits_two_uniformizers_and_six_units_at_zero() {
        let ctx = singular_family(&[1, 1, 2, 3, 4, 5, 6, 7]);
        let d = dvr_diagonalize(&ctx, &point_at(&[0, 1])).unwrap();
        let t = RatFunc::from_poly(QPoly::from_i64(Rationals, &[0, 1]));
        assert_eq!(d.uniformizer_entries, vec![t.clone(), t]);
        let units: Vec<RatFunc> = (2..=7)
            .map(|b| RatFunc::from_poly(QPoly::from_i64(Rationals, &[1, b])))
            .collect();
        assert_eq!(d.unit_entries, units);
    }

    #[test]
    fn unimodular_points_reduce_to_all_units() {
        let ctx = singular_family(&[1, 1, 2, 3, 4, 5, 6, 7]);
        let r = residue_of_clifford(&ctx, &point_at(&[-1, 1])).unwrap();
        assert!(r.diagonal.uniformizer_entries.is_empty());
        assert_eq!(r.diagonal.unit_entries.len(), 8);
        assert_eq!(rational_class(&r.class), BigInt::from(1));
    }

    #[test]
    fn simple_roots_leave_one_uniformizer() {
        let ctx = regular_fixture();
        let d = dvr_diagonalize(&ctx, &point_at(&[1, 1])).unwrap();
        assert_eq!(d.uniformizer_entries.len(), 1);
        assert_eq!(d.unit_entries.len(), 7);
    }

    #[test]
    fn residue_at_zero_is_the_signed_product_of_the_fresh_coefficients() {
        let ctx = singular_family(&[3, 5, 1, 1, 1, 1, 1, 1]);
        let r = residue_of_clifford(&ctx, &point_at(&[0, 1])).unwrap();
        assert_eq!(rational_class(&r.class), BigInt::from(-15));
    }

    #[test]
    fn hyperbolic_blocks_carry_trivial_residues() {
        // F pairs the variables, G rescales the pairs; every degenerate
        // member drops a full hyperbolic block, whose residue is square.
        let mut fg = Mat::zeros(Rationals, 8, 8);
        let mut gg = Mat::zeros(Rationals, 8, 8);
        for (i, s) in [1i64, -1, 2, 3].iter().enumerate() {
            fg.set(2 * i, 2 * i + 1, rat_int(1));
            fg.set(2 * i + 1, 2 * i, rat_int(1));
            gg.set(2 * i, 2 * i + 1, rat_int(*s));
            gg.set(2 * i + 1, 2 * i, rat_int(*s));
        }
        let pencil = Pencil::new(
            QuadraticForm::new(fg).unwrap(),
            QuadraticForm::new(gg).unwrap(),
        )
        .unwrap();
        let ctx = ResidueContext::new(pencil).unwrap();
        let r = residue_of_clifford(&ctx, &point_at(&[1, 1])).unwrap();
        assert_eq!(r.diagonal.uniformizer_entries.len(), 2);
        assert!(r.class.is_square().unwrap());
    }

    #[test]
    fn even_valuation_jumps_normalize_to_units() {
        // chi = -t^2 but the member at zero only has corank 1: the lost
        // rank hides in a valuation-2 entry, which rescales to a unit.
        let f = QuadraticForm::new(Mat::from_rows(
            Rationals,
            vec![
                vec![rat_int(1), rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(1), rat_int(0)],
                vec![rat_int(0), rat_int(0), rat_int(0)],
            ],
        ))
        .unwrap();
        let g = QuadraticForm::new(Mat::from_rows(
            Rationals,
            vec![
                vec![rat_int(0), rat_int(0), rat_int(1)],
                vec![rat_int(0), rat_int(0), rat_int(0)],
                vec![rat_int(1), rat_int(0), rat_int(0)],
            ],
        ))
        .unwrap();
        let ctx = ResidueContext::new(Pencil::new(f, g).unwrap()).unwrap();
        let d = dvr_diagonalize(&ctx, &point_at(&[0, 1])).unwrap();
        assert!(d.uniformizer_entries.is_empty());
        assert_eq!(d.unit_entries.len(), 3);
    }

    #[test]
    fn degenerate_pencils_are_rejected() {
        // A shared radical vector kills every determinant in the pencil.
        let f = QuadraticForm::from_diag(Rationals, &[rat_int(1), rat_int(0), rat_int(0)]);
        let g = QuadraticForm::from_diag(Rationals, &[rat_int(0), rat_int(1), rat_int(0)]);
        let pencil = Pencil::new(f, g).unwrap();
        assert!(matches!(
            ResidueContext::new(pencil),
            Err(Error::DegeneratePencil)
        ));
    }

    #[test]
    fn curve_of_the_all_ones_family_is_geometrically_reducible() {
        let ctx = singular_family(&[1; 8]);
        let c = build_curve_c(&ctx).unwrap();
        // disc = t^2 (1 + t)^6
        let h = QPoly::from_i64(Rationals, &[0, 1])
            .mul(&QPoly::from_i64(Rationals, &[1, 1]).pow(3));
        assert_eq!(c.square_part, h);
        assert!(c.squarefree_part.is_constant());
        assert!(c.geometrically_reducible);
        assert_eq!(c.constant_class, BigInt::from(1));
    }

    #[test]
    fn curve_of_the_regular_fixture_is_squarefree() {
        let ctx = regular_fixture();
        let c = build_curve_c(&ctx).unwrap();
        assert!(c.square_part.is_constant());
        assert_eq!(c.squarefree_part.deg0(), 8);
        assert!(!c.geometrically_reducible);
    }

    #[test]
    fn constant_discriminant_collapses_the_cover() {
        let f = QuadraticForm::new(Mat::from_rows(
            Rationals,
            vec![
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(1), rat_int(0)],
            ],
        ))
        .unwrap();
        let g = QuadraticForm::from_diag(Rationals, &[rat_int(1), rat_int(0)]);
        let ctx = ResidueContext::new(Pencil::new(f, g).unwrap()).unwrap();
        let c = build_curve_c(&ctx).unwrap();
        assert!(c.square_part.is_constant());
        assert!(c.geometrically_reducible);
        assert_eq!(c.constant_class, BigInt::from(1));
    }

    #[test]
    fn plane_criterion_flags_the_obstruction_in_the_singular_family() {
        let ctx = singular_family(&[1, 1, 2, 3, 4, 5, 6, 7]);
        match plane_criterion(&ctx).unwrap() {
            PlaneCriterionVerdict::ObstructionAt { point, class } => {
                assert_eq!(point.to_string(), "t");
                assert_eq!(rational_class(&class), BigInt::from(-1));
            }
            other => panic!("expected an obstruction, got {:?}", other),
        }
    }

    #[test]
    fn plane_criterion_accepts_the_regular_fixture() {
        assert!(matches!(
            plane_criterion(&regular_fixture()).unwrap(),
            PlaneCriterionVerdict::ResiduesAllTrivial
        ));
    }

    #[test]
    fn infinity_is_inert_and_trivial_for_the_singular_family() {
        // The residue at infinity is a nonsquare, but it matches the
        // cover's twist there, so the point above infinity absorbs it.
        let ctx = singular_family(&[1, 1, 2, 3, 4, 5, 6, 7]);
        let rows = point_contributions(&ctx).unwrap();
        let (residue, contribution) = rows.last().unwrap();
        assert_eq!(residue.diagonal.point, ClosedPoint::Infinity);
        assert_eq!(residue.diagonal.uniformizer_entries.len(), 8);
        assert_eq!(rational_class(&residue.class), BigInt::from(35));
        assert!(matches!(contribution, Contribution::Trivial));
    }

    #[test]
    fn plane_criterion_rejects_low_rank_members_and_odd_dimensions() {
        let ctx = diag_pencil(&[0, 0, 0, 1, 1, 1, 1, 1], &[1, 1, 1, 1, 1, 1, 1, 1]);
        assert!(matches!(
            plane_criterion(&ctx),
            Err(Error::Precondition(m)) if m.contains("rank")
        ));
        let small = diag_pencil(&[1, 2, 3, 4], &[1, 1, 1, 1]);
        assert!(matches!(
            plane_criterion(&small),
            Err(Error::Precondition(m)) if m.contains("eight")
        ));
    }

    fn block_with_quadratic_point() -> ResidueContext {
        // Leading 2x2 block has an irreducible characteristic factor
        // t^2 + 3t + 1; the rest stays diagonal with simple roots.
        let mut rows = vec![vec![rat_int(0); 8]; 8];
        rows[0][0] = rat_int(1);
        rows[0][1] = rat_int(1);
        rows[1][0] = rat_int(1);
        rows[1][1] = rat_int(2);
        for i in 2..8 {
            rows[i][i] = rat_int(i as i64);
        }
        let f = QuadraticForm::new(Mat::from_rows(Rationals, rows)).unwrap();
        let g = QuadraticForm::from_diag(Rationals, &vec![rat_int(1); 8]);
        ResidueContext::new(Pencil::new(f, g).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_points_compute_algebraic_residues() {
        let ctx = block_with_quadratic_point();
        let pi = QPoly::from_i64(Rationals, &[1, 3, 1]);
        let r = residue_of_clifford(&ctx, &ClosedPoint::finite(pi).unwrap()).unwrap();
        assert_eq!(r.diagonal.uniformizer_entries.len(), 1);
        match &r.class {
            ResidueValue::Algebraic { field, .. } => assert_eq!(field.degree(), 2),
            other => panic!("expected an algebraic residue, got {:?}", other),
        }
        // Simple roots everywhere: the cover ramifies over each one and
        // the criterion comes back clean.
        assert!(matches!(
            plane_criterion(&ctx).unwrap(),
            PlaneCriterionVerdict::ResiduesAllTrivial
        ));
    }

    #[test]
    fn cubic_points_surface_as_unsupported() {
        // Two copies of a symmetric matrix with irreducible cubic
        // characteristic polynomial give an even multiplicity there.
        let a = [[1i64, 1, 0], [1, 2, 1], [0, 1, 4]];
        let mut rows = vec![vec![rat_int(0); 8]; 8];
        for copy in 0..2 {
            for i in 0..3 {
                for j in 0..3 {
                    rows[3 * copy + i][3 * copy + j] = rat_int(a[i][j]);
                }
            }
        }
        rows[6][6] = rat_int(1);
        rows[7][7] = rat_int(2);
        let f = QuadraticForm::new(Mat::from_rows(Rationals, rows)).unwrap();
        let g = QuadraticForm::from_diag(Rationals, &vec![rat_int(1); 8]);
        let ctx = ResidueContext::new(Pencil::new(f, g).unwrap()).unwrap();
        assert!(matches!(
            plane_criterion(&ctx).unwrap(),
            PlaneCriterionVerdict::Unsupported { .. }
        ));
    }

    fn same_class(a: &ResidueValue, b: &ResidueValue) -> bool {
        match (a, b) {
            (ResidueValue::Rational(x), ResidueValue::Rational(y)) => {
                same_square_class(x, y).unwrap()
            }
            (ResidueValue::Algebraic { field: fa, .. }, ResidueValue::Algebraic { field: fb, .. }) => {
                fa == fb && a.mul(b).is_square().unwrap()
            }
            _ => false,
        }
    }

    #[test]
    fn residue_classes_survive_unimodular_changes_of_basis() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let fixtures: Vec<(ResidueContext, ClosedPoint)> = vec![
            (
                singular_family(&[1, 1, 2, 3, 4, 5, 6, 7]),
                point_at(&[0, 1]),
            ),
            (regular_fixture(), point_at(&[1, 1])),
            (regular_fixture(), ClosedPoint::Infinity),
        ];
        for (ctx, point) in &fixtures {
            let reference = residue_of_clifford(ctx, point).unwrap().class;
            for _ in 0..50 {
                // A product of integer shears has determinant 1, so it is
                // a unimodular change of basis at every point.
                let mut bmat = Mat::identity(Rationals, 8);
                for _ in 0..6 {
                    let i = rng.gen_range(0..8usize);
                    let mut j = rng.gen_range(0..8usize);
                    if i == j {
                        j = (j + 1) % 8;
                    }
                    let mut shear = Mat::identity(Rationals, 8);
                    shear.set(i, j, rat_int(if rng.gen_bool(0.5) { 1 } else { -1 }));
                    bmat = bmat.matmul(&shear);
                }
                let f2 = QuadraticForm::new(ctx.pencil().f().gram().congruence(&bmat)).unwrap();
                let g2 = QuadraticForm::new(ctx.pencil().g().gram().congruence(&bmat)).unwrap();
                let moved = ResidueContext::new(Pencil::new(f2, g2).unwrap()).unwrap();
                let class = residue_of_clifford(&moved, point).unwrap().class;
                assert!(same_class(&reference, &class));
            }
        }
    }

    #[test]
    fn rational_functions_normalize() {
        let k = FunctionField;
        let a = RatFunc::new(
            QPoly::from_i64(Rationals, &[-1, 0, 1]),
            QPoly::from_i64(Rationals, &[1, 1]),
        );
        assert_eq!(a, RatFunc::from_poly(QPoly::from_i64(Rationals, &[-1, 1])));
        let b = RatFunc::new(
            QPoly::from_i64(Rationals, &[0, 2]),
            QPoly::one(Rationals),
        );
        let inv = k.inv(&b).unwrap();
        assert_eq!(k.mul(&b, &inv), k.one());
        assert!(inv.den().leading() == Some(&rat_int(1)));
    }
}
