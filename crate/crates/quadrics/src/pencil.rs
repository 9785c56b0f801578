//! Pencils of two rational quadratic forms: characteristic polynomial,
//! the singular-member table over number fields, the eight-variable case
//! taxonomy, the real signature sweep, and the four-rank-6 orthogonal
//! decomposition over a splitting field.

pub mod splitting;

use crate::error::Error;
use crate::forms::{Mat, QuadraticForm};
use crate::par;
use crate::scalars::factor::factor_over_q;
use crate::scalars::field::Field;
use crate::scalars::numberfield::{NfElem, NumberField};
use crate::scalars::poly::Poly;
use crate::scalars::sturm::{isolate_real_roots, simplest_rational_in};
use crate::scalars::{rat_int, QPoly, Rat, Rationals};
use crate::Result;
use num_traits::{One, Zero};

/// The pencil spanned by two non-proportional forms of equal dimension.
#[derive(Clone, Debug)]
pub struct Pencil {
    f: QuadraticForm<Rationals>,
    g: QuadraticForm<Rationals>,
}

/// Where a singular member lives on the projective line of the pencil.
#[derive(Clone, Debug)]
pub enum MemberLocus {
    /// The member G at (lambda : mu) = (0 : 1).
    AtInfinity,
    /// The Galois orbit of roots of one irreducible monic factor of
    /// det(F + tG), with its residue field.
    Factor { poly: QPoly, field: NumberField },
}

/// One line of the singular-member table: a Galois orbit of singular
/// members with its multiplicity in the characteristic polynomial and the
/// common rank at the orbit's roots.
#[derive(Clone, Debug)]
pub struct SingularMember {
    pub locus: MemberLocus,
    pub multiplicity: u32,
    pub rank_at_root: usize,
    pub degree_of_definition: usize,
}

/// Case taxonomy for pencils in eight variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PencilTag {
    DegeneratePencil,
    RankAtMost5,
    Rank6OverBase,
    ConjugateRank6Pair,
    ThreeRank6Cubic,
    FourRank6,
    Regular,
}

impl PencilTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            PencilTag::DegeneratePencil => "DegeneratePencil",
            PencilTag::RankAtMost5 => "RankAtMost5",
            PencilTag::Rank6OverBase => "Rank6OverBase",
            PencilTag::ConjugateRank6Pair => "ConjugateRank6Pair",
            PencilTag::ThreeRank6Cubic => "ThreeRank6Cubic",
            PencilTag::FourRank6 => "FourRank6",
            PencilTag::Regular => "Regular",
        }
    }
}

/// Classification result: the tag, the members justifying it, and whether
/// the dimension is outside the eight-variable taxonomy (in which case
/// only the degenerate / corank >= 3 / regular split is meaningful).
#[derive(Clone, Debug)]
pub struct PencilClass {
    pub tag: PencilTag,
    pub evidence: Vec<SingularMember>,
    pub out_of_taxonomy: bool,
}

/// A rational point of the pencil's projective line.
#[derive(Clone, PartialEq, Debug)]
pub enum PencilPoint {
    /// F + tG at a finite parameter t, i.e. (1 : t).
    Finite(Rat),
    /// The member G, i.e. (0 : 1).
    Infinity,
}

/// Output of the real signature sweep.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub point: PencilPoint,
    pub signature: (usize, usize),
}

impl Pencil {
    /// Builds a pencil; the two forms must have the same number of
    /// variables and be linearly independent (this excludes zero forms).
    pub fn new(f: QuadraticForm<Rationals>, g: QuadraticForm<Rationals>) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(Error::InvalidForm(format!(
                "dimension mismatch: {} vs {}",
                f.dim(),
                g.dim()
            )));
        }
        let n = f.dim();
        let mut rows = Vec::with_capacity(2);
        for q in [&f, &g] {
            let mut row = Vec::with_capacity(n * n);
            for i in 0..n {
                row.extend(q.gram().row(i).iter().cloned());
            }
            rows.push(row);
        }
        if Mat::from_rows(Rationals, rows).rank() < 2 {
            return Err(Error::ProportionalForms);
        }
        Ok(Pencil { f, g })
    }

    pub fn f(&self) -> &QuadraticForm<Rationals> {
        &self.f
    }

    pub fn g(&self) -> &QuadraticForm<Rationals> {
        &self.g
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// The member F + tG.
    pub fn form_at(&self, t: &Rat) -> QuadraticForm<Rationals> {
        QuadraticForm::new(self.f.gram().add(&self.g.gram().scale(t)))
            .expect("sum of symmetric matrices is symmetric")
    }

    /// The member at a projective point of the pencil line.
    pub fn form_at_point(&self, p: &PencilPoint) -> QuadraticForm<Rationals> {
        match p {
            PencilPoint::Finite(t) => self.form_at(t),
            PencilPoint::Infinity => self.g.clone(),
        }
    }

    /// The pencil (aF + bG, cF + dG); the new pair must stay independent,
    /// i.e. ad - bc != 0.
    pub fn reparametrize(&self, a: i64, b: i64, c: i64, d: i64) -> Result<Pencil> {
        if a * d - b * c == 0 {
            return Err(Error::InvalidForm("singular pencil base change".into()));
        }
        let m1 = self
            .f
            .gram()
            .scale(&rat_int(a))
            .add(&self.g.gram().scale(&rat_int(b)));
        let m2 = self
            .f
            .gram()
            .scale(&rat_int(c))
            .add(&self.g.gram().scale(&rat_int(d)));
        Pencil::new(QuadraticForm::new(m1)?, QuadraticForm::new(m2)?)
    }

    /// chi(t) = det(F + tG), computed exactly by interpolation at the
    /// integers 0..=dim, together with rank(G) for the point at infinity.
    pub fn char_poly(&self) -> (QPoly, usize) {
        let n = self.dim();
        let values = par::map_range(n + 1, |i| self.form_at(&rat_int(i as i64)).det());
        let points: Vec<(Rat, Rat)> = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (rat_int(i as i64), v))
            .collect();
        (lagrange_interpolate(&points), self.g.rank())
    }

    /// The singular-member table. Errors with DegeneratePencil when every
    /// member is singular (chi identically zero).
    pub fn singular_members(&self) -> Result<Vec<SingularMember>> {
        let n = self.dim();
        let (chi, g_rank) = self.char_poly();
        if chi.is_zero() {
            return Err(Error::DegeneratePencil);
        }
        let (_, factors) = factor_over_q(&chi)?;
        let ranks = par::map_range(factors.len(), |i| self.rank_at_factor(&factors[i].0));
        let mut out = Vec::new();
        for ((q, mult), rank) in factors.iter().zip(ranks) {
            let rank = rank?;
            let member = SingularMember {
                locus: MemberLocus::Factor {
                    poly: q.clone(),
                    field: NumberField::new(q.clone())?,
                },
                multiplicity: *mult,
                rank_at_root: rank,
                degree_of_definition: q.deg0(),
            };
            debug_assert!(member.multiplicity as usize >= n - rank);
            out.push(member);
        }
        let chi_deg = chi.deg0();
        if g_rank < n {
            debug_assert!(chi_deg <= g_rank);
            out.push(SingularMember {
                locus: MemberLocus::AtInfinity,
                multiplicity: (n - chi_deg) as u32,
                rank_at_root: g_rank,
                degree_of_definition: 1,
            });
        }
        Ok(out)
    }

    /// Rank of F + theta*G over Q[theta]/(q) for an irreducible monic q.
    /// rank of F + theta G over Q(theta) for theta a root of the monic
    /// irreducible q. For d = deg q > 1 this is computed as a rational
    /// rank: F tensor I_d + G tensor C has kernel equal to the kernel
    /// over Q(theta) viewed as a Q-space, where C is the companion
    /// matrix of q, so the rank over the number field is the rational
    /// rank divided by d. This stays in BigRational arithmetic instead
    /// of eliminating over the extension field.
    fn rank_at_factor(&self, q: &QPoly) -> Result<usize> {
        let n = self.dim();
        let d = q.deg0();
        if d == 0 {
            return Err(Error::PolyInput("constant factor has no root".into()));
        }
        if d == 1 {
            let theta = -q.coeff(0).clone();
            return Ok(self.form_at(&theta).rank());
        }
        let mut big = Mat::zeros(Rationals, n * d, n * d);
        for i in 0..n {
            for j in 0..n {
                let fe = self.f.gram().get(i, j).clone();
                let ge = self.g.gram().get(i, j).clone();
                // block = fe * I_d + ge * C, with C the companion matrix
                // of q acting on the power basis (column k holds theta^{k+1}).
                for k in 0..d {
                    let v = big.get(i * d + k, j * d + k).clone() + &fe;
                    big.set(i * d + k, j * d + k, v);
                    if k + 1 < d {
                        let v = big.get(i * d + k + 1, j * d + k).clone() + &ge;
                        big.set(i * d + k + 1, j * d + k, v);
                    } else {
                        for row in 0..d {
                            let v = big.get(i * d + row, j * d + k).clone()
                                - &ge * q.coeff(row);
                            big.set(i * d + row, j * d + k, v);
                        }
                    }
                }
            }
        }
        let r = big.rank_modular();
        debug_assert_eq!(r % d, 0, "kernel of a K-linear map is a K-space");
        Ok(r / d)
    }

    /// The case taxonomy. Dimensions other than 8 get only the
    /// degenerate / corank >= 3 / regular split, flagged out-of-taxonomy.
    pub fn classify(&self) -> Result<PencilClass> {
        let n = self.dim();
        let out_of_taxonomy = n != 8;
        let members = match self.singular_members() {
            Ok(m) => m,
            Err(Error::DegeneratePencil) => {
                return Ok(PencilClass {
                    tag: PencilTag::DegeneratePencil,
                    evidence: vec![],
                    out_of_taxonomy,
                })
            }
            Err(e) => return Err(e),
        };
        // Corank >= 3 members trump everything after degeneracy.
        let low: Vec<SingularMember> = members
            .iter()
            .filter(|m| m.rank_at_root + 3 <= n)
            .cloned()
            .collect();
        if !low.is_empty() {
            return Ok(PencilClass {
                tag: PencilTag::RankAtMost5,
                evidence: low,
                out_of_taxonomy,
            });
        }
        if out_of_taxonomy {
            return Ok(PencilClass {
                tag: PencilTag::Regular,
                evidence: members,
                out_of_taxonomy,
            });
        }
        // Census of rank-6 members; each geometric one has multiplicity
        // >= 2, so the orbit degrees can only sum to at most 4.
        let rank6: Vec<SingularMember> = members
            .iter()
            .filter(|m| m.rank_at_root == 6)
            .cloned()
            .collect();
        let geometric_count: usize = rank6.iter().map(|m| m.degree_of_definition).sum();
        let tag = if rank6.is_empty() {
            return Ok(PencilClass {
                tag: PencilTag::Regular,
                evidence: members,
                out_of_taxonomy,
            });
        } else if geometric_count == 4 {
            PencilTag::FourRank6
        } else if rank6.iter().any(|m| m.degree_of_definition == 1) {
            PencilTag::Rank6OverBase
        } else if rank6.iter().any(|m| m.degree_of_definition == 2) {
            PencilTag::ConjugateRank6Pair
        } else {
            debug_assert!(rank6.iter().any(|m| m.degree_of_definition == 3));
            PencilTag::ThreeRank6Cubic
        };
        Ok(PencilClass {
            tag,
            evidence: rank6,
            out_of_taxonomy,
        })
    }

    /// Finds a nonsingular rational member with |n+ - n-| <= 2 by sampling
    /// F first, then the member at infinity, then one point beyond each
    /// extreme of the real root locus of chi and the smallest-denominator
    /// rational between consecutive root-isolating intervals.
    ///
    /// Requires every geometric member to have rank >= dim - 2.
    pub fn mordell_sweep(&self) -> Result<SweepResult> {
        let n = self.dim();
        let members = self.singular_members()?;
        if let Some(m) = members.iter().find(|m| m.rank_at_root + 3 <= n) {
            return Err(Error::Precondition(format!(
                "sweep needs all members of rank >= {}, found rank {}",
                n - 2,
                m.rank_at_root
            )));
        }
        let (chi, g_rank) = self.char_poly();

        let mut points: Vec<PencilPoint> = vec![];
        if !chi.eval(&rat_int(0)).is_zero() {
            points.push(PencilPoint::Finite(rat_int(0)));
        }
        if g_rank == n {
            points.push(PencilPoint::Infinity);
        }
        let intervals = isolate_real_roots(&chi);
        if let Some((lo, _)) = intervals.first() {
            points.push(PencilPoint::Finite(lo - rat_int(1)));
        }
        if let Some((_, hi)) = intervals.last() {
            points.push(PencilPoint::Finite(hi + rat_int(1)));
        }
        for w in intervals.windows(2) {
            let gap = simplest_rational_in(&w[0].1, &w[1].0);
            debug_assert!(!chi.eval(&gap).is_zero());
            points.push(PencilPoint::Finite(gap));
        }

        for p in points {
            let form = self.form_at_point(&p);
            let (pos, neg, zero) = form.signature()?;
            debug_assert_eq!(zero, 0, "sample landed on a singular member");
            if pos.abs_diff(neg) <= 2 {
                return Ok(SweepResult {
                    point: p,
                    signature: (pos, neg),
                });
            }
        }
        Err(Error::Internal(
            "signature sweep exhausted without a balanced member".into(),
        ))
    }

    /// Orthogonal decomposition for the four-rank-6 case; see
    /// [`splitting`] for the splitting-field construction.
    pub fn four_rank6_decompose(&self) -> Result<FourRank6Decomposition> {
        let class = self.classify()?;
        if class.tag != PencilTag::FourRank6 {
            return Err(Error::Precondition(format!(
                "decomposition needs the four-rank-6 case, pencil is {}",
                class.tag.as_str()
            )));
        }
        let (a_combo, b_combo) = self.nondegenerate_pair()?;
        let a = self.combo_gram(a_combo);
        let b = self.combo_gram(b_combo);

        // det(A + tB) has four distinct roots of multiplicity 2.
        let chi = char_poly_of_grams(&a, &b);
        let (_, factors) = factor_over_q(&chi)?;
        debug_assert!(factors.iter().all(|(_, m)| *m == 2));
        let parts: Vec<QPoly> = factors.iter().map(|(q, _)| q.clone()).collect();
        let split = splitting::split_roots(&parts)?;
        let k = split.field.clone();
        if split.roots.len() != 4 {
            return Err(Error::Internal(format!(
                "expected 4 roots, found {}",
                split.roots.len()
            )));
        }

        let ak = a.map(k.clone(), |e| k.from_rat(e.clone()));
        let bk = b.map(k.clone(), |e| k.from_rat(e.clone()));
        let mut eigenspaces = vec![];
        let mut induced = vec![];
        let mut alphas = vec![];
        for t in &split.roots {
            let m = ak.add(&bk.scale(t));
            let kernel = m.kernel();
            if kernel.len() != 2 {
                return Err(Error::Internal(format!(
                    "rank-6 member has kernel of dimension {}",
                    kernel.len()
                )));
            }
            let phi = restrict_gram(&k, &ak, &kernel);
            if k.is_zero(&phi.det()) {
                return Err(Error::Internal(
                    "induced binary form is degenerate".into(),
                ));
            }
            let alpha = k.inv(&k.neg(t)).expect("root of det(A+tB) is nonzero");
            // B restricted must equal alpha * phi exactly.
            let psi = restrict_gram(&k, &bk, &kernel);
            for i in 0..2 {
                for j in 0..2 {
                    let want = k.mul(&alpha, phi.get(i, j));
                    if psi.get(i, j) != &want {
                        return Err(Error::Internal(
                            "induced forms are not proportional as claimed".into(),
                        ));
                    }
                }
            }
            eigenspaces.push(kernel);
            induced.push(phi);
            alphas.push(alpha);
        }

        // Orthogonality across distinct eigenspaces, for both forms.
        for i in 0..4 {
            for j in 0..i {
                for v in &eigenspaces[i] {
                    for w in &eigenspaces[j] {
                        for gram in [&ak, &bk] {
                            let mut acc = k.zero();
                            let gw = gram.mul_vec(w);
                            for (x, y) in v.iter().zip(&gw) {
                                acc = k.add(&acc, &k.mul(x, y));
                            }
                            if !k.is_zero(&acc) {
                                return Err(Error::Internal(
                                    "eigenspaces are not orthogonal".into(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        // The eight vectors together must span.
        let all_rows: Vec<Vec<NfElem>> = eigenspaces.iter().flatten().cloned().collect();
        let full = Mat::from_rows(k.clone(), all_rows);
        if full.rank() != self.dim() {
            return Err(Error::Internal("eigenspaces do not span".into()));
        }

        Ok(FourRank6Decomposition {
            field: k,
            roots: split.roots,
            member_a: a_combo,
            member_b: b_combo,
            eigenspaces,
            induced_forms: induced,
            scalars: alphas,
        })
    }

    /// Two independent small-height members with nonzero determinant,
    /// scanned in a fixed order starting from F and G themselves.
    fn nondegenerate_pair(&self) -> Result<((i64, i64), (i64, i64))> {
        let mut found: Vec<(i64, i64)> = vec![];
        for (a, b) in combo_candidates(20) {
            if let Some(prev) = found.first() {
                // Distinct projective points only.
                if prev.0 as i128 * b as i128 == prev.1 as i128 * a as i128 {
                    continue;
                }
            }
            let gram = self.combo_gram((a, b));
            if !gram.det().is_zero() {
                found.push((a, b));
                if found.len() == 2 {
                    return Ok((found[0], found[1]));
                }
            }
        }
        Err(Error::Precondition(
            "no nondegenerate members of height <= 20 found".into(),
        ))
    }

    fn combo_gram(&self, (a, b): (i64, i64)) -> Mat<Rationals> {
        self.f
            .gram()
            .scale(&rat_int(a))
            .add(&self.g.gram().scale(&rat_int(b)))
    }
}

/// The four-rank-6 decomposition over its splitting field: V splits as an
/// orthogonal (for both forms) direct sum of the four 2-dimensional
/// kernels, and on each block the two chosen members are proportional.
#[derive(Clone, Debug)]
pub struct FourRank6Decomposition {
    pub field: NumberField,
    /// Roots t_i of det(A + tB), one per block.
    pub roots: Vec<NfElem>,
    /// A = member_a.0 * F + member_a.1 * G, nondegenerate.
    pub member_a: (i64, i64),
    /// B likewise.
    pub member_b: (i64, i64),
    /// Kernel bases of A + t_i B, each of dimension 2.
    pub eigenspaces: Vec<Vec<Vec<NfElem>>>,
    /// phi_i = A restricted to the i-th block (2x2 Gram matrices).
    pub induced_forms: Vec<Mat<NumberField>>,
    /// alpha_i = -1/t_i, with B|_i = alpha_i * phi_i.
    pub scalars: Vec<NfElem>,
}

/// Coprime integer pairs (a, b), first nonzero coordinate positive,
/// ordered by height then lexicographically, starting with (1,0), (0,1).
fn combo_candidates(max_height: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0), (0, 1)];
    for h in 1..=max_height {
        for a in -h..=h {
            for b in -h..=h {
                if a.abs().max(b.abs()) != h || (a, b) == (1, 0) || (a, b) == (0, 1) {
                    continue;
                }
                if num_integer::gcd(a, b) != 1 {
                    continue;
                }
                if a < 0 || (a == 0 && b < 0) {
                    continue;
                }
                out.push((a, b));
            }
        }
    }
    out
}

fn char_poly_of_grams(a: &Mat<Rationals>, b: &Mat<Rationals>) -> QPoly {
    let n = a.rows();
    let points: Vec<(Rat, Rat)> = (0..=n)
        .map(|i| {
            let t = rat_int(i as i64);
            (t.clone(), a.add(&b.scale(&t)).det())
        })
        .collect();
    lagrange_interpolate(&points)
}

fn restrict_gram(
    k: &NumberField,
    gram: &Mat<NumberField>,
    basis: &[Vec<NfElem>],
) -> Mat<NumberField> {
    let b = Mat::from_rows(k.clone(), basis.to_vec()).transpose();
    gram.congruence(&b)
}

/// Exact Lagrange interpolation through distinct rational nodes.
fn lagrange_interpolate(points: &[(Rat, Rat)]) -> QPoly {
    let mut acc: QPoly = Poly::zero(Rationals);
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term: QPoly = Poly::constant(Rationals, yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            // (x - xj) / (xi - xj)
            let denom = xi - xj;
            let lin = Poly::new(Rationals, vec![-xj.clone(), rat_int(1)]);
            term = term.mul(&lin).scale(&(Rat::one() / denom));
        }
        acc = acc.add(&term);
    }
    acc
}
