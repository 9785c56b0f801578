//! JSON schemas for form and pencil input files and for the analysis
//! report, plus the assembly of a full report from a pencil.
//!
//! Everything crosses the JSON boundary as strings of exact rationals
//! ("p/q" or "p"), so reports round-trip losslessly. Schema version 1;
//! unknown fields are rejected on load. Sections whose preconditions do
//! not hold carry the skip reason instead of data, so a report is always
//! complete JSON even when parts of the analysis do not apply.

use crate::local::{checking_places, witt_index_local, LocalPlace, WittData};
use crate::pencil::{
    FourRank6Decomposition, MemberLocus, Pencil, PencilClass, PencilPoint, PencilTag,
    SingularMember, SweepResult,
};
use crate::residues::{
    build_curve_c, plane_criterion, point_contributions, Contribution, PlaneCriterionVerdict,
    ResidueContext, ResidueValue,
};
use crate::scalars::{NfElem, NumberField, QPoly, Rat, Rationals};
use crate::forms::{Mat, QuadraticForm};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::str::FromStr;

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// An exact rational carried through JSON as its canonical string.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatJson(pub Rat);

impl Serialize for RatJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RatJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s)
            .map(RatJson)
            .ok_or_else(|| D::Error::custom(format!("not a rational number: {:?}", s)))
    }
}

fn parse_rat(s: &str) -> Option<Rat> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

fn grid_to_json(m: &Mat<Rationals>) -> Vec<Vec<RatJson>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().cloned().map(RatJson).collect())
        .collect()
}

fn rats_to_json(v: &[Rat]) -> Vec<RatJson> {
    v.iter().cloned().map(RatJson).collect()
}

fn nf_to_json(e: &NfElem) -> Vec<RatJson> {
    rats_to_json(&e.0)
}

/// On-disk description of a single quadratic form, `{"n": 3, "gram": [[..]]}`.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct FormInput {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub n: usize,
    pub gram: Vec<Vec<RatJson>>,
}

impl FormInput {
    pub fn from_form(q: &QuadraticForm<Rationals>) -> Self {
        FormInput {
            schema: SCHEMA_VERSION,
            n: q.dim(),
            gram: grid_to_json(q.gram()),
        }
    }

    pub fn to_form(&self) -> Result<QuadraticForm<Rationals>> {
        check_schema(self.schema)?;
        QuadraticForm::new(grid_from_json(self.n, &self.gram, "gram")?)
    }
}

/// On-disk description of a pencil, `{"n": 8, "F": [[..]], "G": [[..]]}`.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct PencilInput {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub n: usize,
    #[serde(rename = "F")]
    pub f: Vec<Vec<RatJson>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<RatJson>>,
}

impl PencilInput {
    pub fn from_pencil(x: &Pencil) -> Self {
        PencilInput {
            schema: SCHEMA_VERSION,
            n: x.dim(),
            f: grid_to_json(x.f().gram()),
            g: grid_to_json(x.g().gram()),
        }
    }

    pub fn to_pencil(&self) -> Result<Pencil> {
        check_schema(self.schema)?;
        let f = QuadraticForm::new(grid_from_json(self.n, &self.f, "F")?)?;
        let g = QuadraticForm::new(grid_from_json(self.n, &self.g, "G")?)?;
        Pencil::new(f, g)
    }
}

fn check_schema(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::InvalidForm(format!(
            "unsupported schema version {}, this tool reads version {}",
            v, SCHEMA_VERSION
        )));
    }
    Ok(())
}

fn grid_from_json(n: usize, rows: &[Vec<RatJson>], name: &str) -> Result<Mat<Rationals>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidForm(format!(
            "{} must be an {}x{} matrix to match n",
            name, n, n
        )));
    }
    Ok(Mat::from_rows(
        Rationals,
        rows.iter()
            .map(|r| r.iter().map(|c| c.0.clone()).collect())
            .collect(),
    ))
}

/// A report section that either holds data or explains why it was skipped.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
#[serde(bound(deserialize = "T: serde::Deserialize<'de>"))]
pub struct Section<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl<T> Section<T> {
    fn done(data: T) -> Self {
        Section {
            data: Some(data),
            skipped: None,
        }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Section {
            data: None,
            skipped: Some(reason.into()),
        }
    }

    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(data) => Section::done(data),
            Err(e) => Section::skipped(e.to_string()),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ChiFactor {
    /// Coefficients of the monic irreducible factor, ascending in t.
    pub coeffs: Vec<RatJson>,
    pub display: String,
    pub multiplicity: u32,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ChiSection {
    /// Leading constant of det(F + tG); "0" for a degenerate pencil.
    pub constant: RatJson,
    pub degree: usize,
    pub factors: Vec<ChiFactor>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct MemberRow {
    /// "infinity" for the member G, else the irreducible factor in t.
    pub factor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<RatJson>>,
    pub multiplicity: u32,
    pub rank: usize,
    pub degree: usize,
}

impl MemberRow {
    fn from_member(m: &SingularMember) -> Self {
        let (factor, coeffs) = match &m.locus {
            MemberLocus::AtInfinity => ("infinity".to_string(), None),
            MemberLocus::Factor { poly, .. } => (
                poly.to_string_var("t"),
                Some(rats_to_json(poly.coeffs())),
            ),
        };
        MemberRow {
            factor,
            coeffs,
            multiplicity: m.multiplicity,
            rank: m.rank_at_root,
            degree: m.degree_of_definition,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ClassSection {
    pub tag: String,
    pub out_of_taxonomy: bool,
    pub evidence: Vec<MemberRow>,
}

impl ClassSection {
    fn from_class(c: &PencilClass) -> Self {
        ClassSection {
            tag: c.tag.as_str().to_string(),
            out_of_taxonomy: c.out_of_taxonomy,
            evidence: c.evidence.iter().map(MemberRow::from_member).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct WittRow {
    /// "real" or the prime as a decimal string.
    pub place: String,
    pub dim: usize,
    pub radical_dim: usize,
    /// Squarefree integer representing the discriminant square class.
    pub disc_class: String,
    pub hasse: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize)>,
    pub witt_index: usize,
}

impl WittRow {
    pub fn from_witt(w: &WittData) -> Self {
        WittRow {
            place: w.place.to_string(),
            dim: w.dim,
            radical_dim: w.radical_dim,
            disc_class: w.disc_class.to_string(),
            hasse: w.hasse,
            signature: w.signature,
            witt_index: w.witt_index,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SweepSection {
    /// "infinity" or the parameter t of the returned member F + tG.
    pub point: String,
    pub signature: (usize, usize),
}

impl SweepSection {
    fn from_sweep(s: &SweepResult) -> Self {
        let point = match &s.point {
            PencilPoint::Finite(t) => t.to_string(),
            PencilPoint::Infinity => "infinity".to_string(),
        };
        SweepSection {
            point,
            signature: s.signature,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct FourRank6Json {
    /// Minimal polynomial of the splitting field, ascending coefficients.
    pub field: Vec<RatJson>,
    pub field_display: String,
    /// The four roots as coordinate vectors in the power basis.
    pub roots: Vec<Vec<RatJson>>,
    pub member_a: (i64, i64),
    pub member_b: (i64, i64),
    /// Basis vectors of each eigenspace; coordinates are power-basis vectors.
    pub eigenspaces: Vec<Vec<Vec<Vec<RatJson>>>>,
    pub induced_forms: Vec<Vec<Vec<Vec<RatJson>>>>,
    pub scalars: Vec<Vec<RatJson>>,
}

impl FourRank6Json {
    fn from_decomposition(d: &FourRank6Decomposition) -> Self {
        let nf_mat = |m: &Mat<NumberField>| -> Vec<Vec<Vec<RatJson>>> {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(nf_to_json).collect())
                .collect()
        };
        FourRank6Json {
            field: rats_to_json(d.field.minpoly().coeffs()),
            field_display: d.field.minpoly().to_string_var("x"),
            roots: d.roots.iter().map(nf_to_json).collect(),
            member_a: d.member_a,
            member_b: d.member_b,
            eigenspaces: d
                .eigenspaces
                .iter()
                .map(|basis| {
                    basis
                        .iter()
                        .map(|v| v.iter().map(nf_to_json).collect())
                        .collect()
                })
                .collect(),
            induced_forms: d.induced_forms.iter().map(nf_mat).collect(),
            scalars: d.scalars.iter().map(nf_to_json).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ResidueClassJson {
    /// Minimal polynomial of the residue field when it is not Q.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<Vec<RatJson>>,
    /// The class: one rational, or power-basis coordinates.
    pub coords: Vec<RatJson>,
    pub display: String,
}

impl ResidueClassJson {
    fn from_value(v: &ResidueValue) -> Self {
        match v {
            ResidueValue::Rational(q) => ResidueClassJson {
                minpoly: None,
                coords: vec![RatJson(q.clone())],
                display: v.to_display(),
            },
            ResidueValue::Algebraic { field, value } => ResidueClassJson {
                minpoly: Some(rats_to_json(field.minpoly().coeffs())),
                coords: nf_to_json(value),
                display: v.to_display(),
            },
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ResidueRow {
    /// "infinity" or the monic irreducible polynomial in t.
    pub point: String,
    pub units: Vec<String>,
    pub uniformizers: Vec<String>,
    pub residue_class: ResidueClassJson,
    /// "trivial", "obstruction", or "unsupported: <reason>".
    pub verdict_contribution: String,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CurveSection {
    pub constant: RatJson,
    pub square_part: String,
    pub squarefree_part: String,
    pub constant_class: String,
    pub geometrically_reducible: bool,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ResidueSection {
    pub curve: CurveSection,
    pub points: Vec<ResidueRow>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct VerdictJson {
    /// "residues-all-trivial", "obstruction", or "unsupported".
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ResidueClassJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl VerdictJson {
    pub fn from_verdict(v: &PlaneCriterionVerdict) -> Self {
        match v {
            PlaneCriterionVerdict::ResiduesAllTrivial => VerdictJson {
                verdict: "residues-all-trivial".to_string(),
                point: None,
                class: None,
                reason: None,
            },
            PlaneCriterionVerdict::ObstructionAt { point, class } => VerdictJson {
                verdict: "obstruction".to_string(),
                point: Some(point.to_string()),
                class: Some(ResidueClassJson::from_value(class)),
                reason: None,
            },
            PlaneCriterionVerdict::Unsupported { reason } => VerdictJson {
                verdict: "unsupported".to_string(),
                point: None,
                class: None,
                reason: Some(reason.clone()),
            },
        }
    }
}

/// The full output of `analyze`: every section the input supports, with
/// skip reasons for the rest.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct AnalysisReport {
    pub schema: u32,
    pub input: PencilInput,
    pub chi: ChiSection,
    pub members: Section<Vec<MemberRow>>,
    pub class: ClassSection,
    pub witt_f: Vec<WittRow>,
    pub witt_g: Vec<WittRow>,
    pub mordell_sweep: Section<SweepSection>,
    pub four_rank6: Section<FourRank6Json>,
    pub residues: Section<ResidueSection>,
    pub plane_criterion: Section<VerdictJson>,
    pub warnings: Vec<String>,
}

/// Places to report on when the caller does not name any: the real place
/// plus every prime dividing 2 or a diagonal entry of either form.
pub fn default_places(x: &Pencil) -> Result<Vec<LocalPlace>> {
    let mut entries: Vec<Rat> = Vec::new();
    for q in [x.f(), x.g()] {
        entries.extend(q.diagonalize()?.diag.into_iter().filter(|e| !e.is_zero()));
    }
    checking_places(&entries)
}

/// The checking places of a single form, read off its diagonalization.
pub fn default_places_form(q: &QuadraticForm<Rationals>) -> Result<Vec<LocalPlace>> {
    let entries: Vec<Rat> = q
        .diagonalize()?
        .diag
        .into_iter()
        .filter(|e| !e.is_zero())
        .collect();
    checking_places(&entries)
}

fn chi_section(chi: &QPoly) -> Result<ChiSection> {
    if chi.is_zero() {
        return Ok(ChiSection {
            constant: RatJson(Rat::zero()),
            degree: 0,
            factors: vec![],
        });
    }
    let (constant, factors) = crate::scalars::factor::factor_over_q(chi)?;
    Ok(ChiSection {
        constant: RatJson(constant),
        degree: chi.deg0(),
        factors: factors
            .iter()
            .map(|(f, m)| ChiFactor {
                coeffs: rats_to_json(f.coeffs()),
                display: f.to_string_var("t"),
                multiplicity: *m,
            })
            .collect(),
    })
}

fn residue_section(x: &Pencil) -> Result<ResidueSection> {
    let ctx = ResidueContext::new(x.clone())?;
    let curve = build_curve_c(&ctx)?;
    let rows = point_contributions(&ctx)?
        .into_iter()
        .map(|(r, c)| ResidueRow {
            point: r.diagonal.point.to_string(),
            units: r.diagonal.unit_entries.iter().map(|e| e.to_display()).collect(),
            uniformizers: r
                .diagonal
                .uniformizer_entries
                .iter()
                .map(|e| e.to_display())
                .collect(),
            residue_class: ResidueClassJson::from_value(&r.class),
            verdict_contribution: match &c {
                Contribution::Trivial => "trivial".to_string(),
                Contribution::Obstruction(_) => "obstruction".to_string(),
                Contribution::Unsupported(reason) => format!("unsupported: {}", reason),
            },
        })
        .collect();
    Ok(ResidueSection {
        curve: CurveSection {
            constant: RatJson(curve.constant.clone()),
            square_part: curve.square_part.to_string_var("t"),
            squarefree_part: curve.squarefree_part.to_string_var("t"),
            constant_class: curve.constant_class.to_string(),
            geometrically_reducible: curve.geometrically_reducible,
        },
        points: rows,
    })
}

/// Builds the JSON residue table alone, for the `residues` CLI command.
pub fn residue_report(x: &Pencil) -> Result<ResidueSection> {
    residue_section(x)
}

/// Runs every analysis the pencil supports at the given places and
/// assembles the report. Sections whose preconditions fail are skipped
/// with the reason; hard errors (internal identity failures) propagate.
pub fn analyze(x: &Pencil, places: &[LocalPlace]) -> Result<AnalysisReport> {
    let (chi, _) = x.char_poly();
    let chi = chi_section(&chi)?;
    let class = x.classify()?;
    let members = Section::from_result(
        x.singular_members()
            .map(|ms| ms.iter().map(MemberRow::from_member).collect()),
    );
    let mut witt_f = Vec::new();
    let mut witt_g = Vec::new();
    for v in places {
        witt_f.push(WittRow::from_witt(&witt_index_local(x.f(), *v)?));
        witt_g.push(WittRow::from_witt(&witt_index_local(x.g(), *v)?));
    }
    let mordell_sweep =
        Section::from_result(x.mordell_sweep().map(|s| SweepSection::from_sweep(&s)));
    let four_rank6 = if class.tag == PencilTag::FourRank6 {
        Section::from_result(
            x.four_rank6_decompose()
                .map(|d| FourRank6Json::from_decomposition(&d)),
        )
    } else {
        Section::skipped(format!(
            "decomposition applies to the FourRank6 case, this pencil is {}",
            class.tag.as_str()
        ))
    };
    let residues = Section::from_result(residue_section(x));
    let plane_criterion = Section::from_result(
        ResidueContext::new(x.clone())
            .and_then(|ctx| plane_criterion(&ctx))
            .map(|v| VerdictJson::from_verdict(&v)),
    );
    let mut warnings = Vec::new();
    if class.out_of_taxonomy {
        warnings.push("out-of-taxonomy dimension".to_string());
    }
    if plane_criterion.data.is_some() {
        warnings.push(
            "geometric integrality of the discriminant cover is not checked".to_string(),
        );
    }
    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        input: PencilInput::from_pencil(x),
        chi,
        members,
        class: ClassSection::from_class(&class),
        witt_f,
        witt_g,
        mordell_sweep,
        four_rank6,
        residues,
        plane_criterion,
        warnings,
    })
}

/// Parses the places echoed in a report back into `LocalPlace` values.
pub fn places_of_report(report: &AnalysisReport) -> Result<Vec<LocalPlace>> {
    report
        .witt_f
        .iter()
        .map(|row| {
            if row.place == "real" {
                Ok(LocalPlace::Real)
            } else {
                let p: u64 = row
                    .place
                    .parse()
                    .map_err(|_| Error::InvalidForm(format!("bad place {:?}", row.place)))?;
                LocalPlace::prime(p)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat_int;

    fn a6_pencil() -> Pencil {
        let f = QuadraticForm::from_diag(
            Rationals,
            &[0, 0, 1, 1, 1, 1, 1, 1].map(rat_int),
        );
        let g = QuadraticForm::from_diag(
            Rationals,
            &[1, 1, 2, 3, 4, 5, 6, 7].map(rat_int),
        );
        Pencil::new(f, g).unwrap()
    }

    #[test]
    fn pencil_input_round_trips_through_json() {
        let x = a6_pencil();
        let input = PencilInput::from_pencil(&x);
        let text = serde_json::to_string_pretty(&input).unwrap();
        let back: PencilInput = serde_json::from_str(&text).unwrap();
        assert_eq!(input, back);
        assert_eq!(back.to_pencil().unwrap().f().gram(), x.f().gram());
    }

    #[test]
    fn unknown_fields_and_bad_rationals_are_rejected() {
        assert!(serde_json::from_str::<PencilInput>(
            r#"{"n": 1, "F": [["1"]], "G": [["2"]], "extra": 0}"#
        )
        .is_err());
        assert!(serde_json::from_str::<PencilInput>(
            r#"{"n": 1, "F": [["1"]], "G": [["x"]]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<PencilInput>(
            r#"{"n": 1, "F": [["1"]], "G": [["1/0"]]}"#
        )
        .is_err());
    }

    #[test]
    fn shape_mismatch_is_a_validation_error() {
        let bad: PencilInput =
            serde_json::from_str(r#"{"n": 2, "F": [["1"]], "G": [["2"]]}"#).unwrap();
        assert!(matches!(bad.to_pencil(), Err(Error::InvalidForm(_))));
    }

    #[test]
    fn analyze_reports_the_obstruction_for_the_singular_family() {
        let report = analyze(&a6_pencil(), &[LocalPlace::Real]).unwrap();
        assert_eq!(report.class.tag, "Rank6OverBase");
        let verdict = report.plane_criterion.data.as_ref().unwrap();
        assert_eq!(verdict.verdict, "obstruction");
        assert_eq!(verdict.point.as_deref(), Some("t"));
        assert_eq!(report.witt_f.len(), 1);
        assert_eq!(report.witt_f[0].radical_dim, 2);
    }

    #[test]
    fn analyze_serializes_and_reanalyzes_to_a_fixed_point() {
        let x = a6_pencil();
        let places = default_places(&x).unwrap();
        let report = analyze(&x, &places).unwrap();
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(report, back);
        let again = analyze(
            &back.input.to_pencil().unwrap(),
            &places_of_report(&back).unwrap(),
        )
        .unwrap();
        assert_eq!(report, again);
    }

    #[test]
    fn skipped_sections_carry_reasons() {
        let f = QuadraticForm::from_diag(Rationals, &[1, 2, 3, 4].map(rat_int));
        let g = QuadraticForm::from_diag(Rationals, &[1, 1, 1, 1].map(rat_int));
        let x = Pencil::new(f, g).unwrap();
        let report = analyze(&x, &[]).unwrap();
        assert!(report.plane_criterion.data.is_none());
        assert!(report
            .plane_criterion
            .skipped
            .as_ref()
            .unwrap()
            .contains("eight"));
        assert!(report.warnings.contains(&"out-of-taxonomy dimension".to_string()));
    }
}
