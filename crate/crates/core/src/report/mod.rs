//! Analysis pipeline: candidate eigen-factors, Jordan sizes `J_k`, the couple's
//! sheets `sigma_k` and Massey lengths `mu_k`, Betti numbers and formality
//! obstruction verdicts.

pub mod fixtures;
pub mod input;
pub mod selfcheck;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::couple::{
    build_couple, closed_form_for, couple_from_cochains, mu, pages, GradedCouple, PageTable, PageTableJson, Sheet,
    DEGREE_OFFSET,
};
use crate::error::{Error, Result};
use crate::jordan::jordan_profile;
use crate::lmodules::{normalize, primary_model, torsion_action, FPModule};
use crate::polyalg::factor::{poly_order, rational_irreducible_factors};
use crate::polyalg::matrix::{charpoly, Mat};
use crate::polyalg::poly::{Poly, PolyRing};
use crate::scalars::{
    format_rational, verify_extension, ExtField, Field, FieldDescriptor, FieldKind, Irreducibility, Rational,
    Rationals, Ring,
};
use crate::toruscx::{
    build_torus_complex, cohomology_monodromy, fiber_from_cohomology_monodromy, milnor_betti, primary_fiber, validate_fiber,
    FiberComplex,
};

use fixtures::Fixture;
use input::{AnalysisInput, EigenvalueSpec, Eigenvalues, Payload};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub degree: i32,
    /// Largest Jordan block `J_k` at the eigen-factor.
    pub j: usize,
    pub blocks: Vec<usize>,
    pub sigma: Sheet,
    pub mu: Option<usize>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub kind: FieldKind,
    pub min_poly: Option<Vec<String>>,
    pub degree: usize,
    pub irreducibility: Irreducibility,
}

impl FieldInfo {
    fn from_descriptor(d: &FieldDescriptor) -> Self {
        FieldInfo {
            kind: d.kind,
            min_poly: d.min_poly.as_ref().map(|m| m.iter().map(format_rational).collect()),
            degree: d.degree,
            irreducibility: d.irreducibility,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenReport {
    /// The eigen-factor in `u`, e.g. `u - 1` or `u^2 + 1`.
    pub factor: String,
    /// Field in which the eigenvalue lives (the residue field of the factor).
    pub field: FieldInfo,
    pub eigenvalue_one: bool,
    pub pages: PageTableJson,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub degree: i32,
    pub factor: String,
    pub block_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: bool,
    pub witness: Option<Witness>,
}

/// Necessary-condition certificates only: `false` means no obstruction was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub not_formal: Verdict,
    pub not_strongly_formal: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub mode: String,
    /// `d_r` leaving `E^k` is governed by `D^(k + degree_offset)`.
    pub degree_offset: i32,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub betti: Option<Vec<usize>>,
    pub eigenvalues: Vec<EigenReport>,
    /// Factors whose irreducibility could not be certified; not analyzed.
    pub unresolved: Vec<String>,
    pub verdicts: Verdicts,
}

enum Source<E> {
    Torus { fiber: FiberComplex<E>, cohomology: Vec<Mat<E>> },
    Modules { min_degree: i32, modules: Vec<FPModule<E>> },
}

impl Source<Rational> {
    fn map_to<F: Field>(&self, f: &F) -> Source<F::Elem> {
        let g = |x: &Rational| f.from_rational(x);
        match self {
            Source::Torus { fiber, cohomology } => Source::Torus {
                fiber: fiber.map_scalars(g),
                cohomology: cohomology.iter().map(|m| m.map(g)).collect(),
            },
            Source::Modules { min_degree, modules } => {
                let ring = PolyRing::new(f.clone());
                Source::Modules {
                    min_degree: *min_degree,
                    modules: modules
                        .iter()
                        .map(|m| normalize(&ring, &FPModule::new(m.presentation.map(|p| ring.from_rationals(p)))))
                        .collect(),
                }
            }
        }
    }
}

fn prepare(payload: &Payload) -> Result<Source<Rational>> {
    let q = Rationals;
    Ok(match payload {
        Payload::Monodromy(maps) => {
            let fiber = fiber_from_cohomology_monodromy(&q, maps);
            validate_fiber(&q, &fiber)?;
            Source::Torus { fiber, cohomology: maps.clone() }
        }
        Payload::Fiber(fiber) => {
            validate_fiber(&q, fiber)?;
            Source::Torus { fiber: fiber.clone(), cohomology: cohomology_monodromy(&q, fiber) }
        }
        Payload::LPresentation { min_degree, modules } => Source::Modules {
            min_degree: *min_degree,
            modules: modules.iter().map(|m| normalize(&PolyRing::new(q), &FPModule::new(m.clone()))).collect(),
        },
    })
}

/// Jordan blocks at `q` of the operator that governs `d_r` leaving `E^k`.
fn blocks_at<F: Field>(f: &F, source: &Source<F::Elem>, k: i32, q: &Poly<F::Elem>) -> Result<Vec<usize>> {
    match source {
        Source::Torus { cohomology, .. } => {
            if k < 0 || k as usize >= cohomology.len() {
                return Ok(vec![]);
            }
            Ok(jordan_profile(f, &cohomology[k as usize], q)?.block_sizes)
        }
        Source::Modules { min_degree, modules } => {
            let idx = k + DEGREE_OFFSET - min_degree;
            if idx < 0 || idx as usize >= modules.len() {
                return Ok(vec![]);
            }
            let ring = PolyRing::new(f.clone());
            let action = torsion_action(&ring, &modules[idx as usize])?;
            Ok(jordan_profile(f, &action.action, q)?.block_sizes)
        }
    }
}

fn couple_for<F: Field>(f: &F, source: &Source<F::Elem>, q: &Poly<F::Elem>) -> Result<GradedCouple<F>> {
    let ring = PolyRing::new(f.clone());
    match source {
        Source::Torus { fiber, .. } => {
            let local = primary_fiber(f, fiber, q);
            couple_from_cochains(&ring, &build_torus_complex(f, &local)?.cochain_complex(), q)
        }
        Source::Modules { min_degree, modules } => {
            let local = modules
                .iter()
                .map(|m| primary_model(&ring, m, q))
                .collect::<Result<Vec<_>>>()?;
            build_couple(&ring, *min_degree, &local, q)
        }
    }
}

fn analyze_factor<F: Field>(
    f: &F,
    source: &Source<F::Elem>,
    q: &Poly<F::Elem>,
    max_page: Option<usize>,
) -> Result<(PageTable, Vec<Row>)> {
    let couple = couple_for(f, source, q)?;
    let degrees: Vec<i32> = couple.degrees().collect();
    let blocks = degrees.iter().map(|&k| blocks_at(f, source, k, q)).collect::<Result<Vec<_>>>()?;
    let j_max = blocks.iter().filter_map(|b| b.first().copied()).max().unwrap_or(0);
    let r_max = max_page.unwrap_or(j_max + 1).max(1);
    let table = pages(&couple, r_max)?;
    if table != closed_form_for(&couple, r_max)? {
        return Err(Error::Integrity(format!(
            "closed-form pages disagree with the derived couples at {}",
            PolyRing::new(f.clone()).display(q, "u")
        )));
    }
    let mus = mu(&table);
    let mut rows = Vec::new();
    for (idx, &k) in degrees.iter().enumerate() {
        let j = blocks[idx].first().copied().unwrap_or(0);
        let sigma = table.sigma[idx];
        let certified = sigma.value().is_some();
        if certified && mus[idx] != Some(j) {
            return Err(Error::Integrity(format!(
                "J_{k} = {j} but mu_{k} = {} at {}",
                mus[idx].unwrap(),
                PolyRing::new(f.clone()).display(q, "u")
            )));
        }
        rows.push(Row { degree: k, j, blocks: blocks[idx].clone(), sigma, mu: mus[idx], certified });
    }
    Ok((table, rows))
}

fn is_eigenvalue_one<F: Field>(f: &F, q: &Poly<F::Elem>) -> bool {
    q.degree() == Some(1) && f.is_zero(&PolyRing::new(f.clone()).eval(q, &f.one()))
}

fn eigen_report<F: Field>(
    f: &F,
    source: &Source<F::Elem>,
    q: &Poly<F::Elem>,
    factor: String,
    field: FieldInfo,
    max_page: Option<usize>,
) -> Result<EigenReport> {
    let (table, rows) = analyze_factor(f, source, q, max_page)?;
    Ok(EigenReport {
        factor,
        field,
        eigenvalue_one: is_eigenvalue_one(f, q),
        pages: table.to_json(),
        rows,
    })
}

/// Irreducible factors of every characteristic polynomial in play, with proof flags.
fn candidate_factors(source: &Source<Rational>) -> Result<Vec<(Poly<Rational>, bool)>> {
    let q = Rationals;
    let mut polys = Vec::new();
    match source {
        Source::Torus { cohomology, .. } => {
            for m in cohomology {
                polys.push(charpoly(&q, m)?);
            }
        }
        Source::Modules { modules, .. } => {
            for m in modules {
                polys.extend(m.normal_form()?.invariant_factors.iter().cloned());
            }
        }
    }
    let mut out: Vec<(Poly<Rational>, bool)> = Vec::new();
    for p in polys.iter().filter(|p| p.degree().unwrap_or(0) > 0) {
        for factor in rational_irreducible_factors(p) {
            match out.iter_mut().find(|(g, _)| *g == factor.factor) {
                Some(entry) => entry.1 &= factor.proven,
                None => out.push((factor.factor, factor.proven)),
            }
        }
    }
    out.sort_by(|a, b| poly_order(&a.0, &b.0));
    Ok(out)
}

/// Report at an irreducible rational factor `p`. On mapping tori a factor of
/// degree above one is analyzed at the linear factor `u - x` over `Q[x]/(p)`,
/// where the matrices shrink to the multiplicity of the root.
fn factor_report(source: &Source<Rational>, p: &Poly<Rational>, max_page: Option<usize>) -> Result<EigenReport> {
    let info = residue_field(p, true);
    let display = PolyRing::new(Rationals).display(p, "u");
    let Source::Torus { fiber, .. } = source else {
        return eigen_report(&Rationals, source, p, display, info, max_page);
    };
    let fiber = primary_fiber(&Rationals, fiber, p);
    let local = Source::Torus { cohomology: cohomology_monodromy(&Rationals, &fiber), fiber };
    if p.degree() == Some(1) {
        return eigen_report(&Rationals, &local, p, display, info, max_page);
    }
    let k = ExtField::new(FieldDescriptor {
        kind: FieldKind::Extension,
        min_poly: Some(p.coeffs().to_vec()),
        degree: info.degree,
        irreducibility: Irreducibility::Proven,
    });
    let q = PolyRing::new(k.clone()).linear(&k.generator());
    eigen_report(&k, &local.map_to(&k), &q, display, info, max_page)
}

fn residue_field(p: &Poly<Rational>, proven: bool) -> FieldInfo {
    let degree = p.degree().unwrap();
    FieldInfo {
        kind: if degree == 1 { FieldKind::BaseRationals } else { FieldKind::Extension },
        min_poly: Some(p.coeffs().iter().map(format_rational).collect()),
        degree,
        irreducibility: if proven { Irreducibility::Proven } else { Irreducibility::Asserted },
    }
}

fn verdict(eigen: &[EigenReport], only_one: bool) -> Verdict {
    let witness = eigen
        .iter()
        .filter(|e| !only_one || e.eigenvalue_one)
        .flat_map(|e| e.rows.iter().map(move |r| (e, r)))
        .find(|(_, r)| r.j >= 2)
        .map(|(e, r)| Witness { degree: r.degree, factor: e.factor.clone(), block_size: r.j });
    Verdict { value: witness.is_some(), witness }
}

pub fn verdicts(eigen: &[EigenReport]) -> Verdicts {
    Verdicts { not_formal: verdict(eigen, true), not_strongly_formal: verdict(eigen, false) }
}

pub fn analyze(input: &AnalysisInput) -> Result<Report> {
    let source = prepare(&input.payload)?;
    let betti = match &source {
        Source::Torus { fiber, .. } => Some(milnor_betti(&Rationals, fiber)),
        Source::Modules { .. } => None,
    };
    let mut eigen = Vec::new();
    let mut unresolved = Vec::new();
    let q_ring = PolyRing::new(Rationals);
    match &input.eigenvalues {
        Eigenvalues::All => {
            for (p, proven) in candidate_factors(&source)? {
                if !proven {
                    unresolved.push(q_ring.display(&p, "u"));
                    continue;
                }
                eigen.push(factor_report(&source, &p, input.max_page)?);
            }
        }
        Eigenvalues::List(list) => {
            for spec in list {
                eigen.push(match spec {
                    EigenvalueSpec::Rational(l) => eigen_report(
                        &Rationals,
                        &source,
                        &q_ring.linear(l),
                        q_ring.display(&q_ring.linear(l), "u"),
                        FieldInfo::from_descriptor(&FieldDescriptor::rationals()),
                        input.max_page,
                    )?,
                    EigenvalueSpec::Algebraic { min_poly, element } => {
                        let desc = verify_extension(min_poly)?;
                        let info = FieldInfo::from_descriptor(&desc);
                        let k = ExtField::new(desc);
                        let lambda = k.element(element.clone())?;
                        if k.is_zero(&lambda) {
                            return Err(Error::ZeroEigenvalue);
                        }
                        let k_ring = PolyRing::new(k.clone());
                        let q = k_ring.linear(&lambda);
                        eigen_report(&k, &source.map_to(&k), &q, k_ring.display(&q, "u"), info, input.max_page)?
                    }
                });
            }
        }
    }
    let verdicts = verdicts(&eigen);
    Ok(Report {
        metadata: Metadata { mode: input.mode().into(), degree_offset: DEGREE_OFFSET, notes: vec![] },
        betti,
        eigenvalues: eigen,
        unresolved,
        verdicts,
    })
}

/// Runs a built-in example, noting where the computed blocks differ from the example's claim.
pub fn analyze_fixture(fixture: &Fixture) -> Result<Report> {
    let mut report = analyze(&fixture.input)?;
    if let Some(n) = fixture.claimed_block {
        let largest = report
            .eigenvalues
            .iter()
            .filter(|e| e.factor == "u + 1")
            .flat_map(|e| e.rows.iter().map(|r| r.j))
            .max()
            .unwrap_or(0);
        if largest != n {
            report.metadata.notes.push(format!(
                "largest Jordan block at eigenvalue -1 over all degrees is {largest}, while the example parameter is n = {n}"
            ));
        }
    }
    Ok(report)
}

fn sheet_text(s: Sheet) -> String {
    match s.value() {
        Some(v) => v.to_string(),
        None => "unstable".into(),
    }
}

fn verdict_text(v: &Verdict) -> String {
    match &v.witness {
        Some(w) => format!("true (degree {}, factor {}, block size {})", w.degree, w.factor, w.block_size),
        None => "false (no obstruction found)".into(),
    }
}

pub fn render_table(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}    degree offset: {}", report.metadata.mode, report.metadata.degree_offset);
    if let Some(b) = &report.betti {
        let _ = writeln!(out, "betti: {}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    }
    for e in &report.eigenvalues {
        let _ = writeln!(out, "\nfactor {}  (field degree {}, {:?})", e.factor, e.field.degree, e.field.irreducibility);
        let _ = writeln!(out, "{:>6}  {:>3}  {:>8}  {:>3}  {:<10}  blocks", "degree", "J", "sigma", "mu", "certified");
        for r in &e.rows {
            let mu = r.mu.map_or("-".to_string(), |m| m.to_string());
            let _ = writeln!(
                out,
                "{:>6}  {:>3}  {:>8}  {:>3}  {:<10}  {:?}",
                r.degree,
                r.j,
                sheet_text(r.sigma),
                mu,
                if r.certified { "yes" } else { "no" },
                r.blocks
            );
        }
        for (i, dims) in e.pages.pages.iter().enumerate() {
            let _ = writeln!(out, "  E_{}: {:?}", i + 1, dims);
        }
    }
    if !report.unresolved.is_empty() {
        let _ = writeln!(out, "\nunresolved factors: {}", report.unresolved.join(", "));
    }
    let _ = writeln!(out, "\nnot_formal: {}", verdict_text(&report.verdicts.not_formal));
    let _ = writeln!(out, "not_strongly_formal: {}", verdict_text(&report.verdicts.not_strongly_formal));
    for n in &report.metadata.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

pub fn render_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

#[cfg(test)]
mod tests {
    use super::fixtures::{builtin_fixture, heisenberg, surface};
    use super::input::parse_input;
    use super::*;

    fn rows_for<'a>(r: &'a Report, factor: &str) -> &'a [Row] {
        &r.eigenvalues.iter().find(|e| e.factor == factor).unwrap().rows
    }

    #[test]
    fn heisenberg_report() {
        let r = analyze(&heisenberg()).unwrap();
        assert_eq!(r.betti, Some(vec![1, 2, 2, 1]));
        let rows = rows_for(&r, "u - 1");
        assert_eq!((rows[1].j, rows[1].mu, rows[1].sigma), (2, Some(2), Sheet::Certified(3)));
        assert!(r.verdicts.not_formal.value);
        assert_eq!(r.verdicts.not_formal.witness.as_ref().unwrap().block_size, 2);
    }

    #[test]
    fn surface_reports() {
        for n in 1..=2 {
            let r = analyze(&surface(n).unwrap()).unwrap();
            assert_eq!(r.betti, Some(vec![1, 1, 1, 1]));
            assert!(!r.verdicts.not_formal.value);
            let w = r.verdicts.not_strongly_formal.witness.clone().unwrap();
            assert_eq!((w.factor.as_str(), w.block_size), ("u + 1", 2));
        }
        let r = analyze_fixture(&builtin_fixture("surface", Some(2)).unwrap()).unwrap();
        assert!(r.metadata.notes.is_empty());
        let r = analyze_fixture(&builtin_fixture("surface", Some(3)).unwrap()).unwrap();
        assert_eq!(r.metadata.notes.len(), 1);
    }

    #[test]
    fn identity_monodromy() {
        let input = parse_input(r#"{"monodromy_on_cohomology": {"0": [["1"]], "1": [["1","0"],["0","1"]]}}"#).unwrap();
        let r = analyze(&input).unwrap();
        let rows = rows_for(&r, "u - 1");
        assert_eq!(rows.iter().map(|r| r.j).collect::<Vec<_>>(), vec![1, 1, 0]);
        assert_eq!(rows.iter().map(|r| r.mu).collect::<Vec<_>>(), vec![Some(1), Some(1), Some(0)]);
        assert!(!r.verdicts.not_formal.value && !r.verdicts.not_strongly_formal.value);
    }

    #[test]
    fn explicit_algebraic_eigenvalue() {
        let text = r#"{
            "monodromy_on_cohomology": {"0": [["1"]], "1": [["0","-1","1","0"],["1","0","0","1"],["0","0","0","-1"],["0","0","1","0"]]},
            "eigenvalues": [{"min_poly": ["1","0","1"], "element": ["0","1"]}, "2"]
        }"#;
        let r = analyze(&parse_input(text).unwrap()).unwrap();
        assert_eq!(r.eigenvalues[0].rows[1].j, 2);
        assert_eq!(r.eigenvalues[0].rows[1].mu, Some(2));
        assert_eq!(r.eigenvalues[1].rows.iter().map(|r| r.mu).collect::<Vec<_>>(), vec![Some(0); 3]);
        let all = analyze(&parse_input(&text.replace(r#""eigenvalues": [{"min_poly": ["1","0","1"], "element": ["0","1"]}, "2"]"#, r#""eigenvalues": "all""#)).unwrap()).unwrap();
        let quad = rows_for(&all, "u^2 + 1");
        assert_eq!(quad[1].j, 2);
        assert!(!all.verdicts.not_formal.value);
        assert!(all.verdicts.not_strongly_formal.value);
    }

    #[test]
    fn presentation_mode() {
        let text = r#"{"l_presentation": {"1": [[["1","-2","1"], ["0"]], [["0"], ["0"]]]}}"#;
        let r = analyze(&parse_input(text).unwrap()).unwrap();
        assert_eq!(r.betti, None);
        let rows = rows_for(&r, "u - 1");
        assert_eq!(rows[0].degree, 0);
        assert_eq!((rows[0].j, rows[0].mu), (2, Some(2)));
        assert_eq!(r.eigenvalues[0].pages.pages[0], vec![1, 2]);
    }

    #[test]
    fn small_max_page_is_unstable() {
        let mut input = heisenberg();
        input.max_page = Some(1);
        let r = analyze(&input).unwrap();
        assert!(!rows_for(&r, "u - 1")[1].certified);
        assert!(!r.eigenvalues[0].pages.certified);
    }

    #[test]
    fn report_round_trip_and_determinism() {
        let r = analyze(&heisenberg()).unwrap();
        let json = render_json(&r);
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(render_json(&analyze(&heisenberg()).unwrap()), json);
        assert!(render_table(&r).contains("not_formal: true"));
    }
}
