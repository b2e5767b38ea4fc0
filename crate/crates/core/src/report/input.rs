//! JSON input: monodromy on cohomology, a chain-level fiber complex, or a graded
//! family of presentations over `Q[u]`. Scalars are strings `"p/q"` or `"n"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lmodules::PolyMat;
use crate::polyalg::matrix::Mat;
use crate::polyalg::poly::Poly;
use crate::scalars::{format_rational, parse_rational, Rational};
use crate::toruscx::FiberComplex;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Text(String),
    Int(i64),
}

impl ScalarJson {
    fn parse(&self) -> Result<Rational> {
        match self {
            ScalarJson::Text(s) => parse_rational(s),
            ScalarJson::Int(n) => Ok(crate::scalars::rat(*n)),
        }
    }

    fn from_rational(q: &Rational) -> Self {
        ScalarJson::Text(format_rational(q))
    }
}

pub type MatrixJson = Vec<Vec<ScalarJson>>;
pub type PolyJson = Vec<ScalarJson>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberJson {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<MatrixJson>,
    pub monodromy: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EigenvalueJson {
    Scalar(ScalarJson),
    Algebraic { min_poly: PolyJson, element: PolyJson },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EigenvaluesJson {
    Keyword(String),
    List(Vec<EigenvalueJson>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monodromy_on_cohomology: Option<BTreeMap<String, MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_presentation: Option<BTreeMap<String, Vec<Vec<PolyJson>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<EigenvaluesJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_page: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    /// `phi^*_k` on `H^k(M)` for `k = 0..`.
    Monodromy(Vec<Mat<Rational>>),
    Fiber(FiberComplex<Rational>),
    /// Presentations of `H^k(X; L)` for `k = min_degree..`.
    LPresentation { min_degree: i32, modules: Vec<PolyMat<Rational>> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum EigenvalueSpec {
    Rational(Rational),
    /// `element` (coefficients in the generator) of `Q[x]/(min_poly)`.
    Algebraic { min_poly: Vec<Rational>, element: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvalues {
    All,
    List(Vec<EigenvalueSpec>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisInput {
    pub payload: Payload,
    pub eigenvalues: Eigenvalues,
    pub max_page: Option<usize>,
}

impl AnalysisInput {
    pub fn mode(&self) -> &'static str {
        match self.payload {
            Payload::Monodromy(_) => "monodromy",
            Payload::Fiber(_) => "fiber_complex",
            Payload::LPresentation { .. } => "l_presentation",
        }
    }
}

fn parse_matrix(m: &MatrixJson, rows: Option<usize>, cols: Option<usize>, what: &str) -> Result<Mat<Rational>> {
    let r = rows.unwrap_or(m.len());
    if m.len() != r {
        return Err(Error::Input(format!("{what}: expected {r} rows, got {}", m.len())));
    }
    let c = cols.unwrap_or_else(|| m.first().map_or(0, Vec::len));
    let mut entries = Vec::with_capacity(r);
    for (i, row) in m.iter().enumerate() {
        if row.len() != c {
            return Err(Error::Input(format!("{what}: row {i} has {} entries, expected {c}", row.len())));
        }
        entries.push(row.iter().map(ScalarJson::parse).collect::<Result<Vec<_>>>()?);
    }
    Mat::from_rows(entries, c)
}

fn parse_poly(p: &PolyJson) -> Result<Poly<Rational>> {
    Ok(Poly::new(p.iter().map(ScalarJson::parse).collect::<Result<Vec<_>>>()?))
}

fn degree_map<T>(map: &BTreeMap<String, T>) -> Result<Vec<(i32, &T)>> {
    let mut out = Vec::new();
    for (k, v) in map {
        let d: i32 = k.trim().parse().map_err(|_| Error::Input(format!("degree key {k:?} is not an integer")))?;
        out.push((d, v));
    }
    out.sort_by_key(|(d, _)| *d);
    if out.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Input("duplicate degree key".into()));
    }
    Ok(out)
}

fn parse_monodromy(map: &BTreeMap<String, MatrixJson>) -> Result<Vec<Mat<Rational>>> {
    let entries = degree_map(map)?;
    if entries.is_empty() {
        return Err(Error::Input("monodromy_on_cohomology is empty".into()));
    }
    let top = entries.last().unwrap().0;
    if entries.first().unwrap().0 < 0 {
        return Err(Error::Input("cohomological degrees must be non-negative".into()));
    }
    let mut maps = vec![Mat::from_fn(0, 0, |_, _| Rational::default()); top as usize + 1];
    for (d, m) in entries {
        let mat = parse_matrix(m, None, None, &format!("monodromy in degree {d}"))?;
        if !mat.is_square() {
            return Err(Error::NotSquare { rows: mat.rows(), cols: mat.cols() });
        }
        maps[d as usize] = mat;
    }
    Ok(maps)
}

fn parse_fiber(j: &FiberJson) -> Result<FiberComplex<Rational>> {
    let n = j.ranks.len();
    if n == 0 {
        return Err(Error::Input("fiber has no degrees".into()));
    }
    if j.monodromy.len() != n {
        return Err(Error::Input(format!("expected {n} monodromy matrices, got {}", j.monodromy.len())));
    }
    if j.boundaries.len() != n - 1 {
        return Err(Error::Input(format!("expected {} boundary matrices, got {}", n - 1, j.boundaries.len())));
    }
    let boundaries = j
        .boundaries
        .iter()
        .enumerate()
        .map(|(i, b)| parse_matrix(b, Some(j.ranks[i]), Some(j.ranks[i + 1]), &format!("boundary of degree {}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let monodromy = j
        .monodromy
        .iter()
        .enumerate()
        .map(|(k, m)| parse_matrix(m, Some(j.ranks[k]), Some(j.ranks[k]), &format!("monodromy in degree {k}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiberComplex { ranks: j.ranks.clone(), boundaries, monodromy })
}

fn parse_presentations(map: &BTreeMap<String, Vec<Vec<PolyJson>>>) -> Result<(i32, Vec<PolyMat<Rational>>)> {
    let entries = degree_map(map)?;
    if entries.is_empty() {
        return Err(Error::Input("l_presentation is empty".into()));
    }
    let lo = entries.first().unwrap().0;
    let hi = entries.last().unwrap().0;
    let mut modules: Vec<PolyMat<Rational>> = (lo..=hi).map(|_| Mat::from_fn(0, 0, |_, _| Poly::new(vec![]))).collect();
    for (d, rows) in entries {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Input(format!("presentation in degree {d}: row {i} has {} entries, expected {cols}", row.len())));
            }
            entries.push(row.iter().map(parse_poly).collect::<Result<Vec<_>>>()?);
        }
        modules[(d - lo) as usize] = Mat::from_rows(entries, cols)?;
    }
    Ok((lo, modules))
}

fn parse_eigenvalue(e: &EigenvalueJson) -> Result<EigenvalueSpec> {
    let spec = match e {
        EigenvalueJson::Scalar(s) => EigenvalueSpec::Rational(s.parse()?),
        EigenvalueJson::Algebraic { min_poly, element } => EigenvalueSpec::Algebraic {
            min_poly: min_poly.iter().map(ScalarJson::parse).collect::<Result<_>>()?,
            element: element.iter().map(ScalarJson::parse).collect::<Result<_>>()?,
        },
    };
    let zero = match &spec {
        EigenvalueSpec::Rational(q) => num_traits::Zero::is_zero(q),
        EigenvalueSpec::Algebraic { element, .. } => element.iter().all(num_traits::Zero::is_zero),
    };
    if zero {
        return Err(Error::ZeroEigenvalue);
    }
    Ok(spec)
}

pub fn parse_eigenvalues(j: &EigenvaluesJson) -> Result<Eigenvalues> {
    match j {
        EigenvaluesJson::Keyword(k) if k == "all" => Ok(Eigenvalues::All),
        EigenvaluesJson::Keyword(k) => Err(Error::Input(format!("unknown eigenvalue keyword {k:?}"))),
        EigenvaluesJson::List(list) => Ok(Eigenvalues::List(list.iter().map(parse_eigenvalue).collect::<Result<_>>()?)),
    }
}

impl InputJson {
    pub fn into_input(&self) -> Result<AnalysisInput> {
        let modes = [self.monodromy_on_cohomology.is_some(), self.fiber.is_some(), self.l_presentation.is_some()];
        if modes.iter().filter(|&&m| m).count() != 1 {
            return Err(Error::Input(
                "exactly one of monodromy_on_cohomology, fiber, l_presentation is required".into(),
            ));
        }
        let payload = if let Some(m) = &self.monodromy_on_cohomology {
            Payload::Monodromy(parse_monodromy(m)?)
        } else if let Some(f) = &self.fiber {
            Payload::Fiber(parse_fiber(f)?)
        } else {
            let (min_degree, modules) = parse_presentations(self.l_presentation.as_ref().unwrap())?;
            Payload::LPresentation { min_degree, modules }
        };
        let eigenvalues = match &self.eigenvalues {
            Some(e) => parse_eigenvalues(e)?,
            None => Eigenvalues::All,
        };
        if self.max_page == Some(0) {
            return Err(Error::Input("max_page must be at least 1".into()));
        }
        Ok(AnalysisInput { payload, eigenvalues, max_page: self.max_page })
    }

    pub fn from_input(input: &AnalysisInput) -> Self {
        let mat = |m: &Mat<Rational>| -> MatrixJson {
            m.to_rows().iter().map(|r| r.iter().map(ScalarJson::from_rational).collect()).collect()
        };
        let mut out = InputJson { max_page: input.max_page, ..Default::default() };
        match &input.payload {
            Payload::Monodromy(maps) => {
                out.monodromy_on_cohomology = Some(maps.iter().enumerate().map(|(k, m)| (k.to_string(), mat(m))).collect());
            }
            Payload::Fiber(f) => {
                out.fiber = Some(FiberJson {
                    ranks: f.ranks.clone(),
                    boundaries: f.boundaries.iter().map(mat).collect(),
                    monodromy: f.monodromy.iter().map(mat).collect(),
                });
            }
            Payload::LPresentation { min_degree, modules } => {
                out.l_presentation = Some(
                    modules
                        .iter()
                        .enumerate()
                        .map(|(i, m)| {
                            let rows = m
                                .to_rows()
                                .iter()
                                .map(|r| r.iter().map(|p| p.coeffs().iter().map(ScalarJson::from_rational).collect()).collect())
                                .collect();
                            ((min_degree + i as i32).to_string(), rows)
                        })
                        .collect(),
                );
            }
        }
        out.eigenvalues = Some(match &input.eigenvalues {
            Eigenvalues::All => EigenvaluesJson::Keyword("all".into()),
            Eigenvalues::List(list) => EigenvaluesJson::List(
                list.iter()
                    .map(|e| match e {
                        EigenvalueSpec::Rational(q) => EigenvalueJson::Scalar(ScalarJson::from_rational(q)),
                        EigenvalueSpec::Algebraic { min_poly, element } => EigenvalueJson::Algebraic {
                            min_poly: min_poly.iter().map(ScalarJson::from_rational).collect(),
                            element: element.iter().map(ScalarJson::from_rational).collect(),
                        },
                    })
                    .collect(),
            ),
        });
        out
    }
}

pub fn parse_input(text: &str) -> Result<AnalysisInput> {
    let j: InputJson = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    j.into_input()
}

pub fn parse_eigenvalue_file(text: &str) -> Result<Eigenvalues> {
    let j: EigenvaluesJson = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    parse_eigenvalues(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, ratio};

    #[test]
    fn monodromy_mode() {
        let text = r#"{"monodromy_on_cohomology": {"0": [["1"]], "1": [["1", "1"], ["0", "1"]], "2": [["1"]]}}"#;
        let input = parse_input(text).unwrap();
        assert_eq!(input.mode(), "monodromy");
        assert_eq!(input.eigenvalues, Eigenvalues::All);
        let Payload::Monodromy(maps) = &input.payload else { panic!() };
        assert_eq!(maps[1].get(0, 1), &rat(1));
        let again = InputJson::from_input(&input).into_input().unwrap();
        assert_eq!(again, input);
    }

    #[test]
    fn presentation_mode_with_eigenvalues() {
        let text = r#"{
            "l_presentation": {"1": [[["1", "-2", "1"]]], "3": [[]]},
            "eigenvalues": ["1", "-1/2", {"min_poly": ["1", "0", "1"], "element": ["0", "1"]}],
            "max_page": 4
        }"#;
        let input = parse_input(text).unwrap();
        let Payload::LPresentation { min_degree, modules } = &input.payload else { panic!() };
        assert_eq!(*min_degree, 1);
        assert_eq!(modules.len(), 3);
        assert_eq!((modules[1].rows(), modules[2].rows(), modules[2].cols()), (0, 1, 0));
        let Eigenvalues::List(list) = &input.eigenvalues else { panic!() };
        assert_eq!(list[1], EigenvalueSpec::Rational(ratio(-1, 2)));
        assert_eq!(InputJson::from_input(&input).into_input().unwrap(), input);
    }

    #[test]
    fn schema_violations() {
        assert!(matches!(parse_input("{}"), Err(Error::Input(_))));
        assert!(matches!(parse_input(r#"{"monodromy_on_cohomology": {"0": [["1", "2"]]}}"#), Err(Error::NotSquare { .. })));
        assert!(matches!(parse_input(r#"{"monodromy_on_cohomology": {"0": [["x"]]}}"#), Err(Error::Input(_))));
        assert!(matches!(parse_input(r#"{"monodromy_on_cohomology": {"0": [["1"]]}, "bogus": 1}"#), Err(Error::Input(_))));
        assert_eq!(
            parse_input(r#"{"monodromy_on_cohomology": {"0": [["1"]]}, "eigenvalues": ["0"]}"#),
            Err(Error::ZeroEigenvalue)
        );
        let fiber = r#"{"fiber": {"ranks": [1, 1], "boundaries": [], "monodromy": [[["1"]], [["1"]]]}}"#;
        assert!(matches!(parse_input(fiber), Err(Error::Input(_))));
    }
}
