//! Random-instance self check: every analysis asserts `J = mu` and the
//! agreement of closed-form and literal pages; on top of that the first page is
//! checked against the Wang sequence and for vanishing Euler characteristic.

use crate::error::{Error, Result};
use crate::polyalg::matrix::{eval_poly_at, nullity, Mat};
use crate::polyalg::poly::Poly;
use crate::random::{random_decomposition, random_monodromy, random_presentations, rng};
use crate::scalars::{Rational, Rationals};

use super::input::{AnalysisInput, Eigenvalues, Payload};
use super::{analyze, Report};

/// `dim ker p(A)` over `Q[x]/(p)`.
fn eigenspace_dim(a: &Mat<Rational>, p: &Poly<Rational>) -> usize {
    nullity(&Rationals, &eval_poly_at(&Rationals, p, a)) / p.degree().unwrap()
}

fn factor_poly(coeffs: &[String]) -> Result<Poly<Rational>> {
    Ok(Poly::new(coeffs.iter().map(|c| crate::scalars::parse_rational(c)).collect::<Result<_>>()?))
}

/// Wang relation and Euler characteristic on the first page of every factor.
pub fn check_conservation(maps: &[Mat<Rational>], report: &Report) -> Result<()> {
    for e in &report.eigenvalues {
        let p = factor_poly(e.field.min_poly.as_ref().expect("factor fields carry their polynomial"))?;
        let e1 = &e.pages.pages[0];
        let euler: i64 = e1.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        if euler != 0 {
            return Err(Error::Integrity(format!("Euler characteristic {euler} at {}", e.factor)));
        }
        for (k, &dim) in e1.iter().enumerate() {
            let ker = maps.get(k).map_or(0, |a| eigenspace_dim(a, &p));
            let coker = if k > 0 { maps.get(k - 1).map_or(0, |a| eigenspace_dim(a, &p)) } else { 0 };
            if dim != ker + coker {
                return Err(Error::Integrity(format!(
                    "Wang relation fails in degree {k} at {}: {dim} != {ker} + {coker}",
                    e.factor
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub monodromy_instances: usize,
    pub factors: usize,
    pub presentation_instances: usize,
    pub decompositions: usize,
}

/// Runs `count` instances of each random family; the first failure aborts.
pub fn run(seed: u64, count: usize) -> Result<Summary> {
    let mut r = rng(seed);
    let mut summary = Summary::default();
    for _ in 0..count {
        let maps = random_monodromy(&mut r, 6);
        let input = AnalysisInput { payload: Payload::Monodromy(maps.clone()), eigenvalues: Eigenvalues::All, max_page: None };
        let report = analyze(&input)?;
        check_conservation(&maps, &report)?;
        summary.monodromy_instances += 1;
        summary.factors += report.eigenvalues.len();
    }
    for _ in 0..count {
        let (min_degree, modules) = random_presentations(&mut r);
        let input = AnalysisInput {
            payload: Payload::LPresentation { min_degree, modules },
            eigenvalues: Eigenvalues::All,
            max_page: None,
        };
        analyze(&input)?;
        summary.presentation_instances += 1;
    }
    for i in 0..count {
        let m = 1 + i % 5;
        let d = random_decomposition(&mut r, m);
        let input = AnalysisInput {
            payload: Payload::LPresentation { min_degree: 1, modules: vec![d.presentation] },
            eigenvalues: Eigenvalues::List(vec![super::input::EigenvalueSpec::Rational(-d.q.coeffs()[0].clone())]),
            max_page: None,
        };
        let report = analyze(&input)?;
        let sigma = report.eigenvalues[0].rows.iter().find(|row| row.degree == 0).and_then(|row| row.sigma.value());
        if sigma != Some(m + 1) {
            return Err(Error::Integrity(format!("nilpotency {m} gave sheet {sigma:?}")));
        }
        summary.decompositions += 1;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run() {
        let s = run(11, 3).unwrap();
        assert_eq!((s.monodromy_instances, s.presentation_instances, s.decompositions), (3, 3, 3));
    }
}
