//! Acceptance criteria 1-7. Prints one PASS/FAIL line per criterion with its
//! runtime and limit; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use massey_torus::jordan::jordan_profile;
use massey_torus::lmodules::{poly_det, snf};
use massey_torus::polyalg::factor::rational_irreducible_factors;
use massey_torus::polyalg::matrix::{charpoly, eval_poly_at, is_zero_mat, mat_mul, Mat};
use massey_torus::polyalg::poly::PolyRing;
use massey_torus::random::{
    random_decomposition, random_invertible, random_monodromy, random_poly_matrix, random_presentations, rng,
};
use massey_torus::report::fixtures::{heisenberg, surface};
use massey_torus::report::input::{AnalysisInput, EigenvalueSpec, Eigenvalues, Payload};
use massey_torus::report::selfcheck::check_conservation;
use massey_torus::report::{analyze, Report, Row};
use massey_torus::scalars::{Rational, Rationals, Ring};

const SUITE3_SEED: u64 = 2024;
const SUITE3_COUNT: usize = 200;
const SUITE4_SEED: u64 = 404;
const SUITE4_COUNT: usize = 100;
const SUITE5_SEED: u64 = 505;
const SUITE5_COUNT: usize = 100;
const SUITE6_SEED: u64 = 606;
const SNF_COUNT: usize = 500;
const MATRIX_COUNT: usize = 200;

type Check = std::result::Result<String, String>;

fn monodromy_input(maps: Vec<Mat<Rational>>) -> AnalysisInput {
    AnalysisInput { payload: Payload::Monodromy(maps), eigenvalues: Eigenvalues::All, max_page: None }
}

fn maps_of(input: &AnalysisInput) -> Vec<Mat<Rational>> {
    match &input.payload {
        Payload::Monodromy(maps) => maps.clone(),
        _ => unreachable!("fixtures are given by their monodromy"),
    }
}

fn row<'a>(r: &'a Report, factor: &str, degree: i32) -> Option<&'a Row> {
    r.eigenvalues.iter().find(|e| e.factor == factor)?.rows.iter().find(|row| row.degree == degree)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every certified row has `J = mu`, and every row is certified.
fn rows_agree(r: &Report) -> std::result::Result<usize, String> {
    let mut n = 0;
    for e in &r.eigenvalues {
        for row in &e.rows {
            ensure(row.certified, || format!("{} degree {} not certified", e.factor, row.degree))?;
            ensure(row.mu == Some(row.j), || {
                format!("{} degree {}: J = {}, mu = {:?}", e.factor, row.degree, row.j, row.mu)
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn criterion1() -> Check {
    let r = analyze(&heisenberg()).map_err(|e| e.to_string())?;
    ensure(r.betti == Some(vec![1, 2, 2, 1]), || format!("betti {:?}", r.betti))?;
    let one = row(&r, "u - 1", 1).ok_or("no row at u - 1, degree 1")?;
    ensure(one.j == 2, || format!("J_1(1) = {}", one.j))?;
    ensure(one.mu == Some(2), || format!("mu_1(1) = {:?}", one.mu))?;
    ensure(one.sigma.value() == Some(3), || format!("sigma_1 = {:?}", one.sigma))?;
    ensure(r.verdicts.not_formal.value, || "not_formal is false".into())?;
    Ok("b = (1,2,2,1), J_1(1) = mu_1(1) = 2, sigma_1 = 3, not_formal".into())
}

fn criterion2() -> Check {
    for n in 1..=3 {
        let input = surface(n).map_err(|e| e.to_string())?;
        let r = analyze(&input).map_err(|e| e.to_string())?;
        ensure(r.betti == Some(vec![1, 1, 1, 1]), || format!("n = {n}: betti {:?}", r.betti))?;
        let w = r.verdicts.not_strongly_formal.witness.as_ref().ok_or(format!("n = {n}: no witness"))?;
        ensure(r.verdicts.not_strongly_formal.value && w.factor == "u + 1", || {
            format!("n = {n}: witness {w:?}")
        })?;
        ensure(!r.verdicts.not_formal.value, || format!("n = {n}: not_formal is true"))?;
        rows_agree(&r).map_err(|e| format!("n = {n}: {e}"))?;
    }
    Ok("n = 1, 2, 3: b = (1,1,1,1), not_strongly_formal at u + 1, not_formal = false".into())
}

fn criterion3(reports: &mut Vec<(Vec<Mat<Rational>>, Report)>) -> Check {
    let mut r = rng(SUITE3_SEED);
    let mut factors = 0;
    let mut rows = 0;
    for i in 0..SUITE3_COUNT {
        let maps = random_monodromy(&mut r, 6);
        // analyze raises an integrity error on J != mu or closed form != literal pages.
        let report = analyze(&monodromy_input(maps.clone())).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(report.unresolved.is_empty(), || format!("instance {i}: unresolved {:?}", report.unresolved))?;
        rows += rows_agree(&report).map_err(|e| format!("instance {i}: {e}"))?;
        factors += report.eigenvalues.len();
        reports.push((maps, report));
    }
    Ok(format!("{SUITE3_COUNT} instances, {factors} factors, {rows} rows with J = mu and closed form = literal"))
}

fn criterion4() -> Check {
    let mut r = rng(SUITE4_SEED);
    for i in 0..SUITE4_COUNT {
        let m = 1 + i % 5;
        let d = random_decomposition(&mut r, m);
        let lambda = -d.q.coeffs()[0].clone();
        let input = AnalysisInput {
            payload: Payload::LPresentation { min_degree: 1, modules: vec![d.presentation] },
            eigenvalues: Eigenvalues::List(vec![EigenvalueSpec::Rational(lambda)]),
            max_page: None,
        };
        let report = analyze(&input).map_err(|e| format!("instance {i}: {e}"))?;
        let sigma = report.eigenvalues[0].rows.iter().find(|row| row.degree == 0).and_then(|row| row.sigma.value());
        ensure(sigma == Some(m + 1), || format!("instance {i}: m = {m}, sigma = {sigma:?}"))?;
    }
    Ok(format!("{SUITE4_COUNT} couples, m = 1..5, sigma = m + 1"))
}

fn criterion5() -> Check {
    let mut r = rng(SUITE5_SEED);
    let mut rows = 0;
    let mut with_free = 0;
    for i in 0..SUITE5_COUNT {
        let (min_degree, modules) = random_presentations(&mut r);
        let input = AnalysisInput {
            payload: Payload::LPresentation { min_degree, modules },
            eigenvalues: Eigenvalues::All,
            max_page: None,
        };
        let report = analyze(&input).map_err(|e| format!("instance {i}: {e}"))?;
        rows += rows_agree(&report).map_err(|e| format!("instance {i}: {e}"))?;
        if report.eigenvalues.iter().any(|e| e.pages.pages.last().is_some_and(|p| p.iter().any(|&d| d > 0))) {
            with_free += 1;
        }
    }
    Ok(format!("{SUITE5_COUNT} presentations ({with_free} with a free part), {rows} rows with nu = mu"))
}

fn criterion6() -> Check {
    let q = Rationals;
    let ring = PolyRing::new(q);
    let mut r = rng(SUITE6_SEED);
    for i in 0..SNF_COUNT {
        let m = random_poly_matrix(&mut r, 5, 3);
        let s = snf(&ring, &m);
        let product = mat_mul(&ring, &mat_mul(&ring, &s.u, &m), &s.v);
        ensure(product == s.d, || format!("SNF {i}: U M V != D"))?;
        for (name, t) in [("U", &s.u), ("V", &s.v)] {
            let det = poly_det(&ring, t).map_err(|e| e.to_string())?;
            ensure(det.degree() == Some(0), || format!("SNF {i}: det {name} is not a unit"))?;
        }
        let diag = s.diagonal();
        for (k, d) in diag.iter().enumerate() {
            for (j, x) in s.d.entries().iter().enumerate() {
                let (row, col) = (j / s.d.cols(), j % s.d.cols());
                ensure(row == col || ring.is_zero(x), || format!("SNF {i}: D is not diagonal"))?;
            }
            if k < s.rank {
                ensure(ring.is_monic(d), || format!("SNF {i}: entry {k} not monic"))?;
            }
            if k + 1 < diag.len() {
                ensure(ring.divides(d, &diag[k + 1]), || format!("SNF {i}: d_{k} does not divide d_{}", k + 1))?;
            }
        }
    }
    for i in 0..MATRIX_COUNT {
        let n = r.gen_range(1..=6);
        let a = random_invertible(&mut r, n);
        let chi = charpoly(&q, &a).map_err(|e| e.to_string())?;
        ensure(is_zero_mat(&q, &eval_poly_at(&q, &chi, &a)), || format!("matrix {i}: Cayley-Hamilton fails"))?;
        for factor in rational_irreducible_factors(&chi).into_iter().filter(|f| f.proven) {
            let p = &factor.factor;
            let left = jordan_profile(&q, &a, p).map_err(|e| e.to_string())?;
            let right = jordan_profile(&q, &a.transpose(), p).map_err(|e| e.to_string())?;
            ensure(left.block_sizes == right.block_sizes, || format!("matrix {i}: transpose changes the profile"))?;
        }
    }
    Ok(format!("{SNF_COUNT} SNF instances exact; {MATRIX_COUNT} matrices pass Cayley-Hamilton and transpose invariance"))
}

fn criterion7(reports: &[(Vec<Mat<Rational>>, Report)]) -> Check {
    let mut fixtures = vec![heisenberg()];
    for n in 1..=3 {
        fixtures.push(surface(n).map_err(|e| e.to_string())?);
    }
    let mut checked = 0;
    for input in &fixtures {
        let maps = maps_of(input);
        let report = analyze(input).map_err(|e| e.to_string())?;
        check_conservation(&maps, &report).map_err(|e| e.to_string())?;
        checked += 1;
    }
    for (i, (maps, report)) in reports.iter().enumerate() {
        check_conservation(maps, report).map_err(|e| format!("instance {i}: {e}"))?;
        checked += 1;
    }
    Ok(format!("{checked} mapping tori: Euler characteristic 0 and Wang relation at every factor"))
}

fn report_line(id: usize, limit: Option<Duration>, run: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = run();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let limit_text = limit.map_or("no limit".to_string(), |l| format!("limit {:.0} s", l.as_secs_f64()));
    let (status, detail) = match &result {
        Ok(msg) if in_time => ("PASS", msg.clone()),
        Ok(msg) => ("FAIL", format!("too slow; {msg}")),
        Err(msg) => ("FAIL", msg.clone()),
    };
    println!("{status} criterion {id}: {detail} [{:.3} s, {limit_text}]", elapsed.as_secs_f64());
    status == "PASS"
}

fn main() -> ExitCode {
    let mut suite3 = Vec::new();
    let results = [
        report_line(1, Some(Duration::from_secs(1)), criterion1),
        report_line(2, Some(Duration::from_secs(2)), criterion2),
        report_line(3, Some(Duration::from_secs(60)), || criterion3(&mut suite3)),
        report_line(4, Some(Duration::from_secs(10)), criterion4),
        report_line(5, Some(Duration::from_secs(30)), criterion5),
        report_line(6, Some(Duration::from_secs(60)), criterion6),
        report_line(7, None, || criterion7(&suite3)),
    ];
    if results.iter().all(|&ok| ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
