//! Built-in examples: the Heisenberg nilmanifold as a mapping torus of `T^2`,
//! and the mapping torus of a genus-`n` surface with `H^1` monodromy
//! `[[-I, I], [0, -I]]`.

use crate::error::{Error, Result};
use crate::polyalg::matrix::{block2, identity, mat_neg, zeros, Mat};
use crate::scalars::{Rational, Rationals};

use super::input::{AnalysisInput, Eigenvalues, Payload};

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub input: AnalysisInput,
    /// Largest Jordan block the example is claimed to carry, when it has a claim.
    pub claimed_block: Option<usize>,
}

pub const FIXTURE_NAMES: [&str; 2] = ["heisenberg", "surface"];

fn int_mat(rows: &[&[i64]]) -> Mat<Rational> {
    let cols = rows.first().map_or(0, |r| r.len());
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| crate::scalars::rat(x)).collect()).collect(), cols)
        .expect("fixture rows have equal length")
}

pub fn heisenberg() -> AnalysisInput {
    AnalysisInput {
        payload: Payload::Monodromy(vec![int_mat(&[&[1]]), int_mat(&[&[1, 1], &[0, 1]]), int_mat(&[&[1]])]),
        eigenvalues: Eigenvalues::All,
        max_page: None,
    }
}

/// `[[-I_n, I_n], [0, -I_n]]`, a symplectic automorphism of `H^1` of the genus-`n` surface.
pub fn surface_h1(n: usize) -> Mat<Rational> {
    let q = Rationals;
    let minus = mat_neg(&q, &identity(&q, n));
    block2(&minus, &identity(&q, n), &zeros(&q, n, n), &minus)
}

pub fn surface(n: usize) -> Result<AnalysisInput> {
    if n < 1 {
        return Err(Error::Input("surface fixture needs genus n >= 1".into()));
    }
    Ok(AnalysisInput {
        // The action on H^0 and on the fundamental class H^2 is trivial.
        payload: Payload::Monodromy(vec![int_mat(&[&[1]]), surface_h1(n), int_mat(&[&[1]])]),
        eigenvalues: Eigenvalues::All,
        max_page: None,
    })
}

pub fn builtin_fixture(name: &str, n: Option<usize>) -> Result<Fixture> {
    match name {
        "heisenberg" => Ok(Fixture { input: heisenberg(), claimed_block: None }),
        "surface" => {
            let n = n.unwrap_or(1);
            Ok(Fixture { input: surface(n)?, claimed_block: Some(n) })
        }
        other => Err(Error::Input(format!("unknown example {other:?}; known: {}", FIXTURE_NAMES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::nu;
    use crate::polyalg::matrix::{mat_mul, mat_sub};
    use crate::scalars::{rat, Ring};
    use crate::toruscx::{fiber_from_cohomology_monodromy, milnor_betti};

    #[test]
    fn heisenberg_betti() {
        let Payload::Monodromy(maps) = heisenberg().payload else { panic!() };
        assert_eq!(milnor_betti(&Rationals, &fiber_from_cohomology_monodromy(&Rationals, &maps)), vec![1, 2, 2, 1]);
    }

    #[test]
    fn surface_one() {
        let a = surface_h1(1);
        assert_eq!(a, int_mat(&[&[-1, 1], &[0, -1]]));
        assert_eq!(nu(&Rationals, &a, &rat(-1)).unwrap(), 2);
    }

    #[test]
    fn surface_is_symplectic() {
        let q = Rationals;
        for n in 1..4 {
            let a = surface_h1(n);
            let j = block2(&zeros(&q, n, n), &identity(&q, n), &mat_neg(&q, &identity(&q, n)), &zeros(&q, n, n));
            let pulled = mat_mul(&q, &mat_mul(&q, &a.transpose(), &j), &a);
            assert!(mat_sub(&q, &pulled, &j).entries().iter().all(|x| q.is_zero(x)));
            let Payload::Monodromy(maps) = surface(n).unwrap().payload else { panic!() };
            assert_eq!(milnor_betti(&q, &fiber_from_cohomology_monodromy(&q, &maps)), vec![1, 1, 1, 1]);
        }
    }

    #[test]
    fn unknown_and_invalid() {
        assert!(builtin_fixture("klein", None).is_err());
        assert!(builtin_fixture("surface", Some(0)).is_err());
        assert_eq!(builtin_fixture("surface", Some(3)).unwrap().claimed_block, Some(3));
    }
}
