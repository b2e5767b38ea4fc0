//! Jordan structure at an irreducible factor, read off from kernel dimensions
//! of powers of `p(A)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::matrix::{eval_poly_at, mat_mul, nullity, Mat};
use crate::polyalg::poly::{Poly, PolyRing};
use crate::scalars::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct JordanProfile<E> {
    pub eigen_factor: Poly<E>,
    /// Non-increasing; sizes counted over the splitting field (one entry per
    /// block at a single root of `eigen_factor`).
    pub block_sizes: Vec<usize>,
    pub nu: usize,
    pub invariant_dim: usize,
}

/// Serialized form `{factor, blocks, nu, dim}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanProfileJson {
    pub factor: Vec<String>,
    pub blocks: Vec<usize>,
    pub nu: usize,
    pub dim: usize,
}

impl<E> JordanProfile<E> {
    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> JordanProfileJson {
        JordanProfileJson {
            factor: self.eigen_factor.coeffs().iter().map(|c| f.fmt_elem(c)).collect(),
            blocks: self.block_sizes.clone(),
            nu: self.nu,
            dim: self.invariant_dim,
        }
    }
}

/// `dim ker p(A)^j` for `j = 0, 1, ...` until the sequence stabilizes.
pub fn kernel_dims<F: Field>(f: &F, a: &Mat<F::Elem>, p: &Poly<F::Elem>) -> Vec<usize> {
    let pa = eval_poly_at(f, p, a);
    let mut dims = vec![0];
    let mut power = pa.clone();
    loop {
        let k = nullity(f, &power);
        if k == *dims.last().unwrap() {
            return dims;
        }
        dims.push(k);
        power = mat_mul(f, &power, &pa);
    }
}

/// Converts kernel-dimension increments (already divided by `deg p`) into the
/// block-size partition.
pub fn partition_from_increments(increments: &[usize]) -> Vec<usize> {
    let mut blocks = Vec::new();
    for s in (1..=increments.len()).rev() {
        let at_least_s = increments[s - 1];
        let at_least_next = increments.get(s).copied().unwrap_or(0);
        for _ in 0..at_least_s.saturating_sub(at_least_next) {
            blocks.push(s);
        }
    }
    blocks
}

pub fn jordan_profile<F: Field>(f: &F, a: &Mat<F::Elem>, p: &Poly<F::Elem>) -> Result<JordanProfile<F::Elem>> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    f.certify_irreducible(p)?;
    let ring = PolyRing::new(f.clone());
    let p = ring.monic(p);
    let d = p.degree().unwrap();
    let dims = kernel_dims(f, a, &p);
    let increments: Vec<usize> = dims
        .windows(2)
        .map(|w| {
            let inc = w[1] - w[0];
            debug_assert_eq!(inc % d, 0, "kernel of p(A)^j is a vector space over F[x]/(p)");
            inc / d
        })
        .collect();
    let block_sizes = partition_from_increments(&increments);
    let nu = block_sizes.first().copied().unwrap_or(0);
    let invariant_dim = block_sizes.iter().sum::<usize>() * d;
    Ok(JordanProfile { eigen_factor: p, block_sizes, nu, invariant_dim })
}

/// Largest Jordan block of `A` at eigenvalue `lambda` (0 if `lambda` is not an eigenvalue).
pub fn nu<F: Field>(f: &F, a: &Mat<F::Elem>, lambda: &F::Elem) -> Result<usize> {
    let ring = PolyRing::new(f.clone());
    Ok(jordan_profile(f, a, &ring.linear(lambda))?.nu)
}
