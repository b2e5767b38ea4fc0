//! The algebraic mapping torus: a free chain complex over `F[u]` assembled from a
//! fiber complex and a monodromy chain map, its `L`-homology, twisted cohomology
//! at a point `u = lambda`, and Betti numbers from the Wang sequence.

use crate::error::{Error, Result};
use crate::lmodules::{homology_module, normalize, FPModule, PolyMat};
use crate::polyalg::matrix::{
    block2, eval_poly_at, identity, inverse, is_zero_mat, mat_mul, mat_neg, mat_sub, rank, rref, solve, zeros, Mat,
};
use crate::polyalg::poly::{Poly, PolyRing};
use crate::scalars::{Field, Rational, Ring};

/// Chain complex `C_0 <- C_1 <- ... <- C_top` of the fiber with a chain map `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberComplex<E> {
    pub ranks: Vec<usize>,
    /// `boundaries[k - 1]` is `∂_k : C_k -> C_{k-1}` (`ranks[k-1] x ranks[k]`).
    pub boundaries: Vec<Mat<E>>,
    /// `monodromy[k]` is `f_k : C_k -> C_k`.
    pub monodromy: Vec<Mat<E>>,
}

impl<E: Clone> FiberComplex<E> {
    pub fn top_degree(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    pub fn map_scalars<T: Clone>(&self, mut g: impl FnMut(&E) -> T) -> FiberComplex<T> {
        FiberComplex {
            ranks: self.ranks.clone(),
            boundaries: self.boundaries.iter().map(|m| m.map(&mut g)).collect(),
            monodromy: self.monodromy.iter().map(|m| m.map(&mut g)).collect(),
        }
    }
}

impl<E: Clone> FiberComplex<E> {
    /// `∂_k`, with zero maps outside the stored range.
    pub fn boundary<F: Field<Elem = E>>(&self, f: &F, k: isize) -> Mat<E> {
        let rank_at = |d: isize| if d < 0 { 0 } else { self.ranks.get(d as usize).copied().unwrap_or(0) };
        if k >= 1 && (k as usize) <= self.boundaries.len() {
            self.boundaries[k as usize - 1].clone()
        } else {
            zeros(f, rank_at(k - 1), rank_at(k))
        }
    }
}

/// Fiber complex with zero differentials whose chain map is dual to the given
/// maps on cohomology, `f_k = (phi^*_k)^T`.
pub fn fiber_from_cohomology_monodromy<F: Field>(f: &F, maps: &[Mat<F::Elem>]) -> FiberComplex<F::Elem> {
    let ranks: Vec<usize> = maps.iter().map(|m| m.rows()).collect();
    let boundaries = (1..ranks.len()).map(|k| zeros(f, ranks[k - 1], ranks[k])).collect();
    FiberComplex { ranks, boundaries, monodromy: maps.iter().map(|m| m.transpose()).collect() }
}

/// Restriction of the fiber complex to the generalized eigenspaces of `f` at
/// the irreducible `q`. The complementary summand has `u - f` invertible after
/// localizing at `q`, so its mapping torus contributes nothing `q`-locally.
pub fn primary_fiber<F: Field>(f: &F, fiber: &FiberComplex<F::Elem>, q: &Poly<F::Elem>) -> FiberComplex<F::Elem> {
    let d = q.degree().unwrap_or(1).max(1);
    // Columns span ker q(f_k)^e; their rows at the free columns of the rref form an identity.
    let spaces: Vec<(Mat<F::Elem>, Vec<usize>)> = fiber
        .monodromy
        .iter()
        .map(|a| {
            let n = a.rows();
            // q(f)^j until the rank stops dropping.
            let step = eval_poly_at(f, q, a);
            let mut m = step.clone();
            let mut r = rank(f, &m);
            for _ in 1..n.div_ceil(d) {
                let next = mat_mul(f, &m, &step);
                let next_rank = rank(f, &next);
                if next_rank == r {
                    break;
                }
                (m, r) = (next, next_rank);
            }
            let (reduced, pivots) = rref(f, &m);
            let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
            let basis = Mat::from_fn(n, free.len(), |i, j| {
                if i == free[j] {
                    f.one()
                } else if let Some(r) = pivots.iter().position(|&p| p == i) {
                    f.neg(reduced.get(r, free[j]))
                } else {
                    f.zero()
                }
            });
            (basis, free)
        })
        .collect();
    let restrict = |g: &Mat<F::Elem>, from: usize, to: usize| {
        let image = mat_mul(f, g, &spaces[from].0);
        let rows = &spaces[to].1;
        Mat::from_fn(rows.len(), image.cols(), |i, j| image.get(rows[i], j).clone())
    };
    FiberComplex {
        ranks: spaces.iter().map(|(b, _)| b.cols()).collect(),
        boundaries: (1..fiber.ranks.len()).map(|k| restrict(&fiber.boundaries[k - 1], k, k - 1)).collect(),
        monodromy: (0..fiber.ranks.len()).map(|k| restrict(&fiber.monodromy[k], k, k)).collect(),
    }
}

/// Basis data for `H_k`: columns of `reps` are cycle representatives of a basis,
/// `basis` = [boundary basis | reps] spans the cycles.
struct HomologyBasis<E> {
    boundary_dim: usize,
    basis: Mat<E>,
}

fn columns<E: Clone>(m: &Mat<E>, idx: &[usize]) -> Mat<E> {
    m.select_cols(idx)
}

fn homology_basis<F: Field>(f: &F, fiber: &FiberComplex<F::Elem>, k: usize) -> HomologyBasis<F::Elem> {
    let n = fiber.ranks[k];
    let out = fiber.boundary(f, k as isize);
    let inc = fiber.boundary(f, k as isize + 1);
    let (_, ker) = crate::polyalg::matrix::rank_kernel(f, &out);
    let (_, pivots) = rref(f, &inc);
    let b = columns(&inc, &pivots);
    let z = Mat::from_fn(n, ker.len(), |i, j| ker[j][i].clone());
    let combined = crate::polyalg::matrix::hstack(&b, &z);
    let (_, piv) = rref(f, &combined);
    HomologyBasis { boundary_dim: b.cols(), basis: columns(&combined, &piv) }
}

/// Induced maps `phi_{*,k}` on `H_k` of the fiber, in a chosen homology basis.
pub fn induced_homology_maps<F: Field>(f: &F, fiber: &FiberComplex<F::Elem>) -> Vec<Mat<F::Elem>> {
    (0..fiber.ranks.len())
        .map(|k| {
            let hb = homology_basis(f, fiber, k);
            let h = hb.basis.cols() - hb.boundary_dim;
            let mut out = zeros(f, h, h);
            for j in 0..h {
                let col: Vec<_> = (0..hb.basis.rows()).map(|i| hb.basis.get(i, hb.boundary_dim + j).clone()).collect();
                let img = crate::polyalg::matrix::mat_vec(f, &fiber.monodromy[k], &col);
                let coords = solve(f, &hb.basis, &img).expect("chain map preserves cycles");
                for i in 0..h {
                    out.set(i, j, coords[hb.boundary_dim + i].clone());
                }
            }
            out
        })
        .collect()
}

/// Checks `∂∂ = 0`, the chain-map condition and invertibility on homology.
pub fn validate_fiber<F: Field>(f: &F, fiber: &FiberComplex<F::Elem>) -> Result<()> {
    let top = fiber.ranks.len();
    if fiber.monodromy.len() != top {
        return Err(Error::Input(format!("expected {top} monodromy matrices, got {}", fiber.monodromy.len())));
    }
    if !fiber.boundaries.is_empty() && fiber.boundaries.len() + 1 != top {
        return Err(Error::Input(format!(
            "expected {} boundary matrices, got {}",
            top.saturating_sub(1),
            fiber.boundaries.len()
        )));
    }
    for (k, m) in fiber.monodromy.iter().enumerate() {
        if m.rows() != fiber.ranks[k] || m.cols() != fiber.ranks[k] {
            return Err(Error::Dimension(format!("monodromy in degree {k} must be {0}x{0}", fiber.ranks[k])));
        }
    }
    for (i, b) in fiber.boundaries.iter().enumerate() {
        if b.rows() != fiber.ranks[i] || b.cols() != fiber.ranks[i + 1] {
            return Err(Error::Dimension(format!(
                "boundary of degree {} must be {}x{}",
                i + 1,
                fiber.ranks[i],
                fiber.ranks[i + 1]
            )));
        }
    }
    for k in 2..top {
        let dd = mat_mul(f, &fiber.boundary(f, k as isize - 1), &fiber.boundary(f, k as isize));
        if !is_zero_mat(f, &dd) {
            return Err(Error::NotAComplex { degree: k });
        }
    }
    for k in 1..top {
        let b = fiber.boundary(f, k as isize);
        let lhs = mat_mul(f, &b, &fiber.monodromy[k]);
        let rhs = mat_mul(f, &fiber.monodromy[k - 1], &b);
        if lhs != rhs {
            return Err(Error::ChainMap { degree: k });
        }
    }
    for (k, m) in induced_homology_maps(f, fiber).iter().enumerate() {
        if inverse(f, m).is_none() {
            return Err(Error::NotInvertible { degree: k });
        }
    }
    Ok(())
}

/// Free chain complex `T_n = C_n ⊕ C_{n-1}` over `F[u]` with
/// `D(a, b) = (∂a + (u - f) b, -∂b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusComplex<E> {
    /// Ranks of `T_0, ..., T_{top+1}`.
    pub ranks: Vec<usize>,
    /// `differentials[n - 1] = D_n : T_n -> T_{n-1}`.
    pub differentials: Vec<PolyMat<E>>,
}

/// Cochain complex of free `F[u]`-modules starting in degree `min_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct CochainComplex<E> {
    pub min_degree: i32,
    pub ranks: Vec<usize>,
    /// `differentials[i] : C^{min+i} -> C^{min+i+1}`.
    pub differentials: Vec<PolyMat<E>>,
}

impl<E: Clone> CochainComplex<E> {
    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.ranks.len() as i32 - 1
    }

    pub fn rank(&self, n: i32) -> usize {
        let i = n - self.min_degree;
        if i < 0 {
            0
        } else {
            self.ranks.get(i as usize).copied().unwrap_or(0)
        }
    }

    /// `δ^n : C^n -> C^{n+1}`, zero outside the stored range.
    pub fn differential<F: Field<Elem = E>>(&self, ring: &PolyRing<F>, n: i32) -> PolyMat<E> {
        let i = n - self.min_degree;
        if i >= 0 && (i as usize) < self.differentials.len() {
            self.differentials[i as usize].clone()
        } else {
            zeros(ring, self.rank(n + 1), self.rank(n))
        }
    }
}

/// Cohomology `H^n` as finitely presented modules, for every degree of the complex.
pub fn cochain_cohomology<F: Field>(ring: &PolyRing<F>, cx: &CochainComplex<F::Elem>) -> Vec<(i32, FPModule<F::Elem>)> {
    (cx.min_degree..=cx.max_degree())
        .map(|n| {
            let incoming = cx.differential(ring, n - 1);
            let outgoing = cx.differential(ring, n);
            (n, normalize(ring, &homology_module(ring, &incoming, &outgoing)))
        })
        .collect()
}

fn const_poly_mat<F: Field>(ring: &PolyRing<F>, m: &Mat<F::Elem>) -> PolyMat<F::Elem> {
    m.map(|x| ring.constant(x.clone()))
}

pub fn build_torus_complex<F: Field>(f: &F, fiber: &FiberComplex<F::Elem>) -> Result<TorusComplex<F::Elem>> {
    validate_fiber(f, fiber)?;
    let ring = PolyRing::new(f.clone());
    let top = fiber.top_degree() as isize;
    let c = |k: isize| if k < 0 || k > top { 0 } else { fiber.ranks[k as usize] };
    let ranks: Vec<usize> = (0..=top + 1).map(|n| c(n) + c(n - 1)).collect();
    let mut differentials = Vec::new();
    for n in 1..=top + 1 {
        let d_n = const_poly_mat(&ring, &fiber.boundary(f, n));
        let u_minus_f = if n - 1 <= top {
            characteristic_matrix(&ring, &fiber.monodromy[(n - 1) as usize])
        } else {
            zeros(&ring, 0, 0)
        };
        let lower_left = zeros(&ring, c(n - 2), c(n));
        let lower_right = mat_neg(&ring, &const_poly_mat(&ring, &fiber.boundary(f, n - 1)));
        differentials.push(block2(&d_n, &u_minus_f, &lower_left, &lower_right));
    }
    let torus = TorusComplex { ranks, differentials };
    for n in 2..torus.ranks.len() {
        let dd = mat_mul(&ring, &torus.differentials[n - 2], &torus.differentials[n - 1]);
        if !is_zero_mat(&ring, &dd) {
            return Err(Error::Integrity(format!("torus differential does not square to zero in degree {n}")));
        }
    }
    Ok(torus)
}

impl<E: Clone> TorusComplex<E> {
    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    fn differential<F: Field<Elem = E>>(&self, ring: &PolyRing<F>, n: isize) -> PolyMat<E> {
        let rank_at = |d: isize| if d < 0 { 0 } else { self.ranks.get(d as usize).copied().unwrap_or(0) };
        if n >= 1 && (n as usize) <= self.differentials.len() {
            self.differentials[n as usize - 1].clone()
        } else {
            zeros(ring, rank_at(n - 1), rank_at(n))
        }
    }

    /// The dual cochain complex: `δ^n = D_{n+1}^T`.
    pub fn cochain_complex(&self) -> CochainComplex<E> {
        CochainComplex {
            min_degree: 0,
            ranks: self.ranks.clone(),
            differentials: self.differentials.iter().map(|m| m.transpose()).collect(),
        }
    }
}

/// `H_n` of the infinite cyclic cover as normalized modules, `n = 0..=top+1`.
pub fn l_homology<F: Field>(f: &F, torus: &TorusComplex<F::Elem>) -> Vec<FPModule<F::Elem>> {
    let ring = PolyRing::new(f.clone());
    (0..torus.ranks.len() as isize)
        .map(|n| {
            let incoming = torus.differential(&ring, n + 1);
            let outgoing = torus.differential(&ring, n);
            normalize(&ring, &homology_module(&ring, &incoming, &outgoing))
        })
        .collect()
}

fn eval_poly_mat<F: Field>(ring: &PolyRing<F>, m: &PolyMat<F::Elem>, x: &F::Elem) -> Mat<F::Elem> {
    m.map(|p| ring.eval(p, x))
}

/// `dim H^n(X, rho_lambda)` for `n = 0..=top+1`.
pub fn twisted_cohomology_dims<F: Field>(f: &F, torus: &TorusComplex<F::Elem>, lambda: &F::Elem) -> Result<Vec<usize>> {
    if f.is_zero(lambda) {
        return Err(Error::ZeroEigenvalue);
    }
    let ring = PolyRing::new(f.clone());
    let cx = torus.cochain_complex();
    let ranks: Vec<usize> = (0..cx.ranks.len() as i32 + 1)
        .map(|n| rank(f, &eval_poly_mat(&ring, &cx.differential(&ring, n - 1), lambda)))
        .collect();
    Ok((0..cx.ranks.len()).map(|n| cx.ranks[n] - ranks[n + 1] - ranks[n]).collect())
}

/// Betti numbers of the mapping torus from the Wang sequence of the fiber homology.
pub fn milnor_betti<F: Field>(f: &F, fiber: &FiberComplex<F::Elem>) -> Vec<usize> {
    let maps = induced_homology_maps(f, fiber);
    wang_dims(f, &maps, &f.one())
}

/// `coker(A_i - lambda) + ker(A_{i-1} - lambda)` for `i = 0..=len`.
pub fn wang_dims<F: Field>(f: &F, maps: &[Mat<F::Elem>], lambda: &F::Elem) -> Vec<usize> {
    let shifted: Vec<(usize, usize)> = maps
        .iter()
        .map(|m| {
            let n = m.rows();
            let lam = crate::polyalg::matrix::mat_scale(f, &identity(f, n), lambda);
            let r = rank(f, &mat_sub(f, m, &lam));
            (n - r, n - r)
        })
        .collect();
    (0..=maps.len())
        .map(|i| {
            let coker = shifted.get(i).map_or(0, |x| x.0);
            let ker = if i > 0 { shifted[i - 1].1 } else { 0 };
            coker + ker
        })
        .collect()
}

/// Monodromy on cohomology `phi^*_k = (phi_{*,k})^T`.
pub fn cohomology_monodromy<F: Field>(f: &F, fiber: &FiberComplex<F::Elem>) -> Vec<Mat<F::Elem>> {
    induced_homology_maps(f, fiber).into_iter().map(|m| m.transpose()).collect()
}

/// Embeds a rational polynomial matrix into `F[u]`.
pub fn embed_poly_mat<F: Field>(ring: &PolyRing<F>, m: &PolyMat<Rational>) -> PolyMat<F::Elem> {
    m.map(|p| ring.from_rationals(p))
}

/// `uI - A`.
pub fn characteristic_matrix<F: Field>(ring: &PolyRing<F>, a: &Mat<F::Elem>) -> PolyMat<F::Elem> {
    let n = a.rows();
    Mat::from_fn(n, n, |i, j| {
        let c = ring.constant(ring.field().neg(a.get(i, j)));
        if i == j {
            ring.add(&c, &ring.x())
        } else {
            c
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmodules::NormalForm;
    use crate::scalars::{rat, Rationals};

    fn m(rows: &[&[i64]]) -> Mat<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), cols).unwrap()
    }

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    fn point() -> FiberComplex<Rational> {
        FiberComplex { ranks: vec![1], boundaries: vec![], monodromy: vec![m(&[&[1]])] }
    }

    fn circle() -> FiberComplex<Rational> {
        fiber_from_cohomology_monodromy(&Rationals, &[m(&[&[1]]), m(&[&[1]])])
    }

    fn heisenberg() -> FiberComplex<Rational> {
        fiber_from_cohomology_monodromy(&Rationals, &[m(&[&[1]]), m(&[&[1, 1], &[0, 1]]), m(&[&[1]])])
    }

    fn factors(h: &FPModule<Rational>) -> NormalForm<Rational> {
        h.normal.clone().unwrap()
    }

    #[test]
    fn point_gives_circle() {
        let q = Rationals;
        let t = build_torus_complex(&q, &point()).unwrap();
        assert_eq!(t.ranks, vec![1, 1]);
        let h = l_homology(&q, &t);
        assert_eq!(factors(&h[0]).invariant_factors, vec![p(&[-1, 1])]);
        assert_eq!(factors(&h[1]), NormalForm { free_rank: 0, invariant_factors: vec![] });
        assert_eq!(milnor_betti(&q, &point()), vec![1, 1]);
    }

    #[test]
    fn circle_gives_torus() {
        let q = Rationals;
        let t = build_torus_complex(&q, &circle()).unwrap();
        let h = l_homology(&q, &t);
        assert_eq!(factors(&h[0]).invariant_factors, vec![p(&[-1, 1])]);
        assert_eq!(factors(&h[1]).invariant_factors, vec![p(&[-1, 1])]);
        assert!(factors(&h[2]).invariant_factors.is_empty());
        assert_eq!(twisted_cohomology_dims(&q, &t, &rat(1)).unwrap(), vec![1, 2, 1]);
        assert_eq!(twisted_cohomology_dims(&q, &t, &rat(2)).unwrap(), vec![0, 0, 0]);
        assert_eq!(twisted_cohomology_dims(&q, &t, &rat(0)), Err(Error::ZeroEigenvalue));
    }

    #[test]
    fn heisenberg_homology_and_betti() {
        let q = Rationals;
        let t = build_torus_complex(&q, &heisenberg()).unwrap();
        let h = l_homology(&q, &t);
        let ring = PolyRing::rationals();
        assert_eq!(factors(&h[1]).invariant_factors, vec![ring.pow(&p(&[-1, 1]), 2)]);
        assert_eq!(milnor_betti(&q, &heisenberg()), vec![1, 2, 2, 1]);
        assert_eq!(twisted_cohomology_dims(&q, &t, &rat(1)).unwrap()[1], 2);
    }

    #[test]
    fn minus_identity_on_h1() {
        let q = Rationals;
        let fiber = fiber_from_cohomology_monodromy(&q, &[m(&[&[1]]), m(&[&[-1, 0], &[0, -1]]), m(&[&[1]])]);
        let t = build_torus_complex(&q, &fiber).unwrap();
        let h = l_homology(&q, &t);
        assert_eq!(factors(&h[1]).invariant_factors, vec![p(&[1, 1]), p(&[1, 1])]);
    }

    #[test]
    fn chain_level_fiber() {
        // Circle as an interval with endpoints glued: C_0 = <v>, C_1 = <e>, ∂e = 0,
        // plus a contractible pair (w, g) with ∂g = w - v; monodromy swaps nothing.
        let q = Rationals;
        let fiber = FiberComplex {
            ranks: vec![2, 2],
            boundaries: vec![m(&[&[0, -1], &[0, 1]])],
            monodromy: vec![m(&[&[1, 0], &[0, 1]]), m(&[&[1, 0], &[0, 1]])],
        };
        assert_eq!(milnor_betti(&q, &fiber), vec![1, 2, 1]);
        let t = build_torus_complex(&q, &fiber).unwrap();
        assert_eq!(twisted_cohomology_dims(&q, &t, &rat(1)).unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn rejects_bad_fibers() {
        let q = Rationals;
        let bad_chain_map = FiberComplex {
            ranks: vec![1, 1],
            boundaries: vec![m(&[&[1]])],
            monodromy: vec![m(&[&[1]]), m(&[&[2]])],
        };
        assert_eq!(build_torus_complex(&q, &bad_chain_map), Err(Error::ChainMap { degree: 1 }));
        let singular = fiber_from_cohomology_monodromy(&q, &[m(&[&[0]])]);
        assert_eq!(build_torus_complex(&q, &singular), Err(Error::NotInvertible { degree: 0 }));
        let not_complex = FiberComplex {
            ranks: vec![1, 1, 1],
            boundaries: vec![m(&[&[1]]), m(&[&[1]])],
            monodromy: vec![m(&[&[1]]), m(&[&[1]]), m(&[&[1]])],
        };
        assert_eq!(build_torus_complex(&q, &not_complex), Err(Error::NotAComplex { degree: 2 }));
    }
}
