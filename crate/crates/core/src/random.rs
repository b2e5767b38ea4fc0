//! Seeded generators of random instances: invertible rational matrices with
//! small entries and repeated eigenvalues, graded presentations over `Q[u]`,
//! and couples with a prescribed nilpotent part.

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lmodules::PolyMat;
use crate::polyalg::matrix::{block_diag, companion, identity, inverse, Mat};
use crate::polyalg::poly::{Poly, PolyRing};
use crate::scalars::{rat, ratio, Rational, Rationals, Ring};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const ENTRY_BOUND: i64 = 5;

fn bounded(q: &Rational) -> bool {
    q.numer().abs() <= ENTRY_BOUND.into() && q.denom() <= &ENTRY_BOUND.into()
}

pub fn small_rational(rng: &mut InstanceRng) -> Rational {
    ratio(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND), rng.gen_range(1..=ENTRY_BOUND))
}

const EIGENVALUES: [(i64, i64); 7] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1)];

/// Irreducible quadratics with small coefficients, constant term first.
const QUADRATICS: [[i64; 3]; 4] = [[1, 0, 1], [1, 1, 1], [1, -1, 1], [-2, 0, 1]];

fn jordan_block(lambda: &Rational, size: usize) -> Mat<Rational> {
    Mat::from_fn(size, size, |i, j| {
        if i == j {
            lambda.clone()
        } else if j == i + 1 {
            rat(1)
        } else {
            rat(0)
        }
    })
}

/// Block-diagonal matrix of Jordan and companion blocks, then conjugated by
/// elementary moves that keep every entry within the bound.
fn structured(rng: &mut InstanceRng, n: usize) -> Mat<Rational> {
    let q = Rationals;
    let ring = PolyRing::new(q);
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        if left >= 2 && rng.gen_bool(0.3) {
            let p = Poly::from_ints(QUADRATICS.choose(rng).unwrap());
            let power = if left >= 4 && rng.gen_bool(0.4) { 2 } else { 1 };
            blocks.push(companion(&q, &ring.pow(&p, power)));
            left -= 2 * power;
        } else {
            let (a, b) = *EIGENVALUES[..rng.gen_range(2..=EIGENVALUES.len())].choose(rng).unwrap();
            let size = rng.gen_range(1..=left.min(3));
            blocks.push(jordan_block(&ratio(a, b), size));
            left -= size;
        }
    }
    let mut a = block_diag(&q, &blocks);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    a = Mat::from_fn(n, n, |i, j| a.get(order[i], order[j]).clone());
    for _ in 0..3 * n {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = [rat(1), rat(-1), rat(2), ratio(1, 2)].choose(rng).unwrap().clone();
        // A <- E A E^-1 with E = I + c e_i e_j^T: row_i += c row_j, then col_j -= c col_i.
        let mut b = a.clone();
        for k in 0..n {
            let v = q.add(b.get(i, k), &q.mul(&c, a.get(j, k)));
            b.set(i, k, v);
        }
        let snapshot = b.clone();
        for k in 0..n {
            let v = q.sub(snapshot.get(k, j), &q.mul(&c, snapshot.get(k, i)));
            b.set(k, j, v);
        }
        if b.entries().iter().all(bounded) {
            a = b;
        }
    }
    a
}

/// Invertible `n x n` rational matrix, entries with numerator and denominator at most 5.
pub fn random_invertible(rng: &mut InstanceRng, n: usize) -> Mat<Rational> {
    if rng.gen_bool(0.6) {
        return structured(rng, n);
    }
    loop {
        let a = Mat::from_fn(n, n, |_, _| if rng.gen_bool(0.4) { rat(0) } else { small_rational(rng) });
        if inverse(&Rationals, &a).is_some() {
            return a;
        }
    }
}

/// Monodromy on `H^0 .. H^top` with `H^0` one-dimensional and the identity there.
pub fn random_monodromy(rng: &mut InstanceRng, max_dim: usize) -> Vec<Mat<Rational>> {
    let top = rng.gen_range(1..=3);
    let mut maps = vec![identity(&Rationals, 1)];
    for _ in 1..=top {
        let n = rng.gen_range(1..=max_dim);
        maps.push(random_invertible(rng, n));
    }
    maps
}

fn small_poly(rng: &mut InstanceRng, max_degree: usize) -> Poly<Rational> {
    let deg = rng.gen_range(0..=max_degree);
    Poly::new((0..=deg).map(|_| rat(rng.gen_range(-2..=2))).collect())
}

/// Matrix over `Q[u]` of size at most `max_size` with entries of degree at
/// most `max_degree`, roughly a third of them zero.
pub fn random_poly_matrix(rng: &mut InstanceRng, max_size: usize, max_degree: usize) -> PolyMat<Rational> {
    let rows = rng.gen_range(1..=max_size);
    let cols = rng.gen_range(1..=max_size);
    Mat::from_fn(rows, cols, |_, _| {
        if rng.gen_bool(0.3) {
            PolyRing::rationals().zero()
        } else {
            let deg = rng.gen_range(0..=max_degree);
            Poly::new((0..=deg).map(|_| small_rational(rng)).collect())
        }
    })
}

/// `U * P * V` for random unimodular `U`, `V` built from elementary moves.
pub fn scramble(rng: &mut InstanceRng, p: &PolyMat<Rational>) -> PolyMat<Rational> {
    let ring = PolyRing::rationals();
    let mut m = p.clone();
    let (rows, cols) = (m.rows(), m.cols());
    for _ in 0..rows {
        if rows < 2 {
            break;
        }
        let i = rng.gen_range(0..rows);
        let j = (i + rng.gen_range(1..rows)) % rows;
        let c = small_poly(rng, 1);
        for k in 0..cols {
            let v = ring.add(m.get(i, k), &ring.mul(&c, m.get(j, k)));
            m.set(i, k, v);
        }
    }
    for _ in 0..cols {
        if cols < 2 {
            break;
        }
        let i = rng.gen_range(0..cols);
        let j = (i + rng.gen_range(1..cols)) % cols;
        let c = small_poly(rng, 1);
        for k in 0..rows {
            let v = ring.add(m.get(k, i), &ring.mul(&c, m.get(k, j)));
            m.set(k, i, v);
        }
    }
    m
}

/// Diagonal presentation of `F[u]^free ⊕ ⊕ F[u]/(d_i)`, optionally with a
/// redundant relation column.
fn diagonal_presentation(
    rng: &mut InstanceRng,
    free: usize,
    factors: &[Poly<Rational>],
) -> PolyMat<Rational> {
    let ring = PolyRing::rationals();
    let g = free + factors.len();
    let extra = usize::from(!factors.is_empty() && rng.gen_bool(0.3));
    Mat::from_fn(g, factors.len() + extra, |i, j| {
        if j < factors.len() {
            if i == free + j {
                factors[j].clone()
            } else {
                ring.zero()
            }
        } else if i >= free {
            factors[i - free].clone()
        } else {
            ring.zero()
        }
    })
}

fn linear(lambda: &Rational) -> Poly<Rational> {
    PolyRing::rationals().linear(lambda)
}

fn random_torsion_factor(rng: &mut InstanceRng) -> Poly<Rational> {
    let ring = PolyRing::rationals();
    let mut f = ring.one();
    for _ in 0..rng.gen_range(1..=2) {
        let piece = match rng.gen_range(0..5) {
            0 => Poly::from_ints(QUADRATICS.choose(rng).unwrap()),
            // u is a unit in L, so this part must disappear.
            1 => Poly::from_ints(&[0, 1]),
            _ => {
                let (a, b) = *EIGENVALUES[..4].choose(rng).unwrap();
                linear(&ratio(a, b))
            }
        };
        f = ring.mul(&f, &ring.pow(&piece, rng.gen_range(1..=3)));
    }
    f
}

/// Presentations of `H^k(X; L)` for `k = 1 ..= top`, some with free summands.
pub fn random_presentations(rng: &mut InstanceRng) -> (i32, Vec<PolyMat<Rational>>) {
    let count = rng.gen_range(1..=3);
    let modules = (0..count)
        .map(|_| {
            let free = rng.gen_range(0..=2);
            let factors: Vec<Poly<Rational>> = (0..rng.gen_range(0..=3)).map(|_| random_torsion_factor(rng)).collect();
            let p = diagonal_presentation(rng, free, &factors);
            scramble(rng, &p)
        })
        .collect();
    (1, modules)
}

/// A module `A ⊕ B` in degree 1 where `q` acts nilpotently of degree exactly
/// `m` on `A` and injectively on `B`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub q: Poly<Rational>,
    pub nilpotency: usize,
    pub presentation: PolyMat<Rational>,
}

pub fn random_decomposition(rng: &mut InstanceRng, m: usize) -> Decomposition {
    let ring = PolyRing::rationals();
    let (a, b) = *EIGENVALUES.choose(rng).unwrap();
    let lambda = ratio(a, b);
    let q = linear(&lambda);
    let mut factors = vec![ring.pow(&q, m)];
    for _ in 0..rng.gen_range(0..=2) {
        factors.push(ring.pow(&q, rng.gen_range(1..=m)));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let (c, d) = *EIGENVALUES.choose(rng).unwrap();
        let mu = ratio(c, d);
        if mu != lambda {
            factors.push(ring.pow(&linear(&mu), rng.gen_range(1..=3)));
        }
    }
    if rng.gen_bool(0.3) {
        factors.push(Poly::from_ints(&[1, 0, 1]));
    }
    factors.shuffle(rng);
    let free = rng.gen_range(0..=2);
    let diagonal = diagonal_presentation(rng, free, &factors);
    let presentation = scramble(rng, &diagonal);
    Decomposition { q, nilpotency: m, presentation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::matrix::charpoly;

    #[test]
    fn matrices_are_bounded_and_invertible() {
        let mut r = rng(7);
        for _ in 0..50 {
            let n = r.gen_range(1..=6);
            let a = random_invertible(&mut r, n);
            assert!(a.entries().iter().all(bounded));
            assert!(inverse(&Rationals, &a).is_some());
            assert_eq!(charpoly(&Rationals, &a).unwrap().degree(), Some(n));
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_monodromy(&mut rng(3), 6);
        let b = random_monodromy(&mut rng(3), 6);
        assert_eq!(a, b);
        assert_eq!(random_presentations(&mut rng(4)), random_presentations(&mut rng(4)));
    }
}
