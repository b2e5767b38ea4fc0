//! Square-free decomposition over any field of characteristic zero and
//! irreducible factorization over `Q`.
//!
//! Factorization over `Q` follows Zassenhaus: factor modulo a prime `Q` larger than
//! twice the coefficient bound of any factor, then recombine modular factors.
//! Because the prime already exceeds the bound no Hensel lifting is needed.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::polyalg::poly::{Poly, PolyRing};
use crate::scalars::{Field, Rational, Ring};

/// Above this many modular factors only low-degree recombinations are tried.
const MAX_FULL_RECOMBINATION: usize = 16;
/// Factor degree searched when full recombination is skipped.
const SCREEN_DEGREE: usize = 4;

/// Square-free decomposition (Yun). Factors are monic, pairwise coprime and
/// square-free; the product of `factor^multiplicity` equals the monic associate of `p`.
pub fn squarefree_factors<F: Field>(ring: &PolyRing<F>, p: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    assert!(!p.is_zero_poly(), "square-free decomposition of zero");
    let f = ring.monic(p);
    if f.degree() == Some(0) {
        return vec![];
    }
    let df = ring.derivative(&f);
    let a0 = ring.gcd(&f, &df);
    let mut b = ring.div_exact(&f, &a0).unwrap();
    let c = ring.div_exact(&df, &a0).unwrap();
    let mut d = ring.sub(&c, &ring.derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = ring.gcd(&b, &d);
        let b_next = ring.div_exact(&b, &a).unwrap();
        let c_next = ring.div_exact(&d, &a).unwrap();
        d = ring.sub(&c_next, &ring.derivative(&b_next));
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        b = b_next;
        i += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleFactor {
    /// Monic.
    pub factor: Poly<Rational>,
    pub multiplicity: usize,
    /// `false` when the factor could not be certified irreducible.
    pub proven: bool,
}

/// Irreducible factorization over `Q`, sorted by degree then coefficients.
pub fn rational_irreducible_factors(p: &Poly<Rational>) -> Vec<IrreducibleFactor> {
    let ring = PolyRing::rationals();
    let mut out = Vec::new();
    for (sf, mult) in squarefree_factors(&ring, p) {
        for (factor, proven) in factor_squarefree(&sf) {
            out.push(IrreducibleFactor { factor, multiplicity: mult, proven });
        }
    }
    out.sort_by(|a, b| poly_order(&a.factor, &b.factor));
    out
}

pub fn poly_order(a: &Poly<Rational>, b: &Poly<Rational>) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs()))
}

fn factor_squarefree(p: &Poly<Rational>) -> Vec<(Poly<Rational>, bool)> {
    let ring = PolyRing::rationals();
    let n = p.degree().unwrap_or(0);
    if n <= 1 {
        return vec![(ring.monic(p), true)];
    }
    let f = primitive_integer(p);
    let found = zassenhaus(&f);
    found
        .into_iter()
        .map(|(g, proven)| {
            let g = Poly::new(g.into_iter().map(BigRational::from_integer).collect());
            (ring.monic(&g), proven)
        })
        .collect()
}

/// Scales to a primitive integer polynomial with positive leading coefficient.
pub fn primitive_integer(p: &Poly<Rational>) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    primitive_part(&ints)
}

fn primitive_part(c: &[BigInt]) -> Vec<BigInt> {
    let content = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if content.is_zero() {
        return c.to_vec();
    }
    let sign = if c.last().is_some_and(|l| l.is_negative()) { -BigInt::one() } else { BigInt::one() };
    let content = content * sign;
    c.iter().map(|x| x / &content).collect()
}

fn zassenhaus(f: &[BigInt]) -> Vec<(Vec<BigInt>, bool)> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    let max = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = (BigInt::one() << n) * BigInt::from(n + 1) * max;
    let mut candidate = BigInt::from(2) * lc.abs() * bound + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let (modulus, modular) = loop {
        let q = next_prime(&candidate, &mut rng);
        let zp = Zp { q: q.clone() };
        let fm = zp.reduce(f);
        if fm.len() == f.len() {
            let monic = zp.monic(&fm);
            let d = zp.derivative(&monic);
            if zp.gcd(&monic, &d).len() == 1 {
                let mut factors = Vec::new();
                for (g, deg) in zp.ddf(&monic) {
                    factors.extend(zp.edf(&g, deg, &mut rng));
                }
                break (zp, factors);
            }
        }
        candidate = q + 1;
    };
    recombine(f, modular, &modulus)
}

fn recombine(f: &[BigInt], mut modular: Vec<Vec<BigInt>>, zp: &Zp) -> Vec<(Vec<BigInt>, bool)> {
    let ring = PolyRing::rationals();
    let mut current = f.to_vec();
    let mut out = Vec::new();
    let full = modular.len() <= MAX_FULL_RECOMBINATION;
    let mut s = 1;
    while 2 * s <= modular.len() {
        let mut found = false;
        for subset in combinations(modular.len(), s) {
            let deg: usize = subset.iter().map(|&i| modular[i].len() - 1).sum();
            if !full && deg > SCREEN_DEGREE {
                continue;
            }
            let lc = current.last().unwrap().clone();
            let mut g = vec![zp.normalize(&lc)];
            for &i in &subset {
                g = zp.mul(&g, &modular[i]);
            }
            let g = primitive_part(&zp.symmetric(&g));
            let gq = to_rational(&g);
            if let Some(quot) = ring.div_exact(&to_rational(&current), &gq) {
                if quot.coeffs().iter().all(|c| c.is_integer()) {
                    out.push((g, true));
                    current = quot.coeffs().iter().map(|c| c.numer().clone()).collect();
                    let mut keep = Vec::new();
                    for (i, m) in modular.into_iter().enumerate() {
                        if !subset.contains(&i) {
                            keep.push(m);
                        }
                    }
                    modular = keep;
                    found = true;
                    break;
                }
            }
        }
        if !found {
            s += 1;
        }
    }
    if current.len() > 1 {
        let proven = full || current.len() - 1 <= SCREEN_DEGREE;
        out.push((primitive_part(&current), proven));
    }
    out
}

fn to_rational(c: &[BigInt]) -> Poly<Rational> {
    Poly::new(c.iter().cloned().map(BigRational::from_integer).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return out };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn is_probable_prime(n: &BigInt, rng: &mut ChaCha8Rng) -> bool {
    let two = BigInt::from(2);
    if *n < two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n1: BigInt = n - 1;
    let mut d = n1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for round in 0..24 {
        let a = if round < 12 {
            BigInt::from([2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37][round])
        } else {
            let bits = n.bits();
            let mut bytes = vec![0u8; (bits as usize).div_ceil(8)];
            rng.fill(&mut bytes[..]);
            BigInt::from_bytes_le(Sign::Plus, &bytes) % (n - 3u32) + 2u32
        };
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn next_prime(from: &BigInt, rng: &mut ChaCha8Rng) -> BigInt {
    let mut c = from.clone();
    if c <= BigInt::from(2) {
        return BigInt::from(3);
    }
    if c.is_even() {
        c += 1;
    }
    while !is_probable_prime(&c, rng) {
        c += 2;
    }
    c
}

/// Polynomials over `Z/qZ`, coefficients in `[0, q)`, constant term first.
struct Zp {
    q: BigInt,
}

impl Zp {
    fn normalize(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.q)
    }

    fn trim(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        c
    }

    fn reduce(&self, c: &[BigInt]) -> Vec<BigInt> {
        self.trim(c.iter().map(|x| self.normalize(x)).collect())
    }

    fn inv(&self, x: &BigInt) -> BigInt {
        x.modpow(&(&self.q - 2u32), &self.q)
    }

    fn symmetric(&self, c: &[BigInt]) -> Vec<BigInt> {
        let half = &self.q >> 1;
        c.iter().map(|x| if *x > half { x - &self.q } else { x.clone() }).collect()
    }

    fn monic(&self, a: &[BigInt]) -> Vec<BigInt> {
        let li = self.inv(a.last().unwrap());
        a.iter().map(|x| (x * &li) % &self.q).collect()
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let zero = BigInt::zero();
        self.reduce(
            &(0..n)
                .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
                .collect::<Vec<_>>(),
        )
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(&out)
    }

    fn divrem(&self, a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (vec![], a.to_vec());
        }
        let li = self.inv(b.last().unwrap());
        let mut rem = a.to_vec();
        let mut quot = vec![BigInt::zero(); a.len() - db];
        for i in (0..quot.len()).rev() {
            let c = (&rem[i + db] * &li) % &self.q;
            if c.is_zero() {
                continue;
            }
            for (j, bc) in b.iter().enumerate() {
                rem[i + j] = (&rem[i + j] - &c * bc).mod_floor(&self.q);
            }
            quot[i] = c;
        }
        rem.truncate(db);
        (self.trim(quot), self.trim(rem))
    }

    fn rem(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.divrem(a, b).1
    }

    fn gcd(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    fn derivative(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect::<Vec<_>>())
    }

    fn powmod(&self, base: &[BigInt], exp: &BigInt, m: &[BigInt]) -> Vec<BigInt> {
        let mut result = vec![BigInt::one()];
        let mut b = self.rem(base, m);
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                result = self.rem(&self.mul(&result, &b), m);
            }
            if i + 1 < bits {
                b = self.rem(&self.mul(&b, &b), m);
            }
        }
        self.rem(&result, m)
    }

    /// Distinct-degree factorization of a monic square-free polynomial.
    fn ddf(&self, f: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
        let x = vec![BigInt::zero(), BigInt::one()];
        let mut g = f.to_vec();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut i = 1;
        while g.len() - 1 >= 2 * i {
            h = self.powmod(&h, &self.q, &g);
            let d = self.gcd(&g, &self.sub(&h, &x));
            if d.len() > 1 {
                g = self.divrem(&g, &d).0;
                h = self.rem(&h, &g);
                out.push((d, i));
            }
            i += 1;
        }
        if g.len() > 1 {
            let deg = g.len() - 1;
            out.push((g, deg));
        }
        out
    }

    /// Equal-degree splitting (Cantor-Zassenhaus), `q` odd.
    fn edf(&self, f: &[BigInt], d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<BigInt>> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let exp = (self.q.pow(d as u32) - 1u32) / 2u32;
        loop {
            let bytes_len = (self.q.bits() as usize).div_ceil(8) + 1;
            let a: Vec<BigInt> = (0..n)
                .map(|_| {
                    let mut bytes = vec![0u8; bytes_len];
                    rng.fill(&mut bytes[..]);
                    BigInt::from_bytes_le(Sign::Plus, &bytes) % &self.q
                })
                .collect();
            let a = self.trim(a);
            if a.len() <= 1 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &exp, f), &[BigInt::one()]);
            let g = self.gcd(f, &b);
            let dg = g.len().saturating_sub(1);
            if dg > 0 && dg < n {
                let h = self.monic(&self.divrem(f, &g).0);
                let mut out = self.edf(&g, d, rng);
                out.extend(self.edf(&h, d, rng));
                return out;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    #[test]
    fn yun_examples() {
        let ring = PolyRing::rationals();
        let xm1 = p(&[-1, 1]);
        let xp1 = p(&[1, 1]);
        let f = ring.mul(&ring.pow(&xm1, 2), &xp1);
        assert_eq!(squarefree_factors(&ring, &f), vec![(xp1, 1), (xm1, 2)]);
        assert_eq!(squarefree_factors(&ring, &p(&[0, 0, 0, 1])), vec![(p(&[0, 1]), 3)]);
        assert_eq!(squarefree_factors(&ring, &p(&[-2, 0, 1])), vec![(p(&[-2, 0, 1]), 1)]);
    }

    #[test]
    fn rational_factor_examples() {
        let f = rational_irreducible_factors(&p(&[-1, 0, 1]));
        assert_eq!(
            f.iter().map(|x| (x.factor.clone(), x.multiplicity, x.proven)).collect::<Vec<_>>(),
            vec![(p(&[-1, 1]), 1, true), (p(&[1, 1]), 1, true)]
        );
        let ring = PolyRing::rationals();
        let g = ring.mul(&ring.pow(&p(&[-1, 1]), 2), &p(&[1, 1]));
        let f = rational_irreducible_factors(&g);
        assert_eq!(f.len(), 2);
        assert_eq!((f[0].factor.clone(), f[0].multiplicity), (p(&[-1, 1]), 2));
        assert_eq!((f[1].factor.clone(), f[1].multiplicity), (p(&[1, 1]), 1));
        let f = rational_irreducible_factors(&p(&[1, 1, 1]));
        assert_eq!(f, vec![IrreducibleFactor { factor: p(&[1, 1, 1]), multiplicity: 1, proven: true }]);
    }

    #[test]
    fn splits_quartic_without_rational_roots() {
        // (x^2 + 1)(x^2 - 2) and x^4 + 1 (irreducible over Q, reducible mod every prime).
        let ring = PolyRing::rationals();
        let g = ring.mul(&p(&[1, 0, 1]), &p(&[-2, 0, 1]));
        let f = rational_irreducible_factors(&g);
        assert_eq!(f.iter().map(|x| x.factor.clone()).collect::<Vec<_>>(), vec![p(&[-2, 0, 1]), p(&[1, 0, 1])]);
        let f = rational_irreducible_factors(&p(&[1, 0, 0, 0, 1]));
        assert_eq!(f.len(), 1);
        assert!(f[0].proven);
    }

    #[test]
    fn non_monic_rational_input() {
        let ring = PolyRing::rationals();
        // (2x - 1)(3x^2 + 1/2) scaled by 7/5
        let a = Poly::new(vec![crate::scalars::ratio(-1, 1), crate::scalars::rat(2)]);
        let b = Poly::new(vec![crate::scalars::ratio(1, 2), crate::scalars::rat(0), crate::scalars::rat(3)]);
        let g = ring.scale(&ring.mul(&a, &b), &crate::scalars::ratio(7, 5));
        let f = rational_irreducible_factors(&g);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].factor, ring.monic(&a));
        assert_eq!(f[1].factor, ring.monic(&b));
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(5, 1).len(), 5);
    }
}
