//! Finitely presented modules over `L = F[u, u^-1]`, computed over the Euclidean
//! ring `F[u]`. The Laurent structure only enters by discarding `u`-primary torsion.

use crate::error::{Error, Result};
use crate::polyalg::matrix::{block_diag, companion, hstack, identity, mat_mul, zeros, Mat};
use crate::polyalg::poly::{Poly, PolyRing};
use crate::scalars::{Field, Ring};

pub type PolyMat<E> = Mat<Poly<E>>;

/// `u * m * v = d` with `u_inv`, `v_inv` the inverses of the unimodular transforms.
#[derive(Clone, Debug)]
pub struct Snf<E> {
    pub u: PolyMat<E>,
    pub u_inv: PolyMat<E>,
    pub d: PolyMat<E>,
    pub v: PolyMat<E>,
    pub v_inv: PolyMat<E>,
    /// Number of non-zero diagonal entries.
    pub rank: usize,
}

impl<E: Clone> Snf<E> {
    pub fn diagonal(&self) -> Vec<Poly<E>> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct SnfState<'a, F: Field> {
    ring: &'a PolyRing<F>,
    a: PolyMat<F::Elem>,
    u: PolyMat<F::Elem>,
    u_inv: PolyMat<F::Elem>,
    v: PolyMat<F::Elem>,
    v_inv: PolyMat<F::Elem>,
    track: bool,
}

impl<F: Field> SnfState<'_, F> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if self.track {
            self.u.swap_rows(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if self.track {
            self.v.swap_cols(i, j);
            self.v_inv.swap_rows(i, j);
        }
    }

    /// row_i += c * row_t
    fn add_row(&mut self, i: usize, t: usize, c: &Poly<F::Elem>) {
        let r = self.ring;
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m.cols() {
                let x = m.get(t, j);
                if r.is_zero(x) {
                    continue;
                }
                let v = r.add(m.get(i, j), &r.mul(c, x));
                m.set(i, j, v);
            }
        }
        if !self.track {
            return;
        }
        // u_inv <- u_inv * (I - c e_i e_t^T): column t -= c * column i
        let m = &mut self.u_inv;
        for k in 0..m.rows() {
            let x = m.get(k, i);
            if r.is_zero(x) {
                continue;
            }
            let v = r.sub(m.get(k, t), &r.mul(c, x));
            m.set(k, t, v);
        }
    }

    /// col_j += c * col_t
    fn add_col(&mut self, j: usize, t: usize, c: &Poly<F::Elem>) {
        let r = self.ring;
        for m in [&mut self.a, &mut self.v] {
            for k in 0..m.rows() {
                let x = m.get(k, t);
                if r.is_zero(x) {
                    continue;
                }
                let v = r.add(m.get(k, j), &r.mul(c, x));
                m.set(k, j, v);
            }
        }
        if !self.track {
            return;
        }
        // v_inv <- (I - c e_t e_j^T) * v_inv: row t -= c * row j
        let m = &mut self.v_inv;
        for k in 0..m.cols() {
            let x = m.get(j, k);
            if r.is_zero(x) {
                continue;
            }
            let v = r.sub(m.get(t, k), &r.mul(c, x));
            m.set(t, k, v);
        }
    }

    fn scale_row(&mut self, t: usize, c: &F::Elem) {
        let f = self.ring.field();
        let ci = f.inv(c).expect("unit");
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m.cols() {
                let v = self.ring.scale(m.get(t, j), c);
                m.set(t, j, v);
            }
        }
        if !self.track {
            return;
        }
        let m = &mut self.u_inv;
        for k in 0..m.rows() {
            let v = self.ring.scale(m.get(k, t), &ci);
            m.set(k, t, v);
        }
    }
}

/// Smith normal form over `F[u]`; diagonal entries are monic and form a divisibility chain.
pub fn snf<F: Field>(ring: &PolyRing<F>, m: &PolyMat<F::Elem>) -> Snf<F::Elem> {
    smith(ring, m, true)
}

/// Diagonal and rank only; the transforms are left empty.
pub fn snf_diagonal<F: Field>(ring: &PolyRing<F>, m: &PolyMat<F::Elem>) -> Snf<F::Elem> {
    smith(ring, m, false)
}

fn smith<F: Field>(ring: &PolyRing<F>, m: &PolyMat<F::Elem>, track: bool) -> Snf<F::Elem> {
    let (rows, cols) = (m.rows(), m.cols());
    let square = |n: usize| if track { identity(ring, n) } else { zeros(ring, 0, 0) };
    let mut st = SnfState {
        ring,
        a: m.clone(),
        u: square(rows),
        u_inv: square(rows),
        v: square(cols),
        v_inv: square(cols),
        track,
    };
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if let Some(d) = st.a.get(i, j).degree() {
                        if best.is_none_or(|(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((bi, bj, _)) = best else { break };
            st.swap_rows(t, bi);
            st.swap_cols(t, bj);
            let pivot = st.a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if ring.is_zero(st.a.get(i, t)) {
                    continue;
                }
                let (q, r) = ring.divrem(st.a.get(i, t), &pivot);
                st.add_row(i, t, &ring.neg(&q));
                clean &= r.is_zero_poly();
            }
            for j in t + 1..cols {
                if ring.is_zero(st.a.get(t, j)) {
                    continue;
                }
                let (q, r) = ring.divrem(st.a.get(t, j), &pivot);
                st.add_col(j, t, &ring.neg(&q));
                clean &= r.is_zero_poly();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !ring.divides(&pivot, st.a.get(i, j))));
            match offender {
                Some(i) => st.add_row(t, i, &ring.one()),
                None => break,
            }
        }
        if ring.is_zero(st.a.get(t, t)) {
            break;
        }
        let lead = st.a.get(t, t).lead().unwrap().clone();
        if !ring.field().is_one(&lead) {
            st.scale_row(t, &ring.field().inv(&lead).unwrap());
        }
        rank += 1;
    }
    Snf { u: st.u, u_inv: st.u_inv, d: st.a, v: st.v, v_inv: st.v_inv, rank }
}

/// Determinant of a square polynomial matrix (fraction-free Bareiss elimination).
pub fn poly_det<F: Field>(ring: &PolyRing<F>, m: &PolyMat<F::Elem>) -> Result<Poly<F::Elem>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(ring.one());
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if ring.is_zero(a.get(k, k)) {
            match (k + 1..n).find(|&i| !ring.is_zero(a.get(i, k))) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = !sign;
                }
                None => return Ok(ring.zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ring.sub(&ring.mul(a.get(i, j), a.get(k, k)), &ring.mul(a.get(i, k), a.get(k, j)));
                let v = ring.div_exact(&num, &prev).expect("Bareiss division is exact");
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    let det = a.get(n - 1, n - 1).clone();
    Ok(if sign { ring.neg(&det) } else { det })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<E> {
    pub free_rank: usize,
    /// Monic, non-unit in `L`, each dividing the next.
    pub invariant_factors: Vec<Poly<E>>,
}

/// Cokernel of `presentation: F[u]^cols -> F[u]^rows`, viewed over `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct FPModule<E> {
    pub presentation: PolyMat<E>,
    pub normal: Option<NormalForm<E>>,
}

impl<E: Clone> FPModule<E> {
    pub fn new(presentation: PolyMat<E>) -> Self {
        FPModule { presentation, normal: None }
    }

    pub fn generators(&self) -> usize {
        self.presentation.rows()
    }

    pub fn normal_form(&self) -> Result<&NormalForm<E>> {
        self.normal
            .as_ref()
            .ok_or_else(|| Error::Input("module must be normalized first".into()))
    }
}

/// `F[u]^free_rank ⊕ ⊕ F[u]/(d_i)`.
pub fn module_from_factors<F: Field>(
    ring: &PolyRing<F>,
    free_rank: usize,
    factors: &[Poly<F::Elem>],
) -> FPModule<F::Elem> {
    let n = free_rank + factors.len();
    let mut p = zeros(ring, n, factors.len());
    for (k, d) in factors.iter().enumerate() {
        p.set(free_rank + k, k, d.clone());
    }
    FPModule::new(p)
}

/// Strips every factor of `u` (a unit of `L`).
fn strip_u<F: Field>(ring: &PolyRing<F>, d: &Poly<F::Elem>) -> Poly<F::Elem> {
    let f = ring.field();
    let skip = d.coeffs().iter().take_while(|c| f.is_zero(c)).count();
    ring.make(d.coeffs()[skip..].to_vec())
}

pub fn normalize<F: Field>(ring: &PolyRing<F>, module: &FPModule<F::Elem>) -> FPModule<F::Elem> {
    let s = snf_diagonal(ring, &module.presentation);
    let invariant_factors: Vec<_> = s
        .diagonal()
        .into_iter()
        .take(s.rank)
        .map(|d| ring.monic(&strip_u(ring, &d)))
        .filter(|d| d.degree().unwrap_or(0) > 0)
        .collect();
    FPModule {
        presentation: module.presentation.clone(),
        normal: Some(NormalForm { free_rank: module.generators() - s.rank, invariant_factors }),
    }
}

/// Exponents `r` of the summands `L/(p^r)`, largest first.
pub fn primary_exponents<F: Field>(
    ring: &PolyRing<F>,
    module: &FPModule<F::Elem>,
    p: &Poly<F::Elem>,
) -> Result<Vec<usize>> {
    let nf = module.normal_form()?;
    let mut e: Vec<usize> = nf
        .invariant_factors
        .iter()
        .map(|d| ring.valuation(d, p))
        .filter(|&v| v > 0)
        .collect();
    e.sort_unstable_by(|a, b| b.cmp(a));
    Ok(e)
}

/// The free part together with the `p`-primary summands, a module isomorphic
/// to the given one after localizing at `p`.
pub fn primary_model<F: Field>(
    ring: &PolyRing<F>,
    module: &FPModule<F::Elem>,
    p: &Poly<F::Elem>,
) -> Result<FPModule<F::Elem>> {
    let free = module.normal_form()?.free_rank;
    let factors: Vec<_> = primary_exponents(ring, module, p)?.iter().map(|&e| ring.pow(p, e)).collect();
    Ok(normalize(ring, &module_from_factors(ring, free, &factors)))
}

/// Multiplication by `u` on the torsion submodule.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionAction<E> {
    pub dim: usize,
    pub action: Mat<E>,
}

pub fn torsion_action<F: Field>(ring: &PolyRing<F>, module: &FPModule<F::Elem>) -> Result<TorsionAction<F::Elem>> {
    let nf = module.normal_form()?;
    let f = ring.field();
    let blocks: Vec<_> = nf.invariant_factors.iter().map(|d| companion(f, d)).collect();
    let action = block_diag(f, &blocks);
    Ok(TorsionAction { dim: action.rows(), action })
}

/// Presentation of `ker(outgoing) / im(incoming)` for a complex of free `F[u]`-modules
/// of rank `n` at the middle spot.
pub fn homology_module<F: Field>(
    ring: &PolyRing<F>,
    incoming: &PolyMat<F::Elem>,
    outgoing: &PolyMat<F::Elem>,
) -> FPModule<F::Elem> {
    let n = incoming.rows();
    assert_eq!(outgoing.cols(), n, "complex shape mismatch");
    let s = snf(ring, outgoing);
    let in_coords = mat_mul(ring, &s.v_inv, incoming);
    debug_assert!((0..s.rank).all(|i| in_coords.row(i).iter().all(|x| ring.is_zero(x))));
    FPModule::new(in_coords.submatrix(s.rank..n, 0..incoming.cols()))
}

/// A presentation matrix with the same cokernel and trivial kernel.
pub fn injective_presentation<F: Field>(ring: &PolyRing<F>, module: &FPModule<F::Elem>) -> PolyMat<F::Elem> {
    let s = snf(ring, &module.presentation);
    let rv = mat_mul(ring, &module.presentation, &s.v);
    rv.select_cols(&(0..s.rank).collect::<Vec<_>>())
}

/// Presentation of the submodule `q^k M` (generated by `q^k` times the generators of `M`).
pub fn power_submodule<F: Field>(
    ring: &PolyRing<F>,
    module: &FPModule<F::Elem>,
    q: &Poly<F::Elem>,
    k: usize,
) -> FPModule<F::Elem> {
    let g = module.generators();
    if k == 0 {
        return FPModule::new(module.presentation.clone());
    }
    let qk = ring.pow(q, k);
    let scaled = Mat::from_fn(g, g, |i, j| if i == j { qk.clone() } else { ring.zero() });
    let neg_r = module.presentation.map(|x| ring.neg(x));
    let a = hstack(&scaled, &neg_r);
    let s = snf(ring, &a);
    // Kernel of `a` is spanned by the trailing columns of v; their first g rows
    // generate { x : q^k x in im R }.
    let kernel_cols: Vec<usize> = (s.rank..a.cols()).collect();
    let gens = s.v.select_cols(&kernel_cols).submatrix(0..g, 0..kernel_cols.len());
    FPModule::new(gens)
}

/// F-dimension of `M / qM` and of `ker(q on M)` for a normalized module.
pub fn q_coker_ker_dims<F: Field>(
    ring: &PolyRing<F>,
    module: &FPModule<F::Elem>,
    q: &Poly<F::Elem>,
) -> Result<(usize, usize)> {
    let nf = module.normal_form()?;
    let d = q.degree().unwrap_or(0);
    let torsion = nf.invariant_factors.iter().filter(|x| ring.divides(q, x)).count();
    Ok(((nf.free_rank + torsion) * d, torsion * d))
}
