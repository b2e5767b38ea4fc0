//! The exact couple `D --i--> D --> E --> D` with `i` multiplication by an
//! irreducible `q` (`q = u - lambda` over a field containing `lambda`), its
//! derived couples, page dimensions and degeneration sheets.
//!
//! `D^k` is the `L`-module cohomology of a free cochain complex and `E^k` the
//! cohomology of the complex reduced mod `q`. The derived couples are computed
//! on cochains through the `q`-adic filtration: `E_r^k = Z_r^k / B_r^k` where
//! `Z_r` are the classes that lift to cocycles mod `q^r` and `B_r` the leading
//! digits of coboundaries divisible by `q^(r-1)`. The `D` side is tracked as
//! `D_r = q^(r-1) D` by presentations, and each derived couple is checked for
//! exactness against it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lmodules::{
    injective_presentation, normalize, power_submodule, primary_exponents, q_coker_ker_dims,
    FPModule, PolyMat,
};
use crate::polyalg::matrix::{block2, eval_poly_at, rank, zeros, Mat};
use crate::polyalg::poly::{Poly, PolyRing};
use crate::scalars::{Field, Ring};
use crate::toruscx::{cochain_cohomology, CochainComplex};

/// Offset between the degree of `E` and the degree of `D` that carries the
/// outgoing differentials: `d_r : E^k -> E^(k+1)` is governed by `D^(k+1)`.
pub const DEGREE_OFFSET: i32 = 1;

/// The two candidate degree conventions relating `E^k` to `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeConvention {
    Same,
    Shifted,
}

impl DegreeConvention {
    pub fn offset(self) -> i32 {
        match self {
            DegreeConvention::Same => 0,
            DegreeConvention::Shifted => 1,
        }
    }
}

pub const SHIPPED_CONVENTION: DegreeConvention = DegreeConvention::Shifted;

/// Coordinates of `F[u]/(q^r)` in the basis `u^a q^b` (`a < deg q`, `b < r`),
/// so that reduction mod `q` and division by `q^(r-1)` read off single digits.
struct Digits<'a, F: Field> {
    ring: &'a PolyRing<F>,
    q: &'a Poly<F::Elem>,
    d: usize,
}

impl<F: Field> Digits<'_, F> {
    /// Matrix of multiplication by `u` on `F[u]/(q^r)`: `u * u^a q^b` is a
    /// basis vector unless `a = d - 1`, where `u^d = (u^d - q) + q`.
    fn shift(&self, r: usize) -> Mat<F::Elem> {
        let f = self.ring.field();
        let n = self.d * r;
        let mut m = zeros(f, n, n);
        let tail = self.ring.sub(&self.ring.monomial(f.one(), self.d), self.q);
        for b in 0..r {
            for a in 0..self.d {
                let col = b * self.d + a;
                if a + 1 < self.d {
                    m.set(col + 1, col, f.one());
                    continue;
                }
                for (i, c) in tail.coeffs().iter().enumerate() {
                    m.set(b * self.d + i, col, c.clone());
                }
                if b + 1 < r {
                    m.set((b + 1) * self.d, col, f.one());
                }
            }
        }
        m
    }

    /// A polynomial matrix acting on `(F[u]/(q^r))^cols`; coordinate `i` of
    /// the module occupies indices `i*d*r .. (i+1)*d*r`.
    fn lift(&self, m: &PolyMat<F::Elem>, r: usize) -> Mat<F::Elem> {
        let f = self.ring.field();
        let n = self.d * r;
        let shift = self.shift(r);
        let mut out = zeros(f, m.rows() * n, m.cols() * n);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let g = m.get(i, j);
                if g.is_zero_poly() {
                    continue;
                }
                let block = eval_poly_at(f, g, &shift);
                for x in 0..n {
                    for y in 0..n {
                        let v = block.get(x, y);
                        if !f.is_zero(v) {
                            out.set(i * n + x, j * n + y, v.clone());
                        }
                    }
                }
            }
        }
        out
    }

    fn digit_indices(&self, coords: usize, r: usize, digit: usize) -> Vec<usize> {
        let n = self.d * r;
        (0..coords).flat_map(|i| (0..self.d).map(move |a| i * n + digit * self.d + a)).collect()
    }
}

fn select_rows<E: Clone>(m: &Mat<E>, rows: &[usize]) -> Mat<E> {
    Mat::from_fn(rows.len(), m.cols(), |i, j| m.get(rows[i], j).clone())
}

fn drop_cols<E: Clone>(m: &Mat<E>, cols: &[usize]) -> Mat<E> {
    let keep: Vec<usize> = (0..m.cols()).filter(|c| !cols.contains(c)).collect();
    Mat::from_fn(m.rows(), keep.len(), |i, j| m.get(i, keep[j]).clone())
}

/// The exact couple at `q` together with the derived-couple index `page`.
#[derive(Clone, Debug)]
pub struct GradedCouple<F: Field> {
    ring: PolyRing<F>,
    q: Poly<F::Elem>,
    cochains: CochainComplex<F::Elem>,
    /// `D_r^k` for `k` in the complex's degree range, normalized.
    pub d: Vec<FPModule<F::Elem>>,
    pub page: usize,
}

fn check_q<F: Field>(ring: &PolyRing<F>, q: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
    let f = ring.field();
    if q.degree().unwrap_or(0) == 0 {
        return Err(Error::Input("eigen-factor must have positive degree".into()));
    }
    let q = ring.monic(q);
    if f.is_zero(q.coeff(0).unwrap()) {
        return Err(Error::ZeroEigenvalue);
    }
    f.certify_irreducible(&q)?;
    Ok(q)
}

/// The couple of a free cochain complex over `F[u]`.
pub fn couple_from_cochains<F: Field>(
    ring: &PolyRing<F>,
    cochains: &CochainComplex<F::Elem>,
    q: &Poly<F::Elem>,
) -> Result<GradedCouple<F>> {
    let q = check_q(ring, q)?;
    let d = cochain_cohomology(ring, cochains).into_iter().map(|(_, m)| m).collect();
    Ok(GradedCouple { ring: ring.clone(), q, cochains: cochains.clone(), d, page: 1 })
}

/// A free cochain complex with `H^k = modules[k - min_degree]`: each module's
/// relations become the differential from one degree lower.
pub fn realize_modules<F: Field>(
    ring: &PolyRing<F>,
    min_degree: i32,
    modules: &[FPModule<F::Elem>],
) -> CochainComplex<F::Elem> {
    let rels: Vec<PolyMat<F::Elem>> = modules.iter().map(|m| injective_presentation(ring, m)).collect();
    let gens = |i: usize| modules.get(i).map_or(0, |m| m.generators());
    let rel_count = |i: usize| rels.get(i).map_or(0, |r| r.cols());
    // Degree min_degree - 1 + s holds the generators of module s - 1 and the relations of module s.
    let slots = modules.len() + 1;
    let ranks: Vec<usize> = (0..slots).map(|s| if s == 0 { 0 } else { gens(s - 1) } + rel_count(s)).collect();
    let differentials = (0..slots - 1)
        .map(|s| {
            let g_here = if s == 0 { 0 } else { gens(s - 1) };
            let r_here = rel_count(s);
            let g_next = gens(s);
            let r_next = rel_count(s + 1);
            block2(
                &zeros(ring, g_next, g_here),
                &rels[s],
                &zeros(ring, r_next, g_here),
                &zeros(ring, r_next, r_here),
            )
        })
        .collect();
    CochainComplex { min_degree: min_degree - 1, ranks, differentials }
}

/// The couple with `D^k = modules[k - min_degree]`.
pub fn build_couple<F: Field>(
    ring: &PolyRing<F>,
    min_degree: i32,
    modules: &[FPModule<F::Elem>],
    q: &Poly<F::Elem>,
) -> Result<GradedCouple<F>> {
    couple_from_cochains(ring, &realize_modules(ring, min_degree, modules), q)
}

/// Leading-digit data of the `q`-adic filtration at one page, as `F`-dimensions.
#[derive(Clone, Debug, PartialEq)]
struct Filtration {
    cycles: Vec<usize>,
    boundaries: Vec<usize>,
}

impl<F: Field> GradedCouple<F> {
    pub fn min_degree(&self) -> i32 {
        self.cochains.min_degree
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.cochains.min_degree..=self.cochains.max_degree()
    }

    pub fn q(&self) -> &Poly<F::Elem> {
        &self.q
    }

    fn q_degree(&self) -> usize {
        self.q.degree().unwrap()
    }

    fn digits(&self) -> Digits<'_, F> {
        Digits { ring: &self.ring, q: &self.q, d: self.q_degree() }
    }

    /// `dim Z_r^k` over `F`: classes mod `q` lifting to cocycles mod `q^r`,
    /// i.e. the kernel of the lifted `delta` minus its part with vanishing digit 0.
    fn cycles_dim(&self, k: i32, r: usize) -> usize {
        let f = self.ring.field();
        let dg = self.digits();
        let lifted = dg.lift(&self.cochains.differential(&self.ring, k), r);
        let low = dg.digit_indices(self.cochains.rank(k), r, 0);
        let high = drop_cols(&lifted, &low);
        (lifted.cols() - rank(f, &lifted)) - (high.cols() - rank(f, &high))
    }

    /// `dim B_r^k` over `F`: leading digits of coboundaries divisible by
    /// `q^(r-1)`, the image under the top rows of the kernel of the low rows.
    fn boundaries_dim(&self, k: i32, r: usize) -> usize {
        let f = self.ring.field();
        let dg = self.digits();
        let n = self.cochains.rank(k);
        let lifted = dg.lift(&self.cochains.differential(&self.ring, k - 1), r);
        let low: Vec<usize> = (0..r - 1).flat_map(|b| dg.digit_indices(n, r, b)).collect();
        let low_rank = if low.is_empty() { 0 } else { rank(f, &select_rows(&lifted, &low)) };
        rank(f, &lifted) - low_rank
    }

    fn filtration(&self, r: usize) -> Filtration {
        Filtration {
            cycles: self.degrees().map(|k| self.cycles_dim(k, r)).collect(),
            boundaries: self.degrees().map(|k| self.boundaries_dim(k, r)).collect(),
        }
    }

    fn over_residue_field(&self, x: usize) -> Result<usize> {
        let d = self.q_degree();
        if x % d != 0 {
            return Err(Error::Integrity(format!("dimension {x} is not a multiple of deg q = {d}")));
        }
        Ok(x / d)
    }

    /// `dim E_r^k` over `F[u]/(q)`, for every degree.
    pub fn e_dims(&self) -> Result<Vec<usize>> {
        let fil = self.filtration(self.page);
        fil.cycles
            .iter()
            .zip(&fil.boundaries)
            .map(|(z, b)| self.over_residue_field(z - b))
            .collect()
    }

    /// Checks `dim E_r^k = dim coker(q on D_r^k) + dim ker(q on D_r^(k+1))`.
    pub fn check_exactness(&self) -> Result<()> {
        let e = self.e_dims()?;
        let d = self.q_degree();
        for (idx, k) in self.degrees().enumerate() {
            let (coker, _) = q_coker_ker_dims(&self.ring, &self.d[idx], &self.q)?;
            let ker = match self.d.get(idx + 1) {
                Some(m) => q_coker_ker_dims(&self.ring, m, &self.q)?.1,
                None => 0,
            };
            if e[idx] * d != coker + ker {
                return Err(Error::Integrity(format!(
                    "derived couple {} is not exact in degree {k}: dim E = {}, expected {}",
                    self.page,
                    e[idx],
                    (coker + ker) / d
                )));
            }
        }
        Ok(())
    }
}

/// The derived couple: `D_(r+1) = q D_r`, `E_(r+1) = H(E_r, d_r)`.
pub fn derive<F: Field>(couple: &GradedCouple<F>) -> GradedCouple<F> {
    let ring = &couple.ring;
    GradedCouple {
        ring: ring.clone(),
        q: couple.q.clone(),
        cochains: couple.cochains.clone(),
        d: couple.d.iter().map(|m| normalize(ring, &power_submodule(ring, m, &couple.q, 1))).collect(),
        page: couple.page + 1,
    }
}

/// Degeneration sheet of one degree, or a marker that the pages computed so
/// far cannot certify it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sheet {
    Certified(usize),
    Unstable(UnstableMarker),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnstableMarker {
    Unstable,
}

impl Sheet {
    pub fn value(self) -> Option<usize> {
        match self {
            Sheet::Certified(s) => Some(s),
            Sheet::Unstable(_) => None,
        }
    }

    fn from_option(s: Option<usize>) -> Self {
        s.map_or(Sheet::Unstable(UnstableMarker::Unstable), Sheet::Certified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageTable {
    pub min_degree: i32,
    /// `dims[r - 1][k - min_degree] = dim E_r^k`.
    pub dims: Vec<Vec<usize>>,
    /// `out_ranks[r - 1][k - min_degree] = rank(d_r : E_r^k -> E_r^(k+1))`.
    pub out_ranks: Vec<Vec<usize>>,
    /// Least `m` with `d_r` leaving degree `k` zero for all `r >= m`.
    pub sigma: Vec<Sheet>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageTableJson {
    pub pages: Vec<Vec<usize>>,
    pub sigma: Vec<Sheet>,
    pub certified: bool,
}

impl PageTable {
    pub fn to_json(&self) -> PageTableJson {
        PageTableJson { pages: self.dims.clone(), sigma: self.sigma.clone(), certified: self.certified }
    }

    pub fn degree_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma_at(&self, k: i32) -> Option<Sheet> {
        let i = k - self.min_degree;
        if i < 0 {
            None
        } else {
            self.sigma.get(i as usize).copied()
        }
    }
}

fn max_exponent<F: Field>(couple: &GradedCouple<F>, idx: usize) -> Result<usize> {
    match couple.d.get(idx) {
        Some(m) => Ok(primary_exponents(&couple.ring, m, &couple.q)?.first().copied().unwrap_or(0)),
        None => Ok(0),
    }
}

/// Page dimensions `E_1 .. E_(r_max)` by literal iteration of derived couples.
pub fn pages<F: Field>(couple: &GradedCouple<F>, r_max: usize) -> Result<PageTable> {
    if r_max == 0 {
        return Err(Error::Input("max page must be at least 1".into()));
    }
    let mut current = couple.clone();
    let start = current.page;
    let mut filtrations = vec![current.filtration(start)];
    let mut dims = Vec::new();
    let mut out_ranks = Vec::new();
    for r in start..start + r_max {
        current.check_exactness()?;
        let fil = &filtrations[r - start];
        let next = current.filtration(r + 1);
        dims.push(
            fil.cycles
                .iter()
                .zip(&fil.boundaries)
                .map(|(z, b)| current.over_residue_field(z - b))
                .collect::<Result<Vec<_>>>()?,
        );
        out_ranks.push(
            fil.cycles
                .iter()
                .zip(&next.cycles)
                .map(|(z, z_next)| current.over_residue_field(z - z_next))
                .collect::<Result<Vec<_>>>()?,
        );
        filtrations.push(next);
        if r + 1 < start + r_max {
            current = derive(&current);
        }
    }
    check_page_bookkeeping(&dims, &out_ranks)?;
    let mut sigma = Vec::new();
    for idx in 0..couple.d.len() {
        let bound = 1 + max_exponent(couple, idx + DEGREE_OFFSET as usize)?;
        let last = (0..r_max).rev().find(|&i| out_ranks[i][idx] > 0).map_or(1, |i| start + i + 1);
        let observed_to = start + r_max - 1;
        if observed_to + 1 >= bound {
            if last != bound {
                return Err(Error::Integrity(format!(
                    "degree {}: observed sheet {last} differs from the bound {bound}",
                    couple.min_degree() + idx as i32
                )));
            }
            sigma.push(Some(last));
        } else {
            sigma.push(None);
        }
    }
    Ok(PageTable {
        min_degree: couple.min_degree(),
        dims,
        out_ranks,
        certified: sigma.iter().all(Option::is_some),
        sigma: sigma.into_iter().map(Sheet::from_option).collect(),
    })
}

/// `E_(r+1)^k = E_r^k - rank(d_r out of k) - rank(d_r into k)`.
fn check_page_bookkeeping(dims: &[Vec<usize>], out_ranks: &[Vec<usize>]) -> Result<()> {
    for r in 0..dims.len().saturating_sub(1) {
        for k in 0..dims[r].len() {
            let incoming = if k > 0 { out_ranks[r][k - 1] } else { 0 };
            if dims[r][k] != dims[r + 1][k] + out_ranks[r][k] + incoming {
                return Err(Error::Integrity(format!("page {} does not compute the homology of page {}", r + 2, r + 1)));
            }
        }
    }
    Ok(())
}

/// Page dimensions from `q`-primary exponents and free ranks of `D^k`,
/// `k = min_degree ..`, under the given degree convention.
pub fn closed_form_pages(
    min_degree: i32,
    exponents: &[Vec<usize>],
    free_ranks: &[usize],
    r_max: usize,
    convention: DegreeConvention,
) -> PageTable {
    let n = exponents.len();
    let delta = convention.offset() as usize;
    let count = |idx: usize, pred: &dyn Fn(usize) -> bool| -> usize {
        exponents.get(idx).map_or(0, |es| es.iter().filter(|&&e| pred(e)).count())
    };
    let dims = (1..=r_max)
        .map(|r| (0..n).map(|k| free_ranks[k] + count(k, &|e| e >= r) + count(k + delta, &|e| e >= r)).collect())
        .collect();
    let out_ranks = (1..=r_max).map(|r| (0..n).map(|k| count(k + delta, &|e| e == r)).collect()).collect();
    let sigma: Vec<Option<usize>> = (0..n)
        .map(|k| {
            let m = exponents.get(k + delta).and_then(|es| es.iter().max().copied()).unwrap_or(0);
            (r_max >= m).then_some(m + 1)
        })
        .collect();
    PageTable {
        min_degree,
        dims,
        out_ranks,
        certified: sigma.iter().all(Option::is_some),
        sigma: sigma.into_iter().map(Sheet::from_option).collect(),
    }
}

/// Exponents and free ranks of the couple's `D` in closed-form order.
pub fn couple_invariants<F: Field>(couple: &GradedCouple<F>) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let mut exps = Vec::new();
    let mut free = Vec::new();
    for m in &couple.d {
        exps.push(primary_exponents(&couple.ring, m, &couple.q)?);
        free.push(m.normal_form()?.free_rank);
    }
    Ok((exps, free))
}

/// Closed-form table for a couple, to be compared with [`pages`].
pub fn closed_form_for<F: Field>(couple: &GradedCouple<F>, r_max: usize) -> Result<PageTable> {
    let (exps, free) = couple_invariants(couple)?;
    Ok(closed_form_pages(couple.min_degree(), &exps, &free, r_max, SHIPPED_CONVENTION))
}

/// `mu_k = sigma_k - 1`; `None` where the sheet is not certified.
pub fn mu(table: &PageTable) -> Vec<Option<usize>> {
    table.sigma.iter().map(|s| s.value().map(|s| s - 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmodules::module_from_factors;
    use crate::polyalg::matrix::identity;
    use crate::scalars::{rat, Rational, Rationals};
    use crate::toruscx::{build_torus_complex, fiber_from_cohomology_monodromy};

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    fn m(rows: &[&[i64]]) -> Mat<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), cols).unwrap()
    }

    fn torus_couple(maps: &[Mat<Rational>], q: &Poly<Rational>) -> GradedCouple<Rationals> {
        let fiber = fiber_from_cohomology_monodromy(&Rationals, maps);
        let cx = build_torus_complex(&Rationals, &fiber).unwrap().cochain_complex();
        couple_from_cochains(&PolyRing::rationals(), &cx, q).unwrap()
    }

    fn sheets(t: &PageTable) -> Vec<Option<usize>> {
        t.sigma.iter().map(|s| s.value()).collect()
    }

    #[test]
    fn circle_couple() {
        let ring = PolyRing::rationals();
        let c = build_couple(&ring, 0, &[module_from_factors(&ring, 0, &[p(&[-1, 1])])], &p(&[-1, 1])).unwrap();
        assert_eq!(c.min_degree(), -1);
        let t = pages(&c, 3).unwrap();
        // Degrees -1, 0: E^0 gets the kernel part, E^1 does not exist in this complex.
        assert_eq!(t.dims[0], vec![1, 1]);
        assert_eq!(t.dims[1], vec![0, 0]);
        assert_eq!(sheets(&t), vec![Some(2), Some(1)]);
    }

    #[test]
    fn s1_fixture() {
        let q = p(&[-1, 1]);
        let c = torus_couple(&[m(&[&[1]])], &q);
        assert_eq!(c.e_dims().unwrap(), vec![1, 1]);
        let t = pages(&c, 3).unwrap();
        assert_eq!(sheets(&t), vec![Some(2), Some(1)]);
        assert_eq!(mu(&t), vec![Some(1), Some(0)]);
    }

    #[test]
    fn heisenberg_pages() {
        let q = p(&[-1, 1]);
        let c = torus_couple(&[m(&[&[1]]), m(&[&[1, 1], &[0, 1]]), m(&[&[1]])], &q);
        assert_eq!(c.e_dims().unwrap(), vec![1, 2, 2, 1]);
        let t = pages(&c, 4).unwrap();
        assert_eq!(sheets(&t), vec![Some(2), Some(3), Some(2), Some(1)]);
        assert_eq!(mu(&t)[1], Some(2));
        assert_eq!(t, closed_form_for(&c, 4).unwrap());
        let third = derive(&derive(&c));
        assert_eq!(third.page, 3);
        assert!(third.d[2].normal.as_ref().unwrap().invariant_factors.is_empty());
        assert_eq!(third.e_dims().unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn unshifted_convention_fails_on_heisenberg() {
        let q = p(&[-1, 1]);
        let c = torus_couple(&[m(&[&[1]]), m(&[&[1, 1], &[0, 1]]), m(&[&[1]])], &q);
        let (exps, free) = couple_invariants(&c).unwrap();
        let literal = pages(&c, 4).unwrap();
        let same = closed_form_pages(c.min_degree(), &exps, &free, 4, DegreeConvention::Same);
        assert_ne!(literal, same);
        let shifted = closed_form_pages(c.min_degree(), &exps, &free, 4, DegreeConvention::Shifted);
        assert_eq!(literal, shifted);
    }

    #[test]
    fn generic_lambda_is_empty() {
        let c = torus_couple(&[m(&[&[1]]), m(&[&[1, 1], &[0, 1]]), m(&[&[1]])], &p(&[-2, 1]));
        let t = pages(&c, 2).unwrap();
        assert!(t.dims.iter().flatten().all(|&x| x == 0));
        assert!(mu(&t).iter().all(|&x| x == Some(0)));
    }

    #[test]
    fn unstable_when_too_few_pages() {
        let q = p(&[-1, 1]);
        let c = torus_couple(&[m(&[&[1]]), m(&[&[1, 1], &[0, 1]]), m(&[&[1]])], &q);
        let t = pages(&c, 1).unwrap();
        assert_eq!(t.sigma[1], Sheet::Unstable(UnstableMarker::Unstable));
        assert!(!t.certified);
        let json = serde_json::to_string(&t.to_json()).unwrap();
        assert!(json.contains("\"unstable\""));
        let back: PageTableJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t.to_json());
    }

    #[test]
    fn free_part_survives() {
        let ring = PolyRing::rationals();
        let modules = [module_from_factors(&ring, 1, &[])];
        let c = build_couple(&ring, 0, &modules, &p(&[-1, 1])).unwrap();
        let t = pages(&c, 3).unwrap();
        assert_eq!(t.dims, vec![vec![0, 1]; 3]);
        assert_eq!(t, closed_form_for(&c, 3).unwrap());
    }

    #[test]
    fn decomposition_degenerates_after_nilpotency() {
        // Nilpotent part of degree 3 plus an injective part (free and coprime torsion).
        let ring = PolyRing::rationals();
        let t1 = p(&[-1, 1]);
        let d1 = module_from_factors(&ring, 1, &[ring.mul(&t1, &p(&[1, 1])), ring.pow(&t1, 3)]);
        let c = build_couple(&ring, 0, &[module_from_factors(&ring, 0, &[]), d1], &t1).unwrap();
        let t = pages(&c, 5).unwrap();
        // E-degree 0 is the outgoing side of D^1.
        assert_eq!(t.sigma_at(0), Some(Sheet::Certified(4)));
        assert_eq!(t.dims.iter().map(|d| d[1]).collect::<Vec<_>>(), vec![2, 1, 1, 0, 0]);
        assert_eq!(t, closed_form_for(&c, 5).unwrap());
    }

    #[test]
    fn quadratic_factor() {
        let q = p(&[1, 0, 1]);
        let rot = m(&[&[0, -1], &[1, 0]]);
        let c = torus_couple(&[identity(&Rationals, 1), crate::polyalg::matrix::block_diag(&Rationals, &[rot.clone(), rot])], &q);
        let t = pages(&c, 2).unwrap();
        assert_eq!(t.dims[0], vec![0, 2, 2]);
        assert_eq!(mu(&t), vec![Some(0), Some(1), Some(0)]);
    }

    #[test]
    fn rejects_bad_factors() {
        let ring = PolyRing::rationals();
        let modules = [module_from_factors(&ring, 0, &[p(&[-1, 1])])];
        assert_eq!(build_couple(&ring, 0, &modules, &p(&[0, 1])).unwrap_err(), Error::ZeroEigenvalue);
        assert!(matches!(build_couple(&ring, 0, &modules, &p(&[-1, 0, 1])), Err(Error::Reducible { .. })));
    }
}
