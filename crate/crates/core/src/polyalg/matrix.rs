use crate::error::{Error, Result};
use crate::polyalg::poly::{Poly, PolyRing};
use crate::scalars::{Field, Ring};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, e: E) -> Self {
        Mat { rows, cols, data: vec![e; rows * cols] }
    }

    /// Builds a matrix from rows; `cols` is required to shape matrices with no rows.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Ok(Mat { rows: n, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: E) {
        self.data[i * self.cols + j] = e;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut E {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<T: Clone>(&self, mut f: impl FnMut(&E) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.get(rows.start + i, cols.start + j).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Mat::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }
}

pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Mat<R::Elem> {
    Mat::filled(rows, cols, ring.zero())
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Mat<R::Elem> {
    Mat::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!(a.cols, b.rows, "matrix product shape mismatch");
    let mut out = zeros(ring, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if ring.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(k, j);
                if !ring.is_zero(y) {
                    let cur = out.get(i, j);
                    let v = ring.add(cur, &ring.mul(x, y));
                    out.set(i, j, v);
                }
            }
        }
    }
    out
}

pub fn mat_add<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Mat::from_fn(a.rows, a.cols, |i, j| ring.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_sub<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Mat::from_fn(a.rows, a.cols, |i, j| ring.sub(a.get(i, j), b.get(i, j)))
}

pub fn mat_neg<R: Ring>(ring: &R, a: &Mat<R::Elem>) -> Mat<R::Elem> {
    a.map(|x| ring.neg(x))
}

pub fn mat_scale<R: Ring>(ring: &R, a: &Mat<R::Elem>, c: &R::Elem) -> Mat<R::Elem> {
    a.map(|x| ring.mul(x, c))
}

pub fn is_zero_mat<R: Ring>(ring: &R, a: &Mat<R::Elem>) -> bool {
    a.data.iter().all(|x| ring.is_zero(x))
}

pub fn mat_pow<R: Ring>(ring: &R, a: &Mat<R::Elem>, mut e: usize) -> Mat<R::Elem> {
    let mut acc = identity(ring, a.rows);
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(ring, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(ring, &base, &base);
        }
    }
    acc
}

pub fn block_diag<R: Ring>(ring: &R, blocks: &[Mat<R::Elem>]) -> Mat<R::Elem> {
    let rows: usize = blocks.iter().map(|b| b.rows).sum();
    let cols: usize = blocks.iter().map(|b| b.cols).sum();
    let mut out = zeros(ring, rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
        r0 += b.rows;
        c0 += b.cols;
    }
    out
}

/// `[[a, b], [c, d]]` assembled from four blocks with compatible shapes.
pub fn block2<E: Clone>(a: &Mat<E>, b: &Mat<E>, c: &Mat<E>, d: &Mat<E>) -> Mat<E> {
    assert_eq!(a.rows, b.rows);
    assert_eq!(c.rows, d.rows);
    assert_eq!(a.cols, c.cols);
    assert_eq!(b.cols, d.cols);
    Mat::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < a.rows, j < a.cols) {
        (true, true) => a.get(i, j).clone(),
        (true, false) => b.get(i, j - a.cols).clone(),
        (false, true) => c.get(i - a.rows, j).clone(),
        (false, false) => d.get(i - a.rows, j - a.cols).clone(),
    })
}

pub fn vstack<E: Clone>(a: &Mat<E>, b: &Mat<E>) -> Mat<E> {
    assert_eq!(a.cols, b.cols);
    let mut data = a.data.clone();
    data.extend(b.data.iter().cloned());
    Mat { rows: a.rows + b.rows, cols: a.cols, data }
}

pub fn hstack<E: Clone>(a: &Mat<E>, b: &Mat<E>) -> Mat<E> {
    assert_eq!(a.rows, b.rows);
    Mat::from_fn(a.rows, a.cols + b.cols, |i, j| {
        if j < a.cols {
            a.get(i, j).clone()
        } else {
            b.get(i, j - a.cols).clone()
        }
    })
}

/// Reduced row echelon form; returns the pivot columns. Pivots are the first
/// non-zero entry found scanning down each column.
pub fn rref<F: Field>(f: &F, a: &Mat<F::Elem>) -> (Mat<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
        m.swap_rows(p, r);
        let inv = f.inv(m.get(r, c)).unwrap();
        for j in c..m.cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..m.cols {
                let pj = m.get(r, j);
                if f.is_zero(pj) {
                    continue;
                }
                let v = f.sub(m.get(i, j), &f.mul(&factor, pj));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Rank by forward elimination only.
pub fn rank<F: Field>(f: &F, a: &Mat<F::Elem>) -> usize {
    let mut m = a.clone();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
        m.swap_rows(p, r);
        let inv = f.inv(m.get(r, c)).unwrap();
        for i in r + 1..m.rows {
            if f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = f.mul(m.get(i, c), &inv);
            for j in c..m.cols {
                let pj = m.get(r, j);
                if f.is_zero(pj) {
                    continue;
                }
                let v = f.sub(m.get(i, j), &f.mul(&factor, pj));
                m.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}

pub fn nullity<F: Field>(f: &F, a: &Mat<F::Elem>) -> usize {
    a.cols - rank(f, a)
}

/// Rank and a basis of the right kernel.
pub fn rank_kernel<F: Field>(f: &F, a: &Mat<F::Elem>) -> (usize, Vec<Vec<F::Elem>>) {
    let (m, pivots) = rref(f, a);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); a.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, fc));
            }
            v
        })
        .collect();
    (pivots.len(), basis)
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Mat<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    (0..a.rows)
        .map(|i| {
            a.row(i).iter().zip(v).fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)))
        })
        .collect()
}

pub fn inverse<F: Field>(f: &F, a: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    if !a.is_square() {
        return None;
    }
    let n = a.rows;
    let (m, pivots) = rref(f, &hstack(a, &identity(f, n)));
    if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
        return None;
    }
    Some(m.submatrix(0..n, n..2 * n))
}

/// Solves `a x = b` for a single right-hand side, if solvable.
pub fn solve<F: Field>(f: &F, a: &Mat<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let col = Mat::from_fn(b.len(), 1, |i, _| b[i].clone());
    let (m, pivots) = rref(f, &hstack(a, &col));
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![f.zero(); a.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m.get(r, a.cols).clone();
    }
    Some(x)
}

/// `p(A)` by Horner's rule.
pub fn eval_poly_at<F: Field>(f: &F, p: &Poly<F::Elem>, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    let n = a.rows;
    let mut acc = zeros(f, n, n);
    for c in p.coeffs().iter().rev() {
        acc = mat_mul(f, &acc, a);
        for i in 0..n {
            let v = f.add(acc.get(i, i), c);
            acc.set(i, i, v);
        }
    }
    acc
}

/// Characteristic polynomial `det(xI - A)` via reduction to Hessenberg form.
pub fn charpoly<F: Field>(f: &F, a: &Mat<F::Elem>) -> Result<Poly<F::Elem>> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !f.is_zero(h.get(i, m - 1))) else { continue };
        if i != m {
            h.swap_rows(i, m);
            h.swap_cols(i, m);
        }
        let t_inv = f.inv(h.get(m, m - 1)).unwrap();
        for i in m + 1..n {
            if f.is_zero(h.get(i, m - 1)) {
                continue;
            }
            let u = f.mul(h.get(i, m - 1), &t_inv);
            for j in 0..n {
                let v = f.sub(h.get(i, j), &f.mul(&u, h.get(m, j)));
                h.set(i, j, v);
            }
            for j in 0..n {
                let v = f.add(h.get(j, m), &f.mul(&u, h.get(j, i)));
                h.set(j, m, v);
            }
        }
    }
    let ring = PolyRing::new(f.clone());
    let mut p: Vec<Poly<F::Elem>> = vec![ring.one()];
    for m in 1..=n {
        let lin = ring.linear(h.get(m - 1, m - 1));
        let mut pm = ring.mul(&lin, &p[m - 1]);
        let mut t = f.one();
        for i in (1..m).rev() {
            t = f.mul(&t, h.get(i, i - 1));
            let c = f.mul(h.get(i - 1, m - 1), &t);
            pm = ring.sub(&pm, &ring.scale(&p[i - 1], &c));
        }
        p.push(pm);
    }
    Ok(p.pop().unwrap())
}

/// Companion matrix of a monic polynomial (last column holds `-c_i`).
pub fn companion<F: Field>(f: &F, p: &Poly<F::Elem>) -> Mat<F::Elem> {
    let d = p.degree().unwrap_or(0);
    let mut m = zeros(f, d, d);
    for i in 1..d {
        m.set(i, i - 1, f.one());
    }
    for i in 0..d {
        m.set(i, d - 1, f.neg(&p.coeffs()[i]));
    }
    m
}

/// Applies a scalar map entrywise, e.g. to embed `Q`-matrices into an extension.
pub fn convert<E: Clone, T: Clone>(a: &Mat<E>, f: impl FnMut(&E) -> T) -> Mat<T> {
    a.map(f)
}
