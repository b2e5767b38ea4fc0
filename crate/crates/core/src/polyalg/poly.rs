use num_traits::Zero;

use crate::scalars::{Field, Rational, Rationals, Ring};

/// Dense univariate polynomial, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    /// Wraps coefficients that are already canonical (no trailing zeros).
    pub fn from_canonical(coeffs: Vec<E>) -> Self {
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

impl Poly<Rational> {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| crate::scalars::rat(x)).collect())
    }
}

/// `F[x]` as a ring context.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<F: Field> {
    field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn make(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.make(vec![c])
    }

    pub fn x(&self) -> Poly<F::Elem> {
        Poly { coeffs: vec![self.field.zero(), self.field.one()] }
    }

    /// `x - c`
    pub fn linear(&self, c: &F::Elem) -> Poly<F::Elem> {
        Poly { coeffs: vec![self.field.neg(c), self.field.one()] }
    }

    pub fn monomial(&self, c: F::Elem, deg: usize) -> Poly<F::Elem> {
        let mut coeffs = vec![self.field.zero(); deg + 1];
        coeffs[deg] = c;
        self.make(coeffs)
    }

    pub fn from_rationals(&self, p: &Poly<Rational>) -> Poly<F::Elem> {
        self.make(p.coeffs.iter().map(|q| self.field.from_rational(q)).collect())
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.make(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn is_monic(&self, a: &Poly<F::Elem>) -> bool {
        a.lead().is_some_and(|c| self.field.is_one(c))
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.lead() {
            None => a.clone(),
            Some(l) => {
                let li = self.field.inv(l).expect("leading coefficient is non-zero");
                self.scale(a, &li)
            }
        }
    }

    /// Division with remainder; panics on division by the zero polynomial.
    pub fn divrem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let db = b.degree().expect("division by zero polynomial");
        let f = &self.field;
        let lead_inv = f.inv(b.lead().unwrap()).unwrap();
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return (Poly { coeffs: vec![] }, a.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = f.mul(&rem[i + db], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                if !f.is_zero(bc) {
                    rem[i + j] = f.sub(&rem[i + j], &f.mul(&c, bc));
                }
            }
            quot[i] = c;
        }
        rem.truncate(db);
        (self.make(quot), self.make(rem))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.divrem(a, b).1
    }

    /// Exact quotient, or `None` if `b` does not divide `a`.
    pub fn div_exact(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        let (q, r) = self.divrem(a, b);
        r.is_zero_poly().then_some(q)
    }

    pub fn divides(&self, b: &Poly<F::Elem>, a: &Poly<F::Elem>) -> bool {
        if b.is_zero_poly() {
            return a.is_zero_poly();
        }
        self.rem(a, b).is_zero_poly()
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero_poly() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Returns `(g, s, t)` with `g = s a + t b` and `g` monic.
    pub fn ext_gcd(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero_poly() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.lead() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = self.field.inv(l).unwrap();
                (self.scale(&r0, &li), self.scale(&s0, &li), self.scale(&t0, &li))
            }
        }
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = &self.field;
        self.make(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(&f.from_rational(&crate::scalars::rat(i as i64)), c))
                .collect(),
        )
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        a.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn pow(&self, a: &Poly<F::Elem>, mut e: usize) -> Poly<F::Elem> {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplicity of `p` in `a` (`a` non-zero, `p` non-constant).
    pub fn valuation(&self, a: &Poly<F::Elem>, p: &Poly<F::Elem>) -> usize {
        assert!(!a.is_zero_poly() && p.degree().unwrap_or(0) > 0);
        let mut a = a.clone();
        let mut v = 0;
        while let Some(q) = self.div_exact(&a, p) {
            a = q;
            v += 1;
        }
        v
    }

    pub fn display(&self, a: &Poly<F::Elem>, var: &str) -> String {
        display_with(a, var, |c| self.field.fmt_elem(c), |c| self.field.is_zero(c))
    }
}

fn display_with<E>(
    a: &Poly<E>,
    var: &str,
    fmt: impl Fn(&E) -> String,
    is_zero: impl Fn(&E) -> bool,
) -> String {
    if a.coeffs.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in a.coeffs.iter().enumerate().rev() {
        if is_zero(c) {
            continue;
        }
        let mut s = fmt(c);
        let negative = s.starts_with('-');
        if negative {
            s.remove(0);
        }
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if i == 0 {
            out.push_str(&s);
        } else if s == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&s);
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

impl<F: Field> Ring for PolyRing<F> {
    type Elem = Poly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly { coeffs: vec![] }
    }
    fn one(&self) -> Self::Elem {
        Poly { coeffs: vec![self.field.one()] }
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (a.coeffs.get(i), b.coeffs.get(i)) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.make(coeffs)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return self.zero();
        }
        let f = &self.field;
        let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !f.is_zero(y) {
                    out[i + j] = f.add(&out[i + j], &f.mul(x, y));
                }
            }
        }
        self.make(out)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly { coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect() }
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.is_empty()
    }
}

impl PolyRing<Rationals> {
    pub fn rationals() -> Self {
        PolyRing::new(Rationals)
    }
}
