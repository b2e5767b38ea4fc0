//! Exact scalars: the rationals and simple algebraic extensions `Q[x]/(p)`.
//!
//! Arithmetic is exposed through the [`Ring`] and [`Field`] context traits so that
//! the same linear algebra runs over `Q` and over any `Q(alpha)`.

use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::factor::rational_irreducible_factors;
use crate::polyalg::poly::{Poly, PolyRing};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"n"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// A commutative ring given as a context object; elements are plain values.
pub trait Ring: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

pub trait Field: Ring + PartialEq {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_rational(&self, q: &Rational) -> Self::Elem;
    /// Degree of the field over `Q`.
    fn degree(&self) -> usize;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Checks that `p` is irreducible over this field. `Ok(true)` means proven,
    /// `Ok(false)` means no factor was found but irreducibility is only asserted.
    fn certify_irreducible(&self, p: &Poly<Self::Elem>) -> Result<bool> {
        match p.degree() {
            Some(1) => Ok(true),
            Some(0) | None => Err(Error::Unsupported("constant polynomial is not an eigen-factor".into())),
            Some(_) => Err(Error::Unsupported(
                "irreducibility of non-linear polynomials is only decided over Q".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn degree(&self) -> usize {
        1
    }
    fn fmt_elem(&self, a: &Rational) -> String {
        format_rational(a)
    }
    fn is_one(&self, a: &Rational) -> bool {
        a.is_one()
    }
    fn certify_irreducible(&self, p: &Poly<Rational>) -> Result<bool> {
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::Unsupported("constant polynomial is not an eigen-factor".into()));
        }
        let factors = rational_irreducible_factors(p);
        if factors.len() == 1 && factors[0].multiplicity == 1 {
            Ok(factors[0].proven)
        } else {
            let ring = PolyRing::new(Rationals);
            Err(Error::Reducible {
                poly: ring.display(p, "x"),
                witness: ring.display(&factors[0].factor, "x"),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    BaseRationals,
    Extension,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Irreducibility {
    Proven,
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    /// Monic, constant term first. `None` for the base field.
    pub min_poly: Option<Vec<Rational>>,
    pub degree: usize,
    pub irreducibility: Irreducibility,
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor {
            kind: FieldKind::BaseRationals,
            min_poly: None,
            degree: 1,
            irreducibility: Irreducibility::Proven,
        }
    }
}

/// Screens `p` and, if it passes, returns the descriptor of `Q[x]/(p)`.
pub fn verify_extension(p: &[Rational]) -> Result<FieldDescriptor> {
    let ring = PolyRing::new(Rationals);
    let poly = Poly::new(p.to_vec());
    let deg = match poly.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Input("minimal polynomial must have degree >= 1".into())),
    };
    if !poly.lead().map(|c| c.is_one()).unwrap_or(false) {
        return Err(Error::NotMonic);
    }
    let g = ring.gcd(&poly, &ring.derivative(&poly));
    if g.degree().unwrap_or(0) > 0 {
        return Err(Error::Reducible {
            poly: ring.display(&poly, "x"),
            witness: ring.display(&g, "x"),
        });
    }
    let proven = Rationals.certify_irreducible(&poly)?;
    Ok(FieldDescriptor {
        kind: if deg == 1 { FieldKind::BaseRationals } else { FieldKind::Extension },
        min_poly: Some(poly.coeffs().to_vec()),
        degree: deg,
        irreducibility: if proven { Irreducibility::Proven } else { Irreducibility::Asserted },
    })
}

#[derive(Clone, Debug)]
pub struct ExtElement {
    pub field: Arc<FieldDescriptor>,
    pub coeffs: Vec<Rational>,
}

impl PartialEq for ExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.field, &other.field)
    }
}

fn same_field(a: &Arc<FieldDescriptor>, b: &Arc<FieldDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || a.min_poly == b.min_poly
}

/// `Q[x]/(p)` as a field context.
#[derive(Clone, Debug)]
pub struct ExtField(pub Arc<FieldDescriptor>);

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.0, &other.0)
    }
}

impl ExtField {
    pub fn new(desc: FieldDescriptor) -> Self {
        ExtField(Arc::new(desc))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0
    }

    /// The residue class of `x`.
    pub fn generator(&self) -> ExtElement {
        let mut c = vec![Rational::zero(); self.0.degree];
        if self.0.degree == 1 {
            // Q[x]/(x - a): x is the rational a.
            let mp = self.0.min_poly.as_ref().map(|m| -m[0].clone()).unwrap_or_else(Rational::zero);
            c[0] = mp;
        } else {
            c[1] = Rational::one();
        }
        self.element(c).expect("generator has field degree length")
    }

    pub fn element(&self, coeffs: Vec<Rational>) -> Result<ExtElement> {
        if coeffs.len() > self.0.degree {
            // Accept longer inputs and reduce them.
            return Ok(self.reduce(coeffs));
        }
        let mut coeffs = coeffs;
        coeffs.resize(self.0.degree, Rational::zero());
        Ok(ExtElement { field: self.0.clone(), coeffs })
    }

    fn reduce(&self, mut c: Vec<Rational>) -> ExtElement {
        let d = self.0.degree;
        if let Some(mp) = &self.0.min_poly {
            while c.len() > d {
                let top = c.pop().unwrap();
                if top.is_zero() {
                    continue;
                }
                let shift = c.len() - d;
                for (i, m) in mp.iter().take(d).enumerate() {
                    c[shift + i] -= &top * m;
                }
            }
        }
        c.resize(d, Rational::zero());
        ExtElement { field: self.0.clone(), coeffs: c }
    }

    fn check(&self, a: &ExtElement) {
        debug_assert!(same_field(&self.0, &a.field), "element from a different field");
    }
}

impl Ring for ExtField {
    type Elem = ExtElement;

    fn zero(&self) -> ExtElement {
        ExtElement { field: self.0.clone(), coeffs: vec![Rational::zero(); self.0.degree] }
    }
    fn one(&self) -> ExtElement {
        let mut z = self.zero();
        z.coeffs[0] = Rational::one();
        z
    }
    fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        self.check(a);
        self.check(b);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        ExtElement { field: self.0.clone(), coeffs }
    }
    fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        self.check(a);
        self.check(b);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        ExtElement { field: self.0.clone(), coeffs }
    }
    fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        self.check(a);
        self.check(b);
        let d = self.0.degree;
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.reduce(prod)
    }
    fn neg(&self, a: &ExtElement) -> ExtElement {
        ExtElement { field: self.0.clone(), coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }
    fn is_zero(&self, a: &ExtElement) -> bool {
        a.coeffs.iter().all(Zero::is_zero)
    }
}

impl Field for ExtField {
    fn inv(&self, a: &ExtElement) -> Option<ExtElement> {
        if self.is_zero(a) {
            return None;
        }
        let d = self.0.degree;
        if d == 1 {
            return Some(ExtElement { field: self.0.clone(), coeffs: vec![a.coeffs[0].recip()] });
        }
        let ring = PolyRing::new(Rationals);
        let m = Poly::new(self.0.min_poly.clone().expect("extension has a minimal polynomial"));
        let (g, s, _) = ring.ext_gcd(&Poly::new(a.coeffs.clone()), &m);
        // g is monic; anything other than 1 means the modulus was reducible.
        if g.degree() != Some(0) {
            return None;
        }
        Some(self.reduce(s.coeffs().to_vec()))
    }
    fn from_rational(&self, q: &Rational) -> ExtElement {
        let mut z = self.zero();
        z.coeffs[0] = q.clone();
        z
    }
    fn degree(&self) -> usize {
        self.0.degree
    }
    fn fmt_elem(&self, a: &ExtElement) -> String {
        let ring = PolyRing::new(Rationals);
        format!("[{}]", ring.display(&Poly::new(a.coeffs.clone()), "a"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic on extension elements.
pub fn field_arith(a: &ExtElement, b: &ExtElement, op: ArithOp) -> Result<ExtElement> {
    if !same_field(&a.field, &b.field) {
        return Err(Error::FieldMismatch);
    }
    let f = ExtField(a.field.clone());
    Ok(match op {
        ArithOp::Add => f.add(a, b),
        ArithOp::Sub => f.sub(a, b),
        ArithOp::Mul => f.mul(a, b),
        ArithOp::Div => f.div(a, b).ok_or(Error::DivisionByZero)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn ext(min_poly: &[i64]) -> ExtField {
        let p: Vec<Rational> = min_poly.iter().map(|&c| rat(c)).collect();
        ExtField::new(verify_extension(&p).unwrap())
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        assert_eq!(format_rational(&q("10/4")), "5/2");
        assert_eq!(format_rational(&q("-6/3")), "-2");
        assert_eq!(q(" 4/-6 "), q("-2/3"));
    }

    #[test]
    fn rational_parse_errors() {
        assert_eq!(parse_rational("1/0"), Err(Error::DivisionByZero));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn gaussian_units() {
        let f = ext(&[1, 0, 1]);
        let x = f.generator();
        assert_eq!(field_arith(&x, &x, ArithOp::Mul).unwrap(), f.from_rational(&rat(-1)));
    }

    #[test]
    fn sqrt2_difference_of_squares() {
        let f = ext(&[-2, 0, 1]);
        let x = f.generator();
        let one = f.one();
        let a = f.add(&one, &x);
        let b = f.sub(&one, &x);
        assert_eq!(f.mul(&a, &b), f.from_rational(&rat(-1)));
    }

    #[test]
    fn division_and_mismatch() {
        let f = ext(&[1, 1, 1]);
        let g = ext(&[1, 0, 1]);
        let x = f.generator();
        assert_eq!(field_arith(&x, &f.zero(), ArithOp::Div), Err(Error::DivisionByZero));
        assert_eq!(field_arith(&x, &g.generator(), ArithOp::Add), Err(Error::FieldMismatch));
        let xi = field_arith(&f.one(), &x, ArithOp::Div).unwrap();
        assert_eq!(f.mul(&xi, &x), f.one());
    }

    #[test]
    fn extension_screen() {
        let d = verify_extension(&[rat(-1), rat(1)]).unwrap();
        assert_eq!(d.degree, 1);
        assert_eq!(d.kind, FieldKind::BaseRationals);

        match verify_extension(&[rat(-1), rat(0), rat(1)]) {
            Err(Error::Reducible { witness, .. }) => assert!(witness == "x - 1" || witness == "x + 1"),
            other => panic!("expected rejection, got {other:?}"),
        }

        let d = verify_extension(&[rat(1), rat(1), rat(1)]).unwrap();
        assert_eq!(d.degree, 2);
        assert_eq!(d.irreducibility, Irreducibility::Proven);

        // (x^2 + 1)^2 is not square-free.
        assert!(matches!(
            verify_extension(&[rat(1), rat(0), rat(2), rat(0), rat(1)]),
            Err(Error::Reducible { .. })
        ));
        assert_eq!(verify_extension(&[rat(1), rat(2)]), Err(Error::NotMonic));
    }

    #[test]
    fn x2_plus_x_plus_1_has_no_rational_root() {
        // Rational root candidates of a monic integer polynomial divide the constant term.
        for c in [-1i64, 1] {
            assert_ne!(c * c + c + 1, 0);
        }
    }

    #[test]
    fn degree_one_extension_generator() {
        let f = ext(&[-3, 1]);
        assert_eq!(f.generator().coeffs, vec![rat(3)]);
    }
}
