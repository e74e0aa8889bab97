//! Sparse multivariate polynomials over the Gaussian rationals, with exact
//! differentiation, Hessians, nilpotency tests and truncated composition.
//!
//! Variables are indexed `0..n` (printed `x1..xn`); exponent vectors are
//! dense fixed-length arrays and `n <= 16` is enforced. Term maps are
//! ordered, so printing and iteration are deterministic.

mod gaussian;
mod parse;

pub use gaussian::GaussianRational;
pub use parse::parse_poly;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::{Error, Result};

/// Maximum number of variables.
pub const MAX_VARIABLES: usize = 16;

/// A dense exponent vector of length `n`.
pub type Exponents = Vec<u16>;

fn total_degree_of(e: &[u16]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

/// A sparse multivariate polynomial with Gaussian-rational coefficients.
/// No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Exponents, GaussianRational>,
}

impl Polynomial {
    fn check_vars(n: usize) -> Result<()> {
        if n == 0 || n > MAX_VARIABLES {
            return Err(Error::InvalidParameter(format!(
                "variable count must be in 1..={MAX_VARIABLES}, got {n}"
            )));
        }
        Ok(())
    }

    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, GaussianRational::one())
    }

    /// The variable `x_{i+1}` as a polynomial.
    pub fn var(n: usize, i: usize) -> Result<Self> {
        Self::check_vars(n)?;
        if i >= n {
            return Err(Error::VariableOutOfRange { index: i + 1, count: n });
        }
        let mut e = vec![0u16; n];
        e[i] = 1;
        let mut p = Self::zero(n);
        p.add_term(e, GaussianRational::one());
        Ok(p)
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u16]) -> GaussianRational {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Add `c * X^e` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Exponents, c: GaussianRational) {
        debug_assert_eq!(e.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(en) => {
                en.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut en) => {
                *en.get_mut() += &c;
                if en.get().is_zero() {
                    en.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn scale_rat(&self, c: &BigRational) -> Self {
        self.scale(&GaussianRational::from_rational(c.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, None)
    }

    /// Product, discarding terms of total degree above `trunc` on the fly.
    pub fn mul_trunc(&self, other: &Self, trunc: Option<u32>) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (ea, ca) in &self.terms {
            let da = total_degree_of(ea);
            if let Some(cut) = trunc {
                if da > cut {
                    continue;
                }
            }
            for (eb, cb) in &other.terms {
                if let Some(cut) = trunc {
                    if da + total_degree_of(eb) > cut {
                        continue;
                    }
                }
                let e: Exponents = ea.iter().zip(eb).map(|(&a, &b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow_trunc(&self, k: u32, trunc: Option<u32>) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = out.mul_trunc(self, trunc);
        }
        out
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree_of(e)).max()
    }

    /// The common total degree of all terms, if the polynomial is nonzero
    /// and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| total_degree_of(e));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Exact partial derivative with respect to variable `i` (0-based).
    pub fn diff(&self, i: usize) -> Result<Self> {
        if i >= self.n {
            return Err(Error::VariableOutOfRange { index: i + 1, count: self.n });
        }
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c.scale(&BigRational::from(BigInt::from(e[i]))));
        }
        Ok(out)
    }

    /// Iterated derivative by a multi-index.
    pub fn diff_multi(&self, multi: &[u16]) -> Result<Self> {
        debug_assert_eq!(multi.len(), self.n);
        let mut out = self.clone();
        for (i, &k) in multi.iter().enumerate() {
            for _ in 0..k {
                if out.is_zero() {
                    return Ok(out);
                }
                out = out.diff(i)?;
            }
        }
        Ok(out)
    }

    /// The gradient map `(D_1 p, ..., D_n p)`.
    pub fn gradient(&self) -> PolyMap {
        PolyMap {
            components: (0..self.n)
                .map(|i| self.diff(i).expect("index in range"))
                .collect(),
        }
    }

    /// The Hessian matrix `(D_i D_j p)`.
    pub fn hessian(&self) -> PolyMatrix {
        let grad = self.gradient();
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| grad.components[i].diff(j).expect("index in range"))
                    .collect()
            })
            .collect();
        PolyMatrix { n: self.n, rows }
    }
}

impl fmt::Display for Polynomial {
    /// Terms in descending graded-lex exponent order; coefficients printed
    /// as `a+bi` with reduced fractions, parenthesized when mixed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Exponents, &GaussianRational)> = self.terms.iter().collect();
        terms.sort_by(|(ea, _), (eb, _)| {
            total_degree_of(eb)
                .cmp(&total_degree_of(ea))
                .then_with(|| eb.cmp(ea))
        });
        for (idx, (e, c)) in terms.iter().enumerate() {
            let rendered = render_term(e, c);
            if idx == 0 {
                f.write_str(&rendered)?;
            } else if let Some(tail) = rendered.strip_prefix('-') {
                write!(f, " - {tail}")?;
            } else {
                write!(f, " + {rendered}")?;
            }
        }
        Ok(())
    }
}

fn render_term(e: &[u16], c: &GaussianRational) -> String {
    let mut mono = String::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !mono.is_empty() {
            mono.push('*');
        }
        mono.push_str(&format!("x{}", i + 1));
        if k > 1 {
            mono.push_str(&format!("^{k}"));
        }
    }
    if mono.is_empty() {
        return c.to_string();
    }
    let one = GaussianRational::one();
    if *c == one {
        return mono;
    }
    if *c == -&one {
        return format!("-{mono}");
    }
    let coeff = c.to_string();
    // Parenthesize mixed re/im coefficients so the term reads back
    // unambiguously.
    if !c.re.is_zero() && !c.im.is_zero() {
        format!("({coeff})*{mono}")
    } else {
        format!("{coeff}*{mono}")
    }
}

/// A polynomial map `K^n -> K^n` with one component per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.len();
        Polynomial::check_vars(n)?;
        if components.iter().any(|p| p.var_count() != n) {
            return Err(Error::DimensionMismatch(
                "every component must use the full variable set".into(),
            ));
        }
        Ok(PolyMap { components })
    }

    /// The identity map `X`.
    pub fn identity(n: usize) -> Result<Self> {
        Ok(PolyMap {
            components: (0..n).map(|i| Polynomial::var(n, i)).collect::<Result<_>>()?,
        })
    }

    pub fn var_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(PolyMap {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        PolyMap {
            components: self.components.iter().map(Polynomial::neg).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.var_count() != other.var_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} components vs {}",
                self.var_count(),
                other.var_count()
            )));
        }
        Ok(())
    }

    /// Whether every component is `x_i` plus terms of degree at least 2.
    pub fn is_special_type(&self) -> bool {
        self.components.iter().enumerate().all(|(i, p)| {
            p.terms().all(|(e, c)| {
                let d = total_degree_of(e);
                if d >= 2 {
                    true
                } else if d == 1 {
                    e[i] == 1 && *c == GaussianRational::one()
                } else {
                    false
                }
            }) && {
                let mut unit = vec![0u16; self.var_count()];
                unit[i] = 1;
                p.coeff(&unit) == GaussianRational::one()
            }
        })
    }

    /// The common homogeneous degree of the nonzero components.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self
            .components
            .iter()
            .filter(|p| !p.is_zero())
            .map(Polynomial::homogeneous_degree);
        let first = degrees.next()??;
        degrees
            .all(|d| d == Some(first))
            .then_some(first)
    }
}

/// Dot product of two maps of equal length.
pub fn dot(f: &PolyMap, g: &PolyMap) -> Result<Polynomial> {
    f.check_same(g)?;
    let n = f.var_count();
    let mut acc = Polynomial::zero(n);
    for (a, b) in f.components.iter().zip(&g.components) {
        acc.add_assign(&a.mul(b));
    }
    Ok(acc)
}

/// Compose `f(g(X))`, discarding all terms of total degree above `trunc`.
/// Truncation is propagated into every intermediate product.
pub fn compose(f: &PolyMap, g: &PolyMap, trunc: u32) -> Result<PolyMap> {
    f.check_same(g)?;
    let components = f
        .components
        .iter()
        .map(|p| compose_poly(p, g, trunc))
        .collect::<Result<Vec<_>>>()?;
    PolyMap::new(components)
}

fn compose_poly(p: &Polynomial, g: &PolyMap, trunc: u32) -> Result<Polynomial> {
    let n = p.var_count();
    if g.var_count() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} variables vs {} components",
            n,
            g.var_count()
        )));
    }
    // Lazy per-variable power cache: powers[i][k] = g_i^k, truncated.
    let mut powers: Vec<Vec<Polynomial>> = (0..n).map(|_| vec![Polynomial::one(n)]).collect();
    let mut out = Polynomial::zero(n);
    for (e, c) in p.terms() {
        let mut prod = Polynomial::constant(n, c.clone());
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            while powers[i].len() <= k as usize {
                let next = powers[i]
                    .last()
                    .unwrap()
                    .mul_trunc(&g.components[i], Some(trunc));
                powers[i].push(next);
            }
            prod = prod.mul_trunc(&powers[i][k as usize], Some(trunc));
            if prod.is_zero() {
                break;
            }
        }
        out.add_assign(&prod);
    }
    Ok(out)
}

/// A square matrix of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    rows: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn new(rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = rows.len();
        Polynomial::check_vars(n)?;
        if rows
            .iter()
            .any(|r| r.len() != n || r.iter().any(|p| p.var_count() != n))
        {
            return Err(Error::DimensionMismatch("matrix must be square".into()));
        }
        Ok(PolyMatrix { n, rows })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.rows[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Polynomial::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let mut acc = Polynomial::zero(self.n);
                        for k in 0..self.n {
                            acc.add_assign(&self.rows[i][k].mul(&other.rows[k][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        PolyMatrix { n: self.n, rows }
    }

    /// The `r`-th matrix power, `r >= 1`.
    pub fn pow(&self, r: u32) -> Self {
        assert!(r >= 1, "matrix power requires r >= 1");
        let mut out = self.clone();
        for _ in 1..r {
            out = out.mul(self);
        }
        out
    }
}

/// Whether the `r`-th power of the matrix is exactly zero.
pub fn mat_nilpotent(mx: &PolyMatrix, r: u32) -> bool {
    if mx.is_zero() {
        return true;
    }
    mx.pow(r).is_zero()
}
