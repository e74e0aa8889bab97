//! Tree formulas and recursions for the formal inverse of maps of
//! symmetric homogeneous type, and the associated operator calculus.
//!
//! For `F = X - H` with `H = grad P`, the inverse is `G = X + grad Q` with
//! `Q = sum_m Q^(m)`. Three independent routes to the summands live here:
//!
//! * `q_tree` / `q_series_tree`: the free-tree formula: `Q_{T,P}` sums
//!   over edge labelings of `T` the products over vertices of the
//!   derivatives of `P` by the labels of the incident edges, and
//!   `Q^(m) = sum over m-vertex free trees of Q_{T,P} / |Aut T|`;
//! * `p_tree` / `n_series_bcw`: the rooted-tree formula for a general
//!   (not necessarily symmetric) `H`: `P_{T,H,i}` sums over vertex
//!   labelings with root label `i` the products `D_{l(v+)} H_{l(v)}`;
//! * `q_series_zhao`: the recursion
//!   `Q^(m) = (1/(2(m-1))) sum_{k+l=m} grad Q^(k) . grad Q^(l)` seeded
//!   with `Q^(1) = P`.
//!
//! `dop_tree` realizes the homomorphism from the Grossman-Larson algebra
//! into differential operators: the same edge-labeled product as `Q_{S,P}`
//! but omitting the root factor and leaving the root-edge derivatives
//! open. The module-compatibility square ties it to `q_tree` and the GL
//! action, and is exercised by the tests.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::gl::{RootedVector, TreeVector};
use crate::poly::{compose, dot, Exponents, PolyMap, Polynomial};
use crate::quotient::nu;
use crate::trees::{enumerate_rooted, FreeTree, RootedTree};
use crate::{Error, Result};

/// Guard on the number of edge/vertex labelings `n^k` in a single tree sum.
const MAX_LABELINGS: f64 = 2e7;

/// Memoized iterated derivatives of a fixed polynomial.
struct DerivCache<'a> {
    p: &'a Polynomial,
    memo: HashMap<Exponents, Polynomial>,
}

impl<'a> DerivCache<'a> {
    fn new(p: &'a Polynomial) -> Self {
        DerivCache {
            p,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, multi: &[u16]) -> &Polynomial {
        if !self.memo.contains_key(multi) {
            let d = self.p.diff_multi(multi).expect("multi-index length");
            self.memo.insert(multi.to_vec(), d);
        }
        &self.memo[multi]
    }
}

fn check_labelings(n: usize, exponent: usize) -> Result<()> {
    if (n as f64).powi(exponent as i32) > MAX_LABELINGS {
        return Err(Error::ResourceLimit(format!(
            "tree sum needs {n}^{exponent} labelings"
        )));
    }
    Ok(())
}

/// Deterministic edge list of a labeled view, endpoints ordered.
fn edge_list(adj: &[Vec<u32>]) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(adj.len().saturating_sub(1));
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs {
            if (v as usize) > u {
                edges.push((u, v as usize));
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// The edge-labeled polynomial `Q_{T,P}`: for every labeling of the edges
/// of `T` by variables, the product over vertices of the derivative of `P`
/// by the labels of the incident edges.
pub fn q_tree(t: &FreeTree, p: &Polynomial) -> Result<Polynomial> {
    let n = p.var_count();
    let adj = t.to_labeled().into_adjacency();
    let edges = edge_list(&adj);
    check_labelings(n, edges.len())?;
    let nv = adj.len();
    let mut cache = DerivCache::new(p);
    let mut acc = Polynomial::zero(n);
    let mut labels = vec![0usize; edges.len()];
    loop {
        // multi-index at each vertex: counts of incident edge labels
        let mut multi = vec![vec![0u16; n]; nv];
        for (&(u, v), &l) in edges.iter().zip(&labels) {
            multi[u][l] += 1;
            multi[v][l] += 1;
        }
        let mut prod = Polynomial::one(n);
        for m in &multi {
            let factor = cache.get(m);
            if factor.is_zero() {
                prod = Polynomial::zero(n);
                break;
            }
            prod = prod.mul(factor);
        }
        acc.add_assign(&prod);
        if !advance(&mut labels, n) {
            return Ok(acc);
        }
    }
}

/// Linear extension of `q_tree` to the tree module: the map `rho_P`.
pub fn q_tree_vector(v: &TreeVector, p: &Polynomial) -> Result<Polynomial> {
    let mut acc = Polynomial::zero(p.var_count());
    for (t, c) in v.iter() {
        acc.add_assign(&q_tree(t, p)?.scale_rat(c));
    }
    Ok(acc)
}

/// The vertex-labeled summand `P_{T,H,i}` of the rooted-tree inversion
/// formula: labelings of `V(T)` with the root labeled `i`, each
/// contributing the product over vertices of `D_{l(children)} H_{l(v)}`.
pub fn p_tree(s: &RootedTree, h: &PolyMap, i: usize) -> Result<Polynomial> {
    let n = h.var_count();
    if i >= n {
        return Err(Error::VariableOutOfRange { index: i + 1, count: n });
    }
    let adj = s.to_labeled().into_adjacency();
    let nv = adj.len();
    check_labelings(n, nv - 1)?;
    // children of v = neighbors whose parent is v
    let parents = parents_from_root(&adj);
    let mut caches: Vec<DerivCache> = h.components().iter().map(DerivCache::new).collect();
    let mut acc = Polynomial::zero(n);
    let mut labels = vec![0usize; nv]; // labels[0] stays fixed at i
    labels[0] = i;
    let mut free = vec![0usize; nv - 1];
    loop {
        for (slot, &l) in free.iter().enumerate() {
            labels[slot + 1] = l;
        }
        let mut prod = Polynomial::one(n);
        for v in 0..nv {
            let mut multi = vec![0u16; n];
            for &w in &adj[v] {
                if parents[w as usize] == Some(v as u32) {
                    multi[labels[w as usize]] += 1;
                }
            }
            let factor = caches[labels[v]].get(&multi);
            if factor.is_zero() {
                prod = Polynomial::zero(n);
                break;
            }
            prod = prod.mul(factor);
        }
        acc.add_assign(&prod);
        if !advance(&mut free, n) {
            return Ok(acc);
        }
    }
}

/// All components `(P_{T,H,1}, ..., P_{T,H,n})` as a map.
pub fn p_tree_map(s: &RootedTree, h: &PolyMap) -> Result<PolyMap> {
    PolyMap::new(
        (0..h.var_count())
            .map(|i| p_tree(s, h, i))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn parents_from_root(adj: &[Vec<u32>]) -> Vec<Option<u32>> {
    let mut parents = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0u32];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parents[w as usize] = Some(v);
                stack.push(w);
            }
        }
    }
    parents
}

fn advance(labels: &mut [usize], base: usize) -> bool {
    for slot in labels.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// A differential operator: a finite sum of (polynomial coefficient) times
/// (multi-derivative) terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    n: usize,
    terms: BTreeMap<Exponents, Polynomial>,
}

impl DiffOperator {
    pub fn zero(n: usize) -> Self {
        DiffOperator {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator (empty multi-index, coefficient 1).
    pub fn identity(n: usize) -> Self {
        let mut op = Self::zero(n);
        op.add_term(vec![0; n], Polynomial::one(n));
        op
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Polynomial)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, multi: Exponents, coeff: Polynomial) {
        debug_assert_eq!(multi.len(), self.n);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(multi) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale_rat(&self, c: &BigRational) -> Self {
        DiffOperator {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, p)| (m.clone(), p.scale_rat(c)))
                .collect(),
        }
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (multi, coeff) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let ds: String = multi
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("D{}", i + 1)
                    } else {
                        format!("D{}^{}", i + 1, k)
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            if ds.is_empty() {
                write!(f, "({coeff})")?;
            } else {
                write!(f, "({coeff})*{ds}")?;
            }
        }
        Ok(())
    }
}

/// The operator `d_{S,P}` of the ring homomorphism `phi_P`: the edge sum of
/// `Q_{S,P}` with the root factor omitted and the root-edge derivatives
/// left open. The singleton maps to the identity operator.
pub fn dop_tree(s: &RootedTree, p: &Polynomial) -> Result<DiffOperator> {
    let n = p.var_count();
    let adj = s.to_labeled().into_adjacency();
    let edges = edge_list(&adj);
    check_labelings(n, edges.len())?;
    let nv = adj.len();
    let mut cache = DerivCache::new(p);
    let mut op = DiffOperator::zero(n);
    let mut labels = vec![0usize; edges.len()];
    loop {
        let mut multi = vec![vec![0u16; n]; nv];
        for (&(u, v), &l) in edges.iter().zip(&labels) {
            multi[u][l] += 1;
            multi[v][l] += 1;
        }
        // Vertex 0 is the root: its multi-index stays open.
        let mut prod = Polynomial::one(n);
        for m in multi.iter().skip(1) {
            let factor = cache.get(m);
            if factor.is_zero() {
                prod = Polynomial::zero(n);
                break;
            }
            prod = prod.mul(factor);
        }
        op.add_term(std::mem::take(&mut multi[0]), prod);
        if !advance(&mut labels, n) {
            return Ok(op);
        }
    }
}

/// Linear extension of `dop_tree`: the homomorphism `phi_P` on `H`.
pub fn dop_tree_vector(v: &RootedVector, p: &Polynomial) -> Result<DiffOperator> {
    let mut acc = DiffOperator::zero(p.var_count());
    for (s, c) in v.iter() {
        acc = acc.add(&dop_tree(s, p)?.scale_rat(c));
    }
    Ok(acc)
}

/// Apply a differential operator to a polynomial.
pub fn apply_dop(d: &DiffOperator, q: &Polynomial) -> Result<Polynomial> {
    if d.var_count() != q.var_count() {
        return Err(Error::DimensionMismatch(format!(
            "operator in {} variables applied to polynomial in {}",
            d.var_count(),
            q.var_count()
        )));
    }
    let mut acc = Polynomial::zero(q.var_count());
    for (multi, coeff) in d.terms() {
        acc.add_assign(&coeff.mul(&q.diff_multi(multi)?));
    }
    Ok(acc)
}

/// How an inverse series was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesMethod {
    TreeFormula,
    Zhao,
}

impl fmt::Display for SeriesMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesMethod::TreeFormula => "tree",
            SeriesMethod::Zhao => "zhao",
        })
    }
}

/// The homogeneous summands `Q^(1..m_max)` of the inverse potential and
/// their gradients `N^(m)`.
///
/// When `P` is homogeneous of degree `d+1`, `Q^(m)` is homogeneous of
/// degree `m(d-1)+2` (or zero) and `N^(m) = grad Q^(m)` of degree
/// `m(d-1)+1`; this is asserted on construction.
#[derive(Clone, Debug)]
pub struct InverseSeries {
    pub potential: Polynomial,
    pub method: SeriesMethod,
    /// `d`, where the potential is homogeneous of degree `d+1`.
    pub degree_d: u32,
    q: Vec<Polynomial>,
    n_maps: Vec<PolyMap>,
}

impl InverseSeries {
    fn assemble(
        potential: Polynomial,
        method: SeriesMethod,
        degree_d: u32,
        q: Vec<Polynomial>,
    ) -> Self {
        for (idx, qm) in q.iter().enumerate() {
            let m = idx as u32 + 1;
            debug_assert!(
                qm.is_zero() || qm.homogeneous_degree() == Some(m * (degree_d - 1) + 2),
                "Q^({m}) has wrong degree"
            );
        }
        let n_maps = q.iter().map(Polynomial::gradient).collect();
        InverseSeries {
            potential,
            method,
            degree_d,
            q,
            n_maps,
        }
    }

    pub fn m_max(&self) -> u32 {
        self.q.len() as u32
    }

    /// `Q^(m)`, 1-based.
    pub fn q(&self, m: u32) -> &Polynomial {
        &self.q[(m - 1) as usize]
    }

    /// `N^(m) = grad Q^(m)`, 1-based.
    pub fn n_map(&self, m: u32) -> &PolyMap {
        &self.n_maps[(m - 1) as usize]
    }
}

/// Validate a potential: homogeneous of degree `>= 2`; returns `d`.
fn potential_degree(p: &Polynomial) -> Result<u32> {
    match p.homogeneous_degree() {
        Some(deg) if deg >= 2 => Ok(deg - 1),
        _ => Err(Error::NotHomogeneous { min_degree: 2 }),
    }
}

/// The summands `Q^(m) = rho_P(nu_m)` for `m <= m_max` via the free-tree
/// formula.
pub fn q_series_tree(p: &Polynomial, m_max: u32) -> Result<InverseSeries> {
    let d = potential_degree(p)?;
    let mut q = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        q.push(q_tree_vector(&nu(m)?, p)?);
    }
    Ok(InverseSeries::assemble(
        p.clone(),
        SeriesMethod::TreeFormula,
        d,
        q,
    ))
}

/// The summands `Q^(m)` via the recursion
/// `Q^(1) = P`, `Q^(m) = (1/(2(m-1))) sum_{k+l=m} grad Q^(k) . grad Q^(l)`.
pub fn q_series_zhao(p: &Polynomial, m_max: u32) -> Result<InverseSeries> {
    let d = potential_degree(p)?;
    let mut q: Vec<Polynomial> = Vec::with_capacity(m_max as usize);
    let mut grads: Vec<PolyMap> = Vec::new();
    for m in 1..=m_max {
        let qm = if m == 1 {
            p.clone()
        } else {
            let mut acc = Polynomial::zero(p.var_count());
            for k in 1..m {
                acc.add_assign(&dot(&grads[(k - 1) as usize], &grads[(m - k - 1) as usize])?);
            }
            let factor = BigRational::new(BigInt::one(), BigInt::from(2 * (m - 1)));
            acc.scale_rat(&factor)
        };
        grads.push(qm.gradient());
        q.push(qm);
    }
    Ok(InverseSeries::assemble(p.clone(), SeriesMethod::Zhao, d, q))
}

/// The Bass-Connell-Wright summands `N^(m)` for a (not necessarily
/// symmetric) homogeneous `H`: rooted-tree sums weighted by `1/|Aut T|`.
pub fn n_series_bcw(h: &PolyMap, m_max: u32) -> Result<Vec<PolyMap>> {
    let n = h.var_count();
    match h.homogeneous_degree() {
        Some(d) if d >= 2 => d,
        _ => return Err(Error::NotHomogeneous { min_degree: 2 }),
    };
    let mut out = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let mut acc = PolyMap::new(vec![Polynomial::zero(n); n])?;
        for t in enumerate_rooted(m)? {
            let weight = BigRational::new(BigInt::one(), BigInt::from(t.aut_order()));
            let p_t = p_tree_map(&t, h)?;
            let scaled = PolyMap::new(
                p_t.components()
                    .iter()
                    .map(|c| c.scale_rat(&weight))
                    .collect(),
            )?;
            acc = acc.add(&scaled)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Gap-theorem inverter: if `Q^(m) = 0` for `M+1 <= m <= 2M` (computed via
/// the Zhao recursion), the inverse of `X - grad P` is the polynomial map
/// `X + sum_{m<=M} grad Q^(m)`; returns `None` when the window does not
/// vanish.
///
/// The first window element is cross-checked against the independent tree
/// formula when small enough; disagreement is reported as an error.
pub fn gap_invert(p: &Polynomial, window_m: u32) -> Result<Option<PolyMap>> {
    if window_m < 1 {
        return Err(Error::InvalidParameter("window bound M must be >= 1".into()));
    }
    let series = q_series_zhao(p, 2 * window_m)?;
    let n = p.var_count();
    let first = window_m + 1;
    if first <= 7 && (n as f64).powi(first as i32 - 1) <= MAX_LABELINGS {
        let tree_first = q_series_tree(p, first)?;
        if tree_first.q(first) != series.q(first) {
            return Err(Error::Inconsistency(format!(
                "Zhao recursion and tree formula disagree on Q^({first})"
            )));
        }
    }
    for m in (window_m + 1)..=(2 * window_m) {
        if !series.q(m).is_zero() {
            return Ok(None);
        }
    }
    let mut g = PolyMap::identity(n)?;
    for m in 1..=window_m {
        g = g.add(series.n_map(m))?;
    }
    Ok(Some(g))
}

/// Check `compose(f, g) = X = compose(g, f)` up to total degree `trunc`.
/// Both maps must be of special type (identity linear part), which makes
/// the truncated check meaningful.
pub fn verify_inverse(f: &PolyMap, g: &PolyMap, trunc: u32) -> Result<bool> {
    if !f.is_special_type() || !g.is_special_type() {
        return Err(Error::InvalidParameter(
            "verify_inverse requires maps of special type".into(),
        ));
    }
    let id = PolyMap::identity(f.var_count())?;
    Ok(compose(f, g, trunc)? == id && compose(g, f, trunc)? == id)
}
