//! The Grossman-Larson algebra `H` on rooted trees and its grafting action
//! on the tree module `M` of free trees.
//!
//! For basis rooted trees `S` and `T`, the product is
//!
//! ```text
//! S · T = sum over (v_1,...,v_r) in V(T)^r of
//!         (S_1,...,S_r) grafted at (v_1,...,v_r) onto T
//! ```
//!
//! where `DelRoot(S) = {S_1,...,S_r}` is the forest of root branches of `S`
//! (a tuple: isomorphic branches are attached independently, so their
//! multiplicities multiply). The same expansion with `T` a free tree makes
//! `M` an `H`-module. The singleton is a two-sided identity. `H` is graded
//! by non-root vertex count, `M` by vertex count, and the expansion of
//! `H_i` against degree `j` lands in degree `i + j`.
//!
//! Every summand is canonicalized immediately and merged by canonical code;
//! no labeled intermediate is retained. Target tuples run over the fixed
//! DFS labeling of the canonical form; the result is labeling-independent
//! by symmetry (asserted in tests).

use std::collections::BTreeMap;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::trees::{self, FreeTree, RootedTree};
use crate::{Error, Result};

/// Guard on the number of grafting tuples `|V(T)|^r` in a single basis
/// expansion.
const MAX_EXPANSION_TUPLES: f64 = 5e7;

/// A forest: a multiset of rooted trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    trees: BTreeMap<RootedTree, u32>,
}

impl Forest {
    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Number of trees counted with multiplicity.
    pub fn tree_count(&self) -> u32 {
        self.trees.values().sum()
    }

    pub fn multiplicity(&self, t: &RootedTree) -> u32 {
        self.trees.get(t).copied().unwrap_or(0)
    }

    /// Distinct trees with their multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&RootedTree, u32)> {
        self.trees.iter().map(|(t, &m)| (t, m))
    }
}

/// The forest of root branches of `s`; empty for the singleton.
pub fn del_root(s: &RootedTree) -> Forest {
    let mut trees = BTreeMap::new();
    for c in s.children() {
        *trees.entry(c.clone()).or_insert(0) += 1;
    }
    Forest { trees }
}

/// A finite rational linear combination of canonical trees.
///
/// Zero coefficients are never stored; the map is keyed (and iterated) in
/// canonical code order, so printing and serialization are deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<T: Ord + Clone> {
    terms: BTreeMap<T, BigRational>,
}

/// Element of the Grossman-Larson algebra `H`.
pub type RootedVector = LinComb<RootedTree>;
/// Element of the tree module `M`.
pub type TreeVector = LinComb<FreeTree>;

impl<T: Ord + Clone> Default for LinComb<T> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Ord + Clone> LinComb<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `1 · t`.
    pub fn from_basis(t: T) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(t, BigRational::one());
        LinComb { terms }
    }

    pub fn from_term(t: T, coeff: BigRational) -> Self {
        let mut v = Self::zero();
        v.add_term(t, coeff);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of basis trees in the support.
    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, t: &T) -> BigRational {
        self.terms.get(t).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&T, &BigRational)> {
        self.terms.iter()
    }

    /// Add `coeff * t`, dropping the entry if the total cancels.
    pub fn add_term(&mut self, t: T, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(t);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in other.iter() {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(t, v)| (t.clone(), v * c))
                .collect(),
        }
    }

    pub fn sum_of_coefficients(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.terms.values() {
            acc += c;
        }
        acc
    }
}

impl RootedVector {
    /// The common `H`-degree (non-root vertex count) if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|t| t.vertex_count() - 1);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

impl TreeVector {
    /// The common `M`-degree (vertex count) if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(FreeTree::vertex_count);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

/// Attach each branch root to its target vertex of the rooted tree `t` by a
/// new edge; the root of `t` stays the root. Targets index the DFS labeled
/// view of `t`.
pub fn graft_rooted(
    branches: &[RootedTree],
    targets: &[usize],
    t: &RootedTree,
) -> Result<RootedTree> {
    let adj = grafted_adjacency(branches, targets, t.to_labeled().into_adjacency())?;
    Ok(RootedTree::parse(&trees::rooted_code_from_adj(&adj, 0)).expect("canonical code"))
}

/// Attach each branch root to its target vertex of the free tree `t` by a
/// new edge and canonicalize. Targets index the DFS labeled view of `t`.
pub fn graft_free(branches: &[RootedTree], targets: &[usize], t: &FreeTree) -> Result<FreeTree> {
    let adj = grafted_adjacency(branches, targets, t.to_labeled().into_adjacency())?;
    Ok(FreeTree::from_canonical_code(&trees::free_code_from_adj(
        &adj,
    )))
}

fn grafted_adjacency(
    branches: &[RootedTree],
    targets: &[usize],
    mut adj: Vec<Vec<u32>>,
) -> Result<Vec<Vec<u32>>> {
    if branches.len() != targets.len() {
        return Err(Error::GraftLengthMismatch {
            branches: branches.len(),
            targets: targets.len(),
        });
    }
    let base = adj.len();
    for (branch, &target) in branches.iter().zip(targets) {
        if target >= base {
            return Err(Error::InvalidVertex {
                index: target,
                count: base,
            });
        }
        let root = append_subtree(&mut adj, branch);
        adj[root as usize].push(target as u32);
        adj[target].push(root);
    }
    Ok(adj)
}

/// Append the adjacency of `t` (DFS order) to `adj`; returns the index of
/// the appended root.
fn append_subtree(adj: &mut Vec<Vec<u32>>, t: &RootedTree) -> u32 {
    let idx = adj.len() as u32;
    adj.push(Vec::with_capacity(t.children().len() + 1));
    for c in t.children() {
        let child = append_subtree(adj, c);
        adj[idx as usize].push(child);
        adj[child as usize].push(idx);
    }
    idx
}

/// Expansion of a basis product or action over all target tuples,
/// accumulated as canonical-code counts. `rooted` selects rooted (index 0)
/// versus free canonicalization.
fn expand_basis(
    s: &RootedTree,
    base_adj: Vec<Vec<u32>>,
    rooted: bool,
) -> Result<HashMap<String, u64>> {
    let branches = s.children();
    let r = branches.len();
    let n = base_adj.len();
    if (n as f64).powi(r as i32) > MAX_EXPANSION_TUPLES {
        return Err(Error::ResourceLimit(format!(
            "expansion of {} over {} target vertices needs {}^{} grafting tuples",
            s.code(),
            n,
            n,
            r
        )));
    }
    let mut adj = base_adj;
    let mut branch_roots = Vec::with_capacity(r);
    for b in branches {
        branch_roots.push(append_subtree(&mut adj, b));
    }
    let mut acc: HashMap<String, u64> = HashMap::new();
    let mut tuple = vec![0usize; r];
    loop {
        // add the connecting edges for this tuple
        for (&root, &target) in branch_roots.iter().zip(&tuple) {
            adj[root as usize].push(target as u32);
            adj[target].push(root);
        }
        let code = if rooted {
            trees::rooted_code_from_adj(&adj, 0)
        } else {
            trees::free_code_from_adj(&adj)
        };
        *acc.entry(code).or_insert(0) += 1;
        // remove the edges in reverse order
        for (&root, &target) in branch_roots.iter().zip(&tuple).rev() {
            adj[root as usize].pop();
            adj[target].pop();
        }
        // odometer increment
        let mut k = r;
        loop {
            if k == 0 {
                return Ok(acc);
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < n {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// Grossman-Larson product of basis trees, with nonnegative integer
/// coefficients.
pub fn gl_product_basis(s: &RootedTree, t: &RootedTree) -> Result<RootedVector> {
    let acc = expand_basis(s, t.to_labeled().into_adjacency(), true)?;
    let mut out = RootedVector::zero();
    for (code, count) in sorted(acc) {
        out.add_term(
            RootedTree::parse(&code).expect("canonical code"),
            BigRational::from(BigInt::from(count)),
        );
    }
    Ok(out)
}

/// Module action of a basis rooted tree on a basis free tree.
pub fn gl_act_basis(s: &RootedTree, t: &FreeTree) -> Result<TreeVector> {
    let acc = expand_basis(s, t.to_labeled().into_adjacency(), false)?;
    let mut out = TreeVector::zero();
    for (code, count) in sorted(acc) {
        out.add_term(
            FreeTree::from_canonical_code(&code),
            BigRational::from(BigInt::from(count)),
        );
    }
    Ok(out)
}

/// Raw action expansion as canonical-code counts; hot path for the
/// quotient-module spanning sets.
pub(crate) fn gl_act_counts(s: &RootedTree, t: &FreeTree) -> Result<HashMap<String, u64>> {
    expand_basis(s, t.to_labeled().into_adjacency(), false)
}

fn sorted(acc: HashMap<String, u64>) -> Vec<(String, u64)> {
    let mut v: Vec<_> = acc.into_iter().collect();
    v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    v
}

/// Bilinear extension of the basis product to `H x H -> H`.
pub fn gl_product(s: &RootedVector, t: &RootedVector) -> Result<RootedVector> {
    let mut out = RootedVector::zero();
    for (a, ca) in s.iter() {
        for (b, cb) in t.iter() {
            let prod = gl_product_basis(a, b)?;
            let c = ca * cb;
            for (tree, coeff) in prod.iter() {
                out.add_term(tree.clone(), coeff * &c);
            }
        }
    }
    Ok(out)
}

/// Bilinear extension of the module action to `H x M -> M`.
pub fn gl_act(s: &RootedVector, t: &TreeVector) -> Result<TreeVector> {
    let mut out = TreeVector::zero();
    for (a, ca) in s.iter() {
        for (b, cb) in t.iter() {
            let act = gl_act_basis(a, b)?;
            let c = ca * cb;
            for (tree, coeff) in act.iter() {
                out.add_term(tree.clone(), coeff * &c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rooted(code: &str) -> RootedTree {
        RootedTree::parse(code).unwrap()
    }

    fn free(text: &str) -> FreeTree {
        FreeTree::parse(text).unwrap()
    }

    fn int(v: i64) -> BigRational {
        BigRational::from(BigInt::from(v))
    }

    #[test]
    fn del_root_examples() {
        assert!(del_root(&RootedTree::leaf()).is_empty());
        let s = rooted("(())");
        let f = del_root(&s);
        assert_eq!(f.tree_count(), 1);
        assert_eq!(f.multiplicity(&RootedTree::leaf()), 1);
        let star = rooted("(()())");
        assert_eq!(del_root(&star).multiplicity(&RootedTree::leaf()), 2);
    }

    #[test]
    fn graft_examples() {
        let chain3 = free("1-2,2-3");
        // Canonical view: vertex 0 is the center, 1 and 2 are leaves.
        let leaf = RootedTree::leaf();
        let onto_leaf = graft_free(&[leaf.clone()], &[1], &chain3).unwrap();
        assert_eq!(onto_leaf, free("1-2,2-3,3-4"));
        let onto_center = graft_free(&[leaf.clone()], &[0], &chain3).unwrap();
        assert_eq!(onto_center, free("1-2,1-3,1-4"));
        // Empty graft is the identity.
        assert_eq!(graft_free(&[], &[], &chain3).unwrap(), chain3);
        // Errors.
        assert!(matches!(
            graft_free(&[leaf.clone()], &[], &chain3),
            Err(Error::GraftLengthMismatch { .. })
        ));
        assert!(matches!(
            graft_free(&[leaf], &[7], &chain3),
            Err(Error::InvalidVertex { .. })
        ));
    }

    #[test]
    fn singleton_is_identity() {
        let one = RootedTree::leaf();
        for code in ["()", "(())", "(()())", "((())())"] {
            let t = rooted(code);
            assert_eq!(
                gl_product_basis(&one, &t).unwrap(),
                RootedVector::from_basis(t.clone())
            );
            // Right identity: attaching every branch of t to the single
            // vertex reproduces t.
            assert_eq!(
                gl_product_basis(&t, &one).unwrap(),
                RootedVector::from_basis(t)
            );
        }
        let m = free("1-2,2-3");
        assert_eq!(
            gl_act_basis(&one, &m).unwrap(),
            TreeVector::from_basis(m.clone())
        );
    }

    #[test]
    fn product_of_two_chains() {
        // S · S = rooted 3-chain + rooted 2-star, coefficients 1.
        let s = rooted("(())");
        let prod = gl_product_basis(&s, &s).unwrap();
        assert_eq!(prod.coeff(&rooted("((()))")), int(1));
        assert_eq!(prod.coeff(&rooted("(()())")), int(1));
        assert_eq!(prod.support_len(), 2);
    }

    #[test]
    fn action_on_three_chain() {
        // S · T = 2 T1 + T2 with T the free 3-chain, T1 the 4-chain and T2
        // the 4-star.
        let s = rooted("(())");
        let t = free("1-2,2-3");
        let result = gl_act_basis(&s, &t).unwrap();
        assert_eq!(result.coeff(&free("1-2,2-3,3-4")), int(2));
        assert_eq!(result.coeff(&free("1-2,1-3,1-4")), int(1));
        assert_eq!(result.support_len(), 2);
    }

    #[test]
    fn action_on_four_chain() {
        // S · A = 2 A1 + 2 A2: the 5-chain and the spider(2,1,1).
        let s = rooted("(())");
        let a = free("1-2,2-3,3-4");
        let result = gl_act_basis(&s, &a).unwrap();
        assert_eq!(result.coeff(&free("1-2,2-3,3-4,4-5")), int(2));
        assert_eq!(result.coeff(&free("1-2,2-3,2-4,4-5")), int(2));
        assert_eq!(result.support_len(), 2);
    }

    #[test]
    fn associativity_spot_instances() {
        let s = rooted("(())");
        let star = rooted("(()())");
        let chain3 = rooted("((()))");
        for (a, b) in [(&s, &s), (&s, &star), (&star, &chain3)] {
            let ab = gl_product_basis(a, b).unwrap();
            for c in [&s, &star] {
                let left = gl_product(&ab, &RootedVector::from_basis(c.clone())).unwrap();
                let bc = gl_product_basis(b, c).unwrap();
                let right = gl_product(&RootedVector::from_basis(a.clone()), &bc).unwrap();
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn mixed_associativity_with_action() {
        // (a · b) · t = a · (b · t) in the module.
        let trees2 = crate::trees::enumerate_rooted(3).unwrap();
        let frees = crate::trees::enumerate_free(4).unwrap();
        for a in &trees2 {
            for b in &trees2 {
                let ab = gl_product_basis(a, b).unwrap();
                for t in &frees {
                    let left = gl_act(&ab, &TreeVector::from_basis(t.clone())).unwrap();
                    let bt = gl_act_basis(b, t).unwrap();
                    let right = gl_act(&RootedVector::from_basis(a.clone()), &bt).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn grading_and_coefficient_mass() {
        // Every term of H_i acting on M_j lands in M_{i+j}, coefficients
        // are positive integers, and the total mass is n^r.
        for s_code in ["(())", "(()())", "((()))", "((())())"] {
            let s = rooted(s_code);
            let i = s.vertex_count() - 1;
            let r = s.children().len() as u32;
            for t_text in ["1-2", "1-2,2-3", "1-2,2-3,2-4"] {
                let t = free(t_text);
                let j = t.vertex_count();
                let result = gl_act_basis(&s, &t).unwrap();
                assert_eq!(result.homogeneous_degree(), Some(i + j));
                for (_, c) in result.iter() {
                    assert!(c.is_integer());
                    assert!(c > &BigRational::zero());
                }
                assert_eq!(
                    result.sum_of_coefficients(),
                    BigRational::from(BigInt::from(j).pow(r))
                );
            }
        }
    }

    #[test]
    fn action_is_labeling_independent() {
        // Expanding over any rotation of the target labeling gives the same
        // result: rerooting the free tree at each vertex permutes its DFS
        // labels.
        let s = rooted("((())())");
        let t = free("1-2,2-3,3-4,2-5");
        let baseline = gl_act_basis(&s, &t).unwrap();
        let view = t.to_labeled();
        for w in 0..view.vertex_count() {
            let rerooted = view.to_rooted(w).unwrap();
            // Build the action over the rerooted adjacency by hand.
            let acc = super::expand_basis(&s, rerooted.to_labeled().into_adjacency(), false)
                .unwrap();
            let mut out = TreeVector::zero();
            for (code, count) in super::sorted(acc) {
                out.add_term(
                    FreeTree::from_canonical_code(&code),
                    BigRational::from(BigInt::from(count)),
                );
            }
            assert_eq!(out, baseline);
        }
    }
}
