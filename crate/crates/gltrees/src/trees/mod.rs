//! Canonical forms, enumeration and structural predicates for rooted and
//! free trees.
//!
//! Trees are always kept in canonical form, so structural equality equals
//! isomorphism. The canonical code of a rooted tree is the AHU parenthesis
//! string: `"("` + the children's codes in non-increasing lexicographic
//! order + `")"`. A free tree is canonicalized at its center: a unicentral
//! tree is rooted at the center, a bicentral tree is cut at the central
//! edge and stored as the ordered pair of its two rooted halves (codes
//! concatenated, larger first).

mod enumeration;

pub use enumeration::{
    enumerate_free, enumerate_rooted, free_counts, rooted_counts, MAX_ENUM_VERTICES,
};

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::{Error, Result};

/// A rooted tree in canonical form.
///
/// Children are stored in non-increasing code order, so two `RootedTree`
/// values are equal exactly when the rooted trees are isomorphic.
#[derive(Clone, Debug)]
pub struct RootedTree {
    code: String,
    children: Vec<RootedTree>,
    size: u32,
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}
impl Eq for RootedTree {}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootedTree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code.cmp(&other.code)
    }
}

impl std::hash::Hash for RootedTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

impl RootedTree {
    /// The single-vertex tree.
    pub fn leaf() -> Self {
        RootedTree {
            code: "()".to_string(),
            children: Vec::new(),
            size: 1,
        }
    }

    /// Build a rooted tree from its root branches, canonicalizing the order.
    pub fn new(mut children: Vec<RootedTree>) -> Self {
        children.sort_by(|a, b| b.code.cmp(&a.code));
        let size = 1 + children.iter().map(|c| c.size).sum::<u32>();
        let mut code = String::with_capacity(2 * size as usize);
        code.push('(');
        for c in &children {
            code.push_str(&c.code);
        }
        code.push(')');
        RootedTree {
            code,
            children,
            size,
        }
    }

    /// Canonical parenthesis code; equal codes iff isomorphic.
    pub fn code(&self) -> &str {
        &self.code
    }

    /// Root branches in canonical (non-increasing code) order.
    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn vertex_count(&self) -> u32 {
        self.size
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> u32 {
        self.children
            .iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Order of the automorphism group fixing the root.
    ///
    /// Computed during the canonical form: the product over all vertices of
    /// the factorials of multiplicities of isomorphic child subtrees.
    pub fn aut_order(&self) -> BigUint {
        let mut aut = BigUint::one();
        let mut i = 0;
        while i < self.children.len() {
            let mut j = i;
            while j < self.children.len() && self.children[j].code == self.children[i].code {
                j += 1;
            }
            let mult = (j - i) as u32;
            let child = self.children[i].aut_order();
            aut *= child.pow(mult);
            for k in 2..=mult {
                aut *= BigUint::from(k);
            }
            i = j;
        }
        aut
    }

    /// Parse a balanced-parenthesis code and return the canonical
    /// representative of the encoded rooted tree. The input need not be
    /// canonical; children are re-sorted.
    pub fn parse(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let start = skip_ws(bytes, 0);
        let (tree, end) = parse_group(bytes, start)?;
        let end = skip_ws(bytes, end);
        if end != bytes.len() {
            return Err(Error::Syntax {
                pos: end,
                msg: "trailing input after tree code".into(),
            });
        }
        Ok(tree)
    }

    /// Deterministic labeled view: vertices numbered in DFS preorder of the
    /// canonical form, root at index 0.
    pub fn to_labeled(&self) -> LabeledTreeView {
        let mut adj: Vec<Vec<u32>> = Vec::with_capacity(self.size as usize);
        push_labeled(self, None, &mut adj);
        LabeledTreeView {
            adj,
            root: Some(0),
        }
    }

    /// Forget the root and canonicalize as a free tree.
    pub fn forget_root(&self) -> FreeTree {
        self.to_labeled().to_free()
    }
}

fn push_labeled(t: &RootedTree, parent: Option<u32>, adj: &mut Vec<Vec<u32>>) -> u32 {
    let idx = adj.len() as u32;
    adj.push(Vec::with_capacity(t.children.len() + 1));
    if let Some(p) = parent {
        adj[idx as usize].push(p);
        adj[p as usize].push(idx);
    }
    for c in &t.children {
        push_labeled(c, Some(idx), adj);
    }
    idx
}

fn skip_ws(bytes: &[u8], mut pos: usize) -> usize {
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

fn parse_group(bytes: &[u8], pos: usize) -> Result<(RootedTree, usize)> {
    if bytes.get(pos) != Some(&b'(') {
        return Err(Error::Syntax {
            pos,
            msg: "expected '('".into(),
        });
    }
    let mut children = Vec::new();
    let mut i = skip_ws(bytes, pos + 1);
    loop {
        match bytes.get(i) {
            Some(b'(') => {
                let (child, j) = parse_group(bytes, i)?;
                children.push(child);
                i = skip_ws(bytes, j);
            }
            Some(b')') => return Ok((RootedTree::new(children), i + 1)),
            Some(c) => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character '{}'", *c as char),
                })
            }
            None => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: "unbalanced parentheses".into(),
                })
            }
        }
    }
}

/// Canonical center decomposition of a free tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeForm {
    /// Unique center; the tree rooted there.
    Central(RootedTree),
    /// Central edge; the two halves rooted at its endpoints, larger code
    /// first. The halves have equal height.
    Bicentral(RootedTree, RootedTree),
}

/// A free (unrooted) tree in canonical form.
///
/// Structural equality equals isomorphism of free trees. Re-canonicalizing
/// after rooting at any vertex and forgetting the root yields the identical
/// representative.
#[derive(Clone, Debug)]
pub struct FreeTree {
    code: String,
    form: FreeForm,
}

impl PartialEq for FreeTree {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}
impl Eq for FreeTree {}

impl PartialOrd for FreeTree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FreeTree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code.cmp(&other.code)
    }
}

impl std::hash::Hash for FreeTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl fmt::Display for FreeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

impl FreeTree {
    /// The single-vertex free tree.
    pub fn singleton() -> Self {
        FreeTree::central_unchecked(RootedTree::leaf())
    }

    pub(crate) fn central_unchecked(root: RootedTree) -> Self {
        debug_assert!(is_center_rooting(&root), "root is not the tree center");
        FreeTree {
            code: root.code.clone(),
            form: FreeForm::Central(root),
        }
    }

    pub(crate) fn bicentral_unchecked(first: RootedTree, second: RootedTree) -> Self {
        debug_assert!(first.code >= second.code);
        debug_assert_eq!(first.height(), second.height());
        let mut code = String::with_capacity(first.code.len() + second.code.len());
        code.push_str(&first.code);
        code.push_str(&second.code);
        FreeTree {
            code,
            form: FreeForm::Bicentral(first, second),
        }
    }

    /// Canonical code: the rooted-at-center code, or the concatenated codes
    /// of the two rooted halves for a bicentral tree.
    pub fn code(&self) -> &str {
        &self.code
    }

    /// Center decomposition.
    pub fn form(&self) -> &FreeForm {
        &self.form
    }

    pub fn is_bicentral(&self) -> bool {
        matches!(self.form, FreeForm::Bicentral(..))
    }

    pub fn vertex_count(&self) -> u32 {
        match &self.form {
            FreeForm::Central(t) => t.size,
            FreeForm::Bicentral(a, b) => a.size + b.size,
        }
    }

    /// Order of the automorphism group of the free tree.
    pub fn aut_order(&self) -> BigUint {
        match &self.form {
            FreeForm::Central(t) => t.aut_order(),
            FreeForm::Bicentral(a, b) => {
                let mut aut = a.aut_order() * b.aut_order();
                if a.code == b.code {
                    aut *= BigUint::from(2u32);
                }
                aut
            }
        }
    }

    /// Parse a free tree from either a parenthesis code (one group, or two
    /// concatenated groups for a bicentral pair) or an edge list
    /// `"u-v,u-w,..."` with positive integer vertex names. The result is
    /// always canonical.
    pub fn parse(text: &str) -> Result<Self> {
        if text.contains('-') {
            return Self::from_edge_list(text);
        }
        let bytes = text.as_bytes();
        let start = skip_ws(bytes, 0);
        let (first, end) = parse_group(bytes, start)?;
        let end2 = skip_ws(bytes, end);
        if end2 == bytes.len() {
            return Ok(first.forget_root());
        }
        let (second, end3) = parse_group(bytes, end2)?;
        let end3 = skip_ws(bytes, end3);
        if end3 != bytes.len() {
            return Err(Error::Syntax {
                pos: end3,
                msg: "trailing input after tree code".into(),
            });
        }
        // Join the two roots by an edge, then canonicalize.
        let mut adj = Vec::with_capacity((first.size + second.size) as usize);
        push_labeled(&first, None, &mut adj);
        let offset = adj.len() as u32;
        let mut tail: Vec<Vec<u32>> = Vec::new();
        push_labeled(&second, None, &mut tail);
        for nbrs in tail {
            adj.push(nbrs.into_iter().map(|v| v + offset).collect());
        }
        adj[0].push(offset);
        adj[offset as usize].push(0);
        Ok(LabeledTreeView { adj, root: None }.to_free())
    }

    /// Parse an edge list with positive integer vertex names.
    fn from_edge_list(text: &str) -> Result<Self> {
        fn intern(
            names: &mut Vec<u64>,
            index_of: &mut std::collections::HashMap<u64, u32>,
            name: &str,
            at: usize,
        ) -> Result<u32> {
            let value: u64 = name.trim().parse().map_err(|_| Error::Syntax {
                pos: at,
                msg: format!("expected positive integer vertex name, got '{}'", name.trim()),
            })?;
            if value == 0 {
                return Err(Error::Syntax {
                    pos: at,
                    msg: "vertex names must be positive".into(),
                });
            }
            Ok(*index_of.entry(value).or_insert_with(|| {
                names.push(value);
                (names.len() - 1) as u32
            }))
        }

        let mut names: Vec<u64> = Vec::new();
        let mut index_of = std::collections::HashMap::new();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut pos = 0usize;
        for piece in text.split(',') {
            let entry = piece.trim();
            let entry_pos = pos + piece.len() - piece.trim_start().len();
            let Some((u_text, v_text)) = entry.split_once('-') else {
                return Err(Error::Syntax {
                    pos: entry_pos,
                    msg: format!("expected edge 'u-v', got '{entry}'"),
                });
            };
            let u = intern(&mut names, &mut index_of, u_text, entry_pos)?;
            let v = intern(
                &mut names,
                &mut index_of,
                v_text,
                entry_pos + u_text.len() + 1,
            )?;
            if u == v {
                return Err(Error::NotATree(format!(
                    "self-loop at vertex {}",
                    names[u as usize]
                )));
            }
            edges.push((u, v));
            pos += piece.len() + 1;
        }
        let n = names.len();
        if edges.len() + 1 != n {
            return Err(Error::NotATree(if edges.len() + 1 > n {
                "edge list contains a cycle".into()
            } else {
                "edge list is disconnected".into()
            }));
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if adj[u as usize].contains(&v) {
                return Err(Error::NotATree(format!(
                    "duplicate edge {}-{}",
                    names[u as usize], names[v as usize]
                )));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        // |E| = |V| - 1 holds, so connectivity rules out cycles too.
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != n {
            return Err(Error::NotATree("edge list is disconnected".into()));
        }
        Ok(LabeledTreeView { adj, root: None }.to_free())
    }

    /// Reconstruct a `FreeTree` from a canonical code produced by this crate.
    pub(crate) fn from_canonical_code(code: &str) -> Self {
        let bytes = code.as_bytes();
        let (first, end) = parse_group(bytes, 0).expect("canonical code");
        if end == bytes.len() {
            FreeTree::central_unchecked(first)
        } else {
            let (second, end2) = parse_group(bytes, end).expect("canonical code");
            debug_assert_eq!(end2, bytes.len());
            FreeTree::bicentral_unchecked(first, second)
        }
    }

    /// Deterministic labeled view (DFS preorder of the canonical form; for a
    /// bicentral tree the first half precedes the second).
    pub fn to_labeled(&self) -> LabeledTreeView {
        let mut adj = Vec::with_capacity(self.vertex_count() as usize);
        match &self.form {
            FreeForm::Central(t) => {
                push_labeled(t, None, &mut adj);
            }
            FreeForm::Bicentral(a, b) => {
                push_labeled(a, None, &mut adj);
                let offset = adj.len() as u32;
                let mut tail = Vec::new();
                push_labeled(b, None, &mut tail);
                for nbrs in tail {
                    adj.push(nbrs.into_iter().map(|v| v + offset).collect::<Vec<_>>());
                }
                adj[0].push(offset);
                adj[offset as usize].push(0);
            }
        }
        LabeledTreeView { adj, root: None }
    }

    /// Root the tree at vertex `w` of its labeled view and canonicalize.
    pub fn root_at(&self, w: usize) -> Result<RootedTree> {
        self.to_labeled().to_rooted(w)
    }

    /// Maximum vertex degree; 0 for the singleton by convention.
    pub fn max_degree(&self) -> u32 {
        if self.vertex_count() == 1 {
            return 0;
        }
        let view = self.to_labeled();
        (0..view.vertex_count())
            .map(|v| view.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Whether the tree contains a naked `r`-chain: a geodesic of `r`
    /// vertices whose interior vertices have degree 2 and whose two end
    /// vertices have degree 1 or 2. Requires `r >= 2`.
    pub fn has_naked_chain(&self, r: u32) -> bool {
        assert!(r >= 2, "naked chains require r >= 2");
        let view = self.to_labeled();
        let n = view.vertex_count();
        if (r as usize) > n {
            return false;
        }
        for a in 0..n {
            for b in (a + 1)..n {
                let path = view.path(a, b);
                if path.len() != r as usize {
                    continue;
                }
                let ends_ok =
                    view.degree(path[0]) <= 2 && view.degree(*path.last().unwrap()) <= 2;
                let interior_ok = path[1..path.len() - 1]
                    .iter()
                    .all(|&v| view.degree(v) == 2);
                if ends_ok && interior_ok {
                    return true;
                }
            }
        }
        false
    }
}

/// Count the vertices `w` of `tbar` such that rooting there yields a tree
/// isomorphic to `s`. Equals `aut(tbar) / aut(s)` when nonzero.
pub fn count_rootings_isomorphic(tbar: &FreeTree, s: &RootedTree) -> u32 {
    if tbar.vertex_count() != s.vertex_count() {
        return 0;
    }
    let view = tbar.to_labeled();
    (0..view.vertex_count())
        .filter(|&w| view.to_rooted(w).expect("valid index") == *s)
        .count() as u32
}

/// Whether the root of `t` is the unique center of the underlying free
/// tree: at least two branches, with the two tallest of equal height.
pub(crate) fn is_center_rooting(t: &RootedTree) -> bool {
    if t.size == 1 {
        return true;
    }
    if t.children.len() < 2 {
        return false;
    }
    let mut heights: Vec<u32> = t.children.iter().map(RootedTree::height).collect();
    heights.sort_unstable_by(|a, b| b.cmp(a));
    heights[0] == heights[1]
}

/// A working labeled view of a tree: vertex-indexed adjacency lists and an
/// optional root index.
#[derive(Clone, Debug)]
pub struct LabeledTreeView {
    adj: Vec<Vec<u32>>,
    root: Option<u32>,
}

impl LabeledTreeView {
    /// Consume the view, keeping only the adjacency lists.
    pub(crate) fn into_adjacency(self) -> Vec<Vec<u32>> {
        self.adj
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn root(&self) -> Option<usize> {
        self.root.map(|r| r as usize)
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.adj[v].len() as u32
    }

    /// The unique path between two vertices, inclusive.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        let mut stack = vec![a];
        parent[a] = a;
        while let Some(v) = stack.pop() {
            if v == b {
                break;
            }
            for &w in &self.adj[v] {
                if parent[w as usize] == usize::MAX {
                    parent[w as usize] = v;
                    stack.push(w as usize);
                }
            }
        }
        let mut path = vec![b];
        let mut v = b;
        while v != a {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// Canonical rooted tree obtained by rooting at `v`.
    pub fn to_rooted(&self, v: usize) -> Result<RootedTree> {
        if v >= self.adj.len() {
            return Err(Error::InvalidVertex {
                index: v,
                count: self.adj.len(),
            });
        }
        Ok(build_rooted(&self.adj, v as u32, u32::MAX))
    }

    /// Canonicalize as a free tree (root at the center or central edge).
    pub fn to_free(&self) -> FreeTree {
        let centers = tree_centers(&self.adj);
        match centers[..] {
            [c] => FreeTree::central_unchecked(build_rooted(&self.adj, c, u32::MAX)),
            [c1, c2] => {
                let a = build_rooted(&self.adj, c1, c2);
                let b = build_rooted(&self.adj, c2, c1);
                if a.code >= b.code {
                    FreeTree::bicentral_unchecked(a, b)
                } else {
                    FreeTree::bicentral_unchecked(b, a)
                }
            }
            _ => unreachable!("a tree has one or two centers"),
        }
    }
}

/// Build the canonical rooted tree of the subtree at `v`, entering from
/// `parent` (`u32::MAX` for none).
fn build_rooted(adj: &[Vec<u32>], v: u32, parent: u32) -> RootedTree {
    let children: Vec<RootedTree> = adj[v as usize]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| build_rooted(adj, w, v))
        .collect();
    RootedTree::new(children)
}

/// Centers of a tree by iterated leaf stripping; one or two vertices.
fn tree_centers(adj: &[Vec<u32>]) -> Vec<u32> {
    let n = adj.len();
    if n <= 2 {
        return (0..n as u32).collect();
    }
    let mut degree: Vec<u32> = adj.iter().map(|nbrs| nbrs.len() as u32).collect();
    let mut layer: Vec<u32> = (0..n as u32).filter(|&v| degree[v as usize] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            degree[v as usize] = 0;
            for &w in &adj[v as usize] {
                if degree[w as usize] > 1 {
                    degree[w as usize] -= 1;
                    if degree[w as usize] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    (0..n as u32).filter(|&v| degree[v as usize] >= 1).collect()
}

/// Canonical free-tree code computed directly from an adjacency list.
/// Hot path for product/action expansion; avoids building tree structs.
pub(crate) fn free_code_from_adj(adj: &[Vec<u32>]) -> String {
    let centers = tree_centers(adj);
    match centers[..] {
        [c] => code_from_adj(adj, c, u32::MAX),
        [c1, c2] => {
            let a = code_from_adj(adj, c1, c2);
            let b = code_from_adj(adj, c2, c1);
            if a >= b {
                a + &b
            } else {
                b + &a
            }
        }
        _ => unreachable!(),
    }
}

/// Canonical rooted code computed directly from an adjacency list.
pub(crate) fn rooted_code_from_adj(adj: &[Vec<u32>], root: u32) -> String {
    code_from_adj(adj, root, u32::MAX)
}

fn code_from_adj(adj: &[Vec<u32>], v: u32, parent: u32) -> String {
    let mut child_codes: Vec<String> = adj[v as usize]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| code_from_adj(adj, w, v))
        .collect();
    child_codes.sort_unstable_by(|a, b| b.cmp(a));
    let mut code = String::with_capacity(2 + child_codes.iter().map(String::len).sum::<usize>());
    code.push('(');
    for c in &child_codes {
        code.push_str(c);
    }
    code.push(')');
    code
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

    #[test]
    fn parse_rooted_star() {
        let t = rooted("(()())");
        assert_eq!(t.vertex_count(), 3);
        assert_eq!(t.children().len(), 2);
        assert_eq!(t.code(), "(()())");
    }

    #[test]
    fn parse_canonicalizes_child_order() {
        // Same tree written with branches in both orders.
        let a = rooted("((())())");
        let b = rooted("(()(()))");
        assert_eq!(a, b);
    }

    #[test]
    fn parse_edge_list_three_chain() {
        let t = free("1-2,2-3");
        assert_eq!(t.vertex_count(), 3);
        assert_eq!(t.code(), "(()())"); // rooted at the center
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            RootedTree::parse("(("),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            RootedTree::parse("(())x"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            FreeTree::parse("1-2,3-4"),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            FreeTree::parse("1-2,2-3,3-1"),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(FreeTree::parse("1-1"), Err(Error::NotATree(_))));
    }

    #[test]
    fn canonical_codes_of_small_trees() {
        // 3-chain rooted at an end.
        assert_eq!(rooted("((()))").code(), "((()))");
        // Free 3-chain canonicalizes at its center.
        assert_eq!(free("1-2,2-3").code(), "(()())");
        // Free 4-chain is bicentral: pair code of two 2-vertex halves.
        let four_chain = free("1-2,2-3,3-4");
        assert!(four_chain.is_bicentral());
        assert_eq!(four_chain.code(), "(())(())");
    }

    #[test]
    fn free_canonical_form_is_rooting_invariant() {
        for text in ["1-2,2-3,3-4,4-5,3-6", "1-2,1-3,1-4,4-5,4-6,6-7"] {
            let t = free(text);
            let view = t.to_labeled();
            for w in 0..view.vertex_count() {
                let rerooted = view.to_rooted(w).unwrap().forget_root();
                assert_eq!(rerooted, t);
            }
        }
    }

    #[test]
    fn aut_orders() {
        // Rooted 2-chain has trivial automorphism group.
        assert_eq!(rooted("(())").aut_order(), BigUint::from(1u32));
        // Free 3-chain: leaf swap.
        assert_eq!(free("1-2,2-3").aut_order(), BigUint::from(2u32));
        // 4-vertex star: S3 on the leaves.
        assert_eq!(free("1-2,1-3,1-4").aut_order(), BigUint::from(6u32));
        // Free 4-chain: the half swap.
        assert_eq!(free("1-2,2-3,3-4").aut_order(), BigUint::from(2u32));
    }

    #[test]
    fn root_at_examples() {
        let chain3 = free("1-2,2-3");
        let view = chain3.to_labeled();
        // Canonical view of the 3-chain is rooted-at-center order: vertex 0
        // is the center, vertices 1 and 2 the leaves.
        assert_eq!(view.degree(0), 2);
        assert_eq!(chain3.root_at(0).unwrap().code(), "(()())");
        assert_eq!(chain3.root_at(1).unwrap().code(), "((()))");
        let single = FreeTree::singleton();
        assert_eq!(single.root_at(0).unwrap(), RootedTree::leaf());
        assert!(single.root_at(1).is_err());
    }

    #[test]
    fn count_rootings_examples() {
        let chain3 = free("1-2,2-3");
        assert_eq!(count_rootings_isomorphic(&chain3, &rooted("((()))")), 2);
        assert_eq!(count_rootings_isomorphic(&chain3, &rooted("(()())")), 1);
        assert_eq!(count_rootings_isomorphic(&chain3, &RootedTree::leaf()), 0);
    }

    #[test]
    fn naked_chain_examples() {
        assert!(free("1-2,2-3,3-4").has_naked_chain(4));
        // 4-star: the center has degree 3.
        assert!(!free("1-2,1-3,1-4").has_naked_chain(3));
        // Spider(2,1,1): no naked 4-chain (every 4-geodesic passes the
        // degree-3 center), and no naked 3-chain either; its long leg is a
        // naked 2-chain.
        let spider = free("1-2,2-3,2-4,4-5");
        assert_eq!(spider.vertex_count(), 5);
        assert!(!spider.has_naked_chain(4));
        assert!(!spider.has_naked_chain(3));
        assert!(spider.has_naked_chain(2));
        // The 5-chain has naked chains of every length up to 5.
        let chain5 = free("1-2,2-3,3-4,4-5");
        for r in 2..=5 {
            assert!(chain5.has_naked_chain(r));
        }
        assert!(!chain5.has_naked_chain(6));
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(free("1-2,1-3,1-4").max_degree(), 3);
        assert_eq!(free("1-2,2-3,3-4,4-5").max_degree(), 2);
        assert_eq!(FreeTree::singleton().max_degree(), 0);
    }

    #[test]
    fn code_roundtrip_through_parse() {
        for text in ["()", "(())", "(()())", "((())(())())", "1-2,2-3,3-4"] {
            let t = FreeTree::parse(text).unwrap();
            assert_eq!(FreeTree::parse(t.code()).unwrap(), t);
        }
        // Already-canonical codes are reproduced verbatim. Note that under
        // the non-increasing lexicographic child order, shallower branches
        // sort first ("()" > "(())").
        for code in ["()", "((()))", "(()(()))", "(()()(()()))"] {
            let t = RootedTree::parse(code).unwrap();
            assert_eq!(t.code(), code);
            assert_eq!(RootedTree::parse(t.code()).unwrap(), t);
        }
    }

    #[test]
    fn labeled_view_path() {
        let t = free("1-2,2-3,3-4,2-5");
        let view = t.to_labeled();
        for a in 0..view.vertex_count() {
            for b in 0..view.vertex_count() {
                let p = view.path(a, b);
                assert_eq!(p[0], a);
                assert_eq!(*p.last().unwrap(), b);
            }
        }
    }
}
