//! Exhaustive enumeration of rooted and free trees by vertex count, plus
//! the generating-function count recurrences used as independent oracles.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{FreeTree, RootedTree};
use crate::{Error, Result};

/// Hard ceiling on enumeration size; larger requests are refused.
pub const MAX_ENUM_VERTICES: u32 = 16;

/// All isomorphism classes of rooted trees with sizes `1..=max`, indexed by
/// vertex count (`result[0]` is empty). Each list is sorted by code.
fn rooted_by_size(max: u32) -> Vec<Vec<RootedTree>> {
    let max = max as usize;
    let mut sized: Vec<Vec<RootedTree>> = vec![Vec::new(); max + 1];
    if max == 0 {
        return sized;
    }
    sized[1] = vec![RootedTree::leaf()];
    for m in 2..=max {
        let mut out = Vec::new();
        let mut stack: Vec<RootedTree> = Vec::new();
        gen_forests(m - 1, None, &sized, &mut stack, &mut out);
        out.sort_unstable_by(|a: &RootedTree, b: &RootedTree| a.code().cmp(b.code()));
        sized[m] = out;
    }
    sized
}

/// Emit every multiset of rooted trees with `budget` total vertices as a
/// non-increasing code sequence, wrapped under a fresh root.
fn gen_forests(
    budget: usize,
    bound: Option<&RootedTree>,
    sized: &[Vec<RootedTree>],
    stack: &mut Vec<RootedTree>,
    out: &mut Vec<RootedTree>,
) {
    if budget == 0 {
        out.push(RootedTree::new(stack.clone()));
        return;
    }
    for s in (1..=budget).rev() {
        for t in &sized[s] {
            if let Some(b) = bound {
                if t.code() > b.code() {
                    continue;
                }
            }
            stack.push(t.clone());
            gen_forests(budget - s, Some(t), sized, stack, out);
            stack.pop();
        }
    }
}

fn check_enum_size(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "vertex count must be at least 1".into(),
        ));
    }
    if m > MAX_ENUM_VERTICES {
        return Err(Error::ResourceLimit(format!(
            "tree enumeration is limited to {MAX_ENUM_VERTICES} vertices (asked for {m})"
        )));
    }
    Ok(())
}

/// One representative per isomorphism class of rooted trees with `m`
/// vertices, sorted by canonical code.
pub fn enumerate_rooted(m: u32) -> Result<Vec<RootedTree>> {
    check_enum_size(m)?;
    Ok(rooted_by_size(m).swap_remove(m as usize))
}

/// One representative per isomorphism class of free trees with `m`
/// vertices, sorted by canonical code.
///
/// Unicentral trees are the rooted trees whose root qualifies as the unique
/// center (at least two branches, the two tallest of equal height);
/// bicentral trees are unordered pairs of equal-height rooted halves joined
/// at their roots.
pub fn enumerate_free(m: u32) -> Result<Vec<FreeTree>> {
    check_enum_size(m)?;
    let sized = rooted_by_size(m);
    let mut out: Vec<FreeTree> = Vec::new();
    for t in &sized[m as usize] {
        if super::is_center_rooting(t) {
            out.push(FreeTree::central_unchecked(t.clone()));
        }
    }
    for a in 1..m as usize {
        let b = m as usize - a;
        for h1 in &sized[a] {
            for h2 in &sized[b] {
                // Keep each unordered pair once, larger code first.
                if h1.code() < h2.code() || h1.height() != h2.height() {
                    continue;
                }
                out.push(FreeTree::bicentral_unchecked(h1.clone(), h2.clone()));
            }
        }
    }
    out.sort_unstable_by(|x, y| x.code().cmp(y.code()));
    Ok(out)
}

/// Rooted-tree counts `T_1..T_max` from the Pólya recurrence for
/// `T(x) = x exp(sum_k T(x^k)/k)`, independent of the enumerator.
/// `result[m]` is the count for `m` vertices; `result[0] = 0`.
pub fn rooted_counts(max: u32) -> Vec<BigUint> {
    let max = max as usize;
    let mut r = vec![BigUint::zero(); max + 1];
    if max == 0 {
        return r;
    }
    r[1] = BigUint::one();
    // s[k] = sum_{d | k} d * r[d]
    for n in 1..max {
        let mut acc = BigUint::zero();
        for k in 1..=n {
            let mut s = BigUint::zero();
            for d in 1..=k {
                if k % d == 0 {
                    s += BigUint::from(d) * &r[d];
                }
            }
            acc += s * &r[n - k + 1];
        }
        let (q, rem) = num_integer::Integer::div_rem(&acc, &BigUint::from(n));
        debug_assert!(rem.is_zero(), "Polya recurrence divides exactly");
        r[n + 1] = q;
    }
    r
}

/// Free-tree counts `t_1..t_max` from Otter's formula
/// `t(x) = T(x) - (T(x)^2 - T(x^2))/2`, independent of the enumerator.
pub fn free_counts(max: u32) -> Vec<BigUint> {
    let r = rooted_counts(max);
    let max = max as usize;
    let mut t = vec![BigUint::zero(); max + 1];
    for n in 1..=max {
        let mut v = r[n].clone();
        for i in 1..n {
            let j = n - i;
            if i < j {
                v -= &r[i] * &r[j];
            }
        }
        if n % 2 == 0 {
            // subtract C(r_{n/2}, 2) for the unordered equal pairs
            let h = &r[n / 2];
            if !h.is_zero() {
                v -= h * (h - BigUint::one()) / BigUint::from(2u32);
            }
        }
        t[n] = v;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rooted_count_oracle_values() {
        let r = rooted_counts(10);
        let expect: [u32; 10] = [1, 1, 2, 4, 9, 20, 48, 115, 286, 719];
        for (m, e) in expect.iter().enumerate() {
            assert_eq!(r[m + 1], BigUint::from(*e), "rooted count at m={}", m + 1);
        }
    }

    #[test]
    fn free_count_oracle_values() {
        // The t-list of the count footnote: t_1..t_11.
        let t = free_counts(11);
        let expect: [u32; 11] = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235];
        for (m, e) in expect.iter().enumerate() {
            assert_eq!(t[m + 1], BigUint::from(*e), "free count at m={}", m + 1);
        }
    }

    #[test]
    fn enumeration_matches_oracles_small() {
        let r = rooted_counts(9);
        let t = free_counts(9);
        for m in 1..=9u32 {
            assert_eq!(
                BigUint::from(enumerate_rooted(m).unwrap().len()),
                r[m as usize]
            );
            assert_eq!(
                BigUint::from(enumerate_free(m).unwrap().len()),
                t[m as usize]
            );
        }
    }

    #[test]
    fn enumerated_trees_are_distinct_and_sorted() {
        let trees = enumerate_free(8).unwrap();
        for w in trees.windows(2) {
            assert!(w[0].code() < w[1].code());
        }
        let rooted = enumerate_rooted(8).unwrap();
        for w in rooted.windows(2) {
            assert!(w[0].code() < w[1].code());
        }
    }

    #[test]
    fn enumeration_guards() {
        assert!(matches!(enumerate_rooted(0), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            enumerate_rooted(MAX_ENUM_VERTICES + 1),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            enumerate_free(MAX_ENUM_VERTICES + 1),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn free_enumeration_is_closed_under_rerooting() {
        for m in 1..=8u32 {
            let trees = enumerate_free(m).unwrap();
            for t in &trees {
                let view = t.to_labeled();
                for w in 0..view.vertex_count() {
                    assert_eq!(&view.to_rooted(w).unwrap().forget_root(), t);
                }
            }
        }
    }

    #[test]
    fn five_vertex_trees() {
        // Exactly the chain, the spider(2,1,1) and the star.
        let trees = enumerate_free(5).unwrap();
        assert_eq!(trees.len(), 3);
        let chain = FreeTree::parse("1-2,2-3,3-4,4-5").unwrap();
        let spider = FreeTree::parse("1-2,2-3,2-4,4-5").unwrap();
        let star = FreeTree::parse("1-2,1-3,1-4,1-5").unwrap();
        assert!(trees.contains(&chain));
        assert!(trees.contains(&spider));
        assert!(trees.contains(&star));
    }
}
