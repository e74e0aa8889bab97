//! Property tests and the heavier structural invariants: tree-count
//! identities, orbit counting, module closure, chain vanishing, and
//! randomized algebra laws. Exact arithmetic throughout.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use gltrees::gl::{self, TreeVector};
use gltrees::inverse;
use gltrees::linalg::{self, SparseRow};
use gltrees::poly::{parse_poly, GaussianRational, Polynomial};
use gltrees::quotient::{self, DegreeBound, GeneratorMode, SpanProvenance};
use gltrees::trees::{
    count_rootings_isomorphic, enumerate_free, enumerate_rooted, FreeTree, LabeledTreeView,
    RootedTree,
};

// ---------------------------------------------------------------------
// tree-count identities
// ---------------------------------------------------------------------

fn factorial(m: u64) -> BigRational {
    let mut f = BigInt::one();
    for k in 2..=m {
        f *= BigInt::from(k);
    }
    BigRational::from(f)
}

#[test]
fn cayley_labeled_tree_counts_to_ten() {
    // sum over rooted trees of m!/|Aut| = m^{m-1}; free trees give m^{m-2}.
    for m in 1..=10u64 {
        let mf = factorial(m);
        let mut rooted_sum = BigRational::zero();
        for t in enumerate_rooted(m as u32).unwrap() {
            rooted_sum += &mf / BigRational::from(BigInt::from(t.aut_order()));
        }
        assert_eq!(
            rooted_sum,
            BigRational::from(BigInt::from(m).pow(m as u32 - 1)),
            "labeled rooted trees on {m} vertices"
        );
        if m >= 2 {
            let mut free_sum = BigRational::zero();
            for t in enumerate_free(m as u32).unwrap() {
                free_sum += &mf / BigRational::from(BigInt::from(t.aut_order()));
            }
            assert_eq!(
                free_sum,
                BigRational::from(BigInt::from(m).pow(m as u32 - 2)),
                "labeled free trees on {m} vertices"
            );
        }
    }
}

#[test]
fn otter_identity_on_enumerated_counts_to_fourteen() {
    // t(x) = T(x) - (T(x)^2 - T(x^2))/2, coefficient-wise, with both
    // sides computed from the enumerated counts.
    let max = 14u32;
    let rooted: Vec<BigUint> = (0..=max)
        .map(|m| {
            if m == 0 {
                BigUint::zero()
            } else {
                BigUint::from(enumerate_rooted(m).unwrap().len())
            }
        })
        .collect();
    let free: Vec<BigUint> = (0..=max)
        .map(|m| {
            if m == 0 {
                BigUint::zero()
            } else {
                BigUint::from(enumerate_free(m).unwrap().len())
            }
        })
        .collect();
    for n in 1..=max as usize {
        // T(x)^2 coefficient, minus the diagonal correction, halved:
        // sum_{i<j} r_i r_j + C(r_{n/2}, 2).
        let mut cross = BigUint::zero();
        for i in 1..n {
            let j = n - i;
            if i < j {
                cross += &rooted[i] * &rooted[j];
            }
        }
        if n % 2 == 0 {
            let h = &rooted[n / 2];
            cross += h * &(h - BigUint::one()) / BigUint::from(2u32);
        }
        assert_eq!(
            free[n],
            &rooted[n] - &cross,
            "Otter identity at degree {n}"
        );
    }
}

#[test]
fn rooting_orbit_counts_to_nine() {
    for m in 1..=9u32 {
        let all_rooted = enumerate_rooted(m).unwrap();
        for tbar in enumerate_free(m).unwrap() {
            let mut total = 0u32;
            for s in &all_rooted {
                let count = count_rootings_isomorphic(&tbar, s);
                total += count;
                if count > 0 {
                    assert_eq!(
                        BigUint::from(count) * s.aut_order(),
                        tbar.aut_order(),
                        "orbit-stabilizer at {} rooted as {}",
                        tbar.code(),
                        s.code()
                    );
                }
            }
            assert_eq!(total, m, "every vertex of {} roots somewhere", tbar.code());
        }
    }
}

#[test]
fn canonical_code_roundtrip_to_twelve() {
    for m in 1..=12u32 {
        for t in enumerate_free(m).unwrap() {
            assert_eq!(FreeTree::parse(t.code()).unwrap(), t);
        }
        for t in enumerate_rooted(m).unwrap() {
            assert_eq!(RootedTree::parse(t.code()).unwrap(), t);
        }
    }
}

// ---------------------------------------------------------------------
// quotient-module closure
// ---------------------------------------------------------------------

fn to_row(v: &TreeVector, col_of: &HashMap<String, u32>) -> SparseRow {
    let mut lcm = BigInt::one();
    for (_, c) in v.iter() {
        lcm = num_integer::Integer::lcm(&lcm, c.denom());
    }
    let mut row: SparseRow = v
        .iter()
        .map(|(t, c)| {
            (
                col_of[t.code()],
                c.numer() * (&lcm / c.denom()),
            )
        })
        .collect();
    row.sort_unstable_by_key(|&(c, _)| c);
    row
}

fn columns(m: u32) -> HashMap<String, u32> {
    enumerate_free(m)
        .unwrap()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.code().to_string(), i as u32))
        .collect()
}

#[test]
fn spanning_sets_are_closed_under_the_action() {
    // Acting on any spanning vector of N(r,e)_m by a rooted tree with at
    // most 3 non-root vertices stays inside the span of the spanning set
    // in the target degree.
    let mut actors: Vec<RootedTree> = Vec::new();
    for i in 1..=3u32 {
        actors.extend(enumerate_rooted(i + 1).unwrap());
    }
    for (r, e) in [(3, DegreeBound::Infinite), (4, DegreeBound::Finite(3))] {
        for m in 2..=7u32 {
            let span = quotient::spanning_set(r, e, m, GeneratorMode::Full).unwrap();
            if span.is_empty() {
                continue;
            }
            for target in (m + 1)..=(m + 3).min(10) {
                let i = target - m;
                let target_cols = columns(target);
                let target_span =
                    quotient::spanning_set(r, e, target, GeneratorMode::Full).unwrap();
                let echelon = linalg::eliminate_rows(
                    target_span
                        .iter()
                        .map(|sv| to_row(&sv.vector, &target_cols))
                        .collect(),
                );
                for sv in &span {
                    for h in actors.iter().filter(|h| h.vertex_count() == i + 1) {
                        let acted = gl::gl_act(
                            &gl::RootedVector::from_basis(h.clone()),
                            &sv.vector,
                        )
                        .unwrap();
                        assert!(
                            echelon.contains(to_row(&acted, &target_cols)),
                            "h = {} acting on a spanning vector of N({r},{e})_{m} \
                             leaves the span in degree {target}",
                            h.code()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn high_degree_span_is_a_submodule() {
    // Grafting never lowers a vertex degree: the action of any small h on
    // a high-degree tree is supported on high-degree trees.
    let mut actors: Vec<RootedTree> = Vec::new();
    for i in 1..=3u32 {
        actors.extend(enumerate_rooted(i + 1).unwrap());
    }
    for e in [3u32, 4] {
        for m in 2..=6u32 {
            for t in quotient::high_degree_trees(DegreeBound::Finite(e), m).unwrap() {
                for h in &actors {
                    let acted = gl::gl_act_basis(h, &t).unwrap();
                    for (tree, _) in acted.iter() {
                        assert!(
                            tree.max_degree() >= e + 1,
                            "{} acting on {} left V({e})",
                            h.code(),
                            t.code()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn rank_agrees_with_modular_elimination_on_spanning_matrices() {
    // rank over Q bounds the rank mod p from above for every prime p, with
    // equality unless p divides all maximal-rank minors. Three large
    // primes against the real spanning matrices make a solid cross-check
    // (the matrices are deterministic, so this can never be flaky).
    let primes = [1_000_003u64, 999_983, 1_000_033];
    for (r, e, m) in [
        (3, DegreeBound::Infinite, 8),
        (3, DegreeBound::Infinite, 9),
        (4, DegreeBound::Finite(3), 8),
        (4, DegreeBound::Finite(4), 9),
    ] {
        let cols_map = columns(m);
        let ncols = cols_map.len();
        let span = quotient::spanning_set(r, e, m, GeneratorMode::Full).unwrap();
        let rows: Vec<SparseRow> = span.iter().map(|sv| to_row(&sv.vector, &cols_map)).collect();
        let exact = linalg::rank_of_rows(rows.clone());
        let mut best_modular = 0usize;
        for p in primes {
            let reduced: Vec<Vec<u64>> = rows
                .iter()
                .map(|row| {
                    let mut dense = vec![0u64; ncols];
                    for (c, v) in row {
                        let rem = num_integer::Integer::mod_floor(v, &BigInt::from(p));
                        dense[*c as usize] = u64::try_from(rem).unwrap();
                    }
                    dense
                })
                .collect();
            let modular = modular_rank(reduced, p);
            assert!(modular <= exact, "mod {p} rank exceeds the exact rank");
            best_modular = best_modular.max(modular);
        }
        assert_eq!(
            best_modular, exact,
            "exact rank not certified mod any prime at ({r},{e},{m})"
        );
    }
}

/// Dense Gaussian elimination over Z/p, p prime.
fn modular_rank(mut mat: Vec<Vec<u64>>, p: u64) -> usize {
    fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        base %= p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = (u128::from(acc) * u128::from(base) % u128::from(p)) as u64;
            }
            base = (u128::from(base) * u128::from(base) % u128::from(p)) as u64;
            exp >>= 1;
        }
        acc
    }
    let rows = mat.len();
    let cols = mat.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| mat[i][col] != 0) else {
            continue;
        };
        mat.swap(rank, pivot);
        let inv = pow_mod(mat[rank][col], p - 2, p);
        for i in (rank + 1)..rows {
            if mat[i][col] == 0 {
                continue;
            }
            let factor = (u128::from(mat[i][col]) * u128::from(inv) % u128::from(p)) as u64;
            for j in col..cols {
                let sub = u128::from(factor) * u128::from(mat[rank][j]) % u128::from(p);
                mat[i][j] = ((u128::from(mat[i][j]) + u128::from(p) - sub) % u128::from(p)) as u64;
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn rank_is_independent_of_generator_order() {
    for (r, e, m) in [
        (3, DegreeBound::Infinite, 6),
        (4, DegreeBound::Finite(3), 7),
        (4, DegreeBound::Finite(4), 8),
    ] {
        let cols = columns(m);
        let span = quotient::spanning_set(r, e, m, GeneratorMode::Full).unwrap();
        let rows: Vec<SparseRow> = span.iter().map(|sv| to_row(&sv.vector, &cols)).collect();
        let baseline = linalg::rank_of_rows(rows.clone());
        let mut reversed = rows.clone();
        reversed.reverse();
        assert_eq!(linalg::rank_of_rows(reversed), baseline);
        // Interleave high-degree and action rows differently.
        let (high, actions): (Vec<_>, Vec<_>) =
            rows.into_iter().zip(&span).partition(|(_, sv)| {
                matches!(sv.provenance, SpanProvenance::HighDegree(_))
            });
        let mut swapped: Vec<SparseRow> =
            actions.into_iter().map(|(row, _)| row).collect();
        swapped.extend(high.into_iter().map(|(row, _)| row));
        assert_eq!(linalg::rank_of_rows(swapped), baseline);
    }
}

// ---------------------------------------------------------------------
// chain vanishing and the degree cutoff
// ---------------------------------------------------------------------

#[test]
fn chain_vanishing_for_nilpotent_witnesses() {
    // r = 2: Hess((x1+ix2)^3)^2 = 0 in two variables.
    let p2 = parse_poly("(x1 + i*x2)^3", 2).unwrap();
    // r = 3: Hess((x1+ix2)^2 x3)^3 = 0 in three variables.
    let p3 = parse_poly("(x1 + i*x2)^2 * x3", 3).unwrap();
    for m in 2..=7u32 {
        for t in enumerate_free(m).unwrap() {
            if t.has_naked_chain(2) {
                assert!(
                    inverse::q_tree(&t, &p2).unwrap().is_zero(),
                    "naked 2-chain tree {} must vanish for the r=2 witness",
                    t.code()
                );
            }
            if t.has_naked_chain(3) {
                assert!(
                    inverse::q_tree(&t, &p3).unwrap().is_zero(),
                    "naked 3-chain tree {} must vanish for the r=3 witness",
                    t.code()
                );
            }
        }
    }
}

#[test]
fn degree_cutoff_kills_high_degree_trees() {
    // If some vertex of t has degree >= e+1 with e = deg P, then
    // Q_{T,P} = 0: the vertex factor is an (e+1)-fold derivative.
    let p = parse_poly("(x1 + i*x2)^2 * x3", 3).unwrap(); // degree 3
    for m in 2..=6u32 {
        for t in enumerate_free(m).unwrap() {
            if t.max_degree() >= 4 {
                assert!(
                    inverse::q_tree(&t, &p).unwrap().is_zero(),
                    "{} has a vertex of degree >= deg P + 1",
                    t.code()
                );
            }
        }
    }
}

#[test]
fn nu_bridge_matches_zhao() {
    // rho_P(nu_m) = Q^(m): the tree route evaluates rho_P on nu_m, the
    // Zhao route never sees trees at all.
    let p = parse_poly("x1^3 + x1*x2^2 - 2*x2^3 + x1*x2*x3 - x3^3", 3).unwrap();
    let zhao = inverse::q_series_zhao(&p, 4).unwrap();
    for m in 1..=4u32 {
        let bridged = inverse::q_tree_vector(&quotient::nu(m).unwrap(), &p).unwrap();
        assert_eq!(&bridged, zhao.q(m), "rho_P(nu_{m})");
    }
}

// ---------------------------------------------------------------------
// randomized properties
// ---------------------------------------------------------------------

/// Random free tree with 2..=max vertices, built from random parent picks
/// and canonicalized.
fn arb_free_tree(max: usize) -> impl Strategy<Value = FreeTree> {
    (2..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<u32>(), n - 1).prop_map(move |parents| {
            let edges: Vec<(u64, u64)> = parents
                .iter()
                .enumerate()
                .map(|(k, &p)| ((k + 2) as u64, (p as usize % (k + 1) + 1) as u64))
                .collect();
            let text = edges
                .iter()
                .map(|(u, v)| format!("{u}-{v}"))
                .collect::<Vec<_>>()
                .join(",");
            FreeTree::parse(&text).unwrap()
        })
    })
}

fn arb_rooted_tree(max: usize) -> impl Strategy<Value = RootedTree> {
    (arb_free_tree(max), any::<u32>()).prop_map(|(t, pick)| {
        let view: LabeledTreeView = t.to_labeled();
        let w = pick as usize % view.vertex_count();
        view.to_rooted(w).unwrap()
    })
}

fn arb_gaussian() -> impl Strategy<Value = GaussianRational> {
    ((-9i64..=9), (1i64..=4), (-9i64..=9), (1i64..=4)).prop_map(|(a, b, c, d)| {
        GaussianRational::new(
            BigRational::new(BigInt::from(a), BigInt::from(b)),
            BigRational::new(BigInt::from(c), BigInt::from(d)),
        )
    })
}

/// Random polynomial in 2 variables with a handful of low-degree terms.
fn arb_poly() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(((0u16..=3), (0u16..=3), arb_gaussian()), 1..5).prop_map(|terms| {
        let mut p = Polynomial::zero(2);
        for (a, b, c) in terms {
            p.add_term(vec![a, b], c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_tree_roundtrips_and_rerooting(t in arb_free_tree(8)) {
        prop_assert_eq!(&FreeTree::parse(t.code()).unwrap(), &t);
        let view = t.to_labeled();
        for w in 0..view.vertex_count() {
            prop_assert_eq!(&view.to_rooted(w).unwrap().forget_root(), &t);
        }
    }

    #[test]
    fn action_grading_mass_and_integrality(
        s in arb_rooted_tree(5),
        t in arb_free_tree(5),
    ) {
        let result = gl::gl_act_basis(&s, &t).unwrap();
        let i = s.vertex_count() - 1;
        let j = t.vertex_count();
        prop_assert_eq!(result.homogeneous_degree(), Some(i + j));
        for (_, c) in result.iter() {
            prop_assert!(c.is_integer());
            prop_assert!(c > &BigRational::zero());
        }
        let r = s.children().len() as u32;
        prop_assert_eq!(
            result.sum_of_coefficients(),
            BigRational::from(BigInt::from(j).pow(r))
        );
    }

    #[test]
    fn action_is_associative(
        a in arb_rooted_tree(5),
        b in arb_rooted_tree(5),
        t in arb_free_tree(5),
    ) {
        let ab = gl::gl_product_basis(&a, &b).unwrap();
        let left = gl::gl_act(&ab, &TreeVector::from_basis(t.clone())).unwrap();
        let bt = gl::gl_act_basis(&b, &t).unwrap();
        let right = gl::gl_act(&gl::RootedVector::from_basis(a.clone()), &bt).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn polynomial_ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.sub(&a), Polynomial::zero(2));
    }

    #[test]
    fn hessians_are_symmetric(p in arb_poly()) {
        prop_assert!(p.hessian().is_symmetric());
    }

    #[test]
    fn real_symmetric_nilpotent_hessian_is_zero(
        coeffs in proptest::collection::vec(-9i64..=9, 10),
        r in 1u32..=3,
    ) {
        // Over the reals a symmetric nilpotent matrix is zero, so a real
        // homogeneous cubic with nilpotent Hessian must have zero Hessian.
        // This is exactly why the witnesses need Q(i).
        let mut p = Polynomial::zero(2);
        let mut idx = 0;
        for a in 0..=3u16 {
            let b = 3 - a;
            p.add_term(vec![a, b], GaussianRational::from_int(coeffs[idx]));
            idx += 1;
        }
        let hess = p.hessian();
        if gltrees::poly::mat_nilpotent(&hess, r) {
            prop_assert!(hess.is_zero());
        }
    }

    #[test]
    fn rank_matches_rational_elimination_oracle(
        entries in proptest::collection::vec(-9i64..=9, 36),
        rows in 1usize..=6,
        cols in 1usize..=6,
    ) {
        let sparse: Vec<SparseRow> = (0..rows)
            .map(|i| {
                (0..cols)
                    .filter_map(|j| {
                        let v = entries[i * 6 + j];
                        (v != 0).then(|| (j as u32, BigInt::from(v)))
                    })
                    .collect()
            })
            .collect();
        let got = linalg::rank_of_rows(sparse);
        // Independent oracle: dense Gaussian elimination over rationals.
        let mut mat: Vec<Vec<BigRational>> = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| BigRational::from(BigInt::from(entries[i * 6 + j])))
                    .collect()
            })
            .collect();
        let mut rank = 0usize;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&i| !mat[i][col].is_zero()) else {
                continue;
            };
            mat.swap(rank, pivot);
            let lead = mat[rank][col].clone();
            for i in (rank + 1)..rows {
                let factor = &mat[i][col] / &lead;
                for j in col..cols {
                    let sub = &factor * &mat[rank][j];
                    mat[i][j] -= sub;
                }
            }
            rank += 1;
        }
        prop_assert_eq!(got, rank);
    }
}
