//! Built-in verification suite: replays the published values and the
//! structural invariants at three sizes.
//!
//! * `quick`: tree invariants on at most 7 vertices;
//! * `paper`: adds every published-value check except the two heaviest
//!   degrees of the (4,4) family;
//! * `extended`: everything, including the degree-13 rank-one quotient
//!   and its nu-membership, and degree 14.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use gltrees::gl;
use gltrees::inverse;
use gltrees::poly::{parse_poly, Polynomial};
use gltrees::quotient::{
    self, DegreeBound, GeneratorMode, QuotientParams, RankOptions,
};
use gltrees::trees::{
    count_rootings_isomorphic, enumerate_free, enumerate_rooted, free_counts, rooted_counts,
    FreeTree, RootedTree,
};

use crate::cert::Certificate;
use crate::{Cli, Failure, SelftestLevel};

type Check = (&'static str, fn() -> Result<(), String>);

const QUICK: &[Check] = &[
    ("rooted-counts-match-polya-recurrence", rooted_counts_small),
    ("free-counts-match-otter-formula", free_counts_small),
    ("cayley-labeled-tree-sums", cayley_sums),
    ("canonical-code-roundtrip", code_roundtrip),
    ("rooting-orbit-counts", rooting_counts),
];

const PAPER: &[Check] = &[
    ("free-counts-published-list", free_counts_published),
    ("gl-action-published-instances", gl_instances),
    ("quotient-3-inf-degrees-1-to-8", quotient_3_inf),
    ("quotient-4-3-degrees-5-to-8", quotient_4_3),
    ("quotient-4-4-degrees-8-to-12", quotient_4_4_low),
    ("witness-hessian-nilpotency", witness_hessian),
    ("witness-gap-inversion", witness_gap),
    ("three-four-vertex-vanishing-identity", prop_identity),
    ("operator-calculus-compatibility", operator_calculus),
];

const EXTENDED: &[Check] = &[
    ("quotient-3-inf-degrees-9-10", quotient_3_inf_high),
    ("quotient-4-4-degree-13-rank-one", quotient_4_4_deg13),
    ("quotient-4-4-degree-14", quotient_4_4_deg14),
    ("series-oracle-equivalence", series_oracles),
];

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct SelftestPayload {
    level: String,
    passed: usize,
    failed: usize,
    checks: Vec<CheckResult>,
}

pub fn run(cli: &Cli, level: SelftestLevel) -> Result<(), Failure> {
    let mut checks: Vec<Check> = QUICK.to_vec();
    if level != SelftestLevel::Quick {
        checks.extend_from_slice(PAPER);
    }
    if level == SelftestLevel::Extended {
        checks.extend_from_slice(EXTENDED);
    }
    let mut results = Vec::with_capacity(checks.len());
    for (name, check) in checks {
        let outcome = check();
        if !cli.json {
            match &outcome {
                Ok(()) => println!("ok   {name}"),
                Err(detail) => println!("FAIL {name}: {detail}"),
            }
        }
        results.push(CheckResult {
            name,
            ok: outcome.is_ok(),
            detail: outcome.err(),
        });
    }
    let failed = results.iter().filter(|r| !r.ok).count();
    let payload = SelftestPayload {
        level: level.to_string(),
        passed: results.len() - failed,
        failed,
        checks: results,
    };
    let cert = Certificate::new("selftest", format!("selftest-{level}"), payload);
    if cli.json {
        println!("{}", cert.to_json());
    } else {
        println!(
            "{} passed, {} failed ({} level)",
            cert.payload.passed, cert.payload.failed, level
        );
    }
    if let Some(dir) = &cli.out {
        let path = cert
            .write(dir)
            .map_err(|e| Failure { code: crate::EXIT_GUARD, message: e.to_string() })?;
        eprintln!("certificate written to {}", path.display());
    }
    if failed > 0 {
        return Err(Failure {
            code: crate::EXIT_VERIFY,
            message: format!("{failed} selftest check(s) failed"),
        });
    }
    Ok(())
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn rooted_counts_small() -> Result<(), String> {
    let oracle = rooted_counts(7);
    for m in 1..=7u32 {
        let enumerated = enumerate_rooted(m).map_err(|e| e.to_string())?.len();
        expect(
            &format!("rooted trees with {m} vertices"),
            BigUint::from(enumerated),
            oracle[m as usize].clone(),
        )?;
    }
    Ok(())
}

fn free_counts_small() -> Result<(), String> {
    let oracle = free_counts(7);
    for m in 1..=7u32 {
        let enumerated = enumerate_free(m).map_err(|e| e.to_string())?.len();
        expect(
            &format!("free trees with {m} vertices"),
            BigUint::from(enumerated),
            oracle[m as usize].clone(),
        )?;
    }
    Ok(())
}

fn factorial(m: u64) -> BigRational {
    let mut f = BigInt::one();
    for k in 2..=m {
        f *= BigInt::from(k);
    }
    BigRational::from(f)
}

fn cayley_sums() -> Result<(), String> {
    // sum over rooted trees of m!/|Aut| = m^{m-1}; over free trees m^{m-2}.
    for m in 1..=7u64 {
        let mf = factorial(m);
        let mut rooted_sum = BigRational::zero();
        for t in enumerate_rooted(m as u32).map_err(|e| e.to_string())? {
            rooted_sum += &mf / BigRational::from(BigInt::from(t.aut_order()));
        }
        expect(
            &format!("labeled rooted trees on {m} vertices"),
            rooted_sum,
            BigRational::from(BigInt::from(m).pow(m as u32 - 1)),
        )?;
        if m >= 2 {
            let mut free_sum = BigRational::zero();
            for t in enumerate_free(m as u32).map_err(|e| e.to_string())? {
                free_sum += &mf / BigRational::from(BigInt::from(t.aut_order()));
            }
            expect(
                &format!("labeled free trees on {m} vertices"),
                free_sum,
                BigRational::from(BigInt::from(m).pow(m as u32 - 2)),
            )?;
        }
    }
    Ok(())
}

fn code_roundtrip() -> Result<(), String> {
    for m in 1..=7u32 {
        for t in enumerate_free(m).map_err(|e| e.to_string())? {
            let back = FreeTree::parse(t.code()).map_err(|e| e.to_string())?;
            expect("free round-trip", back.code().to_string(), t.code().to_string())?;
        }
        for t in enumerate_rooted(m).map_err(|e| e.to_string())? {
            let back = RootedTree::parse(t.code()).map_err(|e| e.to_string())?;
            expect("rooted round-trip", back.code().to_string(), t.code().to_string())?;
        }
    }
    Ok(())
}

fn rooting_counts() -> Result<(), String> {
    for m in 1..=6u32 {
        for tbar in enumerate_free(m).map_err(|e| e.to_string())? {
            let mut total = 0u32;
            for s in enumerate_rooted(m).map_err(|e| e.to_string())? {
                let count = count_rootings_isomorphic(&tbar, &s);
                total += count;
                if count > 0 {
                    expect(
                        "orbit-stabilizer for rootings",
                        BigUint::from(count) * s.aut_order(),
                        tbar.aut_order(),
                    )?;
                }
            }
            expect("every vertex roots somewhere", total, m)?;
        }
    }
    Ok(())
}

fn free_counts_published() -> Result<(), String> {
    let published: [u32; 11] = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235];
    let oracle = free_counts(11);
    for (m, want) in published.iter().enumerate() {
        let m = m as u32 + 1;
        expect(
            &format!("t_{m} from the recurrence"),
            oracle[m as usize].clone(),
            BigUint::from(*want),
        )?;
        let enumerated = enumerate_free(m).map_err(|e| e.to_string())?.len() as u32;
        expect(&format!("t_{m} by enumeration"), enumerated, *want)?;
    }
    Ok(())
}

fn gl_instances() -> Result<(), String> {
    let s = RootedTree::parse("(())").map_err(|e| e.to_string())?;
    let chain3 = FreeTree::parse("1-2,2-3").map_err(|e| e.to_string())?;
    let result = gl::gl_act_basis(&s, &chain3).map_err(|e| e.to_string())?;
    let two = BigRational::from(BigInt::from(2));
    let one = BigRational::one();
    let t1 = FreeTree::parse("1-2,2-3,3-4").map_err(|e| e.to_string())?;
    let t2 = FreeTree::parse("1-2,1-3,1-4").map_err(|e| e.to_string())?;
    expect("S*T coefficient of the 4-chain", result.coeff(&t1), two.clone())?;
    expect("S*T coefficient of the 4-star", result.coeff(&t2), one)?;
    expect("S*T support", result.support_len(), 2)?;
    let chain4 = FreeTree::parse("1-2,2-3,3-4").map_err(|e| e.to_string())?;
    let acted = gl::gl_act_basis(&s, &chain4).map_err(|e| e.to_string())?;
    let a1 = FreeTree::parse("1-2,2-3,3-4,4-5").map_err(|e| e.to_string())?;
    let a2 = FreeTree::parse("1-2,2-3,2-4,4-5").map_err(|e| e.to_string())?;
    expect("S*A coefficient of the 5-chain", acted.coeff(&a1), two.clone())?;
    expect("S*A coefficient of the spider", acted.coeff(&a2), two)?;
    Ok(())
}

fn rank_report(r: u32, e: DegreeBound, m: u32) -> Result<quotient::QuotientReport, String> {
    quotient::graded_rank(
        QuotientParams::new(r, e, m).map_err(|e| e.to_string())?,
        &RankOptions {
            mode: GeneratorMode::Full,
            check_nu: true,
            ..RankOptions::default()
        },
    )
    .map_err(|e| e.to_string())
}

fn quotient_3_inf() -> Result<(), String> {
    expect(
        "dim quotient (3,inf) degree 1",
        rank_report(3, DegreeBound::Infinite, 1)?.dim_quotient,
        1,
    )?;
    expect(
        "dim quotient (3,inf) degree 2",
        rank_report(3, DegreeBound::Infinite, 2)?.dim_quotient,
        1,
    )?;
    for m in 3..=8 {
        let rep = rank_report(3, DegreeBound::Infinite, m)?;
        expect(&format!("dim quotient (3,inf) degree {m}"), rep.dim_quotient, 0)?;
        expect(
            &format!("nu_{m} membership (3,inf)"),
            rep.nu_in_submodule,
            Some(true),
        )?;
    }
    Ok(())
}

fn quotient_4_3() -> Result<(), String> {
    for m in 5..=8 {
        let rep = rank_report(4, DegreeBound::Finite(3), m)?;
        expect(&format!("dim quotient (4,3) degree {m}"), rep.dim_quotient, 0)?;
        expect(
            &format!("nu_{m} membership (4,3)"),
            rep.nu_in_submodule,
            Some(true),
        )?;
    }
    Ok(())
}

fn quotient_4_4_low() -> Result<(), String> {
    for m in 8..=12 {
        let rep = rank_report(4, DegreeBound::Finite(4), m)?;
        expect(&format!("dim quotient (4,4) degree {m}"), rep.dim_quotient, 0)?;
        expect(
            &format!("nu_{m} membership (4,4)"),
            rep.nu_in_submodule,
            Some(true),
        )?;
    }
    Ok(())
}

fn quotient_3_inf_high() -> Result<(), String> {
    for m in 9..=10 {
        let rep = rank_report(3, DegreeBound::Infinite, m)?;
        expect(&format!("dim quotient (3,inf) degree {m}"), rep.dim_quotient, 0)?;
    }
    Ok(())
}

fn quotient_4_4_deg13() -> Result<(), String> {
    let rep = rank_report(4, DegreeBound::Finite(4), 13)?;
    expect("dim quotient (4,4) degree 13", rep.dim_quotient, 1)?;
    expect("nu_13 membership (4,4)", rep.nu_in_submodule, Some(true))?;
    Ok(())
}

fn quotient_4_4_deg14() -> Result<(), String> {
    let rep = rank_report(4, DegreeBound::Finite(4), 14)?;
    expect("dim quotient (4,4) degree 14", rep.dim_quotient, 0)?;
    expect("nu_14 membership (4,4)", rep.nu_in_submodule, Some(true))?;
    Ok(())
}

fn witness() -> Result<Polynomial, String> {
    parse_poly("(x1 + i*x2)^2 * x3", 3).map_err(|e| e.to_string())
}

fn witness_hessian() -> Result<(), String> {
    let p = witness()?;
    let hess = p.hessian();
    expect("Hessian symmetry", hess.is_symmetric(), true)?;
    expect("Hess(P)^3 = 0", gltrees::poly::mat_nilpotent(&hess, 3), true)?;
    expect("Hess(P)^2 != 0", gltrees::poly::mat_nilpotent(&hess, 2), false)?;
    Ok(())
}

fn witness_gap() -> Result<(), String> {
    let p = witness()?;
    let g = inverse::gap_invert(&p, 2)
        .map_err(|e| e.to_string())?
        .ok_or("gap window did not vanish")?;
    let degree = g
        .components()
        .iter()
        .filter_map(Polynomial::total_degree)
        .max()
        .unwrap_or(0);
    if degree > 5 {
        return Err(format!("inverse degree {degree} exceeds 2d-1 = 5"));
    }
    let f = gltrees::poly::PolyMap::identity(3)
        .and_then(|id| id.add(&p.gradient().neg()))
        .map_err(|e| e.to_string())?;
    expect(
        "F o G = G o F = X",
        inverse::verify_inverse(&f, &g, 25).map_err(|e| e.to_string())?,
        true,
    )?;
    let series = inverse::q_series_zhao(&p, 4).map_err(|e| e.to_string())?;
    let q2_expected = parse_poly("1/2 * (x1 + i*x2)^4", 3).map_err(|e| e.to_string())?;
    expect("Q^(2) = (x1+ix2)^4 / 2", series.q(2) == &q2_expected, true)?;
    expect("Q^(3) = 0", series.q(3).is_zero(), true)?;
    expect("Q^(4) = 0", series.q(4).is_zero(), true)?;
    Ok(())
}

fn prop_identity() -> Result<(), String> {
    // 2 Q_{T1,P} + Q_{T2,P} = 0 for the witness, and the same combination
    // equals rho_P(S * 3-chain) for a generic cubic.
    let p = witness()?;
    let t1 = FreeTree::parse("1-2,2-3,3-4").map_err(|e| e.to_string())?;
    let t2 = FreeTree::parse("1-2,1-3,1-4").map_err(|e| e.to_string())?;
    let q1 = inverse::q_tree(&t1, &p).map_err(|e| e.to_string())?;
    let q2 = inverse::q_tree(&t2, &p).map_err(|e| e.to_string())?;
    let two = gltrees::poly::GaussianRational::from_int(2);
    expect(
        "2 Q_{T1,P} + Q_{T2,P} = 0",
        q1.scale(&two).add(&q2).is_zero(),
        true,
    )?;
    let generic = parse_poly("x1^3 + x1*x2^2 - x2^3 + x1*x2*x3 + x3^3", 3)
        .map_err(|e| e.to_string())?;
    let s = RootedTree::parse("(())").map_err(|e| e.to_string())?;
    let chain3 = FreeTree::parse("1-2,2-3").map_err(|e| e.to_string())?;
    let lhs = inverse::apply_dop(
        &inverse::dop_tree(&s, &generic).map_err(|e| e.to_string())?,
        &inverse::q_tree(&chain3, &generic).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let rhs = inverse::q_tree(&t1, &generic)
        .map_err(|e| e.to_string())?
        .scale(&two)
        .add(&inverse::q_tree(&t2, &generic).map_err(|e| e.to_string())?);
    expect("operator route equals 2Q_{T1}+Q_{T2}", lhs == rhs, true)
}

fn operator_calculus() -> Result<(), String> {
    let p = parse_poly("x1^3 - 2*x2^3 + x1*x2*x3 + x3^3 + x1*x3^2", 3)
        .map_err(|e| e.to_string())?;
    let q = parse_poly("x1^2*x2 - x3^2 + x2*x3", 3).map_err(|e| e.to_string())?;
    let rooted3 = enumerate_rooted(3).map_err(|e| e.to_string())?;
    for s in &rooted3 {
        for t in &rooted3 {
            let product = gl::gl_product_basis(s, t).map_err(|e| e.to_string())?;
            let lhs = inverse::apply_dop(
                &inverse::dop_tree_vector(&product, &p).map_err(|e| e.to_string())?,
                &q,
            )
            .map_err(|e| e.to_string())?;
            let inner = inverse::apply_dop(
                &inverse::dop_tree(t, &p).map_err(|e| e.to_string())?,
                &q,
            )
            .map_err(|e| e.to_string())?;
            let rhs = inverse::apply_dop(
                &inverse::dop_tree(s, &p).map_err(|e| e.to_string())?,
                &inner,
            )
            .map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("ring homomorphism fails at {} * {}", s.code(), t.code()));
            }
        }
    }
    for s in &rooted3 {
        for t in enumerate_free(3).map_err(|e| e.to_string())? {
            let acted = gl::gl_act_basis(s, &t).map_err(|e| e.to_string())?;
            let lhs = inverse::q_tree_vector(&acted, &p).map_err(|e| e.to_string())?;
            let rhs = inverse::apply_dop(
                &inverse::dop_tree(s, &p).map_err(|e| e.to_string())?,
                &inverse::q_tree(&t, &p).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!(
                    "module compatibility fails at {} acting on {}",
                    s.code(),
                    t.code()
                ));
            }
        }
    }
    Ok(())
}

/// Deterministic dense cubic in 3 variables from a linear-congruential
/// stream of small rationals.
fn seeded_cubic(seed: u64) -> Polynomial {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        state >> 33
    };
    let mut p = Polynomial::zero(3);
    for a in 0..=3u16 {
        for b in 0..=(3 - a) {
            let c = 3 - a - b;
            let numer = (next() % 19) as i64 - 9;
            let denom = (next() % 4) as i64 + 1;
            p.add_term(
                vec![a, b, c],
                gltrees::poly::GaussianRational::from_rational(BigRational::new(
                    BigInt::from(numer),
                    BigInt::from(denom),
                )),
            );
        }
    }
    // Keep it honestly cubic even if the stream hands us zeros everywhere.
    if p.homogeneous_degree() != Some(3) {
        p.add_term(vec![3, 0, 0], gltrees::poly::GaussianRational::one());
    }
    p
}

fn series_oracles() -> Result<(), String> {
    for seed in [11u64, 29] {
        let p = seeded_cubic(seed);
        let tree = inverse::q_series_tree(&p, 5).map_err(|e| e.to_string())?;
        let zhao = inverse::q_series_zhao(&p, 5).map_err(|e| e.to_string())?;
        for m in 1..=5 {
            if tree.q(m) != zhao.q(m) {
                return Err(format!("seed {seed}: tree and Zhao disagree on Q^({m})"));
            }
        }
        let ns = inverse::n_series_bcw(&p.gradient(), 4).map_err(|e| e.to_string())?;
        for m in 1..=4u32 {
            if tree.n_map(m) != &ns[(m - 1) as usize] {
                return Err(format!("seed {seed}: grad Q^({m}) differs from BCW N^({m})"));
            }
        }
    }
    Ok(())
}
