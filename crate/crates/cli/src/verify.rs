//! Replays the published fixtures: one check per acceptance criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use kappa_core::exactnum::{binomial, odd_double_factorial, rat, rat_int};
use kappa_core::hodgeeval::{
    family_index, lambda_g_base, pairing_against, pairing_matrix, socle_integral, DualGraph,
    PairingFamily, SocleIntegrand, Stratum, Vertex,
};
use kappa_core::partitions::{partitions, Partition};
use kappa_core::powerseries::{alphas, betas, chain_polynomial};
use kappa_core::ringan::{
    betti_polynomial, generated_relations, minimal_generator_relation, relation_rank,
    universality_report, BettiMethod, RelationOptions,
};
use kappa_core::sqcalc::{
    factorial_rat, relation_direct, relation_series, relation_set, richer_relations,
    substitution_count, RicherBudget,
};
use kappa_core::{Integer, KappaPoly, Rational};
use num_bigint::BigInt;
use num_traits::{Pow, Signed};
use serde::Serialize;

type Check = fn(bool) -> Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kp(terms: &[(&[u32], i64)]) -> KappaPoly {
    let mut p = KappaPoly::zero();
    for (parts, c) in terms {
        p.add_term(Partition::new(parts.to_vec()), rat(*c, 1));
    }
    p
}

fn genus_three_relation(_slow: bool) -> Result<(), String> {
    let got = relation_direct(4, 5, 2);
    let want = kp(&[(&[3], -18), (&[2, 1], 2)]);
    ensure(got == want, || format!("got {}", got.to_text()))
}

fn series_fixtures(_slow: bool) -> Result<(), String> {
    let a = alphas(50);
    let b = betas(51);
    let want_a = [rat(1, 1), rat(5, 2), rat(37, 3), rat(353, 4)];
    let want_b = [rat(-1, 1), rat(-2, 1), rat(-10, 1), rat(-74, 1)];
    ensure(a[1..=4] == want_a, || {
        format!("alpha_1..4 = {:?}", &a[1..=4])
    })?;
    ensure(b[1..=4] == want_b, || {
        format!("beta_1..4 = {:?}", &b[1..=4])
    })?;
    for l in 1..=30usize {
        let lhs = &b[l + 1];
        let rhs = rat(-2 * l as i64, 1) * &a[l];
        ensure(*lhs == rhs, || {
            format!("beta_{} != -2*{l}*alpha_{l}", l + 1)
        })?;
    }
    for l in 1..=50usize {
        let bound = rat_int(odd_double_factorial(l as u64));
        ensure(b[l].is_negative(), || format!("beta_{l} >= 0"))?;
        ensure(b[l].abs() <= bound, || format!("|beta_{l}| > (2l)!!"))?;
    }
    Ok(())
}

fn chain_polynomials(_slow: bool) -> Result<(), String> {
    // ascending powers of z
    let displays: [&[i64]; 5] = [&[1], &[0, 1], &[0, 1, 1], &[0, 1, 3, 1], &[0, 1, 7, 6, 1]];
    for (r, want) in displays.iter().enumerate() {
        let got = chain_polynomial(r);
        let want: Vec<Integer> = want.iter().map(|&c| BigInt::from(c)).collect();
        ensure(got == want, || format!("p_{r} = {got:?}"))?;
    }
    Ok(())
}

fn oracle_equivalence(_slow: bool) -> Result<(), String> {
    let mut cells = 0;
    for s in 1..=8i64 {
        for d in 1..=4usize {
            for r in 0..=12u32 {
                let series = relation_series(s, r, d).scaled(&factorial_rat(d));
                let direct = relation_direct(s, r, d);
                ensure(series == direct, || format!("s={s} d={d} r={r}"))?;
                cells += 1;
            }
        }
    }
    ensure(cells == 416, || format!("{cells} cells"))
}

fn term_counts(_slow: bool) -> Result<(), String> {
    for d in 1..=5usize {
        for r in 0..=10u32 {
            let want = BigInt::from(d).pow(r);
            let got = substitution_count(d, r);
            ensure(got == want, || format!("d={d} r={r}: {got}"))?;
        }
    }
    Ok(())
}

const BETTI: [&[usize]; 10] = [
    &[1],
    &[1, 1],
    &[1, 1, 1],
    &[1, 1, 2, 1],
    &[1, 1, 2, 2, 1],
    &[1, 1, 2, 3, 3, 1],
    &[1, 1, 2, 3, 4, 3, 1],
    &[1, 1, 2, 3, 5, 5, 4, 1],
    &[1, 1, 2, 3, 5, 6, 7, 4, 1],
    &[1, 1, 2, 3, 5, 7, 9, 8, 5, 1],
];

fn betti_table(slow: bool) -> Result<(), String> {
    let n_max = if slow { 12 } else { 10 };
    for n in 3..=n_max {
        let want = BETTI[n as usize - 3];
        for method in BettiMethod::ALL {
            let got = betti_polynomial(n, method).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("n={n} {method:?}: {got:?}"))?;
        }
    }
    Ok(())
}

fn genus_five_count(_slow: bool) -> Result<(), String> {
    let opts = RelationOptions {
        d_max: 6,
        richer: Some(RicherBudget::default()),
        ideal_closure: false,
    };
    let rank = relation_rank(8, 6, &opts);
    ensure(partitions(6, None).len() == 11, || "P(6) size".into())?;
    ensure(rank == 7, || format!("rank {rank}"))?;
    let rows: Vec<Partition> = [vec![6], vec![5, 1], vec![4, 2], vec![3, 3]]
        .into_iter()
        .map(Partition::new)
        .collect();
    let strata: Vec<Stratum> = [8u32, 7, 6, 5]
        .iter()
        .map(|&a| {
            let graph = DualGraph::new(
                vec![
                    Vertex::new(0, (1..=a).collect()),
                    Vertex::new(0, (a + 1..=10).collect()),
                ],
                vec![(0, 1)],
            )
            .expect("divisor graph");
            Stratum::plain(format!("D{a}+{}", 10 - a), graph)
        })
        .collect();
    let m = pairing_against(&rows, &strata);
    ensure(m.is_nonsingular(), || {
        format!("divisor matrix singular\n{m}")
    })
}

fn hodge_fixtures(_slow: bool) -> Result<(), String> {
    ensure(lambda_g_base(1) == rat(1, 24), || "b_1".into())?;
    ensure(lambda_g_base(2) == rat(7, 5760), || "b_2".into())?;
    for p in 0..=6u32 {
        let kappa = if p == 0 {
            Partition::empty()
        } else {
            Partition::single(p)
        };
        let v = socle_integral(&SocleIntegrand::new(1, vec![0; p as usize + 1], kappa));
        ensure(v == rat(1, 24), || format!("kappa_{p} lambda_1 = {v}"))?;
    }
    for h in 1..=3u32 {
        for k in 0..=2 * h - 2 {
            let kappa = 2 * h - 2 - k;
            let mut v = if kappa == 0 {
                socle_integral(&SocleIntegrand::new(h, vec![k], Partition::empty()))
            } else {
                socle_integral(&SocleIntegrand::new(h, vec![k], Partition::single(kappa)))
            };
            if kappa == 0 {
                // kappa_0 = 2h - 1 on M_{h,1}
                v *= rat(2 * h as i64 - 1, 1);
            }
            let want = rat_int(binomial(2 * h as u64 - 1, k as u64)) * lambda_g_base(h);
            ensure(v == want, || format!("h={h} k={k}: {v}"))?;
        }
    }
    Ok(())
}

fn triangular(family: PairingFamily, g: u32, n: u32, d: u32) -> Result<(), String> {
    let m = pairing_matrix(family, g, n, d).map_err(|e| e.to_string())?;
    let index = family_index(family, g, n, d).map_err(|e| e.to_string())?;
    let tag = || format!("{family:?} g={g} n={n} d={d}");
    ensure(m.is_upper_triangular_by_length(&index), || {
        format!("{} not triangular", tag())
    })?;
    ensure(m.diagonal_nonzero(), || format!("{} zero diagonal", tag()))?;
    let det = m.determinant();
    ensure(det != Rational::from_integer(0.into()), || {
        format!("{} singular", tag())
    })
}

fn pairing_matrices(_slow: bool) -> Result<(), String> {
    for g in 1..=6 {
        triangular(PairingFamily::Mu, g, 1, g - 1)?;
        triangular(PairingFamily::Nu, g, 2, g)?;
    }
    for g in 2..=6 {
        triangular(PairingFamily::OmegaPrime, g, 0, g - 2)?;
        triangular(PairingFamily::Omega, g, 0, g - 1)?;
    }
    for n in 3..=10 {
        for d in 0..=n - 3 {
            triangular(PairingFamily::Genus0V, 0, n, d)?;
        }
    }
    Ok(())
}

fn vanishing(_slow: bool) -> Result<(), String> {
    for s in 1..=10i64 {
        for m in 1..=(s as u32 + 4) {
            let set = relation_set(s, m, 1);
            let single: Vec<_> = set.relations.iter().filter(|r| r.d == 1).collect();
            if (m as i64) < s {
                ensure(single.is_empty(), || {
                    format!("s={s}: kappa_{m} relation at d = 1")
                })?;
                continue;
            }
            ensure(single.len() == 1, || {
                format!("s={s}: no d = 1 relation for kappa_{m}")
            })?;
            let rel = &single[0].terms;
            let only = rel.num_terms() == 1 && rel.coeff(&Partition::single(m)) != rat(0, 1);
            ensure(only, || format!("s={s}: d = 1 relation {} ", rel.to_text()))?;
        }
    }
    Ok(())
}

fn generator_relations(_slow: bool) -> Result<(), String> {
    for s in 1..=10i64 {
        for l in 1..=8u32 {
            if s - 2 * l as i64 >= 0 {
                continue;
            }
            let found =
                minimal_generator_relation(s, l, 12).map_err(|e| format!("s={s} l={l}: {e}"))?;
            ensure(found.r as i64 > s, || format!("s={s} l={l}: invalid r"))?;
            ensure(
                found.relation.coeff(&Partition::single(l)) != rat(0, 1),
                || format!("s={s} l={l}: zero singleton"),
            )?;
        }
    }
    Ok(())
}

fn universality(_slow: bool) -> Result<(), String> {
    for (g, n) in [(5u32, 0u32), (4, 2), (3, 4), (2, 6), (1, 8), (2, 1), (3, 0)] {
        let s = 2 * g as i64 + n as i64 - 2;
        let n0 = 2 * g + n;
        for degree in 1..=4u32.min(s as u32) {
            let opts = RelationOptions {
                d_max: degree as usize + 2,
                richer: Some(RicherBudget::default()),
                ideal_closure: false,
            };
            let here = serde_json::to_string(&generated_relations(s, degree, &opts)).unwrap();
            let there =
                serde_json::to_string(&generated_relations(n0 as i64 - 2, degree, &opts)).unwrap();
            ensure(here == there, || format!("(g,n)=({g},{n}) degree {degree}"))?;
            let budget = RicherBudget::default();
            let a = serde_json::to_string(&richer_relations(s, n > 0, degree, &budget)).unwrap();
            let b = serde_json::to_string(&richer_relations(s, true, degree, &budget)).unwrap();
            ensure(a == b, || format!("richer (g,n)=({g},{n}) degree {degree}"))?;
        }
    }
    let report = universality_report(5, 0, 6..=6).map_err(|e| e.to_string())?;
    let row = &report.rows[0];
    ensure(row.upper_bound == 4, || {
        format!("upper bound {}", row.upper_bound)
    })?;
    ensure(
        row.known_dimension == Some(3) && row.verdict.starts_with("gap"),
        || format!("verdict {}", row.verdict),
    )
}

const CRITERIA: [(&str, Check); 12] = [
    ("genus-3 relation -18k3 + 2k1k2", genus_three_relation),
    ("alpha/beta fixtures and identities", series_fixtures),
    ("chain polynomials p_0..p_4", chain_polynomials),
    (
        "series relations times d! equal direct ones",
        oracle_equivalence,
    ),
    ("term counts equal d^r", term_counts),
    ("genus-0 Betti table, three methods", betti_table),
    (
        "genus-5 degree-6 rank 7 and divisor matrix",
        genus_five_count,
    ),
    ("lambda_g fixtures", hodge_fixtures),
    (
        "pairing matrices triangular and nonsingular",
        pairing_matrices,
    ),
    ("d = 1 vanishing relations", vanishing),
    ("generator relations found", generator_relations),
    ("universality and the (5,0,6) gap", universality),
];

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub criterion: usize,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub detail: Option<String>,
}

impl Outcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {:>2}: {status}  {} ({:.2}s)",
            self.criterion, self.name, self.seconds
        );
        if let Some(d) = &self.detail {
            line.push_str(": ");
            line.push_str(d);
        }
        line
    }
}

/// Runs every criterion, calling `report` as each one finishes. `slow`
/// extends the Betti table to n = 12.
pub fn run_suite(slow: bool, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    let mut out = Vec::new();
    for (i, (name, check)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| check(slow))).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let outcome = Outcome {
            criterion: i + 1,
            name,
            passed: result.is_ok(),
            seconds: start.elapsed().as_secs_f64(),
            detail: result.err(),
        };
        report(&outcome);
        out.push(outcome);
    }
    out
}
