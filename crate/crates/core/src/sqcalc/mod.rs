//! Relation generator: Chern classes of `A_d^* - B_d` on the space of curves
//! with `d` weighted marks, their push-forwards to kappa polynomials, the
//! generating-series route to the same relations, and the richer relations
//! carrying universal-curve factors.
//!
//! Everything here depends on `(g, n)` only through `s = 2g - 2 + n`, which
//! is substituted for `kappa_0`. The degree-`r`, `d`-mark relation is valid
//! (vanishes in the kappa ring) exactly when `r > s`.

mod chern;
mod curve;
mod diag;
mod kappa;
mod symmetric;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use chern::{
    chern_class_from_connected, connected_count_direct, expand_chern_class, substitution_count,
};
pub use curve::{pushforward_curve_class, CurveClass};
pub use diag::{diag_multiply, Block, DiagClass, DiagMonomial, MAX_MARKS};
pub use kappa::KappaPoly;
pub use symmetric::pushforward_chern_product;

use crate::error::{Error, Result};
use crate::exactnum::{factorial, rat_int, Rational};
use crate::partitions::Partition;
use crate::powerseries::connected_table;

/// Push-forward forgetting the weighted marks: a block with exponent `e`
/// becomes `kappa_{e-1}`; `e = 0` kills the term and `kappa_0` becomes `s`.
pub fn pushforward_to_kappa(c: &DiagClass, s: i64) -> KappaPoly {
    let s_rat = rat_int(BigInt::from(s));
    let mut out = KappaPoly::zero();
    for (m, coeff) in c.iter() {
        let mut scalar = coeff.clone();
        let mut parts = Vec::with_capacity(m.blocks().len());
        let mut dead = false;
        for b in m.blocks() {
            match b.exp {
                0 => {
                    dead = true;
                    break;
                }
                1 => scalar *= &s_rat,
                e => parts.push(e - 1),
            }
        }
        if !dead {
            out.add_term(Partition::new(parts), scalar);
        }
    }
    out
}

/// Push-forward of the degree-`r` Chern class over `d` weighted marks,
/// obtained from the full class-level expansion.
pub fn relation_direct(s: i64, r: u32, d: usize) -> KappaPoly {
    assert!(d >= 1, "at least one weighted mark");
    let c = expand_chern_class(d, r).homogeneous(r);
    pushforward_to_kappa(&c, s)
}

/// Table of `t^r z^d` coefficients of
/// `R(t, z) = exp(sum_{d >= 1} sum_{r >= d} (-1)^{d-1} (C_r^d / d!) kappa_{r-d} t^r z^d)`.
#[derive(Debug)]
pub struct RelationSeries {
    s: i64,
    r_max: usize,
    d_max: usize,
    coeffs: Vec<KappaPoly>,
}

impl RelationSeries {
    pub fn new(s: i64, r_max: usize, d_max: usize) -> Self {
        let table = connected_table(r_max, d_max);
        let idx = |r: usize, d: usize| r * (d_max + 1) + d;
        // exponent terms X_{r,d}
        let mut x = vec![KappaPoly::zero(); (r_max + 1) * (d_max + 1)];
        for d in 1..=d_max {
            for r in d..=r_max {
                let c_hat = table.get(r, d).1;
                if c_hat.is_zero() {
                    continue;
                }
                let signed = if d % 2 == 1 { c_hat } else { -c_hat };
                x[idx(r, d)] = KappaPoly::kappa((r - d) as i64, s).scaled(&signed);
            }
        }
        // z d/dz g = g * z d/dz X
        let mut g = vec![KappaPoly::zero(); (r_max + 1) * (d_max + 1)];
        g[idx(0, 0)] = KappaPoly::constant(Rational::one());
        for d in 1..=d_max {
            for r in 0..=r_max {
                let mut acc = KappaPoly::zero();
                for j in 1..=d {
                    for i in j..=r {
                        let xt = &x[idx(i, j)];
                        if xt.is_zero() {
                            continue;
                        }
                        let rest = &g[idx(r - i, d - j)];
                        if rest.is_zero() {
                            continue;
                        }
                        acc.add_scaled(&xt.mul(rest), &rat_int(BigInt::from(j)));
                    }
                }
                g[idx(r, d)] = acc.scaled(&Rational::new(BigInt::one(), BigInt::from(d)));
            }
        }
        RelationSeries {
            s,
            r_max,
            d_max,
            coeffs: g,
        }
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn covers(&self, r: usize, d: usize) -> bool {
        r <= self.r_max && d <= self.d_max
    }

    pub fn get(&self, r: usize, d: usize) -> &KappaPoly {
        assert!(self.covers(r, d), "({r}, {d}) outside the series box");
        &self.coeffs[r * (self.d_max + 1) + d]
    }
}

static SERIES: OnceLock<Mutex<HashMap<i64, Arc<RelationSeries>>>> = OnceLock::new();

/// Shared relation series for `s` covering at least `(r, d)`.
pub fn relation_series_table(s: i64, r: usize, d: usize) -> Arc<RelationSeries> {
    let cache = SERIES.get_or_init(|| Mutex::new(HashMap::new()));
    let existing = cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get(&s)
        .cloned();
    if let Some(t) = &existing {
        if t.covers(r, d) {
            return Arc::clone(t);
        }
    }
    let (r0, d0) = existing.map_or((0, 0), |t| (t.r_max, t.d_max));
    let table = Arc::new(RelationSeries::new(s, r.max(r0), d.max(d0)));
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(s, Arc::clone(&table));
    table
}

/// `t^r z^d` coefficient of the relation series; equals
/// `relation_direct(s, r, d) / d!`.
pub fn relation_series(s: i64, r: u32, d: usize) -> KappaPoly {
    assert!(d >= 1, "at least one weighted mark");
    relation_series_table(s, r as usize, d)
        .get(r as usize, d)
        .clone()
}

/// One generated relation, homogeneous of degree `r - d` (plus the degree
/// of any universal-curve factors).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Relation {
    pub r: u32,
    pub d: usize,
    pub terms: KappaPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationSet {
    pub s: i64,
    pub degree: u32,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    /// Every member is a genuine relation (`r > s`).
    pub fn all_valid(&self) -> bool {
        self.relations.iter().all(|rel| rel.r as i64 > self.s)
    }

    pub fn polys(&self) -> impl Iterator<Item = &KappaPoly> {
        self.relations.iter().map(|r| &r.terms)
    }
}

/// All valid series relations of the given kappa degree with
/// `1 <= d <= d_max`.
pub fn relation_set(s: i64, degree: u32, d_max: usize) -> RelationSet {
    let relations = (1..=d_max)
        .filter(|&d| degree as i64 + d as i64 > s)
        .map(|d| {
            let r = degree + d as u32;
            Relation {
                r,
                d,
                terms: relation_series(s, r, d),
            }
        })
        .collect();
    RelationSet {
        s,
        degree,
        relations,
    }
}

/// A universal-curve factor `pi_*(s^a omega^b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CurveFactor {
    pub a: u32,
    pub b: u32,
}

/// `eps_*(prod_i pi_*(s^{a_i} omega^{b_i}) * c_{2g-2+k}(A_d^* - B_d))` with
/// `2g - 2 = s - n`. Vanishes in the kappa ring for `k > n`.
pub fn richer_relation(
    s: i64,
    n: u32,
    k: u32,
    factors: &[CurveFactor],
    d: usize,
) -> Result<KappaPoly> {
    if k <= n {
        return Err(Error::InvalidRelationDegree {
            s,
            r: s - n as i64 + k as i64,
        });
    }
    let two_g_minus_2 = s - n as i64;
    if two_g_minus_2 < -2 || two_g_minus_2 % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "s - n = {two_g_minus_2} is not 2g - 2 for a genus g >= 0"
        )));
    }
    let r = two_g_minus_2 + k as i64;
    if r < 0 {
        return Err(Error::InvalidRelationDegree { s, r });
    }
    richer_relation_at(s, r as u32, factors, n > 0, d)
}

/// Richer relation with Chern degree `r` given directly; `pointed` rejects
/// omega-only factors. Valid when `r > s`.
pub fn richer_relation_at(
    s: i64,
    r: u32,
    factors: &[CurveFactor],
    pointed: bool,
    d: usize,
) -> Result<KappaPoly> {
    let (f, kappa_factor) = factor_class(s, factors, pointed, d)?;
    Ok(pushforward_chern_product(s, r, &f).mul(&kappa_factor))
}

/// Same relation computed by multiplying out the full Chern class.
pub fn richer_relation_expanded(
    s: i64,
    r: u32,
    factors: &[CurveFactor],
    pointed: bool,
    d: usize,
) -> Result<KappaPoly> {
    let (f, kappa_factor) = factor_class(s, factors, pointed, d)?;
    let class = chern_class(d, r).mul(&f)?;
    Ok(pushforward_to_kappa(&class, s).mul(&kappa_factor))
}

// Product of the factor push-forwards, split into its diagonal part and the
// pulled-back kappa part.
fn factor_class(
    s: i64,
    factors: &[CurveFactor],
    pointed: bool,
    d: usize,
) -> Result<(DiagClass, KappaPoly)> {
    let n = u32::from(pointed);
    let mut class = DiagClass::unit(d);
    let mut kappa_factor = KappaPoly::constant(Rational::one());
    for f in factors {
        let pushed = pushforward_curve_class(f.a, f.b, d, n)?;
        class = class.mul(&pushed.base)?;
        if let Some(idx) = pushed.kappa_index {
            kappa_factor = kappa_factor.mul(&KappaPoly::kappa(idx as i64, s));
        }
    }
    Ok((class, kappa_factor))
}

/// Degree-`r` Chern class over `d` marks: the direct expansion for small
/// cases, otherwise the block assembly from connected counts.
pub fn chern_class(d: usize, r: u32) -> DiagClass {
    if d <= 4 && r <= 10 {
        expand_chern_class(d, r).homogeneous(r)
    } else {
        chern_class_from_connected(d, r)
    }
}

/// Kappa degree of a richer relation: `sum (a_i + b_i - 1) + r - d`.
pub fn richer_degree(r: i64, d: usize, factors: &[CurveFactor]) -> i64 {
    factors
        .iter()
        .map(|f| CurveClass::degree_shift(f.a, f.b))
        .sum::<i64>()
        + r
        - d as i64
}

/// Budget for the richer-relation search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RicherBudget {
    /// Allowed section powers `a` in a factor.
    pub a_values: Vec<u32>,
    /// Largest `omega` power `b`; `None` means the target degree.
    pub b_max: Option<u32>,
    pub max_factors: usize,
    /// Largest number of weighted marks; `None` means the target degree.
    pub d_max: Option<usize>,
}

impl Default for RicherBudget {
    fn default() -> Self {
        RicherBudget {
            a_values: vec![1, 2, 3],
            b_max: None,
            max_factors: 2,
            d_max: None,
        }
    }
}

/// Multisets of factors drawn from the budget, including the empty one.
pub fn factor_combinations(budget: &RicherBudget, degree: u32) -> Vec<Vec<CurveFactor>> {
    let b_max = budget.b_max.unwrap_or(degree);
    let mut singles = Vec::new();
    for &a in &budget.a_values {
        for b in 0..=b_max {
            singles.push(CurveFactor { a, b });
        }
    }
    singles.sort();
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Vec<CurveFactor>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..budget.max_factors {
        let mut next = Vec::new();
        for (combo, start) in &frontier {
            for (i, f) in singles.iter().enumerate().skip(*start) {
                let mut c = combo.clone();
                c.push(*f);
                out.push(c.clone());
                next.push((c, i));
            }
        }
        frontier = next;
    }
    out
}

/// All valid richer relations of the given kappa degree within the budget;
/// `pointed` (any `n > 0`) drops omega-only factors. Each entry records
/// `(d, r, factors, relation)`.
pub fn richer_relations(
    s: i64,
    pointed: bool,
    degree: u32,
    budget: &RicherBudget,
) -> Vec<(usize, u32, Vec<CurveFactor>, KappaPoly)> {
    let d_max = budget.d_max.unwrap_or(degree as usize);
    let mut jobs = Vec::new();
    for combo in factor_combinations(budget, degree) {
        if pointed && combo.iter().any(|f| f.a == 0) {
            continue;
        }
        let shift: i64 = combo
            .iter()
            .map(|f| CurveClass::degree_shift(f.a, f.b))
            .sum();
        for d in 1..=d_max {
            let r = degree as i64 + d as i64 - shift;
            if r <= s {
                continue;
            }
            jobs.push((d, r as u32, combo.clone()));
        }
    }
    jobs.into_par_iter()
        .map(|(d, r, combo)| {
            let rel = richer_relation_at(s, r, &combo, pointed, d)
                .expect("omega-only factors filtered above");
            (d, r, combo, rel)
        })
        .collect()
}

/// `d!` as a rational.
pub fn factorial_rat(d: usize) -> Rational {
    rat_int(factorial(d as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn genus_three_relation() -> KappaPoly {
        let mut k = KappaPoly::zero();
        k.add_term(p(&[3]), rat(-18, 1));
        k.add_term(p(&[2, 1]), rat(2, 1));
        k
    }

    #[test]
    fn genus_three_direct() {
        assert_eq!(relation_direct(4, 5, 2), genus_three_relation());
    }

    #[test]
    fn genus_three_series() {
        assert_eq!(
            relation_series(4, 5, 2),
            genus_three_relation().scaled(&rat(1, 2))
        );
    }

    #[test]
    fn single_mark_relations() {
        for s in 0..6 {
            for r in 1..10u32 {
                let expected = KappaPoly::kappa(r as i64 - 1, s);
                assert_eq!(relation_direct(s, r, 1), expected);
                assert_eq!(relation_series(s, r, 1), expected);
            }
        }
    }

    #[test]
    fn unit_pushes_to_zero() {
        for d in 1..=4 {
            assert!(relation_direct(3, 0, d).is_zero());
        }
    }

    #[test]
    fn below_diagonal_series_vanish() {
        for d in 2..=6 {
            for r in 0..d as u32 {
                assert!(relation_series(5, r, d).is_zero(), "r={r} d={d}");
            }
        }
    }

    #[test]
    fn series_matches_direct_small() {
        for s in 1..=8 {
            for d in 1..=3usize {
                for r in 0..=8u32 {
                    let direct = relation_direct(s, r, d);
                    let series = relation_series(s, r, d).scaled(&factorial_rat(d));
                    assert_eq!(series, direct, "s={s} r={r} d={d}");
                }
            }
        }
    }

    #[test]
    fn pushforward_examples() {
        let m = DiagClass::monomial(DiagMonomial::psi(1, 0, 4), rat(1, 1));
        assert_eq!(pushforward_to_kappa(&m, 7), KappaPoly::kappa(3, 7));
        let dead = DiagClass::monomial(DiagMonomial::psi(2, 1, 5), rat(1, 1));
        assert!(pushforward_to_kappa(&dead, 7).is_zero());
        let merged = DiagClass::monomial(
            DiagMonomial::from_blocks(vec![Block {
                marks: 0b11,
                exp: 4,
            }]),
            rat(1, 1),
        );
        assert_eq!(pushforward_to_kappa(&merged, 7), KappaPoly::kappa(3, 7));
    }

    #[test]
    fn relation_set_examples() {
        let set = relation_set(4, 3, 2);
        assert!(set.all_valid());
        assert!(set
            .polys()
            .any(|k| *k == genus_three_relation().scaled(&rat(1, 2))));
        assert!(relation_set(6, 2, 4).relations.is_empty());
        for m in 2..8 {
            let set = relation_set(2, m, 1);
            assert_eq!(set.relations.len(), 1);
            assert_eq!(set.relations[0].terms, KappaPoly::kappa(m as i64, 2));
        }
    }

    #[test]
    fn richer_without_factors_is_direct() {
        // s = 4, n = 0, k = 1 -> r = 5
        assert_eq!(
            richer_relation(4, 0, 1, &[], 2).unwrap(),
            genus_three_relation()
        );
        assert!(richer_relation(4, 2, 2, &[], 2).is_err());
    }

    #[test]
    fn richer_routes_agree() {
        let pairs = [
            vec![CurveFactor { a: 1, b: 1 }, CurveFactor { a: 2, b: 0 }],
            vec![CurveFactor { a: 3, b: 1 }],
            vec![CurveFactor { a: 0, b: 3 }, CurveFactor { a: 2, b: 2 }],
        ];
        for factors in &pairs {
            for d in 1..=4 {
                for r in 5..=8 {
                    let fast = richer_relation_at(4, r, factors, false, d).unwrap();
                    let slow = richer_relation_expanded(4, r, factors, false, d).unwrap();
                    assert_eq!(fast, slow, "{factors:?} d={d} r={r}");
                }
            }
        }
    }

    #[test]
    fn richer_degree_bookkeeping() {
        let factors = [CurveFactor { a: 2, b: 1 }, CurveFactor { a: 1, b: 2 }];
        let rel = richer_relation(6, 0, 1, &factors, 3).unwrap();
        let expected = richer_degree(7, 3, &factors);
        if let Some(w) = rel.homogeneous_degree() {
            assert_eq!(w as i64, expected);
        }
    }

    #[test]
    fn factor_combination_counts() {
        let budget = RicherBudget {
            a_values: vec![1, 2],
            b_max: Some(1),
            max_factors: 2,
            d_max: None,
        };
        // 4 singles -> 1 empty + 4 + 10 pairs
        assert_eq!(factor_combinations(&budget, 3).len(), 15);
    }
}
