//! Total Chern class of `A_d^* - B_d` on the space of curves with `d`
//! weighted marks:
//!
//! ```text
//! c(A_d^* - B_d) = prod_i (1 + Delta_i) / (1 - psi^_i + Delta_i),
//! Delta_i = D_{1,i} + ... + D_{i-1,i}
//! ```

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::exactnum::{Integer, Rational};
use crate::partitions::set_partitions;
use crate::powerseries::connected_coeff;

use super::diag::{Block, DiagClass, DiagMonomial};

type Cache = Mutex<HashMap<usize, Arc<(u32, DiagClass)>>>;

static DIRECT: std::sync::OnceLock<Cache> = std::sync::OnceLock::new();

/// Full expansion through total degree `r_max`, multiplying the factors out
/// with `(1 + x) / (1 - y + x) = 1 + sum_{k >= 0} y (y - x)^k` and reducing
/// every product with the diagonal rules.
pub fn expand_chern_class(d: usize, r_max: u32) -> DiagClass {
    assert!(d >= 1, "at least one weighted mark");
    let cache = DIRECT.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&d) {
        if hit.0 >= r_max {
            return truncate(&hit.1, r_max);
        }
    }
    let full = expand_uncached(d, r_max);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    let keep = guard.get(&d).is_none_or(|hit| hit.0 < r_max);
    if keep {
        guard.insert(d, Arc::new((r_max, full.clone())));
    }
    full
}

fn truncate(c: &DiagClass, r_max: u32) -> DiagClass {
    let mut out = DiagClass::zero(c.marks());
    for (m, k) in c.iter() {
        if m.degree() <= r_max {
            out.add_term(m.clone(), k.clone());
        }
    }
    out
}

fn expand_uncached(d: usize, r_max: u32) -> DiagClass {
    let mut total = DiagClass::unit(d);
    for i in 0..d {
        let y = DiagClass::psi(d, i);
        let mut y_minus_x = y.clone();
        for j in 0..i {
            y_minus_x = y_minus_x.sub(&DiagClass::diagonal(d, j, i));
        }
        let mut factor = DiagClass::unit(d);
        let mut power = DiagClass::unit(d);
        for _ in 0..r_max {
            let term = y.mul_truncated(&power, Some(r_max)).expect("same marks");
            if term.is_zero() {
                break;
            }
            factor.add_assign(&term);
            power = power
                .mul_truncated(&y_minus_x, Some(r_max))
                .expect("same marks");
        }
        total = total
            .mul_truncated(&factor, Some(r_max))
            .expect("same marks");
    }
    total
}

/// Degree-`r` part of the Chern class assembled block by block from the
/// connected counts: the normal-form coefficient of a monomial is
/// `prod_B (-1)^{|B|-1} C^{|B|}_{e_B + |B| - 1}`.
///
/// This is the exponential formula at class level; tests compare it with
/// [`expand_chern_class`].
pub fn chern_class_from_connected(d: usize, r: u32) -> DiagClass {
    assert!(d >= 1, "at least one weighted mark");
    let mut out = DiagClass::zero(d);
    for sp in set_partitions(d) {
        let codim: u32 = sp.blocks().iter().map(|b| b.len() as u32 - 1).sum();
        if codim > r {
            continue;
        }
        let masks: Vec<u32> = sp
            .blocks()
            .iter()
            .map(|b| b.iter().fold(0u32, |acc, j| acc | (1 << j)))
            .collect();
        let sizes: Vec<usize> = sp.blocks().iter().map(Vec::len).collect();
        let mut exps = vec![0u32; masks.len()];
        distribute(r - codim, 0, &mut exps, &mut |exps| {
            let mut coeff = Rational::one();
            for (k, &e) in exps.iter().enumerate() {
                let m = sizes[k];
                let c = connected_coeff(e as usize + m - 1, m).0;
                if c.is_zero() {
                    return;
                }
                coeff *= if m % 2 == 1 { c } else { -c };
            }
            let blocks = masks
                .iter()
                .zip(exps.iter())
                .map(|(&marks, &exp)| Block { marks, exp })
                .collect();
            out.add_term(DiagMonomial::from_blocks(blocks), coeff);
        });
    }
    out
}

// Calls `f` on every way of writing `total` as an ordered sum over `exps`.
fn distribute(total: u32, k: usize, exps: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if k + 1 == exps.len() {
        exps[k] = total;
        f(exps);
        return;
    }
    if exps.is_empty() {
        if total == 0 {
            f(exps);
        }
        return;
    }
    for e in 0..=total {
        exps[k] = e;
        distribute(total - e, k + 1, exps, f);
    }
}

/// Degree-`r` part of the Chern class evaluated at `psi^_i = 1, D_ij = -1`;
/// counts the terms of the expansion and equals `d^r`.
pub fn substitution_count(d: usize, r: u32) -> Integer {
    let c = expand_chern_class(d, r).homogeneous(r);
    let v = c.substitute_counting();
    assert!(v.is_integer());
    v.to_integer()
}

/// Contribution of the connected monomials to [`substitution_count`],
/// i.e. `C_r^d` computed directly from the expansion.
pub fn connected_count_direct(r: u32, d: usize) -> Integer {
    let c = expand_chern_class(d, r).homogeneous(r);
    let v = c.substitute_connected();
    assert!(v.is_integer());
    v.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use num_bigint::BigInt;
    use num_traits::Pow;

    fn block(marks: &[usize], exp: u32) -> Block {
        Block {
            marks: marks.iter().fold(0, |acc, j| acc | (1 << j)),
            exp,
        }
    }

    #[test]
    fn one_mark_is_pure_psi() {
        let c = expand_chern_class(1, 8);
        for r in 0..=8 {
            let h = c.homogeneous(r);
            assert_eq!(h.len(), 1);
            assert_eq!(h.coeff(&DiagMonomial::psi(1, 0, r)), rat(1, 1));
        }
    }

    #[test]
    fn two_marks_degree_five() {
        let c5 = expand_chern_class(2, 5).homogeneous(5);
        for r1 in 0..=5 {
            let m = DiagMonomial::from_blocks(vec![block(&[0], r1), block(&[1], 5 - r1)]);
            assert_eq!(c5.coeff(&m), rat(1, 1));
        }
        let merged = DiagMonomial::from_blocks(vec![block(&[0, 1], 4)]);
        assert_eq!(c5.coeff(&merged), rat(-26, 1));
        assert_eq!(c5.len(), 7);
    }

    #[test]
    fn degree_zero_is_unit() {
        for d in 1..=5 {
            assert_eq!(expand_chern_class(d, 3).homogeneous(0), DiagClass::unit(d));
        }
    }

    #[test]
    fn term_counts_are_powers() {
        for d in 1..=4usize {
            for r in 0..=8u32 {
                assert_eq!(
                    substitution_count(d, r),
                    BigInt::from(d).pow(r),
                    "d={d} r={r}"
                );
            }
        }
    }

    #[test]
    fn connected_counts() {
        assert_eq!(substitution_count(2, 5), int(32));
        assert_eq!(connected_count_direct(5, 2), int(26));
        assert_eq!(connected_count_direct(7, 1), int(1));
        assert_eq!(connected_count_direct(2, 3), int(0));
        for d in 1..=4usize {
            for r in 0..=8u32 {
                let direct = connected_count_direct(r, d);
                assert_eq!(
                    Rational::from_integer(direct),
                    connected_coeff(r as usize, d).0
                );
            }
        }
    }

    #[test]
    fn block_assembly_matches_expansion() {
        for d in 1..=4usize {
            let full = expand_chern_class(d, 7);
            for r in 0..=7 {
                assert_eq!(
                    chern_class_from_connected(d, r),
                    full.homogeneous(r),
                    "d={d} r={r}"
                );
            }
        }
    }

    #[test]
    fn symmetric_under_relabeling() {
        let c = expand_chern_class(4, 6);
        for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 0, 3, 1]] {
            assert_eq!(c.relabel(&perm), c);
        }
    }
}
