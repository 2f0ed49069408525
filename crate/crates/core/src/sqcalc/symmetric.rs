//! Push-forward of `c_r(A_d^* - B_d) * F` for a symmetric class `F` without
//! expanding the Chern class.
//!
//! The Chern class coefficient of a normal monomial factors over its blocks,
//! `prod_B w(|B|, e_B)` with `w(k, e) = (-1)^{k-1} C^k_{e+k-1}`. For a fixed
//! monomial `m` of `F` and a fixed set partition `sigma`, the block exponents
//! of the product only enter through the join blocks, so the sum over the
//! exponents of `sigma` is a convolution of one generating polynomial per
//! join block. Because both `c_r` and the push-forward are symmetric in the
//! marks, `F` only matters through its orbits.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;

use crate::exactnum::Rational;
use crate::partitions::set_partitions;
use crate::powerseries::connected_table;

use super::diag::{DiagClass, DiagMonomial};
use super::kappa::KappaPoly;

/// `eps_*(c_r(A_d^* - B_d) * f)` with `kappa_0 -> s`.
pub fn pushforward_chern_product(s: i64, r: u32, f: &DiagClass) -> KappaPoly {
    let d = f.marks();
    let weights = block_weights(d, r as usize);
    let mut out = KappaPoly::zero();
    for (key, m, coeff) in orbit_representatives(f) {
        let cache_key = (s, r, d, key);
        let cached = orbit_cache()
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(&cache_key)
            .cloned();
        let part = match cached {
            Some(p) => p,
            None => {
                let p = pushforward_chern_monomial(s, r, &m, &weights);
                orbit_cache()
                    .lock()
                    .unwrap_or_else(|e| e.into_inner())
                    .insert(cache_key, p.clone());
                p
            }
        };
        out.add_scaled(&part, &coeff);
    }
    out
}

type OrbitKey = Vec<(u32, u32)>;

// (s, r, d, orbit) -> push-forward of c_r times one orbit member
fn orbit_cache() -> &'static Mutex<HashMap<(i64, u32, usize, OrbitKey), KappaPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(i64, u32, usize, OrbitKey), KappaPoly>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

// w[k][e] for block size k in 1..=d and exponent e in 0..=r
fn block_weights(d: usize, r: usize) -> Vec<Vec<Rational>> {
    let table = connected_table(r + d, d);
    let mut w = vec![Vec::new(); d + 1];
    for (k, row) in w.iter_mut().enumerate().skip(1) {
        *row = (0..=r)
            .map(|e| {
                let c = table.get(e + k - 1, k).0;
                if k % 2 == 1 {
                    c
                } else {
                    -c
                }
            })
            .collect();
    }
    w
}

// Orbit key: sorted (block size, exponent) pairs.
fn orbit_representatives(f: &DiagClass) -> Vec<(OrbitKey, DiagMonomial, Rational)> {
    let mut orbits: HashMap<OrbitKey, (DiagMonomial, Rational)> = HashMap::new();
    for (m, c) in f.iter() {
        let mut key: Vec<(u32, u32)> = m.blocks().iter().map(|b| (b.size(), b.exp)).collect();
        key.sort_unstable();
        orbits
            .entry(key)
            .and_modify(|e| e.1 += c)
            .or_insert_with(|| (m.clone(), c.clone()));
    }
    let mut reps: Vec<_> = orbits.into_iter().collect();
    reps.sort_by(|a, b| a.0.cmp(&b.0));
    reps.into_iter().map(|(k, (m, c))| (k, m, c)).collect()
}

fn pushforward_chern_monomial(
    s: i64,
    r: u32,
    m: &DiagMonomial,
    weights: &[Vec<Rational>],
) -> KappaPoly {
    let d = m.marks();
    let mut out = KappaPoly::zero();
    for sigma in set_partitions(d) {
        let codim: u32 = sigma.blocks().iter().map(|b| b.len() as u32 - 1).sum();
        if codim > r {
            continue;
        }
        let budget = (r - codim) as usize;
        let sigma_blocks: Vec<u32> = sigma
            .blocks()
            .iter()
            .map(|b| b.iter().fold(0u32, |acc, j| acc | (1 << j)))
            .collect();

        // join blocks: (marks, constituent codim, exponent from m, sigma block sizes)
        let mut groups: Vec<(u32, u32, u32, Vec<usize>)> = sigma_blocks
            .iter()
            .map(|&b| (b, b.count_ones() - 1, 0, vec![b.count_ones() as usize]))
            .collect();
        for b in m.blocks() {
            let mut merged = (b.marks, b.size() - 1, b.exp, Vec::new());
            groups.retain(|g| {
                if g.0 & b.marks != 0 {
                    merged.0 |= g.0;
                    merged.1 += g.1;
                    merged.2 += g.2;
                    merged.3.extend_from_slice(&g.3);
                    false
                } else {
                    true
                }
            });
            groups.push(merged);
        }

        let mut negative = false;
        // acc[x] = contribution using x units of the sigma exponent budget
        let mut acc = vec![KappaPoly::zero(); budget + 1];
        acc[0] = KappaPoly::constant(Rational::from_integer(1.into()));
        for (marks, constituent_codim, m_exp, sizes) in &groups {
            let excess = constituent_codim - (marks.count_ones() - 1);
            negative ^= excess % 2 == 1;
            let shift = m_exp + excess;
            let poly = block_polynomial(sizes, budget, weights);
            let mut next = vec![KappaPoly::zero(); budget + 1];
            for (x, a) in acc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (y, c) in poly.iter().enumerate().take(budget + 1 - x) {
                    if c.is_zero() {
                        continue;
                    }
                    let k = KappaPoly::kappa((y as u32 + shift) as i64 - 1, s);
                    if k.is_zero() {
                        continue;
                    }
                    next[x + y].add_assign(&a.mul(&k).scaled(c));
                }
            }
            acc = next;
        }
        let total = std::mem::take(&mut acc[budget]);
        if negative {
            out.add_scaled(&total, &Rational::from_integer((-1).into()));
        } else {
            out.add_assign(&total);
        }
    }
    out
}

// prod over the sigma blocks in one join block of sum_e w(|B|, e) t^e
fn block_polynomial(sizes: &[usize], budget: usize, weights: &[Vec<Rational>]) -> Vec<Rational> {
    let mut poly = vec![Rational::zero(); budget + 1];
    poly[0] = Rational::from_integer(1.into());
    for &k in sizes {
        let w = &weights[k];
        let mut next = vec![Rational::zero(); budget + 1];
        for (i, a) in poly.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in w.iter().enumerate().take(budget + 1 - i) {
                if !b.is_zero() {
                    next[i + j] += a * b;
                }
            }
        }
        poly = next;
    }
    poly
}

#[cfg(test)]
fn single_block(d: usize, marks: u32, exp: u32) -> DiagMonomial {
    use super::diag::Block;
    let mut blocks = vec![Block { marks, exp }];
    for j in 0..d {
        if marks & (1 << j) == 0 {
            blocks.push(Block {
                marks: 1 << j,
                exp: 0,
            });
        }
    }
    DiagMonomial::from_blocks(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::sqcalc::{
        chern_class, pushforward_curve_class, pushforward_to_kappa, relation_direct,
    };

    #[test]
    fn unit_factor_is_direct_relation() {
        for d in 1..=4 {
            for r in 0..=8 {
                for s in [2, 5] {
                    let got = pushforward_chern_product(s, r, &DiagClass::unit(d));
                    assert_eq!(got, relation_direct(s, r, d), "d={d} r={r}");
                }
            }
        }
    }

    #[test]
    fn matches_expanded_products() {
        for d in 1..=4usize {
            for (a, b) in [(1, 0), (1, 2), (2, 1), (3, 0), (2, 3)] {
                let f = pushforward_curve_class(a, b, d, 1).unwrap().base;
                for r in 0..=7 {
                    let slow = pushforward_to_kappa(&chern_class(d, r).mul(&f).unwrap(), 6);
                    let fast = pushforward_chern_product(6, r, &f);
                    assert_eq!(fast, slow, "d={d} a={a} b={b} r={r}");
                }
            }
        }
    }

    #[test]
    fn non_symmetric_monomial_orbit() {
        // a single merged block, paired against its whole orbit
        let d = 3;
        let mut orbit = DiagClass::zero(d);
        for marks in [0b011, 0b101, 0b110] {
            orbit.add_term(single_block(d, marks, 1), rat(1, 1));
        }
        let slow = pushforward_to_kappa(&chern_class(d, 5).mul(&orbit).unwrap(), 4);
        assert_eq!(pushforward_chern_product(4, 5, &orbit), slow);
    }
}
