//! Normal form for classes built from cotangent lines `psi^_j` of the weighted
//! marks and the diagonals `D_jk` where two weighted marks coincide.
//!
//! A monomial is a set partition of the `d` marks with an exponent on every
//! block: the block `B` stands for the small diagonal where all marks of `B`
//! coincide, times the cotangent class of the merged point raised to `e_B`.
//! All diagonal reductions are absorbed into this form:
//!
//! * `psi^_i` on a block raises that block's exponent,
//! * `D_ij` merges the blocks of `i` and `j`,
//! * `D_ij` with `i, j` already in one block contributes `-psi^_*` (the
//!   self-intersection formula).

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, Rational};
use crate::partitions::SetPartition;

/// Largest supported number of weighted marks (marks are bits of a `u32`).
pub const MAX_MARKS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    /// Bit `j` set when mark `j` (0-based) lies in the block.
    pub marks: u32,
    pub exp: u32,
}

impl Block {
    pub fn size(&self) -> u32 {
        self.marks.count_ones()
    }

    fn least(&self) -> u32 {
        self.marks.trailing_zeros()
    }
}

/// A single normal-form monomial; blocks are sorted by least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagMonomial {
    blocks: Vec<Block>,
}

impl DiagMonomial {
    pub fn unit(d: usize) -> Self {
        assert!(d <= MAX_MARKS, "at most {MAX_MARKS} weighted marks");
        DiagMonomial {
            blocks: (0..d)
                .map(|j| Block {
                    marks: 1 << j,
                    exp: 0,
                })
                .collect(),
        }
    }

    /// `psi^_i^power` (0-based mark).
    pub fn psi(d: usize, i: usize, power: u32) -> Self {
        let mut m = DiagMonomial::unit(d);
        m.blocks[i].exp = power;
        m
    }

    /// `D_ij` (0-based marks, `i != j`).
    pub fn diagonal(d: usize, i: usize, j: usize) -> Self {
        assert_ne!(i, j, "a diagonal needs two distinct marks");
        let mut blocks: Vec<Block> = (0..d)
            .filter(|&k| k != i && k != j)
            .map(|k| Block {
                marks: 1 << k,
                exp: 0,
            })
            .collect();
        blocks.push(Block {
            marks: (1 << i) | (1 << j),
            exp: 0,
        });
        DiagMonomial::from_blocks(blocks)
    }

    /// Canonicalizes arbitrary blocks covering the marks.
    pub fn from_blocks(mut blocks: Vec<Block>) -> Self {
        blocks.sort_unstable_by_key(Block::least);
        DiagMonomial { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn marks(&self) -> usize {
        self.blocks.iter().map(|b| b.size() as usize).sum()
    }

    /// `sum_B e_B + (d - #blocks)`.
    pub fn degree(&self) -> u32 {
        self.blocks.iter().map(|b| b.exp + b.size() - 1).sum()
    }

    pub fn set_partition(&self) -> SetPartition {
        let d = self.marks();
        let blocks = self
            .blocks
            .iter()
            .map(|b| (0..d).filter(|j| b.marks & (1 << j) != 0).collect())
            .collect();
        SetPartition::from_blocks(d, blocks).expect("blocks partition the marks")
    }

    /// Product of normal forms: the set partitions are joined and every
    /// merged block picks up one factor of `-psi^_*` per unit of excess
    /// dimension. Returns the monomial and whether the sign is negative.
    pub fn mul(&self, other: &DiagMonomial) -> (DiagMonomial, bool) {
        // (marks, exp, summed codimension of the constituents)
        let mut groups: Vec<(u32, u32, u32)> = self
            .blocks
            .iter()
            .map(|b| (b.marks, b.exp, b.size() - 1))
            .collect();
        for b in &other.blocks {
            let mut merged = (b.marks, b.exp, b.size() - 1);
            groups.retain(|g| {
                if g.0 & b.marks != 0 {
                    merged.0 |= g.0;
                    merged.1 += g.1;
                    merged.2 += g.2;
                    false
                } else {
                    true
                }
            });
            groups.push(merged);
        }
        let mut negative = false;
        let blocks = groups
            .into_iter()
            .map(|(marks, exp, codim)| {
                let excess = codim - (marks.count_ones() - 1);
                negative ^= excess % 2 == 1;
                Block {
                    marks,
                    exp: exp + excess,
                }
            })
            .collect();
        (DiagMonomial::from_blocks(blocks), negative)
    }

    /// Value at `psi^ = 1, D = -1`: the small diagonal of a block of size `m`
    /// is a product of `m - 1` diagonals.
    pub fn substitution_sign(&self) -> i32 {
        let codim: u32 = self.blocks.iter().map(|b| b.size() - 1).sum();
        if codim.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for DiagMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for b in &self.blocks {
            if b.exp == 0 && b.size() == 1 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let marks: Vec<String> = (0..MAX_MARKS)
                .filter(|j| b.marks & (1 << j) != 0)
                .map(|j| (j + 1).to_string())
                .collect();
            if b.size() == 1 {
                write!(f, "psi{}^{}", marks[0], b.exp)?;
            } else {
                write!(f, "Delta{{{}}}", marks.join(","))?;
                if b.exp > 0 {
                    write!(f, "*psi*^{}", b.exp)?;
                }
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A rational linear combination of normal-form monomials over `d` marks.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagClass {
    d: usize,
    terms: HashMap<DiagMonomial, Rational>,
}

impl DiagClass {
    pub fn zero(d: usize) -> Self {
        DiagClass {
            d,
            terms: HashMap::new(),
        }
    }

    pub fn unit(d: usize) -> Self {
        DiagClass::monomial(DiagMonomial::unit(d), Rational::one())
    }

    pub fn monomial(m: DiagMonomial, coeff: Rational) -> Self {
        let mut c = DiagClass::zero(m.marks());
        c.add_term(m, coeff);
        c
    }

    pub fn psi(d: usize, i: usize) -> Self {
        DiagClass::monomial(DiagMonomial::psi(d, i, 1), Rational::one())
    }

    pub fn diagonal(d: usize, i: usize, j: usize) -> Self {
        DiagClass::monomial(DiagMonomial::diagonal(d, i, j), Rational::one())
    }

    pub fn marks(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &DiagMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: DiagMonomial, coeff: Rational) {
        debug_assert_eq!(m.marks(), self.d);
        if coeff.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add_assign(&mut self, other: &DiagClass) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scaled(&self, k: &Rational) -> DiagClass {
        let mut out = DiagClass::zero(self.d);
        if k.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * k);
        }
        out
    }

    pub fn sub(&self, other: &DiagClass) -> DiagClass {
        let mut out = self.clone();
        out.add_assign(&other.scaled(&-Rational::one()));
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DiagMonomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms in a deterministic order (by degree, then monomial).
    pub fn sorted_terms(&self) -> Vec<(&DiagMonomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// The degree-`r` homogeneous part.
    pub fn homogeneous(&self, r: u32) -> DiagClass {
        DiagClass {
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == r)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(DiagMonomial::degree).max()
    }

    /// Product, dropping everything above `max_degree` when given.
    pub fn mul_truncated(&self, other: &DiagClass, max_degree: Option<u32>) -> Result<DiagClass> {
        if self.d != other.d {
            return Err(Error::MarkCountMismatch {
                left: self.d,
                right: other.d,
            });
        }
        let limit = max_degree.unwrap_or(u32::MAX);
        let rhs: Vec<(&DiagMonomial, &Rational, u32)> = other
            .terms
            .iter()
            .map(|(m, c)| (m, c, m.degree()))
            .collect();
        let mut out = DiagClass::zero(self.d);
        for (m1, c1) in &self.terms {
            let d1 = m1.degree();
            for &(m2, c2, d2) in &rhs {
                if d1 + d2 > limit {
                    continue;
                }
                let (m, negative) = m1.mul(m2);
                let c = c1 * c2;
                out.add_term(m, if negative { -c } else { c });
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &DiagClass) -> Result<DiagClass> {
        self.mul_truncated(other, None)
    }

    /// Multiplies by `psi^_i` using the block rule alone.
    pub fn mul_psi(&self, i: usize) -> DiagClass {
        let mut out = DiagClass::zero(self.d);
        for (m, c) in &self.terms {
            let mut blocks = m.blocks.clone();
            for b in blocks.iter_mut() {
                if b.marks & (1 << i) != 0 {
                    b.exp += 1;
                }
            }
            out.add_term(DiagMonomial { blocks }, c.clone());
        }
        out
    }

    /// Multiplies by `D_ij` using the merge / self-intersection rules alone.
    pub fn mul_diagonal(&self, i: usize, j: usize) -> DiagClass {
        let mut out = DiagClass::zero(self.d);
        for (m, c) in &self.terms {
            let bi = m
                .blocks
                .iter()
                .position(|b| b.marks & (1 << i) != 0)
                .unwrap();
            let bj = m
                .blocks
                .iter()
                .position(|b| b.marks & (1 << j) != 0)
                .unwrap();
            let mut blocks = m.blocks.clone();
            if bi == bj {
                blocks[bi].exp += 1;
                out.add_term(DiagMonomial { blocks }, -c.clone());
            } else {
                let (lo, hi) = (bi.min(bj), bi.max(bj));
                let merged = Block {
                    marks: blocks[lo].marks | blocks[hi].marks,
                    exp: blocks[lo].exp + blocks[hi].exp,
                };
                blocks.remove(hi);
                blocks[lo] = merged;
                out.add_term(DiagMonomial::from_blocks(blocks), c.clone());
            }
        }
        out
    }

    /// Evaluates at `psi^_i = 1`, `D_ij = -1`.
    pub fn substitute_counting(&self) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| c * rat_int(m.substitution_sign()))
            .sum()
    }

    /// Same evaluation restricted to monomials supported on a single block.
    pub fn substitute_connected(&self) -> Rational {
        self.terms
            .iter()
            .filter(|(m, _)| m.blocks.len() == 1)
            .map(|(m, c)| c * rat_int(m.substitution_sign()))
            .sum()
    }

    /// Applies a permutation of the marks (`perm[j]` is the new label of `j`).
    pub fn relabel(&self, perm: &[usize]) -> DiagClass {
        assert_eq!(perm.len(), self.d);
        let mut out = DiagClass::zero(self.d);
        for (m, c) in &self.terms {
            let blocks = m
                .blocks
                .iter()
                .map(|b| {
                    let mut marks = 0u32;
                    for (j, &pj) in perm.iter().enumerate() {
                        if b.marks & (1 << j) != 0 {
                            marks |= 1 << pj;
                        }
                    }
                    Block { marks, exp: b.exp }
                })
                .collect();
            out.add_term(DiagMonomial::from_blocks(blocks), c.clone());
        }
        out
    }
}

impl fmt::Display for DiagClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", crate::exactnum::format_rational(c), m)?;
        }
        Ok(())
    }
}

/// `a * b` in normal form; both sides must live over the same marks.
pub fn diag_multiply(a: &DiagClass, b: &DiagClass) -> Result<DiagClass> {
    a.mul(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn block(marks: &[usize], exp: u32) -> Block {
        Block {
            marks: marks.iter().fold(0, |acc, j| acc | (1 << j)),
            exp,
        }
    }

    #[test]
    fn self_intersection() {
        let d12 = DiagClass::diagonal(2, 0, 1);
        let sq = diag_multiply(&d12, &d12).unwrap();
        let expected = DiagClass::monomial(
            DiagMonomial::from_blocks(vec![block(&[0, 1], 1)]),
            rat(-1, 1),
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn psi_restricts_to_merged_point() {
        let d12 = DiagClass::diagonal(2, 0, 1);
        let prod = diag_multiply(&DiagClass::psi(2, 0), &d12).unwrap();
        let expected = DiagClass::monomial(
            DiagMonomial::from_blocks(vec![block(&[0, 1], 1)]),
            rat(1, 1),
        );
        assert_eq!(prod, expected);
    }

    #[test]
    fn disjoint_supports_concatenate() {
        let a = DiagClass::monomial(DiagMonomial::psi(4, 0, 2), rat(3, 1));
        let b = DiagClass::monomial(DiagMonomial::diagonal(4, 2, 3), rat(-2, 1));
        let prod = diag_multiply(&a, &b).unwrap();
        let expected = DiagClass::monomial(
            DiagMonomial::from_blocks(vec![block(&[0], 2), block(&[1], 0), block(&[2, 3], 0)]),
            rat(-6, 1),
        );
        assert_eq!(prod, expected);
    }

    #[test]
    fn triple_diagonal_excess() {
        // D12 * D23 = Delta_123 transversally; D12 * D13 * D23 has one excess.
        let d = 3;
        let a = DiagClass::diagonal(d, 0, 1)
            .mul(&DiagClass::diagonal(d, 1, 2))
            .unwrap();
        let expected = DiagClass::monomial(
            DiagMonomial::from_blocks(vec![block(&[0, 1, 2], 0)]),
            rat(1, 1),
        );
        assert_eq!(a, expected);
        let b = a.mul(&DiagClass::diagonal(d, 0, 2)).unwrap();
        let expected = DiagClass::monomial(
            DiagMonomial::from_blocks(vec![block(&[0, 1, 2], 1)]),
            rat(-1, 1),
        );
        assert_eq!(b, expected);
    }

    #[test]
    fn mismatched_marks_rejected() {
        let err = diag_multiply(&DiagClass::unit(2), &DiagClass::unit(3)).unwrap_err();
        assert_eq!(err, Error::MarkCountMismatch { left: 2, right: 3 });
    }

    #[test]
    fn degree_bookkeeping() {
        let m = DiagMonomial::from_blocks(vec![block(&[0, 1], 4)]);
        assert_eq!(m.degree(), 5);
        assert_eq!(DiagMonomial::unit(5).degree(), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        // random word in psi_i and D_ij generators over d marks
        fn word(d: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
            proptest::collection::vec((0..d, 0..d), 0..6)
        }

        fn class_of(d: usize, w: &[(usize, usize)]) -> DiagClass {
            let mut c = DiagClass::unit(d);
            for &(i, j) in w {
                c = if i == j {
                    c.mul_psi(i)
                } else {
                    c.mul_diagonal(i, j)
                };
            }
            c
        }

        proptest! {
            // The one-shot product of normal forms agrees with multiplying
            // generator by generator.
            #[test]
            fn product_matches_generator_rules(w1 in word(4), w2 in word(4)) {
                let a = class_of(4, &w1);
                let b = class_of(4, &w2);
                let mut joined = w1.clone();
                joined.extend_from_slice(&w2);
                prop_assert_eq!(a.mul(&b).unwrap(), class_of(4, &joined));
            }

            #[test]
            fn product_commutes(w1 in word(5), w2 in word(5)) {
                let a = class_of(5, &w1);
                let b = class_of(5, &w2);
                prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            }
        }
    }
}
