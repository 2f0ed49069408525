use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::exactnum::{format_rational, Rational};
use crate::partitions::Partition;

/// Sparse polynomial in `kappa_1, kappa_2, ...` keyed by the partition of
/// indices; the empty partition is the constant term.
///
/// `kappa_0` and `kappa_{-1}` never appear: callers substitute the integer
/// `s = 2g - 2 + n` for `kappa_0` and zero for `kappa_{-1}` on creation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KappaPoly {
    terms: BTreeMap<Partition, Rational>,
}

impl KappaPoly {
    pub fn zero() -> Self {
        KappaPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        KappaPoly::monomial(Partition::empty(), c)
    }

    pub fn monomial(p: Partition, c: Rational) -> Self {
        let mut k = KappaPoly::zero();
        k.add_term(p, c);
        k
    }

    /// `kappa_i`, with `kappa_0 -> s` and `kappa_{-1} -> 0`.
    pub fn kappa(i: i64, s: i64) -> Self {
        match i {
            i if i < 0 => KappaPoly::zero(),
            0 => KappaPoly::constant(Rational::from_integer(s.into())),
            i => KappaPoly::monomial(Partition::single(i as u32), Rational::one()),
        }
    }

    pub fn add_term(&mut self, p: Partition, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(p) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &KappaPoly) {
        for (p, c) in &other.terms {
            self.add_term(p.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &KappaPoly, k: &Rational) {
        if k.is_zero() {
            return;
        }
        for (p, c) in &other.terms {
            self.add_term(p.clone(), c * k);
        }
    }

    pub fn scaled(&self, k: &Rational) -> KappaPoly {
        if k.is_zero() {
            return KappaPoly::zero();
        }
        KappaPoly {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &KappaPoly) -> KappaPoly {
        let mut out = KappaPoly::zero();
        for (p1, c1) in &self.terms {
            for (p2, c2) in &other.terms {
                out.add_term(p1.union(p2), c1 * c2);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: &Partition) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical partition order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(w)` when every term has weight `w`; `None` for zero or mixed.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut weights = self.terms.keys().map(Partition::weight);
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    /// Coefficient vector against the given monomial basis.
    pub fn coefficients(&self, basis: &[Partition]) -> Vec<Rational> {
        basis.iter().map(|p| self.coeff(p)).collect()
    }

    /// Renders like `-18*k3 + 2*k1*k2`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<u32> = p.parts().to_vec();
            factors.sort_unstable();
            let monomial: Vec<String> = factors.iter().map(|k| format!("k{k}")).collect();
            if monomial.is_empty() {
                out.push_str(&format_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&format_rational(&mag));
                    out.push('*');
                }
                out.push_str(&monomial.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for KappaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    partition: &'a Partition,
    coeff: String,
}

/// Serializes as `[{"partition": [..], "coeff": "p/q"}, ...]`.
impl Serialize for KappaPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (p, c) in &self.terms {
            seq.serialize_element(&TermJson {
                partition: p,
                coeff: format_rational(c),
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn kappa_conventions() {
        assert!(KappaPoly::kappa(-1, 4).is_zero());
        assert_eq!(KappaPoly::kappa(0, 4), KappaPoly::constant(rat(4, 1)));
        assert_eq!(KappaPoly::kappa(3, 4).coeff(&p(&[3])), rat(1, 1));
    }

    #[test]
    fn text_rendering() {
        let mut k = KappaPoly::zero();
        k.add_term(p(&[3]), rat(-18, 1));
        k.add_term(p(&[2, 1]), rat(2, 1));
        assert_eq!(k.to_text(), "-18*k3 + 2*k1*k2");
        let mut k = KappaPoly::zero();
        k.add_term(p(&[1, 1]), rat(1, 1));
        k.add_term(p(&[]), rat(-1, 2));
        assert_eq!(k.to_text(), "-1/2 + k1*k1");
        assert_eq!(KappaPoly::zero().to_text(), "0");
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut k = KappaPoly::monomial(p(&[2]), rat(1, 1));
        k.add_term(p(&[2]), rat(-1, 1));
        assert!(k.is_zero());
    }

    #[test]
    fn multiplication_and_degree() {
        let a = KappaPoly::kappa(1, 0);
        let b = KappaPoly::kappa(2, 0);
        let ab = a.mul(&b);
        assert_eq!(ab.coeff(&p(&[2, 1])), rat(1, 1));
        assert_eq!(ab.homogeneous_degree(), Some(3));
    }

    #[test]
    fn json_shape() {
        let k = KappaPoly::monomial(p(&[2, 1]), rat(-9, 2));
        let js = serde_json::to_string(&k).unwrap();
        assert_eq!(js, r#"[{"partition":[2,1],"coeff":"-9/2"}]"#);
    }
}
