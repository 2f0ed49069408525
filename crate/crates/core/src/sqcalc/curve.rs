//! Push-forwards along the universal curve over the space with `d` weighted
//! marks of monomials in `s = c_1(S_U^*) = sigma_1 + ... + sigma_d` (the
//! section divisors) and `omega = c_1(omega_pi)`.
//!
//! Reduction rules on the universal curve, applied with the largest section
//! index as the survivor:
//!
//! * `omega * sigma_j = psi^_j * sigma_j`
//! * `sigma_j * sigma_k = D_jk * sigma_k` for `j != k`
//! * `sigma_j^2 = -psi^_j * sigma_j`
//! * `pi_*(base * sigma_j) = base`, `pi_*(base * omega^{b+1}) = base * kappa_b`,
//!   `pi_*(base) = 0`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

use super::diag::{DiagClass, DiagMonomial};

/// `base * kappa_index` where the kappa factor (if any) is pulled back from
/// the unweighted moduli space. `kappa_index = Some(0)` is `kappa_0 = s`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveClass {
    pub base: DiagClass,
    pub kappa_index: Option<u32>,
}

impl CurveClass {
    pub fn degree_shift(a: u32, b: u32) -> i64 {
        a as i64 + b as i64 - 1
    }
}

/// `pi_*(s^a omega^b)` over `d` weighted marks with `n` ordinary markings.
///
/// `a = 0, b >= 1` is only accepted for `n = 0`, where `pi_*(omega^b)` is
/// `kappa_{b-1}`; with ordinary markings present that push-forward involves
/// their cotangent classes and is rejected.
pub fn pushforward_curve_class(a: u32, b: u32, d: usize, n: u32) -> Result<CurveClass> {
    if a == 0 {
        if b == 0 {
            return Ok(CurveClass {
                base: DiagClass::zero(d),
                kappa_index: None,
            });
        }
        if n > 0 {
            return Err(Error::PointedOmegaFactor { b, n });
        }
        return Ok(CurveClass {
            base: DiagClass::unit(d),
            kappa_index: Some(b - 1),
        });
    }
    let mut total = DiagClass::zero(d);
    let mut seq = vec![0usize; a as usize];
    loop {
        total.add_assign(&reduce_sections(&seq, b, d));
        // next sequence in [0, d)^a
        let mut pos = 0;
        loop {
            if pos == seq.len() {
                return Ok(CurveClass {
                    base: total,
                    kappa_index: None,
                });
            }
            seq[pos] += 1;
            if seq[pos] < d {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

// pi_*(sigma_{j_1} ... sigma_{j_a} omega^b)
fn reduce_sections(seq: &[usize], b: u32, d: usize) -> DiagClass {
    let survivor = *seq.iter().max().expect("at least one section");
    let mut class = DiagClass::monomial(DiagMonomial::psi(d, survivor, b), Rational::one());
    let mut skipped = false;
    for &j in seq {
        if j == survivor && !skipped {
            skipped = true;
            continue;
        }
        class = if j == survivor {
            class.mul_psi(survivor).scaled(&-Rational::one())
        } else {
            class.mul_diagonal(j, survivor)
        };
    }
    class
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn single_section() {
        for d in 1..=3 {
            for b in 0..=3 {
                let c = pushforward_curve_class(1, b, d, 2).unwrap();
                let mut expected = DiagClass::zero(d);
                for j in 0..d {
                    expected.add_term(DiagMonomial::psi(d, j, b), rat(1, 1));
                }
                assert_eq!(c.base, expected);
                assert_eq!(c.kappa_index, None);
            }
        }
    }

    #[test]
    fn square_of_sections() {
        for d in 1..=4 {
            let c = pushforward_curve_class(2, 0, d, 0).unwrap();
            let mut expected = DiagClass::zero(d);
            for j in 0..d {
                expected.add_term(DiagMonomial::psi(d, j, 1), rat(-1, 1));
                for k in j + 1..d {
                    expected.add_term(DiagMonomial::diagonal(d, j, k), rat(2, 1));
                }
            }
            assert_eq!(c.base, expected);
        }
    }

    #[test]
    fn unit_and_omega_only() {
        assert!(pushforward_curve_class(0, 0, 3, 2).unwrap().base.is_zero());
        let c = pushforward_curve_class(0, 4, 3, 0).unwrap();
        assert_eq!(c.kappa_index, Some(3));
        assert_eq!(c.base, DiagClass::unit(3));
        assert_eq!(
            pushforward_curve_class(0, 2, 3, 1).unwrap_err(),
            Error::PointedOmegaFactor { b: 2, n: 1 }
        );
    }

    #[test]
    fn reduction_order_does_not_matter() {
        // sigma_0 sigma_1 sigma_1 reduced with either factor first
        let d = 3;
        let a = reduce_sections(&[0, 1, 1], 1, d);
        let b = reduce_sections(&[1, 0, 1], 1, d);
        assert_eq!(a, b);
        let expected = DiagClass::diagonal(d, 0, 1)
            .mul(&DiagClass::psi(d, 1))
            .unwrap()
            .mul(&DiagClass::psi(d, 1))
            .unwrap()
            .scaled(&rat(-1, 1));
        assert_eq!(a, expected);
    }
}
