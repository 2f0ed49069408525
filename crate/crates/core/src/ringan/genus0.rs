use serde::Serialize;

use crate::error::{Error, Result};
use crate::hodgeeval::{pairing_against, stratum_v, Stratum};
use crate::partitions::{partitions, Partition};

use super::{relation_rank, MatrixQ, RelationOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BettiMethod {
    /// Rank of all degree-d monomials against the `V` strata.
    Pairing,
    /// Monomial count minus the rank of the generated relations.
    Relations,
    /// `|P(d, n-2-d)|`.
    Formula,
}

impl BettiMethod {
    pub const ALL: [BettiMethod; 3] = [
        BettiMethod::Pairing,
        BettiMethod::Relations,
        BettiMethod::Formula,
    ];
}

/// Relations used for the upper bound in degree `d`: series relations with
/// up to `d + 2` marks plus the default richer budget.
pub fn betti_relation_options(d: u32) -> RelationOptions {
    RelationOptions {
        d_max: d as usize + 2,
        richer: Some(Default::default()),
        ideal_closure: false,
    }
}

fn check_range(n: u32, d: u32) -> Result<()> {
    if n < 3 || d + 3 > n {
        return Err(Error::DegreeOutOfRange {
            d: d as i64,
            lo: 0,
            hi: n as i64 - 3,
        });
    }
    Ok(())
}

fn v_strata(n: u32, index: &[Partition]) -> Vec<Stratum> {
    index
        .iter()
        .map(|q| stratum_v(n, q).expect("index set fits the chain"))
        .collect()
}

/// Dimension of the degree-d kappa classes on `M_{0,n}` of compact type.
pub fn genus0_betti(n: u32, d: u32, method: BettiMethod) -> Result<usize> {
    check_range(n, d)?;
    Ok(match method {
        BettiMethod::Formula => partitions(d, Some((n - 2 - d) as usize)).len(),
        BettiMethod::Pairing => {
            let index = partitions(d, Some((n - 2 - d) as usize));
            pairing_against(&partitions(d, None), &v_strata(n, &index)).rank()
        }
        BettiMethod::Relations => {
            let total = partitions(d, None).len();
            total - relation_rank(n as i64 - 2, d, &betti_relation_options(d))
        }
    })
}

/// Coefficients of `B_n(t)`, constant term first.
pub fn betti_polynomial(n: u32, method: BettiMethod) -> Result<Vec<usize>> {
    check_range(n, 0)?;
    (0..=n - 3).map(|d| genus0_betti(n, d, method)).collect()
}

/// Renders `1 + t + 2t^2` style.
pub fn format_polynomial(coeffs: &[usize]) -> String {
    let mut terms = Vec::new();
    for (d, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let coeff = if c == 1 && d > 0 {
            String::new()
        } else {
            c.to_string()
        };
        terms.push(match d {
            0 => c.to_string(),
            1 => format!("{coeff}t"),
            _ => format!("{coeff}t^{d}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Genus0Basis {
    pub n: u32,
    pub d: u32,
    pub basis: Vec<Partition>,
    /// Basis monomials against `V_q`, `q` in the same index set.
    pub certificate: MatrixQ,
    pub nonsingular: bool,
}

/// The monomials `kappa_p`, `p` in `P(d, n-2-d)`, with their pairing
/// certificate.
pub fn basis(n: u32, d: u32) -> Result<Genus0Basis> {
    check_range(n, d)?;
    let index = partitions(d, Some((n - 2 - d) as usize));
    let certificate = pairing_against(&index, &v_strata(n, &index));
    let nonsingular = certificate.is_nonsingular();
    Ok(Genus0Basis {
        n,
        d,
        basis: index,
        certificate,
        nonsingular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(genus0_betti(10, 4, BettiMethod::Formula).unwrap(), 5);
        assert_eq!(genus0_betti(7, 4, BettiMethod::Pairing).unwrap(), 1);
        for n in 3..=8 {
            assert_eq!(genus0_betti(n, 0, BettiMethod::Relations).unwrap(), 1);
        }
        assert!(genus0_betti(6, 4, BettiMethod::Formula).is_err());
        for method in BettiMethod::ALL {
            assert_eq!(betti_polynomial(8, method).unwrap(), vec![1, 1, 2, 3, 3, 1]);
        }
    }

    #[test]
    fn bases() {
        let b = basis(10, 6).unwrap();
        let expect: Vec<Partition> = [vec![6], vec![5, 1], vec![4, 2], vec![3, 3]]
            .into_iter()
            .map(Partition::new)
            .collect();
        assert_eq!(b.basis, expect);
        assert!(b.nonsingular);
        assert_eq!(basis(4, 1).unwrap().basis, vec![Partition::single(1)]);
        assert_eq!(basis(12, 4).unwrap().basis, partitions(4, None));
    }

    #[test]
    fn rendering() {
        assert_eq!(
            format_polynomial(&[1, 1, 2, 3, 3, 1]),
            "1 + t + 2t^2 + 3t^3 + 3t^4 + t^5"
        );
        assert_eq!(format_polynomial(&[1]), "1");
    }
}
