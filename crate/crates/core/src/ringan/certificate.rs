use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hodgeeval::{
    family_strata, pairing_against, stratum_s, stratum_t, trade_genus, traded_w_class,
    PairingFamily, Stratum,
};
use crate::partitions::{partitions, Partition};
use crate::sqcalc::{relation_series, KappaPoly};

use super::genus0::betti_relation_options;
use super::{relation_rank, MatrixQ, RelationOptions};

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorRelation {
    pub s: i64,
    pub l: u32,
    pub r: u32,
    pub d: usize,
    pub relation: KappaPoly,
}

/// Finds a valid relation of degree `l` whose `kappa_l` coefficient is
/// nonzero, scanning the number of marks upward from the first valid one.
pub fn minimal_generator_relation(s: i64, l: u32, d_cap: usize) -> Result<GeneratorRelation> {
    if l == 0 || s - 2 * l as i64 >= 0 {
        return Err(Error::RequiredGenerator { s, l });
    }
    let single = Partition::single(l);
    let first = (s - l as i64 + 1).max(1) as usize;
    for d in first..=d_cap {
        let r = d as u32 + l;
        let relation = relation_series(s, r, d);
        if !relation.coeff(&single).is_zero() {
            return Ok(GeneratorRelation {
                s,
                l,
                r,
                d,
                relation,
            });
        }
    }
    Err(Error::SearchExhausted {
        l,
        d_cap: d_cap as u32,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Pointed { g: u32, n: u32 },
    Unpointed { g: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceCertificate {
    pub space: Space,
    pub d: u32,
    /// Monomials whose independence is certified.
    pub monomials: Vec<Partition>,
    /// Extra `kappa_1` factors multiplied onto `monomials` to reach the
    /// degree of the strata.
    pub padding: u32,
    pub matrix: MatrixQ,
    pub rank: usize,
    pub independent: bool,
}

/// Top degree of the certified range and its strata: `mu`/`nu` (traded
/// down for `n >= 3`) for pointed spaces, `omega`/`omega'` otherwise.
fn top_strata(space: Space, d: u32) -> Result<(u32, Vec<Partition>, Vec<Stratum>)> {
    match space {
        Space::Pointed { g, n } => {
            if n == 0 {
                return Err(Error::InvalidInput("pointed space needs n >= 1".into()));
            }
            let count = (n - 1) / 2;
            let g_hat = g + count;
            let (top, index, base): (u32, Vec<Partition>, Vec<Stratum>) = if n % 2 == 1 {
                let index = partitions(g_hat - 1, None);
                let strata = index
                    .iter()
                    .map(|p| stratum_s(g_hat, p))
                    .collect::<Result<_>>()?;
                (g_hat - 1, index, strata)
            } else {
                let index = partitions(g_hat, None);
                let strata = index
                    .iter()
                    .map(|p| stratum_t(g_hat, p))
                    .collect::<Result<_>>()?;
                (g_hat, index, strata)
            };
            let strata = base
                .iter()
                .map(|s| {
                    if count == 0 {
                        Ok(s.clone())
                    } else {
                        trade_genus(s, count, s.graph.marking_vertex(1).expect("marked"))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((top, index, strata))
        }
        Space::Unpointed { g } => {
            if g < 2 {
                return Err(Error::InvalidInput("unpointed space needs g >= 2".into()));
            }
            let family = if d + 1 == g {
                PairingFamily::Omega
            } else {
                PairingFamily::OmegaPrime
            };
            let (index, strata) = family_strata(family, g, 0, 0)?;
            let top = if d + 1 == g { g - 1 } else { g - 2 };
            Ok((top, index, strata))
        }
    }
}

/// Certifies independence of the degree-d kappa monomials below the top
/// degree by pairing against strata; lower degrees are padded with
/// `kappa_1` powers, which cannot create independence from dependence.
pub fn independence_certificate(space: Space, d: u32) -> Result<IndependenceCertificate> {
    let (top, index, strata) = top_strata(space, d)?;
    if d > top {
        return Err(Error::DegreeOutOfRange {
            d: d as i64,
            lo: 0,
            hi: top as i64,
        });
    }
    let monomials = if d == top { index } else { partitions(d, None) };
    let padding = top - d;
    let ones = Partition::new(vec![1; padding as usize]);
    let rows: Vec<Partition> = monomials.iter().map(|p| p.union(&ones)).collect();
    let matrix = pairing_against(&rows, &strata);
    let rank = matrix.rank();
    Ok(IndependenceCertificate {
        space,
        d,
        independent: rank == monomials.len(),
        monomials,
        padding,
        matrix,
        rank,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalityRow {
    pub d: u32,
    /// `|P(d, s - d)|`, the genus-0 dimension.
    pub predicted: usize,
    /// `|P(d)|` minus the rank of the generated relations.
    pub upper_bound: usize,
    /// Rank of a strata pairing, when a family applies.
    pub lower_bound: Option<usize>,
    /// Independently known dimension, where it is smaller than the bound.
    pub known_dimension: Option<usize>,
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalityReport {
    pub g: u32,
    pub n: u32,
    pub s: i64,
    pub rows: Vec<UniversalityRow>,
    pub budget: Vec<(u32, RelationOptions)>,
}

// R^6(M_5^c) has rank 3 by Getzler's relation, so the kappa ring is at
// most 3-dimensional there.
fn known_dimension(g: u32, n: u32, d: u32) -> Option<usize> {
    match (g, n, d) {
        (5, 0, 6) => Some(3),
        _ => None,
    }
}

fn lower_bound(g: u32, n: u32, d: u32) -> Result<Option<usize>> {
    let s = 2 * g + n - 2;
    if n > 0 {
        let index = partitions(d, Some((s - d) as usize));
        let strata = index
            .iter()
            .map(|q| traded_w_class(g, n, q))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(pairing_against(&partitions(d, None), &strata).rank()));
    }
    if g >= 2 && d < g {
        return Ok(Some(
            independence_certificate(Space::Unpointed { g }, d)?.rank,
        ));
    }
    Ok(None)
}

/// Compares the genus-0 prediction with both bounds in each degree.
pub fn universality_report(
    g: u32,
    n: u32,
    d_range: std::ops::RangeInclusive<u32>,
) -> Result<UniversalityReport> {
    let s = 2 * g as i64 + n as i64 - 2;
    if s < 1 {
        return Err(Error::InvalidInput(format!(
            "2g - 2 + n = {s} must be positive"
        )));
    }
    let mut rows = Vec::new();
    let mut budget = Vec::new();
    for d in d_range {
        if d as i64 > s {
            return Err(Error::DegreeOutOfRange {
                d: d as i64,
                lo: 0,
                hi: s,
            });
        }
        let opts = betti_relation_options(d);
        let total = partitions(d, None).len();
        let upper_bound = total - relation_rank(s, d, &opts);
        let predicted = partitions(d, Some((s - d as i64) as usize)).len();
        let lower = lower_bound(g, n, d)?;
        let known = known_dimension(g, n, d);
        let verdict = match (lower, known) {
            (_, Some(k)) if k < upper_bound => {
                format!("gap: relation upper bound {upper_bound} exceeds the known dimension {k}")
            }
            (Some(l), _) if l == upper_bound && l == predicted => "isomorphism verified".into(),
            (Some(l), _) if l == upper_bound => format!("dimension {l}, prediction {predicted}"),
            (Some(l), _) => format!("open: {l} <= dim <= {upper_bound}"),
            (None, _) => format!("open: dim <= {upper_bound}"),
        };
        rows.push(UniversalityRow {
            d,
            predicted,
            upper_bound,
            lower_bound: lower,
            known_dimension: known,
            verdict,
        });
        budget.push((d, opts));
    }
    Ok(UniversalityReport {
        g,
        n,
        s,
        rows,
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn generator_search() {
        let found = minimal_generator_relation(4, 3, 6).unwrap();
        assert_eq!(found.d, 2);
        let k3 = found.relation.coeff(&Partition::single(3));
        let k12 = found.relation.coeff(&Partition::new(vec![2, 1]));
        assert_eq!(k3, -rat(9, 1) * &k12);
        assert!(minimal_generator_relation(2, 2, 4).is_ok());
        assert_eq!(
            minimal_generator_relation(8, 4, 12).unwrap_err(),
            Error::RequiredGenerator { s: 8, l: 4 }
        );
    }

    #[test]
    fn small_certificates() {
        let c = independence_certificate(Space::Pointed { g: 2, n: 1 }, 1).unwrap();
        assert_eq!(c.matrix.nrows(), 1);
        assert_eq!(*c.matrix.get(0, 0), rat(1, 576));
        assert!(c.independent);
        let c = independence_certificate(Space::Unpointed { g: 4 }, 3).unwrap();
        assert_eq!(c.monomials.len(), partitions(3, None).len() - 1);
        assert!(c.independent);
        for (g, n) in [(1, 3), (2, 3), (2, 4), (1, 5), (3, 3)] {
            let top = g - 1 + n / 2;
            for d in 0..=top {
                let c = independence_certificate(Space::Pointed { g, n }, d).unwrap();
                assert!(c.independent, "g={g} n={n} d={d}\n{}", c.matrix);
            }
        }
    }

    #[test]
    fn smallest_universality_case() {
        let r = universality_report(1, 2, 1..=1).unwrap();
        let row = &r.rows[0];
        assert_eq!(row.predicted, 1);
        assert_eq!(row.upper_bound, 1);
        assert_eq!(row.lower_bound, Some(1));
        assert_eq!(row.verdict, "isomorphism verified");
    }
}
