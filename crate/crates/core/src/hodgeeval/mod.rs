//! Lambda_g socle evaluation, compact-type boundary strata and the pairing
//! matrices between kappa monomials and strata classes.

mod graph;
mod integrals;
mod strata;

pub use graph::{socle_dim, DualGraph, Vertex};
pub use integrals::{
    descendent_lambda_integral, genus0_psi_integral, lambda_g_base, socle_integral,
    socle_integral_smallest_first, SocleIntegrand,
};
pub use strata::{
    gamma_graph, gamma_tilde_graph, stratum_pairing, stratum_s, stratum_t, stratum_u,
    stratum_u_prime, stratum_v, stratum_w, stratum_w_tilde, trade_genus, Stratum, StratumFamily,
};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{partitions, Partition};
use crate::ringan::MatrixQ;

/// Builds the stratum of `family` indexed by `p`. `g` is the genus, `n` the
/// number of markings (only read by `V`).
pub fn build_stratum(family: StratumFamily, p: &Partition, g: u32, n: u32) -> Result<Stratum> {
    match family {
        StratumFamily::S => stratum_s(g, p),
        StratumFamily::T => stratum_t(g, p),
        StratumFamily::U => stratum_u(g, p),
        StratumFamily::UPrime => stratum_u_prime(g, p),
        StratumFamily::V => stratum_v(n, p),
        StratumFamily::W => stratum_w(g, p),
        StratumFamily::WTilde => stratum_w_tilde(g, p),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingFamily {
    /// `M_{g,1}`, degree `g-1`, strata `S`.
    Mu,
    /// `M_{g,2}`, degree `g`, strata `T`.
    Nu,
    /// `M_g`, degree `g-1`, strata `U` over `P*(g-1)`.
    Omega,
    /// `M_g`, degree `g-2`, strata `U'`.
    OmegaPrime,
    /// `M_{0,n}`, degree `d`, strata `V` over `P(d, n-2-d)`.
    Genus0V,
    /// `M_{g,1}`, degree `d`, classes `W` over `P(d, 2g-1-d)`.
    W,
    /// `M_{g,2}`, degree `d`, classes `W~` over `P(d, 2g-d)`.
    WTilde,
}

impl PairingFamily {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "mu" => PairingFamily::Mu,
            "nu" => PairingFamily::Nu,
            "omega" => PairingFamily::Omega,
            "omega_prime" => PairingFamily::OmegaPrime,
            "genus0_v" | "v" => PairingFamily::Genus0V,
            "w" => PairingFamily::W,
            "w_tilde" => PairingFamily::WTilde,
            _ => return None,
        })
    }
}

type BuildFn = Box<dyn Fn(&Partition) -> Result<Stratum>>;

/// Index set and strata for a pairing family; the rows and columns of the
/// square pairing matrix share the index set.
pub fn family_strata(
    family: PairingFamily,
    g: u32,
    n: u32,
    d: u32,
) -> Result<(Vec<Partition>, Vec<Stratum>)> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("{family:?} needs {what}")))
        }
    };
    let (index, build): (Vec<Partition>, BuildFn) = match family {
        PairingFamily::Mu => {
            need(g >= 1, "g >= 1")?;
            (partitions(g - 1, None), Box::new(move |p| stratum_s(g, p)))
        }
        PairingFamily::Nu => {
            need(g >= 1, "g >= 1")?;
            (partitions(g, None), Box::new(move |p| stratum_t(g, p)))
        }
        PairingFamily::Omega => {
            need(g >= 2, "g >= 2")?;
            let index = partitions(g - 1, None)
                .into_iter()
                .filter(|p| p.parts()[0] >= 2)
                .collect();
            (index, Box::new(move |p| stratum_u(g, p)))
        }
        PairingFamily::OmegaPrime => {
            need(g >= 2, "g >= 2")?;
            (
                partitions(g - 2, None),
                Box::new(move |p| stratum_u_prime(g, p)),
            )
        }
        PairingFamily::Genus0V => {
            need(n >= 3 && d + 3 <= n, "n >= 3 and d <= n - 3")?;
            (
                partitions(d, Some((n - 2 - d) as usize)),
                Box::new(move |p| stratum_v(n, p)),
            )
        }
        PairingFamily::W => {
            need(g >= 1 && d < 2 * g, "g >= 1 and d <= 2g - 1")?;
            (
                partitions(d, Some((2 * g - 1 - d) as usize)),
                Box::new(move |p| w_class(g, p)),
            )
        }
        PairingFamily::WTilde => {
            need(g >= 1 && d <= 2 * g, "g >= 1 and d <= 2g")?;
            (
                partitions(d, Some((2 * g - d) as usize)),
                Box::new(move |p| w_tilde_class(g, p)),
            )
        }
    };
    let strata = index.iter().map(build).collect::<Result<Vec<_>>>()?;
    Ok((index, strata))
}

// d = 0 gives the single-vertex class psi_1^{top}
fn w_class(g: u32, p: &Partition) -> Result<Stratum> {
    if p.is_empty() {
        let graph = DualGraph::new(vec![Vertex::new(g, vec![1])], vec![])?;
        let psi = BTreeMap::from([(1, 2 * g - 2)]);
        return Ok(Stratum {
            label: "W()".into(),
            graph,
            psi,
        });
    }
    stratum_w(g, p)
}

fn w_tilde_class(g: u32, p: &Partition) -> Result<Stratum> {
    if p.is_empty() {
        let graph = DualGraph::new(vec![Vertex::new(g, vec![1, 2])], vec![])?;
        let psi = BTreeMap::from([(1, 2 * g - 1)]);
        return Ok(Stratum {
            label: "W~()".into(),
            graph,
            psi,
        });
    }
    stratum_w_tilde(g, p)
}

/// The `W` or `W~` class for `M_{g,n}` with `n >= 1`: built at the genus
/// `g + floor((n-1)/2)` with one or two markings, then traded back down to
/// genus `g`, starting at the marked vertex.
pub fn traded_w_class(g: u32, n: u32, p: &Partition) -> Result<Stratum> {
    if n == 0 {
        return Err(Error::InvalidInput("W classes need n >= 1".into()));
    }
    let count = (n - 1) / 2;
    let g_hat = g + count;
    let base = if n % 2 == 1 {
        w_class(g_hat, p)?
    } else {
        w_tilde_class(g_hat, p)?
    };
    if count == 0 {
        return Ok(base);
    }
    let first = base.graph.marking_vertex(1).expect("marking 1 is placed");
    trade_genus(&base, count, first)
}

/// Rows are kappa monomials `rows`, columns the given strata.
pub fn pairing_against(rows: &[Partition], strata: &[Stratum]) -> MatrixQ {
    let entries: Vec<Vec<_>> = rows
        .par_iter()
        .map(|p| {
            strata
                .iter()
                .map(|s| stratum_pairing(p, &s.graph, &s.psi))
                .collect()
        })
        .collect();
    let labels = strata.iter().map(|s| s.label.clone()).collect();
    let m = if rows.is_empty() {
        MatrixQ::zeros(0, strata.len())
    } else {
        MatrixQ::from_rows(entries)
    };
    m.with_labels(rows.to_vec(), labels)
}

/// The square pairing matrix of a family in canonical partition order.
pub fn pairing_matrix(family: PairingFamily, g: u32, n: u32, d: u32) -> Result<MatrixQ> {
    let (index, strata) = family_strata(family, g, n, d)?;
    Ok(pairing_against(&index, &strata))
}

/// The strata of a family together with their index partitions, for
/// triangularity checks.
pub fn family_index(family: PairingFamily, g: u32, n: u32, d: u32) -> Result<Vec<Partition>> {
    Ok(family_strata(family, g, n, d)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn check_triangular(family: PairingFamily, g: u32, n: u32, d: u32) {
        let (index, _) = family_strata(family, g, n, d).unwrap();
        let m = pairing_matrix(family, g, n, d).unwrap();
        assert!(
            m.is_upper_triangular_by_length(&index),
            "{family:?} g={g} n={n} d={d}\n{m}"
        );
        assert!(m.diagonal_nonzero(), "{family:?} g={g} n={n} d={d}\n{m}");
        assert!(m.is_nonsingular());
    }

    #[test]
    fn mu_two() {
        let m = pairing_matrix(PairingFamily::Mu, 2, 1, 1).unwrap();
        assert_eq!(m.nrows(), 1);
        assert_eq!(*m.get(0, 0), rat(1, 576));
    }

    #[test]
    fn classical_families_triangular() {
        for g in 1..=5 {
            check_triangular(PairingFamily::Mu, g, 1, g - 1);
            check_triangular(PairingFamily::Nu, g, 2, g);
        }
        for g in 2..=5 {
            check_triangular(PairingFamily::OmegaPrime, g, 0, g - 2);
        }
        for g in 3..=5 {
            check_triangular(PairingFamily::Omega, g, 0, g - 1);
        }
    }

    #[test]
    fn genus_zero_divisor_matrix() {
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
                .unwrap();
                Stratum::plain(format!("D{a}"), graph)
            })
            .collect();
        let m = pairing_against(&rows, &strata);
        assert!(m.is_nonsingular(), "{m}");
    }

    #[test]
    fn genus_zero_v_triangular() {
        for n in 3..=8 {
            for d in 0..=n - 3 {
                check_triangular(PairingFamily::Genus0V, 0, n, d);
            }
        }
    }

    #[test]
    fn w_families_triangular() {
        for g in 1..=3 {
            for d in 0..2 * g {
                check_triangular(PairingFamily::W, g, 1, d);
            }
            for d in 0..=2 * g {
                check_triangular(PairingFamily::WTilde, g, 2, d);
            }
        }
    }

    #[test]
    fn traded_classes_pair_in_degree() {
        for (g, n) in [(1, 3), (1, 4), (2, 3), (0, 5), (0, 6)] {
            let s = 2 * g + n - 2;
            for d in 0..=s {
                for p in partitions(d, Some((s - d) as usize)) {
                    let w = traded_w_class(g, n, &p).unwrap();
                    assert_eq!(w.graph.genus(), g);
                    assert_eq!(w.graph.num_markings() as u32, n);
                    assert_eq!(w.pairing_degree(), d);
                }
            }
        }
    }
}
