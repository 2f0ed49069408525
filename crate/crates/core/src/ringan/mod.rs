//! Exact linear algebra over Q and the ring-level analyses built on it.

mod certificate;
mod genus0;
mod matrix;

pub use certificate::{
    independence_certificate, minimal_generator_relation, universality_report, GeneratorRelation,
    IndependenceCertificate, Space, UniversalityReport, UniversalityRow,
};
pub use genus0::{
    basis, betti_polynomial, betti_relation_options, format_polynomial, genus0_betti, BettiMethod,
    Genus0Basis,
};
pub use matrix::MatrixQ;

use rayon::prelude::*;
use serde::Serialize;

use crate::partitions::{partitions, Partition};
use crate::sqcalc::{relation_set, richer_relations, KappaPoly, RicherBudget};

/// Which relations feed a rank computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationOptions {
    /// Largest number of weighted marks for the series relations.
    pub d_max: usize,
    /// Richer relations with universal-curve factors, if enabled.
    pub richer: Option<RicherBudget>,
    /// Also multiply valid relations of lower degree by kappa monomials.
    pub ideal_closure: bool,
}

impl RelationOptions {
    pub fn series_only(d_max: usize) -> Self {
        RelationOptions {
            d_max,
            richer: None,
            ideal_closure: false,
        }
    }
}

/// Valid relations of the given kappa degree generated under `opts`.
pub fn generated_relations(s: i64, degree: u32, opts: &RelationOptions) -> Vec<KappaPoly> {
    let mut out: Vec<KappaPoly> = relation_set(s, degree, opts.d_max)
        .relations
        .into_iter()
        .map(|r| r.terms)
        .collect();
    if let Some(budget) = &opts.richer {
        let pointed = !budget.a_values.contains(&0);
        out.extend(
            richer_relations(s, pointed, degree, budget)
                .into_iter()
                .map(|(_, _, _, rel)| rel),
        );
    }
    if opts.ideal_closure {
        for lower in 1..degree {
            let base = generated_relations(
                s,
                lower,
                &RelationOptions {
                    ideal_closure: false,
                    ..opts.clone()
                },
            );
            if base.is_empty() {
                continue;
            }
            for p in partitions(degree - lower, None) {
                let m = KappaPoly::monomial(p, crate::exactnum::rat(1, 1));
                out.extend(base.iter().map(|r| r.mul(&m)));
            }
        }
    }
    out.retain(|r| !r.is_zero());
    out
}

/// Coefficient matrix of `polys` against the monomial basis `P(degree)`.
pub fn relation_matrix(polys: &[KappaPoly], degree: u32) -> MatrixQ {
    let basis = partitions(degree, None);
    let rows = polys
        .par_iter()
        .map(|p| p.coefficients(&basis))
        .collect::<Vec<_>>();
    if rows.is_empty() {
        return MatrixQ::zeros(0, basis.len());
    }
    MatrixQ::from_rows(rows)
}

/// Rank of the generated relations in the `|P(degree)|`-dimensional
/// monomial space.
pub fn relation_rank(s: i64, degree: u32, opts: &RelationOptions) -> usize {
    let rels = generated_relations(s, degree, opts);
    relation_matrix(&rels, degree).rank()
}

pub fn monomial_basis(degree: u32) -> Vec<Partition> {
    partitions(degree, None)
}
