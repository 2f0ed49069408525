use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series {op} needs constant term {expected}")]
    ConstantTerm {
        op: &'static str,
        expected: &'static str,
    },

    #[error("classes live over different mark counts ({left} vs {right})")]
    MarkCountMismatch { left: usize, right: usize },

    #[error(
        "pi_*(omega^{b}) with n = {n} > 0 pointed markings is not a pure kappa class \
         (it differs from kappa_{} by psi classes of the markings)",
        b.saturating_sub(1)
    )]
    PointedOmegaFactor { b: u32, n: u32 },

    #[error("relation needs k > n, i.e. Chern degree above {s}; got {r}")]
    InvalidRelationDegree { s: i64, r: i64 },

    #[error(
        "kappa_{l} is a required generator when s = {s} (s - 2l = {}); it cannot be eliminated",
        s - 2 * (*l as i64)
    )]
    RequiredGenerator { s: i64, l: u32 },

    #[error("no relation with nonzero kappa_{l} coefficient found for d <= {d_cap}")]
    SearchExhausted { l: u32, d_cap: u32 },

    #[error("invalid partition {partition} for {family}: {reason}")]
    InvalidPartition {
        family: &'static str,
        partition: String,
        reason: String,
    },

    #[error("degree {d} out of range {lo}..={hi}")]
    DegreeOutOfRange { d: i64, lo: i64, hi: i64 },

    #[error("invalid dual graph: {0}")]
    InvalidGraph(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
