//! Truncated power series with exact rational coefficients.
//!
//! The bivariate series here are indexed by `(r, d)`: `r` is the power of `t`
//! (cohomological degree) and `d` the power of `z` (number of weighted marks).
//! The term-count series is
//!
//! ```text
//! F(t, z) = sum_{r, d} d^r t^r z^d / d!
//! ```
//!
//! and its logarithm carries the connected counts `C_r^d` via
//! `log F = sum C_r^d t^r z^d / d!`.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, odd_double_factorial, rat_int, Integer, Rational};

/// Default truncation box for series computations.
pub const DEFAULT_R_MAX: usize = 24;
pub const DEFAULT_D_MAX: usize = 12;

/// Bivariate series truncated to `r <= r_max`, `d <= d_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries {
    r_max: usize,
    d_max: usize,
    coeffs: Vec<Rational>,
}

impl BiSeries {
    pub fn zero(r_max: usize, d_max: usize) -> Self {
        BiSeries {
            r_max,
            d_max,
            coeffs: vec![Rational::zero(); (r_max + 1) * (d_max + 1)],
        }
    }

    pub fn from_fn(
        r_max: usize,
        d_max: usize,
        mut f: impl FnMut(usize, usize) -> Rational,
    ) -> Self {
        let mut s = BiSeries::zero(r_max, d_max);
        for r in 0..=r_max {
            for d in 0..=d_max {
                s.coeffs[r * (d_max + 1) + d] = f(r, d);
            }
        }
        s
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    /// Coefficient of `t^r z^d`; `None` outside the truncation box.
    pub fn get(&self, r: usize, d: usize) -> Option<&Rational> {
        (r <= self.r_max && d <= self.d_max).then(|| &self.coeffs[r * (self.d_max + 1) + d])
    }

    fn at(&self, r: usize, d: usize) -> &Rational {
        &self.coeffs[r * (self.d_max + 1) + d]
    }

    fn set(&mut self, r: usize, d: usize, v: Rational) {
        self.coeffs[r * (self.d_max + 1) + d] = v;
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let r_max = self.r_max.min(other.r_max);
        let d_max = self.d_max.min(other.d_max);
        let mut out = BiSeries::zero(r_max, d_max);
        for r1 in 0..=r_max {
            for d1 in 0..=d_max {
                let a = self.at(r1, d1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..=r_max - r1 {
                    for d2 in 0..=d_max - d1 {
                        let b = other.at(r2, d2);
                        if !b.is_zero() {
                            let idx = (r1 + r2) * (d_max + 1) + d1 + d2;
                            out.coeffs[idx] += a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Truncated exponential. Requires a zero constant term.
    ///
    /// Uses the Euler derivation `E = t d/dt + z d/dz`: `E g = g E f`.
    pub fn exp(&self) -> Result<BiSeries> {
        if !self.at(0, 0).is_zero() {
            return Err(Error::ConstantTerm {
                op: "exp",
                expected: "0",
            });
        }
        let (r_max, d_max) = (self.r_max, self.d_max);
        let mut g = BiSeries::zero(r_max, d_max);
        g.set(0, 0, Rational::one());
        for total in 1..=(r_max + d_max) {
            for r in 0..=total.min(r_max) {
                let d = total - r;
                if d > d_max {
                    continue;
                }
                let mut acc = Rational::zero();
                for i in 0..=r {
                    for j in 0..=d {
                        if i + j == 0 {
                            continue;
                        }
                        let f = self.at(i, j);
                        if f.is_zero() {
                            continue;
                        }
                        let rest = g.at(r - i, d - j);
                        if !rest.is_zero() {
                            acc += rat_int(BigInt::from(i + j)) * f * rest;
                        }
                    }
                }
                g.set(r, d, acc / rat_int(BigInt::from(total)));
            }
        }
        Ok(g)
    }

    /// Truncated logarithm. Requires constant term one.
    pub fn log(&self) -> Result<BiSeries> {
        if !self.at(0, 0).is_one() {
            return Err(Error::ConstantTerm {
                op: "log",
                expected: "1",
            });
        }
        let (r_max, d_max) = (self.r_max, self.d_max);
        let mut h = BiSeries::zero(r_max, d_max);
        // |m| F_m = sum_{0 < k <= m} |k| h_k F_{m-k}
        for total in 1..=(r_max + d_max) {
            for r in 0..=total.min(r_max) {
                let d = total - r;
                if d > d_max {
                    continue;
                }
                let mut acc = rat_int(BigInt::from(total)) * self.at(r, d);
                for i in 0..=r {
                    for j in 0..=d {
                        if i + j == 0 || (i == r && j == d) {
                            continue;
                        }
                        let hk = h.at(i, j);
                        if hk.is_zero() {
                            continue;
                        }
                        let f = self.at(r - i, d - j);
                        if !f.is_zero() {
                            acc -= rat_int(BigInt::from(i + j)) * hk * f;
                        }
                    }
                }
                h.set(r, d, acc / rat_int(BigInt::from(total)));
            }
        }
        Ok(h)
    }
}

/// Univariate truncated series.
#[derive(Clone, Debug, PartialEq)]
pub struct UniSeries {
    coeffs: Vec<Rational>,
}

impl UniSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series keeps at least the constant term"
        );
        UniSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn log(&self) -> Result<UniSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTerm {
                op: "log",
                expected: "1",
            });
        }
        let n_max = self.order();
        let mut h = vec![Rational::zero(); n_max + 1];
        for n in 1..=n_max {
            let mut acc = rat_int(BigInt::from(n)) * &self.coeffs[n];
            for k in 1..n {
                acc -= rat_int(BigInt::from(k)) * &h[k] * &self.coeffs[n - k];
            }
            h[n] = acc / rat_int(BigInt::from(n));
        }
        Ok(UniSeries { coeffs: h })
    }

    pub fn exp(&self) -> Result<UniSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm {
                op: "exp",
                expected: "0",
            });
        }
        let n_max = self.order();
        let mut g = vec![Rational::zero(); n_max + 1];
        g[0] = Rational::one();
        for n in 1..=n_max {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += rat_int(BigInt::from(k)) * &self.coeffs[k] * &g[n - k];
            }
            g[n] = acc / rat_int(BigInt::from(n));
        }
        Ok(UniSeries { coeffs: g })
    }

    /// Multiplicative inverse. Requires a nonzero constant term.
    pub fn inverse(&self) -> Result<UniSeries> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ConstantTerm {
                op: "inverse",
                expected: "nonzero",
            });
        }
        let n_max = self.order();
        let mut inv = vec![Rational::zero(); n_max + 1];
        inv[0] = c0.recip();
        for n in 1..=n_max {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &inv[n - k];
            }
            inv[n] = -acc / c0;
        }
        Ok(UniSeries { coeffs: inv })
    }
}

/// `d^r / d!`: the `t^r z^d` coefficient of `F(t, z)`.
pub fn disconnected_coeff(r: usize, d: usize) -> Rational {
    let power: BigInt = BigInt::from(d).pow(r as u32);
    Rational::new(power, factorial(d as u64))
}

/// `F(t, z)` truncated to the given box.
pub fn term_count_series(r_max: usize, d_max: usize) -> BiSeries {
    BiSeries::from_fn(r_max, d_max, disconnected_coeff)
}

/// Connected counts extracted from `log F`, cached for a growing box.
#[derive(Debug)]
pub struct ConnectedCoefficients {
    log_f: BiSeries,
}

impl ConnectedCoefficients {
    pub fn new(r_max: usize, d_max: usize) -> Self {
        let log_f = term_count_series(r_max, d_max)
            .log()
            .expect("F has constant term one");
        ConnectedCoefficients { log_f }
    }

    pub fn covers(&self, r: usize, d: usize) -> bool {
        r <= self.log_f.r_max() && d <= self.log_f.d_max()
    }

    /// `(C_r^d, C_r^d / d!)`.
    pub fn get(&self, r: usize, d: usize) -> (Rational, Rational) {
        let c_hat = self
            .log_f
            .get(r, d)
            .expect("coefficient inside the truncation box")
            .clone();
        (c_hat.clone() * rat_int(factorial(d as u64)), c_hat)
    }

    pub fn log_series(&self) -> &BiSeries {
        &self.log_f
    }
}

static CONNECTED: Mutex<Option<Arc<ConnectedCoefficients>>> = Mutex::new(None);

/// Shared connected-coefficient table covering at least `(r, d)`.
pub fn connected_table(r: usize, d: usize) -> Arc<ConnectedCoefficients> {
    let mut slot = CONNECTED.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = slot.as_ref() {
        if t.covers(r, d) {
            return Arc::clone(t);
        }
    }
    let (r_old, d_old) = slot
        .as_ref()
        .map(|t| (t.log_f.r_max(), t.log_f.d_max()))
        .unwrap_or((DEFAULT_R_MAX, DEFAULT_D_MAX));
    let table = Arc::new(ConnectedCoefficients::new(r.max(r_old), d.max(d_old)));
    *slot = Some(Arc::clone(&table));
    table
}

/// `(C, C_hat)` with `C = C_r^d` normalized so `sum C t^r z^d / d! = log F`
/// and `C_hat = C / d!`, the coefficient entering the relation exponential.
pub fn connected_coeff(r: usize, d: usize) -> (Rational, Rational) {
    connected_table(r, d).get(r, d)
}

/// `p_r(z)` with `F(t, z) = e^z sum_r t^r p_r(z)`, coefficients listed by
/// ascending power of `z` (index `k` holds the `z^k` coefficient).
pub fn chain_polynomial(r: usize) -> Vec<Integer> {
    // [z^k] e^{-z} sum_d d^r z^d / d!  for k <= r; higher coefficients vanish.
    (0..=r)
        .map(|k| {
            let mut acc = Rational::zero();
            for d in 0..=k {
                let sign = if (k - d) % 2 == 0 { 1 } else { -1 };
                acc += disconnected_coeff(r, d)
                    * Rational::new(BigInt::from(sign), factorial((k - d) as u64));
            }
            assert!(
                acc.is_integer(),
                "chain polynomial coefficients are integers"
            );
            acc.to_integer()
        })
        .collect()
}

/// `c_{r,s}`: the coefficient of `z^{r-s}` in `p_r`.
pub fn chain_coeff(r: usize, s: usize) -> Integer {
    assert!(s <= r);
    chain_polynomial(r)[r - s].clone()
}

/// `phi(x) = 1 + sum_{l >= 1} (2l)!! x^l`, odd double factorials.
pub fn phi_series(order: usize) -> UniSeries {
    UniSeries::new(
        (0..=order)
            .map(|l| rat_int(odd_double_factorial(l as u64)))
            .collect(),
    )
}

/// `[x^l] log phi`.
pub fn alpha(l: usize) -> Rational {
    alphas(l)[l].clone()
}

/// `[x^l] phi^{-1}`.
pub fn beta(l: usize) -> Rational {
    betas(l)[l].clone()
}

/// All `alpha_0..=alpha_order` (index 0 holds zero).
pub fn alphas(order: usize) -> Vec<Rational> {
    phi_series(order)
        .log()
        .expect("phi has constant term one")
        .coeffs
}

/// All `beta_0..=beta_order` (index 0 holds one).
pub fn betas(order: usize) -> Vec<Rational> {
    phi_series(order)
        .inverse()
        .expect("phi has constant term one")
        .coeffs
}
