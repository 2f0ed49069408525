//! Lambda_g socle integrals of psi and kappa classes.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::exactnum::{abs, bernoulli, factorial, multinomial, rat_int, Rational};
use crate::partitions::Partition;

/// `b_g = int_{M_{g,1}} psi^{2g-2} lambda_g
///      = (2^{2g-1} - 1) / 2^{2g-1} * |B_{2g}| / (2g)!`.
pub fn lambda_g_base(g: u32) -> Rational {
    assert!(g >= 1, "lambda_g base needs positive genus");
    let two_pow = BigInt::from(2).pow(2 * g - 1);
    let ratio = Rational::new(&two_pow - BigInt::one(), two_pow);
    ratio * abs(&bernoulli(2 * g as usize)) / rat_int(factorial(2 * g as u64))
}

/// `int_{M_{g,n}} psi_1^{a_1} ... psi_n^{a_n} lambda_g` by the lambda_g
/// formula: `multinomial(2g - 3 + n; a) * b_g`, zero off degree.
pub fn descendent_lambda_integral(g: u32, n: usize, a: &[u32]) -> Rational {
    assert!(g >= 1, "lambda_g formula needs positive genus");
    assert_eq!(a.len(), n, "one exponent per marking");
    let top = 2 * g as i64 - 3 + n as i64;
    let total: i64 = a.iter().map(|&x| x as i64).sum();
    if top < 0 || total != top {
        return Rational::zero();
    }
    let parts: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    rat_int(multinomial(top as u64, &parts)) * lambda_g_base(g)
}

/// `int_{M_{0,n}} psi_1^{a_1} ... psi_n^{a_n} = (n-3)! / prod a_i!`.
pub fn genus0_psi_integral(n: usize, a: &[u32]) -> Rational {
    assert_eq!(a.len(), n, "one exponent per marking");
    if n < 3 {
        return Rational::zero();
    }
    let total: u64 = a.iter().map(|&x| x as u64).sum();
    if total != n as u64 - 3 {
        return Rational::zero();
    }
    let parts: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    rat_int(multinomial(total, &parts))
}

/// `int_{M_{g,n}} prod psi_i^{a_i} * kappa_partition * lambda_g`, with
/// `lambda_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SocleIntegrand {
    pub g: u32,
    pub psi: Vec<u32>,
    pub kappa: Partition,
}

impl SocleIntegrand {
    pub fn new(g: u32, psi: Vec<u32>, kappa: Partition) -> Self {
        SocleIntegrand { g, psi, kappa }
    }

    pub fn n(&self) -> usize {
        self.psi.len()
    }

    pub fn degree(&self) -> u32 {
        self.psi.iter().sum::<u32>() + self.kappa.weight()
    }

    /// Degree at which the integral can be nonzero.
    pub fn socle_degree(&self) -> i64 {
        if self.g == 0 {
            self.n() as i64 - 3
        } else {
            2 * self.g as i64 - 3 + self.n() as i64
        }
    }
}

type Key = (u32, usize, Vec<u32>, Partition);

fn cache() -> &'static Mutex<HashMap<Key, Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Evaluates the integrand by trading kappa classes for extra markings,
/// largest part first: `kappa_b` becomes `psi_{n+1}^{b+1}` on the space with
/// one more point, and every remaining `kappa_c` becomes
/// `kappa_c - psi_{n+1}^c`.
pub fn socle_integral(itg: &SocleIntegrand) -> Rational {
    if itg.degree() as i64 != itg.socle_degree() {
        return Rational::zero();
    }
    let mut nonzero: Vec<u32> = itg.psi.iter().copied().filter(|&x| x > 0).collect();
    nonzero.sort_unstable();
    let key = (itg.g, itg.n(), nonzero, itg.kappa.clone());
    if let Some(v) = cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return v.clone();
    }
    let value = evaluate(itg);
    cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, value.clone());
    value
}

fn evaluate(itg: &SocleIntegrand) -> Rational {
    let parts = itg.kappa.parts();
    if parts.is_empty() {
        return if itg.g == 0 {
            genus0_psi_integral(itg.n(), &itg.psi)
        } else {
            descendent_lambda_integral(itg.g, itg.n(), &itg.psi)
        };
    }
    let b = parts[0];
    let rest = &parts[1..];
    let mut total = Rational::zero();
    for mask in 0u32..(1 << rest.len()) {
        let mut extra = b + 1;
        let mut remaining = Vec::new();
        for (j, &c) in rest.iter().enumerate() {
            if mask & (1 << j) != 0 {
                extra += c;
            } else {
                remaining.push(c);
            }
        }
        let mut psi = itg.psi.clone();
        psi.push(extra);
        let term = socle_integral(&SocleIntegrand::new(itg.g, psi, Partition::new(remaining)));
        if mask.count_ones() % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

/// Kappa consumption order only changes the bookkeeping, not the value;
/// this variant consumes the smallest part first.
pub fn socle_integral_smallest_first(itg: &SocleIntegrand) -> Rational {
    if itg.degree() as i64 != itg.socle_degree() {
        return Rational::zero();
    }
    let parts = itg.kappa.parts();
    if parts.is_empty() {
        return socle_integral(itg);
    }
    let b = *parts.last().expect("nonempty");
    let rest = &parts[..parts.len() - 1];
    let mut total = Rational::zero();
    for mask in 0u32..(1 << rest.len()) {
        let mut extra = b + 1;
        let mut remaining = Vec::new();
        for (j, &c) in rest.iter().enumerate() {
            if mask & (1 << j) != 0 {
                extra += c;
            } else {
                remaining.push(c);
            }
        }
        let mut psi = itg.psi.clone();
        psi.push(extra);
        let term = socle_integral_smallest_first(&SocleIntegrand::new(
            itg.g,
            psi,
            Partition::new(remaining),
        ));
        if mask.count_ones() % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}
