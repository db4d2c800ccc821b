//! Numerical consequences of the Donaldson series for moduli of sheaves:
//! existence bounds for semistable bundles, the odd-degree wall criterion and
//! the generic rank of the canonical two-form with its nonvanishing certificate.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::donaldson::{closed_form, EvalRequest, FactorKind, ProbeSet};
use crate::error::{Error, Result};
use crate::rational::{self, factorial, frac, Rational};
use crate::surface::{CohClass, Surface};

/// Seed of the generic probe classes used to certify series orders.
pub const GENERIC_PROBE_SEED: u64 = 0x5eed_0fd0;

/// Hypotheses the engine cannot verify and echoes in every rank report.
pub const RANK_ASSUMPTIONS: &[&str] = &[
    "k is large: the moduli space of H-stable sheaves is irreducible, generically smooth and of the expected dimension d(L,k)",
    "the rank statement follows from nonvanishing of the Donaldson polynomial on (omega + conj omega)^(d-e) and H^e; only that polynomial identity is computed here",
    "q_L has the shape prod(C_i) * exp(Q/2) * (q_0 + q_2 + ...) with effective C_i and nonzero q_0",
];

pub const EXISTENCE_ASSUMPTIONS: &[&str] = &[
    "existence of an H-semistable bundle with d(L,k) <= d_upper is inferred from q_L being nonzero in its order; only the order and the mod-4 case are computed",
    "the series order is certified on generic rational probe classes at the stated truncation",
];

pub const LOWER_BOUND_HYPOTHESIS: &str = "the lower bound d(L,k) >= odd(L) - 3(1+p_g) needs H.L odd and H close to a class pulled back from the minimal model: H.E_i < eps * sqrt(H^2) for every exceptional curve with eps sufficiently small (eps is not quantified)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseMod4 {
    /// `−L² − 3(1+p_g) ≡ n (mod 4)`.
    N,
    /// `−L² − 3(1+p_g) ≡ n + 2 (mod 4)`.
    #[serde(rename = "n_plus_2")]
    NPlus2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Specialization {
    GeneralType,
    Elliptic,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceReport {
    pub order_n: usize,
    pub d_upper: i64,
    pub k_at_bound: i64,
    pub case_mod4: CaseMod4,
    pub specialization: Specialization,
    /// `odd(L) + 3` (general type) or `n + p_g − 1` (elliptic).
    pub closed_bound: i64,
    pub closed_bound_holds: bool,
    /// `odd(L) − 3(1 + p_g)`, general type only.
    pub d_lower_remark: Option<i64>,
    pub truncation: usize,
    pub assumptions: Vec<String>,
}

/// Order-based existence bound `d(L,k) ≤ n` or `n + 2` according to the class
/// of `−L² − 3(1+p_g)` modulo 4.
pub fn existence_bound(surface: &Arc<Surface>, l: &CohClass, truncation: usize) -> Result<ExistenceReport> {
    let series = closed_form(surface, l)?;
    let probes = ProbeSet::generic(surface, 2, GENERIC_PROBE_SEED);
    let order = series.expand(&probes, truncation)?.order()?;
    let base = surface.virtual_dim(l, 0)?;
    let (d_upper, case_mod4) = match (base - order as i64).rem_euclid(4) {
        0 => (order as i64, CaseMod4::N),
        2 => (order as i64 + 2, CaseMod4::NPlus2),
        _ => {
            return Err(Error::Invariant(format!(
                "series order {order} has the wrong parity for -L^2 - 3(1+p_g) = {base}"
            )))
        }
    };
    let k_at_bound = surface
        .admissible_k(l, d_upper)?
        .ok_or_else(|| Error::Invariant(format!("no k with d(L,k) = {d_upper}")))?;
    let p_g = surface.p_g() as i64;
    let mut assumptions: Vec<String> = EXISTENCE_ASSUMPTIONS.iter().map(|s| s.to_string()).collect();
    let (specialization, closed_bound, d_lower_remark) = if surface.is_general_type() {
        let odd = surface.odd_count(l)? as i64;
        assumptions.push(LOWER_BOUND_HYPOTHESIS.to_string());
        (Specialization::GeneralType, odd + 3, Some(odd - 3 * (1 + p_g)))
    } else {
        let n = surface.multiplicities().len() as i64;
        (Specialization::Elliptic, n + p_g - 1, None)
    };
    Ok(ExistenceReport {
        order_n: order,
        d_upper,
        k_at_bound,
        case_mod4,
        specialization,
        closed_bound,
        closed_bound_holds: d_upper <= closed_bound,
        d_lower_remark,
        truncation,
        assumptions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WallStatus {
    /// `H·L` is an odd integer, so no wall `H·(L − 2F) = 0` can pass through `H`.
    Good,
    Unknown,
}

pub fn wall_check(surface: &Surface, h: &CohClass, l: &CohClass) -> Result<WallStatus> {
    if !h.is_integral() {
        return Ok(WallStatus::Unknown);
    }
    let hl = surface.pair(h, l)?;
    let odd = rational::is_integer(&hl) && hl.numer() % BigInt::from(2) != BigInt::zero();
    Ok(if odd { WallStatus::Good } else { WallStatus::Unknown })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauRankReport {
    pub e_divisors: i64,
    pub d: i64,
    pub rank: i64,
    pub degenerate: bool,
    /// `2k − 2p_g − 1` for elliptic surfaces.
    pub elliptic_rank: Option<i64>,
    pub assumptions: Vec<String>,
}

/// Generic rank `⌊(d(L,k) − e)/2⌋` of the two-form, `e` the number of
/// effective divisor factors of `q_L`.
pub fn tau_rank(surface: &Arc<Surface>, l: &CohClass, k: i64) -> Result<TauRankReport> {
    let series = closed_form(surface, l)?;
    let e = series.divisor_factors.len() as i64;
    let d = surface.virtual_dim(l, k)?;
    let degenerate = d < e;
    let rank = if degenerate { 0 } else { (d - e).div_euclid(2) };
    let elliptic_rank = if surface.is_general_type() {
        None
    } else {
        let closed = 2 * k - 2 * surface.p_g() as i64 - 1;
        if !degenerate && closed != rank {
            return Err(Error::Invariant(format!(
                "rank {rank} differs from 2k - 2p_g - 1 = {closed}"
            )));
        }
        Some(closed)
    };
    Ok(TauRankReport {
        e_divisors: e,
        d,
        rank,
        degenerate,
        elliptic_rank,
        assumptions: RANK_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauCertificate {
    pub d: i64,
    pub e: i64,
    /// `q_{L,k}(W^{d−e}, H^e)` from the expanded series.
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    /// `q_{L,k}(W^{d−e+2}, H^{e−2})`, present when `e ≥ 2`.
    #[serde(with = "opt_rational")]
    pub vanishing: Option<Rational>,
    /// `q₀ (∏ H·C_i) (w/2)^{(d−e)/2} · (d−e)! e! / ((d−e)/2)!` from the structured form.
    #[serde(with = "rational::serde_str")]
    pub predicted: Rational,
    /// Constant term `q₀` of the residual factor after the divisor factors.
    #[serde(with = "rational::serde_str")]
    pub leading_constant: Rational,
    #[serde(with = "rational::serde_str")]
    pub divisor_pairing_product: Rational,
    #[serde(with = "rational::serde_str")]
    pub multinomial: Rational,
}

mod opt_rational {
    use crate::rational::{self, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&rational::format(q)),
            None => s.serialize_none(),
        }
    }
}

/// Evaluates the Donaldson polynomial on `(ω+ω̄)^{d−e} H^e` (nonzero) and on
/// `(ω+ω̄)^{d−e+2} H^{e−2}` (zero), and the closed-form prediction of the first.
pub fn tau_certificate(surface: &Arc<Surface>, l: &CohClass, k: i64) -> Result<TauCertificate> {
    let series = closed_form(surface, l)?;
    let e = series.divisor_factors.len() as i64;
    let d = surface.virtual_dim(l, k)?;
    if d < e {
        return Err(Error::DegreeBookkeeping(format!("d(L,k) = {d} is below e = {e}")));
    }
    if (d - e) % 2 != 0 {
        return Err(Error::DegreeBookkeeping(format!(
            "d(L,k) = {d} and e = {e} have different parities"
        )));
    }
    let h = surface.hyperplane();
    let w = surface.transcendental();
    let probes = ProbeSet::new(surface, vec![("W".into(), w.clone()), ("H".into(), h.clone())])?;
    let request = |w_mult: i64, h_mult: i64| EvalRequest {
        arguments: vec![("W".into(), w_mult as u32), ("H".into(), h_mult as u32)],
        point_power: 0,
        k,
    };
    let value = series.evaluate(&probes, &request(d - e, e))?;
    let vanishing = if e >= 2 { Some(series.evaluate(&probes, &request(d - e + 2, e - 2))?) } else { None };

    // Along t_H·H + t_W·W every sinh(C) starts with (H·C) t_H, cosh and exp start with 1,
    // and W only meets the Gaussian factor exp(w t_W²/2).
    let exp_sum: Rational = series.exp_terms.iter().map(|t| t.coefficient.clone()).sum();
    let mut lead = &series.constant * exp_sum;
    for f in series.factors.iter().filter(|f| f.kind == FactorKind::Sinh) {
        lead *= surface.pair(&h, &f.class)?;
    }
    for div in &series.sinh_divisors {
        let hd = surface.pair(&h, div)?;
        if hd.is_zero() {
            return Err(Error::Divisibility("H pairs to zero with a sinh divisor".into()));
        }
        lead /= hd;
    }
    let mut divisor_pairing_product = Rational::one();
    for c in &series.divisor_factors {
        divisor_pairing_product *= surface.pair(&h, c)?;
    }
    let leading_constant = if divisor_pairing_product.is_zero() {
        Rational::zero()
    } else {
        &lead / &divisor_pairing_product
    };
    let m = ((d - e) / 2) as u64;
    let w_sq = surface.self_int(&w)?;
    let mut gauss = Rational::one();
    for _ in 0..m {
        gauss *= &w_sq * frac(1, 2);
    }
    let multinomial = Rational::new(factorial((d - e) as u64) * factorial(e as u64), factorial(m));
    let predicted = &lead * gauss * &multinomial;
    Ok(TauCertificate {
        d,
        e,
        value,
        vanishing,
        predicted,
        leading_constant,
        divisor_pairing_product,
        multinomial,
    })
}
