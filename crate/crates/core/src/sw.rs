//! Seiberg–Witten basic classes and their Kronheimer–Mrowka multiplicities.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::donaldson::closed_form_general_type;
use crate::error::{Error, Result};
use crate::rational::{self, binomial, frac, int, pow2, sign_power, Rational};
use crate::surface::{CohClass, Surface};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicClass {
    pub class: CohClass,
    pub sw: Rational,
    pub km: Rational,
}

/// `2^{2 + ¼(7e + 11σ)}`, converting SW multiplicities into KM multiplicities.
pub fn witten_factor(surface: &Surface) -> Result<Rational> {
    Ok(pow2(surface.char_numbers().witten_exponent()?))
}

/// Basic classes of a minimal elliptic surface over `P¹`:
/// `K = −K_X + 2(dF + Σ a_i F_i)` for `0 ≤ d ≤ p_g − 1`, `0 ≤ a_i < p_i`, with
/// `sw = (−1)^d C(p_g − 1, d)`. Tuples landing on the same rational class are
/// merged by adding multiplicities.
pub fn basic_classes_elliptic(surface: &Surface) -> Result<Vec<BasicClass>> {
    let f = surface.fiber()?;
    let p_g = surface.p_g() as i64;
    let ps = surface.multiplicities();
    let witten = witten_factor(surface)?;
    let canonical = surface.canonical();

    let mut out: Vec<BasicClass> = Vec::new();
    let mut tuple = vec![0u32; ps.len()];
    loop {
        for d in 0..p_g {
            let mut half = f.scale(&int(d));
            for (i, &a) in tuple.iter().enumerate() {
                half = half.add(&f.scale(&frac(a as i64, ps[i] as i64)))?;
            }
            let class = half.scale(&int(2)).sub(&canonical)?;
            let sw = sign_power(&BigInt::from(d)) * Rational::from_integer(binomial(p_g as u64 - 1, d as u64));
            match out.iter_mut().find(|b| b.class == class) {
                Some(b) => b.sw += sw,
                None => out.push(BasicClass { class, sw, km: Rational::zero() }),
            }
        }
        // odometer over 0 ≤ a_i < p_i
        let mut i = 0;
        while i < tuple.len() {
            tuple[i] += 1;
            if tuple[i] < ps[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == tuple.len() {
            break;
        }
    }
    out.retain(|b| !b.sw.is_zero());
    for b in &mut out {
        b.km = &b.sw * &witten;
    }
    Ok(out)
}

/// Basic classes `±K_min + Σ ±E_i` of a surface of general type, in the order
/// `(ε_0, ε_1, …, ε_r)` with `−` before `+`. Multiplicities are read off the
/// closed-form series for `L`: the coefficient of `e^{K}` there equals
/// `(−1)^{(L² + K·L)/2} km(K)`.
pub fn basic_classes_general_type(surface: &Arc<Surface>, l: &CohClass) -> Result<Vec<BasicClass>> {
    let closed = closed_form_general_type(surface, l)?;
    let sum = closed.exponential_sum()?;
    let witten = witten_factor(surface)?;
    let k_min = surface.k_min()?;
    let r = surface.blowups();
    let l2 = surface.self_int(l)?;

    let mut out = Vec::with_capacity(1 << (r + 1));
    for mask in 0u64..(1u64 << (r + 1)) {
        // bit j set means ε_j = +1; ε_0 is the most significant choice
        let sign = |j: usize| if mask >> (r - j) & 1 == 1 { int(1) } else { int(-1) };
        let mut class = k_min.scale(&sign(0));
        for i in 1..=r {
            class = class.add(&surface.exceptional(i)?.scale(&sign(i)))?;
        }
        let coefficient = sum
            .iter()
            .find(|t| t.class == class)
            .map(|t| t.coefficient.clone())
            .unwrap_or_else(Rational::zero);
        let exponent = &l2 + surface.pair(&class, l)?;
        let half = exponent * frac(1, 2);
        if !rational::is_integer(&half) {
            return Err(Error::CharacteristicViolation(format!(
                "L² + K·L is odd for K = {}",
                class.describe()
            )));
        }
        let km = sign_power(half.numer()) * coefficient;
        let sw = &km / &witten;
        out.push(BasicClass { class, sw, km });
    }
    Ok(out)
}

/// Basic classes of either surface family (`L` is only used for general type).
pub fn basic_classes(surface: &Arc<Surface>, l: &CohClass) -> Result<Vec<BasicClass>> {
    if surface.is_general_type() {
        basic_classes_general_type(surface, l)
    } else {
        basic_classes_elliptic(surface)
    }
}
