//! Donaldson series in structured form.
//!
//! A [`StructuredSeries`] stands for
//!
//! ```text
//! q_L = c · e^{Q/2} · (Σ_j a_j e^{K_j}) · ∏ f(C) / ∏ sinh(D)
//! ```
//!
//! with `f ∈ {sinh, cosh, exp}`, every class acting through its pairing with
//! the evaluation point. Sinh/cosh factors stay symbolic so the effective
//! divisor factors remain visible; [`StructuredSeries::expand`] turns the
//! whole product into an [`ExpandedSeries`] over a probe frame.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, frac, int, pow2, sign_power, Rational};
use crate::series::{ExpKind, ExpandedSeries, ProbeFrame};
use crate::surface::{CohClass, Surface};
use crate::sw::BasicClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Sinh,
    Cosh,
    Exp,
}

impl From<FactorKind> for ExpKind {
    fn from(k: FactorKind) -> Self {
        match k {
            FactorKind::Sinh => ExpKind::Sinh,
            FactorKind::Cosh => ExpKind::Cosh,
            FactorKind::Exp => ExpKind::Exp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub kind: FactorKind,
    pub class: CohClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpTerm {
    pub coefficient: Rational,
    pub class: CohClass,
}

/// Which construction produced a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesForm {
    StructureTheorem,
    GeneralTypeClosed,
    EllipticSinhRatio,
    EllipticExpSum,
    BlowUp,
}

/// Conventions stamped into every exported series.
pub const CONVENTIONS: &[&str] = &[
    "gaussian factor is exp(Q/2) with Q the intersection form of the carrying surface",
    "polarized value q_d(P_1^a_1 ... P_k^a_k) = (a_1! ... a_k!) * coefficient of t_1^a_1 ... t_k^a_k",
    "the exp(Q) factor in the rank formula for the two-form is read as exp(Q/2)",
    "general type multiplicities are defined by the closed-form factorization; sw = km / witten factor",
    "elliptic multiple fibres are modeled over the rationals as F_i = F/p_i; base curve genus 0",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredSeries {
    surface: Arc<Surface>,
    l: CohClass,
    pub form: SeriesForm,
    pub constant: Rational,
    pub gaussian: bool,
    /// `Σ a_j e^{K_j}`; a series without exponential sum carries `[(1, 0)]`.
    pub exp_terms: Vec<ExpTerm>,
    pub factors: Vec<Factor>,
    /// Classes `D` dividing the product as `1 / sinh(D)`.
    pub sinh_divisors: Vec<CohClass>,
    /// Effective divisor factors `C_i` tracked for the rank analysis.
    pub divisor_factors: Vec<CohClass>,
}

/// A named list of classes on one surface; builds probe frames and pairing vectors.
#[derive(Debug, Clone)]
pub struct ProbeSet {
    surface: Arc<Surface>,
    names: Vec<String>,
    classes: Vec<CohClass>,
}

impl ProbeSet {
    pub fn new(surface: &Arc<Surface>, probes: Vec<(String, CohClass)>) -> Result<Self> {
        for (name, c) in &probes {
            surface.pair(c, c).map_err(|e| Error::InvalidProbe(format!("{name}: {e}")))?;
        }
        let (names, classes) = probes.into_iter().unzip();
        Ok(Self { surface: Arc::clone(surface), names, classes })
    }

    /// One probe per basis class.
    pub fn basis(surface: &Arc<Surface>) -> Self {
        let probes = surface
            .basis()
            .iter()
            .map(|b| (b.clone(), surface.basis_class(b).expect("basis label")))
            .collect();
        Self::new(surface, probes).expect("basis classes live on the surface")
    }

    /// `count` probes with pseudo-random nonzero rational coordinates (fixed seed).
    pub fn generic(surface: &Arc<Surface>, count: usize, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let probes = (0..count)
            .map(|i| {
                let coords = surface
                    .basis()
                    .iter()
                    .map(|_| {
                        let n: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
                        let d: i64 = rng.gen_range(1..=7);
                        frac(n, d)
                    })
                    .collect();
                (format!("P{}", i + 1), surface.class(coords).expect("basis length"))
            })
            .collect();
        Self::new(surface, probes).expect("generated on the surface")
    }

    pub fn surface(&self) -> &Arc<Surface> {
        &self.surface
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn classes(&self) -> &[CohClass] {
        &self.classes
    }

    pub fn frame(&self, truncation: usize) -> Arc<ProbeFrame> {
        let gram = self
            .classes
            .iter()
            .map(|a| self.classes.iter().map(|b| self.surface.pair(a, b).expect("checked")).collect())
            .collect();
        Arc::new(ProbeFrame::new(self.names.clone(), gram, truncation).expect("probe names are unique"))
    }

    pub fn pairings(&self, c: &CohClass) -> Result<Vec<Rational>> {
        self.classes.iter().map(|p| self.surface.pair(c, p)).collect()
    }
}

/// Arguments of a Donaldson polynomial evaluation `q_{L,k}(P_1^{a_1}, …, x^b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRequest {
    pub arguments: Vec<(String, u32)>,
    pub point_power: u32,
    pub k: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupParity {
    Odd,
    Even,
}

impl StructuredSeries {
    pub fn surface(&self) -> &Arc<Surface> {
        &self.surface
    }

    pub fn l(&self) -> &CohClass {
        &self.l
    }

    /// Builds a series from its raw parts after checking every class lives on `surface`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        surface: &Arc<Surface>,
        l: CohClass,
        form: SeriesForm,
        constant: Rational,
        gaussian: bool,
        exp_terms: Vec<ExpTerm>,
        factors: Vec<Factor>,
        sinh_divisors: Vec<CohClass>,
        divisor_factors: Vec<CohClass>,
    ) -> Result<Self> {
        let all = std::iter::once(&l)
            .chain(exp_terms.iter().map(|t| &t.class))
            .chain(factors.iter().map(|f| &f.class))
            .chain(sinh_divisors.iter())
            .chain(divisor_factors.iter());
        for c in all {
            surface.pair(c, c)?;
        }
        Ok(Self {
            surface: Arc::clone(surface),
            l,
            form,
            constant,
            gaussian,
            exp_terms,
            factors,
            sinh_divisors,
            divisor_factors,
        })
    }

    /// Rewrites `c · Σ a_j e^{K_j} · ∏ f(C)` as a merged sum of exponentials
    /// (sinh and cosh become `±½`-weighted exponentials). The Gaussian factor
    /// is left out. Fails when the series has sinh divisors.
    pub fn exponential_sum(&self) -> Result<Vec<ExpTerm>> {
        if !self.sinh_divisors.is_empty() {
            return Err(Error::UnsupportedOperation(
                "a sinh quotient has no finite exponential sum".into(),
            ));
        }
        let half = frac(1, 2);
        let mut terms: Vec<ExpTerm> = self
            .exp_terms
            .iter()
            .map(|t| ExpTerm { coefficient: &t.coefficient * &self.constant, class: t.class.clone() })
            .collect();
        for f in &self.factors {
            let pieces: Vec<(Rational, CohClass)> = match f.kind {
                FactorKind::Exp => vec![(int(1), f.class.clone())],
                FactorKind::Sinh => vec![(half.clone(), f.class.clone()), (-half.clone(), f.class.neg())],
                FactorKind::Cosh => vec![(half.clone(), f.class.clone()), (half.clone(), f.class.neg())],
            };
            let mut next = Vec::with_capacity(terms.len() * pieces.len());
            for t in &terms {
                for (c, k) in &pieces {
                    next.push(ExpTerm { coefficient: &t.coefficient * c, class: t.class.add(k)? });
                }
            }
            terms = merge_terms(next);
        }
        Ok(merge_terms(terms))
    }

    /// Exact expansion to total degree `truncation` over the probes.
    pub fn expand(&self, probes: &ProbeSet, truncation: usize) -> Result<ExpandedSeries> {
        if !Arc::ptr_eq(&self.surface, &probes.surface) && *self.surface != *probes.surface {
            return Err(Error::IncompatibleClass("probe set lives on a different surface".into()));
        }
        let extra = self.sinh_divisors.len();
        let frame = probes.frame(truncation + extra);
        let linear = |c: &CohClass| -> Result<ExpandedSeries> {
            ExpandedSeries::linear_form(&frame, &probes.pairings(c)?)
        };

        let mut acc = ExpandedSeries::zero(&frame);
        for t in &self.exp_terms {
            let e = linear(&t.class)?.exp_like(ExpKind::Exp)?;
            acc = acc.add(&e.scale(&t.coefficient))?;
        }
        acc = acc.scale(&self.constant);
        if self.gaussian {
            let half_gram: Vec<Vec<Rational>> = frame
                .gram()
                .iter()
                .map(|row| row.iter().map(|g| g * frac(1, 2)).collect())
                .collect();
            let q = ExpandedSeries::quadratic_form(&frame, &half_gram)?;
            acc = acc.mul(&q.exp_like(ExpKind::Exp)?)?;
        }
        for f in &self.factors {
            acc = acc.mul(&linear(&f.class)?.exp_like(f.kind.into())?)?;
        }
        if extra == 0 {
            return Ok(acc);
        }
        let mut den = ExpandedSeries::one(&frame);
        for d in &self.sinh_divisors {
            den = den.mul(&linear(d)?.exp_like(ExpKind::Sinh)?)?;
        }
        let q = acc.exact_divide(&den)?;
        if q.truncation() != truncation {
            return Err(Error::Divisibility(format!(
                "sinh divisors pair to zero with every probe (quotient valid to degree {} only)",
                q.truncation()
            )));
        }
        Ok(q)
    }

    /// `q_{L,k}(P_1^{a_1}, …, x^b)` read off the expansion.
    ///
    /// Point insertions reduce by `q_{L,k}(…, x^b) = 4^{⌊b/2⌋} q_{L,k−⌊b/2⌋}(…, x^{b mod 2})`;
    /// the remaining `b ∈ {0, 1}` selects the degree-`d(L,k)` part or twice the
    /// degree-`(d(L,k) − 2)` part. Any other degree gives exactly 0.
    pub fn evaluate(&self, probes: &ProbeSet, req: &EvalRequest) -> Result<Rational> {
        let mut exps = vec![0u32; probes.names.len()];
        for (name, mult) in &req.arguments {
            let i = probes
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::InvalidProbe(format!("unknown probe {name:?}")))?;
            exps[i] += mult;
        }
        let degree: i64 = exps.iter().map(|&a| a as i64).sum();
        let pairs = (req.point_power / 2) as i64;
        let residual = req.point_power % 2;
        let k = req.k - pairs;
        let scale = Rational::from_integer(BigInt::from(4).pow(pairs as u32));
        let d = self.surface.virtual_dim(&self.l, k)?;
        let (target, weight) = if residual == 0 { (d, int(1)) } else { (d - 2, int(2)) };
        if degree != target || degree < 0 {
            return Ok(Rational::zero());
        }
        let expanded = self.expand(probes, degree as usize)?;
        Ok(expanded.polarized_coefficient(&exps)? * weight * scale)
    }
}

fn merge_terms(terms: Vec<ExpTerm>) -> Vec<ExpTerm> {
    let mut out: Vec<ExpTerm> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|o| o.class == t.class) {
            Some(o) => o.coefficient += t.coefficient,
            None => out.push(t),
        }
    }
    out.retain(|t| !t.coefficient.is_zero());
    out
}

fn half_integer_exponent(num: &Rational, what: &str) -> Result<BigInt> {
    let half = num * frac(1, 2);
    if !rational::is_integer(&half) {
        return Err(Error::CharacteristicViolation(format!(
            "{what} = {} is not an even integer",
            rational::format(num)
        )));
    }
    Ok(half.numer().clone())
}

/// Structure-theorem form `e^{Q/2} Σ_i (−1)^{(L² + K_i·L)/2} km(K_i) e^{K_i}`.
pub fn assemble_structure(surface: &Arc<Surface>, l: &CohClass, basics: &[BasicClass]) -> Result<StructuredSeries> {
    let l2 = surface.self_int(l)?;
    let mut exp_terms = Vec::with_capacity(basics.len());
    for b in basics {
        let kl = surface.pair(&b.class, l)?;
        let exponent = half_integer_exponent(&(&l2 + kl), "L² + K·L")?;
        exp_terms.push(ExpTerm { coefficient: sign_power(&exponent) * &b.km, class: b.class.clone() });
    }
    StructuredSeries::from_parts(
        surface,
        l.clone(),
        SeriesForm::StructureTheorem,
        int(1),
        true,
        exp_terms,
        Vec::new(),
        Vec::new(),
        Vec::new(),
    )
}

/// Closed form for a (possibly blown-up) surface of general type:
/// `q₀ e^{Q/2}(e^{−K_min} + (−1)^{1+p_g+L_min²} e^{K_min}) ∏_{odd} sinh(E_i) ∏_{even} cosh(E_i)`
/// with `q₀ = (−1)^{(L_min² − K_min·L_min)/2} 2^{2+¼(7e+11σ)(X_min)}`.
pub fn closed_form_general_type(surface: &Arc<Surface>, l: &CohClass) -> Result<StructuredSeries> {
    let dec = surface.decompose_l(l)?;
    let k_min = surface.k_min()?;
    let lmin2 = surface.self_int(&dec.l_min)?;
    let klmin = surface.pair(&k_min, &dec.l_min)?;
    let sign_exp = half_integer_exponent(&(&lmin2 - klmin), "L_min² − K_min·L_min")?;
    let witten_min = surface.minimal_char_numbers().witten_exponent()?;
    let constant = sign_power(&sign_exp) * pow2(witten_min);
    let second = sign_power(&(BigInt::from(1 + surface.p_g()) + lmin2.numer()));

    let mut factors = Vec::new();
    let mut divisors = Vec::new();
    for i in 1..=surface.blowups() {
        let e = surface.exceptional(i)?;
        if dec.odd_indices.contains(&i) {
            factors.push(Factor { kind: FactorKind::Sinh, class: e.clone() });
            divisors.push(e);
        } else {
            factors.push(Factor { kind: FactorKind::Cosh, class: e });
        }
    }
    StructuredSeries::from_parts(
        surface,
        l.clone(),
        SeriesForm::GeneralTypeClosed,
        constant,
        true,
        vec![
            ExpTerm { coefficient: int(1), class: k_min.neg() },
            ExpTerm { coefficient: second, class: k_min },
        ],
        factors,
        Vec::new(),
        divisors,
    )
}

/// Both stored elliptic closed forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticForms {
    /// `q₀ e^{Q/2} sinh^{p_g−1+n}(−F) / ∏ sinh(−F_i)`.
    pub ratio: StructuredSeries,
    /// `q₀ e^{Q/2} sinh^{p_g−1}(−F) ∏_i Σ_{a<p_i} e^{(2a−p_i+1)(−F_i)}`.
    pub exp_sum: StructuredSeries,
}

/// Closed forms for a minimal elliptic surface over `P¹` and vertical `L`,
/// with `q₀ = 2^{2+¼(7e+11σ)+(p_g−1)}`.
pub fn closed_form_elliptic(surface: &Arc<Surface>, l: &CohClass) -> Result<EllipticForms> {
    let f = surface.fiber()?;
    if l.coords()[1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::UnsupportedClass(format!(
            "L = {} is not vertical (a rational multiple of F)",
            l.describe()
        )));
    }
    let p_g = surface.p_g() as usize;
    let ps = surface.multiplicities().to_vec();
    let constant = pow2(surface.char_numbers().witten_exponent()? + p_g as i64 - 1);
    let minus_f = f.neg();
    let divisors = vec![f.clone(); p_g - 1];

    let mut ratio_factors = Vec::new();
    for _ in 0..(p_g - 1 + ps.len()) {
        ratio_factors.push(Factor { kind: FactorKind::Sinh, class: minus_f.clone() });
    }
    let sinh_divisors = (1..=ps.len())
        .map(|i| surface.multiple_fiber(i).map(|c| c.neg()))
        .collect::<Result<Vec<_>>>()?;
    let unit = vec![ExpTerm { coefficient: int(1), class: surface.zero_class() }];
    let ratio = StructuredSeries::from_parts(
        surface,
        l.clone(),
        SeriesForm::EllipticSinhRatio,
        constant.clone(),
        true,
        unit.clone(),
        ratio_factors,
        sinh_divisors,
        divisors.clone(),
    )?;

    let mut sum = unit;
    for (i, &p) in ps.iter().enumerate() {
        let minus_fi = surface.multiple_fiber(i + 1)?.neg();
        let mut next = Vec::new();
        for t in &sum {
            for a in 0..p as i64 {
                let shift = minus_fi.scale(&int(2 * a - p as i64 + 1));
                next.push(ExpTerm { coefficient: t.coefficient.clone(), class: t.class.add(&shift)? });
            }
        }
        sum = merge_terms(next);
    }
    let sinh_f = vec![Factor { kind: FactorKind::Sinh, class: minus_f }; p_g - 1];
    let exp_sum = StructuredSeries::from_parts(
        surface,
        l.clone(),
        SeriesForm::EllipticExpSum,
        constant,
        true,
        sum,
        sinh_f,
        Vec::new(),
        divisors,
    )?;
    Ok(EllipticForms { ratio, exp_sum })
}

/// The closed form appropriate to the surface (the ratio form for elliptic surfaces).
pub fn closed_form(surface: &Arc<Surface>, l: &CohClass) -> Result<StructuredSeries> {
    if surface.is_general_type() {
        closed_form_general_type(surface, l)
    } else {
        Ok(closed_form_elliptic(surface, l)?.ratio)
    }
}

/// Blow-up transform: lifts the series to `X̃ = X # P̄²`, multiplies by
/// `sinh(E)` (odd `L̃·E`, `L̃ = L + E`) or `cosh(E)` (even, `L̃ = L`), and lets
/// the Gaussian refer to the blown-up form `Q̃ = Q − ℓ_E²`, i.e. the factor
/// `exp(−½ℓ_E²)` is absorbed into `e^{Q̃/2}`.
pub fn blowup_transform(series: &StructuredSeries, parity: BlowupParity) -> Result<StructuredSeries> {
    let x = &series.surface;
    let blown = Arc::new(x.blow_up()?);
    let lift = |c: &CohClass| x.lift_to_blowup(&blown, c);
    let e = blown.exceptional(blown.blowups())?;
    let mut l = lift(&series.l)?;
    let mut factors = series
        .factors
        .iter()
        .map(|f| Ok(Factor { kind: f.kind, class: lift(&f.class)? }))
        .collect::<Result<Vec<_>>>()?;
    let mut divisors = series.divisor_factors.iter().map(lift).collect::<Result<Vec<_>>>()?;
    match parity {
        BlowupParity::Odd => {
            l = l.add(&e)?;
            factors.push(Factor { kind: FactorKind::Sinh, class: e.clone() });
            divisors.push(e);
        }
        BlowupParity::Even => factors.push(Factor { kind: FactorKind::Cosh, class: e }),
    }
    let exp_terms = series
        .exp_terms
        .iter()
        .map(|t| Ok(ExpTerm { coefficient: t.coefficient.clone(), class: lift(&t.class)? }))
        .collect::<Result<Vec<_>>>()?;
    let sinh_divisors = series.sinh_divisors.iter().map(lift).collect::<Result<Vec<_>>>()?;
    StructuredSeries::from_parts(
        &blown,
        l,
        SeriesForm::BlowUp,
        series.constant.clone(),
        series.gaussian,
        exp_terms,
        factors,
        sinh_divisors,
        divisors,
    )
}

/// Checks that all nonzero degrees of `s` have the given parity.
pub fn parity_violations(s: &ExpandedSeries, parity: u32) -> Vec<usize> {
    s.degrees().into_iter().filter(|d| (*d as u32) % 2 != parity).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{Polarization, SurfaceData};

    fn ell(p_g: u32, ps: &[u32]) -> Arc<Surface> {
        let pol = Polarization { pairings: vec![int(1)], square: int(2) };
        Arc::new(Surface::build(SurfaceData::elliptic(p_g, ps.to_vec(), pol, int(2))).unwrap())
    }

    fn gt(r: u32) -> Arc<Surface> {
        let pol = Polarization { pairings: vec![int(1); r as usize + 1], square: int(3) };
        Arc::new(Surface::build(SurfaceData::general_type(2, 1, r, pol, int(2))).unwrap())
    }

    #[test]
    fn gaussian_on_one_probe() {
        let s = ell(1, &[]);
        let probes = ProbeSet::new(&s, vec![("S".into(), s.transcendental())]).unwrap();
        let q = closed_form(&s, &s.zero_class()).unwrap();
        let e = q.expand(&probes, 4).unwrap();
        assert_eq!(e.coefficient(&[0]), int(1));
        assert_eq!(e.coefficient(&[2]), int(1));
        assert_eq!(e.coefficient(&[4]), frac(1, 2));
        assert_eq!(e.len(), 3);
    }

    #[test]
    fn elliptic_constant_is_one() {
        for p_g in 1..=3 {
            let s = ell(p_g, &[2, 3]);
            let forms = closed_form_elliptic(&s, &s.zero_class()).unwrap();
            assert_eq!(forms.ratio.constant, int(1));
            assert_eq!(forms.ratio.divisor_factors.len(), p_g as usize - 1);
        }
    }

    #[test]
    fn non_vertical_l_rejected() {
        let s = ell(1, &[2, 3]);
        let err = closed_form_elliptic(&s, &s.hyperplane()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedClass(_)));
    }

    #[test]
    fn general_type_factor_layout() {
        let s = gt(1);
        let e = s.exceptional(1).unwrap();
        let odd = closed_form_general_type(&s, &s.k_min().unwrap().add(&e).unwrap()).unwrap();
        assert_eq!(odd.factors[0].kind, FactorKind::Sinh);
        assert_eq!(odd.divisor_factors, vec![e.clone()]);
        let even = closed_form_general_type(&s, &s.k_min().unwrap()).unwrap();
        assert_eq!(even.factors[0].kind, FactorKind::Cosh);
        assert!(even.divisor_factors.is_empty());
        let minimal = closed_form_general_type(&gt(0), &gt(0).k_min().unwrap()).unwrap();
        assert_eq!(minimal.constant, int(1));
    }

    #[test]
    fn exponential_sum_of_sinh() {
        let s = gt(1);
        let e = s.exceptional(1).unwrap();
        let series = StructuredSeries::from_parts(
            &s,
            s.zero_class(),
            SeriesForm::StructureTheorem,
            int(2),
            false,
            vec![ExpTerm { coefficient: int(1), class: s.zero_class() }],
            vec![Factor { kind: FactorKind::Sinh, class: e.clone() }],
            vec![],
            vec![],
        )
        .unwrap();
        let sum = series.exponential_sum().unwrap();
        assert_eq!(sum.len(), 2);
        assert!(sum.contains(&ExpTerm { coefficient: int(1), class: e.clone() }));
        assert!(sum.contains(&ExpTerm { coefficient: int(-1), class: e.neg() }));
    }

    #[test]
    fn evaluate_wrong_degree_is_zero() {
        let s = ell(1, &[]);
        let probes = ProbeSet::new(&s, vec![("S".into(), s.transcendental())]).unwrap();
        let q = closed_form(&s, &s.zero_class()).unwrap();
        // d(0, 3) = 6; degree 5 matches neither case
        let req = EvalRequest { arguments: vec![("S".into(), 5)], point_power: 0, k: 3 };
        assert_eq!(q.evaluate(&probes, &req).unwrap(), int(0));
        let req = EvalRequest { arguments: vec![("S".into(), 4)], point_power: 0, k: 0 };
        assert_eq!(q.evaluate(&probes, &req).unwrap(), int(0));
    }

    #[test]
    fn evaluate_k3_degree_four() {
        let s = ell(1, &[]);
        let probes = ProbeSet::new(&s, vec![("S".into(), s.transcendental())]).unwrap();
        let q = closed_form(&s, &s.zero_class()).unwrap();
        // d(0, k) = 4k − 6 = 4 needs k = 5/2: use the point-class case d = 4 = d(0,3) − 2
        let req = EvalRequest { arguments: vec![("S".into(), 4)], point_power: 1, k: 3 };
        assert_eq!(q.evaluate(&probes, &req).unwrap(), int(24));
        let req = EvalRequest { arguments: vec![("S".into(), 2)], point_power: 0, k: 2 };
        assert_eq!(q.evaluate(&probes, &req).unwrap(), int(2));
    }

    #[test]
    fn unknown_probe_is_rejected() {
        let s = ell(1, &[]);
        let probes = ProbeSet::basis(&s);
        let q = closed_form(&s, &s.zero_class()).unwrap();
        let req = EvalRequest { arguments: vec![("X".into(), 1)], point_power: 0, k: 2 };
        assert!(matches!(q.evaluate(&probes, &req), Err(Error::InvalidProbe(_))));
    }

    #[test]
    fn blowup_even_keeps_constant_term() {
        let x = gt(0);
        let q = closed_form_general_type(&x, &x.k_min().unwrap()).unwrap();
        let b = blowup_transform(&q, BlowupParity::Even).unwrap();
        let px = ProbeSet::basis(&x);
        let pb = ProbeSet::basis(b.surface());
        let c0 = q.expand(&px, 0).unwrap().constant_term();
        let c1 = b.expand(&pb, 0).unwrap().constant_term();
        assert_eq!(c0, c1);
        assert_eq!(b.l(), &b.surface().k_min().unwrap());
    }
}
