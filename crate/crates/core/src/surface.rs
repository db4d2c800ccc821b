//! Regular algebraic surfaces with `p_g > 0`: classical invariants and a
//! rational model of the relevant part of `H²(X)` with its intersection form.
//!
//! General type surfaces use the basis `K_min, E_1 … E_r, H, W`; minimal
//! elliptic surfaces over `P¹` use `F, H, W`, with each multiple fibre
//! represented over the rationals as `F_i = F / p_i`. `H` is a polarization
//! given by its pairings, `W` is the class of `ω + ω̄`, orthogonal to every
//! algebraic class, with `W² = w > 0`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SurfaceKind {
    GeneralType { p_g: u32, k_min_sq: i64, blowups: u32 },
    EllipticOverP1 { p_g: u32, multiplicities: Vec<u32> },
}

/// Polarization `H`: its pairings with the algebraic basis classes
/// (`K_min, E_1 … E_r` or `F`) and its square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polarization {
    #[serde(with = "rational::serde_vec")]
    pub pairings: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub square: Rational,
}

/// Raw `(e, σ)` accepted in place of the Noether-derived values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharOverride {
    pub e: i64,
    pub sigma: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceData {
    #[serde(flatten)]
    pub kind: SurfaceKind,
    pub polarization: Polarization,
    #[serde(with = "rational::serde_str")]
    pub w: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_override: Option<CharOverride>,
}

impl SurfaceData {
    pub fn general_type(p_g: u32, k_min_sq: i64, blowups: u32, polarization: Polarization, w: Rational) -> Self {
        Self {
            kind: SurfaceKind::GeneralType { p_g, k_min_sq, blowups },
            polarization,
            w,
            char_override: None,
        }
    }

    pub fn elliptic(p_g: u32, multiplicities: Vec<u32>, polarization: Polarization, w: Rational) -> Self {
        Self {
            kind: SurfaceKind::EllipticOverP1 { p_g, multiplicities },
            polarization,
            w,
            char_override: None,
        }
    }

    pub fn p_g(&self) -> u32 {
        match &self.kind {
            SurfaceKind::GeneralType { p_g, .. } | SurfaceKind::EllipticOverP1 { p_g, .. } => *p_g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharNumbers {
    pub e: i64,
    pub sigma: i64,
    pub b_plus: i64,
    pub chi: i64,
}

impl CharNumbers {
    /// `2 + ¼(7e + 11σ)`, the exponent of the Witten factor.
    pub fn witten_exponent(&self) -> Result<i64> {
        let s = 7 * self.e + 11 * self.sigma;
        if s.rem_euclid(4) != 0 {
            return Err(Error::InconsistentInvariants(format!(
                "7e + 11σ = {s} is not divisible by 4"
            )));
        }
        Ok(2 + s / 4)
    }

    /// `2e + 3σ`, the square of every basic class of a simple type surface.
    pub fn simple_type_square(&self) -> i64 {
        2 * self.e + 3 * self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Algebraic,
    TranscendentalProbe,
}

/// Rational vector over a surface basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohClass {
    basis: Arc<[String]>,
    coords: Vec<Rational>,
}

impl CohClass {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn kind(&self) -> ClassKind {
        let w = self.basis.iter().position(|b| b == "W").expect("every basis carries W");
        if self.coords[w].is_zero() {
            ClassKind::Algebraic
        } else {
            ClassKind::TranscendentalProbe
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(rational::is_integer)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::IncompatibleClass(format!(
                "basis [{}] vs [{}]",
                self.basis.join(", "),
                other.basis.join(", ")
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Self { basis: Arc::clone(&self.basis), coords })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { basis: Arc::clone(&self.basis), coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Compact text form such as `-K_min + 1/2*E_1`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for (label, c) in self.basis.iter().zip(&self.coords) {
            if c.is_zero() {
                continue;
            }
            let body = if c.is_one() {
                label.clone()
            } else if *c == -Rational::one() {
                format!("-{label}")
            } else {
                format!("{}*{label}", rational::format_short(c))
            };
            parts.push(body);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

/// Result of splitting `L` into its minimal-model part and its exceptional part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub l_min: CohClass,
    /// 1-based indices `i` with `L·E_i` odd.
    pub odd_indices: BTreeSet<usize>,
    pub odd_count: usize,
}

/// A constructed surface: validated data, basis and Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    data: SurfaceData,
    basis: Arc<[String]>,
    gram: Vec<Vec<Rational>>,
    chars: CharNumbers,
}

impl Surface {
    pub fn build(data: SurfaceData) -> Result<Self> {
        let p_g = data.p_g();
        if p_g < 1 {
            return Err(Error::UnsupportedSurface("p_g must be at least 1 (b_+ ≥ 3)".into()));
        }
        if data.w <= Rational::zero() {
            return Err(Error::InvalidProbe(format!(
                "w = W·W must be positive, got {}",
                rational::format(&data.w)
            )));
        }
        let (basis, gram) = match &data.kind {
            SurfaceKind::GeneralType { k_min_sq, blowups, .. } => {
                let r = *blowups as usize;
                let pol = &data.polarization;
                if pol.pairings.len() != r + 1 {
                    return Err(Error::Dimension { expected: r + 1, actual: pol.pairings.len() });
                }
                let mut labels = vec!["K_min".to_string()];
                labels.extend((1..=r).map(|i| format!("E_{i}")));
                labels.push("H".into());
                labels.push("W".into());
                let n = r + 3;
                let mut g = vec![vec![Rational::zero(); n]; n];
                g[0][0] = int(*k_min_sq);
                for i in 1..=r {
                    g[i][i] = int(-1);
                }
                let h = r + 1;
                for (j, p) in pol.pairings.iter().enumerate() {
                    g[h][j] = p.clone();
                    g[j][h] = p.clone();
                }
                g[h][h] = pol.square.clone();
                g[h + 1][h + 1] = data.w.clone();
                (labels, g)
            }
            SurfaceKind::EllipticOverP1 { multiplicities, .. } => {
                if let Some(&p) = multiplicities.iter().find(|&&p| p < 2) {
                    return Err(Error::UnsupportedSurface(format!(
                        "multiple fibre multiplicities must be at least 2, got {p}"
                    )));
                }
                if !multiplicities.is_empty() {
                    let g = multiplicities.iter().fold(0u32, |acc, &p| acc.gcd(&p));
                    if g % 2 == 0 {
                        return Err(Error::UnsupportedSurface(format!(
                            "2 divides gcd{multiplicities:?} = {g}; the model needs 2 ∤ gcd(p_1, …, p_n)"
                        )));
                    }
                }
                let pol = &data.polarization;
                if pol.pairings.len() != 1 {
                    return Err(Error::Dimension { expected: 1, actual: pol.pairings.len() });
                }
                if pol.pairings[0] <= Rational::zero() {
                    return Err(Error::InvalidProbe("H·F must be positive".into()));
                }
                let labels = vec!["F".to_string(), "H".into(), "W".into()];
                let mut g = vec![vec![Rational::zero(); 3]; 3];
                g[0][1] = pol.pairings[0].clone();
                g[1][0] = pol.pairings[0].clone();
                g[1][1] = pol.square.clone();
                g[2][2] = data.w.clone();
                (labels, g)
            }
        };
        let chars = Self::derive_char_numbers(&data)?;
        Ok(Self { data, basis: basis.into(), gram, chars })
    }

    fn data_canonical_square(data: &SurfaceData) -> i64 {
        match &data.kind {
            SurfaceKind::GeneralType { k_min_sq, blowups, .. } => k_min_sq - *blowups as i64,
            SurfaceKind::EllipticOverP1 { .. } => 0,
        }
    }

    fn derive_char_numbers(data: &SurfaceData) -> Result<CharNumbers> {
        let p_g = data.p_g() as i64;
        let chi = 1 + p_g;
        let k2 = Self::data_canonical_square(data);
        let (e, sigma) = match data.char_override {
            Some(CharOverride { e, sigma }) => {
                if 2 * e + 3 * sigma != k2 {
                    return Err(Error::InconsistentInvariants(format!(
                        "override 2e + 3σ = {} differs from K² = {k2}",
                        2 * e + 3 * sigma
                    )));
                }
                (e, sigma)
            }
            None => {
                let e = 12 * chi - k2;
                let num = k2 - 2 * e;
                if num % 3 != 0 {
                    return Err(Error::InconsistentInvariants(format!(
                        "σ = (K² − 2e)/3 = {num}/3 is not an integer"
                    )));
                }
                (e, num / 3)
            }
        };
        Ok(CharNumbers { e, sigma, b_plus: 1 + 2 * p_g, chi })
    }

    pub fn data(&self) -> &SurfaceData {
        &self.data
    }

    pub fn p_g(&self) -> u32 {
        self.data.p_g()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn char_numbers(&self) -> CharNumbers {
        self.chars
    }

    /// `K_X²`.
    pub fn canonical_square(&self) -> i64 {
        Self::data_canonical_square(&self.data)
    }

    pub fn is_general_type(&self) -> bool {
        matches!(self.data.kind, SurfaceKind::GeneralType { .. })
    }

    pub fn blowups(&self) -> usize {
        match self.data.kind {
            SurfaceKind::GeneralType { blowups, .. } => blowups as usize,
            SurfaceKind::EllipticOverP1 { .. } => 0,
        }
    }

    pub fn multiplicities(&self) -> &[u32] {
        match &self.data.kind {
            SurfaceKind::EllipticOverP1 { multiplicities, .. } => multiplicities,
            SurfaceKind::GeneralType { .. } => &[],
        }
    }

    /// Characteristic numbers of the minimal model (each blow-up adds one to
    /// `e` and subtracts one from `σ`).
    pub fn minimal_char_numbers(&self) -> CharNumbers {
        let r = self.blowups() as i64;
        CharNumbers { e: self.chars.e - r, sigma: self.chars.sigma + r, ..self.chars }
    }

    pub fn class(&self, coords: Vec<Rational>) -> Result<CohClass> {
        if coords.len() != self.basis.len() {
            return Err(Error::Dimension { expected: self.basis.len(), actual: coords.len() });
        }
        Ok(CohClass { basis: Arc::clone(&self.basis), coords })
    }

    pub fn zero_class(&self) -> CohClass {
        CohClass { basis: Arc::clone(&self.basis), coords: vec![Rational::zero(); self.basis.len()] }
    }

    pub fn basis_class(&self, label: &str) -> Result<CohClass> {
        let i = self
            .basis
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| Error::IncompatibleClass(format!("no basis class named {label}")))?;
        let mut c = self.zero_class();
        c.coords[i] = Rational::one();
        Ok(c)
    }

    fn require_general_type(&self, what: &str) -> Result<()> {
        if self.is_general_type() {
            Ok(())
        } else {
            Err(Error::UnsupportedOperation(format!("{what} needs a general type surface")))
        }
    }

    fn require_elliptic(&self, what: &str) -> Result<()> {
        if self.is_general_type() {
            Err(Error::UnsupportedOperation(format!("{what} needs an elliptic surface")))
        } else {
            Ok(())
        }
    }

    pub fn k_min(&self) -> Result<CohClass> {
        self.require_general_type("K_min")?;
        self.basis_class("K_min")
    }

    /// Exceptional curve `E_i`, 1-based.
    pub fn exceptional(&self, i: usize) -> Result<CohClass> {
        self.require_general_type("E_i")?;
        if i == 0 || i > self.blowups() {
            return Err(Error::IncompatibleClass(format!("no exceptional curve E_{i}")));
        }
        self.basis_class(&format!("E_{i}"))
    }

    pub fn fiber(&self) -> Result<CohClass> {
        self.require_elliptic("F")?;
        self.basis_class("F")
    }

    /// Multiple fibre `F_i = F / p_i`, 1-based.
    pub fn multiple_fiber(&self, i: usize) -> Result<CohClass> {
        let ps = self.multiplicities();
        self.require_elliptic("F_i")?;
        if i == 0 || i > ps.len() {
            return Err(Error::IncompatibleClass(format!("no multiple fibre F_{i}")));
        }
        Ok(self.fiber()?.scale(&rational::frac(1, ps[i - 1] as i64)))
    }

    pub fn hyperplane(&self) -> CohClass {
        self.basis_class("H").expect("H is always in the basis")
    }

    pub fn transcendental(&self) -> CohClass {
        self.basis_class("W").expect("W is always in the basis")
    }

    /// Canonical class `K_X`: `K_min + Σ E_i`, or `(p_g − 1)F + Σ (p_i − 1)F_i`.
    pub fn canonical(&self) -> CohClass {
        if self.is_general_type() {
            let mut k = self.k_min().expect("general type");
            for i in 1..=self.blowups() {
                k = k.add(&self.exceptional(i).expect("in range")).expect("same basis");
            }
            k
        } else {
            let mut coef = int(self.p_g() as i64 - 1);
            for &p in self.multiplicities() {
                coef += rational::frac(p as i64 - 1, p as i64);
            }
            self.fiber().expect("elliptic").scale(&coef)
        }
    }

    pub fn pair(&self, a: &CohClass, b: &CohClass) -> Result<Rational> {
        for c in [a, b] {
            if !(Arc::ptr_eq(&c.basis, &self.basis) || c.basis == self.basis) {
                return Err(Error::IncompatibleClass(format!(
                    "class over [{}] used on a surface with basis [{}]",
                    c.basis.join(", "),
                    self.basis.join(", ")
                )));
            }
        }
        let mut acc = Rational::zero();
        for (i, ai) in a.coords.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coords.iter().enumerate() {
                if !bj.is_zero() && !self.gram[i][j].is_zero() {
                    acc += ai * bj * &self.gram[i][j];
                }
            }
        }
        Ok(acc)
    }

    pub fn self_int(&self, a: &CohClass) -> Result<Rational> {
        self.pair(a, a)
    }

    /// `L = L_min − Σ (L·E_i) E_i` with `L_min` orthogonal to every `E_i`.
    pub fn decompose_l(&self, l: &CohClass) -> Result<Decomposition> {
        self.require_general_type("decompose_L")?;
        if !l.is_integral() {
            return Err(Error::UnsupportedClass(format!("L = {} must be integral", l.describe())));
        }
        let mut l_min = l.clone();
        let mut odd_indices = BTreeSet::new();
        for i in 1..=self.blowups() {
            let e = self.exceptional(i)?;
            let le = self.pair(l, &e)?;
            if !rational::is_integer(&le) {
                return Err(Error::UnsupportedClass(format!("L·E_{i} = {} is not integral", rational::format(&le))));
            }
            if le.numer().is_odd() {
                odd_indices.insert(i);
            }
            l_min = l_min.add(&e.scale(&le))?;
        }
        Ok(Decomposition { l_min, odd_count: odd_indices.len(), odd_indices })
    }

    /// `odd(L)` for general type surfaces, 0 for elliptic ones.
    pub fn odd_count(&self, l: &CohClass) -> Result<usize> {
        if self.is_general_type() {
            Ok(self.decompose_l(l)?.odd_count)
        } else {
            Ok(0)
        }
    }

    fn integral_square(&self, l: &CohClass) -> Result<BigInt> {
        let sq = self.self_int(l)?;
        if !rational::is_integer(&sq) {
            return Err(Error::UnsupportedClass(format!("L² = {} is not an integer", rational::format(&sq))));
        }
        Ok(sq.numer().clone())
    }

    /// `d(L, k) = 4k − L² − 3(1 + p_g)`.
    pub fn virtual_dim(&self, l: &CohClass, k: i64) -> Result<i64> {
        let sq = self.integral_square(l)?;
        let d = BigInt::from(4 * k) - sq - BigInt::from(3 * (1 + self.p_g() as i64));
        num_traits::ToPrimitive::to_i64(&d)
            .ok_or_else(|| Error::InconsistentInvariants("virtual dimension overflows i64".into()))
    }

    /// The instanton number `k` with `d(L, k) = d`, if one exists.
    pub fn admissible_k(&self, l: &CohClass, d: i64) -> Result<Option<i64>> {
        let sq = self.integral_square(l)?;
        let total = BigInt::from(d) + sq + BigInt::from(3 * (1 + self.p_g() as i64));
        let (q, r) = total.div_mod_floor(&BigInt::from(4));
        if !r.is_zero() {
            return Ok(None);
        }
        Ok(num_traits::ToPrimitive::to_i64(&q))
    }

    /// Parity (0 or 1) shared by all nonzero homogeneous degrees of `q_L`:
    /// that of `L² + (b_+ + 1)/2`.
    pub fn series_parity(&self, l: &CohClass) -> Result<u32> {
        let sq = self.integral_square(l)?;
        let total = sq + BigInt::from((self.chars.b_plus + 1) / 2);
        Ok(if total.is_odd() { 1 } else { 0 })
    }

    /// The surface blown up once more; the new curve is `E_{r+1}` and `H`
    /// (pulled back) pairs to zero with it.
    pub fn blow_up(&self) -> Result<Surface> {
        let SurfaceKind::GeneralType { p_g, k_min_sq, blowups } = self.data.kind.clone() else {
            return Err(Error::UnsupportedOperation(
                "blow-ups are modeled for general type surfaces only".into(),
            ));
        };
        let mut pol = self.data.polarization.clone();
        pol.pairings.push(Rational::zero());
        let char_override = self
            .data
            .char_override
            .map(|c| CharOverride { e: c.e + 1, sigma: c.sigma - 1 });
        Surface::build(SurfaceData {
            kind: SurfaceKind::GeneralType { p_g, k_min_sq, blowups: blowups + 1 },
            polarization: pol,
            w: self.data.w.clone(),
            char_override,
        })
    }

    /// Pulls a class on this surface back to its blow-up (zero `E_{r+1}` coordinate).
    pub fn lift_to_blowup(&self, blown: &Surface, c: &CohClass) -> Result<CohClass> {
        if blown.blowups() != self.blowups() + 1 || !blown.is_general_type() {
            return Err(Error::IncompatibleClass("target is not a one-point blow-up".into()));
        }
        self.pair(c, c)?;
        let insert_at = self.blowups() + 1;
        let mut coords = c.coords.clone();
        coords.insert(insert_at, Rational::zero());
        blown.class(coords)
    }
}
