//! Truncated multivariate power series over exact rationals.
//!
//! A series lives on a [`ProbeFrame`]: an ordered list of named probe classes
//! `P_1 … P_k` with their Gram matrix and a total-degree truncation `D`. The
//! variable `t_j` stands for the coefficient of `P_j`, so a series is a
//! function of `Σ t_j P_j`. Coefficients of monomials of total degree `> D`
//! are unknown and never stored; zero coefficients are pruned.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, factorial, Rational};

/// Exponent vector over the probes of a frame.
pub type Monomial = Vec<u32>;

fn degree(m: &[u32]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeFrame {
    names: Vec<String>,
    gram: Vec<Vec<Rational>>,
    truncation: usize,
}

impl ProbeFrame {
    pub fn new(names: Vec<String>, gram: Vec<Vec<Rational>>, truncation: usize) -> Result<Self> {
        let n = names.len();
        if gram.len() != n {
            return Err(Error::Dimension { expected: n, actual: gram.len() });
        }
        for row in &gram {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, actual: row.len() });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidProbe(format!(
                        "gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
            if names[..i].contains(&names[i]) {
                return Err(Error::InvalidProbe(format!("duplicate probe name {:?}", names[i])));
            }
        }
        Ok(Self { names, gram, truncation })
    }

    /// Frame with the same probes and a different truncation degree.
    pub fn with_truncation(&self, truncation: usize) -> Self {
        Self { truncation, ..self.clone() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpKind {
    Exp,
    Sinh,
    Cosh,
}

impl ExpKind {
    fn keeps(self, k: usize) -> bool {
        match self {
            ExpKind::Exp => true,
            ExpKind::Sinh => k % 2 == 1,
            ExpKind::Cosh => k.is_multiple_of(2),
        }
    }
}

/// Truncated power series `Σ c_m t^m` with `deg m ≤ D`.
#[derive(Clone, PartialEq)]
pub struct ExpandedSeries {
    frame: Arc<ProbeFrame>,
    terms: BTreeMap<Monomial, Rational>,
}

impl ExpandedSeries {
    pub fn zero(frame: &Arc<ProbeFrame>) -> Self {
        Self { frame: Arc::clone(frame), terms: BTreeMap::new() }
    }

    pub fn constant(frame: &Arc<ProbeFrame>, c: Rational) -> Self {
        let mut s = Self::zero(frame);
        s.insert(vec![0; frame.len()], c);
        s
    }

    pub fn one(frame: &Arc<ProbeFrame>) -> Self {
        Self::constant(frame, Rational::one())
    }

    /// Single term `c · t^exponents`; dropped when above the truncation.
    pub fn monomial(frame: &Arc<ProbeFrame>, exponents: &[u32], c: Rational) -> Result<Self> {
        if exponents.len() != frame.len() {
            return Err(Error::Dimension { expected: frame.len(), actual: exponents.len() });
        }
        let mut s = Self::zero(frame);
        if degree(exponents) <= frame.truncation {
            s.insert(exponents.to_vec(), c);
        }
        Ok(s)
    }

    /// Degree-one series `Σ_j pairings[j] · t_j`.
    pub fn linear_form(frame: &Arc<ProbeFrame>, pairings: &[Rational]) -> Result<Self> {
        if pairings.len() != frame.len() {
            return Err(Error::Dimension { expected: frame.len(), actual: pairings.len() });
        }
        let mut s = Self::zero(frame);
        if frame.truncation == 0 {
            return Ok(s);
        }
        for (j, c) in pairings.iter().enumerate() {
            let mut m = vec![0; frame.len()];
            m[j] = 1;
            s.insert(m, c.clone());
        }
        Ok(s)
    }

    /// Degree-two series `Σ_{i,j} matrix[i][j] · t_i t_j`.
    pub fn quadratic_form(frame: &Arc<ProbeFrame>, matrix: &[Vec<Rational>]) -> Result<Self> {
        let n = frame.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension { expected: n, actual: matrix.len() });
        }
        let mut s = Self::zero(frame);
        if frame.truncation < 2 {
            return Ok(s);
        }
        for i in 0..n {
            for j in 0..n {
                let mut m = vec![0; n];
                m[i] += 1;
                m[j] += 1;
                s.accumulate(m, matrix[i][j].clone());
            }
        }
        Ok(s)
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        if !c.is_zero() {
            self.terms.insert(m, c);
        }
    }

    fn accumulate(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn frame(&self) -> &Arc<ProbeFrame> {
        &self.frame
    }

    pub fn truncation(&self) -> usize {
        self.frame.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.frame.len()])
    }

    fn check_frame(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.frame, &other.frame) || *self.frame == *other.frame {
            Ok(())
        } else {
            Err(Error::IncompatibleFrame)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.frame);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    /// Truncated product; monomials above `D` are discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let d = self.frame.truncation;
        let mut by_degree: Vec<Vec<(&Monomial, &Rational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &other.terms {
            by_degree[degree(m)].push((m, c));
        }
        let mut out = Self::zero(&self.frame);
        for (ma, ca) in &self.terms {
            let da = degree(ma);
            for bucket in &by_degree[..=d - da] {
                for (mb, cb) in bucket {
                    let m: Monomial = ma.iter().zip(mb.iter()).map(|(x, y)| x + y).collect();
                    out.accumulate(m, ca * *cb);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.frame);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Degree-`d` homogeneous component.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        let mut out = Self::zero(&self.frame);
        for (m, c) in &self.terms {
            if degree(m) == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Smallest degree carrying a nonzero term.
    pub fn order(&self) -> Result<usize> {
        self.terms
            .keys()
            .map(|m| degree(m))
            .min()
            .ok_or(Error::OrderUndetermined(self.frame.truncation))
    }

    /// Nonzero degrees present in the series, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|m| degree(m)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Same series viewed at a lower truncation degree.
    pub fn truncate(&self, truncation: usize) -> Result<Self> {
        if truncation > self.frame.truncation {
            return Err(Error::Truncation {
                requested: truncation,
                truncation: self.frame.truncation,
            });
        }
        let frame = Arc::new(self.frame.with_truncation(truncation));
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| degree(m) <= truncation)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(Self { frame, terms })
    }

    /// Multilinear value `q_d(P_1^{a_1} … P_k^{a_k}) = (∏ a_j!) · [t^a]`.
    pub fn polarized_coefficient(&self, exponents: &[u32]) -> Result<Rational> {
        if exponents.len() != self.frame.len() {
            return Err(Error::Dimension { expected: self.frame.len(), actual: exponents.len() });
        }
        let d = degree(exponents);
        if d > self.frame.truncation {
            return Err(Error::Truncation { requested: d, truncation: self.frame.truncation });
        }
        let weight: BigInt = exponents.iter().map(|&a| factorial(a as u64)).product();
        Ok(self.coefficient(exponents) * Rational::from_integer(weight))
    }

    /// `exp`, `sinh` or `cosh` of a series with zero constant term.
    pub fn exp_like(&self, kind: ExpKind) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(Error::NotNilpotent(rational::format(&c0)));
        }
        let d = self.frame.truncation;
        let order = match self.order() {
            Ok(o) => o,
            // zero series: exp/cosh give 1, sinh gives 0
            Err(_) => {
                return Ok(if kind == ExpKind::Sinh { Self::zero(&self.frame) } else { Self::one(&self.frame) });
            }
        };
        if order == 1 && self.terms.keys().all(|m| degree(m) == 1) {
            return Ok(self.exp_like_linear(kind));
        }
        let mut out = if kind.keeps(0) { Self::one(&self.frame) } else { Self::zero(&self.frame) };
        let mut power = Self::one(&self.frame);
        let mut k = 1;
        while k * order <= d {
            power = power.mul(self)?;
            if kind.keeps(k) {
                let inv = Rational::new(BigInt::one(), factorial(k as u64));
                out = out.add(&power.scale(&inv))?;
            }
            k += 1;
        }
        Ok(out)
    }

    /// Closed form for a linear argument `ℓ = Σ c_j t_j`:
    /// `ℓ^k / k! = Σ_{|a| = k} ∏ c_j^{a_j} / a_j!`.
    fn exp_like_linear(&self, kind: ExpKind) -> Self {
        let n = self.frame.len();
        let coeffs: Vec<(usize, Rational)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.iter().position(|&e| e == 1).expect("degree-one monomial"), c.clone()))
            .collect();
        let d = self.frame.truncation;
        // per-variable tables c^a / a!
        let tables: Vec<Vec<Rational>> = coeffs
            .iter()
            .map(|(_, c)| {
                let mut row = Vec::with_capacity(d + 1);
                let mut acc = Rational::one();
                row.push(acc.clone());
                for a in 1..=d {
                    acc = acc * c / rational::int(a as i64);
                    row.push(acc.clone());
                }
                row
            })
            .collect();
        let mut out = Self::zero(&self.frame);
        let mut exps = vec![0usize; coeffs.len()];
        #[allow(clippy::too_many_arguments)]
        fn walk(
            pos: usize,
            remaining: usize,
            exps: &mut Vec<usize>,
            coeffs: &[(usize, Rational)],
            tables: &[Vec<Rational>],
            n: usize,
            kind: ExpKind,
            out: &mut ExpandedSeries,
        ) {
            if pos == coeffs.len() {
                let total: usize = exps.iter().sum();
                if !kind.keeps(total) {
                    return;
                }
                let mut m = vec![0u32; n];
                let mut c = Rational::one();
                for (i, &a) in exps.iter().enumerate() {
                    m[coeffs[i].0] = a as u32;
                    c *= &tables[i][a];
                }
                out.insert(m, c);
                return;
            }
            for a in 0..=remaining {
                exps[pos] = a;
                walk(pos + 1, remaining - a, exps, coeffs, tables, n, kind, out);
            }
            exps[pos] = 0;
        }
        walk(0, d, &mut exps, &coeffs, &tables, n, kind, &mut out);
        out
    }

    /// Exact quotient `q` with `q · den = num`, valid up to degree `D − ord(den)`.
    ///
    /// Solved degree by degree: with `den = δ_m + δ_{m+1} + …`,
    /// `q_j · δ_m = num_{j+m} − Σ_{i<j} q_i · δ_{j+m−i}`, and each step is an
    /// exact homogeneous polynomial division checked for a zero remainder.
    pub fn exact_divide(&self, den: &Self) -> Result<Self> {
        self.check_frame(den)?;
        let m = den
            .order()
            .map_err(|_| Error::Divisibility("denominator vanishes up to truncation".into()))?;
        let d = self.frame.truncation;
        let out_trunc = d - m;
        if let Ok(num_order) = self.order() {
            if num_order < m {
                return Err(Error::Divisibility(format!(
                    "numerator has order {num_order} below denominator order {m}"
                )));
            }
        }
        let num_parts: Vec<Self> = (0..=d).map(|k| self.homogeneous_part(k)).collect();
        let den_parts: Vec<Self> = (0..=d).map(|k| den.homogeneous_part(k)).collect();
        let lead = &den_parts[m];
        let mut quotient_parts: Vec<Self> = Vec::with_capacity(out_trunc + 1);
        for j in 0..=out_trunc {
            let mut rhs = num_parts[j + m].clone();
            for (i, qi) in quotient_parts.iter().enumerate() {
                let di = &den_parts[j + m - i];
                if !di.is_zero() && !qi.is_zero() {
                    rhs = rhs.sub(&qi.mul(di)?)?;
                }
            }
            quotient_parts.push(divide_homogeneous(&rhs, lead, j)?);
        }
        let frame = Arc::new(self.frame.with_truncation(out_trunc));
        let mut out = Self::zero(&frame);
        for part in quotient_parts {
            for (mono, c) in part.terms {
                out.terms.insert(mono, c);
            }
        }
        Ok(out)
    }
}

/// Exact division of homogeneous polynomials by lex-leading-term reduction.
fn divide_homogeneous(num: &ExpandedSeries, den: &ExpandedSeries, degree_hint: usize) -> Result<ExpandedSeries> {
    let mut rem = num.terms.clone();
    let (lead_m, lead_c) = den.terms.iter().next_back().expect("nonzero leading part");
    let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
    while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        if rm.iter().zip(lead_m.iter()).any(|(a, b)| a < b) {
            return Err(Error::Divisibility(format!(
                "degree-{degree_hint} remainder term {rm:?} is not divisible by the leading term {lead_m:?}"
            )));
        }
        let qm: Monomial = rm.iter().zip(lead_m.iter()).map(|(a, b)| a - b).collect();
        let qc = rc / lead_c;
        for (dm, dc) in &den.terms {
            let mono: Monomial = qm.iter().zip(dm.iter()).map(|(a, b)| a + b).collect();
            let entry = rem.entry(mono.clone()).or_insert_with(Rational::zero);
            *entry -= &qc * dc;
            if entry.is_zero() {
                rem.remove(&mono);
            }
        }
        quot.insert(qm, qc);
    }
    Ok(ExpandedSeries { frame: Arc::clone(&num.frame), terms: quot })
}

impl fmt::Debug for ExpandedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExpandedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.frame.truncation + 1);
        }
        let mut ordered: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| degree(a.0).cmp(&degree(b.0)).then_with(|| b.0.cmp(a.0)));
        for (i, (m, c)) in ordered.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", rational::format_short(c))?;
            for (j, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.frame.names[j])?,
                    _ => write!(f, "*{}^{}", self.frame.names[j], e)?,
                }
            }
        }
        write!(f, " + O({})", self.frame.truncation + 1)
    }
}
