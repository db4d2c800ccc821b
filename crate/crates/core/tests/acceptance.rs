//! Acceptance suite: one PASS/FAIL line per check, exact rational comparisons.
//! Exits nonzero when any check fails.

use std::process::ExitCode;
use std::sync::Arc;

use invariants_core::analysis::{existence_bound, tau_certificate, tau_rank};
use invariants_core::donaldson::{
    assemble_structure, blowup_transform, closed_form, closed_form_elliptic, closed_form_general_type,
    parity_violations, BlowupParity, EvalRequest, ProbeSet, StructuredSeries,
};
use invariants_core::rational::{factorial, format, frac, int, pow2};
use invariants_core::series::{ExpKind, ExpandedSeries, ProbeFrame};
use invariants_core::surface::{CohClass, Polarization, Surface, SurfaceData};
use invariants_core::sw::{basic_classes, basic_classes_elliptic, basic_classes_general_type, witten_factor};
use invariants_core::{Rational, Result};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, criterion: u32, label: &str, outcome: Result<std::result::Result<String, String>>) {
        let (status, detail) = match outcome {
            Ok(Ok(detail)) => ("PASS", detail),
            Ok(Err(detail)) => ("FAIL", detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if status == "FAIL" {
            self.failures += 1;
        }
        println!("criterion {criterion} [{label}]: {status} ({detail})");
    }
}

fn verdict(ok: bool, detail: String) -> std::result::Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn elliptic(p_g: u32, ps: &[u32]) -> Arc<Surface> {
    let pol = Polarization { pairings: vec![int(1)], square: int(2) };
    Arc::new(Surface::build(SurfaceData::elliptic(p_g, ps.to_vec(), pol, frac(3, 2))).unwrap())
}

fn general_type(p_g: u32, k2: i64, r: u32) -> Arc<Surface> {
    let mut pairings = vec![int(1)];
    pairings.extend((1..=r as i64).map(int));
    let pol = Polarization { pairings, square: int(5) };
    Arc::new(Surface::build(SurfaceData::general_type(p_g, k2, r, pol, int(2))).unwrap())
}

/// `K_min + Σ c_i E_i`, or `Σ c_i E_i` when `with_k` is false.
fn gt_class(s: &Surface, with_k: bool, cs: &[i64]) -> CohClass {
    let mut l = if with_k { s.k_min().unwrap() } else { s.zero_class() };
    for (i, c) in cs.iter().enumerate() {
        l = l.add(&s.exceptional(i + 1).unwrap().scale(&int(*c))).unwrap();
    }
    l
}

fn same_expansion(a: &StructuredSeries, b: &StructuredSeries, probes: &ProbeSet, d: usize) -> Result<bool> {
    Ok(a.expand(probes, d)? == b.expand(probes, d)?)
}

fn surfaces() -> Vec<(String, Arc<Surface>)> {
    let mut out = Vec::new();
    for (p_g, k2) in [(1, 1), (2, 1), (3, 2)] {
        for r in 0..=2 {
            out.push((format!("general type p_g={p_g} K^2={k2} r={r}"), general_type(p_g, k2, r)));
        }
    }
    for p_g in 1..=3 {
        for ps in [&[][..], &[2, 3], &[3, 5], &[2, 3, 5]] {
            out.push((format!("elliptic p_g={p_g} p={ps:?}"), elliptic(p_g, ps)));
        }
    }
    out
}

fn criterion1(suite: &mut Suite) {
    let s = elliptic(1, &[]);
    let outcome = (|| {
        let basics = basic_classes_elliptic(&s)?;
        let series = assemble_structure(&s, &s.zero_class(), &basics)?;
        let single = series.exp_terms.len() == 1
            && series.exp_terms[0].class.is_zero()
            && series.exp_terms[0].coefficient.is_one()
            && series.constant.is_one()
            && series.gaussian
            && series.factors.is_empty();
        let h = s.hyperplane();
        let probes = ProbeSet::new(&s, vec![("S".into(), h.clone())])?;
        let square = s.self_int(&h)?;
        let expanded = series.expand(&probes, 10)?;
        let mut values = Vec::new();
        let mut ok = single && square == int(2);
        for d in 0..=10u32 {
            let v = expanded.polarized_coefficient(&[d])?;
            let expected = if d % 2 == 0 {
                Rational::from_integer(factorial(d as u64) / factorial(d as u64 / 2))
            } else {
                Rational::zero()
            };
            ok &= v == expected;
            if d % 2 == 0 {
                values.push(format!("d={d}:{}", format(&v)));
            }
        }
        let q0 = closed_form(&s, &s.zero_class())?.constant;
        let c = s.char_numbers();
        let exponent = 2 + (7 * c.e + 11 * c.sigma) / 4 + (s.p_g() as i64 - 1);
        ok &= q0 == pow2(exponent) && exponent == 0 && witten_factor(&s)? == int(1);
        Ok(verdict(ok, format!("{}; corollary constant 2^{exponent}", values.join(" "))))
    })();
    suite.check(1, "K3 pipeline", outcome);
}

fn criterion2(suite: &mut Suite) {
    let s = elliptic(1, &[2, 3]);
    let outcome = (|| {
        let basics = basic_classes_elliptic(&s)?;
        let six = basics.len() == 6 && basics.iter().all(|b| b.sw == int(1));
        let structure = assemble_structure(&s, &s.zero_class(), &basics)?;
        let forms = closed_form_elliptic(&s, &s.zero_class())?;
        let mut ok = six;
        for probes in [ProbeSet::basis(&s), ProbeSet::generic(&s, 3, 2)] {
            let reference = forms.ratio.expand(&probes, 12)?;
            ok &= forms.exp_sum.expand(&probes, 12)? == reference;
            ok &= structure.expand(&probes, 12)? == reference;
        }
        Ok(verdict(ok, format!("{} basic classes, three forms agree to degree 12", basics.len())))
    })();
    suite.check(2, "Dolgachev equivalence", outcome);
}

fn criterion3(suite: &mut Suite) {
    let x = general_type(2, 1, 0);
    for (parity, l) in [
        (BlowupParity::Odd, x.k_min().unwrap()),
        (BlowupParity::Even, x.k_min().unwrap()),
        (BlowupParity::Odd, x.zero_class()),
        (BlowupParity::Even, x.zero_class()),
    ] {
        let outcome = (|| {
            let base = closed_form(&x, &l)?;
            let transformed = blowup_transform(&base, parity)?;
            let blown = Arc::clone(transformed.surface());
            let direct = closed_form_general_type(&blown, transformed.l())?;
            let mut ok = true;
            for probes in [ProbeSet::basis(&blown), ProbeSet::generic(&blown, 2, 3)] {
                ok &= same_expansion(&transformed, &direct, &probes, 10)?;
            }
            // the literal exp(-E^2) reading differs from the blown-up closed form
            let probes = ProbeSet::generic(&blown, 2, 3);
            let frame = probes.frame(10);
            let e = blown.exceptional(1)?;
            let ell = ExpandedSeries::linear_form(&frame, &probes.pairings(&e)?)?;
            let correction = ell.mul(&ell)?.scale(&frac(-1, 2)).exp_like(ExpKind::Exp)?;
            let literal = transformed.expand(&probes, 10)?.mul(&correction)?;
            let rejected = literal != direct.expand(&probes, 10)?;
            ok &= rejected;

            // km halving: every blown-up class ±K_min ± E carries half the minimal multiplicity
            let minimal = basic_classes_general_type(&x, &l)?;
            let lifted = basic_classes_general_type(&blown, transformed.l())?;
            let halves = lifted.iter().all(|b| {
                let k = &b.class.coords()[0];
                let m = minimal.iter().find(|m| &m.class.coords()[0] == k).unwrap();
                &b.km * &b.km * int(4) == &m.km * &m.km
            });
            let witten_drop = witten_factor(&blown)? * int(2) == witten_factor(&x)?;
            ok &= halves && witten_drop;
            Ok(verdict(
                ok,
                format!(
                    "degree 10 agreement, literal exp(-E^2) rejected: {rejected}, km halved: {halves}, witten {} -> {}",
                    format(&witten_factor(&x)?),
                    format(&witten_factor(&blown)?)
                ),
            ))
        })();
        suite.check(3, &format!("blow-up {parity:?} L={}", l.describe()), outcome);
    }
}

fn recursion_on(s: &Arc<Surface>, series: &StructuredSeries, seed: u64) -> Result<bool> {
    let l = series.l();
    let k = s.admissible_k(l, 8)?.or(s.admissible_k(l, 9)?).or(s.admissible_k(l, 10)?).or(s.admissible_k(l, 11)?);
    let k = k.expect("one of four consecutive dimensions is admissible");
    let d = s.virtual_dim(l, k)?;
    let a = (d - 4) as u32;
    let mut ok = true;
    let mut nonzero = 0;
    for class in ProbeSet::generic(s, 20, seed).classes() {
        let probes = ProbeSet::new(s, vec![("S".into(), class.clone())])?;
        let request = |point_power, k| EvalRequest { arguments: vec![("S".into(), a)], point_power, k };
        let lhs = series.evaluate(&probes, &request(2, k))?;
        let rhs = series.evaluate(&probes, &request(0, k - 1))?;
        // independent route: polarized coefficient of the degree d-4 part of the expansion
        let direct = series.expand(&probes, a as usize)?.polarized_coefficient(&[a])?;
        ok &= lhs == &rhs * int(4) && rhs == direct;
        if !lhs.is_zero() {
            nonzero += 1;
        }
    }
    Ok(ok && nonzero > 0)
}

fn criterion4(suite: &mut Suite) {
    let gt = general_type(2, 1, 1);
    let gt_l = gt_class(&gt, true, &[1]);
    let ell = elliptic(1, &[2, 3]);
    let ell2 = elliptic(2, &[3, 5]);
    for (label, s, l) in [
        ("general type r=1", gt, gt_l),
        ("elliptic p_g=1 p=(2,3)", Arc::clone(&ell), ell.zero_class()),
        ("elliptic p_g=2 p=(3,5)", Arc::clone(&ell2), ell2.zero_class()),
    ] {
        let outcome = (|| {
            let series = closed_form(&s, &l)?;
            let ok = recursion_on(&s, &series, 11)?;
            Ok(verdict(ok, "20 random probes, x^2 insertion equals 4 q_{L,k-1}".into()))
        })();
        suite.check(4, label, outcome);
    }
}

fn criterion5(suite: &mut Suite) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (label, s) in surfaces() {
        let outcome = (|| -> Result<bool> {
            let l = if s.is_general_type() { gt_class(&s, true, &vec![1; s.blowups()]) } else { s.zero_class() };
            let mut series = vec![closed_form(&s, &l)?];
            if let Ok(basics) = basic_classes(&s, &l) {
                series.push(assemble_structure(&s, &l, &basics)?);
            }
            let parity = s.series_parity(&l)?;
            let probes = ProbeSet::generic(&s, 2, 5);
            let mut ok = true;
            for q in &series {
                let expanded = q.expand(&probes, 10)?;
                ok &= parity_violations(&expanded, parity).is_empty() && !expanded.is_zero();
                // degrees outside the three-case table vanish exactly
                let k = (6..10).find_map(|d| s.admissible_k(&l, d).ok().flatten()).unwrap();
                let d = s.virtual_dim(&l, k)? as u32;
                for (deg, x) in [(d - 1, 0), (d + 1, 0), (d, 1), (d - 1, 1), (d - 3, 1)] {
                    let v = q.evaluate(
                        &probes,
                        &EvalRequest { arguments: vec![("P1".into(), deg)], point_power: x, k },
                    )?;
                    ok &= v.is_zero();
                }
            }
            Ok(ok)
        })();
        checked += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => bad.push(label),
            Err(e) => bad.push(format!("{label}: {e}")),
        }
    }
    let detail = format!("{checked} surfaces, violations: {bad:?}");
    suite.check(5, "parity law", Ok(verdict(bad.is_empty(), detail)));
}

fn criterion6(suite: &mut Suite) {
    let mut equality = false;
    let mut lines = Vec::new();
    for r in 0..=4u32 {
        let s = general_type(2, 1, r);
        for mask in 0u32..(1 << r) {
            for with_k in [true, false] {
                let cs: Vec<i64> = (0..r).map(|i| if mask >> i & 1 == 1 { 1 } else { 2 }).collect();
                let l = gt_class(&s, with_k, &cs);
                match existence_bound(&s, &l, 12) {
                    Ok(rep) => {
                        equality |= rep.d_upper == rep.closed_bound;
                        if !rep.closed_bound_holds {
                            lines.push(format!("r={r} mask={mask:b} k={with_k}: {} > {}", rep.d_upper, rep.closed_bound));
                        }
                    }
                    Err(e) => lines.push(format!("r={r} mask={mask:b}: {e}")),
                }
            }
        }
    }
    suite.check(
        6,
        "general type r=0..4, all parity patterns",
        Ok(verdict(lines.is_empty() && equality, format!("equality attained: {equality}; violations: {lines:?}"))),
    );

    let mut equality = false;
    for p_g in 1..=3 {
        for ps in [&[][..], &[2, 3], &[3, 5], &[2, 3, 5]] {
            let s = elliptic(p_g, ps);
            let outcome = existence_bound(&s, &s.zero_class(), 12).map(|rep| {
                equality |= rep.d_upper == rep.closed_bound;
                verdict(
                    rep.closed_bound_holds,
                    format!("order {} d_upper {} vs n+p_g-1 = {}", rep.order_n, rep.d_upper, rep.closed_bound),
                )
            });
            suite.check(6, &format!("elliptic p_g={p_g} p={ps:?}"), outcome);
        }
    }
    suite.check(6, "elliptic equality attained", Ok(verdict(equality, format!("{equality}"))));
}

fn criterion7(suite: &mut Suite) {
    for p_g in 1..=2u32 {
        let s = elliptic(p_g, &[2, 3]);
        let outcome = (|| {
            let mut ok = true;
            let mut ranks = Vec::new();
            for k in (p_g as i64 + 1)..=(p_g as i64 + 4) {
                let rep = tau_rank(&s, &s.zero_class(), k)?;
                let d = 4 * k - 3 * (1 + p_g as i64);
                let floor = (d - (p_g as i64 - 1)).div_euclid(2);
                ok &= rep.d == d && rep.rank == floor && floor == 2 * k - 2 * p_g as i64 - 1;
                ranks.push(format!("k={k}:{}", rep.rank));
            }
            Ok(verdict(ok, ranks.join(" ")))
        })();
        suite.check(7, &format!("elliptic rank p_g={p_g}"), outcome);
    }
    for r in [2u32, 3] {
        for w in [int(2), frac(7, 3)] {
            let pol = Polarization { pairings: (1..=r as i64 + 1).map(int).collect(), square: int(7) };
            let s = Arc::new(Surface::build(SurfaceData::general_type(2, 1, r, pol, w.clone())).unwrap());
            let l = gt_class(&s, true, &vec![1; r as usize]);
            for k in [3i64, 4] {
                let outcome = (|| {
                    let cert = tau_certificate(&s, &l, k)?;
                    let (d, e) = (cert.d, cert.e);
                    let m = (d - e) / 2;
                    // q0 = 1 and the exponential sum contributes 1 + 1 at the origin
                    let mut oracle = int(2);
                    for i in 1..=r as i64 {
                        oracle *= int(i + 1);
                    }
                    for _ in 0..m {
                        oracle *= &w / int(2);
                    }
                    oracle *= Rational::new(factorial((d - e) as u64) * factorial(e as u64), factorial(m as u64));
                    let vanishing = cert.vanishing.clone().unwrap_or_else(Rational::one);
                    let ok = e == r as i64 && !cert.value.is_zero() && cert.value == oracle && vanishing.is_zero();
                    Ok(verdict(
                        ok,
                        format!("d={d} e={e} value={} vanishing={}", format(&cert.value), format(&vanishing)),
                    ))
                })();
                suite.check(7, &format!("general type r={r} w={} k={k}", format(&w)), outcome);
            }
        }
    }
    let scaling = (|| {
        let build = |w: Rational| {
            let pol = Polarization { pairings: vec![int(1), int(1), int(2)], square: int(7) };
            Arc::new(Surface::build(SurfaceData::general_type(2, 1, 2, pol, w)).unwrap())
        };
        let (a, b) = (build(int(1)), build(int(4)));
        let la = gt_class(&a, true, &[1, 1]);
        let lb = gt_class(&b, true, &[1, 1]);
        let va = tau_certificate(&a, &la, 4)?;
        let vb = tau_certificate(&b, &lb, 4)?;
        Ok(verdict(vb.value == va.value * pow2(va.d - va.e), format!("d-e = {}", va.d - va.e)))
    })();
    suite.check(7, "w -> 4w scales by 2^(d-e)", scaling);
}

fn criterion8(suite: &mut Suite) {
    let outcome = (|| {
        let frame13 = Arc::new(ProbeFrame::new(vec!["x".into()], vec![vec![int(1)]], 13)?);
        let x13 = ExpandedSeries::monomial(&frame13, &[1], int(1))?;
        let den = x13.exp_like(ExpKind::Sinh)?;
        let mut ok = true;
        for p in 2..=7i64 {
            let num = x13.scale(&int(p)).exp_like(ExpKind::Sinh)?;
            let quotient = num.exact_divide(&den)?;
            let frame12 = quotient.frame().clone();
            let x12 = ExpandedSeries::monomial(&frame12, &[1], int(1))?;
            let mut sum = ExpandedSeries::zero(&frame12);
            for a in 0..p {
                sum = sum.add(&x12.scale(&int(2 * a - p + 1)).exp_like(ExpKind::Exp)?)?;
            }
            ok &= quotient.truncation() == 12 && quotient == sum;
        }
        Ok(verdict(ok, "p = 2..7 at D = 12".into()))
    })();
    suite.check(8, "sinh division identity", outcome);

    let outcome = (|| {
        let mut rng = StdRng::seed_from_u64(8);
        let gram = vec![vec![int(0), int(1)], vec![int(1), int(-2)]];
        let frame = Arc::new(ProbeFrame::new(vec!["a".into(), "b".into()], gram, 8)?);
        let random = |min_degree: u32, rng: &mut StdRng| -> Result<ExpandedSeries> {
            let mut s = ExpandedSeries::zero(&frame);
            for _ in 0..6 {
                let (i, j) = (rng.gen_range(0..=4u32), rng.gen_range(0..=4u32));
                if i + j < min_degree {
                    continue;
                }
                let c = frac(rng.gen_range(-9..=9), rng.gen_range(1..=5));
                s = s.add(&ExpandedSeries::monomial(&frame, &[i, j], c)?)?;
            }
            Ok(s)
        };
        let mut ok = true;
        let mut done = 0;
        while done < 50 {
            let a = random(0, &mut rng)?;
            let b = random(1, &mut rng)?.add(&ExpandedSeries::monomial(&frame, &[rng.gen_range(0..=1), 1], int(rng.gen_range(1..=4)))?)?;
            let m = b.order()?;
            let q = a.mul(&b)?.exact_divide(&b)?;
            ok &= q == a.truncate(8 - m)?;
            done += 1;
        }
        Ok(verdict(ok, format!("{done} random pairs")))
    })();
    suite.check(8, "exact_divide round trip", outcome);
}

fn criterion9(suite: &mut Suite) {
    let mut bad = Vec::new();
    let mut count = 0;
    let mut all = surfaces();
    let blown = general_type(2, 1, 0).blow_up().unwrap();
    all.push(("blow-up of p_g=2 K^2=1".into(), Arc::new(blown)));
    for (label, s) in all {
        count += 1;
        let c = s.char_numbers();
        let k2 = s.canonical_square();
        let witten = c.witten_exponent();
        let ok = witten.as_ref().map(|w| *w == 2 + k2 - c.chi).unwrap_or(false)
            && c.simple_type_square() == k2
            && s.self_int(&s.canonical()).map(|q| q == int(k2)).unwrap_or(false);
        let classes_ok = basic_classes(&s, &s.canonical())
            .map(|bs| bs.iter().all(|b| s.self_int(&b.class).map(|q| q == int(k2)).unwrap_or(false)))
            .unwrap_or(false);
        if !(ok && classes_ok) {
            bad.push(label);
        }
    }
    suite.check(9, "Noether/Witten identities", Ok(verdict(bad.is_empty(), format!("{count} surfaces, failing: {bad:?}"))));
}

fn main() -> ExitCode {
    let mut suite = Suite { failures: 0 };
    criterion1(&mut suite);
    criterion2(&mut suite);
    criterion3(&mut suite);
    criterion4(&mut suite);
    criterion5(&mut suite);
    criterion6(&mut suite);
    criterion7(&mut suite);
    criterion8(&mut suite);
    criterion9(&mut suite);
    println!("acceptance: {} failing check(s)", suite.failures);
    if suite.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
