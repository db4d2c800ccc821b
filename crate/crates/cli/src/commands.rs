use invariants_core::analysis::{existence_bound, tau_certificate, tau_rank, wall_check};
use invariants_core::donaldson::{
    assemble_structure, blowup_transform, closed_form, closed_form_elliptic, closed_form_general_type,
    parity_violations, EvalRequest, ProbeSet, StructuredSeries,
};
use invariants_core::export::{BasicClassRow, Coords, SeriesExport};
use invariants_core::rational::{self, int, Rational};
use invariants_core::series::ExpandedSeries;
use invariants_core::surface::{CohClass, Surface};
use invariants_core::sw::{basic_classes, witten_factor, BasicClass};
use invariants_core::Error;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::job::{FormChoice, Job};
use crate::render::{Cell, Check, Output, Table};
use crate::CliError;

const CHECK_SEED: u64 = 0x00c0_ffee;

fn coords_text(c: &CohClass) -> String {
    let parts: Vec<String> = c.coords().iter().map(rational::format_short).collect();
    format!("({})", parts.join(", "))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// The serialized name of a unit enum variant.
fn label<T: serde::Serialize>(x: &T) -> String {
    match to_value(x) {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn check_probes(job: &Job) -> ProbeSet {
    ProbeSet::generic(&job.surface, 2, CHECK_SEED)
}

/// `L` for basic-class signs: the job's `L`, else the canonical class for general type.
fn sign_class(job: &Job) -> CohClass {
    if job.l_given || !job.surface.is_general_type() {
        job.l.clone()
    } else {
        job.surface.canonical()
    }
}

fn sorted_basics(job: &Job, l: &CohClass) -> Result<Vec<BasicClass>, CliError> {
    let mut basics = basic_classes(&job.surface, l)?;
    basics.sort_by(|a, b| a.class.coords().cmp(b.class.coords()));
    Ok(basics)
}

fn agree(a: &StructuredSeries, b: &StructuredSeries, probes: &ProbeSet, d: usize) -> Result<bool, Error> {
    Ok(a.expand(probes, d)? == b.expand(probes, d)?)
}

pub fn sw(job: &Job, check: bool) -> Result<Output, CliError> {
    let l = sign_class(job);
    let basics = sorted_basics(job, &l)?;
    let witten = witten_factor(&job.surface)?;
    let rows: Vec<BasicClassRow> = basics.iter().map(BasicClassRow::from).collect();
    let json = json!({
        "basis": job.surface.basis(),
        "L": Coords::from(&l),
        "witten_factor": rational::format(&witten),
        "basic_classes": rows,
    });
    let mut table = Table::new(&["class", "coordinates", "sw", "km", "witten"]);
    for b in &basics {
        table.push(vec![b.class.describe().into(), coords_text(&b.class).into(), (&b.sw).into(), (&b.km).into(), (&witten).into()]);
    }

    let mut checks = Vec::new();
    if check {
        let d = job.truncation(8);
        let structure = assemble_structure(&job.surface, &l, &basics)?;
        let closed = closed_form(&job.surface, &l)?;
        checks.push(Check::new(
            "structure theorem = closed form",
            agree(&structure, &closed, &check_probes(job), d)?,
            format!("generic probes, degree {d}"),
        ));
        let chars = job.surface.char_numbers();
        let k2 = job.surface.canonical_square();
        let mut squares = true;
        for b in &basics {
            squares &= job.surface.self_int(&b.class)? == int(chars.simple_type_square());
        }
        checks.push(Check::new("K^2 = 2e + 3sigma", squares && chars.simple_type_square() == k2, format!("K^2 = {k2}")));
        let exponent = chars.witten_exponent()?;
        checks.push(Check::new(
            "2 + (7e + 11sigma)/4 = 2 + K^2 - chi",
            exponent == 2 + k2 - chars.chi,
            format!("exponent {exponent}"),
        ));
    }
    Ok(Output { json, table, checks })
}

fn chosen_series(job: &Job) -> Result<StructuredSeries, CliError> {
    Ok(match job.spec.form {
        FormChoice::Closed => closed_form(&job.surface, &job.l)?,
        FormChoice::Structure => {
            let basics = sorted_basics(job, &job.l)?;
            assemble_structure(&job.surface, &job.l, &basics)?
        }
        FormChoice::ExpSum => {
            if job.surface.is_general_type() {
                return Err(Error::UnsupportedOperation("the exp_sum form exists for elliptic surfaces only".into()).into());
            }
            closed_form_elliptic(&job.surface, &job.l)?.exp_sum
        }
    })
}

fn monomial_text(names: &[String], exps: &[u32]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn expansion_table(expanded: &ExpandedSeries) -> Result<Table, CliError> {
    let names = expanded.frame().names().to_vec();
    let mut terms: Vec<(&Vec<u32>, &Rational)> = expanded.terms().collect();
    terms.sort_by(|(a, _), (b, _)| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    let mut table = Table::new(&["degree", "monomial", "coefficient", "polarized"]);
    for (m, c) in terms {
        let degree: u32 = m.iter().sum();
        let polarized = expanded.polarized_coefficient(m)?;
        table.push(vec![degree.to_string().into(), monomial_text(&names, m).into(), c.into(), polarized.into()]);
    }
    Ok(table)
}

pub fn series(job: &Job, check: bool) -> Result<Output, CliError> {
    let series = chosen_series(job)?;
    let json = to_value(&SeriesExport::from_series(&series));
    let d = job.truncation(6);
    let probes = job.probes()?;
    let expanded = series.expand(&probes, d)?;
    let table = expansion_table(&expanded)?;

    let mut checks = Vec::new();
    if check {
        let generic = check_probes(job);
        let reference = series.expand(&generic, d)?;
        let parity = job.surface.series_parity(&job.l)?;
        let bad = parity_violations(&reference, parity);
        checks.push(Check::new("parity law", bad.is_empty(), format!("parity {parity}, violating degrees {bad:?}")));
        let closed = closed_form(&job.surface, &job.l)?;
        checks.push(Check::new(
            "closed form",
            closed.expand(&generic, d)? == reference,
            format!("generic probes, degree {d}"),
        ));
        match basic_classes(&job.surface, &job.l) {
            Ok(basics) => {
                let structure = assemble_structure(&job.surface, &job.l, &basics)?;
                checks.push(Check::new(
                    "structure theorem",
                    structure.expand(&generic, d)? == reference,
                    format!("{} basic classes, degree {d}", basics.len()),
                ));
            }
            Err(e) => checks.push(Check::new("structure theorem", false, e.to_string())),
        }
        if !job.surface.is_general_type() {
            let exp_sum = closed_form_elliptic(&job.surface, &job.l)?.exp_sum;
            checks.push(Check::new(
                "exponential sum form",
                exp_sum.expand(&generic, d)? == reference,
                format!("degree {d}"),
            ));
        }
    }
    Ok(Output { json, table, checks })
}

pub fn evaluate(job: &Job, check: bool) -> Result<Output, CliError> {
    let series = closed_form(&job.surface, &job.l)?;
    let probes = job.probes()?;
    let req = job.eval_request()?;
    let value = series.evaluate(&probes, &req)?;
    let d = job.surface.virtual_dim(&job.l, req.k)?;
    let arguments: Vec<Value> = req.arguments.iter().map(|(n, a)| json!([n, a])).collect();
    let json = json!({
        "L": Coords::from(&job.l),
        "k": req.k,
        "d": d,
        "arguments": arguments,
        "point_power": req.point_power,
        "value": rational::format(&value),
    });
    let args_text: Vec<String> = req.arguments.iter().map(|(n, a)| format!("{n}^{a}")).collect();
    let table = Table::key_values(vec![
        ("k", req.k.to_string().into()),
        ("d(L,k)", d.to_string().into()),
        ("arguments", args_text.join(" ").into()),
        ("point_power", req.point_power.to_string().into()),
        ("value", (&value).into()),
    ]);

    let mut checks = Vec::new();
    if check {
        if req.point_power >= 2 {
            let reduced = EvalRequest { point_power: req.point_power - 2, k: req.k - 1, ..req.clone() };
            let lower = series.evaluate(&probes, &reduced)?;
            checks.push(Check::new(
                "x^2 recursion",
                value == &lower * int(4),
                format!("4 * q_(L,k-1) = {}", rational::format(&(&lower * int(4)))),
            ));
        }
        match basic_classes(&job.surface, &job.l) {
            Ok(basics) => {
                let structure = assemble_structure(&job.surface, &job.l, &basics)?;
                let other = structure.evaluate(&probes, &req)?;
                checks.push(Check::new("structure theorem value", other == value, rational::format(&other)));
            }
            Err(e) => checks.push(Check::new("structure theorem value", false, e.to_string())),
        }
    }
    Ok(Output { json, table, checks })
}

pub fn bounds(job: &Job, check: bool) -> Result<Output, CliError> {
    let d = job.truncation(12);
    let report = existence_bound(&job.surface, &job.l, d)?;
    let wall = wall_check(&job.surface, &job.surface.hyperplane(), &job.l)?;
    let mut json = to_value(&report);
    if let Value::Object(map) = &mut json {
        map.insert("wall".into(), to_value(&wall));
        let assumptions = map.shift_remove("assumptions").unwrap_or(Value::Array(Vec::new()));
        map.insert("assumptions".into(), assumptions);
    }
    let mut pairs = vec![
        ("order_n", report.order_n.to_string().into()),
        ("case_mod4", label(&report.case_mod4).into()),
        ("d_upper", report.d_upper.to_string().into()),
        ("k_at_bound", report.k_at_bound.to_string().into()),
        ("specialization", label(&report.specialization).into()),
        ("closed_bound", report.closed_bound.to_string().into()),
        ("closed_bound_holds", report.closed_bound_holds.to_string().into()),
    ];
    if let Some(lower) = report.d_lower_remark {
        pairs.push(("d_lower_remark", lower.to_string().into()));
    }
    pairs.push(("wall", label(&wall).into()));
    pairs.push(("truncation", report.truncation.to_string().into()));
    let mut table = Table::key_values(pairs);
    for a in &report.assumptions {
        table.push(vec!["assumption".into(), a.clone().into()]);
    }

    let mut checks = Vec::new();
    if check {
        checks.push(Check::new(
            "d_upper <= closed bound",
            report.closed_bound_holds,
            format!("{} <= {}", report.d_upper, report.closed_bound),
        ));
        let congruent = job.surface.virtual_dim(&job.l, report.k_at_bound)? == report.d_upper;
        checks.push(Check::new("d_upper = d(L, k_at_bound)", congruent, format!("k = {}", report.k_at_bound)));
    }
    Ok(Output { json, table, checks })
}

pub fn tau(job: &Job, check: bool) -> Result<Output, CliError> {
    let k = job.k()?;
    let rank = tau_rank(&job.surface, &job.l, k)?;
    let certificate = tau_certificate(&job.surface, &job.l, k);
    let mut json = to_value(&rank);
    let mut pairs: Vec<(&str, Cell)> = vec![
        ("d", rank.d.to_string().into()),
        ("e_divisors", rank.e_divisors.to_string().into()),
        ("rank", rank.rank.to_string().into()),
        ("degenerate", rank.degenerate.to_string().into()),
    ];
    if let Some(r) = rank.elliptic_rank {
        pairs.push(("elliptic_rank", r.to_string().into()));
    }
    if let Value::Object(map) = &mut json {
        let assumptions = map.shift_remove("assumptions").unwrap_or(Value::Array(Vec::new()));
        match &certificate {
            Ok(c) => {
                map.insert("certificate".into(), to_value(c));
            }
            Err(e) => {
                map.insert("certificate".into(), Value::Null);
                map.insert("certificate_error".into(), Value::String(e.to_string()));
            }
        }
        map.insert("assumptions".into(), assumptions);
    }
    match &certificate {
        Ok(c) => {
            pairs.push(("certificate_value", (&c.value).into()));
            pairs.push((
                "certificate_vanishing",
                c.vanishing.as_ref().map(Cell::from).unwrap_or_else(|| "n/a (e < 2)".into()),
            ));
            pairs.push(("predicted", (&c.predicted).into()));
            pairs.push(("leading_constant", (&c.leading_constant).into()));
        }
        Err(e) => pairs.push(("certificate_error", e.to_string().into())),
    }
    let mut table = Table::key_values(pairs);
    for a in &rank.assumptions {
        table.push(vec!["assumption".into(), a.clone().into()]);
    }

    let mut checks = Vec::new();
    if check {
        if let Some(r) = rank.elliptic_rank {
            checks.push(Check::new(
                "rank = 2k - 2p_g - 1",
                rank.degenerate || r == rank.rank,
                format!("{} vs {r}", rank.rank),
            ));
        }
        match &certificate {
            Ok(c) => {
                checks.push(Check::new(
                    "certificate value = closed prediction",
                    c.value == c.predicted,
                    rational::format(&c.predicted),
                ));
                checks.push(Check::new("certificate value nonzero", !c.value.is_zero(), rational::format(&c.value)));
                if let Some(v) = &c.vanishing {
                    checks.push(Check::new("vanishing slot is zero", v.is_zero(), rational::format(v)));
                }
            }
            Err(e) => checks.push(Check::new("certificate", false, e.to_string())),
        }
    }
    Ok(Output { json, table, checks })
}

pub fn blowup(job: &Job, check: bool) -> Result<Output, CliError> {
    let parity = job.parity()?;
    let base = closed_form(&job.surface, &job.l)?;
    let transformed = blowup_transform(&base, parity)?;
    let blown = transformed.surface().clone();
    let json = to_value(&SeriesExport::from_series(&transformed));
    let witten_before = witten_factor(&job.surface)?;
    let witten_after = witten_factor(&blown)?;
    let factors: Vec<String> = transformed
        .factors
        .iter()
        .map(|f| format!("{}({})", label(&f.kind), f.class.describe()))
        .collect();
    let table = Table::key_values(vec![
        ("basis", blown.basis().join(" ").into()),
        ("L", coords_text(transformed.l()).into()),
        ("constant", (&transformed.constant).into()),
        ("factors", factors.join(" ").into()),
        ("witten_before", witten_before.clone().into()),
        ("witten_after", witten_after.clone().into()),
    ]);

    let mut checks = Vec::new();
    if check {
        let d = job.truncation(8);
        let direct = closed_form_general_type(&blown, transformed.l())?;
        let probes = ProbeSet::generic(&blown, 2, CHECK_SEED);
        checks.push(Check::new(
            "transform = blown-up closed form",
            agree(&transformed, &direct, &probes, d)?,
            format!("degree {d}"),
        ));
        checks.push(Check::new(
            "witten factor halves",
            witten_after * int(2) == witten_before,
            "one power of 2 per blow-up",
        ));
        let minimal = basic_classes(&job.surface, &job.l)?;
        let lifted = basic_classes(&blown, transformed.l())?;
        let halved = lifted.iter().all(|b| {
            let lift = minimal_match(&job.surface, &blown, &minimal, &b.class);
            lift.map(|m| &b.km * &b.km * int(4) == &m.km * &m.km).unwrap_or(false)
        });
        checks.push(Check::new("km halves", halved, format!("{} classes", lifted.len())));
    }
    Ok(Output { json, table, checks })
}

/// The minimal-model class whose lift differs from `class` only in the new exceptional direction.
fn minimal_match<'a>(x: &Surface, blown: &Surface, minimal: &'a [BasicClass], class: &CohClass) -> Option<&'a BasicClass> {
    let e = blown.exceptional(blown.blowups()).ok()?;
    minimal.iter().find(|m| {
        x.lift_to_blowup(blown, &m.class)
            .ok()
            .map(|lift| lift.add(&e).ok() == Some(class.clone()) || lift.sub(&e).ok() == Some(class.clone()))
            .unwrap_or(false)
    })
}
