use std::fmt::Write as _;
use std::time::Instant;

use adams_core::chains::{
    find_chains, first_up_index, l_of_pi, lift_down, lift_up, ChainConstraints, ChainError, LiftOutcome,
    StandardModule,
};
use adams_core::dsl::{serialize_member, InputDocument};
use adams_core::enumerate::{
    count_by_group, enumerate_members, run_chain_checks, run_member_checks, synthetic_modules, Check, CheckReport,
    Family,
};
use adams_core::jacquet::{jac_neg_nonzero, mstar_zeta, sigma_above, JacVerdict};
use adams_core::recipe::{
    d_index, lift_parameter, roles_from, AdamsRange, DescentReport, FallbackTable, LevelOutcome, LiftStatus,
    RecipeError, TowerChoice, TowerRoles,
};
use adams_core::{HalfInt, PacketMember};
use serde::Serialize;
use serde_json::{json, Value};

/// Synthetic standard modules used by the chain check: every module with at most two
/// segments, plus a seeded sample of larger ones.
const CHAIN_FULL: usize = 2;
const CHAIN_SAMPLED: usize = 600;
const CHAIN_SEED: u64 = 0x5eed;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Unresolved(String),
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Unresolved(_) => 4,
            CliError::Unsupported(_) => 5,
        }
    }
}

impl From<RecipeError> for CliError {
    fn from(e: RecipeError) -> Self {
        match e {
            RecipeError::UnresolvedD(_) => CliError::Unresolved(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
    /// Printed on stderr after the report.
    pub warning: Option<String>,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0, warning: None }
    }
}

fn member_of(doc: &InputDocument) -> Result<&PacketMember, CliError> {
    doc.member.as_ref().ok_or_else(|| CliError::Invalid("input has no group and block clause".into()))
}

fn blocks(m: &PacketMember) -> String {
    m.blocks.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct TowerJson<'a> {
    tower: TowerChoice,
    meaning: &'static str,
    d: Option<i64>,
    adams_set: Option<String>,
    group_at_d: Option<String>,
    report: &'a DescentReport,
}

fn level_label(outcome: &LevelOutcome, below_d_on: Option<bool>) -> &'static str {
    match (outcome, below_d_on) {
        (LevelOutcome::Member(_), _) => "member",
        (LevelOutcome::NeedsGeneralAlgorithm, _) => "unresolved",
        (LevelOutcome::Zero, Some(true)) => "zero",
        (LevelOutcome::Zero, Some(false)) => "not in A-packet",
        (LevelOutcome::Zero, None) => "zero",
    }
}

pub fn analyze(doc: &InputDocument, towers: &[TowerChoice], max_alpha: Option<i64>) -> Result<Output, CliError> {
    let m = member_of(doc)?;
    let fallback: FallbackTable = doc.lifted_modules.clone();
    let mut reports = Vec::new();
    for &tower in towers {
        reports.push(d_index(m, tower, &fallback)?);
    }
    let roles: Option<TowerRoles> = match reports.as_slice() {
        [a, b] => match (a.d, b.d) {
            (Some(da), Some(db)) => {
                let (dp, dm) = if a.tower == TowerChoice::Plus { (da, db) } else { (db, da) };
                Some(roles_from(&m.context, dp, dm)?)
            }
            _ => None,
        },
        _ => None,
    };

    let mut text = format!("{m}\n");
    let mut towers_json = Vec::new();
    for r in &reports {
        let meaning = r.tower.describe(&m.context);
        let adams = r.d.map(|from| AdamsRange { from });
        let first = r.d.and_then(|d| r.member_at(d)).map(|pm| pm.context.to_string());
        // Below d the up tower has zero lifts and the down tower leaves the A-packet.
        let is_up = roles.as_ref().filter(|ro| !ro.ambiguous).map(|ro| ro.up == r.tower);
        writeln!(text, "\n{} tower ({meaning}), high lift at α = {}", r.tower, r.alpha0).unwrap();
        writeln!(text, "  {:>3}  {:<16} {:<18} blocks", "α", "outcome", "rule").unwrap();
        let top = max_alpha.unwrap_or(r.alpha0).max(r.alpha0);
        for alpha in (r.alpha0 + 2..=top).rev().step_by(2) {
            if let Some(pm) = r.member_at(alpha) {
                writeln!(text, "  {alpha:>3}  {:<16} {:<18} {}", "member", "high-lift", blocks(&pm)).unwrap();
            }
        }
        for level in &r.levels {
            let shown = match &level.outcome {
                LevelOutcome::Member(pm) => blocks(pm),
                LevelOutcome::NeedsGeneralAlgorithm => level.note.clone().unwrap_or_default(),
                LevelOutcome::Zero => String::new(),
            };
            let label = level_label(&level.outcome, is_up);
            writeln!(text, "  {:>3}  {label:<16} {:<18} {shown}", level.alpha, level.rule.to_string()).unwrap();
        }
        match (r.d, &adams, &first) {
            (Some(d), Some(set), Some(group)) => {
                writeln!(text, "  d = {d}, lifts in the packet for α in {set}, group at that level {group}").unwrap()
            }
            _ => writeln!(text, "  d unresolved: a step needs the general algorithm; supply std@α for that level")
                .unwrap(),
        }
        towers_json.push(TowerJson {
            tower: r.tower,
            meaning,
            d: r.d,
            adams_set: adams.map(|a| a.to_string()),
            group_at_d: first,
            report: r,
        });
    }
    if let Some(ro) = &roles {
        writeln!(
            text,
            "\ngoing up: {} (d = {}, first occurrence in dimension {}); going down: {} (d = {}, first occurrence in dimension {}){}",
            ro.up,
            ro.d_up,
            ro.m_up,
            ro.down,
            ro.d_down,
            ro.m_down,
            if ro.ambiguous { "; both towers start at 1, so the labels are arbitrary" } else { "" }
        )
        .unwrap();
    }
    let json = json!({ "member": m, "towers": towers_json, "roles": roles });
    let unresolved: Vec<String> = reports.iter().filter(|r| r.d.is_none()).map(|r| r.tower.to_string()).collect();
    let mut out = Output::ok(text, json);
    if !unresolved.is_empty() {
        out.code = 4;
        out.warning = Some(format!("unresolved on the {} tower", unresolved.join(" and ")));
    }
    Ok(out)
}

pub fn lift(doc: &InputDocument, alpha: i64, tower: TowerChoice) -> Result<Output, CliError> {
    let m = member_of(doc)?;
    let status = lift_parameter(m, alpha, tower, &doc.lifted_modules)?;
    let text = match &status {
        LiftStatus::InPacket(pm) => format!("level {alpha} on the {tower} tower: {pm}\n{}\n", serialize_member(pm)),
        LiftStatus::ZeroLift => format!("level {alpha} on the {tower} tower: the lift is zero\n"),
        LiftStatus::NotInAAPacket => {
            format!("level {alpha} on the {tower} tower: the lift is nonzero but outside the A-packet\n")
        }
    };
    Ok(Output::ok(text, json!({ "alpha": alpha, "tower": tower, "lift": status })))
}

fn module_of(doc: &InputDocument, alpha: Option<i64>) -> Result<&StandardModule, CliError> {
    let found = match alpha {
        Some(a) => doc.lifted_modules.get(&a),
        None => doc.module.as_ref().or_else(|| match doc.lifted_modules.len() {
            1 => doc.lifted_modules.values().next(),
            _ => None,
        }),
    };
    found.ok_or_else(|| CliError::Invalid("input has no matching std clause".into()))
}

fn outcome_line(kind: &str, alpha: i64, out: &LiftOutcome) -> String {
    let mut line = format!("  {kind:<5} α = {alpha:>2}: {}", out.module);
    if !out.chain.is_empty() {
        line += &format!("   chain {}", out.chain);
    }
    if !out.unknowns.is_empty() {
        line += &format!("   unknown: {}", out.unknowns.join(", "));
    }
    line + "\n"
}

pub fn chains(doc: &InputDocument, alpha: Option<i64>, max_alpha: Option<i64>) -> Result<Output, CliError> {
    let std = module_of(doc, None)?;
    let l_pi = l_of_pi(std)?;
    let first = first_up_index(std)?;
    let d1 = std.tempered.l_tau.known().map(|l| HalfInt::from_int((l + 1) / 2));
    let found = d1.map(|d| find_chains(std, &ChainConstraints::starting_at(d))).unwrap_or_default();
    let mut text = format!("{std}\nl(π) = {l_pi}, first going-up level {first}\n");
    if let Some(c) = found.first() {
        writeln!(text, "longest chain from {}: {c}", d1.expect("chains need a start")).unwrap();
    }
    let levels: Vec<i64> = match alpha {
        Some(a) => vec![a],
        None => (1..=max_alpha.unwrap_or(l_pi + 6)).step_by(2).collect(),
    };
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for a in levels {
        let down = lift_down(std, a)?;
        text += &outcome_line("down", a, &down);
        downs.push(json!({ "alpha": a, "lift": down }));
        if a > l_pi {
            let up = lift_up(std, a)?;
            text += &outcome_line("up", a, &up);
            ups.push(json!({ "alpha": a, "lift": up }));
        }
    }
    let json = json!({
        "module": std,
        "l": l_pi,
        "first_up": first,
        "chains": found.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "up": ups,
        "down": downs,
    });
    Ok(Output::ok(text, json))
}

pub fn l(doc: &InputDocument) -> Result<Output, CliError> {
    let std = module_of(doc, None)?;
    let l_pi = l_of_pi(std)?;
    Ok(Output::ok(format!("{l_pi}\n"), json!({ "l": l_pi })))
}

pub fn mstar(a: HalfInt, b: HalfInt) -> Result<Output, CliError> {
    let sum = mstar_zeta(a, b).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut text = format!("M*(ζ({a},{b})) has {} terms\n", sum.total());
    let mut terms = Vec::new();
    for (tensor, mult) in sum.terms() {
        let shown: Vec<String> = tensor.iter().map(ToString::to_string).collect();
        let prefix = if mult > 1 { format!("{mult}·") } else { String::new() };
        writeln!(text, "  {prefix}{}", shown.join(" ⊗ ")).unwrap();
        terms.push(json!({ "tensor": shown, "factors": tensor, "multiplicity": mult }));
    }
    Ok(Output::ok(text, json!({ "a": a, "b": b, "total": sum.total(), "terms": terms })))
}

pub fn jac(doc: &InputDocument, z: HalfInt, alpha: Option<i64>) -> Result<Output, CliError> {
    let std = module_of(doc, alpha)?;
    let (upper, shape) = sigma_above(std, z);
    let verdict = jac_neg_nonzero(std, z);
    let shown: Vec<String> = upper.iter().map(ToString::to_string).collect();
    if verdict == JacVerdict::Unsupported {
        return Err(CliError::Unsupported(format!(
            "segments from {z} up ({}) are neither unlinked nor one ladder",
            shown.join(", ")
        )));
    }
    let text = format!("Jac_{{-{z}}}: {verdict} (segments from {z} up: {})\n", shown.join(", "));
    Ok(Output::ok(text, json!({ "z": z, "verdict": verdict, "upper": upper, "shape": shape })))
}

fn check_line(r: &CheckReport) -> String {
    let status = if r.passed() { "ok" } else { "FAILED" };
    let mut line = format!("  {:<14} {status:<6} {} checked, {} skipped", r.check.name(), r.checked, r.skipped);
    for v in r.violations.iter().take(5) {
        line += &format!("\n      {v}");
    }
    if r.violations.len() > 5 {
        line += &format!("\n      ... {} more", r.violations.len() - 5);
    }
    line + "\n"
}

pub fn enumerate(family: Family, max_dim: u32, checks: &[Check]) -> Result<Output, CliError> {
    let start = Instant::now();
    let members = enumerate_members(family, max_dim);
    let groups = count_by_group(&members);
    let mut reports = run_member_checks(&members, checks);
    if checks.contains(&Check::Chains) {
        reports.push(run_chain_checks(&synthetic_modules(CHAIN_FULL, CHAIN_SAMPLED, CHAIN_SEED)));
    }
    let mut text = format!("{} members up to parameter dimension {max_dim}\n", members.len());
    for (group, n) in &groups {
        writeln!(text, "  {group:<26} {n}").unwrap();
    }
    text += "checks\n";
    for r in &reports {
        text += &check_line(r);
    }
    writeln!(text, "took {:.2?}", start.elapsed()).unwrap();
    let failed = reports.iter().any(|r| !r.passed());
    let json = json!({ "members": members.len(), "groups": groups, "checks": reports });
    let mut out = Output::ok(text, json);
    if failed {
        out.code = 1;
        out.warning = Some("some checks failed".into());
    }
    Ok(out)
}

pub fn validate(doc: &InputDocument) -> Result<Output, CliError> {
    let m = member_of(doc)?;
    let report = m.validate();
    if !report.is_valid() {
        let issues: Vec<String> = report.issues.iter().map(ToString::to_string).collect();
        return Err(CliError::Invalid(format!("{m} is not valid: {}", issues.join("; "))));
    }
    let text = format!("valid: {m}\n{}\n", serialize_member(m));
    Ok(Output::ok(text, json!({ "valid": true, "member": m })))
}
