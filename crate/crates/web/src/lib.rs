//! WebAssembly bindings for the browser demo. Every export takes text and returns a
//! JSON string; failures come back as `{"error": "..."}`.

use adams_core::chains::{l_of_pi, lift_down, lift_up};
use adams_core::dsl::parse_input;
use adams_core::jacquet::mstar_zeta;
use adams_core::recipe::{d_index, roles_from, LevelOutcome, TowerChoice};
use adams_core::HalfInt;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn analyze_value(input: &str) -> Result<Value, String> {
    let doc = parse_input(input).map_err(|e| e.to_string())?;
    let m = doc.member.as_ref().ok_or("input has no group and block clause")?;
    let mut towers = Vec::new();
    let mut ds = Vec::new();
    for tower in TowerChoice::BOTH {
        let report = d_index(m, tower, &doc.lifted_modules).map_err(|e| e.to_string())?;
        let levels: Vec<Value> = report
            .levels
            .iter()
            .map(|l| {
                let (outcome, shown) = match &l.outcome {
                    LevelOutcome::Member(pm) => {
                        ("member", pm.blocks.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                    }
                    LevelOutcome::Zero => ("zero", String::new()),
                    LevelOutcome::NeedsGeneralAlgorithm => ("unresolved", l.note.clone().unwrap_or_default()),
                };
                json!({ "alpha": l.alpha, "rule": l.rule.to_string(), "outcome": outcome, "blocks": shown })
            })
            .collect();
        ds.push(report.d);
        towers.push(json!({
            "tower": tower,
            "meaning": tower.describe(&m.context),
            "high_lift": report.alpha0,
            "d": report.d,
            "levels": levels,
        }));
    }
    let roles = match (ds[0], ds[1]) {
        (Some(dp), Some(dm)) => Some(roles_from(&m.context, dp, dm).map_err(|e| e.to_string())?),
        _ => None,
    };
    Ok(json!({ "member": m.to_string(), "towers": towers, "roles": roles }))
}

fn mstar_value(a: &str, b: &str) -> Result<Value, String> {
    let parse = |s: &str| s.trim().parse::<HalfInt>().map_err(|e| format!("{s:?}: {e}"));
    let sum = mstar_zeta(parse(a)?, parse(b)?).map_err(|e| e.to_string())?;
    let terms: Vec<Value> = sum
        .terms()
        .map(|(tensor, mult)| {
            let shown: Vec<String> = tensor.iter().map(ToString::to_string).collect();
            json!({ "tensor": shown.join(" ⊗ "), "multiplicity": mult })
        })
        .collect();
    Ok(json!({ "total": sum.total(), "terms": terms }))
}

fn chains_value(input: &str, alpha: i64) -> Result<Value, String> {
    let doc = parse_input(input).map_err(|e| e.to_string())?;
    let std = doc.module.as_ref().ok_or("input has no std clause")?;
    let l_pi = l_of_pi(std).map_err(|e| e.to_string())?;
    let down = lift_down(std, alpha).map_err(|e| e.to_string())?;
    let up = if alpha > l_pi { Some(lift_up(std, alpha).map_err(|e| e.to_string())?) } else { None };
    let shown = |out: &adams_core::chains::LiftOutcome| {
        json!({ "module": out.module.to_string(), "chain": out.chain.to_string(), "unknowns": out.unknowns })
    };
    Ok(json!({ "l": l_pi, "down": shown(&down), "up": up.as_ref().map(shown) }))
}

/// Both towers of a member: d, every level and which tower goes up.
#[wasm_bindgen]
pub fn analyze(input: &str) -> String {
    respond(analyze_value(input))
}

/// Terms of M*(ζ(a,b)).
#[wasm_bindgen]
pub fn mstar(a: &str, b: &str) -> String {
    respond(mstar_value(a, b))
}

/// l(π) and the going-down and going-up lifts of a standard module at one level.
#[wasm_bindgen]
pub fn chains(input: &str, alpha: i64) -> String {
    respond(chains_value(input, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn analyze_trivial_sp6() {
        let v = parsed(analyze("Sp(6); (a=1,b=7,eta=+,t=0)"));
        assert_eq!(v["towers"][0]["d"], 9);
        assert_eq!(v["towers"][1]["d"], 1);
        assert_eq!(v["roles"]["up"], "plus");
        assert_eq!(v["towers"][0]["levels"][0]["outcome"], "member");
    }

    #[test]
    fn mstar_counts_terms() {
        assert_eq!(parsed(mstar("2", "3"))["total"], 6);
        assert!(parsed(mstar("x", "3"))["error"].is_string());
    }

    #[test]
    fn chains_reports_both_directions() {
        let v = parsed(chains("std: [3,3] | l_tau=5, mS1=odd, mSl=odd", 9));
        assert_eq!(v["l"], 7);
        assert!(v["up"]["module"].is_string());
        assert!(parsed(chains("Sp(6); (a=1,b=7,eta=+,t=0)", 9))["error"].is_string());
    }
}
