//! Acceptance criteria, one PASS/FAIL line each. Runs with `harness = false`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adams_core::chains::{first_up_index, lift_down, lift_up};
use adams_core::enumerate::{enumerate_members, run_chain_checks, run_member_checks, synthetic_modules, Check, Family};
use adams_core::fixtures;
use adams_core::jacquet::{classify, jac_neg_nonzero, mstar_zeta, mstar_zeta_term_count, GlObject, JacVerdict, LadderShape};
use adams_core::recipe::{
    d_index, lift_parameter, tower_roles, DescentReport, FallbackTable, LevelOutcome, LiftStatus, Rule, TowerChoice,
};
use adams_core::segment::Segment;
use adams_core::chains::{StandardModule, TemperedDescriptor};
use adams_core::{HalfInt, PacketMember, Sign};

// Pinned limits. Everything compared below is exact; these only bound sizes and time.
const ENUMERATION_MAX_DIM: u32 = 12;
const JACQUET_MAX_SEGMENTS: usize = 4;
const JACQUET_MAX_ENDPOINT: i64 = 4;
const CLOSED_FORM_MAX_SPAN: i64 = 6;
const MIN_SYNTHETIC_MODULES: usize = 1000;
const SYNTHETIC_FULL: usize = 2;
const SYNTHETIC_SAMPLED: usize = 600;
const SYNTHETIC_SEED: u64 = 0x5eed;
const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const SUITE_BUDGET: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

type Row = (u32, u32, char, u32);

fn rows(m: &PacketMember) -> Vec<Row> {
    m.blocks.iter().map(|bd| (bd.block.a(), bd.block.b(), bd.eta.symbol(), bd.t)).collect()
}

fn sign(s: Sign) -> char {
    s.symbol()
}

fn expect_member(report: &DescentReport, alpha: i64, want: &[Row]) -> Result<(), String> {
    let level = report.level(alpha).ok_or_else(|| format!("{} tower has no level {alpha}", report.tower))?;
    match &level.outcome {
        LevelOutcome::Member(m) => {
            ensure!(rows(m) == want, "{} tower at {alpha}: got {:?}, want {:?}", report.tower, rows(m), want);
            Ok(())
        }
        other => Err(format!("{} tower at {alpha}: got {other:?}, want a member", report.tower)),
    }
}

fn expect_zero(report: &DescentReport, alpha: i64, rule: Rule) -> Result<(), String> {
    let level = report.level(alpha).ok_or_else(|| format!("{} tower has no level {alpha}", report.tower))?;
    ensure!(
        level.outcome == LevelOutcome::Zero && level.rule == rule,
        "{} tower at {alpha}: got {:?} by {}, want zero by {rule}",
        report.tower,
        level.outcome,
        level.rule
    );
    Ok(())
}

fn expect_d(report: &DescentReport, d: i64) -> Result<(), String> {
    ensure!(report.d == Some(d), "{} tower: d = {:?}, want {d}", report.tower, report.d);
    Ok(())
}

fn timed(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure!(took <= budget, "{what} took {took:?}, budget {budget:?}");
    Ok(())
}

fn descend(m: &PacketMember, tower: TowerChoice, fallback: &FallbackTable) -> Result<DescentReport, String> {
    d_index(m, tower, fallback).map_err(|e| e.to_string())
}

fn steinberg_sp6() -> Outcome {
    let start = Instant::now();
    let m = fixtures::steinberg_sp6();
    let none = FallbackTable::new();
    for tower in TowerChoice::BOTH {
        let report = descend(&m, tower, &none)?;
        let eps = match tower {
            TowerChoice::Plus => Sign::Plus,
            TowerChoice::Minus => Sign::Minus,
        };
        for alpha in [7, 9, 11, 13] {
            let member = report.member_at(alpha).ok_or(format!("{tower} tower: nothing at {alpha}"))?;
            let want = [(7, 1, '-', 0), (1, alpha as u32, sign(eps), 0)];
            ensure!(rows(&member) == want, "{tower} tower at {alpha}: got {:?}, want {want:?}", rows(&member));
        }
        for alpha in [1, 3, 5] {
            expect_member(&report, alpha, &[(1, alpha as u32, sign(eps.flip()), 0), (7, 1, '+', 0)])?;
        }
        expect_d(&report, 1)?;
    }
    timed(start, GOLDEN_BUDGET, "steinberg")?;
    Ok("levels 1..13 on both towers, d = 1 on both".into())
}

fn trivial_sp6() -> Outcome {
    let start = Instant::now();
    let m = fixtures::trivial_sp6();
    let none = FallbackTable::new();
    let plus = descend(&m, TowerChoice::Plus, &none)?;
    expect_zero(&plus, 7, Rule::AdjacentVanish)?;
    expect_d(&plus, 9)?;
    let minus = descend(&m, TowerChoice::Minus, &none)?;
    for alpha in [1, 3, 5, 7] {
        expect_member(&minus, alpha, &[(1, alpha as u32, '-', 0), (1, 7, '-', 0)])?;
    }
    expect_d(&minus, 1)?;
    let roles = tower_roles(&m, &none).map_err(|e| e.to_string())?;
    ensure!(roles.up == TowerChoice::Plus, "going-up tower is {}, want plus", roles.up);
    timed(start, GOLDEN_BUDGET, "trivial")?;
    Ok("d+ = 9 (vanishes at 7), d- = 1, going-up = plus".into())
}

fn sp10_three_blocks() -> Outcome {
    let start = Instant::now();
    let m = fixtures::sp10_three_blocks();
    let none = FallbackTable::new();
    let minus = descend(&m, TowerChoice::Minus, &none)?;
    expect_d(&minus, 9)?;
    let plus = descend(&m, TowerChoice::Plus, &none)?;
    for alpha in [5, 7] {
        expect_member(&plus, alpha, &[(1, 1, '+', 0), (3, 1, '-', 0), (1, alpha as u32, '+', 0), (1, 7, '+', 0)])?;
    }
    let level3 = plus.level(3).ok_or("plus tower has no level 3")?;
    ensure!(
        level3.outcome == LevelOutcome::NeedsGeneralAlgorithm && plus.d.is_none(),
        "without the level-5 module, level 3 should need the general algorithm; got {:?}",
        level3.outcome
    );
    let fallback = FallbackTable::from([(5, fixtures::sp10_level5_module())]);
    let plus = descend(&m, TowerChoice::Plus, &fallback)?;
    expect_zero(&plus, 3, Rule::JacquetFallback)?;
    expect_d(&plus, 5)?;
    let status = lift_parameter(&m, 3, TowerChoice::Plus, &fallback).map_err(|e| e.to_string())?;
    ensure!(status == LiftStatus::NotInAAPacket, "lift to level 3 on plus: {status:?}");
    timed(start, GOLDEN_BUDGET, "sp10")?;
    Ok("d- = 9, d+ = 5 via the Jacquet fallback, level 3 outside the packet".into())
}

fn o10_hasse_minus() -> Outcome {
    let start = Instant::now();
    let m = fixtures::o10_hasse_minus();
    let twisted = m.det_twist().map_err(|e| e.to_string())?;
    ensure!(rows(&twisted) == [(1, 3, '+', 0), (1, 7, '-', 0)], "det twist: {:?}", rows(&twisted));
    let none = FallbackTable::new();
    let minus = descend(&m, TowerChoice::Minus, &none)?;
    expect_d(&minus, 9)?;
    let plus = descend(&m, TowerChoice::Plus, &none)?;
    for alpha in [5, 7] {
        expect_member(&plus, alpha, &[(1, 3, '+', 0), (1, alpha as u32, '-', 0), (1, 7, '-', 0)])?;
    }
    expect_zero(&plus, 3, Rule::AdjacentVanish)?;
    timed(start, GOLDEN_BUDGET, "o10")?;
    Ok("det twist, d- = 9, plus tower vanishes at 3".into())
}

fn pairs(std: &StandardModule) -> Vec<(i64, i64)> {
    std.pairs().into_iter().map(|(x, y)| (x.floor(), y.floor())).collect()
}

fn chain_lifts() -> Outcome {
    let sp = fixtures::sp10_standard_module();
    let down = lift_down(&sp, 5).map_err(|e| e.to_string())?;
    let mut got = pairs(&down.module);
    got.sort();
    ensure!(got == [(1, 1), (2, 2), (3, 3)], "down lift at 5: {got:?}");
    ensure!(down.module.tempered.label == "θ_{-1}(σ)", "down lift label: {}", down.module.tempered.label);

    let up = lift_up(&sp, 9).map_err(|e| e.to_string())?;
    ensure!(pairs(&up.module) == [(3, 4)], "up lift of the Sp(10) module at 9: {:?}", pairs(&up.module));
    let o = fixtures::o10_standard_module();
    let up = lift_up(&o, 9).map_err(|e| e.to_string())?;
    let mut got = pairs(&up.module);
    got.sort();
    ensure!(got == [(1, 3), (3, 4)], "up lift of the O(10) module at 9: {got:?}");

    let fallback = FallbackTable::from([(5, fixtures::sp10_level5_module())]);
    for (std, member, fb) in [
        (&sp, fixtures::sp10_three_blocks(), fallback),
        (&o, fixtures::o10_hasse_minus(), FallbackTable::new()),
    ] {
        let first = first_up_index(std).map_err(|e| e.to_string())?;
        let roles = tower_roles(&member, &fb).map_err(|e| e.to_string())?;
        ensure!(first == 9 && roles.d_up == 9, "first up index {first}, recipe d_up {}", roles.d_up);
    }
    Ok("down at 5, up at 9, first up index 9 matches the recipe".into())
}

fn enumeration_suite() -> Outcome {
    let start = Instant::now();
    let members = enumerate_members(Family::All, ENUMERATION_MAX_DIM);
    let checks: Vec<Check> = Check::ALL.into_iter().filter(|c| *c != Check::Chains).collect();
    let reports = run_member_checks(&members, &checks);
    let mut summary = vec![format!("{} members", members.len())];
    let mut failures = Vec::new();
    for r in &reports {
        summary.push(format!("{}: {} checked, {} skipped", r.check, r.checked, r.skipped));
        ensure!(r.checked > 0, "{} checked nothing", r.check);
        failures.extend(r.violations.iter().take(3).map(|v| format!("{}: {v}", r.check)));
    }
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    timed(start, SUITE_BUDGET, "enumeration")?;
    Ok(summary.join(", "))
}

/// Right factors of a cut `Σ δ([k+1,y]) ⊗ δ([x,k])`, one cut point per segment.
fn cuts(segments: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(x, y) in segments {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (x - 1..=y).map(move |k| {
                    let mut next = prefix.clone();
                    next.push(k);
                    next
                })
            })
            .collect();
    }
    out
}

fn right_is_single(segments: &[(i64, i64)], ks: &[i64], z: i64) -> bool {
    let right: Vec<(i64, i64)> =
        segments.iter().zip(ks).filter(|((x, _), k)| **k >= *x).map(|(&(x, _), &k)| (x, k)).collect();
    right == [(z, z)]
}

/// Unlinked segments: the product is irreducible, so every cut tuple occurs.
fn product_oracle(segments: &[(i64, i64)], z: i64) -> bool {
    cuts(segments).iter().any(|ks| right_is_single(segments, ks, z))
}

/// Ladders, listed by increasing start: only cut tuples strictly increasing along the ladder occur.
fn ladder_oracle(segments: &[(i64, i64)], z: i64) -> bool {
    cuts(segments)
        .iter()
        .filter(|ks| ks.windows(2).all(|w| w[0] < w[1]))
        .any(|ks| right_is_single(segments, ks, z))
}

fn multisets(types: &[(i64, i64)], max: usize) -> Vec<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    let mut frontier: Vec<(usize, Vec<(i64, i64)>)> = vec![(0, Vec::new())];
    for _ in 0..max {
        let mut next = Vec::new();
        for (from, ms) in &frontier {
            for (i, t) in types.iter().enumerate().skip(*from) {
                let mut grown = ms.clone();
                grown.push(*t);
                out.push(grown.clone());
                next.push((i, grown));
            }
        }
        frontier = next;
    }
    out
}

fn jacquet_checks() -> Outcome {
    let types: Vec<(i64, i64)> =
        (1..=JACQUET_MAX_ENDPOINT).flat_map(|x| (x..=JACQUET_MAX_ENDPOINT).map(move |y| (x, y))).collect();
    let (mut unlinked, mut ladders, mut skipped) = (0, 0, 0);
    for ms in multisets(&types, JACQUET_MAX_SEGMENTS) {
        for z in 1..=JACQUET_MAX_ENDPOINT {
            let mut upper: Vec<(i64, i64)> = ms.iter().copied().filter(|&(x, _)| x >= z).collect();
            upper.sort();
            let shape = classify(&upper.iter().map(|&(x, y)| Segment::ints(x, y)).collect::<Vec<_>>());
            let want = match shape {
                LadderShape::Unlinked => {
                    unlinked += 1;
                    product_oracle(&upper, z)
                }
                LadderShape::SingleLadder(_) => {
                    ladders += 1;
                    ladder_oracle(&upper, z)
                }
                LadderShape::Unsupported => {
                    skipped += 1;
                    continue;
                }
            };
            let std = StandardModule::from_pairs(&ms, TemperedDescriptor::unknown()).map_err(|e| e.to_string())?;
            let got = jac_neg_nonzero(&std, HalfInt::from_int(z));
            let expected = if want { JacVerdict::Nonzero } else { JacVerdict::Zero };
            ensure!(got == expected, "{std} at z={z}: got {got}, oracle says {expected}");
        }
    }

    let mut closed = 0;
    for a in -2..=2 {
        for b in a..=a + CLOSED_FORM_MAX_SPAN {
            let (ha, hb) = (HalfInt::from_int(a), HalfInt::from_int(b));
            let sum = mstar_zeta(ha, hb).map_err(|e| e.to_string())?;
            let l = (b - a + 1) as u32;
            let count = (l + 1) * (l + 2) / 2;
            ensure!(sum.total() == count, "m*(ζ({a},{b})) has {} terms, want {count}", sum.total());
            ensure!(mstar_zeta_term_count(ha, hb) == count, "term count helper disagrees at ({a},{b})");
            for i in a - 1..=b {
                for j in i..=b {
                    let h = HalfInt::from_int;
                    let left = GlObject::zeta(h(-b), h(-(j + 1))).times(&GlObject::zeta(h(a), h(i)));
                    let right = GlObject::zeta(h(i + 1), h(j));
                    ensure!(sum.multiplicity(&[left, right]) >= 1, "term ({i},{j}) missing from m*(ζ({a},{b}))");
                }
            }
            closed += 1;
        }
    }
    Ok(format!("{unlinked} unlinked and {ladders} ladder cases ({skipped} unsupported), {closed} closed forms"))
}

fn chain_suite() -> Outcome {
    let start = Instant::now();
    let mut modules = vec![fixtures::sp10_standard_module(), fixtures::o10_standard_module()];
    modules.extend(synthetic_modules(SYNTHETIC_FULL, SYNTHETIC_SAMPLED, SYNTHETIC_SEED));
    ensure!(modules.len() >= MIN_SYNTHETIC_MODULES, "only {} modules", modules.len());
    let distinct: BTreeSet<String> = modules.iter().map(|m| m.to_string()).collect();
    let report = run_chain_checks(&modules);
    ensure!(
        report.passed(),
        "{} violations, first: {}",
        report.violations.len(),
        report.violations.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
    );
    timed(start, SUITE_BUDGET, "chain suite")?;
    Ok(format!(
        "{} modules ({} distinct), {} checks, {} skipped",
        modules.len(),
        distinct.len(),
        report.checked,
        report.skipped
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("steinberg of Sp(6) on both towers", steinberg_sp6),
        ("trivial of Sp(6) on both towers", trivial_sp6),
        ("three-block member of Sp(10)", sp10_three_blocks),
        ("O(10) member with Hasse invariant -1", o10_hasse_minus),
        ("chain lifts agree with the recipe", chain_lifts),
        ("enumeration checks up to dimension 12", enumeration_suite),
        ("Jacquet module oracles", jacquet_checks),
        ("chain-lift checks on synthetic modules", chain_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
