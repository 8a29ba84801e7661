//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

use majqca::cellsim::{read_logic, relax, CellGrid, LayoutRegistry, Polarity, DEFAULT_MAX_ITER, DEFAULT_TOL};
use majqca::designs::{AdderRegistry, Adder};
use majqca::network::NetworkBuilder;
use majqca::parse::parse_expr;
use majqca::synth::{synthesize_all_3var, SearchBudget};
use majqca::truth_table::TruthTable;
use majqca::verify::verify;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);
type Identity = (&'static str, fn(bool, bool, bool) -> bool);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn cli(args: &[&str]) -> Result<(i32, Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_majqca"))
        .args(args)
        .args(["--format", "records"])
        .output()
        .map_err(|e| e.to_string())?;
    let v = serde_json::from_slice(&out.stdout).map_err(|e| format!("bad report: {e}"))?;
    Ok((out.status.code().unwrap_or(-1), v))
}

fn n(v: &Value, key: &str) -> u64 {
    v[key].as_u64().unwrap_or(u64::MAX)
}

fn ac1_adder_census() -> Check {
    let start = Instant::now();
    let (code, report) = cli(&["adders"])?;
    ensure(code == 0, format!("exit {code}"))?;
    let want = [("classic", 5, 3), ("zhang", 3, 2), ("proposed", 2, 1), ("classic-simplified", 4, 3)];
    let designs = report["results"]["designs"].as_array().ok_or("no designs")?;
    for (name, maj, inv) in want {
        let row = designs.iter().find(|d| d["name"] == name).ok_or(format!("{name} missing"))?;
        let c = &row["cost"];
        let got = (n(c, "maj3_count") + n(c, "maj5_count"), n(c, "inverter_count"));
        ensure(got == (maj, inv), format!("{name}: got {got:?}, want ({maj}, {inv})"))?;
    }
    within(start, Duration::from_secs(1))
}

fn adds(a: &Adder) -> bool {
    (0..8u8).all(|r| {
        let (x, y, z) = (r & 4 != 0, r & 2 != 0, r & 1 != 0);
        let (s, c) = a.eval(x, y, z);
        2 * c as u8 + s as u8 == x as u8 + y as u8 + z as u8
    })
}

fn ac2_adder_arithmetic() -> Check {
    let start = Instant::now();
    let reg = AdderRegistry::builtin();
    ensure(reg.names().len() == 4, "expected four designs")?;
    for d in reg.iter() {
        ensure(adds(&d.build()), format!("{} fails 2*Cout+Sum", d.name()))?;
    }
    within(start, Duration::from_secs(1))
}

fn audit_rows() -> Result<Vec<Value>, String> {
    let (code, report) = cli(&["audit-tables", "--order", "A,B,C"])?;
    ensure(code == 0, format!("exit {code}"))?;
    report["results"]["rows"].as_array().cloned().ok_or("no rows".into())
}

fn row<'a>(rows: &'a [Value], ms: &[u64]) -> Result<&'a Value, String> {
    rows.iter()
        .find(|r| r["minterms"].as_array().map(|a| a.iter().map(|x| x.as_u64().unwrap()).collect::<Vec<_>>()) == Some(ms.to_vec()))
        .ok_or(format!("row {ms:?} missing"))
}

fn ac3_comparison_costs() -> Check {
    let rows = audit_rows()?;
    // (levels, inverters, maj3, maj5, gates)
    let cases = [
        (&[3, 4, 5, 6, 7][..], "previous", (2, 0, 2, 0, 2)),
        (&[3, 4, 5, 6, 7][..], "proposed", (1, 0, 0, 1, 1)),
        (&[0, 3, 5, 6, 7][..], "previous", (2, 3, 4, 0, 7)),
        (&[0, 3, 5, 6, 7][..], "proposed", (2, 1, 1, 2, 4)),
    ];
    for (ms, side, want) in cases {
        let c = &row(&rows, ms)?[side]["cost"];
        let got = (n(c, "levels"), n(c, "inverter_count"), n(c, "maj3_count"), n(c, "maj5_count"), n(c, "gate_count"));
        ensure(got == want, format!("{ms:?} {side}: got {got:?}, want {want:?}"))?;
    }
    Ok("4 cost rows exact".into())
}

fn ac4_library_audit() -> Check {
    let start = Instant::now();
    let rows = audit_rows()?;
    for ms in [&[7][..], &[3, 4, 5, 6, 7], &[3, 6, 7], &[1, 2, 3, 4, 5, 6, 7], &[0, 3, 5, 6, 7]] {
        let v = &row(&rows, ms)?["proposed"]["verdict"];
        ensure(v["equivalent"] == true, format!("{ms:?} proposed not equivalent"))?;
        ensure(v["variable_order_note"].as_str().is_some_and(|s| s.contains("A,B,C")), "order note missing")?;
    }
    let odd = &row(&rows, &[1, 2, 7])?["proposed"]["verdict"];
    ensure(odd["equivalent"].is_boolean(), "sum(1,2,7) verdict missing")?;
    let expr = parse_expr("M5(M(A,B,C)',M5(A,A,B,C,1),A,B,C)", &["A", "B", "C"]).map_err(|e| e.to_string())?;
    let oracle = (0..8).filter(|&r| expr.evaluate(&[r & 4 != 0, r & 2 != 0, r & 1 != 0]).unwrap()).collect::<Vec<u64>>();
    let reported: Vec<u64> =
        odd["computed_minterms"].as_array().ok_or("no minterms")?.iter().filter_map(|x| x.as_u64()).collect();
    ensure(reported == oracle, format!("sum(1,2,7) reported {reported:?}, oracle {oracle:?}"))?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("sum(1,2,7) proposed equivalent={} computes {oracle:?}; {t}", odd["equivalent"]))
}

fn ac5_majority_identities() -> Check {
    let maj5 = {
        let mut b = NetworkBuilder::new(5);
        let ins = [0, 1, 2, 3, 4].map(|i| b.input(i));
        let m = b.maj5(ins);
        b.build(m).unwrap()
    };
    for k in 0..32u32 {
        let v: Vec<bool> = (0..5).map(|i| k >> (4 - i) & 1 == 1).collect();
        let (a, b, c, d, e) = (v[0], v[1], v[2], v[3], v[4]);
        let sop = a && b && c || a && b && d || a && b && e || a && c && d || a && c && e
            || a && d && e || b && c && d || b && c && e || b && d && e || c && d && e;
        ensure(maj5.evaluate(&v).unwrap() == sop, format!("maj5 row {k}"))?;
    }
    let names = ["A", "B", "C"];
    let identities: [Identity; 4] = [
        ("M(A,B,0)", |a, b, _| a && b),
        ("M(A,B,1)", |a, b, _| a || b),
        ("M5(A,B,C,0,0)", |a, b, c| a && b && c),
        ("M5(A,B,C,1,1)", |a, b, c| a || b || c),
    ];
    for (text, f) in identities {
        let net = parse_expr(text, &names).map_err(|e| e.to_string())?;
        for r in 0..8 {
            let (a, b, c) = (r & 4 != 0, r & 2 != 0, r & 1 != 0);
            ensure(net.evaluate(&[a, b, c]).unwrap() == f(a, b, c), format!("{text} row {r}"))?;
        }
    }
    Ok("32 rows + 4 identities".into())
}

fn ac6_synthesis_sweep() -> Check {
    let start = Instant::now();
    let atlas = synthesize_all_3var(&SearchBudget::default()).map_err(|e| e.to_string())?;
    ensure(atlas.entries.len() == 256, "atlas incomplete")?;
    let mut found = 0;
    for entry in atlas.entries.values() {
        let Some(s) = &entry.result else { continue };
        let spec = TruthTable::from_minterms(3, entry.minterms.iter().copied()).unwrap();
        ensure(verify(&s.network, &spec).unwrap().equivalent, format!("{:?} -> {}", entry.minterms, s.expression))?;
        found += 1;
    }
    for ms in [&[7][..], &[3, 4, 5, 6, 7]] {
        let spec = TruthTable::from_minterms(3, ms.iter().copied()).unwrap();
        let s = atlas.get(&spec).and_then(|e| e.result.as_ref()).ok_or(format!("{ms:?} not found"))?;
        ensure(s.cost.gate_count == 1, format!("{ms:?} needs {} gates", s.cost.gate_count))?;
    }
    let t = within(start, Duration::from_secs(300))?;
    Ok(format!("{found}/256 synthesized and verified; {t}"))
}

fn bits(k: usize, arity: usize) -> Vec<Polarity> {
    (0..arity).map(|i| Polarity::from(k >> (arity - 1 - i) & 1 == 1)).collect()
}

fn settle(mut g: CellGrid) -> Result<CellGrid, String> {
    relax(&mut g, DEFAULT_TOL, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    Ok(g)
}

fn ac7_cell_gate_agreement() -> Check {
    let start = Instant::now();
    let mut cases = 0;
    let mut weakest = f64::INFINITY;
    let mut check = |layout: &dyn majqca::cellsim::Layout| -> Result<(), String> {
        let reference = layout.reference();
        for k in 0..1usize << layout.arity() {
            let drivers = bits(k, layout.arity());
            let g = settle(layout.build(&drivers).map_err(|e| e.to_string())?)?;
            let p = g.output_polarization();
            weakest = weakest.min(p.abs());
            ensure(p.abs() > 0.5, format!("{} {k:b}: |P| = {p}", layout.name()))?;
            let want = reference.evaluate(&drivers.iter().map(|d| d.bit()).collect::<Vec<_>>()).unwrap();
            ensure(read_logic(&g, 0.5) == Ok(want), format!("{} {k:b}: wrong readout", layout.name()))?;
            cases += 1;
        }
        Ok(())
    };
    let reg = LayoutRegistry::default();
    for name in ["maj3", "maj5", "inv"] {
        check(reg.get(name).ok_or(name)?)?;
    }
    for len in 2..=10 {
        check(LayoutRegistry::builtin(len).get("wire").ok_or("wire")?)?;
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("{cases} cases, min |P_out| {weakest:.3}; {t}"))
}

fn ac8_odd_symmetry() -> Check {
    let mut worst: f64 = 0.0;
    let mut layouts = vec![LayoutRegistry::default()];
    layouts.extend((2..=10).map(LayoutRegistry::builtin));
    for reg in &layouts {
        for layout in reg.iter() {
            for k in 0..1usize << layout.arity() {
                let d = bits(k, layout.arity());
                let neg: Vec<Polarity> = d.iter().map(|p| p.flip()).collect();
                let a = settle(layout.build(&d).unwrap())?;
                let b = settle(layout.build(&neg).unwrap())?;
                for (x, y) in a.polarizations().iter().zip(b.polarizations()) {
                    worst = worst.max((x + y).abs());
                }
            }
        }
    }
    ensure(worst <= 1e-9, format!("max |P + P'| = {worst:e}"))?;
    Ok(format!("max |P + P'| = {worst:e}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 adder gate census", ac1_adder_census),
        ("2 adder arithmetic", ac2_adder_arithmetic),
        ("3 comparison-row costs", ac3_comparison_costs),
        ("4 expression library audit", ac4_library_audit),
        ("5 majority identities", ac5_majority_identities),
        ("6 synthesis soundness sweep", ac6_synthesis_sweep),
        ("7 cell/gate agreement", ac7_cell_gate_agreement),
        ("8 relaxation odd symmetry", ac8_odd_symmetry),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
