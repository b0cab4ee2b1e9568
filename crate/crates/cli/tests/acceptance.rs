//! Acceptance criteria AC1 to AC9. Prints one PASS/FAIL line per criterion
//! and exits non-zero when any criterion fails.

use std::fs;
use std::process::ExitCode;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use carbon_cli::run;
use carbon_core::analysis::{
    breakeven_duration, coefficient_ratio, lifecycle_split, pareto_frontier, scenario_rescale,
    scope_aggregate, Breakeven, ParetoPoint, ScenarioBreakdown, Scope, ScopeEntry, ScopeOptions,
};
use carbon_core::datasets::{bundled, lookup_intensity, DeviceLca, LcaPhases};
use carbon_core::estimator::{calibrate_soc_coefficient, CalibrationDevice, EstimatorKeys};
use carbon_core::{
    compute_power, operational_carbon, total_footprint, units, CarbonIntensity, OperationalConfig,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn rel_err(actual: f64, expected: f64) -> f64 {
    (actual - expected).abs() / expected.abs()
}

/// Collects individual checks; the criterion fails if any check fails.
#[derive(Default)]
struct Checks {
    notes: Vec<String>,
    failed: bool,
}

impl Checks {
    fn check(&mut self, ok: bool, note: String) {
        if ok {
            self.notes.push(note);
        } else {
            self.failed = true;
            self.notes.push(format!("[failed] {note}"));
        }
    }

    fn finish(self) -> Outcome {
        let text = self.notes.join("; ");
        if self.failed {
            Err(text)
        } else {
            Ok(text)
        }
    }
}

fn ac1_tsmc_scenario() -> Outcome {
    let mut c = Checks::default();
    for i in 0..=20 {
        let share = 0.63 + 0.02 * i as f64 / 20.0;
        let r = scenario_rescale(
            &ScenarioBreakdown::from_share(share).map_err(|e| e.to_string())?,
            64.0,
        )
        .map_err(|e| e.to_string())?
        .reduction_factor;
        if !(2.6..=2.8).contains(&r) {
            c.check(
                false,
                format!("share {share}: factor {r} outside [2.6, 2.8]"),
            );
        }
    }
    c.check(true, "shares 0.63..0.65 give factors in [2.6, 2.8]".into());
    let r = scenario_rescale(&ScenarioBreakdown::from_share(0.64).unwrap(), 64.0)
        .unwrap()
        .reduction_factor;
    let expected = 1.0 / (0.36 + 0.64 / 64.0);
    c.check(
        (r - expected).abs() <= 1e-9 && (r - 2.70).abs() < 0.005,
        format!("share 0.64 -> {r:.9} (oracle {expected:.9}, rounds to 2.70)"),
    );
    let out = run(&args(&[
        "scenario",
        "--energy-share",
        "0.64",
        "--reduction",
        "64",
        "--format",
        "csv",
    ]));
    c.check(
        out.code == 0
            && out
                .stdout
                .contains("scenario,reduction_factor,value,2.7027027027027"),
        format!("cli exit {}", out.code),
    );
    c.finish()
}

fn s3_s2(org: &str, year: i32, s3_t: f64, s2_t: f64) -> f64 {
    let entries = vec![
        ScopeEntry {
            scope: Scope::S3Upstream,
            grams: units::tonnes_to_g(s3_t),
            year,
            org: org.into(),
        },
        ScopeEntry {
            scope: Scope::S2Market,
            grams: units::tonnes_to_g(s2_t),
            year,
            org: org.into(),
        },
    ];
    let summary = scope_aggregate(&entries, ScopeOptions::default()).unwrap();
    summary.groups[0].totals.s3_s2_ratio.value().unwrap()
}

fn ac2_scope_ratios() -> Outcome {
    let mut c = Checks::default();
    let fb = s3_s2("Facebook", 2019, 5.8e6, 2.52e5);
    c.check(
        (fb - 23.0).abs() <= 0.1,
        format!("Facebook 2019 S3:S2 = {fb:.4}"),
    );
    let g = s3_s2("Google", 2018, 1.4e7, 6.84e5);
    c.check(
        (g - 20.5).abs() <= 0.1 && g.round() <= 21.0,
        format!("Google 2018 S3:S2 = {g:.4}"),
    );
    c.finish()
}

fn ac3_dram_nand_gap() -> Outcome {
    let set = bundled::coefficients();
    let r = coefficient_ratio(&set, "dram_ddr3_50nm", "nand_30nm").map_err(|e| e.to_string())?;
    let mut c = Checks::default();
    c.check(
        (r - 19.35).abs() <= 0.01,
        format!("dram_ddr3_50nm / nand_30nm = {r:.4}"),
    );
    c.finish()
}

fn ac4_mac_pro() -> Outcome {
    let mut c = Checks::default();
    let devices = bundled::devices();
    let mac = devices
        .iter()
        .find(|d| d.name == "Mac Pro 2")
        .ok_or("Mac Pro 2 missing")?;
    let us = lookup_intensity(&bundled::energy_regions(), "us").map_err(|e| e.to_string())?;
    let config = OperationalConfig {
        ue: 1.0,
        components: mac.hardware.clone(),
        duration_h: mac.lifetime_hours,
        intensity: us.clone(),
    };
    let power = compute_power(&config).map_err(|e| e.to_string())?;
    let op = operational_carbon(power, config.duration_h, &us).map_err(|e| e.to_string())?;
    let oracle = 0.73 * 26_280.0 * 380.0;
    c.check(
        rel_err(op, oracle) <= 1e-9,
        format!("op = {op} g, direct arithmetic {oracle} g"),
    );
    c.check(
        rel_err(op, 7_290_216.0) <= 1e-9,
        format!("op = {op} g vs stated 7,290,216 g"),
    );

    let hw = mac.phases.production_g.ok_or("no production figure")?;
    let report = total_footprint(op, hw).map_err(|e| e.to_string())?;
    let ratio = report.opex_capex_ratio.value().ok_or("ratio undefined")?;
    c.check(
        (ratio - 3.837).abs() <= 1e-6,
        format!("opex:capex = {ratio:.6} vs 3.837 +/- 1e-6"),
    );

    let be = breakeven_duration(hw, power, &us).map_err(|e| e.to_string())?;
    let hours = be.hours().ok_or("never amortizes")?;
    c.check(
        (hours - 6_849.3).abs() <= 0.1,
        format!("break-even = {hours:.3} h"),
    );
    c.finish()
}

/// Independent O(n^2) frontier: non-dominated points, coincident points
/// collapsed to the smallest label, as a sorted label list.
fn brute_force(points: &[ParetoPoint]) -> Vec<String> {
    let dominated = |q: &ParetoPoint| {
        points.iter().any(|p| {
            p.merit >= q.merit
                && p.carbon_g <= q.carbon_g
                && (p.merit > q.merit || p.carbon_g < q.carbon_g)
        })
    };
    let mut labels: Vec<String> = points
        .iter()
        .filter(|q| !dominated(q))
        .filter(|q| {
            !points
                .iter()
                .any(|p| p.merit == q.merit && p.carbon_g == q.carbon_g && p.label < q.label)
        })
        .map(|q| q.label.clone())
        .collect();
    labels.sort();
    labels.dedup();
    labels
}

fn ac5_pareto() -> Outcome {
    let mut c = Checks::default();
    let phones = vec![
        ParetoPoint::new("iPhone X", 35.0, 63_000.0),
        ParetoPoint::new("Pixel 3a", 20.0, 45_000.0),
        ParetoPoint::new("iPhone 11 Pro", 75.0, 66_000.0),
        ParetoPoint::new("iPhone 11", 70.0, 60_000.0),
    ];
    let frontier: Vec<_> = pareto_frontier(&phones)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|p| p.label)
        .collect();
    c.check(
        frontier == ["iPhone 11 Pro", "iPhone 11", "Pixel 3a"],
        format!("phones frontier {frontier:?}"),
    );

    let mut rng = StdRng::seed_from_u64(5);
    let mut mismatches = 0;
    for _ in 0..1_000 {
        let n = rng.gen_range(0..=200);
        // Coarse grids force ties and duplicates.
        let grid = rng.gen_range(2..50) as f64;
        let points: Vec<ParetoPoint> = (0..n)
            .map(|i| {
                ParetoPoint::new(
                    format!("p{i:03}"),
                    (rng.gen::<f64>() * grid).floor(),
                    (rng.gen::<f64>() * grid).floor() * 10.0,
                )
            })
            .collect();
        let mut got: Vec<String> = pareto_frontier(&points)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|p| p.label)
            .collect();
        got.sort();
        if got != brute_force(&points) {
            mismatches += 1;
        }
    }
    c.check(
        mismatches == 0,
        format!("1000 random sets, {mismatches} mismatches against brute force"),
    );
    c.finish()
}

fn ac6_breakeven_identity() -> Outcome {
    let mut c = Checks::default();
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let embodied = 10f64.powf(rng.gen_range(0.0..9.0));
        let power = 10f64.powf(rng.gen_range(-4.0..4.0));
        let intensity = CarbonIntensity::new(rng.gen_range(1.0..1_000.0), "random").unwrap();
        let hours =
            match breakeven_duration(embodied, power, &intensity).map_err(|e| e.to_string())? {
                Breakeven::Hours(h) => h,
                Breakeven::Never => return Err(format!("never for power {power}")),
            };
        let op = operational_carbon(power, hours, &intensity).map_err(|e| e.to_string())?;
        worst = worst.max(rel_err(op, embodied));
    }
    c.check(
        worst <= 1e-9,
        format!("10000 triples, worst relative error {worst:.2e}"),
    );
    let grid = CarbonIntensity::new(380.0, "grid").unwrap();
    let never = breakeven_duration(1_900_000.0, 0.0, &grid).map_err(|e| e.to_string())?;
    c.check(
        never == Breakeven::Never,
        "zero power never amortizes".into(),
    );
    c.finish()
}

fn calibration_set(
    coef: f64,
    areas: &[f64],
    dram: &[f64],
    storage: &[f64],
    noise: &[f64],
) -> Vec<CalibrationDevice> {
    let set = bundled::coefficients();
    let dram_rate = set.get("dram_ddr3_50nm").unwrap().value;
    let storage_rate = set.get("storage_mobile_avg").unwrap().value;
    let share = 0.5;
    (0..areas.len())
        .map(|i| CalibrationDevice {
            name: format!("device {i}"),
            total_manufacturing_g: (coef * areas[i] * noise[i]
                + dram[i] * dram_rate
                + storage[i] * storage_rate)
                / share,
            ic_share: share,
            dram_gb: dram[i],
            storage_gb: storage[i],
            die_area_mm2: areas[i],
        })
        .collect()
}

fn ac7_calibration() -> Outcome {
    let mut c = Checks::default();
    let set = bundled::coefficients();
    let keys = EstimatorKeys::default();
    let coef = set.get("soc_2019").ok_or("soc_2019 missing")?.value;

    // Exactly representable inputs, so every per-device quotient is exact.
    let exact = calibration_set(
        coef,
        &[64.0, 96.5, 128.25, 80.0],
        &[2.0, 4.0, 6.0, 3.0],
        &[0.0; 4],
        &[1.0; 4],
    );
    let r = calibrate_soc_coefficient(&exact, &set, &keys).map_err(|e| e.to_string())?;
    c.check(
        r.std_g_per_mm2 == 0.0 && rel_err(r.mean_g_per_mm2, coef) <= 1e-9,
        format!(
            "zero noise: mean {} std {}",
            r.mean_g_per_mm2, r.std_g_per_mm2
        ),
    );

    let areas = [83.27, 98.48, 73.0, 104.2, 91.6];
    let dram = [4.0, 6.0, 3.0, 8.0, 4.0];
    let storage = [64.0, 128.0, 32.0, 256.0, 64.0];
    let r = calibrate_soc_coefficient(
        &calibration_set(coef, &areas, &dram, &storage, &[1.0; 5]),
        &set,
        &keys,
    )
    .map_err(|e| e.to_string())?;
    c.check(
        rel_err(r.mean_g_per_mm2, coef) <= 1e-9 && r.std_g_per_mm2 <= 1e-9 * coef,
        format!(
            "zero noise, realistic sizes: mean {:.9} std {:.2e}",
            r.mean_g_per_mm2, r.std_g_per_mm2
        ),
    );

    let noise = [0.93, 1.07, 0.98, 1.04, 0.91];
    let expected = coef * noise.iter().sum::<f64>() / noise.len() as f64;
    let r = calibrate_soc_coefficient(
        &calibration_set(coef, &areas, &dram, &storage, &noise),
        &set,
        &keys,
    )
    .map_err(|e| e.to_string())?;
    c.check(
        rel_err(r.mean_g_per_mm2, expected) <= 1e-9 && rel_err(r.mean_g_per_mm2, coef) <= 0.10,
        format!(
            "+/-10% noise: mean {:.6}, expectation {expected:.6}",
            r.mean_g_per_mm2
        ),
    );
    c.finish()
}

fn ac8_lifecycle() -> Outcome {
    let mut c = Checks::default();
    let apple = DeviceLca::from_phases(
        "Apple",
        2019,
        LcaPhases {
            production_g: Some(74.0),
            use_g: Some(19.0),
            transport_g: Some(5.0),
            end_of_life_g: Some(0.2),
        },
    );
    let s = lifecycle_split(&apple).map_err(|e| e.to_string())?;
    let share = s.capex_share().value().ok_or("undefined share")?;
    c.check(
        (share - 0.796).abs() <= 0.001,
        format!("capex share of four-phase total = {share:.4} vs 0.796"),
    );
    let two = total_footprint(19.0, 74.0)
        .map_err(|e| e.to_string())?
        .capex_share
        .value()
        .unwrap();
    c.check(
        (two - 0.796).abs() <= 0.001,
        format!("production vs use only = {two:.4}"),
    );

    let record = DeviceLca::from_phases(
        "iPhone 3GS",
        2009,
        LcaPhases {
            production_g: Some(49.0),
            use_g: Some(51.0),
            transport_g: Some(0.0),
            end_of_life_g: Some(0.0),
        },
    );
    let f = lifecycle_split(&record)
        .map_err(|e| e.to_string())?
        .manufacturing_fraction
        .value()
        .unwrap();
    c.check(f == 0.49, format!("manufacturing fraction {f}"));
    c.finish()
}

fn args(a: &[&str]) -> Vec<String> {
    a.iter().map(|s| s.to_string()).collect()
}

fn ac9_determinism() -> Outcome {
    let mut c = Checks::default();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).display().to_string();
    let mut rng = StdRng::seed_from_u64(9);

    let mut points: Vec<String> = (0..40)
        .map(|i| {
            format!(
                "p{i},{},{}",
                rng.gen_range(0..30),
                rng.gen_range(0..30) * 100
            )
        })
        .collect();
    let mut scopes: Vec<String> = ["Facebook", "Google"]
        .iter()
        .flat_map(|org| {
            Scope::ALL
                .iter()
                .map(move |s| format!("{org},2019,{},{},t", s.as_str(), 1000 + org.len() * 7))
        })
        .collect();
    let mut calib = vec![
        "a,150000,0.4,4,64,83.27".to_string(),
        "b,200000,0.35,6,128,98.48".to_string(),
        "c,120000,0.45,3,32,73".to_string(),
    ];
    let devices = bundled::devices();
    let mut trend_devices = devices.clone();
    trend_devices.push(DeviceLca::from_phases(
        "Phone",
        2009,
        LcaPhases {
            production_g: Some(49.0),
            use_g: Some(51.0),
            ..Default::default()
        },
    ));

    let commands: Vec<Vec<String>> = ["json", "csv", "markdown"]
        .iter()
        .flat_map(|fmt| {
            vec![
                args(&["pareto", "--points", &path("points.csv"), "--format", fmt]),
                args(&["scopes", "--entries", &path("scopes.csv"), "--format", fmt]),
                args(&[
                    "estimate",
                    "--calibrate",
                    &path("calib.csv"),
                    "--format",
                    fmt,
                ]),
                args(&["trend", "--lca", &path("devices.json"), "--format", fmt]),
                args(&["split", "--lca", &path("devices.json"), "--format", fmt]),
                args(&[
                    "breakeven",
                    "--embodied-g",
                    "1900000",
                    "--power-kw",
                    "0.73",
                    "--grid",
                    "us",
                    "--format",
                    fmt,
                ]),
                args(&[
                    "estimate",
                    "--device",
                    "Mac Pro 2",
                    "--grid",
                    "us",
                    "--format",
                    fmt,
                ]),
            ]
        })
        .chain([
            args(&["pareto", "--points", &path("points.csv"), "--series"]),
            args(&["trend", "--lca", &path("devices.json"), "--series"]),
        ])
        .collect();

    let mut baseline: Option<Vec<String>> = None;
    for round in 0..4 {
        points.shuffle(&mut rng);
        scopes.shuffle(&mut rng);
        calib.shuffle(&mut rng);
        trend_devices.shuffle(&mut rng);
        let write = |name: &str, header: &str, rows: &[String]| {
            fs::write(path(name), format!("{header}\n{}\n", rows.join("\n")))
        };
        write("points.csv", "label,merit,carbon_g", &points).map_err(|e| e.to_string())?;
        write("scopes.csv", "org,year,scope,value,unit", &scopes).map_err(|e| e.to_string())?;
        write(
            "calib.csv",
            "name,total_manufacturing_g,ic_share,dram_gb,storage_gb,die_area_mm2",
            &calib,
        )
        .map_err(|e| e.to_string())?;
        fs::write(
            path("devices.json"),
            carbon_core::datasets::device_lca_to_json(&trend_devices),
        )
        .map_err(|e| e.to_string())?;

        let outputs: Vec<String> = commands
            .iter()
            .map(|cmd| {
                let out = run(cmd);
                format!("{}\n{}\n{}", out.code, out.stdout, out.stderr)
            })
            .collect();
        if let Some(first) = &baseline {
            let which: Vec<_> = first
                .iter()
                .zip(&outputs)
                .zip(&commands)
                .filter(|((a, b), _)| a != b)
                .map(|(_, cmd)| cmd.join(" "))
                .collect();
            c.check(
                which.is_empty(),
                if which.is_empty() {
                    format!("round {round}: outputs unchanged after row permutation")
                } else {
                    format!("round {round}: outputs differ after row permutation for {which:?}")
                },
            );
        } else {
            let failed = outputs.iter().filter(|o| !o.starts_with("0\n")).count();
            c.check(
                failed == 0,
                format!("{} commands, {failed} non-zero exits", commands.len()),
            );
            baseline = Some(outputs);
        }
    }
    let twice = commands.iter().all(|cmd| run(cmd) == run(cmd));
    c.check(twice, "identical output on repeated runs".into());
    c.finish()
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1", "TSMC energy scenario", ac1_tsmc_scenario),
        ("AC2", "scope 3 to scope 2 ratios", ac2_scope_ratios),
        ("AC3", "DRAM/NAND efficiency gap", ac3_dram_nand_gap),
        ("AC4", "Mac Pro worked example", ac4_mac_pro),
        ("AC5", "Pareto membership", ac5_pareto),
        ("AC6", "break-even identity", ac6_breakeven_identity),
        ("AC7", "calibration recovery", ac7_calibration),
        ("AC8", "lifecycle split", ac8_lifecycle),
        ("AC9", "CLI determinism", ac9_determinism),
    ];
    let mut failures = 0;
    for (id, title, check) in criteria {
        match check() {
            Ok(detail) => println!("{id} PASS  {title}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("{id} FAIL  {title}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
