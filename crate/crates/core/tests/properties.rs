use carbon_core::analysis::{
    breakeven_duration, dominates, lifecycle_split, pareto_frontier, scenario_rescale,
    scope_aggregate, Breakeven, ParetoPoint, ScenarioBreakdown, Scope, ScopeEntry, ScopeMode,
    ScopeOptions,
};
use carbon_core::datasets::{bundled, DeviceLca, LcaPhases};
use carbon_core::estimator::{
    calibrate_soc_coefficient, estimate_device_total, estimate_ic_footprint, evaluate_estimator,
    CalibrationDevice, EstimatorKeys,
};
use carbon_core::{
    compute_power, embodied_carbon, operational_carbon, total_footprint, CarbonIntensity,
    ComponentKind, ComponentSpec, EmbodiedSource, OperationalConfig,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn kind() -> impl Strategy<Value = ComponentKind> {
    prop_oneof![
        Just(ComponentKind::Soc),
        Just(ComponentKind::Memory),
        Just(ComponentKind::Storage)
    ]
}

fn component() -> impl Strategy<Value = ComponentSpec> {
    (kind(), 0.0..2_000.0f64, 0.0..=1.0f64)
        .prop_map(|(k, tdp, util)| ComponentSpec::new(k, tdp, util).unwrap())
}

fn config(ue: f64, components: Vec<ComponentSpec>) -> OperationalConfig {
    OperationalConfig {
        ue,
        components,
        duration_h: 1.0,
        intensity: CarbonIntensity::new(380.0, "grid").unwrap(),
    }
}

fn embodied(g: f64) -> ComponentSpec {
    ComponentSpec::new(ComponentKind::Memory, 0.0, 0.0)
        .unwrap()
        .with_embodied(EmbodiedSource::Grams(g))
        .unwrap()
}

/// Pairwise dominance check with coincident points collapsed to the
/// smallest label.
fn brute_force_frontier(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    let mut kept: Vec<ParetoPoint> = Vec::new();
    for (i, q) in points.iter().enumerate() {
        let dominated = points.iter().any(|p| dominates(p, q));
        let shadowed = points.iter().enumerate().any(|(j, p)| {
            j != i
                && p.merit == q.merit
                && p.carbon_g == q.carbon_g
                && (p.label < q.label || (p.label == q.label && j < i))
        });
        if !dominated && !shadowed {
            kept.push(q.clone());
        }
    }
    kept.sort_by(|a, b| {
        b.merit
            .partial_cmp(&a.merit)
            .unwrap()
            .then(a.carbon_g.partial_cmp(&b.carbon_g).unwrap())
            .then(a.label.cmp(&b.label))
    });
    kept
}

fn pareto_points(max: usize) -> impl Strategy<Value = Vec<ParetoPoint>> {
    // Small integer grids force ties and duplicates.
    prop::collection::vec((0u8..12, 0u8..12, 0u8..6), 0..max).prop_map(|v| {
        v.into_iter()
            .map(|(m, c, l)| ParetoPoint::new(format!("p{l}"), m as f64, c as f64 * 1_000.0))
            .collect()
    })
}

proptest! {
    #[test]
    fn power_matches_direct_sum(ue in 1.0..2.0f64, comps in prop::collection::vec(component(), 1..12)) {
        let expected = ue * comps.iter().map(|c| c.tdp_w * c.utilization).sum::<f64>() / 1000.0;
        let got = compute_power(&config(ue, comps)).unwrap();
        prop_assert!(close(got, expected, 1e-12) || (got == 0.0 && expected == 0.0));
    }

    #[test]
    fn power_is_order_free(ue in 1.0..2.0f64, comps in prop::collection::vec(component(), 1..12), seed in any::<u64>()) {
        let mut shuffled = comps.clone();
        let n = shuffled.len();
        shuffled.rotate_left((seed as usize) % n);
        shuffled.reverse();
        prop_assert_eq!(compute_power(&config(ue, comps)).unwrap(), compute_power(&config(ue, shuffled)).unwrap());
    }

    #[test]
    fn power_is_monotone(ue in 1.0..2.0f64, comps in prop::collection::vec(component(), 1..8), idx in any::<prop::sample::Index>(), bump in 0.0..1.0f64, ue_bump in 0.0..1.0f64) {
        let base = compute_power(&config(ue, comps.clone())).unwrap();
        let mut more = comps.clone();
        let i = idx.index(more.len());
        more[i].utilization = (more[i].utilization + bump).min(1.0);
        prop_assert!(compute_power(&config(ue, more)).unwrap() >= base);
        prop_assert!(compute_power(&config(ue + ue_bump, comps)).unwrap() >= base);
    }

    #[test]
    fn operational_carbon_is_homogeneous(p in 0.0..10.0f64, t in 0.0..1e5f64, g in 0.0..1_000.0f64, a in 0.0..100.0f64) {
        let i = CarbonIntensity::new(g, "x").unwrap();
        let base = operational_carbon(p, t, &i).unwrap();
        let tol = |x: f64, y: f64| close(x, y, 1e-12) || (x == 0.0 && y == 0.0);
        prop_assert!(tol(operational_carbon(a * p, t, &i).unwrap(), a * base));
        prop_assert!(tol(operational_carbon(p, a * t, &i).unwrap(), a * base));
        let scaled = CarbonIntensity::new(a * g, "x").unwrap();
        prop_assert!(tol(operational_carbon(p, t, &scaled).unwrap(), a * base));
    }

    #[test]
    fn embodied_is_additive(a in prop::collection::vec(0.0..1e7f64, 0..10), b in prop::collection::vec(0.0..1e7f64, 0..10)) {
        let left: Vec<_> = a.iter().copied().map(embodied).collect();
        let right: Vec<_> = b.iter().copied().map(embodied).collect();
        let union: Vec<_> = left.iter().chain(&right).cloned().collect();
        let whole = embodied_carbon(&union).unwrap();
        let parts = embodied_carbon(&left).unwrap() + embodied_carbon(&right).unwrap();
        prop_assert!(close(whole, parts, 1e-9) || whole == parts);
    }

    #[test]
    fn footprint_parts_add_up(op in 0.0..1e9f64, hw in 0.0..1e9f64) {
        let r = total_footprint(op, hw).unwrap();
        prop_assert_eq!(r.total_g, op + hw);
        if r.total_g > 0.0 {
            let sum = r.opex_share.value().unwrap() + r.capex_share.value().unwrap();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn breakeven_round_trips(e in 1e-3..1e9f64, p in 1e-4..10.0f64, g in 1e-2..1_000.0f64) {
        let i = CarbonIntensity::new(g, "x").unwrap();
        let h = breakeven_duration(e, p, &i).unwrap().hours().unwrap();
        prop_assert!(close(operational_carbon(p, h, &i).unwrap(), e, 1e-9));
        let doubled = CarbonIntensity::new(2.0 * g, "x").unwrap();
        let h2 = breakeven_duration(e, p, &doubled).unwrap().hours().unwrap();
        prop_assert!(close(h2, h / 2.0, 1e-15));
    }

    #[test]
    fn frontier_matches_brute_force(points in pareto_points(60)) {
        let fast = pareto_frontier(&points).unwrap();
        prop_assert_eq!(&fast, &brute_force_frontier(&points));
        // No survivor is dominated; every excluded point is dominated by a survivor or duplicates one.
        for f in &fast {
            prop_assert!(!points.iter().any(|p| dominates(p, f)));
        }
        for p in &points {
            if !fast.contains(p) {
                prop_assert!(fast.iter().any(|f| dominates(f, p) || (f.merit == p.merit && f.carbon_g == p.carbon_g)));
            }
        }
        prop_assert_eq!(pareto_frontier(&fast).unwrap(), fast.clone());
        let mut reversed = points.clone();
        reversed.reverse();
        prop_assert_eq!(pareto_frontier(&reversed).unwrap(), fast);
    }

    #[test]
    fn scenario_reduction_is_monotone(e in 0.0..1e6f64, o in 0.0..1e6f64, k in 1.0..100.0f64, dk in 0.0..100.0f64) {
        let b = ScenarioBreakdown::new(e, o).unwrap();
        let low = scenario_rescale(&b, k).unwrap();
        let high = scenario_rescale(&b, k + dk).unwrap();
        prop_assert!(high.reduction_factor >= low.reduction_factor * (1.0 - 1e-12));
        prop_assert!(low.breakdown.total_g() >= o);
        prop_assert_eq!(scenario_rescale(&b, 1.0).unwrap().breakdown, b);
    }

    #[test]
    fn scope_modes_differ_only_in_scope2(values in prop::collection::vec((0usize..5, 0.0..1e9f64, 0i32..3), 0..20)) {
        let entries: Vec<ScopeEntry> = values
            .into_iter()
            .map(|(s, g, y)| ScopeEntry { scope: Scope::ALL[s], grams: g, year: 2018 + y, org: "org".into() })
            .collect();
        let market = scope_aggregate(&entries, ScopeOptions { mode: ScopeMode::Market, scope1_as_capex: false }).unwrap();
        let location = scope_aggregate(&entries, ScopeOptions { mode: ScopeMode::Location, scope1_as_capex: false }).unwrap();
        for t in [&market.overall, &location.overall] {
            prop_assert!(close(t.grand_total_g, t.s1_g + t.s2_g + t.s3_g, 1e-12) || t.grand_total_g == 0.0);
            prop_assert_eq!(t.grand_total_g, t.opex_g + t.capex_g);
        }
        prop_assert_eq!(market.overall.s1_g, location.overall.s1_g);
        prop_assert_eq!(market.overall.s3_g, location.overall.s3_g);
        prop_assert_eq!(market.overall.s2_g, market.overall.s2_market_g);
        prop_assert_eq!(location.overall.s2_g, location.overall.s2_location_g);
    }

    #[test]
    fn lifecycle_covers_present_phases(ph in prop::collection::vec(prop::option::of(0.0..1e6f64), 4)) {
        let phases = LcaPhases { production_g: ph[0], transport_g: ph[1], use_g: ph[2], end_of_life_g: ph[3] };
        let lca = DeviceLca::from_phases("d", 2020, phases);
        match lifecycle_split(&lca) {
            Ok(s) => {
                let present: f64 = ph.iter().flatten().sum();
                prop_assert!(close(s.capex_g + s.opex_g, present, 1e-12) || present == 0.0);
            }
            Err(_) => prop_assert!(ph.iter().all(Option::is_none)),
        }
    }

    #[test]
    fn ic_footprint_is_linear(area in 0.0..500.0f64, dram in 0.0..64.0f64, storage in 0.0..2048.0f64, a in 0.0..10.0f64) {
        let set = bundled::coefficients();
        let keys = EstimatorKeys::default();
        let f = |x: f64, y: f64, z: f64| estimate_ic_footprint(x, y, z, &set, &keys).unwrap();
        let base = f(area, dram, storage);
        prop_assert!(close(f(a * area, 0.0, 0.0), a * f(area, 0.0, 0.0), 1e-12) || area * a == 0.0);
        prop_assert!(close(f(0.0, a * dram, 0.0), a * f(0.0, dram, 0.0), 1e-12) || dram * a == 0.0);
        prop_assert!(close(f(0.0, 0.0, a * storage), a * f(0.0, 0.0, storage), 1e-12) || storage * a == 0.0);
        prop_assert!(close(base, f(area, 0.0, 0.0) + f(0.0, dram, 0.0) + f(0.0, 0.0, storage), 1e-12) || base == 0.0);
    }

    #[test]
    fn device_total_round_trips(ic in 0.0..1e7f64, share in 0.01..=1.0f64) {
        let total = estimate_device_total(ic, share).unwrap();
        prop_assert!(close(total * share, ic, 1e-12) || ic == 0.0);
    }

    #[test]
    fn calibration_recovers_generating_coefficient(
        coef in 50.0..500.0f64,
        devices in prop::collection::vec((1.0..200.0f64, 0.0..16.0f64, 0.0..1024.0f64, 0.1..=1.0f64), 1..8),
    ) {
        let set = bundled::coefficients();
        let keys = EstimatorKeys::default();
        let devices: Vec<CalibrationDevice> = devices
            .into_iter()
            .enumerate()
            .map(|(i, (area, dram, storage, share))| CalibrationDevice {
                name: format!("d{i}"),
                total_manufacturing_g: (area * coef + dram * 600.0 + storage * 8.6) / share,
                ic_share: share,
                dram_gb: dram,
                storage_gb: storage,
                die_area_mm2: area,
            })
            .collect();
        let r = calibrate_soc_coefficient(&devices, &set, &keys).unwrap();
        prop_assert!(close(r.mean_g_per_mm2, coef, 1e-9));
        prop_assert!(r.std_g_per_mm2 <= 1e-9 * coef);
        prop_assert_eq!(r.per_device.len(), devices.len());
    }

    #[test]
    fn calibration_statistics_ignore_device_order(
        devices in prop::collection::vec((1.0..200.0f64, 1e5..1e6f64, 0.2..=0.6f64), 1..10),
        seed in any::<u64>(),
    ) {
        let set = bundled::coefficients();
        let keys = EstimatorKeys::default();
        let mut devices: Vec<CalibrationDevice> = devices
            .into_iter()
            .enumerate()
            .map(|(i, (area, total, share))| CalibrationDevice {
                name: format!("d{i}"),
                total_manufacturing_g: total,
                ic_share: share,
                dram_gb: 0.0,
                storage_gb: 0.0,
                die_area_mm2: area,
            })
            .collect();
        let a = calibrate_soc_coefficient(&devices, &set, &keys).unwrap();
        devices.shuffle(&mut StdRng::seed_from_u64(seed));
        let b = calibrate_soc_coefficient(&devices, &set, &keys).unwrap();
        prop_assert_eq!(a.mean_g_per_mm2.to_bits(), b.mean_g_per_mm2.to_bits());
        prop_assert_eq!(a.std_g_per_mm2.to_bits(), b.std_g_per_mm2.to_bits());
    }

    #[test]
    fn estimator_error_matches_elementwise_oracle(pairs in prop::collection::vec((0.0..1e6f64, 1e-3..1e6f64), 1..30)) {
        let (pred, rep): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
        let mut acc = 0.0;
        for i in 0..pred.len() {
            let diff = if pred[i] > rep[i] { pred[i] - rep[i] } else { rep[i] - pred[i] };
            acc += diff / rep[i];
        }
        let expected = acc / pred.len() as f64;
        prop_assert!(close(evaluate_estimator(&pred, &rep).unwrap(), expected, 1e-12) || expected == 0.0);
    }
}

#[test]
fn zero_supply_never_amortizes() {
    let clean = CarbonIntensity::new(0.0, "x").unwrap();
    assert_eq!(
        breakeven_duration(10.0, 1.0, &clean).unwrap(),
        Breakeven::Never
    );
}
