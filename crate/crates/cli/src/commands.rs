use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use carbon_core::analysis::{
    breakeven_duration, breakeven_units, capacity_pareto, generation_trend, lifecycle_split,
    pareto_frontier, scenario_rescale, scope_aggregate, Breakeven, ScenarioBreakdown, ScopeMode,
    ScopeOptions, ScopeTotals,
};
use carbon_core::datasets::{lookup_intensity, DeviceLca, LcaPhases};
use carbon_core::estimator::{
    calibrate_soc_coefficient, estimate_device_total, estimate_ic_footprint, evaluate_estimator,
    ic_share, resolve_components, EstimatorKeys,
};
use carbon_core::{
    compute_power, embodied_carbon, operational_carbon, total_footprint, units, CarbonIntensity,
    ComponentKind, ComponentSpec, Error as CoreError, OperationalConfig,
};

use crate::inputs::{self, DataDir};
use crate::report::{Format, Report, ResultGroup, SeriesPoint, Value};
use crate::{CliError, EXIT_INVALID, EXIT_NEVER_AMORTIZES, EXIT_OK};

#[derive(Parser, Debug)]
#[command(
    name = "carbon",
    version,
    about = "Operational and embodied carbon reports for computer hardware"
)]
struct Cli {
    /// Output format: json, csv or markdown.
    #[arg(
        long,
        global = true,
        help_heading = "Global Options",
        default_value = "json"
    )]
    format: String,
    /// Directory holding the reference files (overrides CARBON_DATA_DIR).
    #[arg(long, global = true, help_heading = "Global Options")]
    data_dir: Option<PathBuf>,
    /// Exit with status 3 when embodied carbon never amortizes.
    #[arg(long, global = true, help_heading = "Global Options")]
    strict: bool,
    /// Print the plot-ready `x,y,label` series instead of the report.
    #[arg(long, global = true, help_heading = "Global Options")]
    series: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate a device's footprint from its hardware, or calibrate the SoC coefficient.
    Estimate(Box<EstimateArgs>),
    /// Operating time until operational carbon equals embodied carbon.
    Breakeven(BreakevenArgs),
    /// Pareto frontier of performance (or capacity) against carbon.
    Pareto(ParetoArgs),
    /// Rescale electricity-attributed emissions for a cleaner energy supply.
    Scenario(ScenarioArgs),
    /// Aggregate GHG-protocol scope emissions.
    Scopes(ScopesArgs),
    /// Capex/opex split of device life-cycle records.
    Split(SplitArgs),
    /// Manufacturing fraction across device generations.
    Trend(TrendArgs),
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Region or energy-source label from the reference tables.
    #[arg(long, conflicts_with = "intensity")]
    grid: Option<String>,
    /// Carbon intensity in g CO2e per kWh.
    #[arg(long)]
    intensity: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Profile {
    Datacenter,
    Mobile,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Device name from the life-cycle records.
    #[arg(long, conflicts_with = "calibrate")]
    device: Option<String>,
    /// Device life-cycle JSON (defaults to the reference devices file).
    #[arg(long)]
    devices: Option<PathBuf>,
    /// Calibration device CSV; fits the SoC coefficient instead of estimating.
    #[arg(long)]
    calibrate: Option<PathBuf>,
    /// SoC die area in mm2.
    #[arg(long, default_value_t = 0.0)]
    die_area_mm2: f64,
    /// DRAM capacity in GB.
    #[arg(long, default_value_t = 0.0)]
    dram_gb: f64,
    /// Storage capacity in GB.
    #[arg(long, default_value_t = 0.0)]
    storage_gb: f64,
    /// Integrated-circuit share of device manufacturing carbon.
    #[arg(long)]
    ic_share: Option<f64>,
    /// Coefficient used for the SoC (g/mm2).
    #[arg(long, default_value = "soc_2019")]
    soc_coef: String,
    /// Coefficient used for DRAM (g/GB).
    #[arg(long, default_value = "dram_ddr3_50nm")]
    dram_coef: String,
    /// Coefficient used for storage (g/GB).
    #[arg(long, default_value = "storage_mobile_avg")]
    storage_coef: String,
    /// Coefficient CSV (defaults to the reference coefficients file).
    #[arg(long)]
    coefficients: Option<PathBuf>,
    /// SoC TDP in W; adds operational carbon to the estimate.
    #[arg(long)]
    tdp_w: Option<f64>,
    /// Average utilization in [0, 1].
    #[arg(long, default_value_t = 1.0)]
    utilization: f64,
    /// Utilization effectiveness; defaults by profile.
    #[arg(long)]
    ue: Option<f64>,
    /// Selects the default utilization effectiveness.
    #[arg(long, value_enum, default_value = "datacenter")]
    profile: Profile,
    /// Operating lifetime in hours (default 26280).
    #[arg(long, conflicts_with = "lifetime_years")]
    lifetime_hours: Option<f64>,
    /// Operating lifetime in years.
    #[arg(long)]
    lifetime_years: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    /// Reported manufacturing footprint to score the estimate against.
    #[arg(long, conflicts_with = "reported_kg")]
    reported_g: Option<f64>,
    /// Reported manufacturing footprint in kilograms.
    #[arg(long)]
    reported_kg: Option<f64>,
}

#[derive(Args, Debug)]
struct BreakevenArgs {
    #[arg(
        long,
        required_unless_present = "embodied_kg",
        conflicts_with = "embodied_kg"
    )]
    /// Embodied carbon in grams.
    embodied_g: Option<f64>,
    /// Embodied carbon in kilograms.
    #[arg(long)]
    embodied_kg: Option<f64>,
    /// Average power draw in kW.
    #[arg(long, required_unless_present = "power_w", conflicts_with = "power_w")]
    power_kw: Option<f64>,
    /// Average power draw in W.
    #[arg(long)]
    power_w: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    /// Work rate (units per second) to convert the break-even into units of work.
    #[arg(long)]
    throughput: Option<f64>,
}

#[derive(Args, Debug)]
struct ParetoArgs {
    /// CSV of `label,merit,carbon_g` (or `label,capacity_gb,g_per_gb` with --capacity).
    #[arg(long)]
    points: PathBuf,
    /// Treat points as memory parts: maximize capacity, minimize capacity x g/GB.
    #[arg(long)]
    capacity: bool,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// Fraction of emissions attributed to electricity.
    #[arg(long, conflicts_with_all = ["energy_g", "other_g"], required_unless_present = "energy_g")]
    energy_share: Option<f64>,
    /// Electricity-attributed emissions in grams.
    #[arg(long, requires = "other_g")]
    energy_g: Option<f64>,
    /// Remaining emissions in grams.
    #[arg(long, requires = "energy_g")]
    other_g: Option<f64>,
    /// Factor by which the electricity carbon intensity drops.
    #[arg(long, conflicts_with_all = ["from_grid", "to_grid"], required_unless_present = "from_grid")]
    reduction: Option<f64>,
    /// Current grid label; the reduction is its intensity over --to-grid.
    #[arg(long, requires = "to_grid")]
    from_grid: Option<String>,
    /// Cleaner grid label.
    #[arg(long, requires = "from_grid")]
    to_grid: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Location,
    Market,
}

#[derive(Args, Debug)]
struct ScopesArgs {
    /// CSV of `org,year,scope,value,unit`.
    #[arg(long)]
    entries: PathBuf,
    /// Scope 2 accounting that enters the totals.
    #[arg(long, value_enum, default_value = "market")]
    mode: ModeArg,
    /// Count scope 1 as capex instead of opex.
    #[arg(long)]
    scope1_as_capex: bool,
}

#[derive(Args, Debug)]
struct SplitArgs {
    /// Device life-cycle JSON (defaults to the reference devices file).
    #[arg(long)]
    lca: Option<PathBuf>,
    /// Only report this device from the records.
    #[arg(long)]
    device: Option<String>,
    /// Inline record: production emissions in grams.
    #[arg(long)]
    production_g: Option<f64>,
    /// Inline record: transport emissions in grams.
    #[arg(long)]
    transport_g: Option<f64>,
    /// Inline record: use-phase emissions in grams.
    #[arg(long)]
    use_g: Option<f64>,
    /// Inline record: end-of-life emissions in grams.
    #[arg(long)]
    end_of_life_g: Option<f64>,
}

#[derive(Args, Debug)]
struct TrendArgs {
    /// Device life-cycle JSON (defaults to the reference devices file).
    #[arg(long)]
    lca: Option<PathBuf>,
}

pub(crate) struct Execution {
    pub code: i32,
    pub report: Report,
    pub format: Format,
    pub series: bool,
    /// Help, version or usage text from argument parsing.
    pub usage: Option<String>,
}

pub(crate) fn execute(argv: &[String]) -> Execution {
    let mut report = Report::new(argv);
    let mut exec = Execution {
        code: EXIT_OK,
        report: Report::new(argv),
        format: Format::Json,
        series: false,
        usage: None,
    };

    let cli = match Cli::try_parse_from(
        std::iter::once("carbon".to_string()).chain(argv.iter().cloned()),
    ) {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            exec.code = if ok { EXIT_OK } else { EXIT_INVALID };
            exec.usage = Some(e.render().to_string());
            if !ok {
                exec.report.error = Some(e.kind().to_string());
            }
            return exec;
        }
    };
    exec.series = cli.series;
    exec.format = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            exec.code = EXIT_INVALID;
            exec.report.error = Some(e);
            return exec;
        }
    };

    let data = DataDir::resolve(cli.data_dir);
    let outcome = match &cli.command {
        Command::Estimate(a) => estimate(a, &data, &mut report),
        Command::Breakeven(a) => breakeven(a, &data, &mut report),
        Command::Pareto(a) => pareto(a, &mut report),
        Command::Scenario(a) => scenario(a, &data, &mut report),
        Command::Scopes(a) => scopes(a, &mut report),
        Command::Split(a) => split(a, &data, &mut report),
        Command::Trend(a) => trend(a, &data, &mut report),
    };
    match outcome {
        Ok(Status::Done) => {}
        Ok(Status::NeverAmortizes) => {
            if cli.strict {
                exec.code = EXIT_NEVER_AMORTIZES;
            }
        }
        Err(e) => {
            exec.code = EXIT_INVALID;
            report.results.clear();
            report.series = None;
            report.error = Some(e.0);
        }
    }
    exec.report = report;
    exec
}

enum Status {
    Done,
    NeverAmortizes,
}

type CmdResult = Result<Status, CliError>;

fn resolve_intensity(
    label: &str,
    data: &DataDir,
    report: &mut Report,
) -> Result<CarbonIntensity, CliError> {
    let regions = data.energy_regions(report)?;
    match lookup_intensity(&regions, label) {
        Ok(i) => Ok(i),
        Err(CoreError::UnknownLabel { .. }) => {
            let sources = data.energy_sources(report)?;
            lookup_intensity(&sources, label).map_err(|e| match e {
                CoreError::UnknownLabel {
                    label,
                    mut available,
                } => {
                    available.extend(regions.labels());
                    available.sort();
                    CoreError::UnknownLabel { label, available }.into()
                }
                other => other.into(),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn grid_intensity(
    args: &GridArgs,
    data: &DataDir,
    report: &mut Report,
) -> Result<Option<CarbonIntensity>, CliError> {
    match (&args.grid, args.intensity) {
        (Some(label), _) => resolve_intensity(label, data, report).map(Some),
        (None, Some(g)) => Ok(Some(CarbonIntensity::new(g, "custom")?)),
        (None, None) => Ok(None),
    }
}

fn push_intensity(group: &mut ResultGroup, i: &CarbonIntensity) {
    group.quantity("intensity", i.grams_per_kwh, "g/kWh");
    group.quantity("intensity_label", i.label.as_str(), "");
}

fn push_footprint(group: &mut ResultGroup, op_g: f64, hw_g: f64) -> Result<(), CliError> {
    let f = total_footprint(op_g, hw_g)?;
    group
        .quantity("op_cf", f.op_cf_g, "g")
        .quantity("hw_cf", f.hw_cf_g, "g")
        .quantity("total_cf", f.total_g, "g")
        .quantity("opex_share", f.opex_share, "fraction")
        .quantity("capex_share", f.capex_share, "fraction")
        .quantity("opex_capex_ratio", f.opex_capex_ratio, "ratio");
    Ok(())
}

fn lifetime_hours(a: &EstimateArgs, fallback: f64) -> f64 {
    match (a.lifetime_hours, a.lifetime_years) {
        (Some(h), _) => h,
        (None, Some(y)) => units::years_to_hours(y),
        (None, None) => fallback,
    }
}

fn default_ue(a: &EstimateArgs) -> f64 {
    a.ue.unwrap_or(match a.profile {
        Profile::Datacenter => units::DEFAULT_DATACENTER_UE,
        Profile::Mobile => units::DEFAULT_MOBILE_UE,
    })
}

fn estimate(a: &EstimateArgs, data: &DataDir, report: &mut Report) -> CmdResult {
    let coefficients = match &a.coefficients {
        Some(path) => inputs::coefficients_file(path, report)?,
        None => data.coefficients(report)?,
    };
    let keys = EstimatorKeys {
        soc: a.soc_coef.clone(),
        dram: a.dram_coef.clone(),
        storage: a.storage_coef.clone(),
    };

    if let Some(path) = &a.calibrate {
        let devices = inputs::calibration_devices(path, report)?;
        let result = calibrate_soc_coefficient(&devices, &coefficients, &keys)?;
        let mut summary = ResultGroup::quantities("calibration");
        summary
            .quantity("devices", result.per_device.len(), "count")
            .quantity("mean", result.mean_g_per_mm2, "g/mm2")
            .quantity("std_population", result.std_g_per_mm2, "g/mm2");
        let mut per_device = ResultGroup::new("per_device", &["device", "g_per_mm2"]);
        let mut rows = result.per_device.clone();
        rows.sort_by(|x, y| x.name.cmp(&y.name));
        for d in rows {
            per_device.row(vec![d.name.into(), d.g_per_mm2.into()]);
        }
        report.results.extend([summary, per_device]);
        return Ok(Status::Done);
    }

    let reported = a.reported_g.or(a.reported_kg.map(units::kg_to_g));

    if let Some(name) = &a.device {
        let devices = match &a.devices {
            Some(path) => inputs::devices_file(path, report)?,
            None => data.devices(report)?,
        };
        let device = devices
            .iter()
            .find(|d| d.name == *name)
            .ok_or_else(|| CliError(format!("no device named '{name}'")))?;
        let intensity = grid_intensity(&a.grid, data, report)?
            .ok_or_else(|| CliError("estimate --device needs --grid or --intensity".into()))?;
        let config = OperationalConfig {
            ue: default_ue(a),
            components: device.hardware.clone(),
            duration_h: lifetime_hours(a, device.lifetime_hours),
            intensity,
        };
        let power_kw = compute_power(&config)?;
        let op_g = operational_carbon(power_kw, config.duration_h, &config.intensity)?;

        let mut group = ResultGroup::quantities("estimate");
        group
            .quantity("device", device.name.as_str(), "")
            .quantity("ue", config.ue, "")
            .quantity("power", power_kw, "kW")
            .quantity("duration", config.duration_h, "h");
        push_intensity(&mut group, &config.intensity);

        let resolved =
            resolve_components(&device.hardware, &coefficients).and_then(|c| embodied_carbon(&c));
        let hw_g = match (device.phases.production_g, &resolved) {
            (Some(g), _) => g,
            (None, Ok(g)) => {
                report.warnings.push(format!(
                    "{}: no production footprint reported, using the hardware estimate",
                    device.name
                ));
                *g
            }
            (None, Err(e)) => {
                return Err(CliError(format!(
                    "{}: no production footprint and {e}",
                    device.name
                )))
            }
        };
        match &resolved {
            Ok(g) => {
                group.quantity("hardware_estimate", *g, "g");
            }
            Err(e) => report.warnings.push(format!(
                "{}: hardware estimate unavailable: {e}",
                device.name
            )),
        }
        push_footprint(&mut group, op_g, hw_g)?;
        if let Some(rep) = reported {
            group.quantity(
                "relative_error",
                evaluate_estimator(&[hw_g], &[rep])?,
                "fraction",
            );
        }
        report.results.push(group);
        return Ok(Status::Done);
    }

    let share = a.ic_share.unwrap_or_else(|| ic_share(&coefficients));
    let ic_g = estimate_ic_footprint(
        a.die_area_mm2,
        a.dram_gb,
        a.storage_gb,
        &coefficients,
        &keys,
    )?;
    let device_g = estimate_device_total(ic_g, share)?;
    let mut group = ResultGroup::quantities("estimate");
    group
        .quantity("ic_footprint", ic_g, "g")
        .quantity("ic_share", share, "fraction")
        .quantity("device_manufacturing", device_g, "g");
    if let Some(rep) = reported {
        group.quantity(
            "relative_error",
            evaluate_estimator(&[device_g], &[rep])?,
            "fraction",
        );
    }
    if let Some(tdp) = a.tdp_w {
        let intensity = grid_intensity(&a.grid, data, report)?
            .ok_or_else(|| CliError("--tdp-w needs --grid or --intensity".into()))?;
        let soc = ComponentSpec::new(ComponentKind::Soc, tdp, a.utilization)?;
        let config = OperationalConfig {
            ue: default_ue(a),
            components: vec![soc],
            duration_h: lifetime_hours(a, units::DEFAULT_LIFETIME_HOURS),
            intensity,
        };
        let power_kw = compute_power(&config)?;
        let op_g = operational_carbon(power_kw, config.duration_h, &config.intensity)?;
        group
            .quantity("ue", config.ue, "")
            .quantity("power", power_kw, "kW")
            .quantity("duration", config.duration_h, "h");
        push_intensity(&mut group, &config.intensity);
        push_footprint(&mut group, op_g, device_g)?;
    }
    report.results.push(group);
    Ok(Status::Done)
}

fn breakeven(a: &BreakevenArgs, data: &DataDir, report: &mut Report) -> CmdResult {
    let embodied_g = a
        .embodied_g
        .or(a.embodied_kg.map(units::kg_to_g))
        .expect("clap requires one");
    let power_kw = a
        .power_kw
        .or(a.power_w.map(units::watts_to_kw))
        .expect("clap requires one");
    let intensity = grid_intensity(&a.grid, data, report)?
        .ok_or_else(|| CliError("breakeven needs --grid or --intensity".into()))?;
    let result = breakeven_duration(embodied_g, power_kw, &intensity)?;

    let mut group = ResultGroup::quantities("breakeven");
    group
        .quantity("embodied", embodied_g, "g")
        .quantity("power", power_kw, "kW");
    push_intensity(&mut group, &intensity);
    group.quantity("hours", result, "h");
    let days = match result {
        Breakeven::Hours(h) => Value::Num(units::hours_to_days(h)),
        Breakeven::Never => Value::Never,
    };
    group.quantity("days", days, "d");
    if let Some(rate) = a.throughput {
        group.quantity("units", breakeven_units(result, rate)?, "units");
    }
    report.results.push(group);
    if result == Breakeven::Never {
        report
            .warnings
            .push("operational carbon never reaches the embodied carbon".into());
        return Ok(Status::NeverAmortizes);
    }
    Ok(Status::Done)
}

fn pareto(a: &ParetoArgs, report: &mut Report) -> CmdResult {
    let mut summary = ResultGroup::quantities("summary");
    if a.capacity {
        let points = inputs::capacity_points(&a.points, report)?;
        let frontier = capacity_pareto(&points)?;
        let mut group = ResultGroup::new(
            "frontier",
            &["rank", "label", "capacity_gb", "g_per_gb", "footprint_g"],
        );
        let mut series = Vec::new();
        for (i, p) in frontier.points.iter().enumerate() {
            group.row(vec![
                (i + 1).into(),
                p.label.as_str().into(),
                p.capacity_gb.into(),
                p.g_per_gb.into(),
                p.footprint_g().into(),
            ]);
            series.push(SeriesPoint {
                x: p.capacity_gb.into(),
                y: p.footprint_g().into(),
                label: p.label.clone(),
            });
        }
        summary
            .quantity("points", points.len(), "count")
            .quantity("frontier", frontier.points.len(), "count")
            .quantity("efficiency_gap", frontier.efficiency_gap, "ratio");
        report.results.extend([group, summary]);
        report.series = Some(series);
        return Ok(Status::Done);
    }

    let points = inputs::pareto_points(&a.points, report)?;
    let frontier = pareto_frontier(&points)?;
    let mut group = ResultGroup::new("frontier", &["rank", "label", "merit", "carbon_g"]);
    let mut series = Vec::new();
    for (i, p) in frontier.iter().enumerate() {
        group.row(vec![
            (i + 1).into(),
            p.label.as_str().into(),
            p.merit.into(),
            p.carbon_g.into(),
        ]);
        series.push(SeriesPoint {
            x: p.merit.into(),
            y: p.carbon_g.into(),
            label: p.label.clone(),
        });
    }
    summary
        .quantity("points", points.len(), "count")
        .quantity("frontier", frontier.len(), "count");
    report.results.extend([group, summary]);
    report.series = Some(series);
    Ok(Status::Done)
}

fn scenario(a: &ScenarioArgs, data: &DataDir, report: &mut Report) -> CmdResult {
    let breakdown = match (a.energy_share, a.energy_g, a.other_g) {
        (Some(s), _, _) => ScenarioBreakdown::from_share(s)?,
        (None, Some(e), Some(o)) => ScenarioBreakdown::new(e, o)?,
        _ => {
            return Err(CliError(
                "give --energy-share or both --energy-g and --other-g".into(),
            ))
        }
    };
    let k = match (a.reduction, &a.from_grid, &a.to_grid) {
        (Some(k), _, _) => k,
        (None, Some(from), Some(to)) => {
            let from = resolve_intensity(from, data, report)?;
            let to = resolve_intensity(to, data, report)?;
            if to.grams_per_kwh == 0.0 {
                return Err(CliError(format!(
                    "'{}' has zero intensity; the reduction is unbounded",
                    to.label
                )));
            }
            from.grams_per_kwh / to.grams_per_kwh
        }
        _ => {
            return Err(CliError(
                "give --reduction or both --from-grid and --to-grid".into(),
            ))
        }
    };
    let out = scenario_rescale(&breakdown, k)?;
    let mut group = ResultGroup::quantities("scenario");
    group
        .quantity("intensity_reduction", k, "ratio")
        .quantity("energy_before", breakdown.energy_attributed_g, "g")
        .quantity("other", breakdown.other_g, "g")
        .quantity("energy_after", out.breakdown.energy_attributed_g, "g")
        .quantity("total_before", breakdown.total_g(), "g")
        .quantity("total_after", out.breakdown.total_g(), "g")
        .quantity("reduction_factor", out.reduction_factor, "ratio");
    report.results.push(group);
    Ok(Status::Done)
}

const SCOPE_COLUMNS: [&str; 10] = [
    "key",
    "org",
    "year",
    "s1_g",
    "s2_g",
    "s3_g",
    "grand_total_g",
    "s3_s2_ratio",
    "opex_g",
    "capex_g",
];

fn scope_row(key: String, org: &str, year: Value, t: &ScopeTotals) -> Vec<Value> {
    vec![
        key.into(),
        org.into(),
        year,
        t.s1_g.into(),
        t.s2_g.into(),
        t.s3_g.into(),
        t.grand_total_g.into(),
        t.s3_s2_ratio.into(),
        t.opex_g.into(),
        t.capex_g.into(),
    ]
}

fn scopes(a: &ScopesArgs, report: &mut Report) -> CmdResult {
    let entries = inputs::scope_entries(&a.entries, report)?;
    let options = ScopeOptions {
        mode: match a.mode {
            ModeArg::Location => ScopeMode::Location,
            ModeArg::Market => ScopeMode::Market,
        },
        scope1_as_capex: a.scope1_as_capex,
    };
    let summary = scope_aggregate(&entries, options)?;
    let mut groups = ResultGroup::new("by_org_year", &SCOPE_COLUMNS);
    for g in &summary.groups {
        groups.row(scope_row(
            format!("{}/{}", g.org, g.year),
            &g.org,
            g.year.into(),
            &g.totals,
        ));
    }
    let mut overall = ResultGroup::new("overall", &SCOPE_COLUMNS);
    overall.row(scope_row(
        "all".into(),
        "all",
        Value::text(""),
        &summary.overall,
    ));
    let mut settings = ResultGroup::quantities("settings");
    settings
        .quantity(
            "scope2_mode",
            if options.mode == ScopeMode::Market {
                "market"
            } else {
                "location"
            },
            "",
        )
        .quantity(
            "scope1_as",
            if options.scope1_as_capex {
                "capex"
            } else {
                "opex"
            },
            "",
        );
    report.results.extend([groups, overall, settings]);
    Ok(Status::Done)
}

fn split(a: &SplitArgs, data: &DataDir, report: &mut Report) -> CmdResult {
    let inline = LcaPhases {
        production_g: a.production_g,
        transport_g: a.transport_g,
        use_g: a.use_g,
        end_of_life_g: a.end_of_life_g,
    };
    let records: Vec<DeviceLca> = if !inline.is_empty() {
        if a.lca.is_some() || a.device.is_some() {
            return Err(CliError(
                "phase flags cannot be combined with --lca or --device".into(),
            ));
        }
        vec![DeviceLca::from_phases("inline", 0, inline)]
    } else {
        let all = match &a.lca {
            Some(path) => inputs::devices_file(path, report)?,
            None => data.devices(report)?,
        };
        match &a.device {
            Some(name) => {
                let found: Vec<_> = all.into_iter().filter(|d| d.name == *name).collect();
                if found.is_empty() {
                    return Err(CliError(format!("no device named '{name}'")));
                }
                found
            }
            None => all,
        }
    };

    let mut group = ResultGroup::new(
        "split",
        &[
            "device",
            "capex_g",
            "opex_g",
            "total_g",
            "capex_share",
            "manufacturing_fraction",
        ],
    );
    let mut rows = Vec::new();
    for lca in &records {
        let s = lifecycle_split(lca)?;
        report.warnings.extend(s.warnings.iter().cloned());
        rows.push((lca.name.clone(), s));
    }
    rows.sort_by(|x, y| x.0.cmp(&y.0));
    for (name, s) in rows {
        group.row(vec![
            name.into(),
            s.capex_g.into(),
            s.opex_g.into(),
            s.total_g.into(),
            s.capex_share().into(),
            s.manufacturing_fraction.into(),
        ]);
    }
    report.warnings.sort();
    report.results.push(group);
    Ok(Status::Done)
}

fn trend(a: &TrendArgs, data: &DataDir, report: &mut Report) -> CmdResult {
    let records = match &a.lca {
        Some(path) => inputs::devices_file(path, report)?,
        None => data.devices(report)?,
    };
    let t = generation_trend(&records)?;
    let mut group = ResultGroup::new(
        "trend",
        &[
            "rank",
            "year",
            "device",
            "manufacturing_fraction",
            "total_g",
        ],
    );
    let mut series = Vec::new();
    for (i, p) in t.points.iter().enumerate() {
        group.row(vec![
            (i + 1).into(),
            p.year.into(),
            p.name.as_str().into(),
            p.manufacturing_fraction.into(),
            p.total_g.into(),
        ]);
        series.push(SeriesPoint {
            x: p.year.into(),
            y: p.manufacturing_fraction.into(),
            label: p.name.clone(),
        });
    }
    report.warnings.extend(t.warnings);
    report.warnings.sort();
    report.results.push(group);
    report.series = Some(series);
    Ok(Status::Done)
}
