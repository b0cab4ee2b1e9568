//! Analyses built on the model: amortization of embodied carbon, Pareto
//! frontiers, renewable-energy scenarios, GHG scope totals and life-cycle
//! splits.

mod breakeven;
mod lifecycle;
mod pareto;
mod scenario;
mod scopes;

pub use breakeven::{breakeven_duration, breakeven_units, Breakeven, BreakevenUnits};
pub use lifecycle::{generation_trend, lifecycle_split, LifecycleSplit, Trend, TrendPoint};
pub use pareto::{
    capacity_pareto, coefficient_ratio, dominates, pareto_frontier, CapacityFrontier,
    CapacityPoint, ParetoPoint,
};
pub use scenario::{scenario_rescale, ScenarioBreakdown, ScenarioOutcome};
pub use scopes::{
    scope_aggregate, Scope, ScopeEntry, ScopeMode, ScopeOptions, ScopeSummary, ScopeTotals,
};
