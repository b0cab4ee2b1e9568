use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, Result};
use crate::model::Ratio;

/// GHG-protocol scope of an emission quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    S1,
    S2Location,
    S2Market,
    S3Upstream,
    S3Downstream,
}

impl Scope {
    pub const ALL: [Scope; 5] = [
        Scope::S1,
        Scope::S2Location,
        Scope::S2Market,
        Scope::S3Upstream,
        Scope::S3Downstream,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::S1 => "s1",
            Scope::S2Location => "s2_location",
            Scope::S2Market => "s2_market",
            Scope::S3Upstream => "s3_upstream",
            Scope::S3Downstream => "s3_downstream",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Scope::ALL
            .into_iter()
            .find(|scope| scope.as_str() == s.trim())
            .ok_or_else(|| format!("unknown scope '{s}' (expected one of s1, s2_location, s2_market, s3_upstream, s3_downstream)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScopeEntry {
    pub scope: Scope,
    pub grams: f64,
    pub year: i32,
    pub org: String,
}

/// Which scope-2 accounting enters the totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScopeMode {
    Location,
    #[default]
    Market,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScopeOptions {
    pub mode: ScopeMode,
    /// Count scope 1 as capital rather than operational emissions.
    pub scope1_as_capex: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScopeTotals {
    pub s1_g: f64,
    pub s2_location_g: f64,
    pub s2_market_g: f64,
    pub s3_upstream_g: f64,
    pub s3_downstream_g: f64,
    /// Scope 2 under the selected mode.
    pub s2_g: f64,
    pub s3_g: f64,
    pub grand_total_g: f64,
    pub s3_s2_ratio: Ratio,
    pub opex_g: f64,
    pub capex_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScopeGroup {
    pub org: String,
    pub year: i32,
    pub totals: ScopeTotals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScopeSummary {
    pub mode: ScopeMode,
    pub scope1_as_capex: bool,
    /// One group per (org, year), sorted.
    pub groups: Vec<ScopeGroup>,
    pub overall: ScopeTotals,
}

fn sorted_sum(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values.into_iter().sum()
}

fn totals(by_scope: [f64; 5], options: ScopeOptions) -> ScopeTotals {
    let [s1, s2_location, s2_market, s3_upstream, s3_downstream] = by_scope;
    let s2 = match options.mode {
        ScopeMode::Location => s2_location,
        ScopeMode::Market => s2_market,
    };
    let s3 = s3_upstream + s3_downstream;
    let (opex, capex) = if options.scope1_as_capex {
        (s2, s1 + s3)
    } else {
        (s1 + s2, s3)
    };
    ScopeTotals {
        s1_g: s1,
        s2_location_g: s2_location,
        s2_market_g: s2_market,
        s3_upstream_g: s3_upstream,
        s3_downstream_g: s3_downstream,
        s2_g: s2,
        s3_g: s3,
        grand_total_g: opex + capex,
        s3_s2_ratio: Ratio::of(s3, s2),
        opex_g: opex,
        capex_g: capex,
    }
}

/// Merges duplicate (org, year, scope) values by summation and totals them
/// per organization-year and overall.
pub fn scope_aggregate(entries: &[ScopeEntry], options: ScopeOptions) -> Result<ScopeSummary> {
    let mut merged: BTreeMap<(String, i32), [Vec<f64>; 5]> = BTreeMap::new();
    for e in entries {
        non_negative(&format!("{} {} {}", e.org, e.year, e.scope), e.grams)?;
        let slot = merged.entry((e.org.clone(), e.year)).or_default();
        slot[e.scope as usize].push(e.grams);
    }

    let mut overall = [0.0; 5];
    let mut groups = Vec::with_capacity(merged.len());
    for ((org, year), values) in merged {
        let by_scope = values.map(sorted_sum);
        for (acc, v) in overall.iter_mut().zip(by_scope) {
            *acc += v;
        }
        groups.push(ScopeGroup {
            org,
            year,
            totals: totals(by_scope, options),
        });
    }

    Ok(ScopeSummary {
        mode: options.mode,
        scope1_as_capex: options.scope1_as_capex,
        groups,
        overall: totals(overall, options),
    })
}
