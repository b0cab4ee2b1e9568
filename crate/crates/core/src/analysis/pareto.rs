use std::cmp::Ordering;

use serde::Serialize;

use crate::datasets::{CoefficientSet, CoefficientUnit};
use crate::error::{Error, Result};
use crate::model::Ratio;

/// A design point: `merit` is maximized, `carbon_g` minimized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoPoint {
    pub label: String,
    pub merit: f64,
    pub carbon_g: f64,
}

impl ParetoPoint {
    pub fn new(label: impl Into<String>, merit: f64, carbon_g: f64) -> Self {
        ParetoPoint {
            label: label.into(),
            merit,
            carbon_g,
        }
    }
}

/// `p` is at least as good as `q` on both axes and strictly better on one.
pub fn dominates(p: &ParetoPoint, q: &ParetoPoint) -> bool {
    p.merit >= q.merit && p.carbon_g <= q.carbon_g && (p.merit > q.merit || p.carbon_g < q.carbon_g)
}

fn checked(points: &[ParetoPoint]) -> Result<Vec<ParetoPoint>> {
    points
        .iter()
        .map(|p| {
            for (axis, v) in [("merit", p.merit), ("carbon", p.carbon_g)] {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::validation(format!(
                        "{axis} of '{}' must be finite and >= 0, got {v}",
                        p.label
                    )));
                }
            }
            // + 0.0 folds -0.0 into 0.0 so total_cmp agrees with ==.
            Ok(ParetoPoint::new(
                p.label.clone(),
                p.merit + 0.0,
                p.carbon_g + 0.0,
            ))
        })
        .collect()
}

fn frontier_order(a: &ParetoPoint, b: &ParetoPoint) -> Ordering {
    b.merit
        .total_cmp(&a.merit)
        .then(a.carbon_g.total_cmp(&b.carbon_g))
        .then_with(|| a.label.cmp(&b.label))
}

/// Non-dominated subset, sorted by descending merit, then ascending carbon,
/// then label. Coincident points collapse to the smallest label.
pub fn pareto_frontier(points: &[ParetoPoint]) -> Result<Vec<ParetoPoint>> {
    let mut sorted = checked(points)?;
    sorted.sort_by(frontier_order);

    // Every point earlier in this order has merit >= the current one, so a
    // point survives only if it strictly improves on the best carbon so far.
    let mut frontier: Vec<ParetoPoint> = Vec::new();
    let mut best_carbon = f64::INFINITY;
    for p in sorted {
        if p.carbon_g < best_carbon {
            best_carbon = p.carbon_g;
            frontier.push(p);
        }
    }
    Ok(frontier)
}

/// A memory or storage part. On the frontier, capacity is maximized and the
/// part's footprint (`capacity_gb * g_per_gb`) minimized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityPoint {
    pub label: String,
    pub capacity_gb: f64,
    pub g_per_gb: f64,
}

impl CapacityPoint {
    pub fn footprint_g(&self) -> f64 {
        self.capacity_gb * self.g_per_gb
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityFrontier {
    /// Descending capacity.
    pub points: Vec<CapacityPoint>,
    /// Highest over lowest g/GB along the frontier.
    pub efficiency_gap: Ratio,
}

pub fn capacity_pareto(points: &[CapacityPoint]) -> Result<CapacityFrontier> {
    for p in points {
        if !(p.g_per_gb.is_finite() && p.g_per_gb >= 0.0) {
            return Err(Error::validation(format!(
                "g_per_gb of '{}' must be finite and >= 0, got {}",
                p.label, p.g_per_gb
            )));
        }
    }
    let as_pareto: Vec<ParetoPoint> = points
        .iter()
        .map(|p| ParetoPoint::new(p.label.clone(), p.capacity_gb, p.footprint_g()))
        .collect();
    let frontier = pareto_frontier(&as_pareto)?;
    // Collapsed duplicates share (capacity, footprint) and therefore g/GB.
    let points: Vec<CapacityPoint> = frontier
        .iter()
        .map(|f| {
            points
                .iter()
                .find(|p| {
                    p.label == f.label
                        && p.capacity_gb + 0.0 == f.merit
                        && p.footprint_g() + 0.0 == f.carbon_g
                })
                .cloned()
                .expect("frontier points come from the input")
        })
        .collect();
    let efficiency_gap = if points.is_empty() {
        Ratio::Undefined
    } else {
        let max = points
            .iter()
            .map(|p| p.g_per_gb)
            .fold(f64::NEG_INFINITY, f64::max);
        let min = points
            .iter()
            .map(|p| p.g_per_gb)
            .fold(f64::INFINITY, f64::min);
        Ratio::of(max, min)
    };
    Ok(CapacityFrontier {
        points,
        efficiency_gap,
    })
}

/// Ratio of two per-GB coefficients, e.g. DRAM over NAND.
pub fn coefficient_ratio(set: &CoefficientSet, numerator: &str, denominator: &str) -> Result<f64> {
    let n = set.require(numerator, CoefficientUnit::GramsPerGb)?;
    let d = set.require(denominator, CoefficientUnit::GramsPerGb)?;
    Ok(n.value / d.value)
}
