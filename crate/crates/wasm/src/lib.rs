//! Browser bindings for the bounded-pipeline toolkit.
//!
//! Three interactive operations back the demo page in `www/`: a
//! time-versus-depth explorer with optimal-depth recommendations, the
//! reservation-table view, and the capped normal form of the pipeline
//! trace. Each returns a JSON payload; the page does the rendering.
//!
//! Build with `wasm-pack build crates/wasm --target web --out-dir www/pkg`,
//! then serve `crates/wasm/www/`.

use serde_json::json;
use wasm_bindgen::prelude::*;

use bpl_core::{
    bounded_time, build_table, foata_normal_form, generalized_amdahl, optimal_depth_exact,
    optimal_depth_restart, optimal_depth_simplified, pipeline_trace, restart_time, unit_label,
    DepthRecommendation, PipelineConfig, RestartModel, SweepMeta, SweepResult, SweepRow,
    TableFormat, Workload,
};

fn recommendation_json(result: bpl_core::Result<DepthRecommendation>) -> serde_json::Value {
    match result {
        Ok(rec) => json!({
            "real_optimum": rec.real_optimum,
            "integer_optimum": rec.integer_optimum,
            "predicted_time": rec.predicted_time,
        }),
        Err(error) => json!({ "unavailable": error.to_string() }),
    }
}

/// Sweep the model curve over depths 1..=max_depth and bundle it with the
/// recommendations of all applicable depth formulas.
pub fn depth_explorer_report(
    devices: usize,
    elements: usize,
    logical_delay: f64,
    latch_overhead: f64,
    restart_probability: Option<f64>,
    max_depth: usize,
) -> bpl_core::Result<String> {
    let workload = Workload::new(elements)?;
    let restart = restart_probability.map(RestartModel::new).transpose()?;
    let max_depth = max_depth.max(1);

    let label = if restart.is_some() {
        "restart"
    } else {
        "bounded"
    };
    let mut rows = Vec::with_capacity(max_depth);
    for depth in 1..=max_depth {
        let cfg = PipelineConfig::new(depth, devices, logical_delay, latch_overhead)?;
        let model_time = match restart {
            Some(r) => restart_time(&cfg, workload, r),
            None => bounded_time(&cfg, workload),
        };
        rows.push(SweepRow {
            depth,
            model_time,
            simulated_time: None,
            label: label.to_string(),
        });
    }
    let sweep = SweepResult::new(
        rows,
        SweepMeta {
            devices,
            elements,
            logical_delay,
            latch_overhead,
            restart_probability,
            mode: None,
            unit: unit_label(logical_delay, latch_overhead).to_string(),
        },
    )?;
    let best = sweep.min_model_row().expect("non-empty sweep");

    let exact = recommendation_json(optimal_depth_exact(
        devices,
        workload,
        logical_delay,
        latch_overhead,
    ));
    let simplified = recommendation_json(optimal_depth_simplified(
        devices,
        workload,
        logical_delay,
        latch_overhead,
    ));
    let restart_rec = restart.map(|r| {
        recommendation_json(optimal_depth_restart(
            devices,
            workload,
            logical_delay,
            latch_overhead,
            r,
        ))
    });

    let payload = json!({
        "svg": sweep.to_svg(),
        "unit": sweep.metadata.unit,
        "scan_minimum": { "depth": best.depth, "time": best.model_time },
        "recommendations": {
            "exact": exact,
            "simplified": simplified,
            "restart": restart_rec,
        },
    });
    Ok(payload.to_string())
}

/// Reservation table plus concurrency accounting.
pub fn reservation_table_report(
    depth: usize,
    devices: usize,
    elements: usize,
) -> bpl_core::Result<String> {
    let table = build_table(depth, devices, elements)?;
    let profile = table.concurrency_fractions();
    let weighted = generalized_amdahl(&profile.fractions, profile.total_slots as f64)?;
    let fractions: Vec<serde_json::Value> = profile
        .level_slots
        .iter()
        .enumerate()
        .map(|(i, &slots)| {
            json!({
                "concurrency": i + 1,
                "slots": slots,
                "fraction": profile.fractions[i],
            })
        })
        .collect();
    let payload = json!({
        "text": table.render(TableFormat::Text),
        "csv": table.render(TableFormat::Csv),
        "completion_cycles": table.completion_cycles(),
        "total_slots": profile.total_slots,
        "fractions": fractions,
        "weighted_completion": weighted,
    });
    Ok(payload.to_string())
}

/// Capped normal form of the canonical pipeline trace.
pub fn foata_report(depth: usize, devices: usize, elements: usize) -> bpl_core::Result<String> {
    let trace = pipeline_trace(depth, elements)?;
    let form = foata_normal_form(&trace, devices)?;
    let payload = json!({
        "ops": trace.ops().len(),
        "height": form.height(),
        "blocks": form.to_string(),
    });
    Ok(payload.to_string())
}

fn to_js(result: bpl_core::Result<String>) -> Result<String, JsValue> {
    result.map_err(|error| JsValue::from_str(&error.to_string()))
}

/// Time-versus-depth curve with optimal-depth recommendations.
#[wasm_bindgen]
pub fn explore_depth(
    devices: usize,
    elements: usize,
    logical_delay: f64,
    latch_overhead: f64,
    restart_probability: Option<f64>,
    max_depth: usize,
) -> Result<String, JsValue> {
    to_js(depth_explorer_report(
        devices,
        elements,
        logical_delay,
        latch_overhead,
        restart_probability,
        max_depth,
    ))
}

/// Reservation table, concurrency fractions and the weighted completion.
#[wasm_bindgen]
pub fn reservation_table(depth: usize, devices: usize, elements: usize) -> Result<String, JsValue> {
    to_js(reservation_table_report(depth, devices, elements))
}

/// Blocks and height of the capped normal form.
#[wasm_bindgen]
pub fn foata_form(depth: usize, devices: usize, elements: usize) -> Result<String, JsValue> {
    to_js(foata_report(depth, devices, elements))
}
