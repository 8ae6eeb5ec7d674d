//! Cross-checks between the closed-form model and the three independent
//! execution oracles: reservation table, capped normal form, virtual run.

use bpl_core::{
    bounded_cycles, bounded_time, build_table, foata_normal_form, generalized_amdahl, independent,
    pipeline_trace, run_virtual, simplified_error_bound, simplified_time, Op, PipelineConfig,
    Workload,
};

fn unit(p: usize, q: usize) -> PipelineConfig {
    PipelineConfig::unit_cycle(p, q).unwrap()
}

fn w(n: usize) -> Workload {
    Workload::new(n).unwrap()
}

#[test]
fn formula_table_normal_form_and_virtual_run_agree_on_the_grid() {
    for p in 1..=8 {
        for q in 1..=p {
            for n in 1..=12 {
                let formula = bounded_cycles(p, q, n);
                let table = build_table(p, q, n).unwrap();
                let trace = pipeline_trace(p, n).unwrap();
                let form = foata_normal_form(&trace, q).unwrap();
                let run = run_virtual(&unit(p, q), n).unwrap();
                assert_eq!(
                    table.completion_cycles() as u64,
                    formula,
                    "table ({p},{q},{n})"
                );
                assert_eq!(form.height() as u64, formula, "normal form ({p},{q},{n})");
                assert_eq!(run.total_time, formula as f64, "virtual run ({p},{q},{n})");
            }
        }
    }
}

#[test]
fn surplus_devices_reduce_to_the_unconstrained_pipeline() {
    for p in 1..=6 {
        for q in p..=10 {
            for n in [1, 2, 7, 12] {
                let cycles = bounded_cycles(p, q, n);
                assert_eq!(cycles, (p + n - 1) as u64);
                let table = build_table(p, q, n).unwrap();
                assert_eq!(table.completion_cycles() as u64, cycles);
            }
        }
    }
}

#[test]
fn amdahl_identity_holds_on_every_grid_table() {
    for p in 1..=8 {
        for q in 1..=p {
            for n in 1..=12 {
                let table = build_table(p, q, n).unwrap();
                let profile = table.concurrency_fractions();
                assert_eq!(profile.total_slots, n * p, "conservation ({p},{q},{n})");
                let reconstructed = generalized_amdahl(&profile.fractions, (n * p) as f64).unwrap();
                let completion = table.completion_cycles() as f64;
                assert!(
                    (reconstructed - completion).abs() <= 1e-9 * completion,
                    "({p},{q},{n}): {reconstructed} vs {completion}"
                );
            }
        }
    }
}

#[test]
fn single_hazard_model_sandwiches_the_exact_one() {
    for p in 1..=12 {
        for q in 1..=12 {
            for n in [1, 2, 5, 19, 30] {
                for (tp, to) in [(0.0, 1.0), (10.0, 0.02), (1.0, 0.3)] {
                    let cfg = PipelineConfig::new(p, q, tp, to).unwrap();
                    let gap = simplified_time(&cfg, w(n)) - bounded_time(&cfg, w(n));
                    if p <= q {
                        assert_eq!(gap, 0.0, "({p},{q},{n},{tp},{to})");
                    } else {
                        let bound = simplified_error_bound(&cfg);
                        assert!(
                            (0.0..bound).contains(&gap),
                            "({p},{q},{n},{tp},{to}): gap {gap}, bound {bound}"
                        );
                    }
                }
            }
        }
    }
}

/// Exact trace-equivalence check: bubble each op of `to` leftwards through
/// `from` using only adjacent transpositions of independent ops.
fn reachable_by_independent_swaps(from: &[Op], to: &[Op]) -> bool {
    if from.len() != to.len() {
        return false;
    }
    let mut work = from.to_vec();
    for (target_pos, &target) in to.iter().enumerate() {
        let Some(offset) = work[target_pos..].iter().position(|&o| o == target) else {
            return false;
        };
        let mut pos = target_pos + offset;
        while pos > target_pos {
            if !independent(work[pos - 1], work[pos]) {
                return false;
            }
            work.swap(pos - 1, pos);
            pos -= 1;
        }
    }
    work == to
}

#[test]
fn normal_form_is_a_legal_commutation_of_the_trace() {
    for p in 1..=6 {
        for n in 1..=6 {
            if p * n > 12 {
                continue;
            }
            let trace = pipeline_trace(p, n).unwrap();
            for cap in 1..=p {
                let form = foata_normal_form(&trace, cap).unwrap();
                let flattened = form.flatten();
                assert!(
                    reachable_by_independent_swaps(trace.ops(), &flattened),
                    "({p},{n},{cap})"
                );
            }
        }
    }
}

#[test]
fn normal_form_blocks_are_the_reservation_columns() {
    // the two oracles are built differently but must produce the same
    // schedule op for op, not just the same length
    for (p, q, n) in [(4, 3, 8), (5, 2, 6), (10, 5, 50), (3, 3, 4), (6, 1, 5)] {
        let table = build_table(p, q, n).unwrap();
        let form = foata_normal_form(&pipeline_trace(p, n).unwrap(), q).unwrap();
        assert_eq!(form.height(), table.completion_cycles(), "({p},{q},{n})");
        for (cycle, (block, column)) in form.blocks().iter().zip(table.columns()).enumerate() {
            let mut from_table: Vec<Op> = column
                .iter()
                .enumerate()
                .filter_map(|(s, cell)| {
                    cell.map(|e| Op {
                        element: e,
                        stage: s + 1,
                    })
                })
                .collect();
            from_table.sort_by_key(|op| std::cmp::Reverse(op.stage));
            assert_eq!(block, &from_table, "({p},{q},{n}) cycle {}", cycle + 1);
        }
    }
}

#[test]
fn golden_normal_form_of_the_worked_example() {
    let form = foata_normal_form(&pipeline_trace(4, 8).unwrap(), 3).unwrap();
    let expected = "\
1: (1,1)
2: (1,2) (2,1)
3: (1,3) (2,2) (3,1)
4: (1,4) (2,3) (3,2)
5: (2,4) (3,3) (4,1)
6: (3,4) (4,2) (5,1)
7: (4,3) (5,2) (6,1)
8: (4,4) (5,3) (6,2)
9: (5,4) (6,3) (7,1)
10: (6,4) (7,2) (8,1)
11: (7,3) (8,2)
12: (7,4) (8,3)
13: (8,4)
";
    assert_eq!(form.to_string(), expected);
}

#[test]
fn normal_form_height_never_increases_with_the_cap() {
    for p in 1..=7 {
        for n in 1..=9 {
            let trace = pipeline_trace(p, n).unwrap();
            let mut previous = usize::MAX;
            for cap in 1..=p + 2 {
                let height = foata_normal_form(&trace, cap).unwrap().height();
                assert!(height <= previous, "({p},{n},{cap})");
                previous = height;
            }
        }
    }
}

#[test]
fn tables_on_the_grid_respect_capacity_and_order() {
    for p in 1..=8 {
        for q in 1..=p {
            for n in 1..=12 {
                let table = build_table(p, q, n).unwrap();
                let mut exit_cycles = Vec::new();
                for (c, column) in table.columns().iter().enumerate() {
                    let active = column.iter().filter(|cell| cell.is_some()).count();
                    assert!(active <= q, "capacity ({p},{q},{n}) cycle {}", c + 1);
                    if let Some(e) = column[p - 1] {
                        exit_cycles.push((c, e));
                    }
                }
                // elements leave the last stage in admission order
                let exits: Vec<usize> = exit_cycles.iter().map(|&(_, e)| e).collect();
                assert_eq!(exits, (1..=n).collect::<Vec<_>>(), "order ({p},{q},{n})");
            }
        }
    }
}
