//! Trace-monoid view of the pipeline.
//!
//! Pipeline work is flattened into a word of unit-time operations; two
//! operations commute exactly when they share neither element nor stage.
//! Repeatedly peeling off a maximal set of mutually independent, ready
//! operations (capped at the device count) yields the normal form of the
//! trace, and the number of blocks is an independent cycle-count oracle.

use std::fmt;

use crate::error::{Error, Result};

/// One unit-time operation: `stage` applied to `element` (both 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Op {
    pub element: usize,
    pub stage: usize,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.element, self.stage)
    }
}

/// Operations commute iff they touch different elements and different
/// stages: sharing the element is a data dependence, sharing the stage a
/// structural one.
pub fn independent(a: Op, b: Op) -> bool {
    a.element != b.element && a.stage != b.stage
}

/// A linearisation of the full `elements x stages` grid of operations that
/// respects per-element stage order and per-stage element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    ops: Vec<Op>,
    elements: usize,
    stages: usize,
}

impl Trace {
    /// Validate an arbitrary linearisation.
    pub fn new(ops: Vec<Op>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::MalformedTrace("empty".into()));
        }
        if ops.iter().any(|o| o.element == 0 || o.stage == 0) {
            return Err(Error::MalformedTrace("zero index".into()));
        }
        let elements = ops.iter().map(|o| o.element).max().unwrap();
        let stages = ops.iter().map(|o| o.stage).max().unwrap();
        if ops.len() != elements * stages {
            return Err(Error::MalformedTrace(format!(
                "expected {elements}x{stages} = {} ops, got {}",
                elements * stages,
                ops.len()
            )));
        }
        let mut next_stage = vec![1usize; elements];
        let mut next_element = vec![1usize; stages];
        for op in &ops {
            if next_stage[op.element - 1] != op.stage {
                return Err(Error::MalformedTrace(format!(
                    "element {} runs stage {} before stage {}",
                    op.element,
                    op.stage,
                    next_stage[op.element - 1]
                )));
            }
            if next_element[op.stage - 1] != op.element {
                return Err(Error::MalformedTrace(format!(
                    "stage {} serves element {} before element {}",
                    op.stage,
                    op.element,
                    next_element[op.stage - 1]
                )));
            }
            next_stage[op.element - 1] += 1;
            next_element[op.stage - 1] += 1;
        }
        Ok(Self {
            ops,
            elements,
            stages,
        })
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn stages(&self) -> usize {
        self.stages
    }
}

/// Canonical sequential order: element 1 through all stages, then element 2,
/// and so on. Length `elements * depth`.
pub fn pipeline_trace(depth: usize, elements: usize) -> Result<Trace> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    if elements == 0 {
        return Err(Error::EmptyWorkload);
    }
    let mut ops = Vec::with_capacity(depth * elements);
    for element in 1..=elements {
        for stage in 1..=depth {
            ops.push(Op { element, stage });
        }
    }
    Ok(Trace {
        ops,
        elements,
        stages: depth,
    })
}

/// Capped normal form: an ordered list of blocks of pairwise-independent
/// operations, each at most `cap` wide, whose concatenation is equivalent
/// to the source trace under commutation of independent operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoataForm {
    blocks: Vec<Vec<Op>>,
    cap: usize,
}

impl FoataForm {
    pub fn blocks(&self) -> &[Vec<Op>] {
        &self.blocks
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Number of blocks, i.e. the execution time in cycles.
    pub fn height(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks concatenated back into a word.
    pub fn flatten(&self) -> Vec<Op> {
        self.blocks.iter().flatten().copied().collect()
    }
}

impl fmt::Display for FoataForm {
    /// One line per block: `index: (element,stage) ...`, ops listed
    /// deepest stage first (the order they were selected).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (index, block) in self.blocks.iter().enumerate() {
            write!(f, "{}:", index + 1)?;
            for op in block {
                write!(f, " {op}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Greedy left-to-right block construction.
///
/// An operation is ready once both its immediate dependence predecessors --
/// the previous stage of the same element and the same stage of the previous
/// element -- sit in strictly earlier blocks. Each round takes up to `cap`
/// ready operations, deeper stages first, then smaller element index.
pub fn foata_normal_form(trace: &Trace, cap: usize) -> Result<FoataForm> {
    if cap == 0 {
        return Err(Error::InvalidCap);
    }
    let elements = trace.elements();
    let stages = trace.stages();
    // block index of each placed op, keyed by (element, stage)
    let mut block_of = vec![vec![usize::MAX; stages]; elements];
    // next unplaced stage per element
    let mut next_stage = vec![1usize; elements];
    let mut blocks: Vec<Vec<Op>> = Vec::new();
    let mut placed = 0usize;
    let total = elements * stages;

    while placed < total {
        let current = blocks.len();
        let mut ready: Vec<Op> = Vec::new();
        for element in 1..=elements {
            let stage = next_stage[element - 1];
            if stage > stages {
                continue;
            }
            let data_ok = stage == 1 || block_of[element - 1][stage - 2] < current;
            let resource_ok = element == 1 || block_of[element - 2][stage - 1] < current;
            if data_ok && resource_ok {
                ready.push(Op { element, stage });
            }
        }
        // ready ops are pairwise independent: one per element by
        // construction, one per stage because the previous element must
        // already have cleared the stage
        ready.sort_by(|a, b| b.stage.cmp(&a.stage).then(a.element.cmp(&b.element)));
        ready.truncate(cap);
        debug_assert!(!ready.is_empty());
        for op in &ready {
            block_of[op.element - 1][op.stage - 1] = current;
            next_stage[op.element - 1] += 1;
            placed += 1;
        }
        blocks.push(ready);
    }

    Ok(FoataForm { blocks, cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(element: usize, stage: usize) -> Op {
        Op { element, stage }
    }

    #[test]
    fn canonical_trace_enumerates_elements_outermost() {
        let t = pipeline_trace(2, 2).unwrap();
        assert_eq!(t.ops(), &[op(1, 1), op(1, 2), op(2, 1), op(2, 2)]);

        let serial = pipeline_trace(1, 3).unwrap();
        assert_eq!(serial.ops(), &[op(1, 1), op(2, 1), op(3, 1)]);

        assert_eq!(pipeline_trace(4, 8).unwrap().ops().len(), 32);
    }

    #[test]
    fn independence_requires_distinct_element_and_stage() {
        assert!(independent(op(1, 1), op(2, 2)));
        assert!(!independent(op(1, 1), op(1, 2)));
        assert!(!independent(op(1, 1), op(2, 1)));
    }

    #[test]
    fn trace_validation_rejects_reordered_words() {
        // stage order of element 1 broken
        assert!(Trace::new(vec![op(1, 2), op(1, 1), op(2, 1), op(2, 2)]).is_err());
        // stage 1 serves element 2 first
        assert!(Trace::new(vec![op(2, 1), op(1, 1), op(1, 2), op(2, 2)]).is_err());
        // a legal interleaving is accepted
        assert!(Trace::new(vec![op(1, 1), op(2, 1), op(1, 2), op(2, 2)]).is_ok());
    }

    #[test]
    fn capped_form_reproduces_the_reservation_schedule_length() {
        let t = pipeline_trace(4, 8).unwrap();
        assert_eq!(foata_normal_form(&t, 3).unwrap().height(), 13);
    }

    #[test]
    fn uncapped_form_has_depth_plus_elements_minus_one_blocks() {
        let t = pipeline_trace(4, 8).unwrap();
        for cap in [4, 5, 8, 100] {
            assert_eq!(foata_normal_form(&t, cap).unwrap().height(), 11);
        }
    }

    #[test]
    fn ten_stage_five_device_trace_yields_104_blocks() {
        let t = pipeline_trace(10, 50).unwrap();
        assert_eq!(foata_normal_form(&t, 5).unwrap().height(), 104);
    }

    #[test]
    fn degenerate_heights() {
        let single = pipeline_trace(1, 1).unwrap();
        assert_eq!(foata_normal_form(&single, 1).unwrap().height(), 1);
        // one stage means a fully dependent chain
        let chain = pipeline_trace(1, 6).unwrap();
        for cap in [1, 2, 10] {
            assert_eq!(foata_normal_form(&chain, cap).unwrap().height(), 6);
        }
    }

    #[test]
    fn blocks_are_independent_and_within_cap() {
        let t = pipeline_trace(5, 7).unwrap();
        for cap in 1..=6 {
            let form = foata_normal_form(&t, cap).unwrap();
            for block in form.blocks() {
                assert!(!block.is_empty());
                assert!(block.len() <= cap);
                for (i, &a) in block.iter().enumerate() {
                    for &b in &block[i + 1..] {
                        assert!(independent(a, b), "{a} and {b} share a resource");
                    }
                }
            }
            assert_eq!(form.flatten().len(), 35);
        }
    }

    #[test]
    fn serialization_lists_one_block_per_line() {
        let t = pipeline_trace(2, 2).unwrap();
        let form = foata_normal_form(&t, 2).unwrap();
        assert_eq!(form.to_string(), "1: (1,1)\n2: (1,2) (2,1)\n3: (2,2)\n");
    }

    #[test]
    fn rejects_zero_cap() {
        let t = pipeline_trace(2, 2).unwrap();
        assert!(matches!(foata_normal_form(&t, 0), Err(Error::InvalidCap)));
    }
}
