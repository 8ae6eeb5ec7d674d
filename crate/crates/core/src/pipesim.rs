//! Executable bounded-pipeline simulators.
//!
//! `run_virtual` drives an event-driven model with a virtual clock: stages
//! read their input latch, hold one of `q` device permits for exactly one
//! cycle, and write their output latch, with contention resolved
//! deepest-stage-first. It reproduces the analytic time exactly and serves
//! as the executable oracle.
//!
//! `run_wallclock` spawns one OS thread per stage connected by single-slot
//! channels and guarded by a counting permit pool, burns real time per stage
//! operation, and measures elapsed wall-clock time. It demonstrates the same
//! behaviour qualitatively; timer and scheduler noise make it approximate by
//! nature.

use std::sync::mpsc::{self, RecvTimeoutError};
use std::sync::{Arc, Condvar, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::model::{bounded_time, PipelineConfig, Workload};
use crate::sweep::{unit_label, SweepMeta, SweepResult, SweepRow};

/// How a simulation advanced its clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    Virtual,
    Wallclock,
}

impl SimMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SimMode::Virtual => "virtual",
            SimMode::Wallclock => "wallclock",
        }
    }
}

/// One stage visit of one element, in model time units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageInterval {
    pub stage: usize,
    pub start: f64,
    pub end: f64,
}

/// Complete record of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRun {
    pub config: PipelineConfig,
    pub elements: usize,
    pub mode: SimMode,
    /// `timeline[e - 1]` lists the stage visits of element `e` in stage order.
    pub timeline: Vec<Vec<StageInterval>>,
    /// `max end - min start` over the whole timeline.
    pub total_time: f64,
}

impl SimRun {
    fn from_timeline(
        config: PipelineConfig,
        elements: usize,
        mode: SimMode,
        mut timeline: Vec<Vec<StageInterval>>,
    ) -> Self {
        for intervals in &mut timeline {
            intervals.sort_by_key(|i| i.stage);
        }
        let mut earliest = f64::INFINITY;
        let mut latest = f64::NEG_INFINITY;
        for interval in timeline.iter().flatten() {
            earliest = earliest.min(interval.start);
            latest = latest.max(interval.end);
        }
        let total_time = if latest > earliest {
            latest - earliest
        } else {
            0.0
        };
        Self {
            config,
            elements,
            mode,
            timeline,
            total_time,
        }
    }

    /// Largest number of stage intervals covering any single instant.
    /// Must never exceed the device count.
    pub fn max_concurrency(&self) -> usize {
        let mut events: Vec<(f64, i32)> = Vec::new();
        for interval in self.timeline.iter().flatten() {
            events.push((interval.start, 1));
            events.push((interval.end, -1));
        }
        // intervals are half-open: an end at time t frees its device
        // before a start at the same t claims one
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut active = 0i32;
        let mut peak = 0i32;
        for (_, delta) in events {
            active += delta;
            peak = peak.max(active);
        }
        peak.max(0) as usize
    }

    /// Elements in the order they completed the final stage.
    pub fn exit_order(&self) -> Vec<usize> {
        let mut exits: Vec<(f64, usize)> = self
            .timeline
            .iter()
            .enumerate()
            .filter_map(|(i, intervals)| {
                intervals
                    .iter()
                    .find(|iv| iv.stage == self.config.depth)
                    .map(|iv| (iv.end, i + 1))
            })
            .collect();
        exits.sort_by(|a, b| a.0.total_cmp(&b.0));
        exits.into_iter().map(|(_, e)| e).collect()
    }

    /// CSV export of the timeline: `element,stage,start,end`.
    pub fn timeline_csv(&self) -> String {
        let mut out = String::from("element,stage,start,end\n");
        for (i, intervals) in self.timeline.iter().enumerate() {
            for interval in intervals {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    i + 1,
                    interval.stage,
                    interval.start,
                    interval.end
                ));
            }
        }
        out
    }
}

/// Capacity of the latch channel between two adjacent stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelSpec {
    pub capacity: usize,
}

impl ChannelSpec {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidChannelCapacity);
        }
        Ok(Self { capacity })
    }

    /// One slot per latch register.
    pub fn single_slot() -> Self {
        Self { capacity: 1 }
    }
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self::single_slot()
    }
}

/// Deterministic event-driven run with a virtual clock.
///
/// Per cycle, stages are scanned deepest first; a stage fires when its input
/// latch is full, its output latch is free (possibly freed by the downstream
/// read in the same cycle) and a device permit remains. The resulting total
/// time equals the analytic bounded-pipeline time.
pub fn run_virtual(cfg: &PipelineConfig, elements: usize) -> Result<SimRun> {
    if elements == 0 {
        return Err(Error::EmptyWorkload);
    }
    let depth = cfg.depth;
    let devices = cfg.devices.min(depth);
    let h = cfg.cycle_time();

    // latch[s] holds the element that finished stage s and waits for s + 1
    let mut latch: Vec<Option<usize>> = vec![None; depth + 1];
    let mut admitted = 0usize;
    let mut exited = 0usize;
    let mut timeline: Vec<Vec<StageInterval>> = vec![Vec::with_capacity(depth); elements];
    let mut cycle = 0usize;

    while exited < elements {
        let mut permits = devices;
        let mut fired: Vec<(usize, usize)> = Vec::new();
        for stage in (1..=depth).rev() {
            if permits == 0 {
                break;
            }
            let input = if stage == 1 {
                (admitted < elements).then_some(admitted + 1)
            } else {
                latch[stage - 1]
            };
            let Some(element) = input else { continue };
            if stage < depth && latch[stage].is_some() {
                continue; // output latch still occupied
            }
            permits -= 1;
            if stage == 1 {
                admitted += 1;
            } else {
                latch[stage - 1] = None;
            }
            fired.push((stage, element));
        }
        let start = cycle as f64 * h;
        let end = (cycle + 1) as f64 * h;
        for &(stage, element) in &fired {
            timeline[element - 1].push(StageInterval { stage, start, end });
            if stage == depth {
                exited += 1;
            } else {
                latch[stage] = Some(element);
            }
        }
        cycle += 1;
    }

    Ok(SimRun::from_timeline(
        *cfg,
        elements,
        SimMode::Virtual,
        timeline,
    ))
}

struct PermitPool {
    available: Mutex<usize>,
    freed: Condvar,
}

impl PermitPool {
    fn new(count: usize) -> Self {
        Self {
            available: Mutex::new(count),
            freed: Condvar::new(),
        }
    }

    fn acquire(&self) {
        let mut available = self.available.lock().unwrap();
        while *available == 0 {
            available = self.freed.wait(available).unwrap();
        }
        *available -= 1;
    }

    fn release(&self) {
        *self.available.lock().unwrap() += 1;
        self.freed.notify_one();
    }
}

/// Sleep most of the duration, then poll out the remainder; plain sleeps
/// overshoot by more than a millisecond-scale stage delay can absorb. The
/// poll loop yields so that concurrent stages on a small machine do not
/// starve each other's timer wakeups.
fn wait_exact(duration: Duration) {
    const POLL_SLACK: Duration = Duration::from_millis(1);
    let target = Instant::now() + duration;
    if let Some(coarse) = duration.checked_sub(POLL_SLACK) {
        if !coarse.is_zero() {
            thread::sleep(coarse);
        }
    }
    while Instant::now() < target {
        thread::yield_now();
    }
}

type TimelineLog = Arc<Mutex<Vec<(usize, usize, f64, f64)>>>;

/// Threaded run in real time: one worker per stage over single-slot
/// channels, sharing a pool of `q` device permits. One model time unit
/// lasts `scale` milliseconds. The timeline is recorded while permits are
/// held and reported back in model units.
pub fn run_wallclock(cfg: &PipelineConfig, elements: usize, scale: f64) -> Result<SimRun> {
    if elements == 0 {
        return Err(Error::EmptyWorkload);
    }
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::InvalidScale(scale));
    }
    let depth = cfg.depth;
    let devices = cfg.devices.min(depth);
    let stage_delay = Duration::from_secs_f64(cfg.cycle_time() * scale / 1_000.0);

    let pool = Arc::new(PermitPool::new(devices));
    let log: TimelineLog = Arc::new(Mutex::new(Vec::with_capacity(elements * depth)));
    let origin = Instant::now();

    let slots = ChannelSpec::single_slot().capacity;
    let mut receivers = Vec::with_capacity(depth + 1);
    let mut senders = Vec::with_capacity(depth + 1);
    for _ in 0..=depth {
        let (tx, rx) = mpsc::sync_channel::<usize>(slots);
        senders.push(tx);
        receivers.push(rx);
    }
    // senders[0] feeds stage 1; receivers[depth] collects finished elements
    senders.reverse();
    receivers.reverse();

    let mut handles = Vec::with_capacity(depth + 1);
    let feeder_tx = senders.pop().unwrap();
    handles.push(thread::spawn(move || {
        for element in 1..=elements {
            if feeder_tx.send(element).is_err() {
                return;
            }
        }
    }));

    let mut upstream = receivers.pop().unwrap();
    for stage in 1..=depth {
        let downstream_tx = senders.pop().unwrap();
        let rx = upstream;
        upstream = receivers.pop().unwrap();
        let pool = Arc::clone(&pool);
        let log = Arc::clone(&log);
        handles.push(thread::spawn(move || {
            while let Ok(element) = rx.recv() {
                pool.acquire();
                let start = origin.elapsed().as_secs_f64();
                wait_exact(stage_delay);
                let end = origin.elapsed().as_secs_f64();
                pool.release();
                log.lock().unwrap().push((
                    element,
                    stage,
                    start * 1_000.0 / scale,
                    end * 1_000.0 / scale,
                ));
                if downstream_tx.send(element).is_err() {
                    return;
                }
            }
        }));
    }

    let collector = upstream;
    let expected_ms = bounded_time(cfg, Workload { elements }) * scale;
    let budget = Duration::from_millis((expected_ms * 10.0) as u64).max(Duration::from_secs(5));
    let deadline = Instant::now() + budget;

    let mut collected = 0usize;
    let outcome = loop {
        if collected == elements {
            break Ok(());
        }
        let remaining = deadline.saturating_duration_since(Instant::now());
        match collector.recv_timeout(remaining) {
            Ok(_) => collected += 1,
            Err(RecvTimeoutError::Timeout) => break Err(RecvTimeoutError::Timeout),
            Err(RecvTimeoutError::Disconnected) => break Err(RecvTimeoutError::Disconnected),
        }
    };

    match outcome {
        Ok(()) => {
            for handle in handles {
                if let Err(panic) = handle.join() {
                    return Err(Error::WorkerFailure(panic_message(panic)));
                }
            }
            let timeline = assemble_timeline(&log, elements);
            Ok(SimRun::from_timeline(
                *cfg,
                elements,
                SimMode::Wallclock,
                timeline,
            ))
        }
        Err(RecvTimeoutError::Timeout) => {
            // workers may be blocked on channels; leave them detached and
            // hand back what was recorded so far
            let timeline = assemble_timeline(&log, elements);
            let partial = SimRun::from_timeline(*cfg, elements, SimMode::Wallclock, timeline);
            Err(Error::SimulationTimeout {
                waited_ms: budget.as_millis() as u64,
                partial: Box::new(partial),
            })
        }
        Err(RecvTimeoutError::Disconnected) => {
            let mut message = String::from("stage worker exited early");
            for handle in handles {
                if let Err(panic) = handle.join() {
                    message = panic_message(panic);
                    break;
                }
            }
            Err(Error::WorkerFailure(message))
        }
    }
}

fn panic_message(panic: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = panic.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = panic.downcast_ref::<String>() {
        s.clone()
    } else {
        "worker panicked".to_string()
    }
}

fn assemble_timeline(log: &TimelineLog, elements: usize) -> Vec<Vec<StageInterval>> {
    let mut timeline: Vec<Vec<StageInterval>> = vec![Vec::new(); elements];
    for &(element, stage, start, end) in log.lock().unwrap().iter() {
        timeline[element - 1].push(StageInterval { stage, start, end });
    }
    timeline
}

/// Simulated time versus analytic time across a range of depths. Virtual
/// mode reproduces the model exactly; wallclock mode reports measured
/// elapsed time.
pub fn empirical_depth_sweep(
    devices: usize,
    elements: usize,
    logical_delay: f64,
    latch_overhead: f64,
    depths: std::ops::RangeInclusive<usize>,
    mode: SimMode,
    scale: f64,
) -> Result<SweepResult> {
    if depths.is_empty() {
        return Err(Error::EmptyRange);
    }
    let workload = Workload::new(elements)?;
    let mut rows = Vec::new();
    for depth in depths {
        let cfg = PipelineConfig::new(depth, devices, logical_delay, latch_overhead)?;
        let run = match mode {
            SimMode::Virtual => run_virtual(&cfg, elements)?,
            SimMode::Wallclock => run_wallclock(&cfg, elements, scale)?,
        };
        rows.push(SweepRow {
            depth,
            model_time: bounded_time(&cfg, workload),
            simulated_time: Some(run.total_time),
            label: mode.as_str().to_string(),
        });
    }
    SweepResult::new(
        rows,
        SweepMeta {
            devices,
            elements,
            logical_delay,
            latch_overhead,
            restart_probability: None,
            mode: Some(mode.as_str().to_string()),
            unit: unit_label(logical_delay, latch_overhead).to_string(),
        },
    )
}
