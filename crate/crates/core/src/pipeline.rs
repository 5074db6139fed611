//! End-to-end pipeline: transactions in, one report per mining trigger out.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{open_source, InputSpec, SourceStats};
use crate::miner::{mine, top_k, MinSupport, MinedPattern, MinerConfig};
use crate::window::{SlidingWindow, Transaction, WindowConfig, WindowSnapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputMode {
    #[default]
    JsonLines,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: InputSpec,
    pub window: usize,
    pub slide: usize,
    pub min_support: MinSupport,
    pub k: usize,
    pub output: OutputMode,
    pub include_nonclosed: bool,
}

impl RunConfig {
    pub fn window_config(&self) -> Result<WindowConfig> {
        WindowConfig::new(self.window, self.slide)
    }

    pub fn miner_config(&self) -> Result<MinerConfig> {
        MinerConfig::new(self.min_support, self.k)
    }

    pub fn validate(&self) -> Result<()> {
        self.window_config()?;
        self.miner_config()?;
        Ok(())
    }
}

/// Mining result for one window position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub window_end: u64,
    pub occupied: usize,
    pub threshold: u32,
    pub patterns: Vec<MinedPattern>,
    pub top_k: Vec<Vec<String>>,
}

impl WindowReport {
    pub fn from_snapshot(
        snap: &WindowSnapshot,
        miner: &MinerConfig,
        include_nonclosed: bool,
    ) -> Self {
        let mut patterns = mine(snap, miner);
        // k >= 1 is guaranteed by MinerConfig.
        let top = top_k(&patterns, miner.k).unwrap_or_default();
        if !include_nonclosed {
            patterns.retain(|p| p.closed);
        }
        WindowReport {
            window_end: snap.window_end_seq(),
            occupied: snap.occupied(),
            threshold: miner.min_support.resolve(snap.occupied()),
            patterns,
            top_k: top.into_iter().map(|p| p.items).collect(),
        }
    }
}

/// Renders a report without a trailing newline.
pub fn render_report(report: &WindowReport, mode: OutputMode) -> String {
    match mode {
        OutputMode::JsonLines => {
            serde_json::to_string(report).expect("report serialization is infallible")
        }
        OutputMode::Text => render_text(report),
    }
}

fn render_text(report: &WindowReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "window ending at #{}  occupied {}  threshold {}",
        report.window_end, report.occupied, report.threshold
    );
    let width = report
        .patterns
        .iter()
        .map(|p| p.support.to_string().len())
        .max()
        .unwrap_or(0)
        .max("support".len());
    let _ = writeln!(out, "  {:>width$}  {:<6}  items", "support", "closed");
    for p in &report.patterns {
        let _ = writeln!(
            out,
            "  {:>width$}  {:<6}  {}",
            p.support,
            if p.closed { "yes" } else { "no" },
            p.items.join(" ")
        );
    }
    let top: Vec<String> = report
        .top_k
        .iter()
        .map(|items| format!("{{{}}}", items.join(",")))
        .collect();
    let _ = write!(out, "  top-{}: {}", report.top_k.len(), top.join(" "));
    out
}

/// Window plus miner settings; turns arrivals into reports.
#[derive(Debug, Clone)]
pub struct Pipeline {
    window: SlidingWindow,
    miner: MinerConfig,
    include_nonclosed: bool,
}

impl Pipeline {
    pub fn new(window: WindowConfig, miner: MinerConfig, include_nonclosed: bool) -> Self {
        Pipeline {
            window: SlidingWindow::new(window),
            miner,
            include_nonclosed,
        }
    }

    pub fn window(&self) -> &SlidingWindow {
        &self.window
    }

    pub fn push(&mut self, txn: &Transaction) -> Result<Option<WindowReport>> {
        Ok(self.window.push(txn)?.then(|| self.report()))
    }

    /// Flushes a final report if un-mined arrivals remain.
    pub fn finish(&mut self) -> Option<WindowReport> {
        self.window.finish().then(|| self.report())
    }

    fn report(&self) -> WindowReport {
        WindowReport::from_snapshot(&self.window.snapshot(), &self.miner, self.include_nonclosed)
    }
}

/// Runs the pipeline over `txns`, writing each report as it is produced.
/// Returns the number of reports written.
pub fn run_stream<I, W>(
    txns: I,
    pipeline: &mut Pipeline,
    mode: OutputMode,
    out: &mut W,
) -> Result<usize>
where
    I: IntoIterator<Item = io::Result<Transaction>>,
    W: Write,
{
    let mut emitted = 0;
    let mut emit = |report: WindowReport, out: &mut W| -> Result<()> {
        if mode == OutputMode::Text && emitted > 0 {
            writeln!(out)?;
        }
        writeln!(out, "{}", render_report(&report, mode))?;
        emitted += 1;
        Ok(())
    };
    for txn in txns {
        if let Some(report) = pipeline.push(&txn?)? {
            emit(report, out)?;
        }
    }
    if let Some(report) = pipeline.finish() {
        emit(report, out)?;
    }
    out.flush()?;
    Ok(emitted)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub reports: usize,
    pub source: SourceStats,
}

/// Opens the configured input and runs the whole pipeline.
pub fn run<W: Write>(config: &RunConfig, out: &mut W) -> Result<RunSummary> {
    let window = config.window_config()?;
    let miner = config.miner_config()?;
    let mut pipeline = Pipeline::new(window, miner, config.include_nonclosed);
    let mut source = open_source(&config.input).map_err(Error::Io)?;
    let reports = run_stream(source.by_ref(), &mut pipeline, config.output, out)?;
    Ok(RunSummary {
        reports,
        source: source.stats(),
    })
}
