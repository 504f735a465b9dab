//! Writing results as JSON or flattened CSV.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use covert_core::harness::{BenchReport, LemmaReport, Report};
use covert_core::netdiscovery::{DiscoveryResult, GraphFile, Verification};
use covert_core::setsystem::SetSystemFile;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A generated set system plus what the generator knows about it. Loads back
/// as a plain set-system file.
#[derive(Serialize)]
pub struct GeneratedFile {
    #[serde(flatten)]
    pub file: SetSystemFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planted: Option<Vec<usize>>,
    pub coverable: bool,
}

#[derive(Serialize)]
struct EdgeRow {
    u: usize,
    v: usize,
}

#[derive(Serialize)]
struct MembershipRow {
    set: usize,
    element: usize,
}

#[derive(Serialize)]
struct PairRow {
    u: usize,
    v: usize,
    status: &'static str,
}

#[derive(Serialize)]
struct VertexRow {
    vertex: usize,
}

#[derive(Serialize)]
struct TrialRow {
    seed: u64,
    cover_size: usize,
    valid: bool,
    failed: Option<usize>,
    opt: Option<usize>,
    ratio_to_opt: Option<f64>,
    hitting_queries: u64,
    set_queries: u64,
    layered_queries: u64,
    total_queries: u64,
    rounds: usize,
    runtime_ms: f64,
}

#[derive(Serialize)]
struct LemmaCsvRow<'a> {
    label: &'a str,
    set_size: usize,
    expected_hits: f64,
    mean_hits: f64,
    crossing_rate: f64,
    p: f64,
    threshold: f64,
}

#[derive(Serialize)]
struct BenchCsvRow {
    algorithm: String,
    k: usize,
    valid_fraction: f64,
    median_cover_size: f64,
    median_queries: f64,
}

pub struct Output {
    path: Option<PathBuf>,
    format: Format,
}

impl Output {
    pub fn new(path: Option<PathBuf>, format: Format) -> Self {
        Self { path, format }
    }

    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.path {
            Some(p) => Box::new(io::BufWriter::new(
                fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut w = self.sink()?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn csv<R: Serialize>(&self, rows: impl IntoIterator<Item = R>) -> Result<()> {
        let mut w = csv::Writer::from_writer(self.sink()?);
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn graph(&self, file: &GraphFile) -> Result<()> {
        match self.format {
            Format::Json => self.json(file),
            Format::Csv => self.csv(file.edges.iter().map(|&[u, v]| EdgeRow { u, v })),
        }
    }

    pub fn set_system(&self, generated: &GeneratedFile) -> Result<()> {
        match self.format {
            Format::Json => self.json(generated),
            Format::Csv => self.csv(generated.file.sets.iter().enumerate().flat_map(|(i, s)| {
                s.iter().map(move |&element| MembershipRow {
                    set: i + 1,
                    element,
                })
            })),
        }
    }

    pub fn report(&self, report: &Report) -> Result<()> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => self.csv(report.records.iter().map(|r| TrialRow {
                seed: r.seed,
                cover_size: r.cover_size,
                valid: r.valid,
                failed: r.failed,
                opt: r.opt,
                ratio_to_opt: r.ratio_to_opt,
                hitting_queries: r.queries.hitting,
                set_queries: r.queries.set,
                layered_queries: r.queries.layered,
                total_queries: r.total_queries,
                rounds: r.rounds,
                runtime_ms: r.runtime_ms,
            })),
        }
    }

    pub fn discovery(&self, result: &DiscoveryResult) -> Result<()> {
        match self.format {
            Format::Json => self.json(result),
            Format::Csv => {
                let edges = result.edges.iter().map(|&(u, v)| PairRow {
                    u,
                    v,
                    status: "edge",
                });
                let non = result.non_edges.iter().map(|&(u, v)| PairRow {
                    u,
                    v,
                    status: "non-edge",
                });
                let mut rows: Vec<PairRow> = edges.chain(non).collect();
                rows.sort_by_key(|r| (r.u, r.v));
                self.csv(rows)
            }
        }
    }

    pub fn verification(&self, v: &Verification) -> Result<()> {
        match self.format {
            Format::Json => self.json(v),
            Format::Csv => self.csv(v.query_set.iter().map(|&vertex| VertexRow { vertex })),
        }
    }

    pub fn lemma(&self, report: &LemmaReport) -> Result<()> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => self.csv(report.rows.iter().map(|r| LemmaCsvRow {
                label: &r.label,
                set_size: r.set_size,
                expected_hits: r.expected_hits,
                mean_hits: r.mean_hits,
                crossing_rate: r.crossing_rate,
                p: report.p,
                threshold: report.threshold,
            })),
        }
    }

    pub fn bench(&self, report: &BenchReport) -> Result<()> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => self.csv(report.rows.iter().map(|r| {
                BenchCsvRow {
                    algorithm: serde_json::to_value(r.algorithm)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_owned))
                        .unwrap_or_default(),
                    k: r.k,
                    valid_fraction: r.valid_fraction,
                    median_cover_size: r.median_cover_size,
                    median_queries: r.median_queries,
                }
            })),
        }
    }
}
