//! Edge-list CSV ingestion and emission.
//!
//! Input is UTF-8 CSV with the header `time,src,dst,value`. `time` is either an integer
//! (native units) or an ISO-8601 date / datetime, which is converted to whole days. Lines
//! starting with `#` are comments. Records are grouped into consecutive periods of
//! `period` time units; parallel records inside one period are netted into one edge.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Snapshot, TemporalNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestOptions {
    /// Period length in the records' time unit (days for dates). Must be ≥ 1.
    pub period: i64,
    pub directed: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            period: 1,
            directed: false,
        }
    }
}

/// Result of [`load_snapshots`] together with the counters the caller should surface.
#[derive(Debug, Clone)]
pub struct LoadReport {
    pub network: TemporalNetwork,
    /// Edges whose netted value was negative and were stored as absolute values.
    pub negative_weights: usize,
    /// Pairs whose records netted to zero within a period.
    pub zero_net_dropped: usize,
    pub self_loops_skipped: usize,
    pub records: usize,
    /// Start time (in record units) of the period behind each snapshot.
    pub period_starts: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PairKey(String, String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TimeKind {
    Integer,
    Date,
}

fn parse_time(raw: &str, line: usize) -> Result<(i64, TimeKind)> {
    let raw = raw.trim();
    if let Ok(t) = raw.parse::<i64>() {
        return Ok((t, TimeKind::Integer));
    }
    let epoch = NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid epoch");
    let date = NaiveDate::parse_from_str(raw, "%Y-%m-%d")
        .ok()
        .or_else(|| {
            NaiveDateTime::parse_from_str(raw, "%Y-%m-%dT%H:%M:%S")
                .ok()
                .map(|d| d.date())
        })
        .or_else(|| DateTime::parse_from_rfc3339(raw).ok().map(|d| d.date_naive()));
    match date {
        Some(d) => Ok(((d - epoch).num_days(), TimeKind::Date)),
        None => Err(Error::Parse {
            line,
            message: format!("time `{raw}` is neither an integer nor an ISO-8601 date"),
        }),
    }
}

/// Orders node ids numerically when all of them are integers, lexicographically otherwise.
fn natural_order(ids: BTreeSet<String>) -> Vec<String> {
    let mut ids: Vec<String> = ids.into_iter().collect();
    if ids.iter().all(|s| s.parse::<i64>().is_ok()) {
        ids.sort_by_key(|s| s.parse::<i64>().unwrap_or_default());
    }
    ids
}

/// Reads an edge-list CSV stream into a [`TemporalNetwork`].
///
/// Periods that contain records become snapshots, numbered `0..T` in time order. A pair
/// whose records net to zero in a period gets no edge there; a node that never keeps an
/// edge is not part of the universe.
pub fn load_snapshots<R: Read>(reader: R, opts: IngestOptions) -> Result<LoadReport> {
    if opts.period < 1 {
        return Err(Error::Argument(format!(
            "aggregation period must be at least 1, got {}",
            opts.period
        )));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let expected = ["time", "src", "dst", "value"];
    if headers.len() != 4 || headers.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `time,src,dst,value`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut raw = Vec::new();
    let mut kind = None;
    let mut self_loops = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 4 {
            return Err(Error::Parse {
                line,
                message: format!("expected 4 fields, found {}", rec.len()),
            });
        }
        let (t, k) = parse_time(&rec[0], line)?;
        if *kind.get_or_insert(k) != k {
            return Err(Error::Parse {
                line,
                message: "mixes integer and date time values".into(),
            });
        }
        let value: f64 = rec[3].parse().map_err(|_| Error::Parse {
            line,
            message: format!("value `{}` is not a real number", &rec[3]),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("value `{}` is not finite", &rec[3]),
            });
        }
        let (src, dst) = (rec[1].to_string(), rec[2].to_string());
        if src.is_empty() || dst.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty node identifier".into(),
            });
        }
        if src == dst {
            self_loops += 1;
            continue;
        }
        raw.push((t, src, dst, value));
    }
    if raw.is_empty() {
        return Err(Error::DataSize("edge list contains no usable records".into()));
    }
    let records = raw.len();

    let t0 = raw.iter().map(|r| r.0).min().unwrap_or(0);
    let mut periods: BTreeMap<i64, BTreeMap<PairKey, Vec<f64>>> = BTreeMap::new();
    for (t, src, dst, value) in raw {
        let key = if !opts.directed && dst < src {
            PairKey(dst, src)
        } else {
            PairKey(src, dst)
        };
        periods
            .entry((t - t0).div_euclid(opts.period))
            .or_default()
            .entry(key)
            .or_default()
            .push(value);
    }

    let mut negative = 0;
    let mut dropped = 0;
    let mut netted: Vec<(i64, Vec<(PairKey, f64)>)> = Vec::with_capacity(periods.len());
    let mut universe = BTreeSet::new();
    for (p, pairs) in periods {
        let mut edges = Vec::with_capacity(pairs.len());
        for (key, mut values) in pairs {
            // Summing in sorted order makes the result independent of record order.
            values.sort_by(f64::total_cmp);
            let net: f64 = values.iter().sum();
            let scale: f64 = values.iter().map(|v| v.abs()).sum();
            if net.abs() <= 1e-12 * scale {
                dropped += 1;
                continue;
            }
            if net < 0.0 {
                negative += 1;
            }
            universe.insert(key.0.clone());
            universe.insert(key.1.clone());
            edges.push((key, net.abs()));
        }
        netted.push((p, edges));
    }
    if negative > 0 {
        log::warn!("{negative} netted edges were negative and stored as absolute values");
    }

    let universe = natural_order(universe);
    let index: BTreeMap<&str, usize> = universe.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let mut snapshots = Vec::with_capacity(netted.len());
    let mut starts = Vec::with_capacity(netted.len());
    for (ordinal, (p, edges)) in netted.into_iter().enumerate() {
        let edges = edges
            .into_iter()
            .map(|(k, w)| Edge::new(index[k.0.as_str()], index[k.1.as_str()], w))
            .collect();
        snapshots.push(Snapshot::new(universe.clone(), edges, opts.directed, ordinal)?);
        starts.push(t0 + p * opts.period);
    }
    Ok(LoadReport {
        network: TemporalNetwork::new(universe, snapshots)?,
        negative_weights: negative,
        zero_net_dropped: dropped,
        self_loops_skipped: self_loops,
        records,
        period_starts: starts,
    })
}

pub fn load_snapshots_path(path: &Path, opts: IngestOptions) -> Result<LoadReport> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_snapshots(file, opts)
}

/// Writes a network as an edge list with `time` equal to the snapshot ordinal, so that
/// reading it back with a period of 1 reproduces the same snapshots. `comment` lines are
/// emitted first, each prefixed with `# `.
pub fn write_edge_list<W: Write>(tn: &TemporalNetwork, mut out: W, comment: &[String]) -> Result<()> {
    for line in comment {
        writeln!(out, "# {line}").map_err(|e| Error::io("<edge list>", e))?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["time", "src", "dst", "value"])?;
    let ids = tn.universe();
    for s in tn.snapshots() {
        for e in s.edges() {
            w.write_record([
                s.timestamp().to_string(),
                ids[e.src].clone(),
                ids[e.dst].clone(),
                e.weight.to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io("<edge list>", e))?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct LoadSummary {
    pub snapshots: usize,
    pub nodes: usize,
    pub records: usize,
    pub negative_weights: usize,
    pub zero_net_dropped: usize,
    pub self_loops_skipped: usize,
}

impl From<&LoadReport> for LoadSummary {
    fn from(r: &LoadReport) -> Self {
        LoadSummary {
            snapshots: r.network.len(),
            nodes: r.network.universe().len(),
            records: r.records,
            negative_weights: r.negative_weights,
            zero_net_dropped: r.zero_net_dropped,
            self_loops_skipped: r.self_loops_skipped,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, period: i64) -> Result<LoadReport> {
        load_snapshots(
            text.as_bytes(),
            IngestOptions {
                period,
                directed: false,
            },
        )
    }

    #[test]
    fn sums_parallel_records_within_period() {
        let r = load("time,src,dst,value\n1,a,b,3\n2,a,b,4\n", 2).unwrap();
        assert_eq!(r.network.len(), 1);
        assert_eq!(r.network.snapshots()[0].edges(), &[Edge::new(0, 1, 7.0)]);
    }

    #[test]
    fn disjoint_periods_become_ordinals() {
        let r = load("time,src,dst,value\n1,a,b,3\n5,a,b,4\n", 2).unwrap();
        let ts: Vec<_> = r.network.snapshots().iter().map(|s| s.timestamp()).collect();
        assert_eq!(ts, vec![0, 1]);
        assert_eq!(r.period_starts, vec![1, 5]);
    }

    #[test]
    fn zero_net_pair_is_dropped() {
        let r = load("time,src,dst,value\n1,a,b,3\n1,a,b,-3\n1,b,c,1\n", 1).unwrap();
        assert_eq!(r.network.universe(), &["b".to_string(), "c".to_string()]);
        assert_eq!(r.zero_net_dropped, 1);
        assert_eq!(r.network.snapshots()[0].edges(), &[Edge::new(0, 1, 1.0)]);
    }

    #[test]
    fn only_zero_net_records_leave_empty_universe() {
        let r = load("time,src,dst,value\n1,a,b,3\n1,a,b,-3\n", 1).unwrap();
        assert!(r.network.universe().is_empty());
        assert!(r.network.snapshots()[0].edges().is_empty());
    }

    #[test]
    fn negative_net_stored_as_absolute() {
        let r = load("time,src,dst,value\n1,a,b,-3\n1,a,b,1\n", 1).unwrap();
        assert_eq!(r.negative_weights, 1);
        assert_eq!(r.network.snapshots()[0].edges()[0].weight, 2.0);
    }

    #[test]
    fn malformed_value_names_line() {
        let err = load("time,src,dst,value\n1,a,b,3\n1,a,c,abc\n", 1).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn iso_dates_use_day_periods() {
        let text = "time,src,dst,value\n2018-07-01,a,b,1\n2018-07-15,a,b,1\n2018-07-16,b,c,1\n";
        let r = load(text, 15).unwrap();
        assert_eq!(r.network.len(), 2);
        assert_eq!(r.network.snapshots()[0].edges(), &[Edge::new(0, 1, 2.0)]);
        assert_eq!(r.network.snapshots()[1].edges(), &[Edge::new(1, 2, 1.0)]);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(load("time,src,dst,value\n", 1), Err(Error::DataSize(_))));
        assert!(load("", 1).is_err());
    }

    #[test]
    fn numeric_ids_sort_numerically() {
        let r = load("time,src,dst,value\n0,10,2,1\n0,2,1,1\n", 1).unwrap();
        assert_eq!(r.network.universe(), &["1", "2", "10"]);
    }

    #[test]
    fn undirected_merges_orientation() {
        let r = load("time,src,dst,value\n0,a,b,1\n0,b,a,2\n", 1).unwrap();
        assert_eq!(r.network.snapshots()[0].edges(), &[Edge::new(0, 1, 3.0)]);
        let d = load_snapshots(
            "time,src,dst,value\n0,a,b,1\n0,b,a,2\n".as_bytes(),
            IngestOptions {
                period: 1,
                directed: true,
            },
        )
        .unwrap();
        assert_eq!(d.network.snapshots()[0].edges().len(), 2);
    }
}
