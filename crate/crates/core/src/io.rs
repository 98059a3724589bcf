//! Dataset and result serialization.
//!
//! Dataset CSV: header `id,type,x[,y],t`, one row per instance, optionally
//! preceded by a metadata comment `# extent: dsize=...,tsize=...,dims=...`.
//! Without the metadata line the extent falls back to the bounding box of
//! the data, which changes every density ratio; callers should surface that.
//!
//! Rankings serialize to JSON (config echo, patterns, stats) or CSV
//! (`rank,pattern,seq_index,length`). Both are byte-identical across runs
//! for fixed inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::NeighborhoodConfig;
use crate::miner::{MineConfig, MineStats, Ranking};
use crate::model::{Dataset, EventInstance, Pattern, SpaceExtent, TypeId};

/// A parsed dataset plus whether its extent was declared or reconstructed.
#[derive(Debug, Clone)]
pub struct ParsedDataset {
    pub dataset: Dataset,
    /// False when the extent was computed as the bounding box of the data.
    pub extent_declared: bool,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_extent_line(line_no: usize, body: &str) -> Result<(f64, f64, u8)> {
    let (mut dsize, mut tsize, mut dims) = (None, None, None);
    for part in body.split(',') {
        let (key, value) = part
            .trim()
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected key=value, got {part:?}")))?;
        let value = value.trim();
        match key.trim() {
            "dsize" => {
                dsize = Some(value.parse::<f64>().map_err(|_| {
                    parse_err(line_no, format!("invalid dsize {value:?}"))
                })?)
            }
            "tsize" => {
                tsize = Some(value.parse::<f64>().map_err(|_| {
                    parse_err(line_no, format!("invalid tsize {value:?}"))
                })?)
            }
            "dims" => {
                dims = Some(value.parse::<u8>().map_err(|_| {
                    parse_err(line_no, format!("invalid dims {value:?}"))
                })?)
            }
            other => return Err(parse_err(line_no, format!("unknown extent key {other:?}"))),
        }
    }
    match (dsize, tsize, dims) {
        (Some(d), Some(t), Some(n)) => Ok((d, t, n)),
        _ => Err(parse_err(line_no, "extent needs dsize, tsize and dims")),
    }
}

/// Parses the dataset CSV format. Type ids are assigned in first-appearance
/// order. Errors carry 1-based line numbers.
pub fn parse_dataset(text: &str) -> Result<ParsedDataset> {
    let mut extent_meta: Option<(f64, f64, u8)> = None;
    let mut header_dims: Option<u8> = None;
    let mut labels: Vec<String> = Vec::new();
    let mut instances: Vec<EventInstance> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(body) = rest.trim_start().strip_prefix("extent:") {
                if extent_meta.is_some() {
                    return Err(parse_err(line_no, "duplicate extent metadata"));
                }
                if header_dims.is_some() {
                    return Err(parse_err(line_no, "extent metadata must precede the header"));
                }
                extent_meta = Some(parse_extent_line(line_no, body)?);
            }
            continue; // other comment lines are ignored
        }
        let fields: Vec<&str> = line.split(',').collect();
        match header_dims {
            None => {
                header_dims = Some(match fields.as_slice() {
                    ["id", "type", "x", "t"] => 1,
                    ["id", "type", "x", "y", "t"] => 2,
                    _ => {
                        return Err(parse_err(
                            line_no,
                            format!("expected header id,type,x[,y],t, got {line:?}"),
                        ))
                    }
                });
                if let Some((_, _, dims)) = extent_meta {
                    if dims != header_dims.unwrap() {
                        return Err(parse_err(
                            line_no,
                            format!(
                                "extent declares {dims} spatial dimensions but the header has {}",
                                header_dims.unwrap()
                            ),
                        ));
                    }
                }
            }
            Some(dims) => {
                let expected = 3 + dims as usize;
                if fields.len() != expected {
                    return Err(parse_err(
                        line_no,
                        format!("expected {expected} fields, got {}", fields.len()),
                    ));
                }
                let id = fields[0];
                let label = fields[1];
                if id.is_empty() || label.is_empty() {
                    return Err(parse_err(line_no, "empty id or type"));
                }
                let num = |s: &str, what: &str| -> Result<f64> {
                    s.parse::<f64>()
                        .map_err(|_| parse_err(line_no, format!("invalid {what} {s:?}")))
                };
                let x = num(fields[2], "x coordinate")?;
                let (y, time) = if dims == 2 {
                    (num(fields[3], "y coordinate")?, num(fields[4], "time")?)
                } else {
                    (0.0, num(fields[3], "time")?)
                };
                let ty = match labels.iter().position(|l| l == label) {
                    Some(pos) => TypeId(pos as u32),
                    None => {
                        labels.push(label.to_owned());
                        TypeId(labels.len() as u32 - 1)
                    }
                };
                instances.push(EventInstance::new(id, ty, [x, y], time));
            }
        }
    }

    let dims = header_dims.ok_or_else(|| parse_err(text.lines().count().max(1), "missing header"))?;
    let extent = match extent_meta {
        Some((dsize, tsize, _)) => SpaceExtent::uniform(dims, dsize, tsize)?,
        None => bounding_extent(dims, &instances)?,
    };
    let dataset = Dataset::new(labels, instances, extent)?;
    Ok(ParsedDataset {
        dataset,
        extent_declared: extent_meta.is_some(),
    })
}

fn bounding_extent(dims: u8, instances: &[EventInstance]) -> Result<SpaceExtent> {
    let mut dsize: f64 = 0.0;
    let mut tsize: f64 = 0.0;
    for inst in instances {
        for d in 0..dims as usize {
            dsize = dsize.max(inst.loc[d]);
        }
        tsize = tsize.max(inst.time);
    }
    // Degenerate data still needs a positive volume.
    SpaceExtent::uniform(dims, dsize.max(1.0), tsize.max(1.0))
}

/// Writes the dataset CSV, including the extent metadata line.
pub fn write_dataset(data: &Dataset) -> String {
    let extent = data.extent();
    let dims = extent.spatial_dims;
    let mut out = String::new();
    out.push_str(&format!(
        "# extent: dsize={},tsize={},dims={}\n",
        extent.spatial_size[0], extent.temporal_size, dims
    ));
    out.push_str(if dims == 1 { "id,type,x,t\n" } else { "id,type,x,y,t\n" });
    for inst in data.instances() {
        let label = data
            .type_label(inst.ty)
            .expect("instance type is in the table");
        if dims == 1 {
            out.push_str(&format!("{},{},{},{}\n", inst.id, label, inst.loc[0], inst.time));
        } else {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                inst.id, label, inst.loc[0], inst.loc[1], inst.time
            ));
        }
    }
    out
}

/// Ground-truth sidecar emitted next to generated datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub patterns: Vec<Vec<String>>,
}

impl GroundTruth {
    pub fn from_type_ids(data: &Dataset, truth: &[Vec<TypeId>]) -> Result<Self> {
        Ok(GroundTruth {
            patterns: truth
                .iter()
                .map(|seq| data.labels_of(seq))
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Echo of the parameters a report was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_len: Option<usize>,
    pub max_len: usize,
    pub neighborhood: NeighborhoodConfig,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub strict_paper_pruning: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parallel: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub rank: usize,
    pub pattern: Vec<String>,
    pub seq_index: f64,
    pub length: usize,
}

/// A mining result ready for serialization: ranked patterns (1-based, in
/// ranking order), the run's counters and the configuration echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub config: ReportConfig,
    pub patterns: Vec<ReportEntry>,
    pub stats: MineStats,
}

impl RankingReport {
    pub fn from_ranking(
        data: &Dataset,
        ranking: &Ranking,
        stats: &MineStats,
        cfg: &MineConfig,
    ) -> Result<Self> {
        let patterns = ranking
            .entries()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                Ok(ReportEntry {
                    rank: i + 1,
                    pattern: data.labels_of(&e.types)?,
                    seq_index: e.seq_index,
                    length: e.types.len(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(RankingReport {
            config: ReportConfig {
                mode: "topk".into(),
                k: Some(cfg.k),
                threshold: None,
                min_len: Some(cfg.min_len),
                max_len: cfg.max_len,
                neighborhood: cfg.neighborhood,
                strict_paper_pruning: Some(cfg.strict_paper_pruning),
                parallel: Some(cfg.parallel),
            },
            patterns,
            stats: stats.clone(),
        })
    }

    /// Threshold-miner output, ranked by the same (index, lexicographic)
    /// order the top-K ranking uses.
    pub fn from_patterns(
        data: &Dataset,
        patterns: &[Pattern],
        stats: &MineStats,
        threshold: f64,
        cfg: &MineConfig,
    ) -> Result<Self> {
        let mut ordered: Vec<&Pattern> = patterns.iter().collect();
        ordered.sort_by(|a, b| {
            b.seq_index
                .unwrap_or(0.0)
                .total_cmp(&a.seq_index.unwrap_or(0.0))
                .then_with(|| a.types.cmp(&b.types))
        });
        let entries = ordered
            .iter()
            .enumerate()
            .map(|(i, p)| {
                Ok(ReportEntry {
                    rank: i + 1,
                    pattern: data.labels_of(&p.types)?,
                    seq_index: p.seq_index.unwrap_or(0.0),
                    length: p.types.len(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(RankingReport {
            config: ReportConfig {
                mode: "threshold".into(),
                k: None,
                threshold: Some(threshold),
                min_len: None,
                max_len: cfg.max_len,
                neighborhood: cfg.neighborhood,
                strict_paper_pruning: None,
                parallel: None,
            },
            patterns: entries,
            stats: stats.clone(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,pattern,seq_index,length\n");
        for entry in &self.patterns {
            out.push_str(&format!(
                "{},{},{},{}\n",
                entry.rank,
                entry.pattern.join("->"),
                entry.seq_index,
                entry.length
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Shape;

    const TABLE_ROWS: &str = "\
id,type,x,t
a1,A,19,1
b1,B,25,3
c1,C,25,7
d1,D,21,11
";

    #[test]
    fn parses_rows_without_metadata() {
        let parsed = parse_dataset(TABLE_ROWS).unwrap();
        assert!(!parsed.extent_declared);
        let data = parsed.dataset;
        assert_eq!(data.len(), 4);
        assert_eq!(data.num_types(), 4);
        // Bounding-box extent: max x = 25, max t = 11.
        assert_eq!(data.extent().spatial_size[0], 25.0);
        assert_eq!(data.extent().temporal_size, 11.0);
        let a1 = &data.instances()[0];
        assert_eq!(a1.id, "a1");
        assert_eq!(a1.loc[0], 19.0);
        assert_eq!(a1.time, 1.0);
    }

    #[test]
    fn parses_declared_extent() {
        let text = format!("# extent: dsize=100,tsize=20,dims=1\n{TABLE_ROWS}");
        let parsed = parse_dataset(&text).unwrap();
        assert!(parsed.extent_declared);
        assert_eq!(parsed.dataset.extent().volume(), 2000.0);
    }

    #[test]
    fn empty_body_yields_empty_dataset() {
        let parsed = parse_dataset("id,type,x,t\n").unwrap();
        assert!(parsed.dataset.is_empty());
        assert_eq!(parsed.dataset.num_types(), 0);
    }

    #[test]
    fn two_spatial_columns_make_a_2d_dataset() {
        let parsed = parse_dataset("id,type,x,y,t\ne1,A,1,2,3\n").unwrap();
        assert_eq!(parsed.dataset.extent().spatial_dims, 2);
        assert_eq!(parsed.dataset.instances()[0].loc, [1.0, 2.0]);
    }

    #[test]
    fn wrong_arity_reports_line_number() {
        let err = parse_dataset("id,type,x,t\na1,A,1,2\nb1,B,3\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn bad_number_reports_line_number() {
        let err = parse_dataset("id,type,x,t\na1,A,forty,2\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn dataset_roundtrip_preserves_counts_and_coordinates() {
        let text = format!("# extent: dsize=100,tsize=20,dims=1\n{TABLE_ROWS}");
        let parsed = parse_dataset(&text).unwrap();
        let written = write_dataset(&parsed.dataset);
        let reparsed = parse_dataset(&written).unwrap();
        assert_eq!(reparsed.dataset.len(), parsed.dataset.len());
        assert_eq!(reparsed.dataset.num_types(), parsed.dataset.num_types());
        for (a, b) in parsed
            .dataset
            .instances()
            .iter()
            .zip(reparsed.dataset.instances())
        {
            assert_eq!(a.id, b.id);
            assert_eq!(a.loc, b.loc);
            assert_eq!(a.time, b.time);
        }
        // Full-precision floats survive the text round trip.
        let tricky = "id,type,x,t\na1,A,0.1234567890123456789,3.141592653589793\n";
        let parsed = parse_dataset(tricky).unwrap();
        let rewritten = write_dataset(&parsed.dataset);
        let reparsed = parse_dataset(&rewritten).unwrap();
        assert_eq!(
            parsed.dataset.instances()[0].loc[0],
            reparsed.dataset.instances()[0].loc[0]
        );
    }

    fn sample_report() -> RankingReport {
        RankingReport {
            config: ReportConfig {
                mode: "topk".into(),
                k: Some(3),
                threshold: None,
                min_len: Some(2),
                max_len: 20,
                neighborhood: NeighborhoodConfig::new(Shape::Cube, 5.0, 5.0).unwrap(),
                strict_paper_pruning: Some(false),
                parallel: Some(false),
            },
            patterns: vec![
                ReportEntry {
                    rank: 1,
                    pattern: vec!["C".into(), "D".into()],
                    seq_index: 15.0,
                    length: 2,
                },
                ReportEntry {
                    rank: 2,
                    pattern: vec!["A".into(), "B".into()],
                    seq_index: 80.0 / 3.0,
                    length: 2,
                },
            ],
            stats: MineStats::new(),
        }
    }

    #[test]
    fn ranking_json_roundtrip() {
        let report = sample_report();
        let json = report.to_json().unwrap();
        let back = RankingReport::from_json(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn ranking_csv_shape() {
        let csv = sample_report().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "rank,pattern,seq_index,length");
        assert_eq!(lines[1], "1,C->D,15,2");
        assert!(lines[2].starts_with("2,A->B,26.66666666666"));
    }

    #[test]
    fn empty_report_serializes_cleanly() {
        let mut report = sample_report();
        report.patterns.clear();
        let json = report.to_json().unwrap();
        assert!(json.contains("\"patterns\": []"));
        assert_eq!(RankingReport::from_json(&json).unwrap(), report);
    }
}
