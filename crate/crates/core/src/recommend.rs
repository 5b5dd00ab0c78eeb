//! Concept-based game corpus, distances and recommendations.
//!
//! The distance between two games mixes a Jaccard distance over the binary
//! concepts either game has with the mean min–max normalised difference of
//! the numeric concepts both games have:
//!
//! `d = w_b * jaccard + (1 - w_b) * numeric`
//!
//! When one of the two parts has nothing to compare, the other part carries
//! the whole weight.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compiler::{compile, parse_annotations, static_scan};
use crate::concepts::{lookup, lookup_name, registry, ConceptCategory, ConceptDataType, ConceptId, ConceptVector};
use crate::ludeme::parse_source;
use crate::playout::{analyze, PlayoutConfig};

/// Version of the distance definition, stored next to persisted corpora.
pub const DISTANCE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RecommendError {
    #[error("unknown game {0:?}")]
    UnknownGame(String),
    #[error("at least one liked game is required")]
    EmptyLikes,
    #[error("games {0:?} and {1:?} have no comparable concepts")]
    EmptyIntersection(String, String),
    #[error("corpus column {0:?} is not a known concept")]
    UnknownColumn(String),
    #[error("bad value {value:?} for {game} / {column}")]
    BadCell { game: String, column: String, value: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    /// File stem of the description, e.g. `Hex` or `Chess-scanonly`.
    pub game_id: String,
    pub display_name: String,
    pub vector: ConceptVector,
    pub scan_only: bool,
    pub playout_config: Option<PlayoutConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceConfig {
    pub include_categories: BTreeSet<ConceptCategory>,
    pub binary_weight: f64,
    /// Corpus-wide `(min, max)` of each numeric concept.
    pub ranges: BTreeMap<ConceptId, (f64, f64)>,
}

impl DistanceConfig {
    /// Default categories and weight, with ranges taken from `entries`.
    pub fn for_corpus(entries: &[CorpusEntry]) -> Self {
        let mut ranges: BTreeMap<ConceptId, (f64, f64)> = BTreeMap::new();
        for e in entries {
            for (id, value) in e.vector.iter() {
                if lookup(id).is_some_and(|d| d.data_type.is_numeric()) {
                    let r = ranges.entry(id).or_insert((value, value));
                    r.0 = r.0.min(value);
                    r.1 = r.1.max(value);
                }
            }
        }
        let include_categories = ConceptCategory::ALL
            .into_iter()
            .filter(|c| !matches!(c, ConceptCategory::Visual | ConceptCategory::Implementation))
            .collect();
        DistanceConfig { include_categories, binary_weight: 0.5, ranges }
    }
}

/// Distance in `[0, 1]`; `None` when the vectors share nothing comparable.
pub fn vector_distance(a: &ConceptVector, b: &ConceptVector, cfg: &DistanceConfig) -> Option<f64> {
    let included = |id: ConceptId| lookup(id).filter(|d| cfg.include_categories.contains(&d.category));
    let binary = |v: &ConceptVector| -> BTreeSet<ConceptId> {
        v.iter()
            .filter(|&(id, value)| value == 1.0 && included(id).is_some_and(|d| d.data_type == ConceptDataType::Binary))
            .map(|(id, _)| id)
            .collect()
    };
    let (ba, bb) = (binary(a), binary(b));
    let union = ba.union(&bb).count();
    let jaccard = (union > 0).then(|| 1.0 - ba.intersection(&bb).count() as f64 / union as f64);

    let mut diffs = Vec::new();
    for (id, x) in a.iter() {
        if !included(id).is_some_and(|d| d.data_type.is_numeric()) {
            continue;
        }
        let Some(y) = b.get(id) else { continue };
        let diff = match cfg.ranges.get(&id) {
            Some(&(lo, hi)) if hi > lo => ((x - y).abs() / (hi - lo)).min(1.0),
            _ if x == y => 0.0,
            _ => 1.0,
        };
        diffs.push(diff);
    }
    let numeric = (!diffs.is_empty()).then(|| diffs.iter().sum::<f64>() / diffs.len() as f64);

    match (jaccard, numeric) {
        (Some(j), Some(n)) => Some(cfg.binary_weight * j + (1.0 - cfg.binary_weight) * n),
        (Some(j), None) => Some(j),
        (None, Some(n)) => Some(n),
        (None, None) => None,
    }
}

pub fn distance(a: &CorpusEntry, b: &CorpusEntry, cfg: &DistanceConfig) -> Result<f64, RecommendError> {
    vector_distance(&a.vector, &b.vector, cfg)
        .ok_or_else(|| RecommendError::EmptyIntersection(a.game_id.clone(), b.game_id.clone()))
}

fn find<'a>(corpus: &'a [CorpusEntry], id: &str) -> Result<&'a CorpusEntry, RecommendError> {
    corpus.iter().find(|e| e.game_id == id).ok_or_else(|| RecommendError::UnknownGame(id.to_string()))
}

/// The `k` games closest to `target`, ties broken by id.
pub fn nearest(corpus: &[CorpusEntry], target: &str, k: usize, cfg: &DistanceConfig) -> Result<Vec<(String, f64)>, RecommendError> {
    let t = find(corpus, target)?;
    let mut ranked = corpus
        .iter()
        .filter(|e| e.game_id != target)
        .map(|e| Ok((e.game_id.clone(), distance(t, e, cfg)?)))
        .collect::<Result<Vec<_>, RecommendError>>()?;
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    Ok(ranked)
}

/// Ranks games by mean similarity to `likes` minus mean similarity to
/// `dislikes`. A game listed in both counts as liked.
pub fn recommend(
    corpus: &[CorpusEntry],
    likes: &[String],
    dislikes: &[String],
    k: usize,
    cfg: &DistanceConfig,
) -> Result<Vec<(String, f64)>, RecommendError> {
    if likes.is_empty() {
        return Err(RecommendError::EmptyLikes);
    }
    let liked: Vec<&CorpusEntry> = likes.iter().map(|id| find(corpus, id)).collect::<Result<_, _>>()?;
    let disliked: Vec<&CorpusEntry> = dislikes
        .iter()
        .map(|id| find(corpus, id))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|e| !likes.contains(&e.game_id))
        .collect();
    let mean_similarity = |group: &[&CorpusEntry], e: &CorpusEntry| -> Result<f64, RecommendError> {
        if group.is_empty() {
            return Ok(0.0);
        }
        let total = group.iter().map(|g| distance(g, e, cfg).map(|d| 1.0 - d)).sum::<Result<f64, _>>()?;
        Ok(total / group.len() as f64)
    };
    let mut ranked = corpus
        .iter()
        .filter(|e| !likes.contains(&e.game_id) && !dislikes.contains(&e.game_id))
        .map(|e| Ok((e.game_id.clone(), mean_similarity(&liked, e)? - mean_similarity(&disliked, e)?)))
        .collect::<Result<Vec<_>, RecommendError>>()?;
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    Ok(ranked)
}

/// Scans a description and, when it compiles and `config.trials > 0`, adds
/// its playout concepts. Declared annotations override computed values of
/// the concept with the same name, ignoring spaces and a leading `Num`
/// (`PlayableSites` sets Num Playable Sites).
pub fn entry_from_source(game_id: &str, source: &str, config: &PlayoutConfig) -> Result<CorpusEntry, crate::Error> {
    let tree = parse_source(source)?;
    let scan = static_scan(&tree)?;
    let display_name = tree
        .children()
        .first()
        .and_then(|c| c.as_string())
        .unwrap_or(game_id)
        .to_string();
    let mut vector = scan.vector;
    for (key, value) in parse_annotations(source) {
        if let Some(def) = registry().iter().find(|d| {
            let compact = d.name.replace(' ', "");
            compact == key || compact.strip_prefix("Num") == Some(key.as_str())
        }) {
            vector.set(def.id, value)?;
        }
    }
    let (vector, scan_only, playout_config) = match compile(&tree) {
        Ok(spec) if config.trials > 0 => {
            let report = analyze(&spec, config);
            (ConceptVector::merge(&vector, &report.vector)?, false, Some(config.clone()))
        }
        Ok(_) => (vector, false, None),
        Err(_) => (vector, true, None),
    };
    Ok(CorpusEntry { game_id: game_id.to_string(), display_name, vector, scan_only, playout_config })
}

/// Files that could not be turned into entries.
pub type CorpusFailures = Vec<(PathBuf, crate::Error)>;

/// Builds one entry per file, in the given order. Failing files are
/// skipped and reported.
pub fn build_corpus(files: &[PathBuf], config: &PlayoutConfig) -> (Vec<CorpusEntry>, CorpusFailures) {
    let results: Vec<_> = files
        .par_iter()
        .map(|path| {
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let entry = fs::read_to_string(path)
                .map_err(crate::Error::from)
                .and_then(|src| entry_from_source(&id, &src, config));
            (path.clone(), entry)
        })
        .collect();
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for (path, result) in results {
        match result {
            Ok(e) => entries.push(e),
            Err(e) => failures.push((path, e)),
        }
    }
    (entries, failures)
}

/// `.lud` files of a directory, sorted by name.
pub fn corpus_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "lud"))
        .collect();
    files.sort();
    Ok(files)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
struct Sidecar {
    distance_version: u32,
    binary_weight: f64,
    playout_configs: BTreeMap<String, Option<PlayoutConfig>>,
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes the corpus matrix and its JSON sidecar.
pub fn write_corpus(csv_path: &Path, entries: &[CorpusEntry]) -> Result<(), RecommendError> {
    let mut w = csv::Writer::from_path(csv_path)?;
    let mut header = vec!["game".to_string(), "name".to_string(), "scan_only".to_string()];
    header.extend(registry().iter().map(|d| d.name.to_string()));
    w.write_record(&header)?;
    for e in entries {
        let mut row = vec![e.game_id.clone(), e.display_name.clone(), e.scan_only.to_string()];
        row.extend(registry().iter().map(|d| e.vector.get(d.id).map(|v| v.to_string()).unwrap_or_default()));
        w.write_record(&row)?;
    }
    w.flush()?;
    let sidecar = Sidecar {
        distance_version: DISTANCE_VERSION,
        binary_weight: 0.5,
        playout_configs: entries.iter().map(|e| (e.game_id.clone(), e.playout_config.clone())).collect(),
    };
    fs::write(sidecar_path(csv_path), serde_json::to_string_pretty(&sidecar)? + "\n")?;
    Ok(())
}

/// Reads a matrix written by [`write_corpus`]. The sidecar is optional.
pub fn read_corpus(csv_path: &Path) -> Result<Vec<CorpusEntry>, RecommendError> {
    let mut r = csv::Reader::from_path(csv_path)?;
    let header = r.headers()?.clone();
    let columns: Vec<ConceptId> = header
        .iter()
        .skip(3)
        .map(|name| lookup_name(name).map(|d| d.id).ok_or_else(|| RecommendError::UnknownColumn(name.to_string())))
        .collect::<Result<_, _>>()?;
    let configs = match fs::read_to_string(sidecar_path(csv_path)) {
        Ok(text) => serde_json::from_str::<Sidecar>(&text)?.playout_configs,
        Err(_) => BTreeMap::new(),
    };
    let mut entries = Vec::new();
    for record in r.records() {
        let record = record?;
        let game_id = record.get(0).unwrap_or_default().to_string();
        let bad = |column: &str, value: &str| RecommendError::BadCell {
            game: game_id.clone(),
            column: column.to_string(),
            value: value.to_string(),
        };
        let scan_only = match record.get(2).unwrap_or_default() {
            "true" => true,
            "false" => false,
            other => return Err(bad("scan_only", other)),
        };
        let mut vector = ConceptVector::new();
        for (cell, &id) in record.iter().skip(3).zip(&columns) {
            if cell.is_empty() {
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| bad(&id.to_string(), cell))?;
            vector.set(id, value).map_err(|_| bad(&id.to_string(), cell))?;
        }
        let playout_config = configs.get(&game_id).cloned().flatten();
        vector.provenance = playout_config.clone();
        entries.push(CorpusEntry {
            display_name: record.get(1).unwrap_or_default().to_string(),
            game_id,
            vector,
            scan_only,
            playout_config,
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::ids;

    fn entry(id: &str, values: &[(ConceptId, f64)]) -> CorpusEntry {
        let mut vector = ConceptVector::new();
        for &(c, v) in values {
            vector.set(c, v).unwrap();
        }
        CorpusEntry { game_id: id.into(), display_name: id.into(), vector, scan_only: true, playout_config: None }
    }

    fn small_corpus() -> Vec<CorpusEntry> {
        vec![
            entry("a", &[(ids::HEX_TILING, 1.0), (ids::ADD_MOVE, 1.0), (ids::NUM_PLAYABLE_SITES, 100.0)]),
            entry("b", &[(ids::HEX_TILING, 1.0), (ids::ADD_MOVE, 1.0), (ids::NUM_PLAYABLE_SITES, 120.0)]),
            entry("c", &[(ids::SQUARE_TILING, 1.0), (ids::DICE_USED, 1.0), (ids::NUM_PLAYABLE_SITES, 20.0)]),
        ]
    }

    #[test]
    fn mixed_distance() {
        let c = small_corpus();
        let cfg = DistanceConfig::for_corpus(&c);
        assert_eq!(cfg.ranges[&ids::NUM_PLAYABLE_SITES], (20.0, 120.0));
        assert_eq!(distance(&c[0], &c[0], &cfg).unwrap(), 0.0);
        assert!((distance(&c[0], &c[1], &cfg).unwrap() - 0.5 * 0.2).abs() < 1e-12);
        assert!((distance(&c[0], &c[2], &cfg).unwrap() - (0.5 + 0.5 * 0.8)).abs() < 1e-12);
    }

    #[test]
    fn empty_intersection() {
        let a = entry("a", &[(ids::NUM_PLAYERS, 2.0)]);
        let b = entry("b", &[(ids::GAME_LENGTH, 9.0)]);
        let cfg = DistanceConfig::for_corpus(&[]);
        assert!(matches!(distance(&a, &b, &cfg), Err(RecommendError::EmptyIntersection(..))));
    }

    #[test]
    fn category_filter() {
        let a = entry("a", &[(ids::HEX_TILING, 1.0), (ids::ADD_MOVE, 1.0)]);
        let b = entry("b", &[(ids::HEX_TILING, 1.0), (ids::SLIDE_MOVE, 1.0)]);
        let mut cfg = DistanceConfig::for_corpus(&[]);
        assert!(distance(&a, &b, &cfg).unwrap() > 0.0);
        cfg.include_categories = [ConceptCategory::Equipment].into();
        assert_eq!(distance(&a, &b, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn nearest_and_recommend() {
        let c = small_corpus();
        let cfg = DistanceConfig::for_corpus(&c);
        let n = nearest(&c, "a", 1, &cfg).unwrap();
        assert_eq!(n[0].0, "b");
        assert_eq!(nearest(&c, "a", 10, &cfg).unwrap().len(), 2);
        assert!(matches!(nearest(&c, "zz", 1, &cfg), Err(RecommendError::UnknownGame(_))));
        let r = recommend(&c, &["a".into()], &[], 2, &cfg).unwrap();
        let ids: Vec<_> = r.iter().map(|x| x.0.as_str()).collect();
        assert_eq!(ids, ["b", "c"]);
        let both = recommend(&c, &["a".into()], &["a".into()], 2, &cfg).unwrap();
        assert_eq!(both, r);
        assert!(matches!(recommend(&c, &[], &[], 1, &cfg), Err(RecommendError::EmptyLikes)));
    }

    #[test]
    fn ties_break_by_id() {
        let c = vec![
            entry("t", &[(ids::ADD_MOVE, 1.0)]),
            entry("y", &[(ids::ADD_MOVE, 1.0)]),
            entry("x", &[(ids::ADD_MOVE, 1.0)]),
        ];
        let cfg = DistanceConfig::for_corpus(&c);
        let n = nearest(&c, "t", 2, &cfg).unwrap();
        assert_eq!(n, [("x".to_string(), 0.0), ("y".to_string(), 0.0)]);
    }

    #[test]
    fn csv_round_trip() {
        let dir = std::env::temp_dir().join(format!("ludecon-csv-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.csv");
        let mut c = small_corpus();
        c[1].vector.set(ids::FREQ_ADD, 0.125).unwrap();
        c[1].scan_only = false;
        c[1].playout_config = Some(PlayoutConfig::default());
        c[1].vector.provenance = c[1].playout_config.clone();
        write_corpus(&path, &c).unwrap();
        let back = read_corpus(&path).unwrap();
        assert_eq!(back, c);
        fs::remove_dir_all(&dir).unwrap();
    }
}
