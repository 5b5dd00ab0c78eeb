//! Machine-readable concept reports.

use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use ludecon::compiler::{parse_annotations, CompileError, ScanReport};
use ludecon::concepts::{lookup, ConceptCategory, ConceptComputation, ConceptDataType, ConceptVector};
use ludecon::ludeme::LudemeNode;
use ludecon::playout::{Policy, PlayoutConfig, PlayoutReport};
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ConceptEntry {
    id: u16,
    name: &'static str,
    category: ConceptCategory,
    data_type: ConceptDataType,
    computation: ConceptComputation,
    value: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PlayoutBlock {
    trials: usize,
    seed: u64,
    policy: Policy,
    truncated_fraction: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConceptReport {
    game: String,
    source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    scan_only: Option<bool>,
    concepts: Vec<ConceptEntry>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    annotations: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    playout: Option<PlayoutBlock>,
    warnings: Vec<String>,
}

impl ConceptReport {
    /// `compile_error` marks a report that fell back to compilation concepts.
    pub fn new(
        path: &Path,
        tree: &LudemeNode,
        source: &str,
        scan: &ScanReport,
        playout: Option<(&PlayoutConfig, &PlayoutReport)>,
        compile_error: Option<CompileError>,
    ) -> Self {
        let vector = match playout {
            Some((_, p)) => ConceptVector::merge(&scan.vector, &p.vector).expect("disjoint concept domains"),
            None => scan.vector.clone(),
        };
        let concepts = vector
            .iter()
            .map(|(id, value)| {
                let d = lookup(id).expect("registry concept");
                ConceptEntry {
                    id: id.0,
                    name: d.name,
                    category: d.category,
                    data_type: d.data_type,
                    computation: d.computation,
                    value,
                }
            })
            .collect();
        let mut warnings: Vec<String> = scan.unknown_constructors.iter().map(|c| format!("UnknownConstructor: {c}")).collect();
        match &compile_error {
            Some(CompileError::UnsupportedLudeme(list)) => {
                let names: Vec<&str> = list.iter().map(|u| u.ludeme.as_str()).collect();
                warnings.push(format!("UnsupportedLudeme: {}", names.join(", ")));
            }
            Some(other) => warnings.push(format!("CompileError: {other}")),
            None => {}
        }
        let game = tree.children().first().and_then(|c| c.as_string()).unwrap_or_default().to_string();
        ConceptReport {
            game,
            source: path.display().to_string(),
            scan_only: playout.map(|_| false).or(compile_error.as_ref().map(|_| true)),
            concepts,
            annotations: parse_annotations(source),
            playout: playout.map(|(c, p)| PlayoutBlock {
                trials: c.trials,
                seed: c.master_seed,
                policy: c.policy,
                truncated_fraction: p.truncated_fraction,
            }),
            warnings,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serialisable report") + "\n",
            Format::Csv => {
                let mut out = String::from("id,name,category,dataType,computation,value\n");
                for c in &self.concepts {
                    out += &format!("{},{},{:?},{:?},{:?},{}\n", c.id, c.name, c.category, c.data_type, c.computation, c.value);
                }
                out
            }
        }
    }
}
