//! The TPV1 pair file format: a JSON document holding the tower levels,
//! construction metadata and checkpoints.
//!
//! Each level keeps its encoding (`plain` or `rle`), so reading a file and
//! writing it back reproduces the same bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::meta::ConstructionMeta;
use crate::words::pair::{Level, ViablePair};
use crate::words::partial::{PartialWord, StorageKind};
use crate::words::symbol::Symbol;

pub const FORMAT_VERSION: u32 = 1;
pub const ALPHABET: &str = "01?";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format_version: u32,
    alphabet: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    construction: Option<ConstructionMeta>,
    levels: Vec<LevelDoc>,
    #[serde(default)]
    checkpoints: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Encoding {
    Plain,
    Rle,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WordDoc {
    Plain(String),
    Runs(Vec<(Symbol, u64)>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelDoc {
    n: u64,
    encoding: Encoding,
    word: WordDoc,
}

pub fn to_tpv_string(pair: &ViablePair) -> String {
    let levels = pair
        .levels()
        .iter()
        .map(|lvl| match lvl.word.storage_kind() {
            StorageKind::Packed => LevelDoc {
                n: lvl.n,
                encoding: Encoding::Plain,
                word: WordDoc::Plain(lvl.word.to_string()),
            },
            StorageKind::RunLength => LevelDoc {
                n: lvl.n,
                encoding: Encoding::Rle,
                word: WordDoc::Runs(lvl.word.runs()),
            },
        })
        .collect();
    let doc = Document {
        format_version: FORMAT_VERSION,
        alphabet: ALPHABET.to_string(),
        construction: pair.meta().cloned(),
        levels,
        checkpoints: pair.checkpoints().to_vec(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("pair documents always serialise");
    out.push('\n');
    out
}

pub fn from_tpv_str(text: &str) -> Result<ViablePair> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format_version {}",
            doc.format_version
        )));
    }
    if doc.alphabet != ALPHABET {
        return Err(Error::Format(format!("unsupported alphabet {:?}", doc.alphabet)));
    }
    let levels = doc
        .levels
        .into_iter()
        .enumerate()
        .map(|(t, lvl)| {
            let word = match (lvl.encoding, lvl.word) {
                (Encoding::Plain, WordDoc::Plain(s)) => {
                    let symbols = PartialWord::parse(&s)?.to_symbols();
                    PartialWord::with_storage(&symbols, StorageKind::Packed)
                }
                (Encoding::Rle, WordDoc::Runs(runs)) => PartialWord::from_runs(runs)?,
                _ => {
                    return Err(Error::Format(format!(
                        "level {t}: word does not match its encoding"
                    )))
                }
            };
            if word.len() != lvl.n {
                return Err(Error::Format(format!(
                    "level {t}: n = {} but the word has {} symbols",
                    lvl.n,
                    word.len()
                )));
            }
            Ok(Level { n: lvl.n, word })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pair = ViablePair::new(levels)?.with_checkpoints(doc.checkpoints);
    if let Some(meta) = doc.construction {
        pair = pair.with_meta(meta);
    }
    Ok(pair)
}

pub fn write_tpv(pair: &ViablePair, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_tpv_string(pair))
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

pub fn read_tpv(path: impl AsRef<Path>) -> Result<ViablePair> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    from_tpv_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::meta::{ConstructionKind, Mode};

    fn sample() -> ViablePair {
        let meta = ConstructionMeta {
            kind: ConstructionKind::A,
            k: Some(2),
            l: Some(3),
            mode: Mode::Relaxed,
            fill_policy: "zero".into(),
            seed: None,
            overrides: vec!["primes".into()],
            tower: vec![1, 11],
            poly: vec![],
        };
        ViablePair::from_words(&["?", "00?0?000000"])
            .unwrap()
            .with_meta(meta)
            .with_checkpoints(vec![3])
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let text = to_tpv_string(&sample());
        let back = from_tpv_str(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(to_tpv_string(&back), text);
        assert!(text.contains("\"format_version\": 1"));
        assert!(text.contains("\"encoding\": \"plain\""));
    }

    #[test]
    fn run_length_levels_round_trip() {
        let runs = vec![(Symbol::Zero, 3), (Symbol::Hole, 2), (Symbol::One, 1)];
        let lvl = Level { n: 6, word: PartialWord::from_runs(runs).unwrap() };
        let pair = ViablePair::new(vec![lvl]).unwrap();
        let text = to_tpv_string(&pair);
        assert!(text.contains("\"rle\""));
        let back = from_tpv_str(&text).unwrap();
        assert_eq!(back.top().word.storage_kind(), StorageKind::RunLength);
        assert_eq!(to_tpv_string(&back), text);
    }

    #[test]
    fn rejects_malformed_documents() {
        let good = to_tpv_string(&sample());
        assert!(from_tpv_str(&good.replace("\"format_version\": 1", "\"format_version\": 2")).is_err());
        assert!(from_tpv_str(&good.replace("00?0?000000", "00?0?00000")).is_err());
        assert!(from_tpv_str(&good.replace("00?0?000000", "00?0?00000x")).is_err());
        assert!(from_tpv_str("{}").is_err());
    }
}
