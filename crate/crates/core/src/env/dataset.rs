//! JSON-lines dataset files: one [`GameRecord`] per line, UTF-8, LF endings.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::game::{generate_game, GameRecord, SCRIPTED_MAX_ROUNDS};
use super::grid::{generate_grid, GridImage, GRID_CELLS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn file_name(self) -> &'static str {
        match self {
            Split::Train => "train.jsonl",
            Split::Val => "val.jsonl",
            Split::Test => "test.jsonl",
        }
    }

    pub fn path(self, dir: &Path) -> PathBuf {
        dir.join(self.file_name())
    }
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        })
    }
}

impl std::str::FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(Error::ConfigInvalid(format!(
                "unknown split `{other}` (train|val|test)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitSizes {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl SplitSizes {
    pub fn get(&self, split: Split) -> usize {
        match split {
            Split::Train => self.train,
            Split::Val => self.val,
            Split::Test => self.test,
        }
    }
}

/// Builds the three splits in memory. Grids are unique across all splits and
/// never contain two identical cells, so every scripted game is solvable.
pub fn build_splits(sizes: SplitSizes, seed: u64) -> Result<[Vec<GameRecord>; 3]> {
    if sizes.train == 0 || sizes.val == 0 || sizes.test == 0 {
        return Err(Error::ConfigInvalid("split sizes must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<GridImage> = HashSet::new();
    let mut out: [Vec<GameRecord>; 3] = Default::default();
    for (slot, split) in Split::ALL.into_iter().enumerate() {
        let n = sizes.get(split);
        let records = &mut out[slot];
        records.reserve(n);
        while records.len() < n {
            let grid = generate_grid(&mut rng);
            if grid.has_duplicate_cells() || seen.contains(&grid) {
                continue;
            }
            let target = rng.gen_range(0..GRID_CELLS);
            let record = generate_game(&grid, target, SCRIPTED_MAX_ROUNDS, &mut rng)?;
            seen.insert(grid);
            records.push(record);
        }
    }
    Ok(out)
}

/// Writes `train.jsonl`, `val.jsonl` and `test.jsonl` into `dir`.
pub fn generate_dataset(sizes: SplitSizes, seed: u64, dir: &Path) -> Result<()> {
    let splits = build_splits(sizes, seed)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (split, records) in Split::ALL.into_iter().zip(splits.iter()) {
        write_records(&split.path(dir), records)?;
    }
    Ok(())
}

pub fn write_records(path: &Path, records: &[GameRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for r in records {
        let line = serde_json::to_string(r).expect("game records always serialize");
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_records(path: &Path) -> Result<Vec<GameRecord>> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingDataset(path.to_path_buf()),
        _ => Error::io(path, e),
    })?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let corrupt = |msg: String| Error::CorruptRecord {
            path: path.to_path_buf(),
            line: i + 1,
            msg,
        };
        let record: GameRecord = serde_json::from_str(&line).map_err(|e| corrupt(e.to_string()))?;
        record.validate().map_err(corrupt)?;
        records.push(record);
    }
    Ok(records)
}

pub fn read_split(dir: &Path, split: Split) -> Result<Vec<GameRecord>> {
    read_records(&split.path(dir))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_have_requested_sizes_and_no_overlap() {
        let sizes = SplitSizes {
            train: 40,
            val: 20,
            test: 20,
        };
        let [train, val, test] = build_splits(sizes, 9).unwrap();
        assert_eq!((train.len(), val.len(), test.len()), (40, 20, 20));
        let mut all = HashSet::new();
        for r in train.iter().chain(&val).chain(&test) {
            assert!(all.insert(r.grid.clone()), "grid repeated across splits");
            assert_eq!(r.reward, 1);
        }
    }

    #[test]
    fn zero_size_is_rejected() {
        let sizes = SplitSizes {
            train: 0,
            val: 1,
            test: 1,
        };
        assert!(matches!(
            build_splits(sizes, 0),
            Err(Error::ConfigInvalid(_))
        ));
    }

    #[test]
    fn corrupt_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let sizes = SplitSizes {
            train: 2,
            val: 1,
            test: 1,
        };
        generate_dataset(sizes, 1, dir.path()).unwrap();
        let path = Split::Train.path(dir.path());
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("{\"grid\": []}\n");
        fs::write(&path, text).unwrap();
        match read_records(&path) {
            Err(Error::CorruptRecord { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected corrupt record, got {other:?}"),
        }
        assert!(matches!(
            read_records(&dir.path().join("nope.jsonl")),
            Err(Error::MissingDataset(_))
        ));
    }
}
