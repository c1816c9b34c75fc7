//! Seeded train/test splitting with the pinned generator from [`crate::rng`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::SeededRng;

use super::CuratedRow;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub seed: u64,
    pub train: Vec<CuratedRow>,
    pub test: Vec<CuratedRow>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SplitError {
    #[error("test size {test_size} must be smaller than the row count {rows}")]
    TestSizeTooLarge { test_size: usize, rows: usize },
}

/// Shuffles rows with the pinned seeded generator and takes the first
/// `test_size` as the test set. Bit-identical across runs and platforms.
pub fn split(
    mut rows: Vec<CuratedRow>,
    test_size: usize,
    seed: u64,
) -> Result<DatasetSplit, SplitError> {
    if test_size >= rows.len() {
        return Err(SplitError::TestSizeTooLarge {
            test_size,
            rows: rows.len(),
        });
    }
    // Canonical input order so the shuffle outcome depends only on content.
    rows.sort_by(|a, b| a.intent.cmp(&b.intent));
    let mut rng = SeededRng::new(seed);
    rng.shuffle(&mut rows);
    let train = rows.split_off(test_size);
    Ok(DatasetSplit {
        seed,
        train,
        test: rows,
    })
}
