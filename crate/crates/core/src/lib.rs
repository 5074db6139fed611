//! Single-pass closed frequent itemset mining over a count-based sliding
//! window.
//!
//! Each item in the window is tracked as a [`TernaryVector`] with one slot
//! per window position. Itemset supports come from combining vectors slot by
//! slot and counting `ONE`s, so the stream is read once and only
//! `items × window` bits of state are kept.
//!
//! ```
//! use fpgt_core::{mine, top_k, MinSupport, MinerConfig, SlidingWindow, Transaction, WindowConfig};
//!
//! let mut window = SlidingWindow::new(WindowConfig::new(5, 2).unwrap());
//! let rows = ["A B C", "B C D", "A B C", "B C", "B D"];
//! for (i, row) in rows.iter().enumerate() {
//!     window.push(&Transaction::new(i as u64 + 1, row.split_whitespace())).unwrap();
//! }
//! let config = MinerConfig::new(MinSupport::fraction(0.2).unwrap(), 3).unwrap();
//! let patterns = mine(&window.snapshot(), &config);
//! let best: Vec<String> = top_k(&patterns, 3).unwrap().iter().map(|p| p.items.concat()).collect();
//! assert_eq!(best, ["B", "BC", "BD"]);
//! ```

pub mod error;
pub mod ingest;
pub mod miner;
pub mod oracle;
pub mod pipeline;
pub mod ternary;
pub mod window;

pub use error::{Error, Result};
pub use ingest::{open_source, parse_transaction, InputSpec, SourceStats, TransactionSource};
pub use miner::{
    mine, mine_tree, top_k, FpgTree, MinSupport, MinedPattern, MinerConfig, NodeStatus, PatternNode,
};
pub use oracle::{oracle_mine, OracleResult};
pub use pipeline::{render_report, run, OutputMode, Pipeline, RunConfig, WindowReport};
pub use ternary::{combine_bit, TernaryBit, TernaryVector};
pub use window::{SlidingWindow, Transaction, WindowConfig, WindowSnapshot};
