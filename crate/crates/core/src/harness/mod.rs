//! Scenario files, the reproduction suite, the verdict table and the
//! property sweeps behind the `entwb` binary.

pub mod props;
pub mod repro;
pub mod scenario;
pub mod table;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use scenario::{parse_expr, parse_scenario, Check, Evaluated, PartitionSpec, Scenario};

/// Seed used when `ENTWB_SEED` is not set.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Fixed six-decimal formatting with negative zero folded to zero.
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Seed from `ENTWB_SEED`, falling back to [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    match std::env::var("ENTWB_SEED") {
        Ok(v) => v.trim().parse().unwrap_or_else(|_| {
            log::warn!("ignoring unparsable ENTWB_SEED={v:?}");
            DEFAULT_SEED
        }),
        Err(_) => DEFAULT_SEED,
    }
}

/// Independent stream per case so that adding or reordering cases does
/// not shift the random numbers of the others.
pub fn case_rng(seed: u64, case: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // FNV-1a of the case id selects the stream.
    let stream = case.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    rng.set_stream(stream);
    rng
}
