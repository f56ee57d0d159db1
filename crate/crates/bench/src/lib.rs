//! Shared inputs for the benchmarks.

/// Levels whose exclusion needs exact F_{p^2} counts or Castelnuovo.
pub const HARD_LEVELS: [u64; 4] = [86, 122, 158, 159];

/// (level, index) pairs spanning small and large trace-formula sums.
pub const TRACE_CASES: [(u64, u64); 4] = [(11, 2), (86, 9), (215, 4), (86, 59049)];
