#pragma once

namespace tcdiff {

/// Execution policy for the heavy kernels (distribution building, pairwise
/// class statistics, GA fitness sweeps). The serial path is the reference
/// implementation; the parallel path uses OpenMP with fixed-order reductions
/// and must produce bitwise-identical results. Tests assert this.
enum class Exec {
    serial,
    parallel,
};

/// Number of worker threads the parallel path would use (1 without OpenMP).
int hardware_threads();

}  // namespace tcdiff
