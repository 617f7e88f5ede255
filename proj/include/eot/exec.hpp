#pragma once

namespace eot {

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path used by tests; `parallel` runs the same loop under OpenMP and must
/// produce bit-identical results.
enum class ExecPolicy { serial, parallel };

}  // namespace eot
