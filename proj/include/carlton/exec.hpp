#pragma once

namespace carlton {

/// Execution mode for the data-parallel kernels. Both modes produce
/// bit-identical results; Serial is the reference used in tests.
enum class Exec { Serial, Parallel };

/// Number of OpenMP workers used by Exec::Parallel kernels (1 when built
/// without OpenMP).
int worker_count();
void set_worker_count(int workers);

bool openmp_enabled();

} // namespace carlton
