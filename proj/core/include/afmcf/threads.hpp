#pragma once

namespace afmcf {

/// Caps the worker count used by parallel field kernels (OpenMP when
/// available, otherwise a no-op). n <= 0 leaves the runtime default.
void set_max_threads(int n);

/// Applies the AFMCF_THREADS environment variable, if set.
void apply_thread_env();

} // namespace afmcf
