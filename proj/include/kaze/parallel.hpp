#pragma once

namespace kaze {

/// Caps the worker count used by the data-parallel loops (OpenMP).
/// n <= 0 restores the runtime default.
void set_thread_count(int n);

/// Current worker cap.
int thread_count();

}  // namespace kaze
