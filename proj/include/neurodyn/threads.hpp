#ifndef NEURODYN_THREADS_HPP
#define NEURODYN_THREADS_HPP

namespace neurodyn {

/// Resolve a requested worker count: 0 means "use the default", which is
/// the NEURODYN_THREADS environment variable if set, otherwise all
/// available cores. Results of parallel kernels are bit-identical for any
/// thread count; this only controls how work is divided.
int resolve_threads(int requested);

} // namespace neurodyn

#endif
