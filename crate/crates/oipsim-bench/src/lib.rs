//! Benchmark-only crate: no library code. The `toolkit` bench target
//! (`cargo bench -p oipsim-bench`) times the hot paths of the simulator —
//! carrier-profile evaluation, swept cascade response, equivalent-circuit
//! fitting, microstrip synthesis, and Touchstone round trips.
