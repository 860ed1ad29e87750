//! Test-window access guard.
//!
//! Search and training must never read test-fold bars. Every simulation
//! over a `Purpose::Test` window checks this guard; the only sanction path
//! is an explicit `allow_test_access` scope, entered by the final
//! reporting step after search has concluded. The counter is global rather
//! than thread-local so a sanctioned scope may fan out worker threads.

use std::sync::atomic::{AtomicUsize, Ordering};

static TEST_ACCESS_DEPTH: AtomicUsize = AtomicUsize::new(0);

/// True while at least one sanctioned scope is open.
pub fn test_access_allowed() -> bool {
    TEST_ACCESS_DEPTH.load(Ordering::SeqCst) > 0
}

/// Run `f` with test-window access enabled.
pub fn allow_test_access<T>(f: impl FnOnce() -> T) -> T {
    TEST_ACCESS_DEPTH.fetch_add(1, Ordering::SeqCst);
    let out = f();
    TEST_ACCESS_DEPTH.fetch_sub(1, Ordering::SeqCst);
    out
}
