//! Opt-in self-checking of every LP solved in the process.
//!
//! While enabled, each optimal solve has its dual certificate verified and
//! each lexicographic solution is checked to attain the plain optimum of
//! its first objective. Counts are global and shared across threads.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(false);
static CERTIFIED: AtomicU64 = AtomicU64::new(0);
static CERTIFICATE_FAILURES: AtomicU64 = AtomicU64::new(0);
static LEX_CHECKED: AtomicU64 = AtomicU64::new(0);
static LEX_MISMATCHES: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AuditCounts {
    pub certified: u64,
    pub certificate_failures: u64,
    pub lex_checked: u64,
    pub lex_mismatches: u64,
}

pub fn enable(on: bool) {
    ENABLED.store(on, Ordering::SeqCst);
}

pub fn is_enabled() -> bool {
    ENABLED.load(Ordering::Relaxed)
}

pub fn counts() -> AuditCounts {
    AuditCounts {
        certified: CERTIFIED.load(Ordering::SeqCst),
        certificate_failures: CERTIFICATE_FAILURES.load(Ordering::SeqCst),
        lex_checked: LEX_CHECKED.load(Ordering::SeqCst),
        lex_mismatches: LEX_MISMATCHES.load(Ordering::SeqCst),
    }
}

pub(super) fn record_certificate(ok: bool) {
    let slot = if ok { &CERTIFIED } else { &CERTIFICATE_FAILURES };
    slot.fetch_add(1, Ordering::Relaxed);
}

pub(super) fn record_lex(ok: bool) {
    LEX_CHECKED.fetch_add(1, Ordering::Relaxed);
    if !ok {
        LEX_MISMATCHES.fetch_add(1, Ordering::Relaxed);
    }
}
