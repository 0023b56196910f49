//! Acceptance suite for the turnfold toolkit; see `tests/acceptance.rs`.
