//! Acceptance checks for `ising-fidelity` live in `tests/acceptance.rs`;
//! run them with `cargo test -p ising-fidelity-validation --test acceptance`.
