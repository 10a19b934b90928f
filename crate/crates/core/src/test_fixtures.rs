//! Frozen pilot-run constants used by the unit tests. Produced once by the
//! calibrate pipeline (seeded, deterministic) and committed; regenerate with
//! `gegenbauer calibrate` if grids or defaults change.

/// Q^λ_γ(ch t) at (λ = 0.25, γ = 1.5, t = 0.5) from the two-reference
/// quotient pipeline.
pub const Q_VALUE_LAMBDA25_G15_T05: f64 = 1.262_128;

/// Empirical constant of the kernel bound on the corpus (λ = 0.25,
/// α = 0.5), with 5% headroom.
pub const C56_KERNEL_BOUND: f64 = 0.0;

/// Sobolev ratio ceiling on the corpus (λ = 0.25, α = 0.5, p = 2), with
/// 5% headroom.
pub const C_SOBOLEV: f64 = 0.0;
