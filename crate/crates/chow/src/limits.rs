//! Resource limits and reproducibility knobs, threaded through the heavy
//! computations. Every randomized fast path draws from a generator seeded
//! here, so a fixed config gives byte-identical runs.

/// Caps and seeds for one job. The defaults are the desk-scale settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Limits {
    /// Buchberger pair-queue cap; exceeding it aborts with `ResourceLimit`.
    pub pair_cap: usize,
    /// Univariate factorization degree bound.
    pub factor_degree_cap: usize,
    /// Iterated-quotient cap for saturation.
    pub saturation_cap: usize,
    /// Quantifier nesting bound for sentence evaluation.
    pub quantifier_depth_cap: usize,
    /// Largest prime admitted for brute-force sentence evaluation.
    pub prime_eval_cap: u64,
    /// Exception-set cap for cofinite verdicts.
    pub exception_cap: usize,
    /// Primes above this bound never count as "small" exceptions.
    pub small_prime_bound: u64,
    /// Trials for substitution-based irreducibility certificates.
    pub substitution_trials: usize,
    /// Safety cap on local-length filtration steps.
    pub length_cap: usize,
    /// Seed for all randomized-but-reproducible choices.
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            pair_cap: 200_000,
            factor_degree_cap: 12,
            saturation_cap: 50,
            quantifier_depth_cap: 3,
            prime_eval_cap: 499,
            exception_cap: 3,
            small_prime_bound: 50,
            substitution_trials: 24,
            length_cap: 64,
            seed: 0x5eed_c0de,
        }
    }
}

impl Limits {
    /// Defaults with a different seed.
    pub fn with_seed(seed: u64) -> Self {
        Limits {
            seed,
            ..Limits::default()
        }
    }
}
