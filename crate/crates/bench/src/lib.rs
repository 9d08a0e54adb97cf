//! Shared fixtures for the benchmarks.

use tpdicke_core::ModelParams;

/// `omega = 1`, `omega1 = 0.5` at the critical coupling.
pub fn critical(n_atoms: usize) -> ModelParams {
    let p = ModelParams::new(1.0, 0.5, 0.0, n_atoms).expect("valid parameters");
    p.with_g(p.g_c()).expect("valid coupling")
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixture_sits_at_gc() {
        let p = super::critical(40);
        assert_eq!(p.g_prime(), 1.0);
    }
}
