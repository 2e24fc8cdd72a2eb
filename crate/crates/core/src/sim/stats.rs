/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// 95% Wilson score interval for `errors` successes in `trials`.
pub fn confidence_interval(errors: u64, trials: u64) -> (f64, f64) {
    assert!(trials >= 1 && errors <= trials, "need 0 <= errors <= trials and trials >= 1");
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}
