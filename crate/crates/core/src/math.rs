//! Small numeric helpers shared across modules.

use statrs::function::factorial::ln_factorial;

/// `ln(sum(exp(x)))` with the max term factored out.
///
/// Returns negative infinity for an empty slice or when every entry is
/// negative infinity.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Index of the largest entry; ties resolve to the lowest index.
///
/// NaN entries never win. An empty slice returns 0.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

/// `ln(l! / prod(x_k!))` for a count vector summing to `l`.
pub fn ln_multinomial_coefficient<I>(counts: I) -> f64
where
    I: IntoIterator<Item = u64>,
{
    let mut total = 0u64;
    let mut denom = 0.0;
    for c in counts {
        total += c;
        denom += ln_factorial(c);
    }
    ln_factorial(total) - denom
}
