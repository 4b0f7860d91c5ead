//! Forcing function of the transient annulus map
//! `(x, y) -> (g(x), y + alpha(x))` with `g(x) = x^2`.

/// `x_0`: the top of the transient region.
pub const X0: f64 = 0.5;
/// `x_1 = g(x_0)`.
pub const X1: f64 = 0.25;
/// Peak of the tent on `(x_1, x_0]`.
pub const X0_PEAK: f64 = 0.375;

/// Level `k >= 1` with `x in (x_k, x_{k-1}]`, together with `g^{-(k-1)}(x)`.
/// `None` for `x in {0} ∪ (x_0, 1]`.
pub fn level(x: f64) -> Option<(u32, f64)> {
    if !(x > 0.0 && x <= X0) {
        return None;
    }
    let (mut k, mut z) = (1u32, x);
    while z <= X1 {
        z = z.sqrt();
        k += 1;
    }
    Some((k, z))
}

fn tent(z: f64) -> f64 {
    (1.0 - 2.0 * (X0_PEAK - z).abs() / (X0 - X1)).max(0.0)
}

/// `alpha(x)`: zero off the transient region, `(1/k) tent(g^{-(k-1)} x)` on level `k`.
pub fn alpha(x: f64) -> f64 {
    match level(x) {
        None => 0.0,
        Some((k, z)) => tent(z) / k as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_outside() {
        for x in [0.0, 0.5000001, 0.75, 1.0] {
            assert_eq!(alpha(x), 0.0, "x = {x}");
        }
    }

    #[test]
    fn peak_and_next_level() {
        assert_eq!(alpha(X0_PEAK), 1.0);
        assert!((alpha(X0_PEAK * X0_PEAK) - 0.5).abs() < 1e-12);
        assert!((alpha(X0_PEAK.powi(4)) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn continuous_at_level_boundaries() {
        for b in [X0, X1, X1 * X1] {
            assert!(alpha(b) < 1e-9);
            assert!(alpha(b * (1.0 + 1e-12)) < 1e-6);
        }
    }

    #[test]
    fn levels() {
        assert_eq!(level(0.3).unwrap().0, 1);
        assert_eq!(level(0.1).unwrap().0, 2);
        assert_eq!(level(0.25).unwrap().0, 2);
        assert_eq!(level(0.01).unwrap().0, 3);
    }
}
