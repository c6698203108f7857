//! The majorant sequence ζ̄_k = Σ_{j=1}^{k−1} ζ̄_j ζ̄_{k−j}.

/// ζ̄_1..ζ̄_len from the quadratic recursion.
pub fn majorant_sequence(zeta1: f64, len: usize) -> Vec<f64> {
    let mut z = Vec::with_capacity(len);
    for k in 1..=len {
        if k == 1 {
            z.push(zeta1);
        } else {
            let s: f64 = (1..k).map(|j| z[j - 1] * z[k - j - 1]).sum();
            z.push(s);
        }
    }
    z
}

/// The majorant and the radius 1/(4ζ̄₁) of its generating function
/// (1 − √(1 − 4ζ̄₁x))/2.
pub fn majorant_radius(zeta1: f64, len: usize) -> (Vec<f64>, f64) {
    (majorant_sequence(zeta1, len), 0.25 / zeta1)
}

/// Catalan number C_k.
pub fn catalan(k: u32) -> u64 {
    (0..k).fold(1u64, |c, i| c * 2 * (2 * i as u64 + 1) / (i as u64 + 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_coefficients() {
        let z1 = 0.7;
        let (z, r) = majorant_radius(z1, 10);
        for (k, v) in z.iter().enumerate() {
            let expect = catalan(k as u32) as f64 * z1.powi(k as i32 + 1);
            assert!((v - expect).abs() <= 1e-14 * expect);
        }
        assert_eq!(catalan(3), 5);
        assert!((majorant_radius(1.0, 2).1 - 0.25).abs() < 1e-15);
        assert!((r - 0.25 / 0.7).abs() < 1e-15);
    }
}
