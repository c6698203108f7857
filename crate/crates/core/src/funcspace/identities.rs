//! Residuals of the algebraic identities satisfied by H and H̃⁽ⁿ⁾.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;

use super::halfline::HalfLineFunction;
use super::kernel::{hilbert_alpha, piece_transform, piece_transform_derivative, KernelPiece};
use super::line::{LineFunction, Parity};
use crate::error::{OswError, Result};

/// Half-line identities are compared on nodes with w below this bound.
pub const HALF_LINE_WINDOW: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    /// H(fg) = Hf·g + f·Hg + H(Hf·Hg).
    Tricomi,
    /// H(zf)(z) = z·Hf(z) − (1/π)∫f.
    MultipZ,
    /// H((f − f(0))/z) = (Hf − Hf(0))/z.
    DividZ,
    /// H̃_j(tf)(w) = −ζ^{−j}·w·H̃_jf(w) − (1/π)∫f for every nonsingular piece.
    MultByW,
    /// H̃_j(f/t)(w) = −ζ^j·(H̃_jf(w) − H̃_jf(0))/w for f(0) = 0.
    DivByW,
    /// H̃_j(f')(w) = −ζ^j·(H̃_jf)'(w) + ζ^j f(0)/(πw).
    Diff,
    /// H̃(tf')(w) = w·(H̃f)'(w).
    Identity,
}

impl FromStr for IdentityKind {
    type Err = OswError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tricomi" => IdentityKind::Tricomi,
            "multip_z" => IdentityKind::MultipZ,
            "divid_z" => IdentityKind::DividZ,
            "mult_by_w" => IdentityKind::MultByW,
            "div_by_w" => IdentityKind::DivByW,
            "diff" => IdentityKind::Diff,
            "identity" => IdentityKind::Identity,
            other => return Err(OswError::UnknownIdentity(other.to_string())),
        })
    }
}

impl IdentityKind {
    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::Tricomi => "tricomi",
            IdentityKind::MultipZ => "multip_z",
            IdentityKind::DividZ => "divid_z",
            IdentityKind::MultByW => "mult_by_w",
            IdentityKind::DivByW => "div_by_w",
            IdentityKind::Diff => "diff",
            IdentityKind::Identity => "identity",
        }
    }

    fn on_line(self) -> bool {
        matches!(self, IdentityKind::Tricomi | IdentityKind::MultipZ | IdentityKind::DividZ)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Operand<'a> {
    Line(&'a LineFunction),
    Half(&'a HalfLineFunction),
}

/// Sup-norm of left minus right side of the identity `kind`.
pub fn identity_residual(kind: IdentityKind, f: Operand<'_>, g: Option<Operand<'_>>) -> Result<f64> {
    match (kind.on_line(), f) {
        (true, Operand::Line(f)) => {
            let g = match g {
                None => None,
                Some(Operand::Line(g)) => Some(g),
                Some(Operand::Half(_)) => return Err(OswError::Mismatch("line identity given a half-line operand".into())),
            };
            line_residual(kind, f, g)
        }
        (false, Operand::Half(f)) => {
            if let Some(Operand::Half(g)) = g {
                if g.n() != f.n() {
                    return Err(OswError::InvalidAlpha(g.alpha()));
                }
            }
            half_residual(kind, f)
        }
        _ => Err(OswError::Mismatch(format!("operand kind does not fit identity `{}`", kind.name()))),
    }
}

fn sup_excluding(values: &[f64], skip: &[usize]) -> f64 {
    values.iter().enumerate().filter(|(j, _)| !skip.contains(j)).fold(0.0, |m, (_, v)| m.max(v.abs()))
}

fn line_residual(kind: IdentityKind, f: &LineFunction, g: Option<&LineFunction>) -> Result<f64> {
    let hf = f.hilbert()?;
    match kind {
        IdentityKind::Tricomi => {
            let g = g.unwrap_or(f);
            let hg = g.hilbert()?;
            let lhs = f.mul(g)?.hilbert()?;
            let rhs = hf.mul(g)?.add(&f.mul(&hg)?)?.add(&hf.mul(&hg)?.hilbert()?)?;
            Ok(lhs.sub(&rhs)?.sup_norm())
        }
        IdentityKind::MultipZ => {
            let zf = f.map_with_z(f.parity().flip(), |z, v| z * v);
            let lhs = zf.hilbert()?;
            let mass = f.integral() / PI;
            let rhs = hf.map_with_z(hf.parity().flip(), |z, v| z * v - mass);
            let diff: Vec<f64> = lhs.values().iter().zip(rhs.values()).map(|(a, b)| a - b).collect();
            Ok(sup_excluding(&diff, &[0]))
        }
        IdentityKind::DividZ => {
            let o = f.origin_index();
            let f0 = f.values()[o];
            let slope = f.derivative().values()[o];
            let mut q = f.map_with_z(Parity::None, |z, v| (v - f0) / z);
            let mut vals = q.values().to_vec();
            vals[o] = slope;
            let parity = match f.parity() {
                Parity::Odd => Parity::Even,
                Parity::Even => Parity::Odd,
                Parity::None => Parity::None,
            };
            q = q.with_values(vals, parity);
            let lhs = q.hilbert()?;
            let h0 = hf.values()[o];
            let rhs = hf.map_with_z(Parity::None, |z, v| (v - h0) / z);
            let diff: Vec<f64> = lhs.values().iter().zip(rhs.values()).map(|(a, b)| a - b).collect();
            Ok(sup_excluding(&diff, &[0, o]))
        }
        _ => unreachable!("half-line identity routed to the line"),
    }
}

fn windowed_sup(f: &HalfLineFunction, diff: impl Iterator<Item = f64>) -> f64 {
    f.nodes().iter().zip(diff).filter(|(w, _)| **w <= HALF_LINE_WINDOW).fold(0.0, |m, (_, d)| m.max(d.abs()))
}

fn half_residual(kind: IdentityKind, f: &HalfLineFunction) -> Result<f64> {
    let n = f.n();
    let nodes = f.nodes().to_vec();
    if kind == IdentityKind::Identity {
        let lhs = hilbert_alpha(n, &f.euler())?;
        let rhs = hilbert_alpha(n, f)?.euler();
        return Ok(windowed_sup(f, lhs.values().iter().zip(rhs.values()).map(|(a, b)| a - b)));
    }
    let mut worst: f64 = 0.0;
    for piece in KernelPiece::all(n).into_iter().filter(|p| !p.is_singular()) {
        let zeta = piece.zeta();
        let hj = piece_transform(piece, f);
        let residual: Vec<f64> = match kind {
            IdentityKind::MultByW => {
                let tf = f.map_with_w(|w, v| w * v);
                let lhs = piece_transform(piece, &tf);
                let mass = f.integral() / PI;
                (0..nodes.len()).map(|k| (lhs[k] - (-(nodes[k] * hj[k]) / zeta - mass)).norm()).collect()
            }
            IdentityKind::DivByW => {
                let f0 = f.origin_value();
                if f0.abs() > 1e-10 * f.sup_norm().max(1.0) {
                    return Err(OswError::OutOfRange(format!("div_by_w needs f(0) = 0, got {f0:e}")));
                }
                let q = f.map_with_w(|w, v| v / w);
                let lhs = piece_transform(piece, &q);
                // H̃_j f(0) = −(1/π)∫ f/t
                let h0 = Complex64::new(-q.integral() / PI, 0.0);
                (0..nodes.len()).map(|k| (lhs[k] + zeta * (hj[k] - h0) / nodes[k]).norm()).collect()
            }
            IdentityKind::Diff => {
                let f0 = f.origin_value();
                let lhs = piece_transform(piece, &f.derivative());
                let dh = piece_transform_derivative(piece, f)?;
                (0..nodes.len()).map(|k| (lhs[k] - (-zeta * dh[k] + zeta * f0 / (PI * nodes[k]))).norm()).collect()
            }
            _ => unreachable!("line identity routed to the half-line"),
        };
        worst = worst.max(windowed_sup(f, residual.into_iter()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::halfline::HalfLineGrid;

    #[test]
    fn line_identities() {
        let f = LineFunction::from_fn(256, 1.0, Parity::Odd, |x| x / (1.0 + x * x)).unwrap();
        assert!(identity_residual(IdentityKind::Tricomi, Operand::Line(&f), None).unwrap() < 1e-10);
        let g = LineFunction::from_fn(256, 1.0, Parity::Odd, |x| x / (1.0 + x * x).powi(2)).unwrap();
        assert!(identity_residual(IdentityKind::MultipZ, Operand::Line(&g), None).unwrap() < 1e-9);
        let h = LineFunction::from_fn(256, 1.0, Parity::Odd, |x| x.powi(3) / (1.0 + x * x).powi(2)).unwrap();
        assert!(identity_residual(IdentityKind::DividZ, Operand::Line(&h), None).unwrap() < 1e-9);
    }

    #[test]
    fn piece_identities() {
        let grid = HalfLineGrid::shared(96, 1.0);
        for n in [2, 3] {
            let f = HalfLineFunction::from_fn(n, grid.clone(), |w| w / (1.0 + w * w).powi(2)).unwrap();
            for kind in [IdentityKind::MultByW, IdentityKind::DivByW, IdentityKind::Diff, IdentityKind::Identity] {
                let r = identity_residual(kind, Operand::Half(&f), None).unwrap();
                assert!(r < 1e-8, "n={n} {kind:?} {r}");
            }
        }
    }

    #[test]
    fn unknown_and_mismatched() {
        assert!(matches!("bogus".parse::<IdentityKind>(), Err(OswError::UnknownIdentity(_))));
        let grid = HalfLineGrid::shared(32, 1.0);
        let f = HalfLineFunction::from_fn(2, grid.clone(), |w| w / (1.0 + w * w)).unwrap();
        let g = HalfLineFunction::from_fn(3, grid, |w| w / (1.0 + w * w)).unwrap();
        assert!(identity_residual(IdentityKind::Identity, Operand::Half(&f), Some(Operand::Half(&g))).is_err());
        assert!(identity_residual(IdentityKind::Tricomi, Operand::Half(&f), None).is_err());
    }
}
