//! From Schur parameters back to the kernel: synthesize the moments, generate
//! the orthonormal family by recursion and certify both against each other.

use crate::error::{Error, Result};
use crate::kernel::{self, MomentSpec, ParamSpec};
use crate::szego::{self, SzegoFamily};

#[derive(Clone, Debug, PartialEq)]
pub struct FavardReport {
    pub moments: MomentSpec,
    pub family: SzegoFamily,
    /// `max |⟨φ_σ, φ_τ⟩ - δ_{στ}|` under the synthesized kernel.
    pub ortho_residual: f64,
    /// `max |γ_σ - γ'_σ|` with `γ'` extracted back from the moments.
    pub param_roundtrip_residual: f64,
}

impl FavardReport {
    pub fn max_residual(&self) -> f64 {
        self.ortho_residual.max(self.param_roundtrip_residual)
    }
}

pub fn favard(p: &ParamSpec, max_len: usize) -> Result<FavardReport> {
    if max_len < 1 {
        return Err(Error::Domain("favard needs max_len >= 1"));
    }
    let moments = kernel::synthesize_moments(p, max_len);
    let family = szego::szego_recursion(p, max_len);
    let ortho_residual = szego::family_orthonormality_residual(&family, &moments);
    let back = kernel::extract_params(&moments, max_len)?;
    let param_roundtrip_residual = back.max_distance(&p.truncated(max_len));
    Ok(FavardReport { moments, family, ortho_residual, param_roundtrip_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::ncpoly::NcPoly;
    use crate::words::Word;

    #[test]
    fn zero_parameters() {
        let rep = favard(&ParamSpec::zero(2), 2).unwrap();
        assert_eq!(rep.moments, MomentSpec::delta(2));
        assert_eq!(rep.ortho_residual, 0.0);
        assert_eq!(rep.param_roundtrip_residual, 0.0);
        for (w, phi) in rep.family.phis() {
            assert_eq!(phi, &NcPoly::monomial(2, w.clone(), C64::new(1.0, 0.0)));
        }
        assert!(favard(&ParamSpec::zero(2), 0).is_err());
    }

    #[test]
    fn worked_parameters() {
        let values = [("1", 0.6), ("2", 0.5), ("11", 0.3), ("12", 0.1), ("21", 0.2), ("22", -0.4), ("111", 0.05)];
        let gamma = values.iter().map(|(s, g)| (Word::parse(s, 2).unwrap(), C64::new(*g, 0.0))).collect();
        let p = ParamSpec::new(2, gamma).unwrap();
        let rep = favard(&p, 2).unwrap();
        assert!(rep.ortho_residual < 1e-10);
        assert!(rep.param_roundtrip_residual < 1e-10);
    }
}
