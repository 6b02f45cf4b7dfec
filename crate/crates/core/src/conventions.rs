//! The conventions ledger: every sign and `q`-power choice the engine makes,
//! in one serializable record so that reports can be reproduced.

use serde::{Deserialize, Serialize};

use crate::cartan::FlagSpec;
use crate::error::Result;
use crate::fibercalc::default_shat_normalization;
use crate::podles::Calculus;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationEntry {
    pub flag: String,
    pub shat_normalization: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub scalar_field: String,
    pub k_action: String,
    pub coproduct: Vec<String>,
    pub antipode_dual: Vec<String>,
    pub left_action_recovery: String,
    pub braiding: Vec<String>,
    pub shat: String,
    pub shat_normalizations: Vec<NormalizationEntry>,
    pub podles_relations: Vec<String>,
    pub normal_basis: String,
    pub grading: String,
    pub generator_actions: Vec<String>,
    pub calculus: Vec<String>,
    pub calculus_constants: Calculus,
    pub metric: Vec<String>,
    pub ricci: Vec<String>,
}

/// Flags listed in the normalization table.
pub const TABULATED_FLAGS: [&str; 5] = ["A1:1", "A2:1", "A2:2", "A3:1", "A3:2"];

impl Conventions {
    /// The ledger for this build, with the calculus constants solved afresh.
    pub fn current() -> Result<Self> {
        let calculus_constants = Calculus::solve()?;
        let shat_normalizations = TABULATED_FLAGS
            .iter()
            .map(|f| {
                let flag: FlagSpec = f.parse()?;
                Ok(NormalizationEntry { flag: f.to_string(), shat_normalization: default_shat_normalization(&flag) })
            })
            .collect::<Result<_>>()?;
        let l = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        Ok(Self {
            scalar_field: "Q(s), s = q^(1/2)".into(),
            k_action: "K_i acts on a weight vector of weight λ by q^(d_i λ_i)".into(),
            coproduct: l(&["Δ(K_i) = K_i ⊗ K_i", "Δ(E_i) = E_i ⊗ K_i + 1 ⊗ E_i", "Δ(F_i) = F_i ⊗ 1 + K_i^-1 ⊗ F_i"]),
            antipode_dual: l(&[
                "E_i on M* is (-E_i K_i^-1)^T",
                "F_i on M* is (-K_i F_i)^T",
                "weights of M* are the negated weights of M",
            ]),
            left_action_recovery: "a left action built with the opposite coproduct is obtained by composing \
                                   with the flip M ⊗ N -> N ⊗ M"
                .into(),
            braiding: l(&[
                "R = flip ∘ q^(wt ⊗ wt) ∘ Θ, Θ = ordered product over positive roots of the acting algebra",
                "Θ_β = Σ_n q^(n(n-1)/2) (q - q^-1)^n / [n]! E_β^n ⊗ F_β^n",
                "E_(i,j+1) = E_(i,j) E_j - q^-1 E_j E_(i,j), F_(i,j+1) = F_j F_(i,j) - q F_(i,j) F_j",
                "supported when every weight pairing (wt m, wt n) is a half-integer",
            ]),
            shat: "Ŝ = normalization · braiding on V(1,0) ⊗ V(0,1); classical limit must be the flip".into(),
            shat_normalizations,
            podles_relations: l(&[
                "ab = q ba",
                "ac = q ca",
                "bc = cb",
                "bd = q db",
                "cd = q dc",
                "ad - da = (q - q^-1) bc",
                "ad - q bc = 1",
            ]),
            normal_basis: "a^i b^j c^k and d^i b^j c^k".into(),
            grading: "deg a = deg c = +1, deg b = deg d = -1; B is generated by ab, cb, cd".into(),
            generator_actions: l(&[
                "E ▷ a = b, E ▷ c = d, E ▷ b = E ▷ d = 0",
                "F ▷ b = a, F ▷ d = c, F ▷ a = F ▷ c = 0",
                "K ▷ x = q^(-deg x) x",
                "E ▷ (xy) = (E ▷ x)(K ▷ y) + x (E ▷ y)",
                "F ▷ (xy) = (F ▷ x) y + (K^-1 ▷ x)(F ▷ y)",
            ]),
            calculus: l(&[
                "d b = (E ▷ b) ω+ + (F ▷ b) ω-",
                "d(x ω+) = -c+ ŝ^-1 (F ▷ x) ω+∧ω-",
                "d(y ω-) = c- (E ▷ y) ω+∧ω-",
                "ω-∧ω+ = -ŝ^-1 ω+∧ω-, ω+∧ω+ = ω-∧ω- = 0",
                "frame symbols commute with coefficients",
            ]),
            calculus_constants,
            metric: l(&["g+- = ω+ ⊗ ω-", "g-+ = ŝ ω- ⊗ ω+", "g = g+- + g-+"]),
            ricci: l(&[
                "Ricci_ℓ = ((·,·) ⊗ id)(id ⊗ ℓ ⊗ id)(id ⊗ R)(g)",
                "Ricci for s+- = a · g-+",
                "Ricci for s-+ = b · g+-",
            ]),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self).expect("ledger serializes"))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let c = Conventions::current().unwrap();
        let s = c.to_json().unwrap();
        assert_eq!(Conventions::from_json(&s).unwrap(), c);
        assert!(s.contains("Δ(E_i) = E_i ⊗ K_i + 1 ⊗ E_i"));
        assert!(c.podles_relations.iter().any(|r| r == "ad - q bc = 1"));
    }
}
