//! JSON form of a certificate, in the same layout as inequality families:
//! `{name, K, coeffs: {label: [[power, coeff]]}, constant, meta}`. A
//! certificate holds for one `N` only, so every coefficient has power 0.
//! Constrained certificates add `combined_third_order`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::membership::Certificate;
use crate::error::{PibiError, Result};
use crate::label::CorrelatorLabel;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombinedThirdOrder {
    pub alpha: f64,
    pub beta: f64,
    /// Coefficient of `⟨S_a³⟩` for unit `(α, β)`.
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub name: String,
    #[serde(rename = "K")]
    pub k: u8,
    pub coeffs: BTreeMap<String, Vec<(u32, f64)>>,
    pub constant: Vec<(u32, f64)>,
    #[serde(default)]
    pub meta: serde_json::Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combined_third_order: Option<CombinedThirdOrder>,
}

impl CertificateRecord {
    pub fn from_certificate(name: &str, c: &Certificate) -> Self {
        let coeffs = c
            .label_coefficients()
            .into_iter()
            .map(|(l, v)| (l.to_string(), vec![(0, v)]))
            .collect();
        let mut meta = serde_json::Map::new();
        meta.insert("N".into(), c.n_parties.into());
        meta.insert("lambda_star".into(), c.lambda_star.into());
        meta.insert("value_at_point".into(), c.value_at_point.into());
        meta.insert("min_vertex_value".into(), c.min_vertex_value.into());
        meta.insert("coefficients".into(), c.coefficients().into());
        let combined_third_order = c.weights.and_then(|w| {
            let coefficient = c.terms.last()?.coefficient;
            Some(CombinedThirdOrder {
                alpha: w.alpha,
                beta: w.beta,
                coefficient,
            })
        });
        Self {
            name: name.into(),
            k: 3,
            coeffs,
            constant: vec![(0, c.constant)],
            meta,
            combined_third_order,
        }
    }

    fn eval_poly(terms: &[(u32, f64)], n: f64) -> f64 {
        terms.iter().map(|&(p, c)| c * n.powi(p as i32)).sum()
    }

    /// `(constant, [(label, coefficient)])` at party number `n`.
    pub fn functional(&self, n_parties: u32) -> Result<(f64, Vec<(CorrelatorLabel, f64)>)> {
        let n = n_parties as f64;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (name, terms) in &self.coeffs {
            let l: CorrelatorLabel = name.parse()?;
            if l.order() > self.k {
                return Err(PibiError::Parse {
                    what: "certificate",
                    detail: format!("label {l} above K={}", self.k),
                });
            }
            out.push((l, Self::eval_poly(terms, n)));
        }
        Ok((Self::eval_poly(&self.constant, n), out))
    }
}
