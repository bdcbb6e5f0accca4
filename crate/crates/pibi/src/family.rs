//! Inequality families written as `constant(N) + Σ_w c_w(N) S_w ≥ 0`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::correlator::{eval_partition_correlators, lds_values, CorrelatorVector, Partition};
use crate::error::{PibiError, Result};
use crate::label::CorrelatorLabel;
use crate::poly::IntPoly;

/// A permutationally invariant Bell inequality whose coefficients are integer
/// polynomials in `N`, all divided by a common positive `denominator`.
///
/// The denominator only exists so that inequalities printed with half-integer
/// coefficients keep their published scale; it is 1 for every family except
/// `I2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRecord", into = "FamilyRecord")]
pub struct InequalityFamily {
    pub name: String,
    pub max_order: u8,
    pub coeffs: BTreeMap<CorrelatorLabel, IntPoly>,
    pub constant: IntPoly,
    pub denominator: u32,
}

impl InequalityFamily {
    pub fn new(name: &str, coeffs: Vec<(CorrelatorLabel, IntPoly)>, constant: IntPoly) -> Self {
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let max_order = coeffs.keys().map(|l| l.order()).max().unwrap_or(1);
        Self {
            name: name.to_string(),
            max_order,
            coeffs,
            constant,
            denominator: 1,
        }
    }

    pub fn with_denominator(mut self, d: u32) -> Self {
        assert!(d > 0);
        self.denominator = d;
        self
    }

    /// Coefficient of `l` evaluated at `n`, as a real number.
    pub fn coeff_f64(&self, l: CorrelatorLabel, n: u32) -> f64 {
        self.coeffs.get(&l).map_or(0.0, |p| p.eval_f64(n as f64)) / self.denominator as f64
    }

    /// The classical bound `β_C^N` (the constant term), as a real number.
    pub fn constant_f64(&self, n: u32) -> f64 {
        self.constant.eval_f64(n as f64) / self.denominator as f64
    }

    /// Coordinates the family lives in: every label up to its order, or only
    /// the even orders for a family built purely from even correlators.
    pub fn ambient_labels(&self) -> Vec<CorrelatorLabel> {
        let all = CorrelatorLabel::all_up_to(self.max_order);
        if self.coeffs.keys().all(|l| l.order() % 2 == 0) {
            all.into_iter().filter(|l| l.order() % 2 == 0).collect()
        } else {
            all
        }
    }

    /// Exact value on an integer correlator vector.
    pub fn eval_exact(&self, v: &CorrelatorVector<i128>) -> Result<Ratio<i128>> {
        let n = v.n_parties as i128;
        let mut acc = self.constant.eval(n);
        for (l, p) in &self.coeffs {
            let s = v
                .get(*l)
                .filter(|_| l.order() <= v.max_order)
                .ok_or_else(|| PibiError::MissingCorrelator(l.to_string()))?;
            acc += p.eval(n) * s;
        }
        Ok(Ratio::new(acc, self.denominator as i128))
    }

    /// Value on a real correlator vector, e.g. one measured on a quantum state.
    pub fn eval(&self, v: &CorrelatorVector<f64>) -> Result<f64> {
        let n = v.n_parties;
        let mut acc = self.constant_f64(n);
        for l in self.coeffs.keys() {
            let s = v
                .get(*l)
                .filter(|_| l.order() <= v.max_order)
                .ok_or_else(|| PibiError::MissingCorrelator(l.to_string()))?;
            acc += self.coeff_f64(*l, n) * s;
        }
        Ok(acc)
    }

    /// Exact value on a partition, times the denominator.
    fn scaled_value(&self, p: Partition, coeffs: &[(usize, i128)], constant: i128) -> i128 {
        let vals = lds_values(p.n() as i128, p.s0() as i128, p.s1() as i128, p.z() as i128);
        constant + coeffs.iter().map(|&(i, c)| c * vals[i]).sum::<i128>()
    }

    fn coefficients_at(&self, n: u32) -> (Vec<(usize, i128)>, i128) {
        let n = n as i128;
        let c = self
            .coeffs
            .iter()
            .map(|(l, p)| (l.index(), p.eval(n)))
            .collect();
        (c, self.constant.eval(n))
    }

    pub fn eval_partition(&self, p: Partition) -> Ratio<i128> {
        self.eval_exact(&eval_partition_correlators(p, self.max_order))
            .expect("partition vectors are complete")
    }
}

/// Outcome of the exhaustive scan at one party number.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub n: u32,
    pub min_value: Ratio<i128>,
    pub argmin: Partition,
    pub pass: bool,
}

/// Report of [`verify_classical_bound`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub family: String,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn first_failure(&self) -> Option<&BoundRow> {
        self.rows.iter().find(|r| !r.pass)
    }
}

/// Minimizes the family over every partition for each `N` in `ns`, exactly.
///
/// Ties for the minimum keep the lexicographically first partition.
pub fn verify_classical_bound(
    f: &InequalityFamily,
    ns: impl IntoIterator<Item = u32>,
) -> BoundReport {
    let rows = ns
        .into_iter()
        .map(|n| {
            let (coeffs, constant) = f.coefficients_at(n);
            let mut best: Option<(i128, Partition)> = None;
            for p in Partition::all(n) {
                let v = f.scaled_value(p, &coeffs, constant);
                if best.map_or(true, |(b, _)| v < b) {
                    best = Some((v, p));
                }
            }
            let (v, argmin) = best.expect("at least one partition");
            BoundRow {
                n,
                min_value: Ratio::new(v, f.denominator as i128),
                argmin,
                pass: v >= 0,
            }
        })
        .collect();
    BoundReport {
        family: f.name.clone(),
        rows,
    }
}

/// JSON wire form: `{name, K, coeffs: {label: [[power, coeff]]}, constant, meta}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub name: String,
    #[serde(rename = "K")]
    pub k: u8,
    pub coeffs: BTreeMap<String, Vec<(u32, i64)>>,
    pub constant: Vec<(u32, i64)>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub denominator: u32,
    #[serde(default)]
    pub meta: serde_json::Map<String, serde_json::Value>,
}

fn one() -> u32 {
    1
}

fn is_one(d: &u32) -> bool {
    *d == 1
}

impl From<InequalityFamily> for FamilyRecord {
    fn from(f: InequalityFamily) -> Self {
        Self {
            name: f.name,
            k: f.max_order,
            coeffs: f
                .coeffs
                .iter()
                .map(|(l, p)| (l.to_string(), p.terms().to_vec()))
                .collect(),
            constant: f.constant.terms().to_vec(),
            denominator: f.denominator,
            meta: Default::default(),
        }
    }
}

impl TryFrom<FamilyRecord> for InequalityFamily {
    type Error = PibiError;

    fn try_from(r: FamilyRecord) -> Result<Self> {
        if r.denominator == 0 {
            return Err(PibiError::Parse {
                what: "inequality",
                detail: "zero denominator".into(),
            });
        }
        let mut coeffs = BTreeMap::new();
        for (name, terms) in &r.coeffs {
            let l: CorrelatorLabel = name.parse()?;
            if l.order() > r.k {
                return Err(PibiError::Parse {
                    what: "inequality",
                    detail: format!("label {l} above K={}", r.k),
                });
            }
            let p = IntPoly::new(terms)?;
            if !p.is_zero() && coeffs.insert(l, p).is_some() {
                return Err(PibiError::Parse {
                    what: "inequality",
                    detail: format!("label {l} listed twice"),
                });
            }
        }
        Ok(Self {
            name: r.name,
            max_order: r.k,
            coeffs,
            constant: IntPoly::new(&r.constant)?,
            denominator: r.denominator,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_catalog, family};
    use crate::label::label;

    #[test]
    fn i2_hand_expansions() {
        let i2 = family("I2");
        for n in 1..30 {
            assert_eq!(
                i2.eval_partition(Partition::new(n, 0, 0, 0)),
                Ratio::from(0)
            );
            assert_eq!(
                i2.eval_partition(Partition::new(0, 0, 0, n)),
                Ratio::from(4 * n as i128)
            );
        }
    }

    #[test]
    fn i3_tight_at_two_parties() {
        assert_eq!(
            family("I3").eval_partition(Partition::new(2, 0, 0, 0)),
            Ratio::from(0)
        );
    }

    #[test]
    fn corrupted_constant_fails_with_witness() {
        let mut bad = family("I3");
        bad.constant = IntPoly::new(&[(2, 12), (1, -12), (0, -1)]).unwrap();
        let report = verify_classical_bound(&bad, [5]);
        let row = report.first_failure().expect("must fail");
        assert_eq!(row.min_value, Ratio::from(-1));
        assert_eq!(bad.eval_partition(row.argmin), Ratio::from(-1));
    }

    #[test]
    fn missing_label_is_reported() {
        let v = eval_partition_correlators(Partition::new(1, 1, 0, 0), 2);
        assert_eq!(
            family("I3").eval_exact(&v),
            Err(PibiError::MissingCorrelator("000".into()))
        );
    }

    #[test]
    fn json_round_trip_for_catalog() {
        for f in builtin_catalog() {
            let text = serde_json::to_string(&f).unwrap();
            let back: InequalityFamily = serde_json::from_str(&text).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn parser_rejects_cubic_and_normalizes_labels() {
        let cubic = r#"{"name":"x","K":2,"coeffs":{"00":[[3,1]]},"constant":[[0,1]]}"#;
        assert!(serde_json::from_str::<InequalityFamily>(cubic).is_err());
        let unsorted = r#"{"name":"x","K":3,"coeffs":{"010":[[0,2]]},"constant":[[0,1]]}"#;
        let f: InequalityFamily = serde_json::from_str(unsorted).unwrap();
        assert_eq!(f.coeffs.get(&label("001")), Some(&IntPoly::constant(2)));
    }

    #[test]
    fn real_and_exact_evaluation_agree() {
        for f in builtin_catalog() {
            for p in Partition::all(6) {
                let v = eval_partition_correlators(p, 4);
                let exact = f.eval_exact(&v).unwrap();
                let real = f.eval(&v.to_f64()).unwrap();
                assert!((real - *exact.numer() as f64 / *exact.denom() as f64).abs() < 1e-9);
            }
        }
    }
}
