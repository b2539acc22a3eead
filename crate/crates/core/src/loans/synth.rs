//! Synthetic loan-level data with a controlled default mechanism.
//!
//! Defaults follow a latent logistic model: each row gets
//! `eta = strength * sum_j weight_j * z_j` over the standardized signal
//! columns, plus standard logistic noise, and the `round(ratio * rows)` rows
//! with the largest latent value default. Conditional on the features this is
//! `P(default) = sigmoid(eta - tau)` for the data-determined cut `tau`, with the
//! positive count pinned exactly.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Column, LoanDataset};
use crate::error::{Error, Result};
use crate::feature::FeatureId;
use crate::rng::{self, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalTerm {
    pub feature: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub rows: usize,
    pub positive_ratio: f64,
    pub signal: Vec<SignalTerm>,
    pub signal_strength: f64,
    /// Extra pure-noise numeric columns named `aux01`, `aux02`, ...
    pub noise_features: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        let term = |f: &str, w: f64| SignalTerm {
            feature: String::from(f),
            weight: w,
        };
        GeneratorConfig {
            rows: 20_000,
            positive_ratio: 0.00175,
            signal: vec![
                term("creditScore", -1.0),
                term("currentLoanDelinquencyStatus", 1.0),
                term("CLTVoriginal", 0.7),
                term("UPBactual", 0.5),
                term("UPBoriginal", -0.5),
            ],
            signal_strength: 3.0,
            noise_features: 32,
        }
    }
}

const STATES: &[&str] = &[
    "CA", "TX", "FL", "NY", "IL", "PA", "OH", "GA", "NC", "MI", "NJ", "VA", "WA", "AZ", "MA",
    "TN", "IN", "MO", "MD", "CO",
];
const PROPERTY_TYPES: &[(&str, f64)] = &[("SF", 0.7), ("PU", 0.15), ("CO", 0.1), ("MH", 0.03), ("CP", 0.02)];

/// Number of positives the generator emits for `rows` and `ratio`.
pub fn positive_count(rows: usize, ratio: f64) -> usize {
    (libm::floor(ratio * rows as f64 + 0.5) as usize).min(rows)
}

pub fn generate_synthetic(config: &GeneratorConfig, seed: u64) -> Result<LoanDataset> {
    let ratio = config.positive_ratio;
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::arg(format!("positive_ratio must lie in (0, 1), got {ratio}")));
    }
    if config.rows < 4 {
        return Err(Error::arg("rows must be at least 4"));
    }
    if !config.signal_strength.is_finite() {
        return Err(Error::arg("signal_strength must be finite"));
    }
    let n = config.rows;
    let mut r = rng::stream(seed, 0);
    let mut cols: Vec<Column> = Vec::new();
    let num = |name: &str, values: Vec<f64>, cols: &mut Vec<Column>| {
        cols.push(Column::numeric(FeatureId::new(name), values));
    };

    let credit: Vec<f64> = (0..n).map(|_| round(clamp(normal(&mut r, 740.0, 50.0), 300.0, 850.0), 0)).collect();
    let credit_orig: Vec<f64> = credit
        .iter()
        .map(|c| round(clamp(c + normal(&mut r, 0.0, 15.0), 300.0, 850.0), 0))
        .collect();
    let coborrower: Vec<f64> = (0..n)
        .map(|_| {
            if r.random::<f64>() < 0.45 {
                f64::NAN
            } else {
                round(clamp(normal(&mut r, 735.0, 55.0), 300.0, 850.0), 0)
            }
        })
        .collect();
    let ltv_orig: Vec<f64> = (0..n).map(|_| round(clamp(normal(&mut r, 76.0, 14.0), 5.0, 105.0), 0)).collect();
    let ltv: Vec<f64> = ltv_orig
        .iter()
        .map(|l| round(clamp(l * uniform(&mut r, 0.75, 1.05), 1.0, 130.0), 1))
        .collect();
    let cltv_orig: Vec<f64> = ltv_orig
        .iter()
        .map(|l| round(l + libm::fabs(normal(&mut r, 0.0, 4.0)), 0))
        .collect();
    let cltv: Vec<f64> = ltv.iter().map(|l| round(l + libm::fabs(normal(&mut r, 0.0, 4.0)), 1)).collect();
    let rate_orig: Vec<f64> = (0..n).map(|_| round(clamp(normal(&mut r, 4.5, 0.8), 1.5, 9.5), 3)).collect();
    let rate_cur: Vec<f64> = rate_orig
        .iter()
        .map(|x| round(clamp(x + normal(&mut r, 0.0, 0.15), 1.0, 10.0), 3))
        .collect();
    let upb_orig: Vec<f64> = (0..n)
        .map(|_| round(libm::exp(normal(&mut r, 12.2, 0.5)) / 1000.0, 0) * 1000.0)
        .collect();
    let upb_act: Vec<f64> = upb_orig
        .iter()
        .map(|u| round(u * uniform(&mut r, 0.55, 1.0), 2))
        .collect();
    let dti: Vec<f64> = (0..n).map(|_| round(clamp(normal(&mut r, 35.0, 9.0), 1.0, 65.0), 0)).collect();
    let age: Vec<f64> = (0..n).map(|_| r.random_range(0..=120u32) as f64).collect();
    let borrowers: Vec<f64> = (0..n).map(|_| if r.random::<f64>() < 0.5 { 1.0 } else { 2.0 }).collect();
    let units: Vec<f64> = (0..n)
        .map(|_| pick(&mut r, &[(1.0, 0.9), (2.0, 0.06), (3.0, 0.02), (4.0, 0.02)]))
        .collect();
    let delinquency: Vec<f64> = (0..n)
        .map(|_| {
            if r.random::<f64>() < 0.9 {
                0.0
            } else {
                r.random_range(1..=6u32) as f64
            }
        })
        .collect();
    let term: Vec<f64> = (0..n).map(|_| pick(&mut r, &[(360.0, 0.8), (180.0, 0.15), (240.0, 0.05)])).collect();

    num("creditScore", credit, &mut cols);
    num("creditScoreOriginal", credit_orig, &mut cols);
    num("creditScoreCoborrower", coborrower, &mut cols);
    num("LTV", ltv, &mut cols);
    num("LTVoriginal", ltv_orig, &mut cols);
    num("CLTV", cltv, &mut cols);
    num("CLTVoriginal", cltv_orig, &mut cols);
    num("interestRateOriginal", rate_orig, &mut cols);
    num("interestRateCurrent", rate_cur, &mut cols);
    num("UPBoriginal", upb_orig, &mut cols);
    num("UPBactual", upb_act, &mut cols);
    num("debtToIncomeRatioOriginal", dti, &mut cols);
    num("loanAge", age, &mut cols);
    num("numberOfBorrowers", borrowers, &mut cols);
    num("numberOfUnits", units, &mut cols);
    num("currentLoanDelinquencyStatus", delinquency, &mut cols);
    num("loanTermOriginal", term, &mut cols);

    let states: Vec<&str> = (0..n).map(|_| STATES[r.random_range(0..STATES.len())]).collect();
    let zips: Vec<String> = (0..n).map(|_| format!("{:03}", 100 + r.random_range(0..60u32) * 13)).collect();
    let ptypes: Vec<&str> = (0..n)
        .map(|_| {
            let u: f64 = r.random();
            let mut acc = 0.0;
            PROPERTY_TYPES
                .iter()
                .find(|(_, p)| {
                    acc += p;
                    u < acc
                })
                .map_or("SF", |(t, _)| *t)
        })
        .collect();
    let ppm: Vec<&str> = (0..n).map(|_| if r.random::<f64>() < 0.03 { "Y" } else { "N" }).collect();
    cols.push(Column::categorical(FeatureId::new("propertyState"), states.iter().map(|s| Some(*s))));
    cols.push(Column::categorical(FeatureId::new("postalCode"), zips.iter().map(|s| Some(s.as_str()))));
    cols.push(Column::categorical(FeatureId::new("propertyType"), ptypes.iter().map(|s| Some(*s))));
    cols.push(Column::categorical(FeatureId::new("productType"), (0..n).map(|_| Some("FRM"))));
    cols.push(Column::categorical(
        FeatureId::new("prepaymentPenaltyMortgageFlag"),
        ppm.iter().map(|s| Some(*s)),
    ));

    for k in 0..config.noise_features {
        let values = (0..n).map(|_| round(normal(&mut r, 0.0, 1.0), 4)).collect();
        num(&format!("aux{:02}", k + 1), values, &mut cols);
    }

    let mut eta = vec![0.0; n];
    for term in &config.signal {
        let id = FeatureId::new(&term.feature);
        let col = cols
            .iter()
            .find(|c| c.name == id)
            .ok_or_else(|| Error::arg(format!("signal feature {id} is not generated")))?;
        if col.kind != super::ColumnKind::Numeric {
            return Err(Error::arg(format!("signal feature {id} must be numeric")));
        }
        let z = standardize(&col.values);
        for (e, zi) in eta.iter_mut().zip(z) {
            *e += config.signal_strength * term.weight * zi;
        }
    }
    let mut noise_rng = rng::stream(seed, 1);
    let latent: Vec<f64> = eta
        .iter()
        .map(|e| {
            let u = noise_rng.random::<f64>().clamp(1e-12, 1.0 - 1e-12);
            e + libm::log(u / (1.0 - u))
        })
        .collect();
    let k = positive_count(n, ratio);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| latent[b].total_cmp(&latent[a]).then(a.cmp(&b)));
    let mut target = vec![0u8; n];
    for &i in &order[..k] {
        target[i] = 1;
    }
    LoanDataset::new(cols, target, (0..n as u64).collect())
}

fn standardize(values: &[f64]) -> Vec<f64> {
    let present: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    let n = present.len().max(1) as f64;
    let mean = present.iter().sum::<f64>() / n;
    let var = present.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = if var > 0.0 { libm::sqrt(var) } else { 1.0 };
    values
        .iter()
        .map(|v| if v.is_nan() { 0.0 } else { (v - mean) / sd })
        .collect()
}

fn normal(r: &mut Rng, mean: f64, sd: f64) -> f64 {
    // Box-Muller, one draw per call
    let u1 = r.random::<f64>().max(1e-300);
    let u2 = r.random::<f64>();
    mean + sd * libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

fn uniform(r: &mut Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * r.random::<f64>()
}

fn pick(r: &mut Rng, table: &[(f64, f64)]) -> f64 {
    let u: f64 = r.random();
    let mut acc = 0.0;
    for (v, p) in table {
        acc += p;
        if u < acc {
            return *v;
        }
    }
    table[table.len() - 1].0
}

fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    v.clamp(lo, hi)
}

fn round(v: f64, digits: i32) -> f64 {
    let s = libm::pow(10.0, digits as f64);
    libm::round(v * s) / s
}
