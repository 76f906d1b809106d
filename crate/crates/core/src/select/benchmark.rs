//! Published fits of the five models to the ball-bearing data, kept for
//! reproduction checks and the discrepancy notes attached to comparisons.

use crate::dist::{Dataset, ModelKind, ParamVector};
use crate::estimation::log_likelihood;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub kind: ModelKind,
    pub params: &'static [f64],
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub ks_d: f64,
    pub p_value: f64,
}

pub const PUBLISHED: [PublishedRow; 5] = [
    PublishedRow {
        kind: ModelKind::Pgduse,
        params: &[0.03362141, 3.80657627],
        log_likelihood: -113.003,
        aic: 230.006,
        bic: 232.277,
        ks_d: 0.11025,
        p_value: 0.9425,
    },
    PublishedRow {
        kind: ModelKind::Gduse,
        params: &[4.73914452, 0.03553247],
        log_likelihood: -113.0466,
        aic: 230.0931,
        bic: 232.3641,
        ks_d: 0.11793,
        p_value: 0.9064,
    },
    PublishedRow {
        kind: ModelKind::Duse,
        params: &[0.01824005],
        log_likelihood: -127.4622,
        aic: 256.9244,
        bic: 261.1954,
        ks_d: 0.2774,
        p_value: 0.05804,
    },
    PublishedRow {
        kind: ModelKind::Kme,
        params: &[0.009544456],
        log_likelihood: -123.1065,
        aic: 248.2129,
        bic: 252.4839,
        ks_d: 0.31102,
        p_value: 0.02337,
    },
    PublishedRow {
        kind: ModelKind::Ed,
        params: &[0.01384327],
        log_likelihood: -121.4393,
        aic: 244.8786,
        bic: 246.0141,
        ks_d: 0.30673,
        p_value: 0.02639,
    },
];

pub fn published(kind: ModelKind) -> &'static PublishedRow {
    PUBLISHED
        .iter()
        .find(|r| r.kind == kind)
        .expect("every model has a published row")
}

/// Notes on published values that this implementation deliberately does
/// not reproduce. Only meaningful for the benchmark data.
pub fn discrepancy_notes(data: &Dataset, kinds: &[ModelKind]) -> Vec<String> {
    if data.sorted() != Dataset::lawless().sorted() {
        return Vec::new();
    }
    let mut notes = Vec::new();
    if kinds.contains(&ModelKind::Duse) {
        let row = published(ModelKind::Duse);
        let p = ParamVector::new(ModelKind::Duse, row.params).expect("published estimate is positive");
        notes.push(format!(
            "DUSE log-likelihood: the published estimate a = {} gives logL = {:.4}, not the published {}; \
             the published DUSE logL, AIC and BIC are not reproduced.",
            row.params[0],
            log_likelihood(&p, data),
            row.log_likelihood
        ));
    }
    let one_param: Vec<&str> = [ModelKind::Duse, ModelKind::Kme]
        .iter()
        .filter(|k| kinds.contains(k))
        .map(|k| k.tag())
        .collect();
    if !one_param.is_empty() {
        notes.push(format!(
            "{} BIC: published values use k = 2 for a one-parameter model; BIC here uses k = 1 \
             and is lower by ln({}) = {:.4} at equal logL.",
            one_param.join("/"),
            data.n(),
            (data.n() as f64).ln()
        ));
    }
    notes
}
