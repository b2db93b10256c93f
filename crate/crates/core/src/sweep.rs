//! Sweeps over field orders, used by `census --sweep` and the acceptance suite.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::cyclotomy::{decompose, CosetSystem};
use crate::error::Result;
use crate::ffield::Field;
use crate::oracle::Oracle;
use crate::starter::{proof_partition_check, search_beta_pairs, two_quotient_starter, BetaPair};

/// Odd prime powers `q <= max` with `q - 1 = 2^k t`, `k > 1`, `t > 1` odd.
pub fn two_quotient_orders(max: u64) -> Vec<u64> {
    (5..=max).step_by(2).filter(|&q| decompose(q).is_ok()).collect()
}

/// Odd prime powers `7 <= q <= max` with `q = 3 mod 4`.
pub fn dinitz_orders(max: u64) -> Vec<u64> {
    (7..=max)
        .step_by(4)
        .filter(|&q| arith::prime_power(q).is_some())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub q: u64,
    pub p: u64,
    pub m: u32,
    pub k: u32,
    pub t: u64,
    pub beta_pairs: usize,
    pub first: BetaPair,
    /// `verify_starter` says strong.
    pub strong: bool,
    pub partition: bool,
    /// The oracle agrees on the verdict and on the full beta-pair list.
    pub oracle_agrees: bool,
}

impl SurveyRow {
    pub fn passes(&self) -> bool {
        self.strong && self.partition && self.oracle_agrees
    }
}

/// Searches, builds the first starter and checks it three ways.
pub fn survey(q: u64) -> Result<SurveyRow> {
    let field = Field::with_order(q)?;
    let sys = CosetSystem::new(&field)?;
    let pairs = search_beta_pairs(&sys)?;
    let first = pairs[0];
    let starter = two_quotient_starter(&sys, &first)?;
    let report = starter.verify();
    let partition = proof_partition_check(&sys, &first)?.passes();
    let oracle = Oracle::new(&field);
    let oracle_agrees =
        oracle.verify(starter.pairs()).verdict() == report.verdict() && oracle.beta_sweep() == pairs;
    let d = sys.decomposition();
    Ok(SurveyRow {
        q,
        p: field.characteristic(),
        m: field.degree(),
        k: d.k,
        t: d.t,
        beta_pairs: pairs.len(),
        first,
        strong: report.is_strong,
        partition,
        oracle_agrees,
    })
}

/// Surveys each order in parallel; rows come back in input order.
pub fn survey_all(orders: &[u64]) -> Vec<Result<SurveyRow>> {
    orders.par_iter().map(|&q| survey(q)).collect()
}
