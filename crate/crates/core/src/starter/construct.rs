use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Pair, Provenance, Starter};
use crate::cyclotomy::{BlockLabel, CosetSystem};
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};

/// A candidate `(beta1, beta2)` with `beta1` in `NQR(q)` and `beta2` in
/// `beta1 * Chat_0`, plus the two product conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BetaPair {
    pub beta1: FieldElement,
    pub beta2: FieldElement,
    /// `(beta1 - 1)(beta2 + 1)` is a non-residue.
    pub cond_minus_plus: bool,
    /// `(beta1 + 1)(beta2 - 1)` is a non-residue.
    pub cond_plus_minus: bool,
}

impl BetaPair {
    pub fn is_valid(&self) -> bool {
        self.cond_minus_plus && self.cond_plus_minus
    }
}

fn conditions(sys: &CosetSystem, beta1: FieldElement, beta2: FieldElement) -> BetaPair {
    let f = sys.field();
    let one = FieldElement::ONE;
    let nqr = |x: FieldElement| f.quadratic_character(x) == -1;
    BetaPair {
        beta1,
        beta2,
        cond_minus_plus: nqr(f.mul(f.sub(beta1, one), f.add(beta2, one))),
        cond_plus_minus: nqr(f.mul(f.add(beta1, one), f.sub(beta2, one))),
    }
}

/// Evaluates both residuosity flags after checking the memberships
/// `beta1 in NQR(q)` and `beta2 in beta1 * Chat_0`.
pub fn beta_pair_conditions(
    sys: &CosetSystem,
    beta1: FieldElement,
    beta2: FieldElement,
) -> Result<BetaPair> {
    let f = sys.field();
    if sys.coset_of(beta1)? != BlockLabel::Nqr {
        return Err(Error::NotNonResidue(beta1));
    }
    let beta2 = f.check(beta2)?;
    if beta2.is_zero() || sys.coset_of(f.div(beta2, beta1)?)? != BlockLabel::CHat(0) {
        return Err(Error::NotInBetaCoset { beta1, beta2 });
    }
    Ok(conditions(sys, beta1, beta2))
}

/// All valid ordered pairs, sorted by `(beta1, beta2)`.
///
/// Candidates `beta1` are scanned in parallel; the merge is by index, so the
/// output does not depend on the thread count.
pub fn search_beta_pairs(sys: &CosetSystem) -> Result<Vec<BetaPair>> {
    let f = sys.field();
    let (_, nqr) = f.residue_sets();
    let c_hat0 = sys.c_hat(0);
    let per_beta1: Vec<Vec<BetaPair>> = nqr
        .par_iter()
        .map(|&beta1| {
            let mut found: Vec<BetaPair> = c_hat0
                .iter()
                .map(|&y| conditions(sys, beta1, f.mul(beta1, y)))
                .filter(BetaPair::is_valid)
                .collect();
            found.sort();
            found
        })
        .collect();
    let all: Vec<BetaPair> = per_beta1.into_iter().flatten().collect();
    if all.is_empty() {
        return Err(Error::TheoremViolation(format!(
            "no valid beta pair for q = {}",
            f.order()
        )));
    }
    Ok(all)
}

/// `(b1, b2), (b2, b1), (-b1, -b2), (-b2, -b1)`, each re-evaluated.
pub fn symmetric_variants(sys: &CosetSystem, bp: &BetaPair) -> Result<[BetaPair; 4]> {
    let f = sys.field();
    let (b1, b2) = (bp.beta1, bp.beta2);
    let (n1, n2) = (f.neg(b1), f.neg(b2));
    Ok([
        beta_pair_conditions(sys, b1, b2)?,
        beta_pair_conditions(sys, b2, b1)?,
        beta_pair_conditions(sys, n1, n2)?,
        beta_pair_conditions(sys, n2, n1)?,
    ])
}

/// `S(beta1, beta2) = { {x, beta1 x}, {y, -beta2 y} : x in C_j, y in Chat_j }`
/// over all block indices `j`.
pub fn two_quotient_starter(sys: &CosetSystem, bp: &BetaPair) -> Result<Starter> {
    let f = sys.field();
    let checked = beta_pair_conditions(sys, bp.beta1, bp.beta2)?;
    let (b1, b2) = (checked.beta1, checked.beta2);
    if !checked.is_valid() {
        return Err(Error::InvalidBetaPair {
            beta1: b1,
            beta2: b2,
        });
    }
    let minus_b2 = f.neg(b2);
    if b1 == FieldElement::ONE || b2 == f.minus_one() {
        return Err(Error::DegenerateBetaPair(
            "beta1 - 1 or beta2 + 1 vanishes".into(),
        ));
    }
    if b1 == b2 || b1 == minus_b2 {
        return Err(Error::DegenerateBetaPair(format!(
            "beta1 = {b1} coincides with beta2 or -beta2"
        )));
    }
    let n = sys.decomposition().delta1 as usize;
    let mut pairs = Vec::with_capacity((f.order() as usize - 1) / 2);
    for j in 0..n {
        pairs.extend(sys.c(j).iter().map(|&x| Pair::new(x, f.mul(b1, x))));
        pairs.extend(sys.c_hat(j).iter().map(|&y| Pair::new(y, f.mul(minus_b2, y))));
    }
    Ok(Starter::new(
        f.clone(),
        pairs,
        Provenance::TwoQuotient {
            beta1: b1,
            beta2: b2,
        },
    ))
}

/// The one-quotient starter `{ {a, a beta} : a in QR(q) }` for `q = 3 mod 4`.
pub fn dinitz_starter(field: &Field, beta: FieldElement) -> Result<Starter> {
    let q = field.order();
    if q % 4 != 3 {
        return Err(Error::NotThreeModFour { q });
    }
    if q == 3 {
        return Err(Error::DinitzQThree);
    }
    if field.is_quadratic_residue(beta)? {
        return Err(Error::NotNonResidue(beta));
    }
    if beta == field.minus_one() {
        return Err(Error::BetaMinusOne);
    }
    let g = field.least_primitive_element();
    let alpha = field.mul(g, g);
    let mut a = FieldElement::ONE;
    let pairs = (0..(q - 1) / 2)
        .map(|_| {
            a = field.mul(a, alpha);
            Pair::new(a, field.mul(a, beta))
        })
        .collect();
    Ok(Starter::new(field.clone(), pairs, Provenance::Dinitz { beta }))
}

/// Smallest witnesses `b1 < b2` in `beta * Chat_0` for both product variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetPairWitnesses {
    /// `(b1 - 1)(b2 - 1)` is a non-residue.
    pub minus: (FieldElement, FieldElement),
    /// `(b1 + 1)(b2 + 1)` is a non-residue.
    pub plus: (FieldElement, FieldElement),
}

pub fn coset_pair_witnesses(sys: &CosetSystem, beta: FieldElement) -> Result<CosetPairWitnesses> {
    let f = sys.field();
    if sys.coset_of(beta)? != BlockLabel::Nqr {
        return Err(Error::NotNonResidue(beta));
    }
    let mut coset: Vec<FieldElement> = sys.c_hat(0).iter().map(|&y| f.mul(beta, y)).collect();
    coset.sort();
    let find = |shift: fn(&Field, FieldElement, FieldElement) -> FieldElement, what: &str| {
        let chi: Vec<i8> = coset
            .iter()
            .map(|&b| f.quadratic_character(shift(f, b, FieldElement::ONE)))
            .collect();
        for i in 0..coset.len() {
            for j in i + 1..coset.len() {
                // a product is a non-residue iff exactly one factor is
                if chi[i] * chi[j] == -1 {
                    return Ok((coset[i], coset[j]));
                }
            }
        }
        Err(Error::TheoremViolation(format!(
            "no pair in {beta} * Chat_0 with {what} in NQR({})",
            f.order()
        )))
    };
    Ok(CosetPairWitnesses {
        minus: find(Field::sub, "(b1-1)(b2-1)")?,
        plus: find(Field::add, "(b1+1)(b2+1)")?,
    })
}
