//! The construction's own correctness argument, run as executable checks.

use std::collections::BTreeSet;
use std::fmt;

use super::construct::{beta_pair_conditions, two_quotient_starter, BetaPair};
use super::Pair;
use crate::cyclotomy::{BlockLabel, CosetSystem};
use crate::error::{Error, Result};
use crate::ffield::FieldElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProofBlock {
    /// `{±x(beta1 - 1) : x in C_j}`
    E(u32),
    /// `{±y(beta2 + 1) : y in Chat_j}`
    EStar(u32),
    /// `{x(beta1 + 1) : x in C_j}`
    P(u32),
    /// `{-y(beta2 - 1) : y in Chat_j}`
    PStar(u32),
}

impl fmt::Display for ProofBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofBlock::E(j) => write!(f, "E_{j}"),
            ProofBlock::EStar(j) => write!(f, "E*_{j}"),
            ProofBlock::P(j) => write!(f, "P_{j}"),
            ProofBlock::PStar(j) => write!(f, "P*_{j}"),
        }
    }
}

/// An element produced twice, by the named blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Collision {
    pub element: FieldElement,
    pub first: ProofBlock,
    pub second: ProofBlock,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    /// Sizes of `E_j`, `E*_j` in block order.
    pub difference_blocks: Vec<(ProofBlock, usize)>,
    /// Sizes of `P_j`, `P*_j` in block order.
    pub sum_blocks: Vec<(ProofBlock, usize)>,
    /// The difference blocks are disjoint and cover `F_q^*`.
    pub differences_partition: bool,
    /// Distinct elements over all sum blocks; `(q-1)/2` when the sums are distinct.
    pub sum_count: usize,
    /// All of `E` shares one quadratic character and all of `E*` the other.
    pub difference_split: bool,
    /// Same for `P` against `P*`.
    pub sum_split: bool,
    pub collisions: Vec<Collision>,
}

impl PartitionReport {
    pub fn passes(&self) -> bool {
        self.differences_partition && self.difference_split && self.sum_split && {
            let total: usize = self.sum_blocks.iter().map(|(_, n)| n).sum();
            self.sum_count == total
        }
    }
}

/// Materializes the difference blocks `E_j`, `E*_j` and the sum blocks `P_j`,
/// `P*_j` of `S(beta1, beta2)` and checks that the former partition `F_q^*`,
/// the latter are pairwise disjoint, and that each family splits by quadratic
/// character as the product conditions require.
///
/// Only the memberships of the pair are required; a pair failing the product
/// conditions yields a failing report.
pub fn proof_partition_check(sys: &CosetSystem, bp: &BetaPair) -> Result<PartitionReport> {
    let f = sys.field();
    let bp = beta_pair_conditions(sys, bp.beta1, bp.beta2)?;
    let one = FieldElement::ONE;
    let e_mul = f.sub(bp.beta1, one);
    let e_star_mul = f.add(bp.beta2, one);
    let p_mul = f.add(bp.beta1, one);
    let p_star_mul = f.neg(f.sub(bp.beta2, one));

    let q = f.order() as usize;
    let n = sys.decomposition().delta1 as u32;
    let mut owner: Vec<Option<ProofBlock>> = vec![None; q];
    let mut collisions = Vec::new();
    let mut difference_blocks = Vec::new();
    let mut e_chars = BTreeSet::new();
    let mut e_star_chars = BTreeSet::new();

    let place = |block: ProofBlock,
                 x: FieldElement,
                 owner: &mut [Option<ProofBlock>],
                 collisions: &mut Vec<Collision>| {
        match owner[x.encoding() as usize] {
            Some(first) => collisions.push(Collision {
                element: x,
                first,
                second: block,
            }),
            None => owner[x.encoding() as usize] = Some(block),
        }
    };

    for j in 0..n {
        for (block, src, mul, chars) in [
            (ProofBlock::E(j), sys.c(j as usize), e_mul, &mut e_chars),
            (ProofBlock::EStar(j), sys.c_hat(j as usize), e_star_mul, &mut e_star_chars),
        ] {
            let mut size = 0;
            for &x in src {
                let d = f.mul(x, mul);
                for v in [d, f.neg(d)] {
                    place(block, v, &mut owner, &mut collisions);
                    chars.insert(f.quadratic_character(v));
                    size += 1;
                }
            }
            difference_blocks.push((block, size));
        }
    }
    let covered = owner.iter().skip(1).all(Option::is_some) && owner[0].is_none();
    let differences_partition = collisions.is_empty() && covered;

    let mut sum_owner: Vec<Option<ProofBlock>> = vec![None; q];
    let mut sum_blocks = Vec::new();
    let mut p_chars = BTreeSet::new();
    let mut p_star_chars = BTreeSet::new();
    for j in 0..n {
        for (block, src, mul, chars) in [
            (ProofBlock::P(j), sys.c(j as usize), p_mul, &mut p_chars),
            (ProofBlock::PStar(j), sys.c_hat(j as usize), p_star_mul, &mut p_star_chars),
        ] {
            for &x in src {
                let s = f.mul(x, mul);
                place(block, s, &mut sum_owner, &mut collisions);
                chars.insert(f.quadratic_character(s));
            }
            sum_blocks.push((block, src.len()));
        }
    }
    let sum_count = sum_owner.iter().filter(|o| o.is_some()).count();

    let split = |a: &BTreeSet<i8>, b: &BTreeSet<i8>| {
        a.len() == 1 && b.len() == 1 && a.iter().next() != b.iter().next() && !a.contains(&0)
            && !b.contains(&0)
    };
    Ok(PartitionReport {
        difference_blocks,
        sum_blocks,
        differences_partition,
        sum_count,
        difference_split: split(&e_chars, &e_star_chars),
        sum_split: split(&p_chars, &p_star_chars),
        collisions,
    })
}

/// Outcome of comparing the scaled-coset form with `S(beta1, beta2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DinitzEquivalence {
    /// `beta1 - 1` is not in `C_0` or `beta2 - 1` is not in `C_0`.
    NotApplicable,
    Applicable {
        /// Blocks scaled by `(beta1 - 1)^-1` and `(beta2 - 1)^-1`, as in the
        /// displayed chain of equalities.
        chain_equal: bool,
        /// Second block scaled by `(a1 - 1)^-1` with the multiplier
        /// `a1 = -beta2` itself.
        multiplier_equal: bool,
    },
}

/// For `q = 4t + 1`: builds
/// `{ {x, beta1 x} : x in (beta1-1)^-1 C_0 } ∪ { {y, -beta2 y} : y in s Chat_0 }`
/// and compares it with `S(beta1, beta2)` as a pair set, once with
/// `s = (beta2 - 1)^-1` and once with `s = (-beta2 - 1)^-1`.
pub fn dinitz_equivalence_check(sys: &CosetSystem, bp: &BetaPair) -> Result<DinitzEquivalence> {
    let d = sys.decomposition();
    if d.k != 2 {
        return Err(Error::NotFourTPlusOne { q: d.q, k: d.k });
    }
    let f = sys.field();
    let target: BTreeSet<Pair> = two_quotient_starter(sys, bp)?.pairs().iter().copied().collect();
    let (b1, b2) = (bp.beta1, bp.beta2);
    let one = FieldElement::ONE;
    let b1_m1 = f.sub(b1, one);
    let b2_m1 = f.sub(b2, one);
    if sys.coset_of(b1_m1)? != BlockLabel::C(0) || sys.coset_of(f.neg(b2_m1))? != BlockLabel::CHat(0)
    {
        return Ok(DinitzEquivalence::NotApplicable);
    }
    let minus_b2 = f.neg(b2);
    let build = |y_scale: FieldElement| -> Result<BTreeSet<Pair>> {
        let x_scale = f.inv(b1_m1)?;
        let xs = sys.c(0).iter().map(|&c| f.mul(x_scale, c));
        let ys = sys.c_hat(0).iter().map(|&c| f.mul(y_scale, c));
        Ok(xs
            .map(|x| Pair::new(x, f.mul(b1, x)))
            .chain(ys.map(|y| Pair::new(y, f.mul(minus_b2, y))))
            .collect())
    };
    let chain = build(f.inv(b2_m1)?)?;
    let multiplier = build(f.inv(f.sub(minus_b2, one))?)?;
    Ok(DinitzEquivalence::Applicable {
        chain_equal: chain == target,
        multiplier_equal: multiplier == target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::starter::search_beta_pairs;

    fn setup(q: u64) -> CosetSystem {
        CosetSystem::new(&Field::with_order(q).unwrap()).unwrap()
    }

    fn pair(sys: &CosetSystem, b1: u64, b2: u64) -> BetaPair {
        let f = sys.field();
        beta_pair_conditions(sys, f.element(b1).unwrap(), f.element(b2).unwrap()).unwrap()
    }

    #[test]
    fn f29_blocks() {
        let sys = setup(29);
        let r = proof_partition_check(&sys, &pair(&sys, 2, 26)).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(
            r.difference_blocks,
            vec![(ProofBlock::E(0), 14), (ProofBlock::EStar(0), 14)]
        );
        assert_eq!(r.sum_count, 14);
    }

    #[test]
    fn f41_blocks() {
        let sys = setup(41);
        let r = proof_partition_check(&sys, &pair(&sys, 3, 12)).unwrap();
        assert!(r.passes());
        let sizes: Vec<usize> = r.difference_blocks.iter().map(|(_, n)| *n).collect();
        assert_eq!(sizes, vec![10, 10, 10, 10]);
    }

    #[test]
    fn failing_pair_reports_collision() {
        let sys = setup(29);
        let f = sys.field();
        let bad = sys
            .c_hat(0)
            .iter()
            .map(|&y| pair(&sys, 2, f.mul(f.element(2).unwrap(), y).encoding()))
            .find(|bp| !bp.is_valid())
            .unwrap();
        let r = proof_partition_check(&sys, &bad).unwrap();
        assert!(!r.passes());
        assert!(!r.collisions.is_empty());
    }

    #[test]
    fn equivalence_over_f29() {
        let sys = setup(29);
        assert_eq!(
            dinitz_equivalence_check(&sys, &pair(&sys, 2, 26)).unwrap(),
            DinitzEquivalence::Applicable {
                chain_equal: true,
                multiplier_equal: false
            }
        );
        assert_eq!(
            dinitz_equivalence_check(&sys, &pair(&sys, 2, 10)).unwrap(),
            DinitzEquivalence::NotApplicable
        );
        let all = search_beta_pairs(&sys).unwrap();
        let applicable = all
            .iter()
            .filter(|bp| {
                dinitz_equivalence_check(&sys, bp).unwrap() != DinitzEquivalence::NotApplicable
            })
            .count();
        assert_eq!(applicable, 4);
    }

    #[test]
    fn equivalence_needs_k_two() {
        let sys = setup(41);
        assert!(matches!(
            dinitz_equivalence_check(&sys, &pair(&sys, 3, 12)),
            Err(Error::NotFourTPlusOne { q: 41, k: 3 })
        ));
    }
}
