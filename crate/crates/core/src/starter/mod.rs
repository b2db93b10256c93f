//! Starters over `F_q`: pair sets, verification and quotient classification.
//!
//! A starter for `F_q` is a set of `(q-1)/2` pairs `{x, y}` that partitions
//! `F_q^*` and whose differences `±(x - y)` again cover `F_q^*` exactly. It
//! is strong when the pair sums are pairwise distinct (zero sums allowed).

mod construct;
mod proof;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ffield::{Field, FieldElement};

pub use construct::{
    beta_pair_conditions, coset_pair_witnesses, dinitz_starter, search_beta_pairs,
    symmetric_variants, two_quotient_starter, BetaPair, CosetPairWitnesses,
};
pub use proof::{
    dinitz_equivalence_check, proof_partition_check, Collision, DinitzEquivalence, PartitionReport,
    ProofBlock,
};

/// An unordered pair, stored with the smaller encoding first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[FieldElement; 2]", into = "[FieldElement; 2]")]
pub struct Pair {
    lo: FieldElement,
    hi: FieldElement,
}

impl Pair {
    pub fn new(x: FieldElement, y: FieldElement) -> Pair {
        if x <= y {
            Pair { lo: x, hi: y }
        } else {
            Pair { lo: y, hi: x }
        }
    }

    pub fn lo(self) -> FieldElement {
        self.lo
    }

    pub fn hi(self) -> FieldElement {
        self.hi
    }

    pub fn members(self) -> [FieldElement; 2] {
        [self.lo, self.hi]
    }

    /// Equal members or a zero member.
    pub fn is_degenerate(self) -> bool {
        self.lo == self.hi || self.lo.is_zero()
    }
}

impl From<[FieldElement; 2]> for Pair {
    fn from([x, y]: [FieldElement; 2]) -> Pair {
        Pair::new(x, y)
    }
}

impl From<Pair> for [FieldElement; 2] {
    fn from(p: Pair) -> Self {
        p.members()
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// How a starter was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Dinitz {
        beta: FieldElement,
    },
    TwoQuotient {
        beta1: FieldElement,
        beta2: FieldElement,
    },
    External,
}

/// A pair set over a field, in canonical (sorted) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Starter {
    field: Field,
    pairs: Vec<Pair>,
    provenance: Provenance,
}

impl Starter {
    pub fn new(field: Field, mut pairs: Vec<Pair>, provenance: Provenance) -> Starter {
        pairs.sort_unstable();
        Starter {
            field,
            pairs,
            provenance,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn verify(&self) -> VerificationReport {
        verify_starter(&self.field, &self.pairs)
    }
}

/// The starter condition a failure violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// The pair members partition `F_q^*`.
    ElementCover,
    /// The differences `±(x - y)` partition `F_q^*`.
    DifferenceCover,
    /// The pair sums are pairwise distinct.
    DistinctSums,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::ElementCover => "element cover",
            Axiom::DifferenceCover => "difference cover",
            Axiom::DistinctSums => "distinct sums",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    DegeneratePair { pair: Pair },
    RepeatedElement { element: FieldElement, pairs: (Pair, Pair) },
    MissingElement { element: FieldElement },
    RepeatedDifference { difference: FieldElement, pairs: (Pair, Pair) },
    MissingDifference { difference: FieldElement },
    RepeatedSum { sum: FieldElement, pairs: (Pair, Pair) },
}

impl Failure {
    pub fn axiom(&self) -> Axiom {
        match self {
            Failure::DegeneratePair { .. }
            | Failure::RepeatedElement { .. }
            | Failure::MissingElement { .. } => Axiom::ElementCover,
            Failure::RepeatedDifference { .. } | Failure::MissingDifference { .. } => {
                Axiom::DifferenceCover
            }
            Failure::RepeatedSum { .. } => Axiom::DistinctSums,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::DegeneratePair { pair } => write!(f, "degenerate pair {pair}"),
            Failure::RepeatedElement { element, pairs } => {
                write!(f, "element {element} appears in {} and {}", pairs.0, pairs.1)
            }
            Failure::MissingElement { element } => write!(f, "element {element} is not covered"),
            Failure::RepeatedDifference { difference, pairs } => write!(
                f,
                "difference {difference} arises from {} and {}",
                pairs.0, pairs.1
            ),
            Failure::MissingDifference { difference } => {
                write!(f, "difference {difference} is not covered")
            }
            Failure::RepeatedSum { sum, pairs } => {
                write!(f, "sum {sum} is shared by {} and {}", pairs.0, pairs.1)
            }
        }
    }
}

/// Smallest `|Q|` such that every pair has a ratio in `Q`, exact up to 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuotientCount {
    Zero,
    One,
    Two,
    More,
}

impl QuotientCount {
    pub fn as_str(self) -> &'static str {
        match self {
            QuotientCount::Zero => "0",
            QuotientCount::One => "1",
            QuotientCount::Two => "2",
            QuotientCount::More => "more",
        }
    }
}

impl fmt::Display for QuotientCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The class `{r, r^-1}` of a pair's ratio, smaller encoding first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatioClass {
    pub lo: FieldElement,
    pub hi: FieldElement,
}

impl RatioClass {
    pub fn new(r: FieldElement, r_inv: FieldElement) -> RatioClass {
        RatioClass {
            lo: r.min(r_inv),
            hi: r.max(r_inv),
        }
    }

    pub fn contains(self, x: FieldElement) -> bool {
        self.lo == x || self.hi == x
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientProfile {
    /// One class per non-degenerate pair, sorted (a multiset).
    pub classes: Vec<RatioClass>,
    pub min_quotient: QuotientCount,
    /// A smallest witnessing `Q` when `|Q| <= 2`, sorted; empty otherwise.
    pub quotient_set: Vec<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub is_starter: bool,
    pub is_strong: bool,
    /// Number of distinct pair sums.
    pub sum_count: usize,
    /// No pair sums to zero (the stricter convention for strong starters).
    pub nonzero_sums: bool,
    pub quotient_profile: QuotientProfile,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    /// Axioms with at least one failure, sorted and deduplicated.
    pub fn failed_axioms(&self) -> Vec<Axiom> {
        let mut v: Vec<_> = self.failures.iter().map(Failure::axiom).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Verdict fields only, for comparing independent verifiers.
    pub fn verdict(&self) -> Verdict {
        Verdict {
            is_starter: self.is_starter,
            is_strong: self.is_strong,
            sum_count: self.sum_count,
            nonzero_sums: self.nonzero_sums,
            min_quotient: self.quotient_profile.min_quotient,
            quotient_set: self.quotient_profile.quotient_set.clone(),
            failed_axioms: self.failed_axioms(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub is_starter: bool,
    pub is_strong: bool,
    pub sum_count: usize,
    pub nonzero_sums: bool,
    pub min_quotient: QuotientCount,
    pub quotient_set: Vec<FieldElement>,
    pub failed_axioms: Vec<Axiom>,
}

const NONE: u32 = u32::MAX;

/// Occurrence tracking over `F_q`, remembering the first two pairs that hit
/// each value.
struct Tally {
    count: Vec<u32>,
    first: Vec<u32>,
    second: Vec<u32>,
}

impl Tally {
    fn new(q: usize) -> Tally {
        Tally {
            count: vec![0; q],
            first: vec![NONE; q],
            second: vec![NONE; q],
        }
    }

    fn hit(&mut self, x: FieldElement, pair: usize) {
        let i = x.encoding() as usize;
        match self.count[i] {
            0 => self.first[i] = pair as u32,
            1 => self.second[i] = pair as u32,
            _ => {}
        }
        self.count[i] += 1;
    }

    fn repeats<'a>(
        &'a self,
        pairs: &'a [Pair],
    ) -> impl Iterator<Item = (FieldElement, (Pair, Pair))> + 'a {
        self.count.iter().enumerate().filter(|(_, &c)| c > 1).map(move |(i, _)| {
            (
                FieldElement::from_index(i),
                (
                    pairs[self.first[i] as usize],
                    pairs[self.second[i] as usize],
                ),
            )
        })
    }

    fn missing(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.count
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| c == 0)
            .map(|(i, _)| FieldElement::from_index(i))
    }
}

/// Checks both starter axioms and the strong condition, and classifies the
/// quotient structure. Never fails; problems are listed in the report.
pub fn verify_starter(field: &Field, pairs: &[Pair]) -> VerificationReport {
    let q = field.order() as usize;
    let mut failures = Vec::new();
    let mut elements = Tally::new(q);
    let mut differences = Tally::new(q);
    let mut sums = Tally::new(q);

    for (i, &pair) in pairs.iter().enumerate() {
        if pair.is_degenerate() {
            failures.push(Failure::DegeneratePair { pair });
        }
        for x in pair.members() {
            if !x.is_zero() {
                elements.hit(x, i);
            }
        }
        if pair.lo == pair.hi {
            continue;
        }
        let d = field.sub(pair.hi, pair.lo);
        differences.hit(d, i);
        differences.hit(field.neg(d), i);
        sums.hit(field.add(pair.lo, pair.hi), i);
    }

    failures.extend(
        elements
            .repeats(pairs)
            .map(|(element, pairs)| Failure::RepeatedElement { element, pairs }),
    );
    failures.extend(elements.missing().map(|element| Failure::MissingElement { element }));
    failures.extend(
        differences
            .repeats(pairs)
            .map(|(difference, pairs)| Failure::RepeatedDifference { difference, pairs }),
    );
    failures.extend(
        differences
            .missing()
            .map(|difference| Failure::MissingDifference { difference }),
    );
    let is_starter = failures.is_empty();
    failures.extend(
        sums.repeats(pairs)
            .map(|(sum, pairs)| Failure::RepeatedSum { sum, pairs }),
    );

    let sum_count = sums.count.iter().filter(|&&c| c > 0).count();
    VerificationReport {
        is_starter,
        is_strong: is_starter && sum_count == pairs.len(),
        sum_count,
        nonzero_sums: sums.count[0] == 0,
        quotient_profile: quotient_classify(field, pairs),
        failures,
    }
}

/// Ratio classes and the minimal quotient set.
///
/// The classes `{r, r^-1}` partition `F_q^*`, so a set `Q` meets every pair's
/// class exactly when it contains a representative of each distinct class:
/// the minimal `|Q|` is the number of distinct classes. Degenerate pairs are
/// ignored.
pub fn quotient_classify(field: &Field, pairs: &[Pair]) -> QuotientProfile {
    let mut classes: Vec<RatioClass> = pairs
        .iter()
        .filter(|p| !p.is_degenerate())
        .map(|p| {
            let r = field.mul(p.hi, field.inverse_of(p.lo));
            let r_inv = field.mul(p.lo, field.inverse_of(p.hi));
            RatioClass::new(r, r_inv)
        })
        .collect();
    classes.sort_unstable();
    let mut distinct = classes.clone();
    distinct.dedup();
    let (min_quotient, quotient_set) = match distinct.len() {
        0 => (QuotientCount::Zero, Vec::new()),
        1 => (QuotientCount::One, vec![distinct[0].lo]),
        2 => {
            let mut q = vec![distinct[0].lo, distinct[1].lo];
            q.sort();
            (QuotientCount::Two, q)
        }
        _ => (QuotientCount::More, Vec::new()),
    };
    QuotientProfile {
        classes,
        min_quotient,
        quotient_set,
    }
}
