//! Brute-force cross-checks that share no logic with the main path.
//!
//! Nothing here uses primitive elements, coset indices or Euler's criterion.
//! Residues are the image of squaring, inverses come from Fermat's little
//! theorem, the order-`t` subgroup is the image of `x -> x^(2^k)`, and the
//! starter axioms are checked by sorting raw multisets instead of counting
//! into lookup tables.

use serde::Serialize;

use crate::arith;
use crate::cyclotomy::CosetSystem;
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};
use crate::starter::{
    BetaPair, Failure, Pair, QuotientCount, QuotientProfile, RatioClass, VerificationReport,
};

/// Per-field tables built from first principles.
pub struct Oracle {
    field: Field,
    is_square: Vec<bool>,
    inverse: Vec<FieldElement>,
}

impl Oracle {
    pub fn new(field: &Field) -> Oracle {
        let q = field.order() as usize;
        let mut is_square = vec![false; q];
        for y in field.nonzero() {
            is_square[field.mul(y, y).encoding() as usize] = true;
        }
        let mut inverse = vec![FieldElement::ZERO; q];
        for x in field.nonzero() {
            inverse[x.encoding() as usize] = field.pow(x, field.order() - 2);
        }
        Oracle {
            field: field.clone(),
            is_square,
            inverse,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Nonzero squares, ascending.
    pub fn residues(&self) -> Vec<FieldElement> {
        self.field.nonzero().filter(|x| self.is_square(*x)).collect()
    }

    #[inline]
    fn is_square(&self, x: FieldElement) -> bool {
        self.is_square[x.encoding() as usize]
    }

    #[inline]
    fn is_nonsquare(&self, x: FieldElement) -> bool {
        !x.is_zero() && !self.is_square(x)
    }

    #[inline]
    fn inv(&self, x: FieldElement) -> FieldElement {
        self.inverse[x.encoding() as usize]
    }

    /// Raw re-check of the starter axioms, sum distinctness and quotient count.
    pub fn verify(&self, pairs: &[Pair]) -> VerificationReport {
        if let Some(report) = self.verify_clean(pairs) {
            return report;
        }
        let f = &self.field;
        let mut failures = Vec::new();

        let mut members: Vec<(FieldElement, usize)> = Vec::with_capacity(2 * pairs.len());
        let mut diffs = Vec::with_capacity(2 * pairs.len());
        let mut sums = Vec::with_capacity(pairs.len());
        for (i, p) in pairs.iter().enumerate() {
            let [x, y] = p.members();
            if x == y || x.is_zero() || y.is_zero() {
                failures.push(Failure::DegeneratePair { pair: *p });
            }
            members.extend([(x, i), (y, i)]);
            if x != y {
                diffs.extend([(f.sub(x, y), i), (f.sub(y, x), i)]);
                sums.push((f.add(x, y), i));
            }
        }
        members.retain(|(x, _)| !x.is_zero());

        let cover = |mut raw: Vec<(FieldElement, usize)>,
                     repeated: &dyn Fn(FieldElement, (Pair, Pair)) -> Failure,
                     missing: &dyn Fn(FieldElement) -> Failure,
                     out: &mut Vec<Failure>| {
            raw.sort_unstable();
            for w in raw.windows(2) {
                if w[0].0 == w[1].0 {
                    out.push(repeated(w[0].0, (pairs[w[0].1], pairs[w[1].1])));
                }
            }
            raw.dedup_by_key(|(x, _)| *x);
            let mut it = raw.iter().map(|(x, _)| *x).peekable();
            for want in f.nonzero() {
                if it.peek() == Some(&want) {
                    it.next();
                } else {
                    out.push(missing(want));
                }
            }
        };
        // only the first repeat per value is kept, to match one witness pair per value
        let mut element_failures = Vec::new();
        cover(
            members,
            &|element, pairs| Failure::RepeatedElement { element, pairs },
            &|element| Failure::MissingElement { element },
            &mut element_failures,
        );
        let mut diff_failures = Vec::new();
        cover(
            diffs,
            &|difference, pairs| Failure::RepeatedDifference { difference, pairs },
            &|difference| Failure::MissingDifference { difference },
            &mut diff_failures,
        );
        failures.extend(first_per_value(element_failures));
        failures.extend(first_per_value(diff_failures));
        let is_starter = failures.is_empty();

        sums.sort_unstable();
        let mut sum_failures = Vec::new();
        for w in sums.windows(2) {
            if w[0].0 == w[1].0 {
                sum_failures.push(Failure::RepeatedSum {
                    sum: w[0].0,
                    pairs: (pairs[w[0].1], pairs[w[1].1]),
                });
            }
        }
        failures.extend(first_per_value(sum_failures));
        let nonzero_sums = sums.first().map_or(true, |(s, _)| !s.is_zero());
        sums.dedup_by_key(|(s, _)| *s);
        let sum_count = sums.len();

        VerificationReport {
            is_starter,
            is_strong: is_starter && sum_count == pairs.len(),
            sum_count,
            nonzero_sums,
            quotient_profile: self.quotients(pairs),
            failures,
        }
    }

    /// Sorts bare values and succeeds only for a strong starter; anything
    /// else goes through the slower path that names witnesses.
    fn verify_clean(&self, pairs: &[Pair]) -> Option<VerificationReport> {
        let f = &self.field;
        let n = pairs.len();
        let mut members = Vec::with_capacity(2 * n);
        let mut diffs = Vec::with_capacity(2 * n);
        let mut sums = Vec::with_capacity(n);
        for p in pairs {
            let [x, y] = p.members();
            members.extend([x, y]);
            diffs.extend([f.sub(x, y), f.sub(y, x)]);
            sums.push(f.add(x, y));
        }
        let is_nonzero_run = |mut v: Vec<FieldElement>| {
            v.sort_unstable();
            v.len() as u64 == f.order() - 1
                && v.iter().zip(1..).all(|(x, i)| x.encoding() == i)
        };
        if !is_nonzero_run(members) || !is_nonzero_run(diffs) {
            return None;
        }
        sums.sort_unstable();
        if sums.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(VerificationReport {
            is_starter: true,
            is_strong: true,
            sum_count: n,
            nonzero_sums: sums.first().map_or(true, |s| !s.is_zero()),
            quotient_profile: self.quotients(pairs),
            failures: Vec::new(),
        })
    }

    /// Smallest `Q` with `|Q| <= 2` hitting every pair, by exhaustive search.
    ///
    /// `Q` hits `{x, y}` when `r x = y` or `r y = x` for some `r` in `Q`. Any
    /// hitting set must contain one of the two ratios of the first pair, and
    /// then one of the two ratios of the first pair that choice misses, so
    /// the search branches at most four ways.
    fn quotients(&self, pairs: &[Pair]) -> QuotientProfile {
        let f = &self.field;
        let live: Vec<Pair> = pairs.iter().copied().filter(|p| !p.is_degenerate()).collect();
        let mut classes: Vec<RatioClass> = live
            .iter()
            .map(|p| {
                let [x, y] = p.members();
                RatioClass::new(f.mul(y, self.inv(x)), f.mul(x, self.inv(y)))
            })
            .collect();
        classes.sort_unstable();

        let hits = |r: FieldElement, p: &Pair| {
            let [x, y] = p.members();
            f.mul(r, x) == y || f.mul(r, y) == x
        };
        let ratios = |p: &Pair| {
            let [x, y] = p.members();
            [f.mul(y, self.inv(x)), f.mul(x, self.inv(y))]
        };

        let (min_quotient, quotient_set) = match live.first() {
            None => (QuotientCount::Zero, Vec::new()),
            Some(first) => {
                let singles: Vec<FieldElement> = ratios(first)
                    .into_iter()
                    .filter(|&r| live.iter().all(|p| hits(r, p)))
                    .collect();
                if let Some(&r) = singles.iter().min() {
                    (QuotientCount::One, vec![r])
                } else {
                    let mut best: Option<Vec<FieldElement>> = None;
                    for r in ratios(first) {
                        let missed: Vec<&Pair> = live.iter().filter(|p| !hits(r, p)).collect();
                        for s in ratios(missed[0]) {
                            if missed.iter().all(|p| hits(s, p)) {
                                let mut cand = vec![r, s];
                                cand.sort();
                                if best.as_ref().map_or(true, |b| cand < *b) {
                                    best = Some(cand);
                                }
                            }
                        }
                    }
                    match best {
                        Some(b) => (QuotientCount::Two, b),
                        None => (QuotientCount::More, Vec::new()),
                    }
                }
            }
        };
        QuotientProfile {
            classes,
            min_quotient,
            quotient_set,
        }
    }

    /// Every valid `(beta1, beta2)` by a double loop over `NQR x NQR`.
    ///
    /// `beta1 * Chat_0` is built as a set from `Chat_0 = -{x^(2^k)}`.
    pub fn beta_sweep(&self) -> Vec<BetaPair> {
        let f = &self.field;
        let q = f.order();
        let (k, _) = arith::split_two_power(q - 1);
        let mut c0 = vec![false; q as usize];
        for x in f.nonzero() {
            let y = (0..k).fold(x, |acc, _| f.mul(acc, acc));
            c0[y.encoding() as usize] = true;
        }
        let c_hat0: Vec<FieldElement> = f
            .nonzero()
            .filter(|x| c0[x.encoding() as usize])
            .map(|x| f.neg(x))
            .collect();
        let nqr: Vec<FieldElement> = f.nonzero().filter(|&x| self.is_nonsquare(x)).collect();
        let one = FieldElement::ONE;
        let mut in_coset = vec![false; q as usize];
        let mut out = Vec::new();
        for &b1 in &nqr {
            for &y in &c_hat0 {
                in_coset[f.mul(b1, y).encoding() as usize] = true;
            }
            for &b2 in &nqr {
                if !in_coset[b2.encoding() as usize] {
                    continue;
                }
                let cond_minus_plus = self.is_nonsquare(f.mul(f.sub(b1, one), f.add(b2, one)));
                let cond_plus_minus = self.is_nonsquare(f.mul(f.add(b1, one), f.sub(b2, one)));
                if cond_minus_plus && cond_plus_minus {
                    out.push(BetaPair {
                        beta1: b1,
                        beta2: b2,
                        cond_minus_plus,
                        cond_plus_minus,
                    });
                }
            }
            for &y in &c_hat0 {
                in_coset[f.mul(b1, y).encoding() as usize] = false;
            }
        }
        out
    }

    /// `|{x in C_i : x + 1 in C_j}|` with `C_0 = QR(q)`, `C_1 = NQR(q)`.
    pub fn cyclotomic_count(&self, i: u8, j: u8) -> u64 {
        let f = &self.field;
        let class = |x: FieldElement, c: u8| {
            if c == 0 {
                self.is_square(x)
            } else {
                self.is_nonsquare(x)
            }
        };
        f.nonzero()
            .filter(|&x| class(x, i) && class(f.add(x, FieldElement::ONE), j))
            .count() as u64
    }
}

fn first_per_value(fails: Vec<Failure>) -> Vec<Failure> {
    let mut out: Vec<Failure> = Vec::with_capacity(fails.len());
    for fl in fails {
        let dup = match (&fl, out.last()) {
            (
                Failure::RepeatedElement { element: a, .. },
                Some(Failure::RepeatedElement { element: b, .. }),
            ) => a == b,
            (
                Failure::RepeatedDifference { difference: a, .. },
                Some(Failure::RepeatedDifference { difference: b, .. }),
            ) => a == b,
            (Failure::RepeatedSum { sum: a, .. }, Some(Failure::RepeatedSum { sum: b, .. })) => {
                a == b
            }
            _ => false,
        };
        if !dup {
            out.push(fl);
        }
    }
    out
}

/// `QR(q)` as the image of squaring.
pub fn oracle_residues(field: &Field) -> Vec<FieldElement> {
    Oracle::new(field).residues()
}

pub fn oracle_verify(field: &Field, pairs: &[Pair]) -> VerificationReport {
    Oracle::new(field).verify(pairs)
}

pub fn oracle_beta_sweep(sys: &CosetSystem) -> Vec<BetaPair> {
    Oracle::new(sys.field()).beta_sweep()
}

/// Ways to corrupt a valid starter; each is guaranteed to break an axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationKind {
    /// Replace one member by another nonzero value of the field.
    SwapElement,
    /// Replace one member by a member of a different pair.
    DuplicateElement,
    /// Translate one pair by a nonzero constant.
    ShiftPair,
    DropPair,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] = [
        MutationKind::SwapElement,
        MutationKind::DuplicateElement,
        MutationKind::ShiftPair,
        MutationKind::DropPair,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MutationSpec {
    pub kind: MutationKind,
    pub seed: u64,
}

/// 64-bit LCG with Knuth's MMIX constants; the top 32 bits are used.
#[derive(Clone, Debug)]
pub struct Lcg(u64);

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Lcg {
        Lcg(seed)
    }

    pub fn next_u32(&mut self) -> u32 {
        self.0 = self.0.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        (self.0 >> 32) as u32
    }

    /// Uniform-ish index in `0..n`, `n > 0`.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u32() as u64 * n as u64) >> 32) as usize
    }
}

/// Applies a mutation to a pair set with at least two pairs over a field with
/// `q >= 5`. The result is not canonicalized beyond `Pair::new`.
pub fn mutate(field: &Field, pairs: &[Pair], spec: MutationSpec) -> Vec<Pair> {
    assert!(pairs.len() >= 2 && field.order() >= 5, "mutation needs two pairs");
    let mut rng = Lcg::new(spec.seed);
    let mut out = pairs.to_vec();
    let i = rng.below(out.len());
    let [x, y] = out[i].members();
    match spec.kind {
        MutationKind::SwapElement => {
            let mut v = x;
            while v == x || v == y || v.is_zero() {
                v = field
                    .element(1 + rng.below(field.order() as usize - 1) as u64)
                    .expect("in range");
            }
            out[i] = Pair::new(v, y);
        }
        MutationKind::DuplicateElement => {
            let j = (i + 1 + rng.below(out.len() - 1)) % out.len();
            let donor = out[j].members()[rng.below(2)];
            out[i] = Pair::new(x, donor);
        }
        MutationKind::ShiftPair => {
            let c = field
                .element(1 + rng.below(field.order() as usize - 1) as u64)
                .expect("in range");
            out[i] = Pair::new(field.add(x, c), field.add(y, c));
        }
        MutationKind::DropPair => {
            out.remove(i);
        }
    }
    out
}

/// Census of all starters of the cyclic group `Z_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: u64,
    /// Starters found by difference-pruned backtracking.
    pub starters: u64,
    /// How many of those pass the raw definition check.
    pub verified: u64,
    pub strong: u64,
    /// Strong with all sums nonzero.
    pub strong_nonzero_sums: u64,
    pub one_quotient: u64,
    pub two_quotient: u64,
}

/// Enumerates every starter of `Z_n`, `n` odd in `3..=11`.
pub fn exhaustive_small_group_census(n: u64) -> Result<CensusRow> {
    if n % 2 == 0 || !(3..=11).contains(&n) {
        return Err(Error::CensusOrder(n));
    }
    let mut found = Vec::new();
    let mut used = vec![false; n as usize];
    let mut diff_used = vec![false; n as usize];
    let mut current = Vec::new();
    backtrack(n, &mut used, &mut diff_used, &mut current, &mut found);

    let mut row = CensusRow {
        n,
        starters: found.len() as u64,
        verified: 0,
        strong: 0,
        strong_nonzero_sums: 0,
        one_quotient: 0,
        two_quotient: 0,
    };
    for s in &found {
        let check = cyclic_check(n, s);
        if check.is_starter {
            row.verified += 1;
        }
        if check.is_strong {
            row.strong += 1;
            if check.nonzero_sums {
                row.strong_nonzero_sums += 1;
            }
        }
        match cyclic_min_quotient(n, s) {
            QuotientCount::One => row.one_quotient += 1,
            QuotientCount::Two => row.two_quotient += 1,
            _ => {}
        }
    }
    Ok(row)
}

fn backtrack(
    n: u64,
    used: &mut [bool],
    diff_used: &mut [bool],
    current: &mut Vec<(u64, u64)>,
    found: &mut Vec<Vec<(u64, u64)>>,
) {
    let Some(x) = (1..n).find(|&x| !used[x as usize]) else {
        found.push(current.clone());
        return;
    };
    used[x as usize] = true;
    for y in x + 1..n {
        if used[y as usize] {
            continue;
        }
        let d = (y - x) % n;
        let (d1, d2) = (d as usize, (n - d) as usize);
        if diff_used[d1] || diff_used[d2] {
            continue;
        }
        used[y as usize] = true;
        diff_used[d1] = true;
        diff_used[d2] = true;
        current.push((x, y));
        backtrack(n, used, diff_used, current, found);
        current.pop();
        diff_used[d1] = false;
        diff_used[d2] = false;
        used[y as usize] = false;
    }
    used[x as usize] = false;
}

/// Raw starter check in `Z_n` straight from the definition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicCheck {
    pub is_starter: bool,
    pub is_strong: bool,
    pub nonzero_sums: bool,
}

pub fn cyclic_check(n: u64, pairs: &[(u64, u64)]) -> CyclicCheck {
    let nonzero: Vec<u64> = (1..n).collect();
    let mut members: Vec<u64> = pairs.iter().flat_map(|&(x, y)| [x % n, y % n]).collect();
    members.sort_unstable();
    let mut diffs: Vec<u64> = pairs
        .iter()
        .flat_map(|&(x, y)| [(x + n - y % n) % n, (y + n - x % n) % n])
        .collect();
    diffs.sort_unstable();
    let mut sums: Vec<u64> = pairs.iter().map(|&(x, y)| (x + y) % n).collect();
    sums.sort_unstable();
    let nonzero_sums = sums.first().map_or(true, |&s| s != 0);
    let total = sums.len();
    sums.dedup();
    let is_starter = members == nonzero && diffs == nonzero;
    CyclicCheck {
        is_starter,
        is_strong: is_starter && sums.len() == total,
        nonzero_sums,
    }
}

/// Smallest `|Q|` (up to 2) with `Q` in `Z_n \ {0}` such that each pair
/// `{x, y}` has `r x = y` or `r y = x` for some `r` in `Q`.
pub fn cyclic_min_quotient(n: u64, pairs: &[(u64, u64)]) -> QuotientCount {
    if pairs.is_empty() {
        return QuotientCount::Zero;
    }
    let hit = |r: u64, &(x, y): &(u64, u64)| r * x % n == y || r * y % n == x;
    let covers = |q: &[u64]| pairs.iter().all(|p| q.iter().any(|&r| hit(r, p)));
    if (1..n).any(|r| covers(&[r])) {
        return QuotientCount::One;
    }
    for r in 1..n {
        for s in r + 1..n {
            if covers(&[r, s]) {
                return QuotientCount::Two;
            }
        }
    }
    QuotientCount::More
}
