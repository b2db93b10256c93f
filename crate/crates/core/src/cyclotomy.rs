//! Coset structure of `QR(q)` for `q = 2^k t + 1`, `k >= 2`, `t > 1` odd.
//!
//! With `g` the least primitive element and `alpha = g^2` (a generator of
//! `QR(q)`), the subgroup of order `t` is `C_0 = <alpha^Delta>`, `Delta =
//! 2^(k-1)`. The residues split into `C_j = alpha^j C_0` and `Chat_j = -C_j`
//! for `j < Delta1 = 2^(k-2)`.

use std::fmt;

use crate::arith;
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};

/// `q - 1 = 2^k * t` with `k >= 2` and `t > 1` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub q: u64,
    pub k: u32,
    pub t: u64,
    /// `2^(k-1)`: index of `C_0` in `QR(q)`.
    pub delta: u64,
    /// `2^(k-2)`: number of block indices `j`.
    pub delta1: u64,
}

/// Splits `q - 1` and checks the hypotheses of the two-quotient construction.
pub fn decompose(q: u64) -> Result<Decomposition> {
    match arith::prime_power(q) {
        Some((p, _)) if p != 2 => {}
        _ => return Err(Error::NotPrimePower(q)),
    }
    let (k, t) = arith::split_two_power(q - 1);
    if k < 2 {
        return Err(Error::DinitzCase { q });
    }
    if t == 1 {
        return Err(Error::TrivialOddPart { q });
    }
    Ok(Decomposition {
        q,
        k,
        t,
        delta: 1 << (k - 1),
        delta1: 1 << (k - 2),
    })
}

/// Which residue block an element lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockLabel {
    C(u32),
    CHat(u32),
    Nqr,
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockLabel::C(j) => write!(f, "C_{j}"),
            BlockLabel::CHat(j) => write!(f, "Chat_{j}"),
            BlockLabel::Nqr => f.write_str("NQR"),
        }
    }
}

/// The coset partition of `QR(q)`.
///
/// Blocks are stored in generation order: `C_0` lists `alpha^Delta,
/// alpha^(2 Delta), ..., 1`, and `C_j`, `Chat_j` are its images under
/// `x -> alpha^j x` and negation.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    field: Field,
    decomp: Decomposition,
    primitive: FieldElement,
    alpha: FieldElement,
    c: Vec<Vec<FieldElement>>,
    c_hat: Vec<Vec<FieldElement>>,
    labels: Vec<Option<BlockLabel>>,
    /// For residues, `i` such that `x` lies in `alpha^i C_0`, `i < Delta`.
    coset_index: Vec<u32>,
}

impl CosetSystem {
    /// Builds the partition and verifies it; a failed check is an
    /// arithmetic bug, reported as [`Error::PartitionFailure`].
    pub fn new(field: &Field) -> Result<CosetSystem> {
        let decomp = decompose(field.order())?;
        let q = field.order() as usize;
        let g = field.least_primitive_element();
        let alpha = field.mul(g, g);
        let step = field.pow(alpha, decomp.delta);

        let mut c0 = Vec::with_capacity(decomp.t as usize);
        let mut x = step;
        loop {
            c0.push(x);
            if x == FieldElement::ONE {
                break;
            }
            x = field.mul(x, step);
            if c0.len() > decomp.t as usize {
                return Err(Error::PartitionFailure(format!(
                    "alpha^Delta = {step} does not have order t = {}",
                    decomp.t
                )));
            }
        }
        if c0.len() != decomp.t as usize {
            return Err(Error::PartitionFailure(format!(
                "C_0 has {} elements, expected t = {}",
                c0.len(),
                decomp.t
            )));
        }

        let mut c = Vec::with_capacity(decomp.delta1 as usize);
        let mut c_hat = Vec::with_capacity(decomp.delta1 as usize);
        let mut shift = FieldElement::ONE;
        for _ in 0..decomp.delta1 {
            let block: Vec<_> = c0.iter().map(|&y| field.mul(shift, y)).collect();
            c_hat.push(block.iter().map(|&y| field.neg(y)).collect());
            c.push(block);
            shift = field.mul(shift, alpha);
        }

        let mut labels = vec![None; q];
        for (j, (cj, hj)) in c.iter().zip(&c_hat).enumerate() {
            for (set, label) in [(cj, BlockLabel::C(j as u32)), (hj, BlockLabel::CHat(j as u32))] {
                for &y in set {
                    if let Some(prev) = labels[y.encoding() as usize].replace(label) {
                        return Err(Error::PartitionFailure(format!(
                            "{y} lies in both {prev} and {label}"
                        )));
                    }
                }
            }
        }
        for x in field.nonzero() {
            let slot = &mut labels[x.encoding() as usize];
            match (field.quadratic_character(x), *slot) {
                (1, None) => {
                    return Err(Error::PartitionFailure(format!(
                        "residue {x} is in no block"
                    )))
                }
                (-1, Some(label)) => {
                    return Err(Error::PartitionFailure(format!(
                        "non-residue {x} landed in {label}"
                    )))
                }
                (-1, None) => *slot = Some(BlockLabel::Nqr),
                _ => {}
            }
        }

        let mut coset_index = vec![u32::MAX; q];
        let mut y = FieldElement::ONE;
        for n in 0..(field.order() - 1) / 2 {
            coset_index[y.encoding() as usize] = (n % decomp.delta) as u32;
            y = field.mul(y, alpha);
        }

        let sys = CosetSystem {
            field: field.clone(),
            decomp,
            primitive: g,
            alpha,
            c,
            c_hat,
            labels,
            coset_index,
        };
        for (label, block) in sys.blocks() {
            let s = block.iter().fold(FieldElement::ZERO, |acc, &y| field.add(acc, y));
            if !s.is_zero() {
                return Err(Error::PartitionFailure(format!("{label} sums to {s}, not 0")));
            }
        }
        Ok(sys)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn decomposition(&self) -> Decomposition {
        self.decomp
    }

    /// The least primitive element `g`.
    pub fn primitive(&self) -> FieldElement {
        self.primitive
    }

    /// `alpha = g^2`, the generator of `QR(q)` used throughout.
    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    pub fn c(&self, j: usize) -> &[FieldElement] {
        &self.c[j]
    }

    pub fn c_hat(&self, j: usize) -> &[FieldElement] {
        &self.c_hat[j]
    }

    /// `(label, block)` for every `C_j` then every `Chat_j`.
    pub fn blocks(&self) -> impl Iterator<Item = (BlockLabel, &[FieldElement])> {
        let cs = self.c.iter().enumerate().map(|(j, b)| (BlockLabel::C(j as u32), b.as_slice()));
        let hs = self
            .c_hat
            .iter()
            .enumerate()
            .map(|(j, b)| (BlockLabel::CHat(j as u32), b.as_slice()));
        cs.chain(hs)
    }

    /// Block containing a nonzero `x`.
    pub fn coset_of(&self, x: FieldElement) -> Result<BlockLabel> {
        let x = self.field.check(x)?;
        if x.is_zero() {
            return Err(Error::ZeroResiduosity);
        }
        Ok(self.labels[x.encoding() as usize].expect("every nonzero element is labelled"))
    }

    /// Fast residuosity from the prebuilt labels; `x` must be nonzero.
    #[inline]
    pub fn is_nqr(&self, x: FieldElement) -> bool {
        self.labels[x.encoding() as usize] == Some(BlockLabel::Nqr)
    }

    /// `i < Delta` with `x` in `alpha^i C_0`, for residues only.
    pub fn residue_coset_index(&self, x: FieldElement) -> Option<u32> {
        let i = *self.coset_index.get(x.encoding() as usize)?;
        (i != u32::MAX).then_some(i)
    }

    /// The non-residue blocks `D_j = beta1 C_j` and `Dhat_j = beta2 C_j` for a
    /// fixed pair, checked to partition `NQR(q)`.
    pub fn nqr_blocks(&self, beta1: FieldElement, beta2: FieldElement) -> Result<NqrBlocks> {
        let f = &self.field;
        let scale = |b: FieldElement| -> Vec<Vec<FieldElement>> {
            self.c.iter().map(|cj| cj.iter().map(|&y| f.mul(b, y)).collect()).collect()
        };
        let blocks = NqrBlocks {
            d: scale(beta1),
            d_hat: scale(beta2),
        };
        let mut seen = vec![false; f.order() as usize];
        for block in blocks.d.iter().chain(&blocks.d_hat) {
            for &y in block {
                if !self.is_nqr(y) {
                    return Err(Error::PartitionFailure(format!("{y} in a D-block is not a non-residue")));
                }
                if std::mem::replace(&mut seen[y.encoding() as usize], true) {
                    return Err(Error::PartitionFailure(format!("{y} appears in two D-blocks")));
                }
            }
        }
        Ok(blocks)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NqrBlocks {
    pub d: Vec<Vec<FieldElement>>,
    pub d_hat: Vec<Vec<FieldElement>>,
}

/// Closed form of the order-2 cyclotomic numbers `(i, j)` for `q = 2f + 1`
/// with `f` even: `(0,0) = (f-2)/2`, all others `f/2`.
pub fn cyclotomic_number(f: u64, i: u8, j: u8) -> Result<u64> {
    if i > 1 || j > 1 {
        return Err(Error::CyclotomicIndex(i, j));
    }
    if f % 2 == 1 || f == 0 {
        return Err(Error::OddCyclotomicOrder(f));
    }
    Ok(if (i, j) == (0, 0) { (f - 2) / 2 } else { f / 2 })
}

/// A maximal run `start, start + 1, ..., start + (len - 1)` of non-residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: FieldElement,
    pub len: usize,
    /// The whole additive orbit `start + F_p` is non-residue, so the run has
    /// no first or last element. Only possible in extension fields.
    pub cyclic: bool,
}

impl Run {
    pub fn elements(&self, field: &Field) -> Vec<FieldElement> {
        std::iter::successors(Some(self.start), |&x| Some(field.add(x, FieldElement::ONE)))
            .take(self.len)
            .collect()
    }

    pub fn first(&self) -> FieldElement {
        self.start
    }

    pub fn last(&self, field: &Field) -> FieldElement {
        field.add(self.start, field.from_int(self.len as i64 - 1))
    }
}

/// Maximal runs of consecutive non-residues under `x -> x + 1`.
///
/// In `Z_p` the successor walk is the usual integer order and no run can
/// wrap through 0. In an extension field the walk splits into orbits
/// `a + F_p`; each orbit is scanned cyclically, so a run may wrap within its
/// orbit, and an orbit made entirely of non-residues is reported once with
/// `cyclic = true`.
pub fn nqr_runs(field: &Field) -> Vec<Run> {
    let p = field.characteristic();
    let mut runs = Vec::new();
    let mut base = 0u64;
    while base < field.order() {
        let orbit: Vec<FieldElement> = (0..p)
            .map(|c| field.element(base + c).expect("in range"))
            .collect();
        let nqr: Vec<bool> = orbit.iter().map(|&x| field.quadratic_character(x) == -1).collect();
        match nqr.iter().position(|&b| !b) {
            None => runs.push(Run {
                start: orbit[0],
                len: p as usize,
                cyclic: true,
            }),
            Some(anchor) => {
                let n = p as usize;
                let mut i = 1;
                while i <= n {
                    let at = (anchor + i) % n;
                    if nqr[at] {
                        let mut len = 0;
                        while nqr[(at + len) % n] {
                            len += 1;
                        }
                        runs.push(Run {
                            start: orbit[at],
                            len,
                            cyclic: false,
                        });
                        i += len;
                    } else {
                        i += 1;
                    }
                }
            }
        }
        base += p;
    }
    runs.sort_by_key(|r| r.start);
    runs
}

/// A non-residue `beta` with `(beta + 1)(beta - 1)` a non-residue, taken from
/// the ends of runs of length at least 2: the last element `b` of a run has
/// `b + 1` in `QR` and `b - 1` in `NQR`, the first the other way round.
/// Returns the smallest such endpoint.
pub fn find_beta_star(field: &Field) -> Result<FieldElement> {
    decompose(field.order())?;
    let one = FieldElement::ONE;
    let witness = nqr_runs(field)
        .into_iter()
        .filter(|r| r.len > 1 && !r.cyclic)
        .flat_map(|r| [r.first(), r.last(field)])
        .filter(|&b| {
            let prod = field.mul(field.add(b, one), field.sub(b, one));
            field.quadratic_character(prod) == -1
        })
        .min();
    witness.ok_or_else(|| {
        Error::TheoremViolation(format!(
            "no beta in NQR({}) with (beta+1)(beta-1) in NQR",
            field.order()
        ))
    })
}

/// Smallest witnesses of the mixed-residuosity lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MixedWitnesses {
    /// `(b1, b2)` in `NQR x NQR` with `b1 + 1` in `NQR`, `b2 + 1` in `QR`.
    pub plus: (FieldElement, FieldElement),
    /// `(b1, b2)` in `NQR x NQR` with `b1 - 1` in `NQR`, `b2 - 1` in `QR`.
    pub minus: (FieldElement, FieldElement),
}

pub fn mixed_beta_witnesses(field: &Field) -> Result<MixedWitnesses> {
    decompose(field.order())?;
    let nqr = field.residue_sets().1;
    let chi = |x: FieldElement| field.quadratic_character(x);
    let one = FieldElement::ONE;
    let pick = |shift: fn(&Field, FieldElement, FieldElement) -> FieldElement, want: i8| {
        nqr.iter().copied().find(|&b| chi(shift(field, b, one)) == want)
    };
    let violation = |what: &str| {
        Error::TheoremViolation(format!("no {what} witness in NQR({})", field.order()))
    };
    let plus = (
        pick(Field::add, -1).ok_or_else(|| violation("beta+1 in NQR"))?,
        pick(Field::add, 1).ok_or_else(|| violation("beta+1 in QR"))?,
    );
    let minus = (
        pick(Field::sub, -1).ok_or_else(|| violation("beta-1 in NQR"))?,
        pick(Field::sub, 1).ok_or_else(|| violation("beta-1 in QR"))?,
    );
    Ok(MixedWitnesses { plus, minus })
}
