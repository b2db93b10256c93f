//! Canonical JSON records for starters and beta pairs.
//!
//! Records serialize through `serde_json::Value`, whose maps are ordered by
//! key, so the byte sequence is fixed by the content alone. The content hash
//! is the SHA-256 of the canonical form with the `hash` field removed.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cyclotomy::CosetSystem;
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldElement};
use crate::starter::{BetaPair, Pair, Provenance, Starter};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarterRecord {
    pub schema_version: u32,
    pub q: u64,
    pub p: u64,
    pub m: u32,
    /// Modulus coefficients, constant term first; `[0, 1]` for prime fields.
    pub modulus: Vec<u64>,
    pub alpha: FieldElement,
    pub provenance: Provenance,
    pub pairs: Vec<Pair>,
    pub is_starter: bool,
    pub is_strong: bool,
    pub quotient_set: Vec<FieldElement>,
    pub hash: String,
}

impl StarterRecord {
    /// Verifies `starter` and fills in the flags and the hash.
    pub fn from_starter(starter: &Starter) -> StarterRecord {
        let f = starter.field();
        let report = starter.verify();
        let g = f.least_primitive_element();
        let mut rec = StarterRecord {
            schema_version: SCHEMA_VERSION,
            q: f.order(),
            p: f.characteristic(),
            m: f.degree(),
            modulus: f.modulus().to_vec(),
            alpha: f.mul(g, g),
            provenance: starter.provenance(),
            pairs: starter.pairs().to_vec(),
            is_starter: report.is_starter,
            is_strong: report.is_strong,
            quotient_set: report.quotient_profile.quotient_set,
            hash: String::new(),
        };
        rec.hash = rec.content_hash();
        rec
    }

    fn value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("record is always representable")
    }

    pub fn canonical_json(&self) -> String {
        self.value().to_string()
    }

    pub fn pretty(&self) -> String {
        serde_json::to_string_pretty(&self.value()).expect("record is always representable")
    }

    pub fn content_hash(&self) -> String {
        let mut v = self.value();
        if let Some(obj) = v.as_object_mut() {
            obj.remove("hash");
        }
        hex::encode(Sha256::digest(v.to_string().as_bytes()))
    }

    pub fn hash_matches(&self) -> bool {
        self.hash == self.content_hash()
    }

    /// Parses one record; pairs are canonicalized but the hash is not checked.
    pub fn parse(text: &str) -> Result<StarterRecord> {
        let mut rec: StarterRecord = serde_json::from_str(text)?;
        if rec.schema_version != SCHEMA_VERSION {
            return Err(Error::Record(format!(
                "unsupported schema_version {}",
                rec.schema_version
            )));
        }
        rec.pairs.sort_unstable();
        rec.quotient_set.sort_unstable();
        Ok(rec)
    }

    /// Rebuilds the field, rejecting a record whose parameters disagree with it.
    pub fn field(&self) -> Result<Field> {
        let f = Field::new(self.p, self.m)?;
        if f.order() != self.q {
            return Err(Error::Record(format!(
                "q = {} but p^m = {}",
                self.q,
                f.order()
            )));
        }
        if f.modulus() != self.modulus.as_slice() {
            return Err(Error::Record(format!(
                "modulus {:?} differs from the canonical {:?}",
                self.modulus,
                f.modulus()
            )));
        }
        for p in &self.pairs {
            for x in p.members() {
                f.check(x)?;
            }
        }
        Ok(f)
    }

    pub fn starter(&self) -> Result<Starter> {
        Ok(Starter::new(self.field()?, self.pairs.clone(), self.provenance))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaPairRecord {
    pub q: u64,
    pub beta1: FieldElement,
    pub beta2: FieldElement,
    pub cond_minus_plus: bool,
    pub cond_plus_minus: bool,
}

impl BetaPairRecord {
    pub fn new(sys: &CosetSystem, bp: &BetaPair) -> BetaPairRecord {
        BetaPairRecord {
            q: sys.field().order(),
            beta1: bp.beta1,
            beta2: bp.beta2,
            cond_minus_plus: bp.cond_minus_plus,
            cond_plus_minus: bp.cond_plus_minus,
        }
    }
}

/// Canonical one-line JSON of any serializable value.
pub fn canonical<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value)
        .expect("value is representable")
        .to_string()
}

pub fn canonical_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(&serde_json::to_value(value).expect("value is representable"))
        .expect("value is representable")
}
