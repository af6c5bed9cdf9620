use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::BasisSelection;
use crate::error::{Error, Result};
use crate::seqspace::{
    inner_product_closed, inner_product_truncated, FractionalSequence, InnerProductResult, Method,
    WeightScheme,
};

const MAGIC: &[u8; 4] = b"NBBG";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 8;
const RECORD_LEN: usize = 8 + 8 + 8 + 8 + 1;
const TRAILER_LEN: usize = 4;

/// How Gram entries are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramMethod {
    ClosedForm,
    Truncated { cutoff: u64 },
}

impl GramMethod {
    fn entry_method(self) -> Method {
        match self {
            GramMethod::ClosedForm => Method::ClosedForm,
            GramMethod::Truncated { .. } => Method::Truncated,
        }
    }
}

/// Inner products `<gamma_l, gamma_m>` keyed by `(l, m)` with `l <= m`, plus
/// an in-memory side table of `<gamma, gamma_l>`.
///
/// Only the pair entries are persisted; the cross terms cost `O(l)` each in
/// closed form and are recomputed.
#[derive(Debug, Clone)]
pub struct GramStore {
    weight: WeightScheme,
    method: GramMethod,
    entries: BTreeMap<(u64, u64), InnerProductResult>,
    cross: BTreeMap<u64, InnerProductResult>,
}

impl GramStore {
    pub fn new(weight: WeightScheme, method: GramMethod) -> Result<Self> {
        match method {
            GramMethod::ClosedForm if !weight.is_default() => {
                return Err(Error::Unsupported(format!(
                    "closed-form Gram entries need the default weight, got {}",
                    weight.name()
                )))
            }
            GramMethod::Truncated { cutoff: 0 } => {
                return Err(Error::domain("truncation cutoff must be at least 1"))
            }
            _ => {}
        }
        Ok(GramStore {
            weight,
            method,
            entries: BTreeMap::new(),
            cross: BTreeMap::new(),
        })
    }

    /// Default weight, closed-form entries.
    pub fn closed() -> Self {
        Self::new(WeightScheme::harmonic(), GramMethod::ClosedForm).expect("default weight")
    }

    pub fn weight(&self) -> &WeightScheme {
        &self.weight
    }

    pub fn method(&self) -> GramMethod {
        self.method
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry for the unordered pair `{l, m}`.
    pub fn get(&self, l: u64, m: u64) -> Option<&InnerProductResult> {
        self.entries.get(&(l.min(m), l.max(m)))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u64, u64), &InnerProductResult)> {
        self.entries.iter()
    }

    pub fn contains_basis(&self, indices: &[u64]) -> bool {
        indices
            .iter()
            .enumerate()
            .all(|(i, &l)| indices[i..].iter().all(|&m| self.get(l, m).is_some()))
    }

    fn compute(&self, a: FractionalSequence, b: FractionalSequence) -> Result<InnerProductResult> {
        match self.method {
            GramMethod::ClosedForm => inner_product_closed(a, b, &self.weight),
            GramMethod::Truncated { cutoff } => inner_product_truncated(a, b, cutoff, &self.weight),
        }
    }

    /// `<gamma, gamma>` under the store's weight and method.
    pub fn gamma_self(&self) -> Result<InnerProductResult> {
        self.compute(FractionalSequence::Constant, FractionalSequence::Constant)
    }

    /// `<gamma, gamma_l>`, from the side table when present.
    pub fn gamma_cross(&self, l: u64) -> Result<InnerProductResult> {
        match self.cross.get(&l) {
            Some(r) => Ok(*r),
            None => self.compute(FractionalSequence::Constant, FractionalSequence::Frac(l)),
        }
    }

    /// Writes the binary cache atomically (temporary file plus rename).
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::with_capacity(HEADER_LEN + RECORD_LEN * self.len() + TRAILER_LEN);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&self.weight.id().to_le_bytes());
        buf.extend_from_slice(&(self.len() as u64).to_le_bytes());
        for (&(l, m), r) in &self.entries {
            buf.extend_from_slice(&l.to_le_bytes());
            buf.extend_from_slice(&m.to_le_bytes());
            buf.extend_from_slice(&r.value.to_le_bytes());
            buf.extend_from_slice(&r.error_bound.to_le_bytes());
            buf.push(r.method.code());
        }
        let crc = crc32fast::hash(&buf);
        buf.extend_from_slice(&crc.to_le_bytes());

        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&buf)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Reads a cache written by [`save`](Self::save). The weight id and entry
    /// method recorded in the file must match the requested ones.
    pub fn load(path: &Path, weight: WeightScheme, method: GramMethod) -> Result<Self> {
        let bytes = fs::read(path)?;
        let mut store = Self::new(weight, method)?;
        store.entries = decode(&bytes, &store)?;
        Ok(store)
    }

    /// Loads `path` if it exists, otherwise starts empty.
    pub fn open(path: &Path, weight: WeightScheme, method: GramMethod) -> Result<Self> {
        if path.exists() {
            Self::load(path, weight, method)
        } else {
            Self::new(weight, method)
        }
    }

    /// CSV with header `l,m,value,error_bound,method`, rows in `(l, m)` order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "l,m,value,error_bound,method")?;
        for (&(l, m), r) in &self.entries {
            writeln!(out, "{l},{m},{:?},{:?},{}", r.value, r.error_bound, r.method.label())?;
        }
        Ok(())
    }
}

fn cache_err(msg: impl Into<String>) -> Error {
    Error::Cache(msg.into())
}

fn read_u32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

fn read_u64(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

fn decode(bytes: &[u8], store: &GramStore) -> Result<BTreeMap<(u64, u64), InnerProductResult>> {
    if bytes.len() < HEADER_LEN + TRAILER_LEN {
        return Err(cache_err("file too short for a Gram cache header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(cache_err("bad magic, not a Gram cache file"));
    }
    let version = read_u32(bytes, 4);
    if version != VERSION {
        return Err(cache_err(format!("unsupported cache version {version}, expected {VERSION}")));
    }
    let body_len = bytes.len() - TRAILER_LEN;
    let stored_crc = read_u32(bytes, body_len);
    if crc32fast::hash(&bytes[..body_len]) != stored_crc {
        return Err(cache_err("checksum mismatch"));
    }
    let weight_id = read_u32(bytes, 8);
    if weight_id != store.weight.id() {
        return Err(cache_err(format!(
            "cache built with weight id {weight_id}, requested {}",
            store.weight.id()
        )));
    }
    let count = read_u64(bytes, 12);
    let expected = count
        .checked_mul(RECORD_LEN as u64)
        .and_then(|r| r.checked_add(HEADER_LEN as u64));
    if expected != Some(body_len as u64) {
        return Err(cache_err(format!("record count {count} does not match file length")));
    }

    let want_method = store.method.entry_method();
    let want_bound = match store.method {
        GramMethod::ClosedForm => 0.0,
        GramMethod::Truncated { cutoff } => store.weight.tail_bound(cutoff),
    };
    let mut entries = BTreeMap::new();
    for rec in bytes[HEADER_LEN..body_len].chunks_exact(RECORD_LEN) {
        let (l, m) = (read_u64(rec, 0), read_u64(rec, 8));
        let value = f64::from_le_bytes(rec[16..24].try_into().unwrap());
        let error_bound = f64::from_le_bytes(rec[24..32].try_into().unwrap());
        let method = Method::from_code(rec[32])
            .ok_or_else(|| cache_err(format!("unknown method code {}", rec[32])))?;
        if l == 0 || l > m {
            return Err(cache_err(format!("malformed key ({l}, {m})")));
        }
        if method != want_method || error_bound != want_bound {
            return Err(cache_err(format!(
                "entry ({l}, {m}) was computed with a different method or cutoff"
            )));
        }
        if !value.is_finite() {
            return Err(cache_err(format!("non-finite value at ({l}, {m})")));
        }
        let r = InnerProductResult {
            value,
            method,
            error_bound,
        };
        if entries.insert((l, m), r).is_some() {
            return Err(cache_err(format!("duplicate entry ({l}, {m})")));
        }
    }
    Ok(entries)
}

/// Fills every pair of the basis for `l_max` that the store lacks, and the
/// matching cross terms. Pairs are evaluated in parallel; each value depends
/// only on its pair, so the result does not depend on the schedule.
///
/// Returns the number of newly computed pair entries.
pub fn assemble_gram(l_max: u64, basis: BasisSelection, store: &mut GramStore) -> Result<usize> {
    if l_max == 0 {
        return Err(Error::domain("L must be at least 1"));
    }
    let indices = basis.indices(l_max)?;
    let missing: Vec<(u64, u64)> = indices
        .iter()
        .enumerate()
        .flat_map(|(i, &l)| indices[i..].iter().map(move |&m| (l, m)))
        .filter(|&(l, m)| store.get(l, m).is_none())
        .collect();

    let shared = &*store;
    let computed: Vec<((u64, u64), InnerProductResult)> = missing
        .par_iter()
        .map(|&(l, m)| {
            shared
                .compute(FractionalSequence::Frac(l), FractionalSequence::Frac(m))
                .map(|r| ((l, m), r))
        })
        .collect::<Result<_>>()?;
    let fresh_cross: Vec<u64> = indices
        .iter()
        .copied()
        .filter(|l| !store.cross.contains_key(l))
        .collect();
    let cross: Vec<(u64, InnerProductResult)> = fresh_cross
        .par_iter()
        .map(|&l| {
            shared
                .compute(FractionalSequence::Constant, FractionalSequence::Frac(l))
                .map(|r| (l, r))
        })
        .collect::<Result<_>>()?;

    let n = computed.len();
    store.entries.extend(computed);
    store.cross.extend(cross);
    Ok(n)
}
