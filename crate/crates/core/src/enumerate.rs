//! Enumeration of weak BCC-algebras up to isomorphism, canonical forms and
//! isomorphism certificates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::axioms::{classify, is_weak_bcc, ClassReport};
use crate::model::{parse_table, Algebra, ParseError};
use crate::properties::{condition_s, is_solid};
use crate::structure::{derive_order, is_group_like};

const UNDEF: u8 = u8::MAX;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("order {0} is too large to enumerate")]
    TooLarge(usize),
    #[error("unknown filter {0:?}")]
    UnknownFilter(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> EnumerateError + '_ {
    move |source| EnumerateError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// A bijection `a -> b` fixing `0` that preserves the product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoCertificate {
    pub mapping: Vec<usize>,
}

impl IsoCertificate {
    /// Extensional check of the certificate.
    pub fn verify(&self, a: &Algebra, b: &Algebra) -> bool {
        let f = &self.mapping;
        let n = a.order();
        if n != b.order() || f.len() != n || f.first() != Some(&0) {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in f {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        a.elements()
            .cartesian_product(a.elements())
            .all(|(x, y)| f[a.mul(x, y)] == b.mul(f[x], f[y]))
    }
}

/// Per-element isomorphism invariants: zero counts in the row and column,
/// whether `xx = 0`, the shape of the orbit of `x` under `t -> 0t`, and
/// whether `x0 = x`.
fn fingerprints(a: &Algebra) -> Vec<[usize; 6]> {
    let n = a.order();
    a.elements()
        .map(|x| {
            let row = a.elements().filter(|&y| a.mul(x, y) == 0).count();
            let col = a.elements().filter(|&y| a.mul(y, x) == 0).count();
            let mut seen = vec![usize::MAX; n];
            let mut t = x;
            let mut step = 0;
            while seen[t] == usize::MAX {
                seen[t] = step;
                t = a.mul(0, t);
                step += 1;
            }
            let tail = seen[t];
            let cycle = step - tail;
            let sq = usize::from(a.mul(x, x) == 0);
            [row, col, sq, tail, cycle, usize::from(a.mul(x, 0) == x)]
        })
        .collect()
}

/// Sorted branch sizes, when the algebra is weak BCC.
fn branch_profile(a: &Algebra) -> Option<Vec<usize>> {
    let o = derive_order(a).ok()?;
    Some(o.branches().iter().map(|(_, b)| b.len()).sorted().collect())
}

pub fn are_isomorphic(a: &Algebra, b: &Algebra) -> Option<IsoCertificate> {
    let n = a.order();
    if n != b.order() {
        return None;
    }
    let fa = fingerprints(a);
    let fb = fingerprints(b);
    if fa.iter().sorted().ne(fb.iter().sorted()) || fa[0] != fb[0] {
        return None;
    }
    if branch_profile(a) != branch_profile(b) {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;
    if extend(a, b, &fa, &fb, 1, &mut map, &mut used) {
        let cert = IsoCertificate { mapping: map };
        debug_assert!(cert.verify(a, b));
        Some(cert)
    } else {
        None
    }
}

fn consistent(a: &Algebra, b: &Algebra, map: &[usize], upto: usize) -> bool {
    // Only pairs involving the newest element need checking.
    let x = upto;
    (0..=upto).all(|y| {
        [(x, y), (y, x)].into_iter().all(|(p, q)| {
            let r = a.mul(p, q);
            r > upto || map[r] == b.mul(map[p], map[q])
        })
    })
}

fn extend(
    a: &Algebra,
    b: &Algebra,
    fa: &[[usize; 6]],
    fb: &[[usize; 6]],
    x: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = a.order();
    if x == n {
        return true;
    }
    for c in 1..n {
        if used[c] || fa[x] != fb[c] {
            continue;
        }
        map[x] = c;
        used[c] = true;
        if consistent(a, b, map, x) && extend(a, b, fa, fb, x + 1, map, used) {
            return true;
        }
        used[c] = false;
    }
    map[x] = usize::MAX;
    false
}

/// Compares the relabelled table `t'[p x][p y] = p[t[x][y]]` with `t`
/// itself, in row-major order.
fn compare_relabelled(t: &[u8], n: usize, perm: &[usize], inv: &[usize]) -> Ordering {
    for i in 0..n {
        for j in 0..n {
            let v = perm[t[inv[i] * n + inv[j]] as usize] as u8;
            match v.cmp(&t[i * n + j]) {
                Ordering::Equal => {}
                other => return other,
            }
        }
    }
    Ordering::Equal
}

fn relabel_bytes(t: &[u8], n: usize, perm: &[usize]) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            out[perm[x] * n + perm[y]] = perm[t[x * n + y] as usize] as u8;
        }
    }
    out
}

fn perms_fixing_zero(n: usize) -> impl Iterator<Item = Vec<usize>> {
    // `permutations(0)` yields one empty permutation, which covers n = 1.
    (1..n).permutations(n.saturating_sub(1)).map(move |tail| {
        let mut p = Vec::with_capacity(n);
        p.push(0);
        p.extend(tail);
        p
    })
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (x, &p) in perm.iter().enumerate() {
        inv[p] = x;
    }
    inv
}

/// The lexicographically least row-major table over all relabelings fixing
/// `0`. Cost grows as `(n - 1)!`.
pub fn canonical_form(a: &Algebra) -> Vec<u8> {
    let n = a.order();
    perms_fixing_zero(n)
        .map(|p| relabel_bytes(a.bytes(), n, &p))
        .min()
        .expect("at least the identity permutation")
}

pub fn canonical_algebra(a: &Algebra) -> Algebra {
    Algebra::from_bytes(a.order(), &canonical_form(a)).expect("relabelling preserves validity")
}

/// True when no relabeling fixing `0` gives a smaller table.
pub fn is_canonical(t: &[u8], n: usize) -> bool {
    perms_fixing_zero(n).all(|p| compare_relabelled(t, n, &p, &inverse(&p)) != Ordering::Less)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Filter {
    #[serde(rename = "weakbcc")]
    WeakBcc,
    Bcc,
    Bck,
    Bci,
    Proper,
    Solid,
    GroupLike,
    ConditionS,
    /// Solid but not BCI.
    SolidNonBci,
}

impl Filter {
    pub const ALL: [Filter; 9] = [
        Filter::WeakBcc,
        Filter::Bcc,
        Filter::Bck,
        Filter::Bci,
        Filter::Proper,
        Filter::Solid,
        Filter::GroupLike,
        Filter::ConditionS,
        Filter::SolidNonBci,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Filter::WeakBcc => "weakbcc",
            Filter::Bcc => "bcc",
            Filter::Bck => "bck",
            Filter::Bci => "bci",
            Filter::Proper => "proper",
            Filter::Solid => "solid",
            Filter::GroupLike => "group-like",
            Filter::ConditionS => "condition-s",
            Filter::SolidNonBci => "solid-non-bci",
        }
    }

    pub fn matches(self, a: &Algebra, class: &ClassReport) -> bool {
        if !class.is_weak_bcc {
            return false;
        }
        let order = || derive_order(a).expect("weak BCC");
        match self {
            Filter::WeakBcc => true,
            Filter::Bcc => class.is_bcc,
            Filter::Bck => class.is_bck,
            Filter::Bci => class.is_bci,
            Filter::Proper => class.is_proper,
            Filter::Solid => is_solid(a, &order()).holds(),
            Filter::GroupLike => is_group_like(&order()).expect("consistent order"),
            Filter::ConditionS => condition_s(a, &order()).holds,
            Filter::SolidNonBci => !class.is_bci && is_solid(a, &order()).holds(),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Filter {
    type Err = EnumerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Filter::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| EnumerateError::UnknownFilter(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub table: Vec<u8>,
    pub class: ClassReport,
}

impl CatalogEntry {
    pub fn algebra(&self, order: usize) -> Algebra {
        Algebra::from_bytes(order, &self.table).expect("catalog tables are valid")
    }

    /// First 12 hex digits of the SHA-256 of the table bytes.
    pub fn short_hash(&self) -> String {
        let digest = Sha256::digest(&self.table);
        digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Catalog {
    pub order: usize,
    pub filter: Option<Filter>,
    /// Sorted by table bytes.
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn algebras(&self) -> impl Iterator<Item = Algebra> + '_ {
        self.entries.iter().map(|e| e.algebra(self.order))
    }

    /// Keeps the entries passing `filter`.
    pub fn filtered(&self, filter: Filter) -> Catalog {
        let entries = self
            .entries
            .par_iter()
            .filter(|e| filter.matches(&e.algebra(self.order), &e.class))
            .cloned()
            .collect();
        Catalog {
            order: self.order,
            filter: Some(filter),
            entries,
        }
    }

    /// Number of entries per class vector, keyed like `bcc,bck,bci`.
    pub fn class_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            let c = &e.class;
            let key = [
                ("bcc", c.is_bcc),
                ("bck", c.is_bck),
                ("bci", c.is_bci),
                ("proper", c.is_proper),
            ]
            .iter()
            .filter(|(_, on)| *on)
            .map(|(k, _)| *k)
            .join(",");
            let key = if key.is_empty() {
                "weakbcc".to_string()
            } else {
                key
            };
            *counts.entry(key).or_insert(0) += 1;
        }
        counts
    }

    /// Writes `<root>/order-<n>/<hash>.bcc` per entry plus `index.json`.
    /// Returns the order directory.
    pub fn save(&self, root: &Path) -> Result<PathBuf, EnumerateError> {
        let dir = root.join(format!("order-{}", self.order));
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let mut index = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let hash = e.short_hash();
            let file = format!("{hash}.bcc");
            let a = e
                .algebra(self.order)
                .with_name(format!("order-{}-{hash}", self.order));
            let path = dir.join(&file);
            fs::write(&path, a.to_bcc()).map_err(io_err(&path))?;
            index.push(serde_json::json!({
                "file": file,
                "table": e.table,
                "class": e.class,
            }));
        }
        let doc = serde_json::json!({
            "order": self.order,
            "filter": self.filter,
            "count": self.entries.len(),
            "entries": index,
        });
        let path = dir.join("index.json");
        let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
        fs::write(&path, text).map_err(io_err(&path))?;
        Ok(dir)
    }
}

/// Loads every `.bcc` file in `dir` and in its `order-*` subdirectories,
/// in path order.
pub fn load_algebras(dir: &Path) -> Result<Vec<Algebra>, EnumerateError> {
    let mut files = Vec::new();
    let mut dirs = vec![dir.to_path_buf()];
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        let is_order_dir = path
            .file_name()
            .and_then(|s| s.to_str())
            .is_some_and(|s| s.starts_with("order-"));
        if path.is_dir() && is_order_dir {
            dirs.push(path);
        }
    }
    for d in &dirs {
        for entry in fs::read_dir(d).map_err(io_err(d))? {
            let path = entry.map_err(io_err(d))?.path();
            if path.extension().is_some_and(|e| e == "bcc") {
                files.push(path);
            }
        }
    }
    files.sort();
    files
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            parse_table(&text).map_err(|source| EnumerateError::Parse { path, source })
        })
        .collect()
}

/// Free cells in search order: row by row, skipping column 0 and the
/// diagonal.
fn free_cells(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .cartesian_product(1..n)
        .filter(|&(x, y)| x != y)
        .collect()
}

fn seed_table(n: usize) -> Vec<u8> {
    let mut t = vec![UNDEF; n * n];
    for x in 0..n {
        t[x * n] = x as u8;
        t[x * n + x] = 0;
    }
    t
}

/// Whether the assignment just made at `(p, q)` keeps (i) and (iv)
/// satisfiable on the defined part.
fn locally_consistent(t: &[u8], n: usize, p: usize, q: usize) -> bool {
    if t[p * n + q] == 0 && t[q * n + p] == 0 {
        return false;
    }
    let at = |x: u8, y: u8| -> u8 {
        if x == UNDEF || y == UNDEF {
            UNDEF
        } else {
            t[x as usize * n + y as usize]
        }
    };
    for x in 0..n {
        for y in 0..n {
            let xy = t[x * n + y];
            if xy == UNDEF {
                continue;
            }
            for z in 0..n {
                let zy = t[z * n + y];
                let xz = t[x * n + z];
                if zy == UNDEF || xz == UNDEF {
                    continue;
                }
                let v = at(at(xy, zy), xz);
                if v != UNDEF && v != 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn search(t: &mut Vec<u8>, n: usize, cells: &[(usize, usize)], k: usize, out: &mut Vec<Vec<u8>>) {
    if k == cells.len() {
        if is_canonical(t, n) {
            out.push(t.clone());
        }
        return;
    }
    let (p, q) = cells[k];
    for v in 0..n as u8 {
        t[p * n + q] = v;
        if locally_consistent(t, n, p, q) {
            search(t, n, cells, k + 1, out);
        }
    }
    t[p * n + q] = UNDEF;
}

/// Canonical tables of all weak BCC-algebras of order `n`, sorted.
pub fn enumerate_tables(n: usize) -> Result<Vec<Vec<u8>>, EnumerateError> {
    if n == 0 {
        return Err(EnumerateError::ZeroOrder);
    }
    if n > u8::MAX as usize - 1 || n > crate::model::MAX_ORDER {
        return Err(EnumerateError::TooLarge(n));
    }
    let cells = free_cells(n);
    let split = cells.len().min(2);
    let prefixes: Vec<Vec<u8>> = (0..split)
        .map(|_| 0..n as u8)
        .multi_cartesian_product()
        .collect();
    let prefixes = if prefixes.is_empty() {
        vec![Vec::new()]
    } else {
        prefixes
    };

    let mut tables: Vec<Vec<u8>> = prefixes
        .par_iter()
        .flat_map_iter(|prefix| {
            let mut t = seed_table(n);
            let mut out = Vec::new();
            for (k, &v) in prefix.iter().enumerate() {
                let (p, q) = cells[k];
                t[p * n + q] = v;
                if !locally_consistent(&t, n, p, q) {
                    return out;
                }
            }
            search(&mut t, n, &cells, split, &mut out);
            out
        })
        .collect();
    tables.sort();
    Ok(tables)
}

/// All weak BCC-algebras of order `n` up to isomorphism, optionally
/// restricted to those passing `filter`.
pub fn enumerate_order(n: usize, filter: Option<Filter>) -> Result<Catalog, EnumerateError> {
    let tables = enumerate_tables(n)?;
    let entries = tables
        .into_par_iter()
        .map(|table| {
            let a = Algebra::from_bytes(n, &table).expect("valid table");
            debug_assert!(is_weak_bcc(&a));
            CatalogEntry {
                class: classify(&a),
                table,
            }
        })
        .collect();
    let all = Catalog {
        order: n,
        filter: None,
        entries,
    };
    Ok(match filter {
        Some(f) => all.filtered(f),
        None => all,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_tables(1).unwrap().len(), 1);
        let two = enumerate_tables(2).unwrap();
        assert_eq!(two, vec![vec![0, 0, 1, 0], vec![0, 1, 1, 0]]);
        assert!(matches!(
            enumerate_tables(0),
            Err(EnumerateError::ZeroOrder)
        ));
    }

    #[test]
    fn canonical_form_of_trivial_algebra() {
        assert_eq!(canonical_form(&fixtures::triv1()), vec![0]);
    }

    #[test]
    fn identity_certificate() {
        let a = fixtures::ex28();
        let c = are_isomorphic(&a, &a).unwrap();
        assert_eq!(c.mapping, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn relabelled_copy_is_isomorphic() {
        let a = fixtures::ex31();
        let b = a.relabel(&[0, 3, 4, 1, 2]).unwrap();
        let c = are_isomorphic(&a, &b).unwrap();
        assert!(c.verify(&a, &b));
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn non_isomorphic_pairs() {
        let chain = Algebra::from_rows(&[vec![0, 0], vec![1, 0]]).unwrap();
        assert!(are_isomorphic(&fixtures::z2gl(), &chain).is_none());
        assert!(are_isomorphic(&fixtures::ex31(), &fixtures::ex56()).is_none());
        assert!(are_isomorphic(&fixtures::ex31(), &fixtures::e63()).is_none());
    }

    #[test]
    fn bad_certificates_are_rejected() {
        let a = fixtures::e77();
        let bad = IsoCertificate {
            mapping: vec![0, 2, 1, 3],
        };
        assert!(!bad.verify(&a, &a));
        let short = IsoCertificate {
            mapping: vec![0, 1],
        };
        assert!(!short.verify(&a, &a));
    }

    #[test]
    fn filter_names_round_trip() {
        for f in Filter::ALL {
            assert_eq!(f.name().parse::<Filter>().unwrap(), f);
            assert_eq!(serde_json::to_value(f).unwrap(), f.name());
        }
        assert!("nope".parse::<Filter>().is_err());
    }
}
