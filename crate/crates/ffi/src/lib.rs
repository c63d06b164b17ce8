//! C interface for the `rangemine` library.
//!
//! The API follows a handle-and-status-code convention: opaque handles
//! (`RmTable`, `RmDataset`, `RmConcepts`) are created and freed by paired
//! functions, every fallible call returns an [`RmStatus`], and outputs go
//! through out-pointers. After any non-`OK` status, [`rm_last_error`]
//! returns a message describing what went wrong on the current thread.
//!
//! The typical flow mirrors the library: build a table column by column,
//! encode it into an itemset dataset under one of the four pattern
//! languages, mine the closed patterns, and read supports, extents,
//! intents, and plain-text interpretations back out.

// Doc comments here become the C header; each function states its pointer
// contract inline instead of in a Rust-style `# Safety` section.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rangemine::dist::Cdf;
use rangemine::encoding::{EncodedDataset, ItemVocabulary};
use rangemine::ingest::{encode_table, make_var_specs, Column, Table, Value};
use rangemine::pattern::Language;
use rangemine::{mine_closed, BitSet, Concept, Error, Interval};

/// Scalar-threshold language: atoms `y > s` and `y <= s`. Point data only.
pub const RM_LANGUAGE_NUM: u32 = 0;
/// Containment language: patterns state `within ]l, r]`.
pub const RM_LANGUAGE_C: u32 = 1;
/// Intersection language: patterns state `intersects` / `contains`.
pub const RM_LANGUAGE_I: u32 = 2;
/// Product of the containment and intersection languages.
pub const RM_LANGUAGE_IC: u32 = 3;

/// Outcome of a fallible call. Anything but `OK` leaves a message
/// retrievable through `rm_last_error` on the calling thread.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument violated the documented contract.
    InvalidArgument = 2,
    /// The data itself cannot be processed (bad cell, mixed kinds, ...).
    Data = 3,
    /// An index was past the end of the collection it addresses.
    OutOfRange = 4,
    /// The caller's buffer is shorter than the result; the required
    /// length was written to the length out-pointer.
    BufferTooSmall = 5,
    /// An internal invariant failed; the handle should be freed.
    Panic = 6,
}

/// An input table under construction: named columns of equal length whose
/// cells are points, intervals, or distributions.
pub struct RmTable {
    columns: Vec<Column>,
}

/// An encoded dataset: the item vocabulary of a table under one pattern
/// language plus one itemset per row.
pub struct RmDataset {
    ds: EncodedDataset,
}

/// The closed patterns mined from a dataset, ordered by descending
/// support, ties by ascending intent.
pub struct RmConcepts {
    concepts: Vec<Concept>,
    vocab: ItemVocabulary,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail {
    status: RmStatus,
    message: String,
}

impl Fail {
    fn new(status: RmStatus, message: impl Into<String>) -> Self {
        Fail {
            status,
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        Fail::new(RmStatus::NullPointer, format!("`{what}` is null"))
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Data(_) | Error::Io(_) | Error::Csv(_) => RmStatus::Data,
            _ => RmStatus::InvalidArgument,
        };
        Fail::new(status, e.to_string())
    }
}

type FfiResult = Result<(), Fail>;

/// Run `f`, translating failures and panics into status codes and the
/// thread-local error message.
fn run(f: impl FnOnce() -> FfiResult) -> RmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| e.borrow_mut().take());
            RmStatus::Ok
        }
        Ok(Err(fail)) => {
            set_error(&fail.message);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("internal panic: {msg}"));
            RmStatus::Panic
        }
    }
}

fn set_error(msg: &str) {
    let sanitized: String = msg
        .chars()
        .map(|c| if c == '\0' { ' ' } else { c })
        .collect();
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = Some(CString::new(sanitized).expect("nul bytes removed"));
    });
}

unsafe fn ref_from<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::null(what))
}

unsafe fn mut_from<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail::null(what))
}

/// A slice argument: `ptr` may be null only when `len` is zero.
unsafe fn slice_from<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string_from(p: *const c_char, what: &str) -> Result<String, Fail> {
    if p.is_null() {
        return Err(Fail::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(|s| s.to_string())
        .map_err(|_| Fail::new(RmStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

fn check_finite(values: &[f64], what: &str) -> FfiResult {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Fail::new(
            RmStatus::InvalidArgument,
            format!("`{what}` contains the non-finite value {v}"),
        ));
    }
    Ok(())
}

impl RmTable {
    fn push_column(&mut self, name: String, values: Vec<Value>) -> FfiResult {
        if let Some(first) = self.columns.first() {
            if first.values.len() != values.len() {
                return Err(Fail::new(
                    RmStatus::InvalidArgument,
                    format!(
                        "column `{name}` has {} rows but the table has {}",
                        values.len(),
                        first.values.len()
                    ),
                ));
            }
        }
        if self.columns.iter().any(|c| c.name == name) {
            return Err(Fail::new(
                RmStatus::InvalidArgument,
                format!("column `{name}` already exists"),
            ));
        }
        self.columns.push(Column { name, values });
        Ok(())
    }

    fn to_table(&self) -> Result<Table, Fail> {
        let n_rows = self.columns.first().map_or(0, |c| c.values.len());
        if self.columns.is_empty() || n_rows == 0 {
            return Err(Fail::new(
                RmStatus::InvalidArgument,
                "the table has no data",
            ));
        }
        Ok(Table {
            columns: self.columns.clone(),
            labels: None,
            n_rows,
        })
    }
}

/// The message describing this thread's most recent failure, or null if
/// the last call on this thread succeeded. The pointer stays valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn rm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// The library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn rm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Free a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create an empty table. Free it with `rm_table_free`.
#[no_mangle]
pub extern "C" fn rm_table_new() -> *mut RmTable {
    Box::into_raw(Box::new(RmTable {
        columns: Vec::new(),
    }))
}

/// Free a table. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rm_table_free(table: *mut RmTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of rows in the table (0 for null or empty).
#[no_mangle]
pub unsafe extern "C" fn rm_table_row_count(table: *const RmTable) -> usize {
    table
        .as_ref()
        .and_then(|t| t.columns.first())
        .map_or(0, |c| c.values.len())
}

/// Number of columns in the table (0 for null).
#[no_mangle]
pub unsafe extern "C" fn rm_table_column_count(table: *const RmTable) -> usize {
    table.as_ref().map_or(0, |t| t.columns.len())
}

/// Append a column of scalar measurements. All columns of a table must
/// have the same length, and column names must be unique.
#[no_mangle]
pub unsafe extern "C" fn rm_table_add_point_column(
    table: *mut RmTable,
    name: *const c_char,
    values: *const f64,
    len: usize,
) -> RmStatus {
    run(|| {
        let t = mut_from(table, "table")?;
        let name = string_from(name, "name")?;
        let values = slice_from(values, len, "values")?;
        check_finite(values, "values")?;
        t.push_column(name, values.iter().map(|&y| Value::Point(y)).collect())
    })
}

/// Append a column of half-open intervals `]lo[i], hi[i]]`; each lower
/// bound must be strictly below its upper bound.
#[no_mangle]
pub unsafe extern "C" fn rm_table_add_interval_column(
    table: *mut RmTable,
    name: *const c_char,
    lo: *const f64,
    hi: *const f64,
    len: usize,
) -> RmStatus {
    run(|| {
        let t = mut_from(table, "table")?;
        let name = string_from(name, "name")?;
        let lo = slice_from(lo, len, "lo")?;
        let hi = slice_from(hi, len, "hi")?;
        let values = lo
            .iter()
            .zip(hi)
            .map(|(&l, &h)| Ok(Value::Interval(Interval::new(l, h)?)))
            .collect::<Result<_, Fail>>()?;
        t.push_column(name, values)
    })
}

/// Append a column of normal distributions `N(mu[i], sigma[i])`; every
/// sigma must be positive.
#[no_mangle]
pub unsafe extern "C" fn rm_table_add_normal_column(
    table: *mut RmTable,
    name: *const c_char,
    mu: *const f64,
    sigma: *const f64,
    len: usize,
) -> RmStatus {
    run(|| {
        let t = mut_from(table, "table")?;
        let name = string_from(name, "name")?;
        let mu = slice_from(mu, len, "mu")?;
        let sigma = slice_from(sigma, len, "sigma")?;
        let values = mu
            .iter()
            .zip(sigma)
            .map(|(&m, &s)| Ok(Value::Dist(Cdf::normal(m, s)?)))
            .collect::<Result<_, Fail>>()?;
        t.push_column(name, values)
    })
}

/// Append a column of discrete distributions, each row a uniform mass
/// over its own list of points. Row `i` takes
/// `points[offsets[i] .. offsets[i+1]]`; `offsets` has `len + 1` entries
/// starting at 0, non-decreasing, ending at the total number of points,
/// and every row needs at least one point.
#[no_mangle]
pub unsafe extern "C" fn rm_table_add_discrete_column(
    table: *mut RmTable,
    name: *const c_char,
    points: *const f64,
    n_points: usize,
    offsets: *const usize,
    len: usize,
) -> RmStatus {
    run(|| {
        let t = mut_from(table, "table")?;
        let name = string_from(name, "name")?;
        let points = slice_from(points, n_points, "points")?;
        let offsets = slice_from(offsets, len.checked_add(1).unwrap(), "offsets")?;
        if offsets.first() != Some(&0) || offsets.last() != Some(&n_points) {
            return Err(Fail::new(
                RmStatus::InvalidArgument,
                "`offsets` must start at 0 and end at `n_points`",
            ));
        }
        let values = offsets
            .windows(2)
            .map(|w| {
                if w[1] < w[0] {
                    return Err(Fail::new(
                        RmStatus::InvalidArgument,
                        "`offsets` must be non-decreasing",
                    ));
                }
                Ok(Value::Dist(Cdf::discrete(points[w[0]..w[1]].to_vec())?))
            })
            .collect::<Result<_, Fail>>()?;
        t.push_column(name, values)
    })
}

fn language_from(code: u32) -> Result<Language, Fail> {
    match code {
        RM_LANGUAGE_NUM => Ok(Language::Num),
        RM_LANGUAGE_C => Ok(Language::C),
        RM_LANGUAGE_I => Ok(Language::I),
        RM_LANGUAGE_IC => Ok(Language::Ic),
        other => Err(Fail::new(
            RmStatus::InvalidArgument,
            format!("unknown language code {other}; use the RM_LANGUAGE_* constants"),
        )),
    }
}

/// Encode a table into an itemset dataset.
///
/// Every variable gets an equal-width grid of `bins` cells over its
/// observed range. `language` is one of the `RM_LANGUAGE_*` constants.
/// For distribution-valued columns, pass one or more alpha levels in
/// `]0, 0.5[`; each level contributes its own interval per row. Leave
/// `alphas` empty for point or interval data. On success `*out` owns the
/// dataset; free it with `rm_dataset_free`.
#[no_mangle]
pub unsafe extern "C" fn rm_dataset_encode(
    table: *const RmTable,
    language: u32,
    bins: usize,
    alphas: *const f64,
    n_alphas: usize,
    out: *mut *mut RmDataset,
) -> RmStatus {
    run(|| {
        let t = ref_from(table, "table")?;
        let out = mut_from(out, "out")?;
        let alphas = slice_from(alphas, n_alphas, "alphas")?;
        let language = language_from(language)?;
        let data = t.to_table()?;
        let specs = make_var_specs(&data, bins, alphas)?;
        let vocab = ItemVocabulary::new(language, specs)?;
        let ds = encode_table("dataset", &data, &vocab)?;
        *out = Box::into_raw(Box::new(RmDataset { ds }));
        Ok(())
    })
}

/// Free a dataset. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rm_dataset_free(dataset: *mut RmDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// Number of objects (rows) in the dataset (0 for null).
#[no_mangle]
pub unsafe extern "C" fn rm_dataset_object_count(dataset: *const RmDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.ds.n_objects())
}

/// Number of items in the dataset's vocabulary (0 for null).
#[no_mangle]
pub unsafe extern "C" fn rm_dataset_item_count(dataset: *const RmDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.ds.vocab().len())
}

/// Write the ids present in `set` to `buf` (ascending) and the true
/// length to `*out_len`. A null `buf` just reports the length, so call
/// once with null, size the buffer, and call again.
fn fill_ids(set: &BitSet, buf: *mut u32, cap: usize, out_len: *mut usize) -> FfiResult {
    let out_len = unsafe { mut_from(out_len, "out_len")? };
    *out_len = set.count();
    if buf.is_null() {
        return Ok(());
    }
    if cap < *out_len {
        return Err(Fail::new(
            RmStatus::BufferTooSmall,
            format!("need room for {} ids, buffer holds {cap}", *out_len),
        ));
    }
    for (slot, id) in set.iter().enumerate() {
        unsafe { *buf.add(slot) = id as u32 };
    }
    Ok(())
}

/// Item ids of one object's itemset, ascending; same two-call protocol
/// as `rm_concepts_extent`.
#[no_mangle]
pub unsafe extern "C" fn rm_dataset_object_items(
    dataset: *const RmDataset,
    object: usize,
    buf: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> RmStatus {
    run(|| {
        let d = ref_from(dataset, "dataset")?;
        let obj = d.ds.objects().get(object).ok_or_else(|| {
            Fail::new(
                RmStatus::OutOfRange,
                format!("object {object} of {}", d.ds.n_objects()),
            )
        })?;
        fill_ids(&obj.items, buf, cap, out_len)
    })
}

/// The atom behind one item id, e.g. `len > 2.38`, as a fresh string in
/// `*out`; free it with `rm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn rm_dataset_item_text(
    dataset: *const RmDataset,
    item: usize,
    out: *mut *mut c_char,
) -> RmStatus {
    run(|| {
        let d = ref_from(dataset, "dataset")?;
        let out = mut_from(out, "out")?;
        if item >= d.ds.vocab().len() {
            return Err(Fail::new(
                RmStatus::OutOfRange,
                format!("item {item} of {}", d.ds.vocab().len()),
            ));
        }
        let text = d.ds.vocab().atom_text(item);
        *out = CString::new(text)
            .map_err(|_| Fail::new(RmStatus::Panic, "atom text held a nul byte"))?
            .into_raw();
        Ok(())
    })
}

/// Decode an arbitrary itemset into the per-variable range statements it
/// expresses, as a fresh string in `*out`; free it with `rm_string_free`.
/// Fails if the ids do not form the maximal representation of a pattern.
#[no_mangle]
pub unsafe extern "C" fn rm_dataset_interpret_items(
    dataset: *const RmDataset,
    items: *const u32,
    n_items: usize,
    out: *mut *mut c_char,
) -> RmStatus {
    run(|| {
        let d = ref_from(dataset, "dataset")?;
        let out = mut_from(out, "out")?;
        let items = slice_from(items, n_items, "items")?;
        let n = d.ds.vocab().len();
        let mut set = BitSet::new(n);
        for &id in items {
            if id as usize >= n {
                return Err(Fail::new(RmStatus::OutOfRange, format!("item {id} of {n}")));
            }
            set.insert(id as usize);
        }
        let text = d.ds.vocab().interpretation(&set)?;
        *out = CString::new(text)
            .map_err(|_| Fail::new(RmStatus::Panic, "interpretation held a nul byte"))?
            .into_raw();
        Ok(())
    })
}

/// Mine every closed pattern with at least `min_support` supporting
/// objects (`min_support >= 1`). On success `*out` owns the result; free
/// it with `rm_concepts_free`.
#[no_mangle]
pub unsafe extern "C" fn rm_mine(
    dataset: *const RmDataset,
    min_support: usize,
    out: *mut *mut RmConcepts,
) -> RmStatus {
    run(|| {
        let d = ref_from(dataset, "dataset")?;
        let out = mut_from(out, "out")?;
        let concepts = mine_closed(&d.ds, min_support)?;
        *out = Box::into_raw(Box::new(RmConcepts {
            concepts,
            vocab: d.ds.vocab().clone(),
        }));
        Ok(())
    })
}

/// Free a mining result. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rm_concepts_free(concepts: *mut RmConcepts) {
    if !concepts.is_null() {
        drop(Box::from_raw(concepts));
    }
}

/// Number of mined patterns (0 for null).
#[no_mangle]
pub unsafe extern "C" fn rm_concepts_count(concepts: *const RmConcepts) -> usize {
    concepts.as_ref().map_or(0, |c| c.concepts.len())
}

fn concept_at(c: &RmConcepts, index: usize) -> Result<&Concept, Fail> {
    c.concepts.get(index).ok_or_else(|| {
        Fail::new(
            RmStatus::OutOfRange,
            format!("concept {index} of {}", c.concepts.len()),
        )
    })
}

/// Support (number of objects) of one pattern, written to `*out`.
#[no_mangle]
pub unsafe extern "C" fn rm_concepts_support(
    concepts: *const RmConcepts,
    index: usize,
    out: *mut usize,
) -> RmStatus {
    run(|| {
        let c = ref_from(concepts, "concepts")?;
        let out = mut_from(out, "out")?;
        *out = concept_at(c, index)?.support();
        Ok(())
    })
}

/// Object ids supporting one pattern, ascending. Call with a null `buf`
/// to learn the length through `*out_len`, then with a buffer of at
/// least that capacity to receive the ids.
#[no_mangle]
pub unsafe extern "C" fn rm_concepts_extent(
    concepts: *const RmConcepts,
    index: usize,
    buf: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> RmStatus {
    run(|| {
        let c = ref_from(concepts, "concepts")?;
        fill_ids(&concept_at(c, index)?.extent, buf, cap, out_len)
    })
}

/// Item ids of one pattern's closed itemset, ascending; same two-call
/// protocol as `rm_concepts_extent`.
#[no_mangle]
pub unsafe extern "C" fn rm_concepts_intent(
    concepts: *const RmConcepts,
    index: usize,
    buf: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> RmStatus {
    run(|| {
        let c = ref_from(concepts, "concepts")?;
        fill_ids(&concept_at(c, index)?.intent, buf, cap, out_len)
    })
}

/// The range statements one pattern expresses, one per constrained
/// variable, `; `-joined (`always` for the unconstrained pattern), as a
/// fresh string in `*out`; free it with `rm_string_free`.
#[no_mangle]
pub unsafe extern "C" fn rm_concepts_interpretation(
    concepts: *const RmConcepts,
    index: usize,
    out: *mut *mut c_char,
) -> RmStatus {
    run(|| {
        let c = ref_from(concepts, "concepts")?;
        let out = mut_from(out, "out")?;
        let text = c.vocab.interpretation(&concept_at(c, index)?.intent)?;
        *out = CString::new(text)
            .map_err(|_| Fail::new(RmStatus::Panic, "interpretation held a nul byte"))?
            .into_raw();
        Ok(())
    })
}

/// The interval a normal distribution occupies at confidence level
/// `alpha` in `]0, 0.5[`: `]q(alpha), q(1 - alpha)]`, written to
/// `*out_lo` / `*out_hi`.
#[no_mangle]
pub unsafe extern "C" fn rm_normal_interval(
    mu: f64,
    sigma: f64,
    alpha: f64,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> RmStatus {
    run(|| {
        let out_lo = mut_from(out_lo, "out_lo")?;
        let out_hi = mut_from(out_hi, "out_hi")?;
        let iv = Cdf::normal(mu, sigma)?.delta(alpha)?;
        *out_lo = iv.lo();
        *out_hi = iv.hi();
        Ok(())
    })
}

/// The interval a uniform mass over `points` occupies at confidence
/// level `alpha` in `]0, 0.5[`; same convention as `rm_normal_interval`.
#[no_mangle]
pub unsafe extern "C" fn rm_discrete_interval(
    points: *const f64,
    n_points: usize,
    alpha: f64,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> RmStatus {
    run(|| {
        let out_lo = mut_from(out_lo, "out_lo")?;
        let out_hi = mut_from(out_hi, "out_hi")?;
        let points = slice_from(points, n_points, "points")?;
        let iv = Cdf::discrete(points.to_vec())?.delta(alpha)?;
        *out_lo = iv.lo();
        *out_hi = iv.hi();
        Ok(())
    })
}
