//! Exercises the C entry points directly and cross-checks every answer
//! against the underlying library.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use rangemine::encoding::ItemVocabulary;
use rangemine::ingest::{encode_table, make_var_specs, Column, Table, Value};
use rangemine::mine_closed;
use rangemine::pattern::Language;
use rangemine_ffi::*;

unsafe fn last_error() -> Option<String> {
    let p = rm_last_error();
    if p.is_null() {
        None
    } else {
        Some(CStr::from_ptr(p).to_str().unwrap().to_string())
    }
}

unsafe fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    rm_string_free(p);
    s
}

/// Two-call id fetch through any of the buffer-protocol functions.
unsafe fn fetch_ids(f: impl Fn(*mut u32, usize, *mut usize) -> RmStatus) -> Vec<u32> {
    let mut len = 0usize;
    assert_eq!(f(ptr::null_mut(), 0, &mut len), RmStatus::Ok);
    let mut buf = vec![0u32; len];
    assert_eq!(f(buf.as_mut_ptr(), buf.len(), &mut len), RmStatus::Ok);
    buf.truncate(len);
    buf
}

fn reference_table() -> Table {
    Table {
        columns: vec![
            Column {
                name: "len".into(),
                values: vec![Value::Point(0.5), Value::Point(2.4), Value::Point(2.5)],
            },
            Column {
                name: "wid".into(),
                values: vec![
                    Value::Interval(rangemine::Interval::new(0.0, 2.0).unwrap()),
                    Value::Interval(rangemine::Interval::new(1.0, 4.0).unwrap()),
                    Value::Interval(rangemine::Interval::new(2.0, 3.0).unwrap()),
                ],
            },
        ],
        labels: None,
        n_rows: 3,
    }
}

unsafe fn build_reference_table() -> *mut RmTable {
    let t = rm_table_new();
    let name = CString::new("len").unwrap();
    let values = [0.5, 2.4, 2.5];
    assert_eq!(
        rm_table_add_point_column(t, name.as_ptr(), values.as_ptr(), values.len()),
        RmStatus::Ok
    );
    let name = CString::new("wid").unwrap();
    let lo = [0.0, 1.0, 2.0];
    let hi = [2.0, 4.0, 3.0];
    assert_eq!(
        rm_table_add_interval_column(t, name.as_ptr(), lo.as_ptr(), hi.as_ptr(), 3),
        RmStatus::Ok
    );
    t
}

#[test]
fn point_and_interval_pipeline_matches_the_library() {
    unsafe {
        let t = build_reference_table();
        assert_eq!(rm_table_row_count(t), 3);
        assert_eq!(rm_table_column_count(t), 2);

        let mut ds: *mut RmDataset = ptr::null_mut();
        assert_eq!(
            rm_dataset_encode(t, RM_LANGUAGE_I, 2, ptr::null(), 0, &mut ds),
            RmStatus::Ok
        );
        rm_table_free(t);

        // The same pipeline straight through the library.
        let table = reference_table();
        let specs = make_var_specs(&table, 2, &[]).unwrap();
        let vocab = ItemVocabulary::new(Language::I, specs).unwrap();
        let expected_ds = encode_table("dataset", &table, &vocab).unwrap();
        let expected = mine_closed(&expected_ds, 1).unwrap();

        assert_eq!(rm_dataset_object_count(ds), 3);
        assert_eq!(rm_dataset_item_count(ds), vocab.len());
        for (i, obj) in expected_ds.objects().iter().enumerate() {
            let got = fetch_ids(|buf, cap, len| rm_dataset_object_items(ds, i, buf, cap, len));
            let want: Vec<u32> = obj.items.iter().map(|x| x as u32).collect();
            assert_eq!(got, want, "object {i}");
        }

        let mut concepts: *mut RmConcepts = ptr::null_mut();
        assert_eq!(rm_mine(ds, 1, &mut concepts), RmStatus::Ok);
        assert_eq!(rm_concepts_count(concepts), expected.len());
        for (i, c) in expected.iter().enumerate() {
            let mut support = 0usize;
            assert_eq!(rm_concepts_support(concepts, i, &mut support), RmStatus::Ok);
            assert_eq!(support, c.support());

            let extent = fetch_ids(|buf, cap, len| rm_concepts_extent(concepts, i, buf, cap, len));
            let want: Vec<u32> = c.extent.iter().map(|x| x as u32).collect();
            assert_eq!(extent, want);

            let intent = fetch_ids(|buf, cap, len| rm_concepts_intent(concepts, i, buf, cap, len));
            let want: Vec<u32> = c.intent.iter().map(|x| x as u32).collect();
            assert_eq!(intent, want);

            let mut text: *mut c_char = ptr::null_mut();
            assert_eq!(
                rm_concepts_interpretation(concepts, i, &mut text),
                RmStatus::Ok
            );
            assert_eq!(take_string(text), vocab.interpretation(&c.intent).unwrap());
        }

        // Interpreting a concept's own itemset gives the same statement.
        let intent = fetch_ids(|buf, cap, len| rm_concepts_intent(concepts, 0, buf, cap, len));
        let mut via_items: *mut c_char = ptr::null_mut();
        assert_eq!(
            rm_dataset_interpret_items(ds, intent.as_ptr(), intent.len(), &mut via_items),
            RmStatus::Ok
        );
        let mut via_concept: *mut c_char = ptr::null_mut();
        assert_eq!(
            rm_concepts_interpretation(concepts, 0, &mut via_concept),
            RmStatus::Ok
        );
        assert_eq!(take_string(via_items), take_string(via_concept));

        // The empty itemset constrains nothing.
        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(
            rm_dataset_interpret_items(ds, ptr::null(), 0, &mut text),
            RmStatus::Ok
        );
        assert_eq!(take_string(text), "always");

        // Atom texts exist for every item.
        for item in 0..rm_dataset_item_count(ds) {
            let mut text: *mut c_char = ptr::null_mut();
            assert_eq!(rm_dataset_item_text(ds, item, &mut text), RmStatus::Ok);
            assert_eq!(take_string(text), vocab.atom_text(item));
        }

        rm_concepts_free(concepts);
        rm_dataset_free(ds);
    }
}

#[test]
fn distribution_pipeline_matches_the_library() {
    unsafe {
        let t = rm_table_new();
        let name = CString::new("m").unwrap();
        let mu = [1.0, 2.0, 3.0];
        let sigma = [0.5, 0.5, 0.5];
        assert_eq!(
            rm_table_add_normal_column(t, name.as_ptr(), mu.as_ptr(), sigma.as_ptr(), 3),
            RmStatus::Ok
        );
        let name = CString::new("d").unwrap();
        let points = [1.0, 2.0, 2.0, 3.0, 1.0, 3.0, 4.0];
        let offsets = [0usize, 2, 4, 7];
        assert_eq!(
            rm_table_add_discrete_column(t, name.as_ptr(), points.as_ptr(), 7, offsets.as_ptr(), 3),
            RmStatus::Ok
        );

        let alphas = [0.1, 0.25];
        let mut ds: *mut RmDataset = ptr::null_mut();
        assert_eq!(
            rm_dataset_encode(t, RM_LANGUAGE_IC, 3, alphas.as_ptr(), 2, &mut ds),
            RmStatus::Ok
        );
        rm_table_free(t);

        let table = Table {
            columns: vec![
                Column {
                    name: "m".into(),
                    values: mu
                        .iter()
                        .zip(sigma)
                        .map(|(&m, s)| Value::Dist(rangemine::dist::Cdf::normal(m, s).unwrap()))
                        .collect(),
                },
                Column {
                    name: "d".into(),
                    values: offsets
                        .windows(2)
                        .map(|w| {
                            Value::Dist(
                                rangemine::dist::Cdf::discrete(points[w[0]..w[1]].to_vec())
                                    .unwrap(),
                            )
                        })
                        .collect(),
                },
            ],
            labels: None,
            n_rows: 3,
        };
        let specs = make_var_specs(&table, 3, &alphas).unwrap();
        let vocab = ItemVocabulary::new(Language::Ic, specs).unwrap();
        let expected_ds = encode_table("dataset", &table, &vocab).unwrap();
        let expected = mine_closed(&expected_ds, 1).unwrap();

        assert_eq!(rm_dataset_item_count(ds), vocab.len());
        let mut concepts: *mut RmConcepts = ptr::null_mut();
        assert_eq!(rm_mine(ds, 1, &mut concepts), RmStatus::Ok);
        assert_eq!(rm_concepts_count(concepts), expected.len());
        for (i, c) in expected.iter().enumerate() {
            let intent = fetch_ids(|buf, cap, len| rm_concepts_intent(concepts, i, buf, cap, len));
            let want: Vec<u32> = c.intent.iter().map(|x| x as u32).collect();
            assert_eq!(intent, want);
        }

        rm_concepts_free(concepts);
        rm_dataset_free(ds);
    }
}

#[test]
fn distribution_intervals_match_known_quantiles() {
    unsafe {
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        assert_eq!(
            rm_normal_interval(0.0, 1.0, 0.1, &mut lo, &mut hi),
            RmStatus::Ok
        );
        assert!((lo + 1.2815515655).abs() < 1e-6, "lo = {lo}");
        assert!((hi - 1.2815515655).abs() < 1e-6, "hi = {hi}");

        // Uniform mass on {1,2,3,4}: the 0.2-quantile sits below every
        // point (sentinel one gap under the minimum), the 0.8-quantile
        // is the maximum.
        let points = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(
            rm_discrete_interval(points.as_ptr(), 4, 0.2, &mut lo, &mut hi),
            RmStatus::Ok
        );
        assert_eq!((lo, hi), (0.0, 4.0));
    }
}

#[test]
fn failures_report_status_and_message() {
    unsafe {
        assert_eq!(rm_version(), rm_version());
        assert_eq!(
            CStr::from_ptr(rm_version()).to_str().unwrap(),
            env!("CARGO_PKG_VERSION")
        );

        // Null handle.
        let mut ds: *mut RmDataset = ptr::null_mut();
        assert_eq!(
            rm_dataset_encode(ptr::null(), RM_LANGUAGE_I, 2, ptr::null(), 0, &mut ds),
            RmStatus::NullPointer
        );
        assert!(last_error().unwrap().contains("table"));

        let t = build_reference_table();

        // Unknown language code.
        assert_eq!(
            rm_dataset_encode(t, 9, 2, ptr::null(), 0, &mut ds),
            RmStatus::InvalidArgument
        );
        assert!(last_error().unwrap().contains("language"));

        // Too few bins for a grid.
        assert_eq!(
            rm_dataset_encode(t, RM_LANGUAGE_I, 1, ptr::null(), 0, &mut ds),
            RmStatus::InvalidArgument
        );

        // Alpha levels demand distribution cells.
        let alphas = [0.1];
        assert_eq!(
            rm_dataset_encode(t, RM_LANGUAGE_I, 2, alphas.as_ptr(), 1, &mut ds),
            RmStatus::Data
        );
        assert!(last_error().unwrap().contains("not a distribution"));

        // Mismatched column length and duplicate names are rejected.
        let name = CString::new("extra").unwrap();
        let vals = [1.0];
        assert_eq!(
            rm_table_add_point_column(t, name.as_ptr(), vals.as_ptr(), 1),
            RmStatus::InvalidArgument
        );
        let name = CString::new("len").unwrap();
        let vals = [1.0, 2.0, 3.0];
        assert_eq!(
            rm_table_add_point_column(t, name.as_ptr(), vals.as_ptr(), 3),
            RmStatus::InvalidArgument
        );
        assert!(last_error().unwrap().contains("already exists"));

        // Non-finite measurements are rejected up front.
        let name = CString::new("bad").unwrap();
        let vals = [f64::NAN, 1.0, 2.0];
        assert_eq!(
            rm_table_add_point_column(t, name.as_ptr(), vals.as_ptr(), 3),
            RmStatus::InvalidArgument
        );

        // Backwards interval.
        let name = CString::new("iv").unwrap();
        let lo = [2.0, 1.0, 1.0];
        let hi = [1.0, 2.0, 2.0];
        assert_eq!(
            rm_table_add_interval_column(t, name.as_ptr(), lo.as_ptr(), hi.as_ptr(), 3),
            RmStatus::InvalidArgument
        );

        // Bad discrete offsets: wrong end, and an empty row.
        let name = CString::new("d1").unwrap();
        let points = [1.0, 2.0];
        let offsets = [0usize, 1, 1, 3];
        assert_eq!(
            rm_table_add_discrete_column(t, name.as_ptr(), points.as_ptr(), 2, offsets.as_ptr(), 3),
            RmStatus::InvalidArgument
        );
        let offsets = [0usize, 1, 1, 2];
        assert_eq!(
            rm_table_add_discrete_column(t, name.as_ptr(), points.as_ptr(), 2, offsets.as_ptr(), 3),
            RmStatus::InvalidArgument
        );
        assert!(last_error().unwrap().contains("non-empty"));

        // A successful call clears the message.
        let mut good: *mut RmDataset = ptr::null_mut();
        assert_eq!(
            rm_dataset_encode(t, RM_LANGUAGE_I, 2, ptr::null(), 0, &mut good),
            RmStatus::Ok
        );
        assert_eq!(last_error(), None);
        rm_table_free(t);

        // Out-of-range indexes and undersized buffers.
        let mut concepts: *mut RmConcepts = ptr::null_mut();
        assert_eq!(rm_mine(good, 1, &mut concepts), RmStatus::Ok);
        let n = rm_concepts_count(concepts);
        let mut support = 0usize;
        assert_eq!(
            rm_concepts_support(concepts, n, &mut support),
            RmStatus::OutOfRange
        );
        let mut len = 0usize;
        let wide = (0..n)
            .find(|&i| {
                assert_eq!(
                    rm_concepts_intent(concepts, i, ptr::null_mut(), 0, &mut len),
                    RmStatus::Ok
                );
                len >= 2
            })
            .expect("some concept constrains at least two atoms");
        let mut tiny = [0u32; 1];
        let status = rm_concepts_intent(concepts, wide, tiny.as_mut_ptr(), 1, &mut len);
        assert_eq!(status, RmStatus::BufferTooSmall);
        assert!(len > 1, "intent {wide} has {len} items");

        // Item ids outside the vocabulary cannot be interpreted.
        let bad = [u32::MAX];
        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(
            rm_dataset_interpret_items(good, bad.as_ptr(), 1, &mut text),
            RmStatus::OutOfRange
        );

        // Mining needs a positive support threshold.
        let mut none: *mut RmConcepts = ptr::null_mut();
        assert_eq!(rm_mine(good, 0, &mut none), RmStatus::InvalidArgument);

        rm_concepts_free(concepts);
        rm_dataset_free(good);

        // Frees ignore null.
        rm_table_free(ptr::null_mut());
        rm_dataset_free(ptr::null_mut());
        rm_concepts_free(ptr::null_mut());
        rm_string_free(ptr::null_mut());
    }
}
