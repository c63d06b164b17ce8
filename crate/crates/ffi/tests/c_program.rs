//! Compiles the C example against the generated header, links it to the
//! shared library, runs it, and checks the output against the library.

use std::path::PathBuf;
use std::process::Command;

use rangemine::encoding::ItemVocabulary;
use rangemine::ingest::{encode_table, make_var_specs, Column, Table, Value};
use rangemine::mine_closed;
use rangemine::pattern::Language;

fn expected_output() -> String {
    let table = Table {
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
    };
    let specs = make_var_specs(&table, 2, &[]).unwrap();
    let vocab = ItemVocabulary::new(Language::I, specs).unwrap();
    let ds = encode_table("dataset", &table, &vocab).unwrap();
    let concepts = mine_closed(&ds, 1).unwrap();

    let mut out = format!("version {}\n", env!("CARGO_PKG_VERSION"));
    out.push_str(&format!("concepts {}\n", concepts.len()));
    for c in &concepts {
        out.push_str(&format!(
            "{}\t{}\n",
            c.support(),
            vocab.interpretation(&c.intent).unwrap()
        ));
    }
    out.push_str("null-table status 1 message `table` is null\n");
    out
}

#[test]
fn c_example_compiles_links_and_agrees() {
    let cc = ["cc", "gcc", "clang"]
        .iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok());
    let Some(cc) = cc else {
        eprintln!("skipping: no C compiler on this machine");
        return;
    };

    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = locate_lib_dir();
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("mine");

    let compile = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(crate_dir.join("examples/mine.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lrangemine_ffi")
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("compiler runs");
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&exe)
        .env("LD_LIBRARY_PATH", &lib_dir)
        .output()
        .expect("example runs");
    assert!(
        run.status.success(),
        "example failed:\n{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout), expected_output());
}

/// The directory holding librangemine_ffi built alongside this test.
fn locate_lib_dir() -> PathBuf {
    // Tests land in target/<profile>/deps; the library in target/<profile>.
    let mut dir = std::env::current_exe().unwrap();
    dir.pop();
    if dir.ends_with("deps") {
        dir.pop();
    }
    let so = dir.join(shared_library_name());
    assert!(
        so.exists(),
        "expected the shared library at {}",
        so.display()
    );
    dir
}

fn shared_library_name() -> &'static str {
    if cfg!(target_os = "macos") {
        "librangemine_ffi.dylib"
    } else {
        "librangemine_ffi.so"
    }
}
