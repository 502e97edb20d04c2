//! Every chapter listed in the guide's summary must be compiled as doc tests.

use std::fs;
use std::path::Path;

#[test]
fn every_chapter_is_doctested() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let summary = fs::read_to_string(root.join("book/src/SUMMARY.md")).unwrap();
    let lib = fs::read_to_string(root.join("crates/core/src/lib.rs")).unwrap();
    let chapters: Vec<&str> = summary
        .split("](")
        .skip(1)
        .filter_map(|rest| rest.split(')').next())
        .collect();
    assert!(chapters.len() >= 8, "{chapters:?}");
    for ch in chapters {
        assert!(root.join("book/src").join(ch).exists(), "{ch} missing");
        let include = format!("include_str!(\"../../../book/src/{ch}\")");
        assert!(lib.contains(&include), "{ch} is not doc-tested");
    }
}
