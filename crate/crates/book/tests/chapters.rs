use std::fs;
use std::path::Path;

#[test]
fn every_chapter_is_listed_and_included() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let summary = fs::read_to_string(root.join("../../book/src/SUMMARY.md")).unwrap();
    let lib = fs::read_to_string(root.join("src/lib.rs")).unwrap();
    let mut chapters: Vec<String> = fs::read_dir(root.join("../../book/src"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".md") && n != "SUMMARY.md")
        .collect();
    chapters.sort();
    assert!(!chapters.is_empty());
    for ch in chapters {
        assert!(
            summary.contains(&format!("({ch})")),
            "{ch} missing from SUMMARY.md"
        );
        assert!(
            lib.contains(&format!("book/src/{ch}\")")),
            "{ch} not included as a doctest module"
        );
    }
}
