mod common;

use std::fs;
use std::io::Write;

use amcp::extraction::{extract_snapshot, ExtractError, ExtractOptions};
use tempfile::TempDir;

fn write_jar(path: &std::path::Path, entries: &[(&str, Vec<u8>)]) {
    let mut jar = zip::ZipWriter::new(fs::File::create(path).unwrap());
    let options = zip::write::SimpleFileOptions::default().compression_method(zip::CompressionMethod::Deflated);
    for (name, bytes) in entries {
        jar.start_file(*name, options).unwrap();
        jar.write_all(bytes).unwrap();
    }
    jar.finish().unwrap();
}

fn entries() -> Vec<(&'static str, Vec<u8>)> {
    vec![
        ("META-INF/MANIFEST.MF", b"Manifest-Version: 1.0\n".to_vec()),
        (
            "a/Main.class",
            common::simple_class("a/Main", &["a/util/Helper", "java/util/List"]),
        ),
        ("a/Main$Inner.class", common::simple_class("a/Main$Inner", &["a/Model"])),
        ("a/Model.class", common::simple_class("a/Model", &[])),
        (
            "a/util/Helper.class",
            common::simple_class("a/util/Helper", &["[La/Model;"]),
        ),
        ("a/package-info.class", common::simple_class("a/package-info", &[])),
        ("module-info.class", common::simple_class("module-info", &[])),
    ]
}

#[test]
fn jar_and_directory_agree() {
    let dir = TempDir::new().unwrap();
    let jar = dir.path().join("app.jar");
    write_jar(&jar, &entries());
    let tree = dir.path().join("classes");
    for (name, bytes) in entries() {
        let path = tree.join(name);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, bytes).unwrap();
    }

    let options = ExtractOptions::default();
    let (from_jar, manifest) = extract_snapshot(&jar, "v1", &options).unwrap();
    let (from_tree, _) = extract_snapshot(&tree, "v1", &options).unwrap();
    assert_eq!(from_jar, from_tree);

    assert_eq!(from_jar.graph.modules(), ["a.Main", "a.Model", "a.util.Helper"]);
    let edges: Vec<_> = from_jar.graph.edges().collect();
    assert_eq!(edges, [(0, 1, 1), (0, 2, 1), (2, 1, 1)]);
    assert_eq!(from_jar.package_names(), ["a", "a", "a.util"]);
    assert_eq!(manifest.class_files, 4);
    assert_eq!(manifest.package_count, 2);
}

#[test]
fn corrupt_entry_is_named() {
    let dir = TempDir::new().unwrap();
    let jar = dir.path().join("bad.jar");
    write_jar(&jar, &[("p/Broken.class", vec![0xCA, 0xFE, 0xBA, 0xBE, 0])]);
    let err = extract_snapshot(&jar, "v", &ExtractOptions::default()).unwrap_err();
    assert!(matches!(err, ExtractError::ClassFile { .. }));
    assert!(err.to_string().contains("p/Broken.class"), "{err}");
}

#[test]
fn not_an_archive() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("notes.txt");
    fs::write(&file, "hello").unwrap();
    assert!(matches!(
        extract_snapshot(&file, "v", &ExtractOptions::default()),
        Err(ExtractError::Archive { .. })
    ));
    let empty = dir.path().join("empty.jar");
    write_jar(&empty, &[("README", b"x".to_vec())]);
    assert!(matches!(
        extract_snapshot(&empty, "v", &ExtractOptions::default()),
        Err(ExtractError::ZeroClassFiles)
    ));
}
