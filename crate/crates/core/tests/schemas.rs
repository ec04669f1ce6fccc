//! The published JSON schemas match the types. Run with
//! `UPDATE_SCHEMAS=1` to rewrite them.

use std::collections::BTreeMap;
use std::path::PathBuf;

use intuit::lawdef::LawDef;
use intuit::refuter::{Modulus, Transcript};
use intuit::spread::Point;
use intuit::toyspread::SumDescriptor;
use schemars::schema::RootSchema;
use schemars::schema_for;

fn schemas() -> Vec<(&'static str, RootSchema)> {
    let mut strategy = schema_for!(BTreeMap<String, Modulus>);
    strategy.schema.metadata().description =
        Some("Keys are \"default\", a query tag, or \"tag:level\"; values are moduli.".into());
    vec![
        ("transcript", schema_for!(Transcript)),
        ("structure", schema_for!(SumDescriptor)),
        ("law", schema_for!(LawDef)),
        ("point", schema_for!(Point)),
        ("strategy", strategy),
    ]
}

#[test]
fn published_schemas_are_current() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas");
    let update = std::env::var_os("UPDATE_SCHEMAS").is_some();
    for (name, schema) in schemas() {
        let path = dir.join(format!("{name}.json"));
        let text = serde_json::to_string_pretty(&schema).unwrap() + "\n";
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_default();
        assert_eq!(on_disk, text, "{} is stale", path.display());
    }
}
