use std::path::PathBuf;

use k3glue_cli::config::schemas;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

/// The shipped schema files match the config types; set K3GLUE_WRITE_SCHEMAS=1 to regenerate.
#[test]
fn shipped_schemas_are_current() {
    let write = std::env::var("K3GLUE_WRITE_SCHEMAS").is_ok_and(|v| v == "1");
    for (name, schema) in schemas() {
        let path = dir().join(format!("{}.schema.json", name));
        let text = serde_json::to_string_pretty(&schema).unwrap() + "\n";
        if write {
            std::fs::write(&path, &text).unwrap();
        }
        let shipped = std::fs::read_to_string(&path).unwrap_or_default();
        assert_eq!(shipped, text, "{} is stale", path.display());
    }
}
