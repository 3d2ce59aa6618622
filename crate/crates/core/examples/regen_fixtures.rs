//! Rewrites `fixtures/*.graph` from the discovery routines.

use ame_core::named::{discover, NAMES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for name in NAMES {
        let g = discover(name)?;
        std::fs::write(dir.join(format!("{name}.graph")), g.to_text())?;
        println!("{name}: {g} {:?}", g.edges());
    }
    Ok(())
}
