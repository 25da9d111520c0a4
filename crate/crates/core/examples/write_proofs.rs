//! Regenerate the derivation scripts under `proofs/`.
//!
//! cargo run -p qutrit-zx --example write_proofs -- proofs

use std::path::PathBuf;

use qutrit_zx::rewrite::derivations::derivations;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "proofs".into()));
    std::fs::create_dir_all(&dir)?;
    for script in derivations()? {
        let path = dir.join(format!("{}.json", script.name.replace('\'', "prime")));
        std::fs::write(&path, script.to_json() + "\n")?;
        println!("{}", path.display());
    }
    Ok(())
}
