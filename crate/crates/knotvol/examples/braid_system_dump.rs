//! Parse a braid word and dump its saddle system as JSON.
//!
//! ```text
//! cargo run --example braid_system_dump -- "1 -2 1 -2"
//! ```

use knotvol::braid::{build_diagram, parse_braid};
use knotvol::glue::assemble;

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "1 -2 1 -2".into());
    let word = match parse_braid(&text) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    let system = assemble(&build_diagram(&word)).expect("diagram systems are consistent");
    println!(
        "{}",
        serde_json::to_string_pretty(&system.to_json()).unwrap()
    );
}
