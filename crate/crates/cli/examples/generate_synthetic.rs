//! Regenerates `data/synthetic_london.csv`:
//!
//!     cargo run -p boxcast --example generate_synthetic > crates/cli/data/synthetic_london.csv

fn main() {
    print!("{}", boxcast::synthetic::london_csv());
}
