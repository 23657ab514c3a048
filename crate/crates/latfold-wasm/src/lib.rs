//! wasm-bindgen exports for the browser demo. Each export takes and
//! returns JSON strings; see `demo` for the payload shapes.

mod demo;

use wasm_bindgen::prelude::*;

/// Decode a 5(N-1)-bit string into lattice positions, violations, and
/// angstrom coordinates.
#[wasm_bindgen]
pub fn decode_bits(input: &str) -> String {
    demo::decode_bits_json(input)
}

/// Build the objective for a sequence, run simulated annealing, and
/// return violation-free structures plus the free-energy surface.
#[wasm_bindgen]
pub fn fold(input: &str) -> String {
    demo::fold_json(input)
}

/// The 32-entry turn table behind the encoding.
#[wasm_bindgen]
pub fn turn_table() -> String {
    demo::turn_table_json()
}
