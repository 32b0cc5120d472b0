//! Regenerates `include/hobody.h` from the extern "C" surface.  If header
//! generation fails (e.g. an offline vendored build with a pinned header),
//! the existing committed header is kept and a warning is emitted.

use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include").join("hobody.h");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        Err(err) => {
            if header.exists() {
                println!("cargo:warning=cbindgen failed ({err}); keeping existing hobody.h");
            } else {
                panic!("cbindgen failed and no committed header exists: {err}");
            }
        }
    }
}
