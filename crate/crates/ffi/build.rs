//! Generates the C header with cbindgen. The canonical copy lives at
//! `include/covins.h`; the build also drops one in `OUT_DIR` so
//! downstream build systems can pick it up without touching the source
//! tree.

use std::env;
use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("manifest dir"));
    let out_dir = PathBuf::from(env::var("OUT_DIR").expect("out dir"));

    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml"))
        .expect("cbindgen.toml parses");
    let bindings = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("header generation succeeds");

    bindings.write_to_file(out_dir.join("covins.h"));
    // keep the committed copy in sync; skip silently on read-only checkouts
    let _ = std::fs::create_dir_all(crate_dir.join("include"));
    bindings.write_to_file(crate_dir.join("include/covins.h"));
}
