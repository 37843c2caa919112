//! Binary entry point: all behavior lives in the library crate so that
//! integration tests can drive the same code path.

fn main() {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    std::process::exit(polyvote_harness::cli::run(args));
}
