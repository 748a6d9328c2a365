use std::io;
use std::path::PathBuf;

use coint_cli::{main_with, OUTPUT_DIR_VAR};

fn main() {
    let out_dir = std::env::var_os(OUTPUT_DIR_VAR).map(PathBuf::from);
    let code = main_with(
        std::env::args_os(),
        out_dir.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
