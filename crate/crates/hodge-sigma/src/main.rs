//! Binary entry point; all behaviour lives in the library's `cli` module.

fn main() {
    std::process::exit(hodge_sigma::cli::run());
}
