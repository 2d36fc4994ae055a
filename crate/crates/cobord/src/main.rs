fn main() { std::process::exit(cobord::cli::main()); }
