fn main() { std::process::exit(carlitz_hw::cli::run(std::env::args_os())); }
