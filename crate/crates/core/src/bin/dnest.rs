fn main() {
    let mut out = std::io::stdout();
    std::process::exit(dnest::cli::main_with_args(std::env::args_os(), &mut out));
}
