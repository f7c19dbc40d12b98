fn main() {
    std::process::exit(klorentz::cli::dispatch(std::env::args_os()));
}
