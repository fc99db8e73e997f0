fn main() {
    std::process::exit(nivatk::cli::run(std::env::args_os()));
}
