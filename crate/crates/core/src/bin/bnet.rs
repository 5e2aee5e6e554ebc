fn main() {
    std::process::exit(bnet::cli::run(std::env::args_os()));
}
