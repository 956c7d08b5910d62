fn main() {
    std::process::exit(compacta::cli::run(std::env::args_os()));
}
