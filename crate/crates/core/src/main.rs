fn main() {
    std::process::exit(semiclassic::cli::run(std::env::args_os()));
}
