fn main() {
    std::process::exit(conesurf::cli::run(std::env::args_os()));
}
