fn main() {
    std::process::exit(ion_mediated::cli::run(std::env::args_os()));
}
