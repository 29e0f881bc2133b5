fn main() {
    std::process::exit(knot_surgery::cli::run(std::env::args_os()));
}
