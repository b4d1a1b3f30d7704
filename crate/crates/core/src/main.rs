fn main() {
    std::process::exit(planar_rotor::cli::run(std::env::args_os()));
}
