fn main() {
    std::process::exit(sr_stiefel::cli::run());
}
