fn main() {
    std::process::exit(uniq_regions::cli::run());
}
