fn main() {
    std::process::exit(bondperc_cli::run(std::env::args_os()));
}
