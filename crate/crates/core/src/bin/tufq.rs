fn main() {
    std::process::exit(tufq::harness::cli_main(std::env::args_os()));
}
