fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(locfree_cli::run(&argv));
}
