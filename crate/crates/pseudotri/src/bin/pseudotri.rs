fn main() {
    pseudotri::cli::init_logging();
    let code = pseudotri::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
