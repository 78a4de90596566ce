fn main() {
    std::process::exit(pgrl_cli::dispatch(std::env::args_os()));
}
