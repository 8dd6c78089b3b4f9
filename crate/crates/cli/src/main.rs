fn main() {
    env_logger::init();
    std::process::exit(subcut_cli::run(std::env::args_os()));
}
