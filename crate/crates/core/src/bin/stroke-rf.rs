fn main() {
    std::process::exit(stroke_rf::experiment::cli_main(std::env::args_os()));
}
