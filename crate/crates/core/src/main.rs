fn main() {
    std::process::exit(med_li::cli::main_with_args(std::env::args_os()));
}
