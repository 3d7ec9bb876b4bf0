fn main() {
    std::process::exit(qbool_learn::cli::main_with_args(std::env::args_os()));
}
