fn main() {
    std::process::exit(gelfand_lab::main_with_args(std::env::args_os()));
}
