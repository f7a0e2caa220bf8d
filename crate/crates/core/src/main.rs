fn main() {
    std::process::exit(asdim_lab::cli::main_with(std::env::args_os()));
}
