fn main() {
    std::process::exit(weakval::run(std::env::args_os()));
}
