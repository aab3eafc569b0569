fn main() {
    std::process::exit(sl2act::run(std::env::args_os()));
}
