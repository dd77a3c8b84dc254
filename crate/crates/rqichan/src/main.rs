fn main() {
    std::process::exit(rqichan::main_with(std::env::args_os()));
}
